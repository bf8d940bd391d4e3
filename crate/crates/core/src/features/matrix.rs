use crate::{Error, Result, Scalar};

/// `rows × cols` grid of band energies, one row per frame (row-major).
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix<T> {
    values: Vec<T>,
    rows: usize,
    cols: usize,
    pub id: String,
    pub label: Option<u8>,
}

impl<T: Scalar> FeatureMatrix<T> {
    pub fn new(values: Vec<T>, rows: usize, cols: usize, id: String, label: Option<u8>) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::Input(format!("{} values for a {rows}x{cols} feature matrix", values.len())));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!("feature matrix {id} has non-finite entries")));
        }
        Ok(Self { values, rows, cols, id, label })
    }

    pub fn filled(value: T, rows: usize, cols: usize) -> Self {
        Self { values: vec![value; rows * cols], rows, cols, id: String::new(), label: None }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> T {
        self.values[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.values[r * self.cols..(r + 1) * self.cols]
    }

    /// All entries, frame-major.
    pub fn as_slice(&self) -> &[T] {
        &self.values
    }

    pub fn frobenius_distance(&self, other: &Self) -> T {
        self.values.iter().zip(&other.values).map(|(&a, &b)| (a - b) * (a - b)).sum::<T>().sqrt()
    }

    pub fn min_max(&self) -> (T, T) {
        self.values.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| (lo.min(v), hi.max(v)))
    }

    /// Element-wise mean of equally shaped matrices.
    pub fn mean<'a>(items: impl IntoIterator<Item = &'a Self>) -> Result<Self>
    where
        T: 'a,
    {
        let mut it = items.into_iter();
        let first = it.next().ok_or_else(|| Error::Input("mean of zero feature matrices".into()))?;
        let mut acc = first.values.clone();
        let mut n = 1usize;
        for m in it {
            if m.shape() != first.shape() {
                return Err(Error::Input(format!("shape {:?} vs {:?}", m.shape(), first.shape())));
            }
            for (a, &v) in acc.iter_mut().zip(&m.values) {
                *a += v;
            }
            n += 1;
        }
        let n = T::of_usize(n);
        acc.iter_mut().for_each(|a| *a /= n);
        Ok(Self { values: acc, rows: first.rows, cols: first.cols, id: String::from("mean"), label: first.label })
    }
}
