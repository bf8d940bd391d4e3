use std::io::{BufWriter, Write};
use std::path::Path;

use crate::{Error, Result};

/// Square count matrix, rows = desired class, columns = recognized class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    counts: Vec<Vec<usize>>,
}

impl ConfusionMatrix {
    pub fn new(n_classes: usize) -> Self {
        Self { counts: vec![vec![0; n_classes]; n_classes] }
    }

    pub fn from_counts(counts: Vec<Vec<usize>>) -> Result<Self> {
        let n = counts.len();
        if counts.iter().any(|r| r.len() != n) {
            return Err(Error::Input("confusion matrix must be square".into()));
        }
        Ok(Self { counts })
    }

    pub fn from_predictions(actual: &[usize], predicted: &[usize], n_classes: usize) -> Result<Self> {
        if actual.len() != predicted.len() {
            return Err(Error::Input("actual and predicted lengths differ".into()));
        }
        let mut m = Self::new(n_classes);
        for (&a, &p) in actual.iter().zip(predicted) {
            if a >= n_classes || p >= n_classes {
                return Err(Error::Input(format!("class index out of range: {a} / {p}")));
            }
            m.counts[a][p] += 1;
        }
        Ok(m)
    }

    pub fn n_classes(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, desired: usize, recognized: usize) -> usize {
        self.counts[desired][recognized]
    }

    pub fn row_total(&self, c: usize) -> usize {
        self.counts[c].iter().sum()
    }

    pub fn column_total(&self, c: usize) -> usize {
        self.counts.iter().map(|r| r[c]).sum()
    }

    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }

    pub fn trace(&self) -> usize {
        (0..self.n_classes()).map(|c| self.counts[c][c]).sum()
    }

    /// Correct fraction of class `c`'s samples (row margin).
    pub fn hit_ratio(&self, c: usize) -> f64 {
        ratio(self.counts[c][c], self.row_total(c))
    }

    /// Fraction of the samples recognized as `c` that were something else
    /// (column margin).
    pub fn miss_rate(&self, c: usize) -> f64 {
        let col = self.column_total(c);
        ratio(col - self.counts[c][c], col)
    }

    pub fn overall_accuracy(&self) -> f64 {
        ratio(self.trace(), self.total())
    }

    pub fn average_hit_ratio(&self) -> f64 {
        (0..self.n_classes()).map(|c| self.hit_ratio(c)).sum::<f64>() / self.n_classes() as f64
    }

    pub fn average_miss_rate(&self) -> f64 {
        (0..self.n_classes()).map(|c| self.miss_rate(c)).sum::<f64>() / self.n_classes() as f64
    }

    /// CSV with row totals and hit rates on the right, column totals and
    /// miss rates underneath and the diagonal total in the corner. Classes
    /// appear in `order`.
    pub fn to_csv(&self, order: &[usize], seed_header: Option<u64>) -> String {
        let mut s = String::new();
        if let Some(seed) = seed_header {
            s.push_str(&format!("# seed={seed}\n"));
        }
        let names: Vec<String> = order.iter().map(usize::to_string).collect();
        s.push_str(&format!("desired,{},row_total,hit_rate_pct\n", names.join(",")));
        for &r in order {
            let cells: Vec<String> = order.iter().map(|&c| self.counts[r][c].to_string()).collect();
            s.push_str(&format!("{r},{},{},{:.1}\n", cells.join(","), self.row_total(r), 100.0 * self.hit_ratio(r)));
        }
        let cols: Vec<String> = order.iter().map(|&c| self.column_total(c).to_string()).collect();
        s.push_str(&format!("column_total,{},{},\n", cols.join(","), self.total()));
        let miss: Vec<String> = order.iter().map(|&c| format!("{:.1}", 100.0 * self.miss_rate(c))).collect();
        s.push_str(&format!("miss_rate_pct,{},,{}\n", miss.join(","), self.trace()));
        s
    }

    pub fn write_csv(&self, path: impl AsRef<Path>, order: &[usize], seed_header: Option<u64>) -> Result<()> {
        let mut w = BufWriter::new(std::fs::File::create(path)?);
        w.write_all(self.to_csv(order, seed_header).as_bytes())?;
        w.flush()?;
        Ok(())
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_predictions() {
        let y: Vec<usize> = (0..50).map(|i| i % 10).collect();
        let m = ConfusionMatrix::from_predictions(&y, &y, 10).unwrap();
        assert_eq!(m.overall_accuracy(), 1.0);
        for r in 0..10 {
            for c in 0..10 {
                assert_eq!(m.count(r, c) > 0, r == c);
            }
        }
    }

    #[test]
    fn constant_predictor() {
        let y: Vec<usize> = (0..100).map(|i| i % 10).collect();
        let p = vec![4usize; 100];
        let m = ConfusionMatrix::from_predictions(&y, &p, 10).unwrap();
        assert_eq!(m.overall_accuracy(), 0.1);
        assert_eq!((0..10).filter(|&c| m.column_total(c) > 0).count(), 1);
        assert_eq!(m.column_total(4), 100);
        for c in 0..10 {
            assert_eq!(m.row_total(c), 10);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(ConfusionMatrix::from_predictions(&[0, 1], &[0], 2).is_err());
        assert!(ConfusionMatrix::from_predictions(&[0, 2], &[0, 1], 2).is_err());
        assert!(ConfusionMatrix::from_counts(vec![vec![1, 2], vec![3]]).is_err());
    }

    #[test]
    fn csv_layout() {
        let m = ConfusionMatrix::from_counts(vec![vec![3, 1], vec![0, 4]]).unwrap();
        let csv = m.to_csv(&[0, 1], Some(7));
        let want = "# seed=7\ndesired,0,1,row_total,hit_rate_pct\n0,3,1,4,75.0\n1,0,4,4,100.0\n\
                    column_total,3,5,8,\nmiss_rate_pct,0.0,20.0,,7\n";
        assert_eq!(csv, want);
    }
}
