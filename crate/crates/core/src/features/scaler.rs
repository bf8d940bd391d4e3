use super::FeatureMatrix;
use crate::{Error, Result, Scalar};

/// Affine map from the training corpus's feature range onto injected
/// currents `[i_min, i_max]`. Values outside the fitted range are clamped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurrentScaler<T> {
    pub i_min: T,
    pub i_max: T,
    pub feature_min: T,
    pub feature_max: T,
}

impl<T: Scalar> CurrentScaler<T> {
    pub const DEFAULT_I_MIN: f64 = 0.0;
    pub const DEFAULT_I_MAX: f64 = 250.0;

    pub fn new(i_min: T, i_max: T, feature_min: T, feature_max: T) -> Result<Self> {
        if !(i_min < i_max) {
            return Err(Error::Config(format!("current range [{i_min}, {i_max}] is empty")));
        }
        if !(feature_min < feature_max) {
            return Err(Error::Degenerate(format!("feature range [{feature_min}, {feature_max}] is empty")));
        }
        Ok(Self { i_min, i_max, feature_min, feature_max })
    }

    /// Fits the feature range over a training split.
    pub fn fit<'a>(train: impl IntoIterator<Item = &'a FeatureMatrix<T>>, i_min: T, i_max: T) -> Result<Self>
    where
        T: 'a,
    {
        let (lo, hi) = train
            .into_iter()
            .map(FeatureMatrix::min_max)
            .fold((T::infinity(), T::neg_infinity()), |(lo, hi), (a, b)| (lo.min(a), hi.max(b)));
        if !lo.is_finite() {
            return Err(Error::Degenerate("cannot fit a current scaler on zero samples".into()));
        }
        Self::new(i_min, i_max, lo, hi)
    }

    pub fn fit_default<'a>(train: impl IntoIterator<Item = &'a FeatureMatrix<T>>) -> Result<Self>
    where
        T: 'a,
    {
        Self::fit(train, T::of(Self::DEFAULT_I_MIN), T::of(Self::DEFAULT_I_MAX))
    }

    pub fn current(&self, feature: T) -> T {
        let x = ((feature - self.feature_min) / (self.feature_max - self.feature_min)).max(T::zero()).min(T::one());
        self.i_min + x * (self.i_max - self.i_min)
    }

    /// Injected current for every entry, frame-major like the matrix.
    pub fn scale_to_current(&self, f: &FeatureMatrix<T>) -> Vec<T> {
        f.as_slice().iter().map(|&v| self.current(v)).collect()
    }
}
