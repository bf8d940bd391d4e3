use rayon::prelude::*;

use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmConfig<T> {
    /// Trade-off in `½‖w‖² + C · mean hinge`.
    pub c: T,
    pub iterations: usize,
    /// Standardize every dimension with training-set mean and deviation.
    pub standardize: bool,
}

impl<T: Scalar> Default for SvmConfig<T> {
    fn default() -> Self {
        Self { c: T::one(), iterations: 1000, standardize: true }
    }
}

/// One-vs-rest linear classifier; class scores are `w_c · x + b_c`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSvm<T> {
    pub weights: Vec<Vec<T>>,
    pub bias: Vec<T>,
    mean: Vec<T>,
    scale: Vec<T>,
}

impl<T: Scalar> LinearSvm<T> {
    fn transform(&self, x: &[T]) -> Vec<T> {
        x.iter().zip(&self.mean).zip(&self.scale).map(|((&v, &m), &s)| (v - m) / s).collect()
    }

    pub fn n_classes(&self) -> usize {
        self.weights.len()
    }

    pub fn decision(&self, x: &[T]) -> Vec<T> {
        let z = self.transform(x);
        self.weights.iter().zip(&self.bias).map(|(w, &b)| dot(w, &z) + b).collect()
    }

    /// Highest-scoring class; ties go to the lowest index.
    pub fn predict(&self, x: &[T]) -> usize {
        argmax(&self.decision(x))
    }
}

pub(crate) fn argmax<T: Scalar>(v: &[T]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

/// Fits one binary hinge-loss classifier per class against the rest.
///
/// Each binary problem minimises `(λ/2)‖w‖² + mean_i max(0, 1 - y_i (w·x_i + b))`
/// with `λ = 1/C` by full-batch subgradient descent: weight step `1/(λ t)`,
/// projection onto `‖w‖ ≤ 1/√λ`, unregularized bias step `1/t`, and the
/// returned model averages the iterates of the second half. The procedure
/// is deterministic; duplicating the training set leaves it unchanged.
pub fn svm_train<T: Scalar>(x: &[Vec<T>], y: &[usize], n_classes: usize, cfg: &SvmConfig<T>) -> Result<LinearSvm<T>> {
    if x.is_empty() || x.len() != y.len() {
        return Err(Error::Input(format!("{} samples with {} labels", x.len(), y.len())));
    }
    let dim = x[0].len();
    if x.iter().any(|r| r.len() != dim) {
        return Err(Error::Input("ragged feature vectors".into()));
    }
    if let Some(&bad) = y.iter().find(|&&c| c >= n_classes) {
        return Err(Error::Input(format!("label {bad} >= {n_classes}")));
    }
    let mut present = vec![false; n_classes];
    y.iter().for_each(|&c| present[c] = true);
    if present.iter().filter(|&&p| p).count() < 2 {
        return Err(Error::Input("SVM training needs at least two classes".into()));
    }
    if !(cfg.c > T::zero()) || cfg.iterations == 0 {
        return Err(Error::Config("SVM needs C > 0 and at least one iteration".into()));
    }

    let n = T::of_usize(x.len());
    let (mean, scale) = if cfg.standardize {
        let mean: Vec<T> = (0..dim).map(|d| x.iter().map(|r| r[d]).sum::<T>() / n).collect();
        let scale = (0..dim)
            .map(|d| {
                let var = x.iter().map(|r| (r[d] - mean[d]).powi(2)).sum::<T>() / n;
                if var > T::zero() { var.sqrt() } else { T::one() }
            })
            .collect();
        (mean, scale)
    } else {
        (vec![T::zero(); dim], vec![T::one(); dim])
    };
    let xs: Vec<Vec<T>> = x
        .iter()
        .map(|r| r.iter().zip(&mean).zip(&scale).map(|((&v, &m), &s)| (v - m) / s).collect())
        .collect();

    let lambda = T::one() / cfg.c;
    let radius = T::one() / lambda.sqrt();
    let fits: Vec<(Vec<T>, T)> = (0..n_classes)
        .into_par_iter()
        .map(|class| {
            let targets: Vec<T> = y.iter().map(|&c| if c == class { T::one() } else { -T::one() }).collect();
            let mut w = vec![T::zero(); dim];
            let mut b = T::zero();
            let mut w_avg = vec![T::zero(); dim];
            let mut b_avg = T::zero();
            let mut n_avg = 0usize;
            let mut grad = vec![T::zero(); dim];
            for t in 1..=cfg.iterations {
                grad.iter_mut().for_each(|g| *g = T::zero());
                let mut grad_b = T::zero();
                for (xi, &yi) in xs.iter().zip(&targets) {
                    if yi * (dot(&w, xi) + b) < T::one() {
                        for (g, &v) in grad.iter_mut().zip(xi) {
                            *g += yi * v;
                        }
                        grad_b += yi;
                    }
                }
                let eta = T::one() / (lambda * T::of_usize(t));
                for (wd, &g) in w.iter_mut().zip(&grad) {
                    *wd -= eta * (lambda * *wd - g / n);
                }
                b += grad_b / n / T::of_usize(t);
                let norm = dot(&w, &w).sqrt();
                if norm > radius {
                    let f = radius / norm;
                    w.iter_mut().for_each(|v| *v *= f);
                }
                if 2 * t > cfg.iterations {
                    w_avg.iter_mut().zip(&w).for_each(|(a, &v)| *a += v);
                    b_avg += b;
                    n_avg += 1;
                }
            }
            let k = T::of_usize(n_avg);
            (w_avg.into_iter().map(|v| v / k).collect(), b_avg / k)
        })
        .collect();
    let (weights, bias) = fits.into_iter().unzip();
    Ok(LinearSvm { weights, bias, mean, scale })
}
