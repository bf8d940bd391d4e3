//! Signature analysis: spike-train distances, nearest-prototype and SVM
//! classification, confusion matrices.

mod confusion;
mod svm;
mod vp;

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::signatures::{PrototypeSet, Signature};
use crate::{Error, Result, Scalar};

pub use confusion::ConfusionMatrix;
pub use svm::{svm_train, LinearSvm, SvmConfig};
pub use vp::{vp_distance, vp_trains};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VpConfig<T> {
    /// Shift cost per ms.
    pub q: T,
}

impl<T: Scalar> Default for VpConfig<T> {
    fn default() -> Self {
        Self { q: T::of(0.1) }
    }
}

impl<T: Scalar> VpConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.q >= T::zero()) {
            return Err(Error::Config(format!("q = {} must be >= 0", self.q)));
        }
        Ok(())
    }
}

pub const NET_INPUT_BIN_MS: f64 = 5.0;

/// Mean net input per output unit per 5 ms bin, unit-major.
#[derive(Debug, Clone, PartialEq)]
pub struct NetInputFeatures<T> {
    pub n_units: usize,
    pub n_bins: usize,
    pub values: Vec<T>,
}

impl<T: Scalar> NetInputFeatures<T> {
    pub fn unit(&self, u: usize) -> &[T] {
        &self.values[u * self.n_bins..(u + 1) * self.n_bins]
    }
}

pub fn net_input_features<T: Scalar>(sig: &Signature<T>) -> Result<NetInputFeatures<T>> {
    if sig.net_input.is_empty() || sig.net_input.iter().any(Vec::is_empty) {
        return Err(Error::Input(format!("signature {} has no net-input trace", sig.id)));
    }
    let per_bin = (T::of(NET_INPUT_BIN_MS) / sig.dt).round().to_usize().unwrap_or(0);
    let len = sig.net_input[0].len();
    if per_bin == 0 || !len.is_multiple_of(per_bin) || sig.net_input.iter().any(|t| t.len() != len) {
        return Err(Error::Input(format!(
            "net-input trace of {} steps cannot be split into 5 ms bins at dt = {}",
            len, sig.dt
        )));
    }
    let n_bins = len / per_bin;
    let values = sig
        .net_input
        .iter()
        .flat_map(|trace| trace.chunks(per_bin).map(|c| c.iter().copied().sum::<T>() / T::of_usize(per_bin)))
        .collect::<Vec<T>>();
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::Numeric(format!("non-finite net input {bad} in {}", sig.id)));
    }
    Ok(NetInputFeatures { n_units: sig.net_input.len(), n_bins, values })
}

/// How net-input features feed the SVM.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SvmLayout {
    /// One multiclass model over all units' bins.
    #[default]
    Joint,
    /// Class `c` is scored by a binary model that sees only unit `c`.
    PerUnit,
}

/// Net-input SVM in either layout.
#[derive(Debug, Clone, PartialEq)]
pub enum NetInputSvm<T> {
    Joint(LinearSvm<T>),
    PerUnit(Vec<LinearSvm<T>>),
}

impl<T: Scalar> NetInputSvm<T> {
    pub fn predict(&self, x: &NetInputFeatures<T>) -> usize {
        match self {
            Self::Joint(m) => m.predict(&x.values),
            Self::PerUnit(models) => {
                let scores: Vec<T> = models.iter().enumerate().map(|(c, m)| m.decision(x.unit(c))[1]).collect();
                svm::argmax(&scores)
            }
        }
    }
}

pub fn train_net_input_svm<T: Scalar>(
    x: &[NetInputFeatures<T>],
    y: &[usize],
    n_classes: usize,
    cfg: &SvmConfig<T>,
    layout: SvmLayout,
) -> Result<NetInputSvm<T>> {
    match layout {
        SvmLayout::Joint => {
            let rows: Vec<Vec<T>> = x.iter().map(|f| f.values.clone()).collect();
            Ok(NetInputSvm::Joint(svm_train(&rows, y, n_classes, cfg)?))
        }
        SvmLayout::PerUnit => {
            if let Some(f) = x.iter().find(|f| f.n_units < n_classes) {
                return Err(Error::Input(format!("{} output units for {n_classes} classes", f.n_units)));
            }
            let models = (0..n_classes)
                .map(|c| {
                    let rows: Vec<Vec<T>> = x.iter().map(|f| f.unit(c).to_vec()).collect();
                    let bin: Vec<usize> = y.iter().map(|&l| usize::from(l == c)).collect();
                    svm_train(&rows, &bin, 2, cfg)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(NetInputSvm::PerUnit(models))
        }
    }
}

pub fn evaluate<T: Scalar>(
    model: &NetInputSvm<T>,
    x: &[NetInputFeatures<T>],
    y: &[usize],
    n_classes: usize,
) -> Result<ConfusionMatrix> {
    let predicted: Vec<usize> = x.par_iter().map(|f| model.predict(f)).collect();
    ConfusionMatrix::from_predictions(y, &predicted, n_classes)
}

/// Distance of a signature to the prototype of class `c`, on output unit `c`.
pub fn class_distance<T: Scalar>(sig: &Signature<T>, proto: &Signature<T>, class: usize, q: T) -> T {
    vp_trains(&sig.trains[class], &proto.trains[class], q)
}

/// Sum of unit-wise distances between two signatures.
pub fn signature_distance<T: Scalar>(a: &Signature<T>, b: &Signature<T>, q: T) -> T {
    a.trains.iter().zip(&b.trains).map(|(x, y)| vp_trains(x, y, q)).sum()
}

/// Nearest prototype by [`class_distance`]; ties go to the lowest class.
pub fn prototype_classify<T: Scalar>(sig: &Signature<T>, protos: &PrototypeSet<T>, q: T) -> usize {
    let d: Vec<T> = (0..protos.len()).map(|c| class_distance(sig, protos.get(c), c, q)).collect();
    let mut best = 0;
    for (c, &v) in d.iter().enumerate() {
        if v < d[best] {
            best = c;
        }
    }
    best
}

/// `[prototype][column]` distances, one column per test signature.
pub fn distance_matrix<T: Scalar>(protos: &PrototypeSet<T>, tests: &[&Signature<T>], q: T) -> Vec<Vec<T>> {
    (0..protos.len())
        .into_par_iter()
        .map(|c| tests.iter().map(|s| class_distance(s, protos.get(c), c, q)).collect())
        .collect()
}

/// Mean [`class_distance`] from every labelled signature to every prototype,
/// `[prototype][test class]`.
pub fn mean_class_distances<T: Scalar>(protos: &PrototypeSet<T>, tests: &[Signature<T>], q: T) -> Vec<Vec<T>> {
    let n = protos.len();
    (0..n)
        .into_par_iter()
        .map(|p| {
            let mut sum = vec![T::zero(); n];
            let mut count = vec![0usize; n];
            for s in tests {
                if let Some(l) = s.label.map(usize::from).filter(|&l| l < n) {
                    sum[l] += class_distance(s, protos.get(p), p, q);
                    count[l] += 1;
                }
            }
            sum.iter().zip(&count).map(|(&s, &k)| if k == 0 { T::nan() } else { s / T::of_usize(k) }).collect()
        })
        .collect()
}

/// Mean of diagonal and off-diagonal entries of a square distance table.
pub fn within_between<T: Scalar>(table: &[Vec<T>]) -> (T, T) {
    let (mut w, mut nw, mut b, mut nb) = (T::zero(), 0, T::zero(), 0);
    for (i, row) in table.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v.is_nan() {
                continue;
            }
            if i == j {
                w += v;
                nw += 1;
            } else {
                b += v;
                nb += 1;
            }
        }
    }
    (w / T::of_usize(nw.max(1)), b / T::of_usize(nb.max(1)))
}

/// Distance table as CSV: prototype rows, one column per header entry.
pub fn distance_csv<T: Scalar>(table: &[Vec<T>], columns: &[String], seed: Option<u64>) -> String {
    let mut out = String::new();
    if let Some(s) = seed {
        let _ = writeln!(out, "# seed={s}");
    }
    out.push_str("prototype");
    for c in columns {
        let _ = write!(out, ",{c}");
    }
    out.push('\n');
    for (p, row) in table.iter().enumerate() {
        let _ = write!(out, "{p}");
        for v in row {
            let _ = write!(out, ",{v:.4}");
        }
        out.push('\n');
    }
    out
}

pub fn write_distance_csv<T: Scalar>(path: impl AsRef<Path>, table: &[Vec<T>], columns: &[String], seed: Option<u64>) -> Result<()> {
    std::fs::write(path, distance_csv(table, columns, seed))?;
    Ok(())
}
