use crate::izhikevich::SpikeTrain;
use crate::synapse::SynapseMatrix;
use crate::{Error, Result, Scalar};

/// Fixed prefactor of every weight change.
pub const STDP_SCALE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StdpConfig<T> {
    /// Potentiation amplitude, > 0.
    pub a: T,
    /// Depression amplitude, < 0.
    pub b: T,
    pub tau_plus: T,
    pub tau_minus: T,
    pub pairing: Pairing,
}

/// Which pre/post spike pairs contribute to a presentation's update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pairing {
    /// Each post spike with the latest pre spike at or before it; each pre
    /// spike with the latest post spike before it.
    #[default]
    Nearest,
    /// As `Nearest`, but only the first pre spike after a post spike pairs
    /// with it, so a post spike takes part in at most one pairing per side.
    Restricted,
}

impl<T: Scalar> Default for StdpConfig<T> {
    fn default() -> Self {
        Self { a: T::one(), b: -T::one(), tau_plus: T::of(10.0), tau_minus: T::of(10.0), pairing: Pairing::default() }
    }
}

impl<T: Scalar> StdpConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.a > T::zero() && self.b < T::zero() && self.tau_plus > T::zero() && self.tau_minus > T::zero()) {
            return Err(Error::Config("STDP needs A > 0, B < 0, tau+ > 0, tau- > 0".into()));
        }
        Ok(())
    }
}

/// Hebbian for the teacher's target unit, anti-Hebbian (cases swapped) for
/// every other unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Hebbian,
    AntiHebbian,
}

/// Weight change for one pre/post pairing, `dt_pair = t_post - t_pre` (ms).
///
/// Hebbian: `dt >= 0` gives `0.01 A exp(-|dt|/τ+)`, `dt < 0` gives
/// `0.01 B exp(-|dt|/τ-)`. Anti-Hebbian exchanges the two case bodies.
pub fn stdp_dw<T: Scalar>(dt_pair: T, cfg: &StdpConfig<T>, regime: Regime) -> T {
    let scale = T::of(STDP_SCALE);
    let case1 = || scale * cfg.a * (-dt_pair.abs() / cfg.tau_plus).exp();
    let case2 = || scale * cfg.b * (-dt_pair.abs() / cfg.tau_minus).exp();
    match (regime, dt_pair >= T::zero()) {
        (Regime::Hebbian, true) | (Regime::AntiHebbian, false) => case1(),
        (Regime::Hebbian, false) | (Regime::AntiHebbian, true) => case2(),
    }
}

/// Multiplicative factor `Π (1 + Δw)` over the pairings of one synapse.
pub(crate) fn pairing_factor<T: Scalar>(pre: &[T], post: &[T], cfg: &StdpConfig<T>, regime: Regime) -> T {
    let mut factor = T::one();
    let mut i = 0;
    for &q in post {
        while i < pre.len() && pre[i] <= q {
            i += 1;
        }
        if i > 0 {
            factor *= T::one() + stdp_dw(q - pre[i - 1], cfg, regime);
        }
    }
    let mut j = 0;
    let mut last_paired = usize::MAX;
    for &p in pre {
        while j < post.len() && post[j] < p {
            j += 1;
        }
        if j > 0 && (cfg.pairing == Pairing::Nearest || last_paired != j - 1) {
            factor *= T::one() + stdp_dw(post[j - 1] - p, cfg, regime);
            last_paired = j - 1;
        }
    }
    factor
}

/// Applies one presentation's STDP to every synapse: `K <- K (1 + Δw)` per
/// pairing, clamped at zero. Units that never fired are left untouched.
pub fn apply_stdp<T: Scalar>(
    weights: &mut SynapseMatrix<T>,
    pre: &[SpikeTrain<T>],
    post: &[SpikeTrain<T>],
    teacher: usize,
    cfg: &StdpConfig<T>,
) -> Result<()> {
    if pre.len() != weights.rows() || post.len() != weights.cols() {
        return Err(Error::Input(format!(
            "{} pre / {} post trains for a {}x{} synapse matrix",
            pre.len(),
            post.len(),
            weights.rows(),
            weights.cols()
        )));
    }
    if teacher >= weights.cols() {
        return Err(Error::Input(format!("teacher target {teacher} out of range")));
    }
    for (j, post_j) in post.iter().enumerate() {
        if post_j.is_empty() {
            continue;
        }
        let regime = if j == teacher { Regime::Hebbian } else { Regime::AntiHebbian };
        for (k, w) in weights.column_mut(j).iter_mut().enumerate() {
            let f = pairing_factor(pre[k].times(), post_j.times(), cfg, regime);
            *w = (*w * f).max(T::zero());
        }
    }
    Ok(())
}
