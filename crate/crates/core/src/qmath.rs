//! Tsallis q-deformed exponential and logarithm, the nonadditive entropy
//! `S_q` and its composition rule for independent systems.
//!
//! Every function accepts any real `q`. Within [`Q_LIMIT_EPSILON`] of 1
//! the exact `exp`/`ln` branch is taken instead of the deformed formula.

use crate::error::{Error, Result};

/// Distance from `q = 1` below which the Boltzmann-Gibbs branch is used.
pub const Q_LIMIT_EPSILON: f64 = 1e-9;

const SUM_TOLERANCE: f64 = 1e-12;

#[inline]
fn is_classical(q: f64) -> bool {
    (q - 1.0).abs() < Q_LIMIT_EPSILON
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_nan() {
        return Err(Error::domain(format!("{name} is NaN")));
    }
    Ok(())
}

/// Natural log of `e_q^x`, computed as `ln(1 + (1-q)x) / (1-q)`.
///
/// Returns `-inf` for the `q < 1` cutoff region, where `e_q^x = 0`.
pub fn ln_q_exp(x: f64, q: f64) -> Result<f64> {
    check_finite("x", x)?;
    check_finite("q", q)?;
    if is_classical(q) {
        return Ok(x);
    }
    let one_minus_q = 1.0 - q;
    let shifted = one_minus_q * x;
    if shifted > -1.0 {
        Ok(shifted.ln_1p() / one_minus_q)
    } else if q < 1.0 {
        Ok(f64::NEG_INFINITY)
    } else {
        Err(Error::domain(format!(
            "q_exp diverges: 1 + (1 - q)x = {} <= 0 for q = {q}, x = {x}",
            1.0 + shifted
        )))
    }
}

/// The q-exponential `e_q^x = [1 + (1-q)x]^{1/(1-q)}`.
///
/// For `q < 1` and a non-positive base the conventional cutoff value 0 is
/// returned. For `q > 1` a non-positive base is a domain error.
pub fn q_exp(x: f64, q: f64) -> Result<f64> {
    if is_classical(q) {
        check_finite("x", x)?;
        return Ok(x.exp());
    }
    ln_q_exp(x, q).map(f64::exp)
}

/// The q-logarithm `ln_q(y) = (y^{1-q} - 1) / (1-q)`, inverse of [`q_exp`].
pub fn q_log(y: f64, q: f64) -> Result<f64> {
    check_finite("y", y)?;
    check_finite("q", q)?;
    if y <= 0.0 {
        return Err(Error::domain(format!("q_log needs y > 0, got {y}")));
    }
    if is_classical(q) {
        return Ok(y.ln());
    }
    let one_minus_q = 1.0 - q;
    Ok((one_minus_q * y.ln()).exp_m1() / one_minus_q)
}

/// A discrete probability distribution over `W` configurations.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::domain("probability vector needs W >= 1 entries"));
        }
        if let Some(bad) = p.iter().find(|v| !v.is_finite() || **v < 0.0 || **v > 1.0) {
            return Err(Error::domain(format!("probability {bad} outside [0, 1]")));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE * p.len().max(1) as f64 {
            return Err(Error::domain(format!("probabilities sum to {sum}, not 1")));
        }
        Ok(Self(p))
    }

    /// Equiprobable distribution `p_i = 1/W`.
    pub fn uniform(w: usize) -> Result<Self> {
        if w == 0 {
            return Err(Error::domain("probability vector needs W >= 1 entries"));
        }
        Ok(Self(vec![1.0 / w as f64; w]))
    }

    /// Joint distribution of two independent systems (outer product).
    pub fn joint(&self, other: &Self) -> Self {
        let p = self.0.iter().flat_map(|a| other.0.iter().map(move |b| a * b)).collect();
        Self(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Tsallis entropy `S_q = k (1 - sum p_i^q) / (q - 1)`.
///
/// Exact-zero probabilities are skipped; with `q <= 0` they make the sum
/// undefined and are rejected.
pub fn tsallis_entropy(p: &ProbabilityVector, q: f64, k: f64) -> Result<f64> {
    check_finite("q", q)?;
    if !(k > 0.0) {
        return Err(Error::domain(format!("entropy constant k must be > 0, got {k}")));
    }
    let nonzero = p.as_slice().iter().copied().filter(|&v| v > 0.0);
    if is_classical(q) {
        let h: f64 = nonzero.map(|v| v * v.ln()).sum();
        return Ok(-k * h);
    }
    if q <= 0.0 && p.as_slice().contains(&0.0) {
        return Err(Error::domain(format!(
            "zero probability with q = {q} <= 0 is undefined"
        )));
    }
    let sum_pq: f64 = nonzero.map(|v| v.powf(q)).sum();
    Ok(k * (1.0 - sum_pq) / (q - 1.0))
}

/// Entropy of the union of two independent systems from their parts:
/// `S/k = S_a/k + S_b/k + (1-q)(S_a/k)(S_b/k)`.
pub fn entropy_composition(sa: f64, sb: f64, q: f64, k: f64) -> Result<f64> {
    check_finite("q", q)?;
    if !(k > 0.0) {
        return Err(Error::domain(format!("entropy constant k must be > 0, got {k}")));
    }
    let (a, b) = (sa / k, sb / k);
    Ok(k * (a + b + (1.0 - q) * a * b))
}

/// Entropy at equiprobability, `k (W^{1-q} - 1) / (1-q)`; `k ln W` at q = 1.
pub fn max_entropy(w: usize, q: f64, k: f64) -> Result<f64> {
    if w == 0 {
        return Err(Error::domain("W must be >= 1"));
    }
    q_log(w as f64, q).map(|v| k * v)
}
