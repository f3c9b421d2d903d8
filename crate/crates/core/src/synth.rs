//! Synthetic citation histograms drawn from a known q-exponential law.
//!
//! Deterministic mode evaluates the model and rounds; sampled mode draws
//! from the continuous normalized density on `[0, inf)`,
//!
//! ```text
//! f(x) = (2-q)/T * [1 + (q-1) x / T]^{-1/(q-1)},
//! F(x) = 1 - [1 + (q-1) x / T]^{-(2-q)/(q-1)},
//! ```
//!
//! by inversion, then shifts by the anchor and floors to integers.

use std::collections::BTreeMap;

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitter::model_eval;
use crate::histogram::CitationHistogram;

/// Draws per RNG stream; a chunk's stream id is its index.
const CHUNK: u64 = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Deterministic,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    #[serde(default = "default_entity")]
    pub entity: String,
    pub q_true: f64,
    #[serde(rename = "T_true")]
    pub t_true: f64,
    pub anchor_value: u64,
    #[serde(default = "default_anchor_c")]
    pub anchor_c: u64,
    pub c_max: u64,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub n_samples: u64,
    #[serde(default)]
    pub seed: u64,
}

fn default_entity() -> String {
    "synthetic".to_string()
}

fn default_anchor_c() -> u64 {
    2
}

impl SyntheticSpec {
    pub fn deterministic(entity: impl Into<String>, q: f64, t: f64, anchor_value: u64, c_max: u64) -> Self {
        Self {
            entity: entity.into(),
            q_true: q,
            t_true: t,
            anchor_value,
            anchor_c: 2,
            c_max,
            mode: Mode::Deterministic,
            n_samples: 0,
            seed: 0,
        }
    }

    pub fn sampled(entity: impl Into<String>, q: f64, t: f64, n_samples: u64, seed: u64) -> Self {
        Self {
            entity: entity.into(),
            q_true: q,
            t_true: t,
            anchor_value: 1,
            anchor_c: 2,
            c_max: u64::MAX,
            mode: Mode::Sampled,
            n_samples,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSpec(m));
        if !(self.q_true > 1.0 && self.q_true < 2.0) {
            return bad(format!("q_true = {} must lie in (1, 2)", self.q_true));
        }
        if !(self.t_true > 0.0 && self.t_true.is_finite()) {
            return bad(format!("T_true = {} must be positive", self.t_true));
        }
        if self.anchor_value == 0 {
            return bad("anchor_value must be > 0".into());
        }
        if self.anchor_c < 1 {
            return bad("anchor_c must be >= 1".into());
        }
        if self.c_max <= self.anchor_c.saturating_add(10) {
            return bad(format!("c_max = {} must exceed anchor_c + 10", self.c_max));
        }
        if self.mode == Mode::Sampled && self.n_samples == 0 {
            return bad("sampled mode needs n_samples > 0".into());
        }
        if self.entity.is_empty() {
            return bad("entity must not be empty".into());
        }
        Ok(())
    }
}

/// Histogram in the spec's mode.
pub fn generate(spec: &SyntheticSpec) -> Result<CitationHistogram> {
    match spec.mode {
        Mode::Deterministic => generate_deterministic(spec),
        Mode::Sampled => generate_sampled(spec),
    }
}

/// `N(c) = round(anchor_value * e_q^{-(c - anchor_c)/T})` for
/// `c = anchor_c..=c_max`; bins that round to zero are omitted.
pub fn generate_deterministic(spec: &SyntheticSpec) -> Result<CitationHistogram> {
    spec.validate()?;
    let mut counts = BTreeMap::new();
    for c in spec.anchor_c..=spec.c_max {
        let v = model_eval(c, spec.q_true, spec.t_true, spec.anchor_c, spec.anchor_value as f64)?.round();
        if v < 1.0 {
            // monotone model: everything further out rounds to zero too
            break;
        }
        counts.insert(c, v as u64);
    }
    Ok(CitationHistogram::new(spec.entity.clone(), counts).with_note(format!(
        "deterministic q={} T={} anchor N({})={}",
        spec.q_true, spec.t_true, spec.anchor_c, spec.anchor_value
    )))
}

fn check_sampler_params(q: f64, t: f64) -> Result<()> {
    if !(q > 1.0 && q < 2.0) {
        return Err(Error::domain(format!("sampling needs q in (1, 2), got {q}")));
    }
    if !(t > 0.0) {
        return Err(Error::domain(format!("sampling needs T > 0, got {t}")));
    }
    Ok(())
}

/// Quantile function: `c = T/(q-1) * [(1-u)^{-(q-1)/(2-q)} - 1]`.
pub fn sample_citation(u: f64, q: f64, t: f64) -> Result<f64> {
    check_sampler_params(q, t)?;
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::domain(format!("u = {u} outside (0, 1)")));
    }
    let exponent = -(q - 1.0) / (2.0 - q);
    Ok(t / (q - 1.0) * (exponent * (-u).ln_1p()).exp_m1())
}

/// Analytic CDF of the continuous density the sampler inverts.
pub fn sampler_cdf(x: f64, q: f64, t: f64) -> Result<f64> {
    check_sampler_params(q, t)?;
    if x <= 0.0 {
        return Ok(0.0);
    }
    let exponent = -(2.0 - q) / (q - 1.0);
    Ok(-(exponent * ((q - 1.0) * x / t).ln_1p()).exp_m1())
}

/// Draws `n_samples` values, shifts by `anchor_c`, floors and histograms.
///
/// Draw `i` comes from ChaCha8 stream `i / 2^16` seeded by `seed`, so the
/// output does not depend on how chunks are scheduled across threads.
pub fn generate_sampled(spec: &SyntheticSpec) -> Result<CitationHistogram> {
    spec.validate()?;
    let (q, t, anchor_c) = (spec.q_true, spec.t_true, spec.anchor_c);
    let n_chunks = spec.n_samples.div_ceil(CHUNK);
    let partials: Vec<BTreeMap<u64, u64>> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            rng.set_stream(chunk);
            let draws = CHUNK.min(spec.n_samples - chunk * CHUNK);
            let mut local = BTreeMap::new();
            for _ in 0..draws {
                let u: f64 = rng.sample(Open01);
                let x = sample_citation(u, q, t).expect("parameters validated");
                // float-to-int casts saturate
                let c = anchor_c.saturating_add(x.floor() as u64);
                *local.entry(c).or_insert(0) += 1;
            }
            local
        })
        .collect();

    let mut counts = BTreeMap::new();
    for part in partials {
        for (c, n) in part {
            *counts.entry(c).or_insert(0) += n;
        }
    }
    Ok(CitationHistogram::new(spec.entity.clone(), counts)
        .with_note(format!("sampled q={q} T={t} n={} seed={}", spec.n_samples, spec.seed)))
}
