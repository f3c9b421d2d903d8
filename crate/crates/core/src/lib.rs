//! Tsallis q-exponential fits of citation-count histograms.
//!
//! Each entity's histogram `N(c)` is fitted to
//! `N(c) = N(2) e_q^{-(c-2)/T}`; the effective temperature `T` then serves
//! as an impact index for ranking entities.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod fitter;
pub mod histogram;
pub mod plot;
pub mod qmath;
pub mod ranking;
pub mod report;
pub mod synth;

pub use error::{Error, Result};
pub use fitter::{fit, linearize, linearize_points, model_eval, refit_t_fixed_q, FitConfig, FitResult, QGrid};
pub use histogram::{aggregate, fit_view, load_histogram, summarize, CitationHistogram, SummaryStats};
pub use qmath::{entropy_composition, q_exp, q_log, tsallis_entropy, ProbabilityVector};
pub use ranking::{quantity_vs_impact, rank_by_temperature, RankingTable};
pub use synth::{generate_deterministic, generate_sampled, sample_citation, SyntheticSpec};
