//! Two-stage q-exponential fit of a citation histogram.
//!
//! The model is `N(c) = N(a) * e_q^{-(c - a)/T}` with the anchor `a`
//! (default 2) pinned to the observed count. Stage one scans a fixed grid
//! of `q` using only the first decades of `c` above the anchor, optimizing
//! `T` for every candidate. Stage two keeps the winning `q` and refits `T`
//! on every point of the fit view. Residuals are taken on `ln N`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::histogram::{fit_view, CitationHistogram};
use crate::qmath;

/// Lower end of the `T` search bracket.
pub const T_MIN: f64 = 1e-3;
/// Relative tolerance on the minimizing `T`.
pub const T_REL_TOL: f64 = 1e-6;
const T_SCAN_POINTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QGrid {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Default for QGrid {
    fn default() -> Self {
        Self {
            min: 1.20,
            max: 1.50,
            step: 0.001,
        }
    }
}

impl QGrid {
    /// Grid values `min, min + step, ..., max`, ascending.
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.max - self.min) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.min + i as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FitConfig {
    pub anchor_c: u64,
    pub q_grid: QGrid,
    pub q_window_decades: f64,
    pub min_fit_points: usize,
    /// Bins with fewer papers than this are left out of the fit view.
    pub min_count: u64,
    pub include_c1_in_r2: bool,
    pub t_max: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            anchor_c: 2,
            q_grid: QGrid::default(),
            q_window_decades: 2.0,
            min_fit_points: 10,
            min_count: 100,
            include_c1_in_r2: true,
            t_max: 1e3,
        }
    }
}

impl FitConfig {
    pub fn validate(&self) -> Result<()> {
        let g = &self.q_grid;
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if !(g.min > 1.0) || !(g.max < 2.0) || !(g.min <= g.max) {
            return bad(format!("q grid [{}, {}] must lie inside (1, 2)", g.min, g.max));
        }
        if !(g.step > 0.0) {
            return bad(format!("q step must be > 0, got {}", g.step));
        }
        if !(self.q_window_decades > 0.0) {
            return bad(format!("q window must be > 0 decades, got {}", self.q_window_decades));
        }
        if self.anchor_c < 1 {
            return bad("anchor_c must be >= 1".into());
        }
        if self.min_fit_points < 3 {
            return bad(format!("min_fit_points must be >= 3, got {}", self.min_fit_points));
        }
        if !(self.t_max > T_MIN) {
            return bad(format!("t_max must exceed {T_MIN}, got {}", self.t_max));
        }
        Ok(())
    }

    /// Largest `c` used when choosing `q`.
    pub fn q_window_limit(&self) -> f64 {
        self.anchor_c as f64 * 10f64.powf(self.q_window_decades)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub entity: String,
    pub q: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub r2: f64,
    /// Zero when the source (e.g. a published table) did not record it.
    #[serde(default)]
    pub anchor_c: u64,
    #[serde(default)]
    pub anchor_value: u64,
    #[serde(default)]
    pub n_points_q: usize,
    #[serde(default, rename = "n_points_T")]
    pub n_points_t: usize,
}

/// `anchor_value * e_q^{-(c - anchor_c)/T}`.
///
/// `c` below the anchor extrapolates the curve upward and may leave the
/// domain of `e_q` for small `T`.
pub fn model_eval(c: u64, q: f64, t: f64, anchor_c: u64, anchor_value: f64) -> Result<f64> {
    Ok(anchor_value * ln_model_ratio(c, q, t, anchor_c)?.exp())
}

fn ln_model_ratio(c: u64, q: f64, t: f64, anchor_c: u64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::domain(format!("T must be > 0, got {t}")));
    }
    let x = -(c as f64 - anchor_c as f64) / t;
    qmath::ln_q_exp(x, q)
}

/// Fit points pre-transformed to `(c - anchor, ln N(c) - ln N(anchor))`.
struct LogPoints {
    offset: Vec<f64>,
    ln_ratio: Vec<f64>,
}

impl LogPoints {
    fn new(points: &[(u64, u64)], anchor_c: u64, anchor_value: u64) -> Self {
        let ln_anchor = (anchor_value as f64).ln();
        let (offset, ln_ratio) = points
            .iter()
            .map(|&(c, n)| (c as f64 - anchor_c as f64, (n as f64).ln() - ln_anchor))
            .unzip();
        Self { offset, ln_ratio }
    }

    fn len(&self) -> usize {
        self.offset.len()
    }

    /// Sum of squared log residuals; `+inf` outside the model's domain.
    fn objective(&self, q: f64, t: f64) -> f64 {
        let mut sum = 0.0;
        for (dx, y) in self.offset.iter().zip(&self.ln_ratio) {
            match qmath::ln_q_exp(-dx / t, q) {
                Ok(m) => sum += (y - m) * (y - m),
                Err(_) => return f64::INFINITY,
            }
        }
        sum
    }
}

/// Minimizes the log objective over `T` in `[T_MIN, t_max]` for fixed `q`.
///
/// A log-spaced scan locates the bracket, then golden-section search in
/// `ln T` narrows it. A scan minimum on either end of the bracket means the
/// objective has no interior minimum there and is reported as an error.
fn minimize_t(points: &LogPoints, q: f64, t_max: f64, entity: &str) -> Result<(f64, f64)> {
    let (lo, hi) = (T_MIN.ln(), t_max.ln());
    let du = (hi - lo) / (T_SCAN_POINTS - 1) as f64;
    let f = |u: f64| points.objective(q, u.exp());

    let scan: Vec<f64> = (0..T_SCAN_POINTS).map(|i| f(lo + i as f64 * du)).collect();
    let (k, &fk) = scan
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("scan is non-empty");
    if !fk.is_finite() {
        return Err(Error::NonConvergence {
            entity: entity.to_string(),
            q,
            detail: "objective is not finite anywhere on the T bracket".into(),
        });
    }
    if k == 0 || k == T_SCAN_POINTS - 1 {
        return Err(Error::NonConvergence {
            entity: entity.to_string(),
            q,
            detail: format!(
                "objective minimum at bracket edge T = {:.4e} (objective {fk:.6e}, bracket [{T_MIN}, {t_max}])",
                (lo + k as f64 * du).exp()
            ),
        });
    }

    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (lo + (k - 1) as f64 * du, lo + (k + 1) as f64 * du);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > T_REL_TOL {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    let u = 0.5 * (a + b);
    Ok((u.exp(), f(u)))
}

/// `1 - SS_res / SS_tot` on `ln N`, clamped to `[0, 1]`.
fn r_squared(points: &[(u64, u64)], q: f64, t: f64, anchor_c: u64, anchor_value: u64) -> Result<f64> {
    let ln_anchor = (anchor_value as f64).ln();
    let mut obs = Vec::with_capacity(points.len());
    let mut fitted = Vec::with_capacity(points.len());
    for &(c, n) in points {
        obs.push((n as f64).ln());
        fitted.push(ln_anchor + ln_model_ratio(c, q, t, anchor_c)?);
    }
    let mean = obs.iter().sum::<f64>() / obs.len() as f64;
    let ss_tot: f64 = obs.iter().map(|y| (y - mean).powi(2)).sum();
    let ss_res: f64 = obs.iter().zip(&fitted).map(|(y, m)| (y - m).powi(2)).sum();
    if ss_tot == 0.0 {
        return Ok(if ss_res == 0.0 { 1.0 } else { 0.0 });
    }
    Ok((1.0 - ss_res / ss_tot).clamp(0.0, 1.0))
}

/// Everything both fit entry points need from the histogram.
struct Prepared<'a> {
    h: &'a CitationHistogram,
    view: Vec<(u64, u64)>,
    anchor_value: u64,
    window: LogPoints,
    all: LogPoints,
}

fn prepare<'a>(h: &'a CitationHistogram, cfg: &FitConfig) -> Result<Prepared<'a>> {
    cfg.validate()?;
    let view = fit_view(h, cfg)?;
    if view[0].0 != cfg.anchor_c {
        return Err(Error::MissingAnchor {
            entity: h.entity.clone(),
            anchor_c: cfg.anchor_c,
        });
    }
    let anchor_value = view[0].1;
    let limit = cfg.q_window_limit();
    let in_window: Vec<(u64, u64)> = view.iter().copied().filter(|(c, _)| *c as f64 <= limit).collect();
    if in_window.len() < 3 {
        return Err(Error::InsufficientData {
            entity: h.entity.clone(),
            found: in_window.len(),
            needed: 3,
        });
    }
    Ok(Prepared {
        h,
        window: LogPoints::new(&in_window, cfg.anchor_c, anchor_value),
        all: LogPoints::new(&view, cfg.anchor_c, anchor_value),
        view,
        anchor_value,
    })
}

fn finish(p: &Prepared<'_>, q: f64, cfg: &FitConfig) -> Result<FitResult> {
    let (t, _) = minimize_t(&p.all, q, cfg.t_max, &p.h.entity)?;

    let mut r2_points = p.view.clone();
    if cfg.include_c1_in_r2 && cfg.anchor_c > 1 {
        let n1 = p.h.count(1);
        if n1 > 0 {
            r2_points.insert(0, (1, n1));
        }
    }
    let r2 = r_squared(&r2_points, q, t, cfg.anchor_c, p.anchor_value)?;

    Ok(FitResult {
        entity: p.h.entity.clone(),
        q,
        t,
        r2,
        anchor_c: cfg.anchor_c,
        anchor_value: p.anchor_value,
        n_points_q: p.window.len(),
        n_points_t: p.all.len(),
    })
}

/// Full two-stage fit: grid search for `q` on the early window, then `T`
/// over the whole fit view.
pub fn fit(h: &CitationHistogram, cfg: &FitConfig) -> Result<FitResult> {
    let p = prepare(h, cfg)?;
    let grid = cfg.q_grid.values();
    let scored: Vec<Result<(f64, f64)>> = grid
        .par_iter()
        .map(|&q| minimize_t(&p.window, q, cfg.t_max, &h.entity))
        .collect();

    // first strict minimum in ascending q, so ties go to the smaller q
    let mut best: Option<(f64, f64)> = None;
    let mut first_err = None;
    for (&q, r) in grid.iter().zip(scored) {
        match r {
            Ok((_, obj)) => {
                if best.is_none_or(|(_, b)| obj < b) {
                    best = Some((q, obj));
                }
            }
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    let Some((q, _)) = best else {
        return Err(first_err.expect("grid is non-empty"));
    };
    finish(&p, q, cfg)
}

/// Stage two and R² only, with `q` supplied by the caller.
pub fn refit_t_fixed_q(h: &CitationHistogram, q: f64, cfg: &FitConfig) -> Result<FitResult> {
    if !(q > 1.0 && q < 2.0) {
        return Err(Error::domain(format!("q must lie in (1, 2), got {q}")));
    }
    let p = prepare(h, cfg)?;
    finish(&p, q, cfg)
}

/// `(c - ref_c, ln_q(N(c)/N(ref_c)))` for every `c >= ref_c` with `N(c) > 0`.
///
/// Model data falls on the line through the origin with slope `-1/T`.
pub fn linearize(h: &CitationHistogram, q: f64, ref_c: u64) -> Result<Vec<(u64, f64)>> {
    let points: Vec<(u64, f64)> = h.support().map(|(c, n)| (c, n as f64)).collect();
    linearize_points(&points, q, ref_c)
}

/// [`linearize`] over real-valued `(c, N(c))` points, e.g. exact model values.
pub fn linearize_points(points: &[(u64, f64)], q: f64, ref_c: u64) -> Result<Vec<(u64, f64)>> {
    let reference = points
        .iter()
        .find(|(c, n)| *c == ref_c && *n > 0.0)
        .map(|(_, n)| *n)
        .ok_or_else(|| Error::domain(format!("ref_c = {ref_c} is not in the support")))?;
    points
        .iter()
        .filter(|(c, n)| *c >= ref_c && *n > 0.0)
        .map(|&(c, n)| Ok((c - ref_c, qmath::q_log(n / reference, q)?)))
        .collect()
}

/// Ordinary least-squares line `y = slope * x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
}

pub fn line_fit(points: &[(f64, f64)]) -> Option<LineFit> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some(LineFit {
        slope,
        intercept: my - slope * mx,
    })
}
