//! Static SVG figures: the histogram with its fitted curve on log-log axes,
//! and the q-logarithm linearization with the `-1/T` line.
//!
//! Every figure comes with a plot-data CSV holding the plotted numbers.
//! Output is a pure function of the inputs (fixed-precision coordinates).

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::fitter::{line_fit, linearize, model_eval, FitResult};
use crate::histogram::CitationHistogram;
use crate::qmath;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 56.0;
const CURVE_SAMPLES: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotStyle {
    LogLog,
    QLog,
}

impl std::str::FromStr for PlotStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "loglog" => Ok(PlotStyle::LogLog),
            "qlog" => Ok(PlotStyle::QLog),
            other => Err(Error::InvalidConfig(format!(
                "unknown plot style {other:?} (loglog, qlog)"
            ))),
        }
    }
}

impl PlotStyle {
    pub fn name(self) -> &'static str {
        match self {
            PlotStyle::LogLog => "loglog",
            PlotStyle::QLog => "qlog",
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct PlotOptions {
    /// Divide counts by the entity's total papers.
    pub normalize: bool,
    /// Largest `c - ref_c` shown in the linearized plot.
    pub x_limit: Option<u64>,
    /// Reference bin of the linearization; defaults to the fit anchor.
    pub ref_c: Option<u64>,
}

/// An SVG document plus the numbers behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub svg: String,
    pub data_csv: String,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Maps data coordinates to the plot frame.
struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - TOP - BOTTOM)
    }
}

struct Svg(String);

impl Svg {
    fn new(title: &str) -> Self {
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            WIDTH / 2.0,
            escape(title)
        );
        Svg(s)
    }

    fn frame(&mut self) {
        let _ = writeln!(
            self.0,
            r#"<rect x="{LEFT}" y="{TOP}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
            WIDTH - LEFT - RIGHT,
            HEIGHT - TOP - BOTTOM
        );
    }

    fn x_tick(&mut self, px: f64, label: &str) {
        let y = HEIGHT - BOTTOM;
        let _ = writeln!(
            self.0,
            r#"<line x1="{px:.2}" y1="{y:.2}" x2="{px:.2}" y2="{:.2}" stroke="black"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{label}</text>"#,
            y + 5.0,
            y + 18.0
        );
    }

    fn y_tick(&mut self, py: f64, label: &str) {
        let _ = writeln!(
            self.0,
            r#"<line x1="{:.2}" y1="{py:.2}" x2="{LEFT}" y2="{py:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"#,
            LEFT - 5.0,
            LEFT - 8.0,
            py + 4.0
        );
    }

    fn axis_labels(&mut self, x: &str, y: &str) {
        let _ = writeln!(
            self.0,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            (LEFT + WIDTH - RIGHT) / 2.0,
            HEIGHT - 14.0,
            escape(x)
        );
        let cy = (TOP + HEIGHT - BOTTOM) / 2.0;
        let _ = writeln!(
            self.0,
            r#"<text x="18" y="{cy:.2}" text-anchor="middle" transform="rotate(-90 18 {cy:.2})">{}</text>"#,
            escape(y)
        );
    }

    fn points(&mut self, pts: &[(f64, f64)]) {
        self.0.push_str(r##"<g fill="none" stroke="#1f4e9c">"##);
        self.0.push('\n');
        for (x, y) in pts {
            let _ = writeln!(self.0, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5"/>"#);
        }
        self.0.push_str("</g>\n");
    }

    fn polyline(&mut self, pts: &[(f64, f64)]) {
        let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ = writeln!(
            self.0,
            r##"<polyline points="{}" fill="none" stroke="#c0392b" stroke-width="1.5"/>"##,
            coords.join(" ")
        );
    }

    fn note(&mut self, line: usize, text: &str) {
        let _ = writeln!(
            self.0,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            WIDTH - RIGHT - 8.0,
            TOP + 18.0 + 16.0 * line as f64,
            escape(text)
        );
    }

    fn finish(mut self) -> String {
        self.0.push_str("</svg>\n");
        self.0
    }
}

fn decade_bounds(lo: f64, hi: f64) -> (f64, f64) {
    let a = lo.log10().floor();
    let mut b = hi.log10().ceil();
    if b <= a {
        b = a + 1.0;
    }
    (a, b)
}

/// Model curve value at real-valued `c`.
fn model_at(x: f64, fit: &FitResult) -> Option<f64> {
    let arg = -(x - fit.anchor_c as f64) / fit.t;
    qmath::ln_q_exp(arg, fit.q)
        .ok()
        .map(|l| fit.anchor_value as f64 * l.exp())
}

fn check_entities(h: &CitationHistogram, fit: &FitResult) -> Result<()> {
    if h.entity != fit.entity {
        return Err(Error::EntityMismatch(format!(
            "histogram {:?} vs fit result {:?}",
            h.entity, fit.entity
        )));
    }
    if fit.anchor_value == 0 || fit.anchor_c == 0 {
        return Err(Error::EntityMismatch(format!(
            "fit result for {:?} carries no anchor; plots need results written by `fit`",
            fit.entity
        )));
    }
    Ok(())
}

/// Observed `N(c)` for `c >= 1` and the fitted curve on log-log axes.
pub fn loglog(h: &CitationHistogram, fit: &FitResult, opts: &PlotOptions) -> Result<Figure> {
    check_entities(h, fit)?;
    let scale = if opts.normalize { h.total_papers() as f64 } else { 1.0 };
    let observed: Vec<(u64, f64)> = h
        .support()
        .filter(|(c, _)| *c >= 1)
        .map(|(c, n)| (c, n as f64 / scale))
        .collect();
    if observed.is_empty() {
        return Err(Error::EmptyData(format!("{}: no bins with c >= 1", h.entity)));
    }

    let mut data_csv = String::from("c,observed,fitted\n");
    for &(c, y) in &observed {
        let fitted = model_eval(c, fit.q, fit.t, fit.anchor_c, fit.anchor_value as f64)
            .map(|v| format!("{:.6e}", v / scale))
            .unwrap_or_default();
        let _ = writeln!(data_csv, "{c},{y:.6e},{fitted}");
    }

    let c_lo = observed[0].0 as f64;
    let c_hi = observed.last().map_or(c_lo, |p| p.0 as f64).max(c_lo + 1.0);
    let curve: Vec<(f64, f64)> = (0..CURVE_SAMPLES)
        .filter_map(|i| {
            let x = c_lo * (c_hi / c_lo).powf(i as f64 / (CURVE_SAMPLES - 1) as f64);
            model_at(x, fit).map(|v| (x, v / scale))
        })
        .filter(|(_, v)| *v > 0.0)
        .collect();

    let ys = observed.iter().map(|p| p.1).chain(curve.iter().map(|p| p.1));
    let (y_min, y_max) = ys.fold((f64::INFINITY, 0f64), |(lo, hi), y| (lo.min(y), hi.max(y)));
    let (dx0, dx1) = decade_bounds(c_lo, c_hi);
    let (dy0, dy1) = decade_bounds(y_min.max(f64::MIN_POSITIVE), y_max);
    let frame = Frame {
        x0: dx0,
        x1: dx1,
        y0: dy0,
        y1: dy1,
    };

    let mut svg = Svg::new(&format!("{} (q = {:.3}, T = {:.2})", h.entity, fit.q, fit.t));
    svg.frame();
    for d in dx0 as i32..=dx1 as i32 {
        svg.x_tick(frame.px(d as f64), &format!("1e{d}"));
    }
    for d in dy0 as i32..=dy1 as i32 {
        svg.y_tick(frame.py(d as f64), &format!("1e{d}"));
    }
    svg.axis_labels("citations c", if opts.normalize { "P(c)" } else { "N(c)" });
    let pts: Vec<(f64, f64)> = observed
        .iter()
        .map(|&(c, y)| (frame.px((c as f64).log10()), frame.py(y.log10())))
        .collect();
    svg.points(&pts);
    let line: Vec<(f64, f64)> = curve
        .iter()
        .map(|&(x, y)| (frame.px(x.log10()), frame.py(y.log10())))
        .collect();
    svg.polyline(&line);
    svg.note(0, &format!("R2 = {:.4}", fit.r2));

    Ok(Figure {
        svg: svg.finish(),
        data_csv,
    })
}

fn linear_ticks(lo: f64, hi: f64) -> Vec<f64> {
    (0..=5).map(|i| lo + (hi - lo) * i as f64 / 5.0).collect()
}

/// `ln_q(N(c)/N(ref_c))` against `c - ref_c` with the line of slope `-1/T`.
pub fn qlog(h: &CitationHistogram, fit: &FitResult, opts: &PlotOptions) -> Result<Figure> {
    check_entities(h, fit)?;
    let ref_c = opts.ref_c.unwrap_or(fit.anchor_c);
    let mut points = linearize(h, fit.q, ref_c)?;
    if let Some(limit) = opts.x_limit {
        points.retain(|(dx, _)| *dx <= limit);
    }

    let mut data_csv = String::from("c,offset,lnq,fitted\n");
    for &(dx, y) in &points {
        let _ = writeln!(data_csv, "{},{dx},{y:.9e},{:.9e}", dx + ref_c, -(dx as f64) / fit.t);
    }

    let xy: Vec<(f64, f64)> = points.iter().map(|&(dx, y)| (dx as f64, y)).collect();
    let x_max = xy.iter().map(|p| p.0).fold(1.0, f64::max);
    let y_lo = xy.iter().map(|p| p.1).fold(-x_max / fit.t, f64::min);
    let y_hi = xy.iter().map(|p| p.1).fold(0.0, f64::max);
    let pad = 0.05 * (y_hi - y_lo).max(1e-12);
    let frame = Frame {
        x0: 0.0,
        x1: x_max,
        y0: y_lo - pad,
        y1: y_hi + pad,
    };

    let mut svg = Svg::new(&format!("{}: ln_q[N(c)/N({ref_c})], q = {:.3}", h.entity, fit.q));
    svg.frame();
    for x in linear_ticks(0.0, x_max) {
        svg.x_tick(frame.px(x), &format!("{x:.0}"));
    }
    for y in linear_ticks(frame.y0, frame.y1) {
        svg.y_tick(frame.py(y), &format!("{y:.2}"));
    }
    svg.axis_labels(&format!("c - {ref_c}"), &format!("ln_q[N(c)/N({ref_c})]"));
    let pts: Vec<(f64, f64)> = xy.iter().map(|&(x, y)| (frame.px(x), frame.py(y))).collect();
    svg.points(&pts);
    svg.polyline(&[
        (frame.px(0.0), frame.py(0.0)),
        (frame.px(x_max), frame.py(-x_max / fit.t)),
    ]);
    svg.note(0, &format!("slope -1/T = {:.4}", -1.0 / fit.t));
    if let Some(ls) = line_fit(&xy) {
        svg.note(1, &format!("least-squares slope = {:.4}", ls.slope));
    }

    Ok(Figure {
        svg: svg.finish(),
        data_csv,
    })
}

pub fn render(style: PlotStyle, h: &CitationHistogram, fit: &FitResult, opts: &PlotOptions) -> Result<Figure> {
    match style {
        PlotStyle::LogLog => loglog(h, fit, opts),
        PlotStyle::QLog => qlog(h, fit, opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fitter::{fit as fit_histogram, FitConfig};
    use crate::synth::{generate_deterministic, SyntheticSpec};

    fn twin() -> (CitationHistogram, FitResult) {
        let h = generate_deterministic(&SyntheticSpec::deterministic("Italy", 1.337, 5.82, 62543, 20_000)).unwrap();
        let r = fit_histogram(&h, &FitConfig::default()).unwrap();
        (h, r)
    }

    #[test]
    fn loglog_curve_passes_through_anchor() {
        let (h, r) = twin();
        let fig = loglog(&h, &r, &PlotOptions::default()).unwrap();
        assert!(
            fig.data_csv.lines().any(|l| l == "2,6.254300e4,6.254300e4"),
            "{}",
            &fig.data_csv[..200]
        );
        assert!(fig.svg.starts_with("<svg"));
        assert!(fig.svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn loglog_normalized() {
        let (h, r) = twin();
        let fig = loglog(
            &h,
            &r,
            &PlotOptions {
                normalize: true,
                ..Default::default()
            },
        )
        .unwrap();
        let second = fig.data_csv.lines().nth(1).unwrap();
        let obs: f64 = second.split(',').nth(1).unwrap().parse().unwrap();
        assert!((obs - 62543.0 / h.total_papers() as f64).abs() < 1e-6);
    }

    #[test]
    fn qlog_respects_x_limit() {
        let (h, r) = twin();
        let fig = qlog(
            &h,
            &r,
            &PlotOptions {
                x_limit: Some(300),
                ..Default::default()
            },
        )
        .unwrap();
        for line in fig.data_csv.lines().skip(1) {
            let dx: u64 = line.split(',').nth(1).unwrap().parse().unwrap();
            assert!(dx <= 300);
        }
        assert!(fig.svg.contains("slope -1/T"));
    }

    #[test]
    fn style_parsing_and_mismatch() {
        assert_eq!("qlog".parse::<PlotStyle>().unwrap(), PlotStyle::QLog);
        assert!("bars".parse::<PlotStyle>().is_err());
        let (h, mut r) = twin();
        r.entity = "Spain".into();
        assert!(matches!(
            loglog(&h, &r, &PlotOptions::default()),
            Err(Error::EntityMismatch(_))
        ));
    }

    #[test]
    fn titles_are_escaped() {
        assert_eq!(escape("A&B <x>"), "A&amp;B &lt;x&gt;");
    }
}
