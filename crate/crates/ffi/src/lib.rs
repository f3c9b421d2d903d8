//! C ABI over the `qcite` library.
//!
//! Every fallible function returns a [`QciteStatus`] and writes its result
//! through an out-pointer. On failure a message is kept per thread and can
//! be read with [`qcite_last_error`]. Histograms and fit configurations are
//! opaque handles owned by the caller and released with their `_free`
//! function. Strings returned by the library are released with
//! [`qcite_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};
use std::path::Path;
use std::ptr;

use qcite::fitter::FitResult;
use qcite::histogram::{load_histogram_file, summarize};
use qcite::synth::SyntheticSpec;
use qcite::{CitationHistogram, Error, FitConfig, ProbabilityVector};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QciteStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Parse = 4,
    EmptyData = 5,
    InsufficientData = 6,
    MissingAnchor = 7,
    NonConvergence = 8,
    Io = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

/// Opaque citation histogram.
pub struct QciteHistogram(CitationHistogram);

/// Opaque fit configuration.
pub struct QciteConfig(FitConfig);

/// Outcome of a fit.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QciteFit {
    pub q: f64,
    pub t: f64,
    pub r2: f64,
    pub anchor_c: u64,
    pub anchor_value: u64,
    pub n_points_q: usize,
    pub n_points_t: usize,
}

/// Paper counts and percentage shares of 0, 1 and 2 citations.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QciteSummary {
    pub total_papers: u64,
    pub n0: u64,
    pub n1: u64,
    pub n2: u64,
    pub pct0: f64,
    pub pct1: f64,
    pub pct2: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> QciteStatus {
    match e {
        Error::Domain(_) => QciteStatus::Domain,
        Error::Parse { .. }
        | Error::NegativeCount { .. }
        | Error::DuplicateBin { .. }
        | Error::Csv(_)
        | Error::Json(_) => QciteStatus::Parse,
        Error::EmptyData(_) => QciteStatus::EmptyData,
        Error::InsufficientData { .. } => QciteStatus::InsufficientData,
        Error::MissingAnchor { .. } => QciteStatus::MissingAnchor,
        Error::NonConvergence { .. } => QciteStatus::NonConvergence,
        Error::File { .. } | Error::Io(_) => QciteStatus::Io,
        Error::InvalidConfig(_) | Error::InvalidSpec(_) | Error::DuplicateEntity(_) | Error::EntityMismatch(_) => {
            QciteStatus::InvalidArgument
        }
    }
}

fn fail(status: QciteStatus, msg: &str) -> QciteStatus {
    set_last_error(msg);
    status
}

impl From<Error> for QciteStatus {
    fn from(e: Error) -> Self {
        fail(status_of(&e), &e.to_string())
    }
}

fn guard<F>(f: F) -> QciteStatus
where
    F: FnOnce() -> Result<(), QciteStatus> + UnwindSafe,
{
    match catch_unwind(f) {
        Ok(Ok(())) => QciteStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(QciteStatus::Panic, "internal panic"),
    }
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), QciteStatus> {
    if p.is_null() {
        Err(fail(QciteStatus::NullPointer, &format!("{name} is NULL")))
    } else {
        Ok(())
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, QciteStatus> {
    non_null(p, name)?;
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(QciteStatus::InvalidArgument, &format!("{name} is not UTF-8")))
}

unsafe fn write<T>(out: *mut T, value: T) {
    ptr::write(out, value);
}

fn boxed_histogram(h: CitationHistogram) -> *mut QciteHistogram {
    Box::into_raw(Box::new(QciteHistogram(h)))
}

impl From<FitResult> for QciteFit {
    fn from(r: FitResult) -> Self {
        Self {
            q: r.q,
            t: r.t,
            r2: r.r2,
            anchor_c: r.anchor_c,
            anchor_value: r.anchor_value,
            n_points_q: r.n_points_q,
            n_points_t: r.n_points_t,
        }
    }
}

/// Message of the last failure on this thread, or an empty string.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn qcite_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn qcite_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qcite_q_exp(x: f64, q: f64, out: *mut f64) -> QciteStatus {
    guard(|| {
        non_null(out, "out")?;
        write(out, qcite::q_exp(x, q)?);
        Ok(())
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qcite_q_log(y: f64, q: f64, out: *mut f64) -> QciteStatus {
    guard(|| {
        non_null(out, "out")?;
        write(out, qcite::q_log(y, q)?);
        Ok(())
    })
}

/// Tsallis entropy of `len` probabilities summing to one.
///
/// # Safety
/// `p` must point to `len` readable doubles and `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qcite_tsallis_entropy(
    p: *const f64,
    len: usize,
    q: f64,
    k: f64,
    out: *mut f64,
) -> QciteStatus {
    guard(|| {
        non_null(p, "p")?;
        non_null(out, "out")?;
        let probs = ProbabilityVector::new(std::slice::from_raw_parts(p, len).to_vec())?;
        write(out, qcite::tsallis_entropy(&probs, q, k)?);
        Ok(())
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qcite_entropy_composition(sa: f64, sb: f64, q: f64, k: f64, out: *mut f64) -> QciteStatus {
    guard(|| {
        non_null(out, "out")?;
        write(out, qcite::entropy_composition(sa, sb, q, k)?);
        Ok(())
    })
}

/// Builds a histogram from parallel arrays of citation counts and paper counts.
///
/// # Safety
/// `entity` must be a NUL-terminated string, `citations` and `counts` must
/// point to `len` readable values, `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qcite_histogram_from_arrays(
    entity: *const c_char,
    citations: *const u64,
    counts: *const u64,
    len: usize,
    out: *mut *mut QciteHistogram,
) -> QciteStatus {
    guard(|| {
        let entity = str_arg(entity, "entity")?;
        non_null(out, "out")?;
        if len > 0 {
            non_null(citations, "citations")?;
            non_null(counts, "counts")?;
        }
        let pairs: Vec<(u64, u64)> = if len == 0 {
            Vec::new()
        } else {
            let c = std::slice::from_raw_parts(citations, len);
            let n = std::slice::from_raw_parts(counts, len);
            c.iter().copied().zip(n.iter().copied()).collect()
        };
        let h = CitationHistogram::from_pairs(entity, pairs)?;
        write(out, boxed_histogram(h));
        Ok(())
    })
}

/// Loads a `citations,count` CSV file. A NULL `entity` takes the file stem.
///
/// # Safety
/// `path` must be a NUL-terminated string, `entity` NULL or NUL-terminated,
/// `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qcite_histogram_load_csv(
    path: *const c_char,
    entity: *const c_char,
    out: *mut *mut QciteHistogram,
) -> QciteStatus {
    guard(|| {
        let path = str_arg(path, "path")?;
        let entity = if entity.is_null() {
            None
        } else {
            Some(str_arg(entity, "entity")?)
        };
        non_null(out, "out")?;
        let h = load_histogram_file(Path::new(path), entity)?;
        write(out, boxed_histogram(h));
        Ok(())
    })
}

/// # Safety
/// `h` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qcite_histogram_free(h: *mut QciteHistogram) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Papers with exactly `c` citations (0 for absent bins).
///
/// # Safety
/// `h` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qcite_histogram_count(h: *const QciteHistogram, c: u64, out: *mut u64) -> QciteStatus {
    guard(|| {
        non_null(h, "histogram")?;
        non_null(out, "out")?;
        write(out, (*h).0.count(c));
        Ok(())
    })
}

/// # Safety
/// `h` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qcite_histogram_summary(h: *const QciteHistogram, out: *mut QciteSummary) -> QciteStatus {
    guard(|| {
        non_null(h, "histogram")?;
        non_null(out, "out")?;
        let s = summarize(&(*h).0);
        write(
            out,
            QciteSummary {
                total_papers: s.total_papers,
                n0: s.n0,
                n1: s.n1,
                n2: s.n2,
                pct0: s.pct0,
                pct1: s.pct1,
                pct2: s.pct2,
            },
        );
        Ok(())
    })
}

/// CSV text of the histogram; release with `qcite_string_free`.
///
/// # Safety
/// `h` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qcite_histogram_to_csv(h: *const QciteHistogram, out: *mut *mut c_char) -> QciteStatus {
    guard(|| {
        non_null(h, "histogram")?;
        non_null(out, "out")?;
        let text = CString::new((*h).0.to_csv_string()).map_err(|_| fail(QciteStatus::Panic, "NUL in CSV"))?;
        write(out, text.into_raw());
        Ok(())
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qcite_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Default fit configuration.
#[no_mangle]
pub extern "C" fn qcite_config_new() -> *mut QciteConfig {
    Box::into_raw(Box::new(QciteConfig(FitConfig::default())))
}

/// # Safety
/// `cfg` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qcite_config_free(cfg: *mut QciteConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

unsafe fn update_config(cfg: *mut QciteConfig, f: impl FnOnce(&mut FitConfig) + UnwindSafe) -> QciteStatus {
    guard(move || {
        non_null(cfg, "config")?;
        let mut next = (*cfg).0.clone();
        f(&mut next);
        next.validate()?;
        (*cfg).0 = next;
        Ok(())
    })
}

/// Sets the q search grid. The configuration is left unchanged on error.
///
/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qcite_config_set_q_grid(cfg: *mut QciteConfig, min: f64, max: f64, step: f64) -> QciteStatus {
    update_config(cfg, move |c| {
        c.q_grid.min = min;
        c.q_grid.max = max;
        c.q_grid.step = step;
    })
}

/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qcite_config_set_anchor_c(cfg: *mut QciteConfig, anchor_c: u64) -> QciteStatus {
    update_config(cfg, move |c| c.anchor_c = anchor_c)
}

/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qcite_config_set_window_decades(cfg: *mut QciteConfig, decades: f64) -> QciteStatus {
    update_config(cfg, move |c| c.q_window_decades = decades)
}

/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qcite_config_set_min_count(cfg: *mut QciteConfig, min_count: u64) -> QciteStatus {
    update_config(cfg, move |c| c.min_count = min_count)
}

/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qcite_config_set_min_fit_points(cfg: *mut QciteConfig, points: usize) -> QciteStatus {
    update_config(cfg, move |c| c.min_fit_points = points)
}

/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn qcite_config_set_include_c1(cfg: *mut QciteConfig, include: bool) -> QciteStatus {
    update_config(cfg, move |c| c.include_c1_in_r2 = include)
}

unsafe fn config_or_default(cfg: *const QciteConfig) -> FitConfig {
    if cfg.is_null() {
        FitConfig::default()
    } else {
        (*cfg).0.clone()
    }
}

/// Two-stage fit. A NULL `cfg` uses the defaults.
///
/// # Safety
/// `h` must be a live handle, `cfg` NULL or live, `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qcite_fit(
    h: *const QciteHistogram,
    cfg: *const QciteConfig,
    out: *mut QciteFit,
) -> QciteStatus {
    guard(|| {
        non_null(h, "histogram")?;
        non_null(out, "out")?;
        let r = qcite::fit(&(*h).0, &config_or_default(cfg))?;
        write(out, r.into());
        Ok(())
    })
}

/// Fits `T` with `q` held fixed. A NULL `cfg` uses the defaults.
///
/// # Safety
/// As for `qcite_fit`.
#[no_mangle]
pub unsafe extern "C" fn qcite_refit_t_fixed_q(
    h: *const QciteHistogram,
    q: f64,
    cfg: *const QciteConfig,
    out: *mut QciteFit,
) -> QciteStatus {
    guard(|| {
        non_null(h, "histogram")?;
        non_null(out, "out")?;
        let r = qcite::refit_t_fixed_q(&(*h).0, q, &config_or_default(cfg))?;
        write(out, r.into());
        Ok(())
    })
}

/// Writes `(c - ref_c, ln_q(N(c) / N(ref_c)))` pairs into `x` and `y`.
///
/// `len` always receives the number of points. If it exceeds `capacity`,
/// nothing is written and `QCITE_STATUS_BUFFER_TOO_SMALL` is returned; a
/// call with `capacity` 0 and NULL buffers queries the size.
///
/// # Safety
/// `h` must be a live handle, `x` and `y` valid for `capacity` writes,
/// `len` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qcite_linearize(
    h: *const QciteHistogram,
    q: f64,
    ref_c: u64,
    x: *mut f64,
    y: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> QciteStatus {
    guard(|| {
        non_null(h, "histogram")?;
        non_null(len, "len")?;
        let pts = qcite::linearize(&(*h).0, q, ref_c)?;
        write(len, pts.len());
        if pts.len() > capacity {
            return Err(fail(
                QciteStatus::BufferTooSmall,
                &format!("{} points, capacity {capacity}", pts.len()),
            ));
        }
        non_null(x, "x")?;
        non_null(y, "y")?;
        for (i, (dx, v)) in pts.into_iter().enumerate() {
            write(x.add(i), dx as f64);
            write(y.add(i), v);
        }
        Ok(())
    })
}

unsafe fn synth(spec: SyntheticSpec, out: *mut *mut QciteHistogram) -> Result<(), QciteStatus> {
    non_null(out, "out")?;
    let h = qcite::synth::generate(&spec)?;
    write(out, boxed_histogram(h));
    Ok(())
}

/// Rounded model counts `N(c)` for `c = 2..=c_max`.
///
/// # Safety
/// `entity` must be NUL-terminated and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qcite_synth_deterministic(
    entity: *const c_char,
    q: f64,
    t: f64,
    anchor_value: u64,
    c_max: u64,
    out: *mut *mut QciteHistogram,
) -> QciteStatus {
    guard(|| {
        let entity = str_arg(entity, "entity")?;
        synth(SyntheticSpec::deterministic(entity, q, t, anchor_value, c_max), out)
    })
}

/// `n_samples` seeded draws from the continuous law, shifted to start at c = 2.
///
/// # Safety
/// `entity` must be NUL-terminated and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn qcite_synth_sampled(
    entity: *const c_char,
    q: f64,
    t: f64,
    n_samples: u64,
    seed: u64,
    out: *mut *mut QciteHistogram,
) -> QciteStatus {
    guard(|| {
        let entity = str_arg(entity, "entity")?;
        synth(SyntheticSpec::sampled(entity, q, t, n_samples, seed), out)
    })
}
