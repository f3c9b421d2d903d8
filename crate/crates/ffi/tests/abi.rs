use std::ffi::{CStr, CString};
use std::ptr;

use qcite_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(qcite_last_error()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn scalar_functions() {
    let mut v = 0.0;
    unsafe {
        assert_eq!(qcite_q_exp(-3.0, 4.0 / 3.0, &mut v), QciteStatus::Ok);
        assert!((v - 0.125).abs() < 1e-15);
        assert_eq!(qcite_q_log(0.125, 4.0 / 3.0, &mut v), QciteStatus::Ok);
        assert!((v + 3.0).abs() < 1e-14);
        assert_eq!(qcite_q_exp(10.0, 4.0 / 3.0, &mut v), QciteStatus::Domain);
        assert!(last_error().contains("diverges"));
        assert_eq!(qcite_q_exp(0.0, 1.2, ptr::null_mut()), QciteStatus::NullPointer);

        let p = [0.5, 0.5];
        assert_eq!(qcite_tsallis_entropy(p.as_ptr(), 2, 2.0, 1.0, &mut v), QciteStatus::Ok);
        assert!((v - 0.5).abs() < 1e-15);
        let bad = [0.5, 0.6];
        assert_eq!(
            qcite_tsallis_entropy(bad.as_ptr(), 2, 2.0, 1.0, &mut v),
            QciteStatus::Domain
        );
        assert_eq!(qcite_entropy_composition(0.5, 0.5, 2.0, 1.0, &mut v), QciteStatus::Ok);
        assert!((v - 0.75).abs() < 1e-15);
    }
    let version = unsafe { CStr::from_ptr(qcite_version()) }.to_str().unwrap();
    assert_eq!(version, env!("CARGO_PKG_VERSION"));
}

#[test]
fn synth_fit_and_linearize() {
    let entity = CString::new("Italy twin").unwrap();
    let mut h = ptr::null_mut();
    let mut fit = QciteFit::default();
    unsafe {
        assert_eq!(
            qcite_synth_deterministic(entity.as_ptr(), 1.337, 5.82, 62_543, 20_000, &mut h),
            QciteStatus::Ok
        );
        assert_eq!(qcite_fit(h, ptr::null(), &mut fit), QciteStatus::Ok);
        assert!(
            (fit.q - 1.337).abs() <= 0.005 && (fit.t - 5.82).abs() <= 0.05,
            "{fit:?}"
        );
        assert_eq!(fit.anchor_value, 62_543);

        let mut refit = QciteFit::default();
        assert_eq!(
            qcite_refit_t_fixed_q(h, fit.q, ptr::null(), &mut refit),
            QciteStatus::Ok
        );
        assert_eq!(refit, fit);

        let mut n = 0usize;
        assert_eq!(
            qcite_linearize(h, 1.337, 2, ptr::null_mut(), ptr::null_mut(), 0, &mut n),
            QciteStatus::BufferTooSmall
        );
        assert!(n > 100);
        let (mut x, mut y) = (vec![0.0; n], vec![0.0; n]);
        assert_eq!(
            qcite_linearize(h, 1.337, 2, x.as_mut_ptr(), y.as_mut_ptr(), n, &mut n),
            QciteStatus::Ok
        );
        assert_eq!((x[0], y[0]), (0.0, 0.0));
        assert!(y.windows(2).all(|w| w[1] <= w[0]));

        let mut s = QciteSummary::default();
        assert_eq!(qcite_histogram_summary(h, &mut s), QciteStatus::Ok);
        assert_eq!(s.n2, 62_543);
        qcite_histogram_free(h);
    }
}

#[test]
fn config_handle() {
    unsafe {
        let cfg = qcite_config_new();
        assert_eq!(
            qcite_config_set_q_grid(cfg, 0.9, 1.5, 0.001),
            QciteStatus::InvalidArgument
        );
        assert!(last_error().contains("q"));
        assert_eq!(qcite_config_set_q_grid(cfg, 1.30, 1.40, 0.002), QciteStatus::Ok);
        assert_eq!(qcite_config_set_min_count(cfg, 50), QciteStatus::Ok);
        assert_eq!(qcite_config_set_include_c1(cfg, false), QciteStatus::Ok);

        let entity = CString::new("s").unwrap();
        let mut h = ptr::null_mut();
        assert_eq!(
            qcite_synth_sampled(entity.as_ptr(), 4.0 / 3.0, 5.0, 300_000, 1, &mut h),
            QciteStatus::Ok
        );
        let mut fit = QciteFit::default();
        assert_eq!(qcite_fit(h, cfg, &mut fit), QciteStatus::Ok);
        assert!((1.30..=1.40).contains(&fit.q));
        qcite_histogram_free(h);
        qcite_config_free(cfg);
        qcite_config_free(ptr::null_mut());
    }
}

#[test]
fn histogram_handles() {
    let entity = CString::new("x").unwrap();
    let c = [0u64, 1, 2, 3];
    let n = [10u64, 4, 2, 1];
    let mut h = ptr::null_mut();
    unsafe {
        assert_eq!(
            qcite_histogram_from_arrays(entity.as_ptr(), c.as_ptr(), n.as_ptr(), 4, &mut h),
            QciteStatus::Ok
        );
        let mut count = 0;
        assert_eq!(qcite_histogram_count(h, 1, &mut count), QciteStatus::Ok);
        assert_eq!(count, 4);

        let mut text = ptr::null_mut();
        assert_eq!(qcite_histogram_to_csv(h, &mut text), QciteStatus::Ok);
        assert_eq!(
            CStr::from_ptr(text).to_str().unwrap(),
            "citations,count\n0,10\n1,4\n2,2\n3,1\n"
        );
        qcite_string_free(text);

        let mut fit = QciteFit::default();
        assert_eq!(qcite_fit(h, ptr::null(), &mut fit), QciteStatus::InsufficientData);

        let dup = [2u64, 2];
        let mut h2 = ptr::null_mut();
        assert_eq!(
            qcite_histogram_from_arrays(entity.as_ptr(), dup.as_ptr(), n.as_ptr(), 2, &mut h2),
            QciteStatus::Parse
        );
        assert!(h2.is_null());
        qcite_histogram_free(h);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("Chile.csv");
        std::fs::write(&path, "citations,count\n0,5\n2,-1\n").unwrap();
        let cpath = CString::new(path.to_str().unwrap()).unwrap();
        assert_eq!(
            qcite_histogram_load_csv(cpath.as_ptr(), ptr::null(), &mut h),
            QciteStatus::Parse
        );
        assert!(last_error().contains("line 3"));
        let missing = CString::new(dir.path().join("nope.csv").to_str().unwrap()).unwrap();
        assert_eq!(
            qcite_histogram_load_csv(missing.as_ptr(), ptr::null(), &mut h),
            QciteStatus::Io
        );
    }
}
