use proptest::prelude::*;
use qcite::fitter::{line_fit, linearize};
use qcite::synth::SyntheticSpec;
use qcite::{fit, generate_deterministic, model_eval, refit_t_fixed_q, FitConfig};

fn twin(q: f64, t: f64, anchor: u64) -> qcite::CitationHistogram {
    generate_deterministic(&SyntheticSpec::deterministic("twin", q, t, anchor, 20_000)).unwrap()
}

#[test]
fn oracle_grid_recovery() {
    let cfg = FitConfig::default();
    for q in [1.25, 1.34, 1.45] {
        for t in [3.0, 5.0, 7.0] {
            let r = fit(&twin(q, t, 62_543), &cfg).unwrap();
            assert!((r.q - q).abs() <= cfg.q_grid.step + 1e-9, "q*={q} T*={t}: {r:?}");
            assert!((r.t - t).abs() <= 0.01 * t, "q*={q} T*={t}: {r:?}");
        }
    }
}

#[test]
fn self_fit_r2_without_rounding_noise() {
    let r = fit(&twin(1.337, 5.82, 1_000_000_000_000), &FitConfig::default()).unwrap();
    assert!(r.r2 >= 1.0 - 1e-6, "{r:?}");
}

#[test]
fn refit_at_optimal_q_matches_fit() {
    let h = twin(1.343, 3.97, 22_463);
    let cfg = FitConfig::default();
    let a = fit(&h, &cfg).unwrap();
    let b = refit_t_fixed_q(&h, a.q, &cfg).unwrap();
    assert_eq!(a, b);
}

#[test]
fn refit_close_q_keeps_r2() {
    let h = twin(1.337, 5.82, 62_543);
    let r = refit_t_fixed_q(&h, 1.330, &FitConfig::default()).unwrap();
    assert!(r.r2 >= 0.99, "{r:?}");
}

#[test]
fn linearized_twin_is_a_line() {
    // short range keeps every count large enough that rounding is below 1e-9
    let spec = SyntheticSpec::deterministic("twin", 4.0 / 3.0, 3.0, 1_000_000_000_000, 60);
    let h = generate_deterministic(&spec).unwrap();
    let pts = linearize(&h, 4.0 / 3.0, 2).unwrap();
    assert_eq!(pts[0], (0, 0.0));
    let (x, y) = pts.iter().find(|p| p.0 == 9).copied().unwrap();
    assert_eq!(x, 9);
    assert!((y + 3.0).abs() < 1e-9);
    let xy: Vec<(f64, f64)> = pts.iter().map(|&(x, y)| (x as f64, y)).collect();
    let lf = line_fit(&xy).unwrap();
    assert!((lf.slope * 3.0 + 1.0).abs() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn scale_invariance(q in 1.28f64..1.42, t in 3.0f64..7.0, k in 2u64..50) {
        let cfg = FitConfig::default();
        let h = twin(q, t, 62_543);
        let a = fit(&h, &cfg).unwrap();
        let b = fit(&h.scaled(k), &cfg).unwrap();
        // scaling moves bins across the count cutoff, so allow one q step
        prop_assert!((a.q - b.q).abs() <= cfg.q_grid.step + 1e-9, "{a:?} {b:?}");
        prop_assert!((a.t - b.t).abs() <= 0.01 * a.t, "{a:?} {b:?}");
    }

    #[test]
    fn ranking_monotonicity(q in 1.28f64..1.42, tb in 2.5f64..6.0, gap in 0.1f64..2.0) {
        let cfg = FitConfig::default();
        let a = fit(&twin(q, tb + gap, 30_000), &cfg).unwrap();
        let b = fit(&twin(q, tb, 30_000), &cfg).unwrap();
        prop_assert!(a.t > b.t, "{a:?} {b:?}");
    }
}

proptest! {
    #[test]
    fn model_is_decreasing(q in 1.01f64..1.99, t in 0.1f64..50.0, c in 2u64..10_000) {
        let here = model_eval(c, q, t, 2, 1e6).unwrap();
        let next = model_eval(c + 1, q, t, 2, 1e6).unwrap();
        prop_assert!(next < here);
    }

    #[test]
    fn model_is_anchored(q in 1.01f64..1.99, t in 0.1f64..50.0, anchor in 1.0f64..1e9) {
        prop_assert_eq!(model_eval(2, q, t, 2, anchor).unwrap(), anchor);
    }
}
