use proptest::prelude::*;
use qcite::synth::{sampler_cdf, SyntheticSpec};
use qcite::{generate_deterministic, generate_sampled, sample_citation};

proptest! {
    #[test]
    fn quantile_is_increasing(q in 1.01f64..1.99, t in 0.1f64..20.0, a in 1e-9f64..0.999_999, b in 1e-9f64..0.999_999) {
        prop_assume!((a - b).abs() > 1e-9);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(sample_citation(lo, q, t).unwrap() < sample_citation(hi, q, t).unwrap());
    }

    #[test]
    fn temperature_is_a_scale(q in 1.05f64..1.95, t in 0.1f64..20.0, u in 0.001f64..0.999) {
        let one = sample_citation(u, q, 1.0).unwrap();
        let scaled = sample_citation(u, q, t).unwrap();
        prop_assert!(((scaled - t * one) / scaled).abs() < 1e-12);
    }

    #[test]
    fn deterministic_counts_never_increase(q in 1.05f64..1.95, t in 0.5f64..20.0, anchor in 1u64..1_000_000) {
        let h = generate_deterministic(&SyntheticSpec::deterministic("d", q, t, anchor, 5_000)).unwrap();
        prop_assert_eq!(h.count(2), anchor);
        let counts: Vec<u64> = h.support().map(|(_, n)| n).collect();
        prop_assert!(counts.windows(2).all(|w| w[0] >= w[1]));
        prop_assert_eq!(h.count(0) + h.count(1), 0);
    }
}

#[test]
fn survival_at_fifty_within_three_standard_errors() {
    let (q, t, n) = (4.0 / 3.0, 5.0, 1_000_000u64);
    let h = generate_sampled(&SyntheticSpec::sampled("s", q, t, n, 99)).unwrap();
    // c - 2 >= 50  <=>  x >= 50
    let above: u64 = h.support().filter(|&(c, _)| c >= 52).map(|(_, k)| k).sum();
    let p = 1.0 - sampler_cdf(50.0, q, t).unwrap();
    let se = (p * (1.0 - p) / n as f64).sqrt();
    let emp = above as f64 / n as f64;
    assert!((emp - p).abs() < 3.0 * se, "empirical {emp} analytic {p} se {se}");
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let spec = SyntheticSpec::sampled("s", 1.36, 4.0, 300_000, 5);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| generate_sampled(&spec).unwrap())
    };
    assert_eq!(run(1), run(4));
}
