use std::time::{Duration, Instant};

use breakwatch::baseline::edivisive_values;
use breakwatch::edmx::median_divergence;
use breakwatch::eval::{synthesize, SynthSpec};
use breakwatch::median::median_by_sort;
use breakwatch::robust::{q_tilde, RobustDivergenceSpec};
use breakwatch::{
    edm, edmx, scale_to_unit, validate_series, BetweenSelection, Detection, DetectionConfig,
    MedianSource,
};
use proptest::prelude::*;

/// Argmax over the feasible grid, scanning τ then κ upwards and keeping the
/// first strict maximum, which is the documented tie rule.
fn argmax(n: usize, delta: usize, mut q: impl FnMut(usize, usize) -> f64) -> Detection {
    let mut best = Detection {
        tau: 0,
        kappa: 0,
        statistic: f64::NEG_INFINITY,
    };
    for tau in delta..=n - delta {
        for kappa in tau + delta..=n {
            let v = q(tau, kappa);
            if v > best.statistic {
                best = Detection {
                    tau,
                    kappa,
                    statistic: v,
                };
            }
        }
    }
    best
}

fn scaled(values: &[f64]) -> Vec<f64> {
    scale_to_unit(&validate_series(values.to_vec()).unwrap()).values
}

fn edm_oracle(values: &[f64], config: &DetectionConfig, source: MedianSource) -> Detection {
    let z = scaled(values);
    let spec =
        RobustDivergenceSpec::new(config.alpha, config.delta, config.between_selection).unwrap();
    argmax(z.len(), config.delta, |t, k| {
        q_tilde(&z[..t], &z[t..k], &spec, source).unwrap()
    })
}

fn edmx_oracle(values: &[f64], delta: usize) -> Detection {
    let z = scaled(values);
    argmax(z.len(), delta, |t, k| {
        let a = median_by_sort(&z[..t]).unwrap();
        let b = median_by_sort(&z[t..k]).unwrap();
        let (n, m) = (t as f64, (k - t) as f64);
        n * m / (n + m) * median_divergence(a, b)
    })
}

fn series_and_delta() -> impl Strategy<Value = (Vec<f64>, usize)> {
    prop_oneof![Just(2usize), Just(3), Just(5)].prop_flat_map(|delta| {
        let values = prop_oneof![
            prop::collection::vec(-10.0f64..10.0, 2 * delta..=80),
            // Heavy ties.
            prop::collection::vec((0u8..4).prop_map(f64::from), 2 * delta..=80),
        ];
        (values, Just(delta))
    })
}

fn config(delta: usize, between: BetweenSelection, alpha: f64) -> DetectionConfig {
    DetectionConfig {
        alpha,
        ..DetectionConfig::default()
            .with_delta(delta)
            .with_between(between)
    }
}

fn selection() -> impl Strategy<Value = BetweenSelection> {
    prop_oneof![Just(BetweenSelection::Tail), Just(BetweenSelection::Head)]
}

fn same(a: Detection, b: Detection) -> Result<(), TestCaseError> {
    prop_assert_eq!((a.tau, a.kappa), (b.tau, b.kappa));
    prop_assert!(
        (a.statistic - b.statistic).abs() <= 1e-12,
        "{} vs {}",
        a.statistic,
        b.statistic
    );
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 200,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn edm_matches_brute_force_with_exact_medians(
        (v, delta) in series_and_delta(), sel in selection(), alpha in prop_oneof![Just(2.0), Just(1.0), 0.3f64..2.0],
    ) {
        let cfg = config(delta, sel, alpha);
        let got = edm::detect_values(&v, &cfg, MedianSource::Exact).unwrap();
        same(got, edm_oracle(&v, &cfg, MedianSource::Exact))?;
    }

    #[test]
    fn edm_matches_brute_force_with_tree_medians((v, delta) in series_and_delta(), sel in selection()) {
        let cfg = config(delta, sel, 2.0);
        let got = edm::edm_detect(&validate_series(v.clone()).unwrap(), &cfg).unwrap();
        same(got, edm_oracle(&v, &cfg, MedianSource::Tree { depth: cfg.tree_depth }))?;
    }

    #[test]
    fn edmx_matches_brute_force((v, delta) in series_and_delta()) {
        let got = edmx::detect_values(&v, &DetectionConfig::default().with_delta(delta)).unwrap();
        same(got, edmx_oracle(&v, delta))?;
        prop_assert!(got.statistic >= 0.0);
    }

    #[test]
    fn argmax_is_affine_invariant_on_continuous_data(
        delta in prop_oneof![Just(2usize), Just(3), Just(5)],
        v in prop::collection::vec(-10.0f64..10.0, 10..=80),
        a in 0.01f64..100.0, b in -100.0f64..100.0,
    ) {
        let w: Vec<f64> = v.iter().map(|x| a * x + b).collect();
        affine_check(&v, &w, delta)?;
    }

    #[test]
    fn argmax_is_affine_invariant_on_tied_data_under_exact_maps(
        (v, delta) in series_and_delta(), k in -6i32..6, b in -64i32..64,
    ) {
        // Power-of-two scale and integer shift keep every step exact, so
        // tied statistics stay exactly tied.
        let a = 2f64.powi(k);
        let w: Vec<f64> = v.iter().map(|x| a * x + f64::from(b)).collect();
        affine_check(&v, &w, delta)?;
    }

    #[test]
    fn edmx_survives_one_anomaly(
        delta in 2usize..6,
        extra in (0usize..20, 0usize..20),
        levels in (-5.0f64..5.0, 0.5f64..5.0),
        position in any::<prop::sample::Index>(),
        value in -1e6f64..1e6,
    ) {
        let (left, right) = (2 * delta + 1 + extra.0, 2 * delta + 1 + extra.1);
        let mut v = vec![levels.0; left];
        v.extend(std::iter::repeat_n(levels.0 + levels.1, right));
        let cfg = DetectionConfig::default().with_delta(delta);
        let clean = edmx::detect_values(&v, &cfg).unwrap();
        let at = position.index(v.len());
        v[at] = value;
        let dirty = edmx::detect_values(&v, &cfg).unwrap();
        prop_assert!(clean.tau.abs_diff(dirty.tau) <= delta, "{} vs {}", clean.tau, dirty.tau);
    }

    #[test]
    fn edmx_survives_one_anomaly_with_minimum_segment_of_three(
        delta in 3usize..6,
        extra in (0usize..20, 0usize..20),
        levels in (-5.0f64..5.0, 0.5f64..5.0),
        position in any::<prop::sample::Index>(),
        value in -1e6f64..1e6,
    ) {
        let (left, right) = (2 * delta + 1 + extra.0, 2 * delta + 1 + extra.1);
        let mut v = vec![levels.0; left];
        v.extend(std::iter::repeat_n(levels.0 + levels.1, right));
        let cfg = DetectionConfig::default().with_delta(delta);
        let clean = edmx::detect_values(&v, &cfg).unwrap();
        let at = position.index(v.len());
        v[at] = value;
        let dirty = edmx::detect_values(&v, &cfg).unwrap();
        prop_assert!(clean.tau.abs_diff(dirty.tau) <= delta, "{} vs {}", clean.tau, dirty.tau);
    }

    #[test]
    fn tree_and_exact_agree_on_clean_steps(
        left in 10usize..60, right in 10usize..60, lo in -5.0f64..5.0, step in 0.1f64..5.0,
        delta in 2usize..6,
    ) {
        let mut v = vec![lo; left];
        v.extend(std::iter::repeat_n(lo + step, right));
        let cfg = DetectionConfig::default().with_delta(delta);
        let exact = edm::detect_values(&v, &cfg, MedianSource::Exact).unwrap();
        let tree = edm::detect_values(&v, &cfg, MedianSource::Tree { depth: 10 }).unwrap();
        prop_assert_eq!(exact.tau, tree.tau);
        let factor = (left * right) as f64 / (left + right) as f64;
        prop_assert!((exact.statistic - tree.statistic).abs() <= factor * 3.0 * 2f64.powi(-9));
    }
}

fn affine_check(v: &[f64], w: &[f64], delta: usize) -> Result<(), TestCaseError> {
    let cfg = DetectionConfig::default().with_delta(delta);
    let before = edmx::detect_values(v, &cfg).unwrap();
    let after = edmx::detect_values(w, &cfg).unwrap();
    prop_assert_eq!(before.tau, after.tau);
    let before = edm::detect_values(v, &cfg, MedianSource::Exact).unwrap();
    let after = edm::detect_values(w, &cfg, MedianSource::Exact).unwrap();
    prop_assert_eq!(before.tau, after.tau);
    Ok(())
}

#[test]
fn two_point_medians_let_one_anomaly_move_edmx() {
    // With δ = 2 the scan visits two-point segments, whose median is the
    // mean of both points, so one extreme value can dominate it.
    let mut v = vec![0.0; 5];
    v.extend([0.5; 5]);
    let cfg = DetectionConfig::default().with_delta(2);
    assert_eq!(edmx::detect_values(&v, &cfg).unwrap().tau, 5);
    v[0] = -650518.3432179678;
    assert_eq!(edmx::detect_values(&v, &cfg).unwrap().tau, 2);
}

#[test]
fn exact_median_scan_is_pulled_toward_the_middle() {
    // A segment median ignores up to half of its points, and τ(κ−τ)/κ
    // rewards balanced splits, so on an unbalanced noise-free step the
    // median scan lands at n/2 while the mean-based scan finds the change.
    let mut v = vec![0.0; 40];
    v.extend([1.0; 80]);
    let cfg = DetectionConfig::default().with_delta(10);
    assert_eq!(edmx::detect_values(&v, &cfg).unwrap().tau, 60);
    assert_eq!(edivisive_values(&v, 2.0, 10).unwrap().tau, 40);
}

fn noisy_step(n: usize, seed: u64) -> Vec<f64> {
    synthesize(&SynthSpec {
        segment_lengths: vec![n / 2, n - n / 2],
        segment_means: vec![0.0, 1.0],
        noise_sd: 0.1,
        anomaly_count: 0,
        anomaly_magnitude: 0.0,
        seed,
    })
    .unwrap()
    .values()
    .to_vec()
}

#[test]
fn mean_and_median_scans_agree_within_one_on_clean_steps() {
    for seed in 0..30 {
        let v = noisy_step(120, seed);
        let a = edivisive_values(&v, 2.0, 10).unwrap();
        let b = edmx::detect_values(&v, &DetectionConfig::default().with_delta(10)).unwrap();
        assert!(
            a.tau.abs_diff(b.tau) <= 1,
            "seed {seed}: {} vs {}",
            a.tau,
            b.tau
        );
    }
}

#[test]
fn edm_runtime_grows_at_most_quadratically_with_log_factor() {
    let cfg = DetectionConfig::default().with_delta(10);
    let time = |n: usize| -> Duration {
        let v = noisy_step(n, 5);
        (0..3)
            .map(|_| {
                let t = Instant::now();
                edm::detect_values(&v, &cfg, MedianSource::Tree { depth: 10 }).unwrap();
                t.elapsed()
            })
            .min()
            .unwrap()
    };
    let t: Vec<Duration> = [500, 1000, 2000].into_iter().map(time).collect();
    for w in t.windows(2) {
        let ratio = w[1].as_secs_f64() / w[0].as_secs_f64();
        assert!(ratio <= 4.4, "doubling n cost {ratio:.2}x ({t:?})");
    }
}
