//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Every threshold is pinned below.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use breakwatch::edmx::median_divergence;
use breakwatch::energy::{divergence, e_hat};
use breakwatch::eval::{synthesize, ttd, SynthSpec};
use breakwatch::interval_tree::MedianQuery;
use breakwatch::median::median_by_sort;
use breakwatch::robust::{q_tilde, RobustDivergenceSpec};
use breakwatch::{
    analyze, edm, edmx, scale_to_unit, validate_series, BetweenSelection, Detection,
    DetectionConfig, IntervalTree, MedianHeapPair, MedianSource, Method,
};
use breakwatch_cli::{evaluate, median_count, run_bench, BenchRow};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// Speed.
const SPEED_SIZE: usize = 2000;
const SPEED_SIZES: [usize; 3] = [500, 1000, 2000];
const MAX_TIME_RATIO: f64 = 0.5;
const TARGET_SPEEDUP: (f64, f64) = (2.0, 6.0);
const MAX_BENCH_SECONDS: f64 = 600.0;

// Interval-tree quality.
const TREE_DEPTH: u32 = 10;
const TREE_SAMPLE: usize = 1000;
const TREE_TRIALS: u64 = 100;
const TREE_REL_TOL: f64 = 0.10;
const TREE_MIN_GOOD: usize = 95;
const TREE_MAX_SECONDS: f64 = 1.0;

// Significance.
const SIG_TRIALS: u64 = 100;
const SIG_N: usize = 100;
const SIG_DELTA: usize = 10;
const SIG_SHIFT_IN_SD: f64 = 3.0;
const NULL_REJECT_BAND: (f64, f64) = (0.01, 0.12);
const MIN_POWER: f64 = 0.95;

// Oracle equivalence.
const ORACLE_CASES: u64 = 200;
const ORACLE_MAX_N: usize = 80;
const ORACLE_DELTAS: [usize; 3] = [2, 3, 5];
const ORACLE_TOL: f64 = 1e-12;

// Robustness.
const ROBUST_TRIALS: u64 = 100;
const ROBUST_SEGMENT: usize = 200;
const ROBUST_SHIFT: f64 = 1.0;
const ROBUST_SD: f64 = 0.1;
const ROBUST_ANOMALIES: usize = 5;
const ROBUST_MAGNITUDE: f64 = 10.0;
const ROBUST_MAX_MEDIAN_TTD: f64 = 2.0;
const MATCH_WINDOW: usize = 10;

// Median structures.
const HEAP_ADDS: usize = 10_000;

// Energy algebra.
const ENERGY_CASES: u64 = 200;
const ENERGY_TOL: f64 = 1e-10;

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn speed() -> Outcome {
    let config = DetectionConfig::default();
    let start = Instant::now();
    let rows = run_bench(&SPEED_SIZES, &Method::ALL, 1, &config).expect("bench runs");
    let total = start.elapsed().as_secs_f64();
    let at = |m: Method| -> &BenchRow {
        rows.iter()
            .find(|r| r.size == SPEED_SIZE && r.method == m)
            .expect("row present")
    };
    let base = at(Method::Edivisive).median_seconds;
    let (edm_t, edmx_t) = (
        at(Method::Edm).median_seconds,
        at(Method::Edmx).median_seconds,
    );
    let ok = edm_t <= MAX_TIME_RATIO * base
        && edmx_t <= MAX_TIME_RATIO * base
        && total < MAX_BENCH_SECONDS;
    let in_band = |s: f64| (TARGET_SPEEDUP.0..=TARGET_SPEEDUP.1).contains(&s);
    let (s_edm, s_edmx) = (base / edm_t, base / edmx_t);
    outcome(
        ok,
        format!(
            "n={SPEED_SIZE}, R={}: edivisive {base:.1}s, edm {edm_t:.1}s ({s_edm:.1}x{}), edmx {edmx_t:.1}s ({s_edmx:.1}x{}); full bench {total:.0}s",
            config.permutations,
            if in_band(s_edm) { "" } else { ", outside 2-6x target band" },
            if in_band(s_edmx) { "" } else { ", outside 2-6x target band" },
        ),
    )
}

fn tree_quality() -> Outcome {
    let samples: Vec<Vec<f64>> = (0..TREE_TRIALS)
        .map(|t| {
            let mut r = rng(7000 + t);
            (0..TREE_SAMPLE).map(|_| r.random::<f64>()).collect()
        })
        .collect();
    let start = Instant::now();
    let mut good = 0;
    for xs in &samples {
        let mut tree = IntervalTree::new(TREE_DEPTH).unwrap();
        for &x in xs {
            tree.insert(x).unwrap();
        }
        let approx = tree.approximate_median().unwrap();
        let truth = median_by_sort(xs).unwrap();
        if ((approx - truth) / truth).abs() < TREE_REL_TOL {
            good += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        good >= TREE_MIN_GOOD && secs < TREE_MAX_SECONDS,
        format!("{good}/{TREE_TRIALS} trials within 10% of the sort median, {secs:.3}s"),
    )
}

fn rejection_rate(method: Method, shift: f64, seed0: u64) -> f64 {
    let config = DetectionConfig::default().with_delta(SIG_DELTA);
    let hits = (0..SIG_TRIALS)
        .filter(|t| {
            let (lengths, means) = if shift == 0.0 {
                (vec![SIG_N], vec![0.0])
            } else {
                (vec![SIG_N / 2, SIG_N - SIG_N / 2], vec![0.0, shift])
            };
            let series = synthesize(&SynthSpec {
                segment_lengths: lengths,
                segment_means: means,
                noise_sd: 1.0,
                anomaly_count: 0,
                anomaly_magnitude: 0.0,
                seed: seed0 + t,
            })
            .unwrap();
            let config = config.clone().with_seed(seed0 + t);
            analyze(&series, method, &config).unwrap().significant
        })
        .count();
    hits as f64 / SIG_TRIALS as f64
}

fn significance() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for method in [Method::Edm, Method::Edmx] {
        let null = rejection_rate(method, 0.0, 100);
        let power = rejection_rate(method, SIG_SHIFT_IN_SD, 500);
        ok &= (NULL_REJECT_BAND.0..=NULL_REJECT_BAND.1).contains(&null) && power >= MIN_POWER;
        parts.push(format!(
            "{method:?}: null rejection {null:.2}, power at 3 sd {power:.2}"
        ));
    }
    outcome(
        ok,
        format!("n={SIG_N}, delta={SIG_DELTA}, R=199; {}", parts.join("; ")),
    )
}

/// First strict maximum scanning τ then κ upwards.
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

fn random_series(r: &mut ChaCha8Rng, delta: usize) -> Vec<f64> {
    let n = r.random_range(2 * delta..=ORACLE_MAX_N);
    let tied = r.random_bool(0.3);
    (0..n)
        .map(|_| {
            if tied {
                r.random_range(0..4) as f64
            } else {
                r.random_range(-10.0..10.0)
            }
        })
        .collect()
}

fn oracle_equivalence() -> Outcome {
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for case in 0..ORACLE_CASES {
        let mut r = rng(9000 + case);
        let delta = ORACLE_DELTAS[case as usize % ORACLE_DELTAS.len()];
        let values = random_series(&mut r, delta);
        let between = if r.random_bool(0.5) {
            BetweenSelection::Tail
        } else {
            BetweenSelection::Head
        };
        let config = DetectionConfig::default()
            .with_delta(delta)
            .with_between(between);
        let z = scale_to_unit(&validate_series(values.clone()).unwrap()).values;
        let spec = RobustDivergenceSpec::new(config.alpha, delta, between).unwrap();
        let tree = MedianSource::Tree {
            depth: config.tree_depth,
        };

        let edm_got = edm::edm_detect(&validate_series(values.clone()).unwrap(), &config).unwrap();
        let edm_want = argmax(z.len(), delta, |t, k| {
            q_tilde(&z[..t], &z[t..k], &spec, tree).unwrap()
        });
        let edmx_got = edmx::detect_values(&values, &config).unwrap();
        let edmx_want = argmax(z.len(), delta, |t, k| {
            let (a, b) = (
                median_by_sort(&z[..t]).unwrap(),
                median_by_sort(&z[t..k]).unwrap(),
            );
            let (n, m) = (t as f64, (k - t) as f64);
            n * m / (n + m) * median_divergence(a, b)
        });
        for (name, got, want) in [("edm", edm_got, edm_want), ("edmx", edmx_got, edmx_want)] {
            checked += 1;
            let same = (got.tau, got.kappa) == (want.tau, want.kappa)
                && (got.statistic - want.statistic).abs() <= ORACLE_TOL;
            if !same {
                mismatches.push(format!("{name} case {case}"));
            }
        }
    }
    outcome(
        mismatches.is_empty(),
        format!(
            "{checked} detector runs over {ORACLE_CASES} series, {} mismatches{}",
            mismatches.len(),
            mismatches
                .first()
                .map(|m| format!(" (first: {m})"))
                .unwrap_or_default()
        ),
    )
}

fn robustness() -> Outcome {
    let dataset: Vec<(String, breakwatch::TimeSeries)> = (0..ROBUST_TRIALS)
        .map(|t| {
            let series = synthesize(&SynthSpec {
                segment_lengths: vec![ROBUST_SEGMENT, ROBUST_SEGMENT],
                segment_means: vec![0.0, ROBUST_SHIFT],
                noise_sd: ROBUST_SD,
                anomaly_count: ROBUST_ANOMALIES,
                anomaly_magnitude: ROBUST_MAGNITUDE,
                seed: 3000 + t,
            })
            .unwrap();
            (format!("s{t:03}"), series)
        })
        .collect();
    let config = DetectionConfig::default();
    let (rows, summary) = evaluate(
        &dataset,
        &[Method::Edmx, Method::Edivisive],
        &config,
        None,
        MATCH_WINDOW,
    )
    .expect("evaluation runs");
    let median_ttd = |m: Method| {
        let ttds: Vec<usize> = rows
            .iter()
            .filter(|r| r.method == m)
            .filter_map(|r| ttd(ROBUST_SEGMENT, r.tau_hat))
            .collect();
        median_count(&ttds).unwrap_or(f64::INFINITY)
    };
    let f = |m: Method| {
        summary
            .methods
            .iter()
            .find(|s| s.method == m)
            .unwrap()
            .f_measure
    };
    let (t_x, t_e) = (median_ttd(Method::Edmx), median_ttd(Method::Edivisive));
    let (f_x, f_e) = (f(Method::Edmx), f(Method::Edivisive));
    outcome(
        t_x <= ROBUST_MAX_MEDIAN_TTD && t_x <= t_e && f_x >= f_e,
        format!("median |TTD| edmx {t_x}, edivisive {t_e}; F at w={MATCH_WINDOW}: edmx {f_x:.3}, edivisive {f_e:.3}"),
    )
}

fn kth(values: &[f64], k: usize) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v[k - 1]
}

fn median_structures() -> Outcome {
    let mut r = rng(11);
    let mut heap = MedianHeapPair::new();
    let mut seen = Vec::with_capacity(HEAP_ADDS);
    let mut heap_bad = 0;
    for i in 0..HEAP_ADDS {
        let x = if i % 4 == 0 {
            r.random_range(0..10) as f64
        } else {
            r.random_range(-1e3..1e3)
        };
        heap.add(x);
        seen.push(x);
        if i % 50 == 0 || i + 1 == HEAP_ADDS {
            heap_bad += usize::from(heap.median().unwrap() != median_by_sort(&seen).unwrap());
        }
    }

    let (mut leaf_queries, mut tree_bad) = (0, 0);
    for trial in 0..2000u64 {
        let mut r = rng(20_000 + trial);
        let depth = r.random_range(1..=12u32);
        let n = r.random_range(1..300);
        let grid = r.random_bool(0.5);
        let xs: Vec<f64> = (0..n)
            .map(|_| {
                if grid {
                    r.random_range(0..=16) as f64 / 16.0
                } else {
                    r.random::<f64>()
                }
            })
            .collect();
        let mut tree = IntervalTree::new(depth).unwrap();
        for &x in &xs {
            tree.insert(x).unwrap();
        }
        if let MedianQuery::Leaf { value, .. } = tree.median_query().unwrap() {
            leaf_queries += 1;
            let target = kth(&xs, xs.len().div_ceil(2));
            tree_bad += usize::from((value - target).abs() > 0.5f64.powi(depth as i32));
        }
    }
    outcome(
        heap_bad == 0 && tree_bad == 0 && leaf_queries > 0,
        format!(
            "heap: {heap_bad} mismatches over {HEAP_ADDS} adds; tree: {tree_bad} of {leaf_queries} non-tie queries outside 2^-D"
        ),
    )
}

fn energy_algebra() -> Outcome {
    let mut failures = Vec::new();
    for case in 0..ENERGY_CASES {
        let mut r = rng(40_000 + case);
        let sample = |r: &mut ChaCha8Rng| -> Vec<f64> {
            let n = r.random_range(2..40);
            (0..n).map(|_| r.random_range(-50.0..50.0)).collect()
        };
        let (x, y) = (sample(&mut r), sample(&mut r));
        let alpha = match case % 3 {
            0 => 2.0,
            1 => 1.0,
            _ => r.random_range(0.05..=2.0),
        };
        let shift = r.random_range(-1e3..1e3);
        let scale = r.random_range(0.05..20.0) * if r.random_bool(0.5) { -1.0 } else { 1.0 };

        let e = e_hat(&x, &y, alpha).unwrap();
        if e_hat(&y, &x, alpha).unwrap() != e {
            failures.push(format!("symmetry case {case}"));
        }
        let moved = |v: &[f64], f: &dyn Fn(f64) -> f64| v.iter().map(|&a| f(a)).collect::<Vec<_>>();
        let et = e_hat(
            &moved(&x, &|a| a + shift),
            &moved(&y, &|a| a + shift),
            alpha,
        )
        .unwrap();
        if (et - e).abs() > ENERGY_TOL * e.abs().max(1.0) {
            failures.push(format!("translation case {case}"));
        }
        let es = e_hat(
            &moved(&x, &|a| a * scale),
            &moved(&y, &|a| a * scale),
            alpha,
        )
        .unwrap();
        let factor = scale.abs().powf(alpha);
        // Relative to the magnitude of the distance sums, which bound the
        // rounding error of their difference.
        if (es - factor * e).abs() > ENERGY_TOL * factor * 100f64.powf(alpha) {
            failures.push(format!("scale case {case}"));
        }
        let d = divergence(&x, &y, alpha).unwrap();
        let (n, m) = (x.len() as f64, y.len() as f64);
        if d.q_hat != n * m / (n + m) * d.e_hat {
            failures.push(format!("prefactor case {case}"));
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{ENERGY_CASES} random sample pairs, {} violations{}",
            failures.len(),
            failures
                .first()
                .map(|f| format!(" (first: {f})"))
                .unwrap_or_default()
        ),
    )
}

fn cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_breakwatch"))
        .args(args)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

fn read(dir: &Path, file: &str) -> Vec<u8> {
    std::fs::read(dir.join(file)).unwrap_or_else(|e| panic!("{}: {e}", dir.join(file).display()))
}

fn determinism() -> Outcome {
    let root = tempfile::tempdir().unwrap();
    let root = root.path();
    let p = |name: &str| root.join(name).display().to_string();
    let mut differing = Vec::new();
    let mut compared = 0;
    let mut compare = |what: &str, a: Vec<u8>, b: Vec<u8>| {
        compared += 1;
        if a != b {
            differing.push(what.to_string());
        }
    };

    let synth = |out: &str| {
        cli(&[
            "synth",
            "--lengths",
            "60,60",
            "--means",
            "0,1",
            "--sd",
            "0.2",
            "--anomalies",
            "3",
            "--seed",
            "5",
            "--count",
            "4",
            "--name",
            "s",
            "--out",
            out,
        ])
    };
    let (sa, sb) = (synth(&p("synth_a")), synth(&p("synth_b")));
    compare("synth stdout", sa, sb);
    for f in [
        "s_0.csv",
        "s_0.json",
        "s_3.csv",
        "s_3.json",
        "manifest.json",
    ] {
        compare(
            f,
            read(&root.join("synth_a"), f),
            read(&root.join("synth_b"), f),
        );
    }

    let input = root.join("synth_a").join("s_1.csv").display().to_string();
    for method in ["edm", "edmx", "edivisive"] {
        let detect = |out: &str| {
            cli(&[
                "detect", &input, "--method", method, "--delta", "8", "--seed", "7", "--out", out,
            ])
        };
        let (a, b) = (p(&format!("det_{method}_a")), p(&format!("det_{method}_b")));
        compare("detect stdout", detect(&a), detect(&b));
        for f in ["report.json", "annotated.csv"] {
            compare(f, read(Path::new(&a), f), read(Path::new(&b), f));
        }
    }

    let data = p("synth_a");
    let eval = |out: &str| {
        cli(&[
            "eval",
            &data,
            "--delta",
            "8",
            "--permutations",
            "49",
            "--out",
            out,
        ])
    };
    compare("eval stdout", eval(&p("eval_a")), eval(&p("eval_b")));
    for f in ["scoreboard.csv", "summary.json"] {
        compare(
            f,
            read(&root.join("eval_a"), f),
            read(&root.join("eval_b"), f),
        );
    }

    // Timings differ run to run; everything else must not.
    let bench = |out: &str| {
        cli(&[
            "bench",
            "--sizes",
            "200,300",
            "--permutations",
            "9",
            "--delta",
            "10",
            "--out",
            out,
        ]);
        let text = String::from_utf8(read(Path::new(out), "bench.csv")).unwrap();
        let shape: Vec<String> = text
            .lines()
            .map(|l| {
                let cols: Vec<&str> = l.split(',').collect();
                format!("{},{},{}", cols[0], cols[1], cols[5])
            })
            .collect();
        (
            read(Path::new(out), "manifest.json"),
            shape.join("\n").into_bytes(),
        )
    };
    let ((ma, sa), (mb, sb)) = (bench(&p("bench_a")), bench(&p("bench_b")));
    compare("bench manifest", ma, mb);
    compare("bench rows", sa, sb);

    outcome(
        differing.is_empty(),
        format!(
            "{compared} artifacts compared across two runs of synth, detect x3, eval, bench; {} differ{}",
            differing.len(),
            if differing.is_empty() { String::new() } else { format!(": {}", differing.join(", ")) }
        ),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("oracle equivalence", oracle_equivalence),
        ("median structures", median_structures),
        ("energy-statistic algebra", energy_algebra),
        ("interval-tree quality", tree_quality),
        ("cli determinism", determinism),
        ("significance defaults", significance),
        ("robustness contrast", robustness),
        ("speed", speed),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        failed += usize::from(!result.pass);
        println!(
            "{} {name}: {} [{:.1}s]",
            if result.pass { "PASS" } else { "FAIL" },
            result.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
