//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use num_rational::BigRational;
use plancherel::chains::{mixing_report, transition_matrix};
use plancherel::exact::to_f64;
use plancherel::plancherel::{sample_batch, Method};
use plancherel::stein::{clt_experiment, stein_bound_constant_check, term1_closed_form, term1_exact, term2_empirical};
use plancherel::suite;
use plancherel::tensor::deviation_report;
use plancherel::{ChainSpec, ExperimentReport, Partition, SeededStream};
use std::time::{Duration, Instant};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn criterion(id: u32, title: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= budget;
    let passed = out.passed && in_time;
    println!(
        "criterion {id} {}: {title} [{:.1}s / {}s budget] {}",
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs(),
        out.detail
    );
    if !in_time {
        println!("    over the runtime budget");
    }
    passed
}

fn exact_identities() -> Outcome {
    let runs = match suite::run(None, 8) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let mut checked = 0;
    let mut failed = Vec::new();
    for (_, assertions) in &runs {
        for a in assertions {
            checked += 1;
            if !a.passed {
                failed.push(format!("{} {}", a.name, a.detail));
            }
        }
    }
    // First Stein term at n = 2 is 1/4.
    let quarter = BigRational::new(1.into(), 4.into());
    let first_term_ok = term1_closed_form(2) == quarter && term1_exact(2).map(|v| v == quarter).unwrap_or(false);
    if !first_term_ok {
        failed.push("first Stein term at n=2 is not 1/4".into());
    }
    for f in &failed {
        println!("    failed: {f}");
    }
    outcome(failed.is_empty(), format!("{checked} exact assertions, {} failed", failed.len()))
}

fn mixing() -> Outcome {
    let (n, k) = (6u32, 1u32);
    let rep = match mixing_report(n, k, 40) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let beta_oracle = ((n - k) * (n - k - 1)) as f64 / (n * (n - 1)) as f64;
    let beta_ok = rep.beta.as_ref().map(|b| (to_f64(b) - beta_oracle).abs() < 1e-15).unwrap_or(false);

    // Float matrix powers as an independent check on the exact TV column.
    let matrix = transition_matrix(ChainSpec::downup(n, k).unwrap()).unwrap();
    let p: Vec<Vec<f64>> = matrix.entries.iter().map(|row| row.iter().map(to_f64).collect()).collect();
    let pi: Vec<f64> = matrix.stationary.iter().map(to_f64).collect();
    let start = matrix.index(&Partition::row(n)).unwrap();
    let mut dist = vec![0.0; p.len()];
    dist[start] = 1.0;
    let nf: f64 = (1..=n).map(f64::from).product();
    let mut rows_ok = rep.rows.len() == 41;
    for row in &rep.rows {
        let tv: f64 = 0.5 * dist.iter().zip(&pi).map(|(a, b)| (a - b).abs()).sum::<f64>();
        rows_ok &= (tv - row.tv).abs() < 1e-12;
        rows_ok &= row.tv_le_l2 && row.l2_le_bound == Some(true);
        rows_ok &= row.l2 <= nf.sqrt() * beta_oracle.powi(row.r as i32) * (1.0 + 1e-12);
        dist = (0..p.len()).map(|j| (0..p.len()).map(|i| dist[i] * p[i][j]).sum()).collect();
    }
    let thresholds_ok = rep.thresholds.len() == 3 && rep.thresholds.iter().all(|t| t.passed);
    outcome(
        beta_ok && rows_ok && thresholds_ok && rep.passed,
        format!(
            "beta={}, TV(40)={:.3e}, thresholds c=1,2,4 {}",
            rep.beta.map(|b| b.to_string()).unwrap_or_default(),
            rep.rows.last().map(|r| r.tv).unwrap_or(f64::NAN),
            if thresholds_ok { "honored" } else { "violated" }
        ),
    )
}

fn tensor() -> Outcome {
    let mut checked = 0;
    let mut failed = Vec::new();
    for n in 3..=8u32 {
        for k in 1..=2u32 {
            for r in 1..=20u32 {
                checked += 1;
                match deviation_report(n, k, r, &[]) {
                    Ok(rep) => {
                        let recursion = if k == 1 { rep.recursion_agrees == Some(true) } else { true };
                        if !(rep.within_bound && rep.integral && rep.dimension_conserved && recursion) {
                            failed.push(format!("n={n} k={k} r={r}"));
                        }
                    }
                    Err(e) => failed.push(format!("n={n} k={k} r={r}: {e}")),
                }
            }
        }
    }
    for f in &failed {
        println!("    failed: {f}");
    }
    outcome(failed.is_empty(), format!("{checked} (n, k, r) cases, {} failed", failed.len()))
}

fn clt() -> Outcome {
    let grid = match stein_bound_constant_check(2, 1_000_000, 50) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let samples = 200_000;
    let noise = 0.5 / (samples as f64).sqrt();
    let mut distances = Vec::new();
    let mut ok = grid.passed;
    for (i, n) in [16u32, 64, 256].into_iter().enumerate() {
        match clt_experiment(n, samples, SeededStream::new(1000 + i as u64)) {
            Ok(rep) => {
                let bound = 40.1 * (n as f64).powf(-0.25);
                ok &= rep.kolmogorov_distance <= bound && rep.pathwise_violations == 0;
                distances.push((n, rep.kolmogorov_distance));
            }
            Err(e) => return outcome(false, e.to_string()),
        }
    }
    let monotone = distances.windows(2).all(|w| w[1].1 <= w[0].1 + 2.0 * noise);
    let small_at_256 = distances.last().map(|d| d.1 < 0.05).unwrap_or(false);
    let text: Vec<String> = distances.iter().map(|(n, d)| format!("D({n})={d:.4}")).collect();
    outcome(ok && monotone && small_at_256, format!("grid worst ratio {:.3}; {}", grid.worst_ratio, text.join(", ")))
}

fn pathwise() -> Outcome {
    let mut ok = true;
    let mut text = Vec::new();
    for (i, n) in [16u32, 64].into_iter().enumerate() {
        match term2_empirical(n, 100_000, SeededStream::new(2000 + i as u64)) {
            Ok(rep) => {
                ok &= rep.pathwise_violations == 0 && rep.passed;
                text.push(format!(
                    "n={n}: {} violations, E|W*-W|^3={:.4e} <= {:.4e}",
                    rep.pathwise_violations, rep.empirical, rep.bound
                ));
            }
            Err(e) => {
                ok = false;
                text.push(format!("n={n}: {e}"));
            }
        }
    }
    outcome(ok, text.join("; "))
}

fn determinism() -> Outcome {
    let run = || {
        let clt = clt_experiment(32, 20_000, SeededStream::new(7)).expect("clt runs");
        let draws = sample_batch(Method::Growth, 30, 5_000, SeededStream::new(7));
        let draws_rsk = sample_batch(Method::Rsk, 30, 5_000, SeededStream::new(7));
        let report = ExperimentReport::new("clt").param("n", 32).seed(7).results(&clt);
        (report.to_masked_json(), draws, draws_rsk)
    };
    let a = run();
    let b = run();
    outcome(a == b, format!("{} bytes of masked JSON and 10000 draws compared", a.0.len()))
}

fn main() {
    let results = [
        criterion(1, "exact identity suite, n <= 8", Duration::from_secs(120), exact_identities),
        criterion(2, "exact mixing of down-up(1) at n=6, r=0..40", Duration::from_secs(10), mixing),
        criterion(3, "tensor-power deviations, n=3..8, k=1,2, r<=20", Duration::from_secs(60), tensor),
        criterion(4, "Stein bound grid and Monte Carlo Kolmogorov distances", Duration::from_secs(300), clt),
        criterion(5, "pathwise jump bound and third moment", Duration::from_secs(120), pathwise),
        criterion(6, "seeded determinism", Duration::from_secs(120), determinism),
    ];
    let failed = results.iter().filter(|p| !**p).count();
    println!("acceptance: {} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
