//! The character-ratio statistic `W`, its exchangeable pair through one
//! step of the up-down chain, exact moment identities, and the Monte Carlo
//! normal-approximation experiment.
//!
//! `W(lambda) = (n-1)/sqrt(2) * chi^lambda(12)/dim(lambda)` is stored as the
//! exact rational `r = (n-1) chi^lambda(12)/dim(lambda)` with `W = r / sqrt 2`,
//! so `W^2 = r^2 / 2` stays rational.

use crate::chains::{transition_matrix, updown_step, ChainSpec, TransitionMatrix};
use crate::characters::{frobenius_ratio, CharacterTable, CycleType};
use crate::error::{Error, Result};
use crate::exact::{rat, rat_int, to_f64};
use crate::partitions::Partition;
use crate::plancherel::rsk_sample;
use crate::stream::{par_batch, SeededStream};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::f64::consts::{E, PI, SQRT_2};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WStat {
    pub lambda: Partition,
    /// `sqrt(2) W`.
    pub rational_part: BigRational,
}

impl WStat {
    pub fn value(&self) -> f64 {
        to_f64(&self.rational_part) / SQRT_2
    }

    /// `W^2`, exactly.
    pub fn squared(&self) -> BigRational {
        &self.rational_part * &self.rational_part / rat_int(2)
    }
}

/// `W(lambda)`, with `W = 0` for `n <= 1`.
pub fn w_statistic(lambda: &Partition) -> WStat {
    let n = lambda.size();
    let rational_part =
        if n < 2 { BigRational::zero() } else { frobenius_ratio(lambda).expect("n >= 2") * rat_int(n - 1) };
    WStat { lambda: lambda.clone(), rational_part }
}

/// `W` in floating point straight from the content sum: `sqrt(2) c(lambda) / n`.
pub fn w_value(lambda: &Partition) -> f64 {
    let n = lambda.size();
    if n < 2 {
        return 0.0;
    }
    SQRT_2 * lambda.content_sum() as f64 / n as f64
}

/// Exact data for the exchangeable-pair identities at one `n`: the
/// up-down(1) matrix, the character table and `r(lambda)` for every state.
pub struct ExactStein {
    pub n: u32,
    pub matrix: TransitionMatrix,
    pub table: CharacterTable,
    pub r: Vec<BigRational>,
}

impl ExactStein {
    pub fn new(n: u32) -> Result<Self> {
        if n < 1 {
            return Err(Error::Argument("need n >= 1".into()));
        }
        let matrix = transition_matrix(ChainSpec::updown(n, 1)?)?;
        let table = CharacterTable::new(n)?;
        let r = matrix.states.iter().map(|l| w_statistic(l).rational_part).collect();
        Ok(Self { n, matrix, table, r })
    }

    fn index(&self, lambda: &Partition) -> Result<usize> {
        self.matrix.index(lambda).ok_or_else(|| Error::Argument(format!("{lambda} is not a partition of {}", self.n)))
    }

    /// `chi^lambda(C)/dim(lambda)`, zero when the class does not exist at this `n`.
    fn class_ratio(&self, i: usize, class: Option<CycleType>) -> BigRational {
        match class {
            Some(c) => self.table.ratio(i, self.table.class_index(&c).expect("class of S_n")),
            None => BigRational::zero(),
        }
    }

    /// `sqrt(2) E^lambda(W*)` from the matrix row, and the predicted
    /// `(1 - 2/(n+1)) sqrt(2) W`.
    pub fn conditional_first_moment(&self, lambda: &Partition) -> Result<(BigRational, BigRational)> {
        let i = self.index(lambda)?;
        let row = &self.matrix.entries[i];
        let from_row: BigRational = row.iter().zip(&self.r).map(|(p, r)| p * r).sum();
        let predicted = (BigRational::one() - rat(2, self.n + 1)) * &self.r[i];
        if from_row != predicted {
            return Err(Error::InvariantViolation(format!(
                "E^lambda(W*) at {lambda}: row gives {from_row}, formula {predicted}"
            )));
        }
        Ok((from_row, predicted))
    }

    /// `E^lambda((W*)^2)` from the matrix row, checked against the
    /// three-term class formula (terms for absent classes vanish).
    pub fn conditional_second_moment(&self, lambda: &Partition) -> Result<BigRational> {
        let i = self.index(lambda)?;
        let from_row = self.second_moment_row(i);
        let formula = self.second_moment_formula(i);
        if from_row != formula {
            return Err(Error::InvariantViolation(format!(
                "E^lambda((W*)^2) at {lambda}: row gives {from_row}, formula {formula}"
            )));
        }
        Ok(from_row)
    }

    fn second_moment_row(&self, i: usize) -> BigRational {
        let half = rat(1, 2);
        self.matrix.entries[i].iter().zip(&self.r).map(|(p, r)| p * r * r * &half).sum()
    }

    fn second_moment_formula(&self, i: usize) -> BigRational {
        let n = self.n as i64;
        if n == 1 {
            return BigRational::zero();
        }
        let three = (n >= 3).then(|| CycleType::three_cycle(self.n));
        let double = (n >= 4).then(|| CycleType::double_transposition(self.n));
        let first = BigRational::one() - rat(1, n);
        let second = rat(2 * (n - 1) * (n - 2) * (n - 2), n * (n + 1)) * self.class_ratio(i, three);
        let third = rat((n - 1) * (n - 2) * (n - 3) * (n - 3), 2 * n * (n + 1)) * self.class_ratio(i, double);
        first + second + third
    }

    /// `E^lambda (W* - W)^2`, summed directly over the matrix row.
    pub fn conditional_square_difference(&self, i: usize) -> BigRational {
        let half = rat(1, 2);
        self.matrix.entries[i]
            .iter()
            .zip(&self.r)
            .map(|(p, r)| {
                let d = r - &self.r[i];
                p * &d * &d * &half
            })
            .sum()
    }

    /// `(E W, E W^2)` under Plancherel, checked against `(0, 1 - 1/n)`.
    pub fn mean_variance_check(&self) -> Result<(BigRational, BigRational)> {
        let pi = &self.matrix.stationary;
        let mean: BigRational = pi.iter().zip(&self.r).map(|(p, r)| p * r).sum();
        let second: BigRational = pi.iter().zip(&self.r).map(|(p, r)| p * r * r).sum::<BigRational>() / rat_int(2);
        let expected_var = if self.n == 1 { BigRational::zero() } else { BigRational::one() - rat(1, self.n) };
        if !mean.is_zero() || second != expected_var {
            return Err(Error::InvariantViolation(format!(
                "n={}: E W = {mean}, E W^2 = {second}, expected 0 and {expected_var}",
                self.n
            )));
        }
        Ok((mean, second))
    }

    /// `E[(-1 + (n+1)/4 E^lambda(W*-W)^2)^2]`, checked against
    /// `(3n^2 - 5n + 6) / (4n^3)`.
    pub fn term1_exact(&self) -> Result<BigRational> {
        let n = self.n as i64;
        let quarter = rat(n + 1, 4);
        let mut total = BigRational::zero();
        for i in 0..self.matrix.len() {
            let direct = self.conditional_square_difference(i);
            // Same quantity via E^lambda(W*) = (1 - 2/(n+1)) W.
            let w2 = &self.r[i] * &self.r[i] / rat_int(2);
            let via_moments = (rat(4, n + 1) - BigRational::one()) * w2 + self.second_moment_row(i);
            if direct != via_moments {
                return Err(Error::InvariantViolation(format!(
                    "E^lambda(W*-W)^2 at {}: {direct} vs {via_moments}",
                    self.matrix.states[i]
                )));
            }
            let inner = &quarter * direct - BigRational::one();
            total += &self.matrix.stationary[i] * &inner * &inner;
        }
        let closed = term1_closed_form(self.n);
        if total != closed {
            return Err(Error::InvariantViolation(format!("n={n}: term1 = {total}, closed form {closed}")));
        }
        Ok(total)
    }

    /// Exchangeability of `(W, W*)`: the joint law aggregated by `r`-value
    /// is symmetric.
    pub fn check_exchangeable(&self) -> Result<()> {
        use std::collections::BTreeMap;
        let mut joint: BTreeMap<(BigRational, BigRational), BigRational> = BTreeMap::new();
        for (i, row) in self.matrix.entries.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                *joint.entry((self.r[i].clone(), self.r[j].clone())).or_insert_with(BigRational::zero) +=
                    &self.matrix.stationary[i] * p;
            }
        }
        for ((a, b), mass) in &joint {
            let back = joint.get(&(b.clone(), a.clone())).cloned().unwrap_or_else(BigRational::zero);
            if *mass != back {
                return Err(Error::InvariantViolation(format!(
                    "n={}: P(W={a}/sqrt2, W*={b}/sqrt2) = {mass} but reverse is {back}",
                    self.n
                )));
            }
        }
        Ok(())
    }

    /// Frobenius' formula against the character table, every `lambda`.
    pub fn check_frobenius(&self) -> Result<()> {
        if self.n < 2 {
            return Ok(());
        }
        let t = Some(CycleType::transposition(self.n));
        for (i, lambda) in self.table.irreps.iter().enumerate() {
            if frobenius_ratio(lambda)? != self.class_ratio(i, t.clone()) {
                return Err(Error::InvariantViolation(format!("Frobenius formula fails at {lambda}")));
            }
        }
        Ok(())
    }
}

/// `(3n^2 - 5n + 6) / (4n^3)`.
pub fn term1_closed_form(n: u32) -> BigRational {
    let n = n as i64;
    rat(3 * n * n - 5 * n + 6, 4 * n * n * n)
}

pub fn conditional_first_moment(lambda: &Partition) -> Result<(BigRational, BigRational)> {
    ExactStein::new(lambda.size())?.conditional_first_moment(lambda)
}

pub fn conditional_second_moment(lambda: &Partition) -> Result<BigRational> {
    ExactStein::new(lambda.size())?.conditional_second_moment(lambda)
}

pub fn mean_variance_check(n: u32) -> Result<(BigRational, BigRational)> {
    ExactStein::new(n)?.mean_variance_check()
}

pub fn term1_exact(n: u32) -> Result<BigRational> {
    ExactStein::new(n)?.term1_exact()
}

/// `(4e sqrt2 / sqrt n)^3 + 2 exp(-2e sqrt n) (2 sqrt2)^3`.
pub fn term2_bound(n: u32) -> f64 {
    let nf = n as f64;
    (4.0 * E * SQRT_2 / nf.sqrt()).powi(3) + 2.0 * (-2.0 * E * nf.sqrt()).exp() * (2.0 * SQRT_2).powi(3)
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Term2Report {
    pub n: u32,
    pub samples: usize,
    pub seed: u64,
    /// Mean of `|W* - W|^3`.
    pub empirical: f64,
    pub standard_error: f64,
    pub bound: f64,
    /// Largest `|W* - W|` seen.
    pub max_jump: f64,
    pub pathwise_violations: usize,
    pub passed: bool,
}

/// One exchangeable transition `lambda -> lambda*` with the content sums of
/// both ends; `W* - W = sqrt2 (c* - c) / n`.
fn sampled_transition<R: rand::Rng + ?Sized>(n: u32, rng: &mut R) -> (Partition, i64) {
    let lambda = rsk_sample(n, rng);
    let next = updown_step(&lambda, rng);
    let delta = next.content_sum() - lambda.content_sum();
    (lambda, delta)
}

/// `|W* - W| <= min(2 sqrt2, (2 sqrt2 / n) max(lambda_1, lambda_1'))`,
/// checked on content sums in integers.
pub fn pathwise_ok(lambda: &Partition, delta: i64) -> bool {
    let n = lambda.size() as i64;
    let widest = lambda.first_row().max(lambda.first_column()) as i64;
    let d = delta.abs();
    d <= 2 * n && d <= 2 * widest
}

/// Monte Carlo estimate of `E|W* - W|^3` under Plancherel with the
/// pathwise jump bound enforced on every draw.
pub fn term2_empirical(n: u32, samples: usize, base: SeededStream) -> Result<Term2Report> {
    if n < 2 || samples == 0 {
        return Err(Error::Argument("term2_empirical needs n >= 2 and samples >= 1".into()));
    }
    let draws = par_batch(base, samples, |rng| sampled_transition(n, rng));
    let violations = draws.iter().filter(|(l, d)| !pathwise_ok(l, *d)).count();
    if violations > 0 {
        let (l, d) = draws.iter().find(|(l, d)| !pathwise_ok(l, *d)).expect("violation");
        return Err(Error::InvariantViolation(format!(
            "|W*-W| bound fails from {l} (content change {d}); {violations} violations"
        )));
    }
    let scale = SQRT_2 / n as f64;
    let cubes: Vec<f64> = draws.iter().map(|(_, d)| (scale * *d as f64).abs().powi(3)).collect();
    let (mean, var) = mean_var(&cubes);
    let standard_error = (var / samples as f64).sqrt();
    let bound = term2_bound(n);
    let max_jump = draws.iter().map(|(_, d)| (scale * *d as f64).abs()).fold(0.0, f64::max);
    Ok(Term2Report {
        n,
        samples,
        seed: base.seed,
        empirical: mean,
        standard_error,
        bound,
        max_jump,
        pathwise_violations: 0,
        passed: mean <= bound + 4.0 * standard_error,
    })
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 { xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    (mean, var)
}

/// Standard normal CDF via `statrs`' `erfc` (relative error near machine
/// precision, far inside 1e-10).
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-x / SQRT_2)
}

/// `sup_x |F_n(x) - Phi(x)|`, evaluated at both one-sided limits of every
/// jump of the empirical CDF. Ties are handled as a single jump.
pub fn kolmogorov_distance(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Argument("kolmogorov_distance of an empty sample".into()));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let total = sorted.len() as f64;
    let mut best: f64 = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let x = sorted[i];
        let mut j = i;
        while j < sorted.len() && sorted[j] == x {
            j += 1;
        }
        let phi = normal_cdf(x);
        let below = i as f64 / total;
        let at = j as f64 / total;
        best = best.max((below - phi).abs()).max((at - phi).abs());
        i = j;
    }
    Ok(best.min(1.0))
}

/// `40.1 n^{-1/4}`.
pub fn clt_bound(n: u32) -> f64 {
    40.1 * (n as f64).powf(-0.25)
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CltReport {
    pub n: u32,
    pub samples: usize,
    pub seed: u64,
    pub generator: String,
    pub kolmogorov_distance: f64,
    pub bound: f64,
    pub within_bound: bool,
    pub mean: f64,
    pub variance: f64,
    /// Exact `1 - 1/n`, for comparison.
    pub exact_variance: f64,
    /// Empirical `E|W* - W|^3` from one up-down step per sample.
    pub third_abs_moment_jump: f64,
    pub term2_bound: f64,
    pub pathwise_violations: usize,
}

/// Draws `W` over Plancherel samples from the RSK sampler, one up-down step
/// per draw for `W*`, and measures the Kolmogorov distance of `W` to N(0,1).
pub fn clt_experiment(n: u32, samples: usize, base: SeededStream) -> Result<CltReport> {
    if n < 2 || samples == 0 {
        return Err(Error::Argument("clt_experiment needs n >= 2 and samples >= 1".into()));
    }
    let draws = par_batch(base, samples, |rng| sampled_transition(n, rng));
    let violations = draws.iter().filter(|(l, d)| !pathwise_ok(l, *d)).count();
    let ws: Vec<f64> = draws.iter().map(|(l, _)| w_value(l)).collect();
    let scale = SQRT_2 / n as f64;
    let cubes: Vec<f64> = draws.iter().map(|(_, d)| (scale * *d as f64).abs().powi(3)).collect();
    let (mean, variance) = mean_var(&ws);
    let distance = kolmogorov_distance(&ws)?;
    let bound = clt_bound(n);
    Ok(CltReport {
        n,
        samples,
        seed: base.seed,
        generator: crate::stream::GENERATOR.to_string(),
        kolmogorov_distance: distance,
        bound,
        within_bound: distance <= bound,
        mean,
        variance,
        exact_variance: 1.0 - 1.0 / n as f64,
        third_abs_moment_jump: mean_var(&cubes).0,
        term2_bound: term2_bound(n),
        pathwise_violations: violations,
    })
}

/// Right-hand side of the Stein bound after substituting the two error
/// terms: `sqrt3 n^{-1/4} + (2 pi)^{-1/4} sqrt((n+1)/2 ((4e sqrt2/sqrt n)^3 + 2 (2 sqrt2)^3 / n^{3/2}))`.
pub fn stein_bound_lhs(n: f64) -> f64 {
    let jump = (4.0 * E * SQRT_2 / n.sqrt()).powi(3) + 2.0 * (2.0 * SQRT_2).powi(3) / n.powf(1.5);
    3f64.sqrt() * n.powf(-0.25) + (2.0 * PI).powf(-0.25) * ((n + 1.0) / 2.0 * jump).sqrt()
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BoundGridPoint {
    pub n: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub auxiliary_lhs: f64,
    pub auxiliary_rhs: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct BoundCheckReport {
    pub points: Vec<BoundGridPoint>,
    /// Largest `lhs / rhs` seen on the grid.
    pub worst_ratio: f64,
    pub passed: bool,
}

/// Evaluates the constant inequality behind `40.1 n^{-1/4}` and the
/// auxiliary `exp(-2e sqrt n) <= n^{-3/2}` on every integer `n` in
/// `[lo, hi]` when that range is small, otherwise on a geometric grid of
/// `points_per_decade` points per decade plus both endpoints.
pub fn stein_bound_constant_check(lo: u64, hi: u64, points_per_decade: u32) -> Result<BoundCheckReport> {
    if lo < 2 || hi < lo || hi > 1_000_000 {
        return Err(Error::Argument(format!("range [{lo}, {hi}] must lie in [2, 1e6]")));
    }
    let mut grid: Vec<u64> = if hi - lo <= 10_000 {
        (lo..=hi).collect()
    } else {
        let steps = ((hi as f64 / lo as f64).log10() * points_per_decade.max(1) as f64).ceil() as u64;
        (0..=steps)
            .map(|s| (lo as f64 * (hi as f64 / lo as f64).powf(s as f64 / steps as f64)).round() as u64)
            .collect()
    };
    grid.push(lo);
    grid.push(hi);
    grid.sort_unstable();
    grid.dedup();
    let points: Vec<BoundGridPoint> = grid
        .into_iter()
        .map(|n| {
            let nf = n as f64;
            let lhs = stein_bound_lhs(nf);
            let rhs = 40.1 * nf.powf(-0.25);
            let auxiliary_lhs = (-2.0 * E * nf.sqrt()).exp();
            let auxiliary_rhs = nf.powf(-1.5);
            BoundGridPoint {
                n: nf,
                lhs,
                rhs,
                auxiliary_lhs,
                auxiliary_rhs,
                passed: lhs <= rhs && auxiliary_lhs <= auxiliary_rhs,
            }
        })
        .collect();
    let worst_ratio = points.iter().map(|p| p.lhs / p.rhs).fold(0.0, f64::max);
    let passed = points.iter().all(|p| p.passed);
    Ok(BoundCheckReport { points, worst_ratio, passed })
}

/// Exact `2^{3/2} E|W* - W|^3` from the matrix rows (rational).
pub fn term2_exact_scaled(stein: &ExactStein) -> BigRational {
    let mut total = BigRational::zero();
    for (i, row) in stein.matrix.entries.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            let d = (&stein.r[j] - &stein.r[i]).abs();
            total += &stein.matrix.stationary[i] * p * &d * &d * &d;
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn w_examples() {
        assert_eq!(w_statistic(&Partition::row(7)).rational_part, rat_int(6));
        assert!((w_statistic(&Partition::row(7)).value() - 6.0 / SQRT_2).abs() < 1e-12);
        assert!(w_statistic(&p(&[1])).rational_part.is_zero());
        assert!(w_statistic(&p(&[2, 1])).rational_part.is_zero());
        for l in crate::partitions::enumerate_partitions(7) {
            assert!((w_statistic(&l).value() - w_value(&l)).abs() < 1e-12);
        }
    }

    #[test]
    fn first_moment_two() {
        let s = ExactStein::new(2).unwrap();
        let (row, formula) = s.conditional_first_moment(&Partition::row(2)).unwrap();
        assert_eq!(row, rat(1, 3));
        assert_eq!(formula, rat(1, 3));
        let s3 = ExactStein::new(3).unwrap();
        let (row, _) = s3.conditional_first_moment(&p(&[2, 1])).unwrap();
        assert!(row.is_zero());
    }

    #[test]
    fn second_moment_small() {
        assert_eq!(conditional_second_moment(&Partition::row(2)).unwrap(), rat(1, 2));
        assert!(conditional_second_moment(&p(&[1])).unwrap().is_zero());
    }

    #[test]
    fn mean_variance_small() {
        assert_eq!(mean_variance_check(2).unwrap(), (BigRational::zero(), rat(1, 2)));
        assert_eq!(mean_variance_check(1).unwrap(), (BigRational::zero(), BigRational::zero()));
    }

    #[test]
    fn term1_values() {
        assert_eq!(term1_exact(2).unwrap(), rat(1, 4));
        assert_eq!(term1_exact(3).unwrap(), rat(1, 6));
        assert_eq!(term1_closed_form(2), rat(8, 32));
    }

    #[test]
    fn term2_two_state_chain() {
        // n = 2: |r* - r| is 2 with probability 1/3, so E|W*-W|^3 = (1/3) 2^{3/2}.
        let s = ExactStein::new(2).unwrap();
        let scaled = term2_exact_scaled(&s);
        assert_eq!(scaled, rat(8, 3));
        let exact = to_f64(&scaled) / 2f64.powf(1.5);
        assert!((exact - 2.0 * SQRT_2 / 3.0).abs() < 1e-12);
        assert!(exact <= term2_bound(2));
    }

    #[test]
    fn kolmogorov_edge_cases() {
        assert!(kolmogorov_distance(&[]).is_err());
        assert!((kolmogorov_distance(&[0.0]).unwrap() - 0.5).abs() < 1e-15);
        assert!(kolmogorov_distance(&[1e6, 1e6]).unwrap() > 0.999_999);
        assert!((normal_cdf(0.0) - 0.5).abs() < 1e-16);
        let q = normal_cdf(1.959_963_984_540_054);
        assert!((q - 0.975).abs() < 1e-10, "{q}");
    }

    #[test]
    fn bound_grid_examples() {
        let two = stein_bound_lhs(2.0);
        assert!(two <= 40.1 * 2f64.powf(-0.25));
        assert!((-2.0 * E * 2f64.sqrt()).exp() <= 2f64.powf(-1.5));
        let r = stein_bound_constant_check(2, 100, 10).unwrap();
        assert_eq!(r.points.len(), 99);
        assert!(r.passed);
        assert!(stein_bound_constant_check(1, 10, 10).is_err());
    }
}
