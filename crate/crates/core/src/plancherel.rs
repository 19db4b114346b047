//! Plancherel measure: the exact law, the growth-process and RSK samplers,
//! and the longest-increasing-subsequence tail check.

use crate::error::{Error, Result};
use crate::exact::{factorial, to_f64, uint_to_rat};
use crate::limits::DIST_CAP;
use crate::partitions::{enumerate_partitions, index_of, Partition};
use crate::stream::{par_batch, SeededStream};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use std::collections::HashMap;

/// Tolerance on the floating-point sum of one step's probabilities.
pub const STEP_SUM_TOLERANCE: f64 = 1e-12;

/// An exact probability distribution on the partitions of `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactDist {
    pub n: u32,
    pub states: Vec<Partition>,
    pub probs: Vec<BigRational>,
}

impl ExactDist {
    pub fn get(&self, lambda: &Partition) -> BigRational {
        self.states.iter().position(|s| s == lambda).map(|i| self.probs[i].clone()).unwrap_or_else(BigRational::zero)
    }

    pub fn total(&self) -> BigRational {
        self.probs.iter().fold(BigRational::zero(), |a, b| a + b)
    }

    fn from_map(n: u32, map: HashMap<Partition, BigRational>) -> Self {
        let states = enumerate_partitions(n);
        let probs = states.iter().map(|s| map.get(s).cloned().unwrap_or_else(BigRational::zero)).collect();
        Self { n, states, probs }
    }
}

/// `pi(lambda) = dim(lambda)^2 / n!` for every `lambda` of `n`.
pub fn plancherel_dist(n: u32) -> Result<ExactDist> {
    if n > DIST_CAP {
        return Err(Error::Resource { what: "plancherel_dist", n, cap: DIST_CAP });
    }
    let states = enumerate_partitions(n);
    let nf = uint_to_rat(&factorial(n));
    let probs: Vec<BigRational> = states.iter().map(|l| uint_to_rat(&l.dimension().pow(2)) / nf.clone()).collect();
    let dist = ExactDist { n, states, probs };
    debug_assert!(dist.total().is_one());
    Ok(dist)
}

/// Hook-length ratio product for the cells whose hooks change when a box
/// at `(row, col)` is added to (`delta = 1`) or removed from (`delta = -1`)
/// `shape`: returns `(prod h, prod (h + delta))` over those cells of `shape`.
fn affected_hooks(shape: &Partition, row: usize, col: usize, delta: i64) -> (BigUint, BigUint) {
    let conj = shape.conjugate();
    let hook = |r: usize, c: usize| -> u32 { (shape.part(r) - c as u32 - 1) + (conj.part(c) - r as u32 - 1) + 1 };
    let mut old = BigUint::one();
    let mut new = BigUint::one();
    let cells = (0..col).map(|c| (row, c)).chain((0..row).map(|r| (r, col)));
    for (r, c) in cells {
        let h = hook(r, c) as i64;
        old *= h as u64;
        new *= (h + delta) as u64;
    }
    (old, new)
}

/// Exact one-box growth law from `lambda`:
/// `Lambda` with probability `dim(Lambda) / ((|lambda|+1) dim(lambda))`.
pub fn up_transition(lambda: &Partition) -> Vec<(Partition, BigRational)> {
    lambda
        .addable_rows()
        .into_iter()
        .map(|i| {
            let col = lambda.part(i) as usize;
            let (old, new) = affected_hooks(lambda, i, col, 1);
            (lambda.with_box_added(i), BigRational::new(BigInt::from(old), BigInt::from(new)))
        })
        .collect()
}

/// Exact one-box removal law from `shape`: `mu` with probability
/// `dim(mu) / dim(shape)`.
pub fn down_transition(shape: &Partition) -> Vec<(Partition, BigRational)> {
    let size = shape.size();
    shape
        .removable_rows()
        .into_iter()
        .rev()
        .map(|i| {
            let col = shape.part(i) as usize - 1;
            let (old, new) = affected_hooks(shape, i, col, -1);
            let p = BigRational::new(BigInt::from(old), BigInt::from(new * size));
            (shape.with_box_removed(i), p)
        })
        .collect()
}

/// Picks an index with the given weights; the weights must sum to one
/// within [`STEP_SUM_TOLERANCE`].
pub(crate) fn pick<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let total: f64 = probs.iter().sum();
    assert!((total - 1.0).abs() <= STEP_SUM_TOLERANCE, "step probabilities sum to {total}");
    let u: f64 = rng.random::<f64>() * total;
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probs.len() - 1
}

pub(crate) fn sample_from<R: Rng + ?Sized>(options: Vec<(Partition, BigRational)>, rng: &mut R) -> Partition {
    let probs: Vec<f64> = options.iter().map(|(_, p)| to_f64(p)).collect();
    let i = pick(&probs, rng);
    options.into_iter().nth(i).expect("index in range").0
}

/// One step up the growth process.
pub fn up_step<R: Rng + ?Sized>(lambda: &Partition, rng: &mut R) -> Partition {
    sample_from(up_transition(lambda), rng)
}

/// One coherent step down.
pub fn down_step<R: Rng + ?Sized>(shape: &Partition, rng: &mut R) -> Partition {
    sample_from(down_transition(shape), rng)
}

/// Runs the Plancherel growth process from the empty partition for `n` steps.
pub fn growth_sample<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Partition {
    (0..n).fold(Partition::empty(), |l, _| up_step(&l, rng))
}

/// Exact law of the growth process after `n` steps, by pushing rational
/// mass level by level.
pub fn growth_law_exact(n: u32) -> Result<ExactDist> {
    if n > DIST_CAP {
        return Err(Error::Resource { what: "growth_law_exact", n, cap: DIST_CAP });
    }
    let mut level: HashMap<Partition, BigRational> = HashMap::from([(Partition::empty(), BigRational::one())]);
    for _ in 0..n {
        let mut next: HashMap<Partition, BigRational> = HashMap::new();
        for (l, mass) in &level {
            for (up, p) in up_transition(l) {
                *next.entry(up).or_insert_with(BigRational::zero) += mass * p;
            }
        }
        level = next;
    }
    Ok(ExactDist::from_map(n, level))
}

/// Shape of the RSK insertion tableau of a permutation of `1..=n`.
pub fn rsk_shape(w: &[u32]) -> Result<Partition> {
    let n = w.len();
    let mut seen = vec![false; n + 1];
    for &x in w {
        if x == 0 || x as usize > n || seen[x as usize] {
            return Err(Error::Argument(format!("{w:?} is not a permutation of 1..{n}")));
        }
        seen[x as usize] = true;
    }
    Ok(rsk_shape_unchecked(w))
}

fn rsk_shape_unchecked(w: &[u32]) -> Partition {
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for &x in w {
        let mut carry = x;
        let mut placed = false;
        for row in rows.iter_mut() {
            let pos = row.partition_point(|&y| y < carry);
            if pos == row.len() {
                row.push(carry);
                placed = true;
                break;
            }
            std::mem::swap(&mut row[pos], &mut carry);
        }
        if !placed {
            rows.push(vec![carry]);
        }
    }
    Partition::from_sorted(rows.iter().map(|r| r.len() as u32).collect())
}

/// RSK shape of a uniformly random permutation (Fisher–Yates on `rng`).
pub fn rsk_sample<R: Rng + ?Sized>(n: u32, rng: &mut R) -> Partition {
    let mut w: Vec<u32> = (1..=n).collect();
    w.shuffle(rng);
    rsk_shape_unchecked(&w)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Growth,
    Rsk,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "growth" => Ok(Method::Growth),
            "rsk" => Ok(Method::Rsk),
            other => Err(Error::Parse(format!("unknown sampling method {other:?}"))),
        }
    }
}

/// `count` Plancherel draws, split over streams of `base` in chunks.
pub fn sample_batch(method: Method, n: u32, count: usize, base: SeededStream) -> Vec<Partition> {
    par_batch(base, count, |rng| match method {
        Method::Growth => growth_sample(n, rng),
        Method::Rsk => rsk_sample(n, rng),
    })
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct LisTailReport {
    pub n: u32,
    pub samples: usize,
    /// `2 e sqrt(n)`.
    pub threshold: f64,
    pub hits: usize,
    pub frequency: f64,
    /// `2 exp(-2 e sqrt(n))`.
    pub bound: f64,
    /// Bound plus four binomial standard errors.
    pub acceptance_limit: f64,
    pub passed: bool,
}

/// Estimates `P(lambda_1 >= 2e sqrt n or lambda_1' >= 2e sqrt n)` and
/// compares it with `2 exp(-2e sqrt n)`.
pub fn lis_tail_probability_check(n: u32, samples: usize, base: SeededStream) -> Result<LisTailReport> {
    if n < 1 || samples == 0 {
        return Err(Error::Argument("lis_tail_probability_check needs n >= 1 and samples >= 1".into()));
    }
    let threshold = 2.0 * std::f64::consts::E * (n as f64).sqrt();
    let hits = par_batch(base, samples, |rng| {
        let l = rsk_sample(n, rng);
        l.first_row() as f64 >= threshold || l.first_column() as f64 >= threshold
    })
    .into_iter()
    .filter(|&h| h)
    .count();
    let bound = 2.0 * (-threshold).exp();
    let frequency = hits as f64 / samples as f64;
    let acceptance_limit = bound + 4.0 * (bound * (1.0 - bound) / samples as f64).sqrt();
    Ok(LisTailReport {
        n,
        samples,
        threshold,
        hits,
        frequency,
        bound,
        acceptance_limit,
        passed: frequency <= acceptance_limit,
    })
}

/// Tallies draws against an index of states.
pub fn tally(states: &[Partition], draws: &[Partition]) -> Vec<u64> {
    let index = index_of(states);
    let mut counts = vec![0u64; states.len()];
    for d in draws {
        counts[index[d]] += 1;
    }
    counts
}
