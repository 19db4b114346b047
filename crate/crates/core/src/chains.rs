//! Reversible Markov chains on the partitions of `n`: up-down(k),
//! down-up(k) and the Kingman chain.
//!
//! Transition matrices are built exactly from closed forms in lattice path
//! counts; the samplers compose single-box moves instead, so comparing the
//! two is a real cross-check. Spectra are never computed numerically: the
//! certificate checks the eigen-identity for each conjugacy class in exact
//! arithmetic.

use crate::characters::CharacterTable;
use crate::error::{Error, Result};
use crate::exact::{factorial, falling, format_rational, rat, rat_int, rising_from_next, to_f64, uint_to_rat};
use crate::limits::check_exact;
use crate::partitions::{enumerate_partitions, index_of, path_count, Partition};
use crate::plancherel::{down_step, pick, plancherel_dist, up_step};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "k", rename_all = "lowercase")]
pub enum ChainKind {
    /// Up `k` boxes by the growth law, then down `k` by coherent removal.
    UpDown(u32),
    /// Down `k` boxes, then back up `k`.
    DownUp(u32),
    /// Up then down one level with Kingman-lattice edge weights.
    Kingman,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ChainSpec {
    pub n: u32,
    pub kind: ChainKind,
}

impl ChainSpec {
    pub fn new(n: u32, kind: ChainKind) -> Result<Self> {
        match kind {
            ChainKind::UpDown(k) | ChainKind::DownUp(k) if k < 1 => {
                return Err(Error::Argument("chain step size k must be at least 1".into()))
            }
            ChainKind::DownUp(k) if k > n => {
                return Err(Error::Argument(format!("down-up chain needs k <= n, got k={k}, n={n}")))
            }
            _ => {}
        }
        if n < 1 {
            return Err(Error::Argument("chains need n >= 1".into()));
        }
        Ok(Self { n, kind })
    }

    pub fn updown(n: u32, k: u32) -> Result<Self> {
        Self::new(n, ChainKind::UpDown(k))
    }

    pub fn downup(n: u32, k: u32) -> Result<Self> {
        Self::new(n, ChainKind::DownUp(k))
    }

    pub fn kingman(n: u32) -> Result<Self> {
        Self::new(n, ChainKind::Kingman)
    }

    /// Stationary law: Plancherel for the Young chains, the cycle-type law
    /// `1 / z_lambda` of a uniform permutation for Kingman.
    pub fn stationary(&self) -> Result<Vec<BigRational>> {
        match self.kind {
            ChainKind::Kingman => Ok(enumerate_partitions(self.n).iter().map(cycle_type_probability).collect()),
            _ => Ok(plancherel_dist(self.n)?.probs),
        }
    }

    /// Closed-form eigenvalue on the class with `n1` fixed points.
    pub fn eigenvalue(&self, fixed_points: u32) -> Option<BigRational> {
        match self.kind {
            ChainKind::DownUp(k) => Some(BigRational::new(falling(fixed_points, k).into(), falling(self.n, k).into())),
            ChainKind::UpDown(k) => {
                Some(BigRational::new(rising_from_next(fixed_points, k).into(), rising_from_next(self.n, k).into()))
            }
            ChainKind::Kingman => None,
        }
    }
}

impl fmt::Display for ChainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ChainKind::UpDown(k) => write!(f, "updown({k}), n={}", self.n),
            ChainKind::DownUp(k) => write!(f, "downup({k}), n={}", self.n),
            ChainKind::Kingman => write!(f, "kingman, n={}", self.n),
        }
    }
}

/// `1 / prod_j j^{m_j} m_j!`.
pub fn cycle_type_probability(lambda: &Partition) -> BigRational {
    let z = crate::characters::CycleType::new(lambda.clone()).centralizer_order();
    BigRational::new(1.into(), z.into())
}

/// Exact transition matrix with rows and columns in canonical order.
#[derive(Clone, Debug)]
pub struct TransitionMatrix {
    pub spec: ChainSpec,
    pub states: Vec<Partition>,
    pub entries: Vec<Vec<BigRational>>,
    pub stationary: Vec<BigRational>,
}

impl TransitionMatrix {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index(&self, lambda: &Partition) -> Option<usize> {
        self.states.iter().position(|s| s == lambda)
    }

    pub fn entry(&self, from: &Partition, to: &Partition) -> Option<&BigRational> {
        Some(&self.entries[self.index(from)?][self.index(to)?])
    }

    /// `(J f)(x) = sum_y J(x, y) f(y)`.
    pub fn apply(&self, f: &[BigRational]) -> Vec<BigRational> {
        self.entries.iter().map(|row| row.iter().zip(f).fold(BigRational::zero(), |acc, (a, b)| acc + a * b)).collect()
    }

    /// `(mu J)(y) = sum_x mu(x) J(x, y)`.
    pub fn step_distribution(&self, mu: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.len()];
        for (x, row) in self.entries.iter().enumerate() {
            if mu[x].is_zero() {
                continue;
            }
            for (y, p) in row.iter().enumerate() {
                if !p.is_zero() {
                    out[y] += &mu[x] * p;
                }
            }
        }
        out
    }

    /// Rows `J^0(start, .), ..., J^{r_max}(start, .)`.
    pub fn power_rows(&self, start: usize, r_max: u32) -> Vec<Vec<BigRational>> {
        let mut current = vec![BigRational::zero(); self.len()];
        current[start] = BigRational::one();
        let mut rows = Vec::with_capacity(r_max as usize + 1);
        for _ in 0..r_max {
            let next = self.step_distribution(&current);
            rows.push(std::mem::replace(&mut current, next));
        }
        rows.push(current);
        rows
    }

    /// Every row sums to exactly one with non-negative entries.
    pub fn check_stochastic(&self) -> Result<()> {
        for (i, row) in self.entries.iter().enumerate() {
            if row.iter().any(|p| p.is_negative()) {
                return Err(Error::InvariantViolation(format!(
                    "{}: negative entry in row {}",
                    self.spec, self.states[i]
                )));
            }
            let s: BigRational = row.iter().sum();
            if !s.is_one() {
                return Err(Error::InvariantViolation(format!("{}: row {} sums to {s}", self.spec, self.states[i])));
            }
        }
        Ok(())
    }

    /// Detailed balance `pi(x) J(x,y) = pi(y) J(y,x)` for all pairs.
    pub fn check_reversible(&self) -> Result<()> {
        for x in 0..self.len() {
            for y in x + 1..self.len() {
                let a = &self.stationary[x] * &self.entries[x][y];
                let b = &self.stationary[y] * &self.entries[y][x];
                if a != b {
                    return Err(Error::InvariantViolation(format!(
                        "{}: detailed balance fails between {} and {}",
                        self.spec, self.states[x], self.states[y]
                    )));
                }
            }
        }
        Ok(())
    }

    /// `pi J = pi`.
    pub fn check_stationary(&self) -> Result<()> {
        if self.step_distribution(&self.stationary) != self.stationary {
            return Err(Error::InvariantViolation(format!("{}: stationary law is not invariant", self.spec)));
        }
        Ok(())
    }

    /// Entries as `"p/q"` strings, for JSON output.
    pub fn entry_strings(&self) -> Vec<Vec<String>> {
        self.entries.iter().map(|r| r.iter().map(format_rational).collect()).collect()
    }
}

/// Builds the exact matrix and asserts unit row sums and reversibility.
pub fn transition_matrix(spec: ChainSpec) -> Result<TransitionMatrix> {
    check_exact("transition_matrix", spec.n)?;
    let states = enumerate_partitions(spec.n);
    let entries = match spec.kind {
        ChainKind::DownUp(k) => young_entries(&states, spec.n, k, false),
        ChainKind::UpDown(k) => young_entries(&states, spec.n, k, true),
        ChainKind::Kingman => kingman_entries(&states),
    };
    let stationary = spec.stationary()?;
    let m = TransitionMatrix { spec, states, entries, stationary };
    m.check_stochastic()?;
    m.check_reversible()?;
    Ok(m)
}

/// `J(lambda, mu) = dim(mu) / (norm dim(lambda)) * sum_tau paths(.) paths(.)`
/// with `tau` ranging over level `n + k` (up first) or `n - k` (down first).
fn young_entries(states: &[Partition], n: u32, k: u32, up_first: bool) -> Vec<Vec<BigRational>> {
    let (level, norm) = if up_first {
        (enumerate_partitions(n + k), rising_from_next(n, k))
    } else {
        (enumerate_partitions(n - k), falling(n, k))
    };
    let paths: Vec<Vec<BigUint>> = states
        .iter()
        .map(|l| level.iter().map(|t| if up_first { path_count(l, t) } else { path_count(t, l) }).collect())
        .collect();
    let dims: Vec<BigUint> = states.iter().map(Partition::dimension).collect();
    (0..states.len())
        .map(|x| {
            (0..states.len())
                .map(|y| {
                    let overlap: BigUint = paths[x].iter().zip(&paths[y]).map(|(a, b)| a * b).sum();
                    BigRational::new((&dims[y] * overlap).into(), (&norm * &dims[x]).into())
                })
                .collect()
        })
        .collect()
}

/// Example-style entry of the one-level up-down chain:
/// `dim(mu) |parents(lambda, mu)| / ((n+1) dim(lambda))`.
pub fn updown_parents_entry(lambda: &Partition, mu: &Partition) -> BigRational {
    let n = lambda.size();
    let parents = crate::partitions::parents_count(lambda, mu);
    BigRational::new((mu.dimension() * parents).into(), (lambda.dimension() * (n + 1)).into())
}

/// Kingman up-move law: a box on a row of length `r` w.p. `r m_r / (n+1)`,
/// a new row w.p. `1 / (n+1)`.
pub fn kingman_up(lambda: &Partition) -> Vec<(Partition, BigRational)> {
    let n = lambda.size();
    let m = lambda.multiplicities();
    let mut out = Vec::new();
    for (r, &count) in m.iter().enumerate().skip(1).rev() {
        if count == 0 {
            continue;
        }
        // Adding to the first row of that length keeps the parts sorted.
        let row = lambda.parts().iter().position(|&p| p as usize == r).expect("row of length r");
        out.push((lambda.with_box_added(row), rat(r as u64 * count as u64, n + 1)));
    }
    out.push((lambda.with_box_added(lambda.len()), rat(1, n + 1)));
    out
}

/// Kingman down-move law from a partition of `n + 1`: a box off a row of
/// length `s` w.p. `s m_s / (n+1)`.
pub fn kingman_down(shape: &Partition) -> Vec<(Partition, BigRational)> {
    let size = shape.size();
    let m = shape.multiplicities();
    let mut out = Vec::new();
    for (s, &count) in m.iter().enumerate().skip(1).rev() {
        if count == 0 {
            continue;
        }
        // Removing from the last row of that length keeps the parts sorted.
        let row = shape.parts().iter().rposition(|&p| p as usize == s).expect("row of length s");
        out.push((shape.with_box_removed(row), rat(s as u64 * count as u64, size)));
    }
    out
}

fn kingman_entries(states: &[Partition]) -> Vec<Vec<BigRational>> {
    let index = index_of(states);
    states
        .iter()
        .map(|l| {
            let mut row = vec![BigRational::zero(); states.len()];
            for (up, p) in kingman_up(l) {
                for (down, q) in kingman_down(&up) {
                    row[index[&down]] += &p * q;
                }
            }
            row
        })
        .collect()
}

fn sample_exact<R: Rng + ?Sized>(options: Vec<(Partition, BigRational)>, rng: &mut R) -> Partition {
    crate::plancherel::sample_from(options, rng)
}

/// One step of the up-down chain: a growth move then a coherent removal.
pub fn updown_step<R: Rng + ?Sized>(lambda: &Partition, rng: &mut R) -> Partition {
    down_step(&up_step(lambda, rng), rng)
}

/// `k` coherent removals followed by `k` growth moves.
pub fn downup_step<R: Rng + ?Sized>(lambda: &Partition, k: u32, rng: &mut R) -> Result<Partition> {
    if k > lambda.size() {
        return Err(Error::Argument(format!("cannot move down {k} boxes from {lambda}")));
    }
    let mut cur = lambda.clone();
    for _ in 0..k {
        cur = down_step(&cur, rng);
    }
    for _ in 0..k {
        cur = up_step(&cur, rng);
    }
    Ok(cur)
}

pub fn kingman_step<R: Rng + ?Sized>(lambda: &Partition, rng: &mut R) -> Partition {
    let up = sample_exact(kingman_up(lambda), rng);
    sample_exact(kingman_down(&up), rng)
}

/// One step of any chain from `lambda`.
pub fn chain_step<R: Rng + ?Sized>(spec: &ChainSpec, lambda: &Partition, rng: &mut R) -> Result<Partition> {
    match spec.kind {
        ChainKind::UpDown(k) => {
            let mut cur = lambda.clone();
            for _ in 0..k {
                cur = up_step(&cur, rng);
            }
            for _ in 0..k {
                cur = down_step(&cur, rng);
            }
            Ok(cur)
        }
        ChainKind::DownUp(k) => downup_step(lambda, k, rng),
        ChainKind::Kingman => Ok(kingman_step(lambda, rng)),
    }
}

/// Samples a whole row of `J` in `f64`, used only for cross-checks.
pub fn sample_row_index<R: Rng + ?Sized>(row: &[BigRational], rng: &mut R) -> usize {
    let probs: Vec<f64> = row.iter().map(to_f64).collect();
    pick(&probs, rng)
}

/// One class's eigenpair; the eigenfunction is `|C|^{1/2}` times
/// `rational_part`, with `class_size` kept separately.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralEntry {
    pub class: crate::characters::CycleType,
    #[serde(serialize_with = "ser_uint")]
    pub class_size: BigUint,
    #[serde(serialize_with = "ser_rat")]
    pub eigenvalue: BigRational,
    #[serde(serialize_with = "ser_rat_vec")]
    pub rational_part: Vec<BigRational>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralCertificate {
    pub spec: ChainSpec,
    pub states: Vec<Partition>,
    pub entries: Vec<SpectralEntry>,
    /// Largest `|theta|` over non-identity classes.
    #[serde(serialize_with = "ser_rat")]
    pub beta: BigRational,
    /// Number of classes whose eigenfunctions were certified.
    pub eigenfunctions: usize,
    pub valid: bool,
    pub failures: Vec<String>,
}

pub(crate) fn ser_rat<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&format_rational(r))
}

pub(crate) fn ser_rat_vec<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

pub(crate) fn ser_uint<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

/// Certifies `J psi_C = theta(C) psi_C` and Plancherel-orthonormality of
/// `psi_C(lambda) = |C|^{1/2} chi^lambda(C) / dim(lambda)` for every class.
pub fn spectral_certificate(spec: ChainSpec) -> Result<SpectralCertificate> {
    let matrix = transition_matrix(spec)?;
    let table = CharacterTable::new(spec.n)?;
    spectral_certificate_with(&matrix, &table)
}

pub fn spectral_certificate_with(matrix: &TransitionMatrix, table: &CharacterTable) -> Result<SpectralCertificate> {
    let spec = matrix.spec;
    if spec.kind == ChainKind::Kingman {
        return Err(Error::Argument("no closed-form spectrum for the Kingman chain".into()));
    }
    let pi = &matrix.stationary;
    let mut failures = Vec::new();
    let mut entries = Vec::with_capacity(table.classes.len());
    for (c, class) in table.classes.iter().enumerate() {
        let theta = spec.eigenvalue(class.fixed_points()).expect("Young chain");
        let f: Vec<BigRational> = (0..table.irreps.len()).map(|i| table.ratio(i, c)).collect();
        let jf = matrix.apply(&f);
        for (i, (lhs, v)) in jf.iter().zip(&f).enumerate() {
            if *lhs != &theta * v {
                failures.push(format!(
                    "class {class}, lambda {}: J psi = {lhs}, theta psi = {}",
                    table.irreps[i],
                    &theta * v
                ));
            }
        }
        if theta > BigRational::one() || theta < -BigRational::one() {
            failures.push(format!("class {class}: eigenvalue {theta} outside [-1, 1]"));
        }
        if class.is_identity() && (!theta.is_one() || f.iter().any(|x| !x.is_one())) {
            failures.push("identity class must give eigenvalue 1 and constant eigenfunction".into());
        }
        entries.push(SpectralEntry {
            class: class.clone(),
            class_size: table.class_sizes[c].clone(),
            eigenvalue: theta,
            rational_part: f,
        });
    }
    for a in 0..entries.len() {
        for b in a..entries.len() {
            let inner: BigRational =
                (0..pi.len()).map(|i| &pi[i] * &entries[a].rational_part[i] * &entries[b].rational_part[i]).sum();
            let ok = if a == b { (inner * uint_to_rat(&entries[a].class_size)).is_one() } else { inner.is_zero() };
            if !ok {
                failures.push(format!("classes {} and {} are not orthonormal", entries[a].class, entries[b].class));
            }
        }
    }
    let beta = entries
        .iter()
        .filter(|e| !e.class.is_identity())
        .map(|e| e.eigenvalue.abs())
        .max()
        .unwrap_or_else(BigRational::zero);
    Ok(SpectralCertificate {
        spec,
        states: matrix.states.clone(),
        eigenfunctions: entries.len(),
        entries,
        beta,
        valid: failures.is_empty(),
        failures,
    })
}

/// `(n-k)(n-k-1) / (n(n-1))`, the second-largest eigenvalue of down-up(k).
pub fn downup_beta(n: u32, k: u32) -> BigRational {
    let num = (n.saturating_sub(k) as u64) * (n.saturating_sub(k + 1) as u64);
    rat(num, n as u64 * (n as u64 - 1))
}

/// `(1/2) sum_y |p(y) - q(y)|`.
pub fn tv_distance(p: &[BigRational], q: &[BigRational]) -> Result<BigRational> {
    if p.len() != q.len() {
        return Err(Error::Argument("distributions on different supports".into()));
    }
    let s: BigRational = p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum();
    Ok(s / rat_int(2))
}

/// `sum_y (p(y)/pi(y) - 1)^2 pi(y)`: the square of the L2(pi) distance.
pub fn l2_distance_squared(p: &[BigRational], pi: &[BigRational]) -> Result<BigRational> {
    if p.len() != pi.len() {
        return Err(Error::Argument("distributions on different supports".into()));
    }
    if pi.iter().any(|x| x.is_zero()) {
        return Err(Error::Argument("reference distribution has a zero entry".into()));
    }
    let s: BigRational = p
        .iter()
        .zip(pi)
        .map(|(a, b)| {
            let d = a / b - BigRational::one();
            &d * &d * b
        })
        .sum();
    // 2 TV <= L2, compared as squares.
    let tv = tv_distance(p, pi)?;
    if rat_int(4) * &tv * &tv > s {
        return Err(Error::InvariantViolation(format!("2 TV exceeds L2 distance (TV = {tv})")));
    }
    Ok(s)
}

pub fn l2_distance(p: &[BigRational], pi: &[BigRational]) -> Result<f64> {
    Ok(to_f64(&l2_distance_squared(p, pi)?).sqrt())
}

#[derive(Clone, Debug, Serialize)]
pub struct MixingRow {
    pub r: u32,
    #[serde(serialize_with = "ser_rat")]
    pub tv_exact: BigRational,
    pub tv: f64,
    #[serde(serialize_with = "ser_rat")]
    pub l2_squared_exact: BigRational,
    pub l2: f64,
    /// `sqrt(n!) beta^r`, when the spectrum is known.
    pub bound: Option<f64>,
    /// `2 TV <= L2`, both sides exact.
    pub tv_le_l2: bool,
    /// `L2^2 <= (1 - pi(x))/pi(x) beta^{2r}` and `L2^2 <= n! beta^{2r}`, exact.
    pub l2_le_bound: Option<bool>,
    /// TV did not increase from the previous step.
    pub tv_monotone: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThresholdCheck {
    pub c: f64,
    /// `(n log n + 2c) / (2 log(1/beta))`.
    pub r_star: f64,
    /// Smallest integer strictly above `r_star`.
    pub r: u32,
    pub tv: f64,
    /// `((2 pi)^{1/4} / 2) e^{-c}`.
    pub guarantee: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct MixingReport {
    pub spec: ChainSpec,
    pub start: Partition,
    #[serde(serialize_with = "ser_opt_rat")]
    pub beta: Option<BigRational>,
    pub rows: Vec<MixingRow>,
    pub thresholds: Vec<ThresholdCheck>,
    pub target_tv: f64,
    pub first_r_below_target: Option<u32>,
    /// `r_star` at the `c` whose guarantee equals `target_tv`.
    pub r_star_for_target: Option<f64>,
    pub passed: bool,
}

fn ser_opt_rat<S: serde::Serializer>(r: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.collect_str(&format_rational(r)),
        None => s.serialize_none(),
    }
}

/// Default `c` values for threshold checks.
pub const THRESHOLD_CS: [f64; 3] = [1.0, 2.0, 4.0];

/// Mixing of `J(k)` (down-up) from the one-row partition.
pub fn mixing_report(n: u32, k: u32, r_max: u32) -> Result<MixingReport> {
    mixing_report_for(ChainSpec::downup(n, k)?, r_max, &THRESHOLD_CS)
}

fn threshold_r_star(n: u32, beta: f64, c: f64) -> f64 {
    if beta <= 0.0 {
        return 0.0;
    }
    let nf = n as f64;
    (nf * nf.ln() + 2.0 * c) / (2.0 * (1.0 / beta).ln())
}

/// Exact TV and L2 distances of `J^r((n), .)` from stationarity, compared
/// against the spectral bounds.
pub fn mixing_report_for(spec: ChainSpec, r_max: u32, cs: &[f64]) -> Result<MixingReport> {
    let matrix = transition_matrix(spec)?;
    let beta = match spec.kind {
        ChainKind::Kingman => None,
        _ => {
            let table = CharacterTable::new(spec.n)?;
            let cert = spectral_certificate_with(&matrix, &table)?;
            if !cert.valid {
                return Err(Error::InvariantViolation(format!("{spec}: spectral certificate failed")));
            }
            if let ChainKind::DownUp(k) = spec.kind {
                if spec.n >= 2 && cert.beta != downup_beta(spec.n, k) {
                    return Err(Error::InvariantViolation(format!(
                        "{spec}: second eigenvalue {} differs from closed form",
                        cert.beta
                    )));
                }
            }
            Some(cert.beta)
        }
    };
    let start = Partition::row(spec.n);
    let x = matrix.index(&start).expect("one-row partition");
    let pi = &matrix.stationary;
    let beta_f = beta.as_ref().map(to_f64);
    let guarantee = |c: f64| (2.0 * std::f64::consts::PI).powf(0.25) / 2.0 * (-c).exp();
    let threshold_rs: Vec<u32> = match beta_f {
        Some(b) => cs.iter().map(|&c| threshold_r_star(spec.n, b, c).floor() as u32 + 1).collect(),
        None => Vec::new(),
    };
    let horizon = threshold_rs.iter().copied().chain(std::iter::once(r_max)).max().unwrap_or(r_max);
    let rows_exact = matrix.power_rows(x, horizon);

    let nf = uint_to_rat(&factorial(spec.n));
    let start_factor = (BigRational::one() - &pi[x]) / &pi[x];
    let mut rows = Vec::new();
    let mut tvs = Vec::new();
    let mut prev_tv: Option<BigRational> = None;
    for (r, dist) in rows_exact.iter().enumerate() {
        let tv = tv_distance(dist, pi)?;
        let l2_sq = l2_distance_squared(dist, pi)?;
        let tv_le_l2 = rat_int(4) * &tv * &tv <= l2_sq;
        let (bound, l2_le_bound) = match &beta {
            Some(b) => {
                let b2r = num_traits::pow(b.clone(), 2 * r);
                let ok = l2_sq <= &start_factor * &b2r && l2_sq <= &nf * &b2r;
                (Some(to_f64(&nf).sqrt() * to_f64(b).powi(r as i32)), Some(ok))
            }
            None => (None, None),
        };
        let tv_monotone = prev_tv.as_ref().is_none_or(|p| tv <= *p);
        tvs.push(to_f64(&tv));
        if r as u32 <= r_max {
            rows.push(MixingRow {
                r: r as u32,
                tv: to_f64(&tv),
                tv_exact: tv.clone(),
                l2: to_f64(&l2_sq).sqrt(),
                l2_squared_exact: l2_sq,
                bound,
                tv_le_l2,
                l2_le_bound,
                tv_monotone,
            });
        }
        prev_tv = Some(tv);
    }
    let thresholds: Vec<ThresholdCheck> = cs
        .iter()
        .zip(&threshold_rs)
        .map(|(&c, &r)| {
            let tv = tvs[r as usize];
            ThresholdCheck {
                c,
                r_star: threshold_r_star(spec.n, beta_f.unwrap_or(0.0), c),
                r,
                tv,
                guarantee: guarantee(c),
                passed: tv <= guarantee(c),
            }
        })
        .collect();
    let target_tv = 0.01;
    let first_r_below_target = tvs.iter().position(|&t| t < target_tv).map(|r| r as u32);
    let r_star_for_target = beta_f.map(|b| {
        let c = ((2.0 * std::f64::consts::PI).powf(0.25) / (2.0 * target_tv)).ln();
        threshold_r_star(spec.n, b, c)
    });
    let passed = rows.iter().all(|row| row.tv_le_l2 && row.tv_monotone && row.l2_le_bound.unwrap_or(true))
        && thresholds.iter().all(|t| t.passed);
    Ok(MixingReport { spec, start, beta, rows, thresholds, target_tv, first_r_below_target, r_star_for_target, passed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::SeededStream;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn updown_two() {
        let m = transition_matrix(ChainSpec::updown(2, 1).unwrap()).unwrap();
        assert_eq!(m.entries, vec![vec![rat(2, 3), rat(1, 3)], vec![rat(1, 3), rat(2, 3)]]);
    }

    #[test]
    fn updown_matches_parents_formula() {
        for n in 1..=7 {
            let m = transition_matrix(ChainSpec::updown(n, 1).unwrap()).unwrap();
            for (i, l) in m.states.iter().enumerate() {
                for (j, mu) in m.states.iter().enumerate() {
                    assert_eq!(m.entries[i][j], updown_parents_entry(l, mu), "{l} -> {mu}");
                }
            }
        }
    }

    #[test]
    fn no_common_parent_means_zero() {
        assert!(updown_parents_entry(&p(&[3]), &p(&[1, 1, 1])).is_zero());
    }

    #[test]
    fn downup_examples() {
        let m = transition_matrix(ChainSpec::downup(2, 1).unwrap()).unwrap();
        assert_eq!(m.entry(&p(&[2]), &p(&[1, 1])), Some(&rat(1, 2)));
        // k = n: every row is the Plancherel law.
        let m = transition_matrix(ChainSpec::downup(4, 4).unwrap()).unwrap();
        for row in &m.entries {
            assert_eq!(row, &m.stationary);
        }
        transition_matrix(ChainSpec::downup(5, 2).unwrap()).unwrap();
    }

    #[test]
    fn spec_validation() {
        assert!(ChainSpec::downup(3, 4).is_err());
        assert!(ChainSpec::updown(3, 0).is_err());
        assert!(ChainSpec::new(0, ChainKind::Kingman).is_err());
        let mut rng = SeededStream::new(0).rng();
        assert!(downup_step(&p(&[2]), 3, &mut rng).is_err());
    }

    #[test]
    fn kingman_laws() {
        let up = kingman_up(&p(&[1]));
        assert_eq!(up, vec![(p(&[2]), rat(1, 2)), (p(&[1, 1]), rat(1, 2))]);
        for n in 1..=7 {
            for l in enumerate_partitions(n) {
                let s: BigRational = kingman_up(&l).into_iter().map(|x| x.1).sum();
                assert!(s.is_one());
                let s: BigRational = kingman_down(&l).into_iter().map(|x| x.1).sum();
                assert!(s.is_one());
            }
            let m = transition_matrix(ChainSpec::kingman(n).unwrap()).unwrap();
            m.check_stationary().unwrap();
            assert!(m.stationary.iter().sum::<BigRational>().is_one());
        }
    }

    #[test]
    fn distances() {
        let pi = plancherel_dist(4).unwrap().probs;
        assert!(tv_distance(&pi, &pi).unwrap().is_zero());
        assert!(l2_distance_squared(&pi, &pi).unwrap().is_zero());
        let mut point = vec![BigRational::zero(); pi.len()];
        point[1] = BigRational::one();
        assert_eq!(tv_distance(&point, &pi).unwrap(), BigRational::one() - &pi[1]);
        let mut zero_pi = pi.clone();
        zero_pi[0] = BigRational::zero();
        assert!(l2_distance(&point, &zero_pi).is_err());
        assert!(tv_distance(&point[..2], &pi).is_err());
    }

    #[test]
    fn certificate_basics() {
        for n in 2..=6 {
            let cert = spectral_certificate(ChainSpec::updown(n, 1).unwrap()).unwrap();
            assert!(cert.valid, "{:?}", cert.failures);
            let t = crate::characters::CycleType::transposition(n);
            let e = cert.entries.iter().find(|e| e.class == t).unwrap();
            assert_eq!(e.eigenvalue, rat(n - 1, n + 1));
            let id = cert.entries.iter().find(|e| e.class.is_identity()).unwrap();
            assert!(id.eigenvalue.is_one());
        }
        let cert = spectral_certificate(ChainSpec::downup(6, 1).unwrap()).unwrap();
        assert!(cert.valid);
        assert_eq!(cert.beta, downup_beta(6, 1));
        assert_eq!(cert.beta, rat(4, 6));
        assert_eq!(cert.eigenfunctions, 11);
        assert!(spectral_certificate(ChainSpec::kingman(3).unwrap()).is_err());
    }

    #[test]
    fn mixing_starts_at_point_mass() {
        let report = mixing_report(5, 1, 5).unwrap();
        assert_eq!(report.rows[0].tv_exact, BigRational::one() - rat(1, 120));
        assert!(report.passed);
    }
}
