//! Irreducible characters of the symmetric groups and the class-sum
//! identities built on them.
//!
//! Values come from the Murnaghan–Nakayama rule evaluated on beta-sets
//! (first-column hook lengths): removing a border strip of length `r` is
//! moving one bead `r` positions down into an empty slot, with sign given
//! by the parity of the beads jumped over.

use crate::error::{Error, Result};
use crate::exact::{factorial, falling, rat_int, rising_from_next, uint_to_rat};
use crate::limits::check_exact;
use crate::partitions::{enumerate_partitions, path_count, Partition};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

/// A conjugacy class of `S_n`, labelled by its cycle lengths.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType {
    cycles: Partition,
}

impl CycleType {
    pub fn new(cycles: Partition) -> Self {
        Self { cycles }
    }

    pub fn identity(n: u32) -> Self {
        Self::new(Partition::column(n))
    }

    /// Class of a transposition, `(2, 1^{n-2})`; requires `n >= 2`.
    pub fn transposition(n: u32) -> Self {
        assert!(n >= 2);
        let mut parts = vec![2];
        parts.extend(std::iter::repeat_n(1, n as usize - 2));
        Self::new(Partition::from_sorted(parts))
    }

    /// `(3, 1^{n-3})`.
    pub fn three_cycle(n: u32) -> Self {
        assert!(n >= 3);
        let mut parts = vec![3];
        parts.extend(std::iter::repeat_n(1, n as usize - 3));
        Self::new(Partition::from_sorted(parts))
    }

    /// `(2, 2, 1^{n-4})`.
    pub fn double_transposition(n: u32) -> Self {
        assert!(n >= 4);
        let mut parts = vec![2, 2];
        parts.extend(std::iter::repeat_n(1, n as usize - 4));
        Self::new(Partition::from_sorted(parts))
    }

    pub fn cycles(&self) -> &Partition {
        &self.cycles
    }

    pub fn n(&self) -> u32 {
        self.cycles.size()
    }

    /// Number of cycles of each length, indexed by length.
    pub fn multiplicities(&self) -> Vec<u32> {
        self.cycles.multiplicities()
    }

    pub fn fixed_points(&self) -> u32 {
        self.cycles.parts().iter().filter(|&&c| c == 1).count() as u32
    }

    pub fn num_cycles(&self) -> u32 {
        self.cycles.len() as u32
    }

    /// `+1` for even permutations, `-1` for odd.
    pub fn sign(&self) -> i32 {
        if (self.n() - self.num_cycles()).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn is_identity(&self) -> bool {
        self.cycles.parts().iter().all(|&c| c == 1)
    }

    /// `prod_j j^{m_j} m_j!`.
    pub fn centralizer_order(&self) -> BigUint {
        self.multiplicities()
            .iter()
            .enumerate()
            .skip(1)
            .fold(BigUint::one(), |acc, (j, &m)| acc * BigUint::from(j as u32).pow(m) * factorial(m))
    }

    pub fn class_size(&self) -> BigUint {
        let nf = factorial(self.n());
        let z = self.centralizer_order();
        assert!((&nf % &z).is_zero());
        nf / z
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.cycles, f)
    }
}

impl fmt::Debug for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycleType{}", self.cycles)
    }
}

impl Serialize for CycleType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.cycles.serialize(s)
    }
}

/// Every conjugacy class of `S_n`, in canonical partition order.
pub fn class_data(n: u32) -> Vec<CycleType> {
    enumerate_partitions(n).into_iter().map(CycleType::new).collect()
}

type CharKey = (Partition, Vec<u32>);

fn char_cache() -> &'static RwLock<HashMap<CharKey, BigInt>> {
    static CACHE: OnceLock<RwLock<HashMap<CharKey, BigInt>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Beta-set of a partition: `lambda_i + (l - 1 - i)`, strictly decreasing.
fn beta_set(lambda: &Partition) -> Vec<u32> {
    let l = lambda.len() as u32;
    lambda.parts().iter().enumerate().map(|(i, &p)| p + l - 1 - i as u32).collect()
}

fn from_beta_set(mut beta: Vec<u32>) -> Partition {
    beta.sort_unstable_by(|a, b| b.cmp(a));
    let l = beta.len() as u32;
    let parts = beta.iter().enumerate().map(|(i, &b)| b - (l - 1 - i as u32)).collect();
    Partition::from_unsorted(parts)
}

/// All border strips of length `r`: pairs of (remaining shape, sign).
fn remove_border_strips(lambda: &Partition, r: u32) -> Vec<(Partition, i32)> {
    let beta = beta_set(lambda);
    let mut out = Vec::new();
    for (idx, &b) in beta.iter().enumerate() {
        if b < r || beta.contains(&(b - r)) {
            continue;
        }
        let target = b - r;
        let jumped = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut next = beta.clone();
        next[idx] = target;
        let sign = if jumped % 2 == 0 { 1 } else { -1 };
        out.push((from_beta_set(next), sign));
    }
    out
}

fn character_rec(lambda: &Partition, cycles: &[u32]) -> BigInt {
    if cycles.is_empty() {
        return if lambda.is_empty() { BigInt::one() } else { BigInt::zero() };
    }
    let key = (lambda.clone(), cycles.to_vec());
    if let Some(v) = char_cache().read().expect("character cache poisoned").get(&key) {
        return v.clone();
    }
    let (&r, rest) = cycles.split_first().expect("nonempty");
    let mut total = BigInt::zero();
    for (shape, sign) in remove_border_strips(lambda, r) {
        let v = character_rec(&shape, rest);
        if sign > 0 {
            total += v;
        } else {
            total -= v;
        }
    }
    char_cache().write().expect("character cache poisoned").insert(key, total.clone());
    total
}

/// `chi^lambda(rho)`, memoized process-wide.
pub fn character(lambda: &Partition, rho: &CycleType) -> Result<BigInt> {
    if lambda.size() != rho.n() {
        return Err(Error::Argument(format!(
            "character: |lambda| = {} but class {} has size {}",
            lambda.size(),
            rho,
            rho.n()
        )));
    }
    // Cycle lengths are removed largest first.
    Ok(character_rec(lambda, rho.cycles().parts()))
}

/// `chi^lambda(12) / dim(lambda)` via the content-sum formula.
pub fn frobenius_ratio(lambda: &Partition) -> Result<BigRational> {
    let n = lambda.size();
    if n < 2 {
        return Err(Error::Argument(format!("frobenius_ratio needs n >= 2, got {n}")));
    }
    let pairs = n as i64 * (n as i64 - 1) / 2;
    Ok(BigRational::new(BigInt::from(lambda.content_sum()), BigInt::from(pairs)))
}

/// Full character table of `S_n`, rows indexed by irreducibles and columns
/// by classes, both in canonical order.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub n: u32,
    pub irreps: Vec<Partition>,
    pub classes: Vec<CycleType>,
    pub values: Vec<Vec<BigInt>>,
    pub dims: Vec<BigUint>,
    pub class_sizes: Vec<BigUint>,
}

impl CharacterTable {
    pub fn new(n: u32) -> Result<Self> {
        check_exact("character table", n)?;
        Ok(Self::build(n))
    }

    pub(crate) fn build(n: u32) -> Self {
        let irreps = enumerate_partitions(n);
        let classes = class_data(n);
        let values =
            irreps.iter().map(|l| classes.iter().map(|c| character_rec(l, c.cycles().parts())).collect()).collect();
        let dims = irreps.iter().map(Partition::dimension).collect();
        let class_sizes = classes.iter().map(CycleType::class_size).collect();
        Self { n, irreps, classes, values, dims, class_sizes }
    }

    pub fn class_index(&self, c: &CycleType) -> Option<usize> {
        self.classes.iter().position(|x| x == c)
    }

    pub fn irrep_index(&self, l: &Partition) -> Option<usize> {
        self.irreps.iter().position(|x| x == l)
    }

    /// `chi^lambda(C) / dim(lambda)` for row `i`, class column `c`.
    pub fn ratio(&self, i: usize, c: usize) -> BigRational {
        BigRational::new(self.values[i][c].clone(), BigInt::from(self.dims[i].clone()))
    }
}

/// Outcome of checking one family of exact identities.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct IdentityReport {
    pub name: String,
    pub n: u32,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl IdentityReport {
    pub fn new(name: impl Into<String>, n: u32) -> Self {
        Self { name: name.into(), n, checked: 0, failures: Vec::new() }
    }

    pub fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(detail());
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Column orthogonality: `sum_chi chi(g) chi(h) = n!/|C(g)| [g ~ h]`.
pub fn verify_orthogonality(n: u32) -> Result<IdentityReport> {
    let table = CharacterTable::new(n)?;
    let nf = factorial(n);
    let mut report = IdentityReport::new("row and column orthogonality", n);
    for a in 0..table.classes.len() {
        for b in 0..table.classes.len() {
            let sum: BigInt = (0..table.irreps.len()).map(|i| &table.values[i][a] * &table.values[i][b]).sum();
            let expected = if a == b { BigInt::from(&nf / &table.class_sizes[a]) } else { BigInt::zero() };
            report.check(sum == expected, || {
                format!("classes {} and {}: got {sum}, expected {expected}", table.classes[a], table.classes[b])
            });
        }
    }
    // Row orthogonality as well, using class sizes as weights.
    for i in 0..table.irreps.len() {
        for j in 0..table.irreps.len() {
            let sum: BigInt = (0..table.classes.len())
                .map(|c| BigInt::from(table.class_sizes[c].clone()) * &table.values[i][c] * &table.values[j][c])
                .sum();
            let expected = if i == j { BigInt::from(nf.clone()) } else { BigInt::zero() };
            report.check(sum == expected, || {
                format!("irreps {} and {}: got {sum}, expected {expected}", table.irreps[i], table.irreps[j])
            });
        }
    }
    Ok(report)
}

/// Number of tuples `(g_1..g_m)` with `g_j` in the given classes whose
/// product is a fixed element of class `target`, from the class-sum formula.
pub fn count_solutions(n: u32, class_list: &[CycleType], target: &CycleType) -> Result<BigUint> {
    if class_list.is_empty() {
        return Err(Error::Argument("count_solutions needs at least one class".into()));
    }
    if class_list.iter().chain(std::iter::once(target)).any(|c| c.n() != n) {
        return Err(Error::Argument(format!("count_solutions: every class must be of S_{n}")));
    }
    let table = CharacterTable::new(n)?;
    count_solutions_with(&table, class_list, target)
}

pub(crate) fn count_solutions_with(
    table: &CharacterTable,
    class_list: &[CycleType],
    target: &CycleType,
) -> Result<BigUint> {
    let idx = |c: &CycleType| table.class_index(c).expect("class of S_n");
    let cols: Vec<usize> = class_list.iter().map(idx).collect();
    let t = idx(target);
    let m = cols.len() as u32;
    let mut sum = BigRational::zero();
    for i in 0..table.irreps.len() {
        let mut term = rat_int(table.values[i][t].clone());
        for &c in &cols {
            term *= rat_int(table.values[i][c].clone());
        }
        let d = uint_to_rat(&table.dims[i]);
        for _ in 1..m {
            term /= d.clone();
        }
        sum += term;
    }
    let prefactor = cols.iter().fold(BigRational::one(), |acc, &c| acc * uint_to_rat(&table.class_sizes[c]))
        / uint_to_rat(&factorial(table.n));
    let value = prefactor * sum;
    if !value.is_integer() || value.is_negative() {
        return Err(Error::InternalConsistency(format!(
            "solution count evaluated to {value}, not a non-negative integer"
        )));
    }
    Ok(value.to_integer().to_biguint().expect("non-negative"))
}

/// Whether to induce up to `S_{n+k}` and restrict back, or restrict down to
/// `S_{n-k}` and induce back.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
}

/// Value at `g` of `Res Ind chi^lambda` (up) or `Ind Res chi^lambda` (down).
pub fn induced_restricted_character(lambda: &Partition, k: u32, g: &CycleType, direction: Direction) -> Result<BigInt> {
    if k < 1 {
        return Err(Error::Argument("k must be at least 1".into()));
    }
    if direction == Direction::Down && k > lambda.size() {
        return Err(Error::Argument(format!("restriction by {k} from S_{}", lambda.size())));
    }
    let chi = character(lambda, g)?;
    let n1 = g.fixed_points();
    let factor = match direction {
        Direction::Up => rising_from_next(n1, k),
        Direction::Down => falling(n1, k),
    };
    Ok(chi * BigInt::from(factor))
}

/// Checks that lattice path sums match the class-sum formula for the
/// multiplicity of `mu` in `Res Ind lambda` (up) or `Ind Res lambda` (down).
pub fn verify_branching_identity(n: u32, k: u32, direction: Direction) -> Result<IdentityReport> {
    let table = CharacterTable::new(n)?;
    let name = match direction {
        Direction::Up => format!("induce-restrict branching, k={k}"),
        Direction::Down => format!("restrict-induce branching, k={k}"),
    };
    let mut report = IdentityReport::new(name, n);
    if direction == Direction::Down && k > n {
        return Ok(report);
    }
    let level = match direction {
        Direction::Up => enumerate_partitions(n + k),
        Direction::Down => enumerate_partitions(n - k),
    };
    let nf = uint_to_rat(&factorial(n));
    let weights: Vec<BigInt> = table
        .classes
        .iter()
        .zip(&table.class_sizes)
        .map(|(c, size)| {
            let f = match direction {
                Direction::Up => rising_from_next(c.fixed_points(), k),
                Direction::Down => falling(c.fixed_points(), k),
            };
            BigInt::from(size * f)
        })
        .collect();
    for (i, lambda) in table.irreps.iter().enumerate() {
        for (j, mu) in table.irreps.iter().enumerate() {
            let lattice: BigUint = level
                .iter()
                .map(|tau| match direction {
                    Direction::Up => path_count(lambda, tau) * path_count(mu, tau),
                    Direction::Down => path_count(tau, lambda) * path_count(tau, mu),
                })
                .sum();
            let class_sum: BigInt =
                (0..table.classes.len()).map(|c| &weights[c] * &table.values[i][c] * &table.values[j][c]).sum();
            let class_side = rat_int(class_sum) / nf.clone();
            report.check(class_side == uint_to_rat(&lattice), || {
                format!("lambda={lambda} mu={mu}: lattice {lattice}, characters {class_side}")
            });
        }
    }
    Ok(report)
}

/// `Res Ind chi^lambda` (or `Ind Res`) evaluated class by class, against
/// the same character expanded through lattice-path multiplicities.
pub fn verify_induced_restricted(n: u32, k: u32, direction: Direction) -> Result<IdentityReport> {
    let table = CharacterTable::new(n)?;
    let mut report = IdentityReport::new(format!("induced/restricted character values, k={k}, {direction:?}"), n);
    if direction == Direction::Down && k > n {
        return Ok(report);
    }
    let level = match direction {
        Direction::Up => enumerate_partitions(n + k),
        Direction::Down => enumerate_partitions(n - k),
    };
    for (i, lambda) in table.irreps.iter().enumerate() {
        let mults: Vec<BigInt> = table
            .irreps
            .iter()
            .map(|mu| {
                let m: BigUint = level
                    .iter()
                    .map(|tau| match direction {
                        Direction::Up => path_count(lambda, tau) * path_count(mu, tau),
                        Direction::Down => path_count(tau, lambda) * path_count(tau, mu),
                    })
                    .sum();
                BigInt::from(m)
            })
            .collect();
        for (c, class) in table.classes.iter().enumerate() {
            let value = induced_restricted_character(lambda, k, class, direction)?;
            let expanded: BigInt = mults.iter().enumerate().map(|(j, m)| m * &table.values[j][c]).sum();
            report.check(value == expanded, || {
                format!("lambda={} class={class}: {value} vs {expanded}", table.irreps[i])
            });
        }
    }
    Ok(report)
}

/// Checks `|parents(mu, lambda)|` against the `k = 1` class sum.
pub fn verify_parents_identity(n: u32) -> Result<IdentityReport> {
    let table = CharacterTable::new(n)?;
    let nf = uint_to_rat(&factorial(n));
    let mut report = IdentityReport::new("parents count", n);
    for (i, lambda) in table.irreps.iter().enumerate() {
        for (j, mu) in table.irreps.iter().enumerate() {
            let class_sum: BigInt = (0..table.classes.len())
                .map(|c| {
                    BigInt::from(&table.class_sizes[c] * (table.classes[c].fixed_points() + 1))
                        * &table.values[i][c]
                        * &table.values[j][c]
                })
                .sum();
            let rhs = rat_int(class_sum) / nf.clone();
            let lhs = rat_int(crate::partitions::parents_count(lambda, mu));
            report.check(lhs == rhs, || format!("lambda={lambda} mu={mu}: {lhs} vs {rhs}"));
        }
    }
    Ok(report)
}

/// `chi^lambda(rho) = sign(rho) chi^{lambda'}(rho)`, plus the value at the
/// identity and the integrality of character ratios at a transposition.
pub fn verify_conjugation_symmetry(n: u32) -> Result<IdentityReport> {
    let table = CharacterTable::new(n)?;
    let mut report = IdentityReport::new("conjugation symmetry", n);
    for (i, lambda) in table.irreps.iter().enumerate() {
        let j = table.irrep_index(&lambda.conjugate()).expect("conjugate is a partition of n");
        for (c, class) in table.classes.iter().enumerate() {
            let expected = &table.values[j][c] * BigInt::from(class.sign());
            report.check(table.values[i][c] == expected, || {
                format!("lambda={lambda} class={class}: {} vs {}", table.values[i][c], expected)
            });
            if class.is_identity() {
                report.check(table.values[i][c] == BigInt::from(table.dims[i].clone()), || {
                    format!("lambda={lambda}: identity value differs from dimension")
                });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn ct(parts: &[u32]) -> CycleType {
        CycleType::new(p(parts))
    }

    #[test]
    fn central_data() {
        let sizes: Vec<(String, BigUint)> = class_data(3).iter().map(|c| (c.to_string(), c.class_size())).collect();
        assert_eq!(
            sizes,
            vec![
                ("[3]".into(), BigUint::from(2u32)),
                ("[2,1]".into(), BigUint::from(3u32)),
                ("[1,1,1]".into(), BigUint::from(1u32)),
            ]
        );
        assert_eq!(ct(&[2, 2]).class_size(), BigUint::from(3u32));
        assert_eq!(CycleType::identity(6).class_size(), BigUint::one());
        for n in 1..=8 {
            let total: BigUint = class_data(n).iter().map(|c| c.class_size()).sum();
            assert_eq!(total, factorial(n));
            for c in class_data(n) {
                assert_eq!(c.class_size() * c.centralizer_order(), factorial(n));
                assert_ne!(c.fixed_points() + 1, n);
            }
        }
    }

    #[test]
    fn s3_table() {
        let l = p(&[2, 1]);
        assert_eq!(character(&l, &ct(&[3])).unwrap(), BigInt::from(-1));
        assert_eq!(character(&l, &ct(&[2, 1])).unwrap(), BigInt::zero());
        assert_eq!(character(&l, &ct(&[1, 1, 1])).unwrap(), BigInt::from(2));
        for c in class_data(5) {
            assert_eq!(character(&Partition::row(5), &c).unwrap(), BigInt::one());
        }
    }

    #[test]
    fn sign_character() {
        for n in 1..=7 {
            for c in class_data(n) {
                let expected = if (n - c.num_cycles()) % 2 == 0 { 1 } else { -1 };
                assert_eq!(character(&Partition::column(n), &c).unwrap(), BigInt::from(expected));
            }
        }
    }

    #[test]
    fn size_mismatch_is_error() {
        assert!(matches!(character(&p(&[2, 1]), &ct(&[2, 2])), Err(Error::Argument(_))));
    }

    #[test]
    fn frobenius_examples() {
        assert_eq!(frobenius_ratio(&Partition::row(6)).unwrap(), BigRational::one());
        assert_eq!(frobenius_ratio(&Partition::column(6)).unwrap(), -BigRational::one());
        assert_eq!(frobenius_ratio(&p(&[2, 1])).unwrap(), BigRational::zero());
        assert!(frobenius_ratio(&p(&[1])).is_err());
    }

    #[test]
    fn frobenius_matches_characters() {
        for n in 2..=8 {
            let t = CycleType::transposition(n);
            for l in enumerate_partitions(n) {
                let chi = character(&l, &t).unwrap();
                let r = BigRational::new(chi, BigInt::from(l.dimension()));
                assert_eq!(frobenius_ratio(&l).unwrap(), r, "{l}");
            }
        }
    }

    #[test]
    fn orthogonality_small() {
        // (3) column: 1^2 + (-1)^2 + 1^2 = 3 = 6/2.
        let l3 = [p(&[3]), p(&[2, 1]), p(&[1, 1, 1])];
        let s: BigInt = l3.iter().map(|l| character(l, &ct(&[3])).unwrap().pow(2)).sum();
        assert_eq!(s, BigInt::from(3));
        for n in 1..=6 {
            let r = verify_orthogonality(n).unwrap();
            assert!(r.passed(), "{:?}", r.failures);
        }
    }

    #[test]
    fn solution_counts() {
        let t4 = CycleType::transposition(4);
        let id4 = CycleType::identity(4);
        assert_eq!(count_solutions(4, &[t4.clone(), t4.clone()], &id4).unwrap(), BigUint::from(6u32));
        assert_eq!(count_solutions(4, &[ct(&[3, 1])], &ct(&[3, 1])).unwrap(), BigUint::one());
        assert!(count_solutions(4, &[], &id4).is_err());
        assert!(count_solutions(4, &[CycleType::transposition(3)], &id4).is_err());
    }

    #[test]
    fn induced_restricted_examples() {
        let l = p(&[3, 1]);
        let id = CycleType::identity(4);
        assert_eq!(
            induced_restricted_character(&l, 1, &id, Direction::Up).unwrap(),
            BigInt::from(l.dimension() * 5u32)
        );
        assert_eq!(induced_restricted_character(&l, 2, &ct(&[4]), Direction::Down).unwrap(), BigInt::zero());
        assert_eq!(induced_restricted_character(&p(&[2, 1]), 1, &ct(&[2, 1]), Direction::Up).unwrap(), BigInt::zero());
        assert!(induced_restricted_character(&l, 5, &id, Direction::Down).is_err());
        assert!(induced_restricted_character(&l, 0, &id, Direction::Up).is_err());
    }

    #[test]
    fn branching_identities_small() {
        for n in 1..=5 {
            for k in 1..=2 {
                for d in [Direction::Up, Direction::Down] {
                    let r = verify_branching_identity(n, k, d).unwrap();
                    assert!(r.passed(), "{:?}", r.failures);
                }
            }
            assert!(verify_parents_identity(n).unwrap().passed());
            for d in [Direction::Up, Direction::Down] {
                assert!(verify_induced_restricted(n, 1, d).unwrap().passed());
            }
            assert!(verify_conjugation_symmetry(n).unwrap().passed());
        }
    }
}
