//! Integer partitions as vertices of the Young lattice.
//!
//! Partitions of a fixed size are always listed in reverse-lexicographic
//! order, e.g. `[4], [3,1], [2,2], [2,1,1], [1,1,1,1]`. Every index set in
//! the crate (distributions, matrix rows, report rows) uses that order.

use crate::error::{Error, Result};
use crate::exact::factorial;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{OnceLock, RwLock};

/// A weakly decreasing sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Validates that `parts` is weakly decreasing and positive.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Argument(format!("partition {parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Argument(format!("partition {parts:?} is not weakly decreasing")));
        }
        Ok(Self { parts })
    }

    /// Builds a partition from parts already known to be valid.
    pub(crate) fn from_sorted(parts: Vec<u32>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(parts.iter().all(|&p| p > 0));
        Self { parts }
    }

    /// Sorts arbitrary positive lengths into a partition, dropping zeros.
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// The one-row partition `(n)`.
    pub fn row(n: u32) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Self { parts: vec![n] }
        }
    }

    /// The one-column partition `(1^n)`.
    pub fn column(n: u32) -> Self {
        Self { parts: vec![1; n as usize] }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Length of row `i`, zero past the last row.
    pub fn part(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// Number of nonzero rows.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// First row length.
    pub fn first_row(&self) -> u32 {
        self.part(0)
    }

    /// First column length.
    pub fn first_column(&self) -> u32 {
        self.parts.len() as u32
    }

    pub fn conjugate(&self) -> Partition {
        let width = self.first_row() as usize;
        let mut cols = vec![0u32; width];
        for &p in &self.parts {
            for c in cols.iter_mut().take(p as usize) {
                *c += 1;
            }
        }
        Partition::from_sorted(cols)
    }

    /// Number of rows of each length: `m[j]` rows of length `j` (index 0 unused).
    pub fn multiplicities(&self) -> Vec<u32> {
        let mut m = vec![0u32; self.first_row() as usize + 1];
        for &p in &self.parts {
            m[p as usize] += 1;
        }
        m
    }

    /// Whether the diagram of `other` fits inside this one.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.parts.iter().zip(&self.parts).all(|(a, b)| a <= b)
    }

    /// Rows to which a box can be added (including the new row at the bottom).
    pub fn addable_rows(&self) -> Vec<usize> {
        (0..=self.len()).filter(|&i| i == 0 || self.parts[i - 1] > self.part(i)).collect()
    }

    /// Rows whose last box can be removed.
    pub fn removable_rows(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.parts[i] > self.part(i + 1)).collect()
    }

    /// Adds a box at the end of row `i`; `i` must be addable.
    pub fn with_box_added(&self, i: usize) -> Partition {
        let mut parts = self.parts.clone();
        if i == parts.len() {
            parts.push(1);
        } else {
            parts[i] += 1;
        }
        Partition::from_sorted(parts)
    }

    /// Removes the last box of row `i`; `i` must be removable.
    pub fn with_box_removed(&self, i: usize) -> Partition {
        let mut parts = self.parts.clone();
        parts[i] -= 1;
        if parts[i] == 0 {
            parts.pop();
        }
        Partition::from_sorted(parts)
    }

    /// All partitions covering this one, in canonical order.
    pub fn up_neighbors(&self) -> Vec<Partition> {
        // Adding to a higher row always gives a lexicographically larger result.
        self.addable_rows().into_iter().map(|i| self.with_box_added(i)).collect()
    }

    /// All partitions covered by this one, in canonical order.
    pub fn down_neighbors(&self) -> Vec<Partition> {
        self.removable_rows().into_iter().rev().map(|i| self.with_box_removed(i)).collect()
    }

    pub fn hook_lengths(&self) -> HookGrid {
        let conj = self.conjugate();
        let rows = self
            .parts
            .iter()
            .enumerate()
            .map(|(i, &len)| {
                (0..len as usize).map(|j| (len - j as u32 - 1) + (conj.parts[j] - i as u32 - 1) + 1).collect()
            })
            .collect();
        HookGrid { rows }
    }

    /// Product of all hook lengths.
    pub fn hook_product(&self) -> BigUint {
        self.hook_lengths().rows.iter().flatten().fold(BigUint::one(), |acc, &h| acc * h)
    }

    /// Dimension of the irreducible representation, `n! / prod h(x)`.
    pub fn dimension(&self) -> BigUint {
        let nf = factorial(self.size());
        let hp = self.hook_product();
        let (q, r) = (&nf / &hp, &nf % &hp);
        assert!(r.is_zero(), "hook product of {self} does not divide n!");
        q
    }

    /// Sum of cell contents (column minus row), equal to
    /// `sum_i C(lambda_i, 2) - C(lambda_i', 2)`.
    pub fn content_sum(&self) -> i64 {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &len)| {
                let len = len as i64;
                len * (len - 1) / 2 - len * i as i64
            })
            .sum()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected bracketed partition, got {s:?}")))?;
        if inner.trim().is_empty() {
            return Ok(Partition::empty());
        }
        let parts = inner
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Hook lengths laid out row by row in the shape of the partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HookGrid {
    pub rows: Vec<Vec<u32>>,
}

impl HookGrid {
    pub fn get(&self, row: usize, col: usize) -> Option<u32> {
        self.rows.get(row).and_then(|r| r.get(col)).copied()
    }

    /// All hooks, sorted.
    pub fn sorted_hooks(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.rows.iter().flatten().copied().collect();
        v.sort_unstable();
        v
    }
}

/// Every partition of `n`, in reverse-lexicographic order.
pub fn enumerate_partitions(n: u32) -> Vec<Partition> {
    fn rec(remaining: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition::from_sorted(prefix.clone()));
            return;
        }
        for p in (1..=remaining.min(max)).rev() {
            prefix.push(p);
            rec(remaining - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Position of each partition in a list, for index lookups.
pub fn index_of(states: &[Partition]) -> HashMap<Partition, usize> {
    states.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect()
}

type PathCache = RwLock<HashMap<(Partition, Partition), BigUint>>;

fn path_cache() -> &'static PathCache {
    static CACHE: OnceLock<PathCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Number of saturated chains from `lower` up to `upper` in the Young
/// lattice (the skew dimension of `upper / lower`); zero if not contained.
pub fn path_count(lower: &Partition, upper: &Partition) -> BigUint {
    if lower.size() > upper.size() || !upper.contains(lower) {
        return BigUint::zero();
    }
    if lower == upper {
        return BigUint::one();
    }
    let key = (lower.clone(), upper.clone());
    if let Some(v) = path_cache().read().expect("path cache poisoned").get(&key) {
        return v.clone();
    }
    let total = lower
        .up_neighbors()
        .iter()
        .filter(|nu| upper.contains(nu))
        .map(|nu| path_count(nu, upper))
        .fold(BigUint::zero(), |acc, c| acc + c);
    path_cache().write().expect("path cache poisoned").insert(key, total.clone());
    total
}

/// Number of partitions of size `n+1` covering both `a` and `b`.
pub fn parents_count(a: &Partition, b: &Partition) -> u32 {
    if a == b {
        return a.addable_rows().len() as u32;
    }
    let ups: Vec<Partition> = a.up_neighbors();
    ups.iter().filter(|p| p.contains(b)).count() as u32
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    /// Count of partitions of n via the recurrence on largest part at most k.
    fn partition_count_oracle(n: usize) -> usize {
        let mut table = vec![vec![0usize; n + 1]; n + 1];
        table[0].fill(1);
        for m in 1..=n {
            for k in 1..=n {
                table[m][k] = table[m][k - 1] + if k <= m { table[m - k][k] } else { 0 };
            }
        }
        table[n][n]
    }

    #[test]
    fn enumeration_order_and_counts() {
        assert_eq!(enumerate_partitions(0), vec![Partition::empty()]);
        let four: Vec<String> = enumerate_partitions(4).iter().map(|x| x.to_string()).collect();
        assert_eq!(four, ["[4]", "[3,1]", "[2,2]", "[2,1,1]", "[1,1,1,1]"]);
        for n in 0..=20 {
            assert_eq!(enumerate_partitions(n).len(), partition_count_oracle(n as usize), "n={n}");
        }
        assert_eq!(enumerate_partitions(10).len(), 42);
    }

    #[test]
    fn rejects_invalid_parts() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert!("[3,,1]".parse::<Partition>().is_err());
        assert!("3,1".parse::<Partition>().is_err());
    }

    #[test]
    fn text_form() {
        assert_eq!(p(&[4, 2, 1]).to_string(), "[4,2,1]");
        assert_eq!(Partition::empty().to_string(), "[]");
        assert_eq!("[]".parse::<Partition>().unwrap(), Partition::empty());
        assert_eq!(" [4, 2,1] ".parse::<Partition>().unwrap(), p(&[4, 2, 1]));
    }

    #[test]
    fn conjugates() {
        assert_eq!(p(&[4, 2, 1]).conjugate(), p(&[3, 2, 1, 1]));
        assert_eq!(Partition::row(5).conjugate(), Partition::column(5));
        assert_eq!(p(&[2, 2]).conjugate(), p(&[2, 2]));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
    }

    #[test]
    fn hooks() {
        assert_eq!(p(&[4, 2, 1]).hook_lengths().rows, vec![vec![6, 4, 2, 1], vec![3, 1], vec![1]]);
        assert_eq!(p(&[1]).hook_lengths().rows, vec![vec![1]]);
        assert_eq!(p(&[2, 2]).hook_lengths().rows, vec![vec![3, 2], vec![2, 1]]);
    }

    #[test]
    fn dimensions() {
        assert_eq!(p(&[4, 2, 1]).dimension(), BigUint::from(35u32));
        assert_eq!(Partition::row(9).dimension(), BigUint::one());
        assert_eq!(Partition::empty().dimension(), BigUint::one());
        let total: BigUint = enumerate_partitions(5).iter().map(|l| l.dimension().pow(2)).sum();
        assert_eq!(total, BigUint::from(120u32));
    }

    #[test]
    fn neighbors() {
        assert_eq!(Partition::empty().up_neighbors(), vec![p(&[1])]);
        assert_eq!(p(&[2, 1]).up_neighbors(), vec![p(&[3, 1]), p(&[2, 2]), p(&[2, 1, 1])]);
        assert_eq!(p(&[2, 1]).down_neighbors(), vec![p(&[2]), p(&[1, 1])]);
        assert!(Partition::empty().down_neighbors().is_empty());
    }

    #[test]
    fn path_counts() {
        assert_eq!(path_count(&Partition::empty(), &p(&[4, 2, 1])), BigUint::from(35u32));
        assert_eq!(path_count(&p(&[3, 1]), &p(&[3, 1])), BigUint::one());
        assert_eq!(path_count(&p(&[2]), &p(&[1, 1, 1])), BigUint::zero());
        assert_eq!(path_count(&p(&[2, 1]), &p(&[1])), BigUint::zero());
    }

    #[test]
    fn content_sum_matches_binomial_form() {
        for n in 0..=9 {
            for l in enumerate_partitions(n) {
                let c = l.conjugate();
                let binom = |x: u32| (x as i64) * (x as i64 - 1) / 2;
                let expected: i64 =
                    l.parts().iter().map(|&x| binom(x)).sum::<i64>() - c.parts().iter().map(|&x| binom(x)).sum::<i64>();
                assert_eq!(l.content_sum(), expected, "{l}");
            }
        }
    }

    #[test]
    fn parents_diagonal_is_addable_corners() {
        assert_eq!(parents_count(&p(&[2, 1]), &p(&[2, 1])), 3);
        assert_eq!(parents_count(&p(&[2]), &p(&[1, 1])), 1);
        assert_eq!(parents_count(&p(&[3]), &p(&[1, 1, 1])), 0);
    }
}
