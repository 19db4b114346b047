//! Exact verification suites, one per module, each a list of named
//! assertions. The CLI `verify` command and the acceptance tests both run
//! these.

use crate::chains::{
    cycle_type_probability, mixing_report, spectral_certificate_with, transition_matrix, updown_parents_entry,
    ChainSpec,
};
use crate::characters::{
    count_solutions_with, verify_branching_identity, verify_conjugation_symmetry, verify_induced_restricted,
    verify_orthogonality, verify_parents_identity, CharacterTable, CycleType, Direction, IdentityReport,
};
use crate::error::{Error, Result};
use crate::exact::{factorial, uint_to_rat};
use crate::partitions::{enumerate_partitions, path_count, Partition};
use crate::plancherel::{growth_law_exact, plancherel_dist, rsk_shape};
use crate::report::Assertion;
use crate::stein::{stein_bound_constant_check, ExactStein};
use crate::tensor::deviation_report;
use num_bigint::BigUint;
use num_traits::One;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Partitions,
    Characters,
    Plancherel,
    Chains,
    Stein,
    Tensor,
}

impl Suite {
    pub const ALL: [Suite; 6] =
        [Suite::Partitions, Suite::Characters, Suite::Plancherel, Suite::Chains, Suite::Stein, Suite::Tensor];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Partitions => "partitions",
            Suite::Characters => "characters",
            Suite::Plancherel => "plancherel",
            Suite::Chains => "chains",
            Suite::Stein => "stein",
            Suite::Tensor => "tensor",
        }
    }

    pub fn run(self, nmax: u32) -> Vec<Assertion> {
        match self {
            Suite::Partitions => partitions_suite(nmax),
            Suite::Characters => characters_suite(nmax),
            Suite::Plancherel => plancherel_suite(nmax),
            Suite::Chains => chains_suite(nmax),
            Suite::Stein => stein_suite(nmax),
            Suite::Tensor => tensor_suite(nmax),
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

fn from_identity(r: Result<IdentityReport>) -> Assertion {
    match r {
        Ok(rep) => {
            let name = format!("{} (n={})", rep.name, rep.n);
            let detail = rep.failures.iter().take(3).cloned().collect::<Vec<_>>().join("; ");
            Assertion::new(name, rep.passed(), detail)
        }
        Err(e) => Assertion::new("identity check", false, e.to_string()),
    }
}

fn check(name: String, ok: bool) -> Assertion {
    Assertion::new(name, ok, "")
}

pub fn partitions_suite(nmax: u32) -> Vec<Assertion> {
    let mut out = Vec::new();
    for n in 0..=nmax {
        let states = enumerate_partitions(n);
        let dims: Vec<BigUint> = states.iter().map(Partition::dimension).collect();
        out.push(check(
            format!("dimension equals path count from the empty partition (n={n})"),
            states.iter().zip(&dims).all(|(l, d)| path_count(&Partition::empty(), l) == *d),
        ));
        out.push(check(
            format!("sum of squared dimensions is n! (n={n})"),
            dims.iter().map(|d| d * d).sum::<BigUint>() == factorial(n),
        ));
        out.push(check(
            format!("dimension and hook multiset invariant under conjugation (n={n})"),
            states.iter().zip(&dims).all(|(l, d)| {
                let c = l.conjugate();
                c.conjugate() == *l
                    && c.dimension() == *d
                    && c.hook_lengths().sorted_hooks() == l.hook_lengths().sorted_hooks()
            }),
        ));
        if n >= 1 {
            let lower = enumerate_partitions(n - 1);
            out.push(check(
                format!("path count recursion over up-neighbours (n={n})"),
                lower.iter().all(|tau| {
                    states.iter().all(|mu| {
                        let rec: BigUint =
                            tau.up_neighbors().iter().filter(|nu| mu.contains(nu)).map(|nu| path_count(nu, mu)).sum();
                        rec == path_count(tau, mu)
                    })
                }),
            ));
        }
    }
    out
}

/// All permutations of `0..n` as image vectors.
pub(crate) fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

pub(crate) fn cycle_type_of(perm: &[usize]) -> CycleType {
    let mut seen = vec![false; perm.len()];
    let mut lengths = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        lengths.push(len);
    }
    CycleType::new(Partition::from_unsorted(lengths))
}

/// Brute-force count of triples of transpositions whose product is a fixed
/// element of `target`.
fn brute_force_transposition_triples(n: usize, target: &CycleType) -> u64 {
    let transpositions: Vec<Vec<usize>> =
        all_permutations(n).into_iter().filter(|p| cycle_type_of(p) == CycleType::transposition(n as u32)).collect();
    let compose = |a: &[usize], b: &[usize]| -> Vec<usize> { (0..n).map(|i| a[b[i]]).collect() };
    // Fix a representative of the target class.
    let w = all_permutations(n).into_iter().find(|p| cycle_type_of(p) == *target).expect("class is nonempty");
    let mut count = 0;
    for a in &transpositions {
        for b in &transpositions {
            let ab = compose(a, b);
            for c in &transpositions {
                if compose(&ab, c) == w {
                    count += 1;
                }
            }
        }
    }
    count
}

pub fn characters_suite(nmax: u32) -> Vec<Assertion> {
    let mut out = Vec::new();
    for n in 1..=nmax {
        out.push(from_identity(verify_orthogonality(n)));
        out.push(from_identity(verify_conjugation_symmetry(n)));
        if n <= 7 {
            for k in 1..=2 {
                for d in [Direction::Up, Direction::Down] {
                    out.push(from_identity(verify_branching_identity(n, k, d)));
                }
            }
            out.push(from_identity(verify_parents_identity(n)));
        }
        for d in [Direction::Up, Direction::Down] {
            out.push(from_identity(verify_induced_restricted(n, 1, d)));
        }
        // Integrality of every two-class solution count.
        match CharacterTable::new(n) {
            Ok(table) => {
                let mut ok = true;
                let mut detail = String::new();
                for a in &table.classes {
                    for b in &table.classes {
                        for t in &table.classes {
                            if let Err(e) = count_solutions_with(&table, &[a.clone(), b.clone()], t) {
                                ok = false;
                                detail = e.to_string();
                            }
                        }
                    }
                }
                out.push(Assertion::new(
                    format!("pairwise solution counts are non-negative integers (n={n})"),
                    ok,
                    detail,
                ));
                if (2..=5).contains(&n) {
                    let t = CycleType::transposition(n);
                    let mut ok = true;
                    for target in &table.classes {
                        let formula = count_solutions_with(&table, &[t.clone(), t.clone(), t.clone()], target);
                        let brute = brute_force_transposition_triples(n as usize, target);
                        ok &= matches!(formula, Ok(v) if v == BigUint::from(brute));
                    }
                    out.push(check(format!("transposition triple counts match brute force (n={n})"), ok));
                }
            }
            Err(e) => out.push(Assertion::new(format!("character table (n={n})"), false, e.to_string())),
        }
    }
    out
}

fn longest_monotone(w: &[u32], increasing: bool) -> u32 {
    let mut best = vec![1u32; w.len()];
    for i in 0..w.len() {
        for j in 0..i {
            if (w[j] < w[i]) == increasing {
                best[i] = best[i].max(best[j] + 1);
            }
        }
    }
    best.into_iter().max().unwrap_or(0)
}

pub fn plancherel_suite(nmax: u32) -> Vec<Assertion> {
    let mut out = Vec::new();
    for n in 0..=nmax {
        match (plancherel_dist(n), growth_law_exact(n)) {
            (Ok(pl), Ok(growth)) => {
                out.push(check(format!("Plancherel law sums to one (n={n})"), pl.total().is_one()));
                out.push(check(format!("growth-process law equals Plancherel (n={n})"), growth == pl));
                if (1..=6).contains(&n) {
                    out.push(rsk_exhaustive(n, &pl.states, &pl.probs));
                }
            }
            (Err(e), _) | (_, Err(e)) => out.push(Assertion::new(format!("plancherel (n={n})"), false, e.to_string())),
        }
    }
    out
}

fn rsk_exhaustive(n: u32, states: &[Partition], probs: &[num_rational::BigRational]) -> Assertion {
    let mut shapes: BTreeMap<Partition, u64> = BTreeMap::new();
    let mut first_row_vs_lis = true;
    let mut first_col_vs_lds = true;
    for perm in all_permutations(n as usize) {
        let w: Vec<u32> = perm.iter().map(|&x| x as u32 + 1).collect();
        let shape = rsk_shape(&w).expect("permutation");
        first_row_vs_lis &= shape.first_row() == longest_monotone(&w, true);
        first_col_vs_lds &= shape.first_column() == longest_monotone(&w, false);
        *shapes.entry(shape).or_default() += 1;
    }
    let nf = uint_to_rat(&factorial(n));
    let law_ok = states.iter().zip(probs).all(|(l, p)| {
        let count = shapes.get(l).copied().unwrap_or(0);
        uint_to_rat(&BigUint::from(count)) == p * &nf
    });
    Assertion::new(
        format!("RSK over all permutations gives Plancherel, lambda_1 = LIS, lambda_1' = LDS (n={n})"),
        law_ok && first_row_vs_lis && first_col_vs_lds,
        "",
    )
}

pub fn chains_suite(nmax: u32) -> Vec<Assertion> {
    let mut out = Vec::new();
    for n in 1..=nmax {
        for k in 1..=3u32 {
            let mut specs = vec![ChainSpec::updown(n, k)];
            if k <= n {
                specs.push(ChainSpec::downup(n, k));
            }
            for spec in specs {
                let spec = match spec {
                    Ok(s) => s,
                    Err(e) => {
                        out.push(Assertion::new("chain spec", false, e.to_string()));
                        continue;
                    }
                };
                let matrix = match transition_matrix(spec).and_then(|m| m.check_stationary().map(|_| m)) {
                    Ok(m) => {
                        out.push(Assertion::pass(format!(
                            "unit rows, detailed balance, Plancherel stationary for {spec}"
                        )));
                        m
                    }
                    Err(e) => {
                        out.push(Assertion::new(format!("transition matrix for {spec}"), false, e.to_string()));
                        continue;
                    }
                };
                if k == 1 && matches!(spec.kind, crate::ChainKind::UpDown(_)) {
                    let ok = matrix.states.iter().enumerate().all(|(i, l)| {
                        matrix
                            .states
                            .iter()
                            .enumerate()
                            .all(|(j, mu)| matrix.entries[i][j] == updown_parents_entry(l, mu))
                    });
                    out.push(check(format!("up-down entries equal the parents formula (n={n})"), ok));
                }
                if k <= 2 && n <= 7 {
                    let cert = CharacterTable::new(n).and_then(|t| spectral_certificate_with(&matrix, &t));
                    match cert {
                        Ok(c) => {
                            let count_ok = c.eigenfunctions == enumerate_partitions(n).len();
                            out.push(Assertion::new(
                                format!("spectral certificate for {spec}"),
                                c.valid && count_ok,
                                c.failures.first().cloned().unwrap_or_default(),
                            ));
                        }
                        Err(e) => {
                            out.push(Assertion::new(format!("spectral certificate for {spec}"), false, e.to_string()))
                        }
                    }
                }
            }
        }
        if n <= 7 {
            let kingman = ChainSpec::kingman(n).and_then(transition_matrix).and_then(|m| {
                let expected: Vec<_> = m.states.iter().map(cycle_type_probability).collect();
                if expected != m.stationary {
                    return Err(Error::InvariantViolation("stationary law differs from the cycle-type law".into()));
                }
                m.check_stationary()
            });
            out.push(Assertion::from_result(
                format!("Kingman chain reversible with cycle-type stationary law (n={n})"),
                kingman,
            ));
        }
    }
    if nmax >= 6 {
        match mixing_report(6, 1, 40) {
            Ok(rep) => out.push(check(
                "mixing of J(1) at n=6, r=0..40: 2TV <= L2 <= sqrt(n!) beta^r, TV monotone, thresholds".into(),
                rep.passed,
            )),
            Err(e) => out.push(Assertion::new("mixing report n=6", false, e.to_string())),
        }
    }
    out
}

pub fn stein_suite(nmax: u32) -> Vec<Assertion> {
    let mut out = Vec::new();
    for n in 1..=nmax {
        let stein = match ExactStein::new(n) {
            Ok(s) => s,
            Err(e) => {
                out.push(Assertion::new(format!("exact Stein data (n={n})"), false, e.to_string()));
                continue;
            }
        };
        let states = stein.matrix.states.clone();
        out.push(Assertion::from_result(
            format!("E^lambda(W*) = (1 - 2/(n+1)) W for every lambda (n={n})"),
            states.iter().try_for_each(|l| stein.conditional_first_moment(l).map(|_| ())),
        ));
        out.push(Assertion::from_result(
            format!("E^lambda((W*)^2) three-term formula for every lambda (n={n})"),
            states.iter().try_for_each(|l| stein.conditional_second_moment(l).map(|_| ())),
        ));
        out.push(Assertion::from_result(format!("E(W) = 0 and Var(W) = 1 - 1/n (n={n})"), stein.mean_variance_check()));
        out.push(Assertion::from_result(format!("term one equals (3n^2-5n+6)/(4n^3) (n={n})"), stein.term1_exact()));
        out.push(Assertion::from_result(
            format!("Frobenius formula matches characters (n={n})"),
            stein.check_frobenius(),
        ));
        if n <= 7 {
            out.push(Assertion::from_result(format!("(W, W*) exchangeable (n={n})"), stein.check_exchangeable()));
        }
    }
    match stein_bound_constant_check(2, 1_000_000, 50) {
        Ok(rep) => out.push(Assertion::new(
            "Stein bound constant 40.1 holds on grid [2, 1e6]",
            rep.passed,
            format!("worst lhs/rhs = {:.4}", rep.worst_ratio),
        )),
        Err(e) => out.push(Assertion::new("Stein bound constant", false, e.to_string())),
    }
    out
}

pub fn tensor_suite(nmax: u32) -> Vec<Assertion> {
    let mut out = Vec::new();
    for n in 3..=nmax {
        for k in 1..=2u32.min(n - 1) {
            let mut ok = true;
            let mut detail = String::new();
            for r in 1..=20 {
                let cs: &[f64] = if r == 1 { &crate::chains::THRESHOLD_CS } else { &[] };
                match deviation_report(n, k, r, cs) {
                    Ok(rep) if rep.passed => {}
                    Ok(rep) => {
                        ok = false;
                        detail = format!("r={r}: deviation {} vs bound {}", rep.deviation, rep.bound);
                    }
                    Err(e) => {
                        ok = false;
                        detail = e.to_string();
                    }
                }
            }
            out.push(Assertion::new(
                format!("tensor powers n={n}, k={k}, r<=20: deviation <= n! beta^2r, integral, dimension conserved"),
                ok,
                detail,
            ));
        }
    }
    out
}

/// Runs the selected suites (all when `suite` is `None`).
pub fn run(suite: Option<Suite>, nmax: u32) -> Result<Vec<(Suite, Vec<Assertion>)>> {
    crate::limits::check_exact("verify", nmax)?;
    let suites: Vec<Suite> = suite.map(|s| vec![s]).unwrap_or_else(|| Suite::ALL.to_vec());
    Ok(suites.into_iter().map(|s| (s, s.run(nmax))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_helpers() {
        assert_eq!(all_permutations(4).len(), 24);
        assert_eq!(cycle_type_of(&[1, 0, 3, 2]), CycleType::new(Partition::new(vec![2, 2]).unwrap()));
        assert!(brute_force_transposition_triples(3, &CycleType::transposition(3)) > 0);
    }

    #[test]
    fn small_suites_pass() {
        for suite in Suite::ALL {
            for a in suite.run(4) {
                assert!(a.passed, "{}: {}", a.name, a.detail);
            }
        }
    }
}
