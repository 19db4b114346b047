//! Multiplicities of irreducibles in tensor powers of the permutation
//! representation `Ind_{S_{n-k}}^{S_n}(1)`, and their convergence to the
//! Plancherel shape.

use crate::chains::{downup_beta, ser_rat};
use crate::characters::CharacterTable;
use crate::error::{Error, Result};
use crate::exact::{factorial, falling, to_f64, uint_to_rat};
use crate::limits::check_exact;
use crate::partitions::{enumerate_partitions, index_of, Partition};
use crate::plancherel::plancherel_dist;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityVector {
    pub n: u32,
    pub k: u32,
    pub r: u32,
    pub states: Vec<Partition>,
    pub mult: Vec<BigUint>,
}

impl MultiplicityVector {
    pub fn get(&self, lambda: &Partition) -> Option<&BigUint> {
        self.states.iter().position(|s| s == lambda).map(|i| &self.mult[i])
    }

    /// `sum_lambda mult(lambda) dim(lambda)`.
    pub fn total_dimension(&self) -> BigUint {
        self.states.iter().zip(&self.mult).map(|(l, m)| m * l.dimension()).sum()
    }

    /// `(n (n-1) ... (n-k+1))^r`, the dimension of the tensor power.
    pub fn expected_dimension(&self) -> BigUint {
        falling(self.n, self.k).pow(self.r)
    }

    /// `n! mult(lambda) / (dim(lambda) ((n)_k)^r)` for every state.
    pub fn normalized(&self) -> Vec<BigRational> {
        let nf = uint_to_rat(&factorial(self.n));
        let total = uint_to_rat(&self.expected_dimension());
        self.states
            .iter()
            .zip(&self.mult)
            .map(|(l, m)| &nf * uint_to_rat(m) / (uint_to_rat(&l.dimension()) * &total))
            .collect()
    }
}

fn validate(n: u32, k: u32) -> Result<()> {
    if k < 1 || k >= n {
        return Err(Error::Argument(format!("need 1 <= k < n, got n={n}, k={k}")));
    }
    check_exact("tensor_multiplicities", n)
}

/// Multiplicities by the class sum
/// `(1/n!) sum_C |C| ((n_1(C))_k)^r chi^lambda(C)`.
pub fn tensor_multiplicities(n: u32, k: u32, r: u32) -> Result<MultiplicityVector> {
    validate(n, k)?;
    tensor_multiplicities_from_table(&CharacterTable::new(n)?, k, r)
}

/// Multiplicities for `k = 1` by iterating
/// `m_{r+1}(mu) = sum_lambda m_r(lambda) c(lambda, mu)`, where `c` counts
/// common down-neighbours (tensoring with the permutation representation
/// is inducing the restriction).
pub fn tensor_multiplicities_by_recursion(n: u32, k: u32, r: u32) -> Result<MultiplicityVector> {
    if k != 1 {
        return Err(Error::Argument(format!("lattice recursion handles k = 1 only, got {k}")));
    }
    if n < 2 {
        return Err(Error::Argument("need n >= 2".into()));
    }
    check_exact("tensor_multiplicities_by_recursion", n)?;
    let states = enumerate_partitions(n);
    let index = index_of(&states);
    let downs: Vec<Vec<Partition>> = states.iter().map(Partition::down_neighbors).collect();
    let mut mult = vec![BigUint::zero(); states.len()];
    mult[index[&Partition::row(n)]] = BigUint::one();
    for _ in 0..r {
        let mut next = vec![BigUint::zero(); states.len()];
        for (x, m) in mult.iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            for tau in &downs[x] {
                for mu in tau.up_neighbors() {
                    next[index[&mu]] += m;
                }
            }
        }
        mult = next;
    }
    Ok(MultiplicityVector { n, k, r, states, mult })
}

/// `sum_lambda |normalized(lambda) - 1|^2 pi(lambda)`.
pub fn weighted_deviation(v: &MultiplicityVector) -> Result<BigRational> {
    let pi = plancherel_dist(v.n)?.probs;
    Ok(v.normalized()
        .iter()
        .zip(&pi)
        .map(|(x, p)| {
            let d = x - BigRational::one();
            &d * &d * p
        })
        .sum())
}

#[derive(Clone, Debug, Serialize)]
pub struct TensorThreshold {
    pub c: f64,
    /// `(n log n + c) / (2 log(1/beta))`.
    pub r_star: f64,
    pub r: u32,
    pub deviation: f64,
    /// `sqrt(2 pi) e^{-c}`.
    pub guarantee: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct StateRow {
    pub partition: Partition,
    /// Decimal string.
    pub multiplicity: String,
    #[serde(serialize_with = "ser_rat")]
    pub normalized: BigRational,
    pub normalized_f64: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeviationReport {
    pub n: u32,
    pub k: u32,
    pub r: u32,
    #[serde(serialize_with = "ser_rat")]
    pub beta: BigRational,
    #[serde(serialize_with = "ser_rat")]
    pub deviation: BigRational,
    pub deviation_f64: f64,
    #[serde(serialize_with = "ser_rat")]
    pub bound: BigRational,
    pub bound_f64: f64,
    pub within_bound: bool,
    pub integral: bool,
    pub dimension_conserved: bool,
    /// Present for k = 1: the lattice recursion agrees exactly.
    pub recursion_agrees: Option<bool>,
    pub rows: Vec<StateRow>,
    pub thresholds: Vec<TensorThreshold>,
    pub passed: bool,
}

fn tensor_r_star(n: u32, beta: f64, c: f64) -> f64 {
    if beta <= 0.0 {
        return 0.0;
    }
    let nf = n as f64;
    (nf * nf.ln() + c) / (2.0 * (1.0 / beta).ln())
}

/// Exact weighted deviation of the normalized multiplicities against
/// `n! beta^{2r}`, plus the threshold checks at `c` in `cs`.
pub fn deviation_report(n: u32, k: u32, r: u32, cs: &[f64]) -> Result<DeviationReport> {
    if n < 3 {
        return Err(Error::Argument(format!("deviation report needs n >= 3, got {n}")));
    }
    let v = tensor_multiplicities(n, k, r)?;
    let beta = downup_beta(n, k);
    let deviation = weighted_deviation(&v)?;
    let bound = uint_to_rat(&factorial(n)) * num_traits::pow(beta.clone(), 2 * r as usize);
    let dimension_conserved = v.total_dimension() == v.expected_dimension();
    let recursion_agrees =
        if k == 1 { Some(tensor_multiplicities_by_recursion(n, 1, r)?.mult == v.mult) } else { None };
    let beta_f = to_f64(&beta);
    let mut thresholds = Vec::new();
    for &c in cs {
        let r_star = tensor_r_star(n, beta_f, c);
        let rc = r_star.floor() as u32 + 1;
        let dev = to_f64(&weighted_deviation(&tensor_multiplicities(n, k, rc)?)?);
        let guarantee = (2.0 * std::f64::consts::PI).sqrt() * (-c).exp();
        thresholds.push(TensorThreshold { c, r_star, r: rc, deviation: dev, guarantee, passed: dev <= guarantee });
    }
    let rows = v
        .states
        .iter()
        .zip(&v.mult)
        .zip(v.normalized())
        .map(|((l, m), x)| StateRow {
            partition: l.clone(),
            multiplicity: m.to_string(),
            normalized_f64: to_f64(&x),
            normalized: x,
        })
        .collect();
    let within_bound = deviation <= bound;
    let passed =
        within_bound && dimension_conserved && recursion_agrees.unwrap_or(true) && thresholds.iter().all(|t| t.passed);
    Ok(DeviationReport {
        n,
        k,
        r,
        deviation_f64: to_f64(&deviation),
        bound_f64: to_f64(&bound),
        beta,
        deviation,
        bound,
        within_bound,
        // tensor_multiplicities errors out on any non-integral value
        integral: true,
        dimension_conserved,
        recursion_agrees,
        rows,
        thresholds,
        passed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EquidistributionSummary {
    pub n: u32,
    pub k: u32,
    pub epsilon: f64,
    /// `max_lambda |normalized(lambda) - 1|` for `r = 0..=r_max`.
    pub max_relative_deviation: Vec<f64>,
    /// Weighted squared deviation for `r = 0..=r_max`.
    pub weighted_deviation: Vec<f64>,
    pub first_r_below_epsilon: Option<u32>,
    /// `n^2 log(n) / 4`.
    pub heuristic_r: f64,
    /// `(n log n + 1) / (2 log(1/beta))`, the `c = 1` threshold.
    pub threshold_r_c1: f64,
    /// First `r` with weighted deviation at most `sqrt(2 pi) e^{-1}`.
    pub first_r_within_c1_guarantee: Option<u32>,
}

/// How quickly the multiplicities approach `dim(lambda) ((n)_k)^r / n!`.
pub fn equidistribution_summary(n: u32, k: u32, r_max: u32, epsilon: f64) -> Result<EquidistributionSummary> {
    validate(n, k)?;
    let table = CharacterTable::new(n)?;
    let pi = plancherel_dist(n)?.probs;
    let mut max_rel = Vec::new();
    let mut weighted = Vec::new();
    for r in 0..=r_max {
        let v = tensor_multiplicities_from_table(&table, k, r)?;
        let norm = v.normalized();
        let max = norm.iter().map(|x| (x - BigRational::one()).abs()).max().expect("nonempty");
        max_rel.push(to_f64(&max));
        let w: BigRational = norm
            .iter()
            .zip(&pi)
            .map(|(x, p)| {
                let d = x - BigRational::one();
                &d * &d * p
            })
            .sum();
        weighted.push(to_f64(&w));
    }
    let beta = to_f64(&downup_beta(n, k));
    let c1_guarantee = (2.0 * std::f64::consts::PI).sqrt() * (-1f64).exp();
    let nf64 = n as f64;
    Ok(EquidistributionSummary {
        n,
        k,
        epsilon,
        first_r_below_epsilon: max_rel.iter().position(|&d| d < epsilon).map(|r| r as u32),
        first_r_within_c1_guarantee: weighted.iter().position(|&d| d <= c1_guarantee).map(|r| r as u32),
        max_relative_deviation: max_rel,
        weighted_deviation: weighted,
        heuristic_r: nf64 * nf64 * nf64.ln() / 4.0,
        threshold_r_c1: tensor_r_star(n, beta, 1.0),
    })
}

fn tensor_multiplicities_from_table(table: &CharacterTable, k: u32, r: u32) -> Result<MultiplicityVector> {
    let n = table.n;
    let nf = BigInt::from(factorial(n));
    let mult = (0..table.irreps.len())
        .map(|i| {
            let s: BigInt = table
                .classes
                .iter()
                .zip(&table.class_sizes)
                .zip(&table.values[i])
                .map(|((c, size), chi)| BigInt::from(size * falling(c.fixed_points(), k).pow(r)) * chi)
                .sum();
            if !(&s % &nf).is_zero() || s.is_negative() {
                return Err(Error::InternalConsistency(format!("non-integral multiplicity {s}/{nf}")));
            }
            Ok((s / &nf).to_biguint().expect("non-negative"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MultiplicityVector { n, k, r, states: table.irreps.clone(), mult })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn r_zero_is_trivial() {
        let v = tensor_multiplicities(5, 2, 0).unwrap();
        for (l, m) in v.states.iter().zip(&v.mult) {
            let expected = if *l == Partition::row(5) { 1u32 } else { 0 };
            assert_eq!(*m, BigUint::from(expected));
        }
    }

    #[test]
    fn s3_square_of_permutation_rep() {
        let v = tensor_multiplicities(3, 1, 2).unwrap();
        assert_eq!(v.get(&p(&[3])), Some(&BigUint::from(2u32)));
        assert_eq!(v.get(&p(&[2, 1])), Some(&BigUint::from(3u32)));
        assert_eq!(v.get(&p(&[1, 1, 1])), Some(&BigUint::from(1u32)));
        assert_eq!(v.total_dimension(), BigUint::from(9u32));
        assert_eq!(tensor_multiplicities_by_recursion(3, 1, 2).unwrap(), v);
    }

    #[test]
    fn recursion_first_step() {
        for n in 2..=7 {
            let v = tensor_multiplicities_by_recursion(n, 1, 1).unwrap();
            let mut std = vec![n - 1, 1];
            if n == 2 {
                std = vec![1, 1];
            }
            for (l, m) in v.states.iter().zip(&v.mult) {
                let one = *l == Partition::row(n) || *l == p(&std);
                assert_eq!(*m, BigUint::from(one as u32), "n={n} {l}");
            }
        }
        assert!(tensor_multiplicities_by_recursion(4, 2, 1).is_err());
    }

    #[test]
    fn argument_checks() {
        assert!(tensor_multiplicities(3, 3, 1).is_err());
        assert!(tensor_multiplicities(3, 0, 1).is_err());
        assert!(deviation_report(2, 1, 1, &[]).is_err());
    }

    #[test]
    fn small_deviation_example() {
        // n=3, k=1, r=2: normalized values 4/3, 1, 2/3 with weights 1/6, 4/6, 1/6.
        let rep = deviation_report(3, 1, 2, &[]).unwrap();
        assert_eq!(rep.beta, rat(1, 3));
        assert_eq!(rep.deviation, rat(1, 27));
        assert_eq!(rep.bound, rat(6, 81));
        assert!(rep.within_bound);
    }

    #[test]
    fn equidistribution_baseline() {
        let s = equidistribution_summary(5, 1, 30, 1e-2).unwrap();
        assert!((s.max_relative_deviation[0] - 119.0).abs() < 1e-9);
        assert!(s.max_relative_deviation[30] < 1e-2);
    }
}
