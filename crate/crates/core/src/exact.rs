//! Small helpers for exact big-integer and rational arithmetic.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// `x (x-1) ... (x-k+1)`; zero once a factor hits zero.
pub fn falling(x: u32, k: u32) -> BigUint {
    if k > x {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::one(), |acc, i| acc * (x - i))
}

/// `(x+1) (x+2) ... (x+k)`.
pub fn rising_from_next(x: u32, k: u32) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * (x + i))
}

pub fn rat(num: impl Into<BigInt>, den: impl Into<BigInt>) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn rat_int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

pub fn uint_to_rat(v: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(v.clone()))
}

/// Serializes as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p.trim().parse().ok()?, q))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Nearest `f64`, robust to numerators and denominators beyond `f64` range.
pub fn to_f64(r: &BigRational) -> f64 {
    if let (Some(p), Some(q)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if p.is_finite() && q.is_finite() && q != 0.0 {
            return p / q;
        }
    }
    // Shift both sides down to 64 significant bits before dividing.
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift_n = (nb - 64).max(0);
    let shift_d = (db - 64).max(0);
    let p = (r.numer().abs() >> shift_n as usize).to_f64().unwrap_or(0.0);
    let q = (r.denom() >> shift_d as usize).to_f64().unwrap_or(1.0);
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    sign * (p / q) * 2f64.powi((shift_n - shift_d) as i32)
}

/// Returns the integer value if `r` has unit denominator.
pub fn as_integer(r: &BigRational) -> Option<BigInt> {
    r.denom().is_one().then(|| r.numer().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn falling_and_rising() {
        assert_eq!(falling(5, 2), BigUint::from(20u32));
        assert_eq!(falling(2, 3), BigUint::zero());
        assert_eq!(falling(0, 0), BigUint::one());
        assert_eq!(rising_from_next(3, 2), BigUint::from(20u32));
        assert_eq!(factorial(7), BigUint::from(5040u32));
    }

    #[test]
    fn rational_text_form() {
        let r = rat(35, 144);
        assert_eq!(format_rational(&r), "35/144");
        assert_eq!(parse_rational("35/144"), Some(r));
        assert_eq!(format_rational(&rat(-4, 2)), "-2");
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn huge_rationals_convert() {
        let big = factorial(200);
        let r = BigRational::new(BigInt::from(big.clone()), BigInt::from(big * 4u32));
        assert!((to_f64(&r) - 0.25).abs() < 1e-15);
    }
}
