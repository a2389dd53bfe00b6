//! Exact rational scalars.
//!
//! Every exact computation in this crate runs over `Rat`; floating point
//! only appears in the `gauge` module and in the numerical cross-checks.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub type Rat = num_rational::BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratq(num: i64, den: i64) -> Rat {
    assert!(den != 0, "zero denominator");
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn is_zero(r: &Rat) -> bool {
    r.is_zero()
}

pub fn one() -> Rat {
    Rat::one()
}

pub fn zero() -> Rat {
    Rat::zero()
}

/// Parses "p/q" or "p" with arbitrary-precision integers.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| format!("invalid integer `{num}`"))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| format!("invalid integer `{den}`"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(Rat::new(n, d))
}

/// Renders in the same "p/q" / "p" form accepted by `parse_rat`.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rat) -> f64 {
    let n = r.numer();
    let d = r.denom();
    // Exact for all values appearing at desk scale; falls back to a
    // string round-trip only for giant numerators.
    use num_traits::ToPrimitive;
    match (n.to_f64(), d.to_f64()) {
        (Some(a), Some(b)) => a / b,
        _ => 0.0,
    }
}

pub fn factorial(n: usize) -> Rat {
    let mut acc = one();
    for k in 2..=n {
        acc *= rat(k as i64);
    }
    acc
}

pub fn abs(r: &Rat) -> Rat {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3", "-7", "1/3", "-22/7", "0"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(fmt_rat(&r), s);
        }
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
        assert_eq!(parse_rat("4/2").unwrap(), rat(2));
    }

    #[test]
    fn factorial_values() {
        assert_eq!(factorial(0), rat(1));
        assert_eq!(factorial(4), rat(24));
    }
}
