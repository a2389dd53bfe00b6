//! Sparse multivariate polynomials over the rationals with a graded-lex
//! term order. Variables are global x1, x2, ...; a polynomial does not
//! carry an ambient variable count, exponent vectors are trimmed of
//! trailing zeros so the same value compares equal in any ambient.
//!
//! Products are capped at a fixed total degree and panic when exceeded:
//! exactness is non-negotiable, so we fail loudly instead of truncating.

use crate::rat::{to_f64, zero, Rat};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Total-degree cap for products; the shipped examples need degree <= 3.
pub const DEGREE_CAP: usize = 6;

/// Exponent vector with graded-lex order (total degree first, then lex).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    fn canonical(mut exps: Vec<u32>) -> Self {
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Mono(exps)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    pub terms: BTreeMap<Mono, Rat>,
}

impl Polynomial {
    pub fn constant(c: Rat) -> Self {
        let mut p = Polynomial::zero();
        if !c.is_zero() {
            p.terms.insert(Mono(vec![]), c);
        }
        p
    }

    /// x_{i+1} for 0-based index i.
    pub fn var(i: usize) -> Self {
        let mut exps = vec![0; i + 1];
        exps[i] = 1;
        let mut p = Polynomial::zero();
        p.terms.insert(Mono(exps), crate::rat::one());
        p
    }

    pub fn add_monomial(&mut self, exps: Vec<u32>, c: Rat) {
        if c.is_zero() {
            return;
        }
        let m = Mono::canonical(exps);
        match self.terms.remove(&m) {
            None => {
                self.terms.insert(m, c);
            }
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
        }
    }

    pub fn total_degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn scale(&self, s: &Rat) -> Self {
        if s.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * s))
                .collect(),
        }
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            let e = m.0.get(var).copied().unwrap_or(0);
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] = e - 1;
            out.add_monomial(exps, c * crate::rat::rat(e as i64));
        }
        out
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        let mut out = zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= &point[i];
                }
            }
            out += t;
        }
        out
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = to_f64(c);
                for (i, &e) in m.0.iter().enumerate() {
                    t *= point[i].powi(e as i32);
                }
                t
            })
            .sum()
    }

    /// Constant term.
    pub fn constant_part(&self) -> Rat {
        self.terms.get(&Mono(vec![])).cloned().unwrap_or_else(zero)
    }
}

impl Zero for Polynomial {
    fn zero() -> Self {
        Polynomial {
            terms: BTreeMap::new(),
        }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl num_traits::One for Polynomial {
    fn one() -> Self {
        Polynomial::constant(crate::rat::one())
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        let mut out = self;
        for (m, c) in rhs.terms {
            out.add_monomial(m.0, c);
        }
        out
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        self + (-rhs)
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let deg = ma.degree() + mb.degree();
                assert!(
                    deg <= DEGREE_CAP,
                    "polynomial degree {deg} exceeds the cap {DEGREE_CAP}; refusing to truncate"
                );
                let len = ma.0.len().max(mb.0.len());
                let mut exps = vec![0u32; len];
                for (i, e) in exps.iter_mut().enumerate() {
                    *e = ma.0.get(i).copied().unwrap_or(0) + mb.0.get(i).copied().unwrap_or(0);
                }
                out.add_monomial(exps, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // display highest-order terms first; unit coefficients on
        // non-constant monomials are suppressed
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let c_str = crate::rat::fmt_rat(c);
            let (sign, mag) = if let Some(rest) = c_str.strip_prefix('-') {
                ("-", rest.to_string())
            } else {
                ("+", c_str)
            };
            if idx == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mut first = m.0.iter().all(|&e| e == 0);
            if first || mag != "1" {
                write!(f, "{mag}")?;
                first = false;
            } else {
                first = true;
            }
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                match e {
                    1 => write!(f, "x{}", i + 1)?,
                    _ => write!(f, "x{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{one, rat, ratq};

    #[test]
    fn arithmetic_and_canonical_form() {
        let x = Polynomial::var(0);
        let y = Polynomial::var(1);
        let p = x.clone() * y.clone() + y.clone() * x.clone(); // 2xy
        assert_eq!(p, (x.clone() * y.clone()).scale(&rat(2)));
        assert!((p.clone() - p).is_zero());
        // trailing zeros trimmed: x1 built in a 3-variable context equals var(0)
        let mut q = Polynomial::zero();
        q.add_monomial(vec![1, 0, 0], one());
        assert_eq!(q, Polynomial::var(0));
    }

    #[test]
    fn graded_lex_order() {
        // x^2 > xy > y^2 > x > y > 1 reading the map in reverse
        let x = Mono::canonical(vec![1]);
        let y = Mono::canonical(vec![0, 1]);
        let x2 = Mono::canonical(vec![2]);
        let xy = Mono::canonical(vec![1, 1]);
        assert!(x2 > xy);
        assert!(xy > x);
        assert!(x > y);
        assert!(y > Mono::canonical(vec![]));
    }

    #[test]
    fn derivative_and_eval() {
        // p = x^2 y / 3 + 2 y
        let x = Polynomial::var(0);
        let y = Polynomial::var(1);
        let p = (x.clone() * x.clone() * y.clone()).scale(&ratq(1, 3)) + y.clone().scale(&rat(2));
        let dx = p.derivative(0);
        assert_eq!(dx, (x.clone() * y.clone()).scale(&ratq(2, 3)));
        let dy = p.derivative(1);
        assert_eq!(
            dy,
            (x.clone() * x.clone()).scale(&ratq(1, 3)) + Polynomial::constant(rat(2))
        );
        assert_eq!(p.eval(&[rat(3), rat(-1)]), rat(-5));
        assert_eq!(p.derivative(2), Polynomial::zero());
    }

    #[test]
    #[should_panic(expected = "exceeds the cap")]
    fn degree_cap_is_loud() {
        let x = Polynomial::var(0);
        let mut p = x.clone();
        for _ in 0..DEGREE_CAP {
            p = p * x.clone();
        }
    }

    #[test]
    fn display_is_readable() {
        let p = Polynomial::var(0) * Polynomial::var(0)
            + Polynomial::var(3).scale(&ratq(-1, 2))
            + Polynomial::constant(rat(1));
        assert_eq!(p.to_string(), "x1^2 - 1/2*x4 + 1");
    }
}
