//! Exterior algebra on a finite set of letters, generic in the
//! coefficient ring (exact rationals here, polynomials in `algebroid`).
//!
//! An element is a sparse sum of strictly increasing wedge words. The
//! same type serves both a space and its dual: contraction takes a
//! coefficient vector interpreted against the opposite side.

use num_traits::Zero;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg};

use crate::rat::Rat;

pub trait Coeff:
    Clone + Zero + Add<Output = Self> + Mul<Output = Self> + Neg<Output = Self> + PartialEq
{
}
impl<T> Coeff for T where
    T: Clone + Zero + Add<Output = T> + Mul<Output = T> + Neg<Output = T> + PartialEq
{
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtElem<C> {
    /// Ambient number of letters; wedge rejects mixed ambients.
    pub n: usize,
    pub terms: BTreeMap<Vec<u8>, C>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ExtError {
    #[error("mixed ambient spaces: {0} vs {1} letters")]
    MixedAmbient(usize, usize),
    #[error("expected wedge-degree {expected}, got mixed or {got:?}")]
    WrongDegree { expected: usize, got: Option<usize> },
}

impl<C: Coeff> ExtElem<C> {
    pub fn zero(n: usize) -> Self {
        ExtElem {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(n: usize, c: C) -> Self {
        let mut e = Self::zero(n);
        e.add_term(vec![], c);
        e
    }

    pub fn letter(n: usize, i: u8) -> Self
    where
        C: OneLike,
    {
        assert!((i as usize) < n);
        let mut e = Self::zero(n);
        e.add_term(vec![i], C::one_like());
        e
    }

    pub fn add_term(&mut self, word: Vec<u8>, c: C) {
        if c.is_zero() {
            return;
        }
        debug_assert!(word.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(word.iter().all(|&i| (i as usize) < self.n));
        match self.terms.remove(&word) {
            None => {
                self.terms.insert(word, c);
            }
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(word, s);
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExtError> {
        if self.n != other.n {
            return Err(ExtError::MixedAmbient(self.n, other.n));
        }
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut out = Self::zero(self.n);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c.clone() * s.clone());
        }
        out
    }

    /// Wedge-degree when homogeneous; `None` for 0 or mixed elements.
    pub fn wedge_degree(&self) -> Option<usize> {
        let mut deg = None;
        for w in self.terms.keys() {
            match deg {
                None => deg = Some(w.len()),
                Some(d) if d != w.len() => return None,
                _ => {}
            }
        }
        deg
    }

    pub fn homogeneous_part(&self, k: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (w, c) in &self.terms {
            if w.len() == k {
                out.add_term(w.clone(), c.clone());
            }
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Result<Self, ExtError> {
        if self.n != other.n {
            return Err(ExtError::MixedAmbient(self.n, other.n));
        }
        let mut out = Self::zero(self.n);
        for (u, cu) in &self.terms {
            for (v, cv) in &other.terms {
                if let Some((word, sign)) = merge_words(u, v) {
                    let c = cu.clone() * cv.clone();
                    out.add_term(word, if sign < 0 { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Interior product by the i-th dual basis letter.
    pub fn contract_letter(&self, i: u8) -> Self {
        let mut out = Self::zero(self.n);
        for (w, c) in &self.terms {
            if let Some(pos) = w.iter().position(|&x| x == i) {
                let mut word = w.clone();
                word.remove(pos);
                let c = c.clone();
                out.add_term(word, if pos % 2 == 1 { -c } else { c });
            }
        }
        out
    }

    /// Interior product by a dual vector with the given coefficients.
    pub fn contract(&self, covector: &[C]) -> Self {
        assert_eq!(covector.len(), self.n);
        let mut out = Self::zero(self.n);
        for (i, ci) in covector.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            let piece = self.contract_letter(i as u8).scale(ci);
            for (w, c) in piece.terms {
                out.add_term(w, c);
            }
        }
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> ExtElem<D> {
        let mut out = ExtElem::zero(self.n);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }
}

/// Multiplicative unit of the coefficient ring, recovered without a
/// `One` bound (polynomials provide `One`, plain signs do not need it).
pub trait OneLike {
    fn one_like() -> Self;
}

impl<C: num_traits::One> OneLike for C {
    fn one_like() -> Self {
        C::one()
    }
}

/// Merges two strictly increasing words, returning the sorted word and
/// the wedge sign; `None` when they share a letter.
fn merge_words(u: &[u8], v: &[u8]) -> Option<(Vec<u8>, i32)> {
    let mut out = Vec::with_capacity(u.len() + v.len());
    let (mut i, mut j) = (0, 0);
    let mut sign = 1;
    while i < u.len() && j < v.len() {
        if u[i] == v[j] {
            return None;
        }
        if u[i] < v[j] {
            out.push(u[i]);
            i += 1;
        } else {
            // v[j] jumps over the remaining letters of u
            if (u.len() - i) % 2 == 1 {
                sign = -sign;
            }
            out.push(v[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&u[i..]);
    out.extend_from_slice(&v[j..]);
    Some((out, sign))
}

/// `(a# ^ b# ^ g#) Psi`: the S3-antisymmetrized wedge of contractions,
/// extended linearly over the decomposable words of a trivector.
pub fn triple_sharp(
    alpha: &ExtElem<Rat>,
    beta: &ExtElem<Rat>,
    gamma: &ExtElem<Rat>,
    psi: &ExtElem<Rat>,
) -> Result<ExtElem<Rat>, ExtError> {
    let n = alpha.n;
    if beta.n != n || gamma.n != n {
        return Err(ExtError::MixedAmbient(n, beta.n.max(gamma.n)));
    }
    if !psi.is_zero() && psi.wedge_degree() != Some(3) {
        return Err(ExtError::WrongDegree {
            expected: 3,
            got: psi.wedge_degree(),
        });
    }
    const PERMS: [([usize; 3], i32); 6] = [
        ([0, 1, 2], 1),
        ([0, 2, 1], -1),
        ([1, 0, 2], -1),
        ([1, 2, 0], 1),
        ([2, 0, 1], 1),
        ([2, 1, 0], -1),
    ];
    let mut out = ExtElem::zero(n);
    for (w, c) in &psi.terms {
        let xs = [w[0], w[1], w[2]];
        for (perm, sgn) in PERMS {
            let a = alpha.contract_letter(xs[perm[0]]);
            let b = beta.contract_letter(xs[perm[1]]);
            let g = gamma.contract_letter(xs[perm[2]]);
            if a.is_zero() || b.is_zero() || g.is_zero() {
                continue;
            }
            let mut term = a.wedge(&b)?.wedge(&g)?;
            let mut factor = c.clone();
            if sgn < 0 {
                factor = -factor;
            }
            term = term.scale(&factor);
            out = out.add(&term)?;
        }
    }
    Ok(out)
}
