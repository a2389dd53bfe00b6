//! Graded vector spaces, Koszul signs and unshuffles.

use crate::rat::Rat;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

/// Finite-dimensional Z-graded vector space with string basis labels.
///
/// Labels are stored sorted lexicographically; that order is the canonical
/// total order used for every canonical form in the crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedVectorSpace {
    labels: Vec<String>,
    degrees: Vec<i32>,
    index: BTreeMap<String, u32>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum GradedError {
    #[error("duplicate basis label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown basis label `{0}`")]
    UnknownLabel(String),
    #[error("length mismatch: permutation has {0} entries, degrees {1}")]
    LengthMismatch(usize, usize),
    #[error("input is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("vector is not homogeneous of degree {0}")]
    NotHomogeneous(i32),
}

impl GradedVectorSpace {
    pub fn new(by_degree: &[(i32, Vec<String>)]) -> Result<Self, GradedError> {
        let mut pairs: Vec<(String, i32)> = Vec::new();
        for (deg, labels) in by_degree {
            for l in labels {
                pairs.push((l.clone(), *deg));
            }
        }
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        for w in pairs.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(GradedError::DuplicateLabel(w[0].0.clone()));
            }
        }
        let labels: Vec<String> = pairs.iter().map(|p| p.0.clone()).collect();
        let degrees: Vec<i32> = pairs.iter().map(|p| p.1).collect();
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), i as u32))
            .collect();
        Ok(GradedVectorSpace {
            labels,
            degrees,
            index,
        })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: u32) -> &str {
        &self.labels[i as usize]
    }

    pub fn degree(&self, i: u32) -> i32 {
        self.degrees[i as usize]
    }

    pub fn lookup(&self, label: &str) -> Result<u32, GradedError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| GradedError::UnknownLabel(label.to_string()))
    }

    pub fn labels_of_degree(&self, d: i32) -> Vec<u32> {
        (0..self.dim() as u32)
            .filter(|&i| self.degree(i) == d)
            .collect()
    }

    pub fn degrees_present(&self) -> Vec<i32> {
        let mut ds: Vec<i32> = self.degrees.clone();
        ds.sort_unstable();
        ds.dedup();
        ds
    }

    pub fn dim_in_degree(&self, d: i32) -> usize {
        self.degrees.iter().filter(|&&x| x == d).count()
    }

    pub fn basis_vector(&self, i: u32) -> GradedVector {
        let mut v = GradedVector::zero();
        v.coeffs.insert(i, crate::rat::one());
        v
    }
}

/// Sparse vector over a `GradedVectorSpace` basis.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct GradedVector {
    pub coeffs: BTreeMap<u32, Rat>,
}

impl GradedVector {
    pub fn zero() -> Self {
        GradedVector {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_coeffs(cs: impl IntoIterator<Item = (u32, Rat)>) -> Self {
        let mut v = GradedVector::zero();
        for (i, c) in cs {
            v.add_term(i, c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, i: u32, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(i).or_insert_with(crate::rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&i);
        }
    }

    pub fn add_scaled(&mut self, other: &GradedVector, scale: &Rat) {
        if scale.is_zero() {
            return;
        }
        for (&i, c) in &other.coeffs {
            self.add_term(i, c * scale);
        }
    }

    pub fn scale(&self, s: &Rat) -> GradedVector {
        let mut out = GradedVector::zero();
        out.add_scaled(self, s);
        out
    }

    /// Homogeneous degree, when all supported labels share one.
    pub fn homogeneous_degree(&self, space: &GradedVectorSpace) -> Option<i32> {
        let mut deg = None;
        for &i in self.coeffs.keys() {
            let d = space.degree(i);
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return None,
                _ => {}
            }
        }
        deg
    }

    pub fn check_degree(&self, space: &GradedVectorSpace, d: i32) -> Result<(), GradedError> {
        if self.coeffs.keys().all(|&i| space.degree(i) == d) {
            Ok(())
        } else {
            Err(GradedError::NotHomogeneous(d))
        }
    }

    pub fn to_dense(&self, dim: usize) -> Vec<Rat> {
        let mut out = vec![crate::rat::zero(); dim];
        for (&i, c) in &self.coeffs {
            out[i as usize] = c.clone();
        }
        out
    }

    pub fn from_dense(v: &[Rat]) -> GradedVector {
        GradedVector::from_coeffs(
            v.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i as u32, c.clone())),
        )
    }

    pub fn display<'a>(&'a self, space: &'a GradedVectorSpace) -> DisplayVec<'a> {
        DisplayVec { v: self, space }
    }
}

pub struct DisplayVec<'a> {
    v: &'a GradedVector,
    space: &'a GradedVectorSpace,
}

impl fmt::Display for DisplayVec<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.v.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&i, c) in &self.v.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}*{}", crate::rat::fmt_rat(c), self.space.label(i))?;
        }
        Ok(())
    }
}

/// Koszul sign of a permutation acting on elements of the given degrees:
/// the sign relating `x_1...x_n` to `x_{s(1)}...x_{s(n)}` in S(V).
///
/// `perm[slot] = original index placed at that slot`, zero-based.
pub fn koszul_sign(perm: &[usize], degrees: &[i32]) -> Result<i32, GradedError> {
    let n = perm.len();
    if degrees.len() != n {
        return Err(GradedError::LengthMismatch(n, degrees.len()));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(GradedError::NotAPermutation(n));
        }
        seen[p] = true;
    }
    let mut sign = 1i32;
    for a in 0..n {
        for b in (a + 1)..n {
            if perm[a] > perm[b] && degrees[perm[a]] % 2 != 0 && degrees[perm[b]] % 2 != 0 {
                sign = -sign;
            }
        }
    }
    Ok(sign)
}

/// All (p,q)-unshuffles of {0..p+q-1}: permutations increasing on the
/// first p and the last q slots.
pub fn unshuffles(p: usize, q: usize) -> Vec<Vec<usize>> {
    let n = p + q;
    let mut out = Vec::new();
    let mut choose = (0..p).collect::<Vec<usize>>();
    loop {
        let mut perm = choose.clone();
        perm.extend((0..n).filter(|i| !choose.contains(i)));
        out.push(perm);
        // next p-combination of {0..n-1}
        if p == 0 {
            break;
        }
        let mut i = p;
        while i > 0 {
            i -= 1;
            if choose[i] < n - (p - i) {
                choose[i] += 1;
                for j in (i + 1)..p {
                    choose[j] = choose[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                return out;
            }
        }
    }
    out
}

/// Sorts labels ascending, accumulating the Koszul sign; `None` when the
/// word contains a repeated odd-degree label (the word is zero in S(V)).
pub fn sort_word_with_sign(word: &mut Vec<u32>, space: &GradedVectorSpace) -> Option<i32> {
    let mut sign = 1i32;
    for i in 1..word.len() {
        let mut j = i;
        while j > 0 && word[j - 1] > word[j] {
            if space.degree(word[j - 1]) % 2 != 0 && space.degree(word[j]) % 2 != 0 {
                sign = -sign;
            }
            word.swap(j - 1, j);
            j -= 1;
        }
    }
    for w in word.windows(2) {
        if w[0] == w[1] && space.degree(w[0]) % 2 != 0 {
            return None;
        }
    }
    Some(sign)
}

/// Canonically sorted symmetric word; zero words are represented by `None`
/// at construction sites via `sort_word_with_sign`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymWord(pub Vec<u32>);

impl SymWord {
    /// `None` when the word is zero in S(V) (repeated odd-degree label);
    /// otherwise the canonical word and the reordering sign.
    pub fn new(labels: &[u32], space: &GradedVectorSpace) -> Option<(SymWord, i32)> {
        let mut w = labels.to_vec();
        let sign = sort_word_with_sign(&mut w, space)?;
        Some((SymWord(w), sign))
    }

    pub fn total_degree(&self, space: &GradedVectorSpace) -> i32 {
        self.0.iter().map(|&i| space.degree(i)).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Enumerates all canonical nonzero symmetric words of length `k`.
pub fn sym_words(space: &GradedVectorSpace, k: usize) -> Vec<SymWord> {
    let mut out = Vec::new();
    let dim = space.dim() as u32;
    let mut stack: Vec<(Vec<u32>, u32)> = vec![(Vec::new(), 0)];
    while let Some((word, start)) = stack.pop() {
        if word.len() == k {
            out.push(SymWord(word));
            continue;
        }
        for i in (start..dim).rev() {
            // repeated odd labels give the zero word
            if word.last() == Some(&i) && space.degree(i) % 2 != 0 {
                continue;
            }
            let mut w = word.clone();
            w.push(i);
            stack.push((w, i));
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn space() -> GradedVectorSpace {
        GradedVectorSpace::new(&[
            (0, vec!["a".into(), "b".into()]),
            (1, vec!["x".into(), "y".into()]),
            (-1, vec!["u".into()]),
        ])
        .unwrap()
    }

    #[test]
    fn koszul_basic_cases() {
        // identity
        assert_eq!(koszul_sign(&[0, 1, 2], &[1, 1, 1]).unwrap(), 1);
        // transposition of two degree-1 elements
        assert_eq!(koszul_sign(&[1, 0], &[1, 1]).unwrap(), -1);
        // degree-0 with degree-1
        assert_eq!(koszul_sign(&[1, 0], &[0, 1]).unwrap(), 1);
        assert!(koszul_sign(&[0, 0], &[1, 1]).is_err());
        assert!(koszul_sign(&[0], &[1, 1]).is_err());
    }

    #[test]
    fn koszul_multiplicative() {
        // sign(s . t) = sign(s on t-permuted degrees) * sign(t)
        let degs = [1, 0, 1, 1, 0];
        let t = [2, 0, 4, 1, 3];
        let s = [1, 3, 0, 4, 2];
        let st: Vec<usize> = s.iter().map(|&i| t[i]).collect();
        let degs_t: Vec<i32> = t.iter().map(|&i| degs[i]).collect();
        let lhs = koszul_sign(&st, &degs).unwrap();
        let rhs = koszul_sign(&t, &degs).unwrap() * koszul_sign(&s, &degs_t).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn unshuffle_counts() {
        assert_eq!(unshuffles(1, 1), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(unshuffles(2, 1).len(), 3);
        assert_eq!(unshuffles(0, 4), vec![vec![0, 1, 2, 3]]);
        assert_eq!(unshuffles(3, 2).len(), 10);
        for u in unshuffles(3, 2) {
            assert!(u[0] < u[1] && u[1] < u[2]);
            assert!(u[3] < u[4]);
        }
    }

    #[test]
    fn sym_word_normalization() {
        let s = space();
        let x = s.lookup("x").unwrap();
        let a = s.lookup("a").unwrap();
        // repeated odd label is the zero word
        assert!(SymWord::new(&[x, x], &s).is_none());
        // repeated even label is fine
        assert!(SymWord::new(&[a, a], &s).is_some());
        // swapping two odd labels flips the sign
        let y = s.lookup("y").unwrap();
        let (w1, s1) = SymWord::new(&[x, y], &s).unwrap();
        let (w2, s2) = SymWord::new(&[y, x], &s).unwrap();
        assert_eq!(w1, w2);
        assert_eq!(s1, -s2);
    }

    #[test]
    fn sym_word_enumeration() {
        let s = space();
        // length-2 words over {a,b} (deg 0), {x,y} (deg 1), {u} (deg -1):
        // pairs with repeated odd labels excluded
        let words = sym_words(&s, 2);
        let expected = 5 * 4 / 2 + 5 - 3; // C(5,2) + diagonal - 3 odd diagonals
        assert_eq!(words.len(), expected);
        assert!(words.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn graded_vector_arithmetic() {
        let s = space();
        let a = s.lookup("a").unwrap();
        let mut v = GradedVector::zero();
        v.add_term(a, rat(2));
        v.add_term(a, rat(-2));
        assert!(v.is_zero());
        v.add_term(a, rat(3));
        assert_eq!(v.homogeneous_degree(&s), Some(0));
        assert!(v.check_degree(&s, 0).is_ok());
        assert!(v.check_degree(&s, 1).is_err());
    }
}
