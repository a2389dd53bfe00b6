//! L-infinity[1]-algebras with finitely many multibrackets: higher
//! Jacobi identities, Maurer-Cartan elements, twisting, subalgebras,
//! quotient complexes and cohomology.

use std::collections::HashMap;

use crate::graded::{
    koszul_sign, sym_words, GradedError, GradedVector, GradedVectorSpace, SymWord,
};
use crate::linalg::{reduced_basis, Mat};
use crate::rat::{factorial, one, rat, zero, Rat};
use num_traits::Zero;
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum LInftyError {
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error("bracket value must raise degree by 1: word degree {0}, value degree {1:?}")]
    DegreeRaise(i32, Option<i32>),
    #[error("argument {0} of bracket evaluation is not homogeneous")]
    InhomogeneousArg(usize),
    #[error("element expected in degree {expected}, found degree {found:?}")]
    WrongDegree { expected: i32, found: Option<i32> },
    #[error("subspace is not an L-infinity[1]-subalgebra: {0}")]
    NotSubalgebra(String),
    #[error("element does not lie in the subspace")]
    NotInSubspace,
    #[error("element is not Maurer-Cartan (nonzero residual)")]
    NotMaurerCartan,
    #[error("differential does not square to zero between degrees {0} and {1}")]
    NotAComplex(i32, i32),
}

/// An L-infinity[1]-algebra with brackets stored sparsely on canonical
/// symmetric words; evaluation reorders and signs on the fly.
#[derive(Clone, Debug)]
pub struct LInftyAlgebra {
    pub space: GradedVectorSpace,
    pub k_max: usize,
    brackets: Vec<HashMap<Vec<u32>, GradedVector>>,
}

impl LInftyAlgebra {
    pub fn new(space: GradedVectorSpace, k_max: usize) -> Self {
        LInftyAlgebra {
            space,
            k_max,
            brackets: vec![HashMap::new(); k_max],
        }
    }

    /// Adds `value` to the bracket entry on the (not necessarily
    /// canonical) word of basis `labels`.
    pub fn add_bracket_term(
        &mut self,
        labels: &[u32],
        value: &GradedVector,
    ) -> Result<(), LInftyError> {
        let k = labels.len();
        assert!(k >= 1 && k <= self.k_max, "arity out of range");
        let Some((word, sign)) = SymWord::new(labels, &self.space) else {
            return Ok(()); // zero word, nothing to store
        };
        let word_degree = word.total_degree(&self.space);
        if !value.is_zero() {
            let vd = value.homogeneous_degree(&self.space);
            if vd != Some(word_degree + 1) {
                return Err(LInftyError::DegreeRaise(word_degree, vd));
            }
        }
        let entry = self.brackets[k - 1].entry(word.0).or_default();
        entry.add_scaled(value, &rat(sign as i64));
        if entry.is_zero() {
            // keep tables free of stored zeros
            let (w, _) = SymWord::new(labels, &self.space).unwrap();
            self.brackets[k - 1].remove(&w.0);
        }
        Ok(())
    }

    pub fn bracket_table(&self, k: usize) -> Option<&HashMap<Vec<u32>, GradedVector>> {
        self.brackets.get(k - 1)
    }

    fn table_nonempty(&self, k: usize) -> bool {
        k >= 1 && k <= self.k_max && !self.brackets[k - 1].is_empty()
    }

    /// Looks up the bracket on a word of labels, canonicalizing first.
    /// Returns the stored value together with the Koszul reordering sign.
    fn eval_word(&self, labels: &[u32]) -> Option<(&GradedVector, i32)> {
        let k = labels.len();
        if k == 0 || k > self.k_max {
            return None;
        }
        let (word, sign) = SymWord::new(labels, &self.space)?;
        self.brackets[k - 1].get(&word.0).map(|v| (v, sign))
    }

    /// Multilinear extension of the stored table with Koszul signs.
    /// Arguments beyond `k_max` evaluate to zero by assumption.
    pub fn eval_bracket(&self, k: usize, args: &[&GradedVector]) -> Result<GradedVector, LInftyError> {
        assert_eq!(args.len(), k);
        if k > self.k_max || args.iter().any(|a| a.is_zero()) {
            return Ok(GradedVector::zero());
        }
        for (i, a) in args.iter().enumerate() {
            if a.homogeneous_degree(&self.space).is_none() {
                return Err(LInftyError::InhomogeneousArg(i));
            }
        }
        let mut out = GradedVector::zero();
        let mut labels = vec![0u32; k];
        self.expand(&mut out, args, &mut labels, &one(), 0);
        Ok(out)
    }

    fn expand(
        &self,
        out: &mut GradedVector,
        args: &[&GradedVector],
        labels: &mut Vec<u32>,
        coeff: &Rat,
        depth: usize,
    ) {
        if depth == args.len() {
            if let Some((value, sign)) = self.eval_word(labels) {
                out.add_scaled(value, &(coeff * rat(sign as i64)));
            }
            return;
        }
        for (&l, c) in &args[depth].coeffs {
            labels[depth] = l;
            let c2 = coeff * c;
            self.expand(out, args, labels, &c2, depth + 1);
        }
    }

    /// One term family of the higher Jacobi identity, evaluated on a
    /// canonical word of basis labels.
    fn jacobi_residual(&self, word: &[u32]) -> GradedVector {
        let n = word.len() - 1;
        let degrees: Vec<i32> = word.iter().map(|&l| self.space.degree(l)).collect();
        let mut residual = GradedVector::zero();
        for i in 0..=n {
            let inner_k = i + 1;
            let outer_k = n - i + 1;
            if !self.table_nonempty(inner_k) || !self.table_nonempty(outer_k) {
                continue;
            }
            for sigma in crate::graded::unshuffles(inner_k, n - i) {
                let eps = koszul_sign(&sigma, &degrees).expect("valid unshuffle");
                let inner_labels: Vec<u32> = sigma[..inner_k].iter().map(|&s| word[s]).collect();
                let Some((inner, sign_in)) = self.eval_word(&inner_labels) else {
                    continue;
                };
                let rest: Vec<u32> = sigma[inner_k..].iter().map(|&s| word[s]).collect();
                let mut outer_labels = vec![0u32; outer_k];
                outer_labels[1..].copy_from_slice(&rest);
                for (&m, c) in &inner.coeffs {
                    outer_labels[0] = m;
                    if let Some((value, sign_out)) = self.eval_word(&outer_labels) {
                        let f = rat((eps * sign_in * sign_out) as i64) * c;
                        residual.add_scaled(value, &f);
                    }
                }
            }
        }
        residual
    }

    /// Evaluates the higher Jacobi identities on all basis words of
    /// length n+1 for n = 0..=n_max; failures carry the residual.
    pub fn check_jacobi(&self, n_max: usize) -> JacobiReport {
        let mut failures = Vec::new();
        for n in 0..=n_max {
            let active = (0..=n).any(|i| self.table_nonempty(i + 1) && self.table_nonempty(n - i + 1));
            if !active {
                continue;
            }
            for word in sym_words(&self.space, n + 1) {
                let residual = self.jacobi_residual(&word.0);
                if !residual.is_zero() {
                    failures.push((n, word, residual));
                }
            }
        }
        JacobiReport { failures }
    }

    pub fn default_jacobi_depth(&self) -> usize {
        2 * self.k_max
    }

    /// Left side of the Maurer-Cartan equation.
    pub fn mc_residual(&self, q: &GradedVector) -> Result<GradedVector, LInftyError> {
        if !q.is_zero() && q.homogeneous_degree(&self.space) != Some(0) {
            return Err(LInftyError::WrongDegree {
                expected: 0,
                found: q.homogeneous_degree(&self.space),
            });
        }
        let mut out = GradedVector::zero();
        for i in 1..=self.k_max {
            let args = vec![q; i];
            let v = self.eval_bracket(i, &args)?;
            out.add_scaled(&v, &(one() / factorial(i)));
        }
        Ok(out)
    }

    /// Twisted differential applied to a single element, without
    /// materializing the whole twisted algebra.
    pub fn twisted_mu1(&self, q: &GradedVector, v: &GradedVector) -> Result<GradedVector, LInftyError> {
        let mut out = GradedVector::zero();
        for i in 0..self.k_max {
            let mut args: Vec<&GradedVector> = vec![q; i];
            args.push(v);
            let val = self.eval_bracket(i + 1, &args)?;
            out.add_scaled(&val, &(one() / factorial(i)));
        }
        Ok(out)
    }

    /// The algebra with brackets twisted by a degree-0 element.
    pub fn twist(&self, q: &GradedVector) -> Result<LInftyAlgebra, LInftyError> {
        if !q.is_zero() && q.homogeneous_degree(&self.space) != Some(0) {
            return Err(LInftyError::WrongDegree {
                expected: 0,
                found: q.homogeneous_degree(&self.space),
            });
        }
        let mut out = LInftyAlgebra::new(self.space.clone(), self.k_max);
        for k in 1..=self.k_max {
            for word in sym_words(&self.space, k) {
                let basis: Vec<GradedVector> =
                    word.0.iter().map(|&l| self.space.basis_vector(l)).collect();
                let mut value = GradedVector::zero();
                for i in 0..=(self.k_max - k) {
                    if !self.table_nonempty(k + i) {
                        continue;
                    }
                    let mut args: Vec<&GradedVector> = vec![q; i];
                    args.extend(basis.iter());
                    let v = self.eval_bracket(k + i, &args)?;
                    value.add_scaled(&v, &(one() / factorial(i)));
                }
                if !value.is_zero() {
                    out.add_bracket_term(&word.0, &value)?;
                }
            }
        }
        Ok(out)
    }

    /// True iff every bracket of reduced-basis words of W lands in W;
    /// on failure returns the first counterexample.
    pub fn is_subalgebra(&self, w: &GradedSubspace) -> (bool, Option<SubalgebraCounterexample>) {
        let basis = w.all_basis_vectors();
        for k in 1..=self.k_max {
            if !self.table_nonempty(k) {
                continue;
            }
            for combo in multisets(basis.len(), k) {
                let args: Vec<&GradedVector> = combo.iter().map(|&i| &basis[i]).collect();
                let value = self
                    .eval_bracket(k, &args)
                    .expect("basis vectors are homogeneous");
                if !w.contains(&value, &self.space) {
                    return (
                        false,
                        Some(SubalgebraCounterexample {
                            arity: k,
                            arguments: combo.iter().map(|&i| basis[i].clone()).collect(),
                            value,
                        }),
                    );
                }
            }
        }
        (true, None)
    }

    /// Chain complex on V/W with differential induced by the twisted
    /// differential of a Maurer-Cartan element Q in W.
    pub fn quotient_complex(
        &self,
        w: &GradedSubspace,
        q: &GradedVector,
    ) -> Result<ChainComplex, LInftyError> {
        let (ok, ce) = self.is_subalgebra(w);
        if !ok {
            return Err(LInftyError::NotSubalgebra(format!(
                "arity-{} bracket of subspace basis vectors leaves the subspace",
                ce.unwrap().arity
            )));
        }
        if !w.contains(q, &self.space) {
            return Err(LInftyError::NotInSubspace);
        }
        if !self.mc_residual(q)?.is_zero() {
            return Err(LInftyError::NotMaurerCartan);
        }
        // twisted differential must preserve W
        for v in w.all_basis_vectors() {
            let image = self.twisted_mu1(q, &v)?;
            if !w.contains(&image, &self.space) {
                return Err(LInftyError::NotSubalgebra(
                    "twisted differential does not preserve the subspace".into(),
                ));
            }
        }
        let degrees = self.space.degrees_present();
        let mut dims = BTreeMap::new();
        let mut maps = BTreeMap::new();
        for &d in &degrees {
            dims.insert(d, w.quotient_dim(&self.space, d));
        }
        for &d in &degrees {
            let dom = w.quotient_basis_labels(&self.space, d);
            let codim_next = *dims.get(&(d + 1)).unwrap_or(&0);
            let mut m = Mat::zeros(codim_next, dom.len());
            for (col, &l) in dom.iter().enumerate() {
                let image = self.twisted_mu1(q, &self.space.basis_vector(l))?;
                let coords = w.project_quotient(&image, &self.space, d + 1);
                for (row, c) in coords.into_iter().enumerate() {
                    *m.at_mut(row, col) = c;
                }
            }
            maps.insert(d, m);
        }
        ChainComplex::new(dims, maps)
    }
}

pub struct SubalgebraCounterexample {
    pub arity: usize,
    pub arguments: Vec<GradedVector>,
    pub value: GradedVector,
}

pub struct JacobiReport {
    pub failures: Vec<(usize, SymWord, GradedVector)>,
}

impl JacobiReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// All multisets of size k from {0..n-1}, as sorted index vectors.
fn multisets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

/// Graded subspace with cached reduced bases and the coordinate
/// splittings used for quotients.
#[derive(Clone, Debug)]
pub struct GradedSubspace {
    by_degree: BTreeMap<i32, SubSlice>,
}

#[derive(Clone, Debug)]
struct SubSlice {
    /// Ambient labels of this degree, ascending.
    labels: Vec<u32>,
    /// Reduced row-echelon basis over those coordinates.
    basis: Vec<Vec<Rat>>,
    /// Pivot positions into `labels`.
    pivots: Vec<usize>,
}

impl GradedSubspace {
    /// Builds from homogeneous spanning vectors; vectors of each degree
    /// are row-reduced in the fixed label order.
    pub fn new(space: &GradedVectorSpace, spanning: &[GradedVector]) -> Result<Self, LInftyError> {
        let mut grouped: BTreeMap<i32, Vec<Vec<Rat>>> = BTreeMap::new();
        let label_sets: BTreeMap<i32, Vec<u32>> = space
            .degrees_present()
            .into_iter()
            .map(|d| (d, space.labels_of_degree(d)))
            .collect();
        for v in spanning {
            if v.is_zero() {
                continue;
            }
            let Some(d) = v.homogeneous_degree(space) else {
                return Err(LInftyError::InhomogeneousArg(0));
            };
            let labels = &label_sets[&d];
            let row: Vec<Rat> = labels
                .iter()
                .map(|l| v.coeffs.get(l).cloned().unwrap_or_else(zero))
                .collect();
            grouped.entry(d).or_default().push(row);
        }
        let mut by_degree = BTreeMap::new();
        for (&d, labels) in &label_sets {
            let rows = grouped.remove(&d).unwrap_or_default();
            let (basis, pivots) = reduced_basis(&rows);
            by_degree.insert(
                d,
                SubSlice {
                    labels: labels.clone(),
                    basis,
                    pivots,
                },
            );
        }
        Ok(GradedSubspace { by_degree })
    }

    pub fn zero(space: &GradedVectorSpace) -> Self {
        Self::new(space, &[]).unwrap()
    }

    pub fn full(space: &GradedVectorSpace) -> Self {
        let spanning: Vec<GradedVector> = (0..space.dim() as u32)
            .map(|l| space.basis_vector(l))
            .collect();
        Self::new(space, &spanning).unwrap()
    }

    pub fn dim_in_degree(&self, d: i32) -> usize {
        self.by_degree.get(&d).map_or(0, |s| s.basis.len())
    }

    pub fn quotient_dim(&self, space: &GradedVectorSpace, d: i32) -> usize {
        space.dim_in_degree(d) - self.dim_in_degree(d)
    }

    pub fn all_basis_vectors(&self) -> Vec<GradedVector> {
        let mut out = Vec::new();
        for slice in self.by_degree.values() {
            for row in &slice.basis {
                out.push(GradedVector::from_coeffs(
                    row.iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(j, c)| (slice.labels[j], c.clone())),
                ));
            }
        }
        out
    }

    /// Reduces `v` by the basis rows, zeroing every pivot coordinate.
    fn reduce(&self, v: &GradedVector, space: &GradedVectorSpace, d: i32) -> Option<Vec<Rat>> {
        let slice = self.by_degree.get(&d)?;
        for &l in v.coeffs.keys() {
            if space.degree(l) != d {
                return None;
            }
        }
        let mut row: Vec<Rat> = slice
            .labels
            .iter()
            .map(|l| v.coeffs.get(l).cloned().unwrap_or_else(zero))
            .collect();
        for (b, &p) in slice.basis.iter().zip(&slice.pivots) {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, y) in row.iter_mut().zip(b) {
                    *x -= &f * y;
                }
            }
        }
        Some(row)
    }

    pub fn contains(&self, v: &GradedVector, space: &GradedVectorSpace) -> bool {
        if v.is_zero() {
            return true;
        }
        // split into homogeneous parts
        let mut parts: BTreeMap<i32, GradedVector> = BTreeMap::new();
        for (&l, c) in &v.coeffs {
            parts
                .entry(space.degree(l))
                .or_insert_with(GradedVector::zero)
                .add_term(l, c.clone());
        }
        parts.iter().all(|(&d, part)| {
            self.reduce(part, space, d)
                .is_some_and(|r| r.iter().all(|c| c.is_zero()))
        })
    }

    /// Ambient labels spanning the canonical complement in degree d
    /// (the non-pivot coordinates after row reduction).
    pub fn quotient_basis_labels(&self, space: &GradedVectorSpace, d: i32) -> Vec<u32> {
        match self.by_degree.get(&d) {
            None => space.labels_of_degree(d),
            Some(slice) => slice
                .labels
                .iter()
                .enumerate()
                .filter(|(j, _)| !slice.pivots.contains(j))
                .map(|(_, &l)| l)
                .collect(),
        }
    }

    /// Coordinates of the class of `v` over the quotient basis labels.
    pub fn project_quotient(
        &self,
        v: &GradedVector,
        space: &GradedVectorSpace,
        d: i32,
    ) -> Vec<Rat> {
        if space.dim_in_degree(d) == 0 {
            return Vec::new();
        }
        let slice = &self.by_degree[&d];
        let reduced = self
            .reduce(v, space, d)
            .expect("vector must be homogeneous of the given degree");
        slice
            .labels
            .iter()
            .enumerate()
            .filter(|(j, _)| !slice.pivots.contains(j))
            .map(|(j, _)| reduced[j].clone())
            .collect()
    }

    /// The splitting sigma_d: quotient coordinates -> ambient vector,
    /// supported on the complement labels.
    pub fn lift(&self, coords: &[Rat], space: &GradedVectorSpace, d: i32) -> GradedVector {
        let labels = self.quotient_basis_labels(space, d);
        assert_eq!(coords.len(), labels.len());
        GradedVector::from_coeffs(
            labels
                .iter()
                .zip(coords)
                .filter(|(_, c)| !c.is_zero())
                .map(|(&l, c)| (l, c.clone())),
        )
    }
}

/// Finite sequence of spaces with a degree +1 map; d o d = 0 is
/// verified at construction.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub dims: BTreeMap<i32, usize>,
    pub maps: BTreeMap<i32, Mat>,
}

impl ChainComplex {
    pub fn new(dims: BTreeMap<i32, usize>, maps: BTreeMap<i32, Mat>) -> Result<Self, LInftyError> {
        for (&d, m) in &maps {
            assert_eq!(m.cols, *dims.get(&d).unwrap_or(&0), "domain dim mismatch");
            assert_eq!(
                m.rows,
                *dims.get(&(d + 1)).unwrap_or(&0),
                "codomain dim mismatch"
            );
            if let Some(next) = maps.get(&(d + 1)) {
                if m.rows > 0 && next.rows > 0 {
                    let comp = next.mul_mat(m);
                    for i in 0..comp.rows {
                        for j in 0..comp.cols {
                            if !comp.at(i, j).is_zero() {
                                return Err(LInftyError::NotAComplex(d, d + 1));
                            }
                        }
                    }
                }
            }
        }
        Ok(ChainComplex { dims, maps })
    }

    pub fn dim(&self, d: i32) -> usize {
        *self.dims.get(&d).unwrap_or(&0)
    }

    fn map(&self, d: i32) -> Mat {
        match self.maps.get(&d) {
            Some(m) => m.clone(),
            None => Mat::zeros(self.dim(d + 1), self.dim(d)),
        }
    }

    /// Cohomology dimension and representatives in degree d, by exact
    /// Gaussian elimination; representatives are kernel vectors reduced
    /// modulo the image.
    pub fn cohomology(&self, d: i32) -> (usize, Vec<Vec<Rat>>) {
        let n = self.dim(d);
        if n == 0 {
            return (0, Vec::new());
        }
        let d_out = self.map(d);
        let kernel = if d_out.rows == 0 {
            // zero map out: whole space is the kernel
            (0..n)
                .map(|i| {
                    let mut v = vec![zero(); n];
                    v[i] = one();
                    v
                })
                .collect::<Vec<_>>()
        } else {
            d_out.kernel_basis()
        };
        let d_in = self.map(d - 1);
        let mut image_rows: Vec<Vec<Rat>> = Vec::new();
        if d_in.cols > 0 {
            for j in 0..d_in.cols {
                let col: Vec<Rat> = (0..n).map(|i| d_in.at(i, j).clone()).collect();
                image_rows.push(col);
            }
        }
        let (image_basis, _) = reduced_basis(&image_rows);
        let rank_image = image_basis.len();
        let dim_h = kernel.len() - rank_image;
        // representatives: kernel vectors extending the image to a basis
        let mut rows = image_basis;
        let mut reps = Vec::new();
        let mut current_rank = rank_image;
        for kv in kernel {
            let mut test = rows.clone();
            test.push(kv.clone());
            let r = Mat::from_rows(test).rank();
            if r > current_rank {
                current_rank = r;
                rows.push(kv.clone());
                reps.push(kv);
            }
        }
        assert_eq!(reps.len(), dim_h);
        (dim_h, reps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::GradedVectorSpace;

    /// so(3) with [e1,e2]=e3 cyclically, placed in degree -1.
    fn so3() -> LInftyAlgebra {
        let space = GradedVectorSpace::new(&[(
            -1,
            vec!["e1".into(), "e2".into(), "e3".into()],
        )])
        .unwrap();
        let mut alg = LInftyAlgebra::new(space, 2);
        let idx = |s: &str| alg.space.lookup(s).unwrap();
        let (e1, e2, e3) = (idx("e1"), idx("e2"), idx("e3"));
        for (a, b, c) in [(e1, e2, e3), (e2, e3, e1), (e3, e1, e2)] {
            let v = alg.space.basis_vector(c);
            alg.add_bracket_term(&[a, b], &v).unwrap();
        }
        alg
    }

    #[test]
    fn lie_algebra_in_degree_minus_one_passes_jacobi() {
        let alg = so3();
        assert!(alg.check_jacobi(alg.default_jacobi_depth()).passed());
    }

    #[test]
    fn all_brackets_zero_passes() {
        let space =
            GradedVectorSpace::new(&[(0, vec!["a".into()]), (1, vec!["b".into()])]).unwrap();
        let alg = LInftyAlgebra::new(space, 3);
        assert!(alg.check_jacobi(6).passed());
    }

    #[test]
    fn perturbed_structure_constant_fails_jacobi() {
        let mut alg = so3();
        let e1 = alg.space.lookup("e1").unwrap();
        let e3 = alg.space.lookup("e3").unwrap();
        // corrupt [e1,e3] by adding e1
        let v = alg.space.basis_vector(e1);
        alg.add_bracket_term(&[e1, e3], &v).unwrap();
        let report = alg.check_jacobi(alg.default_jacobi_depth());
        assert!(!report.passed());
    }

    #[test]
    fn bracket_symmetry_signs() {
        // swapping two degree -1 arguments flips the sign
        let alg = so3();
        let e1 = alg.space.basis_vector(alg.space.lookup("e1").unwrap());
        let e2 = alg.space.basis_vector(alg.space.lookup("e2").unwrap());
        let ab = alg.eval_bracket(2, &[&e1, &e2]).unwrap();
        let ba = alg.eval_bracket(2, &[&e2, &e1]).unwrap();
        assert_eq!(ab, ba.scale(&rat(-1)));
        // zero argument gives zero
        let z = GradedVector::zero();
        assert!(alg.eval_bracket(2, &[&e1, &z]).unwrap().is_zero());
    }

    /// DGLA shape: mu1 = d, mu2 = bracket on a two-step complex.
    fn small_dgla() -> LInftyAlgebra {
        // degree 0: q; degree 1: r;  mu1(q) = r, mu2(q,q) = -2r (so that
        // mc_residual(q) = mu1(q) + 1/2 mu2(q,q) = r - r = 0)
        let space =
            GradedVectorSpace::new(&[(0, vec!["q".into()]), (1, vec!["r".into()])]).unwrap();
        let mut alg = LInftyAlgebra::new(space, 2);
        let q = alg.space.lookup("q").unwrap();
        let r = alg.space.lookup("r").unwrap();
        let rv = alg.space.basis_vector(r);
        alg.add_bracket_term(&[q], &rv).unwrap();
        alg.add_bracket_term(&[q, q], &rv.scale(&rat(-2))).unwrap();
        alg
    }

    #[test]
    fn mc_residual_dgla_formula() {
        let alg = small_dgla();
        let q = alg.space.basis_vector(alg.space.lookup("q").unwrap());
        assert!(alg.mc_residual(&GradedVector::zero()).unwrap().is_zero());
        // residual = mu1(q) + 1/2 mu2(q,q) = r - r = 0
        assert!(alg.mc_residual(&q).unwrap().is_zero());
        // residual of q/2: mu1(q)/2 + 1/8 mu2(q,q) = r/2 - r/4 = r/4
        let half = q.scale(&crate::rat::ratq(1, 2));
        let res = alg.mc_residual(&half).unwrap();
        let r = alg.space.lookup("r").unwrap();
        assert_eq!(res.coeffs[&r], crate::rat::ratq(1, 4));
    }

    #[test]
    fn twist_by_zero_is_identity() {
        let alg = so3();
        let t = alg.twist(&GradedVector::zero()).unwrap();
        for k in 1..=alg.k_max {
            assert_eq!(alg.bracket_table(k).unwrap().len(), t.bracket_table(k).unwrap().len());
            for (w, v) in alg.bracket_table(k).unwrap() {
                assert_eq!(t.bracket_table(k).unwrap()[w], *v);
            }
        }
    }

    #[test]
    fn twist_dgla_mu1() {
        let alg = small_dgla();
        let q = alg.space.basis_vector(alg.space.lookup("q").unwrap());
        let t = alg.twist(&q).unwrap();
        // mu1^Q(q) = mu1(q) + mu2(Q,q) = r - 2r = -r
        let qidx = alg.space.lookup("q").unwrap();
        let r = alg.space.lookup("r").unwrap();
        let v = &t.bracket_table(1).unwrap()[&vec![qidx]];
        assert_eq!(v.coeffs[&r], rat(-1));
        // twisting by an MC element preserves the Jacobi identities
        assert!(t.check_jacobi(t.default_jacobi_depth()).passed());
    }

    #[test]
    fn subalgebra_checks() {
        let alg = so3();
        let full = GradedSubspace::full(&alg.space);
        assert!(alg.is_subalgebra(&full).0);
        let zero = GradedSubspace::zero(&alg.space);
        assert!(alg.is_subalgebra(&zero).0);
        // span{e1} is not a subalgebra of so(3)... it is: [e1,e1]=0.
        let e1 = alg.space.basis_vector(alg.space.lookup("e1").unwrap());
        let w1 = GradedSubspace::new(&alg.space, &[e1.clone()]).unwrap();
        assert!(alg.is_subalgebra(&w1).0);
        // span{e1,e2} is not: [e1,e2]=e3
        let e2 = alg.space.basis_vector(alg.space.lookup("e2").unwrap());
        let w2 = GradedSubspace::new(&alg.space, &[e1, e2]).unwrap();
        let (ok, ce) = alg.is_subalgebra(&w2);
        assert!(!ok);
        assert_eq!(ce.unwrap().arity, 2);
    }

    #[test]
    fn quotient_complex_extremes() {
        let alg = small_dgla();
        // W = 0: complex is (V, mu1^Q) with Q = 0
        let zero_w = GradedSubspace::zero(&alg.space);
        let cx = alg.quotient_complex(&zero_w, &GradedVector::zero()).unwrap();
        assert_eq!(cx.dim(0), 1);
        assert_eq!(cx.dim(1), 1);
        // d(q) = mu1(q) = r, so H^0 = 0, H^1 = 0
        assert_eq!(cx.cohomology(0).0, 0);
        assert_eq!(cx.cohomology(1).0, 0);
        // W = V: zero complex
        let full = GradedSubspace::full(&alg.space);
        let cx = alg.quotient_complex(&full, &GradedVector::zero()).unwrap();
        assert_eq!(cx.dim(0), 0);
        assert_eq!(cx.cohomology(0).0, 0);
    }

    #[test]
    fn cohomology_of_zero_differential() {
        // abelian CE-like complex: zero maps, H^k = everything
        let dims: BTreeMap<i32, usize> = [(0, 1), (1, 3), (2, 3)].into();
        let cx = ChainComplex::new(dims, BTreeMap::new()).unwrap();
        assert_eq!(cx.cohomology(1).0, 3);
        assert_eq!(cx.cohomology(2).0, 3);
    }

    #[test]
    fn jacobi_n0_equals_mu1_squared() {
        // mu1 with d^2 != 0 must be caught at n = 0
        let space =
            GradedVectorSpace::new(&[(0, vec!["a".into()]), (1, vec!["b".into()]), (2, vec!["c".into()])])
                .unwrap();
        let mut alg = LInftyAlgebra::new(space, 1);
        let a = alg.space.lookup("a").unwrap();
        let b = alg.space.lookup("b").unwrap();
        let bv = alg.space.basis_vector(b);
        let cv = alg.space.basis_vector(alg.space.lookup("c").unwrap());
        alg.add_bracket_term(&[a], &bv).unwrap();
        alg.add_bracket_term(&[b], &cv).unwrap();
        let report = alg.check_jacobi(0);
        assert!(!report.passed());
        assert!(report.failures.iter().all(|(n, _, _)| *n == 0));
    }
}
