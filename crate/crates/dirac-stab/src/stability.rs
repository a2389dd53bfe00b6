//! Cohomological stability of fixed points: the ideal h inside the
//! isotropy algebra, the quotient Chevalley-Eilenberg complex, and the
//! resulting obstruction space and verdict.

use std::collections::BTreeMap;

use crate::exterior::ExtElem;
use crate::linalg::{in_span, reduced_basis, Mat};
use crate::linfty::{ChainComplex, LInftyError};
use crate::rat::{one, zero, Rat};
use num_traits::Zero;

#[derive(Debug, thiserror::Error)]
pub enum StabilityError {
    #[error("structure constants violate antisymmetry at ({0},{1})")]
    Antisymmetry(usize, usize),
    #[error("structure constants violate the Jacobi identity on ({0},{1},{2})")]
    Jacobi(usize, usize, usize),
    #[error("pairing is not symmetric")]
    PairingNotSymmetric,
    #[error("pairing is degenerate")]
    PairingDegenerate,
    #[error("subspace A is not lagrangian")]
    NotLagrangian,
    #[error("orthogonal of ker(rho) is not contained in A")]
    HNotInA,
    #[error("h is not an ideal of the isotropy algebra")]
    NotIdeal,
    #[error("metric is not invariant")]
    MetricNotInvariant,
    #[error("differential does not preserve the annihilator subcomplex")]
    SubcomplexViolated,
    #[error(transparent)]
    Complex(#[from] LInftyError),
}

/// Finite-dimensional Lie algebra over the rationals; antisymmetry and
/// Jacobi hold by construction/verification.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    pub dim: usize,
    /// c[i][j] = coordinates of [e_i, e_j]; antisymmetric in (i, j).
    c: Vec<Vec<Vec<Rat>>>,
}

impl LieAlgebra {
    /// Structure constants are given for pairs i < j (0-based); z is the
    /// coordinate vector of [e_i, e_j].
    pub fn new(dim: usize, entries: &[(usize, usize, Vec<Rat>)]) -> Result<Self, StabilityError> {
        let mut c = vec![vec![vec![zero(); dim]; dim]; dim];
        for (i, j, z) in entries {
            assert!(i < j && *j < dim, "entries must have 0 <= i < j < dim");
            assert_eq!(z.len(), dim);
            for k in 0..dim {
                c[*i][*j][k] += &z[k];
                c[*j][*i][k] -= &z[k];
            }
        }
        let alg = LieAlgebra { dim, c };
        alg.verify_jacobi()?;
        Ok(alg)
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra {
            dim,
            c: vec![vec![vec![zero(); dim]; dim]; dim],
        }
    }

    fn verify_jacobi(&self) -> Result<(), StabilityError> {
        let n = self.dim;
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let ei = self.basis(i);
                    let ej = self.basis(j);
                    let ek = self.basis(k);
                    let mut s = self.bracket(&self.bracket(&ei, &ej), &ek);
                    for (a, b) in s
                        .iter_mut()
                        .zip(self.bracket(&self.bracket(&ej, &ek), &ei))
                    {
                        *a += b;
                    }
                    for (a, b) in s
                        .iter_mut()
                        .zip(self.bracket(&self.bracket(&ek, &ei), &ej))
                    {
                        *a += b;
                    }
                    if s.iter().any(|x| !x.is_zero()) {
                        return Err(StabilityError::Jacobi(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn basis(&self, i: usize) -> Vec<Rat> {
        let mut v = vec![zero(); self.dim];
        v[i] = one();
        v
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Rat {
        &self.c[i][j][k]
    }

    pub fn bracket(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
        let mut out = vec![zero(); self.dim];
        for i in 0..self.dim {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if y[j].is_zero() {
                    continue;
                }
                let f = &x[i] * &y[j];
                for k in 0..self.dim {
                    if !self.c[i][j][k].is_zero() {
                        out[k] += &f * &self.c[i][j][k];
                    }
                }
            }
        }
        out
    }

    /// Direct sum with blockwise bracket.
    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        let n = self.dim + other.dim;
        let mut c = vec![vec![vec![zero(); n]; n]; n];
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    c[i][j][k] = self.c[i][j][k].clone();
                }
            }
        }
        for i in 0..other.dim {
            for j in 0..other.dim {
                for k in 0..other.dim {
                    c[self.dim + i][self.dim + j][self.dim + k] = other.c[i][j][k].clone();
                }
            }
        }
        LieAlgebra { dim: n, c }
    }

    /// Transport along an invertible change of basis t (columns = new
    /// basis vectors in old coordinates).
    pub fn change_basis(&self, t: &Mat) -> LieAlgebra {
        assert_eq!(t.rows, self.dim);
        assert_eq!(t.cols, self.dim);
        let n = self.dim;
        let rows: Vec<Vec<Rat>> = (0..n).map(|i| t.row(i).to_vec()).collect();
        let tm = Mat::from_rows(rows);
        let mut c = vec![vec![vec![zero(); n]; n]; n];
        for i in 0..n {
            let ti: Vec<Rat> = (0..n).map(|r| tm.at(r, i).clone()).collect();
            for j in 0..n {
                let tj: Vec<Rat> = (0..n).map(|r| tm.at(r, j).clone()).collect();
                let br = self.bracket(&ti, &tj);
                // solve T x = br
                let x = tm.solve(&br).expect("basis change must be invertible");
                for k in 0..n {
                    c[i][j][k] = x[k].clone();
                }
            }
        }
        LieAlgebra { dim: n, c }
    }

    /// The quotient Lie algebra by an ideal (spanning vectors given in
    /// algebra coordinates); panics if the span is not an ideal.
    pub fn quotient_by_ideal(&self, ideal: &[Vec<Rat>]) -> LieAlgebra {
        let (h_basis, pivots) = reduced_basis(ideal);
        let n = self.dim;
        let complement: Vec<usize> = (0..n).filter(|i| !pivots.contains(i)).collect();
        let reduce = |v: &[Rat]| -> Vec<Rat> {
            let mut w = v.to_vec();
            for (b, &p) in h_basis.iter().zip(&pivots) {
                if !w[p].is_zero() {
                    let f = w[p].clone();
                    for (x, y) in w.iter_mut().zip(b) {
                        *x -= &f * y;
                    }
                }
            }
            w
        };
        let m = complement.len();
        let mut c = vec![vec![vec![zero(); m]; m]; m];
        for hv in &h_basis {
            for i in 0..n {
                assert!(
                    in_span(&h_basis, &self.bracket(&self.basis(i), hv)),
                    "span is not an ideal"
                );
            }
        }
        for (a, &i) in complement.iter().enumerate() {
            for (b, &j) in complement.iter().enumerate() {
                let red = reduce(&self.bracket(&self.basis(i), &self.basis(j)));
                for (kq, &k) in complement.iter().enumerate() {
                    c[a][b][kq] = red[k].clone();
                }
            }
        }
        LieAlgebra { dim: m, c }
    }
}

/// Strictly increasing k-subsets of {0..n-1} in lexicographic order.
pub fn ext_basis(n: usize, k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = Vec::new();
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i as u8);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, k, 0, &mut cur, &mut out);
    out
}

/// Extends letter images to a degree +1 derivation of the exterior
/// algebra and applies it.
pub fn derivation_apply<C: crate::exterior::Coeff + crate::exterior::OneLike>(
    elem: &ExtElem<C>,
    dletters: &[ExtElem<C>],
) -> ExtElem<C> {
    let n = elem.n;
    let mut out = ExtElem::zero(n);
    for (word, c) in &elem.terms {
        for (t, &l) in word.iter().enumerate() {
            let mut prefix = ExtElem::scalar(n, c.clone());
            for &p in &word[..t] {
                prefix = prefix.wedge(&ExtElem::letter(n, p)).unwrap();
            }
            let mut suffix = ExtElem::scalar(n, C::one_like());
            for &s in &word[t + 1..] {
                suffix = suffix.wedge(&ExtElem::letter(n, s)).unwrap();
            }
            let sign = if t % 2 == 0 { C::one_like() } else { -C::one_like() };
            let term = prefix
                .wedge(&dletters[l as usize])
                .unwrap()
                .wedge(&suffix)
                .unwrap()
                .scale(&sign);
            out = out.add(&term).unwrap();
        }
    }
    out
}

/// Chevalley-Eilenberg letter differentials: d e^m = -sum_{i<j} c^m_ij e^i e^j.
pub fn ce_dletters(g: &LieAlgebra) -> Vec<ExtElem<Rat>> {
    let n = g.dim;
    (0..n)
        .map(|m| {
            let mut d = ExtElem::zero(n);
            for i in 0..n {
                for j in (i + 1)..n {
                    let cij = g.structure_constant(i, j, m);
                    if !cij.is_zero() {
                        d.add_term(vec![i as u8, j as u8], -cij.clone());
                    }
                }
            }
            d
        })
        .collect()
}

fn ext_to_dense(e: &ExtElem<Rat>, basis: &[Vec<u8>]) -> Vec<Rat> {
    basis
        .iter()
        .map(|w| e.terms.get(w).cloned().unwrap_or_else(zero))
        .collect()
}

/// The full Chevalley-Eilenberg complex on the exterior algebra of the
/// dual, indexed by wedge degree.
pub fn ce_complex(g: &LieAlgebra) -> ChainComplex {
    let n = g.dim;
    let dl = ce_dletters(g);
    let mut dims = BTreeMap::new();
    let mut maps = BTreeMap::new();
    for k in 0..=n {
        dims.insert(k as i32, ext_basis(n, k).len());
    }
    for k in 0..n {
        let dom = ext_basis(n, k);
        let cod = ext_basis(n, k + 1);
        let mut m = Mat::zeros(cod.len(), dom.len());
        for (col, w) in dom.iter().enumerate() {
            let mut e = ExtElem::scalar(n, one());
            for &l in w {
                e = e.wedge(&ExtElem::letter(n, l)).unwrap();
            }
            let de = derivation_apply(&e, &dl);
            for (row, c) in ext_to_dense(&de, &cod).into_iter().enumerate() {
                *m.at_mut(row, col) = c;
            }
        }
        maps.insert(k as i32, m);
    }
    ChainComplex::new(dims, maps).expect("CE differential squares to zero")
}

/// Germ of a Dirac structure at a fixed point: the quadratic fiber, the
/// lagrangian isotropy algebra, and the anchor kernel.
#[derive(Clone, Debug)]
pub struct FixedPointGerm {
    pub dim_e: usize,
    /// Symmetric nondegenerate pairing on the fiber.
    pub pairing: Mat,
    /// Basis of A inside the fiber, one vector per row position.
    pub a_basis: Vec<Vec<Rat>>,
    /// Lie bracket on A in `a_basis` coordinates.
    pub algebra: LieAlgebra,
    /// Spanning vectors of ker(rho) inside the fiber.
    pub ker_rho: Vec<Vec<Rat>>,
}

impl FixedPointGerm {
    pub fn new(
        pairing: Mat,
        a_basis: Vec<Vec<Rat>>,
        algebra: LieAlgebra,
        ker_rho: Vec<Vec<Rat>>,
    ) -> Result<Self, StabilityError> {
        let dim_e = pairing.rows;
        assert_eq!(pairing.cols, dim_e);
        for i in 0..dim_e {
            for j in 0..dim_e {
                if pairing.at(i, j) != pairing.at(j, i) {
                    return Err(StabilityError::PairingNotSymmetric);
                }
            }
        }
        if pairing.rank() < dim_e {
            return Err(StabilityError::PairingDegenerate);
        }
        assert_eq!(algebra.dim, a_basis.len());
        // lagrangian: isotropic of half dimension, independent basis
        if 2 * a_basis.len() != dim_e
            || Mat::from_rows(a_basis.clone()).rank() < a_basis.len()
        {
            return Err(StabilityError::NotLagrangian);
        }
        for u in &a_basis {
            let pu = pairing.mul_vec(u);
            for v in &a_basis {
                let s: Rat = pu.iter().zip(v).map(|(a, b)| a * b).sum();
                if !s.is_zero() {
                    return Err(StabilityError::NotLagrangian);
                }
            }
        }
        Ok(FixedPointGerm {
            dim_e,
            pairing,
            a_basis,
            algebra,
            ker_rho,
        })
    }

    /// True iff A lies inside ker(rho) (the fixed-point condition).
    pub fn is_fixed_point(&self) -> bool {
        self.a_basis.iter().all(|v| in_span(&self.ker_rho, v))
    }

    /// Blockwise product of two germs.
    pub fn product(&self, other: &FixedPointGerm) -> FixedPointGerm {
        let n1 = self.dim_e;
        let n2 = other.dim_e;
        let mut pairing = Mat::zeros(n1 + n2, n1 + n2);
        for i in 0..n1 {
            for j in 0..n1 {
                *pairing.at_mut(i, j) = self.pairing.at(i, j).clone();
            }
        }
        for i in 0..n2 {
            for j in 0..n2 {
                *pairing.at_mut(n1 + i, n1 + j) = other.pairing.at(i, j).clone();
            }
        }
        let pad = |v: &[Rat], left: usize, right: usize| {
            let mut w = vec![zero(); left];
            w.extend_from_slice(v);
            w.extend(std::iter::repeat_with(zero).take(right));
            w
        };
        let mut a_basis: Vec<Vec<Rat>> =
            self.a_basis.iter().map(|v| pad(v, 0, n2)).collect();
        a_basis.extend(other.a_basis.iter().map(|v| pad(v, n1, 0)));
        let mut ker_rho: Vec<Vec<Rat>> =
            self.ker_rho.iter().map(|v| pad(v, 0, n2)).collect();
        ker_rho.extend(other.ker_rho.iter().map(|v| pad(v, n1, 0)));
        FixedPointGerm {
            dim_e: n1 + n2,
            pairing,
            a_basis,
            algebra: self.algebra.direct_sum(&other.algebra),
            ker_rho,
        }
    }
}

/// The pairing-orthogonal of ker(rho), expressed in A coordinates, with
/// the ideal property verified.
pub fn ideal_h(germ: &FixedPointGerm) -> Result<Vec<Vec<Rat>>, StabilityError> {
    // orthogonal in the fiber: kernel of the matrix of pairings with ker_rho
    let rows: Vec<Vec<Rat>> = germ
        .ker_rho
        .iter()
        .map(|k| germ.pairing.mul_vec(k))
        .collect();
    let h_in_e = if rows.is_empty() {
        // orthogonal of the zero subspace is the whole fiber
        (0..germ.dim_e)
            .map(|i| {
                let mut v = vec![zero(); germ.dim_e];
                v[i] = one();
                v
            })
            .collect::<Vec<_>>()
    } else {
        Mat::from_rows(rows).kernel_basis()
    };
    // h must lie in A
    for v in &h_in_e {
        if !in_span(&germ.a_basis, v) {
            return Err(StabilityError::HNotInA);
        }
    }
    // express in A coordinates: solve a_basis^T x = v
    let at = Mat::from_rows(germ.a_basis.clone()).transpose();
    let mut h_in_g: Vec<Vec<Rat>> = Vec::new();
    for v in &h_in_e {
        h_in_g.push(at.solve(v).expect("already verified containment"));
    }
    // ideal check: [g, h] subset h
    for i in 0..germ.algebra.dim {
        for hv in &h_in_g {
            let br = germ.algebra.bracket(&germ.algebra.basis(i), hv);
            if !in_span(&h_in_g, &br) {
                return Err(StabilityError::NotIdeal);
            }
        }
    }
    Ok(h_in_g)
}

/// Quotient of the CE complex by the subcomplex generated by the
/// annihilator of an ideal; indexed by wedge degree.
pub fn quotient_ce_complex(
    g: &LieAlgebra,
    h_in_g: &[Vec<Rat>],
) -> Result<ChainComplex, StabilityError> {
    let n = g.dim;
    let dl = ce_dletters(g);
    let h_ann = if h_in_g.is_empty() {
        (0..n)
            .map(|i| {
                let mut v = vec![zero(); n];
                v[i] = one();
                v
            })
            .collect::<Vec<_>>()
    } else {
        Mat::from_rows(h_in_g.to_vec()).kernel_basis()
    };
    // per wedge degree: reduced basis of wedges of annihilator covectors
    let mut sub_bases: Vec<(Vec<Vec<Rat>>, Vec<usize>)> = Vec::new();
    for k in 0..=n {
        let basis = ext_basis(n, k);
        let mut spanning: Vec<Vec<Rat>> = Vec::new();
        if k == 0 {
            spanning.push(vec![one()]); // scalars always belong to the subcomplex
        } else {
            for combo in ext_basis(h_ann.len(), k) {
                let mut e = ExtElem::scalar(n, one());
                for &ci in &combo {
                    let mut cov = ExtElem::zero(n);
                    for (l, c) in h_ann[ci as usize].iter().enumerate() {
                        if !c.is_zero() {
                            cov.add_term(vec![l as u8], c.clone());
                        }
                    }
                    e = e.wedge(&cov).unwrap();
                }
                spanning.push(ext_to_dense(&e, &basis));
            }
        }
        sub_bases.push(reduced_basis(&spanning));
    }
    let reduce = |v: &[Rat], k: usize| -> Vec<Rat> {
        let (basis, pivots) = &sub_bases[k];
        let mut w = v.to_vec();
        for (b, &p) in basis.iter().zip(pivots) {
            if !w[p].is_zero() {
                let f = w[p].clone();
                for (x, y) in w.iter_mut().zip(b) {
                    *x -= &f * y;
                }
            }
        }
        w
    };
    let mut dims = BTreeMap::new();
    let mut maps = BTreeMap::new();
    for k in 0..=n {
        dims.insert(k as i32, ext_basis(n, k).len() - sub_bases[k].0.len());
    }
    for k in 0..n {
        let dom = ext_basis(n, k);
        let cod = ext_basis(n, k + 1);
        let (_, dom_pivots) = &sub_bases[k];
        let (_, cod_pivots) = &sub_bases[k + 1];
        let dom_compl: Vec<usize> = (0..dom.len()).filter(|i| !dom_pivots.contains(i)).collect();
        let cod_compl: Vec<usize> = (0..cod.len()).filter(|i| !cod_pivots.contains(i)).collect();
        // the differential must preserve the subcomplex
        for (row, _) in sub_bases[k].0.iter().enumerate() {
            let mut e = ExtElem::zero(n);
            for (wi, w) in dom.iter().enumerate() {
                let c = &sub_bases[k].0[row][wi];
                if !c.is_zero() {
                    e.add_term(w.clone(), c.clone());
                }
            }
            let de = ext_to_dense(&derivation_apply(&e, &dl), &cod);
            if reduce(&de, k + 1).iter().any(|c| !c.is_zero()) {
                return Err(StabilityError::SubcomplexViolated);
            }
        }
        let mut m = Mat::zeros(cod_compl.len(), dom_compl.len());
        for (col, &wi) in dom_compl.iter().enumerate() {
            let mut e = ExtElem::zero(n);
            e.add_term(dom[wi].clone(), one());
            let de = reduce(&ext_to_dense(&derivation_apply(&e, &dl), &cod), k + 1);
            for (row, &ci) in cod_compl.iter().enumerate() {
                *m.at_mut(row, col) = de[ci].clone();
            }
        }
        maps.insert(k as i32, m);
    }
    Ok(ChainComplex::new(dims, maps)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Stable,
    Inconclusive,
    NotFixedPoint,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Stable => write!(f, "STABLE"),
            Verdict::Inconclusive => write!(f, "INCONCLUSIVE"),
            Verdict::NotFixedPoint => write!(f, "NOT_FIXED_POINT"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct StabilityReport {
    pub verdict: Verdict,
    pub dim_h2: usize,
    pub family_dim: usize,
    pub dim_h: usize,
    /// (wedge degree, quotient dimension) table.
    pub quotient_dims: Vec<(usize, usize)>,
}

/// Builds the quotient complex for a germ, computes the degree-2
/// obstruction and the degree-1 fixed-family dimension.
pub fn obstruction(germ: &FixedPointGerm) -> Result<StabilityReport, StabilityError> {
    if !germ.is_fixed_point() {
        return Ok(StabilityReport {
            verdict: Verdict::NotFixedPoint,
            dim_h2: 0,
            family_dim: 0,
            dim_h: 0,
            quotient_dims: Vec::new(),
        });
    }
    let h = ideal_h(germ)?;
    let cx = quotient_ce_complex(&germ.algebra, &h)?;
    let (dim_h2, _) = cx.cohomology(2);
    // family dimension: kernel of the induced map in wedge degree 1
    let family_dim = if cx.dim(1) == 0 {
        0
    } else {
        match cx.maps.get(&1) {
            Some(m) if m.rows > 0 => m.kernel_basis().len(),
            _ => cx.dim(1),
        }
    };
    let quotient_dims = (0..=germ.algebra.dim).map(|k| (k, cx.dim(k as i32))).collect();
    Ok(StabilityReport {
        verdict: if dim_h2 == 0 {
            Verdict::Stable
        } else {
            Verdict::Inconclusive
        },
        dim_h2,
        family_dim,
        dim_h: h.len(),
        quotient_dims,
    })
}

/// Checks the long-exact-sequence implication: H^2(g) = 0 and
/// H^3(g/h) = 0 force the obstruction to vanish.
pub fn les_consistency(germ: &FixedPointGerm) -> Result<bool, StabilityError> {
    let h = ideal_h(germ)?;
    let g = &germ.algebra;
    let h2_g = ce_complex(g).cohomology(2).0;
    let q = g.quotient_by_ideal(&h);
    let h3_q = ce_complex(&q).cohomology(3).0;
    let report = obstruction(germ)?;
    if h2_g == 0 && h3_q == 0 {
        Ok(report.dim_h2 == 0)
    } else {
        Ok(true)
    }
}

/// Fixed-point germ of the Cartan-Dirac structure at the unit: the
/// double g + g* with the split pairing, A the flat-graph copy of g*,
/// and anchor kernel all of g*.
pub fn cartan_dirac_germ(
    g: &LieAlgebra,
    metric: &Mat,
) -> Result<FixedPointGerm, StabilityError> {
    let n = g.dim;
    assert_eq!(metric.rows, n);
    assert_eq!(metric.cols, n);
    for i in 0..n {
        for j in 0..n {
            if metric.at(i, j) != metric.at(j, i) {
                return Err(StabilityError::PairingNotSymmetric);
            }
        }
    }
    if metric.rank() < n {
        return Err(StabilityError::PairingDegenerate);
    }
    // invariance: ([u,v],w) + (v,[u,w]) = 0 on basis triples
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let br_ij = g.bracket(&g.basis(i), &g.basis(j));
                let br_ik = g.bracket(&g.basis(i), &g.basis(k));
                let mut s = zero();
                for (a, c) in metric.mul_vec(&br_ij).iter().zip(g.basis(k)) {
                    s += a * &c;
                }
                for (a, c) in metric.mul_vec(&g.basis(j)).iter().zip(br_ik) {
                    s += a * &c;
                }
                if !s.is_zero() {
                    return Err(StabilityError::MetricNotInvariant);
                }
            }
        }
    }
    // split pairing on g + g*
    let mut pairing = Mat::zeros(2 * n, 2 * n);
    for i in 0..n {
        *pairing.at_mut(i, n + i) = one();
        *pairing.at_mut(n + i, i) = one();
    }
    // A = {(0, flat(v))}; basis a_i = (0, metric e_i)
    let a_basis: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut v = vec![zero(); 2 * n];
            for (j, c) in metric.mul_vec(&g.basis(i)).into_iter().enumerate() {
                v[n + j] = c;
            }
            v
        })
        .collect();
    // ker rho = 0 + g*
    let ker_rho: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut v = vec![zero(); 2 * n];
            v[n + i] = one();
            v
        })
        .collect();
    FixedPointGerm::new(pairing, a_basis, g.clone(), ker_rho)
}

/// so(3): [e1,e2]=e3 cyclically.
pub fn so3() -> LieAlgebra {
    let e = |k: usize| {
        let mut v = vec![zero(); 3];
        v[k] = one();
        v
    };
    LieAlgebra::new(3, &[(0, 1, e(2)), (1, 2, e(0)), (0, 2, {
        let mut v = vec![zero(); 3];
        v[1] = -one();
        v
    })])
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, ratq};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn e(n: usize, k: usize) -> Vec<Rat> {
        let mut v = vec![zero(); n];
        v[k] = one();
        v
    }

    #[test]
    fn abelian_ce_differential_is_zero() {
        let g = LieAlgebra::abelian(3);
        let cx = ce_complex(&g);
        for k in 1..=3 {
            assert_eq!(cx.cohomology(k).0, ext_basis(3, k as usize).len());
        }
    }

    #[test]
    fn affine_algebra_ce_differential() {
        // [e1,e2] = e2: de^1 = 0, de^2 = -e^1^e^2
        let g = LieAlgebra::new(2, &[(0, 1, e(2, 1))]).unwrap();
        let dl = ce_dletters(&g);
        assert!(dl[0].is_zero());
        assert_eq!(dl[1].terms.len(), 1);
        assert_eq!(dl[1].terms[&vec![0u8, 1]], -one());
        let cx = ce_complex(&g);
        // H^1 = span{e^1}, H^2 = 0
        assert_eq!(cx.cohomology(1).0, 1);
        assert_eq!(cx.cohomology(2).0, 0);
    }

    #[test]
    fn simple_three_dim_has_trivial_h1_h2() {
        let cx = ce_complex(&so3());
        assert_eq!(cx.cohomology(1).0, 0);
        assert_eq!(cx.cohomology(2).0, 0);
        // top cohomology of a unimodular algebra
        assert_eq!(cx.cohomology(3).0, 1);
    }

    #[test]
    fn jacobi_violation_rejected() {
        // [e1,e2]=e3, [e1,e3]=e1 + junk breaking Jacobi
        let r = LieAlgebra::new(3, &[(0, 1, e(3, 2)), (0, 2, e(3, 0)), (1, 2, e(3, 1))]);
        assert!(matches!(r, Err(StabilityError::Jacobi(..))));
    }

    fn cartan_su2() -> FixedPointGerm {
        cartan_dirac_germ(&so3(), &Mat::identity(3)).unwrap()
    }

    #[test]
    fn cartan_dirac_h_is_everything() {
        let germ = cartan_su2();
        assert!(germ.is_fixed_point());
        let h = ideal_h(&germ).unwrap();
        assert_eq!(h.len(), 3);
    }

    #[test]
    fn cartan_dirac_su2_stable() {
        let report = obstruction(&cartan_su2()).unwrap();
        assert_eq!(report.verdict, Verdict::Stable);
        assert_eq!(report.dim_h2, 0);
        assert_eq!(report.family_dim, 0);
        assert_eq!(report.dim_h, 3);
    }

    #[test]
    fn cartan_dirac_obstruction_equals_plain_h2() {
        // h = g so the quotient complex has the same H^2 as plain CE
        for g in [so3(), LieAlgebra::abelian(3), LieAlgebra::new(2, &[(0, 1, e(2, 1))]).unwrap()]
        {
            let plain = ce_complex(&g).cohomology(2).0;
            let quot = quotient_ce_complex(&g, &(0..g.dim).map(|i| e(g.dim, i)).collect::<Vec<_>>())
                .unwrap()
                .cohomology(2)
                .0;
            assert_eq!(plain, quot);
        }
    }

    #[test]
    fn abelian_cartan_dirac_inconclusive() {
        let g = LieAlgebra::abelian(3);
        let germ = cartan_dirac_germ(&g, &Mat::identity(3)).unwrap();
        let report = obstruction(&germ).unwrap();
        assert_eq!(report.verdict, Verdict::Inconclusive);
        assert_eq!(report.dim_h2, 3); // binomial(3,2)
        assert_eq!(report.family_dim, 3);
    }

    fn zero_anchor_germ(n: usize) -> FixedPointGerm {
        // ker rho = whole fiber, so h = 0: quotient complex vanishes
        // in positive degrees
        let g = LieAlgebra::abelian(n);
        let mut pairing = Mat::zeros(2 * n, 2 * n);
        for i in 0..n {
            *pairing.at_mut(i, n + i) = one();
            *pairing.at_mut(n + i, i) = one();
        }
        let a_basis: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                let mut v = vec![zero(); 2 * n];
                v[n + i] = one();
                v
            })
            .collect();
        let ker_rho: Vec<Vec<Rat>> = (0..2 * n).map(|i| e(2 * n, i)).collect();
        FixedPointGerm::new(pairing, a_basis, g, ker_rho).unwrap()
    }

    #[test]
    fn full_kernel_means_h_zero_and_stable() {
        let germ = zero_anchor_germ(2);
        let h = ideal_h(&germ).unwrap();
        assert!(h.is_empty());
        let report = obstruction(&germ).unwrap();
        assert_eq!(report.verdict, Verdict::Stable);
        assert_eq!(report.family_dim, 0);
        for (k, d) in &report.quotient_dims {
            if *k >= 1 {
                assert_eq!(*d, 0);
            }
        }
    }

    #[test]
    fn product_germ_h_is_blockwise() {
        let p = zero_anchor_germ(2).product(&cartan_su2());
        let h = ideal_h(&p).unwrap();
        // only the Cartan-Dirac factor contributes
        assert_eq!(h.len(), 3);
        for v in &h {
            for c in &v[..2] {
                assert!(c.is_zero());
            }
        }
    }

    #[test]
    fn product_metric_obstruction_adds_kunneth() {
        // g + g with block metric: degree-2 obstruction must match a
        // direct computation on the product
        let g = so3().direct_sum(&LieAlgebra::abelian(2));
        let mut metric = Mat::identity(5);
        *metric.at_mut(3, 3) = ratq(2, 1);
        let germ = cartan_dirac_germ(&g, &metric).unwrap();
        let report = obstruction(&germ).unwrap();
        // H^2(so3 + ab(2)) = H2(so3) + H1 x H1 + H2(ab2) = 0 + 0 + 1
        assert_eq!(report.dim_h2, ce_complex(&g).cohomology(2).0);
        assert_eq!(report.dim_h2, 1);
    }

    #[test]
    fn non_fixed_point_detected() {
        let mut germ = cartan_su2();
        germ.ker_rho.pop();
        assert!(!germ.is_fixed_point());
        let report = obstruction(&germ).unwrap();
        assert_eq!(report.verdict, Verdict::NotFixedPoint);
    }

    #[test]
    fn invalid_metric_rejected() {
        // identity is invariant for so(3); a generic symmetric metric is not
        let mut m = Mat::identity(3);
        *m.at_mut(0, 0) = ratq(2, 1);
        assert!(matches!(
            cartan_dirac_germ(&so3(), &m),
            Err(StabilityError::MetricNotInvariant)
        ));
        let z = Mat::zeros(3, 3);
        assert!(cartan_dirac_germ(&so3(), &z).is_err());
    }

    /// Germ with a prescribed ideal h of g: fiber g + g*, A = 0 + g*
    /// with the bracket moved over by the identity flat map, and
    /// ker rho = (h-orthogonal in g) + g*.
    fn germ_with_ideal(g: &LieAlgebra, ideal: &[Vec<Rat>]) -> FixedPointGerm {
        let n = g.dim;
        let mut pairing = Mat::zeros(2 * n, 2 * n);
        for i in 0..n {
            *pairing.at_mut(i, n + i) = one();
            *pairing.at_mut(n + i, i) = one();
        }
        let a_basis: Vec<Vec<Rat>> = (0..n)
            .map(|i| {
                let mut v = vec![zero(); 2 * n];
                v[n + i] = one();
                v
            })
            .collect();
        let mut ker_rho: Vec<Vec<Rat>> = a_basis.clone();
        // first-factor part: euclidean orthogonal of the ideal
        let orth = if ideal.is_empty() {
            (0..n).map(|i| e(n, i)).collect::<Vec<_>>()
        } else {
            Mat::from_rows(ideal.to_vec()).kernel_basis()
        };
        for v in orth {
            let mut w = v;
            w.extend(std::iter::repeat_with(zero).take(n));
            ker_rho.push(w);
        }
        FixedPointGerm::new(pairing, a_basis, g.clone(), ker_rho).unwrap()
    }

    #[test]
    fn les_implication_on_seeded_germs() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        // base algebras with known ideals, randomly re-based
        let heis = LieAlgebra::new(3, &[(0, 1, e(3, 2))]).unwrap();
        let affine = LieAlgebra::new(2, &[(0, 1, e(2, 1))]).unwrap();
        let bases: Vec<(LieAlgebra, Vec<Vec<Rat>>)> = vec![
            (so3(), vec![e(3, 0), e(3, 1), e(3, 2)]),
            (heis.clone(), vec![e(3, 2)]),
            (heis, vec![]),
            (affine.clone(), vec![e(2, 1)]),
            (affine.direct_sum(&LieAlgebra::abelian(2)), vec![e(4, 1), e(4, 2)]),
            (LieAlgebra::abelian(4), vec![e(4, 0), e(4, 3)]),
        ];
        for (g, ideal) in &bases {
            for _ in 0..4 {
                // random invertible change of basis with small entries
                let n = g.dim;
                let t = loop {
                    let mut m = Mat::zeros(n, n);
                    for i in 0..n {
                        for j in 0..n {
                            *m.at_mut(i, j) = rat(rng.gen_range(-2..=2));
                        }
                    }
                    if !m.det().is_zero() {
                        break m;
                    }
                };
                let g2 = g.change_basis(&t);
                // transport the ideal: new coords x of old vector v solve T x = v
                let ideal2: Vec<Vec<Rat>> =
                    ideal.iter().map(|v| t.solve(v).unwrap()).collect();
                let germ = germ_with_ideal(&g2, &ideal2);
                assert!(les_consistency(&germ).unwrap());
            }
        }
    }

    #[test]
    fn les_trivial_when_h_is_everything() {
        assert!(les_consistency(&cartan_su2()).unwrap());
    }
}
