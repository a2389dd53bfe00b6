//! Courant algebroids over a point: quadratic Lie algebras, Dirac
//! subspaces, split data (A, A*, Psi), the cubic deformation algebra on
//! the exterior algebra of A*, one-parameter automorphism groups, and
//! exact checks of the contraction identities used by the gauge
//! correspondence.

use crate::exterior::{triple_sharp, ExtElem};
use crate::graded::{GradedVector, GradedVectorSpace};
use crate::linalg::{in_span, Mat};
use crate::linfty::LInftyAlgebra;
use crate::rat::{one, to_f64, zero, Rat};
use crate::stability::{ce_dletters, derivation_apply, LieAlgebra};
use nalgebra::DMatrix;
use num_traits::Zero;

#[derive(Debug, thiserror::Error)]
pub enum CourantError {
    #[error("twisting 3-form is not closed")]
    NotClosed,
    #[error("subspace is not lagrangian")]
    NotLagrangian,
    #[error("subspace is not involutive")]
    NotInvolutive,
    #[error("complement is not complementary to A")]
    NotComplementary,
    #[error("Psi is not totally antisymmetric; split data inconsistent")]
    PsiNotAntisymmetric,
    #[error("subspace is not transverse to A* (projection to A singular)")]
    NotTransverse,
    #[error("extracted bilinear form is not antisymmetric")]
    NotAntisymmetricEps,
    #[error("element is not Maurer-Cartan")]
    NotMaurerCartan,
    #[error("transversality lost along the flow at t = {0}")]
    TransversalityLoss(f64),
    #[error(transparent)]
    Graded(#[from] crate::graded::GradedError),
    #[error(transparent)]
    LInfty(#[from] crate::linfty::LInftyError),
}

/// Courant algebroid over a point: a Lie bracket with an invariant
/// nondegenerate symmetric pairing (anchor and derivation vanish).
#[derive(Clone, Debug)]
pub struct QuadraticLieAlgebra {
    pub dim: usize,
    /// bracket[i][j] = coordinates of [[e_i, e_j]].
    pub bracket: Vec<Vec<Vec<Rat>>>,
    pub pairing: Mat,
}

impl QuadraticLieAlgebra {
    pub fn new(bracket: Vec<Vec<Vec<Rat>>>, pairing: Mat) -> Self {
        let dim = pairing.rows;
        assert_eq!(bracket.len(), dim);
        QuadraticLieAlgebra {
            dim,
            bracket,
            pairing,
        }
    }

    pub fn bracket_vec(&self, x: &[Rat], y: &[Rat]) -> Vec<Rat> {
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
                    let c = &self.bracket[i][j][k];
                    if !c.is_zero() {
                        out[k] += &f * c;
                    }
                }
            }
        }
        out
    }

    pub fn pair(&self, x: &[Rat], y: &[Rat]) -> Rat {
        self.pairing
            .mul_vec(x)
            .iter()
            .zip(y)
            .map(|(a, b)| a * b)
            .sum()
    }
}

/// Axiom checker: Leibniz (C1), pairing invariance (C4), antisymmetry
/// (C5), and nondegeneracy; failures are report entries.
#[derive(Clone, Debug, Default)]
pub struct CourantReport {
    pub c1_failures: Vec<(usize, usize, usize)>,
    pub c4_failures: Vec<(usize, usize, usize)>,
    pub c5_failures: Vec<(usize, usize)>,
    pub degenerate_pairing: bool,
    pub asymmetric_pairing: bool,
}

impl CourantReport {
    pub fn passed(&self) -> bool {
        self.c1_failures.is_empty()
            && self.c4_failures.is_empty()
            && self.c5_failures.is_empty()
            && !self.degenerate_pairing
            && !self.asymmetric_pairing
    }
}

pub fn check_courant_axioms(e: &QuadraticLieAlgebra) -> CourantReport {
    let n = e.dim;
    let mut report = CourantReport::default();
    let basis = |i: usize| {
        let mut v = vec![zero(); n];
        v[i] = one();
        v
    };
    for i in 0..n {
        for j in 0..n {
            if e.pairing.at(i, j) != e.pairing.at(j, i) {
                report.asymmetric_pairing = true;
            }
            let s: Vec<Rat> = e.bracket[i][j]
                .iter()
                .zip(&e.bracket[j][i])
                .map(|(a, b)| a + b)
                .collect();
            if s.iter().any(|c| !c.is_zero()) {
                report.c5_failures.push((i, j));
            }
        }
    }
    if e.pairing.rank() < n {
        report.degenerate_pairing = true;
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                // C1: [[e_i,[e_j,e_k]]] = [[[e_i,e_j],e_k]] + [[e_j,[e_i,e_k]]]
                let lhs = e.bracket_vec(&basis(i), &e.bracket[j][k]);
                let mut rhs = e.bracket_vec(&e.bracket[i][j], &basis(k));
                for (a, b) in rhs.iter_mut().zip(e.bracket_vec(&basis(j), &e.bracket[i][k])) {
                    *a += b;
                }
                if lhs.iter().zip(&rhs).any(|(a, b)| a != b) {
                    report.c1_failures.push((i, j, k));
                }
                // C4 over a point: <[e_i,e_j],e_k> + <e_j,[e_i,e_k]> = 0
                let s = e.pair(&e.bracket[i][j], &basis(k)) + e.pair(&basis(j), &e.bracket[i][k]);
                if !s.is_zero() {
                    report.c4_failures.push((i, j, k));
                }
            }
        }
    }
    report
}

/// The double g + g* with bracket twisted by a closed 3-form H and the
/// canonical hyperbolic pairing. Coordinates 0..n are g, n..2n are g*.
pub fn build_twisted_double(
    g: &LieAlgebra,
    h: &ExtElem<Rat>,
) -> Result<QuadraticLieAlgebra, CourantError> {
    let n = g.dim;
    assert_eq!(h.n, n);
    assert!(h.is_zero() || h.wedge_degree() == Some(3), "H must be a 3-form");
    let dl = ce_dletters(g);
    if !derivation_apply(h, &dl).is_zero() {
        return Err(CourantError::NotClosed);
    }
    let dim = 2 * n;
    let mut bracket = vec![vec![vec![zero(); dim]; dim]; dim];
    let cov_part = |f: &ExtElem<Rat>| -> Vec<Rat> {
        // 1-form to dense g* coordinates
        let mut v = vec![zero(); n];
        for (w, c) in &f.terms {
            assert_eq!(w.len(), 1);
            v[w[0] as usize] = c.clone();
        }
        v
    };
    for i in 0..n {
        for j in 0..n {
            // [[X_i, X_j]] = [e_i, e_j] + iota_j iota_i H
            let lie = g.bracket(&g.basis(i), &g.basis(j));
            for k in 0..n {
                bracket[i][j][k] = lie[k].clone();
            }
            let hij = cov_part(&h.contract_letter(i as u8).contract_letter(j as u8));
            for k in 0..n {
                bracket[i][j][n + k] = hij[k].clone();
            }
            // [[X_i, xi_j]] = L_{e_i} eps^j: coefficient at eps^k is -c^j_{ik}
            for k in 0..n {
                bracket[i][n + j][n + k] = -g.structure_constant(i, k, j).clone();
                // [[xi_i, X_j]] = -iota_{e_j} d eps^i: coefficient +c^i_{jk}
                bracket[n + i][j][n + k] = g.structure_constant(j, k, i).clone();
            }
            // [[xi_i, xi_j]] = 0
        }
    }
    let mut pairing = Mat::zeros(dim, dim);
    for i in 0..n {
        *pairing.at_mut(i, n + i) = one();
        *pairing.at_mut(n + i, i) = one();
    }
    Ok(QuadraticLieAlgebra::new(bracket, pairing))
}

/// Lagrangian + involutive check with a human-readable witness.
pub fn is_dirac(e: &QuadraticLieAlgebra, basis: &[Vec<Rat>]) -> (bool, Option<String>) {
    let n = e.dim / 2;
    if basis.len() != n || Mat::from_rows(basis.to_vec()).rank() < n {
        return (false, Some("wrong dimension or dependent basis".into()));
    }
    for (i, u) in basis.iter().enumerate() {
        for (j, v) in basis.iter().enumerate().skip(i) {
            if !e.pair(u, v).is_zero() {
                return (false, Some(format!("not isotropic at pair ({i},{j})")));
            }
        }
    }
    for (i, u) in basis.iter().enumerate() {
        for (j, v) in basis.iter().enumerate() {
            let b = e.bracket_vec(u, v);
            if !in_span(basis, &b) {
                return (
                    false,
                    Some(format!("bracket of basis vectors ({i},{j}) leaves the subspace")),
                );
            }
        }
    }
    (true, None)
}

/// Split description of a Dirac structure: the Lie bracket on A, the
/// bracket on A* carried by the dual-normalized lagrangian complement,
/// and the trivector Psi measuring the complement's non-involutivity.
#[derive(Clone, Debug)]
pub struct SplitData {
    pub n: usize,
    pub a_basis: Vec<Vec<Rat>>,
    /// Lagrangian complement, normalized so <k_i, a_j> = delta_ij.
    pub k_basis: Vec<Vec<Rat>>,
    /// bracket_a[i][j] = A-coordinates of [a_i, a_j].
    pub bracket_a: Vec<Vec<Vec<Rat>>>,
    /// bracket_astar[i][j] = A*-coordinates of pr_{A*}[[k_i, k_j]].
    pub bracket_astar: Vec<Vec<Vec<Rat>>>,
    /// Element of the third exterior power of A (letters = a_i).
    pub psi: ExtElem<Rat>,
    /// Columns a_1..a_n, k_1..k_n in ambient coordinates.
    basis_matrix: Mat,
}

impl SplitData {
    pub fn to_split_coords(&self, v: &[Rat]) -> Vec<Rat> {
        self.basis_matrix
            .solve(v)
            .expect("basis matrix is invertible")
    }

    pub fn to_ambient(&self, coords: &[Rat]) -> Vec<Rat> {
        self.basis_matrix.mul_vec(coords)
    }
}

/// Deterministic lagrangian complement: dual vectors to A corrected to
/// be isotropic.
pub fn lagrangian_complement(
    e: &QuadraticLieAlgebra,
    a_basis: &[Vec<Rat>],
) -> Result<Vec<Vec<Rat>>, CourantError> {
    let n = a_basis.len();
    // solve <a_j, k_i> = delta_ij for each i
    let rows: Vec<Vec<Rat>> = a_basis.iter().map(|a| e.pairing.mul_vec(a)).collect();
    let m = Mat::from_rows(rows);
    let mut k_raw = Vec::new();
    for i in 0..n {
        let mut rhs = vec![zero(); n];
        rhs[i] = one();
        let k = m.solve(&rhs).ok_or(CourantError::NotLagrangian)?;
        k_raw.push(k);
    }
    // isotropize: k_i' = k_i - 1/2 sum_j <k_i,k_j> a_j
    let half = crate::rat::ratq(1, 2);
    let mut out = Vec::new();
    for i in 0..n {
        let mut k = k_raw[i].clone();
        for j in 0..n {
            let c = &half * e.pair(&k_raw[i], &k_raw[j]);
            for (x, a) in k.iter_mut().zip(&a_basis[j]) {
                *x -= &c * a;
            }
        }
        out.push(k);
    }
    Ok(out)
}

/// Extracts the deformation datum of a Dirac structure relative to a
/// lagrangian complement (constructed deterministically when absent).
pub fn split_data(
    e: &QuadraticLieAlgebra,
    a_basis: &[Vec<Rat>],
    k_basis: Option<&[Vec<Rat>]>,
) -> Result<SplitData, CourantError> {
    let n = e.dim / 2;
    let (dirac, witness) = is_dirac(e, a_basis);
    if !dirac {
        return Err(if witness.as_deref().is_some_and(|w| w.contains("isotropic")) {
            CourantError::NotLagrangian
        } else {
            CourantError::NotInvolutive
        });
    }
    let k_raw: Vec<Vec<Rat>> = match k_basis {
        Some(k) => {
            for (i, u) in k.iter().enumerate() {
                for v in k.iter().skip(i) {
                    if !e.pair(u, v).is_zero() {
                        return Err(CourantError::NotLagrangian);
                    }
                }
            }
            let mut all = a_basis.to_vec();
            all.extend(k.iter().cloned());
            if Mat::from_rows(all).rank() < 2 * n {
                return Err(CourantError::NotComplementary);
            }
            k.to_vec()
        }
        None => lagrangian_complement(e, a_basis)?,
    };
    // dual-normalize: G[i][j] = <k_i, a_j>, replace k by G^{-1} k
    let g = Mat::from_rows(
        k_raw
            .iter()
            .map(|k| a_basis.iter().map(|a| e.pair(k, a)).collect())
            .collect(),
    );
    let mut k_basis_norm = Vec::new();
    for i in 0..n {
        let mut rhs = vec![zero(); n];
        rhs[i] = one();
        // coefficients c with sum_m c_m <k_m, a_j> = delta_ij
        let c = g.transpose().solve(&rhs).ok_or(CourantError::NotComplementary)?;
        let mut v = vec![zero(); 2 * n];
        for (cm, km) in c.iter().zip(&k_raw) {
            for (x, y) in v.iter_mut().zip(km) {
                *x += cm * y;
            }
        }
        k_basis_norm.push(v);
    }
    let mut cols = Vec::new();
    cols.extend(a_basis.iter().cloned());
    cols.extend(k_basis_norm.iter().cloned());
    let basis_matrix = Mat::from_rows(cols).transpose();
    let split = |v: &[Rat]| -> (Vec<Rat>, Vec<Rat>) {
        let coords = basis_matrix.solve(v).expect("invertible splitting");
        (coords[..n].to_vec(), coords[n..].to_vec())
    };
    let mut bracket_a = vec![vec![vec![zero(); n]; n]; n];
    for i in 0..n {
        for j in 0..n {
            let (a_part, _) = split(&e.bracket_vec(&a_basis[i], &a_basis[j]));
            bracket_a[i][j] = a_part;
        }
    }
    let mut bracket_astar = vec![vec![vec![zero(); n]; n]; n];
    let mut psi = ExtElem::zero(n);
    for i in 0..n {
        for j in 0..n {
            let (a_part, k_part) = split(&e.bracket_vec(&k_basis_norm[i], &k_basis_norm[j]));
            bracket_astar[i][j] = k_part;
            if i < j {
                for (m, c) in a_part.iter().enumerate() {
                    if m > j && !c.is_zero() {
                        psi.add_term(vec![i as u8, j as u8, m as u8], c.clone());
                    }
                }
            }
        }
    }
    // total antisymmetry: the trivector must reproduce every A-part
    for i in 0..n {
        for j in 0..n {
            let v = psi.contract_letter(i as u8).contract_letter(j as u8);
            let (a_part, _) = split(&e.bracket_vec(&k_basis_norm[i], &k_basis_norm[j]));
            for m in 0..n {
                let c = v.terms.get(&vec![m as u8]).cloned().unwrap_or_else(zero);
                if c != a_part[m] {
                    return Err(CourantError::PsiNotAntisymmetric);
                }
            }
        }
    }
    Ok(SplitData {
        n,
        a_basis: a_basis.to_vec(),
        k_basis: k_basis_norm,
        bracket_a,
        bracket_astar,
        psi,
        basis_matrix,
    })
}

/// Rebuilds the ambient bracket on A + A* coordinates from the datum.
pub fn reconstruct_bracket(s: &SplitData) -> QuadraticLieAlgebra {
    let n = s.n;
    let dim = 2 * n;
    let mut bracket = vec![vec![vec![zero(); dim]; dim]; dim];
    for i in 0..n {
        for j in 0..n {
            // [a_i, a_j] = ([a_i,a_j]_A, 0)
            for m in 0..n {
                bracket[i][j][m] = s.bracket_a[i][j][m].clone();
            }
            for m in 0..n {
                // [a_i, eta_j]: A-part_m = (bracket_astar[j][m])_i,
                //                A*-part_m = -(bracket_a[i][m])_j
                bracket[i][n + j][m] = s.bracket_astar[j][m][i].clone();
                bracket[i][n + j][n + m] = -s.bracket_a[i][m][j].clone();
                // [eta_i, a_j]: A-part_m = -(bracket_astar[i][m])_j,
                //                A*-part_m = (bracket_a[j][m])_i
                bracket[n + i][j][m] = -s.bracket_astar[i][m][j].clone();
                bracket[n + i][j][n + m] = s.bracket_a[j][m][i].clone();
            }
            // [eta_i, eta_j] = (Psi(eta_i, eta_j, .), [eta_i, eta_j]_{A*})
            let v = s.psi.contract_letter(i as u8).contract_letter(j as u8);
            for (w, c) in &v.terms {
                bracket[n + i][n + j][w[0] as usize] = c.clone();
            }
            for m in 0..n {
                bracket[n + i][n + j][n + m] = s.bracket_astar[i][j][m].clone();
            }
        }
    }
    let mut pairing = Mat::zeros(dim, dim);
    for i in 0..n {
        *pairing.at_mut(i, n + i) = one();
        *pairing.at_mut(n + i, i) = one();
    }
    QuadraticLieAlgebra::new(bracket, pairing)
}

/// Exact round-trip check: the reconstructed bracket transported back
/// to ambient coordinates agrees with the ambient bracket on the split
/// basis.
pub fn verify_reconstruction(e: &QuadraticLieAlgebra, s: &SplitData) -> bool {
    let rec = reconstruct_bracket(s);
    let dim = 2 * s.n;
    for i in 0..dim {
        for j in 0..dim {
            let u = s.to_ambient(&unit(dim, i));
            let v = s.to_ambient(&unit(dim, j));
            let ambient = e.bracket_vec(&u, &v);
            let back = s.to_ambient(&rec.bracket[i][j]);
            if ambient != back {
                return false;
            }
        }
    }
    true
}

fn unit(n: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![zero(); n];
    v[i] = one();
    v
}

/// Schouten-type extension of the A* bracket from 1-forms to the whole
/// exterior algebra: Leibniz in the second slot, graded antisymmetry,
/// scalars bracket to zero.
pub fn astar_bracket(
    table: &[Vec<Vec<Rat>>],
    alpha: &ExtElem<Rat>,
    beta: &ExtElem<Rat>,
) -> ExtElem<Rat> {
    let n = alpha.n;
    let mut out = ExtElem::zero(n);
    for (aw, ac) in &alpha.terms {
        for (bw, bc) in &beta.terms {
            let t = word_bracket(table, n, aw, bw).scale(&(ac * bc));
            out = out.add(&t).unwrap();
        }
    }
    out
}

fn word_bracket(table: &[Vec<Vec<Rat>>], n: usize, aw: &[u8], bw: &[u8]) -> ExtElem<Rat> {
    if aw.is_empty() || bw.is_empty() {
        return ExtElem::zero(n);
    }
    if aw.len() == 1 && bw.len() == 1 {
        let mut out = ExtElem::zero(n);
        for (m, c) in table[aw[0] as usize][bw[0] as usize].iter().enumerate() {
            if !c.is_zero() {
                out.add_term(vec![m as u8], c.clone());
            }
        }
        return out;
    }
    if bw.len() > 1 {
        // [alpha, b ^ rest] = [alpha,b] ^ rest + (-1)^{|alpha|-1} b ^ [alpha,rest]
        let b = &bw[..1];
        let rest = &bw[1..];
        let mut rest_elem = ExtElem::scalar(n, one());
        for &l in rest {
            rest_elem = rest_elem.wedge(&ExtElem::letter(n, l)).unwrap();
        }
        let t1 = word_bracket(table, n, aw, b).wedge(&rest_elem).unwrap();
        let sign = if (aw.len() + 1) % 2 == 0 { one() } else { -one() };
        let t2 = ExtElem::<Rat>::letter(n, bw[0])
            .wedge(&word_bracket(table, n, aw, rest))
            .unwrap()
            .scale(&sign);
        return t1.add(&t2).unwrap();
    }
    // |beta| = 1 < |alpha|: graded antisymmetry with (|beta|-1) = 0
    word_bracket(table, n, bw, aw).neg()
}

/// The deformation algebra lives on the exterior algebra of A* with the
/// wedge degree shifted down by 2; labels encode subsets of eta-letters.
pub struct DeformationAlgebra {
    pub alg: LInftyAlgebra,
    /// Wedge word of each label, aligned with the space's label order.
    pub words: Vec<Vec<u8>>,
    pub n: usize,
}

fn label_name(word: &[u8]) -> String {
    let mut s = String::from("w");
    for &l in word {
        s.push((b'a' + l) as char);
    }
    s
}

impl DeformationAlgebra {
    pub fn to_vec(&self, e: &ExtElem<Rat>) -> GradedVector {
        let mut out = GradedVector::zero();
        for (w, c) in &e.terms {
            let l = self.alg.space.lookup(&label_name(w)).unwrap();
            out.add_term(l, c.clone());
        }
        out
    }

    pub fn to_ext(&self, v: &GradedVector) -> ExtElem<Rat> {
        let mut out = ExtElem::zero(self.n);
        for (&l, c) in &v.coeffs {
            out.add_term(self.words[l as usize].clone(), c.clone());
        }
        out
    }

    pub fn to_dense_f64(&self, e: &ExtElem<Rat>) -> Vec<f64> {
        self.to_vec(e).to_dense(self.alg.space.dim())
            .iter()
            .map(to_f64)
            .collect()
    }

    pub fn dense_to_ext_f64(&self, v: &[f64]) -> Vec<(Vec<u8>, f64)> {
        v.iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(l, &c)| (self.words[l].clone(), c))
            .collect()
    }
}

/// Cubic L-infinity[1]-algebra of a split: unary = CE differential of
/// the A bracket, binary = signed A* bracket, ternary = contraction
/// against Psi with the printed global minus.
pub fn deformation_algebra(s: &SplitData) -> DeformationAlgebra {
    let n = s.n;
    // graded space: wedge degree k sits in degree k - 2
    let mut by_degree: Vec<(i32, Vec<String>)> = Vec::new();
    for k in 0..=n {
        let labels: Vec<String> = crate::stability::ext_basis(n, k)
            .iter()
            .map(|w| label_name(w))
            .collect();
        by_degree.push((k as i32 - 2, labels));
    }
    let space = GradedVectorSpace::new(&by_degree).unwrap();
    let mut words = vec![Vec::new(); space.dim()];
    for k in 0..=n {
        for w in crate::stability::ext_basis(n, k) {
            let l = space.lookup(&label_name(&w)).unwrap();
            words[l as usize] = w;
        }
    }
    let mut alg = LInftyAlgebra::new(space, 3);
    // CE-style letter differentials of the A bracket
    let dletters: Vec<ExtElem<Rat>> = (0..n)
        .map(|m| {
            let mut d = ExtElem::zero(n);
            for i in 0..n {
                for j in (i + 1)..n {
                    let c = &s.bracket_a[i][j][m];
                    if !c.is_zero() {
                        d.add_term(vec![i as u8, j as u8], -c.clone());
                    }
                }
            }
            d
        })
        .collect();
    let sp = alg.space.clone();
    let to_vec = move |e: &ExtElem<Rat>| -> GradedVector {
        let mut out = GradedVector::zero();
        for (w, c) in &e.terms {
            out.add_term(sp.lookup(&label_name(w)).unwrap(), c.clone());
        }
        out
    };
    let word_ext = |w: &[u8]| -> ExtElem<Rat> {
        let mut e = ExtElem::scalar(n, one());
        for &l in w {
            e = e.wedge(&ExtElem::letter(n, l)).unwrap();
        }
        e
    };
    let dim = alg.space.dim() as u32;
    // mu_1 = d_A
    for l in 0..dim {
        let value = to_vec(&derivation_apply(&word_ext(&words[l as usize]), &dletters));
        if !value.is_zero() {
            alg.add_bracket_term(&[l], &value).unwrap();
        }
    }
    // mu_2(alpha, beta) = (-1)^{|alpha|} [alpha, beta]_{A*}
    for l1 in 0..dim {
        for l2 in l1..dim {
            let a = word_ext(&words[l1 as usize]);
            let b = word_ext(&words[l2 as usize]);
            let sign = if words[l1 as usize].len() % 2 == 0 {
                one()
            } else {
                -one()
            };
            let value = to_vec(&astar_bracket(&s.bracket_astar, &a, &b).scale(&sign));
            if !value.is_zero() {
                alg.add_bracket_term(&[l1, l2], &value).unwrap();
            }
        }
    }
    // mu_3(alpha, beta, gamma) = -(-1)^{|beta|} (alpha#^beta#^gamma#) Psi
    if !s.psi.is_zero() {
        for l1 in 0..dim {
            for l2 in l1..dim {
                for l3 in l2..dim {
                    let a = word_ext(&words[l1 as usize]);
                    let b = word_ext(&words[l2 as usize]);
                    let c = word_ext(&words[l3 as usize]);
                    let sign = if words[l2 as usize].len() % 2 == 0 {
                        -one()
                    } else {
                        one()
                    };
                    let value =
                        to_vec(&triple_sharp(&a, &b, &c, &s.psi).unwrap().scale(&sign));
                    if !value.is_zero() {
                        alg.add_bracket_term(&[l1, l2, l3], &value).unwrap();
                    }
                }
            }
        }
    }
    DeformationAlgebra { alg, words, n }
}

/// Graph of a 2-form on A inside A + A* coordinates.
pub fn graph(n: usize, eps: &ExtElem<Rat>) -> Vec<Vec<Rat>> {
    let mut out = Vec::new();
    for i in 0..n {
        let mut v = vec![zero(); 2 * n];
        v[i] = one();
        let contracted = eps.contract_letter(i as u8);
        for (w, c) in &contracted.terms {
            v[n + w[0] as usize] = c.clone();
        }
        out.push(v);
    }
    out
}

/// Inverse of `graph` on subspaces transverse to A*: solves for the
/// matrix of the sharp map and reads off the antisymmetric 2-form.
pub fn extract_eps(n: usize, l_basis: &[Vec<Rat>]) -> Result<ExtElem<Rat>, CourantError> {
    assert_eq!(l_basis.len(), n);
    // columns of P = A-parts, Q = A*-parts over the basis of L
    let p = Mat::from_rows(l_basis.iter().map(|v| v[..n].to_vec()).collect()).transpose();
    let q = Mat::from_rows(l_basis.iter().map(|v| v[n..].to_vec()).collect()).transpose();
    // sharp matrix B with B = Q P^{-1}: solve P^T B^T = Q^T columnwise
    let pt = p.transpose();
    let mut b = Mat::zeros(n, n);
    for i in 0..n {
        // row i of B: solve P^T x = (column i of Q^T) = row i of Q
        let x = pt.solve(q.row(i)).ok_or(CourantError::NotTransverse)?;
        for j in 0..n {
            *b.at_mut(i, j) = x[j].clone();
        }
    }
    // B = Q P^{-1} is the sharp matrix: sharp(a_i) = sum_j B_ji eta_j
    let mut eps = ExtElem::zero(n);
    for i in 0..n {
        for j in (i + 1)..n {
            if b.at(j, i) != &(-b.at(i, j).clone()) {
                return Err(CourantError::NotAntisymmetricEps);
            }
            if !b.at(j, i).is_zero() {
                eps.add_term(vec![i as u8, j as u8], b.at(j, i).clone());
            }
        }
    }
    Ok(eps)
}

/// Matrix exponential by scaling-and-squaring with a Taylor kernel.
pub fn expm(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let norm = m.iter().map(|c| c.abs()).fold(0.0, f64::max) * n as f64;
    let mut s = 0u32;
    while norm / 2f64.powi(s as i32) > 0.5 {
        s += 1;
    }
    let scaled = m / 2f64.powi(s as i32);
    let mut term = DMatrix::<f64>::identity(n, n);
    let mut sum = DMatrix::<f64>::identity(n, n);
    for k in 1..=13 {
        term = (&term * &scaled) / k as f64;
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// One-parameter automorphism e^{t ad_xi} as a float matrix.
pub fn courant_automorphism(e: &QuadraticLieAlgebra, xi: &[Rat], t: f64) -> DMatrix<f64> {
    let n = e.dim;
    let mut ad = DMatrix::<f64>::zeros(n, n);
    for j in 0..n {
        let col = e.bracket_vec(xi, &unit(n, j));
        for i in 0..n {
            ad[(i, j)] = to_f64(&col[i]);
        }
    }
    expm(&(ad * t))
}

/// Compares the gauge flow of the deformation algebra (parameter -xi)
/// against transport of the graph by e^{t ad_xi}; returns the max
/// coefficient deviation over sampled times. The identity rests on the
/// contraction lemmas, which hold for arbitrary eps, so eps0 is not
/// required to be Maurer-Cartan (for MC eps0 the transported graphs
/// are Dirac; otherwise they are just lagrangian).
pub fn verify_prop_caauto(
    s: &SplitData,
    eps0: &ExtElem<Rat>,
    xi: &ExtElem<Rat>,
    t_end: f64,
    step: f64,
) -> Result<f64, CourantError> {
    let def = deformation_algebra(s);
    let q0 = def.to_vec(eps0);
    let falg = crate::gauge::FloatAlgebra::from_exact(&def.alg);
    let dim = def.alg.space.dim();
    let q0d: Vec<f64> = q0.to_dense(dim).iter().map(to_f64).collect();
    let xvec: Vec<f64> = def
        .to_vec(&xi.neg())
        .to_dense(dim)
        .iter()
        .map(to_f64)
        .collect();
    let flow = crate::gauge::gauge_flow(&falg, &q0d, &xvec, t_end, step);
    if let Some(t) = flow.blew_up {
        return Err(CourantError::TransversalityLoss(t));
    }
    let n = s.n;
    let rec = reconstruct_bracket(s);
    // xi embedded into A* coordinates
    let mut xi_amb = vec![zero(); 2 * n];
    for (w, c) in &xi.terms {
        xi_amb[n + w[0] as usize] = c.clone();
    }
    // float graph basis of eps0, as columns
    let g0 = graph(n, eps0);
    let mut g0f = DMatrix::<f64>::zeros(2 * n, n);
    for (j, v) in g0.iter().enumerate() {
        for i in 0..2 * n {
            g0f[(i, j)] = to_f64(&v[i]);
        }
    }
    let n_samples = 10usize.min(flow.times.len() - 1).max(1);
    let stride = ((flow.times.len() - 1) / n_samples).max(1);
    let mut max_dev: f64 = 0.0;
    for idx in (0..flow.times.len()).step_by(stride).chain([flow.times.len() - 1]) {
        let t = flow.times[idx];
        let m = courant_automorphism(&rec, &xi_amb, t);
        let transported = &m * &g0f;
        // extract the sharp matrix: B = Q P^{-1}
        let p = transported.rows(0, n).into_owned();
        let q = transported.rows(n, n).into_owned();
        let lu = p.lu();
        let pinv_cols = match lu.solve(&DMatrix::<f64>::identity(n, n)) {
            Some(x) => x,
            None => return Err(CourantError::TransversalityLoss(t)),
        };
        let b = &q * &pinv_cols;
        // flow side: assemble the sharp matrix from wedge coefficients
        let eps_terms = def.dense_to_ext_f64(&flow.path[idx]);
        let mut bf = DMatrix::<f64>::zeros(n, n);
        for (w, c) in &eps_terms {
            if w.len() == 2 {
                let (i, j) = (w[0] as usize, w[1] as usize);
                bf[(j, i)] = *c;
                bf[(i, j)] = -*c;
            }
        }
        for i in 0..n {
            for j in 0..n {
                max_dev = max_dev.max((b[(i, j)] - bf[(i, j)]).abs());
            }
        }
    }
    Ok(max_dev)
}

/// Exact check of the degree-1 contraction identity relating the A*
/// bracket, the sharp map, and the Lie derivative.
pub fn verify_lemma_idla(
    s: &SplitData,
    xi: &ExtElem<Rat>,
    eps: &ExtElem<Rat>,
    a: &[Rat],
) -> bool {
    let n = s.n;
    // LHS: iota_a [xi, eps]_{A*}
    let lhs = astar_bracket(&s.bracket_astar, xi, eps).contract(a);
    // eps# a = iota_a eps
    let eps_a = eps.contract(a);
    // L_xi a = pr_A [[xi, a]] in the reconstructed algebra
    let rec = reconstruct_bracket(s);
    let mut xi_amb = vec![zero(); 2 * n];
    for (w, c) in &xi.terms {
        xi_amb[n + w[0] as usize] = c.clone();
    }
    let mut a_amb = vec![zero(); 2 * n];
    a_amb[..n].clone_from_slice(a);
    let l_xi_a = &rec.bracket_vec(&xi_amb, &a_amb)[..n];
    let rhs = astar_bracket(&s.bracket_astar, xi, &eps_a)
        .add(&eps.contract(l_xi_a).neg())
        .unwrap();
    lhs == rhs
}

/// Exact check of the cubic contraction identity against Psi.
pub fn verify_lemma_cubic(
    xi: &ExtElem<Rat>,
    eps: &ExtElem<Rat>,
    a: &[Rat],
    psi: &ExtElem<Rat>,
) -> bool {
    let n = psi.n;
    // v = Psi(xi, eps# a, .) in A
    let xi_cov: Vec<Rat> = (0..n)
        .map(|i| xi.terms.get(&vec![i as u8]).cloned().unwrap_or_else(zero))
        .collect();
    let eps_a = eps.contract(a);
    let eps_a_cov: Vec<Rat> = (0..n)
        .map(|i| eps_a.terms.get(&vec![i as u8]).cloned().unwrap_or_else(zero))
        .collect();
    let v = psi.contract(&xi_cov).contract(&eps_a_cov);
    let v_vec: Vec<Rat> = (0..n)
        .map(|i| v.terms.get(&vec![i as u8]).cloned().unwrap_or_else(zero))
        .collect();
    // LHS: -eps#(v) = -iota_v eps
    let lhs = eps.contract(&v_vec).neg();
    // RHS: 1/2 iota_a ((xi# ^ eps# ^ eps#) Psi)
    let half = crate::rat::ratq(1, 2);
    let rhs = triple_sharp(xi, eps, eps, psi).unwrap().contract(a).scale(&half);
    lhs == rhs
}
