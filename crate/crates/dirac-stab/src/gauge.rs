//! Numerical gauge flows, the ev/R maps attached to a subalgebra with
//! splittings, and Newton rectification of nearby Maurer-Cartan
//! elements. Everything here is floating point; exact preconditions
//! are checked through the linfty module before entering.

use std::collections::HashMap;

use crate::graded::{sort_word_with_sign, GradedVectorSpace};
use crate::linfty::{GradedSubspace, LInftyAlgebra, LInftyError};
use crate::rat::to_f64;

pub const DEFAULT_STEP: f64 = 1e-3;
pub const DEFAULT_NEWTON_TOL: f64 = 1e-8;
pub const DEFAULT_FD_H: f64 = 1e-4;

#[derive(Debug, thiserror::Error)]
pub enum GaugeError {
    #[error("gauge flow blew up at t = {0}")]
    BlowUp(f64),
    #[error("H^0 of the quotient complex is nonzero (dim {0}); rectification refused")]
    ObstructedKernel(usize),
    #[error(transparent)]
    Exact(#[from] LInftyError),
}

/// Floating-point copy of an exact algebra; same canonical-word storage.
#[derive(Clone, Debug)]
pub struct FloatAlgebra {
    pub space: GradedVectorSpace,
    pub k_max: usize,
    brackets: Vec<HashMap<Vec<u32>, Vec<(u32, f64)>>>,
}

impl FloatAlgebra {
    pub fn from_exact(alg: &LInftyAlgebra) -> Self {
        let mut brackets = Vec::new();
        for k in 1..=alg.k_max {
            let mut table = HashMap::new();
            for (word, value) in alg.bracket_table(k).unwrap() {
                let entry: Vec<(u32, f64)> =
                    value.coeffs.iter().map(|(&l, c)| (l, to_f64(c))).collect();
                table.insert(word.clone(), entry);
            }
            brackets.push(table);
        }
        FloatAlgebra {
            space: alg.space.clone(),
            k_max: alg.k_max,
            brackets,
        }
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// Multilinear evaluation on dense coefficient vectors.
    pub fn eval(&self, k: usize, args: &[&[f64]]) -> Vec<f64> {
        assert_eq!(args.len(), k);
        let dim = self.dim();
        let mut out = vec![0.0; dim];
        if k == 0 || k > self.k_max {
            return out;
        }
        let supports: Vec<Vec<(u32, f64)>> = args
            .iter()
            .map(|a| {
                a.iter()
                    .enumerate()
                    .filter(|(_, c)| **c != 0.0)
                    .map(|(l, &c)| (l as u32, c))
                    .collect()
            })
            .collect();
        if supports.iter().any(|s| s.is_empty()) {
            return out;
        }
        let table = &self.brackets[k - 1];
        let mut idx = vec![0usize; k];
        let mut word = vec![0u32; k];
        loop {
            let mut coeff = 1.0;
            for (d, &i) in idx.iter().enumerate() {
                let (l, c) = supports[d][i];
                word[d] = l;
                coeff *= c;
            }
            let mut sorted = word.clone();
            if let Some(sign) = sort_word_with_sign(&mut sorted, &self.space) {
                if let Some(entry) = table.get(&sorted) {
                    let f = coeff * sign as f64;
                    for &(l, c) in entry {
                        out[l as usize] += f * c;
                    }
                }
            }
            // advance the multi-index
            let mut d = k;
            loop {
                if d == 0 {
                    return out;
                }
                d -= 1;
                idx[d] += 1;
                if idx[d] < supports[d].len() {
                    break;
                }
                idx[d] = 0;
            }
        }
    }

    /// Sum over arities of (1/i!) mu_i(q,...,q).
    pub fn mc_residual(&self, q: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        let mut fact = 1.0;
        for i in 1..=self.k_max {
            fact *= i as f64;
            let args: Vec<&[f64]> = vec![q; i];
            for (l, c) in self.eval(i, &args).into_iter().enumerate() {
                out[l] += c / fact;
            }
        }
        out
    }

    /// Twisted differential: sum over i of (1/i!) mu_{1+i}(q,..,q,x).
    pub fn twisted_mu1(&self, q: &[f64], x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        let mut fact = 1.0;
        for i in 0..self.k_max {
            if i > 0 {
                fact *= i as f64;
            }
            let mut args: Vec<&[f64]> = vec![q; i];
            args.push(x);
            for (l, c) in self.eval(i + 1, &args).into_iter().enumerate() {
                out[l] += c / fact;
            }
        }
        out
    }
}

pub fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, c| m.max(c.abs()))
}

#[derive(Clone, Debug)]
pub struct FlowResult {
    pub times: Vec<f64>,
    pub path: Vec<Vec<f64>>,
    pub endpoint: Vec<f64>,
    pub mc_residual_norms: Vec<f64>,
    /// Last valid time if the integration produced non-finite values.
    pub blew_up: Option<f64>,
}

impl FlowResult {
    pub fn ok(&self) -> bool {
        self.blew_up.is_none()
    }
}

/// Fixed-step RK4 for dQ/dt = (twisted differential of Q_t)(X).
pub fn gauge_flow(
    alg: &FloatAlgebra,
    q0: &[f64],
    x: &[f64],
    t_end: f64,
    step: f64,
) -> FlowResult {
    assert!(step > 0.0 && t_end >= 0.0);
    let f = |q: &[f64]| alg.twisted_mu1(q, x);
    let n_steps = (t_end / step).round().max(1.0) as usize;
    let h = t_end / n_steps as f64;
    let mut q = q0.to_vec();
    let mut times = vec![0.0];
    let mut path = vec![q.clone()];
    let mut res_norms = vec![inf_norm(&alg.mc_residual(&q))];
    let mut blew_up = None;
    let axpy = |y: &[f64], a: f64, x: &[f64]| -> Vec<f64> {
        y.iter().zip(x).map(|(u, v)| u + a * v).collect()
    };
    for s in 0..n_steps {
        let t = s as f64 * h;
        let k1 = f(&q);
        let k2 = f(&axpy(&q, h / 2.0, &k1));
        let k3 = f(&axpy(&q, h / 2.0, &k2));
        let k4 = f(&axpy(&q, h, &k3));
        for (i, qi) in q.iter_mut().enumerate() {
            *qi += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if q.iter().any(|c| !c.is_finite() || c.abs() > 1e100) {
            blew_up = Some(t);
            break;
        }
        times.push(t + h);
        path.push(q.clone());
        res_norms.push(inf_norm(&alg.mc_residual(&q)));
    }
    FlowResult {
        endpoint: path.last().unwrap().clone(),
        times,
        path,
        mc_residual_norms: res_norms,
        blew_up,
    }
}

/// Float view of the per-degree splittings of a graded subspace: class
/// coordinates over the complement labels and the section back.
#[derive(Clone, Debug)]
pub struct QuotientSplitting {
    space: GradedVectorSpace,
    /// degree -> (ambient labels, reduced W rows over them, pivots, complement labels)
    slices: HashMap<i32, (Vec<u32>, Vec<Vec<f64>>, Vec<usize>, Vec<u32>)>,
}

impl QuotientSplitting {
    pub fn new(space: &GradedVectorSpace, w: &GradedSubspace) -> Self {
        let mut slices = HashMap::new();
        for d in space.degrees_present() {
            let labels = space.labels_of_degree(d);
            let compl = w.quotient_basis_labels(space, d);
            // reconstruct reduced rows from exact basis vectors of this degree
            let mut rows = Vec::new();
            let mut pivots = Vec::new();
            for bv in w.all_basis_vectors() {
                let Some(&first) = bv.coeffs.keys().next() else {
                    continue;
                };
                if space.degree(first) != d {
                    continue;
                }
                let row: Vec<f64> = labels
                    .iter()
                    .map(|l| bv.coeffs.get(l).map_or(0.0, to_f64))
                    .collect();
                let pivot = row.iter().position(|c| *c != 0.0).unwrap();
                rows.push(row);
                pivots.push(pivot);
            }
            slices.insert(d, (labels, rows, pivots, compl));
        }
        QuotientSplitting {
            space: space.clone(),
            slices,
        }
    }

    pub fn quotient_dim(&self, d: i32) -> usize {
        self.slices.get(&d).map_or(0, |s| s.3.len())
    }

    /// Class coordinates of the degree-d part of a dense vector.
    pub fn project(&self, v: &[f64], d: i32) -> Vec<f64> {
        let Some((labels, rows, pivots, compl)) = self.slices.get(&d) else {
            return Vec::new();
        };
        let mut part: Vec<f64> = labels.iter().map(|&l| v[l as usize]).collect();
        for (row, &p) in rows.iter().zip(pivots) {
            let f = part[p];
            if f != 0.0 {
                for (x, y) in part.iter_mut().zip(row) {
                    *x -= f * y;
                }
            }
        }
        compl
            .iter()
            .map(|&l| part[labels.iter().position(|&m| m == l).unwrap()])
            .collect()
    }

    /// The section sigma_d into the complement coordinates.
    pub fn lift(&self, coords: &[f64], d: i32) -> Vec<f64> {
        let mut out = vec![0.0; self.space.dim()];
        let compl = &self.slices[&d].3;
        assert_eq!(coords.len(), compl.len());
        for (&l, &c) in compl.iter().zip(coords) {
            out[l as usize] = c;
        }
        out
    }
}

/// Flow endpoint of q' under the lifted parameter, projected mod W^0.
pub fn ev_map(
    alg: &FloatAlgebra,
    split: &QuotientSplitting,
    q_prime: &[f64],
    v: &[f64],
    step: f64,
) -> Result<Vec<f64>, GaugeError> {
    let x = split.lift(v, -1);
    let flow = gauge_flow(alg, q_prime, &x, 1.0, step);
    if let Some(t) = flow.blew_up {
        return Err(GaugeError::BlowUp(t));
    }
    Ok(split.project(&flow.endpoint, 0))
}

/// The curvature-style map: with X the flow endpoint of q' under the
/// lifted v, evaluates the Maurer-Cartan sum at X - sigma0(Xbar) +
/// sigma0(ybar) and projects mod W^1.
pub fn r_map(
    alg: &FloatAlgebra,
    split: &QuotientSplitting,
    v: &[f64],
    q_prime: &[f64],
    ybar: &[f64],
    step: f64,
) -> Result<Vec<f64>, GaugeError> {
    let xparam = split.lift(v, -1);
    let flow = gauge_flow(alg, q_prime, &xparam, 1.0, step);
    if let Some(t) = flow.blew_up {
        return Err(GaugeError::BlowUp(t));
    }
    let x = flow.endpoint;
    let xbar = split.project(&x, 0);
    let mut arg = x;
    for (a, b) in arg.iter_mut().zip(split.lift(&xbar, 0)) {
        *a -= b;
    }
    for (a, b) in arg.iter_mut().zip(split.lift(ybar, 0)) {
        *a += b;
    }
    Ok(split.project(&alg.mc_residual(&arg), 1))
}

#[derive(Clone, Debug)]
pub struct RectifyResult {
    pub success: bool,
    /// Gauge parameter class in V^{-1}/W^{-1} complement coordinates.
    pub v: Vec<f64>,
    /// Flow endpoint (Q')^{sigma(v)}.
    pub endpoint: Vec<f64>,
    /// Norm of the endpoint's class mod W^0.
    pub ev_norm: f64,
    pub mc_norm: f64,
    /// Per-iteration ev-class norms.
    pub trace: Vec<f64>,
    pub message: String,
}

/// Newton iteration on v -> ev_{Q'}(v), restricted to a complement of
/// ker of the induced differential in degree -1; finite-difference
/// Jacobian, central differences.
pub fn rectify(
    alg: &LInftyAlgebra,
    w: &GradedSubspace,
    q: &crate::graded::GradedVector,
    q_prime: &[f64],
    tol: f64,
    max_iter: usize,
    step: f64,
) -> Result<RectifyResult, GaugeError> {
    let cx = alg.quotient_complex(w, q)?;
    let (h0, _) = cx.cohomology(0);
    if h0 != 0 {
        return Err(GaugeError::ObstructedKernel(h0));
    }
    // complement of ker(mu1bar^Q) in degree -1: unit vectors at the
    // pivot columns of the induced map
    let m = cx
        .maps
        .get(&-1)
        .cloned()
        .unwrap_or_else(|| crate::linalg::Mat::zeros(cx.dim(0), cx.dim(-1)));
    let mut mm = m.clone();
    let pivot_cols = mm.rref();
    let dim_vm1 = cx.dim(-1);
    let dim_v0 = cx.dim(0);
    let r = pivot_cols.len(); // rank of the induced degree -1 map
    let falg = FloatAlgebra::from_exact(alg);
    let split = QuotientSplitting::new(&alg.space, w);
    let embed = |k: &[f64]| -> Vec<f64> {
        let mut full = vec![0.0; dim_vm1];
        for (&col, &c) in pivot_cols.iter().zip(k) {
            full[col] = c;
        }
        full
    };
    let eval_ev = |k: &[f64]| -> Result<Vec<f64>, GaugeError> {
        ev_map(&falg, &split, q_prime, &embed(k), step)
    };
    let n = dim_v0;
    let mut k = vec![0.0; r];
    let mut trace = Vec::new();
    let mut fval = eval_ev(&k)?;
    trace.push(inf_norm(&fval));
    let mut iter = 0;
    while inf_norm(&fval) > tol {
        if iter >= max_iter {
            let (endpoint, mc_norm) = endpoint_of(&falg, &split, q_prime, &embed(&k), step)?;
            return Ok(RectifyResult {
                success: false,
                v: embed(&k),
                ev_norm: inf_norm(&fval),
                mc_norm,
                endpoint,
                trace,
                message: format!("no convergence within {max_iter} iterations"),
            });
        }
        iter += 1;
        // central finite-difference Jacobian (n residuals, r unknowns)
        let h = DEFAULT_FD_H;
        let mut jac = nalgebra::DMatrix::<f64>::zeros(n, r);
        for j in 0..r {
            let mut kp = k.clone();
            kp[j] += h;
            let mut km = k.clone();
            km[j] -= h;
            let fp = eval_ev(&kp)?;
            let fm = eval_ev(&km)?;
            for i in 0..n {
                jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let rhs = nalgebra::DVector::from_iterator(n, fval.iter().map(|c| -c));
        let svd = jac.svd(true, true);
        let delta = svd.solve(&rhs, 1e-12).map_err(|_| GaugeError::BlowUp(0.0))?;
        for (ki, di) in k.iter_mut().zip(delta.iter()) {
            *ki += di;
        }
        fval = eval_ev(&k)?;
        trace.push(inf_norm(&fval));
    }
    let v = embed(&k);
    let (endpoint, mc_norm) = endpoint_of(&falg, &split, q_prime, &v, step)?;
    let ev_norm = inf_norm(&fval);
    let success = ev_norm <= tol && mc_norm <= tol;
    Ok(RectifyResult {
        success,
        v,
        endpoint,
        ev_norm,
        mc_norm,
        trace,
        message: if success {
            "rectified".into()
        } else {
            "ev converged but the endpoint is not Maurer-Cartan within tolerance".into()
        },
    })
}

fn endpoint_of(
    falg: &FloatAlgebra,
    split: &QuotientSplitting,
    q_prime: &[f64],
    v: &[f64],
    step: f64,
) -> Result<(Vec<f64>, f64), GaugeError> {
    let x = split.lift(v, -1);
    let flow = gauge_flow(falg, q_prime, &x, 1.0, step);
    if let Some(t) = flow.blew_up {
        return Err(GaugeError::BlowUp(t));
    }
    let mc = inf_norm(&falg.mc_residual(&flow.endpoint));
    Ok((flow.endpoint, mc))
}
