//! Dense exact linear algebra over the rationals.
//!
//! All rank, kernel and membership computations in the crate go through
//! this module, so no tolerance decisions ever enter the exact layer.

use crate::rat::{one, zero, Rat};
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = zero();
                for j in 0..self.cols {
                    if !self.at(i, j).is_zero() && !v[j].is_zero() {
                        acc += self.at(i, j) * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul_mat(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.at(i, k).is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    if !other.at(k, j).is_zero() {
                        let p = self.at(i, k) * other.at(k, j);
                        *out.at_mut(i, j) += p;
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        out
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.at(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(r * self.cols + j, p * self.cols + j);
                }
            }
            let inv = self.at(r, c).clone();
            for j in c..self.cols {
                let v = self.at(r, j).clone() / &inv;
                *self.at_mut(r, j) = v;
            }
            for i in 0..self.rows {
                if i != r && !self.at(i, c).is_zero() {
                    let f = self.at(i, c).clone();
                    for j in c..self.cols {
                        let v = self.at(i, j).clone() - &f * self.at(r, j);
                        *self.at_mut(i, j) = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut basis = Vec::new();
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &c) in pivots.iter().enumerate() {
                v[c] = Some(row);
            }
            v
        };
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut vec = vec![zero(); self.cols];
            vec[free] = one();
            for (row, &pc) in pivots.iter().enumerate() {
                vec[pc] = -m.at(row, free).clone();
            }
            basis.push(vec);
        }
        basis
    }

    /// Solves `self * x = b`; `None` when inconsistent.
    pub fn solve(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, self.cols) = b[i].clone();
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![zero(); self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            x[c] = aug.at(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn det(&self) -> Rat {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let mut det = one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m.at(i, c).is_zero()) else {
                return zero();
            };
            if p != c {
                for j in 0..m.cols {
                    m.data.swap(c * m.cols + j, p * m.cols + j);
                }
                det = -det;
            }
            det *= m.at(c, c);
            let inv = m.at(c, c).clone();
            for i in (c + 1)..m.rows {
                if !m.at(i, c).is_zero() {
                    let f = m.at(i, c).clone() / &inv;
                    for j in c..m.cols {
                        let v = m.at(i, j).clone() - &f * m.at(c, j);
                        *m.at_mut(i, j) = v;
                    }
                }
            }
        }
        det
    }
}

/// Row-span membership: is `v` a linear combination of `rows`?
pub fn in_span(rows: &[Vec<Rat>], v: &[Rat]) -> bool {
    if v.iter().all(|x| x.is_zero()) {
        return true;
    }
    if rows.is_empty() {
        return false;
    }
    let m = Mat::from_rows(rows.to_vec());
    let rank = m.rank();
    let mut rows2 = rows.to_vec();
    rows2.push(v.to_vec());
    Mat::from_rows(rows2).rank() == rank
}

/// Row-reduces the spanning set, dropping zero rows; the result is in
/// reduced row echelon form under the ambient coordinate order.
pub fn reduced_basis(rows: &[Vec<Rat>]) -> (Vec<Vec<Rat>>, Vec<usize>) {
    if rows.is_empty() {
        return (Vec::new(), Vec::new());
    }
    let mut m = Mat::from_rows(rows.to_vec());
    let pivots = m.rref();
    let basis = (0..pivots.len()).map(|i| m.row(i).to_vec()).collect();
    (basis, pivots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, ratq};

    #[test]
    fn rref_rank_kernel() {
        let m = Mat::from_rows(vec![
            vec![rat(1), rat(2), rat(3)],
            vec![rat(2), rat(4), rat(6)],
            vec![rat(1), rat(0), rat(1)],
        ]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_exact() {
        let m = Mat::from_rows(vec![vec![rat(2), rat(1)], vec![rat(1), rat(3)]]);
        let x = m.solve(&[rat(5), rat(10)]).unwrap();
        assert_eq!(x, vec![rat(1), rat(3)]);
        let singular = Mat::from_rows(vec![vec![rat(1), rat(1)], vec![rat(1), rat(1)]]);
        assert!(singular.solve(&[rat(0), rat(1)]).is_none());
    }

    #[test]
    fn det_values() {
        let m = Mat::from_rows(vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]]);
        assert_eq!(m.det(), rat(-1));
        let m = Mat::from_rows(vec![vec![ratq(1, 2), rat(0)], vec![rat(7), rat(4)]]);
        assert_eq!(m.det(), rat(2));
    }

    #[test]
    fn span_membership() {
        let rows = vec![vec![rat(1), rat(0), rat(1)], vec![rat(0), rat(1), rat(1)]];
        assert!(in_span(&rows, &[rat(2), rat(3), rat(5)]));
        assert!(!in_span(&rows, &[rat(0), rat(0), rat(1)]));
    }
}
