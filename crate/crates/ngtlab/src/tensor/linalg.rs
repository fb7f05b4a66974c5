//! Small dense arrays for pointwise tensor components.
//!
//! Dimensions here are chart dimensions (rarely above 7), so everything
//! is a flat `Vec<f64>` with explicit index arithmetic and no attempt at
//! blocking or sparsity.

use crate::error::Error;

/// Square rank-2 component array (matrix), row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    n: usize,
    d: Vec<f64>,
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        Mat { n, d: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn from_vec(n: usize, d: Vec<f64>) -> Self {
        assert_eq!(d.len(), n * n);
        Mat { n, d }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.d[i * self.n + j] = v;
    }

    #[inline]
    pub fn add_assign_at(&mut self, i: usize, j: usize, v: f64) {
        self.d[i * self.n + j] += v;
    }

    pub fn data(&self) -> &[f64] {
        &self.d
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.n, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, rhs: &Mat) -> Mat {
        let n = self.n;
        Mat::from_fn(n, |i, j| (0..n).map(|k| self.get(i, k) * rhs.get(k, j)).sum())
    }

    pub fn scale(&self, s: f64) -> Mat {
        Mat { n: self.n, d: self.d.iter().map(|v| v * s).collect() }
    }

    pub fn add(&self, rhs: &Mat) -> Mat {
        Mat { n: self.n, d: self.d.iter().zip(&rhs.d).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, rhs: &Mat) -> Mat {
        Mat { n: self.n, d: self.d.iter().zip(&rhs.d).map(|(a, b)| a - b).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.d.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    ///
    /// Fails when a pivot vanishes or the condition estimate
    /// `||A||_inf * ||A^-1||_inf` exceeds 1e12.
    pub fn invert(&self) -> Result<Mat, Error> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Mat::identity(n);
        for col in 0..n {
            let mut pivot = col;
            for r in col + 1..n {
                if a.get(r, col).abs() > a.get(pivot, col).abs() {
                    pivot = r;
                }
            }
            let pv = a.get(pivot, col);
            if pv.abs() < 1e-300 {
                return Err(Error::SingularMetric { detail: "zero pivot in matrix inversion".into() });
            }
            if pivot != col {
                for j in 0..n {
                    let (x, y) = (a.get(col, j), a.get(pivot, j));
                    a.set(col, j, y);
                    a.set(pivot, j, x);
                    let (x, y) = (inv.get(col, j), inv.get(pivot, j));
                    inv.set(col, j, y);
                    inv.set(pivot, j, x);
                }
            }
            let scale = 1.0 / a.get(col, col);
            for j in 0..n {
                a.set(col, j, a.get(col, j) * scale);
                inv.set(col, j, inv.get(col, j) * scale);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col);
                if factor == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a.add_assign_at(r, j, -factor * a.get(col, j));
                    inv.add_assign_at(r, j, -factor * inv.get(col, j));
                }
            }
        }
        let cond = self.norm_inf() * inv.norm_inf();
        if !cond.is_finite() || cond > 1e12 {
            return Err(Error::SingularMetric {
                detail: format!("condition estimate {cond:.3e} exceeds 1e12"),
            });
        }
        Ok(inv)
    }

    pub fn det(&self) -> f64 {
        let n = self.n;
        let mut a = self.clone();
        let mut det = 1.0;
        for col in 0..n {
            let mut pivot = col;
            for r in col + 1..n {
                if a.get(r, col).abs() > a.get(pivot, col).abs() {
                    pivot = r;
                }
            }
            if a.get(pivot, col) == 0.0 {
                return 0.0;
            }
            if pivot != col {
                det = -det;
                for j in 0..n {
                    let (x, y) = (a.get(col, j), a.get(pivot, j));
                    a.set(col, j, y);
                    a.set(pivot, j, x);
                }
            }
            let pv = a.get(col, col);
            det *= pv;
            for r in col + 1..n {
                let factor = a.get(r, col) / pv;
                for j in col..n {
                    a.add_assign_at(r, j, -factor * a.get(col, j));
                }
            }
        }
        det
    }

    /// Solves `self * x = b` for each column of `b` via the inverse.
    pub fn solve_mat(&self, b: &Mat) -> Result<Mat, Error> {
        Ok(self.invert()?.matmul(b))
    }
}

/// Rank-3 component array, index order `(i, j, k)` flattened row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct T3 {
    n: usize,
    d: Vec<f64>,
}

impl T3 {
    pub fn zeros(n: usize) -> Self {
        T3 { n, d: vec![0.0; n * n * n] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut t = T3::zeros(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    t.set(i, j, k, f(i, j, k));
                }
            }
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.d[(i * self.n + j) * self.n + k]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        self.d[(i * self.n + j) * self.n + k] = v;
    }

    pub fn data(&self) -> &[f64] {
        &self.d
    }

    pub fn scale(&self, s: f64) -> T3 {
        T3 { n: self.n, d: self.d.iter().map(|v| v * s).collect() }
    }

    pub fn add(&self, rhs: &T3) -> T3 {
        T3 { n: self.n, d: self.d.iter().zip(&rhs.d).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, rhs: &T3) -> T3 {
        T3 { n: self.n, d: self.d.iter().zip(&rhs.d).map(|(a, b)| a - b).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.d.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Reorders arguments: `perm = [p0, p1, p2]` yields
    /// `R(i,j,k) = self(args[p0], args[p1], args[p2])` with
    /// `args = [i, j, k]`.
    pub fn permute(&self, perm: [usize; 3]) -> T3 {
        T3::from_fn(self.n, |i, j, k| {
            let args = [i, j, k];
            self.get(args[perm[0]], args[perm[1]], args[perm[2]])
        })
    }

    /// Substitutes `A`-transformed argument into one slot:
    /// e.g. `slot = 2` turns `S(X,Y,Z)` into `S(X,Y,AZ)`, i.e.
    /// `R_{ijk} = S_{ijm} A^m_k`.
    pub fn apply_endo(&self, slot: usize, a: &Mat) -> T3 {
        let n = self.n;
        T3::from_fn(n, |i, j, k| {
            let r = [i, j, k][slot];
            (0..n)
                .map(|m| {
                    let idx = {
                        let mut idx = [i, j, k];
                        idx[slot] = m;
                        idx
                    };
                    self.get(idx[0], idx[1], idx[2]) * a.get(m, r)
                })
                .sum()
        })
    }

    /// Contracts a vector into one slot, producing a rank-2 array over
    /// the remaining slots in order.
    pub fn contract_vec(&self, slot: usize, v: &[f64]) -> Mat {
        let n = self.n;
        Mat::from_fn(n, |p, q| {
            (0..n)
                .map(|m| {
                    let idx = match slot {
                        0 => [m, p, q],
                        1 => [p, m, q],
                        _ => [p, q, m],
                    };
                    self.get(idx[0], idx[1], idx[2]) * v[m]
                })
                .sum()
        })
    }

    /// Largest deviation from total skew-symmetry over all index pairs.
    pub fn total_skew_residual(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = self.get(i, j, k);
                    worst = worst.max((v + self.get(j, i, k)).abs());
                    worst = worst.max((v + self.get(i, k, j)).abs());
                }
            }
        }
        worst
    }

    /// Deviation from skew-symmetry in the first two slots.
    pub fn skew12_residual(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    worst = worst.max((self.get(i, j, k) + self.get(j, i, k)).abs());
                }
            }
        }
        worst
    }

    /// Deviation from symmetry in the last two slots.
    pub fn sym23_residual(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    worst = worst.max((self.get(i, j, k) - self.get(i, k, j)).abs());
                }
            }
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let a = Mat::from_vec(3, vec![2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 2.0]);
        let inv = a.invert().unwrap();
        let prod = a.matmul(&inv);
        assert!(prod.sub(&Mat::identity(3)).max_abs() < 1e-13);
    }

    #[test]
    fn singular_matrix_rejected() {
        let a = Mat::from_vec(2, vec![1.0, 2.0, 2.0, 4.0]);
        assert!(a.invert().is_err());
    }

    #[test]
    fn det_of_triangular() {
        let a = Mat::from_vec(3, vec![2.0, 5.0, 1.0, 0.0, 3.0, 7.0, 0.0, 0.0, -1.0]);
        assert!((a.det() + 6.0).abs() < 1e-12);
    }

    #[test]
    fn permute_moves_arguments() {
        let t = T3::from_fn(2, |i, j, k| (100 * i + 10 * j + k) as f64);
        // R(i,j,k) = T(k,i,j)
        let r = t.permute([2, 0, 1]);
        assert_eq!(r.get(0, 1, 1), t.get(1, 0, 1));
    }

    #[test]
    fn apply_endo_contracts_expected_slot() {
        let t = T3::from_fn(2, |i, j, k| (i + 2 * j + 4 * k) as f64);
        let a = Mat::from_vec(2, vec![0.0, 1.0, 1.0, 0.0]);
        let r = t.apply_endo(2, &a);
        // R_{ij0} = sum_m T_{ijm} A^m_0 = T_{ij1}
        assert_eq!(r.get(0, 0, 0), t.get(0, 0, 1));
    }
}
