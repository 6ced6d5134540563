use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Square matrix with `a[i][j] = 0` for `|i - j| > kd`, stored as full rows
/// of width `2 kd + 1` so that both triangles are kept and exact symmetry
/// can be checked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandMatrix {
    n: usize,
    kd: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kd: usize) -> Self {
        let kd = kd.min(n.saturating_sub(1));
        Self {
            n,
            kd,
            data: vec![0.0; n * (2 * kd + 1)],
        }
    }

    pub fn from_dense(m: &DMatrix<f64>) -> Self {
        let n = m.nrows();
        let mut kd = 0;
        for j in 0..n {
            for i in 0..n {
                if m[(i, j)] != 0.0 {
                    kd = kd.max(i.abs_diff(j));
                }
            }
        }
        let mut b = Self::zeros(n, kd);
        for j in 0..n {
            for i in j.saturating_sub(kd)..(j + kd + 1).min(n) {
                b.set(i, j, m[(i, j)]);
            }
        }
        b
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Half bandwidth.
    pub fn kd(&self) -> usize {
        self.kd
    }

    fn idx(&self, i: usize, j: usize) -> Option<usize> {
        if i.abs_diff(j) > self.kd {
            None
        } else {
            Some(i * (2 * self.kd + 1) + (j + self.kd - i))
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.idx(i, j).map_or(0.0, |k| self.data[k])
    }

    /// Panics outside the band.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j).expect("entry outside the band");
        self.data[k] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j).expect("entry outside the band");
        self.data[k] += v;
    }

    /// Sets `(i, j)` and `(j, i)` to the same value.
    pub fn set_sym(&mut self, i: usize, j: usize, v: f64) {
        self.set(i, j, v);
        self.set(j, i, v);
    }

    /// Exact (bitwise) symmetry.
    pub fn is_symmetric(&self) -> bool {
        self.asymmetry() == 0.0
    }

    /// `max |a_ij - a_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in (i + 1)..(i + self.kd + 1).min(self.n) {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kd);
                let hi = (i + self.kd + 1).min(self.n);
                (lo..hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    pub fn mul_dvec(&self, x: &DVector<f64>) -> DVector<f64> {
        DVector::from_vec(self.mul_vec(x.as_slice()))
    }

    /// `max_i Σ_j |a_ij|`, which bounds the 2-norm of a symmetric matrix.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kd);
                let hi = (i + self.kd + 1).min(self.n);
                (lo..hi).map(|j| self.get(i, j).abs()).sum::<f64>()
            })
            .fold(0.0, f64::max)
    }

    /// Gershgorin interval `[lo, hi]` containing every eigenvalue.
    pub fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.n {
            let a = self.get(i, i);
            let r: f64 = (i.saturating_sub(self.kd)..(i + self.kd + 1).min(self.n))
                .filter(|&j| j != i)
                .map(|j| self.get(i, j).abs())
                .sum();
            lo = lo.min(a - r);
            hi = hi.max(a + r);
        }
        (lo, hi)
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    /// Diagonal and first off-diagonal; `None` unless `kd ≤ 1`.
    pub fn tridiagonal(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        if self.kd > 1 {
            return None;
        }
        let d = (0..self.n).map(|i| self.get(i, i)).collect();
        let e = (0..self.n.saturating_sub(1)).map(|i| self.get(i + 1, i)).collect();
        Some((d, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_round_trip() {
        let m = DMatrix::from_fn(6, 6, |i, j| if i.abs_diff(j) <= 2 { (i * 7 + j) as f64 } else { 0.0 });
        let b = BandMatrix::from_dense(&m);
        assert_eq!(b.kd(), 2);
        assert_eq!(b.to_dense(), m);
        let x: Vec<f64> = (0..6).map(|i| i as f64 - 2.0).collect();
        let y = &m * DVector::from_vec(x.clone());
        assert_eq!(b.mul_vec(&x), y.as_slice());
        assert!(!b.is_symmetric());
    }

    #[test]
    fn symmetric_setter() {
        let mut b = BandMatrix::zeros(4, 1);
        b.set_sym(0, 1, 3.0);
        b.set(2, 2, -1.0);
        assert!(b.is_symmetric());
        assert_eq!(b.gershgorin(), (-3.0, 3.0));
        assert_eq!(b.tridiagonal().unwrap().1, vec![3.0, 0.0, 0.0]);
    }
}
