//! Symmetric band → tridiagonal reduction and tridiagonal QL.

use super::band::BandMatrix;
use crate::error::{Error, Result};

/// Lower half of a symmetric band matrix with one extra diagonal for the
/// bulge created during reduction.
struct Workspace {
    n: usize,
    w: usize,
    data: Vec<f64>,
}

impl Workspace {
    fn from_band(a: &BandMatrix) -> Self {
        let n = a.n();
        let w = a.kd() + 1;
        let mut data = vec![0.0; n * (w + 1)];
        for i in 0..n {
            for d in 0..=a.kd().min(i) {
                data[i * (w + 1) + d] = a.get(i, i - d);
            }
        }
        Self { n, w, data }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        let d = i - j;
        if d > self.w {
            0.0
        } else {
            self.data[i * (self.w + 1) + d]
        }
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        let d = i - j;
        debug_assert!(d <= self.w || v == 0.0, "fill outside the work band");
        if d <= self.w {
            self.data[i * (self.w + 1) + d] = v;
        }
    }

    /// Similarity rotation in the plane `(row - 1, row)` that zeroes
    /// `A[row][col]`.
    fn zero_with_rotation(&mut self, row: usize, col: usize) {
        let p = row - 1;
        let q = row;
        let a = self.get(p, col);
        let b = self.get(q, col);
        if b == 0.0 {
            return;
        }
        let r = a.hypot(b);
        let (c, s) = (a / r, b / r);
        let lo = p.saturating_sub(self.w);
        let hi = (q + self.w).min(self.n - 1);
        for i in lo..=hi {
            if i == p || i == q {
                continue;
            }
            let x = self.get(p, i);
            let y = self.get(q, i);
            if x == 0.0 && y == 0.0 {
                continue;
            }
            self.set(p, i, c * x + s * y);
            self.set(q, i, -s * x + c * y);
        }
        let (app, apq, aqq) = (self.get(p, p), self.get(p, q), self.get(q, q));
        self.set(p, p, c * c * app + 2.0 * c * s * apq + s * s * aqq);
        self.set(q, q, s * s * app - 2.0 * c * s * apq + c * c * aqq);
        self.set(p, q, c * s * (aqq - app) + (c * c - s * s) * apq);
        self.set(q, col, 0.0);
    }
}

/// Orthogonally similar tridiagonal form of a symmetric band matrix by
/// Givens rotations with bulge chasing. Returns the diagonal and the
/// off-diagonal.
pub fn band_to_tridiagonal(a: &BandMatrix) -> (Vec<f64>, Vec<f64>) {
    if let Some(t) = a.tridiagonal() {
        return t;
    }
    let n = a.n();
    let kd = a.kd();
    let mut ws = Workspace::from_band(a);
    for j in 0..n.saturating_sub(2) {
        for k in (2..=kd.min(n - 1 - j)).rev() {
            let r = j + k;
            ws.zero_with_rotation(r, j);
            let mut row = r + kd;
            let mut col = r - 1;
            while row < n {
                ws.zero_with_rotation(row, col);
                col = row - 1;
                row += kd;
            }
        }
    }
    let d = (0..n).map(|i| ws.get(i, i)).collect();
    let e = (0..n.saturating_sub(1)).map(|i| ws.get(i + 1, i)).collect();
    (d, e)
}

/// All eigenvalues of the symmetric tridiagonal matrix with diagonal `d`
/// and off-diagonal `e` by implicit QL with Wilkinson-type shifts.
/// Unsorted.
pub fn tridiagonal_eigenvalues(d: &[f64], e: &[f64]) -> Result<Vec<f64>> {
    let n = d.len();
    let mut d = d.to_vec();
    let mut e: Vec<f64> = e.iter().cloned().chain(std::iter::once(0.0)).collect();
    e.truncate(n);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Numerical("tridiagonal QL did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut deflated = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(|a, b| a.total_cmp(b));
        v
    }

    fn random_band(n: usize, kd: usize, seed: u64) -> BandMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = BandMatrix::zeros(n, kd);
        for i in 0..n {
            for j in i..(i + kd + 1).min(n) {
                m.set_sym(i, j, rng.gen_range(-1.0..1.0));
            }
        }
        m
    }

    #[test]
    fn ql_matches_dense_solver() {
        let a = random_band(40, 1, 1);
        let (d, e) = a.tridiagonal().unwrap();
        let ours = sorted(tridiagonal_eigenvalues(&d, &e).unwrap());
        let dense = sorted(a.to_dense().symmetric_eigenvalues().as_slice().to_vec());
        for (x, y) in ours.iter().zip(&dense) {
            assert!((x - y).abs() < 1e-13, "{x} {y}");
        }
    }

    #[test]
    fn free_laplacian_eigenvalues() {
        let n = 50;
        let d = vec![-2.0; n];
        let e = vec![1.0; n - 1];
        let ev = sorted(tridiagonal_eigenvalues(&d, &e).unwrap());
        for (k, v) in ev.iter().rev().enumerate() {
            let theta = (k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64;
            assert!((v - (-4.0 * (theta / 2.0).sin().powi(2))).abs() < 1e-13);
        }
    }

    #[test]
    fn band_reduction_preserves_spectrum() {
        for (n, kd) in [(30, 2), (41, 3), (25, 7), (12, 11), (3, 2)] {
            let a = random_band(n, kd, n as u64 * 31 + kd as u64);
            let (d, e) = band_to_tridiagonal(&a);
            let ours = sorted(tridiagonal_eigenvalues(&d, &e).unwrap());
            let dense = sorted(a.to_dense().symmetric_eigenvalues().as_slice().to_vec());
            for (x, y) in ours.iter().zip(&dense) {
                assert!((x - y).abs() < 1e-12, "n={n} kd={kd}: {x} {y}");
            }
        }
    }

    #[test]
    fn trivial_sizes() {
        assert_eq!(tridiagonal_eigenvalues(&[3.5], &[]).unwrap(), vec![3.5]);
        let m = BandMatrix::from_dense(&DMatrix::from_element(1, 1, -2.0));
        assert_eq!(band_to_tridiagonal(&m), (vec![-2.0], vec![]));
    }
}
