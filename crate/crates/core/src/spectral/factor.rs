//! Banded LU with partial pivoting and banded Cholesky.

use super::band::BandMatrix;
use crate::error::{Error, Result};

/// LU factors of `A - shift I` for a symmetric band `A`. Row interchanges
/// widen the upper band to `2 kd`.
pub struct BandLu {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<f64>,
    piv: Vec<usize>,
}

impl BandLu {
    pub fn factor(a: &BandMatrix, shift: f64) -> Self {
        let n = a.n();
        let kl = a.kd();
        let ku = 2 * a.kd();
        let width = kl + ku + 1;
        let mut lu = Self {
            n,
            kl,
            ku,
            data: vec![0.0; n * width],
            piv: vec![0; n],
        };
        for i in 0..n {
            let lo = i.saturating_sub(kl);
            let hi = (i + kl).min(n - 1);
            for j in lo..=hi {
                let v = a.get(i, j) - if i == j { shift } else { 0.0 };
                *lu.at(i, j) = v;
            }
        }
        let tiny = f64::EPSILON * a.norm_inf().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = lu.get(k, k).abs();
            for i in k + 1..=last {
                let v = lu.get(i, k).abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            lu.piv[k] = p;
            let right = (k + ku).min(n - 1);
            if p != k {
                for j in k..=right {
                    let t = lu.get(k, j);
                    *lu.at(k, j) = lu.get(p, j);
                    *lu.at(p, j) = t;
                }
            }
            if lu.get(k, k).abs() < tiny {
                *lu.at(k, k) = tiny;
            }
            let pivot = lu.get(k, k);
            for i in k + 1..=last {
                let l = lu.get(i, k) / pivot;
                *lu.at(i, k) = l;
                if l != 0.0 {
                    for j in k + 1..=right {
                        let u = lu.get(k, j);
                        *lu.at(i, j) -= l * u;
                    }
                }
            }
        }
        lu
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        i * (self.kl + self.ku + 1) + (j + self.kl - i)
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        self.data[self.idx(i, j)]
    }

    #[inline]
    fn at(&mut self, i: usize, j: usize) -> &mut f64 {
        let k = self.idx(i, j);
        &mut self.data[k]
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        for k in 0..n {
            b.swap(k, self.piv[k]);
            let bk = b[k];
            if bk != 0.0 {
                for i in k + 1..=(k + self.kl).min(n - 1) {
                    b[i] -= self.get(i, k) * bk;
                }
            }
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for j in i + 1..=(i + self.ku).min(n - 1) {
                s -= self.get(i, j) * b[j];
            }
            b[i] = s / self.get(i, i);
        }
    }
}

/// Cholesky factor `L` of a symmetric positive definite band matrix
/// `shift I - A`.
pub struct BandCholesky {
    n: usize,
    kd: usize,
    data: Vec<f64>,
}

impl BandCholesky {
    pub fn factor_shifted_negative(a: &BandMatrix, shift: f64) -> Result<Self> {
        let n = a.n();
        let kd = a.kd();
        let mut c = Self {
            n,
            kd,
            data: vec![0.0; n * (kd + 1)],
        };
        for j in 0..n {
            let mut diag = shift - a.get(j, j);
            for k in j.saturating_sub(kd)..j {
                diag -= c.get(j, k).powi(2);
            }
            if diag <= 0.0 || !diag.is_finite() {
                return Err(Error::Numerical(format!(
                    "shifted matrix is not positive definite at row {j}"
                )));
            }
            let ljj = diag.sqrt();
            c.set(j, j, ljj);
            for i in j + 1..=(j + kd).min(n - 1) {
                let mut s = -a.get(i, j);
                for k in i.saturating_sub(kd)..j {
                    s -= c.get(i, k) * c.get(j, k);
                }
                c.set(i, j, s / ljj);
            }
        }
        Ok(c)
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * (self.kd + 1) + (i - j)]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * (self.kd + 1) + (i - j)] = v;
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            let mut s = b[i];
            for k in i.saturating_sub(self.kd)..i {
                s -= self.get(i, k) * b[k];
            }
            b[i] = s / self.get(i, i);
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in i + 1..=(i + self.kd).min(n - 1) {
                s -= self.get(k, i) * b[k];
            }
            b[i] = s / self.get(i, i);
        }
    }
}
