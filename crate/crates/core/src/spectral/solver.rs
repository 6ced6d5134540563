//! Top-of-spectrum eigenpairs of a symmetric band matrix.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::band::BandMatrix;
use super::factor::{BandCholesky, BandLu};
use super::tridiag::{band_to_tridiagonal, tridiagonal_eigenvalues};
use crate::error::{Error, Result};

/// Largest size handled by full tridiagonal reduction under [`Method::Auto`].
pub const DIRECT_LIMIT: usize = 4000;

const INVERSE_STEPS: usize = 8;
const LANCZOS_MAX_STEPS: usize = 600;
const LANCZOS_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Auto,
    /// Band → tridiagonal reduction, implicit QL, inverse iteration.
    Tridiagonal,
    /// Shift-invert Lanczos with full reorthogonalization.
    ShiftInvertLanczos,
}

impl Method {
    pub fn resolve(self, n: usize) -> Method {
        match self {
            Method::Auto if n <= DIRECT_LIMIT => Method::Tridiagonal,
            Method::Auto => Method::ShiftInvertLanczos,
            m => m,
        }
    }
}

/// `k` largest eigenpairs, eigenvalues descending, vectors orthonormal in
/// the Euclidean inner product.
#[derive(Debug, Clone)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub method: Method,
}

/// Eigenvalues only, all of them, descending.
pub fn all_eigenvalues(a: &BandMatrix) -> Result<Vec<f64>> {
    let (d, e) = band_to_tridiagonal(a);
    let mut ev = tridiagonal_eigenvalues(&d, &e)?;
    ev.sort_by(|x, y| y.total_cmp(x));
    Ok(ev)
}

pub fn top_eigenpairs(a: &BandMatrix, k: usize, method: Method) -> Result<Eigenpairs> {
    let n = a.n();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!(
            "requested {k} eigenvalues of a {n}x{n} matrix"
        )));
    }
    let asym = a.asymmetry();
    if asym != 0.0 {
        return Err(Error::NonHermitian(asym));
    }
    match method.resolve(n) {
        Method::Tridiagonal => {
            let mut values = all_eigenvalues(a)?;
            values.truncate(k);
            let vectors = inverse_iteration(a, &values);
            Ok(Eigenpairs {
                values,
                vectors,
                method: Method::Tridiagonal,
            })
        }
        _ => lanczos(a, k),
    }
}

fn start_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    normalize(&mut v);
    v
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = dot(v, v).sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

fn orthogonalize(v: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for b in basis {
            let c = dot(v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
    }
}

/// Euclidean residual `|A v - lambda v|`.
pub fn residual(a: &BandMatrix, lambda: f64, v: &[f64]) -> f64 {
    a.mul_vec(v)
        .iter()
        .zip(v)
        .map(|(av, x)| (av - lambda * x).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Eigenvectors for known eigenvalues. Each vector is projected against the
/// ones already found, which keeps clustered pairs orthogonal.
fn inverse_iteration(a: &BandMatrix, values: &[f64]) -> Vec<Vec<f64>> {
    let n = a.n();
    let norm = a.norm_inf().max(f64::MIN_POSITIVE);
    let target = 1e-12 * norm;
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(values.len());
    for (i, &lambda) in values.iter().enumerate() {
        let lu = BandLu::factor(a, lambda);
        let mut v = start_vector(n, i as u64);
        orthogonalize(&mut v, &vectors);
        normalize(&mut v);
        for _ in 0..INVERSE_STEPS {
            lu.solve_in_place(&mut v);
            orthogonalize(&mut v, &vectors);
            normalize(&mut v);
            if residual(a, lambda, &v) < target {
                break;
            }
        }
        vectors.push(v);
    }
    vectors
}

fn lanczos(a: &BandMatrix, k: usize) -> Result<Eigenpairs> {
    let n = a.n();
    let (_, hi) = a.gershgorin();
    let norm = a.norm_inf().max(f64::MIN_POSITIVE);
    let sigma = hi + 1e-3 * norm.min(1.0 + hi.abs());
    let chol = BandCholesky::factor_shifted_negative(a, sigma)?;

    let max_steps = LANCZOS_MAX_STEPS.min(n);
    let mut q: Vec<Vec<f64>> = vec![start_vector(n, 7)];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut ritz: Option<(Vec<f64>, DMatrix<f64>)> = None;

    for j in 0..max_steps {
        let mut w = q[j].clone();
        chol.solve_in_place(&mut w);
        let aj = dot(&w, &q[j]);
        alpha.push(aj);
        orthogonalize(&mut w, &q);
        let bj = normalize(&mut w);
        let m = j + 1;
        let exhausted = bj <= 1e-14 * aj.abs() || m == max_steps;
        if m >= k && (m % 10 == 0 || exhausted) {
            let mut t = DMatrix::zeros(m, m);
            for i in 0..m {
                t[(i, i)] = alpha[i];
                if i + 1 < m {
                    t[(i, i + 1)] = beta[i];
                    t[(i + 1, i)] = beta[i];
                }
            }
            let eig = SymmetricEigen::new(t);
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by(|&x, &y| eig.eigenvalues[y].total_cmp(&eig.eigenvalues[x]));
            let top = &order[..k];
            let converged = top.iter().all(|&i| {
                let theta = eig.eigenvalues[i];
                (bj * eig.eigenvectors[(m - 1, i)]).abs() <= LANCZOS_TOL * theta.abs()
            });
            if converged || exhausted {
                let thetas = top.iter().map(|&i| eig.eigenvalues[i]).collect();
                let ys = DMatrix::from_fn(m, k, |r, c| eig.eigenvectors[(r, top[c])]);
                ritz = Some((thetas, ys));
                if !converged {
                    log::warn!("Lanczos stopped after {m} steps before full convergence");
                }
                break;
            }
        }
        beta.push(bj);
        q.push(w);
    }

    let (thetas, ys) = ritz.ok_or_else(|| Error::Numerical("Lanczos produced no Ritz pairs".into()))?;
    let mut values = Vec::with_capacity(k);
    let mut vectors = Vec::with_capacity(k);
    for (c, theta) in thetas.iter().enumerate() {
        if *theta <= 0.0 {
            return Err(Error::Numerical("non-positive Ritz value under shift-invert".into()));
        }
        let mut v = vec![0.0; n];
        for (r, qr) in q.iter().enumerate().take(ys.nrows()) {
            let y = ys[(r, c)];
            v.iter_mut().zip(qr).for_each(|(x, qi)| *x += y * qi);
        }
        normalize(&mut v);
        values.push(sigma - 1.0 / theta);
        vectors.push(v);
    }
    Ok(Eigenpairs {
        values,
        vectors,
        method: Method::ShiftInvertLanczos,
    })
}
