//! Multivariate polynomials with complex coefficients, used for the
//! Euclidean test-function family `p(y) e^{-a|y|²}`.

use num_complex::Complex64;
use rand::Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    nvars: usize,
    terms: Vec<(Vec<u32>, Complex64)>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, c: Complex64) -> Self {
        Self {
            nvars,
            terms: vec![(vec![0; nvars], c)],
        }
    }

    pub fn from_terms(nvars: usize, terms: Vec<(Vec<u32>, Complex64)>) -> Self {
        assert!(terms.iter().all(|(e, _)| e.len() == nvars));
        let mut p = Self { nvars, terms };
        p.normalize();
        p
    }

    /// `(y₁ + i y₂)^m` expanded binomially.
    pub fn holomorphic_power(nvars: usize, m: u32) -> Self {
        let mut terms = Vec::new();
        for k in 0..=m {
            let binom = binomial(m, k);
            // y1^(m-k) (i y2)^k
            let ik = Complex64::new(0.0, 1.0).powu(k);
            let mut e = vec![0; nvars];
            e[0] = m - k;
            e[1] = k;
            terms.push((e, ik * binom));
        }
        Self::from_terms(nvars, terms)
    }

    /// Random coefficients in the unit box for all monomials of total
    /// degree at most `degree`.
    pub fn random<R: Rng>(nvars: usize, degree: u32, rng: &mut R) -> Self {
        let mut terms = Vec::new();
        for e in monomials(nvars, degree) {
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            terms.push((e, c));
        }
        Self::from_terms(nvars, terms)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, y: &[f64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut m = 1.0;
            for (yi, &k) in y.iter().zip(e) {
                m *= yi.powi(k as i32);
            }
            acc += c * m;
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[var] > 0)
            .map(|(e, c)| {
                let mut e2 = e.clone();
                e2[var] -= 1;
                (e2, c * e[var] as f64)
            })
            .collect();
        Self::from_terms(self.nvars, terms)
    }

    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero(self.nvars);
        for v in 0..self.nvars {
            out = out.add(&self.derivative(v).derivative(v));
        }
        out
    }

    /// `y · ∇p`: each monomial scaled by its total degree.
    pub fn euler(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.clone(), c * e.iter().sum::<u32>() as f64))
            .collect();
        Self::from_terms(self.nvars, terms)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self::from_terms(self.nvars, terms)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::from_terms(
            self.nvars,
            self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        )
    }

    /// Complex conjugate coefficients.
    pub fn conj(&self) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.conj())).collect(),
        }
    }

    fn normalize(&mut self) {
        self.terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Vec<u32>, Complex64)> = Vec::with_capacity(self.terms.len());
        for (e, c) in self.terms.drain(..) {
            match merged.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => merged.push((e, c)),
            }
        }
        merged.retain(|(_, c)| c.norm() != 0.0);
        self.terms = merged;
    }
}

fn monomials(nvars: usize, degree: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, degree, &mut cur, &mut out);
    out
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
