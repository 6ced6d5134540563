//! Lie algebra data: structure constants, invariant form, designated
//! subalgebra, and the B-dual bases of its orthogonal complement.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::check::{CheckReport, CheckResult};
use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;

/// Default threshold for algebraic identities.
pub const ALGEBRA_TOL: f64 = 1e-12;

/// Structure constants `f^c_{ab}` stored densely, `[X_a, X_b] = Σ_c f^c_{ab} X_c`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    dim: usize,
    data: Vec<f64>,
}

impl StructureConstants {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim * dim],
        }
    }

    pub fn from_raw(dim: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "structure constants have {} entries, expected {}",
                data.len(),
                dim * dim * dim
            )));
        }
        Ok(Self { dim, data })
    }

    #[inline]
    fn idx(&self, a: usize, b: usize, c: usize) -> usize {
        (c * self.dim + a) * self.dim + b
    }

    /// `f^c_{ab}`.
    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.data[self.idx(a, b, c)]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, v: f64) {
        let i = self.idx(a, b, c);
        self.data[i] = v;
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn raw(&self) -> &[f64] {
        &self.data
    }

    /// Bracket of two algebra elements given in basis coordinates.
    pub fn bracket(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let n = self.dim;
        let mut out = DVector::zeros(n);
        for a in 0..n {
            if x[a] == 0.0 {
                continue;
            }
            for b in 0..n {
                if y[b] == 0.0 {
                    continue;
                }
                for c in 0..n {
                    out[c] += x[a] * y[b] * self.get(a, b, c);
                }
            }
        }
        out
    }
}

/// A real Lie algebra with an invariant scalar product and a designated
/// subalgebra (the Lie algebra of the principal isotropy group).
#[derive(Debug, Clone)]
pub struct LieAlgebraSpec {
    pub id: String,
    pub basis_labels: Vec<String>,
    pub structure_constants: StructureConstants,
    pub invariant_form: DMatrix<f64>,
    pub subalgebra_k: Vec<usize>,
    /// Faithful matrix realization `X_a` (the defining representation).
    pub realization: Vec<CMat>,
}

impl LieAlgebraSpec {
    pub fn dim(&self) -> usize {
        self.basis_labels.len()
    }

    /// Build from explicit matrices: structure constants by expanding the
    /// commutators, `B(X,Y) = -form_scale * Re tr(XY)`.
    pub fn from_matrices(
        id: &str,
        labels: &[&str],
        mats: Vec<CMat>,
        form_scale: f64,
    ) -> Result<Self> {
        let dim = mats.len();
        if labels.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} basis matrices",
                labels.len(),
                dim
            )));
        }
        let gram = DMatrix::from_fn(dim, dim, |a, b| trace_inner(&mats[a], &mats[b]));
        let gram_inv = gram
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidArgument("basis matrices are linearly dependent".into()))?;

        let mut f = StructureConstants::zeros(dim);
        for a in 0..dim {
            for b in 0..dim {
                let comm = &mats[a] * &mats[b] - &mats[b] * &mats[a];
                let rhs = DVector::from_fn(dim, |c, _| trace_inner(&mats[c], &comm));
                let coeff = &gram_inv * rhs;
                let mut recon = CMat::zeros(comm.nrows(), comm.ncols());
                for c in 0..dim {
                    recon += &mats[c] * Complex64::new(coeff[c], 0.0);
                }
                let miss = (&recon - &comm).iter().map(|z| z.norm()).fold(0.0, f64::max);
                if miss > 1e-10 {
                    return Err(Error::InvalidArgument(format!(
                        "basis does not close under the bracket (miss {miss:e})"
                    )));
                }
                for c in 0..dim {
                    f.set(a, b, c, clean(coeff[c]));
                }
            }
        }
        let form = DMatrix::from_fn(dim, dim, |a, b| {
            clean(-form_scale * (&mats[a] * &mats[b]).trace().re)
        });
        Ok(Self {
            id: id.to_string(),
            basis_labels: labels.iter().map(|s| s.to_string()).collect(),
            structure_constants: f,
            invariant_form: form,
            subalgebra_k: Vec::new(),
            realization: mats,
        })
    }

    pub fn with_subalgebra(mut self, indices: Vec<usize>) -> Self {
        self.subalgebra_k = indices;
        self
    }

    /// Same algebra with `B -> c B`.
    pub fn with_form_scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.invariant_form *= c;
        out
    }

    /// `B(x, y)` for coordinate vectors.
    pub fn form(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        (x.transpose() * &self.invariant_form * y)[(0, 0)]
    }

    /// Matrix of an algebra element in the defining realization.
    pub fn to_matrix(&self, xi: &DVector<f64>) -> CMat {
        let n = self.realization[0].nrows();
        let mut out = CMat::zeros(n, n);
        for (a, m) in self.realization.iter().enumerate() {
            if xi[a] != 0.0 {
                out += m * Complex64::new(xi[a], 0.0);
            }
        }
        out
    }

    /// Coordinates of a matrix in the span of the realization (least squares
    /// in the trace inner product).
    pub fn coordinates(&self, m: &CMat) -> DVector<f64> {
        let dim = self.dim();
        let gram = DMatrix::from_fn(dim, dim, |a, b| {
            trace_inner(&self.realization[a], &self.realization[b])
        });
        let rhs = DVector::from_fn(dim, |c, _| trace_inner(&self.realization[c], m));
        gram.lu().solve(&rhs).unwrap_or_else(|| DVector::zeros(dim))
    }

    pub fn basis_vector(&self, a: usize) -> DVector<f64> {
        let mut v = DVector::zeros(self.dim());
        v[a] = 1.0;
        v
    }

    // ---- catalog ---------------------------------------------------------

    /// Looks up a catalog algebra: `su2`, `so3`, `u1`, `su3`.
    pub fn catalog(id: &str) -> Result<Self> {
        match id {
            "su2" => Ok(Self::su2()),
            "so3" => Ok(Self::so3()),
            "u1" | "so2" => Ok(Self::u1()),
            "su3" => Ok(Self::su3()),
            other => Err(Error::UnknownGroup(other.to_string())),
        }
    }

    /// su(2) with `X_a = -(i/2) σ_a`, `f^c_{ab} = ε_{abc}` and `B = 1`.
    pub fn su2() -> Self {
        Self::from_matrices("su2", &["X1", "X2", "X3"], su2_basis(), 2.0)
            .expect("su2 catalog entry")
    }

    /// so(3) with `(L_a)_{bc} = -ε_{abc}` and `B = 1`.
    pub fn so3() -> Self {
        let mats = (0..3)
            .map(|a| {
                CMat::from_fn(3, 3, |b, c| Complex64::new(-levi_civita(a, b, c), 0.0))
            })
            .collect();
        Self::from_matrices("so3", &["L1", "L2", "L3"], mats, 0.5).expect("so3 catalog entry")
    }

    /// u(1) ≅ so(2), generator `T = [[0,-1],[1,0]]`, `B(T,T) = 2`.
    pub fn u1() -> Self {
        let t = CMat::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(-1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        Self::from_matrices("u1", &["T"], vec![t], 1.0).expect("u1 catalog entry")
    }

    /// su(3) with `X_a = -(i/2) λ_a` (Gell-Mann) and `B(X,Y) = -tr(XY)`.
    pub fn su3() -> Self {
        let labels = ["X1", "X2", "X3", "X4", "X5", "X6", "X7", "X8"];
        let mats = gell_mann()
            .into_iter()
            .map(|l| l * Complex64::new(0.0, -0.5))
            .collect();
        Self::from_matrices("su3", &labels, mats, 1.0).expect("su3 catalog entry")
    }

    // ---- validation ------------------------------------------------------

    /// Residuals of the defining identities. Errors only on inconsistent
    /// dimensions; violated identities are reported as failed checks.
    pub fn validate(&self) -> Result<CheckReport> {
        self.validate_with_tol(ALGEBRA_TOL)
    }

    pub fn validate_with_tol(&self, tol: f64) -> Result<CheckReport> {
        let n = self.dim();
        if self.structure_constants.dim() != n {
            return Err(Error::DimensionMismatch(format!(
                "structure constants of dimension {} for {} basis labels",
                self.structure_constants.dim(),
                n
            )));
        }
        if self.invariant_form.nrows() != n || self.invariant_form.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "invariant form is {}x{}, expected {n}x{n}",
                self.invariant_form.nrows(),
                self.invariant_form.ncols()
            )));
        }
        if let Some(&k) = self.subalgebra_k.iter().find(|&&k| k >= n) {
            return Err(Error::DimensionMismatch(format!(
                "subalgebra index {k} out of range for dimension {n}"
            )));
        }
        let f = &self.structure_constants;
        let b = &self.invariant_form;
        let mut report = CheckReport::default();

        let mut anti = 0.0f64;
        for a in 0..n {
            for bb in 0..n {
                for c in 0..n {
                    anti = anti.max((f.get(a, bb, c) + f.get(bb, a, c)).abs());
                }
            }
        }
        report.push(CheckResult::below("antisymmetry", anti, tol));

        let mut jacobi = 0.0f64;
        for a in 0..n {
            for bb in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let mut s = 0.0;
                        for e in 0..n {
                            s += f.get(a, bb, e) * f.get(e, c, d)
                                + f.get(bb, c, e) * f.get(e, a, d)
                                + f.get(c, a, e) * f.get(e, bb, d);
                        }
                        jacobi = jacobi.max(s.abs());
                    }
                }
            }
        }
        report.push(CheckResult::below("jacobi", jacobi, tol));

        let sym = (b - b.transpose()).amax();
        report.push(CheckResult::below("form_symmetric", sym, tol));

        let sym_part = (b + b.transpose()) * 0.5;
        let min_eig = sym_part.symmetric_eigenvalues().min();
        report.push(CheckResult::with_pass(
            "form_positive_definite",
            (-min_eig).max(0.0),
            tol,
            min_eig > tol,
        ));

        let mut adinv = 0.0f64;
        for c in 0..n {
            for a in 0..n {
                for bb in 0..n {
                    let mut s = 0.0;
                    for e in 0..n {
                        s += f.get(c, a, e) * b[(e, bb)] + f.get(c, bb, e) * b[(a, e)];
                    }
                    adinv = adinv.max(s.abs());
                }
            }
        }
        report.push(CheckResult::below("form_ad_invariant", adinv, tol));

        let mut closure = 0.0f64;
        for &a in &self.subalgebra_k {
            for &bb in &self.subalgebra_k {
                for c in 0..n {
                    if !self.subalgebra_k.contains(&c) {
                        closure = closure.max(f.get(a, bb, c).abs());
                    }
                }
            }
        }
        report.push(CheckResult::below("subalgebra_closed", closure, tol));
        Ok(report)
    }

    // ---- dual bases ------------------------------------------------------

    /// Bases `{T_α}` and `{T^α}` of the B-orthogonal complement of the
    /// designated subalgebra with `B(T^α, T_β) = δ^α_β`.
    pub fn dual_bases(&self) -> Result<DualBasisPair> {
        let n = self.dim();
        let k = &self.subalgebra_k;
        if k.iter().any(|&i| i >= n) {
            return Err(Error::DimensionMismatch("subalgebra index out of range".into()));
        }
        let complement: Vec<usize> = (0..n).filter(|i| !k.contains(i)).collect();
        if complement.is_empty() {
            return Err(Error::EmptyComplement);
        }
        let b = &self.invariant_form;
        let kmat = DMatrix::from_fn(n, k.len(), |r, c| if r == k[c] { 1.0 } else { 0.0 });
        let lower = if k.is_empty() {
            DMatrix::from_fn(n, complement.len(), |r, c| {
                if r == complement[c] {
                    1.0
                } else {
                    0.0
                }
            })
        } else {
            // P = 1 - K (KᵀBK)⁻¹ KᵀB projects B-orthogonally onto 𝒦⊥.
            let kbk = kmat.transpose() * b * &kmat;
            let kbk_inv = kbk
                .try_inverse()
                .ok_or_else(|| Error::Numerical("B restricted to 𝒦 is singular".into()))?;
            let proj = DMatrix::identity(n, n) - &kmat * kbk_inv * kmat.transpose() * b;
            DMatrix::from_fn(n, complement.len(), |r, c| proj[(r, complement[c])])
        };
        let gram = lower.transpose() * b * &lower;
        let gram_inv = gram
            .try_inverse()
            .ok_or_else(|| Error::Numerical("B restricted to 𝒦⊥ is singular".into()))?;
        let upper = &lower * gram_inv;
        Ok(DualBasisPair { lower, upper })
    }

    /// Residuals of the duality relation and of 𝒦-orthogonality.
    pub fn dual_residuals(&self, pair: &DualBasisPair) -> (f64, f64) {
        let b = &self.invariant_form;
        let m = pair.len();
        let duality = (pair.upper.transpose() * b * &pair.lower - DMatrix::identity(m, m)).amax();
        let mut orth = 0.0f64;
        for &k in &self.subalgebra_k {
            let e = self.basis_vector(k);
            for col in pair.lower.column_iter().chain(pair.upper.column_iter()) {
                orth = orth.max(self.form(&e, &col.into_owned()).abs());
            }
        }
        (duality, orth)
    }
}

/// Dual bases of 𝒦⊥, stored column-wise in algebra coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct DualBasisPair {
    pub lower: DMatrix<f64>,
    pub upper: DMatrix<f64>,
}

impl DualBasisPair {
    pub fn len(&self) -> usize {
        self.lower.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.ncols() == 0
    }

    pub fn t_lower(&self, alpha: usize) -> DVector<f64> {
        self.lower.column(alpha).into_owned()
    }

    pub fn t_upper(&self, alpha: usize) -> DVector<f64> {
        self.upper.column(alpha).into_owned()
    }
}

/// `Re tr(X† Y)`.
pub fn trace_inner(x: &CMat, y: &CMat) -> f64 {
    x.iter().zip(y.iter()).map(|(a, b)| (a.conj() * b).re).sum()
}

pub fn levi_civita(a: usize, b: usize, c: usize) -> f64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

fn clean(x: f64) -> f64 {
    // snap rounding noise on exactly representable catalog values
    let r = x.round();
    if (x - r).abs() < 1e-14 {
        return r;
    }
    for d in [2.0, 4.0, 3.0f64.sqrt(), 2.0 * 3.0f64.sqrt()] {
        let s = (x * d).round() / d;
        if (x - s).abs() < 1e-14 {
            return s;
        }
    }
    x
}

pub fn pauli() -> [CMat; 3] {
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    [
        CMat::from_row_slice(2, 2, &[z, o, o, z]),
        CMat::from_row_slice(2, 2, &[z, -i, i, z]),
        CMat::from_row_slice(2, 2, &[o, z, z, -o]),
    ]
}

pub fn su2_basis() -> Vec<CMat> {
    pauli()
        .into_iter()
        .map(|s| s * Complex64::new(0.0, -0.5))
        .collect()
}

pub fn gell_mann() -> Vec<CMat> {
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let s = Complex64::new(1.0 / 3.0f64.sqrt(), 0.0);
    let m = |v: [Complex64; 9]| CMat::from_row_slice(3, 3, &v);
    vec![
        m([z, o, z, o, z, z, z, z, z]),
        m([z, -i, z, i, z, z, z, z, z]),
        m([o, z, z, z, -o, z, z, z, z]),
        m([z, z, o, z, z, z, o, z, z]),
        m([z, z, -i, z, z, z, i, z, z]),
        m([z, z, z, z, z, o, z, o, z]),
        m([z, z, z, z, z, -i, z, i, z]),
        m([s, z, z, z, s, z, z, z, s * -2.0]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn su2_by_hand() -> LieAlgebraSpec {
        let mut f = StructureConstants::zeros(3);
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    f.set(a, b, c, levi_civita(a, b, c));
                }
            }
        }
        LieAlgebraSpec {
            id: "su2".into(),
            basis_labels: vec!["X1".into(), "X2".into(), "X3".into()],
            structure_constants: f,
            invariant_form: DMatrix::identity(3, 3),
            subalgebra_k: vec![2],
            realization: su2_basis(),
        }
    }

    #[test]
    fn su2_catalog_matches_epsilon_and_identity_form() {
        let cat = LieAlgebraSpec::su2();
        let hand = su2_by_hand();
        assert_eq!(cat.structure_constants, hand.structure_constants);
        assert_eq!(cat.invariant_form, hand.invariant_form);
        assert!(hand.validate().unwrap().passed());
    }

    #[test]
    fn flipped_constant_gives_antisymmetry_residual_two() {
        let mut spec = su2_by_hand();
        spec.structure_constants.set(0, 1, 2, -1.0);
        let report = spec.validate().unwrap();
        let anti = report.get("antisymmetry").unwrap();
        assert_eq!(anti.residual, 2.0);
        assert!(!anti.pass);
        assert!(!report.passed());
    }

    #[test]
    fn su3_from_gell_mann_validates() {
        let spec = LieAlgebraSpec::su3().with_subalgebra(vec![2, 7]);
        let report = spec.validate().unwrap();
        assert!(report.passed(), "{report:?}");
        // B = -tr(XY) on X = -(i/2)λ gives δ/2
        assert!((spec.invariant_form.clone() - DMatrix::identity(8, 8) * 0.5).amax() < 1e-15);
        // f^3_{12} = 1, f^8_{45} = √3/2 in this normalization
        assert!((spec.structure_constants.get(0, 1, 2) - 1.0).abs() < 1e-14);
        assert!((spec.structure_constants.get(3, 4, 7) - 3.0f64.sqrt() / 2.0).abs() < 1e-14);
    }

    #[test]
    fn every_catalog_algebra_validates() {
        for id in ["su2", "so3", "u1", "su3"] {
            let spec = LieAlgebraSpec::catalog(id).unwrap();
            assert!(spec.validate().unwrap().passed(), "{id}");
        }
        assert!(matches!(
            LieAlgebraSpec::catalog("e8"),
            Err(Error::UnknownGroup(_))
        ));
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let mut spec = su2_by_hand();
        spec.structure_constants = StructureConstants::zeros(2);
        assert!(matches!(spec.validate(), Err(Error::DimensionMismatch(_))));
        assert!(StructureConstants::from_raw(3, vec![0.0; 26]).is_err());
    }

    #[test]
    fn su2_dual_bases_are_self_dual() {
        let pair = su2_by_hand().dual_bases().unwrap();
        let expect = DMatrix::from_row_slice(3, 2, &[1.0, 0.0, 0.0, 1.0, 0.0, 0.0]);
        assert_eq!(pair.lower, expect);
        assert_eq!(pair.upper, expect);
    }

    #[test]
    fn u1_dual_basis_is_halved() {
        let spec = LieAlgebraSpec::u1();
        assert_eq!(spec.invariant_form[(0, 0)], 2.0);
        let pair = spec.dual_bases().unwrap();
        assert_eq!(pair.lower[(0, 0)], 1.0);
        assert_eq!(pair.upper[(0, 0)], 0.5);
    }

    #[test]
    fn su3_cartan_complement_is_six_dimensional() {
        let spec = LieAlgebraSpec::su3().with_subalgebra(vec![2, 7]);
        let pair = spec.dual_bases().unwrap();
        assert_eq!(pair.len(), 6);
        let (dual, orth) = spec.dual_residuals(&pair);
        assert!(dual < 1e-14 && orth < 1e-14);
    }

    #[test]
    fn full_subalgebra_is_rejected() {
        let spec = LieAlgebraSpec::su2().with_subalgebra(vec![0, 1, 2]);
        assert_eq!(spec.dual_bases(), Err(Error::EmptyComplement));
    }

    #[test]
    fn dual_bases_with_skewed_form() {
        // a non-diagonal positive form still yields exact duality
        let mut spec = LieAlgebraSpec::so3().with_subalgebra(vec![2]);
        spec.invariant_form = DMatrix::from_row_slice(3, 3, &[2.0, 0.5, 0.3, 0.5, 1.5, 0.2, 0.3, 0.2, 1.0]);
        let pair = spec.dual_bases().unwrap();
        let (dual, orth) = spec.dual_residuals(&pair);
        assert!(dual < 1e-13 && orth < 1e-13, "{dual} {orth}");
    }
}
