//! Catalog polar actions: Killing fields, section charts, the inertia
//! matrices `b_{αβ}`, `b^{αβ}` and the orbit density `δ`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::check::{CheckReport, CheckResult};
use crate::error::{Error, Result};
use crate::lie::{exp_map, CMat, DualBasisPair, GroupId, LieAlgebraSpec};

/// A point of the ambient manifold: an `n×1` column on Euclidean space or
/// an `n×n` matrix on a group manifold.
pub type Point = CMat;

/// Threshold for the polar-sanity residuals.
pub const POLAR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScenarioId {
    #[serde(rename = "u1-plane")]
    U1Plane,
    #[serde(rename = "so3-space")]
    So3Space,
    #[serde(rename = "su2-conj")]
    Su2Conj,
    #[serde(rename = "su3-conj")]
    Su3Conj,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 4] = [
        ScenarioId::U1Plane,
        ScenarioId::So3Space,
        ScenarioId::Su2Conj,
        ScenarioId::Su3Conj,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioId::U1Plane => "u1-plane",
            ScenarioId::So3Space => "so3-space",
            ScenarioId::Su2Conj => "su2-conj",
            ScenarioId::Su3Conj => "su3-conj",
        }
    }
}

impl FromStr for ScenarioId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownScenario(s.to_string()))
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Manifold {
    Euclidean { dim: usize },
    /// Bi-invariant metric `η(V, W) = -κ Re tr((y⁻¹V)(y⁻¹W))`.
    GroupManifold { group: GroupId, metric_scale: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    LinearRotation,
    Conjugation,
}

/// Legal open domain of the section chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SectionDomain {
    /// `(0, ∞)`
    Ray,
    /// `(0, 2π)`
    Interval,
    /// `x₁ > 0`, `√3 x₂ > x₁`, `x₁ + √3 x₂ < 4π`
    Alcove,
}

impl SectionDomain {
    pub fn dim(self) -> usize {
        match self {
            SectionDomain::Alcove => 2,
            _ => 1,
        }
    }

    /// Coordinate bounds of the bounding box of the domain.
    pub fn bounds(self) -> (f64, f64) {
        match self {
            SectionDomain::Ray => (0.0, f64::INFINITY),
            SectionDomain::Interval => (0.0, 2.0 * PI),
            SectionDomain::Alcove => (0.0, 4.0 * PI / 3f64.sqrt()),
        }
    }

    /// Euclidean coordinate distance to the boundary; `≤ 0` outside.
    pub fn boundary_distance(self, x: &[f64]) -> f64 {
        match self {
            SectionDomain::Ray => x[0],
            SectionDomain::Interval => x[0].min(2.0 * PI - x[0]),
            SectionDomain::Alcove => {
                let s3 = 3f64.sqrt();
                x[0].min((s3 * x[1] - x[0]) / 2.0)
                    .min((4.0 * PI - x[0] - s3 * x[1]) / 2.0)
            }
        }
    }
}

/// A cataloged polar action together with its section chart.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub id: ScenarioId,
    pub group: GroupId,
    /// Algebra with `B` and the principal isotropy `𝒦` as `subalgebra_k`.
    pub algebra: LieAlgebraSpec,
    pub manifold: Manifold,
    pub action: Action,
    pub section: SectionDomain,
    /// Algebra basis indices whose exponentials generate the section.
    section_axes: Vec<usize>,
}

/// Inertia data at a section point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InertiaSample {
    pub x: Vec<f64>,
    pub b_lower: DMatrix<f64>,
    /// `B(T^α, 𝒥⁻¹ T^β)`.
    pub b_upper: DMatrix<f64>,
    pub delta: f64,
}

impl InertiaSample {
    /// `max |b^{αγ} b_{γβ} - δ^α_β|`.
    pub fn inverse_residual(&self) -> f64 {
        let m = self.b_lower.nrows();
        (&self.b_upper * &self.b_lower - DMatrix::identity(m, m)).amax()
    }

    /// Difference between the pairing route and the plain matrix inverse.
    pub fn route_residual(&self) -> f64 {
        match self.b_lower.clone().try_inverse() {
            Some(inv) => (inv - &self.b_upper).amax(),
            None => f64::INFINITY,
        }
    }

    /// Condition number of `b_{αβ}` (ratio of extreme eigenvalues).
    pub fn condition(&self) -> f64 {
        let ev = self.b_lower.clone().symmetric_eigenvalues();
        let max = ev.iter().cloned().fold(f64::MIN, f64::max);
        let min = ev.iter().cloned().fold(f64::MAX, f64::min);
        max / min
    }
}

impl Scenario {
    pub fn catalog(id: ScenarioId) -> Self {
        match id {
            ScenarioId::U1Plane => Self {
                id,
                group: GroupId::U1,
                algebra: LieAlgebraSpec::u1(),
                manifold: Manifold::Euclidean { dim: 2 },
                action: Action::LinearRotation,
                section: SectionDomain::Ray,
                section_axes: vec![],
            },
            ScenarioId::So3Space => Self {
                id,
                group: GroupId::So3,
                algebra: LieAlgebraSpec::so3().with_subalgebra(vec![2]),
                manifold: Manifold::Euclidean { dim: 3 },
                action: Action::LinearRotation,
                section: SectionDomain::Ray,
                section_axes: vec![],
            },
            ScenarioId::Su2Conj => Self {
                id,
                group: GroupId::Su2,
                algebra: LieAlgebraSpec::su2().with_subalgebra(vec![2]),
                manifold: Manifold::GroupManifold {
                    group: GroupId::Su2,
                    metric_scale: 2.0,
                },
                action: Action::Conjugation,
                section: SectionDomain::Interval,
                section_axes: vec![2],
            },
            ScenarioId::Su3Conj => Self {
                id,
                group: GroupId::Su3,
                algebra: LieAlgebraSpec::su3().with_subalgebra(vec![2, 7]),
                manifold: Manifold::GroupManifold {
                    group: GroupId::Su3,
                    metric_scale: 1.0,
                },
                action: Action::Conjugation,
                section: SectionDomain::Alcove,
                section_axes: vec![2, 7],
            },
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        Ok(Self::catalog(name.parse()?))
    }

    /// `B -> cB` on the algebra. The ambient metric is part of the
    /// manifold and does not change.
    pub fn with_form_scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.algebra = self.algebra.with_form_scaled(c);
        out
    }

    /// Replaces the designated isotropy (used to build broken fixtures).
    pub fn with_isotropy(&self, k: Vec<usize>) -> Self {
        let mut out = self.clone();
        out.algebra = out.algebra.clone().with_subalgebra(k);
        out
    }

    pub fn section_dim(&self) -> usize {
        self.section.dim()
    }

    pub fn boundary_distance(&self, x: &[f64]) -> f64 {
        self.section.boundary_distance(x)
    }

    fn check_interior(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.section_dim() {
            return Err(Error::DimensionMismatch(format!(
                "section point has {} coordinates, expected {}",
                x.len(),
                self.section_dim()
            )));
        }
        let d = self.boundary_distance(x);
        if d.is_nan() || d <= 0.0 {
            return Err(Error::Boundary {
                x: x.to_vec(),
                reason: "section point is not interior".into(),
            });
        }
        Ok(())
    }

    fn cartan(&self, x: &[f64]) -> CMat {
        let mut xi = DVector::zeros(self.algebra.dim());
        for (&axis, &xv) in self.section_axes.iter().zip(x) {
            xi[axis] = xv;
        }
        self.algebra.to_matrix(&xi)
    }

    /// `q(x)`. Does not require `x` to be interior.
    pub fn section_point(&self, x: &[f64]) -> Point {
        match self.manifold {
            Manifold::Euclidean { dim } => {
                let mut p = CMat::zeros(dim, 1);
                p[if dim == 2 { 0 } else { dim - 1 }] = Complex64::new(x[0], 0.0);
                p
            }
            Manifold::GroupManifold { .. } => crate::lie::exp_matrix(&self.cartan(x)),
        }
    }

    /// Closed-form `∂q/∂x_i`.
    pub fn section_tangents(&self, x: &[f64]) -> Vec<Point> {
        match self.manifold {
            Manifold::Euclidean { dim } => {
                let mut t = CMat::zeros(dim, 1);
                t[if dim == 2 { 0 } else { dim - 1 }] = Complex64::new(1.0, 0.0);
                vec![t]
            }
            Manifold::GroupManifold { .. } => {
                let q = self.section_point(x);
                self.section_axes
                    .iter()
                    .map(|&a| &self.algebra.realization[a] * &q)
                    .collect()
            }
        }
    }

    /// `η_y(V, W)`.
    pub fn metric(&self, y: &Point, v: &Point, w: &Point) -> f64 {
        match self.manifold {
            Manifold::Euclidean { .. } => v.iter().zip(w.iter()).map(|(a, b)| (a.conj() * b).re).sum(),
            Manifold::GroupManifold { metric_scale, .. } => {
                let yinv = y.adjoint();
                let a = &yinv * v;
                let b = &yinv * w;
                -metric_scale * (a * b).trace().re
            }
        }
    }

    /// `ξ♯_y` for `ξ` in algebra coordinates.
    pub fn killing_field(&self, xi: &DVector<f64>, y: &Point) -> Point {
        let x = self.algebra.to_matrix(xi);
        match self.action {
            Action::LinearRotation => &x * y,
            Action::Conjugation => &x * y - y * &x,
        }
    }

    /// `g.y` for a group matrix `g` in the defining realization.
    pub fn act(&self, g: &CMat, y: &Point) -> Point {
        match self.action {
            Action::LinearRotation => g * y,
            Action::Conjugation => g * y * g.adjoint(),
        }
    }

    /// `g⁻¹.y`.
    pub fn act_inverse(&self, g: &CMat, y: &Point) -> Point {
        self.act(&g.adjoint(), y)
    }

    /// Central difference of `t ↦ exp(tξ).y` at `t = 0`.
    pub fn killing_field_fd(&self, xi: &DVector<f64>, y: &Point, h: f64) -> Point {
        let plus = exp_map(&self.algebra, &(xi * h));
        let minus = exp_map(&self.algebra, &(xi * -h));
        (self.act(&plus, y) - self.act(&minus, y)) / Complex64::new(2.0 * h, 0.0)
    }

    /// `b_{αβ}`, `b^{αβ}` and `δ = |det b|^{1/2}` at `q(x)`.
    pub fn inertia(&self, dual: &DualBasisPair, x: &[f64]) -> Result<InertiaSample> {
        let (b_lower, delta) = self.b_lower_and_delta(dual, x)?;
        let b_upper = self.inverse_pairing(dual, &b_lower).ok_or_else(|| Error::Boundary {
            x: x.to_vec(),
            reason: "inertia operator is not invertible".into(),
        })?;
        Ok(InertiaSample {
            x: x.to_vec(),
            b_lower,
            b_upper,
            delta,
        })
    }

    /// `δ(q(x))` alone.
    pub fn density(&self, dual: &DualBasisPair, x: &[f64]) -> Result<f64> {
        self.b_lower_and_delta(dual, x).map(|(_, d)| d)
    }

    fn b_lower_and_delta(&self, dual: &DualBasisPair, x: &[f64]) -> Result<(DMatrix<f64>, f64)> {
        self.check_interior(x)?;
        let q = self.section_point(x);
        let m = dual.len();
        let fields: Vec<Point> = (0..m)
            .map(|a| self.killing_field(&dual.t_lower(a), &q))
            .collect();
        let b_lower = DMatrix::from_fn(m, m, |a, b| {
            if a <= b {
                self.metric(&q, &fields[a], &fields[b])
            } else {
                self.metric(&q, &fields[b], &fields[a])
            }
        });
        let det = b_lower.determinant();
        let delta = det.abs().sqrt();
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::Boundary {
                x: x.to_vec(),
                reason: format!("degenerate inertia, det b = {det:e}"),
            });
        }
        Ok((b_lower, delta))
    }

    /// `B(T^α, 𝒥⁻¹ T^β)` with `𝒥 = G⁻¹ b` in the lower basis and
    /// `G = B(T_α, T_β)`.
    fn inverse_pairing(&self, dual: &DualBasisPair, b_lower: &DMatrix<f64>) -> Option<DMatrix<f64>> {
        let form = &self.algebra.invariant_form;
        let gram = dual.lower.transpose() * form * &dual.lower;
        let gram_inv = gram.clone().try_inverse()?;
        let inertia = &gram_inv * b_lower;
        let inertia_inv = inertia.try_inverse()?;
        // coordinates of T^β in the lower basis are the columns of G⁻¹
        let images = &dual.lower * inertia_inv * gram_inv;
        let raw = dual.upper.transpose() * form * images;
        Some((&raw + raw.transpose()) * 0.5)
    }

    /// `h_{ij} = η(∂_i q, ∂_j q)`.
    pub fn section_metric(&self, x: &[f64]) -> DMatrix<f64> {
        let q = self.section_point(x);
        let t = self.section_tangents(x);
        let d = t.len();
        DMatrix::from_fn(d, d, |i, j| self.metric(&q, &t[i], &t[j]))
    }

    /// Constant section metric coefficient; the catalog charts are all
    /// conformally flat with constant factor.
    pub fn h_metric(&self) -> f64 {
        let x = self.sample_points(1)[0].clone();
        self.section_metric(&x)[(0, 0)]
    }

    /// Deterministic interior sample points: uniform along the interval,
    /// or along a fixed segment inside the alcove.
    pub fn sample_points(&self, n: usize) -> Vec<Vec<f64>> {
        (0..n)
            .map(|i| {
                let s = (i as f64 + 1.0) / (n as f64 + 1.0);
                match self.section {
                    SectionDomain::Ray => vec![0.1 + 9.9 * s],
                    SectionDomain::Interval => vec![2.0 * PI * s],
                    SectionDomain::Alcove => {
                        // segment parallel to the wall x₁ = 0, between the
                        // centroid and that wall
                        let s3 = 3f64.sqrt();
                        let g = [2.0 * PI / 3.0, 2.0 * PI / s3];
                        let a = [0.0, 0.0];
                        let b = [0.0, 4.0 * PI / s3];
                        (0..2)
                            .map(|k| g[k] + 0.9 * ((1.0 - s) * (a[k] - g[k]) + s * (b[k] - g[k])))
                            .collect()
                    }
                }
            })
            .collect()
    }

    /// Orthogonality of the section to the orbits, vanishing of the
    /// isotropy fields and injectivity on `𝒦⊥`.
    pub fn polar_sanity(&self, samples: &[Vec<f64>]) -> Result<CheckReport> {
        let dual = self.algebra.dual_bases()?;
        let mut orth = 0.0f64;
        let mut iso = 0.0f64;
        let mut min_delta = f64::INFINITY;
        for x in samples {
            self.check_interior(x)?;
            let q = self.section_point(x);
            let tangents = self.section_tangents(x);
            let scale = self.metric(&q, &tangents[0], &tangents[0]).sqrt();
            for a in 0..dual.len() {
                let f = self.killing_field(&dual.t_lower(a), &q);
                let fnorm = self.metric(&q, &f, &f).sqrt().max(1.0);
                for t in &tangents {
                    orth = orth.max(self.metric(&q, t, &f).abs() / (scale * fnorm));
                }
            }
            for &k in &self.algebra.subalgebra_k {
                let f = self.killing_field(&self.algebra.basis_vector(k), &q);
                iso = iso.max(self.metric(&q, &f, &f).max(0.0).sqrt());
            }
            let sample = self.inertia(&dual, x);
            min_delta = min_delta.min(sample.map(|s| s.delta).unwrap_or(0.0));
        }
        let mut report = CheckReport::default();
        report.push(CheckResult::below("polar.orthogonality", orth, POLAR_TOL));
        report.push(CheckResult::below("polar.isotropy", iso, POLAR_TOL));
        report.push(CheckResult::with_pass(
            "polar.injectivity",
            min_delta,
            0.0,
            min_delta > 0.0,
        ));
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn su2() -> Scenario {
        Scenario::catalog(ScenarioId::Su2Conj)
    }

    #[test]
    fn u1_killing_field() {
        let s = Scenario::catalog(ScenarioId::U1Plane);
        let y = s.section_point(&[1.7]);
        let v = s.killing_field(&DVector::from_vec(vec![1.0]), &y);
        assert_eq!(v[0], Complex64::new(0.0, 0.0));
        assert_eq!(v[1], Complex64::new(1.7, 0.0));
    }

    #[test]
    fn so3_axis_is_fixed() {
        let s = Scenario::catalog(ScenarioId::So3Space);
        let y = s.section_point(&[2.5]);
        let v = s.killing_field(&s.algebra.basis_vector(2), &y);
        assert!(v.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn su2_killing_norm() {
        let s = su2();
        for &x in &[0.3, 1.0, 2.9, 5.5] {
            let q = s.section_point(&[x]);
            let v = s.killing_field(&s.algebra.basis_vector(0), &q);
            let n2 = s.metric(&q, &v, &v);
            assert_relative_eq!(n2, 4.0 * (x / 2.0).sin().powi(2), max_relative = 1e-13);
        }
    }

    #[test]
    fn inertia_examples() {
        let u1 = Scenario::catalog(ScenarioId::U1Plane);
        let d = u1.algebra.dual_bases().unwrap();
        let s = u1.inertia(&d, &[3.0]).unwrap();
        assert_relative_eq!(s.b_lower[(0, 0)], 9.0, max_relative = 1e-15);
        assert_relative_eq!(s.b_upper[(0, 0)], 1.0 / 9.0, max_relative = 1e-14);
        assert_relative_eq!(s.delta, 3.0, max_relative = 1e-15);

        let so3 = Scenario::catalog(ScenarioId::So3Space);
        let d = so3.algebra.dual_bases().unwrap();
        let s = so3.inertia(&d, &[2.0]).unwrap();
        assert!((&s.b_lower - DMatrix::identity(2, 2) * 4.0).amax() < 1e-14);
        assert_relative_eq!(s.delta, 4.0, max_relative = 1e-14);

        let su2 = su2();
        let d = su2.algebra.dual_bases().unwrap();
        for &x in &[0.1, 1.3, PI, 6.0] {
            let s = su2.inertia(&d, &[x]).unwrap();
            let expect = 4.0 * (x / 2.0).sin().powi(2);
            assert!((&s.b_lower - DMatrix::identity(2, 2) * expect).amax() < 1e-13);
            assert_relative_eq!(s.delta, expect, max_relative = 1e-12);
            assert!(s.inverse_residual() < 1e-10);
            assert!(s.route_residual() < 1e-10 * s.b_upper.amax());
        }
    }

    #[test]
    fn boundary_is_rejected() {
        let s = su2();
        let d = s.algebra.dual_bases().unwrap();
        for x in [0.0, 2.0 * PI, -1.0, 7.0] {
            assert!(matches!(s.inertia(&d, &[x]), Err(Error::Boundary { .. })), "{x}");
        }
        let u1 = Scenario::catalog(ScenarioId::U1Plane);
        assert!(u1.inertia(&u1.algebra.dual_bases().unwrap(), &[0.0]).is_err());
    }

    #[test]
    fn section_metric_values() {
        for (id, h) in [
            (ScenarioId::U1Plane, 1.0),
            (ScenarioId::So3Space, 1.0),
            (ScenarioId::Su2Conj, 1.0),
            (ScenarioId::Su3Conj, 0.5),
        ] {
            let s = Scenario::catalog(id);
            for x in s.sample_points(5) {
                let m = s.section_metric(&x);
                let d = m.nrows();
                assert!((m - DMatrix::identity(d, d) * h).amax() < 1e-14, "{id}");
            }
        }
    }

    #[test]
    fn catalog_scenarios_are_polar() {
        for id in ScenarioId::ALL {
            let s = Scenario::catalog(id);
            let r = s.polar_sanity(&s.sample_points(50)).unwrap();
            assert!(r.passed(), "{id}: {:?}", r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn wrong_isotropy_is_detected() {
        let s = Scenario::catalog(ScenarioId::So3Space).with_isotropy(vec![0]);
        let r = s.polar_sanity(&s.sample_points(10)).unwrap();
        assert!(!r.get("polar.isotropy").unwrap().pass);
    }

    #[test]
    fn su3_density_vanishes_on_walls_only() {
        let s = Scenario::catalog(ScenarioId::Su3Conj);
        let d = s.algebra.dual_bases().unwrap();
        for x in s.sample_points(20) {
            let sample = s.inertia(&d, &x).unwrap();
            assert!(sample.delta > 0.0);
            assert!(sample.inverse_residual() < 1e-10);
        }
        let s3 = 3f64.sqrt();
        assert!(s.inertia(&d, &[0.0, 1.0]).is_err());
        assert!(s.inertia(&d, &[1.0, 1.0 / s3]).is_err());
    }

    #[test]
    fn killing_fields_match_finite_differences() {
        for id in ScenarioId::ALL {
            let s = Scenario::catalog(id);
            let x = s.sample_points(3)[1].clone();
            let y = s.section_point(&x);
            for a in 0..s.algebra.dim() {
                let xi = s.algebra.basis_vector(a) * 0.7 + DVector::from_element(s.algebra.dim(), 0.2);
                let exact = s.killing_field(&xi, &y);
                let errs: Vec<f64> = [1e-2, 5e-3, 2.5e-3]
                    .iter()
                    .map(|&h| (s.killing_field_fd(&xi, &y, h) - &exact).norm())
                    .collect();
                let order = (errs[0] / errs[1]).log2();
                let order2 = (errs[1] / errs[2]).log2();
                if errs[0] > 1e-12 {
                    assert!(order > 1.9 && order2 > 1.9, "{id} {a}: {errs:?}");
                }
            }
        }
    }

    #[test]
    fn b_rescaling_leaves_inverse_pairing_consistent() {
        let s = su2();
        let scaled = s.with_form_scaled(3.0);
        let d0 = s.algebra.dual_bases().unwrap();
        let d1 = scaled.algebra.dual_bases().unwrap();
        let a = s.inertia(&d0, &[1.1]).unwrap();
        let b = scaled.inertia(&d1, &[1.1]).unwrap();
        assert!(b.inverse_residual() < 1e-12);
        assert!((a.b_upper - b.b_upper).amax() < 1e-14);
        assert_relative_eq!(a.delta, b.delta, max_relative = 1e-14);
    }

    #[test]
    fn parses_ids() {
        for id in ScenarioId::ALL {
            assert_eq!(id.as_str().parse::<ScenarioId>().unwrap(), id);
        }
        assert!(matches!("g2-conj".parse::<ScenarioId>(), Err(Error::UnknownScenario(_))));
    }
}
