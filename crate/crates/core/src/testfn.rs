//! Test functions `F: Y → V` with exactly known ambient Laplacian.
//!
//! On Euclidean space the family is `p(y) e^{-a|y|²}` with polynomial
//! components; on a group manifold it is built from matrix elements of
//! irreducible representations, on which `Δ_Y` acts as the Casimir scalar
//! of the metric form.

use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{Manifold, Point, Scenario};
use crate::lie::{casimir, CMat, GroupId, HaarQuadrature, LieAlgebraSpec, Representation};
use crate::poly::Polynomial;

pub type CVec = DVector<Complex64>;

#[derive(Debug, Clone)]
pub enum TestFunction {
    Zero { dim: usize },
    Const { value: CVec },
    /// Component `i` is `p_i(y) e^{-a|y|²}`.
    PolyGauss { components: Vec<Polynomial>, a: f64 },
    /// Character of an irreducible representation (scalar).
    Character { rep: Representation },
    /// `F(y) = C · vec(π(y))` with `vec` in column-major order.
    MatrixElements { rep: Representation, coeffs: CMat },
    /// Algebra coordinates of the traceless anti-Hermitian part of `y`;
    /// equivariant for the adjoint representation under conjugation.
    AntiHermitianPart { algebra: LieAlgebraSpec },
    Sum(Vec<TestFunction>),
    /// `(PF)(y) = Σ_k w_k ρ(g_k) F(g_k⁻¹.y)`.
    Averaged {
        inner: Box<TestFunction>,
        rep: Representation,
        quad: Arc<HaarQuadrature>,
    },
}

impl TestFunction {
    /// Scalar test functions by id: `zero`, `const`, `gauss`, `zpow:m`,
    /// `char:n`, `defining-trace`, and the vector-valued `ahp`.
    pub fn from_id(scenario: &Scenario, id: &str) -> Result<Self> {
        let unknown = || Error::UnknownTestFunction(id.to_string());
        let one = CVec::from_element(1, Complex64::new(1.0, 0.0));
        let (head, arg) = match id.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (id, None),
        };
        let euclid_dim = match scenario.manifold {
            Manifold::Euclidean { dim } => Some(dim),
            Manifold::GroupManifold { .. } => None,
        };
        match (head, arg, euclid_dim) {
            ("zero", None, _) => Ok(TestFunction::Zero { dim: 1 }),
            ("const", None, _) => Ok(TestFunction::Const { value: one }),
            ("gauss", None, Some(n)) => Ok(TestFunction::PolyGauss {
                components: vec![Polynomial::constant(n, Complex64::new(1.0, 0.0))],
                a: 1.0,
            }),
            ("zpow", Some(m), Some(2)) => {
                let m: i64 = m.trim().parse().map_err(|_| unknown())?;
                let p = Polynomial::holomorphic_power(2, m.unsigned_abs() as u32);
                let p = if m < 0 { p.conj() } else { p };
                Ok(TestFunction::PolyGauss {
                    components: vec![p],
                    a: 1.0,
                })
            }
            ("char", Some(n), None) if scenario.group == GroupId::Su2 => {
                let n: u32 = n.trim().parse().map_err(|_| unknown())?;
                let rep = Representation::parse(GroupId::Su2, &format!("spin:{n}/2"))?;
                Ok(TestFunction::Character { rep })
            }
            ("defining-trace", None, None) => Ok(TestFunction::Character {
                rep: Representation::parse(scenario.group, "defining")?,
            }),
            ("ahp", None, None) => Ok(TestFunction::AntiHermitianPart {
                algebra: scenario.group.algebra(),
            }),
            _ => Err(unknown()),
        }
    }

    /// The `u1-plane` building block `(y₁ + i y₂)^m e^{-|y|²}`, equivariant
    /// for the charge-`m` representation.
    pub fn zpow(m: i64) -> Self {
        let p = Polynomial::holomorphic_power(2, m.unsigned_abs() as u32);
        TestFunction::PolyGauss {
            components: vec![if m < 0 { p.conj() } else { p }],
            a: 1.0,
        }
    }

    /// Random polynomial-Gaussian with `dim_v` components.
    pub fn random_poly_gauss<R: Rng>(nvars: usize, dim_v: usize, degree: u32, rng: &mut R) -> Self {
        TestFunction::PolyGauss {
            components: (0..dim_v)
                .map(|_| Polynomial::random(nvars, degree, rng))
                .collect(),
            a: rng.gen_range(0.5..1.5),
        }
    }

    /// Random combination of matrix elements of the given irreducibles.
    pub fn random_matrix_elements<R: Rng>(reps: &[Representation], dim_v: usize, rng: &mut R) -> Self {
        TestFunction::Sum(
            reps.iter()
                .map(|rep| {
                    let d = rep.dim();
                    let coeffs = CMat::from_fn(dim_v, d * d, |_, _| {
                        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                    });
                    TestFunction::MatrixElements {
                        rep: rep.clone(),
                        coeffs,
                    }
                })
                .collect(),
        )
    }

    pub fn averaged(self, rep: &Representation, quad: Arc<HaarQuadrature>) -> Self {
        TestFunction::Averaged {
            inner: Box::new(self),
            rep: rep.clone(),
            quad,
        }
    }

    pub fn eval(&self, scenario: &Scenario, y: &Point) -> Result<CVec> {
        match self {
            TestFunction::Zero { dim } => Ok(CVec::zeros(*dim)),
            TestFunction::Const { value } => Ok(value.clone()),
            TestFunction::PolyGauss { components, a } => {
                let (coords, r2) = real_coords(y);
                let g = (-a * r2).exp();
                Ok(CVec::from_iterator(
                    components.len(),
                    components.iter().map(|p| p.eval(&coords) * g),
                ))
            }
            TestFunction::Character { rep } => {
                let m = matrix_at(rep, y)?;
                Ok(CVec::from_element(1, m.trace()))
            }
            TestFunction::MatrixElements { rep, coeffs } => {
                let m = matrix_at(rep, y)?;
                Ok(coeffs * CVec::from_column_slice(m.as_slice()))
            }
            TestFunction::AntiHermitianPart { algebra } => Ok(anti_hermitian_part(algebra, y)),
            TestFunction::Sum(parts) => sum_parts(parts, |p| p.eval(scenario, y)),
            TestFunction::Averaged { inner, rep, quad } => {
                average_with(scenario, rep, quad, y, |z| inner.eval(scenario, z))
            }
        }
    }

    /// Exact `Δ_Y F` at `y`.
    pub fn laplacian(&self, scenario: &Scenario, y: &Point) -> Result<CVec> {
        match self {
            TestFunction::Zero { dim } => Ok(CVec::zeros(*dim)),
            TestFunction::Const { value } => Ok(CVec::zeros(value.len())),
            TestFunction::PolyGauss { components, a } => {
                let (coords, r2) = real_coords(y);
                let n = coords.len() as f64;
                let g = (-a * r2).exp();
                let radial = 4.0 * a * a * r2 - 2.0 * a * n;
                Ok(CVec::from_iterator(
                    components.len(),
                    components.iter().map(|p| {
                        (p.laplacian().eval(&coords) - p.euler().eval(&coords) * (4.0 * a)
                            + p.eval(&coords) * radial)
                            * g
                    }),
                ))
            }
            TestFunction::Character { rep } | TestFunction::MatrixElements { rep, .. } => {
                let c = casimir_scalar(scenario, rep)?;
                Ok(self.eval(scenario, y)? * Complex64::new(c, 0.0))
            }
            TestFunction::AntiHermitianPart { .. } => {
                let def = Representation::parse(scenario.group, "defining")?;
                let c = casimir_scalar(scenario, &def)?;
                Ok(self.eval(scenario, y)? * Complex64::new(c, 0.0))
            }
            TestFunction::Sum(parts) => sum_parts(parts, |p| p.laplacian(scenario, y)),
            TestFunction::Averaged { inner, rep, quad } => {
                average_with(scenario, rep, quad, y, |z| inner.laplacian(scenario, z))
            }
        }
    }
}

/// `Δ_Y F(y)` for a test function named by id.
pub fn ambient_laplacian_oracle(scenario: &Scenario, id: &str, y: &Point) -> Result<CVec> {
    TestFunction::from_id(scenario, id)?.laplacian(scenario, y)
}

/// Casimir scalar of an irreducible representation with respect to the
/// ambient metric at the identity. The catalog form of each group's
/// algebra is that metric.
pub fn casimir_scalar(scenario: &Scenario, rep: &Representation) -> Result<f64> {
    if !matches!(scenario.manifold, Manifold::GroupManifold { .. }) {
        return Err(Error::InvalidArgument(
            "matrix-element test functions need a group manifold".into(),
        ));
    }
    let c = casimir(rep, &scenario.group.algebra());
    if c.off_scalar_residual > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "representation {} is not irreducible",
            rep.label
        )));
    }
    Ok(c.scalar)
}

fn matrix_at(rep: &Representation, y: &Point) -> Result<CMat> {
    rep.matrix_at(y).ok_or_else(|| {
        Error::UnknownTestFunction(format!("no closed form for {} at a matrix point", rep.label))
    })
}

fn real_coords(y: &Point) -> (Vec<f64>, f64) {
    let coords: Vec<f64> = y.iter().map(|z| z.re).collect();
    let r2 = coords.iter().map(|c| c * c).sum();
    (coords, r2)
}

fn anti_hermitian_part(algebra: &LieAlgebraSpec, y: &Point) -> CVec {
    let n = y.nrows();
    let mut a = (y - y.adjoint()) * Complex64::new(0.5, 0.0);
    let tr = a.trace() / n as f64;
    for i in 0..n {
        a[(i, i)] -= tr;
    }
    algebra.coordinates(&a).map(|v| Complex64::new(v, 0.0))
}

fn sum_parts<F: Fn(&TestFunction) -> Result<CVec>>(parts: &[TestFunction], f: F) -> Result<CVec> {
    let mut acc: Option<CVec> = None;
    for p in parts {
        let v = f(p)?;
        acc = Some(match acc {
            Some(a) => a + v,
            None => v,
        });
    }
    acc.ok_or_else(|| Error::InvalidArgument("empty sum of test functions".into()))
}

/// Quadrature average `Σ_k w_k ρ(g_k) f(g_k⁻¹.y)` in node order.
pub fn average_with<F: Fn(&Point) -> Result<CVec>>(
    scenario: &Scenario,
    rep: &Representation,
    quad: &HaarQuadrature,
    y: &Point,
    f: F,
) -> Result<CVec> {
    let mut acc = CVec::zeros(rep.dim());
    for (g, w) in quad.nodes.iter().zip(&quad.weights) {
        let z = scenario.act_inverse(&g.matrix, y);
        let v = f(&z)?;
        if v.len() != rep.dim() {
            return Err(Error::DimensionMismatch(format!(
                "test function has {} components, representation has dimension {}",
                v.len(),
                rep.dim()
            )));
        }
        acc += rep.act(g, &v) * Complex64::new(*w, 0.0);
    }
    Ok(acc)
}

/// [`average_with`] for several functions in one sweep over the nodes,
/// forming each `ρ(g_k)` once.
pub fn average_many(
    scenario: &Scenario,
    rep: &Representation,
    quad: &HaarQuadrature,
    fs: &[TestFunction],
    y: &Point,
) -> Result<Vec<CVec>> {
    let mut acc = vec![CVec::zeros(rep.dim()); fs.len()];
    for (g, w) in quad.nodes.iter().zip(&quad.weights) {
        let z = scenario.act_inverse(&g.matrix, y);
        let rho = rep.group_matrix(g) * Complex64::new(*w, 0.0);
        for (f, a) in fs.iter().zip(acc.iter_mut()) {
            let v = f.eval(scenario, &z)?;
            if v.len() != rep.dim() {
                return Err(Error::DimensionMismatch(format!(
                    "test function has {} components, representation has dimension {}",
                    v.len(),
                    rep.dim()
                )));
            }
            *a += &rho * v;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ScenarioId;
    use crate::lie::{exp_map, haar_quadrature_for, GroupElement};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Second-order central differences of `F` along an orthonormal frame.
    fn fd_laplacian(s: &Scenario, f: &TestFunction, y: &Point, h: f64) -> CVec {
        let f0 = f.eval(s, y).unwrap();
        let mut acc = CVec::zeros(f0.len());
        match s.manifold {
            Manifold::Euclidean { dim } => {
                for i in 0..dim {
                    let mut yp = y.clone();
                    let mut ym = y.clone();
                    yp[i] += h;
                    ym[i] -= h;
                    acc += (f.eval(s, &yp).unwrap() + f.eval(s, &ym).unwrap() - &f0 * Complex64::new(2.0, 0.0)) / Complex64::new(h * h, 0.0);
                }
            }
            Manifold::GroupManifold { group, .. } => {
                // catalog forms are diagonal in the catalog basis
                let spec = group.algebra();
                for a in 0..spec.dim() {
                    let unit = spec.basis_vector(a) / spec.invariant_form[(a, a)].sqrt();
                    let e = exp_map(&spec, &(&unit * h));
                    let em = exp_map(&spec, &(&unit * -h));
                    acc += (f.eval(s, &(y * e)).unwrap() + f.eval(s, &(y * em)).unwrap()
                        - &f0 * Complex64::new(2.0, 0.0))
                        / Complex64::new(h * h, 0.0);
                }
            }
        }
        acc
    }

    #[test]
    fn gaussian_laplacian_closed_form() {
        let s = Scenario::catalog(ScenarioId::U1Plane);
        let y = CMat::from_column_slice(2, 1, &[Complex64::new(0.6, 0.0), Complex64::new(-0.9, 0.0)]);
        let r2: f64 = 0.36 + 0.81;
        let got = ambient_laplacian_oracle(&s, "gauss", &y).unwrap()[0];
        assert!((got.re - (4.0 * r2 - 4.0) * (-r2).exp()).abs() < 1e-15);
        assert_eq!(ambient_laplacian_oracle(&s, "const", &y).unwrap()[0], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn spin_half_character_eigenvalue() {
        let s = Scenario::catalog(ScenarioId::Su2Conj);
        let y = s.section_point(&[1.2]);
        let f = ambient_laplacian_oracle(&s, "char:1", &y).unwrap()[0];
        let chi = TestFunction::from_id(&s, "char:1").unwrap().eval(&s, &y).unwrap()[0];
        assert!((f + chi * 0.75).norm() < 1e-14);
    }

    #[test]
    fn closed_forms_match_finite_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let cases: Vec<(ScenarioId, TestFunction)> = vec![
            (ScenarioId::U1Plane, TestFunction::zpow(3)),
            (ScenarioId::U1Plane, TestFunction::zpow(-2)),
            (ScenarioId::So3Space, TestFunction::random_poly_gauss(3, 2, 3, &mut rng)),
            (ScenarioId::Su2Conj, TestFunction::from_id(&Scenario::catalog(ScenarioId::Su2Conj), "char:3").unwrap()),
            (
                ScenarioId::Su2Conj,
                TestFunction::random_matrix_elements(
                    &[Representation::parse(GroupId::Su2, "spin:1").unwrap()],
                    2,
                    &mut rng,
                ),
            ),
            (ScenarioId::Su3Conj, TestFunction::from_id(&Scenario::catalog(ScenarioId::Su3Conj), "ahp").unwrap()),
            (
                ScenarioId::Su3Conj,
                TestFunction::random_matrix_elements(
                    &[Representation::parse(GroupId::Su3, "adjoint").unwrap()],
                    1,
                    &mut rng,
                ),
            ),
        ];
        for (id, f) in cases {
            let s = Scenario::catalog(id);
            let y = match s.manifold {
                Manifold::Euclidean { dim } => CMat::from_fn(dim, 1, |i, _| Complex64::new(0.3 - 0.4 * i as f64, 0.0)),
                Manifold::GroupManifold { group, .. } => GroupElement::random(group, &mut rng).matrix,
            };
            let exact = f.laplacian(&s, &y).unwrap();
            let e1 = (fd_laplacian(&s, &f, &y, 1e-2) - &exact).norm();
            let e2 = (fd_laplacian(&s, &f, &y, 5e-3) - &exact).norm();
            assert!(e2 < 1e-3 * exact.norm().max(1.0), "{id}: {e2}");
            assert!((e1 / e2).log2() > 1.8, "{id}: {e1} {e2}");
        }
    }

    #[test]
    fn anti_hermitian_part_is_adjoint_equivariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for group in [GroupId::Su2, GroupId::Su3] {
            let s = Scenario::catalog(if group == GroupId::Su2 { ScenarioId::Su2Conj } else { ScenarioId::Su3Conj });
            let f = TestFunction::from_id(&s, "ahp").unwrap();
            let adj = Representation::parse(group, "adjoint").unwrap();
            let y = GroupElement::random(group, &mut rng).matrix;
            let g = GroupElement::random(group, &mut rng);
            let lhs = f.eval(&s, &s.act(&g.matrix, &y)).unwrap();
            let rhs = adj.act(&g, &f.eval(&s, &y).unwrap());
            assert!((lhs - rhs).norm() < 1e-13);
        }
    }

    #[test]
    fn averaging_kills_nonzero_charge_constants() {
        let s = Scenario::catalog(ScenarioId::U1Plane);
        let q = Arc::new(haar_quadrature_for(GroupId::U1, 16).unwrap());
        let rep = Representation::parse(GroupId::U1, "charge:2").unwrap();
        let f = TestFunction::from_id(&s, "const").unwrap().averaged(&rep, q);
        let y = s.section_point(&[1.3]);
        assert!(f.eval(&s, &y).unwrap().norm() < 1e-15);
    }

    #[test]
    fn unknown_ids_are_rejected() {
        let s = Scenario::catalog(ScenarioId::Su2Conj);
        for id in ["gauss", "zpow:1", "sinc", "char:x"] {
            assert!(matches!(TestFunction::from_id(&s, id), Err(Error::UnknownTestFunction(_))), "{id}");
        }
    }
}
