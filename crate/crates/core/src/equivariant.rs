//! Representation-side reduction data: `V^K`, the averaging projector and
//! the spin-coupling matrix.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::check::{CheckReport, CheckResult};
use crate::error::{Error, Result};
use crate::geometry::{InertiaSample, Point, Scenario};
use crate::lie::{CMat, DualBasisPair, GroupElement, HaarQuadrature, LieAlgebraSpec, Representation};
use crate::testfn::{average_many, average_with, CVec, TestFunction};

/// Singular values below this count as zero in the kernel intersection.
pub const KERNEL_TOL: f64 = 1e-10;
/// Commutator threshold for `[Σ b^{αβ} R_α R_β, Π]`.
pub const COMMUTATOR_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct InvariantSubspace {
    pub dim_vk: usize,
    /// Orthonormal columns spanning `V^K`.
    pub basis: CMat,
    pub projector: CMat,
}

impl InvariantSubspace {
    pub fn is_usable(&self) -> bool {
        self.dim_vk > 0
    }

    /// `‖Π² - Π‖` and `‖Π† - Π‖` (max-abs).
    pub fn projector_residuals(&self) -> (f64, f64) {
        let p = &self.projector;
        (max_abs(&(p * p - p)), max_abs(&(p.adjoint() - p)))
    }

    /// `max ‖ρ'(k) v‖` over basis columns and isotropy generators.
    pub fn invariance_residual(&self, rep: &Representation, spec: &LieAlgebraSpec) -> f64 {
        spec.subalgebra_k
            .iter()
            .map(|&k| max_abs(&(&rep.generators[k] * &self.basis)))
            .fold(0.0, f64::max)
    }

    /// Coordinates of a vector of `V` in the `V^K` basis.
    pub fn coordinates(&self, v: &CVec) -> CVec {
        self.basis.adjoint() * v
    }
}

/// `∩_k ker ρ'(k)` over the isotropy generators by successive SVDs.
///
/// Columns are normalized so that their largest entry is real and positive,
/// which makes the basis real whenever the kernel has a real basis.
pub fn invariant_vectors(rep: &Representation, spec: &LieAlgebraSpec) -> InvariantSubspace {
    let n = rep.dim();
    let mut kernel = CMat::identity(n, n);
    for &k in &spec.subalgebra_k {
        if kernel.ncols() == 0 {
            break;
        }
        let m = &rep.generators[k] * &kernel;
        kernel = &kernel * null_space(&m);
    }
    let mut basis = if kernel.ncols() > 0 {
        // re-orthonormalize and make the basis independent of SVD phases
        let q = kernel.clone().qr().q();
        let realified = realify_columns(&q);
        if let Some(real) = realified {
            real
        } else {
            q
        }
    } else {
        kernel
    };
    for mut col in basis.column_iter_mut() {
        let (idx, _) = col
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, z)| if z.norm() > acc.1 + 1e-12 { (i, z.norm()) } else { acc });
        let phase = col[idx] / col[idx].norm();
        col /= phase;
    }
    let projector = &basis * basis.adjoint();
    InvariantSubspace {
        dim_vk: basis.ncols(),
        basis,
        projector,
    }
}

/// Right null space of `m` with threshold [`KERNEL_TOL`].
fn null_space(m: &CMat) -> CMat {
    let r = m.ncols();
    if m.nrows() < r {
        let mut padded = CMat::zeros(r, r);
        padded.view_mut((0, 0), (m.nrows(), r)).copy_from(m);
        return null_space(&padded);
    }
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let cols: Vec<usize> = (0..r)
        .filter(|&i| svd.singular_values[i] < KERNEL_TOL)
        .collect();
    CMat::from_fn(r, cols.len(), |i, j| v_t[(cols[j], i)].conj())
}

/// If the span of `q` has a real orthonormal basis, returns it.
fn realify_columns(q: &CMat) -> Option<CMat> {
    let n = q.nrows();
    let d = q.ncols();
    // span is real iff it is closed under conjugation: rank [Re Q, Im Q] = d
    let stacked = DMatrix::from_fn(n, 2 * d, |i, j| {
        if j < d {
            q[(i, j)].re
        } else {
            q[(i, j - d)].im
        }
    });
    let svd = stacked.svd(true, false);
    let u = svd.u?;
    let rank = svd.singular_values.iter().filter(|s| **s > 1e-10).count();
    if rank != d {
        return None;
    }
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|a, b| svd.singular_values[*b].total_cmp(&svd.singular_values[*a]));
    Some(CMat::from_fn(n, d, |i, j| Complex64::new(u[(i, idx[j])], 0.0)))
}

/// `Π (Σ b^{αβ} ρ'(T_α) ρ'(T_β)) Π` in the `V^K` basis, Hermitian by
/// construction.
pub fn spin_coupling(
    rep: &Representation,
    inv: &InvariantSubspace,
    sample: &InertiaSample,
    dual: &DualBasisPair,
) -> Result<CMat> {
    let full = spin_operator(rep, sample, dual);
    check_commutes(&full, &inv.projector)?;
    if inv.dim_vk == 0 {
        return Err(Error::UnusablePair);
    }
    let s = inv.basis.adjoint() * full * &inv.basis;
    Ok((&s + s.adjoint()) * Complex64::new(0.5, 0.0))
}

/// `Σ_{αβ} b^{αβ} ρ'(T_α) ρ'(T_β)` on all of `V`.
pub fn spin_operator(rep: &Representation, sample: &InertiaSample, dual: &DualBasisPair) -> CMat {
    let n = rep.dim();
    let gens: Vec<CMat> = (0..dual.len())
        .map(|a| rep.generator(&dual.t_lower(a)))
        .collect();
    let mut full = CMat::zeros(n, n);
    for (a, ga) in gens.iter().enumerate() {
        for (b, gb) in gens.iter().enumerate() {
            let c = sample.b_upper[(a, b)];
            if c != 0.0 {
                full += ga * gb * Complex64::new(c, 0.0);
            }
        }
    }
    full
}

/// `max |[A, Π]|`, scaled by `max(1, |A|)`.
pub fn commutator_residual(a: &CMat, projector: &CMat) -> f64 {
    max_abs(&(a * projector - projector * a)) / max_abs(a).max(1.0)
}

fn check_commutes(full: &CMat, projector: &CMat) -> Result<()> {
    let residual = commutator_residual(full, projector);
    if residual > COMMUTATOR_TOL {
        return Err(Error::ScenarioInconsistency {
            residual,
            threshold: COMMUTATOR_TOL,
        });
    }
    Ok(())
}

/// Real part of a Hermitian coupling that is required to be real
/// symmetric; complex couplings are rejected.
pub fn real_coupling(s: &CMat) -> Result<DMatrix<f64>> {
    let scale = max_abs(s).max(1.0);
    let imag = s.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if imag > 1e-12 * scale {
        return Err(Error::ComplexSpinCoupling(imag));
    }
    Ok(s.map(|z| z.re))
}

/// `(PF)(y) = Σ_k w_k ρ(g_k) F(g_k⁻¹.y)`.
pub fn average(
    scenario: &Scenario,
    rep: &Representation,
    quad: &HaarQuadrature,
    f: &TestFunction,
    y: &Point,
) -> Result<CVec> {
    average_with(scenario, rep, quad, y, |z| f.eval(scenario, z))
}

/// `max ‖F(g.y) - ρ(g) F(y)‖` over all pairs.
pub fn equivariance_defect(
    scenario: &Scenario,
    rep: &Representation,
    f: &TestFunction,
    group_elements: &[GroupElement],
    points: &[Point],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for y in points {
        let fy = f.eval(scenario, y)?;
        for g in group_elements {
            let lhs = f.eval(scenario, &scenario.act(&g.matrix, y))?;
            worst = worst.max((lhs - rep.act(g, &fy)).norm());
        }
    }
    Ok(worst)
}

/// Equivariance defect of `PF` for every sample `F`, evaluated at `y`
/// and `g.y` for all pairs.
pub fn compatibility_check(
    scenario: &Scenario,
    rep: &Representation,
    quad: &HaarQuadrature,
    samples: &[TestFunction],
    group_elements: &[GroupElement],
    points: &[Point],
    tol: f64,
) -> Result<CheckReport> {
    let mut worst = 0.0f64;
    for y in points {
        let at_y = average_many(scenario, rep, quad, samples, y)?;
        for g in group_elements {
            let moved = average_many(scenario, rep, quad, samples, &scenario.act(&g.matrix, y))?;
            let rho = rep.group_matrix(g);
            for (a, b) in at_y.iter().zip(&moved) {
                worst = worst.max((b - &rho * a).norm());
            }
        }
    }
    let mut report = CheckReport::default();
    report.push(CheckResult::below("compatibility.defect", worst, tol));
    Ok(report)
}

/// `max ‖P(PF)(y) - PF(y)‖` over samples and points.
pub fn idempotence_residual(
    scenario: &Scenario,
    rep: &Representation,
    quad: &Arc<HaarQuadrature>,
    samples: &[TestFunction],
    points: &[Point],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for f in samples {
        let pf = f.clone().averaged(rep, quad.clone());
        for y in points {
            let once = pf.eval(scenario, y)?;
            let twice = average(scenario, rep, quad, &pf, y)?;
            worst = worst.max((twice - once).norm());
        }
    }
    Ok(worst)
}

/// `max ‖PF(y) - F(y)‖` for equivariant `F`.
pub fn fixed_point_residual(
    scenario: &Scenario,
    rep: &Representation,
    quad: &HaarQuadrature,
    f: &TestFunction,
    points: &[Point],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for y in points {
        let pf = average(scenario, rep, quad, f, y)?;
        worst = worst.max((pf - f.eval(scenario, y)?).norm());
    }
    Ok(worst)
}

/// `|⟨PF, F'⟩ - ⟨F, PF'⟩|` with the spatial integral given as weighted
/// points.
pub fn symmetry_residual(
    scenario: &Scenario,
    rep: &Representation,
    quad: &HaarQuadrature,
    f: &TestFunction,
    f2: &TestFunction,
    points: &[(Point, f64)],
) -> Result<f64> {
    let mut lhs = Complex64::new(0.0, 0.0);
    let mut rhs = Complex64::new(0.0, 0.0);
    for (y, w) in points {
        let pf = average(scenario, rep, quad, f, y)?;
        let pf2 = average(scenario, rep, quad, f2, y)?;
        let a = f.eval(scenario, y)?;
        let b = f2.eval(scenario, y)?;
        lhs += pf.dotc(&b) * *w;
        rhs += a.dotc(&pf2) * *w;
    }
    Ok((lhs - rhs).norm())
}

pub(crate) fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ScenarioId;
    use crate::lie::{haar_quadrature_for, GroupId};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sub(s: &Scenario, label: &str) -> (Representation, InvariantSubspace) {
        let rep = Representation::parse(s.group, label).unwrap();
        let inv = invariant_vectors(&rep, &s.algebra);
        (rep, inv)
    }

    #[test]
    fn su2_invariant_dimensions() {
        let s = Scenario::catalog(ScenarioId::Su2Conj);
        for (label, d) in [("trivial", 1), ("spin:1/2", 0), ("spin:1", 1), ("spin:3/2", 0), ("spin:2", 1)] {
            let (rep, inv) = sub(&s, label);
            assert_eq!(inv.dim_vk, d, "{label}");
            let (idem, herm) = inv.projector_residuals();
            assert!(idem < 1e-12 && herm < 1e-12);
            assert!(inv.invariance_residual(&rep, &s.algebra) < 1e-12);
        }
    }

    #[test]
    fn su3_adjoint_has_cartan_invariants() {
        let s = Scenario::catalog(ScenarioId::Su3Conj);
        let (_, inv) = sub(&s, "adjoint");
        assert_eq!(inv.dim_vk, 2);
        // spanned by X3 and X8
        let mut p = inv.projector.clone();
        p[(2, 2)] -= 1.0;
        p[(7, 7)] -= 1.0;
        assert!(max_abs(&p) < 1e-12);
        assert!(inv.basis.iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn trivial_rep_is_all_invariant() {
        let s = Scenario::catalog(ScenarioId::So3Space);
        let (_, inv) = sub(&s, "trivial");
        assert_eq!(inv.dim_vk, 1);
        assert_eq!(inv.projector[(0, 0)], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn spin_coupling_examples() {
        // u1-plane, charge m at r: -m²/r²
        let s = Scenario::catalog(ScenarioId::U1Plane);
        let dual = s.algebra.dual_bases().unwrap();
        let (rep, inv) = sub(&s, "charge:3");
        let sample = s.inertia(&dual, &[2.0]).unwrap();
        let c = spin_coupling(&rep, &inv, &sample, &dual).unwrap();
        assert!((c[(0, 0)] + Complex64::new(9.0 / 4.0, 0.0)).norm() < 1e-14);

        // so3-space, spin-ℓ: -ℓ(ℓ+1)/r²
        let s = Scenario::catalog(ScenarioId::So3Space);
        let dual = s.algebra.dual_bases().unwrap();
        for l in 0..4 {
            let (rep, inv) = sub(&s, &format!("spin:{l}"));
            let sample = s.inertia(&dual, &[1.5]).unwrap();
            let c = spin_coupling(&rep, &inv, &sample, &dual).unwrap();
            let expect = -(l * (l + 1)) as f64 / 2.25;
            assert!((c[(0, 0)].re - expect).abs() < 1e-13, "{l}");
        }

        // su2-conj, spin-j: -j(j+1)/(4 sin²(x/2))
        let s = Scenario::catalog(ScenarioId::Su2Conj);
        let dual = s.algebra.dual_bases().unwrap();
        for j in 1..4 {
            let (rep, inv) = sub(&s, &format!("spin:{j}"));
            let x = 2.2;
            let sample = s.inertia(&dual, &[x]).unwrap();
            let c = spin_coupling(&rep, &inv, &sample, &dual).unwrap();
            let expect = -((j * (j + 1)) as f64) / (4.0 * (x / 2.0f64).sin().powi(2));
            assert!((c[(0, 0)].re - expect).abs() < 1e-12, "{j}");
        }
    }

    #[test]
    fn spin_coupling_is_b_invariant() {
        let s = Scenario::catalog(ScenarioId::Su3Conj);
        let (rep, inv) = sub(&s, "adjoint");
        let x = s.sample_points(3)[1].clone();
        let go = |sc: &Scenario| {
            let dual = sc.algebra.dual_bases().unwrap();
            let sample = sc.inertia(&dual, &x).unwrap();
            spin_coupling(&rep, &inv, &sample, &dual).unwrap()
        };
        let a = go(&s);
        let b = go(&s.with_form_scaled(3.0));
        assert!(max_abs(&(&a - &b)) < 1e-12 * max_abs(&a).max(1.0));
        assert!(real_coupling(&a).is_ok());
        assert!(max_abs(&(a.adjoint() - &a)) == 0.0);
    }

    #[test]
    fn anisotropic_inertia_is_an_inconsistency() {
        // b^{αβ} that is not K-invariant mixes the weight-zero line of
        // spin 2 with weights ±2
        let s = Scenario::catalog(ScenarioId::So3Space);
        let dual = s.algebra.dual_bases().unwrap();
        let rep = Representation::parse(GroupId::So3, "spin:2").unwrap();
        let inv = invariant_vectors(&rep, &s.algebra);
        let mut sample = s.inertia(&dual, &[1.0]).unwrap();
        sample.b_upper[(1, 1)] = 2.0;
        let res = spin_coupling(&rep, &inv, &sample, &dual);
        assert!(matches!(res, Err(Error::ScenarioInconsistency { .. })), "{res:?}");
    }

    #[test]
    fn averaging_on_the_plane() {
        let s = Scenario::catalog(ScenarioId::U1Plane);
        let rep = Representation::parse(GroupId::U1, "charge:2").unwrap();
        let quad = Arc::new(haar_quadrature_for(GroupId::U1, 16).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let samples: Vec<_> = (0..20)
            .map(|_| TestFunction::random_poly_gauss(2, 1, 4, &mut rng))
            .collect();
        let gs: Vec<_> = (0..4).map(|_| GroupElement::random(GroupId::U1, &mut rng)).collect();
        let ys: Vec<Point> = [0.3, 0.9, 1.7]
            .iter()
            .map(|&r| CMat::from_column_slice(2, 1, &[Complex64::new(r, 0.0), Complex64::new(0.5 - r, 0.0)]))
            .collect();
        let rep_check = compatibility_check(&s, &rep, &quad, &samples, &gs, &ys, 1e-10).unwrap();
        assert!(rep_check.passed(), "{rep_check:?}");
        let idem = idempotence_residual(&s, &rep, &quad, &samples[..3], &ys).unwrap();
        assert!(idem < 1e-13);
        let eq = fixed_point_residual(&s, &rep, &quad, &TestFunction::zpow(2), &ys).unwrap();
        assert!(eq < 1e-14);
    }
}
