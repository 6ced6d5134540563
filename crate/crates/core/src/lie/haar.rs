//! Product quadrature rules for the normalized Haar measure in Euler-type
//! coordinates.
//!
//! * U(1): trapezoid in the angle, exact for `e^{imθ}` with `|m| < n`.
//! * SO(3), SU(2): `g = e^{αX₃} e^{βX₂} e^{γX₃}`; trapezoid in `α` and `γ`,
//!   Gauss–Legendre in `cos β`. For SU(2) `γ` runs over `[0, 4π)`.
//! * SU(3): `g = A · e^{tX₅} · A' · e^{pX₈}` with `A, A'` in the upper-left
//!   SU(2); `u = g e₃` is then uniform on the 5-sphere and the law of `g` is
//!   right-invariant under the stabilizer of `e₃`, which characterizes Haar
//!   measure. `t ∈ [0, π]` carries the density `sin³(t/2) cos(t/2)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::algebra::{CMat, LieAlgebraSpec};
use super::group::{exp_map, GroupElement, GroupId};
use crate::error::{Error, Result};
use crate::quad::{gauss_legendre, gauss_legendre_on};

#[derive(Debug, Clone)]
pub struct HaarQuadrature {
    pub group: GroupId,
    pub order: usize,
    pub nodes: Vec<GroupElement>,
    pub weights: Vec<f64>,
}

impl HaarQuadrature {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ_k w_k f(g_k)` summed in node order.
    pub fn integrate<F: FnMut(&GroupElement) -> Complex64>(&self, mut f: F) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (g, w) in self.nodes.iter().zip(&self.weights) {
            acc += f(g) * *w;
        }
        acc
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Builds the product rule for a catalog group id.
pub fn haar_quadrature(group_id: &str, order: usize) -> Result<HaarQuadrature> {
    let group: GroupId = group_id.parse()?;
    haar_quadrature_for(group, order)
}

pub fn haar_quadrature_for(group: GroupId, order: usize) -> Result<HaarQuadrature> {
    if order == 0 {
        return Err(Error::InvalidArgument("quadrature order must be at least 1".into()));
    }
    let spec = group.algebra();
    let (nodes, weights) = match group {
        GroupId::U1 => {
            let nodes = (0..order)
                .map(|k| {
                    GroupElement::from_angles_with(&spec, group, &[2.0 * PI * k as f64 / order as f64])
                })
                .collect();
            (nodes, vec![1.0 / order as f64; order])
        }
        GroupId::So3 | GroupId::Su2 => {
            let gamma_span = if group == GroupId::Su2 { 4.0 * PI } else { 2.0 * PI };
            let n_gamma = if group == GroupId::Su2 { 2 * order } else { order };
            let rule = euler_rule(order, n_gamma, gamma_span);
            let mut nodes = Vec::with_capacity(rule.len());
            let mut weights = Vec::with_capacity(rule.len());
            for (angles, w) in rule {
                nodes.push(GroupElement::from_angles_with(&spec, group, &angles));
                weights.push(w);
            }
            (nodes, weights)
        }
        GroupId::Su3 => su3_rule(&spec, order),
    };
    Ok(HaarQuadrature {
        group,
        order,
        nodes,
        weights,
    })
}

/// `(α, β, γ)` product rule with total weight 1.
fn euler_rule(order: usize, n_gamma: usize, gamma_span: f64) -> Vec<([f64; 3], f64)> {
    euler_rule_split(order, order, n_gamma, gamma_span)
}

fn euler_rule_split(
    n_alpha: usize,
    order: usize,
    n_gamma: usize,
    gamma_span: f64,
) -> Vec<([f64; 3], f64)> {
    let (c, wc) = gauss_legendre(order);
    let mut out = Vec::with_capacity(n_alpha * order * n_gamma);
    for ia in 0..n_alpha {
        let alpha = 2.0 * PI * ia as f64 / n_alpha as f64;
        for (ci, wi) in c.iter().zip(&wc) {
            let beta = ci.clamp(-1.0, 1.0).acos();
            for ig in 0..n_gamma {
                let gamma = gamma_span * ig as f64 / n_gamma as f64;
                out.push((
                    [alpha, beta, gamma],
                    0.5 * wi / (n_alpha as f64 * n_gamma as f64),
                ));
            }
        }
    }
    out
}

fn su3_rule(spec: &LieAlgebraSpec, order: usize) -> (Vec<GroupElement>, Vec<f64>) {
    let (na, nt, np) = su3_counts(order);
    su3_rule_with(spec, na, order, nt, np)
}

fn su3_counts(order: usize) -> (usize, usize, usize) {
    (order + 1, 4 * order + 4, 2 * order + 3)
}

fn su3_rule_with(
    spec: &LieAlgebraSpec,
    n_alpha: usize,
    order: usize,
    n_t: usize,
    n_p: usize,
) -> (Vec<GroupElement>, Vec<f64>) {
    let su2_part = euler_rule_split(n_alpha, order, 2 * n_alpha, 4.0 * PI);
    let factor = |angles: &[f64; 3]| {
        exp_map(spec, &(spec.basis_vector(2) * angles[0]))
            * exp_map(spec, &(spec.basis_vector(1) * angles[1]))
            * exp_map(spec, &(spec.basis_vector(2) * angles[2]))
    };
    let su2_mats: Vec<CMat> = su2_part.iter().map(|(a, _)| factor(a)).collect();

    let (ts, wts) = gauss_legendre_on(n_t, 0.0, PI);
    let t_weights: Vec<f64> = ts
        .iter()
        .zip(&wts)
        .map(|(t, w)| w * (t / 2.0).sin().powi(3) * (t / 2.0).cos())
        .collect();
    let t_total: f64 = t_weights.iter().sum();
    let t_mats: Vec<CMat> = ts
        .iter()
        .map(|t| exp_map(spec, &(spec.basis_vector(4) * *t)))
        .collect();

    let p_span = 4.0 * PI * 3.0f64.sqrt();
    let ps: Vec<f64> = (0..n_p).map(|k| p_span * k as f64 / n_p as f64).collect();
    let p_mats: Vec<CMat> = ps
        .iter()
        .map(|p| exp_map(spec, &(spec.basis_vector(7) * *p)))
        .collect();

    let count = su2_part.len() * su2_part.len() * n_t * n_p;
    let mut nodes = Vec::with_capacity(count);
    let mut weights = Vec::with_capacity(count);
    for (ia, (aa, wa)) in su2_part.iter().enumerate() {
        for (it, tw) in t_weights.iter().enumerate() {
            let at = &su2_mats[ia] * &t_mats[it];
            for (ib, (ab, wb)) in su2_part.iter().enumerate() {
                let atb = &at * &su2_mats[ib];
                for (ip, p) in ps.iter().enumerate() {
                    let matrix = &atb * &p_mats[ip];
                    let angles = vec![aa[0], aa[1], aa[2], ts[it], ab[0], ab[1], ab[2], *p];
                    nodes.push(GroupElement {
                        group: GroupId::Su3,
                        angles,
                        matrix,
                    });
                    weights.push(wa * wb * (tw / t_total) / n_p as f64);
                }
            }
        }
    }
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::rep::Representation;

    fn inner(q: &HaarQuadrature, a: &Representation, b: &Representation) -> Complex64 {
        q.integrate(|g| a.character(g).conj() * b.character(g))
    }

    #[test]
    fn u1_fourier_orthogonality() {
        let n = 8;
        let q = haar_quadrature("u1", n).unwrap();
        assert!((q.weight_sum() - 1.0).abs() < 1e-15);
        for m in -(n as i64 - 1)..(n as i64) {
            let rep = Representation::parse(GroupId::U1, &format!("charge:{m}")).unwrap();
            let got = q.integrate(|g| rep.character(g));
            let expect = if m == 0 { 1.0 } else { 0.0 };
            assert!((got - expect).norm() < 1e-14, "m={m}");
        }
    }

    #[test]
    fn su2_character_orthogonality() {
        let q = haar_quadrature("su2", 6).unwrap();
        assert!((q.weight_sum() - 1.0).abs() < 1e-14);
        let reps: Vec<_> = ["trivial", "spin:1/2", "spin:1", "spin:3/2"]
            .iter()
            .map(|l| Representation::parse(GroupId::Su2, l).unwrap())
            .collect();
        let chi1 = q.integrate(|g| reps[1].character(g));
        assert!(chi1.norm() < 1e-12);
        for (i, a) in reps.iter().enumerate() {
            for (j, b) in reps.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((inner(&q, a, b) - expect).norm() < 1e-12, "{i} {j}");
            }
        }
    }

    #[test]
    fn so3_character_orthogonality() {
        let q = haar_quadrature("so3", 6).unwrap();
        let reps: Vec<_> = ["spin:0", "spin:1", "spin:2"]
            .iter()
            .map(|l| Representation::parse(GroupId::So3, l).unwrap())
            .collect();
        for (i, a) in reps.iter().enumerate() {
            for (j, b) in reps.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((inner(&q, a, b) - expect).norm() < 1e-12, "{i} {j}");
            }
        }
    }

    #[test]
    fn su3_character_orthogonality() {
        let q = haar_quadrature("su3", 2).unwrap();
        assert!((q.weight_sum() - 1.0).abs() < 1e-12);
        assert_eq!(q.len(), 36 * 36 * 12 * 7);
        let reps: Vec<_> = ["trivial", "defining", "adjoint"]
            .iter()
            .map(|l| Representation::parse(GroupId::Su3, l).unwrap())
            .collect();
        for (i, a) in reps.iter().enumerate() {
            for (j, b) in reps.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                let got = inner(&q, a, b);
                assert!((got - expect).norm() < 1e-12, "{i} {j}: {got}");
            }
        }
        // one trivial summand in 3 ⊗ 3 ⊗ 3 detects a wrong centre coverage
        let def = &reps[1];
        let cube = q.integrate(|g| def.character(g).powi(3));
        assert!((cube - 1.0).norm() < 1e-12, "{cube}");
    }

    #[test]
    fn constant_integrates_to_one() {
        for id in ["u1", "so3", "su2", "su3"] {
            let q = haar_quadrature(id, if id == "su3" { 1 } else { 2 }).unwrap();
            let one = q.integrate(|_| Complex64::new(1.0, 0.0));
            assert!((one - 1.0).norm() < 1e-13, "{id}");
        }
    }

    #[test]
    fn unknown_group_is_rejected() {
        assert!(matches!(haar_quadrature("g2", 3), Err(Error::UnknownGroup(_))));
        assert!(haar_quadrature("su2", 0).is_err());
    }
}
