use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::Rng;

use super::algebra::{CMat, LieAlgebraSpec};
use crate::error::{Error, Result};

/// Catalog compact groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupId {
    U1,
    So3,
    Su2,
    Su3,
}

impl GroupId {
    pub fn algebra(self) -> LieAlgebraSpec {
        match self {
            GroupId::U1 => LieAlgebraSpec::u1(),
            GroupId::So3 => LieAlgebraSpec::so3(),
            GroupId::Su2 => LieAlgebraSpec::su2(),
            GroupId::Su3 => LieAlgebraSpec::su3(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GroupId::U1 => "u1",
            GroupId::So3 => "so3",
            GroupId::Su2 => "su2",
            GroupId::Su3 => "su3",
        }
    }

    /// Basis index of each exponential factor in the Euler-type chart.
    pub fn euler_axes(self) -> &'static [usize] {
        match self {
            GroupId::U1 => &[0],
            GroupId::So3 | GroupId::Su2 => &[2, 1, 2],
            GroupId::Su3 => &[2, 1, 2, 4, 2, 1, 2, 7],
        }
    }
}

impl FromStr for GroupId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "u1" | "u(1)" | "so2" | "so(2)" => Ok(GroupId::U1),
            "so3" | "so(3)" => Ok(GroupId::So3),
            "su2" | "su(2)" => Ok(GroupId::Su2),
            "su3" | "su(3)" => Ok(GroupId::Su3),
            _ => Err(Error::UnknownGroup(s.to_string())),
        }
    }
}

impl fmt::Display for GroupId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A group element in Euler-type coordinates together with its matrix in
/// the defining realization.
///
/// The chart is `g = Π_i exp(angle_i · X_{axis_i})` with the axes from
/// [`GroupId::euler_axes`].
#[derive(Debug, Clone)]
pub struct GroupElement {
    pub group: GroupId,
    pub angles: Vec<f64>,
    pub matrix: CMat,
}

impl GroupElement {
    pub fn identity(group: GroupId) -> Self {
        Self::from_angles(group, &vec![0.0; group.euler_axes().len()])
    }

    pub fn from_angles(group: GroupId, angles: &[f64]) -> Self {
        let spec = group.algebra();
        Self::from_angles_with(&spec, group, angles)
    }

    pub(crate) fn from_angles_with(spec: &LieAlgebraSpec, group: GroupId, angles: &[f64]) -> Self {
        let axes = group.euler_axes();
        assert_eq!(angles.len(), axes.len(), "wrong number of Euler angles");
        let n = spec.realization[0].nrows();
        let mut m = CMat::identity(n, n);
        for (&axis, &angle) in axes.iter().zip(angles) {
            if angle != 0.0 {
                m *= exp_map(spec, &(spec.basis_vector(axis) * angle));
            }
        }
        Self {
            group,
            angles: angles.to_vec(),
            matrix: m,
        }
    }

    /// Element with arbitrary (not Haar-distributed) angles.
    pub fn random<R: Rng>(group: GroupId, rng: &mut R) -> Self {
        let angles: Vec<f64> = group
            .euler_axes()
            .iter()
            .map(|_| rng.gen_range(0.0..2.0 * PI))
            .collect();
        Self::from_angles(group, &angles)
    }

    pub fn inverse_matrix(&self) -> CMat {
        self.matrix.adjoint()
    }
}

/// Exponential of an algebra element in the defining realization.
///
/// 2×2 traceless anti-Hermitian matrices use the closed form
/// `exp(A) = cos θ + (sin θ / θ) A` with `θ² = det A`; everything else goes
/// through scaling and squaring.
pub fn exp_map(spec: &LieAlgebraSpec, xi: &DVector<f64>) -> CMat {
    let a = spec.to_matrix(xi);
    exp_matrix(&a)
}

pub fn exp_matrix(a: &CMat) -> CMat {
    let n = a.nrows();
    if a.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
        return CMat::identity(n, n);
    }
    if is_diagonal(a) {
        return CMat::from_diagonal(&a.diagonal().map(|z| z.exp()));
    }
    if n == 2 && is_su2_like(a) {
        let det = a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)];
        let theta = det.re.max(0.0).sqrt();
        let sinc = if theta < 1e-8 {
            1.0 - theta * theta / 6.0
        } else {
            theta.sin() / theta
        };
        return CMat::identity(2, 2) * Complex64::new(theta.cos(), 0.0)
            + a * Complex64::new(sinc, 0.0);
    }
    a.clone().exp()
}

fn is_diagonal(a: &CMat) -> bool {
    let n = a.nrows();
    (0..n).all(|j| (0..n).all(|i| i == j || a[(i, j)] == Complex64::new(0.0, 0.0)))
}

fn is_su2_like(a: &CMat) -> bool {
    let scale = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let tr = (a[(0, 0)] + a[(1, 1)]).norm();
    let herm = (a + a.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    tr <= 1e-15 * scale.max(1.0) && herm <= 1e-15 * scale.max(1.0)
}

/// `max |U U† - 1|`.
pub fn unitarity_residual(u: &CMat) -> f64 {
    let n = u.nrows();
    (u * u.adjoint() - CMat::identity(n, n))
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}
