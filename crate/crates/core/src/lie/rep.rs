//! Finite-dimensional unitary representations of the catalog groups,
//! stored as explicit matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::algebra::{trace_inner, CMat, LieAlgebraSpec};
use super::group::{exp_matrix, GroupElement, GroupId};
use crate::check::{CheckReport, CheckResult};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepKind {
    Trivial,
    /// `e^{imθ}` on U(1).
    Charge(i64),
    /// Spin `j = twice_j / 2`, ladder-operator basis `m = j, j-1, ..., -j`.
    Spin { twice_j: u32 },
    Defining,
    Adjoint,
}

/// A representation `ρ` with infinitesimal generators `R_a = ρ'(X_a)`.
#[derive(Debug, Clone)]
pub struct Representation {
    pub label: String,
    pub group: GroupId,
    pub kind: RepKind,
    pub generators: Vec<CMat>,
    realization: Vec<CMat>,
    realization_gram_inv: DMatrix<f64>,
}

impl Representation {
    /// Parses `trivial`, `charge:m`, `spin:j` (`j` may be `p/2`), `defining`
    /// and `adjoint` against the given group.
    pub fn parse(group: GroupId, label: &str) -> Result<Self> {
        let spec = group.algebra();
        let label = label.trim();
        let bad = || Error::UnknownRepresentation(format!("{label} (group {group})"));
        let kind = if label == "trivial" {
            RepKind::Trivial
        } else if label == "defining" {
            RepKind::Defining
        } else if label == "adjoint" {
            RepKind::Adjoint
        } else if let Some(m) = label.strip_prefix("charge:") {
            if group != GroupId::U1 {
                return Err(bad());
            }
            RepKind::Charge(m.trim().parse().map_err(|_| bad())?)
        } else if let Some(j) = label.strip_prefix("spin:") {
            let twice_j = parse_twice(j.trim()).ok_or_else(bad)?;
            match group {
                GroupId::Su2 => {}
                GroupId::So3 if twice_j % 2 == 0 => {}
                _ => return Err(bad()),
            }
            RepKind::Spin { twice_j }
        } else {
            return Err(bad());
        };
        let generators = match kind {
            RepKind::Trivial => vec![CMat::zeros(1, 1); spec.dim()],
            RepKind::Charge(m) => vec![CMat::from_element(1, 1, Complex64::new(0.0, m as f64))],
            RepKind::Spin { twice_j } => spin_generators(twice_j).to_vec(),
            RepKind::Defining => spec.realization.clone(),
            RepKind::Adjoint => adjoint_generators(&spec),
        };
        Ok(Self::assemble(label, group, kind, generators, &spec))
    }

    fn assemble(
        label: &str,
        group: GroupId,
        kind: RepKind,
        generators: Vec<CMat>,
        spec: &LieAlgebraSpec,
    ) -> Self {
        let dim = spec.dim();
        let gram = DMatrix::from_fn(dim, dim, |a, b| {
            trace_inner(&spec.realization[a], &spec.realization[b])
        });
        Self {
            label: label.to_string(),
            group,
            kind,
            generators,
            realization: spec.realization.clone(),
            realization_gram_inv: gram.try_inverse().expect("catalog realization is a basis"),
        }
    }

    /// Representation with arbitrary generators, used for fixtures.
    pub fn custom(group: GroupId, label: &str, generators: Vec<CMat>) -> Self {
        let spec = group.algebra();
        Self::assemble(label, group, RepKind::Defining, generators, &spec)
    }

    pub fn dim(&self) -> usize {
        self.generators[0].nrows()
    }

    pub fn is_trivial(&self) -> bool {
        self.kind == RepKind::Trivial
    }

    /// `ρ'(ξ)` for algebra coordinates `ξ`.
    pub fn generator(&self, xi: &DVector<f64>) -> CMat {
        let n = self.dim();
        let mut out = CMat::zeros(n, n);
        for (a, r) in self.generators.iter().enumerate() {
            if xi[a] != 0.0 {
                out += r * Complex64::new(xi[a], 0.0);
            }
        }
        out
    }

    /// `ρ(g)` from closed forms: phases on U(1), Wigner matrices for spin,
    /// the element itself for the defining representation, and conjugation
    /// for the adjoint.
    pub fn group_matrix(&self, g: &GroupElement) -> CMat {
        match self.kind {
            RepKind::Trivial => CMat::identity(1, 1),
            RepKind::Charge(m) => {
                CMat::from_element(1, 1, Complex64::from_polar(1.0, m as f64 * g.angles[0]))
            }
            RepKind::Spin { twice_j } => {
                wigner_d(twice_j, g.angles[0], g.angles[1], g.angles[2])
            }
            RepKind::Defining => g.matrix.clone(),
            RepKind::Adjoint => self.adjoint_matrix(&g.matrix),
        }
    }

    /// `ρ(g)` as the product of exponentials of generators along the Euler
    /// chart. Independent of the closed forms in [`Self::group_matrix`].
    pub fn group_matrix_via_exp(&self, g: &GroupElement) -> CMat {
        let n = self.dim();
        let mut out = CMat::identity(n, n);
        for (&axis, &angle) in g.group.euler_axes().iter().zip(&g.angles) {
            out *= exp_matrix(&(&self.generators[axis] * Complex64::new(angle, 0.0)));
        }
        out
    }

    fn adjoint_matrix(&self, g: &CMat) -> CMat {
        let dim = self.realization.len();
        let ginv = g.adjoint();
        let mut out = CMat::zeros(dim, dim);
        for a in 0..dim {
            let moved = g * &self.realization[a] * &ginv;
            let rhs: Vec<f64> = (0..dim)
                .map(|c| trace_inner(&self.realization[c], &moved))
                .collect();
            for c in 0..dim {
                let mut s = 0.0;
                for (d, r) in rhs.iter().enumerate() {
                    s += self.realization_gram_inv[(c, d)] * r;
                }
                out[(c, a)] = Complex64::new(s, 0.0);
            }
        }
        out
    }

    /// `ρ(g) v` without forming `ρ(g)` for the adjoint representation.
    pub fn act(&self, g: &GroupElement, v: &DVector<Complex64>) -> DVector<Complex64> {
        match self.kind {
            RepKind::Trivial => v.clone(),
            RepKind::Charge(m) => v * Complex64::from_polar(1.0, m as f64 * g.angles[0]),
            RepKind::Defining => &g.matrix * v,
            RepKind::Adjoint => self.adjoint_act(&g.matrix, v),
            RepKind::Spin { .. } => self.group_matrix(g) * v,
        }
    }

    fn adjoint_act(&self, g: &CMat, v: &DVector<Complex64>) -> DVector<Complex64> {
        let dim = self.realization.len();
        let n = self.realization[0].nrows();
        let mut w = CMat::zeros(n, n);
        for (a, x) in self.realization.iter().enumerate() {
            if v[a] != Complex64::new(0.0, 0.0) {
                w += x * v[a];
            }
        }
        let moved = g * w * g.adjoint();
        let rhs: Vec<Complex64> = self
            .realization
            .iter()
            .map(|x| x.iter().zip(moved.iter()).map(|(a, b)| a.conj() * b).sum())
            .collect();
        DVector::from_fn(dim, |c, _| {
            rhs.iter()
                .enumerate()
                .map(|(d, r)| r * self.realization_gram_inv[(c, d)])
                .sum()
        })
    }

    /// `ρ` evaluated at a point of the group manifold given as a matrix in
    /// the defining realization, where a closed form from the matrix exists.
    pub fn matrix_at(&self, y: &CMat) -> Option<CMat> {
        match self.kind {
            RepKind::Trivial => Some(CMat::identity(1, 1)),
            RepKind::Defining => Some(y.clone()),
            RepKind::Adjoint => Some(self.adjoint_matrix(y)),
            RepKind::Spin { twice_j } if self.group == GroupId::Su2 && y.nrows() == 2 => {
                // y = e^{αX₃} e^{βX₂} e^{γX₃}: y₀₀ = e^{-i(α+γ)/2} cos(β/2),
                // y₁₀ = e^{i(α-γ)/2} sin(β/2)
                let (c, s) = (y[(0, 0)], y[(1, 0)]);
                let beta = 2.0 * s.norm().atan2(c.norm());
                let sum = if c.norm() > 0.0 { -c.arg() } else { 0.0 };
                let diff = if s.norm() > 0.0 { s.arg() } else { 0.0 };
                Some(wigner_d(twice_j, sum + diff, beta, sum - diff))
            }
            RepKind::Charge(m) if y.nrows() == 2 => {
                let angle = y[(1, 0)].re.atan2(y[(0, 0)].re);
                Some(CMat::from_element(1, 1, Complex64::from_polar(1.0, m as f64 * angle)))
            }
            _ => None,
        }
    }

    pub fn character(&self, g: &GroupElement) -> Complex64 {
        self.group_matrix(g).trace()
    }

    /// Anti-Hermiticity, bracket and Schur residuals.
    pub fn validate(&self, spec: &LieAlgebraSpec) -> CheckReport {
        let mut report = CheckReport::default();
        let anti = self
            .generators
            .iter()
            .map(|r| max_abs(&(r + r.adjoint())))
            .fold(0.0, f64::max);
        report.push(CheckResult::below("generators_anti_hermitian", anti, 1e-12));
        report.push(CheckResult::below(
            "representation_bracket",
            bracket_residual(self, spec),
            1e-12,
        ));
        let cas = casimir(self, spec);
        report.push(CheckResult::below("casimir_schur", cas.off_scalar_residual, 1e-10));
        report
    }
}

/// `max_{a,b} |[R_a, R_b] - Σ_c f^c_{ab} R_c|`.
pub fn bracket_residual(rep: &Representation, spec: &LieAlgebraSpec) -> f64 {
    let n = spec.dim();
    let f = &spec.structure_constants;
    let mut worst = 0.0f64;
    for a in 0..n {
        for b in 0..n {
            let ra = &rep.generators[a];
            let rb = &rep.generators[b];
            let mut diff = ra * rb - rb * ra;
            for c in 0..n {
                let fc = f.get(a, b, c);
                if fc != 0.0 {
                    diff -= &rep.generators[c] * Complex64::new(fc, 0.0);
                }
            }
            worst = worst.max(max_abs(&diff));
        }
    }
    worst
}

/// The quadratic Casimir `Σ_{ab} (B⁻¹)^{ab} R_a R_b` and its scalar part.
#[derive(Debug, Clone)]
pub struct Casimir {
    pub matrix: CMat,
    pub scalar: f64,
    pub off_scalar_residual: f64,
}

pub fn casimir(rep: &Representation, spec: &LieAlgebraSpec) -> Casimir {
    let n = spec.dim();
    let binv = spec
        .invariant_form
        .clone()
        .try_inverse()
        .expect("invariant form is positive definite");
    let d = rep.dim();
    let mut c = CMat::zeros(d, d);
    for a in 0..n {
        for b in 0..n {
            let w = binv[(a, b)];
            if w != 0.0 {
                c += &rep.generators[a] * &rep.generators[b] * Complex64::new(w, 0.0);
            }
        }
    }
    let scalar = c.trace().re / d as f64;
    let off = max_abs(&(&c - CMat::identity(d, d) * Complex64::new(scalar, 0.0)));
    Casimir {
        matrix: c,
        scalar,
        off_scalar_residual: off,
    }
}

/// `-i J_a` for spin `twice_j / 2` in the basis `m = j, ..., -j`.
pub fn spin_generators(twice_j: u32) -> [CMat; 3] {
    let d = twice_j as usize + 1;
    let j = twice_j as f64 / 2.0;
    let m_of = |i: usize| j - i as f64;
    let mut jp = CMat::zeros(d, d);
    for i in 1..d {
        // J+ |m> at index i lands on index i-1
        let m = m_of(i);
        jp[(i - 1, i)] = Complex64::new((j * (j + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
    }
    let jm = jp.adjoint();
    let jx = (&jp + &jm) * Complex64::new(0.5, 0.0);
    let jy = (&jp - &jm) * Complex64::new(0.0, -0.5);
    let jz = CMat::from_fn(d, d, |r, c| {
        if r == c {
            Complex64::new(m_of(r), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let mi = Complex64::new(0.0, -1.0);
    [jx * mi, jy * mi, jz * mi]
}

fn adjoint_generators(spec: &LieAlgebraSpec) -> Vec<CMat> {
    let n = spec.dim();
    (0..n)
        .map(|a| {
            CMat::from_fn(n, n, |c, b| {
                Complex64::new(spec.structure_constants.get(a, b, c), 0.0)
            })
        })
        .collect()
}

/// Wigner matrix `D^j_{m'm}(α,β,γ) = e^{-im'α} d^j_{m'm}(β) e^{-imγ}`.
pub fn wigner_d(twice_j: u32, alpha: f64, beta: f64, gamma: f64) -> CMat {
    let d = twice_j as usize + 1;
    let small = wigner_small_d(twice_j, beta);
    let j = twice_j as f64 / 2.0;
    CMat::from_fn(d, d, |r, c| {
        let mp = j - r as f64;
        let m = j - c as f64;
        Complex64::from_polar(small[(r, c)], -(mp * alpha + m * gamma))
    })
}

/// Wigner small-d matrix from the explicit factorial sum.
pub fn wigner_small_d(twice_j: u32, beta: f64) -> DMatrix<f64> {
    let d = twice_j as usize + 1;
    let tj = twice_j as i64;
    let (cb, sb) = ((beta / 2.0).cos(), (beta / 2.0).sin());
    DMatrix::from_fn(d, d, |r, c| {
        // work with doubled quantum numbers: j2 = 2j, mp2 = 2m', m2 = 2m
        let mp2 = tj - 2 * r as i64;
        let m2 = tj - 2 * c as i64;
        let jpm_p = ((tj + mp2) / 2) as u64;
        let jmm_p = ((tj - mp2) / 2) as u64;
        let jpm = ((tj + m2) / 2) as u64;
        let jmm = ((tj - m2) / 2) as u64;
        let pref = (factorial(jpm_p) * factorial(jmm_p) * factorial(jpm) * factorial(jmm)).sqrt();
        let diff = (mp2 - m2) / 2;
        let mut sum = 0.0;
        for s in 0..=(tj as u64) {
            let s_i = s as i64;
            let a = jpm as i64 - s_i;
            let b = diff + s_i;
            let cc = jmm_p as i64 - s_i;
            if a < 0 || b < 0 || cc < 0 {
                continue;
            }
            let sign = if (diff + s_i).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            let denom = factorial(a as u64) * factorial(s) * factorial(b as u64) * factorial(cc as u64);
            let cos_pow = (tj - (mp2 - m2) / 2 - 2 * s_i) as i32;
            let sin_pow = ((mp2 - m2) / 2 + 2 * s_i) as i32;
            sum += sign / denom * cb.powi(cos_pow) * sb.powi(sin_pow);
        }
        pref * sum
    })
}

fn factorial(n: u64) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

fn parse_twice(s: &str) -> Option<u32> {
    if let Some((num, den)) = s.split_once('/') {
        let num: u32 = num.trim().parse().ok()?;
        let den: u32 = den.trim().parse().ok()?;
        match den {
            1 => Some(2 * num),
            2 => Some(num),
            _ => None,
        }
    } else {
        s.parse::<u32>().ok().map(|j| 2 * j)
    }
}

pub(crate) fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn spin_half_casimir_is_minus_three_quarters() {
        let spec = LieAlgebraSpec::su2();
        let rep = Representation::parse(GroupId::Su2, "spin:1/2").unwrap();
        let c = casimir(&rep, &spec);
        assert!((c.scalar + 0.75).abs() < 1e-15);
        assert!(c.off_scalar_residual < 1e-15);
    }

    #[test]
    fn spin_j_casimir_matches_brute_force() {
        // oracle: -Σ_a J_a² summed entrywise, compared with -j(j+1)
        let spec = LieAlgebraSpec::su2();
        for twice_j in 0..=6u32 {
            let j = twice_j as f64 / 2.0;
            let label = format!("spin:{twice_j}/2");
            let rep = Representation::parse(GroupId::Su2, &label).unwrap();
            let c = casimir(&rep, &spec);
            assert!((c.scalar + j * (j + 1.0)).abs() < 1e-12, "j={j}");
            assert!(c.off_scalar_residual < 1e-10);
            assert!(rep.validate(&spec).passed(), "j={j}");
        }
    }

    #[test]
    fn trivial_casimir_is_zero() {
        let spec = LieAlgebraSpec::su3();
        let rep = Representation::parse(GroupId::Su3, "trivial").unwrap();
        assert_eq!(casimir(&rep, &spec).scalar, 0.0);
    }

    #[test]
    fn catalog_representations_satisfy_bracket() {
        let cases = [
            (GroupId::U1, "charge:3"),
            (GroupId::So3, "spin:2"),
            (GroupId::So3, "defining"),
            (GroupId::Su2, "adjoint"),
            (GroupId::Su3, "defining"),
            (GroupId::Su3, "adjoint"),
        ];
        for (g, label) in cases {
            let spec = g.algebra();
            let rep = Representation::parse(g, label).unwrap();
            let report = rep.validate(&spec);
            assert!(report.passed(), "{g} {label}: {report:?}");
        }
    }

    #[test]
    fn closed_forms_agree_with_exponentials() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let cases = [
            (GroupId::U1, "charge:-2"),
            (GroupId::Su2, "spin:1/2"),
            (GroupId::Su2, "spin:3/2"),
            (GroupId::Su2, "spin:2"),
            (GroupId::So3, "spin:1"),
            (GroupId::So3, "defining"),
            (GroupId::Su3, "adjoint"),
            (GroupId::Su3, "defining"),
        ];
        for (g, label) in cases {
            let rep = Representation::parse(g, label).unwrap();
            for _ in 0..5 {
                let el = GroupElement::random(g, &mut rng);
                let a = rep.group_matrix(&el);
                let b = rep.group_matrix_via_exp(&el);
                assert!(max_abs(&(a - b)) < 1e-12, "{g} {label}");
            }
        }
    }

    #[test]
    fn act_matches_group_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (g, label) in [
            (GroupId::Su3, "adjoint"),
            (GroupId::Su2, "adjoint"),
            (GroupId::U1, "charge:2"),
            (GroupId::Su2, "spin:1/2"),
            (GroupId::Su2, "spin:3/2"),
            (GroupId::Su2, "spin:2"),
        ] {
            let rep = Representation::parse(g, label).unwrap();
            let el = GroupElement::random(g, &mut rng);
            let v = DVector::from_fn(rep.dim(), |i, _| Complex64::new(i as f64 - 1.5, 0.3 * i as f64));
            let direct = rep.group_matrix(&el) * &v;
            let acted = rep.act(&el, &v);
            assert!((direct - acted).norm() < 1e-13, "{g} {label}");
            let at = rep.matrix_at(&el.matrix).unwrap();
            assert!(max_abs(&(at - rep.group_matrix(&el))) < 1e-13);
        }
    }

    #[test]
    fn rejects_bad_labels() {
        assert!(Representation::parse(GroupId::So3, "spin:1/2").is_err());
        assert!(Representation::parse(GroupId::Su2, "charge:1").is_err());
        assert!(Representation::parse(GroupId::Su3, "spin:1").is_err());
        assert!(Representation::parse(GroupId::Su2, "spin:1/3").is_err());
        assert!(Representation::parse(GroupId::U1, "bogus").is_err());
    }
}
