//! Closed-form reference spectra, computed without touching the assembly
//! code: Casimir series and Bessel zeros found by bisection.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Scenario, ScenarioId};
use crate::lie::{RepKind, Representation};
use crate::reduce::GridConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleId {
    Su2Casimir,
    So3Bessel,
    U1Bessel,
}

impl OracleId {
    pub const ALL: [OracleId; 3] = [OracleId::Su2Casimir, OracleId::So3Bessel, OracleId::U1Bessel];

    pub fn as_str(self) -> &'static str {
        match self {
            OracleId::Su2Casimir => "su2-casimir",
            OracleId::So3Bessel => "so3-bessel",
            OracleId::U1Bessel => "u1-bessel",
        }
    }

    pub fn scenario(self) -> ScenarioId {
        match self {
            OracleId::Su2Casimir => ScenarioId::Su2Conj,
            OracleId::So3Bessel => ScenarioId::So3Space,
            OracleId::U1Bessel => ScenarioId::U1Plane,
        }
    }
}

impl fmt::Display for OracleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OracleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OracleId::ALL
            .into_iter()
            .find(|o| o.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown oracle `{s}`")))
    }
}

/// `-n(n+2)/4` for `n = j, j+1, ...`: the Casimir values of the SU(2)
/// irreps whose tensor square contains spin `j`.
pub fn casimir_series(j: u32, k: usize) -> Vec<f64> {
    (j..j + k as u32)
        .map(|n| {
            let n = n as f64;
            -n * (n + 2.0) / 4.0
        })
        .collect()
}

/// Spherical Bessel `j_l(z)` by upward recurrence; accurate for `z ≳ l`,
/// which covers every zero.
pub fn spherical_bessel(l: u32, z: f64) -> f64 {
    let j0 = z.sin() / z;
    if l == 0 {
        return j0;
    }
    let mut prev = j0;
    let mut cur = z.sin() / (z * z) - z.cos() / z;
    for n in 1..l {
        let next = (2 * n + 1) as f64 / z * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `J_m(x) = (1/π) ∫_0^π cos(mτ - x sin τ) dτ` by the trapezoid rule, which
/// is spectrally accurate for this periodic integrand.
pub fn bessel_j(m: u32, x: f64) -> f64 {
    let n = (2.0 * (x.abs() + m as f64)) as usize + 64;
    let h = PI / n as f64;
    let f = |t: f64| (m as f64 * t - x * t.sin()).cos();
    let mut s = 0.5 * (f(0.0) + f(PI));
    for i in 1..n {
        s += f(i as f64 * h);
    }
    s * h / PI
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// First `k` positive zeros of `f` above `start`, bracketed by a scan with
/// step `step` (well below the zero spacing) and refined by bisection.
fn zeros<F: Fn(f64) -> f64>(f: F, start: f64, step: f64, k: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(k);
    let mut a = start;
    let mut fa = f(a);
    while out.len() < k {
        let b = a + step;
        let fb = f(b);
        if fb == 0.0 || (fa < 0.0) != (fb < 0.0) {
            out.push(if fb == 0.0 { b } else { bisect(&f, a, b) });
        }
        a = b;
        fa = fb;
    }
    out
}

pub fn spherical_bessel_zeros(l: u32, k: usize) -> Vec<f64> {
    zeros(|z| spherical_bessel(l, z), l as f64 + 0.5, 0.05, k)
}

pub fn bessel_zeros(m: u32, k: usize) -> Vec<f64> {
    zeros(|x| bessel_j(m, x), (m as f64).max(0.5), 0.05, k)
}

/// Dirichlet eigenvalues `-(z_k / R)^2` of the radial problem on `(0, R)`.
fn radial(zs: Vec<f64>, r: f64) -> Vec<f64> {
    zs.into_iter().map(|z| -(z / r).powi(2)).collect()
}

/// Reference eigenvalues (descending) for a scenario/representation/grid
/// combination that the oracle covers.
pub fn oracle_values(
    id: OracleId,
    scenario: &Scenario,
    rep: &Representation,
    grid: &GridConfig,
    k: usize,
) -> Result<Vec<f64>> {
    if scenario.id != id.scenario() {
        return Err(Error::InvalidArgument(format!(
            "oracle {id} does not apply to scenario {}",
            scenario.id
        )));
    }
    let mismatch = || Error::InvalidArgument(format!("oracle {id} does not cover representation {}", rep.label));
    match id {
        OracleId::Su2Casimir => {
            let (lo, hi) = scenario.section.bounds();
            if grid.x_min != lo || grid.x_max != hi {
                return Err(Error::InvalidArgument(format!(
                    "oracle {id} needs the full interval ({lo}, {hi})"
                )));
            }
            let j = match rep.kind {
                RepKind::Trivial => 0,
                RepKind::Spin { twice_j } if twice_j % 2 == 0 => twice_j / 2,
                _ => return Err(mismatch()),
            };
            Ok(casimir_series(j, k))
        }
        OracleId::So3Bessel | OracleId::U1Bessel => {
            if grid.x_min != 0.0 {
                return Err(Error::InvalidArgument(format!("oracle {id} needs x_min = 0")));
            }
            let zs = match (id, rep.kind) {
                (OracleId::So3Bessel, RepKind::Trivial) => spherical_bessel_zeros(0, k),
                (OracleId::So3Bessel, RepKind::Spin { twice_j }) => spherical_bessel_zeros(twice_j / 2, k),
                (OracleId::U1Bessel, RepKind::Trivial) => bessel_zeros(0, k),
                (OracleId::U1Bessel, RepKind::Charge(m)) => bessel_zeros(m.unsigned_abs() as u32, k),
                _ => return Err(mismatch()),
            };
            Ok(radial(zs, grid.x_max))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bessel_values_against_tables() {
        // Abramowitz & Stegun tabulated values.
        assert!((bessel_j(0, 1.0) - 0.765_197_686_557_966_6).abs() < 1e-14);
        assert!((bessel_j(1, 2.5) - 0.497_094_102_464_274_3).abs() < 1e-14);
        assert!((bessel_j(3, 10.0) - 0.058_379_379_305_186_81).abs() < 1e-14);
    }

    #[test]
    fn known_zeros() {
        let z0 = bessel_zeros(0, 3);
        for (z, e) in z0.iter().zip([2.404_825_557_695_773, 5.520_078_110_286_311, 8.653_727_912_911_013]) {
            assert!((z - e).abs() < 1e-12, "{z} {e}");
        }
        let z1 = bessel_zeros(1, 2);
        for (z, e) in z1.iter().zip([3.831_705_970_207_512, 7.015_586_669_815_619]) {
            assert!((z - e).abs() < 1e-12);
        }
        // j_0 zeros are kπ; j_1 zeros solve tan z = z.
        for (k, z) in spherical_bessel_zeros(0, 4).iter().enumerate() {
            assert!((z - (k + 1) as f64 * PI).abs() < 1e-12);
        }
        for z in spherical_bessel_zeros(1, 4) {
            assert!((z.tan() - z).abs() < 1e-9 * z);
        }
        assert!((spherical_bessel_zeros(1, 1)[0] - 4.493_409_457_909_064).abs() < 1e-12);
    }

    #[test]
    fn spherical_bessel_is_half_integer_bessel() {
        // j_l(z) = sqrt(π / 2z) J_{l+1/2}(z); check j_2 against its closed form.
        for z in [3.0f64, 7.5, 12.25] {
            let closed = (3.0 / (z * z) - 1.0) * z.sin() / z - 3.0 * z.cos() / (z * z);
            assert!((spherical_bessel(2, z) - closed).abs() < 1e-14);
        }
    }

    #[test]
    fn casimir_series_values() {
        assert_eq!(casimir_series(0, 4), vec![0.0, -0.75, -2.0, -3.75]);
        assert_eq!(casimir_series(2, 2), vec![-2.0, -3.75]);
    }

    #[test]
    fn oracle_applicability() {
        let su2 = Scenario::catalog(ScenarioId::Su2Conj);
        let triv = Representation::parse(su2.group, "trivial").unwrap();
        let full = GridConfig::uniform(0.0, 2.0 * PI, 100);
        assert!(oracle_values(OracleId::Su2Casimir, &su2, &triv, &full, 3).is_ok());
        let part = GridConfig::uniform(0.5, 2.0 * PI, 100);
        assert!(oracle_values(OracleId::Su2Casimir, &su2, &triv, &part, 3).is_err());
        assert!(oracle_values(OracleId::U1Bessel, &su2, &triv, &full, 3).is_err());
        assert_eq!("so3-bessel".parse::<OracleId>().unwrap(), OracleId::So3Bessel);
    }
}
