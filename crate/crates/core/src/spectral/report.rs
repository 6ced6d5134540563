//! Spectrum reports for assembled reduced operators.

use serde::{Deserialize, Serialize};

use super::solver::{residual, top_eigenpairs, Method};
use crate::error::{Error, Result};
use crate::geometry::Scenario;
use crate::lie::Representation;
use crate::reduce::{assemble, BoundaryCondition, GridConfig, ReducedOperator};

/// Every reported pair satisfies `|M v - λ v| < RESIDUAL_TOL |M|`.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Allowed departure of eigenvectors from orthonormality.
pub const ORTHONORMALITY_TOL: f64 = 1e-10;
/// Order estimates further than this from the stencil order are flagged.
pub const ORDER_FLAG: f64 = 0.5;

/// Eigenvalues are listed largest first: in the `Δ = div∘grad` convention
/// that is the ground state first.
pub const ORDERING: &str = "descending";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub index: usize,
    pub computed: f64,
    pub oracle: f64,
    pub abs_err: f64,
    /// `None` when the oracle value is zero.
    pub rel_err: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub tol_abs: f64,
    pub tol_rel: f64,
    pub rows: Vec<OracleRow>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub n_list: Vec<usize>,
    pub h: Vec<f64>,
    /// `eigenvalues[i][j]`: eigenvalue `j` on grid `n_list[i]`.
    pub eigenvalues: Vec<Vec<f64>>,
    /// Order estimate per eigenvalue from the three finest grids; `None`
    /// when the differences are at roundoff level or change sign.
    pub order: Vec<Option<f64>>,
    pub expected_order: usize,
    pub flagged: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub scenario: String,
    pub representation: String,
    pub ordering: String,
    pub method: Method,
    pub grid_config: GridConfig,
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    pub matrix_norm: f64,
    pub orthonormality_defect: f64,
    /// Eigenfunctions on the grid, node-major with `dim V^K` components per
    /// node, orthonormal under the discrete inner product.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenvectors: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle_comparison: Option<OracleComparison>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergence_table: Option<ConvergenceTable>,
}

pub fn eigen_spectrum(op: &ReducedOperator, k: usize) -> Result<SpectrumReport> {
    eigen_spectrum_with(op, k, Method::Auto)
}

pub fn eigen_spectrum_with(op: &ReducedOperator, k: usize, method: Method) -> Result<SpectrumReport> {
    let pairs = top_eigenpairs(&op.matrix, k, method)?;
    let norm = op.matrix.norm_inf();
    let residuals: Vec<f64> = pairs
        .values
        .iter()
        .zip(&pairs.vectors)
        .map(|(l, v)| residual(&op.matrix, *l, v))
        .collect();
    if let Some((i, r)) = residuals
        .iter()
        .enumerate()
        .find(|(_, r)| !(**r < RESIDUAL_TOL * norm))
    {
        return Err(Error::Numerical(format!(
            "eigenpair {i} has residual {r:e} against matrix norm {norm:e}"
        )));
    }

    let measure = op.node_measure();
    let d = op.dim_vk;
    let functions: Vec<Vec<f64>> = pairs
        .vectors
        .iter()
        .map(|v| v.iter().enumerate().map(|(i, x)| x / measure[i / d].sqrt()).collect())
        .collect();
    let inner = |a: &[f64], b: &[f64]| -> f64 {
        a.iter()
            .zip(b)
            .enumerate()
            .map(|(i, (x, y))| measure[i / d] * x * y)
            .sum()
    };
    let mut defect: f64 = 0.0;
    for (i, u) in functions.iter().enumerate() {
        for (j, w) in functions.iter().enumerate().skip(i) {
            let expect = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((inner(u, w) - expect).abs());
        }
    }
    if defect > ORTHONORMALITY_TOL {
        return Err(Error::Numerical(format!("eigenvectors lost orthonormality ({defect:e})")));
    }

    Ok(SpectrumReport {
        scenario: op.scenario.to_string(),
        representation: op.representation.clone(),
        ordering: ORDERING.to_string(),
        method: pairs.method,
        grid_config: op.config.clone(),
        eigenvalues: pairs.values,
        residuals,
        matrix_norm: norm,
        orthonormality_defect: defect,
        eigenvectors: Some(functions),
        oracle_comparison: None,
        convergence_table: None,
    })
}

/// Solves `(h1^p - h2^p) / (h2^p - h3^p) = ratio` for `p` by bisection.
fn richardson_order(h: [f64; 3], lambda: [f64; 3]) -> Option<f64> {
    let d1 = lambda[0] - lambda[1];
    let d2 = lambda[1] - lambda[2];
    let scale = lambda.iter().fold(1.0f64, |m, l| m.max(l.abs()));
    if d2 == 0.0 || d1.abs() < 1e3 * f64::EPSILON * scale || (d1 < 0.0) != (d2 < 0.0) {
        return None;
    }
    let ratio = d1 / d2;
    let g = |p: f64| (h[0].powf(p) - h[1].powf(p)) / (h[1].powf(p) - h[2].powf(p)) - ratio;
    let (mut a, mut b) = (0.05, 12.0);
    if (g(a) < 0.0) == (g(b) < 0.0) {
        return None;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if (g(m) < 0.0) == (g(a) < 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

/// Spectrum on each grid of `n_list` (ascending, at least three entries)
/// with a per-eigenvalue order estimate. The report carries the finest
/// grid's spectrum.
pub fn convergence_study(
    scenario: &Scenario,
    rep: &Representation,
    template: &GridConfig,
    n_list: &[usize],
    k: usize,
) -> Result<SpectrumReport> {
    if n_list.len() < 3 || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(format!(
            "convergence study needs at least three ascending grid sizes, got {n_list:?}"
        )));
    }
    let mut rows = Vec::with_capacity(n_list.len());
    let mut hs = Vec::with_capacity(n_list.len());
    let mut finest = None;
    for &n in n_list {
        let config = GridConfig { n, nodes: None, ..template.clone() };
        let op = assemble(scenario, rep, &config, BoundaryCondition::Dirichlet)?;
        let report = eigen_spectrum(&op, k)?;
        hs.push(op.grid.h);
        rows.push(report.eigenvalues.clone());
        finest = Some(report);
    }
    let m = rows.len();
    let order: Vec<Option<f64>> = (0..k)
        .map(|j| {
            richardson_order(
                [hs[m - 3], hs[m - 2], hs[m - 1]],
                [rows[m - 3][j], rows[m - 2][j], rows[m - 1][j]],
            )
        })
        .collect();
    let flagged = order
        .iter()
        .enumerate()
        .filter(|(_, p)| p.is_none_or(|p| (p - template.order as f64).abs() > ORDER_FLAG))
        .map(|(j, _)| j)
        .collect();
    let mut report = finest.expect("n_list is non-empty");
    report.convergence_table = Some(ConvergenceTable {
        n_list: n_list.to_vec(),
        h: hs,
        eigenvalues: rows,
        order,
        expected_order: template.order,
        flagged,
    });
    Ok(report)
}

/// Element-wise comparison of the leading computed eigenvalues with an
/// oracle list; a pair passes when within `tol_abs` or `tol_rel`.
pub fn compare_oracle(report: &SpectrumReport, oracle: &[f64], tol_abs: f64, tol_rel: f64) -> Result<OracleComparison> {
    if oracle.len() > report.eigenvalues.len() {
        return Err(Error::InvalidArgument(format!(
            "{} oracle values for {} computed eigenvalues",
            oracle.len(),
            report.eigenvalues.len()
        )));
    }
    let rows: Vec<OracleRow> = oracle
        .iter()
        .zip(&report.eigenvalues)
        .enumerate()
        .map(|(index, (&o, &c))| {
            let abs_err = (c - o).abs();
            let rel_err = (o != 0.0).then(|| abs_err / o.abs());
            OracleRow {
                index,
                computed: c,
                oracle: o,
                abs_err,
                rel_err,
                pass: abs_err <= tol_abs || rel_err.is_some_and(|r| r <= tol_rel),
            }
        })
        .collect();
    let pass = rows.iter().all(|r| r.pass);
    Ok(OracleComparison { tol_abs, tol_rel, rows, pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_estimate_recovers_power_law() {
        let h = [0.1, 0.05, 0.025];
        let l = h.map(|x| -1.0 + 3.0 * x * x);
        assert!((richardson_order(h, l).unwrap() - 2.0).abs() < 1e-9);
        let h = [0.3, 0.2, 0.1];
        let l = h.map(|x: f64| 2.0 - 0.5 * x.powi(4));
        assert!((richardson_order(h, l).unwrap() - 4.0).abs() < 1e-9);
        assert_eq!(richardson_order(h, [1.0, 1.0, 1.0]), None);
    }

    fn dummy(values: Vec<f64>) -> SpectrumReport {
        SpectrumReport {
            scenario: "su2-conj".into(),
            representation: "trivial".into(),
            ordering: ORDERING.into(),
            method: Method::Tridiagonal,
            grid_config: GridConfig::uniform(0.0, 1.0, 3),
            residuals: vec![0.0; values.len()],
            eigenvalues: values,
            matrix_norm: 1.0,
            orthonormality_defect: 0.0,
            eigenvectors: None,
            oracle_comparison: None,
            convergence_table: None,
        }
    }

    #[test]
    fn oracle_comparison_rules() {
        let r = dummy(vec![0.0, -0.75, -2.0]);
        assert!(compare_oracle(&r, &[], 0.0, 0.0).unwrap().pass);
        let c = compare_oracle(&r, &[1e-9, -0.75001], 1e-8, 1e-4).unwrap();
        assert!(c.pass);
        assert!(!compare_oracle(&r, &[0.0, -0.8], 1e-8, 1e-4).unwrap().pass);
        assert!(compare_oracle(&r, &[0.0; 4], 1.0, 1.0).is_err());
    }
}
