//! Assembly of the reduced operator
//! `Δ_Σ - δ^{-1/2} Δ_Σ(δ^{1/2}) + b^{αβ} ρ'(T_α) ρ'(T_β)` on a grid over the
//! section, acting on `V^K`-valued grid functions.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::equivariant::{invariant_vectors, real_coupling, spin_coupling, InvariantSubspace};
use crate::error::{Error, Result};
use crate::geometry::{Scenario, ScenarioId, SectionDomain};
use crate::lie::{DualBasisPair, Representation};
use crate::spectral::BandMatrix;
use crate::testfn::TestFunction;

/// Maximum number of step halvings in the extrapolation tableau.
const TABLEAU_LEVELS: usize = 10;

/// Second derivative of `f` at `x` by a fourth-order central difference
/// with step `s0, s0/2, …`, extrapolated in the error series `s⁴, s⁶, …`.
///
/// Returns the estimate and an error estimate. The stencil reaches
/// `x ± 2 s0`.
pub fn second_derivative<F: Fn(f64) -> Result<f64>>(f: F, x: f64, s0: f64) -> Result<(f64, f64)> {
    let f0 = f(x)?;
    let stencil = |s: f64| -> Result<f64> {
        let (p1, m1, p2, m2) = (f(x + s)?, f(x - s)?, f(x + 2.0 * s)?, f(x - 2.0 * s)?);
        Ok((16.0 * (p1 + m1) - (p2 + m2) - 30.0 * f0) / (12.0 * s * s))
    };
    let mut prev: Vec<f64> = vec![stencil(s0)?];
    let mut best = prev[0];
    let mut best_err = f64::INFINITY;
    let mut s = s0;
    for _ in 1..TABLEAU_LEVELS {
        s /= 2.0;
        let mut row = vec![stencil(s)?];
        let mut factor = 16.0;
        for j in 1..=prev.len() {
            let next = row[j - 1] + (row[j - 1] - prev[j - 1]) / (factor - 1.0);
            factor *= 4.0;
            let err = (next - row[j - 1]).abs().max((next - prev[j - 1]).abs());
            if err <= best_err {
                best_err = err;
                best = next;
            }
            row.push(next);
        }
        let last = prev.len();
        if (row[last] - prev[last - 1]).abs() >= 2.0 * best_err {
            break;
        }
        prev = row;
    }
    Ok((best, best_err))
}

/// `δ^{-1/2} Δ_Σ(δ^{1/2})` at `x`, computed numerically from `δ`.
pub fn effective_potential(scenario: &Scenario, x: &[f64]) -> Result<f64> {
    let dual = scenario.algebra.dual_bases()?;
    effective_potential_with(scenario, &dual, x, 1.0)
}

/// As [`effective_potential`] with `δ` replaced by `c δ`.
pub fn effective_potential_with(
    scenario: &Scenario,
    dual: &DualBasisPair,
    x: &[f64],
    c: f64,
) -> Result<f64> {
    let dist = scenario.boundary_distance(x);
    if !(dist > 0.0) {
        return Err(Error::Boundary {
            x: x.to_vec(),
            reason: "no room for the difference stencil".into(),
        });
    }
    let root = |p: &[f64]| scenario.density(dual, p).map(|d| (c * d).sqrt());
    let center = root(x)?;
    let mut lap = 0.0;
    for axis in 0..x.len() {
        let along = |t: f64| {
            let mut p = x.to_vec();
            p[axis] = t;
            root(&p)
        };
        lap += second_derivative(along, x[axis], dist / 3.0)?.0;
    }
    Ok(lap / (scenario.h_metric() * center))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    #[default]
    Dirichlet,
}

impl FromStr for BoundaryCondition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dirichlet" => Ok(BoundaryCondition::Dirichlet),
            other => Err(Error::UnsupportedConfig(format!("boundary condition {other}"))),
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("dirichlet")
    }
}

/// Grid over `[x_min, x_max]` (per axis for a two-dimensional section)
/// with `n` interior nodes per axis; the endpoints carry the boundary
/// condition. `nodes`, if given, replaces the uniform interior nodes of a
/// one-dimensional grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
    pub order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nodes: Option<Vec<f64>>,
}

impl GridConfig {
    pub fn uniform(x_min: f64, x_max: f64, n: usize) -> Self {
        Self {
            x_min,
            x_max,
            n,
            order: 2,
            nodes: None,
        }
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }

    pub fn with_nodes(mut self, nodes: Vec<f64>) -> Self {
        self.n = nodes.len();
        self.nodes = Some(nodes);
        self
    }

    /// Catalog default: the whole legal section interval, or `(0, 20)` on
    /// rays.
    pub fn default_for(scenario: &Scenario, n: usize) -> Self {
        let (lo, hi) = scenario.section.bounds();
        Self::uniform(lo, if hi.is_finite() { hi } else { 20.0 }, n)
    }

    pub fn validate(&self, scenario: &Scenario) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if self.order != 2 && self.order != 4 {
            return Err(Error::UnsupportedConfig(format!("stencil order {}", self.order)));
        }
        if self.n == 0 {
            return bad("grid needs at least one node".into());
        }
        if !(self.x_min < self.x_max) || !self.x_min.is_finite() || !self.x_max.is_finite() {
            return bad(format!("grid interval [{}, {}] is empty", self.x_min, self.x_max));
        }
        let (lo, hi) = scenario.section.bounds();
        let slack = 1e-12 * hi.min(1e3).max(1.0);
        if self.x_min < lo - slack || self.x_max > hi + slack {
            return bad(format!(
                "grid interval [{}, {}] leaves the section interval ({lo}, {hi})",
                self.x_min, self.x_max
            ));
        }
        if scenario.section_dim() > 1 {
            if self.order == 4 {
                return Err(Error::UnsupportedConfig(
                    "fourth-order stencil on a two-dimensional section".into(),
                ));
            }
            if self.nodes.is_some() {
                return Err(Error::UnsupportedConfig(
                    "explicit nodes on a two-dimensional section".into(),
                ));
            }
        }
        if let Some(nodes) = &self.nodes {
            if self.order == 4 {
                return Err(Error::UnsupportedConfig(
                    "fourth-order stencil on a non-uniform grid".into(),
                ));
            }
            let inside = nodes.iter().all(|&x| x > self.x_min && x < self.x_max);
            let increasing = nodes.windows(2).all(|w| w[0] < w[1]);
            if nodes.is_empty() || !inside || !increasing {
                return bad("explicit nodes must be strictly increasing and interior".into());
            }
        }
        Ok(())
    }
}

/// Interior nodes of a section grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    /// Section coordinates of each unknown node.
    pub points: Vec<Vec<f64>>,
    /// Uniform spacing, or the largest spacing of a non-uniform grid.
    pub h: f64,
    pub uniform: bool,
    /// Boundary positions `(x_min, x_max)`.
    pub bounds: (f64, f64),
    /// Two-dimensional grids: interior nodes per axis and the compressed
    /// index of each tensor node (row-major, first axis fastest).
    pub axis_len: usize,
    pub cell_index: Vec<Option<usize>>,
}

impl Grid {
    pub fn build(config: &GridConfig, scenario: &Scenario) -> Result<Self> {
        config.validate(scenario)?;
        let (a, b) = (config.x_min, config.x_max);
        if scenario.section_dim() == 1 {
            let (points, h, uniform): (Vec<Vec<f64>>, f64, bool) = match &config.nodes {
                Some(nodes) => {
                    let mut h = 0.0f64;
                    let mut prev = a;
                    for &x in nodes.iter().chain(std::iter::once(&b)) {
                        h = h.max(x - prev);
                        prev = x;
                    }
                    (nodes.iter().map(|&x| vec![x]).collect(), h, false)
                }
                None => {
                    let h = (b - a) / (config.n + 1) as f64;
                    let pts = (1..=config.n).map(|i| vec![a + i as f64 * h]).collect();
                    (pts, h, true)
                }
            };
            return Ok(Self {
                points,
                h,
                uniform,
                bounds: (a, b),
                axis_len: 0,
                cell_index: Vec::new(),
            });
        }
        let n = config.n;
        let h = (b - a) / (n + 1) as f64;
        let mut points = Vec::new();
        let mut cell_index = vec![None; n * n];
        for j in 0..n {
            for i in 0..n {
                let p = vec![a + (i + 1) as f64 * h, a + (j + 1) as f64 * h];
                if scenario.boundary_distance(&p) > 0.0 {
                    cell_index[j * n + i] = Some(points.len());
                    points.push(p);
                }
            }
        }
        if points.is_empty() {
            return Err(Error::InvalidArgument("no grid node lies inside the section".into()));
        }
        Ok(Self {
            points,
            h,
            uniform: true,
            bounds: (a, b),
            axis_len: n,
            cell_index,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.first().map_or(1, |p| p.len())
    }

    /// First coordinate of every node.
    pub fn xs(&self) -> Vec<f64> {
        self.points.iter().map(|p| p[0]).collect()
    }

    /// Symmetric second-difference stencil for `Σ ∂²` as upper-triangle
    /// entries `(i, j, value)` with `i ≤ j`, plus the diagonal node weights
    /// `w^{1/2}` that symmetrize a non-uniform grid.
    fn stencil(&self, order: usize) -> (Vec<(usize, usize, f64)>, Vec<f64>) {
        let n = self.len();
        let mut out = Vec::new();
        let mut sqrt_w = vec![1.0; n];
        if self.dim() == 2 {
            let m = self.axis_len;
            let c = 1.0 / (self.h * self.h);
            for j in 0..m {
                for i in 0..m {
                    let Some(k) = self.cell_index[j * m + i] else { continue };
                    out.push((k, k, -4.0 * c));
                    if i + 1 < m {
                        if let Some(r) = self.cell_index[j * m + i + 1] {
                            out.push((k, r, c));
                        }
                    }
                    if j + 1 < m {
                        if let Some(u) = self.cell_index[(j + 1) * m + i] {
                            out.push((k, u, c));
                        }
                    }
                }
            }
            return (out, sqrt_w);
        }
        if !self.uniform {
            let xs = self.xs();
            let at = |i: isize| -> f64 {
                if i < 0 {
                    self.bounds.0
                } else if i as usize >= n {
                    self.bounds.1
                } else {
                    xs[i as usize]
                }
            };
            let gap = |i: isize| at(i + 1) - at(i);
            let w: Vec<f64> = (0..n as isize).map(|i| 0.5 * (gap(i - 1) + gap(i))).collect();
            for i in 0..n {
                sqrt_w[i] = w[i].sqrt();
                let ii = i as isize;
                out.push((i, i, -(1.0 / gap(ii - 1) + 1.0 / gap(ii)) / w[i]));
                if i + 1 < n {
                    out.push((i, i + 1, 1.0 / (gap(ii) * (w[i] * w[i + 1]).sqrt())));
                }
            }
            return (out, sqrt_w);
        }
        let h2 = self.h * self.h;
        if order == 2 {
            for i in 0..n {
                out.push((i, i, -2.0 / h2));
                if i + 1 < n {
                    out.push((i, i + 1, 1.0 / h2));
                }
            }
        } else {
            // odd reflection across each Dirichlet end adds +1 to the
            // first and last diagonal entries
            let c = 1.0 / (12.0 * h2);
            for i in 0..n {
                let mut diag = -30.0;
                if i == 0 {
                    diag += 1.0;
                }
                if i + 1 == n {
                    diag += 1.0;
                }
                out.push((i, i, diag * c));
                if i + 1 < n {
                    out.push((i, i + 1, 16.0 * c));
                }
                if i + 2 < n {
                    out.push((i, i + 2, -c));
                }
            }
        }
        (out, sqrt_w)
    }
}

/// The discretized reduced operator on `V^K`-valued grid functions,
/// unknowns ordered node-major.
#[derive(Debug, Clone)]
pub struct ReducedOperator {
    pub scenario: ScenarioId,
    pub representation: String,
    pub config: GridConfig,
    pub grid: Grid,
    pub order: usize,
    pub h_metric: f64,
    pub delta: Vec<f64>,
    pub v_eff: Vec<f64>,
    pub spin: Vec<DMatrix<f64>>,
    pub dim_vk: usize,
    pub invariant: InvariantSubspace,
    pub matrix: BandMatrix,
    pub bc: BoundaryCondition,
    /// `w_i^{1/2}` of the symmetrizing similarity (all ones when uniform).
    pub sqrt_weights: Vec<f64>,
}

impl ReducedOperator {
    pub fn dim(&self) -> usize {
        self.matrix.n()
    }

    /// The (non-symmetrized) operator applied to grid samples.
    pub fn apply(&self, f: &[f64]) -> Vec<f64> {
        let d = self.dim_vk;
        let scaled: Vec<f64> = f
            .iter()
            .enumerate()
            .map(|(k, v)| v * self.sqrt_weights[k / d])
            .collect();
        self.matrix
            .mul_vec(&scaled)
            .into_iter()
            .enumerate()
            .map(|(k, v)| v / self.sqrt_weights[k / d])
            .collect()
    }

    /// Quadrature weight of each node in the discrete inner product.
    pub fn node_measure(&self) -> Vec<f64> {
        if self.grid.uniform {
            vec![self.grid.h.powi(self.grid.dim() as i32); self.grid.len()]
        } else {
            self.sqrt_weights.iter().map(|s| s * s).collect()
        }
    }

    /// `max |M - Mᵀ|`; zero by construction.
    pub fn asymmetry(&self) -> f64 {
        self.matrix.asymmetry()
    }

    /// Grid sample of `δ^{1/2}(x) · coords_{V^K} F(q(x))` or of the same
    /// with `Δ_Y F`, split into real and imaginary parts.
    fn sample(&self, scenario: &Scenario, f: &TestFunction, laplacian: bool) -> Result<(Vec<f64>, Vec<f64>)> {
        let d = self.dim_vk;
        let mut re = vec![0.0; self.dim()];
        let mut im = vec![0.0; self.dim()];
        for (node, x) in self.grid.points.iter().enumerate() {
            let q = scenario.section_point(x);
            let v = if laplacian {
                f.laplacian(scenario, &q)?
            } else {
                f.eval(scenario, &q)?
            };
            if v.len() != self.invariant.basis.nrows() {
                return Err(Error::DimensionMismatch(format!(
                    "test function has {} components, representation has dimension {}",
                    v.len(),
                    self.invariant.basis.nrows()
                )));
            }
            let c = self.invariant.coordinates(&v) * Complex64::new(self.delta[node].sqrt(), 0.0);
            for k in 0..d {
                re[node * d + k] = c[k].re;
                im[node * d + k] = c[k].im;
            }
        }
        Ok((re, im))
    }
}

pub fn assemble(
    scenario: &Scenario,
    rep: &Representation,
    config: &GridConfig,
    bc: BoundaryCondition,
) -> Result<ReducedOperator> {
    assemble_scaled(scenario, rep, config, bc, 1.0)
}

/// [`assemble`] with the density replaced by `c δ` in the effective
/// potential.
pub fn assemble_scaled(
    scenario: &Scenario,
    rep: &Representation,
    config: &GridConfig,
    bc: BoundaryCondition,
    c: f64,
) -> Result<ReducedOperator> {
    let inv = invariant_vectors(rep, &scenario.algebra);
    if !inv.is_usable() {
        return Err(Error::UnusablePair);
    }
    let grid = Grid::build(config, scenario)?;
    let dual = scenario.algebra.dual_bases()?;
    let h_metric = scenario.h_metric();
    let d = inv.dim_vk;

    let mut delta = Vec::with_capacity(grid.len());
    let mut v_eff = Vec::with_capacity(grid.len());
    let mut spin = Vec::with_capacity(grid.len());
    for x in &grid.points {
        let sample = scenario.inertia(&dual, x)?;
        delta.push(sample.delta);
        spin.push(real_coupling(&spin_coupling(rep, &inv, &sample, &dual)?)?);
        v_eff.push(effective_potential_with(scenario, &dual, x, c)?);
    }

    let (stencil, sqrt_weights) = grid.stencil(config.order);
    let kd_nodes = stencil.iter().map(|(i, j, _)| j - i).max().unwrap_or(0);
    let kd = kd_nodes * d + d.saturating_sub(1);
    let mut m = BandMatrix::zeros(grid.len() * d, kd);
    for &(i, j, v) in &stencil {
        for k in 0..d {
            m.add(i * d + k, j * d + k, v / h_metric);
        }
    }
    for node in 0..grid.len() {
        for a in 0..d {
            m.add(node * d + a, node * d + a, -v_eff[node]);
            for b in a..d {
                let s = &spin[node];
                m.add(node * d + a, node * d + b, 0.5 * (s[(a, b)] + s[(b, a)]));
            }
        }
    }
    for i in 0..m.n() {
        for j in (i + 1)..(i + kd + 1).min(m.n()) {
            let v = m.get(i, j);
            m.set(j, i, v);
        }
    }

    Ok(ReducedOperator {
        scenario: scenario.id,
        representation: rep.label.clone(),
        config: config.clone(),
        grid,
        order: config.order,
        h_metric,
        delta,
        v_eff,
        spin,
        dim_vk: d,
        invariant: inv,
        matrix: m,
        bc,
        sqrt_weights,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferReport {
    /// Max-norm of `Δ_red f - δ^{1/2} (Δ_Y F)|_Σ` over the nodes used.
    pub residual: f64,
    pub h: f64,
    pub nodes_used: usize,
    pub window: Option<(f64, f64)>,
}

/// Compares the discrete reduced operator on `f = δ^{1/2} F|_Σ` with the
/// ambient Laplacian of the equivariant building block `F`, optionally
/// restricted to nodes whose first coordinate lies in `window`.
pub fn unitary_transfer_check(
    scenario: &Scenario,
    op: &ReducedOperator,
    f: &TestFunction,
    window: Option<(f64, f64)>,
) -> Result<TransferReport> {
    let (fr, fi) = op.sample(scenario, f, false)?;
    let (lr, li) = op.sample(scenario, f, true)?;
    let (ar, ai) = (op.apply(&fr), op.apply(&fi));
    let d = op.dim_vk;
    let mut residual = 0.0f64;
    let mut used = 0;
    for (node, x) in op.grid.points.iter().enumerate() {
        if let Some((lo, hi)) = window {
            if x[0] < lo || x[0] > hi {
                continue;
            }
        }
        used += 1;
        for k in 0..d {
            let idx = node * d + k;
            residual = residual.max((ar[idx] - lr[idx]).hypot(ai[idx] - li[idx]));
        }
    }
    Ok(TransferReport {
        residual,
        h: op.grid.h,
        nodes_used: used,
        window,
    })
}

/// `log(e_i / e_{i+1}) / log(h_i / h_{i+1})` for consecutive refinements.
pub fn observed_orders(hs: &[f64], errs: &[f64]) -> Vec<f64> {
    hs.windows(2)
        .zip(errs.windows(2))
        .map(|(h, e)| (e[0] / e[1]).ln() / (h[0] / h[1]).ln())
        .collect()
}

/// Catalog closed forms of the effective potential, used as oracles.
pub fn effective_potential_closed_form(scenario: &Scenario, x: &[f64]) -> Option<f64> {
    match (scenario.id, scenario.section) {
        (ScenarioId::U1Plane, SectionDomain::Ray) => Some(-1.0 / (4.0 * x[0] * x[0])),
        (ScenarioId::So3Space, SectionDomain::Ray) => Some(0.0),
        (ScenarioId::Su2Conj, _) => Some(-0.25),
        (ScenarioId::Su3Conj, _) => Some(-2.0),
        _ => None,
    }
}
