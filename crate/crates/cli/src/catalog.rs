//! Scenario listing: section intervals, representations with their
//! `dim V^K`, and available oracles.

use std::fmt::Write;

use reduce_core::equivariant::invariant_vectors;
use reduce_core::geometry::{Scenario, ScenarioId};
use reduce_core::lie::Representation;
use reduce_core::oracle::OracleId;
use serde::Serialize;

/// Representations exercised by the catalog and the verification suite.
pub fn representations(id: ScenarioId) -> &'static [&'static str] {
    match id {
        ScenarioId::U1Plane => &["trivial", "charge:1", "charge:2", "charge:3"],
        ScenarioId::So3Space => &["trivial", "spin:1", "spin:2"],
        ScenarioId::Su2Conj => &["trivial", "spin:1/2", "spin:1", "spin:3/2", "spin:2", "spin:3"],
        ScenarioId::Su3Conj => &["trivial", "defining", "adjoint"],
    }
}

pub fn oracles(id: ScenarioId) -> Vec<OracleId> {
    OracleId::ALL.into_iter().filter(|o| o.scenario() == id).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct RepEntry {
    pub label: String,
    pub dim: usize,
    pub dim_vk: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub scenario: ScenarioId,
    pub group: String,
    pub section_dim: usize,
    pub section_interval: (f64, f64),
    pub representations: Vec<RepEntry>,
    pub oracles: Vec<OracleId>,
}

pub fn catalog_entry(id: ScenarioId) -> CatalogEntry {
    let s = Scenario::catalog(id);
    let representations = representations(id)
        .iter()
        .map(|label| {
            let rep = Representation::parse(s.group, label).expect("catalog labels parse");
            RepEntry {
                label: label.to_string(),
                dim: rep.dim(),
                dim_vk: invariant_vectors(&rep, &s.algebra).dim_vk,
            }
        })
        .collect();
    CatalogEntry {
        scenario: id,
        group: s.group.to_string(),
        section_dim: s.section_dim(),
        section_interval: s.section.bounds(),
        representations,
        oracles: oracles(id),
    }
}

pub fn catalog() -> Vec<CatalogEntry> {
    ScenarioId::ALL.into_iter().map(catalog_entry).collect()
}

pub fn render(entries: &[CatalogEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        let (lo, hi) = e.section_interval;
        let _ = writeln!(
            out,
            "{}  group={}  section_dim={}  interval=({}, {})",
            e.scenario, e.group, e.section_dim, lo, hi
        );
        for r in &e.representations {
            let _ = writeln!(out, "  {:<10} dim={:<2} dim V^K = {}", r.label, r.dim, r.dim_vk);
        }
        let names: Vec<&str> = e.oracles.iter().map(|o| o.as_str()).collect();
        let _ = writeln!(
            out,
            "  oracles: {}",
            if names.is_empty() { "none".to_string() } else { names.join(", ") }
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim_vk(id: ScenarioId, label: &str) -> usize {
        catalog_entry(id)
            .representations
            .into_iter()
            .find(|r| r.label == label)
            .unwrap()
            .dim_vk
    }

    #[test]
    fn listing_covers_catalog() {
        let all = catalog();
        assert_eq!(all.len(), 4);
        assert_eq!(dim_vk(ScenarioId::Su2Conj, "spin:1"), 1);
        assert_eq!(dim_vk(ScenarioId::Su2Conj, "spin:1/2"), 0);
        assert_eq!(dim_vk(ScenarioId::Su3Conj, "adjoint"), 2);
        assert_eq!(dim_vk(ScenarioId::U1Plane, "charge:3"), 1);
        let text = render(&all);
        assert!(text.contains("su3-conj"));
        assert!(text.contains("oracles: none"));
    }
}
