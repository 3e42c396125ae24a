//! JSON documents written by the command line tool.
//!
//! All output goes through [`canonical_json`]: values are converted to a
//! `serde_json::Value`, whose objects keep keys sorted, so identical inputs
//! give byte-identical output.

use serde::{Deserialize, Serialize};

use cyclic_units::arithmetic::{DecompositionReport, ExtensionDatum, GuaranteedSummands};
use cyclic_units::diagrams::{indecomposability_certificate, recognize_standard_sum, validate_diagram, YakovlevDiagram};

pub const TOOL_VERSION: &str = concat!("cyclic-units ", env!("CARGO_PKG_VERSION"));

pub fn canonical_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    serde_json::to_string_pretty(&serde_json::to_value(value)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDocument {
    pub level: u32,
    pub invariants: Vec<u64>,
    /// `(a, j)` pairs of `⊕ (Z/p^a)[Γ/Γ_j]`, or null when not recognized.
    pub standard_sum: Option<Vec<(u32, u32)>>,
    pub action: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDocument {
    pub from: u32,
    pub to: u32,
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramDocument {
    pub tool_version: String,
    pub p: u64,
    pub n: u32,
    pub lattice: String,
    pub rank: usize,
    pub levels: Vec<LevelDocument>,
    pub ups: Vec<MapDocument>,
    pub downs: Vec<MapDocument>,
    pub valid: bool,
    pub indecomposability_certificate: bool,
}

impl DiagramDocument {
    pub fn new(lattice: String, rank: usize, d: &YakovlevDiagram) -> Self {
        let levels = d
            .levels()
            .iter()
            .enumerate()
            .map(|(i, x)| LevelDocument {
                level: i as u32 + 1,
                invariants: x.snf_invariants(),
                standard_sum: recognize_standard_sum(x),
                action: x.action().clone(),
            })
            .collect();
        let maps = |fs: &[cyclic_units::diagrams::GammaMap], up: bool| {
            fs.iter()
                .enumerate()
                .map(|(i, f)| {
                    let (lo, hi) = (i as u32 + 1, i as u32 + 2);
                    let (from, to) = if up { (lo, hi) } else { (hi, lo) };
                    MapDocument { from, to, matrix: f.matrix().clone() }
                })
                .collect()
        };
        DiagramDocument {
            tool_version: TOOL_VERSION.into(),
            p: d.params().p(),
            n: d.params().n(),
            lattice,
            rank,
            levels,
            ups: maps(d.ups(), true),
            downs: maps(d.downs(), false),
            valid: validate_diagram(d),
            indecomposability_certificate: indecomposability_certificate(d),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub tool_version: String,
    pub input: ExtensionDatum,
    pub report: DecompositionReport,
    pub guaranteed_summands: GuaranteedSummands,
}

impl ReportDocument {
    pub fn new(input: ExtensionDatum, report: DecompositionReport, guaranteed: GuaranteedSummands) -> Self {
        ReportDocument { tool_version: TOOL_VERSION.into(), input, report, guaranteed_summands: guaranteed }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cyclic_units::arithmetic::{guaranteed_summands, recover_structure, RamifiedPlace, Regime};

    #[test]
    fn report_round_trips_byte_identically() {
        let datum = ExtensionDatum {
            p: 3,
            n: 2,
            r1: 2,
            r2: 1,
            ramified: vec![RamifiedPlace { inertia_order: 3, decomposition_order: 9 }; 3],
            s_counts: vec![1, 0, 0],
            regime: Regime::HilbertCyclic,
            all_s_split: Some(true),
        };
        let doc = ReportDocument::new(
            datum.clone(),
            recover_structure(&datum).unwrap(),
            guaranteed_summands(&datum).unwrap(),
        );
        let first = canonical_json(&doc).unwrap();
        let parsed: ReportDocument = serde_json::from_str(&first).unwrap();
        assert_eq!(parsed, doc);
        assert_eq!(canonical_json(&parsed).unwrap(), first);
    }
}
