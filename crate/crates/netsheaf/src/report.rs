//! Serializable report shapes for the JSON output mode.
//!
//! The JSON schema mirrors the analysis report: dimensions, the classified
//! `H^0` basis, degree-1 certificates, oracle results, and optionally the
//! incremental replay log, the coboundary dump, and a DOT rendering.
//! Serialization round-trips losslessly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cohomology::{CohomologyReport, EdgeValue, QlsStatus, SectionClass};
use crate::mayer_vietoris::{MvLedger, StepKind};
use crate::netlist::Netlist;

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct AnalysisJson {
    pub circuit: String,
    pub gates: usize,
    pub edges: usize,
    pub internal_edges: usize,
    pub dim_c0: usize,
    pub dim_c1: usize,
    pub dim_h0: usize,
    pub dim_h1: usize,
    pub h0_basis: Vec<SectionJson>,
    pub h1_generators: Vec<GeneratorJson>,
    pub qls: QlsJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mv: Option<MvJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d0: Option<D0Json>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dot: Option<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct SectionJson {
    /// Rendered tensor expression, e.g. `~a + ~c + ~d*e`.
    pub section: String,
    /// `qls_lift` or `transient`.
    pub class: String,
    /// Edge id to `logic0` / `logic1` / `zero` / `superposed`.
    pub edges: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct GeneratorJson {
    /// Rendered certificate over the wire planes, e.g. `~c + c + ~d + d + ~e + e`.
    pub generator: String,
    /// Edge ids carrying a nonzero component.
    pub support: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct QlsJson {
    /// `checked`, `refused`, or `disabled`.
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assignments: Option<Vec<BTreeMap<String, u8>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub forward_lift_ok: Option<bool>,
    /// Absent when the kernel enumeration was skipped (dimension cap).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reverse_lift_ok: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct MvJson {
    pub steps: Vec<StepJson>,
    pub final_dim_h0: usize,
    pub final_dim_h1: usize,
    /// `ok` when the ledger agrees with the direct computation.
    pub cross_check: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct StepJson {
    pub step: usize,
    /// `gate` or `wire`.
    pub kind: String,
    pub id: String,
    pub dim_h0: usize,
    pub dim_h1: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub feedback_class: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank_delta: Option<usize>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct D0Json {
    pub rows: usize,
    pub cols: usize,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    /// One `0`/`1` string per row.
    pub bits: Vec<String>,
}

fn edge_value_name(v: EdgeValue) -> &'static str {
    match v {
        EdgeValue::Logic0 => "logic0",
        EdgeValue::Logic1 => "logic1",
        EdgeValue::Zero => "zero",
        EdgeValue::Superposed => "superposed",
    }
}

pub fn section_json(nl: &Netlist, report: &CohomologyReport, index: usize) -> SectionJson {
    let section = &report.h0_basis[index];
    SectionJson {
        section: report.complex.render_cochain(nl, &section.coefficients),
        class: match section.class {
            SectionClass::QlsLift => "qls_lift".to_string(),
            SectionClass::Transient => "transient".to_string(),
        },
        edges: nl
            .edges
            .iter()
            .zip(&section.per_edge)
            .map(|(e, &v)| (e.id.clone(), edge_value_name(v).to_string()))
            .collect(),
    }
}

pub fn qls_json(nl: &Netlist, report: &CohomologyReport) -> QlsJson {
    match &report.qls {
        QlsStatus::Checked(q) => QlsJson {
            status: "checked".into(),
            count: Some(q.count()),
            assignments: Some(
                q.assignments
                    .iter()
                    .map(|s| {
                        nl.edges
                            .iter()
                            .zip(s)
                            .map(|(e, &b)| (e.id.clone(), u8::from(b)))
                            .collect()
                    })
                    .collect(),
            ),
            forward_lift_ok: Some(q.forward_lift_ok),
            reverse_lift_ok: q.reverse_lift_ok,
            detail: None,
        },
        QlsStatus::Refused(e) => QlsJson {
            status: "refused".into(),
            count: None,
            assignments: None,
            forward_lift_ok: None,
            reverse_lift_ok: None,
            detail: Some(e.to_string()),
        },
        QlsStatus::Disabled => QlsJson {
            status: "disabled".into(),
            count: None,
            assignments: None,
            forward_lift_ok: None,
            reverse_lift_ok: None,
            detail: None,
        },
    }
}

pub fn mv_json(ledger: &MvLedger) -> MvJson {
    let steps = ledger
        .history()
        .iter()
        .enumerate()
        .map(|(i, s)| match &s.kind {
            StepKind::AddGate { gate } => StepJson {
                step: i + 1,
                kind: "gate".into(),
                id: gate.clone(),
                dim_h0: s.dim_h0,
                dim_h1: s.dim_h1,
                feedback_class: None,
                rank_delta: None,
            },
            StepKind::AttachWire { id, class, rank_delta } => StepJson {
                step: i + 1,
                kind: "wire".into(),
                id: id.clone(),
                dim_h0: s.dim_h0,
                dim_h1: s.dim_h1,
                feedback_class: Some(class.to_string()),
                rank_delta: Some(*rank_delta),
            },
        })
        .collect();
    MvJson {
        steps,
        final_dim_h0: ledger.dim_h0(),
        final_dim_h1: ledger.dim_h1(),
        cross_check: "ok".into(),
    }
}

pub fn d0_json(nl: &Netlist, report: &CohomologyReport) -> D0Json {
    let cx = &report.complex;
    D0Json {
        rows: cx.c1_dim(),
        cols: cx.c0_dim(),
        row_labels: cx.row_labels(nl),
        col_labels: cx.column_labels(nl),
        bits: (0..cx.c1_dim())
            .map(|r| (0..cx.c0_dim()).map(|c| if cx.d0.get(r, c) { '1' } else { '0' }).collect())
            .collect(),
    }
}

/// Builds the complete JSON document for one analysis.
pub fn analysis_json(
    circuit: &str,
    nl: &Netlist,
    report: &CohomologyReport,
    mv: Option<&MvLedger>,
    include_d0: bool,
    dot: Option<String>,
) -> AnalysisJson {
    AnalysisJson {
        circuit: circuit.to_string(),
        gates: nl.gates.len(),
        edges: nl.edges.len(),
        internal_edges: nl.internal_edges().len(),
        dim_c0: report.complex.c0_dim(),
        dim_c1: report.complex.c1_dim(),
        dim_h0: report.dim_h0(),
        dim_h1: report.dim_h1(),
        h0_basis: (0..report.h0_basis.len()).map(|i| section_json(nl, report, i)).collect(),
        h1_generators: report
            .h1_generators
            .iter()
            .map(|g| GeneratorJson {
                generator: report.complex.render_c1(nl, g),
                support: report
                    .complex
                    .c1_blocks
                    .iter()
                    .filter(|b| g.get(b.offset) || g.get(b.offset + 1))
                    .map(|b| nl.edges[b.edge].id.clone())
                    .collect(),
            })
            .collect(),
        qls: qls_json(nl, report),
        mv: mv.map(mv_json),
        d0: include_d0.then(|| d0_json(nl, report)),
        dot,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits;
    use crate::cohomology::compute_cohomology;
    use crate::mayer_vietoris::replay;

    #[test]
    fn json_round_trips_losslessly() {
        let nl = Netlist::parse(circuits::GLITCH).unwrap();
        let report = compute_cohomology(&nl);
        let (ledger, _) = replay(&nl).unwrap();
        let doc = analysis_json("glitch.net", &nl, &report, Some(&ledger), true, None);
        let text = serde_json::to_string_pretty(&doc).unwrap();
        let back: AnalysisJson = serde_json::from_str(&text).unwrap();
        assert_eq!(doc, back);
    }

    #[test]
    fn glitch_json_reports_expected_dimensions() {
        let nl = Netlist::parse(circuits::GLITCH).unwrap();
        let report = compute_cohomology(&nl);
        let doc = analysis_json("glitch.net", &nl, &report, None, false, None);
        assert_eq!((doc.dim_h0, doc.dim_h1), (3, 1));
        assert_eq!(doc.qls.count, Some(2));
        assert_eq!(doc.h1_generators[0].support, vec!["c", "d", "e"]);
        let classes: Vec<&str> = doc.h0_basis.iter().map(|s| s.class.as_str()).collect();
        assert_eq!(classes, vec!["qls_lift", "qls_lift", "transient"]);
    }

    #[test]
    fn refused_oracle_marks_fields_unavailable() {
        let nl = Netlist::parse(circuits::GLITCH).unwrap();
        let report = crate::cohomology::compute_cohomology_with(
            &nl,
            &crate::cohomology::AnalysisOptions { oracle_cap: 1, ..Default::default() },
        );
        let doc = analysis_json("glitch.net", &nl, &report, None, false, None);
        assert_eq!(doc.qls.status, "refused");
        assert_eq!(doc.qls.count, None);
        assert!(doc.qls.detail.unwrap().contains("cap"));
    }
}
