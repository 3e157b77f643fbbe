//! Built-in golden checks over the bundled circuits.
//!
//! Every check pins an exact expected value: coboundary matrices bit for
//! bit, dimensions, difference-map matrices, classifications, state counts.
//! The `paper-suite` command runs them and prints one line per check.

use std::str::FromStr;

use crate::circuits;
use crate::cohomology::{compute_cohomology, conjecture_check, tree_formula_check, SectionClass};
use crate::gf2::{in_span, GF2Matrix, GF2Vector};
use crate::mayer_vietoris::{replay, FeedbackClass, MvLedger, StepKind};
use crate::netlist::{Netlist, DEFAULT_ORACLE_CAP};

pub struct Check {
    pub name: &'static str,
    pub run: fn() -> Result<(), String>,
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg.into()) }
}

fn parse(text: &str) -> Netlist {
    Netlist::parse(text).expect("bundled circuit must parse")
}

fn golden(rows: &str) -> GF2Matrix {
    GF2Matrix::from_str(rows).expect("golden matrix literal")
}

fn glitch_coboundary_bitexact() -> Result<(), String> {
    let nl = parse(circuits::GLITCH);
    let report = compute_cohomology(&nl);
    let expected = golden(
        "10100000\n01010000\n10001100\n01000011\n00011010\n00100101",
    );
    ensure(
        report.complex.d0 == expected,
        format!("coboundary mismatch:\n{}", report.complex.dump_d0(&nl)),
    )
}

fn glitch_dims_and_certificate() -> Result<(), String> {
    let nl = parse(circuits::GLITCH);
    let report = compute_cohomology(&nl);
    ensure(report.dims() == (3, 1), format!("dims {:?}, expected (3, 1)", report.dims()))?;
    let generator = &report.h1_generators[0];
    let all_ones = GF2Vector::from_bits(vec![true; 6]);
    ensure(generator == &all_ones, format!("certificate {generator}, expected 111111"))?;
    // congruent to the all-ones wire vector modulo the image of d0
    let columns = report.complex.d0.columns();
    ensure(
        in_span(&columns, &generator.xor(&all_ones)),
        "certificate not congruent to the all-ones vector",
    )
}

fn glitch_basis_classification() -> Result<(), String> {
    let nl = parse(circuits::GLITCH);
    let report = compute_cohomology(&nl);
    let classes: Vec<SectionClass> = report.h0_basis.iter().map(|s| s.class).collect();
    ensure(
        classes == vec![SectionClass::QlsLift, SectionClass::QlsLift, SectionClass::Transient],
        format!("classification {classes:?}"),
    )
}

fn glitch_qls_oracle() -> Result<(), String> {
    let nl = parse(circuits::GLITCH);
    let qls = nl.qls_oracle(DEFAULT_ORACLE_CAP).map_err(|e| e.to_string())?;
    ensure(qls.len() == 2, format!("{} quiescent states, expected 2", qls.len()))?;
    let report = compute_cohomology(&nl);
    let q = report.qls.report().ok_or("oracle section missing")?;
    ensure(q.forward_lift_ok, "a quiescent state failed to lift")?;
    ensure(q.reverse_lift_ok == Some(true), "kernel enumeration found a spurious lift")
}

fn rsff_difference_map_bitexact() -> Result<(), String> {
    let nl = parse(circuits::RSFF);
    let rs = nl.gates[nl.gate_index("rs").ok_or("gate rs missing")?].clone();
    let ledger = MvLedger::new().add_gate(rs).map_err(|e| e.to_string())?;
    let (ledger, att) = ledger.attach_wire("c", ("rs", 1), ("rs", 2)).map_err(|e| e.to_string())?;
    ensure(att.p == golden("10101010\n01010101"), format!("P mismatch:\n{}", att.p))?;
    ensure(att.q == golden("00001110\n11110001"), format!("Q mismatch:\n{}", att.q))?;
    ensure(att.rank_delta == 3, format!("rank {} for the difference map, expected 3", att.rank_delta))?;
    ensure(att.class == FeedbackClass::Partial, "wire not classified as partial feedback")?;
    ensure(ledger.dims() == (7, 1), format!("ledger dims {:?}", ledger.dims()))
}

fn rsff_dims_both_paths() -> Result<(), String> {
    let nl = parse(circuits::RSFF);
    let (ledger, direct) = replay(&nl).map_err(|e| e.to_string())?;
    ensure(ledger.dims() == (7, 1), format!("ledger dims {:?}", ledger.dims()))?;
    ensure(direct.dims() == (7, 1), format!("direct dims {:?}", direct.dims()))
}

fn rsff_qls_table() -> Result<(), String> {
    let nl = parse(circuits::RSFF);
    let qls = nl.qls_oracle(DEFAULT_ORACLE_CAP).map_err(|e| e.to_string())?;
    let idx = |id: &str| nl.edge_index(id).unwrap();
    let rows: Vec<[bool; 4]> = qls
        .iter()
        .map(|s| [s[idx("a")], s[idx("b")], s[idx("c")], s[idx("q")]])
        .collect();
    let expected = [
        [false, false, true, true],  // danger
        [false, true, true, true],   // set
        [true, false, false, false], // reset
        [true, true, false, false],  // hold zero
        [true, true, true, true],    // hold one
    ];
    ensure(rows.len() == 5, format!("{} states, expected 5", rows.len()))?;
    for row in expected {
        ensure(rows.contains(&row), format!("state {row:?} missing"))?;
    }
    Ok(())
}

fn rsff_transition_sections() -> Result<(), String> {
    let nl = parse(circuits::RSFF);
    let report = compute_cohomology(&nl);
    let basis: Vec<GF2Vector> = report.h0_basis.iter().map(|s| s.coefficients.clone()).collect();
    // danger-to-reset and danger-to-set superpositions
    let danger_reset: GF2Vector = "10000100".parse().unwrap();
    let danger_set: GF2Vector = "10100000".parse().unwrap();
    ensure(in_span(&basis, &danger_reset), "danger/reset transition not in H^0")?;
    ensure(in_span(&basis, &danger_set), "danger/set transition not in H^0")?;
    let lifts = report.h0_basis.iter().filter(|s| s.class == SectionClass::QlsLift).count();
    ensure(lifts == 5, format!("{lifts} lift sections, expected 5"))?;
    ensure(report.dim_h0() == 7, "expected a 7-dimensional H^0")
}

fn minput_tree_dims() -> Result<(), String> {
    for m in 1..=6 {
        let nl = parse(&circuits::m_input_text(m));
        let (predicted, computed) = tree_formula_check(&nl).map_err(|e| e.to_string())?;
        ensure(
            predicted == computed && computed == 1 << m,
            format!("m={m}: predicted {predicted}, computed {computed}, expected {}", 1 << m),
        )?;
    }
    Ok(())
}

fn compose_tree_dims() -> Result<(), String> {
    for n in 1..=4usize {
        for m in 1..=4usize {
            // AND-like tables; the dimensions do not depend on the tables
            let v_bits = 1u64 << ((1 << n) - 1);
            let w_bits = 1u64 << ((1 << m) - 1);
            let nl = parse(&circuits::composition_text(n, m, v_bits, w_bits));
            let (predicted, computed) = tree_formula_check(&nl).map_err(|e| e.to_string())?;
            let expected = (1 << n) + (1 << m) - 2;
            ensure(
                predicted == computed && computed == expected,
                format!("n={n} m={m}: computed {computed}, expected {expected}"),
            )?;
        }
    }
    Ok(())
}

fn worked_trees_have_lifted_bases() -> Result<(), String> {
    for (name, text) in [("minput", circuits::MINPUT3), ("compose", circuits::COMPOSE22)] {
        let trial = conjecture_check(&parse(text));
        ensure(trial.holds, format!("{name}: lifted states span only {} of {}", trial.lifted_span_dim, trial.dim_h0))?;
    }
    Ok(())
}

fn selfloop_buf_complete() -> Result<(), String> {
    let nl = parse("gate b BUF\nwire r b.0 -> b.0\n");
    let report = compute_cohomology(&nl);
    ensure(report.dims() == (2, 2), format!("dims {:?}, expected (2, 2)", report.dims()))?;
    let (ledger, _) = replay(&nl).map_err(|e| e.to_string())?;
    match ledger.history().last() {
        Some(step) => match &step.kind {
            StepKind::AttachWire { class: FeedbackClass::Complete, .. } => Ok(()),
            other => Err(format!("last step {other:?}, expected complete feedback")),
        },
        None => Err("empty history".into()),
    }
}

fn ringosc_partial_transient() -> Result<(), String> {
    let nl = parse(circuits::RINGOSC);
    let report = compute_cohomology(&nl);
    ensure(report.dims() == (1, 1), format!("dims {:?}, expected (1, 1)", report.dims()))?;
    ensure(
        report.h0_basis[0].class == SectionClass::Transient,
        "the oscillator section must be transient",
    )?;
    ensure(
        report.qls.report().map(|q| q.count()) == Some(0),
        "the oscillator has no quiescent state",
    )?;
    let (ledger, _) = replay(&nl).map_err(|e| e.to_string())?;
    match ledger.history().last() {
        Some(step) => match &step.kind {
            StepKind::AttachWire { class: FeedbackClass::Partial, .. } => Ok(()),
            other => Err(format!("last step {other:?}, expected partial feedback")),
        },
        None => Err("empty history".into()),
    }
}

fn replay_matches_direct_on_bundled() -> Result<(), String> {
    for (name, text) in circuits::bundled() {
        let nl = parse(text);
        let (ledger, direct) = replay(&nl).map_err(|e| format!("{name}: {e}"))?;
        ensure(ledger.dims() == direct.dims(), format!("{name}: {:?} vs {:?}", ledger.dims(), direct.dims()))?;
    }
    Ok(())
}

fn euler_on_bundled() -> Result<(), String> {
    for (name, text) in circuits::bundled() {
        let nl = parse(text);
        let report = compute_cohomology(&nl);
        ensure(report.euler_characteristic_holds(), format!("{name}: euler bookkeeping failed"))?;
    }
    Ok(())
}

/// The full list of named golden checks.
pub fn all_checks() -> Vec<Check> {
    vec![
        Check { name: "glitch_coboundary_bitexact", run: glitch_coboundary_bitexact },
        Check { name: "glitch_dims_and_certificate", run: glitch_dims_and_certificate },
        Check { name: "glitch_basis_classification", run: glitch_basis_classification },
        Check { name: "glitch_qls_oracle", run: glitch_qls_oracle },
        Check { name: "rsff_difference_map_bitexact", run: rsff_difference_map_bitexact },
        Check { name: "rsff_dims_both_paths", run: rsff_dims_both_paths },
        Check { name: "rsff_qls_table", run: rsff_qls_table },
        Check { name: "rsff_transition_sections", run: rsff_transition_sections },
        Check { name: "tree_minput_dims", run: minput_tree_dims },
        Check { name: "tree_compose_dims", run: compose_tree_dims },
        Check { name: "tree_lifted_bases", run: worked_trees_have_lifted_bases },
        Check { name: "selfloop_buf_complete", run: selfloop_buf_complete },
        Check { name: "selfloop_ringosc_partial", run: ringosc_partial_transient },
        Check { name: "mv_replay_bundled", run: replay_matches_direct_on_bundled },
        Check { name: "euler_bundled", run: euler_on_bundled },
    ]
}

/// Runs the checks whose names contain `filter` (all when `None`) and
/// appends one line per check to `out`. Returns (passed, failed).
pub fn run_filtered(filter: Option<&str>, out: &mut String) -> (usize, usize) {
    let mut passed = 0;
    let mut failed = 0;
    for check in all_checks() {
        if let Some(f) = filter {
            if !check.name.contains(f) {
                continue;
            }
        }
        match (check.run)() {
            Ok(()) => {
                passed += 1;
                out.push_str(&format!("PASS {}\n", check.name));
            }
            Err(msg) => {
                failed += 1;
                out.push_str(&format!("FAIL {}: {msg}\n", check.name));
            }
        }
    }
    out.push_str(&format!("{passed} passed, {failed} failed\n"));
    (passed, failed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sheaf::phi_matrix;

    #[test]
    fn every_golden_check_passes() {
        for check in all_checks() {
            (check.run)().unwrap_or_else(|msg| panic!("{}: {msg}", check.name));
        }
    }

    #[test]
    fn filter_narrows_the_run() {
        let mut out = String::new();
        let (passed, failed) = run_filtered(Some("glitch"), &mut out);
        assert_eq!(failed, 0);
        assert_eq!(passed, 4);
        assert!(out.lines().all(|l| l.contains("glitch") || l.contains("passed")));
    }

    #[test]
    fn corrupted_truth_table_is_caught() {
        // flip one table entry of the flip-flop gate: the golden gate map
        // comparison must fail
        let mut nl = Netlist::parse(circuits::RSFF).unwrap();
        let gi = nl.gate_index("rs").unwrap();
        nl.gates[gi].truth_table[3][0] = !nl.gates[gi].truth_table[3][0];
        let q = phi_matrix(&nl.gates[gi], 0);
        let expected = GF2Matrix::from_str("00001110\n11110001").unwrap();
        assert_ne!(q, expected, "corruption must change the gate map");
    }
}
