//! The ring oscillator: where H^0 and the set of quiescent states diverge.
//!
//! An inverter driving itself has no quiescent state at all — s = NOT s has
//! no solution, and the exhaustive oracle confirms it. Yet H^0 is not zero:
//! its single generator is ~a + a, the superposition of both logic values on
//! the loop. That section is precisely the oscillation, visible to the sheaf
//! but invisible to any truth-table analysis. H^1 is nonzero too, flagging
//! the loop as feedback.
//!
//! ```bash
//! cargo run --example ring_oscillator
//! ```

use netsheaf::circuits;
use netsheaf::cohomology::compute_cohomology;
use netsheaf::netlist::{Netlist, DEFAULT_ORACLE_CAP};

fn main() {
    let nl = Netlist::parse(circuits::RINGOSC).expect("bundled circuit parses");
    println!("{}", circuits::RINGOSC.trim());

    let states = nl.qls_oracle(DEFAULT_ORACLE_CAP).unwrap();
    println!("\nquiescent states found by the oracle: {}", states.len());

    let report = compute_cohomology(&nl);
    println!("dim H^0 = {}, dim H^1 = {}", report.dim_h0(), report.dim_h1());
    for section in &report.h0_basis {
        println!(
            "  section {}   classified {:?}",
            report.complex.render_cochain(&nl, &section.coefficients),
            section.class
        );
    }
    println!(
        "\nthe section space is larger than the state set: cohomology carries\n\
         information (the oscillation itself) that the state list cannot."
    );
}
