//! Soldering an R-S flip-flop together, one step at a time.
//!
//! The circuit is a single 3-input gate plus one feedback wire. Adding the
//! gate contributes its whole 8-dimensional stalk to H^0. Attaching the wire
//! builds the difference map [[P, I], [Q, I]]; its rank (here 3) classifies
//! the wire as partial feedback, dropping H^0 to 7 and raising H^1 to 1.
//! The two extra H^0 dimensions beyond the five quiescent states are the
//! superpositions a race condition can visit while leaving the danger state.
//!
//! ```bash
//! cargo run --example flip_flop_feedback
//! ```

use netsheaf::circuits;
use netsheaf::mayer_vietoris::{replay, MvLedger, StepKind};
use netsheaf::netlist::Netlist;

fn main() {
    let nl = Netlist::parse(circuits::RSFF).expect("bundled circuit parses");

    // step through the attachment by hand to look at the difference map
    let rs = nl.gates[nl.gate_index("rs").unwrap()].clone();
    let ledger = MvLedger::new().add_gate(rs).unwrap();
    println!("after adding the gate: dims {:?}", ledger.dims());

    let (ledger, att) = ledger.attach_wire("c", ("rs", 1), ("rs", 2)).unwrap();
    println!("\nP (restriction to the wire's sink pin):\n{}", att.p);
    println!("Q (restriction to the wire's source pin):\n{}", att.q);
    println!("delta = [[P, I], [Q, I]] has rank {} -> {} feedback", att.rank_delta, att.class);
    println!("after the wire: dims {:?}", ledger.dims());

    // replay the whole netlist and cross-check against the direct path
    let (ledger, direct) = replay(&nl).expect("replay agrees with the direct computation");
    println!("\nreplay log:");
    for (i, step) in ledger.history().iter().enumerate() {
        match &step.kind {
            StepKind::AddGate { gate } => {
                println!("  {:>2}. gate {gate:<4} dims ({}, {})", i + 1, step.dim_h0, step.dim_h1);
            }
            StepKind::AttachWire { id, class, rank_delta } => {
                println!(
                    "  {:>2}. wire {id:<4} {class} (rank {rank_delta})  dims ({}, {})",
                    i + 1,
                    step.dim_h0,
                    step.dim_h1
                );
            }
        }
    }
    println!("direct computation: dims {:?}", direct.dims());

    println!("\nclassified H^0 basis:");
    for section in &direct.h0_basis {
        println!(
            "  {:<28} {:?}",
            direct.complex.render_cochain(&nl, &section.coefficients),
            section.class
        );
    }
}
