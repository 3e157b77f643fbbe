//! Full analysis of the shared-input glitch circuit.
//!
//! The input signal reaches the AND gate along two paths of different depth,
//! so the output can pulse while the input transitions. Statically nothing
//! is wrong: there are two quiescent states and the output is constant 0 in
//! both. The sheaf sees more: a third global section that is a superposition
//! of the two states, and a nonzero H^1 whose certificate names the wires of
//! the reconvergent paths.
//!
//! ```bash
//! cargo run --example analyze_glitch
//! ```

use netsheaf::circuits;
use netsheaf::cohomology::{compute_cohomology, SectionClass};
use netsheaf::netlist::Netlist;

fn main() {
    let nl = Netlist::parse(circuits::GLITCH).expect("bundled circuit parses");
    let report = compute_cohomology(&nl);

    println!("gates: {}, edges: {} ({} internal)", nl.gates.len(), nl.edges.len(), nl.internal_edges().len());
    println!("coboundary d0 ({}x{}):", report.complex.c1_dim(), report.complex.c0_dim());
    print!("{}", report.complex.dump_d0(&nl));

    println!("\ndim H^0 = {}, dim H^1 = {}", report.dim_h0(), report.dim_h1());
    println!("\nglobal sections (canonical basis):");
    for section in &report.h0_basis {
        let tag = match section.class {
            SectionClass::QlsLift => "lift of a quiescent state",
            SectionClass::Transient => "transient superposition",
        };
        println!(
            "  {:<40} {tag}",
            report.complex.render_cochain(&nl, &section.coefficients)
        );
    }

    println!("\nfeedback certificates:");
    for g in &report.h1_generators {
        println!("  {}   (support: {})", report.complex.render_c1(&nl, g), report.h1_support(&nl).join(" "));
    }

    let qls = report.qls.report().expect("oracle runs on 5 edges");
    println!("\nexhaustive oracle: {} quiescent states", qls.count());
    println!(
        "lift checks: forward {}, reverse {:?}",
        qls.forward_lift_ok, qls.reverse_lift_ok
    );
}
