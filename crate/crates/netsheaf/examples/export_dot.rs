//! Graphviz export with feedback highlighting.
//!
//! Prints the DOT rendering of the flip-flop: gates as boxes labeled with
//! their stalk dimension, external connections dashed, and the feedback wire
//! (the support of the H^1 certificate) in red. Pipe through `dot -Tsvg` to
//! render.
//!
//! ```bash
//! cargo run --example export_dot | dot -Tsvg > rsff.svg
//! ```

use netsheaf::circuits;
use netsheaf::cohomology::compute_cohomology;
use netsheaf::dot::emit_dot;
use netsheaf::netlist::Netlist;

fn main() {
    let nl = Netlist::parse(circuits::RSFF).expect("bundled circuit parses");
    let report = compute_cohomology(&nl);
    let highlight = report.h1_support(&nl);
    print!("{}", emit_dot(&nl, &highlight));
}
