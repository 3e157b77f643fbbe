//! Randomized experiment: does H^0 of a tree circuit always have a basis of
//! lifted quiescent states?
//!
//! For every random directed tree with random truth tables, we enumerate the
//! quiescent states, lift them, and compare the span of the lifts with the
//! kernel of the coboundary. A trial where the spans differ is a
//! counterexample and is printed verbatim. Random tables do produce them:
//! when a constant output feeds an input the downstream table ignores, no
//! quiescent state ever exercises the other value of that wire, and whole
//! tensor directions of the kernel stay out of reach of the lifts. Gates
//! that genuinely depend on all of their inputs have not produced one.
//!
//! ```bash
//! cargo run --example conjecture_experiment
//! ```

use netsheaf::cohomology::dag_conjecture_experiment;

fn main() {
    let report = dag_conjecture_experiment(100, 6, 42);
    for (i, trial) in report.trials.iter().enumerate() {
        println!(
            "trial {:>3}: gates={} edges={:>2} dim_h0={:>3} states={:>3} lifted_span={:>3} {}",
            i + 1,
            trial.gates,
            trial.edges,
            trial.dim_h0,
            trial.qls_count,
            trial.lifted_span_dim,
            if trial.holds { "ok" } else { "COUNTEREXAMPLE" }
        );
        if let Some(text) = &trial.netlist_text {
            println!("--- counterexample ---\n{text}---");
        }
    }
    println!(
        "\n{} of {} trials hold (seed {}, max {} gates)",
        report.passes(),
        report.trials.len(),
        report.seed,
        report.max_gates
    );
}
