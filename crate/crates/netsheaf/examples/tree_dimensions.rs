//! The closed dimension formula on tree circuits.
//!
//! When the internal wires of a circuit form a tree, H^1 vanishes and
//! dim H^0 is simply sum(2^m_i) - 2 (n - 1). Two classic shapes:
//! a buffered m-input gate comes out at exactly 2^m (one dimension per
//! quiescent state), and an n-input gate feeding an m-input gate at
//! 2^n + 2^m - 2.
//!
//! ```bash
//! cargo run --example tree_dimensions
//! ```

use netsheaf::circuits;
use netsheaf::cohomology::tree_formula_check;
use netsheaf::netlist::Netlist;
use netsheaf::synth::{random_tree, SplitMix64};

fn main() {
    println!("buffered m-input gate (expected 2^m):");
    for m in 1..=6 {
        let nl = Netlist::parse(&circuits::m_input_text(m)).unwrap();
        let (predicted, computed) = tree_formula_check(&nl).unwrap();
        println!("  m={m}: formula {predicted:>3}, computed {computed:>3}");
    }

    println!("\ntwo-gate composition (expected 2^n + 2^m - 2):");
    for n in 1..=4 {
        for m in 1..=4 {
            let v_bits = 1u64 << ((1 << n) - 1);
            let w_bits = 1u64 << ((1 << m) - 1);
            let nl = Netlist::parse(&circuits::composition_text(n, m, v_bits, w_bits)).unwrap();
            let (_, computed) = tree_formula_check(&nl).unwrap();
            print!("  n={n} m={m}: {computed:>3}");
        }
        println!();
    }

    println!("\nrandom trees, fixed seed:");
    let mut rng = SplitMix64::new(42);
    for i in 0..10 {
        let nl = random_tree(&mut rng, 6, 14);
        let (predicted, computed) = tree_formula_check(&nl).unwrap();
        println!(
            "  tree {i}: {} gates, {} edges, formula {predicted}, computed {computed}",
            nl.gates.len(),
            nl.edges.len()
        );
    }
}
