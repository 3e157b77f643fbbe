//! Static analysis of gate-level netlists through the cohomology of
//! switching sheaves over GF(2).
//!
//! A circuit is a directed multigraph of gates and 1-bit wires. Lifting
//! logic values through the one-hot encoding turns every gate into a linear
//! map, and the circuit into a sheaf of GF(2) vector spaces: each gate
//! carries the tensor product of one plane per input, each wire a single
//! plane. Two exact linear-algebra computations then summarize the circuit's
//! asynchronous behavior:
//!
//! - `H^0` (the kernel of the coboundary) is the space of global sections.
//!   Sections that are pure and one-hot everywhere are exactly the lifts of
//!   quiescent logic states; the remaining basis directions are
//!   superpositions of states — evidence of transitions and time
//!   sensitivity that no truth table shows.
//! - `H^1` measures feedback, and each generator is a certificate naming
//!   the wires whose signal paths can race or latch.
//!
//! Both can be maintained incrementally while a circuit is assembled wire
//! by wire ([`mayer_vietoris`]), with each new wire classified as complete,
//! partial, or no feedback by the rank of a small difference map.
//!
//! # Quick start
//!
//! ```
//! use netsheaf::netlist::Netlist;
//! use netsheaf::cohomology::compute_cohomology;
//!
//! let nl = Netlist::parse(netsheaf::circuits::GLITCH).unwrap();
//! let report = compute_cohomology(&nl);
//! assert_eq!((report.dim_h0(), report.dim_h1()), (3, 1));
//! ```
//!
//! The `examples/` directory walks through each capability:
//!
//! ```bash
//! cargo run --example analyze_glitch
//! cargo run --example flip_flop_feedback
//! cargo run --example ring_oscillator
//! cargo run --example tree_dimensions
//! cargo run --example conjecture_experiment
//! cargo run --example export_dot
//! ```
//!
//! The same functionality is scriptable through the thin `netsheaf` binary
//! (`analyze`, `paper-suite`, `dot`, `mv-replay`, `conjecture`).

pub mod circuits;
pub mod cli;
pub mod cohomology;
pub mod dot;
pub mod gf2;
pub mod mayer_vietoris;
pub mod netlist;
pub mod report;
pub mod sheaf;
pub mod suite;
pub mod synth;

pub use cohomology::{compute_cohomology, compute_cohomology_with, AnalysisOptions, CohomologyReport};
pub use mayer_vietoris::{replay, FeedbackClass, MvLedger};
pub use netlist::Netlist;
pub use sheaf::{assemble_complex, CechComplex};
