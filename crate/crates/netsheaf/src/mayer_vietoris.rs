//! Incremental cohomology bookkeeping, one soldering step at a time.
//!
//! A ledger tracks `(H^0 basis, dim H^1)` of a growing circuit fragment.
//! Adding an unconnected gate extends `H^0` by the gate's whole stalk and
//! leaves `H^1` alone. Attaching a wire between two dangling pins splices
//! the fragment along that wire; the difference map
//!
//! ```text
//!         | P  I |
//! delta = |      |      P = restriction to the wire's sink pin,
//!         | Q  I |      Q = restriction to the wire's source pin,
//! ```
//!
//! has rank 2, 3, or 4, classifying the wire as complete, partial, or no
//! feedback. The rank dictates the dimension update (`H^0` drops by 0/1/2,
//! `H^1` grows by 2/1/0), and the new `H^0` basis is recovered as the kernel
//! of `P + Q` acting on the coefficients of the old basis.
//!
//! [`replay`] rebuilds a whole netlist this way and cross-checks the final
//! dimensions against the direct computation; a mismatch is an internal
//! error, surfaced as such.

use std::fmt;

use thiserror::Error;

use crate::cohomology::{compute_cohomology, CohomologyReport};
use crate::gf2::{GF2Matrix, GF2Vector};
use crate::netlist::{Edge, Endpoint, Gate, Netlist};
use crate::sheaf::{contraction_matrix, phi_matrix};

/// How much a newly attached wire participates in signal feedback.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FeedbackClass {
    /// rank 2: the spliced output always agrees with the spliced input.
    Complete,
    /// rank 3.
    Partial,
    /// rank 4: the two pins are completely independent.
    None,
}

impl FeedbackClass {
    fn from_rank(rank: usize) -> FeedbackClass {
        match rank {
            2 => FeedbackClass::Complete,
            3 => FeedbackClass::Partial,
            4 => FeedbackClass::None,
            other => unreachable!("difference map has rank {other}, outside 2..=4"),
        }
    }

    /// (drop in `dim H^0`, growth in `dim H^1`).
    pub fn dimension_update(self) -> (usize, usize) {
        match self {
            FeedbackClass::Complete => (0, 2),
            FeedbackClass::Partial => (1, 1),
            FeedbackClass::None => (2, 0),
        }
    }
}

impl fmt::Display for FeedbackClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            FeedbackClass::Complete => "complete",
            FeedbackClass::Partial => "partial",
            FeedbackClass::None => "none",
        })
    }
}

/// Everything produced by one wire attachment.
#[derive(Clone, Debug)]
pub struct WireAttachment {
    pub class: FeedbackClass,
    pub rank_delta: usize,
    /// 2 x k restriction of the previous basis to the wire's sink pin.
    pub p: GF2Matrix,
    /// 2 x k restriction of the previous basis to the wire's source pin.
    pub q: GF2Matrix,
    /// The 4 x (k+2) block matrix [[P, I], [Q, I]].
    pub delta: GF2Matrix,
}

#[derive(Clone, Debug)]
pub enum StepKind {
    AddGate { gate: String },
    AttachWire { id: String, class: FeedbackClass, rank_delta: usize },
}

/// One history entry with the dimensions after the step.
#[derive(Clone, Debug)]
pub struct Step {
    pub kind: StepKind,
    pub dim_h0: usize,
    pub dim_h1: usize,
}

#[derive(Error, Debug, PartialEq, Eq)]
pub enum MvError {
    #[error("gate id `{0}` already present in the fragment")]
    DuplicateGate(String),
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("gate `{gate}` has no {dir} pin {pin}")]
    PinOutOfRange { gate: String, dir: &'static str, pin: usize },
    #[error("{dir} pin {pin} of gate `{gate}` is already wired")]
    PinAlreadyWired { gate: String, dir: &'static str, pin: usize },
    #[error("ledger dimensions {ledger:?} disagree with the direct computation {direct:?}")]
    CrossCheck { ledger: (usize, usize), direct: (usize, usize) },
}

/// The running fragment: gates, attached wires, and the maintained
/// `(H^0 basis, dim H^1)`. Operations consume the ledger and return the
/// updated value.
#[derive(Clone, Debug, Default)]
pub struct MvLedger {
    gates: Vec<Gate>,
    wires: Vec<Edge>,
    offsets: Vec<usize>,
    c0_dim: usize,
    out_used: Vec<Vec<bool>>,
    in_used: Vec<Vec<bool>>,
    h0_basis: Vec<GF2Vector>,
    dim_h1: usize,
    history: Vec<Step>,
}

impl MvLedger {
    pub fn new() -> MvLedger {
        MvLedger::default()
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.h0_basis.len(), self.dim_h1)
    }

    pub fn dim_h0(&self) -> usize {
        self.h0_basis.len()
    }

    pub fn dim_h1(&self) -> usize {
        self.dim_h1
    }

    pub fn h0_basis(&self) -> &[GF2Vector] {
        &self.h0_basis
    }

    pub fn history(&self) -> &[Step] {
        &self.history
    }

    fn gate_index(&self, id: &str) -> Result<usize, MvError> {
        self.gates
            .iter()
            .position(|g| g.id == id)
            .ok_or_else(|| MvError::UnknownGate(id.to_string()))
    }

    /// Adds an unconnected gate: `H^0` gains the `2^m` standard basis
    /// vectors of the new stalk, `H^1` is untouched.
    pub fn add_gate(mut self, gate: Gate) -> Result<MvLedger, MvError> {
        if self.gates.iter().any(|g| g.id == gate.id) {
            return Err(MvError::DuplicateGate(gate.id));
        }
        let dim = gate.stalk_dim();
        let offset = self.c0_dim;
        self.offsets.push(offset);
        self.c0_dim += dim;
        self.out_used.push(vec![false; gate.num_outputs]);
        self.in_used.push(vec![false; gate.num_inputs]);
        // pad the old basis with the new block, then append the stalk basis
        self.h0_basis = self
            .h0_basis
            .iter()
            .map(|v| {
                let mut w = GF2Vector::zeros(self.c0_dim);
                for i in v.ones() {
                    w.set(i, true);
                }
                w
            })
            .collect();
        for k in 0..dim {
            self.h0_basis.push(GF2Vector::unit(self.c0_dim, offset + k));
        }
        self.history.push(Step {
            kind: StepKind::AddGate { gate: gate.id.clone() },
            dim_h0: self.h0_basis.len(),
            dim_h1: self.dim_h1,
        });
        self.gates.push(gate);
        Ok(self)
    }

    /// Attaches a wire between a dangling output pin and a dangling input
    /// pin (the two may belong to the same gate). Returns the updated ledger
    /// and the difference-map data for the step.
    pub fn attach_wire(
        mut self,
        id: impl Into<String>,
        from: (&str, usize),
        to: (&str, usize),
    ) -> Result<(MvLedger, WireAttachment), MvError> {
        let id = id.into();
        let src = self.gate_index(from.0)?;
        let dst = self.gate_index(to.0)?;
        if from.1 >= self.gates[src].num_outputs {
            return Err(MvError::PinOutOfRange { gate: from.0.into(), dir: "output", pin: from.1 });
        }
        if to.1 >= self.gates[dst].num_inputs {
            return Err(MvError::PinOutOfRange { gate: to.0.into(), dir: "input", pin: to.1 });
        }
        if self.out_used[src][from.1] {
            return Err(MvError::PinAlreadyWired { gate: from.0.into(), dir: "output", pin: from.1 });
        }
        if self.in_used[dst][to.1] {
            return Err(MvError::PinAlreadyWired { gate: to.0.into(), dir: "input", pin: to.1 });
        }

        let k = self.h0_basis.len();
        let contraction = contraction_matrix(self.gates[dst].num_inputs, to.1);
        let phi = phi_matrix(&self.gates[src], from.1);
        let mut p = GF2Matrix::zeros(2, k);
        let mut q = GF2Matrix::zeros(2, k);
        for (j, v) in self.h0_basis.iter().enumerate() {
            let p_col = contraction.mul_vector(&self.block_of(v, dst));
            let q_col = phi.mul_vector(&self.block_of(v, src));
            for r in 0..2 {
                p.set(r, j, p_col.get(r));
                q.set(r, j, q_col.get(r));
            }
        }
        let mut delta = GF2Matrix::zeros(4, k + 2);
        delta.xor_block(0, 0, &p);
        delta.xor_block(2, 0, &q);
        delta.xor_block(0, k, &GF2Matrix::identity(2));
        delta.xor_block(2, k, &GF2Matrix::identity(2));
        let rank_delta = delta.rank();
        assert!((2..=4).contains(&rank_delta), "identity block forces rank 2..=4");
        let class = FeedbackClass::from_rank(rank_delta);

        // sections surviving the splice: coefficient vectors in the kernel
        // of P + Q, mapped back through the old basis
        let mut sum = p.clone();
        sum.xor_block(0, 0, &q);
        let coefficient_kernel = sum.kernel_basis();
        let new_basis: Vec<GF2Vector> = coefficient_kernel
            .iter()
            .map(|coeff| {
                let mut v = GF2Vector::zeros(self.c0_dim);
                for j in coeff.ones() {
                    v.xor_assign(&self.h0_basis[j]);
                }
                v
            })
            .collect();
        let (h0_drop, h1_gain) = class.dimension_update();
        assert_eq!(new_basis.len(), k - h0_drop, "kernel size disagrees with the rank classification");

        self.h0_basis = new_basis;
        self.dim_h1 += h1_gain;
        self.out_used[src][from.1] = true;
        self.in_used[dst][to.1] = true;
        self.wires.push(Edge {
            id: id.clone(),
            source: Endpoint::Pin { gate: src, pin: from.1 },
            sink: Endpoint::Pin { gate: dst, pin: to.1 },
        });
        self.history.push(Step {
            kind: StepKind::AttachWire { id, class, rank_delta },
            dim_h0: self.h0_basis.len(),
            dim_h1: self.dim_h1,
        });
        Ok((self, WireAttachment { class, rank_delta, p, q, delta }))
    }

    fn block_of(&self, v: &GF2Vector, gate: usize) -> GF2Vector {
        let offset = self.offsets[gate];
        let dim = self.gates[gate].stalk_dim();
        GF2Vector::from_bits((0..dim).map(|i| v.get(offset + i)))
    }

    /// The fragment as a standalone netlist: attached wires stay internal,
    /// every dangling pin becomes an external edge.
    pub fn fragment_netlist(&self) -> Netlist {
        let mut edges = self.wires.clone();
        for (gi, used) in self.in_used.iter().enumerate() {
            for (pin, &u) in used.iter().enumerate() {
                if !u {
                    edges.push(Edge {
                        id: format!("__in_{}_{pin}", self.gates[gi].id),
                        source: Endpoint::External,
                        sink: Endpoint::Pin { gate: gi, pin },
                    });
                }
            }
        }
        for (gi, used) in self.out_used.iter().enumerate() {
            for (pin, &u) in used.iter().enumerate() {
                if !u {
                    edges.push(Edge {
                        id: format!("__out_{}_{pin}", self.gates[gi].id),
                        source: Endpoint::Pin { gate: gi, pin },
                        sink: Endpoint::External,
                    });
                }
            }
        }
        Netlist { gates: self.gates.clone(), edges }
    }
}

/// Rebuilds `nl` through the ledger — all gates first, then every internal
/// wire in declaration order — and cross-checks the final dimensions against
/// the direct computation. A mismatch means a bug in one of the two paths.
pub fn replay(nl: &Netlist) -> Result<(MvLedger, CohomologyReport), MvError> {
    let mut ledger = MvLedger::new();
    for gate in &nl.gates {
        ledger = ledger.add_gate(gate.clone())?;
    }
    for &ei in &nl.internal_edges() {
        let edge = &nl.edges[ei];
        let (Endpoint::Pin { gate: src, pin: out_pin }, Endpoint::Pin { gate: dst, pin: in_pin }) =
            (edge.source, edge.sink)
        else {
            unreachable!()
        };
        let (next, _) = ledger.attach_wire(
            edge.id.clone(),
            (&nl.gates[src].id.clone(), out_pin),
            (&nl.gates[dst].id.clone(), in_pin),
        )?;
        ledger = next;
    }
    let direct = compute_cohomology(nl);
    if ledger.dims() != direct.dims() {
        return Err(MvError::CrossCheck { ledger: ledger.dims(), direct: direct.dims() });
    }
    Ok((ledger, direct))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits;
    use crate::cohomology::compute_cohomology_with;
    use crate::cohomology::AnalysisOptions;
    use crate::gf2::same_span;
    use crate::synth::{random_netlist, SplitMix64};
    use std::str::FromStr;

    fn parse(text: &str) -> Netlist {
        Netlist::parse(text).unwrap()
    }

    #[test]
    fn adding_gates_stacks_stalk_dimensions() {
        let ledger = MvLedger::new()
            .add_gate(Gate::builtin("g", "AND").unwrap())
            .unwrap();
        assert_eq!(ledger.dims(), (4, 0));
        let ledger = ledger.add_gate(Gate::builtin("n", "NOT").unwrap()).unwrap();
        assert_eq!(ledger.dims(), (6, 0));
        // zero-input constant contributes a single dimension
        let ledger = ledger
            .add_gate(Gate::table("one", 0, 1, vec![vec![true]]))
            .unwrap();
        assert_eq!(ledger.dims(), (7, 0));
    }

    #[test]
    fn duplicate_gate_is_rejected() {
        let ledger = MvLedger::new().add_gate(Gate::builtin("g", "NOT").unwrap()).unwrap();
        let err = ledger.add_gate(Gate::builtin("g", "AND").unwrap()).unwrap_err();
        assert_eq!(err, MvError::DuplicateGate("g".into()));
    }

    #[test]
    fn flip_flop_difference_map_is_the_golden_pair() {
        let nl = parse(circuits::RSFF);
        let rs = nl.gates[nl.gate_index("rs").unwrap()].clone();
        let ledger = MvLedger::new().add_gate(rs).unwrap();
        assert_eq!(ledger.dims(), (8, 0));
        let (ledger, attachment) = ledger.attach_wire("c", ("rs", 1), ("rs", 2)).unwrap();
        assert_eq!(attachment.p, GF2Matrix::from_str("10101010\n01010101").unwrap());
        assert_eq!(attachment.q, GF2Matrix::from_str("00001110\n11110001").unwrap());
        assert_eq!(attachment.rank_delta, 3);
        assert_eq!(attachment.class, FeedbackClass::Partial);
        assert_eq!(ledger.dims(), (7, 1));
        // adding a gate to a fragment with feedback leaves H^1 alone
        let ledger = ledger.add_gate(Gate::builtin("n", "NOT").unwrap()).unwrap();
        assert_eq!(ledger.dims(), (9, 1));
    }

    #[test]
    fn buffer_self_wire_is_complete_feedback() {
        let ledger = MvLedger::new().add_gate(Gate::builtin("b", "BUF").unwrap()).unwrap();
        let (ledger, att) = ledger.attach_wire("r", ("b", 0), ("b", 0)).unwrap();
        assert_eq!(att.q, att.p);
        assert_eq!(att.rank_delta, 2);
        assert_eq!(att.class, FeedbackClass::Complete);
        assert_eq!(ledger.dims(), (2, 2));
    }

    #[test]
    fn inverter_self_wire_is_partial_feedback() {
        let ledger = MvLedger::new().add_gate(Gate::builtin("n", "NOT").unwrap()).unwrap();
        let (ledger, att) = ledger.attach_wire("a", ("n", 0), ("n", 0)).unwrap();
        assert_eq!(att.rank_delta, 3);
        assert_eq!(att.class, FeedbackClass::Partial);
        assert_eq!(ledger.dims(), (1, 1));
    }

    #[test]
    fn joining_independent_gates_is_no_feedback() {
        let ledger = MvLedger::new()
            .add_gate(Gate::builtin("b", "BUF").unwrap())
            .unwrap()
            .add_gate(Gate::builtin("g", "AND").unwrap())
            .unwrap();
        assert_eq!(ledger.dims(), (6, 0));
        let (ledger, att) = ledger.attach_wire("w", ("b", 0), ("g", 0)).unwrap();
        assert_eq!(att.rank_delta, 4);
        assert_eq!(att.class, FeedbackClass::None);
        assert_eq!(ledger.dims(), (4, 0));
    }

    #[test]
    fn pin_reuse_and_unknown_pins_are_rejected() {
        let ledger = MvLedger::new().add_gate(Gate::builtin("n", "NOT").unwrap()).unwrap();
        let (ledger, _) = ledger.attach_wire("a", ("n", 0), ("n", 0)).unwrap();
        let err = ledger.clone().attach_wire("b", ("n", 0), ("n", 0)).unwrap_err();
        assert!(matches!(err, MvError::PinAlreadyWired { .. }));
        let err = ledger.clone().attach_wire("b", ("n", 1), ("n", 0)).unwrap_err();
        assert!(matches!(err, MvError::PinOutOfRange { .. }));
        let err = ledger.attach_wire("b", ("ghost", 0), ("n", 0)).unwrap_err();
        assert_eq!(err, MvError::UnknownGate("ghost".into()));
    }

    #[test]
    fn glitch_replay_classifies_two_none_then_one_partial() {
        let nl = parse(circuits::GLITCH);
        let (ledger, direct) = replay(&nl).unwrap();
        assert_eq!(ledger.dims(), (3, 1));
        assert_eq!(direct.dims(), (3, 1));
        let classes: Vec<FeedbackClass> = ledger
            .history()
            .iter()
            .filter_map(|s| match s.kind {
                StepKind::AttachWire { class, .. } => Some(class),
                _ => None,
            })
            .collect();
        assert_eq!(classes, vec![FeedbackClass::None, FeedbackClass::None, FeedbackClass::Partial]);
    }

    #[test]
    fn flip_flop_replay_ends_partial() {
        let nl = parse(circuits::RSFF);
        let (ledger, direct) = replay(&nl).unwrap();
        assert_eq!(ledger.dims(), (7, 1));
        assert_eq!(direct.dims(), (7, 1));
        let Some(Step { kind: StepKind::AttachWire { class, .. }, .. }) = ledger.history().last() else {
            panic!("last step must be the feedback wire");
        };
        assert_eq!(*class, FeedbackClass::Partial);
    }

    #[test]
    fn tree_replays_are_all_no_feedback() {
        for text in [circuits::MINPUT3, circuits::COMPOSE22, circuits::AND1] {
            let nl = parse(text);
            let (ledger, _) = replay(&nl).unwrap();
            assert_eq!(ledger.dim_h1(), 0);
            for step in ledger.history() {
                if let StepKind::AttachWire { class, .. } = step.kind {
                    assert_eq!(class, FeedbackClass::None);
                }
            }
        }
    }

    #[test]
    fn per_step_cross_check_and_span_agreement() {
        // after every step the ledger agrees with the direct computation on
        // the fragment, including the actual H^0 span
        let nl = parse(circuits::GLITCH);
        let mut ledger = MvLedger::new();
        for gate in &nl.gates {
            ledger = ledger.add_gate(gate.clone()).unwrap();
            check_against_fragment(&ledger);
        }
        for &ei in &nl.internal_edges() {
            let edge = &nl.edges[ei];
            let (Endpoint::Pin { gate: s, pin: sp }, Endpoint::Pin { gate: d, pin: dp }) =
                (edge.source, edge.sink)
            else {
                unreachable!()
            };
            let (next, _) = ledger
                .attach_wire(edge.id.clone(), (&nl.gates[s].id.clone(), sp), (&nl.gates[d].id.clone(), dp))
                .unwrap();
            ledger = next;
            check_against_fragment(&ledger);
        }
    }

    fn check_against_fragment(ledger: &MvLedger) {
        let fragment = ledger.fragment_netlist();
        assert!(fragment.validate().is_empty());
        let direct = compute_cohomology_with(
            &fragment,
            &AnalysisOptions { run_oracle: false, ..Default::default() },
        );
        assert_eq!(ledger.dims(), direct.dims());
        let direct_basis: Vec<GF2Vector> =
            direct.h0_basis.iter().map(|s| s.coefficients.clone()).collect();
        assert!(same_span(ledger.h0_basis(), &direct_basis));
    }

    #[test]
    fn replay_agrees_with_direct_on_random_circuits() {
        let mut rng = SplitMix64::new(99);
        for _ in 0..30 {
            let nl = random_netlist(&mut rng, 5, 12);
            let (ledger, direct) = replay(&nl).unwrap_or_else(|e| panic!("{e} for:\n{}", nl.to_text()));
            assert_eq!(ledger.dims(), direct.dims());
            // dim H^1 never decreases along the replay
            let mut previous = 0;
            for step in ledger.history() {
                assert!(step.dim_h1 >= previous);
                previous = step.dim_h1;
            }
        }
    }

    #[test]
    fn euler_bookkeeping_holds_at_every_step() {
        let nl = parse(circuits::RSFF);
        let (ledger, _) = replay(&nl).unwrap();
        let mut stalks: i64 = 0;
        let mut wires: i64 = 0;
        for step in ledger.history() {
            match &step.kind {
                StepKind::AddGate { gate } => {
                    let g = nl.gates.iter().find(|g| &g.id == gate).unwrap();
                    stalks += g.stalk_dim() as i64;
                }
                StepKind::AttachWire { .. } => wires += 1,
            }
            assert_eq!(step.dim_h0 as i64 - step.dim_h1 as i64, stalks - 2 * wires);
        }
    }

    #[test]
    fn feedback_class_is_invariant_under_rebasing() {
        // rank of the difference map depends only on the span of the basis
        let nl = parse(circuits::RSFF);
        let rs = nl.gates[0].clone();
        let base = MvLedger::new().add_gate(rs).unwrap();
        let (_, reference) = base.clone().attach_wire("c", ("rs", 1), ("rs", 2)).unwrap();

        let mut rng = SplitMix64::new(321);
        for _ in 0..10 {
            let mut rebased = base.clone();
            let k = rebased.h0_basis.len();
            // random invertible change of basis via row operations
            for _ in 0..4 * k {
                let i = rng.next_below(k);
                let j = rng.next_below(k);
                if i != j {
                    let v = rebased.h0_basis[j].clone();
                    rebased.h0_basis[i].xor_assign(&v);
                }
            }
            let (ledger, att) = rebased.attach_wire("c", ("rs", 1), ("rs", 2)).unwrap();
            assert_eq!(att.rank_delta, reference.rank_delta);
            assert_eq!(att.class, reference.class);
            assert_eq!(ledger.dims(), (7, 1));
        }
    }
}
