//! The switching sheaf of a circuit and its Čech complex.
//!
//! Over each gate with `m` inputs sits the `2^m`-dimensional tensor product
//! of one GF(2) plane per input pin; over each wire sits a single plane with
//! basis `{~x, x}` (one-hot logic 0 and logic 1). Restriction toward an input
//! wire is the contraction onto that tensor factor; restriction toward an
//! output wire is the one-hot linearization `T f` of the gate function.
//!
//! The complex is always taken with respect to the same cover, the open
//! stars of the vertices: `C^0` is the direct sum of the gate stalks,
//! `C^1` the direct sum of one plane per *internal* wire, and each internal
//! wire contributes a 2-row block of the coboundary equal to the XOR of its
//! two restriction maps. For a self-loop both maps land on the same gate's
//! columns and the XOR merges them, which is the reduced form of the good
//! cover with the redundant edge-interior generator eliminated.
//!
//! Basis conventions, fixed once for all golden values: gates in declaration
//! order, internal wires in declaration order, tensor index with pin 0 as
//! the most significant bit, and within a wire's block row 0 is the logic-0
//! component.

use crate::gf2::{GF2Matrix, GF2Vector};
use crate::netlist::{Edge, EdgeKind, Endpoint, Gate, Netlist};

/// One-hot encoding of a binary value: 0 to (1,0), 1 to (0,1).
pub fn one_hot(bit: bool) -> GF2Vector {
    let mut v = GF2Vector::zeros(2);
    v.set(usize::from(bit), true);
    v
}

/// The 2 x 2^m map to an output wire: column k is the one-hot encoding of
/// output pin `out_pin` on input tuple k, so every column has exactly one 1.
pub fn phi_matrix(gate: &Gate, out_pin: usize) -> GF2Matrix {
    assert!(out_pin < gate.num_outputs, "gate `{}` has no output pin {out_pin}", gate.id);
    let mut m = GF2Matrix::zeros(2, gate.stalk_dim());
    for k in 0..gate.stalk_dim() {
        let bit = gate.eval_index(k)[out_pin];
        m.set(usize::from(bit), k, true);
    }
    m
}

/// The 2 x 2^m contraction onto the `in_pin`-th tensor factor: entry (b, k)
/// is 1 iff bit `in_pin` of k (pin 0 most significant) equals b.
pub fn contraction_matrix(num_inputs: usize, in_pin: usize) -> GF2Matrix {
    assert!(in_pin < num_inputs, "contraction pin {in_pin} out of range for {num_inputs} inputs");
    let mut m = GF2Matrix::zeros(2, 1 << num_inputs);
    for k in 0..1usize << num_inputs {
        let bit = (k >> (num_inputs - 1 - in_pin)) & 1;
        m.set(bit, k, true);
    }
    m
}

/// Layout of one gate's stalk inside `C^0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexBlock {
    pub gate: usize,
    pub offset: usize,
    pub dim: usize,
}

/// Layout of one internal wire's stalk inside `C^1` (always 2-dimensional).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeBlock {
    pub edge: usize,
    pub offset: usize,
}

/// Assembled two-term complex `C^0 -> C^1` with labeled block layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CechComplex {
    pub c0_blocks: Vec<VertexBlock>,
    pub c1_blocks: Vec<EdgeBlock>,
    pub d0: GF2Matrix,
}

/// Builds the Čech complex of the switching sheaf over a validated netlist.
pub fn assemble_complex(nl: &Netlist) -> CechComplex {
    let mut c0_blocks = Vec::with_capacity(nl.gates.len());
    let mut offset = 0;
    for (gi, g) in nl.gates.iter().enumerate() {
        c0_blocks.push(VertexBlock { gate: gi, offset, dim: g.stalk_dim() });
        offset += g.stalk_dim();
    }
    let c0_dim = offset;

    let internal = nl.internal_edges();
    let c1_blocks: Vec<EdgeBlock> = internal
        .iter()
        .enumerate()
        .map(|(i, &edge)| EdgeBlock { edge, offset: 2 * i })
        .collect();

    let mut d0 = GF2Matrix::zeros(2 * internal.len(), c0_dim);
    for block in &c1_blocks {
        let e = &nl.edges[block.edge];
        let (Endpoint::Pin { gate: src, pin: out_pin }, Endpoint::Pin { gate: dst, pin: in_pin }) =
            (e.source, e.sink)
        else {
            unreachable!("internal edge with an external endpoint");
        };
        d0.xor_block(block.offset, c0_blocks[src].offset, &phi_matrix(&nl.gates[src], out_pin));
        d0.xor_block(
            block.offset,
            c0_blocks[dst].offset,
            &contraction_matrix(nl.gates[dst].num_inputs, in_pin),
        );
    }
    CechComplex { c0_blocks, c1_blocks, d0 }
}

impl CechComplex {
    pub fn c0_dim(&self) -> usize {
        self.d0.num_cols()
    }

    pub fn c1_dim(&self) -> usize {
        self.d0.num_rows()
    }

    /// The slice of a 0-cochain belonging to one gate's stalk.
    pub fn gate_component(&self, c0: &GF2Vector, gate: usize) -> GF2Vector {
        let block = &self.c0_blocks[gate];
        GF2Vector::from_bits((0..block.dim).map(|i| c0.get(block.offset + i)))
    }

    /// Restricts a 0-cochain to the plane over one edge.
    ///
    /// Internal edges are computed from both ends, which must agree; a
    /// disagreement means the cochain was not in the kernel of the
    /// coboundary and is a caller bug, so it panics. External inputs
    /// restrict through the sink contraction, external outputs through the
    /// source gate map.
    pub fn restrict_section_to_edge(&self, nl: &Netlist, c0: &GF2Vector, edge: usize) -> GF2Vector {
        assert_eq!(c0.len(), self.c0_dim(), "cochain length mismatch");
        let e = &nl.edges[edge];
        let from_sink = |e: &Edge| {
            let Endpoint::Pin { gate, pin } = e.sink else { unreachable!() };
            contraction_matrix(nl.gates[gate].num_inputs, pin).mul_vector(&self.gate_component(c0, gate))
        };
        let from_source = |e: &Edge| {
            let Endpoint::Pin { gate, pin } = e.source else { unreachable!() };
            phi_matrix(&nl.gates[gate], pin).mul_vector(&self.gate_component(c0, gate))
        };
        match e.kind() {
            EdgeKind::ExternalInput => from_sink(e),
            EdgeKind::ExternalOutput => from_source(e),
            EdgeKind::Internal => {
                let sink_value = from_sink(e);
                let source_value = from_source(e);
                assert_eq!(
                    sink_value, source_value,
                    "restrictions disagree on internal edge `{}`: the cochain is not a global section",
                    e.id
                );
                sink_value
            }
        }
    }

    /// ASCII tensor label of basis element `k` of a gate's stalk, written in
    /// terms of the gate's input edge ids: `~d*e` is "d low, e high". The
    /// empty product (a 0-input gate) is rendered as `1`.
    pub fn tensor_label(&self, nl: &Netlist, gate: usize, k: usize) -> String {
        let m = nl.gates[gate].num_inputs;
        if m == 0 {
            return "1".to_string();
        }
        let inputs = nl.input_edges(gate);
        (0..m)
            .map(|pin| {
                let hot = (k >> (m - 1 - pin)) & 1 == 1;
                let id = &nl.edges[inputs[pin]].id;
                if hot { id.clone() } else { format!("~{id}") }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Column labels of the coboundary, `gate:<id>:<tensor-label>`.
    pub fn column_labels(&self, nl: &Netlist) -> Vec<String> {
        self.c0_blocks
            .iter()
            .flat_map(|b| {
                (0..b.dim).map(move |k| format!("gate:{}:{}", nl.gates[b.gate].id, self.tensor_label(nl, b.gate, k)))
            })
            .collect()
    }

    /// Row labels of the coboundary, `edge:<id>:0` and `edge:<id>:1`.
    pub fn row_labels(&self, nl: &Netlist) -> Vec<String> {
        self.c1_blocks
            .iter()
            .flat_map(|b| (0..2).map(move |bit| format!("edge:{}:{bit}", nl.edges[b.edge].id)))
            .collect()
    }

    /// Renders a 0-cochain as a sum of labeled tensor terms, gate blocks in
    /// declaration order. The zero cochain renders as `0`.
    pub fn render_cochain(&self, nl: &Netlist, c0: &GF2Vector) -> String {
        let mut terms = Vec::new();
        for b in &self.c0_blocks {
            for k in 0..b.dim {
                if c0.get(b.offset + k) {
                    terms.push(self.tensor_label(nl, b.gate, k));
                }
            }
        }
        if terms.is_empty() { "0".to_string() } else { terms.join(" + ") }
    }

    /// Renders a 1-cochain over the internal-wire planes, e.g. `~c + c + e`.
    pub fn render_c1(&self, nl: &Netlist, c1: &GF2Vector) -> String {
        assert_eq!(c1.len(), self.c1_dim());
        let mut terms = Vec::new();
        for b in &self.c1_blocks {
            let id = &nl.edges[b.edge].id;
            if c1.get(b.offset) {
                terms.push(format!("~{id}"));
            }
            if c1.get(b.offset + 1) {
                terms.push(id.clone());
            }
        }
        if terms.is_empty() { "0".to_string() } else { terms.join(" + ") }
    }

    /// Debug dump of the coboundary with row and column labels.
    pub fn dump_d0(&self, nl: &Netlist) -> String {
        let rows = self.row_labels(nl);
        let width = rows.iter().map(String::len).max().unwrap_or(0);
        let mut out = String::new();
        for (label, r) in rows.iter().zip(0..self.c1_dim()) {
            let bits: String = (0..self.c0_dim()).map(|c| if self.d0.get(r, c) { '1' } else { '0' }).collect();
            out.push_str(&format!("{label:width$} {bits}\n"));
        }
        out.push_str(&format!("{:width$} columns: {}\n", "", self.column_labels(nl).join(" ")));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits;
    use std::str::FromStr;

    fn parse(text: &str) -> Netlist {
        Netlist::parse(text).unwrap()
    }

    #[test]
    fn one_hot_encoding_convention() {
        assert_eq!(one_hot(false).to_string(), "10");
        assert_eq!(one_hot(true).to_string(), "01");
    }

    #[test]
    fn phi_of_not_swaps_and_phi_of_buf_is_identity() {
        let not = Gate::builtin("n", "NOT").unwrap();
        assert_eq!(phi_matrix(&not, 0), GF2Matrix::from_str("01\n10").unwrap());
        let buf = Gate::builtin("b", "BUF").unwrap();
        assert_eq!(phi_matrix(&buf, 0), GF2Matrix::identity(2));
    }

    #[test]
    fn phi_of_and_by_brute_force() {
        // enumerate the four input tuples and place the one-hot output
        let and = Gate::builtin("g", "AND").unwrap();
        let mut expected = GF2Matrix::zeros(2, 4);
        for (k, (a, b)) in [(false, false), (false, true), (true, false), (true, true)].iter().enumerate() {
            expected.set(usize::from(*a && *b), k, true);
        }
        assert_eq!(phi_matrix(&and, 0), expected);
        assert_eq!(phi_matrix(&and, 0), GF2Matrix::from_str("1110\n0001").unwrap());
    }

    #[test]
    fn phi_of_flip_flop_gate() {
        let nl = parse(circuits::RSFF);
        let gate = &nl.gates[nl.gate_index("rs").unwrap()];
        let expected = GF2Matrix::from_str("00001110\n11110001").unwrap();
        assert_eq!(phi_matrix(gate, 0), expected);
        assert_eq!(phi_matrix(gate, 1), expected);
    }

    #[test]
    fn contraction_matrices_by_enumeration() {
        assert_eq!(contraction_matrix(1, 0), GF2Matrix::identity(2));
        assert_eq!(contraction_matrix(2, 0), GF2Matrix::from_str("1100\n0011").unwrap());
        assert_eq!(contraction_matrix(2, 1), GF2Matrix::from_str("1010\n0101").unwrap());
        assert_eq!(
            contraction_matrix(3, 2),
            GF2Matrix::from_str("10101010\n01010101").unwrap()
        );
    }

    #[test]
    fn phi_columns_are_one_hot_and_contractions_split_evenly() {
        for (_, text) in circuits::bundled() {
            let nl = parse(text);
            for g in &nl.gates {
                for pin in 0..g.num_outputs {
                    let phi = phi_matrix(g, pin);
                    for k in 0..g.stalk_dim() {
                        assert_eq!(phi.column(k).weight(), 1);
                    }
                }
                for pin in 0..g.num_inputs {
                    let c = contraction_matrix(g.num_inputs, pin);
                    for k in 0..g.stalk_dim() {
                        assert_eq!(c.column(k).weight(), 1);
                    }
                    assert_eq!(c.row(0).weight(), g.stalk_dim() / 2);
                    assert_eq!(c.row(1).weight(), g.stalk_dim() / 2);
                }
            }
        }
    }

    #[test]
    fn glitch_coboundary_is_the_golden_six_by_eight() {
        let nl = parse(circuits::GLITCH);
        let cx = assemble_complex(&nl);
        let golden = GF2Matrix::from_str(
            "10100000\n\
             01010000\n\
             10001100\n\
             01000011\n\
             00011010\n\
             00100101",
        )
        .unwrap();
        assert_eq!(cx.d0, golden);
        assert_eq!(cx.d0.rank(), 5);
        // one cokernel coset representative (rows - rank), outside the image
        let reps = cx.d0.cokernel_basis();
        assert_eq!(reps.len(), 1);
        assert!(!crate::gf2::in_span(&cx.d0.columns(), &reps[0]));
    }

    #[test]
    fn glitch_labels_follow_declaration_order() {
        let nl = parse(circuits::GLITCH);
        let cx = assemble_complex(&nl);
        assert_eq!(
            cx.column_labels(&nl),
            vec![
                "gate:g1:~a", "gate:g1:a", "gate:g2:~c", "gate:g2:c",
                "gate:g3:~d*~e", "gate:g3:~d*e", "gate:g3:d*~e", "gate:g3:d*e",
            ]
        );
        assert_eq!(
            cx.row_labels(&nl),
            vec!["edge:c:0", "edge:c:1", "edge:d:0", "edge:d:1", "edge:e:0", "edge:e:1"]
        );
    }

    #[test]
    fn buffered_input_circuit_has_full_rank_two_row_coboundary() {
        let nl = parse(&circuits::m_input_text(3));
        let cx = assemble_complex(&nl);
        assert_eq!(cx.c1_dim(), 2);
        assert_eq!(cx.d0.rank(), 2);
        // contraction block on the gate columns, identity on the buffer's
        assert_eq!(cx.d0, GF2Matrix::from_str("1111000010\n0000111101").unwrap());
    }

    #[test]
    fn buf_self_loop_coboundary_vanishes() {
        let nl = parse("gate b BUF\nwire r b.0 -> b.0\n");
        let cx = assemble_complex(&nl);
        assert_eq!(cx.d0, GF2Matrix::zeros(2, 2));
    }

    #[test]
    fn not_self_loop_coboundary_is_all_ones() {
        let nl = parse(circuits::RINGOSC);
        let cx = assemble_complex(&nl);
        assert_eq!(cx.d0, GF2Matrix::from_str("11\n11").unwrap());
    }

    #[test]
    fn coboundary_blocks_touch_at_most_two_gates() {
        for (_, text) in circuits::bundled() {
            let nl = parse(text);
            let cx = assemble_complex(&nl);
            for block in &cx.c1_blocks {
                let touched: Vec<usize> = cx
                    .c0_blocks
                    .iter()
                    .filter(|vb| {
                        (0..2).any(|r| {
                            (0..vb.dim).any(|k| cx.d0.get(block.offset + r, vb.offset + k))
                        })
                    })
                    .map(|vb| vb.gate)
                    .collect();
                let edge = &nl.edges[block.edge];
                let self_loop = edge.source == edge.sink
                    || matches!(
                        (edge.source, edge.sink),
                        (Endpoint::Pin { gate: a, .. }, Endpoint::Pin { gate: b, .. }) if a == b
                    );
                if self_loop {
                    assert!(touched.len() <= 1, "self-loop `{}` touches {touched:?}", edge.id);
                } else {
                    assert!(touched.len() <= 2);
                }
            }
        }
    }

    #[test]
    fn restriction_of_kernel_vector_matches_on_both_ends() {
        let nl = parse(circuits::GLITCH);
        let cx = assemble_complex(&nl);
        for v in cx.d0.kernel_basis() {
            for e in 0..nl.edges.len() {
                let _ = cx.restrict_section_to_edge(&nl, &v, e);
            }
        }
        // the first canonical kernel vector restricts to logic 1 on edge e
        let first = &cx.d0.kernel_basis()[0];
        assert_eq!(cx.render_cochain(&nl, first), "~a + ~c + ~d*e");
        let e = nl.edge_index("e").unwrap();
        assert_eq!(cx.restrict_section_to_edge(&nl, first, e), one_hot(true));
    }

    #[test]
    #[should_panic(expected = "restrictions disagree")]
    fn restriction_panics_off_the_kernel() {
        let nl = parse(circuits::GLITCH);
        let cx = assemble_complex(&nl);
        // a unit cochain supported on one gate only is no global section
        let bad = GF2Vector::unit(cx.c0_dim(), 0);
        let c = nl.edge_index("c").unwrap();
        cx.restrict_section_to_edge(&nl, &bad, c);
    }

    #[test]
    fn restriction_of_zero_cochain_is_zero_everywhere() {
        let nl = parse(circuits::COMPOSE22);
        let cx = assemble_complex(&nl);
        let zero = GF2Vector::zeros(cx.c0_dim());
        for e in 0..nl.edges.len() {
            assert!(cx.restrict_section_to_edge(&nl, &zero, e).is_zero());
        }
    }

    #[test]
    fn gate_map_commutes_with_one_hot_lift() {
        // for every gate and input tuple, phi applied to the pure tensor
        // equals the one-hot encoding of the gate output
        for (_, text) in circuits::bundled() {
            let nl = parse(text);
            for g in &nl.gates {
                for pin in 0..g.num_outputs {
                    let phi = phi_matrix(g, pin);
                    for k in 0..g.stalk_dim() {
                        let pure = GF2Vector::unit(g.stalk_dim(), k);
                        assert_eq!(phi.mul_vector(&pure), one_hot(g.eval_index(k)[pin]));
                    }
                }
            }
        }
    }
}
