//! Cohomology of the switching sheaf: global sections, their classification
//! into quiescent-state lifts versus transient superpositions, feedback
//! certificates in degree one, and the tree-circuit dimension formula.
//!
//! `H^0 = ker d^0` is the space of global sections. A section that is a pure
//! tensor over every gate and one-hot over every wire is the lift of exactly
//! one quiescent logic state; every other section mixes states and is
//! reported as transient. `H^1` has dimension `rows - rank` of the
//! coboundary; we report its generators as left-kernel certificates, i.e.
//! row dependencies `y` with `yᵀ d^0 = 0`, whose support names the wires
//! participating in feedback.

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::gf2::{in_span, GF2Vector};
use crate::netlist::{Endpoint, Netlist, OracleError, DEFAULT_ORACLE_CAP};
use crate::sheaf::{assemble_complex, CechComplex};
use crate::synth::{random_tree, SplitMix64};

/// Value of a section over one wire, read off the length-2 restriction.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EdgeValue {
    Logic0,
    Logic1,
    /// The restriction vanishes.
    Zero,
    /// Both one-hot components are present: a superposition of 0 and 1.
    Superposed,
}

impl EdgeValue {
    pub fn from_pair(v: &GF2Vector) -> Self {
        assert_eq!(v.len(), 2);
        match (v.get(0), v.get(1)) {
            (true, false) => EdgeValue::Logic0,
            (false, true) => EdgeValue::Logic1,
            (false, false) => EdgeValue::Zero,
            (true, true) => EdgeValue::Superposed,
        }
    }

    /// The binary value, when the restriction is one-hot.
    pub fn as_bit(self) -> Option<bool> {
        match self {
            EdgeValue::Logic0 => Some(false),
            EdgeValue::Logic1 => Some(true),
            _ => None,
        }
    }

    pub fn is_one_hot(self) -> bool {
        self.as_bit().is_some()
    }
}

impl fmt::Display for EdgeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeValue::Logic0 => write!(f, "0"),
            EdgeValue::Logic1 => write!(f, "1"),
            EdgeValue::Zero => write!(f, "-"),
            EdgeValue::Superposed => write!(f, "0+1"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SectionClass {
    /// The one-hot lift of a quiescent logic state.
    QlsLift,
    /// A superposition of states: evidence of time sensitivity.
    Transient,
}

/// An element of `H^0` with its per-wire values and classification.
///
/// The classification criterion is exact: a section is a lift iff its
/// component over every gate is a pure tensor basis element and its
/// restriction to every wire is one-hot. Classifications are relative to
/// the basis at hand (a change of basis can mix the classes); reports always
/// use the canonical reduced-echelon kernel basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Section {
    pub coefficients: GF2Vector,
    /// Value over each edge, indexed like `netlist.edges`.
    pub per_edge: Vec<EdgeValue>,
    pub class: SectionClass,
}

impl Section {
    /// Builds the section view of a kernel element.
    pub fn from_cochain(nl: &Netlist, cx: &CechComplex, c0: GF2Vector) -> Section {
        let per_edge: Vec<EdgeValue> = (0..nl.edges.len())
            .map(|e| EdgeValue::from_pair(&cx.restrict_section_to_edge(nl, &c0, e)))
            .collect();
        let pure = cx
            .c0_blocks
            .iter()
            .all(|b| cx.gate_component(&c0, b.gate).weight() == 1);
        let one_hot = per_edge.iter().all(|v| v.is_one_hot());
        let class = if pure && one_hot { SectionClass::QlsLift } else { SectionClass::Transient };
        Section { coefficients: c0, per_edge, class }
    }

    /// True iff the section is nonzero over every gate and every edge.
    pub fn nonvanishing(&self, cx: &CechComplex) -> bool {
        cx.c0_blocks
            .iter()
            .all(|b| !cx.gate_component(&self.coefficients, b.gate).is_zero())
            && self.per_edge.iter().all(|v| *v != EdgeValue::Zero)
    }

    /// The quiescent state this section lifts, when it is a lift.
    pub fn as_assignment(&self) -> Option<Vec<bool>> {
        self.per_edge.iter().map(|v| v.as_bit()).collect()
    }
}

#[derive(Error, Debug, PartialEq, Eq)]
pub enum LiftError {
    #[error("the assignment violates gate `{gate}` and is not a quiescent state")]
    NotQuiescent { gate: String },
}

/// Lifts a quiescent logic state to a global section: over each gate the
/// pure tensor of the one-hot input values, which the gate maps then carry
/// onto every outgoing wire.
pub fn lift_qls(nl: &Netlist, cx: &CechComplex, assignment: &[bool]) -> Result<Section, LiftError> {
    assert_eq!(assignment.len(), nl.edges.len(), "assignment must cover every edge");
    for (gi, gate) in nl.gates.iter().enumerate() {
        let inputs: Vec<bool> = nl.input_edges(gi).iter().map(|&e| assignment[e]).collect();
        let k = crate::netlist::Gate::input_index(&inputs);
        let row = gate.eval_index(k);
        let consistent = nl
            .output_edges(gi)
            .iter()
            .zip(row)
            .all(|(&e, &want)| assignment[e] == want);
        if !consistent {
            return Err(LiftError::NotQuiescent { gate: gate.id.clone() });
        }
    }
    let mut c0 = GF2Vector::zeros(cx.c0_dim());
    for block in &cx.c0_blocks {
        let inputs: Vec<bool> = nl.input_edges(block.gate).iter().map(|&e| assignment[e]).collect();
        c0.set(block.offset + crate::netlist::Gate::input_index(&inputs), true);
    }
    // the lift of a quiescent state is always a global section
    assert!(cx.d0.mul_vector(&c0).is_zero(), "lifted quiescent state escaped the kernel");
    let section = Section::from_cochain(nl, cx, c0);
    debug_assert_eq!(section.class, SectionClass::QlsLift);
    Ok(section)
}

/// Knobs for [`compute_cohomology_with`].
#[derive(Clone, Debug)]
pub struct AnalysisOptions {
    /// Run the exhaustive oracle and the two lift checks.
    pub run_oracle: bool,
    /// Edge-count ceiling handed to the oracle.
    pub oracle_cap: usize,
    /// Skip the kernel-enumeration direction when `dim H^0` exceeds this.
    pub reverse_enum_cap: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self { run_oracle: true, oracle_cap: DEFAULT_ORACLE_CAP, reverse_enum_cap: 16 }
    }
}

/// Oracle cross-check results.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QlsReport {
    /// All quiescent states, one bit per edge in edge order.
    pub assignments: Vec<Vec<bool>>,
    /// Every quiescent state lifts into the span of the kernel basis.
    pub forward_lift_ok: bool,
    /// Every kernel element that meets the lift criterion is the lift of an
    /// enumerated quiescent state. `None` when `dim H^0` exceeded the
    /// enumeration cap and the check was skipped.
    pub reverse_lift_ok: Option<bool>,
}

impl QlsReport {
    pub fn count(&self) -> usize {
        self.assignments.len()
    }

    /// Combined verdict for both directions (a skipped reverse check does
    /// not fail the verdict, it is reported separately).
    pub fn lift_check(&self) -> bool {
        self.forward_lift_ok && self.reverse_lift_ok.unwrap_or(true)
    }
}

/// Oracle section of a report: either the checks ran, the oracle refused
/// (too many edges), or the caller disabled it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QlsStatus {
    Checked(QlsReport),
    Refused(OracleError),
    Disabled,
}

impl QlsStatus {
    pub fn report(&self) -> Option<&QlsReport> {
        match self {
            QlsStatus::Checked(r) => Some(r),
            _ => None,
        }
    }
}

/// Full degree-0 and degree-1 analysis of one circuit.
#[derive(Clone, Debug)]
pub struct CohomologyReport {
    pub complex: CechComplex,
    /// Canonical kernel basis, classified.
    pub h0_basis: Vec<Section>,
    /// Left-kernel certificates of the coboundary, over the `C^1` planes.
    pub h1_generators: Vec<GF2Vector>,
    pub qls: QlsStatus,
}

impl CohomologyReport {
    pub fn dim_h0(&self) -> usize {
        self.h0_basis.len()
    }

    pub fn dim_h1(&self) -> usize {
        self.h1_generators.len()
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.dim_h0(), self.dim_h1())
    }

    /// Euler bookkeeping: `dim H^0 - dim H^1 = dim C^0 - dim C^1` always.
    pub fn euler_characteristic_holds(&self) -> bool {
        self.dim_h0() as i64 - self.dim_h1() as i64
            == self.complex.c0_dim() as i64 - self.complex.c1_dim() as i64
    }

    /// Edge ids in the support of any degree-1 generator.
    pub fn h1_support(&self, nl: &Netlist) -> Vec<String> {
        let mut ids = Vec::new();
        for block in &self.complex.c1_blocks {
            let hit = self
                .h1_generators
                .iter()
                .any(|g| g.get(block.offset) || g.get(block.offset + 1));
            if hit {
                ids.push(nl.edges[block.edge].id.clone());
            }
        }
        ids
    }
}

/// Computes the full report with default options (oracle on, cap 24).
pub fn compute_cohomology(nl: &Netlist) -> CohomologyReport {
    compute_cohomology_with(nl, &AnalysisOptions::default())
}

pub fn compute_cohomology_with(nl: &Netlist, opts: &AnalysisOptions) -> CohomologyReport {
    let cx = assemble_complex(nl);
    let kernel = cx.d0.kernel_basis();
    let h0_basis: Vec<Section> = kernel
        .iter()
        .map(|v| Section::from_cochain(nl, &cx, v.clone()))
        .collect();
    let h1_generators = cx.d0.left_kernel_basis();

    let qls = if !opts.run_oracle {
        QlsStatus::Disabled
    } else {
        match nl.qls_oracle(opts.oracle_cap) {
            Err(e) => QlsStatus::Refused(e),
            Ok(assignments) => {
                let basis_vectors: Vec<GF2Vector> =
                    h0_basis.iter().map(|s| s.coefficients.clone()).collect();
                let forward_lift_ok = assignments.iter().all(|s| {
                    lift_qls(nl, &cx, s)
                        .map(|sec| in_span(&basis_vectors, &sec.coefficients))
                        .unwrap_or(false)
                });
                let reverse_lift_ok = if h0_basis.len() <= opts.reverse_enum_cap {
                    Some(reverse_lift_check(nl, &cx, &basis_vectors, &assignments))
                } else {
                    None
                };
                QlsStatus::Checked(QlsReport { assignments, forward_lift_ok, reverse_lift_ok })
            }
        }
    };

    CohomologyReport { complex: cx, h0_basis, h1_generators, qls }
}

/// Enumerates the whole kernel (Gray code, one XOR per element) and checks
/// that every element satisfying the lift criterion is the lift of an
/// enumerated quiescent state.
///
/// For kernel elements the criterion reduces to purity: if every gate
/// component is a pure tensor, every edge restriction is automatically
/// one-hot. Purity of the gate components themselves is essential — a
/// non-pure component can restrict one-hot on every edge while encoding no
/// consistent state.
fn reverse_lift_check(
    nl: &Netlist,
    cx: &CechComplex,
    basis: &[GF2Vector],
    assignments: &[Vec<bool>],
) -> bool {
    let oracle_set: HashSet<&[bool]> = assignments.iter().map(Vec::as_slice).collect();
    let mut current = GF2Vector::zeros(cx.c0_dim());
    for step in 1u64..(1u64 << basis.len()) {
        current.xor_assign(&basis[step.trailing_zeros() as usize]);
        // purity scan; remember each gate's pure tensor index
        let mut indices = Vec::with_capacity(cx.c0_blocks.len());
        let mut pure = true;
        for b in &cx.c0_blocks {
            let mut found = None;
            for k in 0..b.dim {
                if current.get(b.offset + k) {
                    if found.is_some() {
                        pure = false;
                        break;
                    }
                    found = Some(k);
                }
            }
            match found {
                Some(k) if pure => indices.push(k),
                _ => {
                    pure = false;
                    break;
                }
            }
        }
        if !pure {
            continue;
        }
        // derive the edge assignment encoded by the pure element
        let value_of = |edge: usize| -> bool {
            let e = &nl.edges[edge];
            match e.sink {
                Endpoint::Pin { gate, pin } => {
                    let m = nl.gates[gate].num_inputs;
                    (indices[gate] >> (m - 1 - pin)) & 1 == 1
                }
                Endpoint::External => {
                    let Endpoint::Pin { gate, pin } = e.source else { unreachable!() };
                    nl.gates[gate].eval_index(indices[gate])[pin]
                }
            }
        };
        let assignment: Vec<bool> = (0..nl.edges.len()).map(value_of).collect();
        if !oracle_set.contains(assignment.as_slice()) {
            return false;
        }
        // and the element must be exactly the lift of that state
        match lift_qls(nl, cx, &assignment) {
            Ok(sec) if sec.coefficients == current => {}
            _ => return false,
        }
    }
    true
}

#[derive(Error, Debug, PartialEq, Eq)]
pub enum TreeFormulaError {
    #[error("not a tree: {0}")]
    NotATree(String),
}

/// For a circuit whose internal edges form a connected tree on the gates,
/// checks the closed dimension formula `sum 2^(m_i) - 2 (n - 1)` against the
/// computed `dim H^0`, and that `H^1` vanishes. Returns (predicted, computed).
pub fn tree_formula_check(nl: &Netlist) -> Result<(usize, usize), TreeFormulaError> {
    let n = nl.gates.len();
    if n == 0 {
        return Err(TreeFormulaError::NotATree("no gates".into()));
    }
    let internal = nl.internal_edges();
    if internal.len() != n - 1 {
        return Err(TreeFormulaError::NotATree(format!(
            "{} internal edges on {n} gates, a tree needs {}",
            internal.len(),
            n - 1
        )));
    }
    // union-find connectivity over internal edges
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &ei in &internal {
        let (Endpoint::Pin { gate: a, .. }, Endpoint::Pin { gate: b, .. }) =
            (nl.edges[ei].source, nl.edges[ei].sink)
        else {
            unreachable!()
        };
        if a == b {
            return Err(TreeFormulaError::NotATree(format!("self-loop `{}`", nl.edges[ei].id)));
        }
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return Err(TreeFormulaError::NotATree(format!("cycle through `{}`", nl.edges[ei].id)));
        }
        parent[ra] = rb;
    }
    let root = find(&mut parent, 0);
    if (0..n).any(|v| find(&mut parent, v) != root) {
        return Err(TreeFormulaError::NotATree("not connected".into()));
    }

    let predicted: usize = nl.gates.iter().map(|g| g.stalk_dim()).sum::<usize>() - 2 * (n - 1);
    let report = compute_cohomology_with(nl, &AnalysisOptions { run_oracle: false, ..Default::default() });
    assert_eq!(report.dim_h1(), 0, "a tree circuit must have trivial H^1");
    Ok((predicted, report.dim_h0()))
}

/// One trial of the lifted-basis experiment.
#[derive(Clone, Debug)]
pub struct ConjectureTrial {
    pub gates: usize,
    pub edges: usize,
    pub dim_h0: usize,
    pub qls_count: usize,
    /// Dimension of the span of the lifted quiescent states inside `H^0`.
    pub lifted_span_dim: usize,
    pub holds: bool,
    /// The circuit, verbatim, when the trial is a counterexample.
    pub netlist_text: Option<String>,
}

/// Does `H^0` of this circuit admit a basis of lifted quiescent states?
/// Equivalently: do the lifts span the kernel. Never panics on a failure —
/// the negative outcome is data, not a bug.
pub fn conjecture_check(nl: &Netlist) -> ConjectureTrial {
    let cx = assemble_complex(nl);
    let dim_h0 = cx.d0.kernel_basis().len();
    let assignments = nl
        .qls_oracle(DEFAULT_ORACLE_CAP)
        .expect("conjecture trials must stay within the oracle cap");
    let lifts: Vec<GF2Vector> = assignments
        .iter()
        .map(|s| lift_qls(nl, &cx, s).expect("oracle state must lift").coefficients)
        .collect();
    let lifted_span_dim = crate::gf2::GF2Matrix::from_rows(lifts, cx.c0_dim()).rank();
    let holds = lifted_span_dim == dim_h0;
    ConjectureTrial {
        gates: nl.gates.len(),
        edges: nl.edges.len(),
        dim_h0,
        qls_count: assignments.len(),
        lifted_span_dim,
        holds,
        netlist_text: if holds { None } else { Some(nl.to_text()) },
    }
}

#[derive(Clone, Debug)]
pub struct ConjectureReport {
    pub seed: u64,
    pub max_gates: usize,
    pub trials: Vec<ConjectureTrial>,
}

impl ConjectureReport {
    pub fn passes(&self) -> usize {
        self.trials.iter().filter(|t| t.holds).count()
    }

    pub fn failures(&self) -> usize {
        self.trials.len() - self.passes()
    }
}

/// Runs the lifted-basis experiment over random directed trees with random
/// truth tables. A counterexample is reported verbatim, never panicked on.
pub fn dag_conjecture_experiment(trials: usize, max_gates: usize, seed: u64) -> ConjectureReport {
    let mut rng = SplitMix64::new(seed);
    let trials = (0..trials)
        .map(|_| conjecture_check(&random_tree(&mut rng, max_gates, 14)))
        .collect();
    ConjectureReport { seed, max_gates, trials }
}
