//! Gate-level netlist model, text format parser, validation, and the
//! brute-force quiescent-state oracle.
//!
//! A netlist is a directed multigraph: vertices are gates carrying explicit
//! truth tables, edges are 1-bit signals. Self-loops are allowed, and edges
//! may dangle into the environment on one side (external inputs and outputs).
//! Fanout is always explicit: every output pin drives exactly one edge, and
//! the parser desugars multi-sink nets by inserting fork gates.
//!
//! # Text format
//!
//! Line oriented, `#` starts a comment:
//!
//! ```text
//! gate <id> <TYPE>                 # TYPE in NOT BUF AND OR NAND NOR XOR FORKk
//! gate <id> TABLE in=<m> out=<n> rows=<2^m n-bit strings>
//! wire <id> <src>.<outpin> -> <dst>.<inpin>
//! input <id> -> <dst>.<inpin>
//! output <src>.<outpin> -> <id>
//! ```
//!
//! Truth-table row `k` encodes the input tuple with pin 0 as the most
//! significant bit of `k`. For `out=0` gates each row is written `-`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

/// Default ceiling on the number of edges the exhaustive oracle will accept.
pub const DEFAULT_ORACLE_CAP: usize = 24;

/// A logic gate: `m` input pins, `n` output pins, and a full truth table
/// with one `n`-bit row per input tuple.
#[derive(Clone, PartialEq, Eq)]
pub struct Gate {
    pub id: String,
    /// Display name: a builtin type, `FORK<k>`, or `TABLE`.
    pub kind: String,
    pub num_inputs: usize,
    pub num_outputs: usize,
    /// `truth_table[k][j]` is output pin `j` for input tuple index `k`.
    pub truth_table: Vec<Vec<bool>>,
}

impl Gate {
    /// Builds a gate from an explicit table, checking the shape.
    pub fn table(id: impl Into<String>, num_inputs: usize, num_outputs: usize, rows: Vec<Vec<bool>>) -> Self {
        let gate = Gate {
            id: id.into(),
            kind: "TABLE".to_string(),
            num_inputs,
            num_outputs,
            truth_table: rows,
        };
        assert_eq!(
            gate.truth_table.len(),
            1 << num_inputs,
            "gate {}: truth table must have 2^{num_inputs} rows",
            gate.id
        );
        for row in &gate.truth_table {
            assert_eq!(row.len(), num_outputs, "gate {}: bad output tuple width", gate.id);
        }
        gate
    }

    /// Builds a builtin gate (`NOT`, `BUF`, `AND`, `OR`, `NAND`, `NOR`, `XOR`,
    /// or `FORK<k>` for `k >= 2`). Returns `None` for unknown names.
    pub fn builtin(id: impl Into<String>, kind: &str) -> Option<Self> {
        let (m, n, table): (usize, usize, Vec<Vec<bool>>) = match kind {
            "NOT" => (1, 1, vec![vec![true], vec![false]]),
            "BUF" => (1, 1, vec![vec![false], vec![true]]),
            "AND" => (2, 1, vec![vec![false], vec![false], vec![false], vec![true]]),
            "OR" => (2, 1, vec![vec![false], vec![true], vec![true], vec![true]]),
            "NAND" => (2, 1, vec![vec![true], vec![true], vec![true], vec![false]]),
            "NOR" => (2, 1, vec![vec![true], vec![false], vec![false], vec![false]]),
            "XOR" => (2, 1, vec![vec![false], vec![true], vec![true], vec![false]]),
            _ => {
                let ways: usize = kind.strip_prefix("FORK")?.parse().ok()?;
                if ways < 2 {
                    return None;
                }
                (1, ways, vec![vec![false; ways], vec![true; ways]])
            }
        };
        let mut gate = Gate::table(id, m, n, table);
        gate.kind = kind.to_string();
        Some(gate)
    }

    /// Fork gate duplicating one input onto `ways` outputs.
    pub fn fork(id: impl Into<String>, ways: usize) -> Self {
        Gate::builtin(id, &format!("FORK{ways}")).expect("fork arity must be >= 2")
    }

    /// Dimension of the gate's vertex stalk, `2^m`.
    pub fn stalk_dim(&self) -> usize {
        1 << self.num_inputs
    }

    /// Truth-table row index for an input tuple, pin 0 most significant.
    pub fn input_index(bits: &[bool]) -> usize {
        bits.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
    }

    /// Output tuple for input tuple index `k`.
    pub fn eval_index(&self, k: usize) -> &[bool] {
        &self.truth_table[k]
    }

    /// True if the truth table matches what `kind` promises as a builtin.
    fn kind_is_faithful_builtin(&self) -> bool {
        Gate::builtin(self.id.clone(), &self.kind).is_some_and(|g| {
            g.num_inputs == self.num_inputs
                && g.num_outputs == self.num_outputs
                && g.truth_table == self.truth_table
        })
    }
}

impl fmt::Debug for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gate({} {} in={} out={})", self.id, self.kind, self.num_inputs, self.num_outputs)
    }
}

/// One side of an edge: a specific gate pin, or the environment.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Endpoint {
    Pin { gate: usize, pin: usize },
    External,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EdgeKind {
    Internal,
    ExternalInput,
    ExternalOutput,
}

/// A 1-bit signal. The source is an output pin (or the environment), the
/// sink an input pin (or the environment).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Edge {
    pub id: String,
    pub source: Endpoint,
    pub sink: Endpoint,
}

impl Edge {
    /// Derived kind. Requires at least one gate endpoint, which `validate`
    /// guarantees.
    pub fn kind(&self) -> EdgeKind {
        match (self.source, self.sink) {
            (Endpoint::Pin { .. }, Endpoint::Pin { .. }) => EdgeKind::Internal,
            (Endpoint::External, Endpoint::Pin { .. }) => EdgeKind::ExternalInput,
            (Endpoint::Pin { .. }, Endpoint::External) => EdgeKind::ExternalOutput,
            (Endpoint::External, Endpoint::External) => {
                panic!("edge {} has no gate endpoint", self.id)
            }
        }
    }
}

/// Diagnostic codes produced by [`Netlist::validate`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DiagCode {
    DuplicateGateId,
    DuplicateEdgeId,
    DanglingReference,
    PinOutOfRange,
    PinUsedTwice,
    UnconnectedPin,
    BadTruthTable,
    NoGateEndpoint,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Diagnostic {
    pub code: DiagCode,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.code, self.message)
    }
}

#[derive(Error, Debug)]
pub enum ParseError {
    #[error("line {line}, column {col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("netlist validation failed:\n{}", .0.iter().map(|d| format!("  {d}")).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<Diagnostic>),
}

#[derive(Error, Clone, Debug, PartialEq, Eq)]
pub enum OracleError {
    #[error("refusing exhaustive enumeration: {edges} edges exceeds the cap of {cap} (2^{edges} states)")]
    TooManyEdges { edges: usize, cap: usize },
}

/// An elaborated circuit: ordered gates and edges. Construction goes through
/// [`Netlist::parse`] or manual assembly plus [`Netlist::validate`].
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Netlist {
    pub gates: Vec<Gate>,
    pub edges: Vec<Edge>,
}

impl Netlist {
    /// Parses and elaborates the text format. Builtin gates expand to
    /// explicit truth tables and multi-sink nets are desugared with fork
    /// gates, so the result satisfies one-edge-per-pin. The returned netlist
    /// has been validated.
    pub fn parse(text: &str) -> Result<Netlist, ParseError> {
        let netlist = parse_statements(text)?.elaborate()?;
        let diagnostics = netlist.validate();
        if diagnostics.is_empty() {
            Ok(netlist)
        } else {
            Err(ParseError::Invalid(diagnostics))
        }
    }

    /// Checks every structural invariant and returns one diagnostic per
    /// violation. An empty list means the netlist is well formed.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut seen = HashMap::new();
        for g in &self.gates {
            if seen.insert(g.id.clone(), ()).is_some() {
                out.push(Diagnostic {
                    code: DiagCode::DuplicateGateId,
                    message: format!("gate id `{}` declared more than once", g.id),
                });
            }
            if g.truth_table.len() != 1 << g.num_inputs {
                out.push(Diagnostic {
                    code: DiagCode::BadTruthTable,
                    message: format!(
                        "gate `{}`: {} truth-table rows, expected {}",
                        g.id,
                        g.truth_table.len(),
                        1 << g.num_inputs
                    ),
                });
            }
            for (k, row) in g.truth_table.iter().enumerate() {
                if row.len() != g.num_outputs {
                    out.push(Diagnostic {
                        code: DiagCode::BadTruthTable,
                        message: format!(
                            "gate `{}`: row {k} has {} bits, expected {}",
                            g.id,
                            row.len(),
                            g.num_outputs
                        ),
                    });
                }
            }
        }
        let mut seen = HashMap::new();
        for e in &self.edges {
            if seen.insert(e.id.clone(), ()).is_some() {
                out.push(Diagnostic {
                    code: DiagCode::DuplicateEdgeId,
                    message: format!("edge id `{}` declared more than once", e.id),
                });
            }
            if e.source == Endpoint::External && e.sink == Endpoint::External {
                out.push(Diagnostic {
                    code: DiagCode::NoGateEndpoint,
                    message: format!("edge `{}` connects the environment to itself", e.id),
                });
            }
        }
        // pin bookkeeping: each output pin drives exactly one edge, each
        // input pin is driven by exactly one edge
        let mut out_use: Vec<Vec<usize>> = self.gates.iter().map(|g| vec![0; g.num_outputs]).collect();
        let mut in_use: Vec<Vec<usize>> = self.gates.iter().map(|g| vec![0; g.num_inputs]).collect();
        for e in &self.edges {
            if let Endpoint::Pin { gate, pin } = e.source {
                match self.gates.get(gate) {
                    None => out.push(Diagnostic {
                        code: DiagCode::DanglingReference,
                        message: format!("edge `{}` references unknown gate index {gate}", e.id),
                    }),
                    Some(g) if pin >= g.num_outputs => out.push(Diagnostic {
                        code: DiagCode::PinOutOfRange,
                        message: format!("edge `{}`: gate `{}` has no output pin {pin}", e.id, g.id),
                    }),
                    Some(_) => out_use[gate][pin] += 1,
                }
            }
            if let Endpoint::Pin { gate, pin } = e.sink {
                match self.gates.get(gate) {
                    None => out.push(Diagnostic {
                        code: DiagCode::DanglingReference,
                        message: format!("edge `{}` references unknown gate index {gate}", e.id),
                    }),
                    Some(g) if pin >= g.num_inputs => out.push(Diagnostic {
                        code: DiagCode::PinOutOfRange,
                        message: format!("edge `{}`: gate `{}` has no input pin {pin}", e.id, g.id),
                    }),
                    Some(_) => in_use[gate][pin] += 1,
                }
            }
        }
        for (gi, g) in self.gates.iter().enumerate() {
            for (pin, &n) in out_use[gi].iter().enumerate() {
                match n {
                    0 => out.push(Diagnostic {
                        code: DiagCode::UnconnectedPin,
                        message: format!("gate `{}`: output pin {pin} drives no edge", g.id),
                    }),
                    1 => {}
                    _ => out.push(Diagnostic {
                        code: DiagCode::PinUsedTwice,
                        message: format!("gate `{}`: output pin {pin} drives {n} edges", g.id),
                    }),
                }
            }
            for (pin, &n) in in_use[gi].iter().enumerate() {
                match n {
                    0 => out.push(Diagnostic {
                        code: DiagCode::UnconnectedPin,
                        message: format!("gate `{}`: input pin {pin} is driven by no edge", g.id),
                    }),
                    1 => {}
                    _ => out.push(Diagnostic {
                        code: DiagCode::PinUsedTwice,
                        message: format!("gate `{}`: input pin {pin} is driven by {n} edges", g.id),
                    }),
                }
            }
        }
        out
    }

    pub fn gate_index(&self, id: &str) -> Option<usize> {
        self.gates.iter().position(|g| g.id == id)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    /// Edge indices driving each input pin of `gate`, in pin order.
    /// Requires a validated netlist.
    pub fn input_edges(&self, gate: usize) -> Vec<usize> {
        let mut slots = vec![None; self.gates[gate].num_inputs];
        for (ei, e) in self.edges.iter().enumerate() {
            if let Endpoint::Pin { gate: g, pin } = e.sink {
                if g == gate {
                    slots[pin] = Some(ei);
                }
            }
        }
        slots
            .into_iter()
            .map(|s| s.expect("unconnected input pin; validate the netlist first"))
            .collect()
    }

    /// Edge indices driven by each output pin of `gate`, in pin order.
    /// Requires a validated netlist.
    pub fn output_edges(&self, gate: usize) -> Vec<usize> {
        let mut slots = vec![None; self.gates[gate].num_outputs];
        for (ei, e) in self.edges.iter().enumerate() {
            if let Endpoint::Pin { gate: g, pin } = e.source {
                if g == gate {
                    slots[pin] = Some(ei);
                }
            }
        }
        slots
            .into_iter()
            .map(|s| s.expect("unconnected output pin; validate the netlist first"))
            .collect()
    }

    /// Indices of internal edges (both endpoints are gates), in declaration order.
    pub fn internal_edges(&self) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.kind() == EdgeKind::Internal)
            .map(|(i, _)| i)
            .collect()
    }

    /// True iff `assignment` (one bit per edge, in edge order) satisfies
    /// every gate's truth table.
    pub fn is_quiescent(&self, assignment: &[bool]) -> bool {
        assert_eq!(assignment.len(), self.edges.len());
        for (gi, gate) in self.gates.iter().enumerate() {
            let inputs: Vec<bool> = self.input_edges(gi).iter().map(|&e| assignment[e]).collect();
            let expected = gate.eval_index(Gate::input_index(&inputs));
            let ok = self
                .output_edges(gi)
                .iter()
                .zip(expected)
                .all(|(&e, &want)| assignment[e] == want);
            if !ok {
                return false;
            }
        }
        true
    }

    /// Exhaustively enumerates all `2^|E|` edge assignments and returns the
    /// quiescent ones, i.e. those consistent with every gate. This is the
    /// independent oracle everything downstream is checked against, so it
    /// refuses (rather than samples) above `cap` edges.
    pub fn qls_oracle(&self, cap: usize) -> Result<Vec<Vec<bool>>, OracleError> {
        let n = self.edges.len();
        if n > cap {
            return Err(OracleError::TooManyEdges { edges: n, cap });
        }
        // precompute pin-to-edge maps once
        let inputs: Vec<Vec<usize>> = (0..self.gates.len()).map(|g| self.input_edges(g)).collect();
        let outputs: Vec<Vec<usize>> = (0..self.gates.len()).map(|g| self.output_edges(g)).collect();
        let mut found = Vec::new();
        for mask in 0u64..(1u64 << n) {
            // edge i takes bit n-1-i so assignments enumerate in
            // lexicographic order of the edge tuple
            let value = |e: usize| (mask >> (n - 1 - e)) & 1 == 1;
            let quiescent = self.gates.iter().enumerate().all(|(gi, gate)| {
                let k = inputs[gi].iter().fold(0, |acc, &e| (acc << 1) | usize::from(value(e)));
                let row = gate.eval_index(k);
                outputs[gi].iter().zip(row).all(|(&e, &want)| value(e) == want)
            });
            if quiescent {
                found.push((0..n).map(value).collect());
            }
        }
        Ok(found)
    }

    /// Renders the netlist back into the text format. Parsing the result
    /// yields an identical netlist, and re-elaboration inserts nothing new.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for g in &self.gates {
            if g.kind_is_faithful_builtin() {
                out.push_str(&format!("gate {} {}\n", g.id, g.kind));
            } else {
                let rows: Vec<String> = g
                    .truth_table
                    .iter()
                    .map(|row| {
                        if row.is_empty() {
                            "-".to_string()
                        } else {
                            row.iter().map(|&b| if b { '1' } else { '0' }).collect()
                        }
                    })
                    .collect();
                out.push_str(&format!(
                    "gate {} TABLE in={} out={} rows={}\n",
                    g.id,
                    g.num_inputs,
                    g.num_outputs,
                    rows.join(" ")
                ));
            }
        }
        for e in &self.edges {
            match (e.source, e.sink) {
                (Endpoint::Pin { gate: s, pin: sp }, Endpoint::Pin { gate: d, pin: dp }) => {
                    out.push_str(&format!(
                        "wire {} {}.{} -> {}.{}\n",
                        e.id, self.gates[s].id, sp, self.gates[d].id, dp
                    ));
                }
                (Endpoint::External, Endpoint::Pin { gate: d, pin: dp }) => {
                    out.push_str(&format!("input {} -> {}.{}\n", e.id, self.gates[d].id, dp));
                }
                (Endpoint::Pin { gate: s, pin: sp }, Endpoint::External) => {
                    out.push_str(&format!("output {}.{} -> {}\n", self.gates[s].id, sp, e.id));
                }
                (Endpoint::External, Endpoint::External) => {
                    panic!("edge {} has no gate endpoint", e.id)
                }
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// parser internals
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum SourceKey {
    /// Output pin of a named gate.
    Pin(String, usize),
    /// Named external input signal.
    External(String),
}

#[derive(Clone, Debug)]
enum SinkSpec {
    Pin { gate: String, pin: usize, line: usize, col: usize },
    External,
}

#[derive(Clone, Debug)]
struct Connection {
    source: SourceKey,
    source_pos: (usize, usize),
    declared_id: String,
    sink: SinkSpec,
}

/// Statement-level representation, before fork desugaring.
struct RawNetlist {
    gates: Vec<(Gate, usize)>, // gate, line
    connections: Vec<Connection>,
}

fn syntax(line: usize, col: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, col, message: message.into() }
}

fn valid_id(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Splits `g.3` into a gate id and a pin index.
fn parse_pin_ref(tok: &str, line: usize, col: usize) -> Result<(String, usize), ParseError> {
    let (gate, pin) = tok
        .rsplit_once('.')
        .ok_or_else(|| syntax(line, col, format!("expected <gate>.<pin>, got `{tok}`")))?;
    if !valid_id(gate) {
        return Err(syntax(line, col, format!("invalid gate id `{gate}`")));
    }
    let pin = pin
        .parse()
        .map_err(|_| syntax(line, col, format!("invalid pin index `{pin}`")))?;
    Ok((gate.to_string(), pin))
}

fn parse_statements(text: &str) -> Result<RawNetlist, ParseError> {
    let mut raw = RawNetlist { gates: Vec::new(), connections: Vec::new() };
    for (lineno, full_line) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let content = full_line.split('#').next().unwrap_or("");
        // tokens with their 1-based column positions
        let mut toks: Vec<(usize, &str)> = Vec::new();
        let mut offset = 0;
        for part in content.split_whitespace() {
            let col = content[offset..].find(part).unwrap() + offset;
            toks.push((col + 1, part));
            offset = col + part.len();
        }
        if toks.is_empty() {
            continue;
        }
        let kw = toks[0];
        let arg = |i: usize| -> Result<(usize, &str), ParseError> {
            toks.get(i)
                .copied()
                .ok_or_else(|| syntax(line_no, content.len() + 1, format!("`{}` statement is missing arguments", kw.1)))
        };
        match kw.1 {
            "gate" => {
                let (idcol, id) = arg(1)?;
                if !valid_id(id) {
                    return Err(syntax(line_no, idcol, format!("invalid gate id `{id}`")));
                }
                let (tycol, ty) = arg(2)?;
                if ty == "TABLE" {
                    let parse_kv = |i: usize, key: &str| -> Result<usize, ParseError> {
                        let (c, t) = arg(i)?;
                        t.strip_prefix(key)
                            .and_then(|v| v.parse().ok())
                            .ok_or_else(|| syntax(line_no, c, format!("expected `{key}<integer>`, got `{t}`")))
                    };
                    let m = parse_kv(3, "in=")?;
                    let n = parse_kv(4, "out=")?;
                    // 2^m truth-table rows and a 2^m-dimensional stalk: keep m sane
                    if m > 20 {
                        return Err(syntax(line_no, kw.0, format!("gate `{id}`: in={m} is beyond the supported range (max 20)")));
                    }
                    let (rcol, first) = arg(5)?;
                    let first = first
                        .strip_prefix("rows=")
                        .ok_or_else(|| syntax(line_no, rcol, "expected `rows=<bits>`"))?;
                    let mut row_toks = vec![(rcol, first)];
                    row_toks.extend(toks[6..].iter().copied());
                    if row_toks.len() != 1 << m {
                        return Err(syntax(
                            line_no,
                            rcol,
                            format!("gate `{id}`: {} truth-table rows, expected {}", row_toks.len(), 1 << m),
                        ));
                    }
                    let mut rows = Vec::with_capacity(1 << m);
                    for (c, t) in row_toks {
                        let bits: Vec<bool> = if t == "-" {
                            Vec::new()
                        } else {
                            t.chars()
                                .map(|ch| match ch {
                                    '0' => Ok(false),
                                    '1' => Ok(true),
                                    other => Err(syntax(line_no, c, format!("invalid bit `{other}` in row `{t}`"))),
                                })
                                .collect::<Result<_, _>>()?
                        };
                        if bits.len() != n {
                            return Err(syntax(line_no, c, format!("row `{t}` has {} bits, expected {n}", bits.len())));
                        }
                        rows.push(bits);
                    }
                    raw.gates.push((Gate::table(id, m, n, rows), line_no));
                } else {
                    let gate = Gate::builtin(id, ty)
                        .ok_or_else(|| syntax(line_no, tycol, format!("unknown gate type `{ty}`")))?;
                    raw.gates.push((gate, line_no));
                }
            }
            "wire" => {
                let (idcol, id) = arg(1)?;
                if !valid_id(id) {
                    return Err(syntax(line_no, idcol, format!("invalid wire id `{id}`")));
                }
                let (scol, src) = arg(2)?;
                let (acol, arrow) = arg(3)?;
                if arrow != "->" {
                    return Err(syntax(line_no, acol, format!("expected `->`, got `{arrow}`")));
                }
                let (dcol, dst) = arg(4)?;
                let (sg, sp) = parse_pin_ref(src, line_no, scol)?;
                let (dg, dp) = parse_pin_ref(dst, line_no, dcol)?;
                raw.connections.push(Connection {
                    source: SourceKey::Pin(sg, sp),
                    source_pos: (line_no, scol),
                    declared_id: id.to_string(),
                    sink: SinkSpec::Pin { gate: dg, pin: dp, line: line_no, col: dcol },
                });
            }
            "input" => {
                let (idcol, id) = arg(1)?;
                if !valid_id(id) {
                    return Err(syntax(line_no, idcol, format!("invalid input id `{id}`")));
                }
                let (acol, arrow) = arg(2)?;
                if arrow != "->" {
                    return Err(syntax(line_no, acol, format!("expected `->`, got `{arrow}`")));
                }
                let (dcol, dst) = arg(3)?;
                let (dg, dp) = parse_pin_ref(dst, line_no, dcol)?;
                raw.connections.push(Connection {
                    source: SourceKey::External(id.to_string()),
                    source_pos: (line_no, idcol),
                    declared_id: id.to_string(),
                    sink: SinkSpec::Pin { gate: dg, pin: dp, line: line_no, col: dcol },
                });
            }
            "output" => {
                let (scol, src) = arg(1)?;
                let (acol, arrow) = arg(2)?;
                if arrow != "->" {
                    return Err(syntax(line_no, acol, format!("expected `->`, got `{arrow}`")));
                }
                let (idcol, id) = arg(3)?;
                if !valid_id(id) {
                    return Err(syntax(line_no, idcol, format!("invalid output id `{id}`")));
                }
                let (sg, sp) = parse_pin_ref(src, line_no, scol)?;
                raw.connections.push(Connection {
                    source: SourceKey::Pin(sg, sp),
                    source_pos: (line_no, scol),
                    declared_id: id.to_string(),
                    sink: SinkSpec::External,
                });
            }
            other => {
                return Err(syntax(line_no, kw.0, format!("unknown statement `{other}`")));
            }
        }
    }
    Ok(raw)
}

impl RawNetlist {
    /// Desugars multi-sink nets into fork gates and resolves names to
    /// indices. A source feeding `k >= 2` sinks grows a `FORK<k>` gate; the
    /// trunk edge keeps the external input's id (or gets a synthesized
    /// `__net<i>` id for a gate-pin source, whose branch edges keep their
    /// declared wire ids).
    fn elaborate(self) -> Result<Netlist, ParseError> {
        let mut gates: Vec<Gate> = Vec::with_capacity(self.gates.len());
        let mut gate_lookup: HashMap<String, usize> = HashMap::new();
        for (gate, line) in self.gates {
            if gate_lookup.contains_key(&gate.id) {
                return Err(syntax(line, 1, format!("gate id `{}` declared more than once", gate.id)));
            }
            gate_lookup.insert(gate.id.clone(), gates.len());
            gates.push(gate);
        }

        // group connections by source, preserving first-occurrence order
        let mut net_of: HashMap<SourceKey, usize> = HashMap::new();
        let mut net_sizes: Vec<usize> = Vec::new();
        for conn in &self.connections {
            match net_of.get(&conn.source) {
                Some(&ni) => net_sizes[ni] += 1,
                None => {
                    net_of.insert(conn.source.clone(), net_sizes.len());
                    net_sizes.push(1);
                }
            }
        }

        let resolve_source = |key: &SourceKey, pos: (usize, usize), gates: &[Gate]| -> Result<Endpoint, ParseError> {
            match key {
                SourceKey::External(_) => Ok(Endpoint::External),
                SourceKey::Pin(gid, pin) => {
                    let gate = *gate_lookup
                        .get(gid)
                        .ok_or_else(|| syntax(pos.0, pos.1, format!("unknown gate `{gid}`")))?;
                    if *pin >= gates[gate].num_outputs {
                        return Err(syntax(pos.0, pos.1, format!("gate `{gid}` has no output pin {pin}")));
                    }
                    Ok(Endpoint::Pin { gate, pin: *pin })
                }
            }
        };
        let resolve_sink = |sink: &SinkSpec, gates: &[Gate]| -> Result<Endpoint, ParseError> {
            match sink {
                SinkSpec::External => Ok(Endpoint::External),
                SinkSpec::Pin { gate: gid, pin, line, col } => {
                    let gate = *gate_lookup
                        .get(gid)
                        .ok_or_else(|| syntax(*line, *col, format!("unknown gate `{gid}`")))?;
                    if *pin >= gates[gate].num_inputs {
                        return Err(syntax(*line, *col, format!("gate `{gid}` has no input pin {pin}")));
                    }
                    Ok(Endpoint::Pin { gate, pin: *pin })
                }
            }
        };

        let mut edges: Vec<Edge> = Vec::new();
        let mut fork_counter = 0;
        let mut net_counter = 0;
        // fork gate index per net, created lazily at the net's first connection
        let mut fork_for_net: HashMap<usize, usize> = HashMap::new();
        let mut branch_no: HashMap<usize, usize> = HashMap::new();
        for conn in &self.connections {
            let ni = net_of[&conn.source];
            if net_sizes[ni] == 1 {
                edges.push(Edge {
                    id: conn.declared_id.clone(),
                    source: resolve_source(&conn.source, conn.source_pos, &gates)?,
                    sink: resolve_sink(&conn.sink, &gates)?,
                });
                continue;
            }
            // multi-sink net
            let fork = match fork_for_net.get(&ni) {
                Some(&f) => f,
                None => {
                    let ways = net_sizes[ni];
                    let fork_id = format!("__fork{fork_counter}");
                    fork_counter += 1;
                    let fork = gates.len();
                    gates.push(Gate::fork(fork_id, ways));
                    fork_for_net.insert(ni, fork);
                    let trunk_id = match &conn.source {
                        SourceKey::External(id) => id.clone(),
                        SourceKey::Pin(..) => {
                            let id = format!("__net{net_counter}");
                            net_counter += 1;
                            id
                        }
                    };
                    edges.push(Edge {
                        id: trunk_id,
                        source: resolve_source(&conn.source, conn.source_pos, &gates)?,
                        sink: Endpoint::Pin { gate: fork, pin: 0 },
                    });
                    fork
                }
            };
            let branch = *branch_no.entry(ni).or_insert(0);
            branch_no.insert(ni, branch + 1);
            let branch_id = match &conn.source {
                SourceKey::External(id) => format!("{id}__{branch}"),
                SourceKey::Pin(..) => conn.declared_id.clone(),
            };
            edges.push(Edge {
                id: branch_id,
                source: Endpoint::Pin { gate: fork, pin: branch },
                sink: resolve_sink(&conn.sink, &gates)?,
            });
        }

        Ok(Netlist { gates, edges })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_parses_to_empty_netlist() {
        let nl = Netlist::parse("").unwrap();
        assert!(nl.gates.is_empty());
        assert!(nl.edges.is_empty());
        assert!(nl.validate().is_empty());
    }

    #[test]
    fn single_and_gate_shape() {
        let nl = Netlist::parse(
            "gate g1 AND\n\
             input a -> g1.0\n\
             input b -> g1.1\n\
             output g1.0 -> x\n",
        )
        .unwrap();
        assert_eq!(nl.gates.len(), 1);
        assert_eq!(nl.edges.len(), 3);
        assert!(nl.internal_edges().is_empty());
    }

    #[test]
    fn shared_input_circuit_shape() {
        let nl = Netlist::parse(crate::circuits::GLITCH).unwrap();
        assert_eq!(nl.gates.len(), 3);
        assert_eq!(nl.edges.len(), 5);
        assert_eq!(nl.internal_edges().len(), 3);
    }

    #[test]
    fn comments_and_blank_lines_are_ignored() {
        let nl = Netlist::parse("# a comment\n\n  gate g1 NOT # trailing\ninput a -> g1.0\noutput g1.0 -> x\n").unwrap();
        assert_eq!(nl.gates.len(), 1);
        assert_eq!(nl.edges.len(), 2);
    }

    #[test]
    fn syntax_error_reports_line_and_column() {
        let err = Netlist::parse("gate g1 AND\nwire w g1.0 => g1.1\n").unwrap_err();
        match err {
            ParseError::Syntax { line, col, .. } => {
                assert_eq!(line, 2);
                assert!(col > 1);
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn duplicate_gate_id_is_rejected() {
        let err = Netlist::parse("gate g NOT\ngate g NOT\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, .. }));
    }

    #[test]
    fn unconnected_pin_is_a_validation_error() {
        // 2-input AND with only one edge attached
        let err = Netlist::parse("gate g1 AND\ninput a -> g1.0\noutput g1.0 -> x\n").unwrap_err();
        let ParseError::Invalid(diags) = err else { panic!("expected validation failure") };
        assert!(diags.iter().any(|d| d.code == DiagCode::UnconnectedPin));
    }

    #[test]
    fn validate_reports_dangling_reference() {
        let mut nl = Netlist::parse("gate g1 NOT\ninput a -> g1.0\noutput g1.0 -> x\n").unwrap();
        nl.edges.push(Edge {
            id: "ghost".into(),
            source: Endpoint::Pin { gate: 7, pin: 0 },
            sink: Endpoint::External,
        });
        let diags = nl.validate();
        assert!(diags.iter().any(|d| d.code == DiagCode::DanglingReference));
    }

    #[test]
    fn fanout_desugars_with_a_fork_gate() {
        // one NOT output feeding two AND inputs; the parser must insert a fork
        let nl = Netlist::parse(
            "gate n NOT\n\
             gate g AND\n\
             input a -> n.0\n\
             wire u n.0 -> g.0\n\
             wire v n.0 -> g.1\n\
             output g.0 -> x\n",
        )
        .unwrap();
        assert_eq!(nl.gates.len(), 3);
        let fork = nl.gate_index("__fork0").unwrap();
        assert_eq!(nl.gates[fork].kind, "FORK2");
        // trunk edge plus two named branches
        assert!(nl.edge_index("__net0").is_some());
        assert!(nl.edge_index("u").is_some());
        assert!(nl.edge_index("v").is_some());
        assert!(nl.validate().is_empty());
    }

    #[test]
    fn external_input_fanout_keeps_its_id_on_the_trunk() {
        let nl = Netlist::parse(
            "gate g AND\n\
             input a -> g.0\n\
             input a -> g.1\n\
             output g.0 -> x\n",
        )
        .unwrap();
        let trunk = nl.edge_index("a").unwrap();
        assert_eq!(nl.edges[trunk].kind(), EdgeKind::ExternalInput);
        assert!(nl.edge_index("a__0").is_some());
        assert!(nl.edge_index("a__1").is_some());
        assert!(nl.validate().is_empty());
    }

    #[test]
    fn round_trip_through_text_is_identity() {
        for text in [
            crate::circuits::AND1,
            crate::circuits::GLITCH,
            crate::circuits::RSFF,
            crate::circuits::RINGOSC,
        ] {
            let nl = Netlist::parse(text).unwrap();
            let again = Netlist::parse(&nl.to_text()).unwrap();
            assert_eq!(nl, again, "re-parse changed the netlist for:\n{text}");
        }
    }

    #[test]
    fn elaboration_is_idempotent_on_fanout_circuits() {
        let nl = Netlist::parse(
            "gate n NOT\ngate g AND\ninput a -> n.0\nwire u n.0 -> g.0\nwire v n.0 -> g.1\noutput g.0 -> x\n",
        )
        .unwrap();
        let again = Netlist::parse(&nl.to_text()).unwrap();
        assert_eq!(nl, again);
        assert_eq!(nl.gates.len(), again.gates.len());
    }

    #[test]
    fn oracle_glitch_circuit_has_two_states() {
        let nl = Netlist::parse(crate::circuits::GLITCH).unwrap();
        let qls = nl.qls_oracle(DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(qls.len(), 2);
        for s in &qls {
            assert!(nl.is_quiescent(s));
        }
    }

    #[test]
    fn oracle_flip_flop_matches_the_classic_table() {
        let nl = Netlist::parse(crate::circuits::RSFF).unwrap();
        let qls = nl.qls_oracle(DEFAULT_ORACLE_CAP).unwrap();
        // rows (a, b, c, q): danger, set, reset, hold zero, hold one
        let expected = [
            [false, false, true, true],
            [false, true, true, true],
            [true, false, false, false],
            [true, true, false, false],
            [true, true, true, true],
        ];
        let a = nl.edge_index("a").unwrap();
        let b = nl.edge_index("b").unwrap();
        let c = nl.edge_index("c").unwrap();
        let q = nl.edge_index("q").unwrap();
        let got: Vec<[bool; 4]> = qls.iter().map(|s| [s[a], s[b], s[c], s[q]]).collect();
        assert_eq!(got.len(), 5);
        for row in expected {
            assert!(got.contains(&row), "missing state {row:?}");
        }
    }

    #[test]
    fn oracle_ring_oscillator_has_no_quiescent_state() {
        let nl = Netlist::parse(crate::circuits::RINGOSC).unwrap();
        assert_eq!(nl.qls_oracle(DEFAULT_ORACLE_CAP).unwrap().len(), 0);
    }

    #[test]
    fn oracle_refuses_above_the_cap() {
        let nl = Netlist::parse(crate::circuits::GLITCH).unwrap();
        let err = nl.qls_oracle(3).unwrap_err();
        assert_eq!(err, OracleError::TooManyEdges { edges: 5, cap: 3 });
    }

    #[test]
    fn oracle_is_stable_under_declaration_reordering() {
        let original = Netlist::parse(crate::circuits::GLITCH).unwrap();
        // same circuit with gates and connections shuffled
        let reordered = Netlist::parse(
            "gate g3 AND\n\
             gate g1 FORK2\n\
             gate g2 NOT\n\
             output g3.0 -> f\n\
             wire e g2.0 -> g3.1\n\
             wire d g1.1 -> g3.0\n\
             wire c g1.0 -> g2.0\n\
             input a -> g1.0\n",
        )
        .unwrap();
        let by_id = |nl: &Netlist| -> std::collections::BTreeSet<Vec<(String, bool)>> {
            nl.qls_oracle(DEFAULT_ORACLE_CAP)
                .unwrap()
                .iter()
                .map(|s| {
                    let mut row: Vec<(String, bool)> =
                        nl.edges.iter().zip(s).map(|(e, &b)| (e.id.clone(), b)).collect();
                    row.sort();
                    row
                })
                .collect()
        };
        assert_eq!(by_id(&original), by_id(&reordered));
    }

    #[test]
    fn zero_input_constant_gate_is_supported() {
        let nl = Netlist::parse("gate one TABLE in=0 out=1 rows=1\noutput one.0 -> x\n").unwrap();
        assert_eq!(nl.gates[0].stalk_dim(), 1);
        let qls = nl.qls_oracle(DEFAULT_ORACLE_CAP).unwrap();
        assert_eq!(qls, vec![vec![true]]);
    }

    #[test]
    fn zero_output_sink_gate_is_supported() {
        let nl = Netlist::parse("gate sink TABLE in=1 out=0 rows=- -\ninput a -> sink.0\n").unwrap();
        assert_eq!(nl.gates[0].num_outputs, 0);
        assert_eq!(nl.qls_oracle(DEFAULT_ORACLE_CAP).unwrap().len(), 2);
    }

    #[test]
    fn empty_netlist_has_one_vacuous_state() {
        let nl = Netlist::parse("").unwrap();
        assert_eq!(nl.qls_oracle(DEFAULT_ORACLE_CAP).unwrap(), vec![Vec::<bool>::new()]);
    }
}
