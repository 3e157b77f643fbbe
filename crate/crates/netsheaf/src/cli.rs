//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for I/O, parse, validation, or usage
//! problems, 2 when the incremental replay disagrees with the direct
//! computation (an internal cross-check failure).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::cohomology::{
    compute_cohomology_with, dag_conjecture_experiment, AnalysisOptions, CohomologyReport,
    QlsStatus, SectionClass,
};
use crate::dot::emit_dot;
use crate::mayer_vietoris::{replay, MvLedger, StepKind};
use crate::netlist::{Netlist, DEFAULT_ORACLE_CAP};
use crate::report::{analysis_json, mv_json};
use crate::suite::run_filtered;

#[derive(Parser, Debug)]
#[command(
    name = "netsheaf",
    version,
    about = "Switching-sheaf cohomology analysis of gate-level netlists"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Analyze a netlist: dimensions, classified global sections, feedback certificates
    Analyze(AnalyzeArgs),
    /// Run the bundled golden-circuit suite and print a pass/fail table
    PaperSuite(PaperSuiteArgs),
    /// Emit a Graphviz DOT rendering, highlighting feedback support
    Dot(DotArgs),
    /// Rebuild the circuit gate by gate and wire by wire, classifying each wire
    MvReplay(MvReplayArgs),
    /// Random-tree experiment: does H^0 always admit a basis of lifted states?
    Conjecture(ConjectureArgs),
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Input netlist file
    pub input: PathBuf,
    /// Emit JSON instead of text
    #[arg(long)]
    pub json: bool,
    /// Also run the incremental replay and cross-check the dimensions
    #[arg(long)]
    pub mv: bool,
    /// Include the coboundary matrix dump
    #[arg(long)]
    pub emit_d0: bool,
    /// Include the DOT rendering
    #[arg(long)]
    pub emit_dot: bool,
    /// Skip the exhaustive state oracle
    #[arg(long)]
    pub no_oracle: bool,
    /// Edge-count cap for the exhaustive oracle (must be >= 1)
    #[arg(long, default_value_t = DEFAULT_ORACLE_CAP)]
    pub oracle_cap: usize,
}

#[derive(Args, Debug)]
pub struct PaperSuiteArgs {
    /// Run only the checks whose name contains this substring
    #[arg(long)]
    pub filter: Option<String>,
}

#[derive(Args, Debug)]
pub struct DotArgs {
    /// Input netlist file
    pub input: PathBuf,
}

#[derive(Args, Debug)]
pub struct MvReplayArgs {
    /// Input netlist file
    pub input: PathBuf,
    /// Emit the step log as JSON
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug)]
pub struct ConjectureArgs {
    /// Number of random trees to examine
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Largest gate count per tree
    #[arg(long, default_value_t = 6)]
    pub max_gates: usize,
    /// Seed for the deterministic generator
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Emit JSON instead of text
    #[arg(long)]
    pub json: bool,
}

/// Captured result of one command, ready to print.
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Outcome {
        Outcome { stdout, stderr: String::new(), code: 0 }
    }

    fn fail(code: i32, stderr: String) -> Outcome {
        Outcome { stdout: String::new(), stderr, code }
    }
}

/// Parses arguments and executes; never exits the process itself.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = execute(cli);
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    outcome.code
}

pub fn execute(cli: Cli) -> Outcome {
    match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::PaperSuite(args) => cmd_paper_suite(args),
        Command::Dot(args) => cmd_dot(args),
        Command::MvReplay(args) => cmd_mv_replay(args),
        Command::Conjecture(args) => cmd_conjecture(args),
    }
}

fn load_netlist(path: &PathBuf) -> Result<Netlist, Outcome> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Outcome::fail(1, format!("error: cannot read {}: {e}\n", path.display())))?;
    Netlist::parse(&text).map_err(|e| Outcome::fail(1, format!("error: {e}\n")))
}

fn cmd_analyze(args: AnalyzeArgs) -> Outcome {
    if args.oracle_cap == 0 {
        return Outcome::fail(1, "error: --oracle-cap must be at least 1\n".into());
    }
    let nl = match load_netlist(&args.input) {
        Ok(nl) => nl,
        Err(out) => return out,
    };
    let opts = AnalysisOptions {
        run_oracle: !args.no_oracle,
        oracle_cap: args.oracle_cap,
        ..Default::default()
    };
    let report = compute_cohomology_with(&nl, &opts);
    let ledger = if args.mv {
        match replay(&nl) {
            Ok((ledger, _)) => Some(ledger),
            Err(e) => return Outcome::fail(2, format!("internal cross-check failure: {e}\n")),
        }
    } else {
        None
    };
    let name = args.input.display().to_string();
    if args.json {
        let dot = args.emit_dot.then(|| emit_dot(&nl, &report.h1_support(&nl)));
        let doc = analysis_json(&name, &nl, &report, ledger.as_ref(), args.emit_d0, dot);
        let mut text = serde_json::to_string_pretty(&doc).expect("report serialization");
        text.push('\n');
        Outcome::ok(text)
    } else {
        let mut out = render_analysis_text(&name, &nl, &report);
        if let Some(ledger) = &ledger {
            out.push_str(&render_mv_text(ledger));
        }
        if args.emit_d0 {
            out.push_str("\ncoboundary d0:\n");
            out.push_str(&report.complex.dump_d0(&nl));
        }
        if args.emit_dot {
            out.push('\n');
            out.push_str(&emit_dot(&nl, &report.h1_support(&nl)));
        }
        Outcome::ok(out)
    }
}

fn render_analysis_text(name: &str, nl: &Netlist, report: &CohomologyReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "circuit: {name}");
    let _ = writeln!(
        out,
        "gates: {}   edges: {} ({} internal)",
        nl.gates.len(),
        nl.edges.len(),
        nl.internal_edges().len()
    );
    let _ = writeln!(
        out,
        "C^0 dim {}, C^1 dim {}",
        report.complex.c0_dim(),
        report.complex.c1_dim()
    );
    let _ = writeln!(out, "dim H^0 = {}, dim H^1 = {}", report.dim_h0(), report.dim_h1());

    if !report.h0_basis.is_empty() {
        let _ = writeln!(out, "\nH^0 basis (canonical):");
        for (i, section) in report.h0_basis.iter().enumerate() {
            let class = match section.class {
                SectionClass::QlsLift => "qls-lift ",
                SectionClass::Transient => "transient",
            };
            let _ = writeln!(
                out,
                "  [{}] {class}  {}",
                i + 1,
                report.complex.render_cochain(nl, &section.coefficients)
            );
            let values: Vec<String> = nl
                .edges
                .iter()
                .zip(&section.per_edge)
                .map(|(e, v)| format!("{}={v}", e.id))
                .collect();
            let _ = writeln!(out, "      edges: {}", values.join(" "));
        }
    }

    if !report.h1_generators.is_empty() {
        let _ = writeln!(out, "\nH^1 certificates (feedback / race support):");
        for (i, g) in report.h1_generators.iter().enumerate() {
            let support: Vec<String> = report
                .complex
                .c1_blocks
                .iter()
                .filter(|b| g.get(b.offset) || g.get(b.offset + 1))
                .map(|b| nl.edges[b.edge].id.clone())
                .collect();
            let _ = writeln!(
                out,
                "  [{}] {}   support: {}",
                i + 1,
                report.complex.render_c1(nl, g),
                support.join(" ")
            );
        }
    }

    match &report.qls {
        QlsStatus::Checked(q) => {
            let _ = writeln!(out, "\nquiescent states: {} (exhaustive oracle)", q.count());
            for s in &q.assignments {
                let values: Vec<String> = nl
                    .edges
                    .iter()
                    .zip(s)
                    .map(|(e, &b)| format!("{}={}", e.id, u8::from(b)))
                    .collect();
                let _ = writeln!(out, "  {}", values.join(" "));
            }
            let reverse = match q.reverse_lift_ok {
                Some(true) => "ok",
                Some(false) => "FAILED",
                None => "skipped (dimension cap)",
            };
            let _ = writeln!(
                out,
                "lift check: forward {}, reverse {reverse}",
                if q.forward_lift_ok { "ok" } else { "FAILED" }
            );
        }
        QlsStatus::Refused(e) => {
            let _ = writeln!(out, "\nquiescent states: unavailable ({e})");
        }
        QlsStatus::Disabled => {
            let _ = writeln!(out, "\nquiescent states: oracle disabled");
        }
    }
    out
}

fn render_mv_text(ledger: &MvLedger) -> String {
    let mut out = String::from("\nincremental replay:\n");
    for (i, step) in ledger.history().iter().enumerate() {
        match &step.kind {
            StepKind::AddGate { gate } => {
                let _ = writeln!(
                    out,
                    "  step {:>2}  gate {gate:<12} dims ({}, {})",
                    i + 1,
                    step.dim_h0,
                    step.dim_h1
                );
            }
            StepKind::AttachWire { id, class, rank_delta } => {
                let _ = writeln!(
                    out,
                    "  step {:>2}  wire {id:<12} {class:<8} rank {rank_delta}  dims ({}, {})",
                    i + 1,
                    step.dim_h0,
                    step.dim_h1
                );
            }
        }
    }
    let _ = writeln!(out, "cross-check: ledger == direct, dims {:?}", ledger.dims());
    out
}

fn cmd_paper_suite(args: PaperSuiteArgs) -> Outcome {
    let mut table = String::new();
    let (_, failed) = run_filtered(args.filter.as_deref(), &mut table);
    Outcome { stdout: table, stderr: String::new(), code: if failed == 0 { 0 } else { 1 } }
}

fn cmd_dot(args: DotArgs) -> Outcome {
    let nl = match load_netlist(&args.input) {
        Ok(nl) => nl,
        Err(out) => return out,
    };
    let report = compute_cohomology_with(
        &nl,
        &AnalysisOptions { run_oracle: false, ..Default::default() },
    );
    Outcome::ok(emit_dot(&nl, &report.h1_support(&nl)))
}

fn cmd_mv_replay(args: MvReplayArgs) -> Outcome {
    let nl = match load_netlist(&args.input) {
        Ok(nl) => nl,
        Err(out) => return out,
    };
    match replay(&nl) {
        Ok((ledger, direct)) => {
            if args.json {
                let mut text =
                    serde_json::to_string_pretty(&mv_json(&ledger)).expect("step log serialization");
                text.push('\n');
                Outcome::ok(text)
            } else {
                let mut out = render_mv_text(&ledger);
                let _ = writeln!(out, "direct dims {:?}", direct.dims());
                Outcome::ok(out)
            }
        }
        Err(e) => Outcome::fail(2, format!("internal cross-check failure: {e}\n")),
    }
}

fn cmd_conjecture(args: ConjectureArgs) -> Outcome {
    let report = dag_conjecture_experiment(args.trials, args.max_gates, args.seed);
    if args.json {
        let doc = serde_json::json!({
            "seed": report.seed,
            "max_gates": report.max_gates,
            "trials": report.trials.iter().map(|t| serde_json::json!({
                "gates": t.gates,
                "edges": t.edges,
                "dim_h0": t.dim_h0,
                "qls_count": t.qls_count,
                "lifted_span_dim": t.lifted_span_dim,
                "holds": t.holds,
                "netlist": t.netlist_text,
            })).collect::<Vec<_>>(),
            "passes": report.passes(),
            "failures": report.failures(),
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("experiment serialization");
        text.push('\n');
        Outcome::ok(text)
    } else {
        let mut out = format!(
            "lifted-basis experiment: {} trials, max {} gates, seed {}\n",
            args.trials, args.max_gates, args.seed
        );
        for (i, t) in report.trials.iter().enumerate() {
            let _ = writeln!(
                out,
                "  trial {:>3}: gates={} edges={} dim_h0={} qls={} lifted_span={} {}",
                i + 1,
                t.gates,
                t.edges,
                t.dim_h0,
                t.qls_count,
                t.lifted_span_dim,
                if t.holds { "ok" } else { "COUNTEREXAMPLE" }
            );
            if let Some(text) = &t.netlist_text {
                let _ = writeln!(out, "--- counterexample netlist ---\n{text}---");
            }
        }
        let _ = writeln!(out, "holds: {} / {}", report.passes(), report.trials.len());
        Outcome::ok(out)
    }
}
