//! Command-line front end: law verification, locality/causality verdicts,
//! traceouts, tensors, entropy, gate decomposition, and line evolution.
//!
//! Exit codes: 0 on success or a passing verdict, 1 on a law failure or a
//! negative verdict, 2 on input errors.

use clap::{Args, Parser, Subcommand};
use logicaltensor::basis::BasisIndex;
use logicaltensor::causality::is_causal;
use logicaltensor::decomposition::block_decompose;
use logicaltensor::dynamics::{
    build_propagation, build_rotation, evolve, LineConfig, STATE_EMPTY, STATE_RIGHT,
};
use logicaltensor::error::Error;
use logicaltensor::graph::{Graph, System, Universe};
use logicaltensor::harness::{HarnessConfig, SuiteSelection};
use logicaltensor::io;
use logicaltensor::ket::Ket;
use logicaltensor::locality::is_local;
use logicaltensor::operator::OperatorMatrix;
use logicaltensor::restriction::Restriction;
use logicaltensor::tensor::{entanglement_entropy, tensor_kets, tensor_ops, traceout};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "logicaltensor",
    about = "Generalised tensor/trace algebra over named-system graphs: law suites, locality and causality verdicts, gate decomposition, line dynamics",
    version
)]
struct Cli {
    /// Seed for all randomized law suites (default: LOGICALTENSOR_SEED or 0).
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Cap on compute workers. Accepted for compatibility; the current
    /// engine evaluates laws on a single worker.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run law suites and emit a conformance report.
    Verify(VerifyArgs),
    /// Decide locality of an operator under a restriction.
    CheckLocal(CheckLocalArgs),
    /// Decide causality of a unitary between two restrictions.
    CheckCausal(CheckCausalArgs),
    /// Trace out an operator through a restriction.
    Trace(TraceArgs),
    /// Weave two kets or two operators through a restriction.
    Tensor(TensorArgs),
    /// Entanglement entropy of a ket across a restriction, in bits.
    Entropy(EntropyArgs),
    /// Factor a causal unitary into commuting local gates.
    Decompose(DecomposeArgs),
    /// Evolve a line configuration and record the trajectory.
    Evolve(EvolveArgs),
    /// Check the restriction axiom exhaustively over a universe.
    ValidateRestriction(ValidateArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    universe: PathBuf,
    /// Restriction spec files; defaults to the standard set for the universe.
    #[arg(long = "restriction")]
    restrictions: Vec<PathBuf>,
    /// Run every suite (default when no suite flag is given).
    #[arg(long)]
    all: bool,
    #[arg(long)]
    toolbox: bool,
    #[arg(long)]
    propositions: bool,
    #[arg(long)]
    decomposition: bool,
    /// Line length for the decomposition suite.
    #[arg(long, default_value_t = 3)]
    line_length: usize,
    /// Rotation angles for the decomposition suite.
    #[arg(long = "theta")]
    thetas: Vec<f64>,
    /// Write the machine-readable report here (stdout otherwise).
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct CheckLocalArgs {
    #[arg(long)]
    universe: PathBuf,
    #[arg(long)]
    op: PathBuf,
    #[arg(long)]
    restriction: PathBuf,
    /// Emit the verdict as JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CheckCausalArgs {
    #[arg(long)]
    universe: PathBuf,
    #[arg(long)]
    op: PathBuf,
    /// Input-side restriction spec.
    #[arg(long)]
    chi: PathBuf,
    /// Output-side restriction spec.
    #[arg(long)]
    zeta: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct TraceArgs {
    #[arg(long)]
    universe: PathBuf,
    #[arg(long)]
    op: PathBuf,
    #[arg(long)]
    restriction: PathBuf,
    /// Output file (stdout otherwise).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TensorArgs {
    #[arg(long)]
    universe: PathBuf,
    /// Two ket files to weave.
    #[arg(long, num_args = 2, conflicts_with = "ops")]
    kets: Option<Vec<PathBuf>>,
    /// Two operator files to weave.
    #[arg(long, num_args = 2)]
    ops: Option<Vec<PathBuf>>,
    #[arg(long)]
    restriction: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EntropyArgs {
    #[arg(long)]
    universe: PathBuf,
    #[arg(long)]
    ket: PathBuf,
    #[arg(long)]
    restriction: PathBuf,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    universe: PathBuf,
    #[arg(long)]
    op: PathBuf,
    /// Manifest with per-vertex input/output selectors:
    /// `{ "chi": {vertex: spec}, "zeta": {vertex: spec} }`.
    #[arg(long, conflicts_with = "auto_line")]
    restrictions: Option<PathBuf>,
    /// Derive radius-1 neighborhoods and per-vertex selectors from the
    /// universe's vertex order.
    #[arg(long)]
    auto_line: bool,
    /// Directory for the gate and selector files.
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args)]
struct EvolveArgs {
    #[arg(long, default_value_t = 3)]
    line_length: usize,
    #[arg(long)]
    steps: usize,
    /// When set, each step applies the direction rotation before the hop.
    #[arg(long)]
    theta: Option<f64>,
    /// Initial ket file; defaults to a single right-mover entering at the
    /// left end of an otherwise empty line.
    #[arg(long)]
    initial: Option<PathBuf>,
    /// Write the trajectory (a JSON list of ket-file contents) here.
    #[arg(long)]
    emit_trajectory: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    universe: PathBuf,
    #[arg(long)]
    restriction: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Input(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn seed_from(cli_seed: Option<u64>) -> u64 {
    cli_seed
        .or_else(|| {
            std::env::var("LOGICALTENSOR_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(0)
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, content: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| Error::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn load_restriction(path: &Path, universe: &Universe) -> Result<Restriction, Error> {
    io::parse_restriction(&read(path)?)?.validated(universe)
}

fn run(cli: Cli) -> Result<u8, Error> {
    let seed = seed_from(cli.seed);
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(Error::Input("--threads must be at least 1".into()));
        }
    }
    match cli.command {
        Command::Verify(args) => {
            let universe = io::parse_universe(&read(&args.universe)?)?;
            let restrictions = if args.restrictions.is_empty() {
                None
            } else {
                let mut set = Vec::new();
                for path in &args.restrictions {
                    set.push(load_restriction(path, &universe)?);
                }
                Some(set)
            };
            let any_flag = args.toolbox || args.propositions || args.decomposition;
            let selection = if args.all || !any_flag {
                SuiteSelection::all()
            } else {
                SuiteSelection {
                    toolbox: args.toolbox,
                    propositions: args.propositions,
                    decomposition: args.decomposition,
                }
            };
            let thetas = if args.thetas.is_empty() {
                vec![0.0, std::f64::consts::FRAC_PI_4]
            } else {
                args.thetas.clone()
            };
            let config = HarnessConfig::with_seed(seed);
            let report = logicaltensor::harness::run_verification(
                &universe,
                restrictions,
                selection,
                args.line_length,
                &thetas,
                &config,
            )?;
            eprint!("{}", report.human_summary());
            write_out(args.report.as_deref(), &report.to_json())?;
            Ok(if report.passed() { 0 } else { 1 })
        }

        Command::CheckLocal(args) => {
            let universe = io::parse_universe(&read(&args.universe)?)?;
            let basis = BasisIndex::new(&universe)?;
            let op = io::parse_operator(&read(&args.op)?, &universe)?;
            let chi = load_restriction(&args.restriction, &universe)?;
            let verdict = is_local(&op, &chi, &basis)?;
            if args.json {
                let value = serde_json::json!({
                    "restriction": chi.label(),
                    "local": verdict.schrodinger,
                    "operational": verdict.operational,
                    "observable": verdict.heisenberg,
                    "strict": verdict.strict,
                    "counterexample": verdict.counterexample.as_ref().map(|(b, k)| {
                        serde_json::json!({ "bra": b.tokens(), "ket": k.tokens() })
                    }),
                });
                println!("{}", serde_json::to_string_pretty(&value).unwrap());
            } else {
                println!(
                    "local: {}, strict: {}",
                    yes_no(verdict.schrodinger),
                    yes_no(verdict.strict)
                );
                if let Some((b, k)) = &verdict.counterexample {
                    println!("counterexample: bra {b}, ket {k}");
                }
            }
            Ok(if verdict.schrodinger { 0 } else { 1 })
        }

        Command::CheckCausal(args) => {
            let universe = io::parse_universe(&read(&args.universe)?)?;
            let basis = BasisIndex::new(&universe)?;
            let op = io::parse_operator(&read(&args.op)?, &universe)?;
            let chi = load_restriction(&args.chi, &universe)?;
            let zeta = load_restriction(&args.zeta, &universe)?;
            let verdict = is_causal(&op, &chi, &zeta, &basis)?;
            if args.json {
                let value = serde_json::json!({
                    "chi": chi.label(),
                    "zeta": zeta.label(),
                    "causal": verdict.primal,
                    "dual": verdict.dual,
                    "strict_transfer": verdict.strict_transfer,
                    "counterexample": verdict.counterexample.as_ref().map(|(b, k)| {
                        serde_json::json!({ "bra": b.tokens(), "ket": k.tokens() })
                    }),
                });
                println!("{}", serde_json::to_string_pretty(&value).unwrap());
            } else {
                println!("causal: {}", yes_no(verdict.primal));
                if let Some(st) = verdict.strict_transfer {
                    println!("strict transfer: {}", yes_no(st));
                }
                if let Some((b, k)) = &verdict.counterexample {
                    println!("counterexample: bra {b}, ket {k}");
                }
            }
            Ok(if verdict.primal { 0 } else { 1 })
        }

        Command::Trace(args) => {
            let universe = io::parse_universe(&read(&args.universe)?)?;
            let op = io::parse_operator(&read(&args.op)?, &universe)?;
            let chi = load_restriction(&args.restriction, &universe)?;
            let reduced = traceout(&op, &chi)?;
            write_out(args.out.as_deref(), &io::operator_to_json(&reduced))?;
            Ok(0)
        }

        Command::Tensor(args) => {
            let universe = io::parse_universe(&read(&args.universe)?)?;
            let chi = load_restriction(&args.restriction, &universe)?;
            match (&args.kets, &args.ops) {
                (Some(kets), None) => {
                    let left = io::parse_ket(&read(&kets[0])?, &universe)?;
                    let right = io::parse_ket(&read(&kets[1])?, &universe)?;
                    let woven = tensor_kets(&left, &right, &chi)?;
                    write_out(args.out.as_deref(), &io::ket_to_json(&woven))?;
                }
                (None, Some(ops)) => {
                    let left = io::parse_operator(&read(&ops[0])?, &universe)?;
                    let right = io::parse_operator(&read(&ops[1])?, &universe)?;
                    let woven = tensor_ops(&left, &right, &chi)?;
                    write_out(args.out.as_deref(), &io::operator_to_json(&woven))?;
                }
                _ => {
                    return Err(Error::Input(
                        "pass exactly one of --kets or --ops (two files each)".into(),
                    ))
                }
            }
            Ok(0)
        }

        Command::Entropy(args) => {
            let universe = io::parse_universe(&read(&args.universe)?)?;
            let ket = io::parse_ket(&read(&args.ket)?, &universe)?;
            let chi = load_restriction(&args.restriction, &universe)?;
            let bits = entanglement_entropy(&ket, &chi)?;
            println!("{} bits", io::fmt_significant(bits, 12));
            Ok(0)
        }

        Command::Decompose(args) => {
            let universe = io::parse_universe(&read(&args.universe)?)?;
            let op = io::parse_operator(&read(&args.op)?, &universe)?;
            let (chi_map, zeta_map) = if args.auto_line {
                line_selector_maps(&universe)?
            } else {
                let manifest_path = args.restrictions.as_ref().ok_or_else(|| {
                    Error::Input("pass --restrictions <manifest> or --auto-line".into())
                })?;
                parse_decomposition_manifest(&read(manifest_path)?, &universe)?
            };
            let decomposition = block_decompose(&op, &chi_map, &zeta_map, None, &universe)?;
            std::fs::create_dir_all(&args.out_dir).map_err(|e| {
                Error::Input(format!("cannot create {}: {e}", args.out_dir.display()))
            })?;
            for (vertex, gate) in &decomposition.toggle_gates {
                let path = args.out_dir.join(format!("toggle_{vertex}.json"));
                std::fs::write(&path, io::operator_to_json(gate))
                    .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
            }
            for (vertex, gate) in &decomposition.kernel_gates {
                let path = args.out_dir.join(format!("kernel_{vertex}.json"));
                std::fs::write(&path, io::operator_to_json(gate))
                    .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
            }
            for (vertex, selector) in &decomposition.mixed_selectors {
                let spec =
                    io::restriction_to_table_spec(selector, decomposition.extended.extended())?;
                let path = args.out_dir.join(format!("selector_{vertex}.json"));
                std::fs::write(&path, serde_json::to_string_pretty(&spec).unwrap())
                    .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
            }
            println!(
                "reconstruction deviation: {}",
                io::fmt_significant(decomposition.max_reconstruction_deviation, 12)
            );
            println!(
                "commutator deviation: {}",
                io::fmt_significant(decomposition.max_commutator_deviation, 12)
            );
            println!(
                "order independence deviation: {}",
                io::fmt_significant(decomposition.order_independence_deviation, 12)
            );
            println!("gates written to {}", args.out_dir.display());
            Ok(0)
        }

        Command::Evolve(args) => {
            let line = LineConfig::new(args.line_length)?;
            let universe = line.universe();
            let initial = match &args.initial {
                Some(path) => io::parse_ket(&read(path)?, &universe)?,
                None => {
                    let mut systems = vec![System::new(STATE_RIGHT, line.vertex(0))];
                    for i in 1..line.length() {
                        systems.push(System::new(STATE_EMPTY, line.vertex(i)));
                    }
                    Ket::basis(Graph::new(systems)?)
                }
            };
            let mut ops: Vec<OperatorMatrix> = Vec::new();
            if let Some(theta) = args.theta {
                ops.push(build_rotation(&line, theta)?);
            }
            ops.push(build_propagation(&line)?);
            let trajectory = evolve(&initial, &ops, args.steps);
            for (step, state) in trajectory.iter().enumerate() {
                println!(
                    "step {step}: {} amplitudes, norm {}",
                    state.support_len(),
                    io::fmt_significant(state.norm(), 12)
                );
            }
            if let Some(path) = &args.emit_trajectory {
                let entries: Vec<Vec<io::AmplitudeEntry>> =
                    trajectory.iter().map(io::ket_to_entries).collect();
                let json = serde_json::to_string_pretty(&entries).unwrap();
                std::fs::write(path, json)
                    .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))?;
            }
            Ok(0)
        }

        Command::ValidateRestriction(args) => {
            let universe = io::parse_universe(&read(&args.universe)?)?;
            let restriction = io::parse_restriction(&read(&args.restriction)?)?;
            let report = restriction.validate(&universe)?;
            println!("{}", report.describe());
            Ok(if report.passed { 0 } else { 1 })
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

type SelectorMaps = (BTreeMap<String, Restriction>, BTreeMap<String, Restriction>);

/// Radius-1 neighborhoods on the universe's vertex order, plus per-vertex
/// output selectors.
fn line_selector_maps(
    universe: &Universe,
) -> Result<SelectorMaps, Error> {
    let vertices = universe.vertices();
    let mut chi = BTreeMap::new();
    let mut zeta = BTreeMap::new();
    for (i, v) in vertices.iter().enumerate() {
        let mut ball = Restriction::by_vertex(v.clone());
        if i > 0 {
            ball = ball.union_unchecked(&Restriction::by_vertex(vertices[i - 1].clone()));
        }
        if i + 1 < vertices.len() {
            ball = ball.union_unchecked(&Restriction::by_vertex(vertices[i + 1].clone()));
        }
        chi.insert(v.clone(), ball.with_label(format!("ball({v})")));
        zeta.insert(v.clone(), Restriction::by_vertex(v.clone()));
    }
    Ok((chi, zeta))
}

#[derive(serde::Deserialize)]
struct DecompositionManifest {
    chi: BTreeMap<String, io::RestrictionSpec>,
    zeta: BTreeMap<String, io::RestrictionSpec>,
}

fn parse_decomposition_manifest(
    json: &str,
    universe: &Universe,
) -> Result<SelectorMaps, Error> {
    let manifest: DecompositionManifest =
        serde_json::from_str(json).map_err(|e| Error::Input(format!("manifest: {e}")))?;
    let mut chi = BTreeMap::new();
    let mut zeta = BTreeMap::new();
    for (v, spec) in manifest.chi {
        chi.insert(v, spec.to_restriction()?.validated(universe)?);
    }
    for (v, spec) in manifest.zeta {
        zeta.insert(v, spec.to_restriction()?.validated(universe)?);
    }
    Ok((chi, zeta))
}
