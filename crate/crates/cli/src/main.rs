//! `milnor`: Milnor fillability, ubiquitous open books and contact-boundary
//! checks from the command line.
//!
//! Exit codes: 0 success, 1 input error, 2 negative mathematical verdict,
//! 3 internal invariant failure, 4 failed numerical check.

mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use milnor_core::contact::ops::{DEFAULT_PROPORTIONALITY_TOL, DEFAULT_ETA_FRACTION};
use milnor_core::contact::{
    check_spsh, eval_forms, find_adaptation_constant, lambda_cone_check, openbook_criterion_check,
    reeb_field, rescaled_reeb_identity, sample_points, Polynomial, VarietyModel,
};
use milnor_core::divisor::{binding_multiplicities, check_theorem_conditions, minimal_divisor, oracle_minimal_divisor};
use milnor_core::error::{ContactError, DivisorError, PolyError};
use milnor_core::PlumbingGraph;

const EXIT_INPUT: u8 = 1;
const EXIT_NEGATIVE: u8 = 2;
const EXIT_INVARIANT: u8 = 3;
const EXIT_NUMERICAL: u8 = 4;

/// Levi quotient draws per sample in `contact spsh`.
const SPSH_TRIALS: usize = 8;
const REEB_ALPHA_TOL_CHART: f64 = 1e-9;
const REEB_ALPHA_TOL_HYPERSURFACE: f64 = 1e-6;
const REEB_OMEGA_TOL: f64 = 1e-8;
const FD_TOL: f64 = 1e-5;
const IDENTITY_TOL: f64 = 1e-6;
const IDENTITY_TOL_C0: f64 = 1e-12;
const DEFAULT_BOUND: u64 = 40;

#[derive(Parser, Debug)]
#[command(name = "milnor", version, about = "Milnor fillability, ubiquitous open books and contact-boundary checks")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    /// JSON document.
    Structured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Text,
    /// Graphviz description of the decorated graph.
    Graph,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide Milnor fillability (negative definite intersection form).
    Check { file: PathBuf },
    /// Least divisor satisfying the binding inequalities.
    Divisor {
        file: PathBuf,
        /// Also run the exhaustive search and require agreement.
        #[arg(long)]
        oracle: bool,
        /// Multiplicity bound for the exhaustive search.
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: u64,
    },
    /// Canonical open book: divisor, binding counts and decorated graph.
    Openbook {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Emit::Text)]
        emit: Emit,
    },
    /// Sampled checks of the contact structure on the link.
    Contact {
        #[arg(value_enum)]
        check: ContactCheck,
        #[command(flatten)]
        args: ContactArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ContactCheck {
    Spsh,
    Reeb,
    Identity,
    Adapt,
    Cone,
    Criterion,
}

#[derive(Args, Debug)]
struct ContactArgs {
    /// Defining polynomial of a hypersurface germ at the origin.
    #[arg(long, conflicts_with = "map")]
    hypersurface: Option<String>,
    /// Number of domain variables.
    #[arg(long)]
    ambient: Option<usize>,
    /// Comma-separated components of a polynomial immersion (default: identity).
    #[arg(long)]
    map: Option<String>,
    /// Holomorphic function defining the open book.
    #[arg(long)]
    f: Option<String>,
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
    /// Binding neighbourhood threshold on |f|^2 (default: 1e-4 · max |f|^2 on the mesh).
    #[arg(long)]
    eta: Option<f64>,
    /// Rescaling constant for the identity check.
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 10_000)]
    mesh: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// A failure that ends the run with a message on stderr.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<ContactError> for Failure {
    fn from(e: ContactError) -> Self {
        let code = match e {
            ContactError::Poly(_)
            | ContactError::DimensionMismatch { .. }
            | ContactError::VariableMismatch { .. }
            | ContactError::InvalidEpsilon(_)
            | ContactError::InvalidMesh => EXIT_INPUT,
            _ => EXIT_NUMERICAL,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

/// Report plus the exit code it implies.
struct Outcome {
    code: u8,
    report: Value,
    /// Replaces the rendered report in text mode.
    text_override: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let rendered = match (cli.format, outcome.text_override) {
                (Format::Structured, _) => {
                    serde_json::to_string_pretty(&outcome.report).expect("report serializes") + "\n"
                }
                (Format::Text, Some(text)) => text,
                (Format::Text, None) => report::render_text(&outcome.report),
            };
            print!("{rendered}");
            ExitCode::from(outcome.code)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn envelope(command: &str, config: Value, result: Value, passed: bool) -> Value {
    json!({
        "tool": "milnor",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "config": config,
        "result": result,
        "verdict": if passed { "pass" } else { "fail" },
    })
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let format = match cli.format {
        Format::Text => "text",
        Format::Structured => "structured",
    };
    match &cli.command {
        Command::Check { file } => run_check(file, format),
        Command::Divisor { file, oracle, bound } => run_divisor(file, *oracle, *bound, format),
        Command::Openbook { file, emit } => run_openbook(file, *emit, format),
        Command::Contact { check, args } => run_contact(*check, args, format),
    }
}

fn load_graph(path: &Path) -> Result<PlumbingGraph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    PlumbingGraph::from_json(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn run_check(file: &Path, format: &str) -> Result<Outcome, Failure> {
    let g = load_graph(file)?;
    let fillable = g.is_milnor_fillable();
    let result = json!({
        "vertices": g.vertex_count(),
        "edges": g.edges().len(),
        "intersection_matrix": g.intersection_matrix().rows(),
        "negative_definite": fillable,
        "milnor_fillable": fillable,
    });
    let config = json!({ "file": file.display().to_string(), "format": format });
    Ok(Outcome {
        code: if fillable { 0 } else { EXIT_NEGATIVE },
        report: envelope("check", config, result, fillable),
        text_override: None,
    })
}

fn divisor_failure(e: DivisorError) -> Failure {
    match e {
        DivisorError::NotNegativeDefinite => Failure {
            code: EXIT_NEGATIVE,
            message: "graph is not Milnor fillable: intersection form is not negative definite".into(),
        },
        DivisorError::BoundTooSmall { .. } => Failure::input(e.to_string()),
        other => Failure {
            code: EXIT_INVARIANT,
            message: other.to_string(),
        },
    }
}

fn run_divisor(file: &Path, oracle: bool, bound: u64, format: &str) -> Result<Outcome, Failure> {
    let g = load_graph(file)?;
    if !g.is_milnor_fillable() {
        return Err(divisor_failure(DivisorError::NotNegativeDefinite));
    }
    let divisor = minimal_divisor(&g).map_err(divisor_failure)?;
    let certificate = check_theorem_conditions(&g, &divisor).map_err(divisor_failure)?;
    let mut result = serde_json::to_value(&certificate).expect("report serializes");
    let mut code = if certificate.satisfied { 0 } else { EXIT_INVARIANT };
    if oracle {
        let expected = oracle_minimal_divisor(&g, bound).map_err(divisor_failure)?;
        let agrees = expected == divisor;
        result["oracle"] = json!({ "divisor": expected, "agrees": agrees });
        if !agrees {
            code = EXIT_INVARIANT;
        }
    }
    let config = json!({
        "file": file.display().to_string(),
        "oracle": oracle,
        "bound": bound,
        "format": format,
    });
    if code == EXIT_INVARIANT {
        eprintln!("error: internal invariant failure, see report");
    }
    Ok(Outcome {
        code,
        report: envelope("divisor", config, result, code == 0),
        text_override: None,
    })
}

fn run_openbook(file: &Path, emit: Emit, format: &str) -> Result<Outcome, Failure> {
    let g = load_graph(file)?;
    if !g.is_milnor_fillable() {
        return Err(divisor_failure(DivisorError::NotNegativeDefinite));
    }
    let report = milnor_core::ubiquitous_open_book(&g).map_err(|e| match e {
        milnor_core::OpenBookError::Divisor(d) => divisor_failure(d),
        other => Failure {
            code: EXIT_INVARIANT,
            message: other.to_string(),
        },
    })?;
    // the binding counts must come back from the same divisor
    let check = binding_multiplicities(&g, &report.divisor).map_err(divisor_failure)?;
    let consistent = check == report.multiplicities && report.aut_invariant;
    let dot = report.graph.to_dot();
    let result = json!({
        "graph": g.to_raw(),
        "divisor": report.divisor,
        "multiplicities": report.multiplicities,
        "binding_components": report.binding_components,
        "per_vertex": report.per_vertex,
        "aut_invariant": report.aut_invariant,
        "automorphism_count": report.automorphism_count,
        "bare_vertices": report.graph.bare_vertices(),
        "determined_by_decoration": report.determined_by_decoration,
        "decorated_graph": dot,
    });
    let config = json!({
        "file": file.display().to_string(),
        "emit": match emit { Emit::Text => "text", Emit::Graph => "graph" },
        "format": format,
    });
    let code = if consistent { 0 } else { EXIT_INVARIANT };
    Ok(Outcome {
        code,
        report: envelope("openbook", config, result, consistent),
        text_override: (emit == Emit::Graph).then_some(dot),
    })
}

fn parse_poly(text: &str, n_vars: usize, what: &str) -> Result<Polynomial, Failure> {
    Polynomial::parse(text, n_vars).map_err(|e| Failure::input(format!("{what} {text:?}: {e}")))
}

/// Smallest variable count covering every index the expression mentions.
fn infer_vars(text: &str) -> Result<usize, Failure> {
    let mut n = 1;
    loop {
        match Polynomial::parse(text, n) {
            Ok(_) => return Ok(n),
            Err(PolyError::UnknownVariable { index, .. }) if index >= n => n = index + 1,
            Err(e) => return Err(Failure::input(format!("--hypersurface {text:?}: {e}"))),
        }
    }
}

fn build_model(args: &ContactArgs) -> Result<VarietyModel, Failure> {
    match (&args.hypersurface, args.ambient) {
        (Some(expr), ambient) => {
            let n = match ambient {
                Some(n) => n,
                None => infer_vars(expr)?,
            };
            if n < 2 {
                return Err(Failure::input("--hypersurface needs at least two variables"));
            }
            Ok(VarietyModel::hypersurface(parse_poly(expr, n, "--hypersurface")?))
        }
        (None, Some(n)) => {
            if n == 0 {
                return Err(Failure::input("--ambient must be positive"));
            }
            match &args.map {
                None => Ok(VarietyModel::identity(n)),
                Some(list) => {
                    let map = list
                        .split(',')
                        .map(|s| parse_poly(s, n, "--map component"))
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok(VarietyModel::chart(n, map)?)
                }
            }
        }
        (None, None) => Err(Failure::input("give --hypersurface EXPR or --ambient N [--map EXPRS]")),
    }
}

fn validate_contact(check: ContactCheck, args: &ContactArgs) -> Result<(), Failure> {
    if !(args.epsilon.is_finite() && args.epsilon > 0.0) {
        return Err(Failure::input(format!("--epsilon must be positive, got {}", args.epsilon)));
    }
    if args.samples == 0 {
        return Err(Failure::input("--samples must be positive"));
    }
    if args.mesh == 0 {
        return Err(Failure::input("--mesh must be positive"));
    }
    if let Some(eta) = args.eta {
        if !(eta.is_finite() && eta >= 0.0) {
            return Err(Failure::input(format!("--eta must be non-negative, got {eta}")));
        }
    }
    if !args.c.is_finite() || args.c < 0.0 {
        return Err(Failure::input(format!("--c must be non-negative, got {}", args.c)));
    }
    let needs_f = !matches!(check, ContactCheck::Spsh | ContactCheck::Reeb);
    if needs_f && args.f.is_none() {
        return Err(Failure::input("this check needs --f EXPR"));
    }
    Ok(())
}

fn contact_config(check: ContactCheck, args: &ContactArgs, model: &VarietyModel, format: &str) -> Value {
    let name = ContactCheck::value_variants()
        .iter()
        .find(|v| **v == check)
        .and_then(|v| v.to_possible_value())
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    let variety = match model {
        VarietyModel::SmoothChart { dim, map } => json!({
            "kind": "chart",
            "ambient": dim,
            "map": map.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        }),
        VarietyModel::Hypersurface { equation } => json!({
            "kind": "hypersurface",
            "ambient": equation.n_vars(),
            "equation": equation.to_string(),
        }),
    };
    json!({
        "check": name,
        "variety": variety,
        "f": args.f,
        "epsilon": args.epsilon,
        "eta": args.eta.map_or(json!(format!("default ({DEFAULT_ETA_FRACTION:e} * max |f|^2)")), |e| json!(e)),
        "c": args.c,
        "samples": args.samples,
        "mesh": args.mesh,
        "seed": args.seed,
        "format": format,
    })
}

fn run_contact(check: ContactCheck, args: &ContactArgs, format: &str) -> Result<Outcome, Failure> {
    validate_contact(check, args)?;
    let model = build_model(args)?;
    let f = match &args.f {
        Some(text) => Some(parse_poly(text, model.domain_dim(), "--f")?),
        None => None,
    };
    let config = contact_config(check, args, &model, format);
    let (result, passed) = match check {
        ContactCheck::Spsh => contact_spsh(&model, args)?,
        ContactCheck::Reeb => contact_reeb(&model, args)?,
        ContactCheck::Identity => contact_identity(&model, f.as_ref().unwrap(), args)?,
        ContactCheck::Adapt => contact_adapt(&model, f.as_ref().unwrap(), args)?,
        ContactCheck::Cone => contact_cone(&model, f.as_ref().unwrap(), args)?,
        ContactCheck::Criterion => contact_criterion(&model, f.as_ref().unwrap(), args)?,
    };
    Ok(Outcome {
        code: if passed { 0 } else { EXIT_NUMERICAL },
        report: envelope("contact", config, result, passed),
        text_override: None,
    })
}

type Checked = Result<(Value, bool), Failure>;

fn contact_spsh(model: &VarietyModel, args: &ContactArgs) -> Checked {
    let samples = sample_points(model, args.epsilon, args.samples, args.seed)?;
    let report = check_spsh(model, &samples, SPSH_TRIALS, args.seed)?;
    let passed = report.min_levi_quotient > 0.0 && report.min_eigen_quotient > 0.0;
    let mut result = serde_json::to_value(&report).expect("report serializes");
    result["required"] = json!("min_levi_quotient > 0");
    Ok((result, passed))
}

fn contact_reeb(model: &VarietyModel, args: &ContactArgs) -> Checked {
    let samples = sample_points(model, args.epsilon, args.samples, args.seed)?;
    let alpha_tol = match model {
        VarietyModel::SmoothChart { .. } => REEB_ALPHA_TOL_CHART,
        VarietyModel::Hypersurface { .. } => REEB_ALPHA_TOL_HYPERSURFACE,
    };
    let (mut alpha_dev, mut omega_dev, mut level_dev, mut fd_dev) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for sample in &samples {
        let reeb = reeb_field(model, sample)?;
        alpha_dev = alpha_dev.max((reeb.alpha_of_reeb - 1.0).abs());
        omega_dev = omega_dev.max(reeb.max_omega_defect);
        level_dev = level_dev.max(reeb.level_defect);
        fd_dev = fd_dev.max(eval_forms(model, sample)?.fd_deviation);
    }
    let passed = alpha_dev <= alpha_tol && omega_dev <= REEB_OMEGA_TOL && fd_dev <= FD_TOL;
    Ok((
        json!({
            "samples": samples.len(),
            "max_alpha_deviation": alpha_dev,
            "alpha_tolerance": alpha_tol,
            "max_omega_defect": omega_dev,
            "omega_tolerance": REEB_OMEGA_TOL,
            "max_level_defect": level_dev,
            "max_finite_difference_deviation": fd_dev,
            "finite_difference_tolerance": FD_TOL,
        }),
        passed,
    ))
}

fn contact_identity(model: &VarietyModel, f: &Polynomial, args: &ContactArgs) -> Checked {
    let samples = sample_points(model, args.epsilon, args.samples, args.seed)?;
    let tol = if args.c == 0.0 { IDENTITY_TOL_C0 } else { IDENTITY_TOL };
    let (mut max_residual, mut max_construction, mut on_binding, mut tested) = (0.0f64, 0.0f64, 0usize, 0usize);
    for sample in &samples {
        match rescaled_reeb_identity(model, f, args.c, sample) {
            Ok(r) => {
                tested += 1;
                max_residual = max_residual.max(r.residual);
                max_construction = max_construction.max(r.construction_residual);
            }
            Err(ContactError::OnBinding { .. }) => on_binding += 1,
            Err(e) => return Err(e.into()),
        }
    }
    Ok((
        json!({
            "samples": samples.len(),
            "tested": tested,
            "on_binding": on_binding,
            "max_residual": max_residual,
            "max_construction_residual": max_construction,
            "tolerance": tol,
        }),
        max_residual <= tol,
    ))
}

fn contact_adapt(model: &VarietyModel, f: &Polynomial, args: &ContactArgs) -> Checked {
    let report = find_adaptation_constant(model, f, args.epsilon, args.eta, args.mesh, args.seed)?;
    let passed = report.verified;
    Ok((serde_json::to_value(&report).expect("report serializes"), passed))
}

fn contact_cone(model: &VarietyModel, f: &Polynomial, args: &ContactArgs) -> Checked {
    let samples = sample_points(model, args.epsilon, args.samples, args.seed)?;
    let report = lambda_cone_check(model, f, &samples, DEFAULT_PROPORTIONALITY_TOL)?;
    let passed = report.passes();
    let mut result = serde_json::to_value(&report).expect("report serializes");
    result["vacuous"] = json!(report.is_empty());
    Ok((result, passed))
}

fn contact_criterion(model: &VarietyModel, f: &Polynomial, args: &ContactArgs) -> Checked {
    let report = openbook_criterion_check(model, f, args.epsilon, args.eta, args.mesh, args.seed)?;
    let passed = report.passes();
    Ok((serde_json::to_value(&report).expect("report serializes"), passed))
}
