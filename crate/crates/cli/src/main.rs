//! `cubesense`: measures, constructions, searches and verifications on the
//! Boolean cube, with scriptable exit codes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cubesense::certificate::Verdict;
use cubesense::constructions::{construct, ExtremalKind};
use cubesense::measures::{
    check_irreducible_corollary, check_simon_corollary, IrreducibleCorollary,
};
use cubesense::search::{DegreeMode, SearchConfig, Strategy, EXHAUSTIVE_MAX_N};
use cubesense::verify::{
    certify_search, verify, Claim, VerifyOptions, DEFAULT_SAMPLES, DEFAULT_SEED,
};
use cubesense::{Certificate, CubeDim, CubeError, TruthTable};
use serde_json::{json, Value};

const EXIT_OK: u8 = 0;
const EXIT_REFUTED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_BUDGET: u8 = 4;

#[derive(Parser)]
#[command(
    name = "cubesense",
    version,
    about = "Low-sensitivity sets of the Boolean cube"
)]
struct Cli {
    /// Worker threads (0: one per core). Results do not depend on it.
    #[arg(long, global = true, env = "CUBESENSE_THREADS", default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sensitivity measures of a Boolean function and the one-set bounds.
    Measure(MeasureArgs),
    /// Emit an extremal vertex set.
    Construct(ConstructArgs),
    /// Find the least size of a set with prescribed minimum degree.
    Search(SearchArgs),
    /// Check a claim over all subsets of Q_n and write a certificate.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Exhaustive,
    #[value(alias = "canonical_bnb")]
    CanonicalBnb,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Exhaustive => Strategy::Exhaustive,
            StrategyArg::CanonicalBnb => Strategy::CanonicalBnb,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ClaimArg {
    Simon,
    Main,
    Gap,
    #[value(alias = "lemma_minsize")]
    LemmaMinsize,
    #[value(alias = "lemma_extended")]
    LemmaExtended,
    #[value(alias = "lemma_fancy")]
    LemmaFancy,
    All,
}

impl ClaimArg {
    fn claims(self) -> Vec<Claim> {
        match self {
            ClaimArg::Simon => vec![Claim::Simon],
            ClaimArg::Main => vec![Claim::Main],
            ClaimArg::Gap => vec![Claim::Gap],
            ClaimArg::LemmaMinsize => vec![Claim::LemmaMinsize],
            ClaimArg::LemmaExtended => vec![Claim::LemmaExtended],
            ClaimArg::LemmaFancy => vec![Claim::LemmaFancy],
            ClaimArg::All => Claim::ALL.to_vec(),
        }
    }
}

#[derive(Args)]
struct MeasureArgs {
    /// Catalog function: or:N, and:N, parity:N, const0:N, const1:N.
    #[arg(
        long = "fn",
        value_name = "NAME",
        required_unless_present = "input",
        conflicts_with = "input"
    )]
    function: Option<String>,
    /// Truth-table file.
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    d: u32,
    /// A d-subcube.
    #[arg(
        long,
        required_unless_present = "irreducible",
        conflicts_with = "irreducible"
    )]
    simon: bool,
    /// A smallest irreducible set.
    #[arg(long)]
    irreducible: bool,
    /// Write the vertex set here instead of standard output.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    d: u32,
    /// Require minimum degree at least d instead of exactly d.
    #[arg(long)]
    at_least: bool,
    #[arg(long)]
    irreducible: bool,
    /// Subset or node budget.
    #[arg(long)]
    budget: Option<u64>,
    /// Default: exhaustive up to n = 4, canonical-bnb above.
    #[arg(long, value_enum)]
    strategy: Option<StrategyArg>,
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Report elapsed time as 0, for byte-stable output.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    claim: ClaimArg,
    #[arg(long)]
    n: u32,
    #[arg(long, value_enum)]
    strategy: Option<StrategyArg>,
    /// Permit n above the exhaustive cap.
    #[arg(long)]
    allow_large: bool,
    /// Node budget per degree for branch-and-bound runs.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: u64,
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Report elapsed time as 0, for byte-stable output.
    #[arg(long)]
    no_timing: bool,
    /// Reuse finished rows from an earlier certificate.
    #[arg(long, value_name = "PATH")]
    resume: Option<PathBuf>,
}

/// An error with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<CubeError> for Failure {
    fn from(e: CubeError) -> Self {
        let code = match e {
            CubeError::Infeasible { .. } => EXIT_INFEASIBLE,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Measure(args) => run_measure(args),
        Command::Construct(args) => run_construct(args),
        Command::Search(args) => run_search(args, cli.threads),
        Command::Verify(args) => run_verify(args, cli.threads),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn table(rows: &[(&str, String)]) -> String {
    rows.iter().map(|(k, v)| format!("{k:<20}{v}\n")).collect()
}

fn show<T: ToString>(v: Option<T>) -> String {
    v.map_or("-".to_string(), |x| x.to_string())
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

fn run_measure(args: MeasureArgs) -> Result<u8, Failure> {
    let f = match (&args.function, &args.input) {
        (Some(name), _) => TruthTable::from_catalog(name)?,
        (None, Some(path)) => TruthTable::parse_text(&read(path)?)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
        (None, None) => return Err(Failure::usage("one of --fn or --input is required")),
    };
    let report = f.report();
    let simon = match check_simon_corollary(&f) {
        Ok(c) => Some(c),
        Err(CubeError::ConstantZero) => None,
        Err(e) => return Err(e.into()),
    };
    let irreducible = check_irreducible_corollary(&f);
    let ok = simon.as_ref().is_none_or(|c| c.passes()) && irreducible.passes();

    let text = match args.format {
        Format::Json => {
            let simon_json = match &simon {
                Some(c) => {
                    let mut v = serde_json::to_value(c).expect("serializable");
                    v["status"] = json!(pass(c.passes()));
                    v
                }
                None => json!({ "status": "not_applicable" }),
            };
            let mut irr_json = serde_json::to_value(&irreducible).expect("serializable");
            if let IrreducibleCorollary::Checked { holds, .. } = irreducible {
                irr_json["status"] = json!(pass(holds));
            }
            let doc = json!({
                "n": f.dim().n(),
                "s": report.s,
                "s0": report.s0,
                "s1": report.s1,
                "ones": report.ones_count,
                "delta": report.delta_of_one_set,
                "simon": simon_json,
                "irreducible_bound": irr_json,
            });
            format!(
                "{}\n",
                serde_json::to_string_pretty(&doc).expect("serializable")
            )
        }
        Format::Table => {
            let simon_row = match &simon {
                Some(c) => format!("{} ({} >= {})", pass(c.passes()), c.actual, c.bound),
                None => "not applicable (f is constant 0)".to_string(),
            };
            let irr_row = match &irreducible {
                IrreducibleCorollary::ConditionNotMet => {
                    "not applicable (a half-cube holds no one-input)".to_string()
                }
                IrreducibleCorollary::Checked {
                    bound,
                    actual,
                    holds,
                    ..
                } => format!("{} ({actual} >= {bound})", pass(*holds)),
            };
            table(&[
                ("n", f.dim().n().to_string()),
                ("s", report.s.to_string()),
                ("s0", show(report.s0)),
                ("s1", show(report.s1)),
                ("ones", report.ones_count.to_string()),
                ("delta", show(report.delta_of_one_set)),
                ("simon", simon_row),
                ("irreducible_bound", irr_row),
            ])
        }
    };
    emit(&text, None)?;
    Ok(if ok { EXIT_OK } else { EXIT_REFUTED })
}

fn run_construct(args: ConstructArgs) -> Result<u8, Failure> {
    let kind = if args.irreducible {
        ExtremalKind::Irreducible
    } else {
        ExtremalKind::Simon
    };
    let set = construct(kind, args.n, args.d)?;
    let summary = table(&[
        ("size", set.len().to_string()),
        ("delta", set.min_degree()?.to_string()),
        ("irreducible", set.is_irreducible().to_string()),
        ("subcube", show(set.as_subcube().map(|c| c.render()))),
    ]);
    match &args.output {
        Some(path) => {
            emit(&set.to_text(), Some(path))?;
            print!("{summary}");
        }
        None => {
            print!("{}", set.to_text());
            eprint!("{summary}");
        }
    }
    Ok(EXIT_OK)
}

fn default_strategy(n: u32) -> Strategy {
    if n <= EXHAUSTIVE_MAX_N {
        Strategy::Exhaustive
    } else {
        Strategy::CanonicalBnb
    }
}

fn render(certs: &[Certificate], format: Format) -> String {
    match format {
        Format::Json if certs.len() == 1 => format!("{}\n", certs[0].to_json()),
        Format::Json => {
            let docs: Vec<Value> = certs
                .iter()
                .map(|c| serde_json::to_value(c).expect("serializable"))
                .collect();
            format!(
                "{}\n",
                serde_json::to_string_pretty(&docs).expect("serializable")
            )
        }
        Format::Table => certs
            .iter()
            .map(Certificate::to_table)
            .collect::<Vec<_>>()
            .join("\n"),
    }
}

fn exit_code(certs: &[Certificate]) -> u8 {
    let has = |v: Verdict| certs.iter().any(|c| c.verdict == v);
    if has(Verdict::Refuted) {
        EXIT_REFUTED
    } else if has(Verdict::Partial) {
        EXIT_BUDGET
    } else if has(Verdict::Infeasible) {
        EXIT_INFEASIBLE
    } else {
        EXIT_OK
    }
}

fn run_search(args: SearchArgs, threads: usize) -> Result<u8, Failure> {
    let mode = if args.at_least {
        DegreeMode::AtLeast
    } else {
        DegreeMode::Exact
    };
    let cfg = SearchConfig::new(CubeDim::new(args.n)?, args.d)
        .mode(mode)
        .irreducible(args.irreducible)
        .budget(args.budget)
        .strategy(
            args.strategy
                .map_or_else(|| default_strategy(args.n), Strategy::from),
        )
        .threads(threads);
    let mut cert = certify_search(&cfg)?;
    if args.no_timing {
        cert.elapsed_ms = 0;
    }
    let certs = [cert];
    emit(&render(&certs, args.format), args.output.as_deref())?;
    Ok(exit_code(&certs))
}

fn run_verify(args: VerifyArgs, threads: usize) -> Result<u8, Failure> {
    let resume = match &args.resume {
        Some(path) => Some(
            Certificate::from_json(&read(path)?)
                .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
        ),
        None => None,
    };
    let opts = VerifyOptions {
        threads,
        strategy: args.strategy.map(Strategy::from),
        budget: args.budget,
        seed: args.seed,
        samples: args.samples,
        allow_large: args.allow_large,
        resume,
    };
    let mut certs = Vec::new();
    for claim in args.claim.claims() {
        let mut cert = verify(claim, args.n, &opts)?;
        if args.no_timing {
            cert.elapsed_ms = 0;
        }
        certs.push(cert);
    }
    emit(&render(&certs, args.format), args.output.as_deref())?;
    if args.output.is_some() {
        for c in &certs {
            println!(
                "{} n={}: {}",
                c.claim_id.as_str(),
                c.params.n,
                verdict_name(c.verdict)
            );
        }
    }
    Ok(exit_code(&certs))
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Verified => "verified",
        Verdict::Refuted => "refuted",
        Verdict::Infeasible => "infeasible",
        Verdict::Partial => "partial",
    }
}
