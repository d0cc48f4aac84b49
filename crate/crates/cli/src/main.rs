use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use ramsey_cli::{run, CommandKind, ExperimentConfig, Report};

/// Exact-arithmetic workbench for heterogeneous Ramsey algebras: orderly
/// terms, reductions, FR sets, and theorem-by-theorem verification sweeps.
#[derive(Parser)]
#[command(name = "ramsey", version, arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON experiment config; command-line flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Write the structured JSON report to this path.
    #[arg(long, global = true)]
    report: Option<PathBuf>,

    /// Output format on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Matrix order.
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Generator indices run 1..=index-bound.
    #[arg(long, global = true)]
    index_bound: Option<u32>,

    /// Explicit comma-separated generator indices (overrides index-bound).
    #[arg(long, global = true, value_delimiter = ',')]
    indices: Option<Vec<u32>>,

    /// Length of enumerated reduction prefixes.
    #[arg(long, global = true)]
    out_len: Option<usize>,

    /// Bound on orderly-term arity.
    #[arg(long, global = true)]
    max_arity: Option<usize>,

    /// Bound on orderly-term depth.
    #[arg(long, global = true)]
    max_depth: Option<usize>,

    /// Tuple-length bound for the square-sum lemma.
    #[arg(long, global = true)]
    len_bound: Option<usize>,

    /// Prefix length for the lemma verifiers.
    #[arg(long, global = true)]
    prefix_len: Option<usize>,

    /// Exact arity filter for enumerate-terms.
    #[arg(long, global = true)]
    arity: Option<usize>,

    /// Codomain sort for enumerate-terms (0 = scalar, 1 = matrix).
    #[arg(long, global = true)]
    codomain: Option<usize>,

    /// Sequence spec: g:K, d:K, list:v1,v2,..., diag:v1,v2,...
    #[arg(long, global = true)]
    seq: Option<String>,

    /// Target prefix for check-reduction (same syntax as --seq).
    #[arg(long, global = true)]
    target: Option<String>,

    /// Coloring spec: residue:m,r | double-exp-binary | nth-power-of-y:n.
    #[arg(long, global = true)]
    coloring: Option<String>,

    /// Operations kept in the reduct (add, mul, addf, mulf, det).
    #[arg(long, global = true, value_delimiter = ',')]
    ops: Option<Vec<String>>,

    /// Constant placed in scalar slots of generated sequences.
    #[arg(long, global = true)]
    scalar_slot: Option<i64>,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate orderly terms over a reduct.
    EnumerateTerms,
    /// Compute a finite FR-set approximation with provenance.
    FrSet,
    /// Search for a reduction witness from --seq to --target.
    CheckReduction,
    /// Search for a reduction whose FR set is homogeneous for a coloring.
    SearchHomogeneous,
    /// Re-check a theorem: mod5, ubr, pythagorean, final, hom-lemma,
    /// lemma-long, sort-sep, subalg, probe.
    Verify { theorem: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn execute(cli: &Cli) -> Result<u8, ramsey_cli::RunError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                ramsey_cli::RunError::Schema(ramsey_cli::SchemaError::Invalid {
                    field: "config",
                    reason: format!("cannot read {}: {e}", path.display()),
                })
            })?;
            ExperimentConfig::parse(&text)?
        }
        None => ExperimentConfig::default(),
    };
    apply_overrides(&mut cfg, cli);

    let kind = match &cli.command {
        Command::EnumerateTerms => CommandKind::EnumerateTerms,
        Command::FrSet => CommandKind::FrSet,
        Command::CheckReduction => CommandKind::CheckReduction,
        Command::SearchHomogeneous => CommandKind::SearchHomogeneous,
        Command::Verify { theorem } => {
            cfg.theorem = Some(theorem.clone());
            CommandKind::Verify
        }
    };

    let started = Instant::now();
    let report = run(kind, &cfg)?;
    let elapsed_ms = started.elapsed().as_millis();

    if let Some(path) = &cli.report {
        std::fs::write(path, report.render_json()).map_err(|e| {
            ramsey_cli::RunError::Schema(ramsey_cli::SchemaError::Invalid {
                field: "report",
                reason: format!("cannot write {}: {e}", path.display()),
            })
        })?;
    }
    print_report(&report, cli.format, elapsed_ms);
    Ok(report.exit_code() as u8)
}

fn print_report(report: &Report, format: Format, elapsed_ms: u128) {
    match format {
        Format::Text => print!("{}", report.render_text(Some(elapsed_ms))),
        Format::Json => print!("{}", report.render_json()),
        Format::Csv => print!("{}", report.render_csv()),
    }
}

fn apply_overrides(cfg: &mut ExperimentConfig, cli: &Cli) {
    if let Some(v) = cli.n {
        cfg.n = v;
    }
    if let Some(v) = cli.index_bound {
        cfg.index_bound = v;
    }
    if let Some(v) = &cli.indices {
        cfg.indices = Some(v.clone());
    }
    if let Some(v) = cli.out_len {
        cfg.out_len = v;
    }
    if let Some(v) = cli.max_arity {
        cfg.max_arity = v;
    }
    if let Some(v) = cli.max_depth {
        cfg.max_depth = v;
    }
    if let Some(v) = cli.len_bound {
        cfg.len_bound = v;
    }
    if let Some(v) = cli.prefix_len {
        cfg.prefix_len = Some(v);
    }
    if let Some(v) = cli.arity {
        cfg.arity = Some(v);
    }
    if let Some(v) = cli.codomain {
        cfg.codomain = Some(v);
    }
    if let Some(v) = &cli.seq {
        cfg.seq = Some(v.clone());
    }
    if let Some(v) = &cli.target {
        cfg.target = Some(v.clone());
    }
    if let Some(v) = &cli.coloring {
        cfg.coloring = Some(v.clone());
    }
    if let Some(v) = &cli.ops {
        cfg.ops = Some(v.clone());
    }
    if let Some(v) = cli.scalar_slot {
        cfg.scalar_slot = v;
    }
}
