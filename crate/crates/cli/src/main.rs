use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use codepth_cli::error::EXIT_INVALID;
use codepth_cli::scenario::WindowDecl;
use codepth_cli::{cache, run_scenario, CliError, Options, Scenario};

const DEFAULT_CACHE_DIR: &str = ".codepth-cache";

#[derive(Parser)]
#[command(name = "codepth", version, about = "Local and Koszul cohomology slices, coregularity and quasi-cyclicity checks")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a scenario file.
    Run(RunArgs),
    /// Inspect or manage the slice cache.
    Cache {
        #[command(subcommand)]
        action: CacheCmd,
        /// Cache directory (default: $CODEPTH_CACHE_DIR or .codepth-cache).
        #[arg(long, global = true)]
        cache_dir: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    scenario: PathBuf,
    /// `q` or `fp:<p>`.
    #[arg(long)]
    field: Option<String>,
    /// Total-degree window `lo:hi`.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true, conflicts_with = "box_")]
    window: Option<[i64; 2]>,
    /// Fine-degree box `lo:hi` for every variable.
    #[arg(long = "box", id = "box_", value_parser = parse_range, allow_hyphen_values = true)]
    box_: Option<[i64; 2]>,
    /// Highest truncation level.
    #[arg(long)]
    levels: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Collect and print explicit preimage witnesses.
    #[arg(long)]
    witnesses: bool,
    /// Append slice dumps of each step's module.
    #[arg(long)]
    dump_slices: bool,
    /// Include wall time in the report.
    #[arg(long)]
    timing: bool,
    /// Persist cohomology slices here (default: $CODEPTH_CACHE_DIR if set).
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CacheCmd {
    Stats,
    Clear,
    /// Print entries in the slice dump format.
    Export {
        /// Only modules whose id contains this text.
        #[arg(long)]
        module: Option<String>,
        /// Only this slice key, e.g. `(-1,-1,0,0)@0`.
        #[arg(long)]
        key: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn parse_range(s: &str) -> Result<[i64; 2], String> {
    let (a, b) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo = a.trim().parse::<i64>().map_err(|e| e.to_string())?;
    let hi = b.trim().parse::<i64>().map_err(|e| e.to_string())?;
    if lo > hi {
        return Err("lo exceeds hi".into());
    }
    Ok([lo, hi])
}

fn env_cache_dir() -> Option<PathBuf> {
    std::env::var_os("CODEPTH_CACHE_DIR").map(PathBuf::from)
}

fn run(args: RunArgs) -> Result<i32, CliError> {
    let sc = Scenario::load(&args.scenario)?;
    let window = match (args.window, args.box_) {
        (Some(d), _) => Some(WindowDecl::Total {
            degrees: d,
            span: match &sc.window {
                Some(WindowDecl::Total { span, .. }) => *span,
                _ => 3,
            },
        }),
        (None, Some(b)) => Some(WindowDecl::Box(b)),
        (None, None) => None,
    };
    let opts = Options {
        field: args.field,
        window,
        levels: args.levels,
        witnesses: args.witnesses,
        dump_slices: args.dump_slices,
        timing: args.timing,
        cache_dir: args.cache_dir.or_else(env_cache_dir),
    };
    let report = run_scenario(&sc, &opts)?;
    match args.format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => print!("{}", report.to_json()),
    }
    Ok(report.exit_code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Cmd::Run(args) => run(args),
        Cmd::Cache { action, cache_dir } => {
            let dir = cache_dir.or_else(env_cache_dir).unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR));
            let text = match action {
                CacheCmd::Stats => cache::stats(&dir),
                CacheCmd::Clear => cache::clear(&dir),
                CacheCmd::Export { module, key } => cache::export(&dir, module.as_deref(), key.as_deref()),
            };
            text.map(|t| {
                print!("{t}");
                0
            })
        }
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            let code = e.exit_code();
            ExitCode::from(if code == 0 { EXIT_INVALID } else { code } as u8)
        }
    }
}
