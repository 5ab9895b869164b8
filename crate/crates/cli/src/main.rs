use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use twistforge::config::{OutputFormat, RunConfig};
use twistforge::deform::{conjugate_alpha, dress_generators, Alpha};
use twistforge::fock::{Split, Statistics};
use twistforge::twist::{solve_twist, PivotRule};
use twistforge::verify::{full_report, Bundle, Convention};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "twistforge", version)]
#[command(about = "Exact Drinfel'd twists and q-deformed ladder operators for sl(2)")]
struct Cli {
    /// JSON run configuration; flags override its values
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve phi_h and F and write the twist cache
    Solve(RunArgs),
    /// Dress the ladder operators and dump the deformed generators
    Build(RunArgs),
    /// Run every check and write the report bundle
    Verify(RunArgs),
    /// Print a saved report bundle
    Report {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
}

#[derive(Args, Default)]
struct RunArgs {
    #[arg(long)]
    order: Option<usize>,
    #[arg(long)]
    cutoff: Option<usize>,
    #[arg(long, value_enum)]
    statistics: Option<StatisticsArg>,
    #[arg(long, value_enum)]
    gauge_unitary: Option<OnOff>,
    #[arg(long, value_enum)]
    pivot: Option<PivotArg>,
    /// PBW degree cap (default 2K+2)
    #[arg(long)]
    cap: Option<u32>,
    #[arg(long, value_enum)]
    split: Option<SplitArg>,
    #[arg(long, value_enum)]
    convention: Option<ConventionArg>,
    /// Guard band for the relation checks
    #[arg(long)]
    band: Option<usize>,
    #[arg(long)]
    covariance_band: Option<usize>,
    /// e.g. `1`, `exp(h*n)`, `1 + h*sigma(XpXm)`
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long)]
    twist_cache: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Output file; stdout if absent
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum StatisticsArg {
    Bose,
    Fermi,
}

#[derive(Clone, Copy, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
enum PivotArg {
    LexMin,
    None,
}

#[derive(Clone, Copy, ValueEnum)]
enum SplitArg {
    Symmetric,
    UOnly,
    VOnly,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Standard,
    Mirrored,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

impl RunArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(v) = self.order {
            cfg.order = v;
        }
        if let Some(v) = self.cutoff {
            cfg.cutoff = v;
        }
        if let Some(v) = self.statistics {
            cfg.statistics = match v {
                StatisticsArg::Bose => Statistics::Bose,
                StatisticsArg::Fermi => Statistics::Fermi,
            };
            // the fermionic space has a single admissible cutoff
            if cfg.statistics == Statistics::Fermi && self.cutoff.is_none() {
                cfg.cutoff = 2;
            }
        }
        if let Some(v) = self.gauge_unitary {
            cfg.unitary = matches!(v, OnOff::On);
        }
        if let Some(v) = self.pivot {
            cfg.pivot_rule = match v {
                PivotArg::LexMin => PivotRule::LexMin,
                PivotArg::None => PivotRule::None,
            };
        }
        if self.cap.is_some() {
            cfg.cap = self.cap;
        }
        if let Some(v) = self.split {
            cfg.split = match v {
                SplitArg::Symmetric => Split::Symmetric,
                SplitArg::UOnly => Split::UOnly,
                SplitArg::VOnly => Split::VOnly,
            };
        }
        if let Some(v) = self.convention {
            cfg.convention = match v {
                ConventionArg::Standard => Convention::Standard,
                ConventionArg::Mirrored => Convention::Mirrored,
            };
        }
        if let Some(v) = self.band {
            cfg.qcr_band = v;
        }
        if let Some(v) = self.covariance_band {
            cfg.covariance_band = v;
        }
        if let Some(v) = &self.alpha {
            cfg.alpha = v.clone();
        }
        if self.twist_cache.is_some() {
            cfg.twist_cache = self.twist_cache.clone();
        }
        if let Some(v) = self.format {
            cfg.format = match v {
                FormatArg::Json => OutputFormat::Json,
                FormatArg::Text => OutputFormat::Text,
            };
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl From<twistforge::Error> for Failure {
    fn from(e: twistforge::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

fn usage(message: String) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message,
    }
}

fn load_config(path: Option<&Path>, args: &RunArgs) -> Result<RunConfig, Failure> {
    let mut cfg = match path {
        Some(p) => RunConfig::from_json_file(p)?,
        None => RunConfig::default(),
    };
    args.apply(&mut cfg);
    cfg.validate()?;
    Ok(cfg)
}

fn render(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
    s.push('\n');
    s
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let config = cli.config.as_deref();
    match cli.command {
        Command::Solve(args) => {
            let cfg = load_config(config, &args)?;
            let t = solve_twist(twistforge::verify::solve_options(&cfg))?;
            let text = render(&t.to_json());
            // `--out` wins; otherwise the cache path, then stdout
            let target = args.out.as_deref().or(cfg.twist_cache.as_deref());
            emit(target, &text)?;
            Ok(0)
        }
        Command::Build(args) => {
            let cfg = load_config(config, &args)?;
            let space = cfg.space();
            let t = twistforge::verify::obtain_twist(&cfg)?;
            let alpha = Alpha::parse(&cfg.alpha, &space, t.order())?;
            let d = conjugate_alpha(&dress_generators(&t, &space, cfg.split)?, &alpha)?;
            emit(args.out.as_deref(), &render(&d.to_json(&space)))?;
            Ok(0)
        }
        Command::Verify(args) => {
            let cfg = load_config(config, &args)?;
            let bundle = full_report(&cfg)?;
            let text = match cfg.format {
                OutputFormat::Json => render(&bundle.to_json()),
                OutputFormat::Text => bundle.to_text(),
            };
            emit(args.out.as_deref(), &text)?;
            Ok(bundle.exit_code() as u8)
        }
        Command::Report { file, format } => {
            let text = fs::read_to_string(&file)
                .map_err(|e| usage(format!("cannot read {}: {e}", file.display())))?;
            let value: Value = serde_json::from_str(&text)
                .map_err(|e| usage(format!("{} is not JSON: {e}", file.display())))?;
            let bundle = Bundle::from_json(&value)?;
            match format {
                FormatArg::Json => print!("{}", render(&bundle.to_json())),
                FormatArg::Text => print!("{}", bundle.to_text()),
            }
            Ok(if bundle.all_pass() { 0 } else { EXIT_FAIL })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("twistforge: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
