mod commands;
mod system_file;

use std::io::Write;
use std::process::ExitCode;

use artin_morse::coxeter::DEFAULT_CACHE_CAPACITY;
use artin_morse::monoid::DEFAULT_LCM_BOUND;
use clap::builder::RangedU64ValueParser;
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use commands::{CliError, Command, Context, Record, Side};

/// Caps the number of memoised braid-class words.
const CACHE_ENV: &str = "ARTIN_MORSE_CACHE_CAP";

#[derive(Parser, Debug)]
#[command(name = "artin-morse", version, about = "Artin monoids, Morse-collapsed bar complexes and Salvetti posets")]
struct Cli {
    /// Coxeter matrix file (`gens: ...` then `m s t v` lines).
    system: String,

    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Search bound on common-multiple length for `lcm`.
    #[arg(long, default_value_t = DEFAULT_LCM_BOUND, value_parser = RangedU64ValueParser::<usize>::new().range(1..), global = true)]
    lcm_bound: usize,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    JsonLines,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("side").required(true).args(["left", "right"])))]
struct SideFlags {
    #[arg(long)]
    left: bool,
    #[arg(long)]
    right: bool,
}

impl SideFlags {
    fn side(&self) -> Side {
        if self.left {
            Side::Left
        } else {
            Side::Right
        }
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Garside normal form of a positive word.
    Nf { word: String },
    /// Fundamental element of a set of generators.
    Delta {
        #[arg(required = true)]
        set: Vec<String>,
    },
    /// Least common multiple (right multiples by default).
    Lcm {
        #[arg(required = true)]
        words: Vec<String>,
        /// Least common left multiple instead.
        #[arg(long)]
        left: bool,
    },
    /// Greatest common divisor.
    Gcd {
        #[command(flatten)]
        side: SideFlags,
        #[arg(required = true)]
        words: Vec<String>,
    },
    /// Whether x divides y, with the quotient.
    Divides {
        #[command(flatten)]
        side: SideFlags,
        x: String,
        y: String,
    },
    /// Finite-type subsets of generators.
    Sf,
    /// Essential cells of the collapsed complex.
    MorseCells,
    /// Integer homology of the collapsed complex.
    Homology {
        /// Cross-check against independent oracles.
        #[arg(long)]
        verify: bool,
    },
    /// Audit the matching on every grade up to a length.
    MatchingAudit {
        #[arg(long, value_parser = RangedU64ValueParser::<usize>::new().range(1..))]
        max_len: usize,
    },
    /// Salvetti poset census and checks (finite type only).
    SalvettiStats,
    /// Attaching word of the 2-cell for a pair of generators.
    Boundary2 { s: String, t: String },
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Nf { word } => Command::Nf { word },
            Cmd::Delta { set } => Command::Delta { set },
            Cmd::Lcm { words, left } => Command::Lcm { words, side: if left { Side::Left } else { Side::Right } },
            Cmd::Gcd { side, words } => Command::Gcd { words, side: side.side() },
            Cmd::Divides { side, x, y } => Command::Divides { x, y, side: side.side() },
            Cmd::Sf => Command::Sf,
            Cmd::MorseCells => Command::MorseCells,
            Cmd::Homology { verify } => Command::Homology { verify },
            Cmd::MatchingAudit { max_len } => Command::MatchingAudit { max_len },
            Cmd::SalvettiStats => Command::SalvettiStats,
            Cmd::Boundary2 { s, t } => Command::Boundary2 { s, t },
        }
    }
}

fn cache_capacity() -> Result<usize, CliError> {
    match std::env::var(CACHE_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&c| c > 0)
            .ok_or_else(|| CliError::Usage(format!("{CACHE_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_CACHE_CAPACITY),
    }
}

fn execute(cli: Cli) -> Result<Vec<Record>, CliError> {
    let text = std::fs::read_to_string(&cli.system)
        .map_err(|e| CliError::Io { path: cli.system.clone(), message: e.to_string() })?;
    let mut sys = system_file::parse_system_file(&text)?;
    sys.set_cache_capacity(cache_capacity()?);
    let ctx = Context { sys: &sys, lcm_bound: cli.lcm_bound };
    commands::run(&ctx, &cli.command.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let format = cli.format;
    let version = env!("CARGO_PKG_VERSION");
    let result = execute(cli);
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match result {
        Ok(records) => {
            for r in records {
                let line = match format {
                    Format::Text => r.text,
                    Format::JsonLines => {
                        let mut v = r.json;
                        v["version"] = json!(version);
                        v.to_string()
                    }
                };
                if writeln!(out, "{line}").is_err() {
                    return ExitCode::from(1);
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            match format {
                Format::Text => eprintln!("error[{}]: {e}", e.code()),
                Format::JsonLines => {
                    let v = json!({"version": version, "error": {"code": e.code(), "message": e.to_string()}});
                    let _ = writeln!(out, "{v}");
                }
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
