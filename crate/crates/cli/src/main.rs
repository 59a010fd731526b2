//! `dyadic`: classify dyadic semigroups from a spectrum description.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use dyadic_core::config::{builtin, parse_config, Config, BUILTIN_NAMES};
use dyadic_core::exec::Exec;

mod commands;

#[derive(Parser)]
#[command(name = "dyadic", version, about, long_about = None)]
struct Cli {
    /// Config file; `-` reads stdin. Defaults to stdin unless `--example` is given.
    #[arg(short, long, global = true)]
    config: Option<PathBuf>,

    /// Use a built-in example instead of a config file
    #[arg(short, long, global = true)]
    example: Option<String>,

    /// Print the structured report as JSON
    #[arg(long, global = true)]
    json: bool,

    /// Write the command's CSV table to this file
    #[arg(long, global = true)]
    csv: Option<PathBuf>,

    /// Run every computation on the calling thread
    #[arg(long, global = true)]
    sequential: bool,

    /// Worker threads for parallel stages; 0 uses one per core
    #[arg(
        long,
        global = true,
        default_value_t = 0,
        conflicts_with = "sequential"
    )]
    workers: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Clone)]
enum Command {
    /// Continuity class with evidence
    Classify,
    /// Components of the level set X_n
    Levels {
        #[arg(short, long, default_value_t = 0)]
        n: u32,
        /// Also list the points when the set is finite
        #[arg(long)]
        points: bool,
    },
    /// Levels whose level set contains an antipodal pair
    Antipodes,
    /// The sets M_t and the H2 verdict
    Mt {
        /// Real part of the section; defaults to every representative section
        #[arg(short, long)]
        t: Option<String>,
    },
    /// Diagonal model: decompositions, norm bounds, covers and residuals
    Simulate {
        /// Dyadic times such as `3/8`
        #[arg(long, value_delimiter = ',', default_value = "1/2,3/8,17/512,3")]
        times: Vec<String>,
        /// Values λ_n as `re:im`, comma separated; defaults to λ_n = 1
        #[arg(long, value_delimiter = ',')]
        lambda: Vec<String>,
        /// Number of model threads
        #[arg(long, default_value_t = 4)]
        threads: usize,
        #[arg(long, default_value_t = 20)]
        level_cap: u32,
        /// Approximate residual samples per primitive
        #[arg(long, default_value_t = 10000)]
        density: usize,
    },
    /// lim, lim¹ and the Milnor middle term for the configured tower
    Towers,
    /// List the built-in examples, print one, or run a command on it
    Examples {
        name: Option<String>,
        action: Option<Action>,
    },
}

#[derive(ValueEnum, Clone, Copy)]
enum Action {
    Classify,
    Levels,
    Antipodes,
    Mt,
    Simulate,
    Towers,
}

impl Action {
    fn command(self) -> Command {
        match self {
            Action::Classify => Command::Classify,
            Action::Levels => Command::Levels {
                n: 0,
                points: false,
            },
            Action::Antipodes => Command::Antipodes,
            Action::Mt => Command::Mt { t: None },
            Action::Simulate => Command::Simulate {
                times: ["1/2", "3/8", "17/512", "3"].map(String::from).to_vec(),
                lambda: Vec::new(),
                threads: 4,
                level_cap: 20,
                density: 10000,
            },
            Action::Towers => Command::Towers,
        }
    }
}

pub struct Options {
    pub json: bool,
    pub csv: Option<PathBuf>,
    pub exec: Exec,
}

fn load(cli: &Cli) -> Result<Config> {
    if let Some(name) = &cli.example {
        if cli.config.is_some() {
            bail!("--config and --example are mutually exclusive");
        }
        return Ok(builtin(name)?);
    }
    let text = match &cli.config {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?
        }
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .context("reading stdin")?;
            s
        }
    };
    Ok(parse_config(&text)?)
}

fn run(cli: Cli) -> Result<u8> {
    dyadic_core::exec::set_workers(cli.workers)?;
    let opts = Options {
        json: cli.json,
        csv: cli.csv.clone(),
        exec: if cli.sequential {
            Exec::Sequential
        } else {
            Exec::default()
        },
    };
    let (config, command) = match &cli.command {
        Command::Examples { name: None, .. } => {
            for n in BUILTIN_NAMES {
                println!("{n}");
            }
            return Ok(0);
        }
        Command::Examples {
            name: Some(name),
            action,
        } => {
            let config = builtin(name)?;
            match action {
                None => {
                    print!("{}", dyadic_core::config::render(&config));
                    return Ok(0);
                }
                Some(a) => (config, a.command()),
            }
        }
        other => (load(&cli)?, other.clone()),
    };
    commands::dispatch(&command, &config, &opts)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
