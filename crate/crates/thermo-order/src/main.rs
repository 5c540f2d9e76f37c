use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thermo_order::commands::{self, CheckMode, Outcome, SweepFormat, EXIT_ERROR};
use thermo_order::example::{self, ExampleParams};
use thermo_order::{formats, NumericChoice, Settings};

/// Decide, witness and quantify thermodynamic state transitions between
/// energy-diagonal states.
///
/// Exit codes: 0 possible, 1 impossible (or not found), 2 error.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    /// Arithmetic for reading states and comparing curves
    #[arg(
        long,
        global = true,
        env = "THERMO_ORDER_MODE",
        value_enum,
        default_value = "float"
    )]
    numeric: NumericChoice,

    /// Curve-comparison tolerance in float mode
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,

    /// Also write the run report as JSON
    #[arg(long, global = true)]
    report: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the initial state can be turned into the final one
    Check {
        initial: PathBuf,
        #[arg(name = "final")]
        fin: PathBuf,
        #[arg(long, value_enum, default_value = "plain")]
        mode: CheckMode,
        /// Comma-separated alpha values, or `default`
        #[arg(long, default_value = "default")]
        alphas: String,
        /// Write the verdict as JSON
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Export F_alpha(final) - F_alpha(initial) over an alpha grid
    Sweep {
        initial: PathBuf,
        #[arg(name = "final")]
        fin: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Output format; inferred from the extension when omitted
        #[arg(long, value_enum)]
        format: Option<SweepFormat>,
        #[arg(long, default_value = "default")]
        alphas: String,
    },
    /// Export the thermal Lorenz curve breakpoints as CSV
    Lorenz {
        state: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Grid search for a correlated qubit catalyst
    Search {
        initial: PathBuf,
        #[arg(name = "final")]
        fin: PathBuf,
        /// Search config JSON
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find an explicit Gibbs-preserving stochastic map
    Witness {
        initial: PathBuf,
        #[arg(name = "final")]
        fin: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Relative free energies f0, f1 and f_inf of a state
    Work { state: PathBuf },
    /// Run the built-in reference pipeline and report PASS/FAIL per step.
    ///
    /// The system is a qubit with gap 1 kT and ground population 0.73. It is
    /// coupled to a work bit with gap 0.01 kT, and the target is the thermal
    /// qubit with the work bit excited except with probability epsilon. The
    /// catalyst is a pair of qubits with ground marginals s, q and P(10) = x10.
    Example {
        #[arg(long, default_value_t = 0.95)]
        s: f64,
        #[arg(long, default_value_t = 0.70)]
        q: f64,
        #[arg(long, default_value_t = 0.04)]
        x10: f64,
        #[arg(long, default_value_t = 0.007)]
        epsilon: f64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Write curves, catalyst, witness and report here
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let settings = Settings {
        numeric: cli.numeric,
        tol: cli.tol,
    };
    match &cli.command {
        Command::Check {
            initial,
            fin,
            mode,
            alphas,
            out,
        } => {
            let alphas = commands::parse_alphas(alphas)?;
            commands::check(&settings, initial, fin, *mode, &alphas, out.as_deref())
        }
        Command::Sweep {
            initial,
            fin,
            out,
            format,
            alphas,
        } => {
            let alphas = commands::parse_alphas(alphas)?;
            commands::sweep(&settings, initial, fin, out, *format, &alphas)
        }
        Command::Lorenz { state, out } => commands::lorenz(&settings, state, out),
        Command::Search {
            initial,
            fin,
            config,
            out,
        } => commands::search(&settings, initial, fin, config.as_deref(), out.as_deref()),
        Command::Witness { initial, fin, out } => {
            commands::witness(&settings, initial, fin, out.as_deref())
        }
        Command::Work { state } => commands::work(&settings, state),
        Command::Example {
            s,
            q,
            x10,
            epsilon,
            seed,
            out_dir,
        } => {
            let params = ExampleParams {
                s: *s,
                q: *q,
                x10: *x10,
                epsilon: *epsilon,
                seed: *seed,
            };
            example::run(&params, out_dir.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|out| {
        if let Some(path) = &cli.report {
            formats::write(path, &out.report.to_json())?;
        }
        Ok(out)
    });
    match outcome {
        Ok(out) => {
            for line in &out.lines {
                println!("{line}");
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
