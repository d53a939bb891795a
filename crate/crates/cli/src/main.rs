//! `hspec`: Hermite spectral interpolation and collocation experiments.
//!
//! Exit codes: 0 success, 1 verification failure, 2 argument error,
//! 3 numerical failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hermspec::colloc::Model;
use hermspec::interp::GridSpec;
use hermspec::verify::Suite;
use hermspec_cli::commands;

#[derive(Parser)]
#[command(
    name = "hspec",
    version,
    about = "Hermite spectral interpolation, superconvergence diagnostics, collocation, and post-processing"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct GridArgs {
    /// Number of evaluation grid points.
    #[arg(long, default_value_t = 4000)]
    grid_points: usize,
    /// Window padding beyond the outermost turning point.
    #[arg(long, default_value_t = 2.0)]
    window_pad: f64,
}

impl From<GridArgs> for GridSpec {
    fn from(args: GridArgs) -> GridSpec {
        GridSpec {
            points: args.grid_points,
            window_pad: args.window_pad,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate sup norms of the basis derivatives and their scaled columns.
    PsiNorms {
        /// Smallest degree (>= 1).
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        /// Largest degree.
        #[arg(long, default_value_t = 60)]
        n_max: usize,
        /// Derivative orders to tabulate.
        #[arg(long = "k", value_delimiter = ',', default_values_t = [0u32, 1, 2, 3])]
        k_set: Vec<u32>,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Interpolation error curve with superconvergence marks, or the
    /// ratio series with --ratios.
    Supercon {
        /// Built-in function id (pole, wavepacket, pole2, gausslog, twinpeaks).
        #[arg(long)]
        function: String,
        /// Interpolation degree (curve mode).
        #[arg(long, default_value_t = 55)]
        n: usize,
        /// Derivative order of the curve: 1 (tau marks) or 2 (eta marks).
        #[arg(long, default_value_t = 1)]
        m: u32,
        /// Emit the ratio series over [n-min, n-max] instead of a curve.
        #[arg(long)]
        ratios: bool,
        #[arg(long, default_value_t = 1)]
        n_min: usize,
        #[arg(long, default_value_t = 200)]
        n_max: usize,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Solve a collocation model with a manufactured right-hand side.
    Collocate {
        /// model1 (u'' + (alpha - x^2) u = f) or model2 (-u'' + alpha u = f).
        #[arg(long)]
        model: String,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        /// Built-in exact solution id.
        #[arg(long)]
        function: String,
        #[arg(long, default_value_t = 45)]
        n: usize,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Merge the model2 solutions of degrees n and n+1 into degree m.
    Postprocess {
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        alpha: f64,
        /// Built-in exact solution id.
        #[arg(long)]
        function: String,
        #[arg(long, default_value_t = 90)]
        n: usize,
        /// Merge degree (m <= 2n + 1).
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
    },
    /// Run a verification suite and print the machine-readable report.
    Verify {
        /// basis, nodes, interp, colloc, post, or all.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::PsiNorms {
            n_min,
            n_max,
            k_set,
            out_dir,
        } => commands::cmd_psi_norms(n_min, n_max, &k_set, &out_dir),
        Command::Supercon {
            function,
            n,
            m,
            ratios,
            n_min,
            n_max,
            grid,
            out_dir,
        } => {
            if ratios {
                commands::cmd_ratios(&function, n_min, n_max, grid.into(), &out_dir)
            } else {
                commands::cmd_supercon(&function, n, m, grid.into(), &out_dir)
            }
        }
        Command::Collocate {
            model,
            alpha,
            function,
            n,
            grid,
            out_dir,
        } => match Model::from_id(&model) {
            Ok(model) => commands::cmd_collocate(model, alpha, &function, n, grid.into(), &out_dir),
            Err(e) => Err(e.into()),
        },
        Command::Postprocess {
            alpha,
            function,
            n,
            m,
            grid,
            out_dir,
        } => commands::cmd_postprocess(alpha, &function, n, m, grid.into(), &out_dir),
        Command::Verify { suite, seed } => {
            return match Suite::from_id(&suite) {
                Ok(suite) => {
                    let (report, passed) = commands::cmd_verify(suite, seed);
                    println!("{report}");
                    if passed {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(1)
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            };
        }
    };

    match outcome {
        Ok(manifest) => {
            println!("{}", manifest.to_json());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
