use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qtree_cli::{
    cmd_census, cmd_dot_export, cmd_enumerate, cmd_forward, cmd_invert_poly, cmd_invert_spectra,
    cmd_snowflake_invert, cmd_spectra, invert_poly_trace, parse_ratio, pretty, ratio_from_forward,
    read_input, CliError, CliResult, InvertPolyArgs,
};
use qtree_core::invert::DEFAULT_MAX_BRANCH;
use qtree_core::parse::parse_poly_any;
use qtree_core::spectra::{D0Choice, Problem, DEFAULT_CLUSTER_TOL, DEFAULT_PERIODS};
use qtree_core::{EnumerationMode, RationalFunction};

/// Forward and inverse spectral computations for equilateral quantum trees.
#[derive(Parser)]
#[command(name = "qtree", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Characteristic polynomials and the reduced ratio psi / psi_hat.
    Forward {
        /// Tree JSON file, `-` for stdin.
        #[arg(long, default_value = "-")]
        tree: String,
    },
    /// Zero-potential Neumann or Dirichlet eigenvalues.
    Spectra {
        #[arg(long, default_value = "-")]
        tree: String,
        #[arg(long, value_enum)]
        problem: ProblemArg,
        /// Edge length.
        #[arg(long, default_value_t = 1.0)]
        l: f64,
        /// Number of 2 pi windows of sqrt(lambda) l.
        #[arg(long, default_value_t = DEFAULT_PERIODS)]
        periods: usize,
        #[arg(long, default_value = "zero")]
        potential: String,
    },
    /// Every tree shape whose ratio equals the given one.
    InvertPoly {
        #[command(flatten)]
        ratio: RatioArgs,
        /// Root degree; read from the ratio when omitted.
        #[arg(long)]
        d0: Option<usize>,
        #[arg(long)]
        pmax: usize,
        /// Group the rooted results by unrooted shape.
        #[arg(long)]
        all_roots: bool,
        /// Filter every rooted tree up to `pmax` instead of searching.
        #[arg(long)]
        exhaustive: bool,
        /// Print the branched continued fractions instead of JSON.
        #[arg(long)]
        trace: bool,
        /// Largest branch size with precomputed tails.
        #[arg(long, default_value_t = DEFAULT_MAX_BRANCH)]
        max_branch: usize,
        /// Unreduced psi; keeps only shapes whose psi and psi_hat both match.
        #[arg(long, requires = "psi_hat", allow_hyphen_values = true)]
        psi: Option<String>,
        #[arg(long, requires = "psi", allow_hyphen_values = true)]
        psi_hat: Option<String>,
    },
    /// Tree shapes from a Neumann and a Dirichlet spectrum.
    InvertSpectra {
        #[arg(long)]
        neumann: String,
        #[arg(long)]
        dirichlet: String,
        #[arg(
            long,
            conflicts_with = "d0_search",
            required_unless_present = "d0_search"
        )]
        d0: Option<usize>,
        /// Try every root degree and report the consistent ones.
        #[arg(long)]
        d0_search: bool,
        /// Phase clustering tolerance.
        #[arg(long, default_value_t = DEFAULT_CLUSTER_TOL)]
        tol: f64,
    },
    /// Arm degrees of a snowflake from its ratio.
    SnowflakeInvert {
        #[command(flatten)]
        ratio: RatioArgs,
        #[arg(long)]
        d0: Option<usize>,
    },
    /// Groups free trees by Neumann fingerprint.
    Census {
        #[arg(long)]
        pmax: usize,
        /// Also fingerprint by the Dirichlet polynomials of every root.
        #[arg(long)]
        two_spectra: bool,
    },
    /// One representative per isomorphism class.
    Enumerate {
        #[arg(long)]
        p: usize,
        #[arg(long, value_enum, default_value_t = ModeArg::Free)]
        mode: ModeArg,
    },
    /// Graphviz rendering of a tree.
    DotExport {
        #[arg(long, default_value = "-")]
        tree: String,
    },
}

#[derive(Args)]
struct RatioArgs {
    /// Numerator, as text (`-2z^2+2`) or an ascending JSON array.
    #[arg(
        long,
        requires = "den",
        conflicts_with = "from_forward",
        allow_hyphen_values = true
    )]
    num: Option<String>,
    #[arg(long, requires = "num", allow_hyphen_values = true)]
    den: Option<String>,
    /// Take the ratio from a `forward` output file.
    #[arg(long)]
    from_forward: Option<String>,
}

impl RatioArgs {
    fn resolve(&self) -> CliResult<RationalFunction> {
        match (&self.num, &self.den, &self.from_forward) {
            (Some(n), Some(d), None) => parse_ratio(n, d),
            (None, None, Some(path)) => ratio_from_forward(&read_input(path)?),
            _ => Err(CliError::parse("give --num and --den, or --from-forward")),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemArg {
    Neumann,
    Dirichlet,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Free,
    Rooted,
}

fn run(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Forward { tree } => Ok(pretty(&cmd_forward(&read_input(&tree)?)?)),
        Command::Spectra {
            tree,
            problem,
            l,
            periods,
            potential,
        } => {
            let problem = match problem {
                ProblemArg::Neumann => Problem::Neumann,
                ProblemArg::Dirichlet => Problem::Dirichlet,
            };
            Ok(pretty(&cmd_spectra(
                &read_input(&tree)?,
                problem,
                l,
                periods,
                &potential,
            )?))
        }
        Command::InvertPoly {
            ratio,
            d0,
            pmax,
            all_roots,
            exhaustive,
            trace,
            max_branch,
            psi,
            psi_hat,
        } => {
            let polynomials = match (psi, psi_hat) {
                (Some(a), Some(b)) => Some((parse_poly_any(&a)?, parse_poly_any(&b)?)),
                _ => None,
            };
            let args = InvertPolyArgs {
                ratio: ratio.resolve()?,
                d0,
                p_max: pmax,
                all_roots,
                exhaustive,
                max_branch,
                polynomials,
            };
            if trace {
                invert_poly_trace(&args)
            } else {
                Ok(pretty(&cmd_invert_poly(&args)?))
            }
        }
        Command::InvertSpectra {
            neumann,
            dirichlet,
            d0,
            d0_search,
            tol,
        } => {
            let choice = match (d0, d0_search) {
                (_, true) => D0Choice::Search,
                (Some(d), false) => D0Choice::Given(d),
                (None, false) => return Err(CliError::parse("give --d0 or --d0-search")),
            };
            let v = cmd_invert_spectra(
                &read_input(&neumann)?,
                &read_input(&dirichlet)?,
                choice,
                tol,
            )?;
            Ok(pretty(&v))
        }
        Command::SnowflakeInvert { ratio, d0 } => {
            Ok(pretty(&cmd_snowflake_invert(&ratio.resolve()?, d0)?))
        }
        Command::Census { pmax, two_spectra } => {
            let (v, elapsed) = cmd_census(pmax, two_spectra)?;
            eprintln!("census finished in {:.3} s", elapsed.as_secs_f64());
            Ok(pretty(&v))
        }
        Command::Enumerate { p, mode } => {
            let mode = match mode {
                ModeArg::Free => EnumerationMode::Free,
                ModeArg::Rooted => EnumerationMode::Rooted,
            };
            Ok(pretty(&cmd_enumerate(p, mode)?))
        }
        Command::DotExport { tree } => cmd_dot_export(&read_input(&tree)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let written = stdout.write_all(out.as_bytes()).and_then(|_| {
                if out.ends_with('\n') {
                    Ok(())
                } else {
                    stdout.write_all(b"\n")
                }
            });
            match written {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
