//! `hyperzero`: classify parameter triples and export roots, spectra, curves and
//! region maps.
//!
//! Exit codes: 0 success or verdict true, 1 verdict false or disagreement,
//! 2 usage or input error, 3 numerical failure.

mod commands;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::output::Format;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numerical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Numerical(m) => m,
        }
    }

    pub fn io(e: std::io::Error) -> Self {
        CliError::Usage(format!("cannot write output: {e}"))
    }
}

impl From<hyperzero::Error> for CliError {
    fn from(e: hyperzero::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

#[derive(Parser)]
#[command(name = "hyperzero", version, about = "Real-rootedness of P_n = zP_{n-1} + αP_{n-2} + βP_{n-3} + γP_{n-4}")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ParamArgs {
    /// α, as p/q (exact) or a decimal
    #[arg(short = 'a', long = "alpha", allow_hyphen_values = true)]
    alpha: String,
    /// β
    #[arg(short = 'b', long = "beta", allow_hyphen_values = true)]
    beta: String,
    /// γ, nonzero
    #[arg(short = 'g', long = "gamma", allow_hyphen_values = true)]
    gamma: String,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Output file; standard output when absent or "-"
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
    /// Output format; defaults from the file extension, then the command
    #[arg(long = "format", value_enum)]
    format: Option<Format>,
    /// Significant digits for CSV numbers
    #[arg(long = "precision", default_value_t = 12)]
    precision: usize,
}

impl OutputArgs {
    fn spec(&self, default: Format) -> output::OutputSpec {
        output::OutputSpec::resolve(self.format, self.output.clone(), self.precision, default)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide real-rootedness of every P_n from discriminant signs
    Classify {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Roots of P_n
    Roots {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(short = 'n')]
        n: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// The curve Im b = 0 off the real axis, with an enclosure verdict
    Curve {
        #[command(flatten)]
        params: ParamArgs,
        /// "x0,x1,y0,y1"; defaults to a square sized from the parameters
        #[arg(long = "box", allow_hyphen_values = true)]
        bbox: Option<String>,
        #[arg(long = "res", default_value_t = 512)]
        res: usize,
        /// Overlay the roots of P_N
        #[arg(long = "roots")]
        roots: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Grid sample of the limiting set of the spectra of T_n
    Limset {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long = "box", allow_hyphen_values = true)]
        bbox: Option<String>,
        #[arg(long = "res", default_value_t = 400)]
        res: usize,
        #[arg(long = "eps", default_value_t = 1e-2)]
        eps: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Map of the regions of the (γ, v) half-plane γ < 0 at fixed β
    RegionMap {
        #[arg(short = 'b', long = "beta", default_value = "1", allow_hyphen_values = true)]
        beta: String,
        /// "γ0,γ1,v0,v1"
        #[arg(long = "box", default_value = "-0.6,0,-0.3,0.6", allow_hyphen_values = true)]
        bbox: String,
        #[arg(long = "res", default_value_t = 200)]
        res: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Cross-check the verdict against numerical oracles
    Verify {
        #[arg(short = 'a', long = "alpha", allow_hyphen_values = true)]
        alpha: Option<String>,
        #[arg(short = 'b', long = "beta", allow_hyphen_values = true)]
        beta: Option<String>,
        /// One value or a comma-separated list
        #[arg(short = 'g', long = "gamma", allow_hyphen_values = true)]
        gamma: Option<String>,
        /// Sample a box "a0,a1,b0,b1,g0,g1" instead of fixed parameters
        #[arg(long = "region", allow_hyphen_values = true, conflicts_with_all = ["alpha", "beta", "gamma"])]
        region: Option<String>,
        #[arg(long = "samples", default_value_t = 100)]
        samples: usize,
        #[arg(long = "seed", default_value_t = 0)]
        seed: u64,
        /// Largest n checked
        #[arg(short = 'n', default_value_t = 40)]
        n_max: usize,
        #[arg(long = "tol", default_value_t = 1e-6)]
        tol: f64,
        /// Grid resolution of the enclosure test
        #[arg(long = "res", default_value_t = 512)]
        res: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Classify { params, out } => commands::classify(&params, &out.spec(Format::Json)),
        Command::Roots { params, n, out } => commands::roots(&params, n, &out.spec(Format::Csv)),
        Command::Curve {
            params,
            bbox,
            res,
            roots,
            out,
        } => commands::curve(&params, bbox.as_deref(), res, roots, &out.spec(Format::Svg)),
        Command::Limset {
            params,
            bbox,
            res,
            eps,
            out,
        } => commands::limset(&params, bbox.as_deref(), res, eps, &out.spec(Format::Csv)),
        Command::RegionMap { beta, bbox, res, out } => {
            commands::region_map(&beta, &bbox, res, &out.spec(Format::Svg))
        }
        Command::Verify {
            alpha,
            beta,
            gamma,
            region,
            samples,
            seed,
            n_max,
            tol,
            res,
            out,
        } => {
            let target = match (region, alpha, beta, gamma) {
                (Some(r), ..) => commands::VerifyTarget::Region {
                    spec: r,
                    samples,
                    seed,
                },
                (None, Some(a), Some(b), Some(g)) => commands::VerifyTarget::Params { alpha: a, beta: b, gamma: g },
                _ => return Err(CliError::Usage("verify needs -a, -b and -g, or --region".into())),
            };
            commands::verify(target, n_max, tol, res, &out.spec(Format::Json))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("hyperzero: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
