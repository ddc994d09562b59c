//! The `cblag` command line.
//!
//! Exit codes: 0 success, 1 validation failure (including failed `verify`
//! checks), 2 numerical failure, 64 usage error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{ArgGroup, Args, Parser, Subcommand};

use crate::checkerboard::{build_checkerboard, CheckerboardSet, GridInstance};
use crate::error::Error;
use crate::interp::interpolate;
use crate::io::{self, BasisRow, GridFile};
use crate::lagrange::LagrangeBasis;
use crate::nodemap::{coeffs_from_nodes, nodes_from_coeffs, NodeSequence};
use crate::orthopoly::RecurrenceCoeffs;
use crate::{presets, random, verify};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "cblag", version, about = "Lagrange interpolation on checkerboard grids")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Recurrence coefficients to the node sequence they generate.
    Nodes {
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Node sequence to recurrence coefficients.
    Coeffs {
        #[arg(long)]
        nodes: PathBuf,
        /// Require a_0 = 1 (only meaningful for even n, where it is the
        /// normalization in use).
        #[arg(long)]
        normalize_a0: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a grid and one checkerboard set.
    Grid(GridArgs),
    /// Dump all basis values on an M x M lattice over the node bounding box.
    Basis {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        tau: Option<u8>,
        #[arg(long, value_name = "M")]
        eval_lattice: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank, delta-property, null-space and quotient-uniqueness checks.
    Verify {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        tau: Option<u8>,
        /// Skip the least-squares oracle comparison.
        #[arg(long)]
        no_oracle: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the interpolant of node samples at given points.
    Interp {
        #[arg(long)]
        grid: PathBuf,
        #[arg(long)]
        tau: Option<u8>,
        #[arg(long)]
        samples: PathBuf,
        #[arg(long)]
        points: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["preset", "xcoeffs", "random"])))]
struct GridArgs {
    /// "padua" or "chebyshev"; needs --n.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, requires = "ycoeffs")]
    xcoeffs: Option<PathBuf>,
    #[arg(long, requires = "xcoeffs")]
    ycoeffs: Option<PathBuf>,
    #[arg(long)]
    sigma: Option<usize>,
    /// Random coefficients; needs --n, --sigma and --seed.
    #[arg(long)]
    random: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value_t = 0)]
    tau: u8,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Lib(Error),
    ChecksFailed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::ChecksFailed) => EXIT_VALIDATION,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                EXIT_NUMERICAL
            } else {
                EXIT_VALIDATION
            }
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Nodes { coeffs, out } => {
            let c: RecurrenceCoeffs = io::read_json(&coeffs)?;
            let nodes = nodes_from_coeffs(&c)?;
            io::write_json(&nodes, out.as_deref())?;
        }
        Command::Coeffs {
            nodes,
            normalize_a0,
            out,
        } => {
            let seq: NodeSequence = io::read_json(&nodes)?;
            if normalize_a0 && seq.degree() % 2 == 1 {
                return Err(Failure::Usage(
                    "--normalize-a0 applies to even n only; for odd n the coefficients are unique".into(),
                ));
            }
            let c = if seq.degree() == 0 {
                RecurrenceCoeffs::empty()
            } else {
                coeffs_from_nodes(&seq)?
            };
            io::write_json(&c, out.as_deref())?;
        }
        Command::Grid(args) => grid_command(args)?,
        Command::Basis {
            grid,
            tau,
            eval_lattice,
            out,
        } => {
            if eval_lattice == 0 {
                return Err(Failure::Usage("--eval-lattice must be at least 1".into()));
            }
            let (g, set) = load_grid(&grid, tau)?;
            let rows = basis_dump(g, set, eval_lattice)?;
            io::write_basis(&rows, out.as_deref())?;
        }
        Command::Verify {
            grid,
            tau,
            no_oracle,
            out,
        } => {
            let (g, set) = load_grid(&grid, tau)?;
            let report = verify::verify_set(&g, &set, !no_oracle)?;
            io::write_json(&report, out.as_deref())?;
            if !report.passed() {
                return Err(Failure::ChecksFailed);
            }
        }
        Command::Interp {
            grid,
            tau,
            samples,
            points,
            out,
        } => {
            let (g, set) = load_grid(&grid, tau)?;
            let samples = io::read_samples(&samples)?;
            let points = io::read_points(&points)?;
            let p = interpolate(Arc::new(g), set.tau(), &samples)?;
            let rows: Vec<_> = points.iter().map(|&(x, y)| (x, y, p.eval((x, y)))).collect();
            io::write_evaluations(&rows, out.as_deref())?;
        }
    }
    Ok(())
}

fn grid_command(args: GridArgs) -> Result<(), Failure> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| Failure::Usage(format!("{flag} is required here")));
    let grid = if let Some(name) = &args.preset {
        if args.sigma.is_some() {
            return Err(Failure::Usage("presets fix sigma; drop --sigma".into()));
        }
        presets::preset(name, need(args.n, "--n")?).map_err(|e| match e {
            Error::InvalidArgument(m) => Failure::Usage(m),
            other => Failure::Lib(other),
        })?
    } else if args.random {
        let seed = args.seed.ok_or_else(|| Failure::Usage("--random needs --seed".into()))?;
        random::random_grid(&mut random::rng(seed), need(args.n, "--n")?, need(args.sigma, "--sigma")?)?
    } else {
        let (Some(xf), Some(yf)) = (&args.xcoeffs, &args.ycoeffs) else {
            return Err(Failure::Usage("--xcoeffs and --ycoeffs go together".into()));
        };
        let xc: RecurrenceCoeffs = io::read_json(xf)?;
        let yc: RecurrenceCoeffs = io::read_json(yf)?;
        let sigma = need(args.sigma, "--sigma")?;
        if yc.n() != xc.n() + sigma {
            return Err(Failure::Lib(Error::InvalidGrid(format!(
                "y-coefficients have n = {}, expected {} + {sigma}",
                yc.n(),
                xc.n()
            ))));
        }
        GridInstance::from_coeffs(xc, yc)?
    };
    let file = GridFile::new(&grid, args.tau)?;
    io::write_json(&file, args.out.as_deref())?;
    Ok(())
}

/// Loads a grid file. With `tau` differing from the file's set, the set is
/// rebuilt from the grid.
fn load_grid(path: &Path, tau: Option<u8>) -> Result<(GridInstance, CheckerboardSet), Failure> {
    let file: GridFile = io::read_json(path)?;
    let (grid, set) = file.into_parts()?;
    match tau {
        Some(t) if t != set.tau() => {
            let set = build_checkerboard(&grid, t)?;
            Ok((grid, set))
        }
        _ => Ok((grid, set)),
    }
}

fn lattice(lo: f64, hi: f64, m: usize) -> Vec<f64> {
    if m == 1 {
        return vec![0.5 * (lo + hi)];
    }
    (0..m).map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64).collect()
}

fn basis_dump(grid: GridInstance, set: CheckerboardSet, m: usize) -> Result<Vec<BasisRow>, Failure> {
    let xs = grid.xnodes().as_slice();
    let ys = grid.ynodes().as_slice();
    let lx = lattice(xs[xs.len() - 1], xs[0], m);
    let ly = lattice(ys[ys.len() - 1], ys[0], m);
    let basis = LagrangeBasis::new(Arc::new(grid), set)?;
    let pts: Vec<(f64, f64)> = lx.iter().flat_map(|&x| ly.iter().map(move |&y| (x, y))).collect();
    let values: Vec<Vec<f64>> = pts.iter().map(|&p| basis.eval_all(p)).collect();
    let mut rows = Vec::with_capacity(basis.len() * pts.len());
    for (i, anchor) in basis.set().points().iter().enumerate() {
        for (k, &(x, y)) in pts.iter().enumerate() {
            rows.push(BasisRow {
                s: anchor.r,
                v: anchor.u,
                point_x: x,
                point_y: y,
                l_value: values[k][i],
            });
        }
    }
    Ok(rows)
}
