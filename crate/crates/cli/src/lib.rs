//! The `winverse` command: compute, decompose, verify and solve from matrix
//! files.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use winverse::decomp::{core_ep_decompose, weighted_pair_decompose};
use winverse::geninv::SquareInverseKind;
use winverse::matcore::{pinv, relative_distance};
use winverse::solve::{solve_left_power, solve_right_normal, solve_right_projected, Equation};
use winverse::verify::SystemId;
use winverse::wgeninv::{w_core_ep, w_drazin, w_m_weak_core, w_m_weak_group, WeightedProblem};
use winverse::{ComplexMatrix, DoubleDouble, Error, Matrix, Real, Tolerance};

pub mod matrix_file;
mod output;
mod residuals;

use matrix_file::{read_matrix, read_vector};
use output::Report;

#[derive(Debug, Parser)]
#[command(name = "winverse", version, about = "Weighted m-weak core inverses and their relatives")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub config: Config,
}

#[derive(Debug, Clone, Args)]
pub struct Config {
    /// Absolute tolerance for equation residuals.
    #[arg(long = "tol-eq", global = true, env = "WINVERSE_EQ_ATOL", default_value_t = 1e-9)]
    pub eq_atol: f64,

    /// Relative rank cutoff.
    #[arg(long = "tol-rank", global = true, default_value_t = 1e-11)]
    pub rank_rtol: f64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,

    /// Significant digits in table output.
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(u8).range(1..=17))]
    pub digits: u8,

    /// Working precision.
    #[arg(long, global = true, value_enum, default_value_t = Arith::Dd)]
    pub arith: Arith,
}

impl Config {
    fn tolerance(&self) -> Result<Tolerance, CliError> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.eq_atol) || !positive(self.rank_rtol) {
            return Err(CliError::usage("tolerances must be positive"));
        }
        Ok(Tolerance::new(self.rank_rtol, self.eq_atol))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Arith {
    /// IEEE double precision.
    F64,
    /// Double-double, about 32 significant digits.
    Dd,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute a generalized inverse.
    Compute {
        /// pinv, drazin, group, core, core-ep, bt, mwg, mwc, w-drazin,
        /// w-core-ep, w-mwg or w-mwc
        kind: String,
        #[command(flatten)]
        input: Inputs,
        /// Also report the residuals of the defining equations.
        #[arg(long, short)]
        verbose: bool,
    },
    /// Core-EP factors of A, or the simultaneous factors of (A, W).
    Decompose {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        w: Option<PathBuf>,
    },
    /// Check a candidate X against a characterizing system.
    Verify {
        /// thm31, thm32, thm33, thm34 or outer
        system: String,
        #[command(flatten)]
        input: Inputs,
        #[arg(long)]
        x: PathBuf,
    },
    /// Solve one of the linear equations with its general solution.
    Solve {
        /// right-normal, right-projected or left-power
        equation: String,
        #[command(flatten)]
        input: Inputs,
        /// Right-hand side: a vector b, or the matrix B for left-power.
        #[arg(long)]
        b: PathBuf,
        /// Free parameter: a vector y, or the matrix Y for left-power.
        #[arg(long)]
        y: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Inputs {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub w: Option<PathBuf>,
    #[arg(long)]
    pub m: Option<usize>,
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Ok = 0,
    Unsatisfied = 1,
    Input = 2,
    Domain = 3,
    Usage = 4,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub exit: Exit,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError { exit: Exit::Input, message: message.into() }
    }

    pub fn domain(message: impl Into<String>) -> Self {
        CliError { exit: Exit::Domain, message: message.into() }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        CliError { exit: Exit::Usage, message: message.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let exit = match e {
            Error::EntryCount { .. } | Error::NonFinite { .. } | Error::Shape { .. } => Exit::Input,
            Error::InvalidOrder | Error::UnknownVariant(_) => Exit::Usage,
            _ => Exit::Domain,
        };
        CliError { exit, message: e.to_string() }
    }
}

/// Runs one command and writes its report to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<Exit, CliError> {
    let tol = cli.config.tolerance()?;
    let (report, exit) = match cli.config.arith {
        Arith::F64 => execute::<f64>(&cli.command, &tol)?,
        Arith::Dd => execute::<DoubleDouble>(&cli.command, &tol)?,
    };
    report
        .write(out, cli.config.format, cli.config.digits as usize)
        .map_err(|e| CliError::input(format!("writing output: {e}")))?;
    Ok(exit)
}

fn execute<R: Real>(command: &Command, tol: &Tolerance) -> Result<(Report, Exit), CliError> {
    match command {
        Command::Compute { kind, input, verbose } => compute::<R>(kind, input, *verbose, tol).map(|r| (r, Exit::Ok)),
        Command::Decompose { a, w } => decompose::<R>(a, w.as_deref(), tol).map(|r| (r, Exit::Ok)),
        Command::Verify { system, input, x } => verify::<R>(system, input, x, tol),
        Command::Solve { equation, input, b, y } => {
            solve::<R>(equation, input, b, y.as_deref(), tol).map(|r| (r, Exit::Ok))
        }
    }
}

/// The inverses `compute` knows about.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InverseKind {
    Pinv,
    Square(SquareInverseKind),
    WDrazin,
    WCoreEp,
    WMwg(usize),
    WMwc(usize),
}

impl InverseKind {
    pub fn parse(kind: &str, m: Option<usize>) -> Result<Self, CliError> {
        let order = || match m {
            Some(0) => Err(CliError::usage("m must be a positive integer")),
            Some(m) => Ok(m),
            None => Err(CliError::usage(format!("`{kind}` needs --m"))),
        };
        Ok(match kind {
            "pinv" => Self::Pinv,
            "drazin" => Self::Square(SquareInverseKind::Drazin),
            "group" => Self::Square(SquareInverseKind::Group),
            "core" => Self::Square(SquareInverseKind::Core),
            "core-ep" => Self::Square(SquareInverseKind::CoreEp),
            "bt" => Self::Square(SquareInverseKind::Bt),
            "mwg" => Self::Square(SquareInverseKind::MWeakGroup(order()?)),
            "mwc" => Self::Square(SquareInverseKind::MWeakCore(order()?)),
            "w-drazin" => Self::WDrazin,
            "w-core-ep" => Self::WCoreEp,
            "w-mwg" => Self::WMwg(order()?),
            "w-mwc" => Self::WMwc(order()?),
            _ => return Err(CliError::usage(format!("unknown inverse kind `{kind}`"))),
        })
    }

    fn weighted(self) -> bool {
        matches!(self, Self::WDrazin | Self::WCoreEp | Self::WMwg(_) | Self::WMwc(_))
    }
}

fn load<R: Real>(path: &Path) -> Result<Matrix<R>, CliError> {
    Ok(read_matrix(path)?.cast())
}

fn load_problem<R: Real>(input: &Inputs, m: usize, tol: &Tolerance) -> Result<WeightedProblem<R>, CliError> {
    let w = input.w.as_deref().ok_or_else(|| CliError::usage("--w is required"))?;
    Ok(WeightedProblem::new(load(&input.a)?, load(w)?, m, *tol)?)
}

fn require_m(m: Option<usize>) -> Result<usize, CliError> {
    match m {
        None => Err(CliError::usage("--m is required")),
        Some(0) => Err(CliError::usage("m must be a positive integer")),
        Some(m) => Ok(m),
    }
}

fn compute<R: Real>(kind_name: &str, input: &Inputs, verbose: bool, tol: &Tolerance) -> Result<Report, CliError> {
    let kind = InverseKind::parse(kind_name, input.m)?;
    let a = load::<R>(&input.a)?;
    let mut report = Report::new(kind_name);
    let x = if kind.weighted() {
        // kinds without an order ignore it
        let m = input.m.unwrap_or(1).max(1);
        let p = load_problem::<R>(input, m, tol)?;
        let x = match kind {
            InverseKind::WDrazin => w_drazin(&p)?,
            InverseKind::WCoreEp => w_core_ep(&p)?,
            InverseKind::WMwg(_) => w_m_weak_group(&p)?,
            _ => w_m_weak_core(&p)?,
        };
        if verbose {
            report.residuals(residuals::weighted(kind, &p, &x)?);
        }
        x
    } else {
        let x = match kind {
            InverseKind::Pinv => pinv(&a, tol),
            InverseKind::Square(k) => {
                if !a.is_square() {
                    return Err(CliError::domain(format!(
                        "`{kind_name}` needs a square matrix, got {}x{}",
                        a.rows(),
                        a.cols()
                    )));
                }
                k.compute(&a, tol)?
            }
            _ => unreachable!("weighted kinds handled above"),
        };
        if verbose {
            report.residuals(residuals::square(kind, &a, &x, tol)?);
        }
        x
    };
    report.result(x.to_f64());
    Ok(report)
}

fn decompose<R: Real>(a_path: &Path, w_path: Option<&Path>, tol: &Tolerance) -> Result<Report, CliError> {
    let a = load::<R>(a_path)?;
    match w_path {
        None => {
            if !a.is_square() {
                return Err(CliError::domain("decompose without --w needs a square matrix"));
            }
            let f = core_ep_decompose(&a, tol)?;
            let mut report = Report::new("core-ep decomposition");
            report.scalar("t", f.t).scalar("index", f.index);
            report.matrix("U", f.u.to_f64()).matrix("T", f.t_block.to_f64());
            report.matrix("S", f.s_block.to_f64()).matrix("N", f.n_block.to_f64());
            report.residuals(vec![("U [[T, S], [0, N]] U* = A".into(), relative_distance(&f.reconstruct(), &a)?)]);
            Ok(report)
        }
        Some(w_path) => {
            let w = load::<R>(w_path)?;
            let f = weighted_pair_decompose(&a, &w, tol)?;
            let mut report = Report::new("weighted core-EP decomposition");
            report.scalar("t", f.t).scalar("index_aw", f.index_aw).scalar("index_wa", f.index_wa);
            report.matrix("U", f.u.to_f64()).matrix("V", f.v.to_f64());
            for (name, block) in
                [("A1", &f.a1), ("A2", &f.a2), ("A3", &f.a3), ("W1", &f.w1), ("W2", &f.w2), ("W3", &f.w3)]
            {
                report.matrix(name, block.to_f64());
            }
            report.residuals(vec![
                ("U [[A1, A2], [0, A3]] V* = A".into(), relative_distance(&f.assemble_a(), &a)?),
                ("V [[W1, W2], [0, W3]] U* = W".into(), relative_distance(&f.assemble_w(), &w)?),
            ]);
            Ok(report)
        }
    }
}

fn verify<R: Real>(system: &str, input: &Inputs, x_path: &Path, tol: &Tolerance) -> Result<(Report, Exit), CliError> {
    let id: SystemId = system.parse().map_err(|_| CliError::usage(format!("unknown system `{system}`")))?;
    let m = require_m(input.m)?;
    let p = load_problem::<R>(input, m, tol)?;
    let x = load::<R>(x_path)?;
    let cert = id.check(&p, &x)?;
    let mut report = Report::new(&cert.system_id);
    report.flag("satisfied", cert.satisfied).residuals(cert.residuals.clone());
    Ok((report, if cert.satisfied { Exit::Ok } else { Exit::Unsatisfied }))
}

fn solve<R: Real>(
    equation: &str,
    input: &Inputs,
    b: &Path,
    y: Option<&Path>,
    tol: &Tolerance,
) -> Result<Report, CliError> {
    let eq: Equation = equation.parse().map_err(|_| CliError::usage(format!("unknown equation `{equation}`")))?;
    let m = require_m(input.m)?;
    let p = load_problem::<R>(input, m, tol)?;
    let result = match eq {
        Equation::LeftPower => {
            let y = y.map(load::<R>).transpose()?;
            solve_left_power(&p, &load(b)?, y.as_ref())?
        }
        _ => {
            let rhs = read_vector(b)?.cast::<R>();
            let y = y.map(|path| read_vector(path).map(|v| v.cast::<R>())).transpose()?;
            let solve = if eq == Equation::RightNormal { solve_right_normal } else { solve_right_projected };
            solve(&p, &rhs, y.as_ref())?
        }
    };
    let mut report = Report::new(&eq.to_string());
    report.matrix("particular", result.particular.to_f64());
    if y.is_some() {
        report.matrix("solution", result.solution.to_f64());
    }
    report.matrix("homogeneous", result.homogeneous_projector.to_f64());
    report.number("residual", result.residual);
    if eq == Equation::LeftPower {
        let aw = p.aw();
        let product = &(&result.solution * p.w()) * &aw.pow(p.k() + 1);
        report.matrix("XW(AW)^(k+1)", product.to_f64());
    } else {
        report.flag("unique_in_range", result.unique_in_range.is_some());
    }
    Ok(report)
}

/// Reads a matrix in either accepted format.
pub fn load_matrix(path: &Path) -> Result<ComplexMatrix, CliError> {
    read_matrix(path)
}
