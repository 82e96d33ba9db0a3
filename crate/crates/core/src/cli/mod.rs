//! The `pseudospec` command line. Flags and JSON job files fill the same
//! settings; a flag wins over the job file when both set a value.

pub mod args;
mod commands;
pub mod job;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

use crate::error::Error;
use crate::potential::PotentialParams;
use args::{Cli, CommandKind, Format, MethodArg, Opts, OrderArg, PairingArg};

pub const EXIT_OK: i32 = 0;
/// A verdict was computed and it failed.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Bad flags, parameters or job file.
pub const EXIT_INVALID: i32 = 2;
/// Quadrature or eigensolver did not converge.
pub const EXIT_SOLVER: i32 = 3;
/// The potential has no known pseudo-Hermiticity shift.
pub const EXIT_NO_SHIFT: i32 = 4;

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NonConvergence { .. }
        | Error::Quadrature { .. }
        | Error::Eigen { .. }
        | Error::NonFiniteIntegrand(_) => EXIT_SOLVER,
        Error::NoKnownShift(_) => EXIT_NO_SHIFT,
        Error::Pole(_)
        | Error::InvalidParameter(_)
        | Error::Precondition(_)
        | Error::BranchAmbiguity(_)
        | Error::NonRealC(_)
        | Error::Overflow(_)
        | Error::WrongKinetic { .. } => EXIT_INVALID,
    }
}

/// A message for stderr and the code to exit with.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

/// Every setting a command may read, after merging job file and flags.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub potential: Option<String>,
    pub params: PotentialParams,
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub n_points: Option<usize>,
    pub order: Option<OrderArg>,
    pub method: Option<MethodArg>,
    pub k: Option<usize>,
    pub pairing: Option<PairingArg>,
    pub theta_override: Option<f64>,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub c: Option<f64>,
    pub refinements: Option<u32>,
    pub levels: Option<usize>,
    pub tol: Option<f64>,
    pub format: Option<Format>,
    pub plot_data: Option<PathBuf>,
}

impl Settings {
    fn from_opts(o: Opts) -> Self {
        Self {
            potential: o.potential,
            params: PotentialParams {
                a: o.a,
                b: o.b,
                c: o.c_param,
                v1: o.v1,
                v2: o.v2,
                alpha: o.alpha,
                beta: o.beta,
                gamma: o.gamma,
                zeta: o.zeta,
                m: o.m_param,
                kappa: o.kappa,
            },
            x_min: o.x_min,
            x_max: o.x_max,
            n_points: o.n_points,
            order: o.order,
            method: o.method,
            k: o.k,
            pairing: o.pairing,
            theta_override: o.theta_override,
            m: o.m,
            n: o.n,
            c: o.c,
            refinements: o.refinements,
            levels: o.levels,
            tol: o.tol,
            format: o.format,
            plot_data: o.plot_data,
        }
    }

    fn from_job(j: job::JobFile) -> Self {
        let pot = j.potential.unwrap_or_default();
        let disc = j.discretization.unwrap_or_default();
        let out = j.output.unwrap_or_default();
        let opt = j.options.unwrap_or_default();
        Self {
            potential: (!pot.name.is_empty()).then_some(pot.name),
            params: pot.params,
            x_min: disc.x_min,
            x_max: disc.x_max,
            n_points: disc.n_points,
            order: disc.order,
            method: opt.method,
            k: opt.k,
            pairing: opt.pairing,
            theta_override: opt.theta_override,
            m: opt.m,
            n: opt.n,
            c: opt.c,
            refinements: opt.refinements,
            levels: opt.levels,
            tol: j.tolerances.and_then(|t| t.tol),
            format: out.format,
            plot_data: out.plot_data,
        }
    }

    /// Values set in `flags` replace those in `self`.
    fn overlay(self, flags: Settings) -> Settings {
        Settings {
            potential: flags.potential.or(self.potential),
            params: self.params.overlay(&flags.params),
            x_min: flags.x_min.or(self.x_min),
            x_max: flags.x_max.or(self.x_max),
            n_points: flags.n_points.or(self.n_points),
            order: flags.order.or(self.order),
            method: flags.method.or(self.method),
            k: flags.k.or(self.k),
            pairing: flags.pairing.or(self.pairing),
            theta_override: flags.theta_override.or(self.theta_override),
            m: flags.m.or(self.m),
            n: flags.n.or(self.n),
            c: flags.c.or(self.c),
            refinements: flags.refinements.or(self.refinements),
            levels: flags.levels.or(self.levels),
            tol: flags.tol.or(self.tol),
            format: flags.format.or(self.format),
            plot_data: flags.plot_data.or(self.plot_data),
        }
    }

    /// Names of the command-specific settings that carry a value.
    fn set_options(&self) -> Vec<&'static str> {
        let p = &self.params;
        let potential_set = self.potential.is_some()
            || p.a.is_some()
            || p.b.is_some()
            || p.c.is_some()
            || p.v1.is_some()
            || p.v2.is_some()
            || p.alpha.is_some()
            || p.beta.is_some()
            || p.gamma.is_some()
            || p.zeta.is_some()
            || p.m.is_some()
            || p.kappa.is_some();
        [
            ("potential", potential_set),
            ("x-min", self.x_min.is_some()),
            ("x-max", self.x_max.is_some()),
            ("n-points", self.n_points.is_some()),
            ("order", self.order.is_some()),
            ("method", self.method.is_some()),
            ("k", self.k.is_some()),
            ("pairing", self.pairing.is_some()),
            ("theta-override", self.theta_override.is_some()),
            ("m", self.m.is_some()),
            ("n", self.n.is_some()),
            ("c", self.c.is_some()),
            ("refinements", self.refinements.is_some()),
            ("levels", self.levels.is_some()),
            ("tol", self.tol.is_some()),
            ("plot-data", self.plot_data.is_some()),
        ]
        .into_iter()
        .filter_map(|(name, set)| set.then_some(name))
        .collect()
    }

    fn check_applicable(&self, command: CommandKind) -> Result<(), Failure> {
        let allowed: &[&str] = match command {
            CommandKind::Spectrum => &["potential", "x-min", "x-max", "n-points", "order", "method", "k", "tol", "plot-data"],
            CommandKind::CheckPseudo => &["potential", "x-min", "x-max", "n-points", "theta-override", "tol"],
            CommandKind::Orthogonality => &["potential", "pairing", "k", "tol"],
            CommandKind::LaguerreIntegral => &["m", "n", "c", "tol"],
            CommandKind::Converge => &["potential", "x-min", "x-max", "n-points", "order", "refinements", "levels"],
        };
        match self.set_options().into_iter().find(|o| !allowed.contains(o)) {
            Some(o) => Err(Failure::invalid(format!("option --{o} is not used by {}", command.name()))),
            None => Ok(()),
        }
    }
}

/// Parses `args` (program name first), runs the command, writes its output
/// and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{shown}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{shown}");
                    EXIT_INVALID
                }
            };
        }
    };
    match execute(cli) {
        Ok((report, format)) => match report.write(format, out) {
            Ok(()) => report.exit_code,
            Err(e) => {
                let _ = writeln!(err, "error: cannot write output: {e}");
                EXIT_INVALID
            }
        },
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn execute(cli: Cli) -> Result<(report::Report, Format), Failure> {
    let job = match &cli.job {
        Some(path) => Some(job::load(path).map_err(Failure::invalid)?),
        None => None,
    };
    let (command, flags) = match (cli.command, &job) {
        (Some(cmd), job) => {
            let (kind, opts) = cmd.split();
            if let Some(j) = job {
                if j.command != kind.name() {
                    return Err(Failure::invalid(format!(
                        "job file is for '{}' but the command line asks for '{}'",
                        j.command,
                        kind.name()
                    )));
                }
            }
            (kind, Settings::from_opts(opts))
        }
        (None, Some(j)) => {
            let kind = CommandKind::parse(&j.command)
                .ok_or_else(|| Failure::invalid(format!("job file names unknown command '{}'", j.command)))?;
            (kind, Settings::default())
        }
        (None, None) => return Err(Failure::invalid("no command given; try --help")),
    };
    let settings = match job {
        Some(j) => Settings::from_job(j).overlay(flags),
        None => flags,
    };
    settings.check_applicable(command)?;
    let format = settings.format.unwrap_or(Format::Table);
    let report = commands::dispatch(command, &settings)?;
    Ok((report, format))
}
