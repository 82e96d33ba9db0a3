use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::grid::FdOrder;
use crate::orthogonality::Pairing;

#[derive(Debug, Parser)]
#[command(name = "pseudospec", version, about = "Spectra and shift-operator checks for complex potentials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,
    /// Run a JSON job file (its `command` field picks the subcommand).
    #[arg(long, global = true)]
    pub job: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CommandKind {
    Spectrum,
    CheckPseudo,
    Orthogonality,
    LaguerreIntegral,
    Converge,
}

impl CommandKind {
    pub fn name(&self) -> &'static str {
        match self {
            CommandKind::Spectrum => "spectrum",
            CommandKind::CheckPseudo => "check-pseudo",
            CommandKind::Orthogonality => "orthogonality",
            CommandKind::LaguerreIntegral => "laguerre-integral",
            CommandKind::Converge => "converge",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        <Self as ValueEnum>::from_str(name, false).ok()
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bound-state energies, closed form and/or grid.
    Spectrum(Opts),
    /// Check V(x + iθ) = V*(x) on a grid.
    CheckPseudo(Opts),
    /// Gram matrix of closed-form eigenfunctions under the η, PT or plain pairing.
    Orthogonality(Opts),
    /// The Laguerre overlap integral by quadrature and by Gamma expansion.
    LaguerreIntegral(Opts),
    /// Grid eigenvalue errors under successive halving of the spacing.
    Converge(Opts),
}

impl Command {
    pub fn split(self) -> (CommandKind, Opts) {
        match self {
            Command::Spectrum(o) => (CommandKind::Spectrum, o),
            Command::CheckPseudo(o) => (CommandKind::CheckPseudo, o),
            Command::Orthogonality(o) => (CommandKind::Orthogonality, o),
            Command::LaguerreIntegral(o) => (CommandKind::LaguerreIntegral, o),
            Command::Converge(o) => (CommandKind::Converge, o),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Exact,
    Grid,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderArg {
    Fd2,
    Fd4,
}

impl From<OrderArg> for FdOrder {
    fn from(o: OrderArg) -> Self {
        match o {
            OrderArg::Fd2 => FdOrder::Fd2,
            OrderArg::Fd4 => FdOrder::Fd4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairingArg {
    Eta,
    Pt,
    Plain,
}

impl From<PairingArg> for Pairing {
    fn from(p: PairingArg) -> Self {
        match p {
            PairingArg::Eta => Pairing::EtaBilinear,
            PairingArg::Pt => Pairing::PtBilinear,
            PairingArg::Plain => Pairing::PlainBilinear,
        }
    }
}

/// Complex number given as `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<[f64; 2], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("'{t}': {e}"));
    match parts.as_slice() {
        [re] => Ok([num(re)?, 0.0]),
        [re, im] => Ok([num(re)?, num(im)?]),
        _ => Err(format!("expected 're' or 're,im', got '{s}'")),
    }
}

/// Flags shared by all subcommands. Flags a subcommand does not use are rejected.
#[derive(Debug, Clone, Default, Args)]
pub struct Opts {
    /// Potential name: morse-complex, morse-general, ho-shifted, eckart-shifted, khare-mandal.
    #[arg(long)]
    pub potential: Option<String>,
    #[arg(long = "A", allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long = "B", allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long = "C", allow_hyphen_values = true)]
    pub c_param: Option<f64>,
    /// Complex, as `re,im`.
    #[arg(long = "V1", value_parser = parse_complex, allow_hyphen_values = true)]
    pub v1: Option<[f64; 2]>,
    /// Complex, as `re,im`.
    #[arg(long = "V2", value_parser = parse_complex, allow_hyphen_values = true)]
    pub v2: Option<[f64; 2]>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub zeta: Option<f64>,
    #[arg(long = "M", allow_hyphen_values = true)]
    pub m_param: Option<f64>,
    /// Kinetic coefficient κ in H = κp² + V (1 or 0.5).
    #[arg(long, allow_hyphen_values = true)]
    pub kappa: Option<f64>,

    #[arg(long, allow_hyphen_values = true)]
    pub x_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x_max: Option<f64>,
    #[arg(long)]
    pub n_points: Option<usize>,
    #[arg(long, value_enum)]
    pub order: Option<OrderArg>,

    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    /// Number of states.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum)]
    pub pairing: Option<PairingArg>,
    /// Use this shift angle instead of the catalog one.
    #[arg(long, allow_hyphen_values = true)]
    pub theta_override: Option<f64>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long)]
    pub refinements: Option<u32>,
    /// Number of exact levels tracked by `converge`.
    #[arg(long)]
    pub levels: Option<usize>,

    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write x, Re V, Im V, Re Ψ, Im Ψ columns to this CSV file.
    #[arg(long)]
    pub plot_data: Option<PathBuf>,
}
