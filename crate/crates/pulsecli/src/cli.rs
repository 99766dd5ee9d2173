//! Argument grammar.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use vspin::{BoolFn2, ChainStyle, DjMode, GateId, VERIFY_TOL};

#[derive(Parser, Debug, Clone)]
#[command(name = "pulsecli", version, about = "Compile, verify and simulate selective-pulse programs on a four-level spin")]
pub struct Cli {
    /// Print a JSON document instead of a table.
    #[arg(long, global = true)]
    pub json: bool,

    /// key=value file with energies, omega0, omegaq, eta and beta.
    #[arg(long, global = true, value_name = "FILE")]
    pub system: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// List every gate with its matrix, factorization and realization.
    Catalog,

    /// Lower a gate to a pulse program and verify it.
    Compile {
        gate: GateId,

        /// Rewrite so that no pulse spans more than this |Δm|.
        #[arg(long = "max-dm", value_parser = clap::value_parser!(u8).range(1..=2))]
        max_dm: Option<u8>,

        /// Conjugating pulses used when rewriting down to |Δm| = 1.
        #[arg(long, value_enum, default_value_t = Chain::X)]
        chain: Chain,

        /// Also write the program to this file.
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },

    /// Check a pulse program against a gate, up to global phase.
    Verify {
        file: PathBuf,

        #[arg(long)]
        target: GateId,

        /// Largest accepted phase distance.
        #[arg(long, default_value_t = VERIFY_TOL)]
        tol: f64,
    },

    /// Evolve a density matrix through a pulse program.
    Simulate {
        file: PathBuf,

        /// basis:<k>, pseudo-pure or thermal.
        #[arg(long, default_value = "basis:0")]
        state: InitialState,
    },

    /// Run Deutsch-Jozsa for one oracle.
    RunDj {
        #[arg(long)]
        oracle: BoolFn2,

        /// gate, single or pulses.
        #[arg(long)]
        mode: DjMode,

        #[arg(long = "state-model", value_enum, default_value_t = Model::Pure)]
        state_model: Model,
    },

    /// Transition-selection cost of a pulse program.
    Cost {
        file: PathBuf,

        #[arg(long)]
        omega0: Option<f64>,

        #[arg(long)]
        omegaq: Option<f64>,

        /// Use the (ω₀/(ω_q·η)) weighting.
        #[arg(long)]
        eta: Option<f64>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chain {
    X,
    Y,
}

impl From<Chain> for ChainStyle {
    fn from(c: Chain) -> Self {
        match c {
            Chain::X => ChainStyle::X,
            Chain::Y => ChainStyle::Y,
        }
    }
}

impl Chain {
    pub fn name(self) -> &'static str {
        match self {
            Chain::X => "x",
            Chain::Y => "y",
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Pure,
    PseudoPure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialState {
    Basis(usize),
    PseudoPure,
    Thermal,
}

impl InitialState {
    pub fn name(&self) -> String {
        match self {
            InitialState::Basis(k) => format!("basis:{k}"),
            InitialState::PseudoPure => "pseudo-pure".into(),
            InitialState::Thermal => "thermal".into(),
        }
    }
}

impl FromStr for InitialState {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let lower = s.to_ascii_lowercase();
        match lower.as_str() {
            "pseudo-pure" => Ok(InitialState::PseudoPure),
            "thermal" => Ok(InitialState::Thermal),
            _ => match lower.strip_prefix("basis:").map(str::parse::<usize>) {
                Some(Ok(k)) if k < 4 => Ok(InitialState::Basis(k)),
                _ => Err(format!("invalid state '{s}', expected basis:0..3, pseudo-pure or thermal")),
            },
        }
    }
}
