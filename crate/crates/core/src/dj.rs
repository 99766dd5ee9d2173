//! Two-qubit Deutsch-Jozsa on the four-level system.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::catalog::{b_gate_id, b_operator, gate, oracle, BoolFn2, GateId};
use crate::compiler::compile;
use crate::density::{evolve, fid_amplitude, prepare_pseudo_pure, DensityMatrix, PseudoPure};
use crate::error::{Error, Result};
use crate::matrix::{Ket4, Matrix4, LEVELS};
use crate::pulse::{sequence_operator, Angle, PulseSequence, PulseSpec, Transition};
use crate::system::SystemSpec;

/// Share of the weight the winning level must hold.
pub const CLASSIFICATION_THRESHOLD: f64 = 0.99;

/// Level `|0,1⟩` the algorithm starts from.
pub const INPUT_LEVEL: usize = 1;

/// Level `|1,1⟩` that signals a balanced function.
pub const BALANCED_LEVEL: usize = 3;

pub const DEFAULT_BETA: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DjMode {
    /// `₁h_R`, `₁h_S`, `D_f`, `₂H` as separate gates.
    GateCircuit,
    /// The conjugated oracle `B_f` as one matrix.
    SingleOperator,
    /// The pulse realization of `B_f`.
    CompiledPulses,
}

impl DjMode {
    pub const ALL: [DjMode; 3] = [DjMode::GateCircuit, DjMode::SingleOperator, DjMode::CompiledPulses];

    pub fn name(&self) -> &'static str {
        match self {
            DjMode::GateCircuit => "gate",
            DjMode::SingleOperator => "single",
            DjMode::CompiledPulses => "pulses",
        }
    }
}

impl fmt::Display for DjMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DjMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        DjMode::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("invalid mode '{s}', expected gate, single or pulses"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StateModel {
    Pure,
    PseudoPure { beta: f64 },
}

impl StateModel {
    pub fn pseudo_pure() -> Self {
        StateModel::PseudoPure { beta: DEFAULT_BETA }
    }

    pub fn name(&self) -> &'static str {
        match self {
            StateModel::Pure => "pure",
            StateModel::PseudoPure { .. } => "pseudo-pure",
        }
    }
}

impl fmt::Display for StateModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    Constant,
    Balanced,
}

impl Classification {
    pub fn of(f: BoolFn2) -> Self {
        if f.is_balanced() {
            Classification::Balanced
        } else {
            Classification::Constant
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Constant => "constant",
            Classification::Balanced => "balanced",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FinalState {
    Pure(Ket4),
    Mixed(DensityMatrix),
}

/// One executed stage of a run.
#[derive(Clone, Debug, PartialEq)]
pub struct DjStep {
    pub label: String,
    /// Whether this stage applies the oracle (`D_f` or `B_f`).
    pub oracle: bool,
}

impl DjStep {
    fn new(label: impl Into<String>, oracle: bool) -> Self {
        Self { label: label.into(), oracle }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DjResult {
    pub function: BoolFn2,
    pub mode: DjMode,
    pub model: StateModel,
    pub classification: Classification,
    pub final_state: FinalState,
    /// Phase of the winning amplitude; pure model only.
    pub output_phase: Option<Complex64>,
    /// FID amplitude on the `(1,2)` transition of the final state.
    pub fid: f64,
    /// Normalized weight per level: populations for the pure model,
    /// deviation populations for the pseudo-pure model.
    pub weights: [f64; LEVELS],
    /// Deviation scale of the prepared state; pseudo-pure model only.
    pub alpha: Option<f64>,
    pub steps: Vec<DjStep>,
}

impl DjResult {
    pub fn oracle_calls(&self) -> usize {
        self.steps.iter().filter(|s| s.oracle).count()
    }
}

/// One stage: either a plain unitary or a pulse sequence.
enum Stage {
    Unitary(Box<Matrix4>),
    Pulses(PulseSequence),
}

fn stages(f: BoolFn2, mode: DjMode) -> Result<Vec<(DjStep, Stage)>> {
    Ok(match mode {
        DjMode::GateCircuit => {
            let (d_id, d) = oracle(f);
            vec![
                (DjStep::new("h1R", false), Stage::Unitary(Box::new(gate(GateId::h1R)))),
                (DjStep::new("h1S", false), Stage::Unitary(Box::new(gate(GateId::h1S)))),
                (DjStep::new(d_id.name(), true), Stage::Unitary(Box::new(d))),
                (DjStep::new("H2", false), Stage::Unitary(Box::new(gate(GateId::H2)))),
            ]
        }
        DjMode::SingleOperator => {
            vec![(DjStep::new(b_gate_id(f).name(), true), Stage::Unitary(Box::new(b_operator(f))))]
        }
        DjMode::CompiledPulses => {
            let id = b_gate_id(f);
            vec![(DjStep::new(format!("{id} pulses"), true), Stage::Pulses(compile(id)?))]
        }
    })
}

/// State after `₁h_R`, `₁h_S` and `D_f`, before the final Hadamard.
pub fn intermediate_state(f: BoolFn2) -> Ket4 {
    let start = Ket4::basis(INPUT_LEVEL).expect("valid level");
    let u = oracle(f).1 * gate(GateId::h1S) * gate(GateId::h1R);
    u.apply(&start)
}

/// Pulse moving the deviation from `level` to the input level.
fn relabel_pulse(level: usize) -> Option<PulseSpec> {
    if level == INPUT_LEVEL {
        return None;
    }
    let t = Transition::new(level.min(INPUT_LEVEL), level.max(INPUT_LEVEL)).expect("distinct levels");
    Some(PulseSpec { axis: crate::pulse::Axis::X, transition: t, angle: Angle::pi(1, 1), phase: Angle::ZERO })
}

fn classify(weights: [f64; LEVELS]) -> Result<Classification> {
    let (winner, w) = weights
        .iter()
        .copied()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("four levels");
    match winner {
        INPUT_LEVEL if w >= CLASSIFICATION_THRESHOLD => Ok(Classification::Constant),
        BALANCED_LEVEL if w >= CLASSIFICATION_THRESHOLD => Ok(Classification::Balanced),
        _ => Err(Error::AmbiguousClassification { weights }),
    }
}

fn normalized(raw: [f64; LEVELS]) -> [f64; LEVELS] {
    let total: f64 = raw.iter().sum();
    if total > 0.0 {
        raw.map(|x| x / total)
    } else {
        raw
    }
}

fn readout() -> Transition {
    Transition::new(1, 2).expect("valid transition")
}

pub fn run_dj(f: BoolFn2, mode: DjMode, model: StateModel, sys: &SystemSpec) -> Result<DjResult> {
    let plan = stages(f, mode)?;
    match model {
        StateModel::Pure => run_pure(f, mode, plan, sys),
        StateModel::PseudoPure { beta } => run_mixed(f, mode, beta, plan, sys),
    }
}

fn run_pure(f: BoolFn2, mode: DjMode, plan: Vec<(DjStep, Stage)>, sys: &SystemSpec) -> Result<DjResult> {
    let mut ket = Ket4::basis(INPUT_LEVEL)?;
    let mut steps = Vec::with_capacity(plan.len());
    for (step, stage) in plan {
        let u = match stage {
            Stage::Unitary(u) => *u,
            Stage::Pulses(seq) => sequence_operator(&seq, sys)?,
        };
        ket = u.apply(&ket);
        steps.push(step);
    }
    let weights = normalized(ket.populations());
    let classification = classify(weights)?;
    let winner = match classification {
        Classification::Constant => INPUT_LEVEL,
        Classification::Balanced => BALANCED_LEVEL,
    };
    let amp = ket.amplitudes()[winner];
    let rho = DensityMatrix::from_ket(&ket)?;
    Ok(DjResult {
        function: f,
        mode,
        model: StateModel::Pure,
        classification,
        final_state: FinalState::Pure(ket),
        output_phase: Some(amp / amp.norm()),
        fid: fid_amplitude(&rho, readout()),
        weights,
        alpha: None,
        steps,
    })
}

fn run_mixed(
    f: BoolFn2,
    mode: DjMode,
    beta: f64,
    plan: Vec<(DjStep, Stage)>,
    sys: &SystemSpec,
) -> Result<DjResult> {
    let prepared: PseudoPure = prepare_pseudo_pure(sys, beta)?;
    let mut steps = vec![DjStep::new("prepare", false)];
    let mut rho = prepared.state;
    if let Some(p) = relabel_pulse(prepared.distinguished_level) {
        rho = evolve(&rho, &PulseSequence::from_pulses([p]), sys)?;
        steps.push(DjStep::new(format!("relabel {p}"), false));
    }
    for (step, stage) in plan {
        rho = match stage {
            Stage::Unitary(u) => rho.conjugate(&u)?,
            Stage::Pulses(seq) => evolve(&rho, &seq, sys)?,
        };
        steps.push(step);
    }
    let deviation = prepared.deviation_of(&rho);
    let weights = normalized(deviation.diagonal().map(|z| z.re.abs()));
    let classification = classify(weights)?;
    Ok(DjResult {
        function: f,
        mode,
        model: StateModel::PseudoPure { beta },
        classification,
        final_state: FinalState::Mixed(rho),
        output_phase: None,
        fid: fid_amplitude(&rho, readout()),
        weights,
        alpha: Some(prepared.alpha),
        steps,
    })
}
