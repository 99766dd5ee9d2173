//! Command implementations. Each returns a [`Report`] carrying both the JSON
//! document and the text table; printing is left to the caller.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use vspin::catalog::{b_operator_report, catalog};
use vspin::dj::FinalState;
use vspin::{
    compile_report, cost, evolve, fid_amplitude, prepare_pseudo_pure, printed_prefactor, pulse_target,
    rewrite_delta_m_with, sequence_operator, thermal_state, verify_on, virtual_factorization, BoolFn2,
    CompilationResult, DeltaMLimit, DensityMatrix, DjMode, GateId, PulseSequence, SequenceEvent, StateModel,
    SystemSpec, Transition, VERIFY_TOL,
};

use crate::cli::{Chain, Cli, Command, InitialState, Model};
use crate::config::{ConfigError, SystemConfig};
use crate::program::{self, EventLine, ParseError};
use crate::report::{complex, fmt_matrix, fmt_opt_phase, fmt_phase, matrix, phase_over_pi, JsonComplex, JsonMatrix};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{path}: {source}")]
    Config { path: PathBuf, source: ConfigError },
    #[error("{0}")]
    Core(#[from] vspin::Error),
}

impl CliError {
    /// 1 for failed checks, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(
                vspin::Error::VerificationFailed { .. }
                | vspin::Error::PreparationFailed { .. }
                | vspin::Error::AmbiguousClassification { .. },
            ) => 1,
            _ => 2,
        }
    }
}

/// Output of one command.
#[derive(Debug, Clone)]
pub struct Report {
    pub json: serde_json::Value,
    pub text: String,
    /// Set when the command ran but its check failed (exit 1).
    pub failure: Option<String>,
}

impl Report {
    fn new(doc: &impl Serialize, text: String) -> Self {
        Self { json: serde_json::to_value(doc).expect("report serializes"), text, failure: None }
    }

    pub fn exit_code(&self) -> i32 {
        if self.failure.is_some() {
            1
        } else {
            0
        }
    }

    /// What goes to stdout.
    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(&self.json).expect("report serializes");
            s.push('\n');
            s
        } else {
            self.text.clone()
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub fn load_config(path: Option<&Path>) -> Result<SystemConfig, CliError> {
    match path {
        None => Ok(SystemConfig::default()),
        Some(p) => SystemConfig::parse(&read(p)?).map_err(|source| CliError::Config { path: p.to_path_buf(), source }),
    }
}

pub fn load_program(path: &Path) -> Result<PulseSequence, CliError> {
    program::parse(&read(path)?).map_err(|source| CliError::Parse { path: path.to_path_buf(), source })
}

fn event_lines(seq: &PulseSequence) -> Vec<String> {
    seq.events().iter().map(|e| EventLine(e).to_string()).collect()
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let cfg = load_config(cli.system.as_deref())?;
    let sys = cfg.system()?;
    match &cli.command {
        Command::Catalog => Ok(catalog_cmd()),
        Command::Compile { gate, max_dm, chain, output } => compile_cmd(*gate, *max_dm, *chain, output.as_deref(), &sys),
        Command::Verify { file, target, tol } => verify_cmd(file, *target, *tol, &sys),
        Command::Simulate { file, state } => simulate_cmd(file, *state, &cfg, &sys),
        Command::RunDj { oracle, mode, state_model } => run_dj_cmd(*oracle, *mode, *state_model, &cfg, &sys),
        Command::Cost { file, omega0, omegaq, eta } => cost_cmd(file, *omega0, *omegaq, *eta, &sys),
    }
}

#[derive(Serialize)]
struct CatalogGate {
    name: &'static str,
    description: &'static str,
    matrix: JsonMatrix,
    factorization: Option<String>,
    program: Option<Vec<String>>,
    distance: Option<f64>,
    phase: Option<JsonComplex>,
    printed_prefactor: Option<JsonComplex>,
}

#[derive(Serialize)]
struct CatalogB {
    oracle: String,
    computed: JsonMatrix,
    printed: JsonMatrix,
    max_difference: f64,
    stay_amplitude: f64,
    flip_amplitude: f64,
}

#[derive(Serialize)]
struct CatalogDoc {
    command: &'static str,
    gates: Vec<CatalogGate>,
    b_operators: Vec<CatalogB>,
}

pub fn catalog_cmd() -> Report {
    let mut text = format!("{:<8} {:>6} {:>10} {:<22} {}\n", "gate", "pulses", "distance", "phase", "description");
    let mut gates = Vec::new();
    for (id, m) in catalog() {
        let compiled = compile_report(id).ok();
        let _ = writeln!(
            text,
            "{:<8} {:>6} {:>10} {:<22} {}",
            id.name(),
            compiled.as_ref().map_or("-".into(), |r| r.sequence.len().to_string()),
            compiled.as_ref().map_or("-".into(), |r| format!("{:.2e}", r.distance)),
            fmt_opt_phase(compiled.as_ref().and_then(|r| r.phase)),
            id.description(),
        );
        gates.push(CatalogGate {
            name: id.name(),
            description: id.description(),
            matrix: matrix(&m),
            factorization: virtual_factorization(id).ok().map(|f| f.to_string()),
            program: compiled.as_ref().map(|r| event_lines(&r.sequence)),
            distance: compiled.as_ref().map(|r| r.distance),
            phase: compiled.as_ref().and_then(|r| r.phase).map(complex),
            printed_prefactor: printed_prefactor(id).map(complex),
        });
    }
    let mut b_operators = Vec::new();
    text.push_str("\noracle  max|computed - printed|  stay   flip\n");
    for f in BoolFn2::ALL {
        let r = b_operator_report(f);
        let _ = writeln!(text, "{:<7} {:>22.3e}  {:.3}  {:.3}", f.label(), r.max_difference, r.stay_amplitude, r.flip_amplitude);
        b_operators.push(CatalogB {
            oracle: f.label(),
            computed: matrix(&r.computed),
            printed: matrix(&r.printed),
            max_difference: r.max_difference,
            stay_amplitude: r.stay_amplitude,
            flip_amplitude: r.flip_amplitude,
        });
    }
    Report::new(&CatalogDoc { command: "catalog", gates, b_operators }, text)
}

#[derive(Serialize)]
struct CompileDoc {
    command: &'static str,
    gate: &'static str,
    max_delta_m: Option<u8>,
    chain: &'static str,
    program: Vec<String>,
    pulses: usize,
    distance: f64,
    tolerance: f64,
    verified: bool,
    phase: Option<JsonComplex>,
    phase_over_pi: Option<f64>,
    printed_prefactor: Option<JsonComplex>,
    cost: Option<f64>,
    operator: JsonMatrix,
    target: JsonMatrix,
}

fn compile_cmd(
    id: GateId,
    max_dm: Option<u8>,
    chain: Chain,
    output: Option<&Path>,
    sys: &SystemSpec,
) -> Result<Report, CliError> {
    let base = compile_report(id)?;
    let result = match max_dm {
        None => base,
        Some(k) => {
            let limit = DeltaMLimit::try_from(k as usize)?;
            let seq = rewrite_delta_m_with(&base.sequence, limit, chain.into());
            let mut r = verify_on(&seq, &pulse_target(id), VERIFY_TOL, sys)?;
            r.target = Some(id);
            r
        }
    };
    let target = pulse_target(id);
    let lines = event_lines(&result.sequence);
    if let Some(path) = output {
        std::fs::write(path, program::serialize(&result.sequence))
            .map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    }
    let cost = cost(&result.sequence, sys, false).ok();
    let mut text = format!("gate      {id}\n");
    if let Some(k) = max_dm {
        let _ = writeln!(text, "max |dm|  {k} ({}-chain)", chain.name());
    }
    let _ = writeln!(text, "pulses    {}", result.sequence.len());
    for line in &lines {
        let _ = writeln!(text, "  {line}");
    }
    let _ = writeln!(text, "distance  {:.3e}", result.distance);
    let _ = writeln!(text, "phase     {}", fmt_opt_phase(result.phase));
    let _ = writeln!(text, "printed   {}", printed_prefactor(id).map_or("-".into(), fmt_phase));
    let _ = writeln!(text, "cost      {}", cost.map_or("-".into(), |c| format!("{c:.6}")));
    text.push_str("operator\n");
    text.push_str(&fmt_matrix(&result.operator, "  "));
    if !result.succeeded() {
        text.push_str("difference (target - operator)\n");
        text.push_str(&fmt_matrix(&result.difference(&target), "  "));
    }
    let doc = CompileDoc {
        command: "compile",
        gate: id.name(),
        max_delta_m: max_dm,
        chain: chain.name(),
        program: lines,
        pulses: result.sequence.len(),
        distance: result.distance,
        tolerance: result.tolerance,
        verified: result.succeeded(),
        phase: result.phase.map(complex),
        phase_over_pi: result.phase.map(phase_over_pi),
        printed_prefactor: printed_prefactor(id).map(complex),
        cost,
        operator: matrix(&result.operator),
        target: matrix(&target),
    };
    let mut report = Report::new(&doc, text);
    if !result.succeeded() {
        report.failure = Some(failure_message(&result));
    }
    Ok(report)
}

fn failure_message(r: &CompilationResult) -> String {
    format!("verification failed: distance {:.6e} > {:.1e}", r.distance, r.tolerance)
}

#[derive(Serialize)]
struct VerifyDoc {
    command: &'static str,
    file: String,
    target: &'static str,
    events: usize,
    distance: f64,
    tolerance: f64,
    verified: bool,
    phase: Option<JsonComplex>,
    phase_over_pi: Option<f64>,
    operator: JsonMatrix,
    target_matrix: JsonMatrix,
    difference: JsonMatrix,
}

fn verify_cmd(file: &Path, id: GateId, tol: f64, sys: &SystemSpec) -> Result<Report, CliError> {
    if tol.is_nan() || tol < 0.0 {
        return Err(CliError::Usage(format!("--tol must be non-negative, got {tol}")));
    }
    let seq = load_program(file)?;
    let target = pulse_target(id);
    let r = verify_on(&seq, &target, tol, sys)?;
    let diff = r.difference(&target);
    let mut text = format!("file      {}\ntarget    {id}\nevents    {}\n", file.display(), seq.len());
    let _ = writeln!(text, "distance  {:.3e} (tolerance {:.1e})", r.distance, tol);
    let _ = writeln!(text, "phase     {}", fmt_opt_phase(r.phase));
    let _ = writeln!(text, "result    {}", if r.succeeded() { "verified" } else { "FAILED" });
    if !r.succeeded() {
        text.push_str("difference (target - operator)\n");
        text.push_str(&fmt_matrix(&diff, "  "));
    }
    let doc = VerifyDoc {
        command: "verify",
        file: file.display().to_string(),
        target: id.name(),
        events: seq.len(),
        distance: r.distance,
        tolerance: tol,
        verified: r.succeeded(),
        phase: r.phase.map(complex),
        phase_over_pi: r.phase.map(phase_over_pi),
        operator: matrix(&r.operator),
        target_matrix: matrix(&target),
        difference: matrix(&diff),
    };
    let mut report = Report::new(&doc, text);
    if !r.succeeded() {
        report.failure = Some(failure_message(&r));
    }
    Ok(report)
}

#[derive(Serialize)]
struct SimulateDoc {
    command: &'static str,
    file: String,
    state: String,
    events: usize,
    initial: JsonMatrix,
    final_state: JsonMatrix,
    populations: [f64; 4],
    eigenvalues: [f64; 4],
    max_coherence: f64,
    fid_12: f64,
    distinguished_level: Option<usize>,
    alpha: Option<f64>,
    operator: Option<JsonMatrix>,
}

fn simulate_cmd(file: &Path, state: InitialState, cfg: &SystemConfig, sys: &SystemSpec) -> Result<Report, CliError> {
    let seq = load_program(file)?;
    let (initial, prepared) = match state {
        InitialState::Basis(k) => (DensityMatrix::basis(k)?, None),
        InitialState::PseudoPure => {
            let pp = prepare_pseudo_pure(sys, cfg.beta)?;
            (pp.state, Some(pp))
        }
        InitialState::Thermal => (thermal_state(sys, cfg.beta, false)?, None),
    };
    let rho = evolve(&initial, &seq, sys)?;
    let operator = if seq.has_gradient() { None } else { Some(sequence_operator(&seq, sys)?) };
    let fid = fid_amplitude(&rho, Transition::new(1, 2)?);
    let populations = rho.populations();
    let mut text = format!("file         {}\nstate        {}\nevents       {}\n", file.display(), state.name(), seq.len());
    let _ = writeln!(text, "populations  {}", populations.map(|p| format!("{p:.9}")).join("  "));
    let _ = writeln!(text, "coherence    {:.3e}", rho.max_off_diagonal());
    let _ = writeln!(text, "fid(1,2)     {fid:.6e}");
    if let Some(pp) = &prepared {
        let _ = writeln!(text, "pseudo-pure  level {} alpha {:.6e}", pp.distinguished_level, pp.alpha);
    }
    text.push_str("final state\n");
    text.push_str(&fmt_matrix(rho.matrix(), "  "));
    let doc = SimulateDoc {
        command: "simulate",
        file: file.display().to_string(),
        state: state.name(),
        events: seq.len(),
        initial: matrix(initial.matrix()),
        final_state: matrix(rho.matrix()),
        populations,
        eigenvalues: rho.eigenvalues(),
        max_coherence: rho.max_off_diagonal(),
        fid_12: fid,
        distinguished_level: prepared.as_ref().map(|p| p.distinguished_level),
        alpha: prepared.as_ref().map(|p| p.alpha),
        operator: operator.as_ref().map(matrix),
    };
    Ok(Report::new(&doc, text))
}

#[derive(Serialize)]
struct DjDoc {
    command: &'static str,
    oracle: String,
    mode: &'static str,
    state_model: &'static str,
    classification: String,
    expected: String,
    correct: bool,
    oracle_calls: usize,
    steps: Vec<String>,
    weights: [f64; 4],
    fid_12: f64,
    output_phase: Option<JsonComplex>,
    output_phase_over_pi: Option<f64>,
    alpha: Option<f64>,
    beta: Option<f64>,
    final_state: JsonMatrix,
}

fn run_dj_cmd(f: BoolFn2, mode: DjMode, model: Model, cfg: &SystemConfig, sys: &SystemSpec) -> Result<Report, CliError> {
    let model = match model {
        Model::Pure => StateModel::Pure,
        Model::PseudoPure => StateModel::PseudoPure { beta: cfg.beta },
    };
    let r = vspin::run_dj(f, mode, model, sys)?;
    let expected = vspin::Classification::of(f);
    let rho = match &r.final_state {
        FinalState::Pure(k) => k.outer(),
        FinalState::Mixed(d) => *d.matrix(),
    };
    let steps: Vec<String> = r.steps.iter().map(|s| s.label.clone()).collect();
    let mut text = format!("{}\n", r.classification);
    let _ = writeln!(text, "oracle       {f} ({mode}, {})", r.model);
    let _ = writeln!(text, "expected     {expected}");
    let _ = writeln!(text, "steps        {}", steps.join(" -> "));
    let _ = writeln!(text, "weights      {}", r.weights.map(|w| format!("{w:.6}")).join("  "));
    let _ = writeln!(text, "fid(1,2)     {:.6e}", r.fid);
    let _ = writeln!(text, "phase        {}", fmt_opt_phase(r.output_phase));
    if let Some(a) = r.alpha {
        let _ = writeln!(text, "alpha        {a:.6e}");
    }
    let doc = DjDoc {
        command: "run-dj",
        oracle: f.label(),
        mode: mode.name(),
        state_model: r.model.name(),
        classification: r.classification.to_string(),
        expected: expected.to_string(),
        correct: r.classification == expected,
        oracle_calls: r.oracle_calls(),
        steps,
        weights: r.weights,
        fid_12: r.fid,
        output_phase: r.output_phase.map(complex),
        output_phase_over_pi: r.output_phase.map(phase_over_pi),
        alpha: r.alpha,
        beta: match r.model {
            StateModel::PseudoPure { beta } => Some(beta),
            StateModel::Pure => None,
        },
        final_state: matrix(&rho),
    };
    let mut report = Report::new(&doc, text);
    if r.classification != expected {
        report.failure = Some(format!("classified {f} as {}, expected {expected}", r.classification));
    }
    Ok(report)
}

#[derive(Serialize)]
struct CostLine {
    event: String,
    delta_m: usize,
    angle: f64,
    cost: f64,
}

#[derive(Serialize)]
struct CostDoc {
    command: &'static str,
    file: String,
    omega0: f64,
    omegaq: f64,
    eta: Option<f64>,
    total: f64,
    pulses: Vec<CostLine>,
}

fn cost_cmd(
    file: &Path,
    omega0: Option<f64>,
    omegaq: Option<f64>,
    eta: Option<f64>,
    sys: &SystemSpec,
) -> Result<Report, CliError> {
    let seq = load_program(file)?;
    let sys = sys.with_frequencies(
        omega0.unwrap_or(sys.omega0()),
        omegaq.unwrap_or(sys.omega_q()),
        eta.unwrap_or(sys.eta()),
    )?;
    let use_eta = eta.is_some();
    let total = cost(&seq, &sys, use_eta)?;
    let mut pulses = Vec::new();
    let mut text = format!("{:<40} {:>3} {:>14}\n", "pulse", "dm", "cost");
    for event in seq.events() {
        if let SequenceEvent::Pulse(p) = event {
            let c = cost(&PulseSequence::from_pulses([*p]), &sys, use_eta)?;
            let line = EventLine(event).to_string();
            let _ = writeln!(text, "{line:<40} {:>3} {c:>14.6}", p.transition.delta_m());
            pulses.push(CostLine { event: line, delta_m: p.transition.delta_m(), angle: p.angle.abs(), cost: c });
        }
    }
    let _ = writeln!(text, "{:<40} {:>3} {total:>14.6}", "total", "");
    let doc = CostDoc {
        command: "cost",
        file: file.display().to_string(),
        omega0: sys.omega0(),
        omegaq: sys.omega_q(),
        eta: use_eta.then(|| sys.eta()),
        total,
        pulses,
    };
    Ok(Report::new(&doc, text))
}
