//! Mixed-state evolution: thermal equilibrium, gradient crusher,
//! pseudo-pure preparation and FID readout.

use nalgebra::Matrix4 as NaMatrix4;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{Ket4, Matrix4, IDENTITY_TOL, LEVELS};
use crate::pulse::{event_operator, propagator, Angle, PulseSequence, PulseSpec, SequenceEvent, Transition};
use crate::system::SystemSpec;

/// Lowest eigenvalue accepted for a density matrix.
pub const EIGEN_FLOOR: f64 = -1e-10;

/// Tolerance for "equal populations" in the pseudo-pure check.
pub const POPULATION_TOL: f64 = 1e-10;

/// Hermitian, unit-trace, positive semidefinite 4×4 state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DensityMatrix {
    rho: Matrix4,
}

impl DensityMatrix {
    pub fn new(rho: Matrix4) -> Result<Self> {
        if !rho.is_finite() {
            return Err(Error::NonFinite);
        }
        let herm = rho.hermiticity_defect();
        if herm > IDENTITY_TOL {
            return Err(Error::InvalidDensity(format!("not Hermitian (defect {herm:.3e})")));
        }
        let trace = rho.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > IDENTITY_TOL {
            return Err(Error::InvalidDensity(format!("trace is {trace}, expected 1")));
        }
        let state = Self { rho };
        let min = state.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < EIGEN_FLOOR {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(state)
    }

    /// `E/4`.
    pub fn maximally_mixed() -> Self {
        Self { rho: Matrix4::identity() * 0.25 }
    }

    pub fn from_ket(ket: &Ket4) -> Result<Self> {
        if !ket.is_normalized(IDENTITY_TOL) {
            return Err(Error::InvalidDensity(format!("state norm is {}", ket.norm())));
        }
        Ok(Self { rho: ket.outer() })
    }

    pub fn basis(level: usize) -> Result<Self> {
        Self::from_ket(&Ket4::basis(level)?)
    }

    /// Diagonal state with the given populations.
    pub fn from_populations(p: [f64; LEVELS]) -> Result<Self> {
        Self::new(Matrix4::diag(p.map(|x| Complex64::new(x, 0.0))))
    }

    pub fn matrix(&self) -> &Matrix4 {
        &self.rho
    }

    pub fn populations(&self) -> [f64; LEVELS] {
        self.rho.diagonal().map(|z| z.re)
    }

    /// `ρ − E/4`.
    pub fn deviation(&self) -> Matrix4 {
        self.rho - Matrix4::identity() * 0.25
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> [f64; LEVELS] {
        let m = NaMatrix4::from_fn(|r, c| self.rho[(r, c)]);
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        [ev[0], ev[1], ev[2], ev[3]]
    }

    pub fn max_off_diagonal(&self) -> f64 {
        let mut max = 0.0f64;
        for r in 0..LEVELS {
            for c in 0..LEVELS {
                if r != c {
                    max = max.max(self.rho[(r, c)].norm());
                }
            }
        }
        max
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.max_off_diagonal() <= tol
    }

    /// `U ρ U†` for a unitary `U`.
    pub fn conjugate(&self, u: &Matrix4) -> Result<Self> {
        if !u.is_unitary(crate::matrix::UNITARY_INPUT_TOL) {
            return Err(Error::NotUnitary { defect: u.unitarity_defect() });
        }
        Ok(Self { rho: self.rho.conjugate_by(u) })
    }

    /// Population `ρ_mm` of one level.
    pub fn population(&self, level: usize) -> f64 {
        self.rho[(level, level)].re
    }
}

/// Equilibrium state `diag(e^{−βε})/Z`, or its first-order form
/// `(E − β·diag(ε − ε̄))/4`.
pub fn thermal_state(sys: &SystemSpec, beta: f64, linearize: bool) -> Result<DensityMatrix> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::Domain(format!("inverse temperature must be finite and non-negative, got {beta}")));
    }
    let eps = sys.energies();
    if linearize {
        let mean = eps.iter().sum::<f64>() / LEVELS as f64;
        return DensityMatrix::from_populations(eps.map(|e| (1.0 - beta * (e - mean)) / 4.0));
    }
    let weights = eps.map(|e| (-beta * e).exp());
    let z: f64 = weights.iter().sum();
    if !z.is_finite() || weights.iter().any(|w| !w.is_finite() || *w == 0.0) {
        return Err(Error::ThermalOverflow);
    }
    DensityMatrix::from_populations(weights.map(|w| w / z))
}

/// Gradient crusher: keeps the diagonal, drops every coherence.
pub fn crush(rho: &DensityMatrix) -> DensityMatrix {
    DensityMatrix { rho: rho.rho.map_off_diagonal(|_| Complex64::new(0.0, 0.0)) }
}

/// Applies the events in time order.
pub fn evolve(rho: &DensityMatrix, seq: &PulseSequence, sys: &SystemSpec) -> Result<DensityMatrix> {
    seq.events().iter().try_fold(*rho, |state, event| match event {
        SequenceEvent::Gradient => Ok(crush(&state)),
        e => Ok(DensityMatrix { rho: state.rho.conjugate_by(&event_operator(e, sys)?) }),
    })
}

/// Where the crusher sits in the preparation sequence, in time order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GradientPlacement {
    /// `G, X₀₂(π/2), X₂₃(π)`.
    First,
    /// `X₀₂(π/2), X₂₃(π), G`.
    #[default]
    Last,
}

pub fn preparation_sequence(placement: GradientPlacement) -> PulseSequence {
    let x02 = PulseSpec::x(0, 2, Angle::pi(1, 2)).expect("valid transition");
    let x23 = PulseSpec::x(2, 3, Angle::pi(1, 1)).expect("valid transition");
    let mut seq = PulseSequence::new();
    if placement == GradientPlacement::First {
        seq.push(SequenceEvent::Gradient);
    }
    seq.push(x02);
    seq.push(x23);
    if placement == GradientPlacement::Last {
        seq.push(SequenceEvent::Gradient);
    }
    seq
}

/// Diagonal state with three equal populations and one distinguished level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PseudoPure {
    pub state: DensityMatrix,
    pub distinguished_level: usize,
    /// Distinguished population minus the common one.
    pub alpha: f64,
    /// Population shared by the other three levels.
    pub common: f64,
}

impl PseudoPure {
    /// `ρ − common·E`: a single nonzero entry `α` at the distinguished level
    /// before any evolution.
    pub fn deviation_of(&self, rho: &DensityMatrix) -> Matrix4 {
        *rho.matrix() - Matrix4::identity() * self.common
    }
}

/// Checks that `rho` is diagonal with exactly one population apart from the
/// other three.
pub fn classify_pseudo_pure(rho: &DensityMatrix) -> Result<PseudoPure> {
    let p = rho.populations();
    let fail = || Error::PreparationFailed { populations: p };
    if !rho.is_diagonal(IDENTITY_TOL) {
        return Err(fail());
    }
    for d in 0..LEVELS {
        let others: Vec<f64> = (0..LEVELS).filter(|&k| k != d).map(|k| p[k]).collect();
        let equal = others.iter().all(|x| (x - others[0]).abs() <= POPULATION_TOL);
        if equal && (p[d] - others[0]).abs() > POPULATION_TOL {
            let common = others.iter().sum::<f64>() / 3.0;
            return Ok(PseudoPure { state: *rho, distinguished_level: d, alpha: p[d] - common, common });
        }
    }
    Err(fail())
}

/// Thermal state followed by the preparation sequence.
pub fn prepare_pseudo_pure_with(
    sys: &SystemSpec,
    beta: f64,
    placement: GradientPlacement,
    linearize: bool,
) -> Result<PseudoPure> {
    if beta.is_nan() || beta <= 0.0 {
        return Err(Error::Domain(format!("pseudo-pure preparation needs beta > 0, got {beta}")));
    }
    let thermal = thermal_state(sys, beta, linearize)?;
    let prepared = evolve(&thermal, &preparation_sequence(placement), sys)?;
    classify_pseudo_pure(&prepared)
}

/// Linearized thermal state, crusher last.
pub fn prepare_pseudo_pure(sys: &SystemSpec, beta: f64) -> Result<PseudoPure> {
    prepare_pseudo_pure_with(sys, beta, GradientPlacement::default(), true)
}

/// Modulus of the `(m, n)` coherence after a selective `X_mn(π/2)` pulse.
pub fn fid_amplitude(rho: &DensityMatrix, transition: Transition) -> f64 {
    let pulse = PulseSpec { axis: crate::pulse::Axis::X, transition, angle: Angle::pi(1, 2), phase: Angle::ZERO };
    let after = rho.rho.conjugate_by(&propagator(&pulse));
    after[(transition.lower(), transition.upper())].norm()
}
