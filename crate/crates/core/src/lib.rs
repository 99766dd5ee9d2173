//! A spin-3/2 nucleus treated as two virtual qubits.
//!
//! The four energy levels `|Ψ₀⟩..|Ψ₃⟩` carry the labels `|ξ ζ⟩` with index
//! `2ξ + ζ`. Logical gates are written over the matrix units `I_mn`, lowered
//! to selective RF pulses, and checked up to a global phase. Mixed states,
//! pseudo-pure preparation and a Deutsch-Jozsa runner sit on top.
//!
//! ```
//! use vspin::{compile_report, GateId};
//!
//! let r = compile_report(GateId::NOT1).unwrap();
//! assert!(r.distance < 1e-10);
//! ```

pub mod catalog;
pub mod compiler;
pub mod density;
pub mod dj;
pub mod error;
pub mod factor;
pub mod matrix;
pub mod pulse;
pub mod system;

pub use catalog::{b_operator, decode, encode, gate, oracle, BoolFn2, GateId, VirtualLabel};
pub use compiler::{
    audit, compile, compile_report, cost, printed_prefactor, pulse_target, rewrite_delta_m, rewrite_delta_m_with,
    verify, verify_on, ChainStyle, CompilationResult, DeltaMLimit, VERIFY_TOL,
};
pub use density::{
    crush, evolve, fid_amplitude, prepare_pseudo_pure, thermal_state, DensityMatrix, GradientPlacement, PseudoPure,
};
pub use dj::{intermediate_state, run_dj, Classification, DjMode, DjResult, StateModel};
pub use error::{Error, Result};
pub use factor::{virtual_factorization, Factorization};
pub use matrix::{global_phase, phase_distance, projector, Ket4, Matrix4};
pub use pulse::{
    propagator, sequence_operator, Angle, Axis, PulseSequence, PulseSpec, SequenceEvent, Transition,
};
pub use system::SystemSpec;
