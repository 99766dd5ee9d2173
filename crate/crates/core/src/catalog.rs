//! Logical two-qubit operators written over the level basis.
//!
//! Levels map to virtual-spin labels as `|Ψ_k⟩ = |ξ ζ⟩` with `k = 2ξ + ζ`:
//! the first virtual spin (R) is the high bit, the second (S) the low bit.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use crate::error::Result;
use crate::matrix::{unit, units, Matrix4, I};

#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateId {
    E,
    NOT1,
    NOT2,
    NOT,
    SWAP,
    CNOT12,
    CNOT21,
    ICNOT12,
    ICNOT21,
    H1R,
    H1S,
    h1R,
    h1S,
    H2,
    h2,
    PI0,
    PI1,
    PI2,
    PI3,
    D00,
    D01,
    D10,
    D11,
    B00,
    B01,
    B10,
    B11,
    STAR_P5,
    STAR_P6,
    STAR_P7,
    STAR_P8,
    STAR_P9,
}

impl GateId {
    pub const ALL: [GateId; 32] = [
        GateId::E,
        GateId::NOT1,
        GateId::NOT2,
        GateId::NOT,
        GateId::SWAP,
        GateId::CNOT12,
        GateId::CNOT21,
        GateId::ICNOT12,
        GateId::ICNOT21,
        GateId::H1R,
        GateId::H1S,
        GateId::h1R,
        GateId::h1S,
        GateId::H2,
        GateId::h2,
        GateId::PI0,
        GateId::PI1,
        GateId::PI2,
        GateId::PI3,
        GateId::D00,
        GateId::D01,
        GateId::D10,
        GateId::D11,
        GateId::B00,
        GateId::B01,
        GateId::B10,
        GateId::B11,
        GateId::STAR_P5,
        GateId::STAR_P6,
        GateId::STAR_P7,
        GateId::STAR_P8,
        GateId::STAR_P9,
    ];

    /// The nine basic processors `P₁..P₉`, in order.
    pub const PROCESSORS: [GateId; 9] = [
        GateId::E,
        GateId::NOT1,
        GateId::NOT2,
        GateId::NOT,
        GateId::SWAP,
        GateId::CNOT12,
        GateId::CNOT21,
        GateId::ICNOT12,
        GateId::ICNOT21,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            GateId::E => "E",
            GateId::NOT1 => "NOT1",
            GateId::NOT2 => "NOT2",
            GateId::NOT => "NOT",
            GateId::SWAP => "SWAP",
            GateId::CNOT12 => "CNOT12",
            GateId::CNOT21 => "CNOT21",
            GateId::ICNOT12 => "ICNOT12",
            GateId::ICNOT21 => "ICNOT21",
            GateId::H1R => "H1R",
            GateId::H1S => "H1S",
            GateId::h1R => "h1R",
            GateId::h1S => "h1S",
            GateId::H2 => "H2",
            GateId::h2 => "h2",
            GateId::PI0 => "PI0",
            GateId::PI1 => "PI1",
            GateId::PI2 => "PI2",
            GateId::PI3 => "PI3",
            GateId::D00 => "D00",
            GateId::D01 => "D01",
            GateId::D10 => "D10",
            GateId::D11 => "D11",
            GateId::B00 => "B00",
            GateId::B01 => "B01",
            GateId::B10 => "B10",
            GateId::B11 => "B11",
            GateId::STAR_P5 => "STAR_P5",
            GateId::STAR_P6 => "STAR_P6",
            GateId::STAR_P7 => "STAR_P7",
            GateId::STAR_P8 => "STAR_P8",
            GateId::STAR_P9 => "STAR_P9",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            GateId::E => "identity (P1)",
            GateId::NOT1 => "negation of virtual spin R (P2)",
            GateId::NOT2 => "negation of virtual spin S (P3)",
            GateId::NOT => "negation of both virtual spins (P4)",
            GateId::SWAP => "virtual spin exchange (P5)",
            GateId::CNOT12 => "negate S when R = 1 (P6)",
            GateId::CNOT21 => "negate R when S = 1 (P7)",
            GateId::ICNOT12 => "negate S when R = 0 (P8)",
            GateId::ICNOT21 => "negate R when S = 0 (P9)",
            GateId::H1R => "one-qubit Hadamard, R",
            GateId::H1S => "one-qubit Hadamard, S",
            GateId::h1R => "one-qubit pseudo-Hadamard, R",
            GateId::h1S => "one-qubit pseudo-Hadamard, S",
            GateId::H2 => "two-qubit Hadamard",
            GateId::h2 => "two-qubit pseudo-Hadamard",
            GateId::PI0 | GateId::PI1 | GateId::PI2 | GateId::PI3 => "sign change of one level",
            GateId::D00 | GateId::D01 | GateId::D10 | GateId::D11 => "Deutsch-Jozsa oracle",
            GateId::B00 | GateId::B01 | GateId::B10 | GateId::B11 => "conjugated Deutsch-Jozsa oracle",
            GateId::STAR_P5 | GateId::STAR_P6 | GateId::STAR_P7 | GateId::STAR_P8 | GateId::STAR_P9 => {
                "simplified processor, off-diagonal elements times -i"
            }
        }
    }
}

impl fmt::Display for GateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown gate '{0}'")]
pub struct UnknownGate(pub String);

impl FromStr for GateId {
    type Err = UnknownGate;

    /// Exact names first (`H1R` and `h1R` are different gates); otherwise a
    /// case-insensitive match when it is unambiguous.
    fn from_str(s: &str) -> std::result::Result<Self, UnknownGate> {
        if let Some(g) = GateId::ALL.iter().find(|g| g.name() == s) {
            return Ok(*g);
        }
        let mut folded = GateId::ALL.iter().filter(|g| g.name().eq_ignore_ascii_case(s));
        match (folded.next(), folded.next()) {
            (Some(g), None) => Ok(*g),
            _ => Err(UnknownGate(s.to_string())),
        }
    }
}

/// Virtual-spin label `|ξ ζ⟩` of a level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VirtualLabel {
    pub xi: bool,
    pub zeta: bool,
}

impl VirtualLabel {
    pub const ALL: [VirtualLabel; 4] = [
        VirtualLabel { xi: false, zeta: false },
        VirtualLabel { xi: false, zeta: true },
        VirtualLabel { xi: true, zeta: false },
        VirtualLabel { xi: true, zeta: true },
    ];

    pub fn new(xi: bool, zeta: bool) -> Self {
        Self { xi, zeta }
    }
}

impl fmt::Display for VirtualLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{}{}>", self.xi as u8, self.zeta as u8)
    }
}

pub fn encode(label: VirtualLabel) -> usize {
    2 * label.xi as usize + label.zeta as usize
}

pub fn decode(level: usize) -> Result<VirtualLabel> {
    crate::matrix::check_level(level)?;
    Ok(VirtualLabel { xi: level & 2 != 0, zeta: level & 1 != 0 })
}

/// A one-bit boolean function, given by its two values.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BoolFn2 {
    pub f0: bool,
    pub f1: bool,
}

impl BoolFn2 {
    pub const ALL: [BoolFn2; 4] = [
        BoolFn2 { f0: false, f1: false },
        BoolFn2 { f0: false, f1: true },
        BoolFn2 { f0: true, f1: false },
        BoolFn2 { f0: true, f1: true },
    ];

    pub fn new(f0: bool, f1: bool) -> Self {
        Self { f0, f1 }
    }

    pub fn is_balanced(&self) -> bool {
        self.f0 ^ self.f1
    }

    pub fn is_constant(&self) -> bool {
        !self.is_balanced()
    }

    /// `f00`, `f01`, `f10` or `f11`.
    pub fn label(&self) -> String {
        format!("f{}{}", self.f0 as u8, self.f1 as u8)
    }
}

impl fmt::Display for BoolFn2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for BoolFn2 {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let digits = s.strip_prefix('f').or_else(|| s.strip_prefix('F')).unwrap_or(s);
        let bit = |c: char| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(format!("invalid oracle '{s}', expected f00, f01, f10 or f11")),
        };
        let chars: Vec<char> = digits.chars().collect();
        match chars.as_slice() {
            [a, b] => Ok(BoolFn2::new(bit(*a)?, bit(*b)?)),
            _ => Err(format!("invalid oracle '{s}', expected f00, f01, f10 or f11")),
        }
    }
}

fn scaled(m: Matrix4, s: f64) -> Matrix4 {
    m * s
}

fn signed(terms: &[((usize, usize), f64)]) -> Matrix4 {
    terms.iter().map(|&((m, n), s)| unit(m, n) * s).sum()
}

/// Two-qubit Hadamard, full printed expansion.
fn hadamard2() -> Matrix4 {
    Matrix4::from_real([
        [1.0, 1.0, 1.0, 1.0],
        [1.0, -1.0, 1.0, -1.0],
        [1.0, 1.0, -1.0, -1.0],
        [1.0, -1.0, -1.0, 1.0],
    ]) * 0.5
}

/// Two-qubit pseudo-Hadamard, full printed expansion.
fn pseudo_hadamard2() -> Matrix4 {
    Matrix4::from_real([
        [1.0, -1.0, -1.0, 1.0],
        [1.0, 1.0, -1.0, -1.0],
        [1.0, -1.0, 1.0, -1.0],
        [1.0, 1.0, 1.0, 1.0],
    ]) * 0.5
}

/// Off-diagonal entries multiplied by `−i`: the form an `X(π)` realization produces.
pub fn star(m: &Matrix4) -> Matrix4 {
    m.map_off_diagonal(|z| z * -I)
}

/// Catalog matrix for `id`.
pub fn gate(id: GateId) -> Matrix4 {
    match id {
        GateId::E | GateId::D00 => Matrix4::identity(),
        GateId::NOT1 => units(&[(0, 2), (1, 3), (2, 0), (3, 1)]),
        GateId::NOT2 | GateId::D11 => units(&[(0, 1), (1, 0), (2, 3), (3, 2)]),
        GateId::NOT => units(&[(0, 3), (1, 2), (2, 1), (3, 0)]),
        GateId::SWAP => units(&[(0, 0), (1, 2), (2, 1), (3, 3)]),
        GateId::CNOT12 | GateId::D01 => units(&[(0, 0), (1, 1), (2, 3), (3, 2)]),
        GateId::CNOT21 => units(&[(0, 0), (1, 3), (2, 2), (3, 1)]),
        GateId::ICNOT12 | GateId::D10 => units(&[(0, 1), (1, 0), (2, 2), (3, 3)]),
        GateId::ICNOT21 => units(&[(0, 2), (1, 1), (2, 0), (3, 3)]),
        GateId::H1R => scaled(
            signed(&[
                ((0, 0), 1.0),
                ((0, 1), 1.0),
                ((1, 0), 1.0),
                ((1, 1), -1.0),
                ((2, 2), 1.0),
                ((2, 3), 1.0),
                ((3, 2), 1.0),
                ((3, 3), -1.0),
            ]),
            FRAC_1_SQRT_2,
        ),
        GateId::H1S => scaled(
            signed(&[
                ((0, 0), 1.0),
                ((0, 2), 1.0),
                ((1, 1), 1.0),
                ((1, 3), 1.0),
                ((2, 0), 1.0),
                ((2, 2), -1.0),
                ((3, 1), 1.0),
                ((3, 3), -1.0),
            ]),
            FRAC_1_SQRT_2,
        ),
        GateId::h1R => scaled(
            signed(&[
                ((0, 0), 1.0),
                ((0, 1), -1.0),
                ((1, 0), 1.0),
                ((1, 1), 1.0),
                ((2, 2), 1.0),
                ((2, 3), -1.0),
                ((3, 2), 1.0),
                ((3, 3), 1.0),
            ]),
            FRAC_1_SQRT_2,
        ),
        GateId::h1S => scaled(
            signed(&[
                ((0, 0), 1.0),
                ((0, 2), -1.0),
                ((1, 1), 1.0),
                ((1, 3), -1.0),
                ((2, 0), 1.0),
                ((2, 2), 1.0),
                ((3, 1), 1.0),
                ((3, 3), 1.0),
            ]),
            FRAC_1_SQRT_2,
        ),
        GateId::H2 => hadamard2(),
        GateId::h2 => pseudo_hadamard2(),
        GateId::PI0 => sign_flip(0),
        GateId::PI1 => sign_flip(1),
        GateId::PI2 => sign_flip(2),
        GateId::PI3 => sign_flip(3),
        GateId::B00 => b_operator(BoolFn2::new(false, false)),
        GateId::B01 => b_operator(BoolFn2::new(false, true)),
        GateId::B10 => b_operator(BoolFn2::new(true, false)),
        GateId::B11 => b_operator(BoolFn2::new(true, true)),
        GateId::STAR_P5 => star(&gate(GateId::SWAP)),
        GateId::STAR_P6 => star(&gate(GateId::CNOT12)),
        GateId::STAR_P7 => star(&gate(GateId::CNOT21)),
        GateId::STAR_P8 => star(&gate(GateId::ICNOT12)),
        GateId::STAR_P9 => star(&gate(GateId::ICNOT21)),
    }
}

/// `Π_m = E − 2 I_mm`.
fn sign_flip(m: usize) -> Matrix4 {
    Matrix4::identity() - unit(m, m) * 2.0
}

/// Oracle `D_f` for the function `f`.
pub fn oracle(f: BoolFn2) -> (GateId, Matrix4) {
    let id = match (f.f0, f.f1) {
        (false, false) => GateId::D00,
        (false, true) => GateId::D01,
        (true, false) => GateId::D10,
        (true, true) => GateId::D11,
    };
    (id, gate(id))
}

pub fn b_gate_id(f: BoolFn2) -> GateId {
    match (f.f0, f.f1) {
        (false, false) => GateId::B00,
        (false, true) => GateId::B01,
        (true, false) => GateId::B10,
        (true, true) => GateId::B11,
    }
}

/// `B_f = (₂h)⁻¹ D_f (₂h)`, evaluated numerically.
///
/// `₂h` is unitary, so its inverse is the adjoint. This ordering is the one
/// that leaves the `{0, 2}` pair fixed and acts on `{1, 3}`; the reverse
/// conjugation fixes level 1 for every `f`.
pub fn b_operator(f: BoolFn2) -> Matrix4 {
    let h = pseudo_hadamard2();
    h.adjoint() * oracle(f).1 * h
}

/// The single-operator forms as they are printed in the literature this
/// library follows, for comparison with [`b_operator`].
pub fn printed_b_operator(f: BoolFn2) -> Matrix4 {
    let base = units(&[(0, 0), (2, 2)]);
    match (f.f0, f.f1) {
        (false, false) => Matrix4::identity(),
        (true, true) => base - units(&[(1, 1), (3, 3)]),
        (false, true) => base + units(&[(1, 3), (3, 1)]),
        (true, false) => base - units(&[(1, 3), (3, 1)]),
    }
}

/// Matrices realized by the single-pulse implementations of `B_f`
/// (`E`, `X₁₃(π)`, `X₁₃(−π)`, `X₁₃(2π)`), written out entry by entry.
pub fn realized_b_operator(f: BoolFn2) -> Matrix4 {
    let base = units(&[(0, 0), (2, 2)]);
    let coherence = units(&[(1, 3), (3, 1)]);
    match (f.f0, f.f1) {
        (false, false) => Matrix4::identity(),
        (true, true) => base - units(&[(1, 1), (3, 3)]),
        (false, true) => base + coherence * -I,
        (true, false) => base + coherence * I,
    }
}

/// Computed `B_f` next to its printed form.
#[derive(Clone, Debug, PartialEq)]
pub struct BOperatorReport {
    pub function: BoolFn2,
    pub computed: Matrix4,
    pub printed: Matrix4,
    /// `computed − printed`.
    pub difference: Matrix4,
    pub max_difference: f64,
    /// `|⟨Ψ₁|B|Ψ₁⟩|` and `|⟨Ψ₃|B|Ψ₁⟩|`.
    pub stay_amplitude: f64,
    pub flip_amplitude: f64,
}

pub fn b_operator_report(f: BoolFn2) -> BOperatorReport {
    let computed = b_operator(f);
    let printed = printed_b_operator(f);
    let difference = computed - printed;
    BOperatorReport {
        function: f,
        computed,
        printed,
        difference,
        max_difference: difference.max_abs(),
        stay_amplitude: computed[(1, 1)].norm(),
        flip_amplitude: computed[(3, 1)].norm(),
    }
}

/// Every catalog entry with its matrix.
pub fn catalog() -> Vec<(GateId, Matrix4)> {
    GateId::ALL.iter().map(|&id| (id, gate(id))).collect()
}
