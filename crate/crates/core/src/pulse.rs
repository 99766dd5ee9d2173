//! Selective RF pulse propagators and pulse sequences.
//!
//! A pulse resonant with the transition `m ↔ n` (`m < n`) rotates only the
//! `{m, n}` block; the two other levels are untouched. With `k, l` the
//! untouched levels:
//!
//! ```text
//! Y_mn(φ, f) = I_kk + I_ll + cos(φ/2)(I_mm + I_nn) + sin(φ/2)(I_nm e^{if} − I_mn e^{−if})
//! X_mn(φ, f) = I_kk + I_ll + cos(φ/2)(I_mm + I_nn) − i sin(φ/2)(I_mn e^{if} + I_nm e^{−if})
//! ```
//!
//! Sequences are stored chronologically. The operator of a sequence is the
//! product with the last event leftmost.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex64;
use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::matrix::{check_level, unit, Matrix4, I};
use crate::system::SystemSpec;

/// A rotation angle, kept as an exact multiple of π when possible.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Angle {
    PiMultiple(Rational64),
    Radians(f64),
}

impl Angle {
    pub const ZERO: Angle = Angle::PiMultiple(Rational64::new_raw(0, 1));

    /// `num/den · π`.
    pub fn pi(num: i64, den: i64) -> Self {
        Angle::PiMultiple(Rational64::new(num, den))
    }

    pub fn radians(x: f64) -> Self {
        Angle::Radians(x)
    }

    pub fn value(&self) -> f64 {
        match *self {
            Angle::PiMultiple(r) => PI * (*r.numer() as f64) / (*r.denom() as f64),
            Angle::Radians(x) => x,
        }
    }

    pub fn is_zero(&self) -> bool {
        match *self {
            Angle::PiMultiple(r) => *r.numer() == 0,
            Angle::Radians(x) => x == 0.0,
        }
    }

    pub fn abs(&self) -> f64 {
        self.value().abs()
    }

    pub fn scale(self, k: i64) -> Self {
        match self {
            Angle::PiMultiple(r) => Angle::PiMultiple(r * k),
            Angle::Radians(x) => Angle::Radians(x * k as f64),
        }
    }
}

impl Default for Angle {
    fn default() -> Self {
        Angle::ZERO
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        match self {
            Angle::PiMultiple(r) => Angle::PiMultiple(-r),
            Angle::Radians(x) => Angle::Radians(-x),
        }
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        match (self, rhs) {
            (Angle::PiMultiple(a), Angle::PiMultiple(b)) => Angle::PiMultiple(a + b),
            (a, b) => Angle::Radians(a.value() + b.value()),
        }
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        self + (-rhs)
    }
}

/// Canonical literal: `pi`, `-pi`, `pi/2`, `2pi`, `-3pi/4`, `0pi`, or decimal radians.
impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Angle::PiMultiple(r) => {
                let (num, den) = (*r.numer(), *r.denom());
                let head = match num {
                    1 => "pi".to_string(),
                    -1 => "-pi".to_string(),
                    n => format!("{n}pi"),
                };
                if den == 1 {
                    write!(f, "{head}")
                } else {
                    write!(f, "{head}/{den}")
                }
            }
            Angle::Radians(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "X",
            Axis::Y => "Y",
        })
    }
}

/// Level pair `m ↔ n` with `m < n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    m: usize,
    n: usize,
}

impl Transition {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        check_level(m)?;
        check_level(n)?;
        if m >= n {
            return Err(Error::InvalidTransition { m, n });
        }
        Ok(Self { m, n })
    }

    pub fn lower(&self) -> usize {
        self.m
    }

    pub fn upper(&self) -> usize {
        self.n
    }

    /// |Δm| of the transition under the level ↔ Zeeman-number mapping
    /// `0,1,2,3 ↔ −3/2,−1/2,1/2,3/2`.
    pub fn delta_m(&self) -> usize {
        self.n - self.m
    }

    /// The two levels the transition leaves alone, ascending.
    pub fn spectators(&self) -> (usize, usize) {
        let mut it = (0..4).filter(|&k| k != self.m && k != self.n);
        (it.next().unwrap(), it.next().unwrap())
    }

    pub fn shares_level(&self, other: &Transition) -> bool {
        self.m == other.m || self.m == other.n || self.n == other.m || self.n == other.n
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.m, self.n)
    }
}

/// ±1 coefficient of the ancillary operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// One selective pulse.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseSpec {
    pub axis: Axis,
    pub transition: Transition,
    pub angle: Angle,
    pub phase: Angle,
}

impl PulseSpec {
    pub fn new(axis: Axis, m: usize, n: usize, angle: Angle) -> Result<Self> {
        Ok(Self { axis, transition: Transition::new(m, n)?, angle, phase: Angle::ZERO })
    }

    pub fn x(m: usize, n: usize, angle: Angle) -> Result<Self> {
        Self::new(Axis::X, m, n, angle)
    }

    pub fn y(m: usize, n: usize, angle: Angle) -> Result<Self> {
        Self::new(Axis::Y, m, n, angle)
    }

    pub fn with_phase(mut self, phase: Angle) -> Self {
        self.phase = phase;
        self
    }

    /// Same pulse with the rotation reversed; its propagator is the adjoint.
    pub fn inverse(&self) -> Self {
        Self { angle: -self.angle, ..*self }
    }
}

impl fmt::Display for PulseSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}({}", self.axis, self.transition, self.angle)?;
        if !self.phase.is_zero() {
            write!(f, ", {}", self.phase)?;
        }
        write!(f, ")")
    }
}

/// Propagator of a single selective pulse.
pub fn propagator(p: &PulseSpec) -> Matrix4 {
    let (m, n) = (p.transition.m, p.transition.n);
    let (k, l) = p.transition.spectators();
    let half = p.angle.value() / 2.0;
    let (s, c) = half.sin_cos();
    let e_f = Complex64::from_polar(1.0, p.phase.value());

    let diag = unit(k, k) + unit(l, l) + (unit(m, m) + unit(n, n)) * c;
    let off = match p.axis {
        Axis::Y => (unit(n, m) * e_f - unit(m, n) * e_f.conj()) * s,
        Axis::X => (unit(m, n) * e_f + unit(n, m) * e_f.conj()) * (-I * s),
    };
    diag + off
}

/// Product of two pulses on disjoint transitions; the factors commute.
pub fn pair_propagator(p1: &PulseSpec, p2: &PulseSpec) -> Result<Matrix4> {
    check_disjoint(&p1.transition, &p2.transition)?;
    Ok(propagator(p1) * propagator(p2))
}

fn check_disjoint(a: &Transition, b: &Transition) -> Result<()> {
    if a.shares_level(b) {
        Err(Error::SharedLevel(a.m, a.n, b.m, b.n))
    } else {
        Ok(())
    }
}

/// Pulses of `L_{a,b}(α, β) = Y_{a,b}(π/2, π/2) X_{a,b}(απ/2, βπ/2) Y_{a,b}(−π/2, −π/2)`
/// in chronological order. The two arguments of each pair factor are the
/// rotation angles on `a` and `b`; phases are zero.
pub fn ancillary_l_pulses(a: Transition, b: Transition, alpha: Sign, beta: Sign) -> Result<Vec<PulseSpec>> {
    check_disjoint(&a, &b)?;
    let half = |sign: i64| Angle::pi(sign, 2);
    let mk = |axis, t: Transition, angle| PulseSpec { axis, transition: t, angle, phase: Angle::ZERO };
    Ok(vec![
        mk(Axis::Y, a, half(-1)),
        mk(Axis::Y, b, half(-1)),
        mk(Axis::X, a, half(alpha.as_i64())),
        mk(Axis::X, b, half(beta.as_i64())),
        mk(Axis::Y, a, half(1)),
        mk(Axis::Y, b, half(1)),
    ])
}

pub fn ancillary_l(a: Transition, b: Transition, alpha: Sign, beta: Sign) -> Result<Matrix4> {
    let pulses = ancillary_l_pulses(a, b, alpha, beta)?;
    Ok(pulses.iter().rev().map(propagator).product())
}

/// Pulses of `M_mn(α) = Y_mn(απ) X_mn(π)` in chronological order.
pub fn ancillary_m_pulses(t: Transition, alpha: Sign) -> Vec<PulseSpec> {
    vec![
        PulseSpec { axis: Axis::X, transition: t, angle: Angle::pi(1, 1), phase: Angle::ZERO },
        PulseSpec { axis: Axis::Y, transition: t, angle: Angle::pi(alpha.as_i64(), 1), phase: Angle::ZERO },
    ]
}

pub fn ancillary_m(t: Transition, alpha: Sign) -> Matrix4 {
    ancillary_m_pulses(t, alpha).iter().rev().map(propagator).product()
}

/// `exp(−i Σ ε_m t I_mm)`.
pub fn free_evolution(t: f64, sys: &SystemSpec) -> Result<Matrix4> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::NegativeDelay(t));
    }
    Ok(Matrix4::diag(sys.energies().map(|e| Complex64::from_polar(1.0, -e * t))))
}

/// Lab-frame description of a pulse.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalPulse {
    /// Gyromagnetic ratio, rad·s⁻¹·T⁻¹.
    pub gamma: f64,
    /// RF amplitude H₁, T.
    pub amplitude: f64,
    /// Duration, s.
    pub duration: f64,
    /// Carrier Ω, rad·s⁻¹. Selects the transition; does not enter the angle.
    pub carrier: f64,
    pub phase: f64,
}

/// `φ = γ H₁ t |⟨Ψ_m|I_x|Ψ_n⟩|`.
pub fn angle_from_physical(p: &PhysicalPulse, matrix_element: f64) -> Result<f64> {
    let factors = [p.gamma, p.amplitude, p.duration, matrix_element];
    if factors.iter().any(|x| !(*x >= 0.0 && x.is_finite())) {
        return Err(Error::Domain(format!(
            "pulse factors must be finite and non-negative, got {factors:?}"
        )));
    }
    Ok(p.gamma * p.amplitude * p.duration * matrix_element)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SequenceEvent {
    Pulse(PulseSpec),
    /// Field-gradient crusher; removes all coherences.
    Gradient,
    /// Free evolution for the given number of seconds.
    Delay(f64),
}

impl From<PulseSpec> for SequenceEvent {
    fn from(p: PulseSpec) -> Self {
        SequenceEvent::Pulse(p)
    }
}

/// Chronological list of events, earliest first.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PulseSequence {
    events: Vec<SequenceEvent>,
}

impl PulseSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_events(events: Vec<SequenceEvent>) -> Result<Self> {
        for e in &events {
            if let SequenceEvent::Delay(t) = *e {
                if !(t >= 0.0 && t.is_finite()) {
                    return Err(Error::NegativeDelay(t));
                }
            }
        }
        Ok(Self { events })
    }

    pub fn from_pulses(pulses: impl IntoIterator<Item = PulseSpec>) -> Self {
        Self { events: pulses.into_iter().map(SequenceEvent::Pulse).collect() }
    }

    pub fn events(&self) -> &[SequenceEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn push(&mut self, event: impl Into<SequenceEvent>) {
        self.events.push(event.into());
    }

    pub fn push_delay(&mut self, seconds: f64) -> Result<()> {
        if !(seconds >= 0.0 && seconds.is_finite()) {
            return Err(Error::NegativeDelay(seconds));
        }
        self.events.push(SequenceEvent::Delay(seconds));
        Ok(())
    }

    /// `self` followed in time by `later`.
    pub fn then(mut self, later: &PulseSequence) -> Self {
        self.events.extend_from_slice(&later.events);
        self
    }

    pub fn pulses(&self) -> impl Iterator<Item = &PulseSpec> {
        self.events.iter().filter_map(|e| match e {
            SequenceEvent::Pulse(p) => Some(p),
            _ => None,
        })
    }

    pub fn has_gradient(&self) -> bool {
        self.events.iter().any(|e| matches!(e, SequenceEvent::Gradient))
    }

    /// Reversed order with every rotation negated. Only defined for pure
    /// pulse sequences.
    pub fn inverse(&self) -> Result<Self> {
        self.events
            .iter()
            .rev()
            .map(|e| match e {
                SequenceEvent::Pulse(p) => Ok(SequenceEvent::Pulse(p.inverse())),
                SequenceEvent::Gradient => Err(Error::GradientInUnitary),
                SequenceEvent::Delay(_) => Err(Error::Domain("free evolution cannot be reversed by pulses".into())),
            })
            .collect::<Result<Vec<_>>>()
            .map(|events| Self { events })
    }
}

impl FromIterator<SequenceEvent> for PulseSequence {
    fn from_iter<T: IntoIterator<Item = SequenceEvent>>(iter: T) -> Self {
        Self { events: iter.into_iter().collect() }
    }
}

pub fn event_operator(event: &SequenceEvent, sys: &SystemSpec) -> Result<Matrix4> {
    match *event {
        SequenceEvent::Pulse(ref p) => Ok(propagator(p)),
        SequenceEvent::Delay(t) => free_evolution(t, sys),
        SequenceEvent::Gradient => Err(Error::GradientInUnitary),
    }
}

/// Composite unitary of a gradient-free sequence, last event leftmost.
pub fn sequence_operator(seq: &PulseSequence, sys: &SystemSpec) -> Result<Matrix4> {
    seq.events
        .iter()
        .try_fold(Matrix4::identity(), |acc, e| Ok(event_operator(e, sys)? * acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{units, ONE, ZERO};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn t(m: usize, n: usize) -> Transition {
        Transition::new(m, n).unwrap()
    }

    fn x(m: usize, n: usize, a: Angle) -> Matrix4 {
        propagator(&PulseSpec::x(m, n, a).unwrap())
    }

    fn y(m: usize, n: usize, a: Angle) -> Matrix4 {
        propagator(&PulseSpec::y(m, n, a).unwrap())
    }

    const TOL: f64 = 1e-12;

    #[test]
    fn transition_order_enforced() {
        assert_eq!(Transition::new(3, 1), Err(Error::InvalidTransition { m: 3, n: 1 }));
        assert_eq!(Transition::new(2, 2), Err(Error::InvalidTransition { m: 2, n: 2 }));
        assert_eq!(Transition::new(0, 4), Err(Error::LevelOutOfRange(4)));
        assert_eq!(t(1, 2).spectators(), (0, 3));
        assert_eq!(t(0, 3).delta_m(), 3);
    }

    #[test]
    fn x_pi_is_printed_form() {
        for (m, n) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
            let (k, l) = t(m, n).spectators();
            let expect = unit(k, k) + unit(l, l) + (unit(m, n) + unit(n, m)) * (-I);
            assert!(x(m, n, Angle::pi(1, 1)).approx_eq(&expect, TOL));
        }
    }

    #[test]
    fn x_half_pi_is_printed_form() {
        let (m, n) = (1, 3);
        let expect = unit(0, 0)
            + unit(2, 2)
            + (unit(m, m) + unit(n, n) - (unit(m, n) + unit(n, m)) * I) * FRAC_1_SQRT_2;
        assert!(x(m, n, Angle::pi(1, 2)).approx_eq(&expect, TOL));
    }

    #[test]
    fn y_two_pi_flips_block() {
        let expect = unit(0, 0) + unit(3, 3) - unit(1, 1) - unit(2, 2);
        assert!(y(1, 2, Angle::pi(2, 1)).approx_eq(&expect, TOL));
    }

    #[test]
    fn y02_off_diagonal_orientation() {
        let (phi, f) = (0.9, 0.35);
        let p = propagator(&PulseSpec::y(0, 2, Angle::radians(phi)).unwrap().with_phase(Angle::radians(f)));
        let s = (phi / 2.0).sin();
        assert!((p[(2, 0)] - Complex64::from_polar(s, f)).norm() < TOL);
        assert!((p[(0, 2)] + Complex64::from_polar(s, -f)).norm() < TOL);
    }

    #[test]
    fn pair_of_x_pi() {
        let prod = pair_propagator(&PulseSpec::x(0, 2, Angle::pi(1, 1)).unwrap(), &PulseSpec::x(1, 3, Angle::pi(1, 1)).unwrap()).unwrap();
        let expect = units(&[(0, 2), (2, 0), (1, 3), (3, 1)]) * (-I);
        assert!(prod.approx_eq(&expect, TOL));
        assert!(matches!(
            pair_propagator(&PulseSpec::x(0, 2, Angle::pi(1, 1)).unwrap(), &PulseSpec::x(2, 3, Angle::pi(1, 1)).unwrap()),
            Err(Error::SharedLevel(..))
        ));
        assert!(ancillary_l(t(0, 1), t(1, 2), Sign::Plus, Sign::Plus).is_err());
    }

    #[test]
    fn equal_pair_rotation_acts_on_first_virtual_spin() {
        // Y02(φ)Y13(φ) = R_y(φ) ⊗ e_S.
        let phi: f64 = 1.3;
        let (s, c) = (phi / 2.0).sin_cos();
        let r = [[Complex64::new(c, 0.0), Complex64::new(-s, 0.0)], [Complex64::new(s, 0.0), Complex64::new(c, 0.0)]];
        let e = [[ONE, ZERO], [ZERO, ONE]];
        let prod = pair_propagator(&PulseSpec::y(0, 2, Angle::radians(phi)).unwrap(), &PulseSpec::y(1, 3, Angle::radians(phi)).unwrap()).unwrap();
        assert!(prod.approx_eq(&crate::matrix::kron2(&r, &e), TOL));
    }

    #[test]
    fn y_inverse_rotation() {
        let prod = y(0, 2, Angle::pi(1, 2)) * y(0, 2, Angle::pi(-1, 2));
        assert!(prod.approx_eq(&Matrix4::identity(), TOL));
    }

    #[test]
    fn ancillary_products_are_unitary() {
        for (a, b) in [(t(0, 2), t(1, 3)), (t(0, 1), t(2, 3)), (t(0, 3), t(1, 2))] {
            for alpha in [Sign::Plus, Sign::Minus] {
                for beta in [Sign::Plus, Sign::Minus] {
                    assert!(ancillary_l(a, b, alpha, beta).unwrap().is_unitary(TOL));
                }
            }
        }
        assert!(ancillary_m(t(0, 1), Sign::Minus).is_unitary(TOL));
    }

    #[test]
    fn free_evolution_basics() {
        let sys = SystemSpec::default();
        assert_eq!(free_evolution(0.0, &sys).unwrap(), Matrix4::identity());
        let u = free_evolution(2.7, &sys).unwrap();
        assert!(u.is_diagonal(0.0) && u.is_unitary(TOL));
        for m in 0..4 {
            assert!((u * unit(m, m)).approx_eq(&(unit(m, m) * u), 0.0));
        }
        assert_eq!(free_evolution(-1.0, &sys), Err(Error::NegativeDelay(-1.0)));
    }

    #[test]
    fn physical_angle() {
        let p = PhysicalPulse { gamma: 1.0, amplitude: 1.0, duration: PI, carrier: 5.0, phase: 0.0 };
        assert_eq!(angle_from_physical(&p, 1.0).unwrap(), PI);
        assert_eq!(angle_from_physical(&p, 0.0).unwrap(), 0.0);
        let doubled = PhysicalPulse { duration: 2.0 * PI, ..p };
        assert_eq!(angle_from_physical(&doubled, 0.5).unwrap(), 2.0 * angle_from_physical(&p, 0.5).unwrap());
        assert!(angle_from_physical(&PhysicalPulse { gamma: -1.0, ..p }, 1.0).is_err());
    }

    #[test]
    fn sequence_operator_basics() {
        let sys = SystemSpec::default();
        assert_eq!(sequence_operator(&PulseSequence::new(), &sys).unwrap(), Matrix4::identity());
        let p = PulseSpec::x(1, 2, Angle::pi(1, 1)).unwrap();
        let seq = PulseSequence::from_pulses([p, p.inverse()]);
        assert!(sequence_operator(&seq, &sys).unwrap().approx_eq(&Matrix4::identity(), TOL));
        let mut g = PulseSequence::new();
        g.push(SequenceEvent::Gradient);
        assert_eq!(sequence_operator(&g, &sys), Err(Error::GradientInUnitary));
        // Chronological: the first event is the rightmost factor.
        let a = PulseSpec::y(0, 1, Angle::pi(1, 2)).unwrap();
        let b = PulseSpec::x(1, 2, Angle::pi(1, 3)).unwrap();
        let op = sequence_operator(&PulseSequence::from_pulses([a, b]), &sys).unwrap();
        assert!(op.approx_eq(&(propagator(&b) * propagator(&a)), 0.0));
    }

    #[test]
    fn x_at_zero_phase_is_y_at_minus_half_pi() {
        let x = PulseSpec::x(1, 3, Angle::pi(1, 1)).unwrap();
        let y_minus = PulseSpec::y(1, 3, Angle::pi(1, 1)).unwrap().with_phase(Angle::pi(-1, 2));
        let y_plus = y_minus.with_phase(Angle::pi(1, 2));
        assert!(propagator(&x).approx_eq(&propagator(&y_minus), TOL));
        assert!(!propagator(&x).approx_eq(&propagator(&y_plus), TOL));
    }

    #[test]
    fn angle_display() {
        let cases = [
            (Angle::pi(1, 1), "pi"),
            (Angle::pi(-1, 1), "-pi"),
            (Angle::pi(1, 2), "pi/2"),
            (Angle::pi(4, 2), "2pi"),
            (Angle::pi(-3, 4), "-3pi/4"),
            (Angle::ZERO, "0pi"),
            (Angle::radians(1.25), "1.25"),
        ];
        for (a, s) in cases {
            assert_eq!(a.to_string(), s);
        }
        assert_eq!((Angle::pi(1, 2) - Angle::pi(1, 1)), Angle::pi(-1, 2));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_transition() -> impl Strategy<Value = Transition> {
            (0usize..4, 0usize..4)
                .prop_filter("m != n", |(a, b)| a != b)
                .prop_map(|(a, b)| Transition::new(a.min(b), a.max(b)).unwrap())
        }

        fn arb_pulse() -> impl Strategy<Value = PulseSpec> {
            (prop::bool::ANY, arb_transition(), -4.0 * PI..4.0 * PI, -PI..PI).prop_map(|(xa, tr, phi, f)| PulseSpec {
                axis: if xa { Axis::X } else { Axis::Y },
                transition: tr,
                angle: Angle::radians(phi),
                phase: Angle::radians(f),
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]

            #[test]
            fn propagators_are_unitary(p in arb_pulse()) {
                prop_assert!(propagator(&p).unitarity_defect() <= 1e-12);
            }

            #[test]
            fn x_is_y_with_shifted_phase(tr in arb_transition(), phi in -4.0 * PI..4.0 * PI, f in -PI..PI) {
                let xp = PulseSpec { axis: Axis::X, transition: tr, angle: Angle::radians(phi), phase: Angle::radians(f) };
                // The X form carries e^{if} on I_mn where the Y form carries e^{-if},
                // so the shift is f -> -f - pi/2 (f -> f - pi/2 at zero phase).
                let yp = PulseSpec { axis: Axis::Y, phase: Angle::radians(-f - PI / 2.0), ..xp };
                prop_assert!(propagator(&xp).approx_eq(&propagator(&yp), 1e-12));

            }

            #[test]
            fn adjoint_negates_angle(p in arb_pulse()) {
                prop_assert!(propagator(&p).adjoint().approx_eq(&propagator(&p.inverse()), 1e-12));
            }

            #[test]
            fn periodicity(p in arb_pulse()) {
                let u = propagator(&p);
                let u4 = propagator(&PulseSpec { angle: p.angle + Angle::radians(4.0 * PI), ..p });
                prop_assert!(u.approx_eq(&u4, 1e-12));
                let u2 = propagator(&PulseSpec { angle: p.angle + Angle::radians(2.0 * PI), ..p });
                let (m, n) = (p.transition.lower(), p.transition.upper());
                let (k, l) = p.transition.spectators();
                for r in 0..4 {
                    for c in 0..4 {
                        let in_block = (r == m || r == n) && (c == m || c == n);
                        let expect = if in_block { -u[(r, c)] } else { u[(r, c)] };
                        prop_assert!((u2[(r, c)] - expect).norm() <= 1e-12);
                    }
                }
                prop_assert_eq!(u2[(k, k)], ONE);
                prop_assert_eq!(u2[(l, l)], ONE);
            }

            #[test]
            fn pair_factors_commute(a in arb_pulse(), b in arb_pulse()) {
                let (k, l) = a.transition.spectators();
                let b = PulseSpec { transition: Transition::new(k, l).unwrap(), ..b };
                let ab = pair_propagator(&a, &b).unwrap();
                let ba = pair_propagator(&b, &a).unwrap();
                prop_assert!(ab.approx_eq(&ba, 1e-12));
            }

            #[test]
            fn unitary_products_associate(a in arb_pulse(), b in arb_pulse(), c in arb_pulse()) {
                let (ua, ub, uc) = (propagator(&a), propagator(&b), propagator(&c));
                prop_assert!(((ua * ub) * uc).approx_eq(&(ua * (ub * uc)), 1e-14));
            }
        }

        /// Arbitrary-system form `E − (I_nn + I_mm)·2sin²(φ/4) + (I_nm e^{if} − I_mn e^{−if}) sin(φ/2)`,
        /// written out independently of `propagator`.
        fn general_form(m: usize, n: usize, phi: f64, f: f64) -> Matrix4 {
            let e_f = Complex64::from_polar(1.0, f);
            Matrix4::identity() - (unit(n, n) + unit(m, m)) * (2.0 * (phi / 4.0).sin().powi(2))
                + (unit(n, m) * e_f - unit(m, n) * e_f.conj()) * (phi / 2.0).sin()
        }

        #[test]
        fn general_and_four_level_forms_agree_on_grid() {
            for (m, n) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
                for i in 0..100 {
                    let phi = -4.0 * PI + 8.0 * PI * i as f64 / 99.0;
                    let f = 0.3 * i as f64;
                    let p = PulseSpec::y(m, n, Angle::radians(phi)).unwrap().with_phase(Angle::radians(f));
                    assert!(propagator(&p).approx_eq(&general_form(m, n, phi, f), 1e-12));
                }
            }
        }
    }
}
