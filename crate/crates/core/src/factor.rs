//! Kronecker-sum forms of catalog gates over the two virtual spins.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;

use crate::catalog::GateId;
use crate::error::{Error, Result};
use crate::matrix::{kron2, Matrix4, I, ONE, ZERO};

/// One-qubit building blocks: identity, Pauli operators and the four
/// projective operators `|a⟩⟨b|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op2 {
    E,
    X,
    Y,
    Z,
    P00,
    P01,
    P10,
    P11,
}

impl Op2 {
    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        match self {
            Op2::E => [[ONE, ZERO], [ZERO, ONE]],
            Op2::X => [[ZERO, ONE], [ONE, ZERO]],
            Op2::Y => [[ZERO, -I], [I, ZERO]],
            Op2::Z => [[ONE, ZERO], [ZERO, -ONE]],
            Op2::P00 => [[ONE, ZERO], [ZERO, ZERO]],
            Op2::P01 => [[ZERO, ONE], [ZERO, ZERO]],
            Op2::P10 => [[ZERO, ZERO], [ONE, ZERO]],
            Op2::P11 => [[ZERO, ZERO], [ZERO, ONE]],
        }
    }

    fn symbol(&self, space: char) -> String {
        match self {
            Op2::E => format!("e_{}", space.to_ascii_uppercase()),
            Op2::X => format!("{space}_x"),
            Op2::Y => format!("{space}_y"),
            Op2::Z => format!("{space}_z"),
            Op2::P00 => format!("{space}_00"),
            Op2::P01 => format!("{space}_01"),
            Op2::P10 => format!("{space}_10"),
            Op2::P11 => format!("{space}_11"),
        }
    }
}

/// `coeff · r ⊗ s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub r: Op2,
    pub s: Op2,
}

impl Term {
    pub fn new(coeff: f64, r: Op2, s: Op2) -> Self {
        Self { coeff, r, s }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub terms: Vec<Term>,
}

impl Factorization {
    fn of(terms: &[(f64, Op2, Op2)]) -> Self {
        Self { terms: terms.iter().map(|&(c, r, s)| Term::new(c, r, s)).collect() }
    }

    /// `(Σ a_i r_i) ⊗ (Σ b_j s_j)` expanded into single products.
    fn product(r: &[(f64, Op2)], s: &[(f64, Op2)]) -> Self {
        let terms = r
            .iter()
            .flat_map(|&(a, ro)| s.iter().map(move |&(b, so)| Term::new(a * b, ro, so)))
            .collect();
        Self { terms }
    }

    pub fn evaluate(&self) -> Matrix4 {
        self.terms
            .iter()
            .map(|t| kron2(&t.r.matrix(), &t.s.matrix()) * t.coeff)
            .sum()
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            let sign = if t.coeff < 0.0 { "-" } else { "+" };
            match (i, sign) {
                (0, "-") => f.write_str("-")?,
                (0, _) => {}
                _ => write!(f, " {sign} ")?,
            }
            let mag = t.coeff.abs();
            if (mag - 1.0).abs() > 1e-15 {
                write!(f, "{} ", fmt_coeff(mag))?;
            }
            write!(f, "{}⊗{}", t.r.symbol('r'), t.s.symbol('s'))?;
        }
        Ok(())
    }
}

fn fmt_coeff(x: f64) -> String {
    let known = [(0.5, "1/2"), (FRAC_1_SQRT_2, "1/√2")];
    known
        .iter()
        .find(|(v, _)| (x - v).abs() < 1e-15)
        .map(|(_, s)| s.to_string())
        .unwrap_or_else(|| format!("{x}"))
}

const HADAMARD: [(f64, Op2); 4] = [
    (FRAC_1_SQRT_2, Op2::P00),
    (FRAC_1_SQRT_2, Op2::P01),
    (FRAC_1_SQRT_2, Op2::P10),
    (-FRAC_1_SQRT_2, Op2::P11),
];

const PSEUDO_HADAMARD: [(f64, Op2); 4] = [
    (FRAC_1_SQRT_2, Op2::P00),
    (-FRAC_1_SQRT_2, Op2::P01),
    (FRAC_1_SQRT_2, Op2::P10),
    (FRAC_1_SQRT_2, Op2::P11),
];

const UNIT: [(f64, Op2); 1] = [(1.0, Op2::E)];

/// Factorization whose evaluation equals `gate(id)`.
///
/// The one-qubit Hadamard family is placed on the spin that the level-basis
/// matrices act on: `H1R` and `h1R` mix levels within `{0,1}` and `{2,3}`,
/// i.e. they act on S.
pub fn virtual_factorization(id: GateId) -> Result<Factorization> {
    use Op2::*;
    Ok(match id {
        GateId::E | GateId::D00 => Factorization::of(&[(1.0, E, E)]),
        GateId::NOT1 => Factorization::of(&[(1.0, X, E)]),
        GateId::NOT2 | GateId::D11 => Factorization::of(&[(1.0, E, X)]),
        GateId::NOT => Factorization::of(&[(1.0, X, X)]),
        GateId::SWAP => Factorization::of(&[(0.5, E, E), (0.5, X, X), (0.5, Y, Y), (0.5, Z, Z)]),
        GateId::CNOT12 | GateId::D01 => Factorization::of(&[(1.0, P00, E), (1.0, P11, X)]),
        GateId::CNOT21 => Factorization::of(&[(1.0, E, P00), (1.0, X, P11)]),
        GateId::ICNOT12 | GateId::D10 => Factorization::of(&[(1.0, P00, X), (1.0, P11, E)]),
        GateId::ICNOT21 => Factorization::of(&[(1.0, X, P00), (1.0, E, P11)]),
        GateId::H1R => Factorization::product(&UNIT, &HADAMARD),
        GateId::H1S => Factorization::product(&HADAMARD, &UNIT),
        GateId::h1R => Factorization::product(&UNIT, &PSEUDO_HADAMARD),
        GateId::h1S => Factorization::product(&PSEUDO_HADAMARD, &UNIT),
        GateId::H2 => Factorization::product(&HADAMARD, &HADAMARD),
        GateId::h2 => Factorization::product(&PSEUDO_HADAMARD, &PSEUDO_HADAMARD),
        GateId::PI0 => Factorization::of(&[(1.0, E, E), (-2.0, P00, P00)]),
        GateId::PI1 => Factorization::of(&[(1.0, E, E), (-2.0, P00, P11)]),
        GateId::PI2 => Factorization::of(&[(1.0, E, E), (-2.0, P11, P00)]),
        GateId::PI3 => Factorization::of(&[(1.0, E, E), (-2.0, P11, P11)]),
        gate => return Err(Error::NoFactorization { gate }),
    })
}

/// The one-qubit Hadamard forms with the spin placement taken literally from
/// their names (`H1R` on R, `H1S` on S). These evaluate to the partner gate.
pub fn named_placement(id: GateId) -> Result<Factorization> {
    match id {
        GateId::H1R => Ok(Factorization::product(&HADAMARD, &UNIT)),
        GateId::H1S => Ok(Factorization::product(&UNIT, &HADAMARD)),
        GateId::h1R => Ok(Factorization::product(&PSEUDO_HADAMARD, &UNIT)),
        GateId::h1S => Ok(Factorization::product(&UNIT, &PSEUDO_HADAMARD)),
        _ => virtual_factorization(id),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::gate;
    use crate::matrix::{units, IDENTITY_TOL};

    #[test]
    fn processors_match_exactly() {
        for id in GateId::PROCESSORS {
            let f = virtual_factorization(id).unwrap();
            assert_eq!(f.evaluate(), gate(id), "{id}");
        }
    }

    #[test]
    fn sign_flips() {
        for id in [GateId::PI0, GateId::PI1, GateId::PI2, GateId::PI3] {
            assert_eq!(virtual_factorization(id).unwrap().evaluate(), gate(id), "{id}");
        }
        assert_eq!(virtual_factorization(GateId::PI1).unwrap().to_string(), "e_R⊗e_S - 2 r_00⊗s_11");
    }

    #[test]
    fn hadamard_family() {
        use GateId::*;
        for id in [H1R, H1S, h1R, h1S, H2, h2] {
            let f = virtual_factorization(id).unwrap();
            assert!(f.evaluate().approx_eq(&gate(id), IDENTITY_TOL), "{id}");
        }
    }

    #[test]
    fn named_placement_gives_partner() {
        use GateId::*;
        for (id, partner) in [(H1R, H1S), (H1S, H1R), (h1R, h1S), (h1S, h1R)] {
            let f = named_placement(id).unwrap();
            assert!(f.evaluate().approx_eq(&gate(partner), IDENTITY_TOL), "{id}");
        }
    }

    #[test]
    fn examples() {
        let not = virtual_factorization(GateId::NOT).unwrap();
        assert_eq!(not.terms, vec![Term::new(1.0, Op2::X, Op2::X)]);
        assert_eq!(not.to_string(), "r_x⊗s_x");
        let c21 = virtual_factorization(GateId::CNOT21).unwrap();
        assert_eq!(c21.to_string(), "e_R⊗s_00 + r_x⊗s_11");
        assert_eq!(virtual_factorization(GateId::E).unwrap().to_string(), "e_R⊗e_S");
        assert_eq!(
            virtual_factorization(GateId::SWAP).unwrap().to_string(),
            "1/2 e_R⊗e_S + 1/2 r_x⊗s_x + 1/2 r_y⊗s_y + 1/2 r_z⊗s_z"
        );
    }

    #[test]
    fn oracle_aliases() {
        assert_eq!(virtual_factorization(GateId::D01).unwrap().evaluate(), units(&[(0, 0), (1, 1), (2, 3), (3, 2)]));
    }

    #[test]
    fn unsupported() {
        assert_eq!(
            virtual_factorization(GateId::STAR_P6),
            Err(Error::NoFactorization { gate: GateId::STAR_P6 })
        );
        assert!(virtual_factorization(GateId::B01).is_err());
    }
}
