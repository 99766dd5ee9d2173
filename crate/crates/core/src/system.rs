use crate::error::{Error, Result};

/// Level energies and the frequencies that enter the transition-cost model.
///
/// Energies are angular frequencies (ħ absorbed). The defaults are desk-scale
/// values: Zeeman-like levels `(−3, −1, 1, 3)/2 · ω₀` with `ω₀ = 1`,
/// `ω_q = 0.1`, `η = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemSpec {
    energies: [f64; 4],
    omega0: f64,
    omega_q: f64,
    eta: f64,
}

impl Default for SystemSpec {
    fn default() -> Self {
        Self {
            energies: [-1.5, -0.5, 0.5, 1.5],
            omega0: 1.0,
            omega_q: 0.1,
            eta: 0.0,
        }
    }
}

impl SystemSpec {
    pub fn new(energies: [f64; 4], omega0: f64, omega_q: f64, eta: f64) -> Result<Self> {
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::Domain("level energies must be finite".into()));
        }
        if !energies.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Domain(format!(
                "level energies must be strictly increasing, got {energies:?}"
            )));
        }
        if !(omega0 > 0.0 && omega0.is_finite()) {
            return Err(Error::Domain(format!("omega0 must be positive, got {omega0}")));
        }
        if !(omega_q >= 0.0 && omega_q.is_finite()) {
            return Err(Error::Domain(format!("omega_q must be non-negative, got {omega_q}")));
        }
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::Domain(format!("eta must lie in [0, 1], got {eta}")));
        }
        Ok(Self { energies, omega0, omega_q, eta })
    }

    /// Zeeman-like equally spaced levels `(−3, −1, 1, 3)/2 · ω₀`.
    pub fn zeeman(omega0: f64, omega_q: f64, eta: f64) -> Result<Self> {
        Self::new([-1.5, -0.5, 0.5, 1.5].map(|m| m * omega0), omega0, omega_q, eta)
    }

    pub fn energies(&self) -> [f64; 4] {
        self.energies
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn omega_q(&self) -> f64 {
        self.omega_q
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn with_frequencies(self, omega0: f64, omega_q: f64, eta: f64) -> Result<Self> {
        Self::new(self.energies, omega0, omega_q, eta)
    }
}
