//! `key=value` system description for `--system <file>`.
//!
//! ```text
//! # level energies, rad/s
//! energies = -1.5, -0.5, 0.5, 1.5
//! omega0 = 1
//! omegaq = 0.1
//! eta = 0
//! beta = 1e-3
//! ```
//!
//! Every key is optional; missing keys keep the defaults. The defaults are
//! desk-scale values with no physical calibration behind them.

use vspin::{DjMode, SystemSpec};

pub const DEFAULT_BETA: f64 = vspin::dj::DEFAULT_BETA;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemConfig {
    pub energies: [f64; 4],
    pub omega0: f64,
    pub omega_q: f64,
    pub eta: f64,
    pub beta: f64,
}

impl Default for SystemConfig {
    fn default() -> Self {
        let sys = SystemSpec::default();
        Self {
            energies: sys.energies(),
            omega0: sys.omega0(),
            omega_q: sys.omega_q(),
            eta: sys.eta(),
            beta: DEFAULT_BETA,
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{0}")]
    Invalid(#[from] vspin::Error),
}

fn number(line: usize, key: &str, v: &str) -> Result<f64, ConfigError> {
    v.trim().parse::<f64>().map_err(|_| ConfigError::Syntax {
        line,
        message: format!("{key} expects a number, got '{}'", v.trim()),
    })
}

impl SystemConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let code = raw.split_once('#').map_or(raw, |(c, _)| c).trim();
            if code.is_empty() {
                continue;
            }
            let Some((key, value)) = code.split_once('=') else {
                return Err(ConfigError::Syntax { line, message: format!("expected key=value, got '{code}'") });
            };
            let key = key.trim().to_ascii_lowercase();
            match key.as_str() {
                "energies" => {
                    let parts: Vec<&str> = value.split(',').collect();
                    if parts.len() != 4 {
                        return Err(ConfigError::Syntax {
                            line,
                            message: format!("energies needs 4 comma-separated values, got {}", parts.len()),
                        });
                    }
                    for (slot, p) in cfg.energies.iter_mut().zip(parts) {
                        *slot = number(line, "energies", p)?;
                    }
                }
                "omega0" => cfg.omega0 = number(line, &key, value)?,
                "omegaq" | "omega_q" => cfg.omega_q = number(line, &key, value)?,
                "eta" => cfg.eta = number(line, &key, value)?,
                "beta" => cfg.beta = number(line, &key, value)?,
                other => return Err(ConfigError::Syntax { line, message: format!("unknown key '{other}'") }),
            }
        }
        cfg.system()?;
        Ok(cfg)
    }

    pub fn system(&self) -> Result<SystemSpec, vspin::Error> {
        SystemSpec::new(self.energies, self.omega0, self.omega_q, self.eta)
    }
}

/// Accepted spellings of `--mode`, for help text.
pub fn mode_names() -> Vec<&'static str> {
    DjMode::ALL.iter().map(|m| m.name()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_keys() {
        let cfg = SystemConfig::parse("energies = 0, 1, 3, 6\nomega0=2 # Larmor\nOMEGAQ = 0.5\neta=0.25\nbeta=0.01\n").unwrap();
        assert_eq!(cfg.energies, [0.0, 1.0, 3.0, 6.0]);
        assert_eq!((cfg.omega0, cfg.omega_q, cfg.eta, cfg.beta), (2.0, 0.5, 0.25, 0.01));
    }

    #[test]
    fn defaults_when_empty() {
        assert_eq!(SystemConfig::parse("# nothing\n").unwrap(), SystemConfig::default());
    }

    #[test]
    fn errors() {
        assert!(matches!(SystemConfig::parse("omega0"), Err(ConfigError::Syntax { line: 1, .. })));
        assert!(matches!(SystemConfig::parse("\nfoo=1"), Err(ConfigError::Syntax { line: 2, .. })));
        assert!(matches!(SystemConfig::parse("energies=1,2"), Err(ConfigError::Syntax { .. })));
        assert!(matches!(SystemConfig::parse("energies=3,2,1,0"), Err(ConfigError::Invalid(_))));
        assert!(matches!(SystemConfig::parse("eta=abc"), Err(ConfigError::Syntax { .. })));
    }
}
