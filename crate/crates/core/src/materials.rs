//! Material response on the positive imaginary frequency axis.
//!
//! Every quantity in the Lifshitz formalism is evaluated at `ω = iξ` with
//! `ξ ≥ 0`, where causal response functions are real and decrease
//! monotonically towards 1. Models provided here:
//!
//! * vacuum, `ε = μ = 1`;
//! * a frequency-independent constant `ε`;
//! * a sum of damped oscillators on top of a background,
//!   `ε(iξ) = 1 + b + Σ_j C_j / (1 + (ξ/ω_j)² + γ_j ξ/ω_j²)`;
//! * a Drude conductor, `ε(iξ) = 1 + ω_p² / (ξ(ξ + γ))`.
//!
//! Permeability is a frequency-independent constant for every model.

use crate::error::{Error, Result};

/// One damped oscillator `C / (1 + (ξ/ω₀)² + γξ/ω₀²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorTerm {
    /// Oscillator strength `C` (dimensionless, ≥ 0).
    pub strength: f64,
    /// Resonance angular frequency `ω₀` in rad/s (> 0).
    pub resonance: f64,
    /// Damping rate `γ` in rad/s (≥ 0).
    pub damping: f64,
}

impl OscillatorTerm {
    pub fn new(strength: f64, resonance: f64, damping: f64) -> Self {
        Self {
            strength,
            resonance,
            damping,
        }
    }

    #[inline]
    fn eval(&self, xi: f64) -> f64 {
        let x = xi / self.resonance;
        self.strength / (1.0 + x * x + self.damping * xi / (self.resonance * self.resonance))
    }
}

/// Permittivity model family.
#[derive(Debug, Clone, PartialEq)]
pub enum Permittivity {
    Vacuum,
    /// Frequency-independent `ε`.
    Constant(f64),
    /// Background offset `b` plus a sum of damped oscillators. The model tends
    /// to `1 + b` as `ξ → ∞`; `b = 0` recovers the free-space limit.
    Lorentz {
        static_offset: f64,
        oscillators: Vec<OscillatorTerm>,
    },
    /// `1 + ω_p² / (ξ(ξ + γ))`, unbounded at `ξ = 0`.
    Drude {
        plasma_frequency: f64,
        damping: f64,
    },
}

/// Behaviour of `ε(iξ)` as `ξ → 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StaticPermittivity {
    Finite(f64),
    /// `ε ~ coefficient / ξ^order`. Two divergent media are compared by
    /// order first and coefficient second when taking reflection limits.
    Divergent {
        order: u8,
        coefficient: f64,
    },
}

/// Electromagnetic response of one homogeneous medium.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialModel {
    pub permittivity: Permittivity,
    /// Relative permeability, constant in frequency.
    pub permeability: f64,
}

impl MaterialModel {
    pub fn vacuum() -> Self {
        Self {
            permittivity: Permittivity::Vacuum,
            permeability: 1.0,
        }
    }

    pub fn constant(epsilon: f64) -> Self {
        Self {
            permittivity: Permittivity::Constant(epsilon),
            permeability: 1.0,
        }
    }

    pub fn lorentz(static_offset: f64, oscillators: Vec<OscillatorTerm>) -> Self {
        Self {
            permittivity: Permittivity::Lorentz {
                static_offset,
                oscillators,
            },
            permeability: 1.0,
        }
    }

    /// Single-oscillator shorthand for `lorentz(0, [C, ω₀, γ])`.
    pub fn single_oscillator(strength: f64, resonance: f64, damping: f64) -> Self {
        Self::lorentz(0.0, vec![OscillatorTerm::new(strength, resonance, damping)])
    }

    pub fn drude(plasma_frequency: f64, damping: f64) -> Self {
        Self {
            permittivity: Permittivity::Drude {
                plasma_frequency,
                damping,
            },
            permeability: 1.0,
        }
    }

    pub fn with_permeability(mut self, permeability: f64) -> Self {
        self.permeability = permeability;
        self
    }

    pub fn is_vacuum(&self) -> bool {
        matches!(self.permittivity, Permittivity::Vacuum) && self.permeability == 1.0
    }

    /// Checks the parameter invariants of the model.
    pub fn validate(&self) -> Result<()> {
        let finite_pos = |v: f64| v.is_finite() && v > 0.0;
        let finite_nonneg = |v: f64| v.is_finite() && v >= 0.0;
        if !finite_pos(self.permeability) {
            return Err(Error::Domain(format!(
                "permeability must be finite and > 0, got {}",
                self.permeability
            )));
        }
        match &self.permittivity {
            Permittivity::Vacuum => {}
            Permittivity::Constant(eps) => {
                if !(eps.is_finite() && *eps >= 1.0) {
                    return Err(Error::Domain(format!(
                        "constant permittivity must be finite and >= 1, got {eps}"
                    )));
                }
            }
            Permittivity::Lorentz {
                static_offset,
                oscillators,
            } => {
                if !finite_nonneg(*static_offset) {
                    return Err(Error::Domain(format!(
                        "static_offset must be >= 0, got {static_offset}"
                    )));
                }
                for (j, osc) in oscillators.iter().enumerate() {
                    if !finite_nonneg(osc.strength)
                        || !finite_pos(osc.resonance)
                        || !finite_nonneg(osc.damping)
                    {
                        return Err(Error::Domain(format!(
                            "oscillator {j}: need strength >= 0, resonance > 0, damping >= 0"
                        )));
                    }
                }
            }
            Permittivity::Drude {
                plasma_frequency,
                damping,
            } => {
                if !finite_nonneg(*plasma_frequency) || !finite_nonneg(*damping) {
                    return Err(Error::Domain(
                        "Drude plasma_frequency and damping must be >= 0".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// `ε(iξ)`. Fails with [`Error::StaticDivergence`] for a Drude model at
    /// `ξ = 0`; use [`MaterialModel::static_permittivity`] for that limit.
    pub fn eval_permittivity(&self, xi: f64) -> Result<f64> {
        match &self.permittivity {
            Permittivity::Vacuum => Ok(1.0),
            Permittivity::Constant(eps) => Ok(*eps),
            Permittivity::Lorentz {
                static_offset,
                oscillators,
            } => Ok(1.0 + static_offset + oscillators.iter().map(|o| o.eval(xi)).sum::<f64>()),
            Permittivity::Drude {
                plasma_frequency,
                damping,
            } => {
                if *plasma_frequency == 0.0 {
                    Ok(1.0)
                } else if xi == 0.0 {
                    Err(Error::StaticDivergence)
                } else {
                    Ok(1.0 + plasma_frequency * plasma_frequency / (xi * (xi + damping)))
                }
            }
        }
    }

    /// `μ(iξ)`; frequency independent.
    pub fn eval_permeability(&self, _xi: f64) -> f64 {
        self.permeability
    }

    /// The `ξ → 0` limit of the permittivity.
    pub fn static_permittivity(&self) -> StaticPermittivity {
        match &self.permittivity {
            Permittivity::Drude {
                plasma_frequency,
                damping,
            } if *plasma_frequency > 0.0 => {
                let wp2 = plasma_frequency * plasma_frequency;
                if *damping > 0.0 {
                    StaticPermittivity::Divergent {
                        order: 1,
                        coefficient: wp2 / damping,
                    }
                } else {
                    StaticPermittivity::Divergent {
                        order: 2,
                        coefficient: wp2,
                    }
                }
            }
            // every other model is finite at zero
            _ => StaticPermittivity::Finite(
                self.eval_permittivity(0.0)
                    .expect("non-Drude permittivity is finite at xi = 0"),
            ),
        }
    }
}

impl Default for MaterialModel {
    fn default() -> Self {
        Self::vacuum()
    }
}
