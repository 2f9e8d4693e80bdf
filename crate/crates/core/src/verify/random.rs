//! Seeded generator of materials and film configurations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::materials::{MaterialModel, OscillatorTerm};

/// A film of `film` with thickness `thickness` between `left` and `right`.
#[derive(Debug, Clone, PartialEq)]
pub struct FilmCase {
    pub left: MaterialModel,
    pub film: MaterialModel,
    pub right: MaterialModel,
    pub thickness: f64,
    pub temperature: f64,
}

impl FilmCase {
    pub fn describe(&self) -> String {
        format!(
            "{} | {} ({:.3e} m) | {} at {:.1} K",
            short(&self.left),
            short(&self.film),
            self.thickness,
            short(&self.right),
            self.temperature
        )
    }
}

fn short(m: &MaterialModel) -> String {
    use crate::materials::Permittivity::*;
    let eps = match &m.permittivity {
        Vacuum => "vac".to_string(),
        Constant(e) => format!("eps={e:.3}"),
        Lorentz {
            static_offset,
            oscillators,
        } => {
            let terms: Vec<String> = oscillators
                .iter()
                .map(|o| format!("{:.2}@{:.2e}", o.strength, o.resonance))
                .collect();
            if *static_offset == 0.0 {
                format!("lorentz[{}]", terms.join(","))
            } else {
                format!("lorentz[{static_offset:.2}+{}]", terms.join(","))
            }
        }
        Drude {
            plasma_frequency,
            damping,
        } => format!("drude[{plasma_frequency:.2e},{damping:.2e}]"),
    };
    if m.permeability == 1.0 {
        eps
    } else {
        format!("{eps},mu={:.2}", m.permeability)
    }
}

/// Draws physically sensible inputs from a ChaCha stream.
///
/// Oscillator strengths lie in `[0.5, 10]`, resonances in `[1e15, 1e17]`
/// rad/s (log-uniform), temperatures in `[100, 600]` K and thicknesses in
/// `[1 nm, 1 µm]` (log-uniform).
#[derive(Debug, Clone)]
pub struct StackSampler {
    rng: ChaCha8Rng,
}

impl StackSampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn log_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        (self.rng.random_range(lo.ln()..hi.ln())).exp()
    }

    fn oscillator(&mut self, damped: bool) -> OscillatorTerm {
        let strength = self.rng.random_range(0.5..10.0);
        let resonance = self.log_uniform(1e15, 1e17);
        let damping = if damped {
            resonance * self.rng.random_range(0.01..0.5)
        } else {
            0.0
        };
        OscillatorTerm::new(strength, resonance, damping)
    }

    /// Lossless dielectric with one or two oscillators.
    pub fn dielectric(&mut self) -> MaterialModel {
        let count = self.rng.random_range(1..=2);
        MaterialModel::lorentz(0.0, (0..count).map(|_| self.oscillator(false)).collect())
    }

    /// Dielectric whose oscillators carry damping.
    pub fn dissipative(&mut self) -> MaterialModel {
        let count = self.rng.random_range(1..=2);
        MaterialModel::lorentz(0.0, (0..count).map(|_| self.oscillator(true)).collect())
    }

    pub fn conductor(&mut self) -> MaterialModel {
        let plasma = self.log_uniform(1e15, 2e16);
        let damping = self.log_uniform(1e13, 1e14);
        MaterialModel::drude(plasma, damping)
    }

    pub fn permeability(&mut self) -> f64 {
        self.rng.random_range(1.0..3.0)
    }

    pub fn temperature(&mut self) -> f64 {
        self.rng.random_range(100.0..600.0)
    }

    pub fn thickness(&mut self) -> f64 {
        self.log_uniform(1e-9, 1e-6)
    }

    pub fn thickness_in(&mut self, lo: f64, hi: f64) -> f64 {
        self.log_uniform(lo, hi)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.rng.random_bool(p)
    }

    /// A bounding half-space: mostly dielectric, sometimes a conductor.
    pub fn half_space(&mut self) -> MaterialModel {
        if self.chance(0.2) {
            self.conductor()
        } else {
            self.dielectric()
        }
    }

    /// A film material: mostly lossless, sometimes damped.
    pub fn film(&mut self) -> MaterialModel {
        if self.chance(0.25) {
            self.dissipative()
        } else {
            self.dielectric()
        }
    }

    /// `left | film | right` with independent random materials.
    pub fn film_case(&mut self) -> FilmCase {
        FilmCase {
            left: self.half_space(),
            film: self.film(),
            right: self.half_space(),
            thickness: self.thickness(),
            temperature: self.temperature(),
        }
    }

    /// Like [`film_case`](Self::film_case) but with a permeability other
    /// than 1 on at least one medium.
    pub fn magnetic_film_case(&mut self) -> FilmCase {
        let mut case = self.film_case();
        let which = self.rng.random_range(0..3);
        let mu = self.permeability();
        let slot = match which {
            0 => &mut case.left,
            1 => &mut case.film,
            _ => &mut case.right,
        };
        *slot = slot.clone().with_permeability(mu);
        case
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let a: Vec<FilmCase> = {
            let mut s = StackSampler::new(7);
            (0..5).map(|_| s.film_case()).collect()
        };
        let b: Vec<FilmCase> = {
            let mut s = StackSampler::new(7);
            (0..5).map(|_| s.film_case()).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn samples_are_valid() {
        let mut s = StackSampler::new(1);
        for _ in 0..200 {
            let c = s.magnetic_film_case();
            c.left.validate().unwrap();
            c.film.validate().unwrap();
            c.right.validate().unwrap();
            assert!((1e-9..=1e-6).contains(&c.thickness));
            assert!((100.0..=600.0).contains(&c.temperature));
        }
    }
}
