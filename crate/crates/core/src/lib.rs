//! Van der Waals (Casimir–Lifshitz) pressure in planar multilayer stacks
//! whose media may be absorbing, dispersive and magnetic.
//!
//! The pressure inside any layer is obtained from the Maxwell stress tensor
//! in a vanishing vacuum probe gap, so no stress tensor is ever defined
//! inside an absorbing medium. All response functions are sampled on the
//! imaginary frequency axis at the Matsubara frequencies.
//!
//! Modules, bottom-up:
//!
//! * [`materials`]: `ε(iξ)`, `μ(iξ)` models;
//! * [`em_core`]: wavevectors, Fresnel and generalized reflection coefficients;
//! * [`kernel`]: Matsubara sums, the probe stress tensor and gap-closure integrals;
//! * [`pressure`]: closed-form film and multilayer pressures;
//! * [`verify`]: independent numerical oracles for every closed form;
//! * [`cli`]: configuration files and the `vdw` command-line front end.

pub mod cli;
pub mod constants;
pub mod em_core;
mod error;
pub mod kernel;
pub mod materials;
pub mod pressure;
pub mod quadrature;
pub mod special;
pub mod verify;

pub use em_core::{Layer, Polarization, ReflectionSide, Stack};
pub use error::{Error, Result};
pub use kernel::{LayerRef, MatsubaraSpec, ProbeGeometry};
pub use materials::{MaterialModel, OscillatorTerm, Permittivity};
pub use pressure::PressureResult;
pub use quadrature::QuadratureSpec;
