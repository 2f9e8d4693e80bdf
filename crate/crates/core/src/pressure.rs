//! Van der Waals pressure inside a film or any layer of a planar stack.
//!
//! Sign convention: a positive pressure means the two bounding media
//! attract each other across the layer (the layer tends to thin). It is
//! the integrand-positive form
//!
//! ```text
//! p = (k_B T/π) Σ'_n ∫ Σ_p R_mL R_mR e^{-2k_zm z} / (1 - R_mL R_mR e^{-2k_zm z}) k_zm k_ρ dk_ρ
//! ```
//!
//! and equals `+∂U/∂z` of the free energy returned by [`free_energy_lr`].

use std::f64::consts::PI;

use crate::constants::SPEED_OF_LIGHT;
use crate::em_core::{fresnel_pair, OpticalMedium, ReflectionSide, Stack};
use crate::error::{Error, Result};
use crate::kernel::matsubara::{self, MatsubaraSpec, SeriesSum};
use crate::kernel::{resonant, u_integral, Gap};
use crate::materials::MaterialModel;
use crate::quadrature::{integrate, Estimate, QuadratureSpec};

/// Pressure (Pa) with Matsubara bookkeeping; `per_n` holds the weighted
/// terms whose sum is `value`.
pub type PressureResult = SeriesSum;

fn check_thickness(z: f64) -> Result<()> {
    if z.is_finite() && z > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "film thickness must be finite and > 0, got {z}"
        )))
    }
}

fn check_all(materials: &[&MaterialModel], z: f64, quad: &QuadratureSpec) -> Result<()> {
    for m in materials {
        m.validate()?;
    }
    check_thickness(z)?;
    quad.validate()
}

/// Film term for a single interface pair evaluated by `reflect(k_ρ²) ->
/// [R_e R'_e, R_h R'_h]`.
fn film_stress_term<F>(
    film: &OpticalMedium,
    z: f64,
    n: usize,
    quad: &QuadratureSpec,
    products: F,
) -> Result<Estimate>
where
    F: Fn(f64) -> [f64; 2],
{
    let est = u_integral(z, film.k0_sq(), quad, n, |u, q| {
        let rr = products(q);
        let decay = (-u).exp();
        u * u * (resonant(rr[0] * decay) + resonant(rr[1] * decay))
    })?;
    Ok(est * (1.0 / (8.0 * PI * z * z * z)))
}

/// Film of `film` between vacuum half-spaces.
pub fn pressure_vv(
    film: &MaterialModel,
    z_m: f64,
    mats: &MatsubaraSpec,
    quad: &QuadratureSpec,
) -> Result<PressureResult> {
    check_all(&[film], z_m, quad)?;
    let vac = MaterialModel::vacuum();
    matsubara::sum_series(mats, |n, xi| {
        let m = OpticalMedium::at(film, xi);
        let v = OpticalMedium::at(&vac, xi);
        film_stress_term(&m, z_m, n, quad, |q| {
            let r = fresnel_pair(&m, m.kz(q), &v, v.kz(q));
            [r[0] * r[0], r[1] * r[1]]
        })
    })
}

/// Film between half-space `left` and vacuum.
pub fn pressure_lv(
    left: &MaterialModel,
    film: &MaterialModel,
    z_m: f64,
    mats: &MatsubaraSpec,
    quad: &QuadratureSpec,
) -> Result<PressureResult> {
    check_all(&[left, film], z_m, quad)?;
    let vac = MaterialModel::vacuum();
    matsubara::sum_series(mats, |n, xi| {
        let m = OpticalMedium::at(film, xi);
        let l = OpticalMedium::at(left, xi);
        let v = OpticalMedium::at(&vac, xi);
        film_stress_term(&m, z_m, n, quad, |q| {
            let kzm = m.kz(q);
            let rml = fresnel_pair(&m, kzm, &l, l.kz(q));
            let rmv = fresnel_pair(&m, kzm, &v, v.kz(q));
            [rml[0] * rmv[0], rml[1] * rmv[1]]
        })
    })
}

/// Film between half-spaces `left` and `right`.
pub fn pressure_lr(
    left: &MaterialModel,
    film: &MaterialModel,
    right: &MaterialModel,
    z_m: f64,
    mats: &MatsubaraSpec,
    quad: &QuadratureSpec,
) -> Result<PressureResult> {
    pressure_in_layer(
        &Stack::film(left.clone(), film.clone(), z_m, right.clone()),
        1,
        mats,
        quad,
    )
}

/// Pressure in layer `r` (1-based) of `stack`, from the generalized
/// reflection coefficients seen from inside that layer.
pub fn pressure_in_layer(
    stack: &Stack,
    r: usize,
    mats: &MatsubaraSpec,
    quad: &QuadratureSpec,
) -> Result<PressureResult> {
    stack.validate()?;
    quad.validate()?;
    let (left, right) = stack.sides_of_layer(r)?;
    let layer = &stack.layers[r - 1];
    let gap = Gap {
        medium: &layer.material,
        thickness: layer.thickness,
        left: &left,
        right: &right,
    };
    matsubara::sum_series(mats, |n, xi| gap.stress_term(n, xi, quad))
}

/// Free energy per area (J/m²) of `left | film | right` relative to
/// infinite film thickness:
/// `(k_B T/2π) Σ' ∫ k_ρ Σ_p ln(1 - R_mL R_mR e^{-2k_zm z}) dk_ρ`.
pub fn free_energy_lr(
    left: &MaterialModel,
    film: &MaterialModel,
    right: &MaterialModel,
    z_m: f64,
    mats: &MatsubaraSpec,
    quad: &QuadratureSpec,
) -> Result<SeriesSum> {
    check_all(&[left, film, right], z_m, quad)?;
    let l = ReflectionSide::interface(film.clone(), left.clone());
    let r = ReflectionSide::interface(film.clone(), right.clone());
    let gap = Gap {
        medium: film,
        thickness: z_m,
        left: &l,
        right: &r,
    };
    matsubara::sum_series(mats, |n, xi| gap.energy_term(n, xi, quad))
}

/// Breakpoints in `t = e^{-a(q-1)}`: geometric in `ln t`, down to `e^{-70}`.
fn dlp_breakpoints() -> Vec<f64> {
    let mut pts: Vec<f64> = (0..=14).rev().map(|j| (-5.0 * j as f64).exp()).collect();
    pts.insert(0, 0.0);
    pts
}

/// The `n ≥ 1` term of the dimensionless form,
/// `(ξ³ (εμ)^{3/2} / π c³) ∫_1^∞ q² Σ_p (R_mL⁻¹ R_mR⁻¹ e^{aq} - 1)⁻¹ dq`,
/// `a = 2 ξ sqrt(εμ) z / c`, integrated in `t = e^{-a(q-1)} ∈ (0, 1]`.
fn dlp_term(
    left: &MaterialModel,
    film: &MaterialModel,
    right: &MaterialModel,
    z: f64,
    n: usize,
    xi: f64,
    quad: &QuadratureSpec,
) -> Result<Estimate> {
    let m = OpticalMedium::at(film, xi);
    let l = OpticalMedium::at(left, xi);
    let r = OpticalMedium::at(right, xi);
    let k0 = xi / SPEED_OF_LIGHT;
    let index = (m.eps * m.mu).sqrt();
    let a = 2.0 * k0 * index * z;
    let ea = a.exp();
    let scale_sq = (k0 * index).powi(2);
    let est = integrate(
        |t: f64| {
            let q = 1.0 - t.ln() / a;
            // k_ρ² = (ξ²εμ/c²)(q² - 1)
            let krho_sq = scale_sq * (q - 1.0) * (q + 1.0);
            let kzm = k0 * index * q;
            let rml = fresnel_pair(&m, kzm, &l, l.kz(krho_sq));
            let rmr = fresnel_pair(&m, kzm, &r, r.kz(krho_sq));
            let mut s = 0.0;
            for p in 0..2 {
                // (R⁻¹R⁻¹ e^{aq} - 1)⁻¹ dq = (R⁻¹R⁻¹ e^{a} - t)⁻¹ dt / a
                s += 1.0 / (ea / (rml[p] * rmr[p]) - t);
            }
            q * q * s
        },
        &dlp_breakpoints(),
        quad,
    )
    .map_err(|partial| Error::Quadrature {
        n,
        partial: partial.value,
        error: partial.error,
    })?;
    let prefactor = xi.powi(3) * index.powi(3) / (PI * SPEED_OF_LIGHT.powi(3) * a);
    Ok(est * prefactor)
}

/// Same pressure as [`pressure_lr`] via the dimensionless `q` variable. The
/// `q` substitution is singular at `ξ = 0`, so the `n = 0` term is taken
/// from the `k_ρ` form.
pub fn pressure_lr_dlp(
    left: &MaterialModel,
    film: &MaterialModel,
    right: &MaterialModel,
    z_m: f64,
    mats: &MatsubaraSpec,
    quad: &QuadratureSpec,
) -> Result<PressureResult> {
    check_all(&[left, film, right], z_m, quad)?;
    let l = ReflectionSide::interface(film.clone(), left.clone());
    let r = ReflectionSide::interface(film.clone(), right.clone());
    let gap = Gap {
        medium: film,
        thickness: z_m,
        left: &l,
        right: &r,
    };
    matsubara::sum_series(mats, |n, xi| {
        if n == 0 {
            gap.stress_term(n, xi, quad)
        } else {
            dlp_term(left, film, right, z_m, n, xi, quad)
        }
    })
}
