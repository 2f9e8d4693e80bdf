//! Brute-force route to the gap-closure derivative: differentiate the probe
//! stress with respect to a layer thickness by central differences, then
//! integrate over the probe width.
//!
//! Only generalized reflection coefficients are used; the Möbius slope
//! machinery behind the closed form is never touched.

use std::f64::consts::PI;

use crate::constants::SPEED_OF_LIGHT;
use crate::em_core::{OpticalMedium, ResolvedSide};
use crate::error::{Error, Result};
use crate::kernel::matsubara::{self, MatsubaraSpec, SeriesSum};
use crate::kernel::{resonant, u_integral, LayerRef, ProbeGeometry, ProbeSide};
use crate::quadrature::{integrate, Estimate, QuadratureSpec};

/// Probe widths covered by the outer integral. Below `z_min` the range
/// `[0, z_min]` is integrated linearly; above `z_max` the integrand is
/// taken as zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeGrid {
    pub z_min: f64,
    pub z_max: f64,
    /// Relative step in the layer thickness.
    pub h_rel: f64,
    pub inner: QuadratureSpec,
    pub outer: QuadratureSpec,
    /// Absolute accuracy floor for one frequency term (units of the
    /// kernel). [`numerical_gap_derivative`] sets it from the `n = 0` term.
    pub term_floor: f64,
}

impl Default for ProbeGrid {
    fn default() -> Self {
        Self {
            z_min: 1e-11,
            z_max: 1e-5,
            h_rel: 1e-4,
            inner: QuadratureSpec::default().with_rel_tol(1e-6),
            outer: QuadratureSpec::default().with_rel_tol(1e-6),
            term_floor: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Mode {
    Signed,
    /// Integral of the absolute integrand.
    Magnitude,
    /// Rounding noise of the difference quotient.
    Rounding,
}

struct Frozen {
    plus: ResolvedSide,
    minus: ResolvedSide,
    other: ResolvedSide,
    layer: OpticalMedium,
    thickness: f64,
    /// Distance from the probe to the far face of the layer.
    reach: f64,
    step: f64,
    kv_sq: f64,
}

impl Frozen {
    fn new(geom: &ProbeGeometry, layer: LayerRef, xi: f64, h_rel: f64) -> Result<Self> {
        let thickness = geom.layer_thickness(layer)?;
        let step = h_rel * thickness;
        let plus = geom.with_layer_thickness(layer, thickness + step)?;
        let minus = geom.with_layer_thickness(layer, thickness - step)?;
        let pick = |g: &ProbeGeometry| match layer.side {
            ProbeSide::Left => g.left_side.resolve(xi),
            ProbeSide::Right => g.right_side.resolve(xi),
        };
        let other = match layer.side {
            ProbeSide::Left => geom.right_side.resolve(xi),
            ProbeSide::Right => geom.left_side.resolve(xi),
        };
        let side = match layer.side {
            ProbeSide::Left => &geom.left_side,
            ProbeSide::Right => &geom.right_side,
        };
        let reach = side.remainder[..layer.index]
            .iter()
            .map(|l| l.thickness)
            .sum();
        Ok(Self {
            plus: pick(&plus),
            minus: pick(&minus),
            other,
            layer: OpticalMedium::at(&side.remainder[layer.index - 1].material, xi),
            thickness,
            reach,
            step,
            kv_sq: (xi / SPEED_OF_LIGHT).powi(2),
        })
    }

    /// `∂K_n/∂z_r` at probe width `z_v`, or one of the magnitudes used to
    /// set tolerances.
    fn stress_slope(&self, z_v: f64, n: usize, quad: &QuadratureSpec, mode: Mode) -> Result<f64> {
        // integrate in whichever decay variable is wider
        let (t, k0_sq) = if z_v > self.thickness {
            (z_v, self.kv_sq)
        } else {
            (self.thickness, self.layer.k0_sq())
        };
        let norm = 4.0 * PI * t * t;
        // `quad.abs_tol` is in the units of the result
        let raw = QuadratureSpec {
            abs_tol: quad.abs_tol * norm,
            ..*quad
        };
        let est = match u_integral(t, k0_sq, &raw, n, |u, q| {
            let kzv = (q + self.kv_sq).sqrt();
            let probe = (-2.0 * kzv * z_v).exp();
            let rp = self.plus.reflection(q);
            let rm = self.minus.reflection(q);
            let ro = self.other.reflection(q);
            let mut s = 0.0;
            for p in 0..2 {
                let (a, b) = (
                    resonant(rp[p] * ro[p] * probe),
                    resonant(rm[p] * ro[p] * probe),
                );
                s += match mode {
                    Mode::Signed | Mode::Magnitude => a - b,
                    Mode::Rounding => (a.abs() + b.abs()) * f64::EPSILON,
                };
            }
            let v = u * kzv * s / (2.0 * self.step);
            match mode {
                Mode::Signed => v,
                Mode::Magnitude | Mode::Rounding => v.abs(),
            }
        }) {
            Ok(e) => e.value,
            // magnitudes only set tolerances; a rough value is enough
            Err(Error::Quadrature { partial, .. }) if !matches!(mode, Mode::Signed) => partial,
            Err(e) => return Err(e),
        };
        Ok(est / norm)
    }
}

/// `-∫_0^∞ ∂K_n/∂z_r dz_v` for one frequency (no `k_B T`, no primed weight).
pub fn numerical_gap_kernel(
    geom: &ProbeGeometry,
    layer: LayerRef,
    n: usize,
    xi: f64,
    grid: &ProbeGrid,
) -> Result<Estimate> {
    let frozen = Frozen::new(geom, layer, xi, grid.h_rel)?;
    // The integrand is a difference quotient and may change sign, so ask
    // for absolute accuracy scaled by its magnitude at the closed probe and
    // by how much weight `z_v` carries, and never below its rounding noise.
    let rough = QuadratureSpec::default().with_rel_tol(1e-3);
    let scale = frozen.stress_slope(0.0, n, &rough, Mode::Magnitude)?;
    let noise = 100.0 * frozen.stress_slope(0.0, n, &rough, Mode::Rounding)?;
    let failure = std::cell::Cell::new(None);
    let eval = |z: f64| {
        let spec = QuadratureSpec {
            abs_tol: grid
                .inner
                .abs_tol
                .max((grid.inner.rel_tol * scale).max(noise) * (frozen.reach / z.max(frozen.reach)))
                .max(grid.term_floor / z.max(frozen.reach)),
            ..grid.inner
        };
        match frozen.stress_slope(z, n, &spec, Mode::Signed) {
            Ok(v) => v,
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        }
    };
    let to_err = |partial: Estimate| Error::Quadrature {
        n,
        partial: partial.value,
        error: partial.error,
    };
    // the outer integral is of order `scale * reach`
    let outer = QuadratureSpec {
        abs_tol: grid
            .outer
            .abs_tol
            .max((grid.outer.rel_tol * scale).max(noise) * frozen.reach)
            .max(grid.term_floor),
        ..grid.outer
    };
    let near = integrate(eval, &[0.0, grid.z_min], &outer).map_err(to_err)?;
    let (lo, hi) = (grid.z_min.ln(), grid.z_max.ln());
    let breaks: Vec<f64> = (0..=12).map(|i| lo + (hi - lo) * i as f64 / 12.0).collect();
    let far = integrate(
        |s: f64| {
            let z = s.exp();
            eval(z) * z
        },
        &breaks,
        &outer,
    )
    .map_err(to_err)?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok((near + far) * -1.0)
}

/// Matsubara sum of [`numerical_gap_kernel`]. High-order terms are asked
/// for absolute accuracy `outer.rel_tol * |K_0| / (n + 1)` at most, so their
/// accumulated error stays a small multiple of the leading term's.
pub fn numerical_gap_derivative(
    geom: &ProbeGeometry,
    layer: LayerRef,
    mats: &MatsubaraSpec,
    grid: &ProbeGrid,
) -> Result<SeriesSum> {
    geom.validate()?;
    geom.layer_thickness(layer)?;
    mats.validate()?;
    let leading = numerical_gap_kernel(geom, layer, 0, 0.0, grid)?.value.abs();
    matsubara::sum_series(mats, |n, xi| {
        let g = ProbeGrid {
            term_floor: grid
                .term_floor
                .max(grid.outer.rel_tol * leading / (n + 1) as f64),
            ..*grid
        };
        numerical_gap_kernel(geom, layer, n, xi, &g)
    })
}
