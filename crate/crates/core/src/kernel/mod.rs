//! Stress tensor in a vacuum probe gap and the gap-closure integrals.
//!
//! A fictitious vacuum layer of width `z_v` is inserted somewhere in the
//! stack. Its average `zz` stress is the primed Matsubara sum
//! `T = k_B T Σ'_n K_n` with
//!
//! ```text
//! K_n = (1/π) ∫ Σ_p X_p / (1 - X_p) k_zv k_ρ dk_ρ,   X_p = R̃_L R̃_R e^{-2 k_zv z_v}
//! ```
//!
//! All `k_ρ` integrals are taken in `u = 2 k_z z` of the layer whose
//! exponential controls decay, over `[u_0, u_0 + tail_cutoff]` with
//! `u_0 = 2 z ξ sqrt(εμ) / c`.

pub mod matsubara;

use crate::constants::SPEED_OF_LIGHT;
use crate::em_core::{OpticalMedium, ReflectionSide, ResolvedSide, Stack};
use crate::error::{Error, Result};
use crate::materials::MaterialModel;
use crate::quadrature::{integrate, Estimate, QuadratureSpec};

pub use matsubara::{matsubara_frequency, primed_weight, MatsubaraSpec, MatsubaraTerm, SeriesSum};

use std::f64::consts::PI;

/// Breakpoints of the `u` window as fractions of `tail_cutoff`.
const WINDOW: [f64; 6] = [0.0, 1.0 / 60.0, 4.0 / 60.0, 10.0 / 60.0, 25.0 / 60.0, 1.0];

/// `∫_{u0}^{u0+cutoff} g(u, k_ρ²) du` with `k_ρ² = (u-u0)(u+u0)/(4z²)`.
pub(crate) fn u_integral<G>(
    thickness: f64,
    k0_sq: f64,
    quad: &QuadratureSpec,
    n: usize,
    g: G,
) -> Result<Estimate>
where
    G: Fn(f64, f64) -> f64,
{
    let u0 = 2.0 * thickness * k0_sq.sqrt();
    let points = WINDOW.map(|f| u0 + f * quad.tail_cutoff);
    let inv = 1.0 / (4.0 * thickness * thickness);
    integrate(
        |u| {
            let krho_sq = ((u - u0) * (u + u0) * inv).max(0.0);
            g(u, krho_sq)
        },
        &points,
        quad,
    )
    .map_err(|partial| Error::Quadrature {
        n,
        partial: partial.value,
        error: partial.error,
    })
}

/// `X / (1 - X)`
#[inline]
pub(crate) fn resonant(x: f64) -> f64 {
    x / (1.0 - x)
}

/// A layer of `medium` and width `thickness` between two half-stacks whose
/// adjacent medium is `medium`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Gap<'a> {
    pub medium: &'a MaterialModel,
    pub thickness: f64,
    pub left: &'a ReflectionSide,
    pub right: &'a ReflectionSide,
}

impl Gap<'_> {
    /// `(1/π) ∫ Σ_p X/(1-X) k_z k_ρ dk_ρ` at frequency `ξ`.
    pub fn stress_term(&self, n: usize, xi: f64, quad: &QuadratureSpec) -> Result<Estimate> {
        let gap = OpticalMedium::at(self.medium, xi);
        let left = ResolvedSide::new(self.left, xi);
        let right = ResolvedSide::new(self.right, xi);
        let z = self.thickness;
        let est = u_integral(z, gap.k0_sq(), quad, n, |u, q| {
            let rl = left.reflection(q);
            let rr = right.reflection(q);
            let decay = (-u).exp();
            u * u * (resonant(rl[0] * rr[0] * decay) + resonant(rl[1] * rr[1] * decay))
        })?;
        Ok(est * (1.0 / (8.0 * PI * z * z * z)))
    }

    /// `(1/2π) ∫ Σ_p ln(1 - X) k_ρ dk_ρ` at frequency `ξ`.
    pub fn energy_term(&self, n: usize, xi: f64, quad: &QuadratureSpec) -> Result<Estimate> {
        let gap = OpticalMedium::at(self.medium, xi);
        let left = ResolvedSide::new(self.left, xi);
        let right = ResolvedSide::new(self.right, xi);
        let z = self.thickness;
        let est = u_integral(z, gap.k0_sq(), quad, n, |u, q| {
            let rl = left.reflection(q);
            let rr = right.reflection(q);
            let decay = (-u).exp();
            u * ((-rl[0] * rr[0] * decay).ln_1p() + (-rl[1] * rr[1] * decay).ln_1p())
        })?;
        Ok(est * (1.0 / (8.0 * PI * z * z)))
    }
}

/// Which half-stack a layer belongs to, relative to the probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeSide {
    Left,
    Right,
}

/// A finite layer addressed from the probe: `index` counts outward from
/// the probe starting at 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayerRef {
    pub side: ProbeSide,
    pub index: usize,
}

impl LayerRef {
    pub fn left(index: usize) -> Self {
        Self {
            side: ProbeSide::Left,
            index,
        }
    }

    pub fn right(index: usize) -> Self {
        Self {
            side: ProbeSide::Right,
            index,
        }
    }
}

/// A vacuum probe gap of width `z_v` between two half-stacks. Both sides
/// must have vacuum as their adjacent medium.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeGeometry {
    pub left_side: ReflectionSide,
    pub right_side: ReflectionSide,
    pub z_v: f64,
}

impl ProbeGeometry {
    pub fn new(left_side: ReflectionSide, right_side: ReflectionSide, z_v: f64) -> Result<Self> {
        let geom = Self {
            left_side,
            right_side,
            z_v,
        };
        geom.validate()?;
        Ok(geom)
    }

    /// Inserts the probe between layer `k` and layer `k + 1` of `stack`
    /// (`k = 0` puts it against the left half-space).
    pub fn split(stack: &Stack, k: usize, z_v: f64) -> Result<Self> {
        if k > stack.layers.len() {
            return Err(Error::Domain(format!(
                "probe position {k} exceeds layer count {}",
                stack.layers.len()
            )));
        }
        Self::new(
            ReflectionSide::new(
                MaterialModel::vacuum(),
                stack.layers[..k].iter().rev().cloned().collect(),
                stack.left.clone(),
            ),
            ReflectionSide::new(
                MaterialModel::vacuum(),
                stack.layers[k..].to_vec(),
                stack.right.clone(),
            ),
            z_v,
        )
    }

    pub fn with_gap(&self, z_v: f64) -> Self {
        Self {
            z_v,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.left_side.validate()?;
        self.right_side.validate()?;
        if !self.left_side.adjacent.is_vacuum() || !self.right_side.adjacent.is_vacuum() {
            return Err(Error::Domain(
                "probe sides must have vacuum as adjacent medium".into(),
            ));
        }
        if !(self.z_v >= 0.0 && self.z_v.is_finite()) {
            return Err(Error::Domain(format!("z_v must be >= 0, got {}", self.z_v)));
        }
        Ok(())
    }

    fn side(&self, side: ProbeSide) -> &ReflectionSide {
        match side {
            ProbeSide::Left => &self.left_side,
            ProbeSide::Right => &self.right_side,
        }
    }

    /// Replaces the thickness of one layer.
    pub fn with_layer_thickness(&self, layer: LayerRef, thickness: f64) -> Result<Self> {
        let mut out = self.clone();
        let side = match layer.side {
            ProbeSide::Left => &mut out.left_side,
            ProbeSide::Right => &mut out.right_side,
        };
        let slot = layer
            .index
            .checked_sub(1)
            .and_then(|i| side.remainder.get_mut(i))
            .ok_or_else(|| Error::Domain(format!("no finite layer at {layer:?}")))?;
        slot.thickness = thickness;
        Ok(out)
    }

    pub fn layer_thickness(&self, layer: LayerRef) -> Result<f64> {
        layer
            .index
            .checked_sub(1)
            .and_then(|i| self.side(layer.side).remainder.get(i))
            .map(|l| l.thickness)
            .ok_or_else(|| Error::Domain(format!("no finite layer at {layer:?}")))
    }

    fn gap(&self, width: f64) -> (MaterialModel, f64) {
        (MaterialModel::vacuum(), width)
    }
}

fn require_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "{name} must be finite and > 0, got {v}"
        )))
    }
}

/// `K_n` for the probe gap (units 1/m³, so that `T = k_B T Σ' K_n`). The
/// `n = 0` term is the static limit.
pub fn kernel_kn(
    geom: &ProbeGeometry,
    n: usize,
    temperature: f64,
    quad: &QuadratureSpec,
) -> Result<Estimate> {
    geom.validate()?;
    require_positive("z_v", geom.z_v)?;
    let (vac, z) = geom.gap(geom.z_v);
    let gap = Gap {
        medium: &vac,
        thickness: z,
        left: &geom.left_side,
        right: &geom.right_side,
    };
    gap.stress_term(n, matsubara_frequency(n, temperature), quad)
}

/// `T_zz^avg(z_v) = k_B T Σ'_n K_n`, in pascal.
pub fn stress_tensor_avg(
    geom: &ProbeGeometry,
    mats: &MatsubaraSpec,
    quad: &QuadratureSpec,
) -> Result<SeriesSum> {
    geom.validate()?;
    require_positive("z_v", geom.z_v)?;
    quad.validate()?;
    let (vac, z) = geom.gap(geom.z_v);
    let gap = Gap {
        medium: &vac,
        thickness: z,
        left: &geom.left_side,
        right: &geom.right_side,
    };
    matsubara::sum_series(mats, |n, xi| gap.stress_term(n, xi, quad))
}

/// `∫_∞^δ T_zz^avg dz_v = (k_B T/2π) Σ' ∫ k_ρ Σ_p ln(1 - R̃_L R̃_R e^{-2k_zv δ}) dk_ρ`,
/// in J/m². Unbounded as `δ → 0`.
pub fn work_to_close_gap(
    geom: &ProbeGeometry,
    delta: f64,
    mats: &MatsubaraSpec,
    quad: &QuadratureSpec,
) -> Result<SeriesSum> {
    geom.validate()?;
    require_positive("delta", delta)?;
    quad.validate()?;
    let (vac, z) = geom.gap(delta);
    let gap = Gap {
        medium: &vac,
        thickness: z,
        left: &geom.left_side,
        right: &geom.right_side,
    };
    matsubara::sum_series(mats, |n, xi| gap.energy_term(n, xi, quad))
}

/// Per-frequency gap-closure integrand at probe width `delta` (0 for the
/// closed limit): `(1/π) ∫ k_ρ k_zr Σ_p (N/D) e^{-2k_zr z_r} e^{-2k_zv δ} / (1 - R̃_L R̃_R e^{-2k_zv δ}) dk_ρ`
/// with `N/D = R̃_other · dR̃/dx`.
fn gap_closure_term(
    geom: &ProbeGeometry,
    layer: LayerRef,
    delta: f64,
    n: usize,
    xi: f64,
    quad: &QuadratureSpec,
) -> Result<Estimate> {
    let (own, other) = match layer.side {
        ProbeSide::Left => (&geom.left_side, &geom.right_side),
        ProbeSide::Right => (&geom.right_side, &geom.left_side),
    };
    let own = ResolvedSide::new(own, xi);
    let other = ResolvedSide::new(other, xi);
    let j = layer.index;
    let target = &geom.side(layer.side).remainder[j - 1];
    let medium = OpticalMedium::at(&target.material, xi);
    let zr = target.thickness;
    let kv_sq = (xi / SPEED_OF_LIGHT).powi(2);
    let est = u_integral(zr, medium.k0_sq(), quad, n, |u, q| {
        let dep = own.layer_dependence(q, j);
        let r_own = dep.reflection();
        let slope = dep.slope();
        let r_other = other.reflection(q);
        let probe = if delta == 0.0 {
            1.0
        } else {
            (-2.0 * (q + kv_sq).sqrt() * delta).exp()
        };
        let mut s = 0.0;
        for p in 0..2 {
            let nd = r_other[p] * slope[p];
            s += nd * dep.x * probe / (1.0 - r_own[p] * r_other[p] * probe);
        }
        u * u * s
    })?;
    Ok(est * (1.0 / (8.0 * PI * zr * zr * zr)))
}

fn check_layer(geom: &ProbeGeometry, layer: LayerRef) -> Result<()> {
    geom.layer_thickness(layer).map(|_| ())
}

/// `∫_∞^0 ∂T_zz^avg/∂z_r dz_v`, evaluated in closed form with the probe
/// fully closed (`δ = 0`). Units: Pa.
pub fn gap_closure_derivative(
    geom: &ProbeGeometry,
    layer: LayerRef,
    mats: &MatsubaraSpec,
    quad: &QuadratureSpec,
) -> Result<SeriesSum> {
    geom.validate()?;
    check_layer(geom, layer)?;
    quad.validate()?;
    matsubara::sum_series(mats, |n, xi| {
        gap_closure_term(geom, layer, 0.0, n, xi, quad)
    })
}

/// `∂/∂z_r ∫_∞^δ T_zz^avg dz_v` at finite probe width `δ`.
pub fn gap_closure_derivative_regularized(
    geom: &ProbeGeometry,
    layer: LayerRef,
    delta: f64,
    mats: &MatsubaraSpec,
    quad: &QuadratureSpec,
) -> Result<SeriesSum> {
    geom.validate()?;
    check_layer(geom, layer)?;
    require_positive("delta", delta)?;
    quad.validate()?;
    matsubara::sum_series(mats, |n, xi| {
        gap_closure_term(geom, layer, delta, n, xi, quad)
    })
}

/// Single-frequency form of [`gap_closure_derivative`] (no `k_B T`, no
/// primed weight), for per-term comparisons.
pub fn gap_closure_kernel(
    geom: &ProbeGeometry,
    layer: LayerRef,
    delta: f64,
    n: usize,
    temperature: f64,
    quad: &QuadratureSpec,
) -> Result<Estimate> {
    geom.validate()?;
    check_layer(geom, layer)?;
    if delta.is_nan() || delta < 0.0 {
        return Err(Error::Domain(format!("delta must be >= 0, got {delta}")));
    }
    gap_closure_term(
        geom,
        layer,
        delta,
        n,
        matsubara_frequency(n, temperature),
        quad,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::em_core::Layer;

    fn diel(c: f64, w: f64) -> MaterialModel {
        MaterialModel::single_oscillator(c, w, 0.0)
    }

    fn half_spaces(l: MaterialModel, r: MaterialModel, z: f64) -> ProbeGeometry {
        ProbeGeometry::new(
            ReflectionSide::interface(MaterialModel::vacuum(), l),
            ReflectionSide::interface(MaterialModel::vacuum(), r),
            z,
        )
        .unwrap()
    }

    fn polylog3(x: f64) -> f64 {
        (1..2000).map(|k| x.powi(k) / (k as f64).powi(3)).sum()
    }

    #[test]
    fn vacuum_everywhere_is_zero() {
        let v = MaterialModel::vacuum();
        let g = half_spaces(v.clone(), v, 1e-8);
        let q = QuadratureSpec::default();
        assert_eq!(kernel_kn(&g, 0, 300.0, &q).unwrap().value, 0.0);
        assert_eq!(kernel_kn(&g, 5, 300.0, &q).unwrap().value, 0.0);
        let m = MatsubaraSpec::at(300.0);
        assert_eq!(stress_tensor_avg(&g, &m, &q).unwrap().value, 0.0);
        assert_eq!(work_to_close_gap(&g, 1e-9, &m, &q).unwrap().value, 0.0);
    }

    #[test]
    fn static_term_is_polylog() {
        // n = 0, constant ε: K_0 = Li3(Δ²)/(4π z³)
        let eps = 3.0;
        let d = (eps - 1.0) / (eps + 1.0);
        let z = 2e-9;
        let g = half_spaces(
            MaterialModel::constant(eps),
            MaterialModel::constant(eps),
            z,
        );
        let k0 = kernel_kn(&g, 0, 300.0, &QuadratureSpec::default()).unwrap();
        let exact = polylog3(d * d) / (4.0 * PI * z * z * z);
        assert!(
            (k0.value / exact - 1.0).abs() < 1e-10,
            "{} vs {exact}",
            k0.value
        );
    }

    #[test]
    fn left_right_exchange() {
        let a = diel(2.0, 1e16);
        let b = diel(4.0, 3e15).with_permeability(1.3);
        let q = QuadratureSpec::default();
        let g1 = half_spaces(a.clone(), b.clone(), 5e-9);
        let g2 = half_spaces(b, a, 5e-9);
        for n in [0, 1, 17] {
            let k1 = kernel_kn(&g1, n, 300.0, &q).unwrap().value;
            let k2 = kernel_kn(&g2, n, 300.0, &q).unwrap().value;
            assert_eq!(k1, k2);
        }
    }

    #[test]
    fn large_gap_suppressed() {
        let a = diel(2.0, 1e16);
        let q = QuadratureSpec::default();
        let near = kernel_kn(&half_spaces(a.clone(), a.clone(), 1e-8), 3, 300.0, &q).unwrap();
        let far = kernel_kn(&half_spaces(a.clone(), a, 1e-3), 3, 300.0, &q).unwrap();
        assert!(far.value.abs() < 1e-30 * near.value.abs());
    }

    #[test]
    fn hot_limit_is_half_static_term() {
        let a = diel(2.0, 1e16);
        let g = half_spaces(a.clone(), a, 1e-6);
        let q = QuadratureSpec::default();
        let t = 1e4;
        let mats = MatsubaraSpec::at(t);
        let full = stress_tensor_avg(&g, &mats, &q).unwrap();
        let k0 = kernel_kn(&g, 0, t, &q).unwrap();
        let half = 0.5 * mats.thermal_energy() * k0.value;
        assert!((full.value / half - 1.0).abs() < 1e-12);
    }

    #[test]
    fn split_stack_sides() {
        let stack = Stack::new(
            diel(1.0, 1e16),
            vec![
                Layer::new(diel(2.0, 1e16), 1e-9),
                Layer::new(diel(3.0, 1e16), 2e-9),
            ],
            diel(4.0, 1e16),
        );
        let g = ProbeGeometry::split(&stack, 1, 1e-9).unwrap();
        assert_eq!(g.left_side.remainder.len(), 1);
        assert_eq!(g.right_side.remainder.len(), 1);
        assert_eq!(g.layer_thickness(LayerRef::right(1)).unwrap(), 2e-9);
        assert!(g.layer_thickness(LayerRef::right(2)).is_err());
        assert!(ProbeGeometry::split(&stack, 3, 1e-9).is_err());
    }

    #[test]
    fn probe_sides_must_be_vacuum() {
        let a = diel(2.0, 1e16);
        let r = ProbeGeometry::new(
            ReflectionSide::interface(a.clone(), a.clone()),
            ReflectionSide::interface(MaterialModel::vacuum(), a),
            1e-9,
        );
        assert!(r.is_err());
    }

    #[test]
    fn identical_media_gap_derivative_zero() {
        let m = diel(2.0, 1e16);
        // probe inside a homogeneous medium except for the vacuum probe
        // itself: film and backing identical to the far half-space
        let g = ProbeGeometry::new(
            ReflectionSide::interface(MaterialModel::vacuum(), MaterialModel::vacuum()),
            ReflectionSide::new(
                MaterialModel::vacuum(),
                vec![Layer::new(m.clone(), 5e-9)],
                m,
            ),
            0.0,
        )
        .unwrap();
        let s = gap_closure_derivative(
            &g,
            LayerRef::right(1),
            &MatsubaraSpec::at(300.0),
            &QuadratureSpec::default(),
        )
        .unwrap();
        assert_eq!(s.value, 0.0);
    }

    #[test]
    fn work_derivative_is_stress() {
        let a = diel(2.0, 1e16);
        let b = diel(1.0, 5e15);
        let g = half_spaces(a, b, 8e-9);
        let q = QuadratureSpec::default().with_rel_tol(1e-12);
        let t = stress_tensor_avg(&g, &MatsubaraSpec::at(300.0), &q).unwrap();
        let fixed = MatsubaraSpec::at(300.0).with_fixed_terms(t.n_used);
        let h = 1e-4 * g.z_v;
        let wp = work_to_close_gap(&g, g.z_v + h, &fixed, &q).unwrap().value;
        let wm = work_to_close_gap(&g, g.z_v - h, &fixed, &q).unwrap().value;
        let fd = (wp - wm) / (2.0 * h);
        assert!((fd / t.value - 1.0).abs() < 1e-6, "{fd} vs {}", t.value);
    }

    #[test]
    fn rejects_nonpositive_delta() {
        let a = diel(2.0, 1e16);
        let g = half_spaces(a.clone(), a, 1e-9);
        let m = MatsubaraSpec::at(300.0);
        let q = QuadratureSpec::default();
        assert!(matches!(
            work_to_close_gap(&g, 0.0, &m, &q),
            Err(Error::Domain(_))
        ));
        assert!(work_to_close_gap(&g, -1e-9, &m, &q).is_err());
    }
}
