//! Wavevectors and reflection coefficients at imaginary frequencies.
//!
//! Subscript order follows the usual convention: `R_ab` is the amplitude
//! reflection for a wave travelling in medium `a` and reflecting off
//! medium `b`. On the imaginary axis every coefficient is real.

use crate::constants::SPEED_OF_LIGHT;
use crate::error::{Error, Result};
use crate::materials::{MaterialModel, StaticPermittivity};

/// Transverse electric (`E`) or transverse magnetic (`H`) polarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    E,
    H,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::E, Polarization::H];

    #[inline]
    pub(crate) fn index(self) -> usize {
        match self {
            Polarization::E => 0,
            Polarization::H => 1,
        }
    }
}

/// `k_z = sqrt(k_ρ² + εμξ²/c²)`.
pub fn kz(xi: f64, krho: f64, eps: f64, mu: f64) -> f64 {
    let k0 = xi / SPEED_OF_LIGHT;
    (krho * krho + eps * mu * k0 * k0).sqrt()
}

/// A finite layer.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub material: MaterialModel,
    /// Thickness in meters.
    pub thickness: f64,
}

impl Layer {
    pub fn new(material: MaterialModel, thickness: f64) -> Self {
        Self {
            material,
            thickness,
        }
    }
}

fn check_thickness(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "layer thickness must be finite and > 0, got {t}"
        )))
    }
}

/// Two semi-infinite half-spaces with an ordered list of finite layers
/// between them (left to right).
#[derive(Debug, Clone, PartialEq)]
pub struct Stack {
    pub left: MaterialModel,
    pub layers: Vec<Layer>,
    pub right: MaterialModel,
}

impl Stack {
    pub fn new(left: MaterialModel, layers: Vec<Layer>, right: MaterialModel) -> Self {
        Self {
            left,
            layers,
            right,
        }
    }

    /// `left | film(thickness) | right`.
    pub fn film(
        left: MaterialModel,
        film: MaterialModel,
        thickness: f64,
        right: MaterialModel,
    ) -> Self {
        Self::new(left, vec![Layer::new(film, thickness)], right)
    }

    pub fn validate(&self) -> Result<()> {
        self.left.validate()?;
        self.right.validate()?;
        for layer in &self.layers {
            layer.material.validate()?;
            check_thickness(layer.thickness)?;
        }
        Ok(())
    }

    /// The two half-stacks seen from inside layer `r` (1-based): the left
    /// side lists layers `r-1, …, 1` then `L`; the right side lists
    /// `r+1, …, N` then `R`.
    pub fn sides_of_layer(&self, r: usize) -> Result<(ReflectionSide, ReflectionSide)> {
        let n = self.layers.len();
        if r == 0 || r > n {
            return Err(Error::Domain(format!(
                "layer index {r} out of range 1..={n}"
            )));
        }
        let medium = self.layers[r - 1].material.clone();
        let left = ReflectionSide {
            adjacent: medium.clone(),
            remainder: self.layers[..r - 1].iter().rev().cloned().collect(),
            terminal: self.left.clone(),
        };
        let right = ReflectionSide {
            adjacent: medium,
            remainder: self.layers[r..].to_vec(),
            terminal: self.right.clone(),
        };
        Ok((left, right))
    }
}

/// Everything on one side of a reference layer: the medium the wave travels
/// in (`adjacent`), the finite layers ordered away from it, and the
/// semi-infinite backing (`terminal`).
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionSide {
    pub adjacent: MaterialModel,
    pub remainder: Vec<Layer>,
    pub terminal: MaterialModel,
}

impl ReflectionSide {
    pub fn new(adjacent: MaterialModel, remainder: Vec<Layer>, terminal: MaterialModel) -> Self {
        Self {
            adjacent,
            remainder,
            terminal,
        }
    }

    /// A bare interface `adjacent | terminal`.
    pub fn interface(adjacent: MaterialModel, terminal: MaterialModel) -> Self {
        Self::new(adjacent, Vec::new(), terminal)
    }

    pub fn validate(&self) -> Result<()> {
        self.adjacent.validate()?;
        self.terminal.validate()?;
        for layer in &self.remainder {
            layer.material.validate()?;
            check_thickness(layer.thickness)?;
        }
        Ok(())
    }

    pub fn resolve(&self, xi: f64) -> ResolvedSide {
        ResolvedSide::new(self, xi)
    }
}

/// A medium with `ε`, `μ` frozen at one Matsubara frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalMedium {
    pub eps: f64,
    pub mu: f64,
    /// `εμξ²/c²`
    k0_sq: f64,
    /// Set only at `ξ = 0` for a Drude conductor.
    divergence: Option<(u8, f64)>,
}

impl OpticalMedium {
    /// Resolves `material` at `ξ`. At `ξ = 0` a Drude conductor is kept as
    /// a divergent permittivity so that reflection coefficients take their
    /// limiting values.
    pub fn at(material: &MaterialModel, xi: f64) -> Self {
        let mu = material.eval_permeability(xi);
        if xi == 0.0 {
            return match material.static_permittivity() {
                StaticPermittivity::Finite(eps) => Self {
                    eps,
                    mu,
                    k0_sq: 0.0,
                    divergence: None,
                },
                StaticPermittivity::Divergent { order, coefficient } => Self {
                    eps: f64::INFINITY,
                    mu,
                    k0_sq: 0.0,
                    divergence: Some((order, coefficient)),
                },
            };
        }
        let eps = material
            .eval_permittivity(xi)
            .expect("permittivity is finite for xi > 0");
        let k0 = xi / SPEED_OF_LIGHT;
        Self {
            eps,
            mu,
            k0_sq: eps * mu * k0 * k0,
            divergence: None,
        }
    }

    /// `εμ(ξ/c)²`, the offset between `k_z²` and `k_ρ²`.
    #[inline]
    pub fn k0_sq(&self) -> f64 {
        self.k0_sq
    }

    #[inline]
    pub fn kz(&self, krho_sq: f64) -> f64 {
        (krho_sq + self.k0_sq).sqrt()
    }

    /// Same medium response (both `ε` and `μ`), so the interface is invisible.
    #[inline]
    fn same_response(&self, other: &Self) -> bool {
        self.eps == other.eps && self.mu == other.mu && self.divergence == other.divergence
    }
}

/// `(x - y) / (x + y)` guarding `0/0` (both wavevectors vanish at `ξ = k_ρ = 0`).
#[inline]
fn ratio(x: f64, y: f64) -> f64 {
    let s = x + y;
    if s == 0.0 {
        0.0
    } else {
        (x - y) / s
    }
}

/// `[R_ab^(e), R_ab^(h)]` for resolved media with precomputed `k_z`.
#[inline]
pub(crate) fn fresnel_pair(a: &OpticalMedium, kza: f64, b: &OpticalMedium, kzb: f64) -> [f64; 2] {
    if a.same_response(b) {
        return [0.0, 0.0];
    }
    // at ξ = 0 all k_z coincide; drop them so ξ = k_ρ = 0 stays defined
    let (kza, kzb) = if kza == 0.0 && kzb == 0.0 {
        (1.0, 1.0)
    } else {
        (kza, kzb)
    };
    let e = ratio(kza * b.mu, kzb * a.mu);
    let h = match (a.divergence, b.divergence) {
        (None, None) => ratio(kza * b.eps, kzb * a.eps),
        (Some(_), None) => -1.0,
        (None, Some(_)) => 1.0,
        (Some((oa, ca)), Some((ob, cb))) => {
            if oa == ob {
                ratio(cb, ca)
            } else if oa > ob {
                -1.0
            } else {
                1.0
            }
        }
    };
    [e, h]
}

/// `(r_ab + r_bc x) / (1 + r_ab r_bc x)`, one Möbius update.
#[inline]
fn through_layer(front: f64, back: f64, x: f64) -> f64 {
    let bx = back * x;
    (front + bx) / (1.0 + front * bx)
}

/// Dependence of a generalized reflection on one layer's thickness:
/// `R̃ = (a1 + a2 x) / (a3 + a4 x)` with `x = exp(-2 k_z t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerDependence {
    /// `k_z` in the layer.
    pub kz: f64,
    /// `exp(-2 k_z t)`.
    pub x: f64,
    /// `[a1, a2, a3, a4]` per polarization.
    pub coefficients: [[f64; 4]; 2],
}

impl LayerDependence {
    /// `R̃` evaluated from the Möbius coefficients.
    pub fn reflection(&self) -> [f64; 2] {
        self.coefficients
            .map(|[a1, a2, a3, a4]| (a1 + a2 * self.x) / (a3 + a4 * self.x))
    }

    /// `(a2 a3 - a1 a4) / (a3 + a4 x)²`, i.e. `dR̃/dx`.
    pub fn slope(&self) -> [f64; 2] {
        self.coefficients.map(|[a1, a2, a3, a4]| {
            let d = a3 + a4 * self.x;
            (a2 * a3 - a1 * a4) / (d * d)
        })
    }
}

/// A [`ReflectionSide`] with every medium resolved at one frequency.
#[derive(Debug, Clone)]
pub struct ResolvedSide {
    adjacent: OpticalMedium,
    layers: Vec<(OpticalMedium, f64)>,
    terminal: OpticalMedium,
}

impl ResolvedSide {
    pub fn new(side: &ReflectionSide, xi: f64) -> Self {
        Self {
            adjacent: OpticalMedium::at(&side.adjacent, xi),
            layers: side
                .remainder
                .iter()
                .map(|l| (OpticalMedium::at(&l.material, xi), l.thickness))
                .collect(),
            terminal: OpticalMedium::at(&side.terminal, xi),
        }
    }

    pub fn adjacent(&self) -> &OpticalMedium {
        &self.adjacent
    }

    pub fn layer_count(&self) -> usize {
        self.layers.len()
    }

    /// Medium `i` counting the adjacent medium as 0 and the terminal as `n + 1`.
    #[inline]
    fn medium(&self, i: usize) -> &OpticalMedium {
        if i == 0 {
            &self.adjacent
        } else if i <= self.layers.len() {
            &self.layers[i - 1].0
        } else {
            &self.terminal
        }
    }

    /// Reflection seen from inside medium `from` looking towards the
    /// terminal, computed back to front. Returns the coefficient pair and
    /// `k_z` in medium `from`.
    fn reflection_from(&self, krho_sq: f64, from: usize) -> ([f64; 2], f64) {
        let n = self.layers.len();
        let mut kz_next = self.terminal.kz(krho_sq);
        let mut r = [0.0; 2];
        for j in (from..=n).rev() {
            let medium = self.medium(j);
            let kz = medium.kz(krho_sq);
            let f = fresnel_pair(medium, kz, self.medium(j + 1), kz_next);
            r = if j == n {
                f
            } else {
                let x = (-2.0 * kz_next * self.layers[j].1).exp();
                [through_layer(f[0], r[0], x), through_layer(f[1], r[1], x)]
            };
            kz_next = kz;
        }
        (r, kz_next)
    }

    /// `[R̃^(e), R̃^(h)]` seen from the adjacent medium at transverse
    /// wavevector `k_ρ = sqrt(krho_sq)`.
    pub fn reflection(&self, krho_sq: f64) -> [f64; 2] {
        self.reflection_from(krho_sq, 0).0
    }

    /// Möbius form of `R̃` in `x = exp(-2 k_z t)` of layer `j` (1-based).
    pub fn layer_dependence(&self, krho_sq: f64, j: usize) -> LayerDependence {
        assert!(
            j >= 1 && j <= self.layers.len(),
            "layer {j} outside 1..={}",
            self.layers.len()
        );
        let (beyond, kz) = self.reflection_from(krho_sq, j);
        let x = (-2.0 * kz * self.layers[j - 1].1).exp();
        let mut kz_inner = kz;
        let mut coefficients = [[0.0; 4]; 2];
        for p in 0..2 {
            coefficients[p] = [0.0, beyond[p], 1.0, 0.0];
        }
        // walk from layer j back to the adjacent medium
        for i in (0..j).rev() {
            let medium = self.medium(i);
            let kz_i = medium.kz(krho_sq);
            let f = fresnel_pair(medium, kz_i, self.medium(i + 1), kz_inner);
            // transmission phase of medium i + 1 is x itself for the first
            // step; later steps use the intervening layer's own factor
            let xi_factor = if i + 1 == j {
                None
            } else {
                Some((-2.0 * kz_inner * self.layers[i].1).exp())
            };
            for p in 0..2 {
                let [a1, a2, a3, a4] = coefficients[p];
                let next = match xi_factor {
                    None => [f[p], a2, 1.0, f[p] * a2],
                    Some(y) => [
                        f[p] * a3 + y * a1,
                        f[p] * a4 + y * a2,
                        a3 + f[p] * y * a1,
                        a4 + f[p] * y * a2,
                    ],
                };
                let scale = next.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                coefficients[p] = if scale > 0.0 {
                    next.map(|v| v / scale)
                } else {
                    next
                };
            }
            kz_inner = kz_i;
        }
        LayerDependence {
            kz,
            x,
            coefficients,
        }
    }
}

/// Fresnel coefficient `R_ab` for incidence from `mat_a` onto `mat_b`.
pub fn fresnel(
    pol: Polarization,
    xi: f64,
    krho: f64,
    mat_a: &MaterialModel,
    mat_b: &MaterialModel,
) -> f64 {
    let a = OpticalMedium::at(mat_a, xi);
    let b = OpticalMedium::at(mat_b, xi);
    let q = krho * krho;
    fresnel_pair(&a, a.kz(q), &b, b.kz(q))[pol.index()]
}

/// Generalized reflection coefficient of a half-stack.
pub fn generalized_reflection(pol: Polarization, xi: f64, krho: f64, side: &ReflectionSide) -> f64 {
    side.resolve(xi).reflection(krho * krho)[pol.index()]
}

/// `(r_ab + r_bc) / (1 + r_ab r_bc)`: the reflection from `a` onto `c` when
/// the intermediate medium `b` has zero thickness.
pub fn composition(r_ab: f64, r_bc: f64) -> Result<f64> {
    let den = 1.0 + r_ab * r_bc;
    if den == 0.0 {
        return Err(Error::DegenerateComposition);
    }
    Ok((r_ab + r_bc) / den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::OscillatorTerm;

    fn diel(c: f64, w: f64) -> MaterialModel {
        MaterialModel::single_oscillator(c, w, 0.0)
    }

    #[test]
    fn kz_examples() {
        assert_eq!(kz(0.0, 7e8, 1.0, 1.0), 7e8);
        assert_eq!(kz(3.0 * SPEED_OF_LIGHT, 4.0, 1.0, 1.0), 5.0);
        assert_eq!(kz(0.0, 1.3e7, 4.0, 1.0), 1.3e7);
    }

    #[test]
    fn fresnel_examples() {
        let a = diel(2.0, 1e16);
        assert_eq!(fresnel(Polarization::H, 1e15, 1e7, &a, &a), 0.0);
        assert_eq!(fresnel(Polarization::E, 1e15, 1e7, &a, &a), 0.0);
        let v = MaterialModel::vacuum();
        let b = MaterialModel::constant(3.0);
        assert_eq!(fresnel(Polarization::H, 0.0, 2e8, &v, &b), 0.5);
        assert_eq!(fresnel(Polarization::H, 0.0, 0.0, &v, &b), 0.5);
        assert_eq!(fresnel(Polarization::E, 0.0, 2e8, &v, &b), 0.0);
        let ab = fresnel(Polarization::H, 2e15, 3e6, &a, &b);
        let ba = fresnel(Polarization::H, 2e15, 3e6, &b, &a);
        assert_eq!(ab, -ba);
    }

    #[test]
    fn drude_static_limit_is_mirror_in_tm() {
        let v = MaterialModel::vacuum();
        let au = MaterialModel::drude(1.37e16, 5.32e13);
        assert_eq!(fresnel(Polarization::H, 0.0, 1e7, &v, &au), 1.0);
        assert_eq!(fresnel(Polarization::H, 0.0, 1e7, &au, &v), -1.0);
        assert_eq!(fresnel(Polarization::E, 0.0, 1e7, &v, &au), 0.0);
        // two conductors compare ω_p²/γ
        let ag = MaterialModel::drude(1.37e16, 2.0 * 5.32e13);
        let r = fresnel(Polarization::H, 0.0, 1e7, &au, &ag);
        assert!((r - (0.5 - 1.0) / (0.5 + 1.0)).abs() < 1e-15);
    }

    #[test]
    fn empty_remainder_is_fresnel() {
        let a = diel(1.5, 2e16);
        let b = diel(4.0, 5e15);
        let side = ReflectionSide::interface(a.clone(), b.clone());
        for pol in Polarization::BOTH {
            assert_eq!(
                generalized_reflection(pol, 3e15, 2e7, &side),
                fresnel(pol, 3e15, 2e7, &a, &b)
            );
        }
    }

    #[test]
    fn thick_film_decouples_backing() {
        let v = MaterialModel::vacuum();
        let m = diel(2.0, 1e16);
        let r = diel(5.0, 3e15);
        let side = ReflectionSide::new(v.clone(), vec![Layer::new(m.clone(), 1.0)], r);
        for pol in Polarization::BOTH {
            let g = generalized_reflection(pol, 2e15, 1e7, &side);
            let f = fresnel(pol, 2e15, 1e7, &v, &m);
            assert!((g - f).abs() < 1e-12);
        }
    }

    #[test]
    fn vanishing_film_composes() {
        let v = MaterialModel::vacuum();
        let m = diel(2.0, 1e16);
        let r = diel(5.0, 3e15);
        let side = ReflectionSide::new(v.clone(), vec![Layer::new(m.clone(), 1e-30)], r.clone());
        for pol in Polarization::BOTH {
            let (xi, k) = (2e15, 1e7);
            let g = generalized_reflection(pol, xi, k, &side);
            let direct = fresnel(pol, xi, k, &v, &r);
            let composed =
                composition(fresnel(pol, xi, k, &v, &m), fresnel(pol, xi, k, &m, &r)).unwrap();
            assert!((g - composed).abs() < 1e-14);
            assert!((g - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn composition_examples() {
        assert_eq!(composition(0.0, 0.37).unwrap(), 0.37);
        assert_eq!(composition(0.4, -0.4).unwrap(), 0.0);
        assert_eq!(composition(1.0, -1.0), Err(Error::DegenerateComposition));
    }

    #[test]
    fn layer_dependence_reproduces_reflection() {
        let v = MaterialModel::vacuum();
        let layers = vec![
            Layer::new(diel(2.0, 1e16), 3e-9),
            Layer::new(
                MaterialModel::lorentz(0.2, vec![OscillatorTerm::new(3.0, 4e15, 1e14)]),
                7e-9,
            ),
            Layer::new(diel(0.5, 2e16).with_permeability(1.7), 2e-9),
        ];
        let side = ReflectionSide::new(v, layers, diel(6.0, 1e15));
        let res = side.resolve(1.3e15);
        let q = 4e15;
        let direct = res.reflection(q);
        for j in 1..=3 {
            let dep = res.layer_dependence(q, j);
            let via = dep.reflection();
            for p in 0..2 {
                assert!((via[p] - direct[p]).abs() < 1e-14, "layer {j}, pol {p}");
            }
        }
    }

    #[test]
    fn layer_dependence_slope_matches_secant() {
        let v = MaterialModel::vacuum();
        let mk = |t2: f64| {
            ReflectionSide::new(
                v.clone(),
                vec![
                    Layer::new(diel(2.0, 1e16), 3e-9),
                    Layer::new(diel(3.0, 4e15), t2),
                ],
                diel(6.0, 1e15),
            )
        };
        let xi = 1e15;
        let q = 1e16;
        let t = 5e-9;
        let dep = mk(t).resolve(xi).layer_dependence(q, 2);
        let h = 1e-13;
        let rp = mk(t + h).resolve(xi).reflection(q);
        let rm = mk(t - h).resolve(xi).reflection(q);
        let slope = dep.slope();
        for p in 0..2 {
            // dR/dt = -2 k_z x dR/dx
            let analytic = -2.0 * dep.kz * dep.x * slope[p];
            let numeric = (rp[p] - rm[p]) / (2.0 * h);
            assert!(
                (analytic - numeric).abs() <= 1e-6 * analytic.abs().max(1e-300),
                "{analytic} vs {numeric}"
            );
        }
    }

    #[test]
    fn sides_of_layer() {
        let a = diel(1.0, 1e16);
        let b = diel(2.0, 1e16);
        let c = diel(3.0, 1e16);
        let stack = Stack::new(
            MaterialModel::vacuum(),
            vec![
                Layer::new(a.clone(), 1e-9),
                Layer::new(b.clone(), 2e-9),
                Layer::new(c.clone(), 3e-9),
            ],
            MaterialModel::constant(5.0),
        );
        let (l, r) = stack.sides_of_layer(2).unwrap();
        assert_eq!(l.adjacent, b);
        assert_eq!(l.remainder, vec![Layer::new(a, 1e-9)]);
        assert_eq!(r.remainder, vec![Layer::new(c, 3e-9)]);
        assert!(stack.sides_of_layer(0).is_err());
        assert!(stack.sides_of_layer(4).is_err());
    }
}
