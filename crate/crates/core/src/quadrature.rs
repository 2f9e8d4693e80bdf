//! Globally adaptive Gauss–Kronrod (10/21-point) quadrature.
//!
//! The error estimate and its rescaling follow QUADPACK's `qk21`. The
//! interval with the largest error is bisected until the summed error is
//! below `max(abs_tol, rel_tol · |I|)`.

/// Numerical control for the `k_ρ` integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    /// Absolute floor, in the units of the integrand.
    pub abs_tol: f64,
    /// Maximum bisection depth of any subinterval.
    pub max_depth: u32,
    /// Length of the integration window in the dimensionless exponential
    /// variable `u` (the integrand carries a factor `e^{-u}`).
    pub tail_cutoff: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-300,
            max_depth: 60,
            tail_cutoff: 60.0,
        }
    }
}

impl QuadratureSpec {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> crate::Result<()> {
        if !(self.rel_tol > 0.0
            && self.abs_tol > 0.0
            && self.max_depth >= 1
            && self.tail_cutoff > 0.0)
        {
            return Err(crate::Error::Domain(format!(
                "invalid quadrature spec {self:?}: tolerances and tail_cutoff must be > 0, max_depth >= 1"
            )));
        }
        Ok(())
    }
}

/// Integral value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl std::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, rhs: Estimate) -> Estimate {
        Estimate {
            value: self.value + rhs.value,
            error: self.error + rhs.error,
        }
    }
}

impl std::ops::Mul<f64> for Estimate {
    type Output = Estimate;
    fn mul(self, s: f64) -> Estimate {
        Estimate {
            value: self.value * s,
            error: self.error * s.abs(),
        }
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208980460000,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// weights of the 10-point Gauss rule at XGK[1], XGK[3], ..., XGK[9]
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// One 21-point Kronrod panel on `[a, b]`.
fn qk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Estimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut resk = fc * WGK[10];
    let mut resg = 0.0;
    let mut resabs = fc.abs() * WGK[10];
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = resk * 0.5;
    let mut resasc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    Estimate { value, error }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    est: Estimate,
    depth: u32,
}

/// Hard cap on the number of live subintervals.
const MAX_PANELS: usize = 4000;

/// Integrates `f` over consecutive pieces delimited by `points` (sorted,
/// at least two entries). On failure the partial estimate is returned in
/// `Err`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    spec: &QuadratureSpec,
) -> Result<Estimate, Estimate> {
    assert!(points.len() >= 2, "need at least one interval");
    let mut panels: Vec<Panel> = points
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| Panel {
            a: w[0],
            b: w[1],
            est: qk21(&f, w[0], w[1]),
            depth: 0,
        })
        .collect();
    loop {
        let total = panels
            .iter()
            .fold(Estimate::default(), |acc, p| acc + p.est);
        let target = spec.abs_tol.max(spec.rel_tol * total.value.abs());
        if total.error <= target || !total.value.is_finite() {
            return if total.value.is_finite() {
                Ok(total)
            } else {
                Err(total)
            };
        }
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| p.depth < spec.max_depth)
            .max_by(|x, y| x.1.est.error.total_cmp(&y.1.est.error))
            .map(|(i, _)| i);
        let Some(i) = worst else {
            return Err(total);
        };
        if panels.len() >= MAX_PANELS {
            return Err(total);
        }
        let p = panels[i];
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            // interval no longer representable; accept what we have
            panels[i].depth = spec.max_depth;
            continue;
        }
        panels[i] = Panel {
            a: p.a,
            b: mid,
            est: qk21(&f, p.a, mid),
            depth: p.depth + 1,
        };
        panels.push(Panel {
            a: mid,
            b: p.b,
            est: qk21(&f, mid, p.b),
            depth: p.depth + 1,
        });
    }
}
