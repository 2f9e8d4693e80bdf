//! Trilogarithm `Li₃(x)` on `[-1, 1]`.
//!
//! Power series for `|x| ≤ 1/2`, the expansion in `μ = ln x` about `x = 1`
//! for `x > 1/2`, and the duplication formula
//! `Li₃(x) + Li₃(-x) = Li₃(x²)/4` for `x < -1/2`.

use crate::error::{Error, Result};

const ZETA2: f64 = std::f64::consts::PI * std::f64::consts::PI / 6.0;
const ZETA3: f64 = 1.202_056_903_159_594_3;

/// `B_{2j}` for `j = 1..=12`.
const BERNOULLI_EVEN: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

fn series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut pow = x;
    for k in 1..200 {
        let term = pow / (k as f64).powi(3);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
        pow *= x;
    }
    sum
}

/// `Li₃(e^μ)` for `-ln 2 ≤ μ ≤ 0`.
fn near_one(mu: f64) -> f64 {
    if mu == 0.0 {
        return ZETA3;
    }
    let mut sum = ZETA3 + ZETA2 * mu + (1.5 - (-mu).ln()) * mu * mu / 2.0;
    // ζ(0) μ³/3!, then ζ(1-2j) μ^{2j+2}/(2j+2)! with ζ(1-2j) = -B_{2j}/(2j)
    sum -= mu.powi(3) / 12.0;
    let mut fact = 24.0;
    let mut pow = mu.powi(4);
    for (i, b) in BERNOULLI_EVEN.iter().enumerate() {
        let j = (i + 1) as f64;
        if i > 0 {
            let k = 2.0 * j + 2.0;
            fact *= (k - 1.0) * k;
            pow *= mu * mu;
        }
        let term = -b / (2.0 * j) * pow / fact;
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// `Li₃(x) = Σ_{k≥1} x^k / k³` for `-1 ≤ x ≤ 1`.
pub fn polylog3(x: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!(
            "trilogarithm argument must lie in [-1, 1], got {x}"
        )));
    }
    Ok(if x.abs() <= 0.5 {
        series(x)
    } else if x > 0.0 {
        near_one(x.ln())
    } else {
        let y = -x;
        near_one((y * y).ln()) / 4.0 - near_one(y.ln())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(x: f64) -> f64 {
        let mut s = 0.0;
        for k in (1..2_000_000u64).rev() {
            let kf = k as f64;
            s += x.powf(kf) / (kf * kf * kf);
        }
        s
    }

    #[test]
    fn special_values() {
        assert_eq!(polylog3(0.0).unwrap(), 0.0);
        assert!((polylog3(1.0).unwrap() - ZETA3).abs() < 1e-15);
        // Li₃(-1) = -3ζ(3)/4
        assert!((polylog3(-1.0).unwrap() + 0.75 * ZETA3).abs() < 1e-15);
        // Li₃(1/2) = 7ζ(3)/8 - π² ln2/12 + ln³2/6
        let l2 = std::f64::consts::LN_2;
        let half = 7.0 * ZETA3 / 8.0 - 6.0 * ZETA2 * l2 / 12.0 + l2.powi(3) / 6.0;
        assert!((polylog3(0.5).unwrap() - half).abs() < 1e-15);
        assert!((near_one(0.5f64.ln()) - half).abs() < 1e-14);
    }

    #[test]
    fn matches_direct_sum() {
        for x in [-0.97, -0.8, -0.6, -0.3, 0.1, 0.45, 0.55, 0.7, 0.9, 0.99] {
            let v = polylog3(x).unwrap();
            let b = brute(x);
            assert!((v - b).abs() < 1e-13, "x = {x}: {v} vs {b}");
        }
    }

    #[test]
    fn continuous_across_branches() {
        let e = 1e-12;
        for x in [0.5, -0.5] {
            let a = polylog3(x - e).unwrap();
            let b = polylog3(x + e).unwrap();
            assert!((a - b).abs() < 1e-11);
        }
    }

    #[test]
    fn rejects_outside_unit_interval() {
        assert!(polylog3(1.0001).is_err());
        assert!(polylog3(f64::NAN).is_err());
    }
}
