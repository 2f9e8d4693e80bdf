//! Matsubara frequencies and the primed frequency sum.

use rayon::prelude::*;

use crate::constants::{HBAR, K_BOLTZMANN};
use crate::error::{Error, Result};
use crate::quadrature::Estimate;

/// Truncation control for `Σ'_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatsubaraSpec {
    /// Temperature in kelvin (> 0).
    pub temperature: f64,
    /// A term counts as small once `|t_n| ≤ rel_tol · |partial sum|`;
    /// three consecutive small terms stop the sum.
    pub rel_tol: f64,
    pub min_terms: usize,
    pub max_terms: usize,
    /// Sum exactly this many terms (`n = 0 … fixed_terms-1`) and skip the
    /// stopping rule. Used to compare two series over the same range.
    pub fixed_terms: Option<usize>,
}

impl Default for MatsubaraSpec {
    fn default() -> Self {
        Self::at(300.0)
    }
}

impl MatsubaraSpec {
    pub fn at(temperature: f64) -> Self {
        Self {
            temperature,
            rel_tol: 1e-9,
            min_terms: 10,
            max_terms: 100_000,
            fixed_terms: None,
        }
    }

    pub fn with_fixed_terms(mut self, terms: usize) -> Self {
        self.fixed_terms = Some(terms);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.temperature.is_finite() && self.temperature > 0.0) {
            return Err(Error::Domain(format!(
                "temperature must be > 0 K, got {}",
                self.temperature
            )));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::Domain(format!(
                "Matsubara rel_tol must lie in (0, 1), got {}",
                self.rel_tol
            )));
        }
        if self.min_terms < 1 || self.max_terms < self.min_terms {
            return Err(Error::Domain(format!(
                "need 1 <= min_terms <= max_terms, got {} and {}",
                self.min_terms, self.max_terms
            )));
        }
        if self.fixed_terms == Some(0) {
            return Err(Error::Domain("fixed_terms must be >= 1".into()));
        }
        Ok(())
    }

    /// `k_B T`
    pub fn thermal_energy(&self) -> f64 {
        K_BOLTZMANN * self.temperature
    }
}

/// `ξ_n = 2πn k_B T / ħ`
pub fn matsubara_frequency(n: usize, temperature: f64) -> f64 {
    2.0 * std::f64::consts::PI * n as f64 * K_BOLTZMANN * temperature / HBAR
}

/// Primed-sum weight: ½ for `n = 0`, 1 otherwise.
#[inline]
pub fn primed_weight(n: usize) -> f64 {
    if n == 0 {
        0.5
    } else {
        1.0
    }
}

/// One weighted term of the series.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MatsubaraTerm {
    pub n: usize,
    pub xi: f64,
    /// `k_B T · w_n · K_n` including the half weight at `n = 0`.
    pub contribution: f64,
    pub quadrature_error: f64,
}

/// Result of a primed Matsubara sum.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct SeriesSum {
    pub value: f64,
    pub n_used: usize,
    /// Geometric estimate of the omitted tail.
    pub truncation_error: f64,
    /// Sum of per-term quadrature error estimates.
    pub quadrature_error: f64,
    pub per_n: Vec<MatsubaraTerm>,
}

/// Neumaier's compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

const BATCH: usize = 32;

/// Evaluates `k_B T Σ'_n term(n, ξ_n)`.
///
/// Terms are computed in parallel batches but accumulated strictly in
/// ascending `n`, so the result does not depend on the thread count.
pub(crate) fn sum_series<F>(spec: &MatsubaraSpec, term: F) -> Result<SeriesSum>
where
    F: Fn(usize, f64) -> Result<Estimate> + Sync,
{
    spec.validate()?;
    let kt = spec.thermal_energy();
    let limit = spec.fixed_terms.unwrap_or(spec.max_terms);
    let mut acc = CompensatedSum::default();
    let mut quad_err = 0.0;
    let mut terms: Vec<MatsubaraTerm> = Vec::new();
    let mut small_run = 0usize;
    let mut start = 0usize;
    while start < limit {
        let end = (start + BATCH.max(spec.min_terms)).min(limit);
        let batch: Vec<Result<(usize, f64, Estimate)>> = (start..end)
            .into_par_iter()
            .map(|n| {
                let xi = matsubara_frequency(n, spec.temperature);
                term(n, xi).map(|e| (n, xi, e))
            })
            .collect();
        for item in batch {
            let (n, xi, est) = item?;
            let w = kt * primed_weight(n);
            let contribution = w * est.value;
            acc.add(contribution);
            quad_err += w * est.error;
            terms.push(MatsubaraTerm {
                n,
                xi,
                contribution,
                quadrature_error: w * est.error,
            });
            if spec.fixed_terms.is_some() {
                continue;
            }
            let partial = acc.value();
            if contribution.abs() <= spec.rel_tol * partial.abs() {
                small_run += 1;
            } else {
                small_run = 0;
            }
            if small_run >= 3 && terms.len() >= spec.min_terms {
                return Ok(finish(acc, quad_err, terms));
            }
        }
        start = end;
    }
    if spec.fixed_terms.is_some() {
        return Ok(finish(acc, quad_err, terms));
    }
    Err(Error::Truncation {
        terms: terms.len(),
        partial: acc.value(),
        last_term: terms.last().map_or(0.0, |t| t.contribution),
    })
}

fn finish(acc: CompensatedSum, quadrature_error: f64, terms: Vec<MatsubaraTerm>) -> SeriesSum {
    SeriesSum {
        value: acc.value(),
        n_used: terms.len(),
        truncation_error: tail_estimate(&terms),
        quadrature_error,
        per_n: terms,
    }
}

/// Geometric tail `|t_N| ρ / (1 - ρ)` with `ρ = |t_N / t_{N-1}|`; falls back
/// to `N |t_N|` when the last terms are not decreasing.
fn tail_estimate(terms: &[MatsubaraTerm]) -> f64 {
    let k = terms.len();
    if k == 0 {
        return 0.0;
    }
    let last = terms[k - 1].contribution.abs();
    if last == 0.0 {
        return 0.0;
    }
    if k >= 2 {
        let prev = terms[k - 2].contribution.abs();
        if prev > last {
            let rho = last / prev;
            return last * rho / (1.0 - rho);
        }
    }
    last * k as f64
}
