use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A Drude permittivity was evaluated exactly at zero frequency.
    #[error("static divergence: Drude permittivity is unbounded at xi = 0")]
    StaticDivergence,

    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// `(r_ab + r_bc) / (1 + r_ab r_bc)` with `r_ab r_bc = -1`.
    #[error("degenerate composition: r_ab * r_bc = -1")]
    DegenerateComposition,

    /// Adaptive quadrature ran out of subdivisions.
    #[error("quadrature failure at n = {n}: partial value {partial:e}, error estimate {error:e}")]
    Quadrature { n: usize, partial: f64, error: f64 },

    /// The Matsubara series did not meet its stopping rule within `max_terms`.
    #[error(
        "series truncation failure after {terms} terms: partial sum {partial:e}, last term {last_term:e}"
    )]
    Truncation {
        terms: usize,
        partial: f64,
        last_term: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
