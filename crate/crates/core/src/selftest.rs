//! Startup canary for index conventions.
//!
//! Every Gram matrix `X` has unit diagonal, so `c_1^r = 1` for all `r >= 1`.
//! A flattening or conjugation slip breaks one of these first.

use crate::config::Config;
use crate::hadamard::{dita, fourier, tensor};
use crate::phases::PhaseParameterMatrix;
use crate::spectra::{gram_matrix, moments_via_t, moments_via_x, GramRoute};
use crate::{Error, Result};

pub fn run_selftest() -> Result<()> {
    let cfg = Config::default();
    let cases = [
        fourier(3)?,
        tensor(&fourier(2)?, &fourier(2)?),
        dita(2, 2, &PhaseParameterMatrix::seeded(2, 2, 3)?)?,
    ];
    for h in &cases {
        for r in 1..=2 {
            for route in [GramRoute::Profile, GramRoute::Vectors] {
                let diag = gram_matrix(h, r, route, &cfg)?.report().unit_diagonal;
                if diag > 1e-12 {
                    return Err(Error::Invariant(format!(
                        "self-test: diagonal of X deviates from 1 by {diag:.3e} for {} at r = {r}",
                        h.provenance()
                    )));
                }
            }
            for c in [moments_via_x(h, 1, r, &cfg)?, moments_via_t(h, 1, r, &cfg)?] {
                if (c - 1.0).abs() > 1e-12 {
                    return Err(Error::Invariant(format!(
                        "self-test: c_1^{r} = {c} for {}",
                        h.provenance()
                    )));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    #[test]
    fn passes() {
        super::run_selftest().unwrap();
    }
}
