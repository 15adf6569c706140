use rayon::prelude::*;
use serde::Serialize;

use super::gram::{gram_matrix, GramRoute};
use crate::config::Config;
use crate::hadamard::HadamardMatrix;
use crate::magic::{truncation_tensor, MagicGrid};
use crate::matrix::{power_traces, C64};
use crate::{Error, Result};

/// Real part of a trace whose imaginary part must vanish up to roundoff.
fn real_trace(z: C64, p: usize, n: usize, what: &str) -> Result<f64> {
    let bound = 1e-8 * (n as f64).powi(p as i32);
    if z.im.abs() >= bound {
        return Err(Error::Invariant(format!(
            "{what} trace at p = {p} has imaginary part {:.3e} (bound {bound:.3e})",
            z.im
        )));
    }
    Ok(z.re)
}

/// `c_p^r = Tr(T_p^r)` for `r = 0..=r_max`.
pub fn t_route_moments(h: &HadamardMatrix, p: usize, r_max: usize, config: &Config) -> Result<Vec<f64>> {
    let grid = MagicGrid::unchecked(h);
    let t = truncation_tensor(&grid, p, config)?;
    power_traces(t.matrix(), r_max)
        .into_iter()
        .map(|z| real_trace(z, p, h.n(), "Tr(T_p^r)"))
        .collect()
}

/// `c_p^r = Tr(X_r^p) / N^r` for `p = 1..=p_max` (`c_p^0 = N^p`).
pub fn x_route_moments(h: &HadamardMatrix, r: usize, p_max: usize, config: &Config) -> Result<Vec<f64>> {
    let n = h.n();
    if r == 0 {
        return Ok((1..=p_max).map(|p| (n as f64).powi(p as i32)).collect());
    }
    let x = gram_matrix(h, r, GramRoute::Profile, config)?;
    let scale = (n as f64).powi(r as i32).recip();
    power_traces(x.matrix(), p_max)
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(p, z)| real_trace(z, p, n, "Tr(X^p)").map(|v| v * scale))
        .collect()
}

pub fn moments_via_t(h: &HadamardMatrix, p: usize, r: usize, config: &Config) -> Result<f64> {
    Ok(t_route_moments(h, p, r, config)?[r])
}

pub fn moments_via_x(h: &HadamardMatrix, p: usize, r: usize, config: &Config) -> Result<f64> {
    if p == 0 {
        return Err(Error::InvalidArgument("moment order p must be >= 1".into()));
    }
    Ok(x_route_moments(h, r, p, config)?[p - 1])
}

/// `c_p^r` and `γ_p^r = c_p^r / N^p` for `1 <= p <= p_max`, `0 <= r <= r_max`.
/// Row `p - 1`, column `r`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentTable {
    #[serde(rename = "N")]
    pub n: usize,
    pub c: Vec<Vec<f64>>,
    pub gamma: Vec<Vec<f64>>,
    pub p_max: usize,
    pub r_max: usize,
}

impl MomentTable {
    pub fn c(&self, p: usize, r: usize) -> f64 {
        self.c[p - 1][r]
    }

    pub fn gamma(&self, p: usize, r: usize) -> f64 {
        self.gamma[p - 1][r]
    }

    /// Worst relative deviations from `c_p^0 = N^p` and `c_p^1 = N^{p-1}`,
    /// and the worst excursion of any `c_p^r` outside `[0, N^p]`.
    pub fn invariant_deviations(&self) -> (f64, f64, f64) {
        let nf = self.n as f64;
        let (mut zero, mut one, mut range) = (0.0f64, 0.0f64, 0.0f64);
        for p in 1..=self.p_max {
            let top = nf.powi(p as i32);
            zero = zero.max((self.c(p, 0) - top).abs() / top);
            if self.r_max >= 1 {
                let want = nf.powi(p as i32 - 1);
                one = one.max((self.c(p, 1) - want).abs() / want);
            }
            for r in 0..=self.r_max {
                let c = self.c(p, r);
                range = range.max(-c).max(c - top);
            }
        }
        (zero, one, range)
    }
}

/// Moment table through the Gram-matrix route, one `X_r` per column.
pub fn moment_table(h: &HadamardMatrix, p_max: usize, r_max: usize, config: &Config) -> Result<MomentTable> {
    if p_max == 0 {
        return Err(Error::InvalidArgument("p_max must be >= 1".into()));
    }
    let n = h.n();
    config.check_dim("X", n, r_max)?;
    let columns: Vec<Vec<f64>> = (0..=r_max)
        .into_par_iter()
        .map(|r| x_route_moments(h, r, p_max, config))
        .collect::<Result<_>>()?;
    let c: Vec<Vec<f64>> = (0..p_max).map(|p| columns.iter().map(|col| col[p]).collect()).collect();
    let gamma = c
        .iter()
        .enumerate()
        .map(|(p, row)| {
            let scale = (n as f64).powi(p as i32 + 1).recip();
            row.iter().map(|v| v * scale).collect()
        })
        .collect();
    Ok(MomentTable {
        n,
        c,
        gamma,
        p_max,
        r_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hadamard::{dita, fourier};
    use crate::phases::PhaseParameterMatrix;

    #[test]
    fn routes_agree_on_small_cases() {
        let cfg = Config::default();
        for h in [
            fourier(3).unwrap(),
            dita(2, 2, &PhaseParameterMatrix::seeded(2, 2, 7).unwrap()).unwrap(),
        ] {
            let n = h.n() as f64;
            for p in 1..=3 {
                let t = t_route_moments(&h, p, 3, &cfg).unwrap();
                for (r, tr) in t.iter().enumerate() {
                    let x = moments_via_x(&h, p, r, &cfg).unwrap();
                    assert!((tr - x).abs() <= 1e-8 * n.powi(p as i32), "p={p} r={r}: {tr} vs {x}");
                }
            }
        }
    }

    #[test]
    fn fourier_two_table() {
        let t = moment_table(&fourier(2).unwrap(), 3, 3, &Config::default()).unwrap();
        for p in 1..=3 {
            for r in 1..=3 {
                assert!((t.gamma(p, r) - 0.5).abs() < 1e-12);
            }
            assert!((t.c(p, 0) - 2f64.powi(p as i32)).abs() < 1e-12);
        }
        let (a, b, c) = t.invariant_deviations();
        assert!(a < 1e-12 && b < 1e-12 && c <= 1e-12);
    }

    #[test]
    fn p_zero_rejected() {
        let h = fourier(2).unwrap();
        assert!(moments_via_x(&h, 0, 1, &Config::default()).is_err());
        assert!(moment_table(&h, 0, 1, &Config::default()).is_err());
    }
}
