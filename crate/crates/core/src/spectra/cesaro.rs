use serde::Serialize;

use crate::config::Config;
use crate::hadamard::HadamardMatrix;
use crate::magic::{truncation_tensor, MagicGrid};
use crate::matrix::{mul, to_faer};
use crate::{Error, Result};

/// Cesàro averages `s_k = (1/k) sum_{r=1..k} c_p^r`.
#[derive(Debug, Clone, Serialize)]
pub struct CesaroSequence {
    pub p: usize,
    /// `c_p^r` for `r = 1..=k_max`
    pub moments: Vec<f64>,
    /// `s_k` for `k = 1..=k_max`
    pub averages: Vec<f64>,
    /// `|s_{k_max} - s_{k_max - 1}|`
    pub last_increment: f64,
}

/// Runs the Cesàro averages of `Tr(T_p^r)`. The `T_p` route keeps the
/// matrix size at `N^p` however deep the truncation goes.
pub fn cesaro_moments(h: &HadamardMatrix, p: usize, k_max: usize, config: &Config) -> Result<CesaroSequence> {
    if k_max < 2 {
        return Err(Error::InvalidArgument("k_max must be at least 2".into()));
    }
    let grid = MagicGrid::unchecked(h);
    let t = to_faer(truncation_tensor(&grid, p, config)?.matrix());
    let bound = 1e-8 * (h.n() as f64).powi(p as i32);
    let mut moments = Vec::with_capacity(k_max);
    let mut power = t.clone();
    for r in 1..=k_max {
        if r > 1 {
            power = mul(&power, &t);
        }
        let tr: crate::matrix::C64 = (0..power.nrows()).map(|i| power[(i, i)]).sum();
        if tr.im.abs() >= bound {
            return Err(Error::Invariant(format!(
                "Tr(T_{p}^{r}) has imaginary part {:.3e}",
                tr.im
            )));
        }
        moments.push(tr.re);
    }
    let mut averages = Vec::with_capacity(k_max);
    let mut sum = 0.0;
    for (k, c) in moments.iter().enumerate() {
        sum += c;
        averages.push(sum / (k + 1) as f64);
    }
    let last_increment = (averages[k_max - 1] - averages[k_max - 2]).abs();
    Ok(CesaroSequence {
        p,
        moments,
        averages,
        last_increment,
    })
}

/// Cesàro estimate of the `p`-th moment of the Haar measure.
///
/// `converged` is a heuristic: the last two averages differ by less than
/// `tol` and the last average sits within `tol` of an integer.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct HaarEstimate {
    pub estimate: f64,
    pub rounded: i64,
    pub converged: bool,
    pub last_increment: f64,
}

pub fn haar_moment_estimate(h: &HadamardMatrix, p: usize, k_max: usize, tol: f64, config: &Config) -> Result<HaarEstimate> {
    let seq = cesaro_moments(h, p, k_max, config)?;
    let estimate = seq.averages[k_max - 1];
    let rounded = estimate.round();
    Ok(HaarEstimate {
        estimate,
        rounded: rounded as i64,
        converged: seq.last_increment < tol && (estimate - rounded).abs() < tol,
        last_increment: seq.last_increment,
    })
}
