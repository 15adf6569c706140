//! Numerical certification of the transpose dualities.
//!
//! The moment/truncation duality reads `γ_p^r(H) = γ_r^p(H^t)`, with
//! `γ_p^r = c_p^r / N^p`. For Diță deformations the stronger statement
//! `c_p^r(H) = c_p^r(H^t)` holds for every `p, r`.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::Config;
use crate::hadamard::{dita, fourier, HadamardMatrix};
use crate::phases::PhaseParameterMatrix;
use crate::spectra::{measure_top_mass, truncated_law, x_route_moments, SpectralMeasure};
use crate::Result;

/// Residual grid of a duality check, row `p - 1`, column `r - 1`.
#[derive(Debug, Clone, Serialize)]
pub struct DualityReport {
    pub matrix: String,
    pub p_max: usize,
    pub r_max: usize,
    pub max_residual: f64,
    pub grid: Vec<Vec<f64>>,
    pub pass: bool,
    pub tolerance: f64,
    pub elapsed_ms: f64,
    /// Whether the atom lists of `μ^r(H)` and `μ^r(H^t)` agree for every
    /// `r <= r_max`; only set by the Diță self-duality check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub atoms_match: Option<bool>,
}

impl DualityReport {
    fn new(matrix: String, grid: Vec<Vec<f64>>, tolerance: f64, start: Instant, atoms_match: Option<bool>) -> Self {
        let max_residual = grid.iter().flatten().copied().fold(0.0, f64::max);
        DualityReport {
            matrix,
            p_max: grid.len(),
            r_max: grid.first().map_or(0, Vec::len),
            max_residual,
            pass: max_residual < tolerance && atoms_match != Some(false),
            grid,
            tolerance,
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
            atoms_match,
        }
    }
}

/// `c_p^r` columns for `r = 1..=r_max`, each covering `p = 1..=p_max`.
fn moment_columns(h: &HadamardMatrix, p_max: usize, r_max: usize, config: &Config) -> Result<Vec<Vec<f64>>> {
    (1..=r_max)
        .into_par_iter()
        .map(|r| x_route_moments(h, r, p_max, config))
        .collect()
}

/// `|γ_p^r(H) - γ_r^p(H^t)|` for `1 <= p <= p_max`, `1 <= r <= r_max`.
pub fn duality_residual(h: &HadamardMatrix, p_max: usize, r_max: usize, config: &Config) -> Result<DualityReport> {
    let start = Instant::now();
    let n = h.n();
    config.check_dim("X", n, r_max)?;
    config.check_dim("X", n, p_max)?;
    let ht = h.transpose();
    let cols_h = moment_columns(h, p_max, r_max, config)?;
    let cols_ht = moment_columns(&ht, r_max, p_max, config)?;
    let nf = n as f64;
    let grid = (1..=p_max)
        .map(|p| {
            (1..=r_max)
                .map(|r| {
                    let lhs = cols_h[r - 1][p - 1] / nf.powi(p as i32);
                    let rhs = cols_ht[p - 1][r - 1] / nf.powi(r as i32);
                    (lhs - rhs).abs()
                })
                .collect()
        })
        .collect();
    Ok(DualityReport::new(h.provenance().to_string(), grid, config.check_tol, start, None))
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TopMassReport {
    pub mass_h: f64,
    pub mass_ht: f64,
    pub gap: f64,
}

fn averaged_law(h: &HadamardMatrix, r_probe: usize, config: &Config) -> Result<SpectralMeasure> {
    let laws = (1..=r_probe)
        .map(|r| truncated_law(h, r, config))
        .collect::<Result<Vec<_>>>()?;
    SpectralMeasure::average(&laws)
}

/// Top masses of the Cesàro averages `(1/k) Σ_{r=1..k} μ^r` with
/// `k = r_probe`, for `H` and `H^t`. A finite-depth probe of the equality of
/// the limiting masses at `N`, not a certificate.
pub fn top_mass_duality(h: &HadamardMatrix, r_probe: usize, config: &Config) -> Result<TopMassReport> {
    if r_probe == 0 {
        return Err(crate::Error::InvalidArgument("r_probe must be >= 1".into()));
    }
    config.check_dim("X", h.n(), r_probe)?;
    let mass_h = measure_top_mass(&averaged_law(h, r_probe, config)?);
    let mass_ht = measure_top_mass(&averaged_law(&h.transpose(), r_probe, config)?);
    Ok(TopMassReport {
        mass_h,
        mass_ht,
        gap: (mass_h - mass_ht).abs(),
    })
}

/// `|c_p^r(H) - c_p^r(H^t)| / N^p` for `H = dita(M, N, Q)`, together with
/// a comparison of the atom lists of `μ^r` for `r <= r_max`.
pub fn dita_selfduality_residual(q: &PhaseParameterMatrix, p_max: usize, r_max: usize, config: &Config) -> Result<DualityReport> {
    let start = Instant::now();
    let h = dita(q.m(), q.n(), q)?;
    let size = h.n();
    config.check_dim("X", size, p_max.max(r_max))?;
    let ht = h.transpose();
    let cols_h = moment_columns(&h, p_max, r_max, config)?;
    let cols_ht = moment_columns(&ht, p_max, r_max, config)?;
    let nf = size as f64;
    let grid = (1..=p_max)
        .map(|p| {
            (1..=r_max)
                .map(|r| (cols_h[r - 1][p - 1] - cols_ht[r - 1][p - 1]).abs() / nf.powi(p as i32))
                .collect()
        })
        .collect();
    let mut atoms_match = true;
    for r in 1..=r_max {
        let a = truncated_law(&h, r, config)?;
        let b = truncated_law(&ht, r, config)?;
        atoms_match &= a.matches(&b, 1e-10);
    }
    Ok(DualityReport::new(h.provenance().to_string(), grid, config.check_tol, start, Some(atoms_match)))
}

#[derive(Debug, Clone, Serialize)]
pub struct FourierFiniteReport {
    #[serde(rename = "N")]
    pub n: usize,
    /// Top mass of `μ^r(F_N)` for `r = 1..=4`.
    pub masses: Vec<f64>,
    pub pass: bool,
}

/// Checks that `μ^r(F_N)` carries mass exactly `1/N` at `N` for `r = 1..=4`.
pub fn fourier_finite_check(n: usize, config: &Config) -> Result<FourierFiniteReport> {
    let h = fourier(n)?;
    config.check_dim("X", n, 4)?;
    let masses = (1..=4)
        .map(|r| truncated_law(&h, r, config).map(|m| measure_top_mass(&m)))
        .collect::<Result<Vec<_>>>()?;
    let want = 1.0 / n as f64;
    let pass = masses.iter().all(|m| (m - want).abs() < 1e-10);
    Ok(FourierFiniteReport { n, masses, pass })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hadamard::tensor;

    #[test]
    fn fourier_grids_vanish_and_are_symmetric() {
        let cfg = Config::default();
        for n in 2..=4 {
            let rep = duality_residual(&fourier(n).unwrap(), 3, 3, &cfg).unwrap();
            assert!(rep.pass && rep.max_residual < 1e-12);
            assert_eq!((rep.p_max, rep.r_max, rep.grid.len(), rep.grid[0].len()), (3, 3, 3, 3));
        }
    }

    #[test]
    fn deformed_duality() {
        let q = PhaseParameterMatrix::seeded(2, 2, 7).unwrap();
        let rep = duality_residual(&dita(2, 2, &q).unwrap(), 5, 5, &Config::default()).unwrap();
        assert!(rep.max_residual < 1e-9, "{}", rep.max_residual);
        assert_eq!(rep.matrix, "dita(2,2;seed=7)");
    }

    #[test]
    fn rectangular_grid() {
        let h = tensor(&fourier(2).unwrap(), &fourier(3).unwrap());
        let rep = duality_residual(&h, 2, 3, &Config::default()).unwrap();
        assert_eq!((rep.grid.len(), rep.grid[0].len()), (2, 3));
        assert!(rep.pass);
    }

    #[test]
    fn top_mass_probe() {
        let cfg = Config::default();
        let f = top_mass_duality(&fourier(3).unwrap(), 3, &cfg).unwrap();
        assert!((f.mass_h - 1.0 / 3.0).abs() < 1e-12 && f.gap < 1e-12);
        let h = dita(2, 2, &PhaseParameterMatrix::seeded(2, 2, 7).unwrap()).unwrap();
        let a = top_mass_duality(&h, 3, &cfg).unwrap();
        let b = top_mass_duality(&h.transpose(), 3, &cfg).unwrap();
        assert_eq!((a.mass_h, a.mass_ht), (b.mass_ht, b.mass_h));
        assert!(a.gap.is_finite());
    }

    #[test]
    fn self_duality() {
        let cfg = Config::default();
        let ones = PhaseParameterMatrix::ones(2, 2).unwrap();
        assert!(dita_selfduality_residual(&ones, 3, 3, &cfg).unwrap().max_residual < 1e-12);
        let rep = dita_selfduality_residual(&PhaseParameterMatrix::seeded(2, 2, 1).unwrap(), 4, 4, &cfg).unwrap();
        assert!(rep.pass && rep.atoms_match == Some(true) && rep.max_residual < 1e-9);
    }

    #[test]
    fn fourier_top_mass() {
        let cfg = Config::default();
        for n in 1..=5 {
            let rep = fourier_finite_check(n, &cfg).unwrap();
            assert!(rep.pass, "N = {n}: {:?}", rep.masses);
        }
    }
}
