use serde::Serialize;

use super::gram::{gram_matrix, GramRoute};
use crate::config::Config;
use crate::hadamard::HadamardMatrix;
use crate::matrix::hermitian_eigen;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom {
    pub x: f64,
    pub w: f64,
}

/// Finitely supported probability measure on `[0, N]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralMeasure {
    #[serde(rename = "N")]
    pub n: usize,
    pub r: usize,
    pub atoms: Vec<Atom>,
    pub cluster_tol: f64,
}

impl SpectralMeasure {
    /// Point mass at `N`.
    pub fn delta_n(n: usize, r: usize, cluster_tol: f64) -> Self {
        SpectralMeasure {
            n,
            r,
            atoms: vec![Atom { x: n as f64, w: 1.0 }],
            cluster_tol,
        }
    }

    /// Groups sorted eigenvalues whose consecutive gaps are within `tol`;
    /// each group becomes an atom at its mean with weight `size / count`.
    pub fn from_eigenvalues(n: usize, r: usize, eigenvalues: &[f64], tol: f64) -> Self {
        let mut vals = eigenvalues.to_vec();
        vals.sort_by(f64::total_cmp);
        let weight = 1.0 / vals.len() as f64;
        let mut atoms = Vec::new();
        let mut start = 0;
        for k in 1..=vals.len() {
            if k == vals.len() || vals[k] - vals[k - 1] > tol {
                let group = &vals[start..k];
                let mean = group.iter().sum::<f64>() / group.len() as f64;
                atoms.push(Atom {
                    x: mean.clamp(0.0, n as f64),
                    w: weight * group.len() as f64,
                });
                start = k;
            }
        }
        SpectralMeasure {
            n,
            r,
            atoms,
            cluster_tol: tol,
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.w).sum()
    }

    /// `∫ x^p dμ`.
    pub fn moment(&self, p: usize) -> f64 {
        self.atoms.iter().map(|a| a.w * a.x.powi(p as i32)).sum()
    }

    /// Equal-weight average of measures on the same `[0, N]`, re-clustered
    /// at the largest of their tolerances. `r` of the result is the number
    /// of averaged measures.
    pub fn average(measures: &[SpectralMeasure]) -> Result<Self> {
        let first = measures
            .first()
            .ok_or_else(|| Error::InvalidArgument("cannot average zero measures".into()))?;
        if measures.iter().any(|m| m.n != first.n) {
            return Err(Error::InvalidArgument("measures live on different [0, N]".into()));
        }
        let tol = measures.iter().map(|m| m.cluster_tol).fold(0.0, f64::max);
        let scale = 1.0 / measures.len() as f64;
        let mut all: Vec<Atom> = measures
            .iter()
            .flat_map(|m| m.atoms.iter().map(|a| Atom { x: a.x, w: a.w * scale }))
            .collect();
        all.sort_by(|a, b| a.x.total_cmp(&b.x));
        let mut atoms: Vec<Atom> = Vec::new();
        let mut last_x = f64::NEG_INFINITY;
        for a in all {
            match atoms.last_mut() {
                Some(cur) if a.x - last_x <= tol => {
                    let w = cur.w + a.w;
                    cur.x = (cur.x * cur.w + a.x * a.w) / w;
                    cur.w = w;
                }
                _ => atoms.push(a),
            }
            last_x = a.x;
        }
        Ok(SpectralMeasure {
            n: first.n,
            r: measures.len(),
            atoms,
            cluster_tol: tol,
        })
    }

    /// Same number of atoms, locations within the clustering tolerance and
    /// weights within `weight_tol`.
    pub fn matches(&self, other: &Self, weight_tol: f64) -> bool {
        let tol = self.cluster_tol.max(other.cluster_tol);
        self.atoms.len() == other.atoms.len()
            && self
                .atoms
                .iter()
                .zip(&other.atoms)
                .all(|(a, b)| (a.x - b.x).abs() <= tol && (a.w - b.w).abs() <= weight_tol)
    }
}

/// `μ^r`, the normalized spectral law of `X` at depth `r` (`μ^0 = δ_N`).
pub fn truncated_law(h: &HadamardMatrix, r: usize, config: &Config) -> Result<SpectralMeasure> {
    let n = h.n();
    let nf = n as f64;
    let tol = config.cluster_tol(n);
    if r == 0 {
        return Ok(SpectralMeasure::delta_n(n, 0, tol));
    }
    let x = gram_matrix(h, r, GramRoute::Profile, config)?;
    let (eigs, _) = hermitian_eigen(x.matrix(), 1e-9 * nf)?;
    let (lo, hi) = (eigs[0], eigs[eigs.len() - 1]);
    if lo < -1e-8 * nf || hi > nf + 1e-8 * nf {
        return Err(Error::Eigen(format!(
            "spectrum [{lo:.6e}, {hi:.6e}] of X escapes [0, N] for N = {n}"
        )));
    }
    Ok(SpectralMeasure::from_eigenvalues(n, r, &eigs, tol))
}

/// Mass of the atom at `N` (within the clustering tolerance), else 0.
pub fn measure_top_mass(m: &SpectralMeasure) -> f64 {
    let top = m.n as f64;
    m.atoms
        .iter()
        .filter(|a| (a.x - top).abs() <= m.cluster_tol)
        .map(|a| a.w)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hadamard::{dita, fourier};
    use crate::phases::PhaseParameterMatrix;

    #[test]
    fn depth_zero_and_one() {
        let h = dita(2, 3, &PhaseParameterMatrix::seeded(2, 3, 7).unwrap()).unwrap();
        let cfg = Config::default();
        let m0 = truncated_law(&h, 0, &cfg).unwrap();
        assert_eq!(m0.atoms, vec![Atom { x: 6.0, w: 1.0 }]);
        let m1 = truncated_law(&h, 1, &cfg).unwrap();
        assert_eq!(m1.atoms.len(), 2);
        assert!(m1.atoms[0].x.abs() < 1e-10 && (m1.atoms[0].w - 5.0 / 6.0).abs() < 1e-12);
        assert!((m1.atoms[1].x - 6.0).abs() < 1e-10 && (m1.atoms[1].w - 1.0 / 6.0).abs() < 1e-12);
        assert!((measure_top_mass(&m1) - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn fourier_laws_are_stationary() {
        let cfg = Config::default();
        for n in 2..=4 {
            for r in 1..=3 {
                let m = truncated_law(&fourier(n).unwrap(), r, &cfg).unwrap();
                let nf = n as f64;
                assert_eq!(m.atoms.len(), 2);
                assert!(m.atoms[0].x.abs() < 1e-8 && (m.atoms[0].w - (1.0 - 1.0 / nf)).abs() < 1e-10);
                assert!((m.atoms[1].x - nf).abs() < 1e-8 && (m.atoms[1].w - 1.0 / nf).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn top_mass_of_point_mass() {
        assert_eq!(measure_top_mass(&SpectralMeasure::delta_n(5, 0, 5e-6)), 1.0);
    }

    #[test]
    fn clustering_merges_nearby_values() {
        let m = SpectralMeasure::from_eigenvalues(3, 1, &[3.0, -1e-15, 2e-15, 1.0, 1.0 + 1e-9], 3e-6);
        assert_eq!(m.atoms.len(), 3);
        assert!(m.atoms[0].x.abs() < 1e-15);
        assert!((m.atoms[1].w - 0.4).abs() < 1e-15);
        assert!((m.total_mass() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn averaging() {
        let a = SpectralMeasure::from_eigenvalues(2, 1, &[0.0, 2.0], 2e-6);
        let b = SpectralMeasure::from_eigenvalues(2, 2, &[0.0, 1.0, 1.0, 2.0], 2e-6);
        let avg = SpectralMeasure::average(&[a.clone(), b]).unwrap();
        assert_eq!(avg.atoms.len(), 3);
        assert!((avg.atoms[0].w - 0.375).abs() < 1e-15);
        assert!((avg.atoms[1].w - 0.25).abs() < 1e-15);
        assert!((measure_top_mass(&avg) - 0.375).abs() < 1e-15);
        assert!(SpectralMeasure::average(&[]).is_err());
        assert!(a.matches(&a, 1e-12));
    }
}
