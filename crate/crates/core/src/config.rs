/// Numerical tolerances and resource caps shared by every computation.
///
/// The defaults are the contract values; the CLI exposes each of them as a
/// flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    /// Largest admissible dimension of a dense `T_p` or `X` matrix.
    pub size_cap: usize,
    /// Bound on `||H_ij| - 1|`.
    pub unimodular_tol: f64,
    /// Row orthogonality bound, multiplied by `N`.
    pub orthogonal_factor: f64,
    /// Eigenvalue clustering tolerance, multiplied by `N`.
    pub cluster_factor: f64,
    /// Pass threshold for the duality residuals.
    pub check_tol: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            size_cap: 4096,
            unimodular_tol: 1e-10,
            orthogonal_factor: 1e-8,
            cluster_factor: 1e-6,
            check_tol: 1e-8,
        }
    }
}

impl Config {
    pub fn cluster_tol(&self, n: usize) -> f64 {
        self.cluster_factor * n as f64
    }

    /// Errors unless `base^exp` fits under the size cap.
    pub fn check_dim(&self, what: &'static str, base: usize, exp: usize) -> crate::Result<usize> {
        let needed = (base as u128).checked_pow(exp as u32).unwrap_or(u128::MAX);
        if needed > self.size_cap as u128 {
            return Err(crate::Error::CapExceeded {
                what,
                needed,
                cap: self.size_cap,
            });
        }
        Ok(needed as usize)
    }
}
