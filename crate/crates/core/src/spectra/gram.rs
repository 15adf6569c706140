use rayon::prelude::*;
use serde::Serialize;

use super::profile::{profile, ProfileTensor};
use crate::config::Config;
use crate::hadamard::HadamardMatrix;
use crate::matrix::{from_faer, mul, unflatten, ComplexMatrix, C64, ZERO};
use crate::Result;

/// How `X` is assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GramRoute {
    /// `X_{a,b} = Q_{a_1 b_1, a_2 b_2} ... Q_{a_r b_r, a_1 b_1}`
    Profile,
    /// `X_{a,b} = <ξ_a, ξ_b>` with
    /// `ξ_a = (H_{a_1}/H_{a_2})/√N ⊗ ... ⊗ (H_{a_r}/H_{a_1})/√N`
    Vectors,
}

/// The `N^r x N^r` Gram matrix whose normalized spectral law is `μ^r`.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    r: usize,
    n: usize,
    x: ComplexMatrix,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GramReport {
    /// `max |X - X^*|`
    pub hermitian: f64,
    /// `max |X_aa - 1|`
    pub unit_diagonal: f64,
}

pub fn gram_matrix(h: &HadamardMatrix, r: usize, route: GramRoute, config: &Config) -> Result<GramMatrix> {
    if r == 0 {
        return Err(crate::Error::InvalidArgument("Gram matrix needs r >= 1".into()));
    }
    let n = h.n();
    let dim = config.check_dim("X", n, r)?;
    let x = match route {
        GramRoute::Profile => via_profile(&profile(h), r, dim),
        GramRoute::Vectors => via_vectors(h, r, dim),
    };
    Ok(GramMatrix { r, n, x })
}

pub(crate) fn via_profile(q: &ProfileTensor, r: usize, dim: usize) -> ComplexMatrix {
    let n = q.n();
    let mut entries = vec![ZERO; dim * dim];
    entries.par_chunks_mut(dim).enumerate().for_each(|(row, out)| {
        let a = unflatten(row, n, r);
        for (col, slot) in out.iter_mut().enumerate() {
            let b = unflatten(col, n, r);
            let mut prod = C64::new(1.0, 0.0);
            for s in 0..r {
                let t = (s + 1) % r;
                prod *= q.get(a[s], b[s], a[t], b[t]);
            }
            *slot = prod;
        }
    });
    ComplexMatrix::from_vec_unchecked(dim, dim, entries)
}

fn via_vectors(h: &HadamardMatrix, r: usize, dim: usize) -> ComplexMatrix {
    let n = h.n();
    let scale = (n as f64).powi(r as i32).sqrt().recip();
    // Row a of `xi` is ξ_a; X = xi · xi^*.
    let xi = faer::Mat::<C64>::from_fn(dim, dim, |row, k| {
        let a = unflatten(row, n, r);
        let ks = unflatten(k, n, r);
        let mut prod = C64::new(scale, 0.0);
        for s in 0..r {
            let t = (s + 1) % r;
            prod *= h.get(ks[s], a[s]) / h.get(ks[s], a[t]);
        }
        prod
    });
    from_faer(&mul(&xi, &xi.adjoint().to_owned()))
}

impl GramMatrix {
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.x
    }

    pub fn dim(&self) -> usize {
        self.x.rows()
    }

    pub fn report(&self) -> GramReport {
        let dim = self.dim();
        let mut hermitian: f64 = 0.0;
        let mut unit_diagonal: f64 = 0.0;
        for i in 0..dim {
            unit_diagonal = unit_diagonal.max((self.x.get(i, i) - 1.0).norm());
            for j in i..dim {
                hermitian = hermitian.max((self.x.get(i, j) - self.x.get(j, i).conj()).norm());
            }
        }
        GramReport {
            hermitian,
            unit_diagonal,
        }
    }
}
