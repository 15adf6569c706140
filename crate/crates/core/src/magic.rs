//! The magic grid `P_ij = Proj(H_i / H_j)`, its verification, and the
//! truncation tensors `T_p` whose powers evaluate the truncated integrals.

use rayon::prelude::*;
use serde::Serialize;

use crate::config::Config;
use crate::hadamard::HadamardMatrix;
use crate::matrix::{flatten, unflatten, ComplexMatrix, C64, ZERO};
use crate::{Error, Result};

/// Pass threshold for the projection and magic conditions.
pub const MAGIC_TOL: f64 = 1e-9;
/// Pass threshold for `tr(P_ij) = 1`.
pub const TRACE_TOL: f64 = 1e-10;

/// `N x N` array of `N x N` rank-one projections.
#[derive(Debug, Clone)]
pub struct MagicGrid {
    n: usize,
    source: HadamardMatrix,
    projections: Vec<ComplexMatrix>,
}

/// `(P_ij)_kl = (1/N) H_ik H_jl / (H_il H_jk)`.
fn projection(h: &HadamardMatrix, i: usize, j: usize) -> ComplexMatrix {
    let n = h.n();
    let inv_n = 1.0 / n as f64;
    ComplexMatrix::from_fn(n, n, |k, l| h.get(i, k) * h.get(j, l) / (h.get(i, l) * h.get(j, k)) * inv_n)
}

/// Builds the grid from the closed entry formula and verifies it.
pub fn magic_grid(h: &HadamardMatrix) -> Result<MagicGrid> {
    let grid = MagicGrid::unchecked(h);
    let report = verify_magic(&grid);
    if !report.pass {
        let (what, i, j) = report.worst;
        return Err(Error::Invariant(format!(
            "magic grid condition `{what}` fails at (i, j) = ({i}, {j}): {report:?}"
        )));
    }
    Ok(grid)
}

impl MagicGrid {
    /// Grid from the entry formula without verification.
    pub fn unchecked(h: &HadamardMatrix) -> Self {
        let n = h.n();
        let projections = (0..n * n).map(|k| projection(h, k / n, k % n)).collect();
        MagicGrid {
            n,
            source: h.clone(),
            projections,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn source(&self) -> &HadamardMatrix {
        &self.source
    }

    pub fn get(&self, i: usize, j: usize) -> &ComplexMatrix {
        &self.projections[i * self.n + j]
    }

    /// Copy of the grid with `P_ij` replaced; no checks are made.
    pub fn with_projection(&self, i: usize, j: usize, p: ComplexMatrix) -> Self {
        assert_eq!((p.rows(), p.cols()), (self.n, self.n));
        let mut out = self.clone();
        out.projections[i * self.n + j] = p;
        out
    }

    /// `tr(P_{a_1 b_1} ... P_{a_p b_p})` by explicit matrix products, with
    /// `tr = Tr / N`.
    pub fn trace_of_product(&self, word: &[(usize, usize)]) -> C64 {
        let mut acc = ComplexMatrix::identity(self.n);
        for &(i, j) in word {
            acc = acc.matmul(self.get(i, j));
        }
        acc.trace() / self.n as f64
    }
}

/// Worst-case deviations from the magic conditions, each measured in
/// operator norm.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MagicReport {
    /// `max_ij ||P_ij^2 - P_ij||`
    pub idempotency: f64,
    /// `max_ij ||P_ij - P_ij^*||`
    pub self_adjointness: f64,
    /// `max_i ||sum_j P_ij - 1||`
    pub row_sums: f64,
    /// `max_j ||sum_i P_ij - 1||`
    pub column_sums: f64,
    /// `max_ij |Tr(P_ij) - 1|`
    pub trace: f64,
    pub pass: bool,
    /// Failing condition and its `(i, j)` (row or column index repeated for
    /// the sum conditions); meaningful only when `pass` is false.
    #[serde(skip)]
    pub worst: (&'static str, usize, usize),
}

pub fn verify_magic(grid: &MagicGrid) -> MagicReport {
    let n = grid.n;
    let id = ComplexMatrix::identity(n);
    let mut rep = MagicReport {
        idempotency: 0.0,
        self_adjointness: 0.0,
        row_sums: 0.0,
        column_sums: 0.0,
        trace: 0.0,
        pass: true,
        worst: ("none", 0, 0),
    };
    let note = |value: f64, tol: f64, what: &'static str, i: usize, j: usize, pass: &mut bool, worst: &mut _| {
        if value >= tol && *pass {
            *pass = false;
            *worst = (what, i, j);
        }
    };
    for i in 0..n {
        for j in 0..n {
            let p = grid.get(i, j);
            let idem = p.matmul(p).sub(p).operator_norm();
            let adj = p.sub(&p.adjoint()).operator_norm();
            let tr = (p.trace() - 1.0).norm();
            rep.idempotency = rep.idempotency.max(idem);
            rep.self_adjointness = rep.self_adjointness.max(adj);
            rep.trace = rep.trace.max(tr);
            note(idem, MAGIC_TOL, "idempotency", i, j, &mut rep.pass, &mut rep.worst);
            note(adj, MAGIC_TOL, "self-adjointness", i, j, &mut rep.pass, &mut rep.worst);
            note(tr, TRACE_TOL, "unit trace", i, j, &mut rep.pass, &mut rep.worst);
        }
    }
    for i in 0..n {
        let row = (0..n).fold(ComplexMatrix::zeros(n, n), |acc, j| acc.add(grid.get(i, j)));
        let col = (0..n).fold(ComplexMatrix::zeros(n, n), |acc, j| acc.add(grid.get(j, i)));
        let r = row.sub(&id).operator_norm();
        let c = col.sub(&id).operator_norm();
        rep.row_sums = rep.row_sums.max(r);
        rep.column_sums = rep.column_sums.max(c);
        note(r, MAGIC_TOL, "row sum", i, i, &mut rep.pass, &mut rep.worst);
        note(c, MAGIC_TOL, "column sum", i, i, &mut rep.pass, &mut rep.worst);
    }
    rep
}

/// `(T_p)_{i_1..i_p, j_1..j_p} = tr(P_{i_1 j_1} ... P_{i_p j_p})`, multi-indices
/// flattened row-major.
#[derive(Debug, Clone)]
pub struct TruncationTensor {
    p: usize,
    n: usize,
    matrix: ComplexMatrix,
}

/// Unit vectors `v_ij = (H_i / H_j) / sqrt(N)` with `P_ij = v_ij v_ij^*`.
fn grid_vectors(h: &HadamardMatrix) -> Vec<Vec<C64>> {
    let n = h.n();
    let s = 1.0 / (n as f64).sqrt();
    (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            (0..n).map(|m| h.get(i, m) / h.get(j, m) * s).collect()
        })
        .collect()
}

/// Builds `T_p` for `p >= 1`, subject to `N^p <= size_cap`.
///
/// The trace of a product of rank-one projections `v_s v_s^*` is the cyclic
/// product of the overlaps `<v_s, v_{s+1}>`, so each entry costs `p`
/// multiplications once the `N^2 x N^2` overlap table is known.
pub fn truncation_tensor(grid: &MagicGrid, p: usize, config: &Config) -> Result<TruncationTensor> {
    if p == 0 {
        return Err(Error::InvalidArgument("T_p needs p >= 1".into()));
    }
    let n = grid.n;
    let dim = config.check_dim("T_p", n, p)?;
    let vecs = grid_vectors(&grid.source);
    let nn = n * n;
    let mut overlap = vec![ZERO; nn * nn];
    for a in 0..nn {
        for b in 0..nn {
            overlap[a * nn + b] = vecs[a].iter().zip(&vecs[b]).map(|(x, y)| x.conj() * y).sum();
        }
    }
    let inv_n = 1.0 / n as f64;
    let mut entries = vec![ZERO; dim * dim];
    entries.par_chunks_mut(dim).enumerate().for_each(|(row, out)| {
        let is = unflatten(row, n, p);
        for (col, slot) in out.iter_mut().enumerate() {
            let js = unflatten(col, n, p);
            let mut prod = C64::new(inv_n, 0.0);
            for s in 0..p {
                let t = (s + 1) % p;
                prod *= overlap[(is[s] * n + js[s]) * nn + is[t] * n + js[t]];
            }
            *slot = prod;
        }
    });
    Ok(TruncationTensor {
        p,
        n,
        matrix: ComplexMatrix::from_vec_unchecked(dim, dim, entries),
    })
}

impl TruncationTensor {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `(T_p^r)_{a,b}` for flattened multi-indices, by `r` vector-matrix
    /// products.
    pub fn power_entry(&self, r: usize, a: usize, b: usize) -> C64 {
        let dim = self.matrix.rows();
        let mut row = vec![ZERO; dim];
        row[a] = C64::new(1.0, 0.0);
        for _ in 0..r {
            let mut next = vec![ZERO; dim];
            for (k, &x) in row.iter().enumerate() {
                if x == ZERO {
                    continue;
                }
                for (slot, &t) in next.iter_mut().zip(self.matrix.row(k)) {
                    *slot += x * t;
                }
            }
            row = next;
        }
        row[b]
    }
}

/// `∫^r u_{a_1 b_1} ... u_{a_p b_p} = (T_p^r)_{a, b}`.
pub fn truncated_integral_word(h: &HadamardMatrix, r: usize, a: &[usize], b: &[usize], config: &Config) -> Result<C64> {
    let n = h.n();
    if a.len() != b.len() {
        return Err(Error::InvalidArgument(format!(
            "index words differ in length ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    if let Some(&bad) = a.iter().chain(b).find(|&&x| x >= n) {
        return Err(Error::IndexOutOfRange(format!("index {bad} not below N = {n}")));
    }
    let p = a.len();
    if p == 0 {
        return Ok(C64::new(1.0, 0.0));
    }
    let (fa, fb) = (flatten(a, n), flatten(b, n));
    if r == 0 {
        config.check_dim("T_p", n, p)?;
        return Ok(if fa == fb { C64::new(1.0, 0.0) } else { ZERO });
    }
    let grid = MagicGrid::unchecked(h);
    let t = truncation_tensor(&grid, p, config)?;
    Ok(t.power_entry(r, fa, fb))
}

/// Largest entrywise deviation across the four grid identities relating
/// `H`, `conj(H)`, `H^t` and `H^*`:
///
/// * `P^{conj H}_ij = P^H_ji`
/// * `(P^{H^t}_ij)_kl = (P^H_kl)_ij`
/// * `(P^{H^*}_ij)_kl = (P^H_lk)_ij`
/// * `(P^H_ij)_kl = (P^H_ji)_lk`
pub fn grid_relations_check(h: &HadamardMatrix) -> f64 {
    let n = h.n();
    let p = MagicGrid::unchecked(h);
    let pc = MagicGrid::unchecked(&h.conjugate());
    let pt = MagicGrid::unchecked(&h.transpose());
    let pa = MagicGrid::unchecked(&h.adjoint());
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let base = p.get(i, j)[(k, l)];
                    let d = [
                        pc.get(i, j)[(k, l)] - p.get(j, i)[(k, l)],
                        pt.get(i, j)[(k, l)] - p.get(k, l)[(i, j)],
                        pa.get(i, j)[(k, l)] - p.get(l, k)[(i, j)],
                        base - p.get(j, i)[(l, k)],
                    ];
                    worst = d.iter().map(|z| z.norm()).fold(worst, f64::max);
                }
            }
        }
    }
    worst
}
