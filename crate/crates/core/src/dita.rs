//! Structured evaluation of profiles, Gram matrices and moments for Diță
//! deformations `H = F_M ⊗_Q F_N`.
//!
//! Writing composite indices as `(i, a)` with `i ∈ Z_M`, `a ∈ Z_N`, the
//! profile of `H` factors as
//!
//! ```text
//! Q_{iajb,kcld} = δ(a - b = c - d) · R^{i+l-k-j}_{ab,cd},
//! R^x_{ab,cd}   = (1/M) Σ_m w^{mx} Q_ma Q_md / (Q_mc Q_mb),   w = e^{2πi/M}
//! ```
//!
//! so an entry of `X` vanishes unless the `a` and `b` words differ by a
//! constant shift `t`, and otherwise depends on the `i, j` words only
//! through the differences `d_s = i_s - j_s`. The moment evaluator uses the
//! second fact to block-diagonalize `X` by a Fourier transform over
//! `Z_M^r`: only characters `φ` with `Σ φ_s ≡ 0 (mod M)` give nonzero
//! blocks, each of size `N^r`.

use std::time::Instant;

use serde::Serialize;

use crate::config::Config;
use crate::hadamard::{dita, HadamardMatrix};
use crate::matrix::{flatten, power_traces, root_of_unity, unflatten, ComplexMatrix, C64, ZERO};
use crate::phases::PhaseParameterMatrix;
use crate::spectra::moments_via_x;
use crate::{Error, Result};

/// All slices `R^x`, `x ∈ Z_M`, of the deformation kernel.
#[derive(Debug, Clone)]
pub struct DitaKernel {
    m: usize,
    n: usize,
    q: PhaseParameterMatrix,
    // [x][a][b][c][d]
    values: Vec<C64>,
}

fn ratio(q: &PhaseParameterMatrix, m: usize, a: usize, b: usize, c: usize, d: usize) -> C64 {
    q.get(m, a) * q.get(m, d) / (q.get(m, c) * q.get(m, b))
}

/// `R^x_{ab,cd}` for every `a, b, c, d ∈ Z_N`, flattened row-major.
pub fn r_kernel(q: &PhaseParameterMatrix, x: usize) -> Vec<C64> {
    let (m, n) = (q.m(), q.n());
    let inv_m = 1.0 / m as f64;
    let mut out = Vec::with_capacity(n.pow(4));
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let s: C64 = (0..m)
                        .map(|k| root_of_unity(((k * x) % m) as i64, m) * ratio(q, k, a, b, c, d))
                        .sum();
                    out.push(s * inv_m);
                }
            }
        }
    }
    out
}

impl DitaKernel {
    pub fn new(q: &PhaseParameterMatrix) -> Self {
        let values = (0..q.m()).flat_map(|x| r_kernel(q, x)).collect();
        DitaKernel {
            m: q.m(),
            n: q.n(),
            q: q.clone(),
            values,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn phases(&self) -> &PhaseParameterMatrix {
        &self.q
    }

    /// `R^x_{ab,cd}` with `x` taken mod `M` and `a, b, c, d` mod `N`.
    #[inline]
    pub fn r(&self, x: i64, a: usize, b: usize, c: usize, d: usize) -> C64 {
        let n = self.n;
        let x = x.rem_euclid(self.m as i64) as usize;
        self.values[(((x * n + a % n) * n + b % n) * n + c % n) * n + d % n]
    }

    /// Worst deviation of `Σ_x w^{-mx} R^x_{ab,cd}` from
    /// `Q_ma Q_md / (Q_mc Q_mb)` over all `m, a, b, c, d`.
    pub fn inversion_residual(&self) -> f64 {
        let (m, n) = (self.m, self.n);
        let mut worst: f64 = 0.0;
        for k in 0..m {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        for d in 0..n {
                            let s: C64 = (0..m)
                                .map(|x| root_of_unity(-(((k * x) % m) as i64), m) * self.r(x as i64, a, b, c, d))
                                .sum();
                            worst = worst.max((s - ratio(&self.q, k, a, b, c, d)).norm());
                        }
                    }
                }
            }
        }
        worst
    }

    /// Profile entry `Q_{(i,a)(j,b),(k,c)(l,d)}` of `dita(M, N, Q)`.
    #[allow(clippy::too_many_arguments)]
    pub fn profile_entry(&self, i: usize, a: usize, j: usize, b: usize, k: usize, c: usize, l: usize, d: usize) -> C64 {
        let n = self.n;
        if (a + n - b) % n != (c + n - d) % n {
            return ZERO;
        }
        self.r(i as i64 + l as i64 - k as i64 - j as i64, a, b, c, d)
    }

    /// `X_{(i_1 a_1)...(i_r a_r), (j_1 b_1)...(j_r b_r)}` of `dita(M, N, Q)`.
    pub fn gram_entry(&self, is: &[usize], as_: &[usize], js: &[usize], bs: &[usize]) -> Result<C64> {
        let r = is.len();
        if r == 0 || as_.len() != r || js.len() != r || bs.len() != r {
            return Err(Error::InvalidArgument("index words must share a positive length".into()));
        }
        if is.iter().chain(js).any(|&i| i >= self.m) || as_.iter().chain(bs).any(|&a| a >= self.n) {
            return Err(Error::IndexOutOfRange("index word outside Z_M or Z_N".into()));
        }
        Ok(self.gram_entry_unchecked(is, as_, js, bs))
    }

    fn gram_entry_unchecked(&self, is: &[usize], as_: &[usize], js: &[usize], bs: &[usize]) -> C64 {
        let n = self.n;
        let r = is.len();
        let shift = (as_[0] + n - bs[0]) % n;
        if (1..r).any(|s| (as_[s] + n - bs[s]) % n != shift) {
            return ZERO;
        }
        let mut prod = C64::new(1.0, 0.0);
        for s in 0..r {
            let t = (s + 1) % r;
            let x = is[s] as i64 + js[t] as i64 - js[s] as i64 - is[t] as i64;
            prod *= self.r(x, as_[s], bs[s], as_[t], bs[t]);
        }
        prod
    }
}

pub fn structured_profile_entry(
    q: &PhaseParameterMatrix,
    (i, a): (usize, usize),
    (j, b): (usize, usize),
    (k, c): (usize, usize),
    (l, d): (usize, usize),
) -> C64 {
    DitaKernel::new(q).profile_entry(i, a, j, b, k, c, l, d)
}

pub fn structured_gram_entry(q: &PhaseParameterMatrix, is: &[usize], as_: &[usize], js: &[usize], bs: &[usize]) -> Result<C64> {
    DitaKernel::new(q).gram_entry(is, as_, js, bs)
}

/// `X` assembled from its admissible pattern only.
#[derive(Debug, Clone)]
pub struct StructuredGram {
    pub matrix: ComplexMatrix,
    /// Number of entries evaluated (those passing the shift constraint).
    pub evaluated: usize,
}

/// Row `(i_1 a_1 ... i_r a_r)` flattens to base-`MN` digits `i_s·N + a_s`.
pub fn structured_gram_matrix(kernel: &DitaKernel, r: usize, config: &Config) -> Result<StructuredGram> {
    let (m, n) = (kernel.m, kernel.n);
    let dim = config.check_dim("X", m * n, r)?;
    let mut x = ComplexMatrix::zeros(dim, dim);
    let mut evaluated = 0;
    let mut bs = vec![0; r];
    let mut cols = vec![0; r];
    for is_flat in 0..m.pow(r as u32) {
        let is = unflatten(is_flat, m, r);
        for as_flat in 0..n.pow(r as u32) {
            let as_ = unflatten(as_flat, n, r);
            let row = flatten(&composite(&is, &as_, n), m * n);
            for js_flat in 0..m.pow(r as u32) {
                let js = unflatten(js_flat, m, r);
                for t in 0..n {
                    for s in 0..r {
                        bs[s] = (as_[s] + n - t) % n;
                    }
                    for s in 0..r {
                        cols[s] = js[s] * n + bs[s];
                    }
                    let col = flatten(&cols, m * n);
                    x.set(row, col, kernel.gram_entry_unchecked(&is, &as_, &js, &bs));
                    evaluated += 1;
                }
            }
        }
    }
    Ok(StructuredGram { matrix: x, evaluated })
}

fn composite(is: &[usize], as_: &[usize], n: usize) -> Vec<usize> {
    is.iter().zip(as_).map(|(i, a)| i * n + a).collect()
}

/// The `N^r x N^r` block of `X` for the character `φ` of `Z_M^r`, or
/// `None` when `Σ φ_s ≢ 0 (mod M)` and the block vanishes.
fn character_block(kernel: &DitaKernel, phi: &[usize], r: usize) -> Option<ComplexMatrix> {
    let (m, n) = (kernel.m, kernel.n);
    if phi.iter().sum::<usize>() % m != 0 {
        return None;
    }
    // Prefix sums Φ_t = φ_0 + ... + φ_t, for t < r - 1.
    let prefix: Vec<usize> = phi
        .iter()
        .take(r - 1)
        .scan(0, |acc, &f| {
            *acc = (*acc + f) % m;
            Some(*acc)
        })
        .collect();
    let dim = n.pow(r as u32);
    let mut block = ComplexMatrix::zeros(dim, dim);
    let mut bs = vec![0; r];
    let mut factors = vec![ZERO; r * m];
    for row in 0..dim {
        let as_ = unflatten(row, n, r);
        for t in 0..n {
            for s in 0..r {
                bs[s] = (as_[s] + n - t) % n;
            }
            // f_s(x) = R^x_{a_s b_s, a_{s+1} b_{s+1}}
            for s in 0..r {
                let u = (s + 1) % r;
                for x in 0..m {
                    factors[s * m + x] = kernel.r(x as i64, as_[s], bs[s], as_[u], bs[u]);
                }
            }
            let mut acc = ZERO;
            for e_flat in 0..m.pow(r as u32 - 1) {
                let es = unflatten(e_flat, m, r - 1);
                let mut prod = C64::new(1.0, 0.0);
                let mut total = 0;
                let mut phase = 0;
                for (s, &e) in es.iter().enumerate() {
                    prod *= factors[s * m + e];
                    total += e;
                    phase += e * prefix[s];
                }
                prod *= factors[(r - 1) * m + (m - total % m) % m];
                acc += prod * root_of_unity(-((phase % m) as i64), m);
            }
            block.set(row, flatten(&bs, n), acc * m as f64);
        }
    }
    Some(block)
}

/// `c_p^r` of `dita(M, N, Q)` for `p = 1..=p_max`, without forming `X`.
pub fn structured_moment_column(kernel: &DitaKernel, r: usize, p_max: usize, config: &Config) -> Result<Vec<f64>> {
    let (m, n) = (kernel.m, kernel.n);
    let size = (m * n) as f64;
    if r == 0 {
        return Ok((1..=p_max).map(|p| size.powi(p as i32)).collect());
    }
    config.check_dim("character block", n, r)?;
    let mut totals = vec![ZERO; p_max + 1];
    for phi_flat in 0..m.pow(r as u32) {
        let phi = unflatten(phi_flat, m, r);
        if let Some(block) = character_block(kernel, &phi, r) {
            for (acc, t) in totals.iter_mut().zip(power_traces(&block, p_max)) {
                *acc += t;
            }
        }
    }
    let scale = size.powi(r as i32).recip();
    totals
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(p, z)| {
            let bound = 1e-8 * size.powi(p as i32);
            if z.im.abs() >= bound {
                return Err(Error::Invariant(format!(
                    "structured trace at p = {p} has imaginary part {:.3e}",
                    z.im
                )));
            }
            Ok(z.re * scale)
        })
        .collect()
}

pub fn structured_moments(q: &PhaseParameterMatrix, p: usize, r: usize, config: &Config) -> Result<f64> {
    if p == 0 {
        return Err(Error::InvalidArgument("moment order p must be >= 1".into()));
    }
    Ok(structured_moment_column(&DitaKernel::new(q), r, p, config)?[p - 1])
}

/// Number of `X` entries passing the shift constraint: `M^{2r} N^{r+1}`.
pub fn gram_pattern_count(m: usize, n: usize, r: usize) -> u128 {
    (m as u128).pow(2 * r as u32) * (n as u128).pow(r as u32 + 1)
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub p: usize,
    pub r: usize,
    pub dense_ms: f64,
    pub structured_ms: f64,
    pub speedup: f64,
    pub verified: bool,
}

fn median_ms(mut f: impl FnMut() -> Result<f64>, reps: usize) -> Result<f64> {
    let mut times = Vec::with_capacity(reps);
    for _ in 0..reps {
        let start = Instant::now();
        std::hint::black_box(f()?);
        times.push(start.elapsed().as_secs_f64() * 1e3);
    }
    times.sort_by(f64::total_cmp);
    Ok(times[times.len() / 2])
}

/// Times the dense (`X` via the profile) and structured evaluations of
/// `c_p^r`. The two values are compared first; on disagreement no timing
/// is done and the report carries `verified = false`.
pub fn bench_structured_vs_dense(q: &PhaseParameterMatrix, p: usize, r: usize, reps: usize, config: &Config) -> Result<BenchReport> {
    if reps == 0 {
        return Err(Error::InvalidArgument("need at least one repetition".into()));
    }
    let (m, n) = (q.m(), q.n());
    let h: HadamardMatrix = dita(m, n, q)?;
    let dense = moments_via_x(&h, p, r, config)?;
    let structured = structured_moments(q, p, r, config)?;
    let verified = (dense - structured).abs() <= 1e-9 * dense.abs().max(1.0);
    let mut report = BenchReport {
        m,
        n,
        p,
        r,
        dense_ms: 0.0,
        structured_ms: 0.0,
        speedup: 0.0,
        verified,
    };
    if !verified {
        return Ok(report);
    }
    report.dense_ms = median_ms(|| moments_via_x(&h, p, r, config), reps)?;
    report.structured_ms = median_ms(|| structured_moments(q, p, r, config), reps)?;
    report.speedup = report.dense_ms / report.structured_ms.max(f64::MIN_POSITIVE);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{gram_matrix, profile, GramRoute};

    fn q(m: usize, n: usize, seed: u64) -> PhaseParameterMatrix {
        PhaseParameterMatrix::seeded(m, n, seed).unwrap()
    }

    #[test]
    fn undeformed_kernel_is_delta() {
        let k = DitaKernel::new(&PhaseParameterMatrix::ones(3, 2).unwrap());
        for x in 0..3 {
            for idx in 0..16 {
                let [a, b, c, d] = [idx >> 3 & 1, idx >> 2 & 1, idx >> 1 & 1, idx & 1];
                let want = if x == 0 { 1.0 } else { 0.0 };
                assert!((k.r(x, a, b, c, d) - want).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn kernel_invariants() {
        for (m, n, seed) in [(2, 2, 1), (2, 3, 7), (3, 3, 13)] {
            let k = DitaKernel::new(&q(m, n, seed));
            for a in 0..n {
                for b in 0..n {
                    assert!((k.r(0, a, b, a, b) - 1.0).norm() < 1e-12);
                }
            }
            assert!(k.values.iter().all(|z| z.norm() <= 1.0 + 1e-12));
            assert!(k.inversion_residual() < 1e-10);
        }
    }

    #[test]
    fn profile_entries_match_dense() {
        let (m, n) = (2, 3);
        let qq = q(m, n, 5);
        let k = DitaKernel::new(&qq);
        let dense = profile(&dita(m, n, &qq).unwrap());
        let size = m * n;
        for flat in 0..size.pow(4) {
            let [w, x, y, z] = [flat / size.pow(3), flat / size.pow(2) % size, flat / size % size, flat % size];
            let s = k.profile_entry(w / n, w % n, x / n, x % n, y / n, y % n, z / n, z % n);
            assert!((s - dense.get(w, x, y, z)).norm() < 1e-10);
        }
        assert_eq!(k.profile_entry(0, 0, 0, 1, 0, 0, 0, 0), ZERO);
        assert!((k.profile_entry(1, 2, 0, 1, 1, 2, 0, 1) - 1.0).norm() < 1e-12);
    }

    #[test]
    fn gram_entries_and_pattern() {
        let qq = q(2, 2, 3);
        let k = DitaKernel::new(&qq);
        assert_eq!(k.gram_entry(&[0, 1], &[0, 0], &[1, 1], &[1, 0]).unwrap(), ZERO);
        assert!((k.gram_entry(&[1, 0, 1], &[0, 1, 1], &[1, 0, 1], &[0, 1, 1]).unwrap() - 1.0).norm() < 1e-12);
        assert!(k.gram_entry(&[2], &[0], &[0], &[0]).is_err());

        let cfg = Config::default();
        let dense = gram_matrix(&dita(2, 2, &qq).unwrap(), 3, GramRoute::Profile, &cfg).unwrap();
        let sg = structured_gram_matrix(&k, 3, &cfg).unwrap();
        assert_eq!(sg.matrix.rows(), 64);
        assert!(sg.matrix.max_abs_diff(dense.matrix()) < 1e-10);
        assert_eq!(sg.evaluated as u128, gram_pattern_count(2, 2, 3));
    }

    #[test]
    fn undeformed_moments() {
        let cfg = Config::default();
        let ones = PhaseParameterMatrix::ones(2, 3).unwrap();
        for p in 1..=3 {
            for r in 1..=3 {
                let v = structured_moments(&ones, p, r, &cfg).unwrap();
                assert!((v - 6f64.powi(p as i32 - 1)).abs() < 1e-9, "p={p} r={r} v={v}");
            }
        }
        assert!((structured_moments(&q(3, 2, 4), 1, 3, &cfg).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn moments_match_dense() {
        let cfg = Config::default();
        let qq = q(2, 2, 7);
        let h = dita(2, 2, &qq).unwrap();
        let k = DitaKernel::new(&qq);
        for r in 1..=3 {
            let col = structured_moment_column(&k, r, 4, &cfg).unwrap();
            for p in 1..=4 {
                let d = moments_via_x(&h, p, r, &cfg).unwrap();
                assert!((col[p - 1] - d).abs() <= 1e-9 * d.abs().max(1.0));
            }
        }
    }

    #[test]
    fn bench_report() {
        let rep = bench_structured_vs_dense(&q(2, 2, 7), 3, 3, 2, &Config::default()).unwrap();
        assert!(rep.verified && rep.dense_ms > 0.0 && rep.structured_ms > 0.0);
        assert!((rep.speedup - rep.dense_ms / rep.structured_ms).abs() < 1e-9);
    }
}
