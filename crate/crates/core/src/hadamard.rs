//! Complex Hadamard matrices: constructors, validation and the elementary
//! transforms (conjugate, transpose, adjoint, dephasing).

use std::fmt;
use std::path::PathBuf;

use serde::Serialize;

use crate::config::Config;
use crate::matrix::{root_of_unity, ComplexMatrix, C64};
use crate::phases::{PhaseParameterMatrix, PhaseSource};
use crate::{Error, Result};

/// How a Hadamard matrix was built. `Display` renders it in matrix-spec
/// syntax whenever the recipe is expressible there.
#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    Fourier(usize),
    FourierGroup(Vec<usize>),
    Tensor(Box<Provenance>, Box<Provenance>),
    Dita { m: usize, n: usize, phases: PhaseSource },
    Conjugate(Box<Provenance>),
    Transpose(Box<Provenance>),
    Adjoint(Box<Provenance>),
    Dephased(Box<Provenance>),
    File(PathBuf),
    Explicit,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Fourier(n) => write!(f, "fourier:{n}"),
            Provenance::FourierGroup(orders) => {
                let parts: Vec<String> = orders.iter().map(|o| o.to_string()).collect();
                write!(f, "fouriergroup:{}", parts.join("x"))
            }
            Provenance::Tensor(a, b) => write!(f, "tensor({a},{b})"),
            Provenance::Dita { m, n, phases } => write!(f, "dita({m},{n};{phases})"),
            Provenance::Conjugate(a) => write!(f, "conj({a})"),
            Provenance::Transpose(a) => write!(f, "transpose({a})"),
            Provenance::Adjoint(a) => write!(f, "adjoint({a})"),
            Provenance::Dephased(a) => write!(f, "dephase({a})"),
            Provenance::File(p) => write!(f, "file={}", p.display()),
            Provenance::Explicit => f.write_str("explicit"),
        }
    }
}

/// Deviations of a square matrix from the Hadamard conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationReport {
    pub n: usize,
    /// `max_ij ||H_ij| - 1|`
    pub unimodular_deviation: f64,
    /// `max_ij |<H_i, H_j> - N δ_ij|`
    pub orthogonality_deviation: f64,
    pub unimodular_tol: f64,
    pub orthogonality_tol: f64,
    pub pass: bool,
}

pub fn validate(m: &ComplexMatrix) -> Result<ValidationReport> {
    validate_with(m, &Config::default())
}

pub fn validate_with(m: &ComplexMatrix, config: &Config) -> Result<ValidationReport> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let unimodular_deviation = m.entries().iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);
    let mut orthogonality_deviation: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            let dot: C64 = m.row(i).iter().zip(m.row(j)).map(|(a, b)| a * b.conj()).sum();
            let target = if i == j { n as f64 } else { 0.0 };
            orthogonality_deviation = orthogonality_deviation.max((dot - target).norm());
        }
    }
    let unimodular_tol = config.unimodular_tol;
    let orthogonality_tol = config.orthogonal_factor * n as f64;
    Ok(ValidationReport {
        n,
        unimodular_deviation,
        orthogonality_deviation,
        unimodular_tol,
        orthogonality_tol,
        pass: unimodular_deviation <= unimodular_tol && orthogonality_deviation <= orthogonality_tol,
    })
}

/// A validated `N x N` complex Hadamard matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HadamardMatrix {
    matrix: ComplexMatrix,
    provenance: Provenance,
}

impl HadamardMatrix {
    /// Validates `matrix` against the default tolerances.
    pub fn new(matrix: ComplexMatrix, provenance: Provenance) -> Result<Self> {
        Self::with_config(matrix, provenance, &Config::default())
    }

    pub fn with_config(matrix: ComplexMatrix, provenance: Provenance, config: &Config) -> Result<Self> {
        let report = validate_with(&matrix, config)?;
        if !report.pass {
            return Err(Error::NotHadamard {
                unimodular: report.unimodular_deviation,
                orthogonal: report.orthogonality_deviation,
            });
        }
        Ok(HadamardMatrix { matrix, provenance })
    }

    // Used by transforms whose output is Hadamard whenever the input is.
    fn derived(matrix: ComplexMatrix, provenance: Provenance) -> Self {
        HadamardMatrix { matrix, provenance }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.matrix.get(i, j)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn conjugate(&self) -> Self {
        Self::derived(self.matrix.conjugate(), Provenance::Conjugate(Box::new(self.provenance.clone())))
    }

    pub fn transpose(&self) -> Self {
        Self::derived(self.matrix.transpose(), Provenance::Transpose(Box::new(self.provenance.clone())))
    }

    pub fn adjoint(&self) -> Self {
        Self::derived(self.matrix.adjoint(), Provenance::Adjoint(Box::new(self.provenance.clone())))
    }

    /// Equivalent matrix with first row and column equal to 1: column `j` is
    /// divided by `H_0j`, then row `i` by the resulting `(i, 0)` entry.
    pub fn dephase(&self) -> Self {
        let n = self.n();
        let mut m = self.matrix.clone();
        for j in 0..n {
            let pivot = m.get(0, j);
            for i in 0..n {
                m.set(i, j, m.get(i, j) / pivot);
            }
        }
        for i in 0..n {
            let pivot = m.get(i, 0);
            for j in 0..n {
                m.set(i, j, m.get(i, j) / pivot);
            }
        }
        Self::derived(m, Provenance::Dephased(Box::new(self.provenance.clone())))
    }

    /// Same entries with the rows permuted: row `i` of the output is row
    /// `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidArgument("not a permutation".into()));
        }
        let m = ComplexMatrix::from_fn(n, n, |i, j| self.get(perm[i], j));
        Ok(Self::derived(m, Provenance::Explicit))
    }

    /// Multiplies row `i` by `phase`.
    pub fn scale_row(&self, i: usize, phase: C64) -> Result<Self> {
        let n = self.n();
        if i >= n {
            return Err(Error::IndexOutOfRange(format!("row {i} of {n}")));
        }
        let m = ComplexMatrix::from_fn(n, n, |r, c| if r == i { self.get(r, c) * phase } else { self.get(r, c) });
        Self::new(m, Provenance::Explicit)
    }
}

/// The Fourier matrix `F_N = (w^{ij})`, `w = e^{2πi/N}`.
pub fn fourier(n: usize) -> Result<HadamardMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("Fourier order must be at least 1".into()));
    }
    let m = ComplexMatrix::from_fn(n, n, |i, j| root_of_unity(((i * j) % n) as i64, n));
    Ok(HadamardMatrix::derived(m, Provenance::Fourier(n)))
}

/// `F_{N_1} ⊗ ... ⊗ F_{N_k}`.
pub fn fourier_group(orders: &[usize]) -> Result<HadamardMatrix> {
    let (first, rest) = orders
        .split_first()
        .ok_or_else(|| Error::InvalidArgument("empty list of group orders".into()))?;
    let mut acc = fourier(*first)?;
    for &o in rest {
        acc = tensor(&acc, &fourier(o)?);
    }
    acc.provenance = Provenance::FourierGroup(orders.to_vec());
    Ok(acc)
}

/// Kronecker product, `L_{(i,a),(j,b)} = H_ij K_ab` with `(i,a) -> i·N_K + a`.
pub fn tensor(h: &HadamardMatrix, k: &HadamardMatrix) -> HadamardMatrix {
    let nk = k.n();
    let n = h.n() * nk;
    let m = ComplexMatrix::from_fn(n, n, |r, c| h.get(r / nk, c / nk) * k.get(r % nk, c % nk));
    HadamardMatrix::derived(
        m,
        Provenance::Tensor(Box::new(h.provenance.clone()), Box::new(k.provenance.clone())),
    )
}

/// Diță deformation `F_M ⊗_Q F_N`: `L_{(i,a),(j,b)} = Q_ib (F_M)_ij (F_N)_ab`,
/// with row `(i,a) -> i·N + a` and column `(j,b) -> j·N + b`.
pub fn dita(m: usize, n: usize, q: &PhaseParameterMatrix) -> Result<HadamardMatrix> {
    if q.m() != m || q.n() != n {
        return Err(Error::ShapeMismatch {
            expected: format!("{m}x{n} phase matrix"),
            found: format!("{}x{}", q.m(), q.n()),
        });
    }
    let size = m * n;
    let mat = ComplexMatrix::from_fn(size, size, |row, col| {
        let (i, a) = (row / n, row % n);
        let (j, b) = (col / n, col % n);
        q.get(i, b) * root_of_unity(((i * j) % m) as i64, m) * root_of_unity(((a * b) % n) as i64, n)
    });
    HadamardMatrix::new(
        mat,
        Provenance::Dita {
            m,
            n,
            phases: q.source().clone(),
        },
    )
}

/// Multiset of Haagerup products `H_ij H_kl conj(H_il) conj(H_kj)` over all
/// index quadruples, rounded to 9 decimals and sorted.
///
/// The multiset is unchanged by row/column permutations and by multiplying
/// rows or columns by phases, so differing fingerprints prove
/// inequivalence. Equal fingerprints prove nothing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fingerprint(Vec<(i64, i64)>);

const FINGERPRINT_SCALE: f64 = 1e9;

impl Fingerprint {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = C64> + '_ {
        self.0
            .iter()
            .map(|&(re, im)| C64::new(re as f64 / FINGERPRINT_SCALE, im as f64 / FINGERPRINT_SCALE))
    }
}

pub fn equivalence_fingerprint(h: &HadamardMatrix) -> Fingerprint {
    let n = h.n();
    let mut values = Vec::with_capacity(n.pow(4));
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                let a = h.get(i, j) * h.get(k, j).conj();
                for l in 0..n {
                    let z = a * h.get(k, l) * h.get(i, l).conj();
                    values.push((round9(z.re), round9(z.im)));
                }
            }
        }
    }
    values.sort_unstable();
    Fingerprint(values)
}

fn round9(x: f64) -> i64 {
    (x * FINGERPRINT_SCALE).round() as i64
}

/// Convenience: `Q ≡ 1` deformation, equal to `F_M ⊗ F_N`.
pub fn dita_undeformed(m: usize, n: usize) -> Result<HadamardMatrix> {
    dita(m, n, &PhaseParameterMatrix::ones(m, n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ONE;

    fn close(a: &HadamardMatrix, b: &HadamardMatrix) -> f64 {
        a.matrix().max_abs_diff(b.matrix())
    }

    #[test]
    fn fourier_small_cases() {
        assert_eq!(fourier(1).unwrap().matrix().entries(), &[ONE]);
        let f2 = fourier(2).unwrap();
        let minus = C64::new(-1.0, 0.0);
        assert_eq!(f2.matrix().entries(), &[ONE, ONE, ONE, minus]);
        let f4 = fourier(4).unwrap();
        assert!((f4.get(3, 3) - C64::new(0.0, 1.0)).norm() < 1e-15);
        assert!(fourier(0).is_err());
    }

    #[test]
    fn fourier_group_is_tensor_fold() {
        assert_eq!(fourier_group(&[2]).unwrap().matrix(), fourier(2).unwrap().matrix());
        let g = fourier_group(&[2, 3]).unwrap();
        let t = tensor(&fourier(2).unwrap(), &fourier(3).unwrap());
        assert_eq!(g.matrix(), t.matrix());
        let k = fourier_group(&[2, 2]).unwrap();
        assert!(k.matrix().entries().iter().all(|z| z.im == 0.0 && z.re.abs() == 1.0));
        assert!(fourier_group(&[]).is_err());
        assert_eq!(g.provenance().to_string(), "fouriergroup:2x3");
    }

    #[test]
    fn tensor_with_trivial_factor() {
        let k = dita(2, 2, &PhaseParameterMatrix::seeded(2, 2, 3).unwrap()).unwrap();
        assert_eq!(tensor(&fourier(1).unwrap(), &k).matrix(), k.matrix());
        let l = tensor(&fourier(2).unwrap(), &fourier(2).unwrap());
        assert!(validate(l.matrix()).unwrap().pass);
    }

    #[test]
    fn dita_cases() {
        let ones = dita_undeformed(2, 2).unwrap();
        let t = tensor(&fourier(2).unwrap(), &fourier(2).unwrap());
        assert!(close(&ones, &t) < 1e-12);

        let q = PhaseParameterMatrix::seeded(2, 2, 11).unwrap();
        let d = dita(2, 2, &q).unwrap();
        // ((1,1),(1,1)) -> flat index 3
        assert!((d.get(3, 3) - q.get(1, 1)).norm() < 1e-15);
        assert!(dita(2, 3, &q).is_err());
        assert_eq!(d.provenance().to_string(), "dita(2,2;seed=11)");
    }

    #[test]
    fn seeded_dita_matrices_validate() {
        for m in 1..=4 {
            for n in 1..=4 {
                let q = PhaseParameterMatrix::seeded(m, n, (m * 10 + n) as u64).unwrap();
                let d = dita(m, n, &q).unwrap();
                assert!(validate(d.matrix()).unwrap().orthogonality_deviation < 1e-12);
            }
        }
    }

    #[test]
    fn transforms() {
        let f = fourier(5).unwrap();
        assert_eq!(f.transpose().matrix(), f.matrix());
        assert_eq!(fourier(2).unwrap().conjugate().matrix(), fourier(2).unwrap().matrix());
        let h = dita(2, 3, &PhaseParameterMatrix::seeded(2, 3, 5).unwrap()).unwrap();
        assert_eq!(h.conjugate().adjoint().matrix(), h.transpose().matrix());
        assert_eq!(h.transpose().conjugate().matrix(), h.adjoint().matrix());
        assert_eq!(h.transpose().transpose().matrix(), h.matrix());
        for t in [h.conjugate(), h.transpose(), h.adjoint()] {
            assert!(validate(t.matrix()).unwrap().pass);
        }
    }

    #[test]
    fn validation_reports() {
        let rep = validate(fourier(5).unwrap().matrix()).unwrap();
        assert!(rep.pass && rep.unimodular_deviation < 1e-12 && rep.orthogonality_deviation < 1e-12);

        let ones = ComplexMatrix::from_fn(2, 2, |_, _| ONE);
        let rep = validate(&ones).unwrap();
        assert!(!rep.pass);
        assert_eq!(rep.orthogonality_deviation, 2.0);

        let mut f3 = fourier(3).unwrap().matrix().clone();
        f3.set(1, 2, f3.get(1, 2) * 2.0);
        let rep = validate(&f3).unwrap();
        assert!(!rep.pass);
        assert!((rep.unimodular_deviation - 1.0).abs() < 1e-15);

        let rect = ComplexMatrix::from_fn(2, 3, |_, _| ONE);
        assert!(matches!(validate(&rect), Err(Error::NotSquare { .. })));
        assert!(HadamardMatrix::new(ones, Provenance::Explicit).is_err());
    }

    #[test]
    fn dephasing() {
        let f = fourier(4).unwrap();
        assert!(close(&f.dephase(), &f) < 1e-15);

        let h = dita(2, 2, &PhaseParameterMatrix::seeded(2, 2, 7).unwrap()).unwrap();
        let d = h.dephase();
        for k in 0..4 {
            assert!((d.get(0, k) - ONE).norm() < 1e-14 && (d.get(k, 0) - ONE).norm() < 1e-14);
        }
        // The leading 2x2 block is the undeformed F_2.
        let f2 = fourier(2).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((d.get(i, j) - f2.get(i, j)).norm() < 1e-14);
            }
        }
        assert!(close(&d.dephase(), &d) < 1e-12);
        assert!(validate(d.matrix()).unwrap().pass);

        let rotated = h.scale_row(0, C64::cis(0.7)).unwrap();
        assert!(close(&rotated.dephase(), &d) < 1e-12);
    }

    #[test]
    fn fingerprints() {
        let h = dita(2, 3, &PhaseParameterMatrix::seeded(2, 3, 7).unwrap()).unwrap();
        let fp = equivalence_fingerprint(&h);
        assert_eq!(fp.len(), 6usize.pow(4));
        assert_eq!(fp, equivalence_fingerprint(&h.dephase()));
        let perm = h.permute_rows(&[3, 0, 5, 1, 2, 4]).unwrap();
        assert_eq!(fp, equivalence_fingerprint(&perm));

        let klein = fourier_group(&[2, 2]).unwrap();
        let cyclic = fourier(4).unwrap();
        assert_ne!(equivalence_fingerprint(&klein), equivalence_fingerprint(&cyclic));
    }

    #[test]
    fn permute_rows_rejects_non_permutations() {
        let f = fourier(3).unwrap();
        assert!(f.permute_rows(&[0, 0, 1]).is_err());
        assert!(f.permute_rows(&[0, 1]).is_err());
    }
}
