use crate::hadamard::HadamardMatrix;
use crate::matrix::{C64, ZERO};

/// `Q_{ab,cd} = (1/N) sum_i H_ia H_id / (H_ib H_ic)`.
#[derive(Debug, Clone)]
pub struct ProfileTensor {
    n: usize,
    values: Vec<C64>,
}

pub fn profile(h: &HadamardMatrix) -> ProfileTensor {
    let n = h.n();
    let inv_n = 1.0 / n as f64;
    let mut values = vec![ZERO; n.pow(4)];
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let s: C64 = (0..n)
                        .map(|i| h.get(i, a) * h.get(i, d) / (h.get(i, b) * h.get(i, c)))
                        .sum();
                    values[((a * n + b) * n + c) * n + d] = s * inv_n;
                }
            }
        }
    }
    ProfileTensor { n, values }
}

impl ProfileTensor {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> C64 {
        let n = self.n;
        self.values[((a * n + b) * n + c) * n + d]
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Worst deviations from `Q_{ab,ab} = 1`, `Q_{ab,cd} = conj(Q_{cd,ab})`
    /// and `|Q| <= 1`, in that order.
    pub fn invariant_deviations(&self) -> (f64, f64, f64) {
        let n = self.n;
        let (mut diag, mut herm, mut bound) = (0.0f64, 0.0f64, 0.0f64);
        for a in 0..n {
            for b in 0..n {
                diag = diag.max((self.get(a, b, a, b) - 1.0).norm());
                for c in 0..n {
                    for d in 0..n {
                        let q = self.get(a, b, c, d);
                        herm = herm.max((q - self.get(c, d, a, b).conj()).norm());
                        bound = bound.max(q.norm() - 1.0);
                    }
                }
            }
        }
        (diag, herm, bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hadamard::{dita, fourier, tensor};
    use crate::phases::PhaseParameterMatrix;

    #[test]
    fn fourier_profile_is_group_delta() {
        for n in 2..=6 {
            let q = profile(&fourier(n).unwrap());
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        for d in 0..n {
                            let want = if (a + d) % n == (b + c) % n { 1.0 } else { 0.0 };
                            assert!((q.get(a, b, c, d) - want).norm() < 1e-12);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn tensor_profile_factorizes() {
        let h = fourier(2).unwrap();
        let k = dita(1, 3, &PhaseParameterMatrix::seeded(1, 3, 2).unwrap()).unwrap();
        let l = tensor(&h, &k);
        let (qh, qk, ql) = (profile(&h), profile(&k), profile(&l));
        let (nh, nk) = (2, 3);
        let ix = |i: usize, a: usize| i * nk + a;
        for i in 0..nh {
            for j in 0..nh {
                for kk in 0..nh {
                    for ll in 0..nh {
                        for a in 0..nk {
                            for b in 0..nk {
                                for c in 0..nk {
                                    for d in 0..nk {
                                        let lhs = ql.get(ix(i, a), ix(j, b), ix(kk, c), ix(ll, d));
                                        let rhs = qh.get(i, j, kk, ll) * qk.get(a, b, c, d);
                                        assert!((lhs - rhs).norm() < 1e-12);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn invariants_hold_for_deformed_matrices() {
        let h = dita(2, 3, &PhaseParameterMatrix::seeded(2, 3, 7).unwrap()).unwrap();
        let (diag, herm, bound) = profile(&h).invariant_deviations();
        assert!(diag < 1e-12 && herm < 1e-12 && bound < 1e-12);
    }
}
