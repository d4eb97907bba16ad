//! Cyclic Jacobi eigensolver for complex Hermitian matrices.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::{CMatrix, C64, ZERO};

/// Eigenvalues in ascending order with the matching eigenvectors stored as
/// columns of `vectors`.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

const MAX_SWEEPS: usize = 100;

/// Diagonalizes a Hermitian matrix. Only the Hermitian part of the input is
/// meaningful; callers are expected to check hermiticity themselves.
pub fn eigh(h: &CMatrix) -> EigenDecomposition {
    assert!(h.is_square(), "eigh requires a square matrix");
    let n = h.rows();
    let mut a = h.clone();
    let mut v = CMatrix::identity(n);
    let scale = a.max_abs().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c)))
            .map(|(r, c)| a[(r, c)].norm_sqr())
            .sum();
        if off.sqrt() <= 1e-15 * scale * (n as f64) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // V = diag(1, conj(phase)) * R with R the real rotation.
                let vpp = C64::new(c, 0.0);
                let vpq = C64::new(s, 0.0);
                let vqp = phase.conj() * (-s);
                let vqq = phase.conj() * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * vpp + akq * vqp;
                    a[(k, q)] = akp * vpq + akq * vqq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = vpp.conj() * apk + vqp.conj() * aqk;
                    a[(q, k)] = vpq.conj() * apk + vqq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * vpp + vkq * vqp;
                    v[(k, q)] = vkp * vpq + vkq * vqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    EigenDecomposition { values, vectors }
}

/// Principal square root of a positive-semidefinite Hermitian matrix;
/// slightly negative eigenvalues from rounding are clamped to zero.
pub fn hermitian_sqrt(h: &CMatrix) -> CMatrix {
    let EigenDecomposition { values, vectors } = eigh(h);
    let n = h.rows();
    let roots: Vec<f64> = values.iter().map(|&l| l.max(0.0).sqrt()).collect();
    CMatrix::from_fn(n, n, |r, c| {
        (0..n)
            .map(|k| vectors[(r, k)] * roots[k] * vectors[(c, k)].conj())
            .sum()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::I;

    fn random_hermitian(n: usize, seed: u64) -> CMatrix {
        let mut state = seed;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let m = CMatrix::from_fn(n, n, |_, _| C64::new(next(), next()));
        &m + &m.dagger()
    }

    #[test]
    fn reconstructs_random_hermitian() {
        for (n, seed) in [(2, 1), (5, 2), (17, 3), (40, 4)] {
            let h = random_hermitian(n, seed);
            let EigenDecomposition { values, vectors } = eigh(&h);
            assert!(vectors.unitarity_residual() < 1e-12);
            let lam =
                CMatrix::from_diag(&values.iter().map(|&x| C64::new(x, 0.0)).collect::<Vec<_>>());
            let rebuilt = vectors.matmul(&lam).matmul(&vectors.dagger());
            assert!(rebuilt.max_abs_diff(&h) < 1e-12, "n = {n}");
            assert!(values.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn pauli_y_spectrum() {
        let sy = CMatrix::from_rows([[ZERO, -I], [I, ZERO]]);
        let values = eigh(&sy).values;
        assert!((values[0] + 1.0).abs() < 1e-15 && (values[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sqrt_squares_back() {
        let h = random_hermitian(6, 9);
        let psd = h.matmul(&h);
        let root = hermitian_sqrt(&psd);
        assert!(root.matmul(&root).max_abs_diff(&psd) < 1e-11);
    }
}
