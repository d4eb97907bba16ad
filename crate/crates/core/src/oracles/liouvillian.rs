//! Dense vectorised-Liouvillian propagation for the balanced heating master
//! equation on one truncated mode. Uses its own matrices and a Taylor-series
//! exponential so it stays independent of the main integrator.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::linalg::{CMatrix, C64};
use crate::tensor::DensityMatrix;
use crate::{Error, Result};

/// Largest mode cutoff accepted (the Liouvillian is `cutoff² × cutoff²`).
pub const LIOUVILLIAN_MAX_CUTOFF: usize = 12;

type Dense = Vec<Vec<C64>>;

fn zeros(n: usize) -> Dense {
    vec![vec![C64::new(0.0, 0.0); n]; n]
}

fn matmul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for k in 0..n {
            let v = a[i][k];
            if v.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i][j] += v * b[k][j];
            }
        }
    }
    out
}

fn kron(a: &Dense, b: &Dense) -> Dense {
    let (n, m) = (a.len(), b.len());
    let mut out = zeros(n * m);
    for i in 0..n {
        for j in 0..n {
            for k in 0..m {
                for l in 0..m {
                    out[i * m + k][j * m + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn transpose(a: &Dense) -> Dense {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i]).collect()).collect()
}

fn identity(n: usize) -> Dense {
    let mut m = zeros(n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = C64::new(1.0, 0.0);
    }
    m
}

fn axpy(acc: &mut Dense, s: f64, x: &Dense) {
    for (ra, rx) in acc.iter_mut().zip(x) {
        for (a, b) in ra.iter_mut().zip(rx) {
            *a += *b * s;
        }
    }
}

fn taylor_expm(a: &Dense) -> Dense {
    let n = a.len();
    let norm = a
        .iter()
        .map(|r| r.iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as i32
    } else {
        0
    };
    let scale = 2f64.powi(-squarings);
    let scaled: Dense = a
        .iter()
        .map(|r| r.iter().map(|v| v * scale).collect())
        .collect();
    let mut result = identity(n);
    let mut term = identity(n);
    for k in 1..=30 {
        term = matmul(&term, &scaled);
        let inv_k = 1.0 / k as f64;
        term.iter_mut()
            .flat_map(|r| r.iter_mut())
            .for_each(|v| *v *= inv_k);
        axpy(&mut result, 1.0, &term);
    }
    for _ in 0..squarings {
        result = matmul(&result, &result);
    }
    result
}

/// Evolves a single-mode state under
/// `dρ/dt = γ(a†ρa + aρa† − ½{aa†, ρ} − ½{a†a, ρ})` for time `t`, by
/// exponentiating the row-major vectorised generator.
pub fn liouvillian_expm(rho0: &DensityMatrix, gamma: f64, t: f64) -> Result<DensityMatrix> {
    if rho0.layout().len() != 1 {
        return Err(Error::layout(
            "the Liouvillian oracle handles a single mode",
        ));
    }
    let n = rho0.layout().total_dim();
    if n > LIOUVILLIAN_MAX_CUTOFF {
        return Err(Error::DimensionLimit {
            requested: n,
            limit: LIOUVILLIAN_MAX_CUTOFF,
        });
    }
    let mut a = zeros(n);
    for k in 1..n {
        a[k - 1][k] = C64::new((k as f64).sqrt(), 0.0);
    }
    let ad = transpose(&a);
    let id = identity(n);
    let aad = matmul(&a, &ad);
    let ada = matmul(&ad, &a);

    // vec(AρB) = (A ⊗ Bᵀ) vec(ρ) for row-major stacking.
    let mut l = kron(&ad, &transpose(&a));
    axpy(&mut l, 1.0, &kron(&a, &transpose(&ad)));
    axpy(&mut l, -0.5, &kron(&aad, &id));
    axpy(&mut l, -0.5, &kron(&id, &transpose(&aad)));
    axpy(&mut l, -0.5, &kron(&ada, &id));
    axpy(&mut l, -0.5, &kron(&id, &transpose(&ada)));
    let gt = gamma * t;
    l.iter_mut()
        .flat_map(|r| r.iter_mut())
        .for_each(|v| *v *= gt);

    let prop = taylor_expm(&l);
    let v0 = rho0.matrix().as_slice();
    let v: Vec<C64> = prop
        .iter()
        .map(|row| row.iter().zip(v0).map(|(p, x)| p * x).sum())
        .collect();
    DensityMatrix::from_matrix(rho0.layout().clone(), CMatrix::from_vec(n, n, v)?)
}
