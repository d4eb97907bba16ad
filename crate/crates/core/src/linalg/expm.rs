//! Matrix exponential by scaling and squaring around a [13/13] Padé
//! approximant (Higham 2005).

use super::{CMatrix, C64};
use crate::Result;
#[allow(unused_imports)]
use num_traits::Float;

const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

const THETA13: f64 = 5.371_920_351_148_152;

/// `exp(a)` for a square complex matrix.
pub fn expm(a: &CMatrix) -> Result<CMatrix> {
    assert!(a.is_square(), "expm requires a square matrix");
    let n = a.rows();
    let norm = a.one_norm();
    if norm == 0.0 {
        return Ok(CMatrix::identity(n));
    }

    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scaled = a.scale_real(2f64.powi(-squarings));

    let ident = CMatrix::identity(n);
    let a2 = scaled.matmul(&scaled);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);
    let b = |k: usize| C64::new(PADE13[k], 0.0);

    let mut inner_u = a6.scale(b(13));
    inner_u.add_scaled(&a4, b(11));
    inner_u.add_scaled(&a2, b(9));
    let mut u = a6.matmul(&inner_u);
    u.add_scaled(&a6, b(7));
    u.add_scaled(&a4, b(5));
    u.add_scaled(&a2, b(3));
    u.add_scaled(&ident, b(1));
    let u = scaled.matmul(&u);

    let mut inner_v = a6.scale(b(12));
    inner_v.add_scaled(&a4, b(10));
    inner_v.add_scaled(&a2, b(8));
    let mut v = a6.matmul(&inner_v);
    v.add_scaled(&a6, b(6));
    v.add_scaled(&a4, b(4));
    v.add_scaled(&a2, b(2));
    v.add_scaled(&ident, b(0));

    let numer = &v + &u;
    let denom = &v - &u;
    let mut result = denom.solve(&numer)?;
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    Ok(result)
}
