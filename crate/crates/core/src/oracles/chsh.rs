use alloc::vec::Vec;

use core::f64::consts::TAU;

/// Best CHSH value found on a grid, with `[θ₁, θ₁′, θ₂, θ₂′]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSearchResult {
    pub angles: [f64; 4],
    pub b: f64,
}

/// Exhaustive maximisation of `|E(θ₁,θ₂) + E(θ₁,θ₂′) + E(θ₁′,θ₂) − E(θ₁′,θ₂′)|`
/// with every angle on `resolution` points of `[0, 2π)`.
pub fn chsh_grid_search(model: impl Fn(f64, f64) -> f64, resolution: usize) -> GridSearchResult {
    assert!(resolution >= 1);
    let step = TAU / resolution as f64;
    let table: Vec<f64> = (0..resolution * resolution)
        .map(|k| {
            model(
                (k / resolution) as f64 * step,
                (k % resolution) as f64 * step,
            )
        })
        .collect();
    let e = |i: usize, j: usize| table[i * resolution + j];

    let mut best = GridSearchResult {
        angles: [0.0; 4],
        b: f64::NEG_INFINITY,
    };
    for a in 0..resolution {
        for ap in 0..resolution {
            for b in 0..resolution {
                let partial = e(a, b) + e(ap, b);
                for bp in 0..resolution {
                    let v = (partial + e(a, bp) - e(ap, bp)).abs();
                    if v > best.b {
                        best = GridSearchResult {
                            angles: [
                                a as f64 * step,
                                ap as f64 * step,
                                b as f64 * step,
                                bp as f64 * step,
                            ],
                            b: v,
                        };
                    }
                }
            }
        }
    }
    best
}
