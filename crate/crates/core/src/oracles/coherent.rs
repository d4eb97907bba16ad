use crate::linalg::C64;
#[allow(unused_imports)]
use num_traits::Float;

/// Moments of a coherent state from a direct Fock-series sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentMoments {
    pub norm: f64,
    pub mean_n: f64,
    pub mean_a: C64,
    /// `⟨α|−α⟩` summed term by term.
    pub overlap_with_negative: C64,
    /// Modulus of the last summed amplitude.
    pub last_term: f64,
}

/// Sums `c_n = e^{-|α|²/2} αⁿ/√(n!)` for `n < n_terms`.
pub fn coherent_series(alpha: C64, n_terms: usize) -> CoherentMoments {
    let mut c = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    let mut norm = 0.0;
    let mut mean_n = 0.0;
    let mut mean_a = C64::new(0.0, 0.0);
    let mut overlap = C64::new(0.0, 0.0);
    let mut prev = C64::new(0.0, 0.0);
    let mut last = c.norm();
    for n in 0..n_terms {
        if n > 0 {
            prev = c;
            c = c * alpha / (n as f64).sqrt();
        }
        let p = c.norm_sqr();
        norm += p;
        mean_n += n as f64 * p;
        // ⟨a⟩ = Σ conj(c_{n-1}) c_n √n
        if n > 0 {
            mean_a += prev.conj() * c * (n as f64).sqrt();
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        overlap += c.conj() * c * sign;
        last = c.norm();
    }
    CoherentMoments {
        norm,
        mean_n,
        mean_a,
        overlap_with_negative: overlap,
        last_term: last,
    }
}

/// `⟨α|β⟩` by direct summation over `n_terms` Fock levels.
pub fn series_overlap(alpha: C64, beta: C64, n_terms: usize) -> C64 {
    let mut ca = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    let mut cb = C64::new((-beta.norm_sqr() / 2.0).exp(), 0.0);
    let mut acc = ca.conj() * cb;
    for n in 1..n_terms {
        let s = (n as f64).sqrt();
        ca = ca * alpha / s;
        cb = cb * beta / s;
        acc += ca.conj() * cb;
    }
    acc
}

/// Closed-form `⟨α|β⟩ = exp(-|α|²/2 - |β|²/2 + α*β)`.
pub fn coherent_overlap(alpha: C64, beta: C64) -> C64 {
    (C64::new(-0.5 * (alpha.norm_sqr() + beta.norm_sqr()), 0.0) + alpha.conj() * beta).exp()
}

/// `exp(-i x n·σ) = cos x I - i sin x n·σ` for a unit axis `n`, as a 2×2
/// row-major array.
pub fn pauli_rotation(x: f64, axis: [f64; 3]) -> [[C64; 2]; 2] {
    let (s, c) = x.sin_cos();
    let [nx, ny, nz] = axis;
    let ms = C64::new(0.0, -s);
    // n·σ = [[nz, nx - i ny], [nx + i ny, -nz]]
    [
        [C64::new(c, 0.0) + ms * nz, ms * C64::new(nx, -ny)],
        [ms * C64::new(nx, ny), C64::new(c, 0.0) - ms * nz],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_matches_poisson_mean_and_closed_overlap() {
        let m = coherent_series(C64::new(2.0, 0.0), 80);
        assert!((m.norm - 1.0).abs() < 1e-14);
        assert!((m.mean_n - 4.0).abs() < 1e-12);
        assert!((m.mean_a - C64::new(2.0, 0.0)).norm() < 1e-12);
        assert!((m.overlap_with_negative.re - (-8.0f64).exp()).abs() < 1e-15);
        assert!(m.last_term < 1e-16);
    }

    #[test]
    fn vacuum_series() {
        let m = coherent_series(C64::new(0.0, 0.0), 5);
        assert_eq!(m.norm, 1.0);
        assert_eq!(m.mean_n, 0.0);
    }

    #[test]
    fn closed_overlap_agrees_with_series() {
        let a = C64::new(1.3, -0.4);
        let b = C64::new(-0.2, 0.9);
        assert!((series_overlap(a, b, 80) - coherent_overlap(a, b)).norm() < 1e-14);
    }

    #[test]
    fn pauli_rotation_half_turn_about_x() {
        let r = pauli_rotation(core::f64::consts::FRAC_PI_2, [1.0, 0.0, 0.0]);
        assert!(r[0][0].norm() < 1e-16 && (r[0][1] - C64::new(0.0, -1.0)).norm() < 1e-16);
    }
}
