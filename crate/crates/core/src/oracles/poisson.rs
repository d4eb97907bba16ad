#[allow(unused_imports)]
use num_traits::Float;

/// `P(k; μ)`.
pub fn poisson_pmf(k: u32, mu: f64) -> f64 {
    let mut log_fact = 0.0;
    for j in 2..=k {
        log_fact += (j as f64).ln();
    }
    (k as f64 * mu.ln() - mu - log_fact).exp()
}

/// Probability of exactly one event.
pub fn poisson_exactly_one(mu: f64) -> f64 {
    mu * (-mu).exp()
}

/// Probability of an odd number of events, `(1 - e^{-2μ})/2`: the chance
/// that a parity-flipping jump process leaves the parity flipped.
pub fn poisson_odd_probability(mu: f64) -> f64 {
    0.5 * (1.0 - (-2.0 * mu).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_probability_is_sum_of_odd_terms() {
        let mu = 0.37;
        let direct: f64 = (0..40)
            .filter(|k| k % 2 == 1)
            .map(|k| poisson_pmf(k, mu))
            .sum();
        assert!((direct - poisson_odd_probability(mu)).abs() < 1e-15);
        assert!((poisson_pmf(1, mu) - poisson_exactly_one(mu)).abs() < 1e-16);
    }
}
