/// Wilson score interval for `k` successes in `n` trials at `z` standard
/// deviations. Returns (low, high); (0, 1) when n = 0.
pub fn wilson_interval(k: u64, n: u64, z: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let n_f = n as f64;
    let p = k as f64 / n_f;
    let z2 = z * z;
    let denom = 1.0 + z2 / n_f;
    let centre = (p + z2 / (2.0 * n_f)) / denom;
    let half = z * (p * (1.0 - p) / n_f + z2 / (4.0 * n_f * n_f)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

/// Half the width of the Wilson interval.
pub fn wilson_half_width(k: u64, n: u64, z: f64) -> f64 {
    let (lo, hi) = wilson_interval(k, n, z);
    (hi - lo) / 2.0
}

/// Standard deviation of a rate estimated from `n` Bernoulli(p) draws.
pub fn binomial_sigma(p: f64, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Binary entropy in bits; H(0) = H(1) = 0.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_reference_values() {
        // 10 of 100 at z = 1.96: (0.0552, 0.1744), standard table value.
        let (lo, hi) = wilson_interval(10, 100, 1.96);
        assert!((lo - 0.05522).abs() < 1e-4, "{lo}");
        assert!((hi - 0.17437).abs() < 1e-4, "{hi}");
        let (lo, hi) = wilson_interval(0, 1000, 1.0);
        assert_eq!(lo, 0.0);
        assert!((hi - 1.0 / 1001.0).abs() < 1e-9);
        assert_eq!(wilson_interval(0, 0, 1.0), (0.0, 1.0));
    }

    #[test]
    fn entropy_edges() {
        assert_eq!(binary_entropy(0.0), 0.0);
        assert!((binary_entropy(0.5) - 1.0).abs() < 1e-12);
        assert!((binary_entropy(0.11) - binary_entropy(0.89)).abs() < 1e-12);
    }
}
