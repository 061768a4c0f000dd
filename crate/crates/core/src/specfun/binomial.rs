/// Generalized binomial coefficient x(x−1)⋯(x−n+1)/n! for real x.
///
/// Accumulates the product factor by factor, so there is no factorial
/// overflow for n up to ~10⁴ with the moderate x this crate uses. The empty
/// product (n = 0) is 1.
pub fn gen_binomial(x: f64, n: u32) -> f64 {
    let mut acc = 1.0;
    for j in 0..n {
        acc *= (x - j as f64) / (j as f64 + 1.0);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_integer_cases() {
        // (−1/2)(−3/2)/2 = 3/8
        assert_eq!(gen_binomial(-0.5, 2), 0.375);
        // empty product
        assert_eq!(gen_binomial(5.0, 0), 1.0);
        // binom(1/2, 1) = 1/2
        assert_eq!(gen_binomial(0.5, 1), 0.5);
    }

    #[test]
    fn integer_cases_are_exact() {
        assert_eq!(gen_binomial(6.0, 3), 20.0);
        assert_eq!(gen_binomial(10.0, 10), 1.0);
        // terminates with an exact zero above the diagonal
        assert_eq!(gen_binomial(4.0, 6), 0.0);
    }

    // Independent oracle: binom(x, n) = Γ(x+1)/(Γ(n+1)Γ(x−n+1)) via a
    // Lanczos log-gamma, valid where no pole is hit.
    fn ln_gamma(x: f64) -> f64 {
        // Lanczos g=7, n=9 (Godfrey coefficients)
        const C: [f64; 9] = [
            0.99999999999980993,
            676.5203681218851,
            -1259.1392167224028,
            771.32342877765313,
            -176.61502916214059,
            12.507343278686905,
            -0.13857109526572012,
            9.9843695780195716e-6,
            1.5056327351493116e-7,
        ];
        assert!(x > 0.0);
        let z = x - 1.0;
        let mut a = C[0];
        for (i, &c) in C.iter().enumerate().skip(1) {
            a += c / (z + i as f64);
        }
        let t = z + 7.5;
        0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + a.ln()
    }

    #[test]
    fn matches_log_gamma_oracle_for_k_minus_half() {
        // binom(k − 1/2, k) for k = 1..20
        for k in 1..=20u32 {
            let x = k as f64 - 0.5;
            let direct = gen_binomial(x, k);
            let via_gamma =
                (ln_gamma(x + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma(x - k as f64 + 1.0)).exp();
            assert!(
                (direct - via_gamma).abs() <= 1e-12 * via_gamma.abs(),
                "k={k}: {direct} vs {via_gamma}"
            );
        }
    }

    #[test]
    fn falling_factorial_relation() {
        // binom(x, n)·n! equals the falling factorial product
        let x = 3.7;
        let n = 5u32;
        let mut falling = 1.0;
        for j in 0..n {
            falling *= x - j as f64;
        }
        let fact = (1..=n).map(f64::from).product::<f64>();
        assert!((gen_binomial(x, n) * fact - falling).abs() < 1e-12 * falling.abs());
    }

    proptest::proptest! {
        #[test]
        fn agrees_with_gamma_oracle_where_defined(
            x in 0.25f64..40.0,
            n in 0u32..30,
        ) {
            // keep away from the Γ(x−n+1) poles at non-positive integers
            let shifted = x - n as f64 + 1.0;
            proptest::prop_assume!(shifted > 0.05);
            let direct = gen_binomial(x, n);
            let via = (ln_gamma(x + 1.0) - ln_gamma(n as f64 + 1.0) - ln_gamma(shifted)).exp();
            proptest::prop_assert!((direct - via).abs() <= 1e-11 * via.abs().max(1e-300));
        }
    }
}
