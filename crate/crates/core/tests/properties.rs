use num_complex::Complex64;
use proptest::prelude::*;
use pseudospec::orthogonality::{laguerre_overlap_exact, laguerre_overlap_quadrature, overlap_integrable};
use pseudospec::potential::PotentialSpec;
use pseudospec::shift::check_catalog_shift;
use pseudospec::spectra::exact_spectrum;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn overlap_is_symmetric_with_positive_diagonal(m in 0usize..=5, n in 0usize..=5, c in 0.6f64..9.0) {
        prop_assume!(overlap_integrable(m, n, c));
        let a = laguerre_overlap_exact(m, n, c).unwrap().value;
        let b = laguerre_overlap_exact(n, m, c).unwrap().value;
        let scale = a.norm().max(1.0);
        prop_assert!((a - b).norm() <= 1e-12 * scale, "{a} vs {b}");
        if m == n {
            prop_assert!(a.re > 0.0 && a.im == 0.0, "diagonal {a}");
        }
    }

    #[test]
    fn quadrature_diagonal_is_positive(m in 0usize..=4, c in 0.6f64..8.0) {
        prop_assume!(overlap_integrable(m, m, c));
        let q = laguerre_overlap_quadrature(m, m, c).unwrap();
        let e = laguerre_overlap_exact(m, m, c).unwrap();
        prop_assert!(q.value.re > 0.0);
        prop_assert!((q.value - e.value).norm() <= 1e-10 * e.value.norm());
    }

    #[test]
    fn oscillator_levels_ignore_the_shift(beta in -3.0f64..3.0, gamma in -2.0f64..2.0) {
        let spec = PotentialSpec::harmonic_shifted(beta, gamma).unwrap();
        for (n, s) in exact_spectrum(&spec, 6).unwrap().iter().enumerate() {
            prop_assert_eq!(s.energy, Complex64::new(n as f64 + 0.5, 0.0));
        }
    }

    #[test]
    fn morse_ladder(a in 0.2f64..5.0, b in -5.0f64..5.0, c in 0.1f64..7.0) {
        let spec = PotentialSpec::morse_complex(a, b, c).unwrap();
        let states = exact_spectrum(&spec, 100).unwrap();
        // Bound states are 0 ≤ n < C.
        prop_assert_eq!(states.len() as f64, c.ceil());
        for (n, s) in states.iter().enumerate() {
            let e = -(n as f64 - c).powi(2);
            prop_assert!((s.energy.re - e).abs() <= 1e-12 * e.abs().max(1.0), "{} vs {e}", s.energy);
            prop_assert!(s.energy.im.abs() <= 1e-12 * e.abs().max(1.0));
        }
    }

    #[test]
    fn eckart_catalog_shift_holds(alpha in 0.5f64..10.0, beta in -2.0f64..2.0, gamma in -1.5f64..1.5) {
        let spec = PotentialSpec::eckart_shifted(alpha, beta, gamma).unwrap();
        let v = check_catalog_shift(&spec, 1e-10).unwrap();
        prop_assert!(v.passed, "{v:?}");
    }
}
