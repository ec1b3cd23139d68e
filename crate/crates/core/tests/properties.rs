use moments_core::closed_forms::first_moment_exact;
use moments_core::poly::IntPolynomial;
use moments_core::{enumerate_valid, EdgeVector, Engine};
use num_bigint::{BigInt, Sign};
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn coeff(max_words: usize) -> impl Strategy<Value = BigInt> {
    (any::<bool>(), prop::collection::vec(any::<u32>(), 0..=max_words))
        .prop_map(|(neg, words)| BigInt::new(if neg { Sign::Minus } else { Sign::Plus }, words))
}

/// Degree at most 16, coefficients up to 2^256 in magnitude.
fn poly() -> impl Strategy<Value = IntPolynomial> {
    prop::collection::vec(coeff(8), 0..=17).prop_map(IntPolynomial::new)
}

fn nonneg_poly() -> impl Strategy<Value = IntPolynomial> {
    prop::collection::vec(prop::collection::vec(any::<u32>(), 0..=8), 1..=17).prop_map(|cs| {
        let mut cs: Vec<BigInt> = cs.into_iter().map(|w| BigInt::new(Sign::Plus, w)).collect();
        if let Some(last) = cs.last_mut() {
            *last += 1;
        }
        IntPolynomial::new(cs)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn addition_is_commutative_and_associative(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
    }

    #[test]
    fn multiplication_is_commutative_and_associative(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
    }

    #[test]
    fn multiplication_distributes(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
    }

    #[test]
    fn degree_of_product(p in poly(), q in poly()) {
        let prod = &p * &q;
        match (p.degree(), q.degree()) {
            (Some(a), Some(b)) => prop_assert_eq!(prod.degree(), Some(a + b)),
            _ => prop_assert!(prod.is_zero()),
        }
    }

    #[test]
    fn evaluation_is_multiplicative(p in poly(), q in poly(), k in 0u64..1_000_000) {
        let k = BigInt::from(k);
        prop_assert_eq!((&p * &q).eval_exact(&k), p.eval_exact(&k) * q.eval_exact(&k));
    }

    #[test]
    fn text_round_trip(p in poly()) {
        prop_assert_eq!(IntPolynomial::from_text(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn log_evaluation_matches_exact(p in nonneg_poly(), k in 1u64..10_000) {
        let exact = p.eval_exact(&BigInt::from(k));
        // ln of the exact value, from its leading 64 bits and bit length
        let bits = exact.bits();
        let shift = bits.saturating_sub(64);
        let top = (&exact >> shift).to_f64().unwrap();
        let reference = top.ln() + shift as f64 * std::f64::consts::LN_2;
        let got = p.eval_log(k as f64).unwrap();
        prop_assert!(((got - reference) / reference.abs().max(1.0)).abs() < 1e-9, "{} vs {}", got, reference);
    }

    #[test]
    fn graph_count_is_symmetric_under_outer_row_swap(n in 1u32..=30, i in any::<prop::sample::Index>()) {
        let all = enumerate_valid(n);
        let a = all[i.index(all.len())];
        prop_assert!(a.swap_outer_rows().is_valid(n));
        prop_assert_eq!(a.graph_count(n).unwrap(), a.swap_outer_rows().graph_count(n).unwrap());
        let (x, y, z) = a.derived_counts(n).unwrap();
        prop_assert_eq!(2 * x + a.a12 + a.a13, 2 * n);
        prop_assert_eq!(2 * y + a.a12 + a.a23, 2 * n);
        prop_assert_eq!(2 * z + a.a13 + a.a23, 2 * n);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn first_moment_forms_agree(k in 1u64..500, n in 1u32..30) {
        let by_product = first_moment_exact(k, n);
        let by_real = moments_core::closed_forms::first_moment(k as f64, n);
        let rel = (by_product.to_f64().unwrap() - by_real).abs() / by_real;
        prop_assert!(rel < 1e-10);
    }
}

#[test]
fn recursion_invariants_up_to_order_twelve() {
    let engine = Engine::new();
    for n in 1..=12u32 {
        for a in enumerate_valid(n) {
            let g = engine.g(n, a).unwrap();
            assert!(g.has_nonnegative_coeffs(), "g({n},{a})");
            assert_eq!(g.coeff(0), BigInt::from(0), "g({n},{a}) constant term");
            let deg = g.degree().unwrap();
            assert!(deg >= 1 && deg <= 3 * n as usize, "g({n},{a}) degree {deg}");
            assert_eq!(g.eval_exact_u64(1), a.graph_count(n).unwrap(), "g({n},{a}) at k=1");
            assert_eq!(*g, *engine.g(n, a.swap_outer_rows()).unwrap(), "g({n},{a}) symmetry");
        }
        assert_eq!(engine.g(n, EdgeVector::ZERO).unwrap().degree(), Some(2 * n as usize));
    }
}
