use num_traits::Zero;
use proptest::prelude::*;
use prodloop_algebra::{
    frac, laurent_at, poly_gcd, rat, residue_at, ExpansionPoint, Monomial, MultiPoly, RationalFunc,
};

fn arb_poly(nvars: usize, max_terms: usize, max_exp: u32) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_exp, nvars), -9i64..=9, 1i64..=4),
        0..=max_terms,
    )
    .prop_map(move |ts| {
        MultiPoly::from_terms(
            nvars,
            ts.into_iter()
                .map(|(e, n, d)| (Monomial::from_exponents(&e).unwrap(), frac(n, d))),
        )
    })
}

fn arb_nonzero(nvars: usize, max_terms: usize, max_exp: u32) -> impl Strategy<Value = MultiPoly> {
    arb_poly(nvars, max_terms, max_exp).prop_filter("nonzero", |p| !p.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in arb_poly(3, 5, 3), b in arb_poly(3, 5, 3), c in arb_poly(3, 5, 3)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn exact_division_recovers_factor(a in arb_poly(2, 5, 3), b in arb_nonzero(2, 4, 2)) {
        let p = &a * &b;
        let q = p.div_exact(&b).expect("product is divisible");
        prop_assert!((&p - &(&q * &b)).is_zero());
        prop_assert_eq!(q, a);
    }

    #[test]
    fn gcd_divides_both(a in arb_nonzero(2, 4, 2), b in arb_nonzero(2, 4, 2), c in arb_nonzero(2, 3, 2)) {
        let x = &a * &c;
        let y = &b * &c;
        let g = poly_gcd(&x, &y);
        prop_assert!(x.div_exact(&g).is_some());
        prop_assert!(y.div_exact(&g).is_some());
        // the common factor survives up to a scalar
        prop_assert!(g.div_exact(&c.primitive_part()).is_some());
    }

    #[test]
    fn reduce_preserves_value(n in arb_poly(2, 4, 3), d in arb_nonzero(2, 4, 3), c in arb_nonzero(2, 3, 2)) {
        let num = &n * &c;
        let den = &d * &c;
        let f = RationalFunc::new(num.clone(), den.clone()).unwrap();
        prop_assert!((&(f.num() * &den) - &(&num * f.den())).is_zero());
        prop_assert!(f.den().leading_coeff() > rat(0));
    }

    #[test]
    fn json_round_trip(n in arb_poly(3, 6, 4), d in arb_nonzero(3, 4, 3)) {
        let f = RationalFunc::new(n, d).unwrap();
        let text = serde_json::to_string(&f.to_json()).unwrap();
        let back = RationalFunc::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back.num(), f.num());
        prop_assert_eq!(back.den(), f.den());
    }

    #[test]
    fn laurent_of_derivative(n in arb_poly(1, 4, 4), k in 1u32..4, a in -3i64..3) {
        // f = n / (z - a)^k
        let d = (&MultiPoly::var(1, 0) - &MultiPoly::from_int(1, a)).pow(k);
        let f = RationalFunc::new(n, d).unwrap();
        let pt = ExpansionPoint::Finite(rat(a));
        let s = laurent_at(&f, 0, pt.clone(), 4).unwrap();
        let ds = laurent_at(&f.diff(0).unwrap(), 0, pt, 3).unwrap();
        let expect = s.derivative();
        for order in -6..3 {
            prop_assert_eq!(ds.coeff(order), expect.coeff(order));
        }
    }

    #[test]
    fn residue_matches_laurent(n in arb_poly(1, 4, 5), k in 1u32..5, a in -3i64..3, b in 4i64..7) {
        let d = &(&MultiPoly::var(1, 0) - &MultiPoly::from_int(1, a)).pow(k)
            * &(&MultiPoly::var(1, 0) - &MultiPoly::from_int(1, b));
        let f = RationalFunc::new(n, d).unwrap();
        let s = laurent_at(&f, 0, ExpansionPoint::Finite(rat(a)), 1).unwrap();
        let r = residue_at(&f, 0, &rat(a)).unwrap();
        prop_assert_eq!(r.as_constant().unwrap(), s.residue().unwrap_or_else(Zero::zero));
    }
}
