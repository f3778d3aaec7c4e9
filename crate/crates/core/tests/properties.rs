use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use staircase::number::{parse_rational, rad_mul, RadicalConstant};
use staircase::series::{Coefficient, DeltaJet, LaurentQPoly, XSeries};

fn laurent() -> impl Strategy<Value = LaurentQPoly> {
    prop::collection::vec((-4i64..6, -5i64..6), 0..5)
        .prop_map(|ts| LaurentQPoly::from_terms(ts.into_iter().map(|(d, c)| (d, BigInt::from(c)))))
}

fn polynomial() -> impl Strategy<Value = LaurentQPoly> {
    prop::collection::vec((0i64..6, -5i64..6), 0..5)
        .prop_map(|ts| LaurentQPoly::from_terms(ts.into_iter().map(|(d, c)| (d, BigInt::from(c)))))
}

fn jet() -> impl Strategy<Value = DeltaJet> {
    prop::collection::vec(-9i64..10, 4).prop_map(|v| DeltaJet::from_ints(&v))
}

fn radical() -> impl Strategy<Value = RadicalConstant> {
    (-20i64..21, 1i64..12, -3i64..4, -3i64..4)
        .prop_map(|(n, d, a, b)| RadicalConstant::new(BigRational::new(n.into(), d.into()), a, b))
}

fn series() -> impl Strategy<Value = XSeries<LaurentQPoly>> {
    prop::collection::vec(polynomial(), 6).prop_map(|cs| XSeries::new((), cs, 5))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn rationals_normalize_once(n in -1000i64..1000, d in 1i64..1000) {
        let x = BigRational::new(n.into(), d.into());
        let again = parse_rational(&x.to_string()).unwrap();
        prop_assert_eq!(&again, &x);
        prop_assert_eq!(parse_rational(&again.to_string()).unwrap(), x);
    }

    #[test]
    fn radical_products(x in radical(), y in radical(), z in radical()) {
        prop_assert_eq!(rad_mul(&x, &y), rad_mul(&y, &x));
        prop_assert_eq!(rad_mul(&rad_mul(&x, &y), &z), rad_mul(&x, &rad_mul(&y, &z)));
    }

    #[test]
    fn laurent_ring(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn jet_ring(a in jet(), b in jet(), c in jet()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn collapse_is_a_homomorphism(a in polynomial(), b in polynomial()) {
        prop_assert_eq!(a.mul(&b).to_jet(3), a.to_jet(3).mul(&b.to_jet(3)));
        prop_assert_eq!(a.add(&b).to_jet(3), a.to_jet(3).add(&b.to_jet(3)));
        prop_assert_eq!(a.q_squared().to_jet(3), a.to_jet(3).q_squared());
        prop_assert_eq!(a.times_q_power(3).to_jet(3), a.to_jet(3).times_q_power(3));
    }

    #[test]
    fn series_ring(f in series(), g in series(), h in series()) {
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        prop_assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
        prop_assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
    }

    #[test]
    fn series_reciprocal(tail in series(), unit in prop_oneof![Just(1i64), Just(-1i64)]) {
        let mut cs = tail.coeffs().to_vec();
        cs[0] = LaurentQPoly::monomial(unit, 0);
        let f = XSeries::new((), cs, 5);
        let one = XSeries::<LaurentQPoly>::one((), 5);
        prop_assert_eq!(f.mul(&f.recip().unwrap()), one);
    }

    #[test]
    fn double_xq_substitution(a in 0usize..5, b in -3i64..4) {
        // x^a q^b -> (xq)^a q^b twice gives x^a q^(b + 2a), the substitution x -> x q^2
        let f = XSeries::monomial((), a, LaurentQPoly::monomial(1, b), 6);
        let twice = f.compose_xq(1, 1).unwrap().compose_xq(1, 1).unwrap();
        let direct = XSeries::monomial((), a, LaurentQPoly::monomial(1, b + 2 * a as i64), 6);
        prop_assert_eq!(twice, direct);
    }
}
