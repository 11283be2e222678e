//! Property tests against independent oracles: complex floating-point
//! evaluation for field arithmetic, integer matrix products for SL2 words.

use modkernel::cyclotomic::rat;
use modkernel::sl2::{self, SL2NMatrix, SL2ZMatrix};
use modkernel::{CycNumber, ModularData};
use num_integer::Integer;
use proptest::prelude::*;

const FLOAT_TOL: f64 = 1e-9;
const ORDERS: [u64; 8] = [1, 3, 4, 5, 8, 12, 15, 24];

fn cyc() -> impl Strategy<Value = CycNumber> {
    (prop::sample::select(ORDERS.to_vec()), prop::collection::vec((0i64..24, -6i64..=6, 1i64..=4), 0..5)).prop_map(
        |(order, terms)| {
            CycNumber::from_terms(order, terms.into_iter().map(|(k, n, d)| (k.rem_euclid(order as i64), rat(n, d))))
        },
    )
}

fn close(a: (f64, f64), b: (f64, f64)) -> bool {
    (a.0 - b.0).abs() < FLOAT_TOL && (a.1 - b.1).abs() < FLOAT_TOL
}

fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn sl2z() -> impl Strategy<Value = SL2ZMatrix> {
    (-40i64..40, -40i64..40).prop_filter_map("coprime row", |(c, d)| {
        let e = c.extended_gcd(&d);
        (e.gcd == 1).then(|| SL2ZMatrix::new(e.y, -e.x, c, d).expect("unimodular by construction"))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ring_operations_match_complex_values(x in cyc(), y in cyc()) {
        let (cx, cy) = (x.to_complex(), y.to_complex());
        let s = (&x + &y).to_complex();
        prop_assert!(close(s, (cx.0 + cy.0, cx.1 + cy.1)));
        prop_assert!(close((&x * &y).to_complex(), cmul(cx, cy)));
        prop_assert!(close(x.conj().to_complex(), (cx.0, -cx.1)));
    }

    #[test]
    fn inverse_and_norm(x in cyc()) {
        prop_assume!(!x.is_zero());
        let inv = x.inv().expect("nonzero is invertible");
        prop_assert!((&x * &inv).is_one());
        let n = x.norm();
        prop_assert!(n != rat(0, 1));
    }

    #[test]
    fn frobenius_is_a_ring_homomorphism(x in cyc(), y in cyc(), l in prop::sample::select(vec![1i64, 7, 11, 13, 17, 19, 23, -1])) {
        let m = 120;
        let (x, y) = (x.embed(m).unwrap(), y.embed(m).unwrap());
        let s = |z: &CycNumber| z.frobenius(l).unwrap();
        prop_assert_eq!(s(&(&x + &y)), &s(&x) + &s(&y));
        prop_assert_eq!(s(&(&x * &y)), &s(&x) * &s(&y));
        prop_assert_eq!(x.frobenius(-1).unwrap(), x.conj());
        prop_assert_eq!(s(&s(&x)), x.frobenius(l * l).unwrap());
    }

    #[test]
    fn embed_restrict_round_trip(x in cyc(), k in 1u64..4) {
        let big = x.order() * k * 2;
        let up = x.embed(big).unwrap();
        prop_assert_eq!(up.restrict(x.order()).unwrap(), x.clone());
        prop_assert!(close(up.to_complex(), x.to_complex()));
    }

    #[test]
    fn decompose_evaluates_back(m in sl2z()) {
        prop_assert_eq!(sl2::decompose(&m).evaluate(), m);
    }

    #[test]
    fn lift_reduces_back(a in 0i64..48, c in 0i64..48, d in 0i64..48) {
        let n = 48u64;
        prop_assume!(c.gcd(&d).gcd(&(n as i64)) == 1);
        let m = match (0..n as i64).find(|&b| (a * d - b * c - 1).rem_euclid(n as i64) == 0) {
            Some(b) => SL2NMatrix::new(n, a, b, c, d).unwrap(),
            None => return Ok(()),
        };
        prop_assert_eq!(sl2::lift(&m).unwrap().reduce(n), m);
    }

    #[test]
    fn rep_is_a_homomorphism(a in sl2z(), b in sl2z()) {
        let md = ModularData::minimal_model(3, 4).unwrap();
        let lhs = sl2::rep(&md, &a.mul(&b));
        prop_assert_eq!(lhs, &sl2::rep(&md, &a) * &sl2::rep(&md, &b));
    }
}
