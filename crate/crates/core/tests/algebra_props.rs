use proptest::prelude::*;
use subshift::algebra::{Algebra, AlgebraElement};
use subshift::fixtures;
use subshift::ring::Ring;
use subshift::sets::{self, Flavor};
use subshift::shift::Shift;
use subshift::stone::{groupoid_eval, sample_arrows};
use subshift::word::Word;

/// `(coefficient, alpha, (gamma, delta) or X, beta)` with words as letter ranks.
type Term = (i64, Vec<usize>, Option<(Vec<usize>, Vec<usize>)>, Vec<usize>);

fn term() -> impl Strategy<Value = Term> {
    let w = || prop::collection::vec(0usize..5, 0..=2);
    (-3i64..=3, w(), prop::option::of((prop::collection::vec(0usize..5, 0..=1), prop::collection::vec(0usize..5, 0..=1))), w())
}

fn element() -> impl Strategy<Value = Vec<Term>> {
    prop::collection::vec(term(), 1..=3)
}

fn shifts() -> Vec<Shift> {
    fixtures::NAMES.iter().map(|n| fixtures::by_name(n).unwrap()).collect()
}

fn build(alg: &Algebra, ts: &[Term]) -> AlgebraElement {
    let sh = alg.sh;
    let ls = sh.alphabet.window(5);
    let word = |v: &[usize]| Word(v.iter().map(|&i| ls[i % ls.len()]).collect());
    let mut x = alg.zero();
    for (c, a, set, b) in ts {
        let s = match set {
            Some((g, d)) => sets::c_set(sh, &word(g), &word(d)).with_flavor(Flavor::U),
            None => sets::x_set(sh),
        };
        let m = alg.monomial(&word(a), &s, &word(b)).unwrap();
        x = alg.add(&x, &alg.scale(&m, &alg.ring.from_i64(*c))).unwrap();
    }
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn product_is_associative(x in element(), y in element(), z in element(), k in 0usize..5) {
        let sh = &shifts()[k];
        let alg = Algebra::unital(sh, Ring::Integer);
        let (x, y, z) = (build(&alg, &x), build(&alg, &y), build(&alg, &z));
        let l = alg.mul(&alg.mul(&x, &y).unwrap(), &z).unwrap();
        let r = alg.mul(&x, &alg.mul(&y, &z).unwrap()).unwrap();
        prop_assert!(alg.equals(&l, &r).unwrap());
    }

    #[test]
    fn star_reverses_products(x in element(), y in element(), k in 0usize..5) {
        let sh = &shifts()[k];
        let alg = Algebra::unital(sh, Ring::Integer);
        let (x, y) = (build(&alg, &x), build(&alg, &y));
        let l = alg.star(&alg.mul(&x, &y).unwrap());
        let r = alg.mul(&alg.star(&y), &alg.star(&x)).unwrap();
        prop_assert!(alg.equals(&l, &r).unwrap());
        prop_assert!(alg.equals(&alg.star(&alg.star(&x)), &x).unwrap());
    }

    #[test]
    fn products_distribute(x in element(), y in element(), z in element(), k in 0usize..5) {
        let sh = &shifts()[k];
        let alg = Algebra::unital(sh, Ring::Integer);
        let (x, y, z) = (build(&alg, &x), build(&alg, &y), build(&alg, &z));
        let l = alg.mul(&x, &alg.add(&y, &z).unwrap()).unwrap();
        let r = alg.add(&alg.mul(&x, &y).unwrap(), &alg.mul(&x, &z).unwrap()).unwrap();
        prop_assert!(alg.equals(&l, &r).unwrap());
    }

    #[test]
    fn degrees_add_in_products(x in term(), y in term(), k in 0usize..5) {
        let sh = &shifts()[k];
        let alg = Algebra::unital(sh, Ring::Integer);
        let (x, y) = (build(&alg, &[x]), build(&alg, &[y]));
        let p = alg.mul(&x, &y).unwrap();
        if !p.is_zero() {
            prop_assert_eq!(p.degrees(), vec![x.degrees()[0] + y.degrees()[0]]);
        }
    }

    #[test]
    fn equality_matches_pointwise_values(x in element(), y in element(), k in 0usize..3) {
        let sh = &shifts()[k];
        let alg = Algebra::unital(sh, Ring::Integer);
        let (x, y) = (build(&alg, &x), build(&alg, &y));
        let pointwise = sample_arrows(sh, &[&x, &y])
            .iter()
            .all(|a| groupoid_eval(sh, &x, a).unwrap().value == groupoid_eval(sh, &y, a).unwrap().value);
        prop_assert_eq!(alg.equals(&x, &y).unwrap(), pointwise);
    }

    #[test]
    fn prime_field_reduces(x in element(), k in 0usize..3) {
        let sh = &shifts()[k];
        let alg = Algebra::unital(sh, Ring::Prime(3));
        let x = build(&alg, &x);
        let three = alg.scale(&x, &alg.ring.from_i64(3));
        prop_assert!(three.is_zero());
    }
}
