use kloos3::curve::CurveParams;
use kloos3::oracle::{val3, Oracle};
use kloos3::tower::{rel_trace, Tower};
use kloos3::valuation::kval;
use kloos3::{DiscreteLog, FieldSpec};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field(m: usize) -> FieldSpec {
    FieldSpec::builtin(m).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn frobenius_is_a_field_automorphism(m in 2usize..=12, i in any::<u64>(), j in any::<u64>()) {
        let f = field(m);
        let (x, y) = (f.element(i % f.order()), f.element(j % f.order()));
        prop_assert_eq!(f.frobenius(&f.mul(&x, &y)), f.mul(&f.frobenius(&x), &f.frobenius(&y)));
        prop_assert_eq!(f.frobenius(&f.add(&x, &y)), f.add(&f.frobenius(&x), &f.frobenius(&y)));
        prop_assert_eq!(f.cube_root(&f.frobenius(&x)), x);
        prop_assert_eq!(f.frobenius(&x), f.pow(&x, 3));
    }

    #[test]
    fn trace_matches_conjugate_sum(m in 2usize..=12, i in any::<u64>()) {
        let f = field(m);
        let x = f.element(i % f.order());
        prop_assert_eq!(f.trace_by_conjugates(&x), f.from_prime(f.trace(&x)));
    }

    #[test]
    fn square_roots(m in 2usize..=12, i in any::<u64>()) {
        let f = field(m);
        let x = f.element(i % f.order());
        let s = f.square(&x);
        let r = f.sqrt(&s).unwrap();
        prop_assert_eq!(f.square(&r), s);
        prop_assert!(r.index() <= f.neg(&r).index());
        prop_assert!(f.is_square(&s));
    }

    #[test]
    fn artin_schreier_solutions(m in 2usize..=12, i in any::<u64>()) {
        let f = field(m);
        let a = f.element(i % f.order());
        match f.solve_artin_schreier(&a) {
            Ok(ws) => {
                prop_assert_eq!(f.trace(&a), 0);
                prop_assert_eq!(ws.len(), 3);
                for w in ws {
                    prop_assert_eq!(f.sub(&f.frobenius(&w), &w), a);
                }
            }
            Err(_) => prop_assert_ne!(f.trace(&a), 0),
        }
    }

    #[test]
    fn element_formats_round_trip(m in 2usize..=9, i in any::<u64>()) {
        let f = field(m);
        let x = f.element(i % f.order());
        prop_assert_eq!(f.parse_element(&x.to_string()).unwrap(), x);
        let log = DiscreteLog::new(&f).unwrap();
        prop_assert_eq!(f.parse_element(&log.format(&x)).unwrap(), x);
    }

    #[test]
    fn group_law_associates(m in 2usize..=9, i in 1u64.., seed in any::<u64>()) {
        let f = field(m);
        let a = f.element(1 + i % (f.order() - 1));
        let c = CurveParams::new(&f, a).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = c.sample_point(&mut rng, 256).unwrap();
        let q = c.sample_point(&mut rng, 256).unwrap();
        let s = c.sample_point(&mut rng, 256).unwrap();
        let l = c.add(&c.add(&p, &q).unwrap(), &s).unwrap();
        let r = c.add(&p, &c.add(&q, &s).unwrap()).unwrap();
        prop_assert_eq!(l, r);
        prop_assert!(c.add(&p, &c.negate(&p)).unwrap().is_infinity());
    }

    #[test]
    fn walk_valuation_ignores_the_seed(m in 2usize..=8, i in 1u64.., s1 in any::<u64>(), s2 in any::<u64>()) {
        let f = field(m);
        let a = f.element(1 + i % (f.order() - 1));
        let c = CurveParams::new(&f, a).unwrap();
        let k1 = kval(&c, &mut ChaCha8Rng::seed_from_u64(s1)).unwrap().k;
        let k2 = kval(&c, &mut ChaCha8Rng::seed_from_u64(s2)).unwrap().k;
        prop_assert_eq!(k1, k2);
        prop_assert!(k1 >= 1 && k1 <= m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn walk_matches_oracle_on_larger_fields(m in 8usize..=10, i in 1u64.., seed in any::<u64>()) {
        let f = field(m);
        let a = f.element(1 + i % (f.order() - 1));
        let k = Oracle::new(&f).unwrap().kloosterman_sum(&a).unwrap().value;
        let c = CurveParams::new(&f, a).unwrap();
        let w = kval(&c, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(w.k, val3(k, m));
    }

    #[test]
    fn embedding_and_relative_trace(
        (m, n) in prop_oneof![Just((2usize, 3usize)), Just((3, 2)), Just((2, 4)), Just((4, 2))],
        i in any::<u64>(),
        j in any::<u64>(),
        y in any::<u64>(),
    ) {
        let base = field(m);
        let tower = Tower::new(&base, n).unwrap();
        let ext = tower.ext();
        let (x1, x2) = (base.element(i % base.order()), base.element(j % base.order()));
        let (e1, e2) = (tower.embed(&x1), tower.embed(&x2));
        prop_assert_eq!(tower.embed(&base.mul(&x1, &x2)), ext.mul(&e1, &e2));
        prop_assert_eq!(tower.embed(&base.add(&x1, &x2)), ext.add(&e1, &e2));
        prop_assert_eq!(x1 == x2, e1 == e2);
        let y = ext.element(y % ext.order());
        let t = tower.embedding().preimage(&rel_trace(ext, &base, &y)).unwrap();
        prop_assert_eq!(base.trace(&t), ext.trace(&y));
    }
}
