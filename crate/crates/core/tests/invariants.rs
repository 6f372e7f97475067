use papb::braid_engine::{free_reduce, underlying_permutation, BraidWord, Permutation};
use papb::chord_diagrams::{dk_normal_form, grouplike_check, random_element, random_grouplike, DKElement};
use papb::colored_operads::{objects, random_morphism, shuffle_patterns};
use papb::exact_algebra::{parse_rational, format_rational, rat, NCSeries};
use papb::mixed_model::{random_prime, rho, terrestrial_violations, Triple};
use papb::operad_axioms::PartialOperad;
use papb::parenthesized_operads::random_papb;
use papb::trees_magma::{graft, omega_map, random_bitree, random_closed_tree, Point, Shifts, Slot, Tree};
use papb::voronov_product::{build_cd_pap_instance, random_cd_pap};
use proptest::prelude::*;
use rand::{seq::SliceRandom, Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn perm(n: usize, seed: u64) -> Permutation {
    let mut v: Vec<usize> = (1..=n).collect();
    v.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    Permutation::new(v).unwrap()
}

fn series(seed: u64, alphabet: usize, degree: usize) -> NCSeries {
    let mut g = ChaCha8Rng::seed_from_u64(seed);
    let mut s = NCSeries::zero(alphabet, degree);
    for _ in 0..g.gen_range(0..6) {
        let len = g.gen_range(0..=degree + 1);
        let w: Vec<usize> = (0..len).map(|_| g.gen_range(0..alphabet)).collect();
        s.add_term(w, rat(g.gen_range(-3..=3), g.gen_range(1..=4)));
    }
    s
}

fn stored_ok(s: &NCSeries) -> bool {
    s.terms().iter().all(|(w, c)| *c != rat(0, 1) && w.len() <= s.degree() && w.iter().all(|&l| l < s.alphabet()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rationals_are_reduced(n in -50i64..50, d in 1i64..50, k in 1i64..20) {
        let r = rat(n, d);
        prop_assert!(*r.denom() > 0.into());
        prop_assert_eq!(rat(n * k, d * k), r.clone());
        prop_assert_eq!(rat(-n, -d), r.clone());
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn series_storage_invariants(a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (x, y, z) = (series(a, 3, 3), series(b, 3, 3), series(c, 3, 3));
        for s in [&x, &y, &x.add(&y).unwrap(), &x.sub(&x).unwrap(), &x.mul(&y).unwrap()] {
            prop_assert!(stored_ok(s));
        }
        prop_assert!(x.sub(&x).unwrap().is_zero());
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
    }

    #[test]
    fn permutations_form_a_group(n in 1usize..7, a in any::<u64>(), b in any::<u64>()) {
        let (p, q) = (perm(n, a), perm(n, b));
        let pq = p.then(&q);
        let mut seen = pq.images().to_vec();
        seen.sort();
        prop_assert_eq!(seen, (1..=n).collect::<Vec<_>>());
        prop_assert!(p.then(&p.inverse()).is_identity());
        prop_assert_eq!(pq.inverse(), q.inverse().then(&p.inverse()));
    }

    #[test]
    fn free_reduction_is_reduced_and_idempotent(w in proptest::collection::vec(prop_oneof![-3i64..=-1, 1i64..=3], 0..20)) {
        let r = free_reduce(&w);
        prop_assert!(r.windows(2).all(|p| p[0] != -p[1]));
        prop_assert_eq!(free_reduce(&r), r.clone());
        let mut doubled = w.clone();
        doubled.extend(w.iter().rev().map(|l| -l));
        prop_assert!(free_reduce(&doubled).is_empty());
    }

    #[test]
    fn braid_permutation_is_a_homomorphism(a in proptest::collection::vec(prop_oneof![-3i64..=-1, 1i64..=3], 0..10),
                                           b in proptest::collection::vec(prop_oneof![-3i64..=-1, 1i64..=3], 0..10)) {
        let (a, b) = (BraidWord::new(4, a).unwrap(), BraidWord::new(4, b).unwrap());
        prop_assert_eq!(
            underlying_permutation(&a.concat(&b).unwrap()),
            underlying_permutation(&a).then(&underlying_permutation(&b))
        );
    }

    #[test]
    fn trees_have_bijective_labels_and_graft_arity(seed in any::<u64>(), n in 0usize..3, m in 1usize..4, k in 0usize..3, l in 1usize..3) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let points = |n: usize, m: usize, g: &mut ChaCha8Rng| {
            let mut pts: Vec<Point> = (1..=m).map(Point::A).chain((1..=n).map(Point::T)).collect();
            pts.shuffle(g);
            pts
        };
        let pts = points(n, m, &mut g);
        let outer: Tree = if n == 0 { random_closed_tree(&mut g, &(1..=m).collect::<Vec<_>>()) } else { random_bitree(&mut g, &pts) };
        outer.validate().unwrap();
        let mut c = outer.closed_labels();
        c.sort();
        prop_assert_eq!(c, (1..=m).collect::<Vec<_>>());
        let mut o = outer.open_labels();
        o.sort();
        prop_assert_eq!(o, (1..=n).collect::<Vec<_>>());

        let inner = random_closed_tree(&mut g, &(1..=l).collect::<Vec<_>>());
        let slot = g.gen_range(1..=m);
        let grafted = graft(&outer, Slot::Closed(slot), &inner).unwrap();
        grafted.validate().unwrap();
        let shifts = Shifts { slot: Slot::Closed(slot), outer: (n, m), inner: (0, l) };
        prop_assert_eq!(grafted.arity(), shifts.result_arity());

        if n > 0 {
            let pts = points(k.max(1), l, &mut g);
            let inner = random_bitree(&mut g, &pts);
            let j = g.gen_range(1..=n);
            let grafted = graft(&outer, Slot::Open(j), &inner).unwrap();
            grafted.validate().unwrap();
            let shifts = Shifts { slot: Slot::Open(j), outer: (n, m), inner: (k.max(1), l) };
            prop_assert_eq!(grafted.arity(), shifts.result_arity());
        }
    }

    #[test]
    fn shuffle_objects_split_into_pattern_and_labels(n in 0usize..4, m in 0usize..4) {
        for o in objects(n, m) {
            let p = o.pattern();
            prop_assert_eq!(p.len(), n + m);
            prop_assert!(shuffle_patterns(n, m).contains(&p));
            let mut t = o.terrestrial_labels();
            t.sort();
            prop_assert_eq!(t, (1..=n).collect::<Vec<_>>());
        }
    }

    #[test]
    fn copb_morphisms_transport_source_to_target(seed in any::<u64>(), n in 0usize..3, m in 1usize..4) {
        let c = random_morphism(&mut ChaCha8Rng::seed_from_u64(seed), n, m, 6);
        prop_assert_eq!(c.src.terrestrial_labels(), c.tgt.terrestrial_labels());
        let pi = underlying_permutation(&c.braid);
        let src = c.src.aerial_labels();
        let moved: Vec<_> = (1..=m).map(|k| src[pi.inverse().apply(k) - 1]).collect();
        prop_assert_eq!(moved, c.tgt.aerial_labels());
    }

    #[test]
    fn papb_morphisms_lie_over_omega(seed in any::<u64>(), n in 0usize..3, m in 1usize..4, closed in any::<bool>()) {
        let n = if closed { 0 } else { n };
        let y = random_papb(&mut ChaCha8Rng::seed_from_u64(seed), n, m, 6, closed);
        prop_assert_eq!(omega_map(&y.src), y.underlying.src.clone());
        prop_assert_eq!(omega_map(&y.tgt), y.underlying.tgt.clone());
        prop_assert!(y.then(&y.inverse()).unwrap().equals(&papb::parenthesized_operads::PaPBMorphism::identity(&y.src).unwrap()));
    }

    #[test]
    fn normal_forms_are_canonical(seed in any::<u64>(), r in 2usize..5) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let a = random_element(&mut g, r, 3, 5, 0);
        let b = random_element(&mut g, r, 3, 5, 1);
        let nf = |s: &NCSeries| dk_normal_form(s, r);
        prop_assert_eq!(nf(a.series()), a.series().clone());
        prop_assert_eq!(nf(&nf(b.series())), nf(b.series()));
        let raw = a.series().add(b.series()).unwrap();
        prop_assert_eq!(nf(&raw), a.add(&b).unwrap().series().clone());
        prop_assert!(stored_ok(a.series()));
    }

    #[test]
    fn grouplike_products_stay_grouplike(seed in any::<u64>(), r in 2usize..4) {
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let a = random_grouplike(&mut g, r, 3, 2);
        let b = random_grouplike(&mut g, r, 3, 2);
        prop_assert!(grouplike_check(&a) && grouplike_check(&b));
        prop_assert!(grouplike_check(&a.mul(&b).unwrap()));
        prop_assert!(grouplike_check(&a.inverse().unwrap()));
        prop_assert!(!grouplike_check(&a.add(&DKElement::t(r, 3, 1, 2)).unwrap()));
    }

    #[test]
    fn mixed_triples_satisfy_the_object_condition(seed in any::<u64>(), n in 0usize..3, m in 0usize..3) {
        let m = if n == 0 { m.max(1) } else { m };
        let e = random_prime(&mut ChaCha8Rng::seed_from_u64(seed), n, m, 5);
        let again = Triple::new(e.u_src.clone(), e.u_tgt.clone(), e.x.clone(), e.mu_src.clone(), e.mu_tgt.clone());
        prop_assert!(again.is_ok());
        let r = rho(&e).unwrap();
        prop_assert_eq!(r.payload.arity(), (0, n + m));
        prop_assert_eq!(terrestrial_violations(&r.payload, n), 0);
    }

    #[test]
    fn voronov_arities_are_componentwise(seed in any::<u64>()) {
        let v = build_cd_pap_instance(2);
        let mut g = ChaCha8Rng::seed_from_u64(seed);
        let a = random_cd_pap(&mut g, &v, 3, 0.0);
        let b = random_cd_pap(&mut g, &v, 3, 0.5);
        let (n, m) = v.arity(&a);
        let (k, l) = v.arity(&b);
        if n > 0 {
            if let Ok(c) = v.insert(&a, Slot::Open(1), &b) {
                prop_assert_eq!(v.arity(&c), (n - 1 + k, m + l));
            }
        }
    }
}
