use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rarep::gf2::{induced_partition, BasisState, ExtendOutcome};
use rarep::group::{span, sumset, sumset_naive, Element, ElementSet, GroupSpec};
use rarep::johnson::{binomial, JohnsonUniverse};
use rarep::ra::{builtin_52_65, builtin_59_65, parse_spec};
use rarep::verify::{
    cayley_coloring, equivalence_classes, random_symmetric_partition, verify_bruteforce,
    verify_sumsets, ColoredPartition, VerifyOptions,
};

fn group_strategy() -> impl Strategy<Value = Arc<GroupSpec>> {
    prop_oneof![
        (2u32..200).prop_map(|n| GroupSpec::cyclic(n).unwrap()),
        (1usize..9).prop_map(|k| GroupSpec::elementary_abelian(k).unwrap()),
        prop::collection::vec(2u32..7, 1..4).prop_map(|m| GroupSpec::new(&m).unwrap()),
    ]
    .prop_map(Arc::new)
}

fn set_in(g: &Arc<GroupSpec>, bits: &[bool]) -> ElementSet {
    ElementSet::from_fn(g, |x| bits[x.0 % bits.len()])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sumset_matches_naive(g in group_strategy(), a in prop::collection::vec(any::<bool>(), 1..64), b in prop::collection::vec(any::<bool>(), 1..64)) {
        let s = set_in(&g, &a);
        let t = set_in(&g, &b);
        prop_assert_eq!(sumset(&s, &t).unwrap(), sumset_naive(&s, &t).unwrap());
        prop_assert_eq!(sumset(&s, &t).unwrap(), sumset(&t, &s).unwrap());
    }

    #[test]
    fn translate_inverts(g in group_strategy(), a in prop::collection::vec(any::<bool>(), 1..64), x in any::<usize>()) {
        let s = set_in(&g, &a);
        let x = Element(x % g.order());
        let back = s.translate(x).translate(g.neg(x).unwrap());
        prop_assert_eq!(back, s.clone());
        prop_assert_eq!(s.translate(x).len(), s.len());
        prop_assert_eq!(s.negate().negate(), s);
    }

    #[test]
    fn element_text_round_trips(g in group_strategy(), x in any::<usize>()) {
        let x = Element(x % g.order());
        prop_assert_eq!(g.parse_element(&g.format_element(x)).unwrap(), x);
        prop_assert_eq!(g.decode(x).len(), g.moduli().len());
        prop_assert_eq!(g.encode(&g.decode(x)).unwrap(), x);
    }

    #[test]
    fn spans_are_subgroups(g in group_strategy(), gens in prop::collection::vec(any::<usize>(), 0..3)) {
        let gens: Vec<Element> = gens.into_iter().map(|x| Element(x % g.order())).collect();
        let h = span(&g, &gens).unwrap();
        prop_assert!(h.is_closed());
        prop_assert_eq!(g.order() % h.order(), 0);
        prop_assert!(gens.iter().all(|&x| h.elements.contains(x)));
    }

    #[test]
    fn colex_rank_round_trips(n in 2u32..12, r in any::<u64>()) {
        let u = JohnsonUniverse::new(n).unwrap();
        prop_assert_eq!(u.size(), binomial((3 * n - 4) as u64, n as u64));
        let r = r % u.size();
        let m = u.unrank(r);
        prop_assert!(u.is_point(m));
        prop_assert_eq!(u.rank(m), r);
    }

    #[test]
    fn span_stays_inside_x(k in 4usize..12, t_off in 0usize..3, vs in prop::collection::vec(any::<usize>(), 1..40)) {
        let t = (k - 1 - t_off).max(1);
        let mut st = BasisState::new(k, t).unwrap();
        for v in vs {
            let v = Element(v % (1 << k));
            if v.0 == 0 || v.0.count_ones() as usize > t {
                prop_assert!(st.extend_basis(v).is_err());
                continue;
            }
            match st.extend_basis(v).unwrap() {
                ExtendOutcome::Accepted(next) => {
                    prop_assert_eq!(next.order(), 2 * st.order());
                    prop_assert!(next.span().iter().all(|h| h.0 == 0 || (1..=t).contains(&(h.0.count_ones() as usize))));
                    st = next;
                }
                ExtendOutcome::Dependent => prop_assert!(st.span().contains(v)),
                ExtendOutcome::WouldLeaveX { h, sum } => {
                    prop_assert!(st.span().contains(h));
                    prop_assert_eq!(sum.0, h.0 ^ v.0);
                    prop_assert!(sum.0.count_ones() as usize > t);
                }
            }
        }
        // b ∪ 1' is an equivalence whose classes are the cosets of H
        let part = induced_partition(&st).unwrap();
        let classes = equivalence_classes(&cayley_coloring(&part), rarep::ra::AtomId(2)).unwrap();
        prop_assert_eq!(classes.len() * st.order(), 1 << k);
    }

    #[test]
    fn coordinate_permutation_preserves_verdict(k in 2usize..6, seed in any::<u64>(), rot in 1usize..6) {
        let g = Arc::new(GroupSpec::elementary_abelian(k).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let part = random_symmetric_partition(&g, 3, &mut rng);
        let rot = rot % k;
        let perm = |x: Element| Element(((x.0 << rot) | (x.0 >> (k - rot))) & ((1 << k) - 1));
        let sets: Vec<ElementSet> = part
            .sets()
            .iter()
            .map(|s| ElementSet::from_elements(&g, s.iter().map(perm)).unwrap())
            .collect();
        let moved = ColoredPartition::new(&g, sets).unwrap();
        for spec in [builtin_52_65(), builtin_59_65()] {
            let a = verify_sumsets(&spec, &part, VerifyOptions::exhaustive()).unwrap();
            let b = verify_sumsets(&spec, &moved, VerifyOptions::exhaustive()).unwrap();
            prop_assert_eq!(a.verdict, b.verdict);
            prop_assert_eq!(a.violation_count, b.violation_count);
        }
    }

    #[test]
    fn routes_agree_on_cyclic_groups(n in 2u32..40, seed in any::<u64>()) {
        let g = Arc::new(GroupSpec::cyclic(n).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let part = random_symmetric_partition(&g, 3, &mut rng);
        let col = cayley_coloring(&part);
        for spec in [builtin_52_65(), builtin_59_65()] {
            let a = verify_sumsets(&spec, &part, VerifyOptions::exhaustive()).unwrap();
            let b = verify_bruteforce(&spec, &col, VerifyOptions::exhaustive()).unwrap();
            prop_assert_eq!(a.verdict, b.verdict);
            prop_assert_eq!(a.accepted(), a.violations.is_empty());
        }
    }
}

#[test]
fn spec_text_round_trips() {
    for spec in [builtin_52_65(), builtin_59_65()] {
        let again = parse_spec(&spec.to_fixture_text()).unwrap();
        assert_eq!(again.forbidden_cycles(), spec.forbidden_cycles());
        assert_eq!(again.name(), spec.name());
    }
}
