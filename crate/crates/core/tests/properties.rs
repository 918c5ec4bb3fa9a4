use std::sync::OnceLock;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use bifix_core::automata::{is_minimal, Dfa};
use bifix_core::conflicts::{conflict, greedy_matching, ForcesMode};
use bifix_core::phimap::{classify, construct, phi, Case};
use bifix_core::sample::Sampler;
use bifix_core::semigroups::*;
use bifix_core::transmap::{analyze, in_degree, tree_of, Transformation};

fn bbf(n: usize) -> &'static [Transformation] {
    static CACHE: [OnceLock<Vec<Transformation>>; 9] = [const { OnceLock::new() }; 9];
    CACHE[n].get_or_init(|| enumerate_bbf(n).unwrap().sorted())
}

fn transformation(n: usize) -> impl Strategy<Value = Transformation> {
    prop::collection::vec(0..n, n).prop_map(|v| Transformation::from_images(&v))
}

fn triple() -> impl Strategy<Value = (Transformation, Transformation, Transformation)> {
    (1usize..=8).prop_flat_map(|n| (transformation(n), transformation(n), transformation(n)))
}

fn dfa() -> impl Strategy<Value = Dfa> {
    (2usize..=6, 1usize..=3).prop_flat_map(|(n, k)| {
        (prop::collection::vec(transformation(n), k), 0..n, prop::collection::vec(0..n, 0..=n))
            .prop_map(move |(delta, init, finals)| Dfa::new(n, delta, init, finals).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn composition_is_associative_with_identity((a, b, c) in triple()) {
        prop_assert_eq!(a.then(&b).then(&c), a.then(&b.then(&c)));
        let id = Transformation::identity(a.n());
        prop_assert_eq!(a.then(&id), a);
        prop_assert_eq!(id.then(&a), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn minimality_survives_renaming(d in dfa(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut perm: Vec<usize> = (0..d.n()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let r = d.rename(&perm).unwrap();
        prop_assert_eq!(is_minimal(&d), is_minimal(&r));
    }

    #[test]
    fn closure_is_idempotent(idx in prop::collection::vec(any::<prop::sample::Index>(), 1..4)) {
        let gens: Vec<Transformation> = idx.iter().map(|i| *i.get(bbf(5))).collect();
        let s = close(&gens).unwrap();
        prop_assert!(s.is_closed());
        let again = close(s.elements()).unwrap();
        prop_assert!(again.same_set(&s));
    }

    #[test]
    fn conflict_is_symmetric(a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let (x, y) = (a.get(bbf(6)), b.get(bbf(6)));
        for mode in [ForcesMode::EachPair, ForcesMode::Uniform] {
            let u = conflict(x, y, mode).unwrap();
            let v = conflict(y, x, mode).unwrap();
            prop_assert_eq!(u.conflicting, v.conflicting);
        }
    }

    #[test]
    fn phi_fixed_point_and_tagging(i in any::<prop::sample::Index>()) {
        let t = i.get(bbf(7));
        let (label, _) = classify(t).unwrap();
        let s = phi(t).unwrap();
        prop_assert_eq!(s == *t, label.case == Case::S1);
        match label.case.supercase() {
            2 => prop_assert_eq!(s.apply(0), 6),
            3 => prop_assert_eq!(s.apply(0), 5),
            _ => {}
        }
    }

    #[test]
    fn sampled_dfas_satisfy_necessary_conditions(seed in any::<u64>(), k in 1usize..=3) {
        static SAMPLER: OnceLock<Sampler> = OnceLock::new();
        let sampler = SAMPLER.get_or_init(|| Sampler::new(6).unwrap());
        let d = sampler.draw(k, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap().dfa;
        let t = close(d.delta()).unwrap();
        for x in t.iter() {
            prop_assert!(in_bbf(x));
            prop_assert_eq!(x.apply(5), 5);
            prop_assert_eq!(x.apply(4), 5);
            prop_assert!(x.image_mask() & 1 == 0);
        }
        for p in pair_statuses(&t).unwrap() {
            prop_assert!(!(p.is_colliding() && p.is_focused()), "pair {:?}", p.pair);
        }
    }
}

fn graph() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1usize..=12).prop_flat_map(|v| {
        let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a + 1..v).map(move |b| (a, b))).collect();
        let m = pairs.len();
        (Just(v), prop::sample::subsequence(pairs, 0..=m))
    })
}

fn max_independent_set(v: usize, edges: &[(usize, usize)]) -> usize {
    (0u32..1 << v)
        .filter(|set| edges.iter().all(|&(a, b)| set >> a & 1 == 0 || set >> b & 1 == 0))
        .map(u32::count_ones)
        .max()
        .unwrap() as usize
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn greedy_matching_is_maximal_and_bounds_independent_sets((v, edges) in graph()) {
        let m = greedy_matching(&edges);
        let mut used = vec![false; v];
        for &(a, b) in &m {
            prop_assert!(edges.contains(&(a, b)));
            prop_assert!(!used[a] && !used[b]);
            used[a] = true;
            used[b] = true;
        }
        for &(a, b) in &edges {
            prop_assert!(used[a] || used[b]);
        }
        prop_assert!(max_independent_set(v, &edges) <= v - m.len());
    }
}

#[test]
fn named_sets_are_closed_up_to_six() {
    for n in 3..=6 {
        assert!(enumerate_wge6(n).unwrap().is_closed(), "wge6 n={n}");
        assert!(enumerate_wle5(n).unwrap().is_closed(), "wle5 n={n}");
    }
}

#[test]
fn named_sets_at_seven_and_eight_are_closed_on_samples() {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [7, 8] {
        for set in [enumerate_wge6(n).unwrap(), enumerate_wle5(n).unwrap()] {
            let e = set.elements();
            for _ in 0..20_000 {
                let a = e[rng.gen_range(0..e.len())];
                let b = e[rng.gen_range(0..e.len())];
                assert!(set.contains(&a.then(&b)), "n={n}");
            }
        }
    }
}

#[test]
fn dropping_an_irreducible_letter_shrinks_the_closure() {
    for n in [5, 6] {
        let letters = witness_letters(n).unwrap();
        let full = close(&letters).unwrap().len();
        for i in 0..letters.len() {
            let mut rest = letters.clone();
            rest.remove(i);
            assert!(close(&rest).unwrap().len() < full, "n={n} letter {i}");
        }
    }
}

#[test]
fn in_bbf_stabilizes_within_n_steps() {
    for n in 2..=5 {
        for t in bbf(n) {
            let p0 = |j: usize| t.apply_pow(0, j);
            for j in 1..=2 * n {
                let z = p0(j);
                assert!(z == n - 1 || (1..n - 1).all(|q| t.apply_pow(q, j) != z));
            }
        }
    }
}

#[test]
fn phi_codomain() {
    for n in [6, 7, 8] {
        let w = enumerate_wge6(n).unwrap();
        for t in bbf(n) {
            assert!(w.contains(&phi(t).unwrap()), "n={n} t={t}");
        }
    }
}

#[test]
fn changed_states_lie_in_one_orbit_or_tree() {
    let without_property_b = [Case::C2_5_1, Case::C2_5_2, Case::C3_4_1];
    for n in [7, 8] {
        for t in bbf(n) {
            let (label, ctx) = classify(t).unwrap();
            let s = construct(t, &label, &ctx);
            let diff: Vec<usize> = (1..n - 2).filter(|&q| t.apply(q) != s.apply(q)).collect();
            if diff.is_empty() {
                continue;
            }
            let orbits = analyze(&s);
            let one_orbit = diff.iter().all(|&q| orbits.orbit_id[q] == orbits.orbit_id[diff[0]]);
            let one_tree = (0..n).any(|r| {
                !s.in_cycle(r) && {
                    let tree = tree_of(&s, r).unwrap();
                    diff.iter().all(|q| tree.contains(q))
                }
            });
            let holds = one_orbit || one_tree;
            assert_eq!(holds, !without_property_b.contains(&label.case), "{label} t={t}");
        }
    }
}

#[test]
fn per_case_shapes() {
    for n in [7, 8] {
        for t in bbf(n) {
            let (label, ctx) = classify(t).unwrap();
            let s = construct(t, &label, &ctx);
            let orbits = analyze(&s);
            let cycles: Vec<&[usize]> = orbits.cycles().collect();
            match label.case {
                Case::C2_3 => {
                    assert_eq!(cycles.len(), 1);
                    let mut deg: Vec<usize> = cycles[0].iter().map(|&q| in_degree(&s, q)).collect();
                    deg.sort();
                    assert_eq!(deg, [1, 2], "t={t}");
                }
                Case::C2_4_5 => {
                    assert!(cycles.is_empty());
                    assert!((1..n - 2).any(|q| s.is_fixed(q) && in_degree(&s, q) >= 3), "t={t}");
                }
                Case::C3_2_4 => assert_eq!(cycles.len(), 1, "t={t}"),
                _ => {}
            }
        }
    }
}
