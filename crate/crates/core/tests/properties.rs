use proptest::collection::vec;
use proptest::prelude::*;

use semigens::gensets::{greedy, semigroup_rank, small_generating_set};
use semigens::greens::{d_classes, ordered_elements, Direction};
use semigens::semigroup::{generated_size, SemigroupTable};
use semigens::transform::{all_permutations, Transformation};

fn transformation(n: usize) -> impl Strategy<Value = Transformation> {
    vec(0..n as u32, n).prop_map(|v| Transformation::from_images(v).unwrap())
}

fn same_degree(max_n: usize, count: usize) -> impl Strategy<Value = Vec<Transformation>> {
    (1..=max_n).prop_flat_map(move |n| vec(transformation(n), count))
}

fn generator_set(max_n: usize, max_k: usize) -> impl Strategy<Value = Vec<Transformation>> {
    (1..=max_n, 1..=max_k).prop_flat_map(|(n, k)| vec(transformation(n), k))
}

/// Saturates a set under products until nothing new appears.
fn naive_closure(gens: &[Transformation]) -> Vec<Transformation> {
    let mut set: Vec<Transformation> = gens.to_vec();
    set.sort();
    set.dedup();
    loop {
        let mut next = set.clone();
        for a in &set {
            for b in &set {
                next.push(a * b);
            }
        }
        next.sort();
        next.dedup();
        if next.len() == set.len() {
            return set;
        }
        set = next;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn composition_is_associative(t in same_degree(6, 3)) {
        let (f, g, h) = (&t[0], &t[1], &t[2]);
        prop_assert_eq!(&(f * g) * h, f * &(g * h));
    }

    #[test]
    fn rank_of_product_is_bounded(t in same_degree(7, 2)) {
        let p = &t[0] * &t[1];
        prop_assert!(p.rank() <= t[0].rank().min(t[1].rank()));
    }

    #[test]
    fn image_of_product_is_image_of_restriction(t in same_degree(7, 2)) {
        let (f, g) = (&t[0], &t[1]);
        let mut expected: Vec<usize> = f.image().into_iter().map(|x| g.apply(x)).collect();
        expected.sort_unstable();
        expected.dedup();
        prop_assert_eq!((f * g).image(), expected);
    }

    #[test]
    fn conjugation_preserves_structure(t in same_degree(5, 2), pick in any::<prop::sample::Index>()) {
        let (f, g) = (&t[0], &t[1]);
        let perms = all_permutations(f.degree());
        let p = &perms[pick.index(perms.len())];
        let cf = f.conjugate(p).unwrap();
        prop_assert_eq!(cf.rank(), f.rank());
        prop_assert_eq!(cf.is_idempotent(), f.is_idempotent());
        prop_assert_eq!(cf.is_group_generator(), f.is_group_generator());
        // Conjugation is a homomorphism.
        prop_assert_eq!((f * g).conjugate(p).unwrap(), &cf * &g.conjugate(p).unwrap());
        let mut sizes: Vec<usize> = f.kernel().iter().map(Vec::len).collect();
        let mut csizes: Vec<usize> = cf.kernel().iter().map(Vec::len).collect();
        sizes.sort_unstable();
        csizes.sort_unstable();
        prop_assert_eq!(sizes, csizes);
    }

    #[test]
    fn closure_matches_saturation(gens in generator_set(4, 3)) {
        let table = SemigroupTable::closure(&gens).unwrap();
        let mut got = table.elements().to_vec();
        got.sort();
        prop_assert_eq!(got, naive_closure(&gens));
    }

    #[test]
    fn closure_is_idempotent_and_order_free(gens in generator_set(5, 3)) {
        let table = SemigroupTable::closure(&gens).unwrap();
        let again = SemigroupTable::closure(table.elements()).unwrap();
        prop_assert_eq!(again.len(), table.len());
        let mut reversed = gens.clone();
        reversed.reverse();
        prop_assert_eq!(generated_size(&reversed).unwrap(), table.len());
    }

    #[test]
    fn subword_products_lie_above(gens in generator_set(4, 3)) {
        let table = SemigroupTable::closure(&gens).unwrap();
        prop_assume!(table.len() <= 200);
        let d = d_classes(&table);
        for e in 0..table.len() {
            let word = table.word(e);
            for i in 0..word.len() {
                for j in i + 1..=word.len() {
                    let p = table.evaluate_word(&word[i..j]).unwrap();
                    let pi = table.index_of(&p).unwrap();
                    prop_assert!(table.is_below(e, pi));
                }
            }
            // Same class implies same rank.
            let c = d.class_of(e);
            prop_assert_eq!(table.elements()[e].rank(), d.rank_of_class(c));
        }
    }

    #[test]
    fn greedy_output_generates(gens in generator_set(4, 3), direction in prop_oneof![Just(Direction::Descending), Just(Direction::Ascending)]) {
        let table = SemigroupTable::closure(&gens).unwrap();
        let report = small_generating_set(&table, direction).unwrap();
        prop_assert_eq!(generated_size(&report.generating_set).unwrap(), table.len());
        prop_assert_eq!(report.semigroup_size, table.len());
        let listed = ordered_elements(&table, &d_classes(&table), direction);
        let plain = greedy(&listed).unwrap();
        prop_assert_eq!(plain.generating_set, report.generating_set.clone());
        if table.len() <= 64 {
            prop_assert!(semigroup_rank(&table, 64).unwrap() <= report.size);
        }
    }
}
