use std::collections::BTreeSet;

use proptest::prelude::*;

use knotgroups::stallings::{boundary_subgroups, SubgroupGraph};
use knotgroups::word::{Letter, Word};

fn word(min: usize, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..4usize, min..=max)
        .prop_map(|v| Word::reduce(v.into_iter().map(|i| Letter::ALL[i])))
}

fn generators() -> impl Strategy<Value = Vec<Word>> {
    prop::collection::vec(word(1, 6).prop_filter("nonempty", |w| !w.is_empty()), 1..4)
}

/// Reduced products of at most three generators or inverses.
fn short_products(gens: &[Word]) -> BTreeSet<Word> {
    let letters: Vec<Word> = gens.iter().flat_map(|g| [g.clone(), g.inverse()]).collect();
    let mut layer = vec![Word::empty()];
    let mut all: BTreeSet<Word> = layer.iter().cloned().collect();
    for _ in 0..3 {
        layer = layer
            .iter()
            .flat_map(|w| letters.iter().map(move |g| w.concat(g)))
            .collect();
        all.extend(layer.iter().cloned());
    }
    all
}

proptest! {
    #[test]
    fn folding_ignores_generator_order(gens in generators(), seed in any::<u64>()) {
        let mut shuffled = gens.clone();
        shuffled.rotate_left((seed as usize) % gens.len());
        if seed & 1 == 1 {
            shuffled.reverse();
        }
        let a = SubgroupGraph::build(&gens).unwrap();
        let b = SubgroupGraph::build(&shuffled).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.is_folded());
        // inverting a generator changes nothing either
        let inverted: Vec<Word> = gens.iter().map(|g| g.inverse()).collect();
        prop_assert_eq!(&a, &SubgroupGraph::build(&inverted).unwrap());
    }

    #[test]
    fn membership_covers_short_products(gens in generators()) {
        let g = SubgroupGraph::build(&gens).unwrap();
        for w in short_products(&gens) {
            prop_assert!(g.is_member(&w), "{} should be in the subgroup", w);
        }
    }

    #[test]
    fn members_are_conjugate_into(gens in generators(), x in word(0, 5), w in word(1, 10)) {
        let g = SubgroupGraph::build(&gens).unwrap();
        if g.is_member(&w) {
            prop_assert!(g.is_conjugate_into(&w));
        }
        for m in short_products(&gens).into_iter().take(20) {
            prop_assert!(g.is_conjugate_into(&m));
            let conj = x.concat(&m).concat(&x.inverse());
            prop_assert!(g.is_conjugate_into(&conj));
        }
    }

    #[test]
    fn rank_bounded_by_generators(gens in generators()) {
        let g = SubgroupGraph::build(&gens).unwrap();
        prop_assert!(g.rank() <= gens.len());
        prop_assert!(g.rank() >= 1);
    }
}

#[test]
fn boundary_subgroups_have_rank_two() {
    for p in [2, 3] {
        for q in [2, 3] {
            for gens in boundary_subgroups(p, q) {
                let g = SubgroupGraph::build(&gens).unwrap();
                assert_eq!(g.rank(), 2, "p={p} q={q}");
                assert!(g.is_folded());
            }
        }
    }
}

#[test]
fn short_words_outside_a_subgroup() {
    // members of length <= 4 are products of at most three generators, so
    // the graph must agree with the enumeration on every short word
    let g = SubgroupGraph::build(&boundary_subgroups(2, 2)[0]).unwrap();
    let members = short_products(&boundary_subgroups(2, 2)[0]);
    let mut layer = vec![Word::empty()];
    for _ in 0..4 {
        let mut next = Vec::new();
        for w in &layer {
            for x in Letter::ALL {
                if w.letters().last().is_some_and(|y| y.is_inverse_of(x)) {
                    continue;
                }
                next.push(w.concat(&Word::reduce([x])));
            }
        }
        for w in &next {
            assert_eq!(g.is_member(w), members.contains(w), "{w}");
        }
        layer = next;
    }
}
