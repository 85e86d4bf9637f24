use std::collections::BTreeMap;

use proptest::prelude::*;

use knotgroups::bns::{classify, convex_hull, trace_path, Point};
use knotgroups::expr::Binding;
use knotgroups::family::Registry;
use knotgroups::word::{CyclicWord, Letter, Word};

/// Null-homologous cyclic words: a random word times a random rearrangement
/// of its inverse letters.
fn balanced() -> impl Strategy<Value = CyclicWord> {
    (prop::collection::vec(0..4usize, 1..10), any::<u64>()).prop_filter_map("trivial", |(v, seed)| {
        let mut letters: Vec<Letter> = v.iter().map(|&i| Letter::ALL[i]).collect();
        let mut back: Vec<Letter> = letters.iter().map(|l| l.inverse()).collect();
        let mut s = seed;
        for i in (1..back.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            back.swap(i, (s >> 33) as usize % (i + 1));
        }
        letters.extend(back);
        let (c, _) = Word::reduce(letters).cyclically_reduce();
        (c.len() >= 4).then_some(c)
    })
}

fn walk(k: &CyclicWord) -> Vec<Point> {
    let mut p = (0i64, 0i64);
    let mut out = vec![Point::new(0, 0)];
    for l in k.letters() {
        match l.to_char() {
            'a' => p.0 += 1,
            'A' => p.0 -= 1,
            'b' => p.1 += 1,
            _ => p.1 -= 1,
        }
        out.push(Point::new(p.0, p.1));
    }
    out
}

fn cross(o: Point, a: Point, b: Point) -> i64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

proptest! {
    #[test]
    fn trace_is_the_plain_walk(k in balanced()) {
        let path = trace_path(&k).unwrap();
        prop_assert_eq!(&path.points, &walk(&k));
        prop_assert_eq!(*path.points.last().unwrap(), Point::new(0, 0));
    }

    #[test]
    fn multiplicities_sum_to_length(k in balanced()) {
        let path = trace_path(&k).unwrap();
        let m = path.multiplicities();
        prop_assert_eq!(m.values().sum::<usize>(), k.len());
        let mut oracle: BTreeMap<Point, usize> = BTreeMap::new();
        for p in &walk(&k)[..k.len()] {
            *oracle.entry(*p).or_default() += 1;
        }
        prop_assert_eq!(m, oracle);
    }

    #[test]
    fn hull_is_convex_and_contains_the_walk(k in balanced()) {
        let path = trace_path(&k).unwrap();
        let hull = convex_hull(&path).unwrap();
        let v = &hull.vertices;
        let n = v.len();
        prop_assume!(n >= 3);
        for i in 0..n {
            // strictly left turns, counter-clockwise
            prop_assert!(cross(v[i], v[(i + 1) % n], v[(i + 2) % n]) > 0);
            prop_assert!(path.points.contains(&v[i]));
        }
        for &p in &path.points {
            prop_assert!(hull.contains(p));
            for i in 0..n {
                prop_assert!(cross(v[i], v[(i + 1) % n], p) >= 0);
            }
        }
    }

    #[test]
    fn verdict_ignores_base_point(k in balanced(), r in 0usize..64) {
        let a = classify(&k).unwrap();
        let b = classify(&k.rotate(r % k.len())).unwrap();
        prop_assert_eq!(a.empty, b.empty);
        prop_assert_eq!(a.simple_vertices.len(), b.simple_vertices.len());
        let c = classify(&k.inverse()).unwrap();
        prop_assert_eq!(a.empty, c.empty);
    }

    #[test]
    fn proper_powers_have_no_simple_vertices(k in balanced(), e in 2usize..4) {
        let p = CyclicWord::new(k.as_word().pow(e)).unwrap();
        let v = classify(&p).unwrap();
        prop_assert!(v.simple_vertices.is_empty());
        prop_assert!(v.empty);
    }

    #[test]
    fn simple_vertices_are_visited_once(k in balanced()) {
        let v = classify(&k).unwrap();
        let m = trace_path(&k).unwrap().multiplicities();
        for p in &v.simple_vertices {
            prop_assert_eq!(m[p], 1);
        }
        for s in &v.special_edges {
            prop_assert!(s.from.x == s.to.x || s.from.y == s.to.y);
            prop_assert!(v.simple_vertices.contains(&s.from) && v.simple_vertices.contains(&s.to));
        }
        if v.empty {
            prop_assert!(v.simple_vertices.is_empty());
        }
    }
}

#[test]
fn family_words_outside_the_bns_range() {
    // n = 1 is reported, not asserted; this pins what the toolkit reports
    let reg = Registry::builtin();
    let k = reg.require("fig3").unwrap().generate(&Binding::new(2, 2, 1)).unwrap();
    assert!(!classify(&k).unwrap().empty);
}
