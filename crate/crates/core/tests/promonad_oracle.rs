//! Coend composition against a direct quotient of matching triples.

mod common;

use std::collections::{BTreeSet, HashMap};

use common::{all_profunctors, categories, point, triple_classes, z2};
use effcat::promonad::{associator, compose_profunctors, left_unitor, right_unitor, FiniteProfunctor};

#[test]
fn enumeration_is_sane() {
    // sets with a commuting pair of involutions, up to isomorphism
    assert_eq!(all_profunctors(&z2(), &z2(), 1).len(), 2);
    assert_eq!(all_profunctors(&point(), &point(), 3).len(), 4);
}

#[test]
fn unitors_are_bijections_for_small_profunctors() {
    let mut checked = 0;
    for (_, a) in categories() {
        for (_, b) in categories() {
            for p in all_profunctors(&a, &b, 3) {
                let l = left_unitor(&p).unwrap();
                let r = right_unitor(&p).unwrap();
                assert_eq!(l.len(), p.len());
                assert_eq!(r.len(), p.len());
                checked += 1;
            }
        }
    }
    assert!(checked > 50, "{checked}");
}

#[test]
fn associator_matches_the_triple_quotient() {
    let cats = categories();
    let pools: HashMap<(usize, usize), Vec<FiniteProfunctor>> = (0..cats.len())
        .flat_map(|i| (0..cats.len()).map(move |j| (i, j)))
        .map(|(i, j)| ((i, j), all_profunctors(&cats[i].1, &cats[j].1, 3)))
        .collect();
    let mut triples = 0;
    for i in 0..cats.len() {
        for j in 0..cats.len() {
            for k in 0..cats.len() {
                for l in 0..cats.len() {
                    for p in &pools[&(i, j)] {
                        for q in &pools[&(j, k)] {
                            for r in &pools[&(k, l)] {
                                check_triple(p, q, r);
                                triples += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    assert!(triples > 10_000, "{triples}");
}

fn check_triple(p: &FiniteProfunctor, q: &FiniteProfunctor, r: &FiniteProfunctor) {
    let classes = triple_classes(p, q, r);
    let pq = compose_profunctors(p, q).unwrap();
    let qr = compose_profunctors(q, r).unwrap();
    let left = compose_profunctors(&pq.prof, r).unwrap();
    let right = compose_profunctors(p, &qr.prof).unwrap();
    assert_eq!(left.prof.len(), classes.len());
    assert_eq!(right.prof.len(), classes.len());
    let map = associator(p, q, r).unwrap();
    for class in &classes {
        let mut images = BTreeSet::new();
        for &(x, y, z) in class {
            let from = left.class_of(pq.class_of(x, y).unwrap(), z).unwrap();
            let to = right.class_of(x, qr.class_of(y, z).unwrap()).unwrap();
            assert_eq!(map[from], to);
            images.insert(to);
        }
        assert_eq!(images.len(), 1);
    }
}
