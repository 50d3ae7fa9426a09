use std::collections::HashMap;

use effcat::diagram::{bfs_equal, enumerate, equal, normalize, BfsOutcome, Diagram};
use effcat::polygraph::{objs, ObjId, GenDecl, Polygraph, PolygraphCouple};

fn print_with_join() -> Polygraph {
    let mut p = PolygraphCouple::print_example().pure;
    p.gens.push(GenDecl::pure("join", &["A", "A"], &["A"]));
    p
}

fn with_consumers() -> Polygraph {
    Polygraph::new(
        objs(&["A", "B"]),
        vec![
            GenDecl::pure("a", &[], &["A"]),
            GenDecl::pure("drop", &["A"], &[]),
            GenDecl::pure("s", &[], &[]),
            GenDecl::pure("f", &["A"], &["B"]),
            GenDecl::pure("m", &["B", "A"], &["A"]),
        ],
    )
}

fn scalars_and_copies() -> Polygraph {
    Polygraph::new(
        objs(&["A"]),
        vec![
            GenDecl::pure("s", &[], &[]),
            GenDecl::pure("t", &[], &[]),
            GenDecl::pure("dup", &["A"], &["A", "A"]),
            GenDecl::pure("drop", &["A"], &[]),
        ],
    )
}

/// Partitions each boundary/multiset group by normal form, then confirms with
/// the search that members of a block are equal and that distinct blocks are
/// not. By transitivity this decides every pair in the group.
fn check_classes(sig: &Polygraph, doms: &[Vec<ObjId>], max_slices: usize) -> (usize, usize) {
    type Key = (Vec<ObjId>, Vec<ObjId>, Vec<String>);
    let mut groups: HashMap<Key, Vec<Diagram>> = HashMap::new();
    for dom in doms {
        for d in enumerate(sig, dom, max_slices) {
            groups.entry((d.dom.clone(), d.cod.clone(), d.generator_counts())).or_default().push(d);
        }
    }
    let mut diagrams = 0;
    let mut disagreements = 0;
    for group in groups.values() {
        let mut blocks: HashMap<Diagram, Vec<&Diagram>> = HashMap::new();
        for d in group {
            diagrams += 1;
            let n = normalize(sig, d).unwrap();
            assert_eq!(normalize(sig, &n).unwrap(), n, "normal form is not idempotent for {d}");
            blocks.entry(n).or_default().push(d);
        }
        let reps: Vec<&Diagram> = blocks.keys().collect();
        for (n, members) in &blocks {
            for m in members {
                if !equal(sig, n, m).unwrap() || bfs_equal(sig, n, m, 1_000_000).unwrap() != BfsOutcome::Equal {
                    disagreements += 1;
                    eprintln!("not reachable from its normal form: {m} / {n}");
                }
            }
        }
        for (i, x) in reps.iter().enumerate() {
            for y in &reps[i + 1..] {
                if equal(sig, x, y).unwrap() || bfs_equal(sig, x, y, 1_000_000).unwrap() != BfsOutcome::Unequal {
                    disagreements += 1;
                    eprintln!("distinct normal forms are equal: {x} / {y}");
                }
            }
        }
    }
    (diagrams, disagreements)
}

#[test]
fn normal_form_matches_search_with_consumers_and_scalars() {
    let sig = with_consumers();
    let (count, bad) = check_classes(&sig, &[vec![], objs(&["A"]), objs(&["A", "A"])], 4);
    assert!(count > 1000);
    assert_eq!(bad, 0);
}

#[test]
fn normal_form_matches_search_with_copies() {
    let sig = scalars_and_copies();
    let (_, bad) = check_classes(&sig, &[vec![], objs(&["A"]), objs(&["A", "A"])], 4);
    assert_eq!(bad, 0);
}

#[test]
fn normal_form_matches_search_on_five_slices() {
    let sig = print_with_join();
    let (_, bad) = check_classes(&sig, &[vec![], objs(&["A"])], 5);
    assert_eq!(bad, 0);
}
