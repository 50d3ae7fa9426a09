//! Pure tensor equality against a rewriting closure on raw words.
//!
//! The oracle never merges eagerly. Its moves are the defining relations read
//! both ways: compose two adjacent letters of one side or split a letter into
//! any factorisation, insert or delete an identity letter, and exchange two
//! adjacent letters of different sides when one of them is pure. All raw
//! words up to a length bound are joined by union-find, so the oracle is an
//! independent view of the presented quotient at that bound.

use std::collections::HashMap;

use effcat::monoid::FiniteMonoid;
use effcat::promonad::{CategoryBuilder, FiniteCategory};
use effcat::puretensor::{PTLetter, PTWord, PureTensor, Side, WriterInstance};
use effcat::BfsOutcome;

type Raw = ((usize, usize), Vec<PTLetter>);

struct Oracle<'a> {
    pt: &'a PureTensor,
    bound: usize,
    letters: Vec<PTLetter>,
    index: HashMap<Raw, usize>,
    parent: Vec<usize>,
}

fn objects(pt: &PureTensor) -> Vec<(usize, usize)> {
    let (v, w) = (pt.left.base().objects.len(), pt.right.base().objects.len());
    (0..v).flat_map(|x| (0..w).map(move |y| (x, y))).collect()
}

impl<'a> Oracle<'a> {
    fn new(pt: &'a PureTensor, bound: usize) -> Self {
        let mut letters = Vec::new();
        for side in [Side::Left, Side::Right] {
            let co = match side {
                Side::Left => pt.right.base().objects.len(),
                Side::Right => pt.left.base().objects.len(),
            };
            for morphism in 0..pt.side(side).len() {
                for co_object in 0..co {
                    letters.push(PTLetter { side, morphism, co_object });
                }
            }
        }
        let mut o = Oracle { pt, bound, letters, index: HashMap::new(), parent: Vec::new() };
        let mut layer: Vec<Raw> = objects(pt).into_iter().map(|x| (x, vec![])).collect();
        for _ in 0..=bound {
            let mut next = Vec::new();
            for raw in layer {
                let at = raw.1.last().map_or(raw.0, |l| pt.letter_cod(l));
                for l in o.letters.iter().filter(|l| pt.letter_dom(l) == at) {
                    let mut ls = raw.1.clone();
                    ls.push(l.clone());
                    next.push((raw.0, ls));
                }
                let id = o.parent.len();
                o.parent.push(id);
                o.index.insert(raw, id);
            }
            layer = next;
        }
        let words: Vec<Raw> = o.index.keys().cloned().collect();
        for w in &words {
            for n in o.moves(w) {
                o.union(w, &n);
            }
        }
        o
    }

    fn is_identity(&self, l: &PTLetter) -> bool {
        let m = self.pt.side(l.side);
        (0..m.base().objects.len()).any(|x| m.unit[m.base().id(x)] == l.morphism)
    }

    fn is_pure(&self, l: &PTLetter) -> bool {
        self.pt.side(l.side).unit.contains(&l.morphism)
    }

    fn moves(&self, (dom, ls): &Raw) -> Vec<Raw> {
        let pt = self.pt;
        let mut out = Vec::new();
        let with = |i: usize, cut: usize, put: Vec<PTLetter>| {
            let mut v = ls[..i].to_vec();
            v.extend(put);
            v.extend_from_slice(&ls[i + cut..]);
            (*dom, v)
        };
        for i in 0..ls.len() {
            let l = &ls[i];
            let m = pt.side(l.side);
            if self.is_identity(l) {
                out.push(with(i, 1, vec![]));
            }
            if ls.len() < self.bound {
                for a in 0..m.len() {
                    for b in 0..m.len() {
                        if m.mult[a][b] == Some(l.morphism) {
                            let put = vec![PTLetter { morphism: a, ..l.clone() }, PTLetter { morphism: b, ..l.clone() }];
                            out.push(with(i, 1, put));
                        }
                    }
                }
            }
            if i + 1 < ls.len() {
                let r = &ls[i + 1];
                if l.side == r.side {
                    out.push(with(i, 2, vec![PTLetter { morphism: m.star(l.morphism, r.morphism), ..l.clone() }]));
                } else if self.is_pure(l) || self.is_pure(r) {
                    let own_dom = |x: &PTLetter| {
                        let d = pt.letter_dom(x);
                        if x.side == Side::Left { d.0 } else { d.1 }
                    };
                    let own_cod = |x: &PTLetter| {
                        let c = pt.letter_cod(x);
                        if x.side == Side::Left { c.0 } else { c.1 }
                    };
                    let r2 = PTLetter { co_object: own_dom(l), ..r.clone() };
                    let l2 = PTLetter { co_object: own_cod(r), ..l.clone() };
                    out.push(with(i, 2, vec![r2, l2]));
                }
            }
        }
        if ls.len() < self.bound {
            for i in 0..=ls.len() {
                let at = if i == 0 { *dom } else { pt.letter_cod(&ls[i - 1]) };
                for side in [Side::Left, Side::Right] {
                    let m = pt.side(side);
                    let (own, co_object) = match side {
                        Side::Left => at,
                        Side::Right => (at.1, at.0),
                    };
                    let l = PTLetter { side, morphism: m.unit[m.base().id(own)], co_object };
                    out.push(with(i, 0, vec![l]));
                }
            }
        }
        out.retain(|(_, v)| v.len() <= self.bound);
        out
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: &Raw, b: &Raw) {
        let (a, b) = (self.index[a], self.index[b]);
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    fn class(&mut self, u: &PTWord) -> usize {
        let id = self.index[&(u.dom, u.letters.clone())];
        self.find(id)
    }
}

fn z2() -> FiniteCategory {
    let mut b = CategoryBuilder::new(&["X"]);
    b.arrow("s", "X", "X").unwrap().composite("s", "s", "id_X").unwrap();
    b.build().unwrap()
}

fn arrow() -> FiniteCategory {
    let mut b = CategoryBuilder::new(&["X", "Y"]);
    b.arrow("f", "X", "Y").unwrap();
    b.build().unwrap()
}

/// Counts (pairs compared, equal pairs) and fails on the first disagreement.
fn agree(pt: &PureTensor, max_letters: usize, bound: usize) -> (usize, usize) {
    let mut oracle = Oracle::new(pt, bound);
    let words = pt.words(max_letters);
    type Ends = ((usize, usize), (usize, usize));
    let mut groups: HashMap<Ends, Vec<&PTWord>> = HashMap::new();
    for w in &words {
        groups.entry((w.dom, w.cod)).or_default().push(w);
    }
    let (mut pairs, mut equal) = (0, 0);
    for group in groups.values() {
        for (i, u) in group.iter().enumerate() {
            for t in &group[i + 1..] {
                let fast = pt.equal(u, t, 1_000_000);
                assert_ne!(fast, BfsOutcome::Inconclusive);
                let slow = oracle.class(u) == oracle.class(t);
                assert_eq!(fast.is_equal(), slow, "{} vs {}", pt.show(u), pt.show(t));
                pairs += 1;
                equal += usize::from(slow);
            }
        }
    }
    (pairs, equal)
}

#[test]
fn search_agrees_with_raw_rewriting_over_groups() {
    let m = FiniteMonoid::truncated_free(&["h"], 1);
    let n = FiniteMonoid::cyclic(2);
    let pt = WriterInstance::new(&z2(), &m, &z2(), &n).tensor;
    let (pairs, equal) = agree(&pt, 3, 5);
    assert!(pairs > 1000 && equal > 0 && equal < pairs, "{pairs} pairs, {equal} equal");
}

#[test]
fn search_agrees_with_raw_rewriting_over_two_objects() {
    let m = FiniteMonoid::truncated_free(&["h", "w"], 1);
    let n = FiniteMonoid::cyclic(2);
    let pt = WriterInstance::new(&arrow(), &m, &z2(), &n).tensor;
    let (pairs, equal) = agree(&pt, 2, 4);
    assert!(pairs > 100 && equal > 0 && equal < pairs, "{pairs} pairs, {equal} equal");
}
