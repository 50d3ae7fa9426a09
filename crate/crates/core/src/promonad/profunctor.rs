//! Profunctors `A ⇸ B` as sets `P(a, b)` with left and right action tables,
//! and their composition by quotienting matching pairs.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::category::{all_functions, FiniteCategory, FiniteFunctor};
use crate::monoid::FiniteMonoid;

/// A failed law, with the elements that witness it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub law: String,
    pub witness: Vec<String>,
}

impl Counterexample {
    pub fn new(law: &str, witness: &[&str]) -> Self {
        Counterexample { law: law.into(), witness: witness.iter().map(|w| w.to_string()).collect() }
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at ({})", self.law, self.witness.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Element {
    pub name: String,
    pub a: usize,
    pub b: usize,
}

/// `lact[f][p]` is `f ◁ p` for `f: a' → a` in the left category and
/// `p ∈ P(a, b)`; `ract[p][g]` is `p ▷ g` for `g: b → b'`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteProfunctor {
    pub left: FiniteCategory,
    pub right: FiniteCategory,
    pub elements: Vec<Element>,
    pub lact: Vec<Vec<Option<usize>>>,
    pub ract: Vec<Vec<Option<usize>>>,
}

impl FiniteProfunctor {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn name(&self, p: usize) -> &str {
        &self.elements[p].name
    }

    pub fn at(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.len()).filter(|&p| self.elements[p].a == a && self.elements[p].b == b).collect()
    }

    pub fn element(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e.name == name)
    }

    /// `f ◁ p`. Panics off the table.
    pub fn act_left(&self, f: usize, p: usize) -> usize {
        self.lact[f][p].unwrap_or_else(|| panic!("{} ◁ {} is undefined", self.left.name(f), self.name(p)))
    }

    /// `p ▷ g`. Panics off the table.
    pub fn act_right(&self, p: usize, g: usize) -> usize {
        self.ract[p][g].unwrap_or_else(|| panic!("{} ▷ {} is undefined", self.name(p), self.right.name(g)))
    }

    /// Left-category morphisms that can act on `p`.
    pub fn into_left(&self, p: usize) -> Vec<usize> {
        let a = self.elements[p].a;
        (0..self.left.len()).filter(|&f| self.left.cod(f) == a).collect()
    }

    /// Right-category morphisms that can act on `p`.
    pub fn out_of_right(&self, p: usize) -> Vec<usize> {
        let b = self.elements[p].b;
        (0..self.right.len()).filter(|&g| self.right.dom(g) == b).collect()
    }

    /// Table shape and typing, then every profunctor law.
    pub fn check(&self) -> Result<(), Counterexample> {
        let (l, r) = (&self.left, &self.right);
        let n = self.len();
        if self.lact.len() != l.len() || self.lact.iter().any(|row| row.len() != n) {
            return Err(Counterexample::new("left action table shape", &[]));
        }
        if self.ract.len() != n || self.ract.iter().any(|row| row.len() != r.len()) {
            return Err(Counterexample::new("right action table shape", &[]));
        }
        for p in 0..n {
            let e = &self.elements[p];
            if e.a >= l.objects.len() || e.b >= r.objects.len() {
                return Err(Counterexample::new("element endpoints", &[&e.name]));
            }
            for f in 0..l.len() {
                let typed = match self.lact[f][p] {
                    Some(q) if l.cod(f) == e.a => {
                        q < n && self.elements[q].a == l.dom(f) && self.elements[q].b == e.b
                    }
                    None => l.cod(f) != e.a,
                    Some(_) => false,
                };
                if !typed {
                    return Err(Counterexample::new("left action typing", &[l.name(f), &e.name]));
                }
            }
            for g in 0..r.len() {
                let typed = match self.ract[p][g] {
                    Some(q) if r.dom(g) == e.b => {
                        q < n && self.elements[q].a == e.a && self.elements[q].b == r.cod(g)
                    }
                    None => r.dom(g) != e.b,
                    Some(_) => false,
                };
                if !typed {
                    return Err(Counterexample::new("right action typing", &[&e.name, r.name(g)]));
                }
            }
        }
        for p in 0..n {
            let e = &self.elements[p];
            if self.act_left(l.id(e.a), p) != p {
                return Err(Counterexample::new("left identity", &[l.name(l.id(e.a)), &e.name]));
            }
            if self.act_right(p, r.id(e.b)) != p {
                return Err(Counterexample::new("right identity", &[&e.name, r.name(r.id(e.b))]));
            }
            for f in self.into_left(p) {
                for g in self.out_of_right(p) {
                    if self.act_right(self.act_left(f, p), g) != self.act_left(f, self.act_right(p, g)) {
                        return Err(Counterexample::new("compatibility", &[l.name(f), &e.name, r.name(g)]));
                    }
                }
                for f0 in (0..l.len()).filter(|&f0| l.cod(f0) == l.dom(f)) {
                    if self.act_left(f0, self.act_left(f, p)) != self.act_left(l.then(f0, f), p) {
                        return Err(Counterexample::new("left action composition", &[l.name(f0), l.name(f), &e.name]));
                    }
                }
            }
            for g in self.out_of_right(p) {
                for g1 in r.after(g) {
                    if self.act_right(self.act_right(p, g), g1) != self.act_right(p, r.then(g, g1)) {
                        return Err(Counterexample::new("right action composition", &[&e.name, r.name(g), r.name(g1)]));
                    }
                }
            }
        }
        Ok(())
    }

    /// The identity profunctor: `C(a, b)` acted on by composition.
    pub fn hom(c: &FiniteCategory) -> Self {
        let elements =
            c.morphisms.iter().map(|m| Element { name: m.name.clone(), a: m.dom, b: m.cod }).collect::<Vec<_>>();
        let lact = (0..c.len()).map(|f| (0..c.len()).map(|p| c.try_then(f, p)).collect()).collect();
        let ract = (0..c.len()).map(|p| (0..c.len()).map(|g| c.try_then(p, g)).collect()).collect();
        FiniteProfunctor { left: c.clone(), right: c.clone(), elements, lact, ract }
    }

    pub fn empty(left: &FiniteCategory, right: &FiniteCategory) -> Self {
        FiniteProfunctor {
            left: left.clone(),
            right: right.clone(),
            elements: vec![],
            lact: vec![vec![]; left.len()],
            ract: vec![],
        }
    }

    /// `P(F-, G-)` for functors `F: A' → A` and `G: B' → B`.
    pub fn restrict(&self, f: &FiniteFunctor, g: &FiniteFunctor) -> Self {
        assert_eq!(f.dst, self.left, "restriction functor lands in the wrong category");
        assert_eq!(g.dst, self.right, "restriction functor lands in the wrong category");
        let injective = |m: &[usize]| (0..m.len()).all(|i| !m[..i].contains(&m[i]));
        let plain = injective(&f.obj_map) && injective(&g.obj_map);
        let mut elements = Vec::new();
        let mut index = HashMap::new();
        for a in 0..f.src.objects.len() {
            for b in 0..g.src.objects.len() {
                for p in self.at(f.obj_map[a], g.obj_map[b]) {
                    index.insert((a, b, p), elements.len());
                    let name = if plain {
                        self.name(p).to_string()
                    } else {
                        format!("{}@{},{}", self.name(p), f.src.objects[a], g.src.objects[b])
                    };
                    elements.push(Element { name, a, b });
                }
            }
        }
        let mut lact = vec![vec![None; elements.len()]; f.src.len()];
        let mut ract = vec![vec![None; g.src.len()]; elements.len()];
        let originals: Vec<usize> = {
            let mut v = vec![0; elements.len()];
            for (&(_, _, p), &i) in &index {
                v[i] = p;
            }
            v
        };
        for (i, e) in elements.iter().enumerate() {
            let p = originals[i];
            for h in (0..f.src.len()).filter(|&h| f.src.cod(h) == e.a) {
                let q = self.act_left(f.mor_map[h], p);
                lact[h][i] = index.get(&(f.src.dom(h), e.b, q)).copied();
            }
            for h in (0..g.src.len()).filter(|&h| g.src.dom(h) == e.b) {
                let q = self.act_right(p, g.mor_map[h]);
                ract[i][h] = index.get(&(e.a, g.src.cod(h), q)).copied();
            }
        }
        FiniteProfunctor { left: f.src.clone(), right: g.src.clone(), elements, lact, ract }
    }

    /// `C(X, Y) × M`, acted on through the first component.
    pub fn writer(c: &FiniteCategory, m: &FiniteMonoid) -> Self {
        let k = m.len();
        let elements = (0..c.len() * k)
            .map(|i| {
                let (f, x) = (i / k, i % k);
                Element { name: format!("({},{})", c.name(f), m.name(x)), a: c.dom(f), b: c.cod(f) }
            })
            .collect::<Vec<_>>();
        let n = elements.len();
        let lact = (0..c.len())
            .map(|g| (0..n).map(|i| c.try_then(g, i / k).map(|h| h * k + i % k)).collect())
            .collect();
        let ract = (0..n)
            .map(|i| (0..c.len()).map(|g| c.try_then(i / k, g).map(|h| h * k + i % k)).collect())
            .collect();
        FiniteProfunctor { left: c.clone(), right: c.clone(), elements, lact, ract }
    }
}

/// Writer arrows `X → M × Y` between finite sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WriterFunctions {
    pub base: FiniteCategory,
    pub monoid: FiniteMonoid,
    pub sizes: Vec<usize>,
    /// Per base morphism, its values.
    pub base_values: Vec<Vec<usize>>,
    /// Per element, the value `(m, y)` at each point of the domain.
    pub values: Vec<Vec<(usize, usize)>>,
    pub prof: FiniteProfunctor,
}

impl WriterFunctions {
    pub fn new(carriers: &[(&str, usize)], m: &FiniteMonoid) -> Self {
        let base = FiniteCategory::functions(carriers);
        let base_values: Vec<Vec<usize>> = carriers
            .iter()
            .flat_map(|&(_, xs)| carriers.iter().flat_map(move |&(_, ys)| all_functions(xs, ys)))
            .collect();
        let sizes: Vec<usize> = carriers.iter().map(|c| c.1).collect();
        let mut elements = Vec::new();
        let mut values = Vec::new();
        for (x, &(xn, xs)) in carriers.iter().enumerate() {
            for (y, &(yn, ys)) in carriers.iter().enumerate() {
                for f in all_functions(xs, m.len() * ys) {
                    let v: Vec<(usize, usize)> = f.iter().map(|&c| (c / ys, c % ys)).collect();
                    let shown: Vec<String> = v.iter().map(|(w, y)| format!("{}{}", m.name(*w), y)).collect();
                    elements.push(Element { name: format!("{xn}>{yn}:{}", shown.join(" ")), a: x, b: y });
                    values.push(v);
                }
            }
        }
        let find = |a: usize, b: usize, v: &[(usize, usize)]| {
            (0..elements.len()).find(|&q| elements[q].a == a && elements[q].b == b && values[q] == v)
        };
        let n = elements.len();
        let mut lact = vec![vec![None; n]; base.len()];
        let mut ract = vec![vec![None; base.len()]; n];
        for p in 0..n {
            for f in (0..base.len()).filter(|&f| base.cod(f) == elements[p].a) {
                let v: Vec<(usize, usize)> = base_values[f].iter().map(|&x| values[p][x]).collect();
                lact[f][p] = find(base.dom(f), elements[p].b, &v);
            }
            for g in (0..base.len()).filter(|&g| base.dom(g) == elements[p].b) {
                let v: Vec<(usize, usize)> = values[p].iter().map(|&(w, y)| (w, base_values[g][y])).collect();
                ract[p][g] = find(elements[p].a, base.cod(g), &v);
            }
        }
        let prof = FiniteProfunctor { left: base.clone(), right: base.clone(), elements, lact, ract };
        WriterFunctions { base, monoid: m.clone(), sizes, base_values, values, prof }
    }

    pub fn find(&self, a: usize, b: usize, v: &[(usize, usize)]) -> Option<usize> {
        (0..self.prof.len()).find(|&q| {
            self.prof.elements[q].a == a && self.prof.elements[q].b == b && self.values[q] == v
        })
    }
}

/// The quotient of matching pairs `(p, q)` by `(p ▷ g, q) ~ (p, g ◁ q)`.
#[derive(Debug, Clone)]
pub struct Composite {
    pub prof: FiniteProfunctor,
    pub pairs: Vec<(usize, usize)>,
    /// Class of each pair, as an element of `prof`.
    pub class: Vec<usize>,
    index: HashMap<(usize, usize), usize>,
}

impl Composite {
    pub fn class_of(&self, p: usize, q: usize) -> Option<usize> {
        self.index.get(&(p, q)).map(|&i| self.class[i])
    }

    /// Some representative pair of an element.
    pub fn representative(&self, c: usize) -> (usize, usize) {
        let i = self.class.iter().position(|&k| k == c).expect("every class has a pair");
        self.pairs[i]
    }
}

fn find_root(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// `P ⋄ Q`. Fails when the actions on representatives disagree within a class,
/// which can only happen for inputs that are not profunctors.
pub fn compose_profunctors(p: &FiniteProfunctor, q: &FiniteProfunctor) -> Result<Composite, Counterexample> {
    assert_eq!(p.right, q.left, "profunctors do not share a middle category");
    let mid = &p.right;
    let mut pairs = Vec::new();
    let mut index = HashMap::new();
    for x in 0..p.len() {
        for y in 0..q.len() {
            if p.elements[x].b == q.elements[y].a {
                index.insert((x, y), pairs.len());
                pairs.push((x, y));
            }
        }
    }
    let mut parent: Vec<usize> = (0..pairs.len()).collect();
    for x in 0..p.len() {
        for g in p.out_of_right(x) {
            let xg = p.act_right(x, g);
            for y in (0..q.len()).filter(|&y| q.elements[y].a == mid.cod(g)) {
                let gy = q.act_left(g, y);
                let (i, j) = (index[&(xg, y)], index[&(x, gy)]);
                let (ri, rj) = (find_root(&mut parent, i), find_root(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    // classes numbered in order of their first pair
    let mut root_class = HashMap::new();
    let mut class = Vec::with_capacity(pairs.len());
    let mut elements = Vec::new();
    for (i, &(x, y)) in pairs.iter().enumerate() {
        let r = find_root(&mut parent, i);
        let c = *root_class.entry(r).or_insert_with(|| {
            elements.push(Element {
                name: format!("[{}|{}]", p.name(x), q.name(y)),
                a: p.elements[x].a,
                b: q.elements[y].b,
            });
            elements.len() - 1
        });
        class.push(c);
    }
    let n = elements.len();
    let mut lact: Vec<Vec<Option<usize>>> = vec![vec![None; n]; p.left.len()];
    let mut ract: Vec<Vec<Option<usize>>> = vec![vec![None; q.right.len()]; n];
    for (i, &(x, y)) in pairs.iter().enumerate() {
        let c = class[i];
        for f in p.into_left(x) {
            let image = class[index[&(p.act_left(f, x), y)]];
            match lact[f][c] {
                Some(prev) if prev != image => {
                    return Err(Counterexample::new("left action on classes", &[p.left.name(f), &elements[c].name]))
                }
                _ => lact[f][c] = Some(image),
            }
        }
        for g in q.out_of_right(y) {
            let image = class[index[&(x, q.act_right(y, g))]];
            match ract[c][g] {
                Some(prev) if prev != image => {
                    return Err(Counterexample::new("right action on classes", &[&elements[c].name, q.right.name(g)]))
                }
                _ => ract[c][g] = Some(image),
            }
        }
    }
    let prof = FiniteProfunctor { left: p.left.clone(), right: q.right.clone(), elements, lact, ract };
    Ok(Composite { prof, pairs, class, index })
}

/// Checks that `map` is a bijection `P → Q` that preserves endpoints and
/// commutes with both actions.
pub fn check_isomorphism(p: &FiniteProfunctor, q: &FiniteProfunctor, map: &[usize]) -> Result<(), Counterexample> {
    if p.left != q.left || p.right != q.right {
        return Err(Counterexample::new("isomorphism between different categories", &[]));
    }
    if map.len() != p.len() || p.len() != q.len() {
        return Err(Counterexample::new("isomorphism cardinality", &[]));
    }
    let mut hit = vec![false; q.len()];
    for (x, &y) in map.iter().enumerate() {
        if y >= q.len() || hit[y] {
            return Err(Counterexample::new("isomorphism injectivity", &[p.name(x)]));
        }
        hit[y] = true;
        if (p.elements[x].a, p.elements[x].b) != (q.elements[y].a, q.elements[y].b) {
            return Err(Counterexample::new("isomorphism endpoints", &[p.name(x), q.name(y)]));
        }
        for f in p.into_left(x) {
            if map[p.act_left(f, x)] != q.act_left(f, y) {
                return Err(Counterexample::new("isomorphism left naturality", &[p.left.name(f), p.name(x)]));
            }
        }
        for g in p.out_of_right(x) {
            if map[p.act_right(x, g)] != q.act_right(y, g) {
                return Err(Counterexample::new("isomorphism right naturality", &[p.name(x), p.right.name(g)]));
            }
        }
    }
    Ok(())
}

/// A map defined on pairs, read off on classes; fails if two representatives
/// of one class disagree.
fn descend(
    comp: &Composite,
    on_pair: impl Fn(usize, usize) -> usize,
) -> Result<Vec<usize>, Counterexample> {
    let mut out: Vec<Option<usize>> = vec![None; comp.prof.len()];
    for (i, &(x, y)) in comp.pairs.iter().enumerate() {
        let c = comp.class[i];
        let v = on_pair(x, y);
        match out[c] {
            Some(prev) if prev != v => return Err(Counterexample::new("map on classes", &[comp.prof.name(c)])),
            _ => out[c] = Some(v),
        }
    }
    Ok(out.into_iter().map(|v| v.expect("every class has a pair")).collect())
}

/// `Hom ⋄ P → P`, `[f | p] ↦ f ◁ p`, checked to be an isomorphism.
pub fn left_unitor(p: &FiniteProfunctor) -> Result<Vec<usize>, Counterexample> {
    let comp = compose_profunctors(&FiniteProfunctor::hom(&p.left), p)?;
    let map = descend(&comp, |f, x| p.act_left(f, x))?;
    check_isomorphism(&comp.prof, p, &map)?;
    Ok(map)
}

/// `P ⋄ Hom → P`, `[p | g] ↦ p ▷ g`, checked to be an isomorphism.
pub fn right_unitor(p: &FiniteProfunctor) -> Result<Vec<usize>, Counterexample> {
    let comp = compose_profunctors(p, &FiniteProfunctor::hom(&p.right))?;
    let map = descend(&comp, |x, g| p.act_right(x, g))?;
    check_isomorphism(&comp.prof, p, &map)?;
    Ok(map)
}

/// `(P ⋄ Q) ⋄ R → P ⋄ (Q ⋄ R)`, `[[p|q]|r] ↦ [p|[q|r]]`, checked to be an
/// isomorphism.
pub fn associator(
    p: &FiniteProfunctor,
    q: &FiniteProfunctor,
    r: &FiniteProfunctor,
) -> Result<Vec<usize>, Counterexample> {
    let pq = compose_profunctors(p, q)?;
    let qr = compose_profunctors(q, r)?;
    let left = compose_profunctors(&pq.prof, r)?;
    let right = compose_profunctors(p, &qr.prof)?;
    // every pair of the outer quotient is reached from some triple
    let mut out: Vec<Option<usize>> = vec![None; left.prof.len()];
    for (i, &(x, y)) in pq.pairs.iter().enumerate() {
        let c = pq.class[i];
        for z in (0..r.len()).filter(|&z| r.elements[z].a == q.elements[y].b) {
            let from = left.class_of(c, z).expect("matching pair");
            let to = right.class_of(x, qr.class_of(y, z).expect("matching pair")).expect("matching pair");
            match out[from] {
                Some(prev) if prev != to => {
                    return Err(Counterexample::new("associator on classes", &[left.prof.name(from)]))
                }
                _ => out[from] = Some(to),
            }
        }
    }
    let map: Vec<usize> = out
        .into_iter()
        .enumerate()
        .map(|(c, v)| v.ok_or_else(|| Counterexample::new("associator totality", &[left.prof.name(c)])))
        .collect::<Result<_, _>>()?;
    check_isomorphism(&left.prof, &right.prof, &map)?;
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::promonad::category::CategoryBuilder;

    fn idempotent() -> FiniteCategory {
        let mut b = CategoryBuilder::new(&["X"]);
        b.arrow("e", "X", "X").unwrap();
        b.composite("e", "e", "e").unwrap();
        b.build().unwrap()
    }

    #[test]
    fn hom_is_a_profunctor() {
        FiniteProfunctor::hom(&idempotent()).check().unwrap();
        FiniteProfunctor::hom(&FiniteCategory::functions(&[("1", 1), ("2", 2)])).check().unwrap();
    }

    #[test]
    fn broken_identity_action_is_caught() {
        let mut p = FiniteProfunctor::hom(&idempotent());
        // id ◁ id := e
        p.lact[0][0] = Some(1);
        let err = p.check().unwrap_err();
        assert_eq!(err.law, "left identity");
        assert_eq!(err.witness, vec!["id_X", "id_X"]);
    }

    #[test]
    fn writer_functions_are_a_profunctor() {
        let w = WriterFunctions::new(&[("1", 1), ("2", 2)], &FiniteMonoid::cyclic(2));
        // 1→1: 2, 1→2: 4, 2→1: 4, 2→2: 16
        assert_eq!(w.prof.len(), 26);
        w.prof.check().unwrap();
    }

    #[test]
    fn hom_hom_over_idempotent_has_two_classes() {
        let h = FiniteProfunctor::hom(&idempotent());
        let comp = compose_profunctors(&h, &h).unwrap();
        assert_eq!(comp.pairs.len(), 4);
        assert_eq!(comp.prof.len(), 2);
        let (id, e) = (0, 1);
        assert_eq!(comp.class_of(e, id), comp.class_of(id, e));
        assert_eq!(comp.class_of(e, e), comp.class_of(id, e));
        assert_ne!(comp.class_of(id, id), comp.class_of(e, e));
        comp.prof.check().unwrap();
    }

    #[test]
    fn hom_is_a_unit_for_writer() {
        let w = WriterFunctions::new(&[("1", 1), ("2", 2)], &FiniteMonoid::cyclic(2));
        let l = left_unitor(&w.prof).unwrap();
        assert_eq!(l.len(), w.prof.len());
        right_unitor(&w.prof).unwrap();
    }

    #[test]
    fn composing_with_empty_is_empty() {
        let c = idempotent();
        let e = FiniteProfunctor::empty(&c, &c);
        e.check().unwrap();
        let h = FiniteProfunctor::hom(&c);
        assert!(compose_profunctors(&h, &e).unwrap().prof.is_empty());
        assert!(compose_profunctors(&e, &h).unwrap().prof.is_empty());
    }

    #[test]
    fn associator_on_writers() {
        let c = FiniteCategory::from_monoid(&FiniteMonoid::cyclic(2));
        let w = FiniteProfunctor::writer(&c, &FiniteMonoid::cyclic(2));
        let h = FiniteProfunctor::hom(&c);
        associator(&w, &h, &w).unwrap();
        associator(&h, &w, &h).unwrap();
    }

    #[test]
    fn restriction_along_identity_is_unchanged() {
        let c = idempotent();
        let h = FiniteProfunctor::hom(&c);
        let id = FiniteFunctor::identity(&c);
        assert_eq!(h.restrict(&id, &id), h);
    }
}
