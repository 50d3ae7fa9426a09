//! The pure tensor `C ∗ D` of two finite promonads, as words of letters taken
//! from either side. Letters of one side commute past pure letters of the
//! other; effectful letters of different sides never commute.

pub mod pseudomonoid;

use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::BfsOutcome;
use crate::monoid::FiniteMonoid;
use crate::promonad::{Counterexample, FiniteCategory, FiniteFunctor, FinitePromonad, PromonadHom};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PtError {
    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),
    #[error("ill-typed word: {0}")]
    IllTyped(String),
    #[error("unknown name {0}")]
    UnknownName(String),
    #[error("cannot read word: {0}")]
    Syntax(String),
    #[error("incompatible pure parts: {0}")]
    IncompatiblePure(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// An element of one side, with the object of the other side frozen.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PTLetter {
    pub side: Side,
    pub morphism: usize,
    pub co_object: usize,
}

/// Objects are pairs `(x, y)` of a left-base and a right-base object.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PTWord {
    pub dom: (usize, usize),
    pub cod: (usize, usize),
    pub letters: Vec<PTLetter>,
}

impl PTWord {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

#[derive(Debug, Clone)]
struct SideTables {
    pure: Vec<bool>,
    identity: Vec<bool>,
    /// `p = q ▷ v` with `v` not an identity, as `(q, v)`.
    right_factors: Vec<Vec<(usize, usize)>>,
    /// `p = v ◁ q` with `v` not an identity, as `(v, q)`.
    left_factors: Vec<Vec<(usize, usize)>>,
}

impl SideTables {
    fn new(m: &FinitePromonad) -> Self {
        let c = m.base();
        let p = &m.prof;
        let mut pure = vec![false; m.len()];
        for &u in &m.unit {
            pure[u] = true;
        }
        let mut identity = vec![false; m.len()];
        for x in 0..c.objects.len() {
            identity[m.unit[c.id(x)]] = true;
        }
        let mut right_factors = vec![Vec::new(); m.len()];
        let mut left_factors = vec![Vec::new(); m.len()];
        for q in 0..m.len() {
            for v in p.out_of_right(q).into_iter().filter(|&v| !c.is_identity(v)) {
                right_factors[p.act_right(q, v)].push((q, v));
            }
            for v in p.into_left(q).into_iter().filter(|&v| !c.is_identity(v)) {
                left_factors[p.act_left(v, q)].push((v, q));
            }
        }
        SideTables { pure, identity, right_factors, left_factors }
    }
}

/// `C ∗ D` for promonads `C` over `V` and `D` over `W`.
#[derive(Debug, Clone)]
pub struct PureTensor {
    pub left: FinitePromonad,
    pub right: FinitePromonad,
    tables: [SideTables; 2],
}

impl PureTensor {
    pub fn new(left: FinitePromonad, right: FinitePromonad) -> Self {
        let tables = [SideTables::new(&left), SideTables::new(&right)];
        PureTensor { left, right, tables }
    }

    pub fn side(&self, s: Side) -> &FinitePromonad {
        match s {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    fn own_dom(&self, l: &PTLetter) -> usize {
        self.side(l.side).prof.elements[l.morphism].a
    }

    fn own_cod(&self, l: &PTLetter) -> usize {
        self.side(l.side).prof.elements[l.morphism].b
    }

    fn pair(s: Side, own: usize, co: usize) -> (usize, usize) {
        match s {
            Side::Left => (own, co),
            Side::Right => (co, own),
        }
    }

    pub fn letter_dom(&self, l: &PTLetter) -> (usize, usize) {
        Self::pair(l.side, self.own_dom(l), l.co_object)
    }

    pub fn letter_cod(&self, l: &PTLetter) -> (usize, usize) {
        Self::pair(l.side, self.own_cod(l), l.co_object)
    }

    pub fn is_pure(&self, l: &PTLetter) -> bool {
        self.tables[l.side.index()].pure[l.morphism]
    }

    /// Merges adjacent letters of one side with `⋆` and drops identities.
    fn merged(&self, letters: impl IntoIterator<Item = PTLetter>) -> Vec<PTLetter> {
        let mut out: Vec<PTLetter> = Vec::new();
        for l in letters {
            let mut l = l;
            if let Some(top) = out.pop_if(|top| top.side == l.side) {
                l = PTLetter { morphism: self.side(l.side).star(top.morphism, l.morphism), ..l };
            }
            if !self.tables[l.side.index()].identity[l.morphism] {
                out.push(l);
            }
        }
        out
    }

    fn close(&self, dom: (usize, usize), letters: Vec<PTLetter>) -> PTWord {
        let cod = letters.last().map_or(dom, |l| self.letter_cod(l));
        PTWord { dom, cod, letters }
    }

    /// Checks the typing chain and brings the letters into merged form.
    pub fn word(&self, dom: (usize, usize), letters: Vec<PTLetter>) -> Result<PTWord, PtError> {
        let mut at = dom;
        for l in &letters {
            if l.morphism >= self.side(l.side).len() {
                return Err(PtError::IllTyped(format!("letter {} is out of range", l.morphism)));
            }
            if self.letter_dom(l) != at {
                return Err(PtError::IllTyped(format!("{} does not start at {}", self.show_letter(l), self.show_object(at))));
            }
            at = self.letter_cod(l);
        }
        Ok(self.close(dom, self.merged(letters)))
    }

    pub fn identity(&self, at: (usize, usize)) -> PTWord {
        PTWord { dom: at, cod: at, letters: vec![] }
    }

    /// `pt_unit(v, w)`: the pure letters of `v` and `w`, `v` first.
    pub fn unit(&self, v: usize, w: usize) -> PTWord {
        let (vb, wb) = (self.left.base(), self.right.base());
        let letters = vec![
            PTLetter { side: Side::Left, morphism: self.left.unit[v], co_object: wb.dom(w) },
            PTLetter { side: Side::Right, morphism: self.right.unit[w], co_object: vb.cod(v) },
        ];
        self.close((vb.dom(v), wb.dom(w)), self.merged(letters))
    }

    /// Unit at a morphism of the product base, indexed `v * |W| + w`.
    pub fn unit_at(&self, vw: usize) -> PTWord {
        let nw = self.right.base().len();
        self.unit(vw / nw, vw % nw)
    }

    pub fn compose(&self, u: &PTWord, t: &PTWord) -> Result<PTWord, PtError> {
        if u.cod != t.dom {
            return Err(PtError::BoundaryMismatch(format!(
                "{} then {}",
                self.show_object(u.cod),
                self.show_object(t.dom)
            )));
        }
        let letters = self.merged(u.letters.iter().chain(&t.letters).cloned());
        Ok(self.close(u.dom, letters))
    }

    /// `L(f, w) = f_C ; w_W`.
    pub fn pt_l(&self, f: usize, w: usize) -> PTWord {
        let wb = self.right.base();
        let fe = &self.left.prof.elements[f];
        let letters = vec![
            PTLetter { side: Side::Left, morphism: f, co_object: wb.dom(w) },
            PTLetter { side: Side::Right, morphism: self.right.unit[w], co_object: fe.b },
        ];
        self.close((fe.a, wb.dom(w)), self.merged(letters))
    }

    /// `R(v, g) = v_V ; g_D`.
    pub fn pt_r(&self, v: usize, g: usize) -> PTWord {
        let vb = self.left.base();
        let ge = &self.right.prof.elements[g];
        let letters = vec![
            PTLetter { side: Side::Left, morphism: self.left.unit[v], co_object: ge.a },
            PTLetter { side: Side::Right, morphism: g, co_object: vb.cod(v) },
        ];
        self.close((vb.dom(v), ge.a), self.merged(letters))
    }

    /// Words one move away: swapping a pure letter with its neighbour, or
    /// sliding a pure factor from one letter across the next to the letter
    /// after, with the result merged again.
    pub fn neighbours(&self, u: &PTWord) -> Vec<PTWord> {
        let ls = &u.letters;
        let mut out = Vec::new();
        for i in 0..ls.len().saturating_sub(1) {
            let (a, b) = (&ls[i], &ls[i + 1]);
            if self.is_pure(a) || self.is_pure(b) {
                let b2 = PTLetter { co_object: self.own_dom(a), ..b.clone() };
                let a2 = PTLetter { co_object: self.own_cod(b), ..a.clone() };
                let mut v = ls.clone();
                v[i] = b2;
                v[i + 1] = a2;
                out.push(self.close(u.dom, self.merged(v)));
            }
        }
        for i in 0..ls.len().saturating_sub(2) {
            let (p, n, r) = (&ls[i], &ls[i + 1], &ls[i + 2]);
            let t = &self.tables[p.side.index()];
            let m = self.side(p.side);
            let base = m.base();
            for &(q, v) in &t.right_factors[p.morphism] {
                let mut w = ls.clone();
                w[i] = PTLetter { morphism: q, ..p.clone() };
                w[i + 1] = PTLetter { co_object: base.dom(v), ..n.clone() };
                w[i + 2] = PTLetter { morphism: m.prof.act_left(v, r.morphism), ..r.clone() };
                out.push(self.close(u.dom, self.merged(w)));
            }
            for &(v, q) in &t.left_factors[r.morphism] {
                let mut w = ls.clone();
                w[i] = PTLetter { morphism: m.prof.act_right(p.morphism, v), ..p.clone() };
                w[i + 1] = PTLetter { co_object: base.cod(v), ..n.clone() };
                w[i + 2] = PTLetter { morphism: q, ..r.clone() };
                out.push(self.close(u.dom, self.merged(w)));
            }
        }
        out
    }

    /// Everything reachable from `u` by moves, or `None` past `budget` words.
    pub fn closure(&self, u: &PTWord, budget: usize) -> Option<HashSet<PTWord>> {
        let mut seen = HashSet::from([u.clone()]);
        let mut queue = VecDeque::from([u.clone()]);
        while let Some(w) = queue.pop_front() {
            for n in self.neighbours(&w) {
                if seen.insert(n.clone()) {
                    if seen.len() > budget {
                        return None;
                    }
                    queue.push_back(n);
                }
            }
        }
        Some(seen)
    }

    /// Bidirectional search over the move graph with a shared visited map.
    pub fn equal(&self, u: &PTWord, t: &PTWord, budget: usize) -> BfsOutcome {
        if u.dom != t.dom || u.cod != t.cod {
            return BfsOutcome::Unequal;
        }
        if u == t {
            return BfsOutcome::Equal;
        }
        let mut origin: HashMap<PTWord, u8> = HashMap::from([(u.clone(), 0), (t.clone(), 1)]);
        let mut queues = [VecDeque::from([u.clone()]), VecDeque::from([t.clone()])];
        while !queues[0].is_empty() || !queues[1].is_empty() {
            for side in 0..2u8 {
                let Some(w) = queues[side as usize].pop_front() else { continue };
                for n in self.neighbours(&w) {
                    match origin.get(&n) {
                        Some(&o) if o != side => return BfsOutcome::Equal,
                        Some(_) => {}
                        None => {
                            if origin.len() >= budget {
                                return BfsOutcome::Inconclusive;
                            }
                            origin.insert(n.clone(), side);
                            queues[side as usize].push_back(n);
                        }
                    }
                }
            }
        }
        BfsOutcome::Unequal
    }

    /// Every merged word with at most `max_letters` letters, over all
    /// boundaries.
    pub fn words(&self, max_letters: usize) -> Vec<PTWord> {
        let (nv, nw) = (self.left.base().objects.len(), self.right.base().objects.len());
        let mut out = Vec::new();
        let mut frontier: Vec<PTWord> =
            (0..nv).flat_map(|x| (0..nw).map(move |y| (x, y))).map(|xy| self.identity(xy)).collect();
        for _ in 0..=max_letters {
            let mut next = Vec::new();
            for w in &frontier {
                if w.len() < max_letters {
                    for s in [Side::Left, Side::Right] {
                        if w.letters.last().is_some_and(|l| l.side == s) {
                            continue;
                        }
                        let (own, co) = match s {
                            Side::Left => (w.cod.0, w.cod.1),
                            Side::Right => (w.cod.1, w.cod.0),
                        };
                        let m = self.side(s);
                        for p in (0..m.len()).filter(|&p| m.prof.elements[p].a == own) {
                            if self.tables[s.index()].identity[p] {
                                continue;
                            }
                            let l = PTLetter { side: s, morphism: p, co_object: co };
                            let mut letters = w.letters.clone();
                            letters.push(l);
                            next.push(self.close(w.dom, letters));
                        }
                    }
                }
            }
            out.append(&mut frontier);
            frontier = next;
        }
        out
    }

    pub fn show_object(&self, (x, y): (usize, usize)) -> String {
        format!("({},{})", self.left.base().objects[x], self.right.base().objects[y])
    }

    pub fn show_letter(&self, l: &PTLetter) -> String {
        let (tag, co) = match l.side {
            Side::Left => ("L", &self.right.base().objects[l.co_object]),
            Side::Right => ("R", &self.left.base().objects[l.co_object]),
        };
        format!("{tag}({})@{co}", self.side(l.side).name(l.morphism))
    }

    /// `L(f)@Y ; R(g)@X`, or `id(X,Y)` for an empty word.
    pub fn show(&self, u: &PTWord) -> String {
        if u.is_empty() {
            let (x, y) = u.dom;
            return format!("id({},{})", self.left.base().objects[x], self.right.base().objects[y]);
        }
        u.letters.iter().map(|l| self.show_letter(l)).collect::<Vec<_>>().join(" ; ")
    }

    /// Reads the syntax of [`PureTensor::show`]. Letter names may contain
    /// parentheses, so the name runs to the last `)` before `@`.
    pub fn parse_word(&self, text: &str) -> Result<PTWord, PtError> {
        let text = text.trim();
        let (vb, wb) = (self.left.base(), self.right.base());
        let obj = |c: &FiniteCategory, name: &str| c.object(name.trim()).ok_or_else(|| PtError::UnknownName(name.trim().into()));
        if let Some(inner) = text.strip_prefix("id(").and_then(|r| r.strip_suffix(')')) {
            let (x, y) = inner.split_once(',').ok_or_else(|| PtError::Syntax(text.into()))?;
            return Ok(self.identity((obj(vb, x)?, obj(wb, y)?)));
        }
        let mut letters = Vec::new();
        for part in text.split(';') {
            let part = part.trim();
            let (head, co) = part.rsplit_once('@').ok_or_else(|| PtError::Syntax(part.into()))?;
            let (side, name) = if let Some(r) = head.strip_prefix("L(") {
                (Side::Left, r)
            } else if let Some(r) = head.strip_prefix("R(") {
                (Side::Right, r)
            } else {
                return Err(PtError::Syntax(part.into()));
            };
            let name = name.strip_suffix(')').ok_or_else(|| PtError::Syntax(part.into()))?;
            let m = self.side(side);
            let morphism = m.prof.element(name).ok_or_else(|| PtError::UnknownName(name.into()))?;
            let co_object = match side {
                Side::Left => obj(wb, co)?,
                Side::Right => obj(vb, co)?,
            };
            letters.push(PTLetter { side, morphism, co_object });
        }
        let dom = self.letter_dom(&letters[0]);
        self.word(dom, letters)
    }

    /// Promonad laws on the words with at most `max_letters` letters, with
    /// actions and units given by composing with unit words and equality
    /// decided by [`PureTensor::equal`]. Includes the check that
    /// multiplication respects single moves.
    pub fn check_promonad(&self, max_letters: usize, budget: usize) -> Result<(), Counterexample> {
        let words = self.words(max_letters);
        let short: Vec<&PTWord> = words.iter().filter(|w| w.len() <= max_letters / 2).collect();
        let single: Vec<&PTWord> = words.iter().filter(|w| w.len() <= 1).collect();
        let vw = self.left.base().product(self.right.base());
        let units: Vec<PTWord> = (0..vw.len()).map(|f| self.unit_at(f)).collect();
        let same = |a: &PTWord, b: &PTWord, law: &str, witness: &[&PTWord]| -> Result<(), Counterexample> {
            match self.equal(a, b, budget) {
                BfsOutcome::Equal => Ok(()),
                other => {
                    let shown: Vec<String> = witness.iter().map(|w| self.show(w)).collect();
                    let refs: Vec<&str> = shown.iter().map(String::as_str).collect();
                    let law = format!("{law} ({other:?})");
                    Err(Counterexample::new(&law, &refs))
                }
            }
        };
        let then = |a: &PTWord, b: &PTWord| self.compose(a, b).expect("composable by construction");
        for f in 0..vw.len() {
            for g in vw.after(f) {
                same(&units[vw.then(f, g)], &then(&units[f], &units[g]), "unit naturality", &[&units[f], &units[g]])?;
            }
        }
        let obj_index = |(x, y): (usize, usize)| x * self.right.base().objects.len() + y;
        for p in &words {
            let id = &units[vw.id(obj_index(p.dom))];
            same(&then(id, p), p, "left identity", &[p])?;
            for f in (0..vw.len()).filter(|&f| vw.cod(f) == obj_index(p.dom)) {
                for g in (0..vw.len()).filter(|&g| vw.dom(g) == obj_index(p.cod)) {
                    let lhs = then(&then(&units[f], p), &units[g]);
                    let rhs = then(&units[f], &then(p, &units[g]));
                    same(&lhs, &rhs, "compatibility", &[&units[f], p, &units[g]])?;
                }
            }
            for n in self.neighbours(p) {
                for t in single.iter().filter(|t| t.dom == p.cod) {
                    same(&then(p, t), &then(&n, t), "multiplication respects moves", &[p, &n, t])?;
                }
                for t in single.iter().filter(|t| t.cod == p.dom) {
                    same(&then(t, p), &then(t, &n), "multiplication respects moves", &[t, p, &n])?;
                }
            }
        }
        for p in &short {
            for f in (0..vw.len()).filter(|&f| vw.dom(f) == obj_index(p.cod)) {
                for q in short.iter().filter(|q| obj_index(q.dom) == vw.cod(f)) {
                    let lhs = then(p, &then(&units[f], q));
                    let rhs = then(&then(p, &units[f]), q);
                    same(&lhs, &rhs, "axiom iii", &[p, &units[f], q])?;
                }
            }
        }
        for p in &single {
            for q in single.iter().filter(|q| q.dom == p.cod) {
                for r in single.iter().filter(|r| r.dom == q.cod) {
                    same(&then(&then(p, q), r), &then(p, &then(q, r)), "associativity", &[p, q, r])?;
                }
            }
        }
        Ok(())
    }

    /// `L` and `R` preserve `⋆` and units, over their full source tables.
    pub fn check_inclusions(&self, budget: usize) -> Result<(), Counterexample> {
        let (v, w) = (self.left.base(), self.right.base());
        let cw = self.left.product(&FinitePromonad::identity(w));
        let vd = FinitePromonad::identity(v).product(&self.right);
        let nw = w.len();
        let nd = self.right.len();
        self.check_word_hom("L", &cw, |i| self.pt_l(i / nw, i % nw), budget)?;
        self.check_word_hom("R", &vd, |i| self.pt_r(i / nd, i % nd), budget)
    }

    fn check_word_hom(
        &self,
        name: &str,
        src: &FinitePromonad,
        map: impl Fn(usize) -> PTWord,
        budget: usize,
    ) -> Result<(), Counterexample> {
        let images: Vec<PTWord> = (0..src.len()).map(&map).collect();
        for x in 0..src.len() {
            for y in 0..src.len() {
                if let Some(z) = src.mult[x][y] {
                    let joined = self.compose(&images[x], &images[y]).expect("typed images");
                    if !self.equal(&images[z], &joined, budget).is_equal() {
                        return Err(Counterexample::new(&format!("{name} preserves ⋆"), &[src.name(x), src.name(y)]));
                    }
                }
            }
        }
        for f in 0..src.base().len() {
            if !self.equal(&images[src.unit[f]], &self.unit_at(f), budget).is_equal() {
                return Err(Counterexample::new(&format!("{name} preserves unit"), &[src.base().name(f)]));
            }
        }
        Ok(())
    }
}

/// `(A ∨ B)` for homs `A: C × W → E` and `B: V × D → E`.
#[derive(Debug, Clone)]
pub struct Cotuple<'a> {
    pt: &'a PureTensor,
    a: &'a PromonadHom,
    b: &'a PromonadHom,
}

impl<'a> Cotuple<'a> {
    /// Checks that `A` and `B` have the expected sources, a common target
    /// and agree on pure pairs.
    pub fn new(pt: &'a PureTensor, a: &'a PromonadHom, b: &'a PromonadHom) -> Result<Self, PtError> {
        let (v, w) = (pt.left.base(), pt.right.base());
        if a.src != pt.left.product(&FinitePromonad::identity(w)) {
            return Err(PtError::IncompatiblePure("A does not start at C × W".into()));
        }
        if b.src != FinitePromonad::identity(v).product(&pt.right) {
            return Err(PtError::IncompatiblePure("B does not start at V × D".into()));
        }
        if a.dst != b.dst {
            return Err(PtError::IncompatiblePure("A and B land in different promonads".into()));
        }
        if a.base.obj_map != b.base.obj_map || a.base.mor_map != b.base.mor_map {
            return Err(PtError::IncompatiblePure("A and B differ on the base".into()));
        }
        let (nw, nd) = (w.len(), pt.right.len());
        for vi in 0..v.len() {
            for wi in 0..w.len() {
                let from_a = a.map[pt.left.unit[vi] * nw + wi];
                let from_b = b.map[vi * nd + pt.right.unit[wi]];
                if from_a != from_b {
                    return Err(PtError::IncompatiblePure(format!(
                        "A({}, {}) is {} but B gives {}",
                        v.name(vi),
                        w.name(wi),
                        a.dst.name(from_a),
                        b.dst.name(from_b)
                    )));
                }
            }
        }
        Ok(Cotuple { pt, a, b })
    }

    fn letter(&self, l: &PTLetter) -> usize {
        let (v, w) = (self.pt.left.base(), self.pt.right.base());
        match l.side {
            Side::Left => self.a.map[l.morphism * w.len() + w.id(l.co_object)],
            Side::Right => self.b.map[v.id(l.co_object) * self.pt.right.len() + l.morphism],
        }
    }

    fn at(&self, (x, y): (usize, usize)) -> usize {
        let e = &self.a.dst;
        let object = self.a.base.obj_map[x * self.pt.right.base().objects.len() + y];
        e.unit[e.base().id(object)]
    }

    /// Each letter mapped by `A` or `B`, multiplied left to right.
    pub fn apply(&self, u: &PTWord) -> usize {
        let e = &self.a.dst;
        u.letters.iter().fold(self.at(u.dom), |acc, l| e.star(acc, self.letter(l)))
    }

    /// The same product folded from the right.
    pub fn apply_from_right(&self, u: &PTWord) -> usize {
        let e = &self.a.dst;
        u.letters.iter().rev().fold(self.at(u.cod), |acc, l| e.star(self.letter(l), acc))
    }
}

pub fn pt_cotuple(pt: &PureTensor, a: &PromonadHom, b: &PromonadHom, u: &PTWord) -> Result<usize, PtError> {
    Ok(Cotuple::new(pt, a, b)?.apply(u))
}

/// `(A ∨ B) ∘ L = A` and `(A ∨ B) ∘ R = B` over full tables; `A ∨ B` constant
/// on move classes and multiplicative on words up to `max_letters`; and every
/// hom in `others`, each of which agrees with `A` and `B` on the images of `L`
/// and `R`, agrees with `A ∨ B` on those words.
pub fn check_universal_property(
    pt: &PureTensor,
    a: &PromonadHom,
    b: &PromonadHom,
    max_letters: usize,
    budget: usize,
    others: &[&dyn Fn(&PTWord) -> usize],
) -> Result<(), Counterexample> {
    let cot = Cotuple::new(pt, a, b).map_err(|e| Counterexample::new("precondition", &[&e.to_string()]))?;
    let e = &a.dst;
    let (v, w) = (pt.left.base(), pt.right.base());
    let (nw, nd) = (w.len(), pt.right.len());
    for i in 0..a.src.len() {
        if cot.apply(&pt.pt_l(i / nw, i % nw)) != a.map[i] {
            return Err(Counterexample::new("(A ∨ B) ∘ L = A", &[a.src.name(i)]));
        }
    }
    for i in 0..b.src.len() {
        if cot.apply(&pt.pt_r(i / nd, i % nd)) != b.map[i] {
            return Err(Counterexample::new("(A ∨ B) ∘ R = B", &[b.src.name(i)]));
        }
    }
    let words = pt.words(max_letters);
    for u in &words {
        let value = cot.apply(u);
        let class = pt
            .closure(u, budget)
            .ok_or_else(|| Counterexample::new("closure within budget", &[&pt.show(u)]))?;
        if let Some(bad) = class.iter().find(|t| cot.apply(t) != value) {
            return Err(Counterexample::new("A ∨ B is constant on classes", &[&pt.show(u), &pt.show(bad)]));
        }
        if cot.apply_from_right(u) != value {
            return Err(Counterexample::new("uniqueness", &[&pt.show(u), "folded from the right"]));
        }
        for (k, h) in others.iter().enumerate() {
            if h(u) != value {
                return Err(Counterexample::new("uniqueness", &[&pt.show(u), &format!("hom {k}")]));
            }
        }
    }
    let half: Vec<&PTWord> = words.iter().filter(|u| 2 * u.len() <= max_letters).collect();
    for u in &half {
        for t in half.iter().filter(|t| t.dom == u.cod) {
            let joined = pt.compose(u, t).expect("composable");
            if cot.apply(&joined) != e.star(cot.apply(u), cot.apply(t)) {
                return Err(Counterexample::new("A ∨ B preserves ⋆", &[&pt.show(u), &pt.show(t)]));
            }
        }
    }
    let vw = v.product(w);
    for f in 0..vw.len() {
        if cot.apply(&pt.unit_at(f)) != e.unit[a.base.mor_map[f]] {
            return Err(Counterexample::new("A ∨ B preserves unit", &[vw.name(f)]));
        }
    }
    Ok(())
}

/// Writer promonads `C = V × M` and `D = W × N`, with `E` the writer over
/// `V × W` and `M × N`, and the homs `A(f, w) = (f, w, m, 1)` and
/// `B(v, g) = (v, g, 1, n)`.
#[derive(Debug, Clone)]
pub struct WriterInstance {
    pub tensor: PureTensor,
    pub target: FinitePromonad,
    pub a: PromonadHom,
    pub b: PromonadHom,
}

impl WriterInstance {
    pub fn new(v: &FiniteCategory, m: &FiniteMonoid, w: &FiniteCategory, n: &FiniteMonoid) -> Self {
        let c = FinitePromonad::writer(v, m);
        let d = FinitePromonad::writer(w, n);
        let mn = m.product(n);
        let e = FinitePromonad::writer(&v.product(w), &mn);
        let (nm, nn, nwm) = (m.len(), n.len(), w.len());
        let base = FiniteFunctor::identity(e.base());
        let cw = c.product(&FinitePromonad::identity(w));
        let a_map = (0..cw.len())
            .map(|i| {
                let (ci, wi) = (i / nwm, i % nwm);
                let (vi, mi) = (ci / nm, ci % nm);
                (vi * nwm + wi) * mn.len() + mi * nn + n.unit
            })
            .collect();
        let vd = FinitePromonad::identity(v).product(&d);
        let b_map = (0..vd.len())
            .map(|i| {
                let (vi, di) = (i / d.len(), i % d.len());
                let (wi, ni) = (di / nn, di % nn);
                (vi * nwm + wi) * mn.len() + m.unit * nn + ni
            })
            .collect();
        let a = PromonadHom { src: cw, dst: e.clone(), base: base.clone(), map: a_map };
        let b = PromonadHom { src: vd, dst: e.clone(), base, map: b_map };
        WriterInstance { tensor: PureTensor::new(c, d), target: e, a, b }
    }

    /// `B` precomposed with forgetting the left base component: a valid hom
    /// whose pure part clashes with `A` as soon as `V` is not discrete.
    pub fn clashing_b(&self) -> PromonadHom {
        let e = &self.target;
        let vw = e.base();
        let (v, w) = (self.tensor.left.base(), self.tensor.right.base());
        let nw = w.len();
        let k = e.len() / vw.len();
        let obj_map: Vec<usize> = (0..vw.objects.len()).collect();
        let forget = |f: usize| {
            let (vi, wi) = (f / nw, f % nw);
            v.id(v.dom(vi)) * nw + wi
        };
        let mor_map: Vec<usize> = (0..vw.len()).map(forget).collect();
        let base = FiniteFunctor { src: vw.clone(), dst: vw.clone(), obj_map, mor_map };
        let map = self.b.map.iter().map(|&x| forget(x / k) * k + x % k).collect();
        PromonadHom { src: self.b.src.clone(), dst: e.clone(), base, map }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BUDGET: usize = 100_000;

    fn z2() -> FiniteCategory {
        let mut c = FiniteCategory::from_monoid(&FiniteMonoid::cyclic(2));
        c.objects = vec!["X".into()];
        c.morphisms[1].name = "s".into();
        c.morphisms[0].name = "id".into();
        c
    }

    fn instance() -> WriterInstance {
        WriterInstance::new(&z2(), &FiniteMonoid::truncated_free(&["h", "w"], 2), &z2(), &FiniteMonoid::truncated_free(&["n"], 2))
    }

    #[test]
    fn units_and_merging() {
        let WriterInstance { tensor: pt, .. } = instance();
        assert!(pt.unit(0, 0).is_empty());
        assert_eq!(pt.unit(1, 0).len(), 1);
        assert_eq!(pt.unit(1, 1).len(), 2);
        let h = pt.parse_word("L((s,h))@X").unwrap();
        let w = pt.parse_word("L((s,w))@X").unwrap();
        let hw = pt.compose(&h, &w).unwrap();
        assert_eq!(pt.show(&hw), "L((id,hw))@X");
        let n = pt.parse_word("R((id,n))@X").unwrap();
        assert_eq!(pt.compose(&h, &n).unwrap().len(), 2);
        assert_eq!(pt.compose(&pt.identity(h.dom), &h).unwrap(), h);
    }

    #[test]
    fn pure_letters_commute_and_effects_do_not() {
        let WriterInstance { tensor: pt, .. } = instance();
        let s_then_n = pt.parse_word("L((s,ε))@X ; R((id,n))@X").unwrap();
        let n_then_s = pt.parse_word("R((id,n))@X ; L((s,ε))@X").unwrap();
        assert_eq!(pt.equal(&s_then_n, &n_then_s, BUDGET), BfsOutcome::Equal);
        let h_then_n = pt.parse_word("L((id,h))@X ; R((id,n))@X").unwrap();
        let n_then_h = pt.parse_word("R((id,n))@X ; L((id,h))@X").unwrap();
        assert_eq!(pt.equal(&h_then_n, &n_then_h, BUDGET), BfsOutcome::Unequal);
        assert_eq!(pt.equal(&h_then_n, &h_then_n, BUDGET), BfsOutcome::Equal);
    }

    #[test]
    fn pure_factor_slides_between_letters() {
        let WriterInstance { tensor: pt, .. } = instance();
        // (s,h) n (id,w) = (id,h) n (s,w): the s factor crosses n
        let u = pt.parse_word("L((s,h))@X ; R((id,n))@X ; L((id,w))@X").unwrap();
        let t = pt.parse_word("L((id,h))@X ; R((id,n))@X ; L((s,w))@X").unwrap();
        assert_eq!(pt.equal(&u, &t, BUDGET), BfsOutcome::Equal);
        let t2 = pt.parse_word("L((id,w))@X ; R((id,n))@X ; L((s,h))@X").unwrap();
        assert_eq!(pt.equal(&u, &t2, BUDGET), BfsOutcome::Unequal);
    }

    #[test]
    fn inclusions_are_homs() {
        instance().tensor.check_inclusions(BUDGET).unwrap();
    }

    #[test]
    fn cotuple_of_writers() {
        let inst = instance();
        let pt = &inst.tensor;
        let u = pt.parse_word("L((id,h))@X ; R((id,n))@X").unwrap();
        let value = pt_cotuple(pt, &inst.a, &inst.b, &u).unwrap();
        assert_eq!(inst.target.name(value), "((id,id),(h,n))");
        let id = pt.identity((0, 0));
        let e_unit = inst.target.unit[inst.target.base().id(0)];
        assert_eq!(pt_cotuple(pt, &inst.a, &inst.b, &id).unwrap(), e_unit);
        inst.a.check().unwrap();
        inst.b.check().unwrap();
    }

    #[test]
    fn universal_property_on_short_words() {
        let inst = instance();
        check_universal_property(&inst.tensor, &inst.a, &inst.b, 2, BUDGET, &[]).unwrap();
        check_universal_property(&inst.tensor, &inst.a, &inst.b, 0, BUDGET, &[]).unwrap();
    }

    #[test]
    fn clashing_pure_parts_are_reported() {
        let inst = instance();
        let b = inst.clashing_b();
        b.check().unwrap();
        assert!(matches!(Cotuple::new(&inst.tensor, &inst.a, &b), Err(PtError::IncompatiblePure(_))));
        let err = check_universal_property(&inst.tensor, &inst.a, &b, 2, BUDGET, &[]).unwrap_err();
        assert_eq!(err.law, "precondition");
    }

    #[test]
    fn promonad_laws_on_short_words() {
        let small = WriterInstance::new(&z2(), &FiniteMonoid::cyclic(2), &z2(), &FiniteMonoid::truncated_free(&["n"], 1));
        small.tensor.check_promonad(2, BUDGET).unwrap();
    }

    #[test]
    fn word_syntax_round_trips() {
        let WriterInstance { tensor: pt, .. } = instance();
        for u in pt.words(2) {
            assert_eq!(pt.parse_word(&pt.show(&u)).unwrap(), u);
        }
        assert!(matches!(pt.parse_word("L((id,q))@X"), Err(PtError::UnknownName(_))));
        assert!(matches!(pt.parse_word("Q(x)@X"), Err(PtError::Syntax(_))));
    }
}
