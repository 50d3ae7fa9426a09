//! Promonads over finite categories, their Kleisli categories, and the
//! correspondence with identity-on-objects functors.

pub mod category;
pub mod profunctor;
mod spec;

use thiserror::Error;

pub use category::{CategoryBuilder, CategorySpec, FiniteCategory, FiniteFunctor, Morphism};
pub use profunctor::{
    associator, check_isomorphism, compose_profunctors, left_unitor, right_unitor, Composite, Counterexample, Element,
    FiniteProfunctor, WriterFunctions,
};
pub use spec::{ElementSpec, FunctorSpec, PromonadSpec};

use crate::monoid::{FiniteMonoid, MonoidError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PromonadError {
    #[error("invalid category: {0}")]
    InvalidCategory(String),
    #[error("invalid functor: {0}")]
    InvalidFunctor(String),
    #[error("unknown name {0}")]
    UnknownName(String),
    #[error("duplicate name {0}")]
    DuplicateName(String),
    #[error("functor is not identity on objects")]
    NotIdentityOnObjects,
    #[error("{0}")]
    Law(Counterexample),
    #[error(transparent)]
    Monoid(#[from] MonoidError),
    #[error("malformed promonad file: {0}")]
    Format(String),
}

impl From<Counterexample> for PromonadError {
    fn from(c: Counterexample) -> Self {
        PromonadError::Law(c)
    }
}

/// An endo-profunctor on its base with `unit: C(x, y) → P(x, y)` and
/// `mult[p][q] = p ⋆ q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePromonad {
    pub prof: FiniteProfunctor,
    pub unit: Vec<usize>,
    pub mult: Vec<Vec<Option<usize>>>,
}

impl FinitePromonad {
    pub fn base(&self) -> &FiniteCategory {
        &self.prof.left
    }

    pub fn len(&self) -> usize {
        self.prof.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prof.is_empty()
    }

    pub fn name(&self, p: usize) -> &str {
        self.prof.name(p)
    }

    /// `p ⋆ q`. Panics when the pair does not match.
    pub fn star(&self, p: usize, q: usize) -> usize {
        self.mult[p][q].unwrap_or_else(|| panic!("{} ⋆ {} is undefined", self.name(p), self.name(q)))
    }

    fn after(&self, p: usize) -> Vec<usize> {
        let y = self.prof.elements[p].b;
        (0..self.len()).filter(|&q| self.prof.elements[q].a == y).collect()
    }

    /// Profunctor laws, typing of unit and multiplication, the four axioms,
    /// and naturality of the unit.
    pub fn check(&self) -> Result<(), Counterexample> {
        let c = self.base();
        let p = &self.prof;
        if p.left != p.right {
            return Err(Counterexample::new("endo-profunctor", &[]));
        }
        p.check()?;
        let n = self.len();
        if self.unit.len() != c.len() {
            return Err(Counterexample::new("unit table shape", &[]));
        }
        for f in 0..c.len() {
            let u = self.unit[f];
            if u >= n || (p.elements[u].a, p.elements[u].b) != (c.dom(f), c.cod(f)) {
                return Err(Counterexample::new("unit typing", &[c.name(f)]));
            }
        }
        if self.mult.len() != n || self.mult.iter().any(|row| row.len() != n) {
            return Err(Counterexample::new("multiplication table shape", &[]));
        }
        for x in 0..n {
            for y in 0..n {
                let (ex, ey) = (&p.elements[x], &p.elements[y]);
                let typed = match self.mult[x][y] {
                    Some(z) if ex.b == ey.a => z < n && p.elements[z].a == ex.a && p.elements[z].b == ey.b,
                    None => ex.b != ey.a,
                    Some(_) => false,
                };
                if !typed {
                    return Err(Counterexample::new("multiplication typing", &[&ex.name, &ey.name]));
                }
            }
        }
        for x in 0..n {
            for f in p.into_left(x) {
                if self.star(self.unit[f], x) != p.act_left(f, x) {
                    return Err(Counterexample::new("axiom i: unit(f) ⋆ p = f ◁ p", &[c.name(f), p.name(x)]));
                }
            }
            for g in p.out_of_right(x) {
                if self.star(x, self.unit[g]) != p.act_right(x, g) {
                    return Err(Counterexample::new("axiom ii: p ⋆ unit(g) = p ▷ g", &[p.name(x), c.name(g)]));
                }
                let y_side = c.cod(g);
                for z in (0..n).filter(|&z| p.elements[z].a == y_side) {
                    if self.star(x, p.act_left(g, z)) != self.star(p.act_right(x, g), z) {
                        return Err(Counterexample::new(
                            "axiom iii: p ⋆ (f ◁ q) = (p ▷ f) ⋆ q",
                            &[p.name(x), c.name(g), p.name(z)],
                        ));
                    }
                }
            }
            for y in self.after(x) {
                let xy = self.star(x, y);
                for z in self.after(y) {
                    if self.star(xy, z) != self.star(x, self.star(y, z)) {
                        return Err(Counterexample::new(
                            "axiom iv: associativity",
                            &[p.name(x), p.name(y), p.name(z)],
                        ));
                    }
                }
            }
        }
        for f in 0..c.len() {
            for g in c.after(f) {
                if self.unit[c.then(f, g)] != self.star(self.unit[f], self.unit[g]) {
                    return Err(Counterexample::new("unit naturality", &[c.name(f), c.name(g)]));
                }
            }
        }
        Ok(())
    }

    /// Homs `C(x, y)`, unit the identity, multiplication composition.
    pub fn identity(c: &FiniteCategory) -> Self {
        FinitePromonad {
            prof: FiniteProfunctor::hom(c),
            unit: (0..c.len()).collect(),
            mult: c.compose.clone(),
        }
    }

    /// `C(x, y) × M` with `(f, m) ⋆ (g, n) = (f ; g, m · n)`.
    pub fn writer(c: &FiniteCategory, m: &FiniteMonoid) -> Self {
        let prof = FiniteProfunctor::writer(c, m);
        let k = m.len();
        let unit = (0..c.len()).map(|f| f * k + m.unit).collect();
        let n = prof.len();
        let mult = (0..n)
            .map(|x| (0..n).map(|y| c.try_then(x / k, y / k).map(|h| h * k + m.mul(x % k, y % k))).collect())
            .collect();
        FinitePromonad { prof, unit, mult }
    }

    /// Functions `X → M × Y` between finite sets, multiplying the outputs.
    pub fn writer_functions(carriers: &[(&str, usize)], m: &FiniteMonoid) -> Self {
        let w = WriterFunctions::new(carriers, m);
        let unit = (0..w.base.len())
            .map(|f| {
                let v: Vec<(usize, usize)> = w.base_values[f].iter().map(|&y| (m.unit, y)).collect();
                w.find(w.base.dom(f), w.base.cod(f), &v).expect("unit lands in the table")
            })
            .collect();
        let n = w.prof.len();
        let mut mult = vec![vec![None; n]; n];
        for (x, row) in mult.iter_mut().enumerate() {
            for y in (0..n).filter(|&y| w.prof.elements[y].a == w.prof.elements[x].b) {
                let v: Vec<(usize, usize)> = w.values[x]
                    .iter()
                    .map(|&(a, mid)| {
                        let (b, out) = w.values[y][mid];
                        (m.mul(a, b), out)
                    })
                    .collect();
                row[y] = w.find(w.prof.elements[x].a, w.prof.elements[y].b, &v);
            }
        }
        FinitePromonad { prof: w.prof, unit, mult }
    }

    /// Componentwise, over the product base; element `(p, q)` is
    /// `p * |Q| + q`.
    pub fn product(&self, other: &FinitePromonad) -> Self {
        let (a, b) = (self.base(), other.base());
        let base = a.product(b);
        let (no, nq, nb) = (b.objects.len(), other.len(), b.len());
        let (p, q) = (&self.prof, &other.prof);
        let elements: Vec<Element> = (0..self.len() * nq)
            .map(|i| {
                let (x, y) = (&p.elements[i / nq], &q.elements[i % nq]);
                Element { name: format!("({},{})", x.name, y.name), a: x.a * no + y.a, b: x.b * no + y.b }
            })
            .collect();
        let n = elements.len();
        let pair = |x: Option<usize>, y: Option<usize>| Some(x? * nq + y?);
        let lact = (0..base.len())
            .map(|f| (0..n).map(|i| pair(p.lact[f / nb][i / nq], q.lact[f % nb][i % nq])).collect())
            .collect();
        let ract = (0..n)
            .map(|i| (0..base.len()).map(|g| pair(p.ract[i / nq][g / nb], q.ract[i % nq][g % nb])).collect())
            .collect();
        let unit = (0..base.len()).map(|f| self.unit[f / nb] * nq + other.unit[f % nb]).collect();
        let mult = (0..n)
            .map(|i| (0..n).map(|j| pair(self.mult[i / nq][j / nq], other.mult[i % nq][j % nq])).collect())
            .collect();
        let prof = FiniteProfunctor { left: base.clone(), right: base, elements, lact, ract };
        FinitePromonad { prof, unit, mult }
    }

    /// Homs of the promonad as a category, and the unit as a functor from
    /// the base.
    pub fn kleisli(&self) -> Result<(FiniteCategory, FiniteFunctor), PromonadError> {
        self.check()?;
        let c = self.base();
        let morphisms = self
            .prof
            .elements
            .iter()
            .map(|e| Morphism { name: e.name.clone(), dom: e.a, cod: e.b })
            .collect();
        let identities = (0..c.objects.len()).map(|x| self.unit[c.id(x)]).collect();
        let k = FiniteCategory::new(c.objects.clone(), morphisms, identities, self.mult.clone())?;
        let j = FiniteFunctor::new(c.clone(), k.clone(), (0..c.objects.len()).collect(), self.unit.clone())?;
        Ok((k, j))
    }

    /// `D(i-, i-)`, acted on through `i`, with multiplication in `D`.
    pub fn from_functor(i: &FiniteFunctor) -> Result<Self, PromonadError> {
        i.check().map_err(PromonadError::InvalidFunctor)?;
        if !i.is_identity_on_objects() {
            return Err(PromonadError::NotIdentityOnObjects);
        }
        let (c, d) = (&i.src, &i.dst);
        let elements = d.morphisms.iter().map(|m| Element { name: m.name.clone(), a: m.dom, b: m.cod }).collect();
        let lact = (0..c.len()).map(|f| (0..d.len()).map(|p| d.try_then(i.mor_map[f], p)).collect()).collect();
        let ract = (0..d.len()).map(|p| (0..c.len()).map(|g| d.try_then(p, i.mor_map[g])).collect()).collect();
        let prof = FiniteProfunctor { left: c.clone(), right: c.clone(), elements, lact, ract };
        Ok(FinitePromonad { prof, unit: i.mor_map.clone(), mult: d.compose.clone() })
    }
}

/// A base functor together with a map of elements `P(x, y) → Q(F0 x, F0 y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromonadHom {
    pub src: FinitePromonad,
    pub dst: FinitePromonad,
    pub base: FiniteFunctor,
    pub map: Vec<usize>,
}

impl PromonadHom {
    pub fn identity(m: &FinitePromonad) -> Self {
        PromonadHom {
            src: m.clone(),
            dst: m.clone(),
            base: FiniteFunctor::identity(m.base()),
            map: (0..m.len()).collect(),
        }
    }

    /// The hom of writer promonads over `c` induced by `phi: M → N`.
    pub fn from_monoid_map(c: &FiniteCategory, m: &FiniteMonoid, n: &FiniteMonoid, phi: &[usize]) -> Self {
        let src = FinitePromonad::writer(c, m);
        let dst = FinitePromonad::writer(c, n);
        let (k, l) = (m.len(), n.len());
        let map = (0..src.len()).map(|x| (x / k) * l + phi[x % k]).collect();
        PromonadHom { src, dst, base: FiniteFunctor::identity(c), map }
    }

    /// Preservation of `⋆` and units, then the same data re-checked as a
    /// functor of Kleisli categories commuting with both inclusions.
    pub fn check(&self) -> Result<(), Counterexample> {
        let (p, q, f0) = (&self.src, &self.dst, &self.base);
        if f0.src != *p.base() || f0.dst != *q.base() {
            return Err(Counterexample::new("base functor endpoints", &[]));
        }
        f0.check().map_err(|m| Counterexample::new("base functor", &[&m]))?;
        if self.map.len() != p.len() {
            return Err(Counterexample::new("element map shape", &[]));
        }
        for x in 0..p.len() {
            let (e, y) = (&p.prof.elements[x], self.map[x]);
            if y >= q.len() || (q.prof.elements[y].a, q.prof.elements[y].b) != (f0.obj_map[e.a], f0.obj_map[e.b]) {
                return Err(Counterexample::new("element map typing", &[&e.name]));
            }
        }
        for x in 0..p.len() {
            for y in p.after(x) {
                if self.map[p.star(x, y)] != q.star(self.map[x], self.map[y]) {
                    return Err(Counterexample::new("preserves ⋆", &[p.name(x), p.name(y)]));
                }
            }
        }
        let c = p.base();
        for f in 0..c.len() {
            if self.map[p.unit[f]] != q.unit[f0.mor_map[f]] {
                return Err(Counterexample::new("preserves unit", &[c.name(f)]));
            }
        }
        let (kp, jp) = p.kleisli().map_err(|e| Counterexample::new("source Kleisli", &[&e.to_string()]))?;
        let (kq, jq) = q.kleisli().map_err(|e| Counterexample::new("target Kleisli", &[&e.to_string()]))?;
        let kf = FiniteFunctor { src: kp, dst: kq, obj_map: f0.obj_map.clone(), mor_map: self.map.clone() };
        kf.check().map_err(|m| Counterexample::new("Kleisli functor", &[&m]))?;
        for f in 0..c.len() {
            if kf.mor_map[jp.mor_map[f]] != jq.mor_map[f0.mor_map[f]] {
                return Err(Counterexample::new("Kleisli square", &[c.name(f)]));
            }
        }
        Ok(())
    }
}

/// Components `α_x: F0 x → G0 x` in the target base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Modification {
    pub from: PromonadHom,
    pub to: PromonadHom,
    pub components: Vec<usize>,
}

impl Modification {
    pub fn identity(h: &PromonadHom) -> Self {
        let d = h.dst.base();
        let components = h.base.obj_map.iter().map(|&x| d.id(x)).collect();
        Modification { from: h.clone(), to: h.clone(), components }
    }

    /// Naturality in the base and `α_x ◁ G(p) = F(p) ▷ α_y`.
    pub fn check(&self) -> Result<(), Counterexample> {
        let (f, g) = (&self.from, &self.to);
        if f.src != g.src || f.dst != g.dst {
            return Err(Counterexample::new("parallel homs", &[]));
        }
        let (c, d) = (f.src.base(), f.dst.base());
        if self.components.len() != c.objects.len() {
            return Err(Counterexample::new("component count", &[]));
        }
        for (x, &a) in self.components.iter().enumerate() {
            if a >= d.len() || d.dom(a) != f.base.obj_map[x] || d.cod(a) != g.base.obj_map[x] {
                return Err(Counterexample::new("component typing", &[&c.objects[x]]));
            }
        }
        for h in 0..c.len() {
            let (x, y) = (c.dom(h), c.cod(h));
            if d.then(f.base.mor_map[h], self.components[y]) != d.then(self.components[x], g.base.mor_map[h]) {
                return Err(Counterexample::new("naturality", &[c.name(h)]));
            }
        }
        let q = &f.dst.prof;
        for p in 0..f.src.len() {
            let e = &f.src.prof.elements[p];
            let lhs = q.act_left(self.components[e.a], g.map[p]);
            let rhs = q.act_right(f.map[p], self.components[e.b]);
            if lhs != rhs {
                return Err(Counterexample::new("α ◁ G(p) = F(p) ▷ α", &[&e.name]));
            }
        }
        Ok(())
    }
}

/// Identity-on-objects functors between small categories, used to exercise
/// both directions of the correspondence.
pub fn curated_functors() -> Vec<(&'static str, FiniteFunctor)> {
    let arrow = {
        let mut b = CategoryBuilder::new(&["X", "Y"]);
        b.arrow("f", "X", "Y").unwrap();
        b.build().unwrap()
    };
    let parallel = {
        let mut b = CategoryBuilder::new(&["X", "Y"]);
        b.arrow("f", "X", "Y").unwrap().arrow("g", "X", "Y").unwrap();
        b.build().unwrap()
    };
    let iso = {
        let mut b = CategoryBuilder::new(&["X", "Y"]);
        b.arrow("u", "X", "Y").unwrap().arrow("v", "Y", "X").unwrap();
        b.composite("u", "v", "id_X").unwrap().composite("v", "u", "id_Y").unwrap();
        b.build().unwrap()
    };
    let idem = {
        let mut b = CategoryBuilder::new(&["X"]);
        b.arrow("e", "X", "X").unwrap();
        b.composite("e", "e", "e").unwrap();
        b.build().unwrap()
    };
    let one = |m: &FiniteMonoid| {
        let mut c = FiniteCategory::from_monoid(m);
        c.objects = vec!["X".into()];
        c
    };
    let z2 = one(&FiniteMonoid::cyclic(2));
    let z4 = one(&FiniteMonoid::cyclic(4));
    let h2 = one(&FiniteMonoid::truncated_free(&["h"], 2));
    let point = FiniteCategory::discrete(&["X"]);
    let two = FiniteCategory::discrete(&["X", "Y"]);
    let monoid_map = |src: &FiniteCategory, dst: &FiniteCategory, images: Vec<usize>| {
        FiniteFunctor::new(src.clone(), dst.clone(), vec![0], images).unwrap()
    };
    vec![
        ("identity on the walking arrow", FiniteFunctor::identity(&arrow)),
        ("two points into the walking arrow", FiniteFunctor::by_names(&two, &arrow, &[]).unwrap()),
        ("walking arrow into a parallel pair", FiniteFunctor::by_names(&arrow, &parallel, &[("f", "f")]).unwrap()),
        ("two points into an isomorphism", FiniteFunctor::by_names(&two, &iso, &[]).unwrap()),
        ("point into Z/2", FiniteFunctor::by_names(&point, &z2, &[]).unwrap()),
        ("idempotent collapsed into Z/2", monoid_map(&idem, &z2, vec![0, 0])),
        ("Z/2 into Z/4", monoid_map(&z2, &z4, vec![0, 2])),
        ("point into truncated words on h", FiniteFunctor::by_names(&point, &h2, &[]).unwrap()),
        ("idempotent into truncated words on h", monoid_map(&idem, &h2, vec![0, 3])),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point() -> FiniteCategory {
        FiniteCategory::discrete(&["X"])
    }

    #[test]
    fn identity_promonad_is_lawful() {
        for (_, i) in curated_functors() {
            FinitePromonad::identity(&i.dst).check().unwrap();
        }
    }

    #[test]
    fn writer_promonads_are_lawful() {
        FinitePromonad::writer(&point(), &FiniteMonoid::truncated_free(&["h", "w"], 2)).check().unwrap();
        let m = FinitePromonad::writer_functions(&[("1", 1), ("2", 2)], &FiniteMonoid::cyclic(2));
        assert_eq!(m.base().objects.len(), 2);
        m.check().unwrap();
    }

    #[test]
    fn corrupted_multiplication_is_caught() {
        let mut m = FinitePromonad::writer(&point(), &FiniteMonoid::cyclic(3));
        m.mult[1][1] = Some(0);
        let err = m.check().unwrap_err();
        assert!(err.law.starts_with("axiom"), "{err}");
    }

    #[test]
    fn products_are_lawful() {
        let c = FinitePromonad::writer(&curated_functors()[0].1.src, &FiniteMonoid::cyclic(2));
        let d = FinitePromonad::identity(&FiniteCategory::from_monoid(&FiniteMonoid::cyclic(2)));
        let p = c.product(&d);
        assert_eq!(p.len(), c.len() * d.len());
        assert_eq!(p.base().objects, vec!["(X,*)", "(Y,*)"]);
        p.check().unwrap();
    }

    #[test]
    fn kleisli_of_writer_is_the_monoid() {
        let mon = FiniteMonoid::truncated_free(&["h", "w"], 2);
        let (k, j) = FinitePromonad::writer(&point(), &mon).kleisli().unwrap();
        assert_eq!(k.hom(0, 0).len(), 8);
        for a in 0..8 {
            for b in 0..8 {
                assert_eq!(k.then(a, b), mon.mul(a, b));
            }
        }
        assert_eq!(j.mor_map, vec![mon.unit]);
    }

    #[test]
    fn kleisli_of_identity_is_the_base() {
        for (_, i) in curated_functors() {
            let (k, j) = FinitePromonad::identity(&i.dst).kleisli().unwrap();
            assert_eq!(k, i.dst);
            assert_eq!(j, FiniteFunctor::identity(&i.dst));
        }
    }

    #[test]
    fn identity_functor_gives_identity_promonad() {
        let c = &curated_functors()[0].1.src;
        assert_eq!(FinitePromonad::from_functor(&FiniteFunctor::identity(c)).unwrap(), FinitePromonad::identity(c));
    }

    #[test]
    fn round_trips_over_curated_functors() {
        for (name, i) in curated_functors() {
            assert!(i.dst.objects.len() <= 2 && i.dst.len() <= 6, "{name} is too big");
            let m = FinitePromonad::from_functor(&i).unwrap();
            m.check().unwrap_or_else(|e| panic!("{name}: {e}"));
            let (k, j) = m.kleisli().unwrap();
            assert_eq!(k, i.dst, "{name}");
            assert_eq!(j, i, "{name}");
            assert_eq!(FinitePromonad::from_functor(&j).unwrap(), m, "{name}");
        }
    }

    #[test]
    fn writer_round_trip_is_exact() {
        let m = FinitePromonad::writer_functions(&[("1", 1), ("2", 2)], &FiniteMonoid::cyclic(2));
        let (_, j) = m.kleisli().unwrap();
        assert_eq!(FinitePromonad::from_functor(&j).unwrap(), m);
    }

    #[test]
    fn not_identity_on_objects_is_rejected() {
        let two = FiniteCategory::discrete(&["X", "Y"]);
        let f = FiniteFunctor::new(two.clone(), point(), vec![0, 0], vec![0, 0]).unwrap();
        assert_eq!(FinitePromonad::from_functor(&f), Err(PromonadError::NotIdentityOnObjects));
    }

    #[test]
    fn homs_and_modifications() {
        let c = FiniteCategory::functions(&[("1", 1), ("2", 2)]);
        let z4 = FiniteMonoid::cyclic(4);
        let z2 = FiniteMonoid::cyclic(2);
        let h = PromonadHom::from_monoid_map(&c, &z4, &z2, &[0, 1, 0, 1]);
        h.check().unwrap();
        PromonadHom::identity(&h.src).check().unwrap();
        Modification::identity(&h).check().unwrap();
        // not a monoid map: 1 + 1 = 2 would need 1 + 1 = 0 in Z/2 to be 1
        let bad = PromonadHom::from_monoid_map(&c, &z4, &z2, &[0, 1, 1, 1]);
        assert_eq!(bad.check().unwrap_err().law, "preserves ⋆");
    }

    #[test]
    fn non_identity_modification() {
        // on the isomorphism X ⇄ Y, u and v are components of a modification
        // from the identity hom to the hom swapping X and Y
        let (_, iso) = curated_functors().into_iter().find(|(n, _)| n.contains("isomorphism")).unwrap();
        let d = iso.dst.clone();
        let m = FinitePromonad::identity(&d);
        let (u, v) = (d.morphism("u").unwrap(), d.morphism("v").unwrap());
        let swap_map: Vec<usize> = (0..d.len())
            .map(|f| match d.name(f) {
                "id_X" => d.id(1),
                "id_Y" => d.id(0),
                "u" => v,
                _ => u,
            })
            .collect();
        let swap = PromonadHom {
            src: m.clone(),
            dst: m.clone(),
            base: FiniteFunctor::new(d.clone(), d.clone(), vec![1, 0], swap_map).unwrap(),
            map: (0..d.len()).map(|f| [d.id(1), d.id(0), v, u][f]).collect(),
        };
        swap.check().unwrap();
        let alpha = Modification { from: PromonadHom::identity(&m), to: swap.clone(), components: vec![u, v] };
        alpha.check().unwrap();
        let wrong = Modification { from: PromonadHom::identity(&m), to: swap, components: vec![u, u] };
        assert!(wrong.check().is_err());
    }
}
