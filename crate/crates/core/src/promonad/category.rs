//! Finite categories and functors stored as dense tables.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::PromonadError;
use crate::monoid::FiniteMonoid;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Morphism {
    pub name: String,
    pub dom: usize,
    pub cod: usize,
}

/// Composition is diagrammatic: `compose[f][g]` is `f ; g`, defined when
/// `cod f = dom g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<Morphism>,
    pub identities: Vec<usize>,
    pub compose: Vec<Vec<Option<usize>>>,
}

impl FiniteCategory {
    /// Validates typing, totality, unit laws and associativity.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        compose: Vec<Vec<Option<usize>>>,
    ) -> Result<Self, PromonadError> {
        let c = FiniteCategory { objects, morphisms, identities, compose };
        c.check().map_err(PromonadError::InvalidCategory)?;
        Ok(c)
    }

    /// Every law, reported as the first failing instance.
    pub fn check(&self) -> Result<(), String> {
        let n = self.morphisms.len();
        if self.identities.len() != self.objects.len() {
            return Err("one identity per object is required".into());
        }
        if self.compose.len() != n || self.compose.iter().any(|r| r.len() != n) {
            return Err("composition table has the wrong shape".into());
        }
        for m in &self.morphisms {
            if m.dom >= self.objects.len() || m.cod >= self.objects.len() {
                return Err(format!("{} has an unknown endpoint", m.name));
            }
        }
        for (x, &i) in self.identities.iter().enumerate() {
            if i >= n || self.morphisms[i].dom != x || self.morphisms[i].cod != x {
                return Err(format!("identity of {} is mistyped", self.objects[x]));
            }
        }
        for f in 0..n {
            for g in 0..n {
                let composable = self.morphisms[f].cod == self.morphisms[g].dom;
                match self.compose[f][g] {
                    Some(h) if composable => {
                        if h >= n
                            || self.morphisms[h].dom != self.morphisms[f].dom
                            || self.morphisms[h].cod != self.morphisms[g].cod
                        {
                            return Err(format!("{} ; {} is mistyped", self.name(f), self.name(g)));
                        }
                    }
                    None if composable => return Err(format!("{} ; {} is missing", self.name(f), self.name(g))),
                    Some(_) => return Err(format!("{} ; {} is not composable", self.name(f), self.name(g))),
                    None => {}
                }
            }
        }
        for f in 0..n {
            let m = &self.morphisms[f];
            if self.then(self.identities[m.dom], f) != f || self.then(f, self.identities[m.cod]) != f {
                return Err(format!("identities do not act trivially on {}", self.name(f)));
            }
        }
        for f in 0..n {
            for g in self.after(f) {
                for h in self.after(g) {
                    if self.then(self.then(f, g), h) != self.then(f, self.then(g, h)) {
                        return Err(format!(
                            "({} ; {}) ; {} differs from {} ; ({} ; {})",
                            self.name(f),
                            self.name(g),
                            self.name(h),
                            self.name(f),
                            self.name(g),
                            self.name(h)
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self, f: usize) -> &str {
        &self.morphisms[f].name
    }

    pub fn dom(&self, f: usize) -> usize {
        self.morphisms[f].dom
    }

    pub fn cod(&self, f: usize) -> usize {
        self.morphisms[f].cod
    }

    /// `f ; g`. Panics when the pair is not composable.
    pub fn then(&self, f: usize, g: usize) -> usize {
        self.compose[f][g].unwrap_or_else(|| panic!("{} ; {} is not composable", self.name(f), self.name(g)))
    }

    pub fn try_then(&self, f: usize, g: usize) -> Option<usize> {
        self.compose[f][g]
    }

    pub fn id(&self, x: usize) -> usize {
        self.identities[x]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities.contains(&f)
    }

    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.morphisms.len()).filter(|&f| self.dom(f) == x && self.cod(f) == y).collect()
    }

    /// Morphisms whose domain is the codomain of `f`.
    pub fn after(&self, f: usize) -> Vec<usize> {
        let x = self.cod(f);
        (0..self.morphisms.len()).filter(|&g| self.dom(g) == x).collect()
    }

    pub fn object(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphism(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    pub fn len(&self) -> usize {
        self.morphisms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.morphisms.is_empty()
    }

    /// Only identities.
    pub fn discrete(objects: &[&str]) -> Self {
        let mut b = CategoryBuilder::new(objects);
        b.close();
        b.build().expect("discrete categories are valid")
    }

    /// One object `*` whose endomorphisms are the elements of `m`.
    pub fn from_monoid(m: &FiniteMonoid) -> Self {
        let objects = vec!["*".to_string()];
        let morphisms = m.names.iter().map(|n| Morphism { name: n.clone(), dom: 0, cod: 0 }).collect();
        let compose = m.table.iter().map(|row| row.iter().map(|&x| Some(x)).collect()).collect();
        FiniteCategory { objects, morphisms, identities: vec![m.unit], compose }
    }

    /// The finite sets `{0..n}` for each named size, with all functions.
    /// A function is named by its values, e.g. `X>Y:01`.
    pub fn functions(carriers: &[(&str, usize)]) -> Self {
        let objects: Vec<String> = carriers.iter().map(|(n, _)| n.to_string()).collect();
        let mut morphisms = Vec::new();
        let mut values: Vec<Vec<usize>> = Vec::new();
        for (x, &(xn, xs)) in carriers.iter().enumerate() {
            for (y, &(yn, ys)) in carriers.iter().enumerate() {
                for f in all_functions(xs, ys) {
                    let digits: String = f.iter().map(|v| v.to_string()).collect();
                    morphisms.push(Morphism { name: format!("{xn}>{yn}:{digits}"), dom: x, cod: y });
                    values.push(f);
                }
            }
        }
        let n = morphisms.len();
        let mut compose = vec![vec![None; n]; n];
        for f in 0..n {
            for g in 0..n {
                if morphisms[f].cod == morphisms[g].dom {
                    let fg: Vec<usize> = values[f].iter().map(|&a| values[g][a]).collect();
                    compose[f][g] = (0..n).find(|&h| {
                        morphisms[h].dom == morphisms[f].dom && morphisms[h].cod == morphisms[g].cod && values[h] == fg
                    });
                }
            }
        }
        let identities = carriers
            .iter()
            .enumerate()
            .map(|(x, &(_, xs))| {
                let id: Vec<usize> = (0..xs).collect();
                (0..n).find(|&h| morphisms[h].dom == x && morphisms[h].cod == x && values[h] == id).expect("identity")
            })
            .collect();
        FiniteCategory { objects, morphisms, identities, compose }
    }
}

impl FiniteCategory {
    /// Pairs of objects and of morphisms; `(x, y)` is object `x * |B| + y`.
    pub fn product(&self, other: &FiniteCategory) -> Self {
        let (no, nm) = (other.objects.len(), other.len());
        let mut objects = Vec::new();
        for x in &self.objects {
            for y in &other.objects {
                objects.push(format!("({x},{y})"));
            }
        }
        let mut morphisms = Vec::new();
        for f in &self.morphisms {
            for g in &other.morphisms {
                morphisms.push(Morphism {
                    name: format!("({},{})", f.name, g.name),
                    dom: f.dom * no + g.dom,
                    cod: f.cod * no + g.cod,
                });
            }
        }
        let n = morphisms.len();
        let compose = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let f = self.try_then(i / nm, j / nm)?;
                        let g = other.try_then(i % nm, j % nm)?;
                        Some(f * nm + g)
                    })
                    .collect()
            })
            .collect();
        let identities = (0..objects.len()).map(|xy| self.id(xy / no) * nm + other.id(xy % no)).collect();
        FiniteCategory { objects, morphisms, identities, compose }
    }
}

/// Every function `{0..n} -> {0..m}` as its list of values.
pub fn all_functions(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|f| (0..m).map(move |v| [f.clone(), vec![v]].concat())).collect();
    }
    out
}

/// Incremental construction by names; identities are named `id_X` and
/// composites with identities are filled in by [`CategoryBuilder::close`].
#[derive(Debug, Clone)]
pub struct CategoryBuilder {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    composites: BTreeMap<(usize, usize), usize>,
}

impl CategoryBuilder {
    pub fn new(objects: &[&str]) -> Self {
        let objects: Vec<String> = objects.iter().map(|o| o.to_string()).collect();
        let morphisms =
            objects.iter().enumerate().map(|(x, o)| Morphism { name: format!("id_{o}"), dom: x, cod: x }).collect();
        CategoryBuilder { objects, morphisms, composites: BTreeMap::new() }
    }

    /// Gives the identity of `object` a name other than `id_X`.
    pub fn identity_name(&mut self, object: &str, name: &str) -> Result<&mut Self, PromonadError> {
        let x = self.objects.iter().position(|o| o == object).ok_or_else(|| PromonadError::UnknownName(object.into()))?;
        if self.morphisms.iter().enumerate().any(|(i, m)| i != x && m.name == name) {
            return Err(PromonadError::DuplicateName(name.into()));
        }
        self.morphisms[x].name = name.into();
        Ok(self)
    }

    pub fn arrow(&mut self, name: &str, dom: &str, cod: &str) -> Result<&mut Self, PromonadError> {
        let obj = |o: &str| self.objects.iter().position(|x| x == o).ok_or_else(|| PromonadError::UnknownName(o.into()));
        let (dom, cod) = (obj(dom)?, obj(cod)?);
        if self.morphisms.iter().any(|m| m.name == name) {
            return Err(PromonadError::DuplicateName(name.into()));
        }
        self.morphisms.push(Morphism { name: name.into(), dom, cod });
        Ok(self)
    }

    fn find(&self, name: &str) -> Result<usize, PromonadError> {
        self.morphisms.iter().position(|m| m.name == name).ok_or_else(|| PromonadError::UnknownName(name.into()))
    }

    /// Declares `f ; g = h`.
    pub fn composite(&mut self, f: &str, g: &str, h: &str) -> Result<&mut Self, PromonadError> {
        let key = (self.find(f)?, self.find(g)?);
        let h = self.find(h)?;
        self.composites.insert(key, h);
        Ok(self)
    }

    /// Fills in composites with identities.
    pub fn close(&mut self) -> &mut Self {
        let n = self.morphisms.len();
        for f in 0..n {
            let (d, c) = (self.morphisms[f].dom, self.morphisms[f].cod);
            self.composites.insert((d, f), f);
            self.composites.insert((f, c), f);
        }
        self
    }

    pub fn build(&self) -> Result<FiniteCategory, PromonadError> {
        let mut b = self.clone();
        b.close();
        let n = b.morphisms.len();
        let mut compose = vec![vec![None; n]; n];
        for (&(f, g), &h) in &b.composites {
            compose[f][g] = Some(h);
        }
        let identities = (0..b.objects.len()).collect();
        FiniteCategory::new(b.objects, b.morphisms, identities, compose)
    }
}

/// A functor between finite categories.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteFunctor {
    pub src: FiniteCategory,
    pub dst: FiniteCategory,
    pub obj_map: Vec<usize>,
    pub mor_map: Vec<usize>,
}

impl FiniteFunctor {
    pub fn new(
        src: FiniteCategory,
        dst: FiniteCategory,
        obj_map: Vec<usize>,
        mor_map: Vec<usize>,
    ) -> Result<Self, PromonadError> {
        let f = FiniteFunctor { src, dst, obj_map, mor_map };
        f.check().map_err(PromonadError::InvalidFunctor)?;
        Ok(f)
    }

    pub fn identity(c: &FiniteCategory) -> Self {
        FiniteFunctor {
            src: c.clone(),
            dst: c.clone(),
            obj_map: (0..c.objects.len()).collect(),
            mor_map: (0..c.len()).collect(),
        }
    }

    /// Identity on objects (matched by name), with morphisms mapped by name.
    pub fn by_names(src: &FiniteCategory, dst: &FiniteCategory, pairs: &[(&str, &str)]) -> Result<Self, PromonadError> {
        let obj_map = src
            .objects
            .iter()
            .map(|o| dst.object(o).ok_or_else(|| PromonadError::UnknownName(o.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        let mut mor_map = Vec::with_capacity(src.len());
        for f in 0..src.len() {
            let image = if src.is_identity(f) {
                dst.id(obj_map[src.dom(f)])
            } else {
                let (_, target) = pairs
                    .iter()
                    .find(|(a, _)| *a == src.name(f))
                    .ok_or_else(|| PromonadError::UnknownName(src.name(f).to_string()))?;
                dst.morphism(target).ok_or_else(|| PromonadError::UnknownName(target.to_string()))?
            };
            mor_map.push(image);
        }
        FiniteFunctor::new(src.clone(), dst.clone(), obj_map, mor_map)
    }

    pub fn check(&self) -> Result<(), String> {
        let (s, d) = (&self.src, &self.dst);
        if self.obj_map.len() != s.objects.len() || self.mor_map.len() != s.len() {
            return Err("functor tables have the wrong size".into());
        }
        for f in 0..s.len() {
            let h = self.mor_map[f];
            if h >= d.len() || d.dom(h) != self.obj_map[s.dom(f)] || d.cod(h) != self.obj_map[s.cod(f)] {
                return Err(format!("image of {} is mistyped", s.name(f)));
            }
        }
        for x in 0..s.objects.len() {
            if self.mor_map[s.id(x)] != d.id(self.obj_map[x]) {
                return Err(format!("identity of {} is not preserved", s.objects[x]));
            }
        }
        for f in 0..s.len() {
            for g in s.after(f) {
                if self.mor_map[s.then(f, g)] != d.then(self.mor_map[f], self.mor_map[g]) {
                    return Err(format!("{} ; {} is not preserved", s.name(f), s.name(g)));
                }
            }
        }
        Ok(())
    }

    /// Same objects, in the same order, sent to themselves.
    pub fn is_identity_on_objects(&self) -> bool {
        self.src.objects == self.dst.objects && self.obj_map.iter().enumerate().all(|(i, &x)| i == x)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowSpec {
    pub name: String,
    pub dom: String,
    pub cod: String,
}

/// Text form of a finite category: objects, non-identity arrows, and the
/// composites `[f, g, f;g]` of non-identity pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategorySpec {
    pub objects: Vec<String>,
    #[serde(default)]
    pub arrows: Vec<ArrowSpec>,
    #[serde(default)]
    pub compose: Vec<[String; 3]>,
    /// Identities not named `id_X`, by object.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub identities: BTreeMap<String, String>,
}

impl CategorySpec {
    pub fn build(&self) -> Result<FiniteCategory, PromonadError> {
        let objs: Vec<&str> = self.objects.iter().map(String::as_str).collect();
        let mut b = CategoryBuilder::new(&objs);
        for (o, name) in &self.identities {
            b.identity_name(o, name)?;
        }
        for a in &self.arrows {
            b.arrow(&a.name, &a.dom, &a.cod)?;
        }
        for [f, g, h] in &self.compose {
            b.composite(f, g, h)?;
        }
        b.build()
    }

    pub fn of(c: &FiniteCategory) -> Self {
        let arrows = (0..c.len())
            .filter(|&f| !c.is_identity(f))
            .map(|f| ArrowSpec {
                name: c.name(f).into(),
                dom: c.objects[c.dom(f)].clone(),
                cod: c.objects[c.cod(f)].clone(),
            })
            .collect::<Vec<_>>();
        let mut compose = Vec::new();
        for f in (0..c.len()).filter(|&f| !c.is_identity(f)) {
            for g in c.after(f).into_iter().filter(|&g| !c.is_identity(g)) {
                compose.push([c.name(f).to_string(), c.name(g).to_string(), c.name(c.then(f, g)).to_string()]);
            }
        }
        let identities = (0..c.objects.len())
            .filter(|&x| c.name(c.id(x)) != format!("id_{}", c.objects[x]))
            .map(|x| (c.objects[x].clone(), c.name(c.id(x)).to_string()))
            .collect();
        CategorySpec { objects: c.objects.clone(), arrows, compose, identities }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn idempotent() -> FiniteCategory {
        let mut b = CategoryBuilder::new(&["X"]);
        b.arrow("e", "X", "X").unwrap();
        b.composite("e", "e", "e").unwrap();
        b.build().unwrap()
    }

    #[test]
    fn builder_closes_identities() {
        let c = idempotent();
        assert_eq!(c.len(), 2);
        assert_eq!(c.then(c.id(0), 1), 1);
        assert_eq!(c.then(1, 1), 1);
    }

    #[test]
    fn missing_composite_is_rejected() {
        let mut b = CategoryBuilder::new(&["X"]);
        b.arrow("e", "X", "X").unwrap();
        assert!(matches!(b.build(), Err(PromonadError::InvalidCategory(m)) if m.contains("missing")));
    }

    #[test]
    fn non_associative_table_is_rejected() {
        // e;e = f, f;e = e, e;f = f, f;f = e is not associative: (e;e);e = e but e;(e;e) = f
        let mut b = CategoryBuilder::new(&["X"]);
        b.arrow("e", "X", "X").unwrap().arrow("f", "X", "X").unwrap();
        b.composite("e", "e", "f").unwrap();
        b.composite("f", "e", "e").unwrap();
        b.composite("e", "f", "f").unwrap();
        b.composite("f", "f", "e").unwrap();
        assert!(matches!(b.build(), Err(PromonadError::InvalidCategory(m)) if m.contains("differs")));
    }

    #[test]
    fn function_category_sizes() {
        let c = FiniteCategory::functions(&[("1", 1), ("2", 2)]);
        assert_eq!(c.len(), 1 + 2 + 1 + 4);
        c.check().unwrap();
        assert_eq!(c.hom(1, 1).len(), 4);
    }

    #[test]
    fn monoid_category_is_valid() {
        let c = FiniteCategory::from_monoid(&FiniteMonoid::truncated_free(&["h", "w"], 2));
        c.check().unwrap();
        assert_eq!(c.len(), 8);
    }

    #[test]
    fn spec_round_trip() {
        let c = idempotent();
        let spec = CategorySpec::of(&c);
        assert_eq!(spec.build().unwrap(), c);
        let json = serde_json::to_string(&spec).unwrap();
        let back: CategorySpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back.build().unwrap(), c);
    }

    #[test]
    fn functor_checks() {
        let c = idempotent();
        FiniteFunctor::identity(&c).check().unwrap();
        let z2 = FiniteCategory::from_monoid(&FiniteMonoid::cyclic(2));
        // e must go to an idempotent; 1 + 1 = 0 so only 0 works
        let mut bad = FiniteFunctor { src: c.clone(), dst: z2.clone(), obj_map: vec![0], mor_map: vec![0, 1] };
        assert!(bad.check().is_err());
        bad.mor_map = vec![0, 0];
        bad.check().unwrap();
        assert!(!bad.is_identity_on_objects());
    }
}
