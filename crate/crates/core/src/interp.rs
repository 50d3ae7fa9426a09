//! Evaluation of free effectful morphisms into effectful categories.
//!
//! A target is anything implementing [`EffectfulTarget`]. Objects of a
//! target are lists of atoms, so tensoring objects is concatenation and the
//! structure is strict. [`FiniteWriterTarget`] is the Kleisli category of a
//! writer monad over a finite monoid, with finite carrier sets.

use std::collections::BTreeMap;
use std::fmt::Debug;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{apply_slice, Diagram};
use crate::monoid::FiniteMonoid;
use crate::polygraph::{GenDecl, ObjId, PolygraphCouple};
use crate::runtime::{self, eff_compose, eff_whisker, EffLayer, EffMorphism, RuntimeError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InterpError {
    #[error("no value for object {0}")]
    MissingObject(String),
    #[error("no value for generator {0}")]
    MissingGenerator(String),
    #[error("image of {gen} has the wrong boundary")]
    TargetMismatch { gen: String },
    #[error("cannot compose in the target: {0}")]
    NotComposable(String),
    #[error("unknown carrier {0}")]
    UnknownCarrier(String),
    #[error("unknown element {element} of {carrier}")]
    UnknownElement { carrier: String, element: String },
    #[error("function table for {0} is not total")]
    NotTotal(String),
    #[error("bad monoid: {0}")]
    BadMonoid(String),
    #[error("bad input: {0}")]
    BadInput(String),
    #[error(transparent)]
    Runtime(#[from] RuntimeError),
}

/// A strict effectful category: a monoidal category of pure morphisms, a
/// premonoidal category of effectful ones, and an identity-on-objects
/// inclusion between them.
pub trait EffectfulTarget {
    type Obj: Clone + PartialEq + Debug;
    type Pure: Clone + Debug;
    type Eff: Clone + Debug;

    fn pure_identity(&self, objs: &[Self::Obj]) -> Self::Pure;
    fn pure_compose(&self, f: &Self::Pure, g: &Self::Pure) -> Result<Self::Pure, InterpError>;
    fn pure_tensor(&self, f: &Self::Pure, g: &Self::Pure) -> Self::Pure;
    fn pure_equal(&self, f: &Self::Pure, g: &Self::Pure) -> bool;

    fn identity(&self, objs: &[Self::Obj]) -> Self::Eff;
    fn compose(&self, f: &Self::Eff, g: &Self::Eff) -> Result<Self::Eff, InterpError>;
    fn include(&self, f: &Self::Pure) -> Self::Eff;
    fn whisker(&self, left: &[Self::Obj], e: &Self::Eff, right: &[Self::Obj]) -> Self::Eff;
    fn eff_equal(&self, f: &Self::Eff, g: &Self::Eff) -> bool;

    fn pure_boundary(&self, f: &Self::Pure) -> (Vec<Self::Obj>, Vec<Self::Obj>);
    fn eff_boundary(&self, f: &Self::Eff) -> (Vec<Self::Obj>, Vec<Self::Obj>);
}

/// Images of the generators of a couple.
#[derive(Debug, Clone)]
pub struct Valuation<T: EffectfulTarget> {
    pub obj_map: BTreeMap<ObjId, T::Obj>,
    pub pure_map: BTreeMap<String, T::Pure>,
    pub eff_map: BTreeMap<String, T::Eff>,
}

impl<T: EffectfulTarget> Default for Valuation<T> {
    fn default() -> Self {
        Valuation { obj_map: BTreeMap::new(), pure_map: BTreeMap::new(), eff_map: BTreeMap::new() }
    }
}

impl<T: EffectfulTarget> Valuation<T> {
    pub fn objects(&self, objs: &[ObjId]) -> Result<Vec<T::Obj>, InterpError> {
        objs.iter()
            .map(|o| self.obj_map.get(o).cloned().ok_or_else(|| InterpError::MissingObject(o.to_string())))
            .collect()
    }

    /// Checks every generator of `c` has an image with the mapped boundary.
    pub fn check(&self, t: &T, c: &PolygraphCouple) -> Result<(), InterpError> {
        for g in &c.pure.gens {
            let f = self.pure_map.get(&g.name).ok_or_else(|| InterpError::MissingGenerator(g.name.clone()))?;
            self.check_boundary(g, t.pure_boundary(f))?;
        }
        for g in &c.effectful.gens {
            let f = self.eff_map.get(&g.name).ok_or_else(|| InterpError::MissingGenerator(g.name.clone()))?;
            self.check_boundary(g, t.eff_boundary(f))?;
        }
        Ok(())
    }

    fn check_boundary(&self, g: &GenDecl, (dom, cod): (Vec<T::Obj>, Vec<T::Obj>)) -> Result<(), InterpError> {
        if self.objects(&g.inputs)? != dom || self.objects(&g.outputs)? != cod {
            return Err(InterpError::TargetMismatch { gen: g.name.clone() });
        }
        Ok(())
    }
}

fn decl<'a>(c: &'a PolygraphCouple, layer: &EffLayer) -> Result<&'a GenDecl, InterpError> {
    let found = match layer {
        EffLayer::Pure(_, g) => c.pure_gen(g),
        EffLayer::Eff(g, _) => c.effectful_gen(g),
    };
    found.ok_or_else(|| InterpError::MissingGenerator(layer.gen().to_string()))
}

/// The value of `e` under the unique strict effectful functor extending `v`.
pub fn evaluate<T: EffectfulTarget>(
    c: &PolygraphCouple,
    e: &EffMorphism,
    t: &T,
    v: &Valuation<T>,
) -> Result<T::Eff, InterpError> {
    e.check(c)?;
    let mut acc = t.identity(&v.objects(&e.dom)?);
    let mut current = e.dom.clone();
    for layer in &e.layers {
        let g = decl(c, layer)?;
        let at = layer.position();
        let left = v.objects(&current[..at])?;
        let right = v.objects(&current[at + g.inputs.len()..])?;
        let step = match layer {
            EffLayer::Pure(_, name) => {
                let f = v.pure_map.get(name).ok_or_else(|| InterpError::MissingGenerator(name.clone()))?;
                v.check_boundary(g, t.pure_boundary(f))?;
                let whiskered = t.pure_tensor(&t.pure_tensor(&t.pure_identity(&left), f), &t.pure_identity(&right));
                t.include(&whiskered)
            }
            EffLayer::Eff(name, _) => {
                let f = v.eff_map.get(name).ok_or_else(|| InterpError::MissingGenerator(name.clone()))?;
                v.check_boundary(g, t.eff_boundary(f))?;
                t.whisker(&left, f, &right)
            }
        };
        acc = t.compose(&acc, &step)?;
        current = apply_slice(&current, at, &g.inputs, &g.outputs).expect("checked above");
    }
    Ok(acc)
}

/// The value of a pure diagram in the pure part of the target.
pub fn evaluate_pure<T: EffectfulTarget>(
    c: &PolygraphCouple,
    d: &Diagram,
    t: &T,
    v: &Valuation<T>,
) -> Result<T::Pure, InterpError> {
    d.check(&c.pure).map_err(RuntimeError::from)?;
    let mut acc = t.pure_identity(&v.objects(&d.dom)?);
    let mut current = d.dom.clone();
    for s in &d.slices {
        let g = c.pure_gen(&s.gen).ok_or_else(|| InterpError::MissingGenerator(s.gen.clone()))?;
        let f = v.pure_map.get(&s.gen).ok_or_else(|| InterpError::MissingGenerator(s.gen.clone()))?;
        v.check_boundary(g, t.pure_boundary(f))?;
        let left = v.objects(&current[..s.offset])?;
        let right = v.objects(&current[s.offset + g.inputs.len()..])?;
        let step = t.pure_tensor(&t.pure_tensor(&t.pure_identity(&left), f), &t.pure_identity(&right));
        acc = t.pure_compose(&acc, &step)?;
        current = apply_slice(&current, s.offset, &g.inputs, &g.outputs).expect("checked above");
    }
    Ok(acc)
}

/// Whether `a` and `b` interchange in the target, in both placements.
pub fn target_interchanges<T: EffectfulTarget>(t: &T, a: &T::Eff, b: &T::Eff) -> Result<bool, InterpError> {
    let (ad, ac) = t.eff_boundary(a);
    let (bd, bc) = t.eff_boundary(b);
    let a_first = t.compose(&t.whisker(&[], a, &bd), &t.whisker(&ac, b, &[]))?;
    let b_first = t.compose(&t.whisker(&ad, b, &[]), &t.whisker(&[], a, &bc))?;
    let b_left = t.compose(&t.whisker(&[], b, &ad), &t.whisker(&bc, a, &[]))?;
    let a_right = t.compose(&t.whisker(&bd, a, &[]), &t.whisker(&[], b, &ac))?;
    Ok(t.eff_equal(&a_first, &b_first) && t.eff_equal(&b_left, &a_right))
}

/// The free effectful category on a couple, seen as a target.
#[derive(Debug, Clone)]
pub struct FreeEffectful {
    pub couple: PolygraphCouple,
}

impl FreeEffectful {
    pub fn new(couple: PolygraphCouple) -> Self {
        FreeEffectful { couple }
    }

    /// The valuation sending every generator to itself.
    pub fn tautological(&self) -> Valuation<Self> {
        let mut v = Valuation::default();
        for o in self.couple.objects() {
            v.obj_map.insert(o.clone(), o.clone());
        }
        for g in &self.couple.pure.gens {
            v.pure_map.insert(g.name.clone(), Diagram::generator(&self.couple.pure, &g.name).expect("declared"));
        }
        for g in &self.couple.effectful.gens {
            v.eff_map.insert(g.name.clone(), EffMorphism::generator(&self.couple, &g.name).expect("declared"));
        }
        v
    }
}

impl EffectfulTarget for FreeEffectful {
    type Obj = ObjId;
    type Pure = Diagram;
    type Eff = EffMorphism;

    fn pure_identity(&self, objs: &[ObjId]) -> Diagram {
        Diagram::identity(objs)
    }

    fn pure_compose(&self, f: &Diagram, g: &Diagram) -> Result<Diagram, InterpError> {
        f.compose(g).map_err(|e| InterpError::NotComposable(e.to_string()))
    }

    fn pure_tensor(&self, f: &Diagram, g: &Diagram) -> Diagram {
        f.tensor(g)
    }

    fn pure_equal(&self, f: &Diagram, g: &Diagram) -> bool {
        crate::diagram::equal(&self.couple.pure, f, g).unwrap_or(false)
    }

    fn identity(&self, objs: &[ObjId]) -> EffMorphism {
        EffMorphism::identity(objs)
    }

    fn compose(&self, f: &EffMorphism, g: &EffMorphism) -> Result<EffMorphism, InterpError> {
        eff_compose(f, g).map_err(|e| InterpError::NotComposable(e.to_string()))
    }

    fn include(&self, f: &Diagram) -> EffMorphism {
        runtime::lift_pure(&self.couple, f).expect("pure diagrams over the couple lift")
    }

    fn whisker(&self, left: &[ObjId], e: &EffMorphism, right: &[ObjId]) -> EffMorphism {
        eff_whisker(left, e, right)
    }

    fn eff_equal(&self, f: &EffMorphism, g: &EffMorphism) -> bool {
        runtime::eff_equal(&self.couple, f, g).unwrap_or(false)
    }

    fn pure_boundary(&self, f: &Diagram) -> (Vec<ObjId>, Vec<ObjId>) {
        (f.dom.clone(), f.cod.clone())
    }

    fn eff_boundary(&self, f: &EffMorphism) -> (Vec<ObjId>, Vec<ObjId>) {
        (f.dom.clone(), f.cod.clone())
    }
}

/// A function between finite carriers, stored as a table over input tuples in
/// mixed-radix order (the last wire varies fastest).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PureFn {
    pub dom: Vec<String>,
    pub cod: Vec<String>,
    pub table: Vec<Vec<usize>>,
}

/// A Kleisli map for the writer monad: each input tuple yields a monoid
/// element and an output tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WriterFn {
    pub dom: Vec<String>,
    pub cod: Vec<String>,
    pub table: Vec<(usize, Vec<usize>)>,
}

/// The Kleisli category of the writer monad `M × -` on finite sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteWriterTarget {
    pub monoid: FiniteMonoid,
    /// Carrier name to element names.
    pub carriers: BTreeMap<String, Vec<String>>,
}

impl FiniteWriterTarget {
    pub fn new(monoid: FiniteMonoid, carriers: BTreeMap<String, Vec<String>>) -> Self {
        FiniteWriterTarget { monoid, carriers }
    }

    fn size(&self, carrier: &str) -> usize {
        self.carriers.get(carrier).map_or(0, Vec::len)
    }

    /// Every tuple over `objs`, in table order.
    pub fn tuples(&self, objs: &[String]) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for o in objs {
            let n = self.size(o);
            out = out.into_iter().flat_map(|t| (0..n).map(move |x| [t.clone(), vec![x]].concat())).collect();
        }
        out
    }

    pub fn encode(&self, objs: &[String], tuple: &[usize]) -> usize {
        objs.iter().zip(tuple).fold(0, |acc, (o, &x)| acc * self.size(o) + x)
    }

    fn split(&self, objs: &[String], at: usize, tuple: &[usize]) -> (usize, usize) {
        (self.encode(&objs[..at], &tuple[..at]), self.encode(&objs[at..], &tuple[at..]))
    }

    /// Builds a pure function from a closure on tuples.
    pub fn pure_fn(&self, dom: &[String], cod: &[String], f: impl Fn(&[usize]) -> Vec<usize>) -> PureFn {
        let table = self.tuples(dom).iter().map(|t| f(t)).collect();
        PureFn { dom: dom.to_vec(), cod: cod.to_vec(), table }
    }

    /// Builds a Kleisli map from a closure on tuples.
    pub fn writer_fn(&self, dom: &[String], cod: &[String], f: impl Fn(&[usize]) -> (usize, Vec<usize>)) -> WriterFn {
        let table = self.tuples(dom).iter().map(|t| f(t)).collect();
        WriterFn { dom: dom.to_vec(), cod: cod.to_vec(), table }
    }

    pub fn apply(&self, f: &WriterFn, input: &[usize]) -> (usize, Vec<usize>) {
        f.table[self.encode(&f.dom, input)].clone()
    }

    pub fn element(&self, carrier: &str, name: &str) -> Result<usize, InterpError> {
        let elems = self.carriers.get(carrier).ok_or_else(|| InterpError::UnknownCarrier(carrier.to_string()))?;
        elems.iter().position(|e| e == name).ok_or_else(|| InterpError::UnknownElement {
            carrier: carrier.to_string(),
            element: name.to_string(),
        })
    }

    pub fn element_name(&self, carrier: &str, x: usize) -> &str {
        &self.carriers[carrier][x]
    }
}

impl EffectfulTarget for FiniteWriterTarget {
    type Obj = String;
    type Pure = PureFn;
    type Eff = WriterFn;

    fn pure_identity(&self, objs: &[String]) -> PureFn {
        self.pure_fn(objs, objs, |t| t.to_vec())
    }

    fn pure_compose(&self, f: &PureFn, g: &PureFn) -> Result<PureFn, InterpError> {
        if f.cod != g.dom {
            return Err(InterpError::NotComposable(format!("{:?} vs {:?}", f.cod, g.dom)));
        }
        let table = f.table.iter().map(|y| g.table[self.encode(&g.dom, y)].clone()).collect();
        Ok(PureFn { dom: f.dom.clone(), cod: g.cod.clone(), table })
    }

    fn pure_tensor(&self, f: &PureFn, g: &PureFn) -> PureFn {
        let dom = [f.dom.clone(), g.dom.clone()].concat();
        let cod = [f.cod.clone(), g.cod.clone()].concat();
        let at = f.dom.len();
        self.pure_fn(&dom, &cod, |t| {
            let (i, j) = self.split(&dom, at, t);
            [f.table[i].clone(), g.table[j].clone()].concat()
        })
    }

    fn pure_equal(&self, f: &PureFn, g: &PureFn) -> bool {
        f == g
    }

    fn identity(&self, objs: &[String]) -> WriterFn {
        self.writer_fn(objs, objs, |t| (self.monoid.unit, t.to_vec()))
    }

    fn compose(&self, f: &WriterFn, g: &WriterFn) -> Result<WriterFn, InterpError> {
        if f.cod != g.dom {
            return Err(InterpError::NotComposable(format!("{:?} vs {:?}", f.cod, g.dom)));
        }
        let table = f
            .table
            .iter()
            .map(|(m, y)| {
                let (n, z) = &g.table[self.encode(&g.dom, y)];
                (self.monoid.mul(*m, *n), z.clone())
            })
            .collect();
        Ok(WriterFn { dom: f.dom.clone(), cod: g.cod.clone(), table })
    }

    fn include(&self, f: &PureFn) -> WriterFn {
        let table = f.table.iter().map(|y| (self.monoid.unit, y.clone())).collect();
        WriterFn { dom: f.dom.clone(), cod: f.cod.clone(), table }
    }

    fn whisker(&self, left: &[String], e: &WriterFn, right: &[String]) -> WriterFn {
        let dom = [left, &e.dom, right].concat();
        let cod = [left, &e.cod, right].concat();
        let (l, n) = (left.len(), e.dom.len());
        self.writer_fn(&dom, &cod, |t| {
            let (m, y) = &e.table[self.encode(&e.dom, &t[l..l + n])];
            (*m, [&t[..l], y, &t[l + n..]].concat())
        })
    }

    fn eff_equal(&self, f: &WriterFn, g: &WriterFn) -> bool {
        f == g
    }

    fn pure_boundary(&self, f: &PureFn) -> (Vec<String>, Vec<String>) {
        (f.dom.clone(), f.cod.clone())
    }

    fn eff_boundary(&self, f: &WriterFn) -> (Vec<String>, Vec<String>) {
        (f.dom.clone(), f.cod.clone())
    }
}

/// The PRINT couple into the writer target over `monoid`: `A` is the set
/// `{h, w}`, `hello` and `world` produce `h` and `w`, and `print` writes its
/// argument as the one-letter word of the same name.
pub fn print_writer_example(monoid: FiniteMonoid) -> (FiniteWriterTarget, Valuation<FiniteWriterTarget>) {
    let mut carriers = BTreeMap::new();
    carriers.insert("A".to_string(), vec!["h".to_string(), "w".to_string()]);
    let t = FiniteWriterTarget::new(monoid, carriers);
    let a = vec!["A".to_string()];
    let mut v = Valuation::default();
    v.obj_map.insert(ObjId::new("A"), "A".to_string());
    v.pure_map.insert("hello".into(), t.pure_fn(&[], &a, |_| vec![0]));
    v.pure_map.insert("world".into(), t.pure_fn(&[], &a, |_| vec![1]));
    let letters: Vec<usize> = ["h", "w"].iter().map(|l| t.monoid.index(l).unwrap_or(t.monoid.unit)).collect();
    v.eff_map.insert("print".into(), t.writer_fn(&a, &[], |x| (letters[x[0]], vec![])));
    (t, v)
}

/// Morphisms on which a functor between targets is tested.
#[derive(Debug, Clone)]
pub struct FunctorSamples<T: EffectfulTarget> {
    pub objects: Vec<Vec<T::Obj>>,
    pub pure: Vec<T::Pure>,
    pub effectful: Vec<T::Eff>,
}

/// Checks on samples that `(f0, fp, fe)` is a strict effectful functor:
/// it commutes with the inclusions, preserves identities, composition,
/// whiskering and the tensor of pure morphisms. Returns the first failure.
pub fn check_strict_effectful_functor<S, D>(
    src: &S,
    dst: &D,
    f0: impl Fn(&S::Obj) -> D::Obj,
    fp: impl Fn(&S::Pure) -> Result<D::Pure, InterpError>,
    fe: impl Fn(&S::Eff) -> Result<D::Eff, InterpError>,
    samples: &FunctorSamples<S>,
) -> Result<(), String>
where
    S: EffectfulTarget,
    D: EffectfulTarget,
{
    let objs = |xs: &[S::Obj]| xs.iter().map(&f0).collect::<Vec<_>>();
    let fail = |what: &str, detail: String| Err(format!("{what}: {detail}"));
    for xs in &samples.objects {
        let lhs = fe(&src.identity(xs)).map_err(|e| e.to_string())?;
        if !dst.eff_equal(&lhs, &dst.identity(&objs(xs))) {
            return fail("identity", format!("{xs:?}"));
        }
        let lhs = fp(&src.pure_identity(xs)).map_err(|e| e.to_string())?;
        if !dst.pure_equal(&lhs, &dst.pure_identity(&objs(xs))) {
            return fail("pure identity", format!("{xs:?}"));
        }
    }
    for p in &samples.pure {
        let image = fp(p).map_err(|e| e.to_string())?;
        let lhs = fe(&src.include(p)).map_err(|e| e.to_string())?;
        if !dst.eff_equal(&lhs, &dst.include(&image)) {
            return fail("inclusion square", format!("{p:?}"));
        }
        for q in &samples.pure {
            let lhs = fp(&src.pure_tensor(p, q)).map_err(|e| e.to_string())?;
            let rhs = dst.pure_tensor(&image, &fp(q).map_err(|e| e.to_string())?);
            if !dst.pure_equal(&lhs, &rhs) {
                return fail("pure tensor", format!("{p:?} with {q:?}"));
            }
        }
    }
    for a in &samples.effectful {
        let fa = fe(a).map_err(|e| e.to_string())?;
        for b in &samples.effectful {
            if let Ok(ab) = src.compose(a, b) {
                let lhs = fe(&ab).map_err(|e| e.to_string())?;
                let fb = fe(b).map_err(|e| e.to_string())?;
                let rhs = dst.compose(&fa, &fb).map_err(|e| e.to_string())?;
                if !dst.eff_equal(&lhs, &rhs) {
                    return fail("composition", format!("{a:?} then {b:?}"));
                }
            }
        }
        for left in &samples.objects {
            for right in &samples.objects {
                let lhs = fe(&src.whisker(left, a, right)).map_err(|e| e.to_string())?;
                let rhs = dst.whisker(&objs(left), &fa, &objs(right));
                if !dst.eff_equal(&lhs, &rhs) {
                    return fail("whiskering", format!("{left:?} | {a:?} | {right:?}"));
                }
            }
        }
    }
    Ok(())
}

/// Renders a writer map applied to one input as `(word, outputs)`.
pub fn describe_output(t: &FiniteWriterTarget, f: &WriterFn, input: &[usize]) -> String {
    let (m, ys) = t.apply(f, input);
    let outs: Vec<&str> = f.cod.iter().zip(&ys).map(|(c, &y)| t.element_name(c, y)).collect();
    format!("({},({}))", t.monoid.name(m), outs.join(","))
}

/// Domain and codomain lists.
pub type Boundary<O> = (Vec<O>, Vec<O>);

/// Boundary of a free morphism under the object part of a valuation.
pub fn mapped_boundary<T: EffectfulTarget>(v: &Valuation<T>, e: &EffMorphism) -> Result<Boundary<T::Obj>, InterpError> {
    Ok((v.objects(&e.dom)?, v.objects(&e.cod)?))
}
