//! The runtime monoidal category and the free effectful category.
//!
//! An [`EffMorphism`] is written in runtime-less coordinates: pure layers
//! carry an offset among the non-runtime wires, effectful layers carry the
//! number of wires to the left of their footprint. [`embed_monrun`] spells
//! the runtime wire out with explicit braids and [`parse_monrun`] removes
//! them again.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{self, apply_slice, show, BfsOutcome, Diagram, DiagramError, Slice};
use crate::exchange::{self, Cell};
use crate::polygraph::{braid_name, run_polygraph, GenDecl, GenKind, ObjId, PolygraphCouple, PolygraphError};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EffLayer {
    Pure(usize, String),
    Eff(String, usize),
}

impl EffLayer {
    pub fn pure(offset: usize, gen: impl Into<String>) -> Self {
        EffLayer::Pure(offset, gen.into())
    }

    pub fn eff(gen: impl Into<String>, ctx: usize) -> Self {
        EffLayer::Eff(gen.into(), ctx)
    }

    pub fn gen(&self) -> &str {
        match self {
            EffLayer::Pure(_, g) | EffLayer::Eff(g, _) => g,
        }
    }

    /// Offset of the footprint among the non-runtime wires.
    pub fn position(&self) -> usize {
        match self {
            EffLayer::Pure(o, _) | EffLayer::Eff(_, o) => *o,
        }
    }

    pub fn is_effectful(&self) -> bool {
        matches!(self, EffLayer::Eff(..))
    }

    fn shifted(&self, by: usize) -> Self {
        match self {
            EffLayer::Pure(o, g) => EffLayer::Pure(o + by, g.clone()),
            EffLayer::Eff(g, c) => EffLayer::Eff(g.clone(), c + by),
        }
    }
}

impl fmt::Display for EffLayer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EffLayer::Pure(o, g) => write!(f, "pure({o},{g})"),
            EffLayer::Eff(g, c) => write!(f, "eff({g}@{c})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EffMorphism {
    pub dom: Vec<ObjId>,
    pub cod: Vec<ObjId>,
    pub layers: Vec<EffLayer>,
}

impl fmt::Display for EffMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} :", show(&self.dom), show(&self.cod))?;
        for l in &self.layers {
            write!(f, " {l}")?;
        }
        Ok(())
    }
}

/// A braid clique on `objects` viewed through the component that has the
/// runtime at `representative_position`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BraidClique {
    pub objects: Vec<ObjId>,
    pub representative_position: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RuntimeError {
    #[error("boundary mismatch: {left} vs {right}")]
    BoundaryMismatch { left: String, right: String },
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("layer {index} ({layer}) does not match the boundary {boundary}")]
    IllTyped { index: usize, layer: String, boundary: String },
    #[error("{0} is not a pure generator")]
    NotPure(String),
    #[error("expected exactly one runtime wire in {0}")]
    RuntimeCount(String),
    #[error("slice {index}: effectful {gen} does not take the runtime at its first port")]
    EffectOffRuntime { index: usize, gen: String },
    #[error("slice {index}: the runtime runs through the footprint of {gen}")]
    RuntimeInsideFootprint { index: usize, gen: String },
    #[error("position {index} is out of range for a boundary of {len} wires")]
    IndexOutOfRange { index: usize, len: usize },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Polygraph(#[from] PolygraphError),
}

fn decl<'a>(c: &'a PolygraphCouple, layer: &EffLayer) -> Result<&'a GenDecl, RuntimeError> {
    let found = match layer {
        EffLayer::Pure(_, g) => c.pure_gen(g),
        EffLayer::Eff(g, _) => c.effectful_gen(g),
    };
    found.ok_or_else(|| RuntimeError::UnknownGenerator(layer.gen().to_string()))
}

impl EffMorphism {
    pub fn identity(objs: &[ObjId]) -> Self {
        EffMorphism { dom: objs.to_vec(), cod: objs.to_vec(), layers: Vec::new() }
    }

    /// Builds a morphism from layers, computing the codomain.
    pub fn from_layers(c: &PolygraphCouple, dom: Vec<ObjId>, layers: Vec<EffLayer>) -> Result<Self, RuntimeError> {
        let cod = typecheck(c, &dom, &layers)?;
        Ok(EffMorphism { dom, cod, layers })
    }

    /// A single generator on exactly its own boundary.
    pub fn generator(c: &PolygraphCouple, name: &str) -> Result<Self, RuntimeError> {
        let layer = if c.effectful_gen(name).is_some() { EffLayer::eff(name, 0) } else { EffLayer::pure(0, name) };
        let g = decl(c, &layer)?;
        Ok(EffMorphism { dom: g.inputs.clone(), cod: g.outputs.clone(), layers: vec![layer] })
    }

    pub fn check(&self, c: &PolygraphCouple) -> Result<(), RuntimeError> {
        let cod = typecheck(c, &self.dom, &self.layers)?;
        if cod != self.cod {
            return Err(RuntimeError::BoundaryMismatch { left: show(&self.cod), right: show(&cod) });
        }
        Ok(())
    }

    /// The boundary before each layer, followed by the codomain.
    pub fn boundaries(&self, c: &PolygraphCouple) -> Result<Vec<Vec<ObjId>>, RuntimeError> {
        let mut out = vec![self.dom.clone()];
        for (index, layer) in self.layers.iter().enumerate() {
            let g = decl(c, layer)?;
            let current = out.last().expect("starts non-empty");
            let next = apply_slice(current, layer.position(), &g.inputs, &g.outputs).ok_or_else(|| {
                RuntimeError::IllTyped { index, layer: layer.to_string(), boundary: show(current) }
            })?;
            out.push(next);
        }
        Ok(out)
    }

    pub fn effect_sequence(&self) -> Vec<&str> {
        self.layers.iter().filter(|l| l.is_effectful()).map(EffLayer::gen).collect()
    }

    pub fn compose(&self, next: &EffMorphism) -> Result<EffMorphism, RuntimeError> {
        eff_compose(self, next)
    }
}

fn typecheck(c: &PolygraphCouple, dom: &[ObjId], layers: &[EffLayer]) -> Result<Vec<ObjId>, RuntimeError> {
    let mut current = dom.to_vec();
    for (index, layer) in layers.iter().enumerate() {
        let g = decl(c, layer)?;
        current = apply_slice(&current, layer.position(), &g.inputs, &g.outputs).ok_or_else(|| {
            RuntimeError::IllTyped { index, layer: layer.to_string(), boundary: show(&current) }
        })?;
    }
    Ok(current)
}

pub fn eff_identity(objs: &[ObjId]) -> EffMorphism {
    EffMorphism::identity(objs)
}

pub fn eff_compose(e1: &EffMorphism, e2: &EffMorphism) -> Result<EffMorphism, RuntimeError> {
    if e1.cod != e2.dom {
        return Err(RuntimeError::BoundaryMismatch { left: show(&e1.cod), right: show(&e2.dom) });
    }
    let mut layers = e1.layers.clone();
    layers.extend(e2.layers.iter().cloned());
    Ok(EffMorphism { dom: e1.dom.clone(), cod: e2.cod.clone(), layers })
}

pub fn eff_whisker(left: &[ObjId], e: &EffMorphism, right: &[ObjId]) -> EffMorphism {
    EffMorphism {
        dom: [left, &e.dom, right].concat(),
        cod: [left, &e.cod, right].concat(),
        layers: e.layers.iter().map(|l| l.shifted(left.len())).collect(),
    }
}

pub fn lift_pure(c: &PolygraphCouple, d: &Diagram) -> Result<EffMorphism, RuntimeError> {
    let layers = d
        .slices
        .iter()
        .map(|s| match c.pure_gen(&s.gen) {
            Some(_) => Ok(EffLayer::pure(s.offset, s.gen.clone())),
            None => Err(RuntimeError::NotPure(s.gen.clone())),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let e = EffMorphism { dom: d.dom.clone(), cod: d.cod.clone(), layers };
    e.check(c)?;
    Ok(e)
}

struct Labels<'a>(Vec<&'a str>);

impl<'a> Labels<'a> {
    fn for_morphisms(es: impl IntoIterator<Item = &'a EffMorphism>) -> Self {
        let mut names: Vec<&str> = es.into_iter().flat_map(|e| e.layers.iter().map(EffLayer::gen)).collect();
        names.sort_unstable();
        names.dedup();
        Labels(names)
    }

    fn cells(&self, c: &PolygraphCouple, e: &EffMorphism) -> Result<Vec<Cell>, RuntimeError> {
        e.layers
            .iter()
            .map(|l| {
                let g = decl(c, l)?;
                let label = self.0.binary_search(&l.gen()).expect("label registered") as u32;
                Ok(Cell {
                    offset: l.position(),
                    label,
                    n_in: g.inputs.len(),
                    n_out: g.outputs.len(),
                    sequential: l.is_effectful(),
                })
            })
            .collect()
    }

    fn layers(&self, cells: &[Cell]) -> Vec<EffLayer> {
        cells
            .iter()
            .map(|cell| {
                let name = self.0[cell.label as usize].to_string();
                if cell.sequential {
                    EffLayer::Eff(name, cell.offset)
                } else {
                    EffLayer::Pure(cell.offset, name)
                }
            })
            .collect()
    }
}

/// Canonical representative: pure layers move past anything they do not
/// touch, effectful layers keep their relative order.
pub fn eff_normalize(c: &PolygraphCouple, e: &EffMorphism) -> Result<EffMorphism, RuntimeError> {
    e.check(c)?;
    let labels = Labels::for_morphisms([e]);
    let normal = exchange::normalize(&labels.cells(c, e)?);
    Ok(EffMorphism { dom: e.dom.clone(), cod: e.cod.clone(), layers: labels.layers(&normal) })
}

fn same_shape(e1: &EffMorphism, e2: &EffMorphism) -> bool {
    let names = |e: &EffMorphism| {
        let mut v: Vec<(bool, String)> = e.layers.iter().map(|l| (l.is_effectful(), l.gen().to_string())).collect();
        v.sort();
        v
    };
    e1.dom == e2.dom && e1.cod == e2.cod && e1.effect_sequence() == e2.effect_sequence() && names(e1) == names(e2)
}

pub fn eff_equal(c: &PolygraphCouple, e1: &EffMorphism, e2: &EffMorphism) -> Result<bool, RuntimeError> {
    if !same_shape(e1, e2) {
        e1.check(c)?;
        e2.check(c)?;
        return Ok(false);
    }
    e1.check(c)?;
    e2.check(c)?;
    let labels = Labels::for_morphisms([e1, e2]);
    Ok(exchange::equivalent(&labels.cells(c, e1)?, &labels.cells(c, e2)?))
}

/// Searches the exchange class of `e1` for `e2`.
pub fn eff_bfs_equal(
    c: &PolygraphCouple,
    e1: &EffMorphism,
    e2: &EffMorphism,
    max_states: usize,
) -> Result<BfsOutcome, RuntimeError> {
    e1.check(c)?;
    e2.check(c)?;
    if !same_shape(e1, e2) {
        return Ok(BfsOutcome::Unequal);
    }
    let labels = Labels::for_morphisms([e1, e2]);
    Ok(exchange::bfs_reaches(&labels.cells(c, e1)?, &labels.cells(c, e2)?, max_states))
}

fn runtime_at(objs: &[ObjId], at: usize) -> Vec<ObjId> {
    let mut v = objs.to_vec();
    v.insert(at, ObjId::runtime());
    v
}

/// Braid slices carrying the runtime from `from` to `to` across `objs`.
fn braid_chain(objs: &[ObjId], from: usize, to: usize) -> Vec<Slice> {
    let r = ObjId::runtime();
    if from <= to {
        (from..to).map(|k| Slice::new(k, braid_name(&r, &objs[k]))).collect()
    } else {
        (to..from).rev().map(|k| Slice::new(k, braid_name(&objs[k], &r))).collect()
    }
}

impl BraidClique {
    pub fn new(objects: Vec<ObjId>, representative_position: usize) -> Result<Self, RuntimeError> {
        if representative_position > objects.len() {
            return Err(RuntimeError::IndexOutOfRange { index: representative_position, len: objects.len() });
        }
        Ok(BraidClique { objects, representative_position })
    }

    pub fn leftmost(objects: Vec<ObjId>) -> Self {
        BraidClique { objects, representative_position: 0 }
    }

    /// The boundary with the runtime inserted at the representative position.
    pub fn boundary(&self) -> Vec<ObjId> {
        runtime_at(&self.objects, self.representative_position)
    }

    /// The braid isomorphism from this component to the one at `position`.
    pub fn braid_to(&self, position: usize) -> Result<Diagram, RuntimeError> {
        if position > self.objects.len() {
            return Err(RuntimeError::IndexOutOfRange { index: position, len: self.objects.len() });
        }
        Ok(Diagram {
            dom: self.boundary(),
            cod: runtime_at(&self.objects, position),
            slices: braid_chain(&self.objects, self.representative_position, position),
        })
    }
}

pub fn embed_monrun(c: &PolygraphCouple, e: &EffMorphism) -> Result<Diagram, RuntimeError> {
    e.check(c)?;
    let mut slices = Vec::new();
    let mut current = e.dom.clone();
    for layer in &e.layers {
        let g = decl(c, layer)?;
        match layer {
            EffLayer::Pure(o, name) => slices.push(Slice::new(o + 1, name.clone())),
            EffLayer::Eff(name, ctx) => {
                slices.extend(braid_chain(&current, 0, *ctx));
                slices.push(Slice::new(*ctx, name.clone()));
            }
        }
        current = apply_slice(&current, layer.position(), &g.inputs, &g.outputs).expect("checked above");
        if let EffLayer::Eff(_, ctx) = layer {
            slices.extend(braid_chain(&current, *ctx, 0));
        }
    }
    Ok(Diagram { dom: runtime_at(&e.dom, 0), cod: runtime_at(&e.cod, 0), slices })
}

fn runtime_position(objs: &[ObjId]) -> Result<usize, RuntimeError> {
    let positions: Vec<usize> = objs.iter().enumerate().filter(|(_, o)| o.is_runtime()).map(|(i, _)| i).collect();
    match positions[..] {
        [p] => Ok(p),
        _ => Err(RuntimeError::RuntimeCount(show(objs))),
    }
}

fn without_runtime(objs: &[ObjId]) -> Vec<ObjId> {
    objs.iter().filter(|o| !o.is_runtime()).cloned().collect()
}

/// Reads a runtime diagram back as an effectful morphism.
///
/// The runtime may sit at any position of either boundary; braids only move it.
pub fn parse_monrun(c: &PolygraphCouple, d: &Diagram) -> Result<EffMorphism, RuntimeError> {
    let run = run_polygraph(c)?;
    d.check(&run)?;
    let mut p = runtime_position(&d.dom)?;
    runtime_position(&d.cod)?;
    let mut layers = Vec::new();
    for (index, s) in d.slices.iter().enumerate() {
        let g = run.gen(&s.gen).expect("checked by the diagram");
        let (o, n_in, n_out) = (s.offset, g.inputs.len(), g.outputs.len());
        match g.kind {
            GenKind::Braid => {
                if g.inputs[0].is_runtime() {
                    p += 1;
                } else {
                    p -= 1;
                }
            }
            GenKind::Effectful => {
                if o != p {
                    return Err(RuntimeError::EffectOffRuntime { index, gen: s.gen.clone() });
                }
                layers.push(EffLayer::eff(s.gen.clone(), p));
            }
            GenKind::Pure => {
                if o + n_in <= p {
                    layers.push(EffLayer::pure(o, s.gen.clone()));
                    p = p + n_out - n_in;
                } else if o > p {
                    layers.push(EffLayer::pure(o - 1, s.gen.clone()));
                } else {
                    return Err(RuntimeError::RuntimeInsideFootprint { index, gen: s.gen.clone() });
                }
            }
        }
    }
    let e = EffMorphism { dom: without_runtime(&d.dom), cod: without_runtime(&d.cod), layers };
    e.check(c)?;
    Ok(e)
}

pub fn monrun_equal(c: &PolygraphCouple, d1: &Diagram, d2: &Diagram) -> Result<bool, RuntimeError> {
    eff_equal(c, &parse_monrun(c, d1)?, &parse_monrun(c, d2)?)
}

/// Component `(i, j)` of the braid clique morphism generated by `e`: the
/// runtime enters at position `i` of the domain and leaves at `j`.
pub fn clique_component(c: &PolygraphCouple, e: &EffMorphism, i: usize, j: usize) -> Result<Diagram, RuntimeError> {
    let into = BraidClique::new(e.dom.clone(), i)?.braid_to(0)?;
    let out = BraidClique::leftmost(e.cod.clone()).braid_to(j)?;
    Ok(into.compose(&embed_monrun(c, e)?)?.compose(&out)?)
}

/// Whether `a` and `b` interchange in both orders: placed side by side, it
/// does not matter which one runs first.
pub fn interchanges(c: &PolygraphCouple, a: &EffMorphism, b: &EffMorphism) -> Result<bool, RuntimeError> {
    let a_first = eff_compose(&eff_whisker(&[], a, &b.dom), &eff_whisker(&a.cod, b, &[]))?;
    let b_first = eff_compose(&eff_whisker(&a.dom, b, &[]), &eff_whisker(&[], a, &b.cod))?;
    let left = eff_equal(c, &a_first, &b_first)?;
    let b_left_first = eff_compose(&eff_whisker(&[], b, &a.dom), &eff_whisker(&b.cod, a, &[]))?;
    let a_right_first = eff_compose(&eff_whisker(&b.dom, a, &[]), &eff_whisker(&[], b, &a.cod))?;
    Ok(left && eff_equal(c, &b_left_first, &a_right_first)?)
}

/// Both centrality equations for the pure `p` against `e`.
pub fn centrality_check(c: &PolygraphCouple, p: &Diagram, e: &EffMorphism) -> Result<bool, RuntimeError> {
    interchanges(c, &lift_pure(c, p)?, e)
}

/// The same equations with an arbitrary morphism in place of the pure one.
pub fn centrality_check_effectful(c: &PolygraphCouple, a: &EffMorphism, e: &EffMorphism) -> Result<bool, RuntimeError> {
    interchanges(c, a, e)
}

/// Every layer that can follow `boundary`.
pub fn applicable_layers(c: &PolygraphCouple, boundary: &[ObjId]) -> Vec<(EffLayer, Vec<ObjId>)> {
    let mut out = Vec::new();
    for (gens, effectful) in [(&c.pure.gens, false), (&c.effectful.gens, true)] {
        for g in gens {
            for o in 0..=boundary.len() {
                if let Some(next) = apply_slice(boundary, o, &g.inputs, &g.outputs) {
                    let layer = if effectful { EffLayer::eff(g.name.clone(), o) } else { EffLayer::pure(o, g.name.clone()) };
                    out.push((layer, next));
                }
            }
        }
    }
    out
}

/// Every morphism from `dom` with at most `max_layers` layers.
pub fn enumerate_eff(c: &PolygraphCouple, dom: &[ObjId], max_layers: usize) -> Vec<EffMorphism> {
    let mut out = Vec::new();
    let mut stack = vec![EffMorphism::identity(dom)];
    while let Some(e) = stack.pop() {
        if e.layers.len() < max_layers {
            for (layer, next) in applicable_layers(c, &e.cod) {
                let mut layers = e.layers.clone();
                layers.push(layer);
                stack.push(EffMorphism { dom: e.dom.clone(), cod: next, layers });
            }
        }
        out.push(e);
    }
    out
}

/// A random morphism from `dom`: up to `max_layers` layers, each chosen
/// uniformly among those that fit the current boundary.
pub fn sample_eff<R: Rng>(c: &PolygraphCouple, dom: &[ObjId], max_layers: usize, rng: &mut R) -> EffMorphism {
    let n = rng.gen_range(0..=max_layers);
    let mut e = EffMorphism::identity(dom);
    for _ in 0..n {
        let options = applicable_layers(c, &e.cod);
        let Some((layer, next)) = options.choose(rng).cloned() else { break };
        e.layers.push(layer);
        e.cod = next;
    }
    e
}

/// Every runtime diagram on `dom` with at most `max_slices` slices.
pub fn enumerate_monrun(c: &PolygraphCouple, dom: &[ObjId], max_slices: usize) -> Result<Vec<Diagram>, RuntimeError> {
    let run = run_polygraph(c)?;
    Ok(diagram::enumerate(&run, dom, max_slices).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygraph::objs;

    fn print() -> PolygraphCouple {
        let mut c = PolygraphCouple::print_example();
        c.pure.gens.push(GenDecl::pure("v", &["A"], &["A"]));
        c
    }

    fn hello_print_world_print(c: &PolygraphCouple, first: &str, second: &str) -> EffMorphism {
        let layers =
            vec![EffLayer::pure(0, first), EffLayer::eff("print", 0), EffLayer::pure(0, second), EffLayer::eff("print", 0)];
        EffMorphism::from_layers(c, vec![], layers).unwrap()
    }

    #[test]
    fn identity_and_composition() {
        let c = print();
        let id = eff_identity(&objs(&["A"]));
        assert!(id.layers.is_empty());
        let p = EffMorphism::generator(&c, "print").unwrap();
        assert_eq!(eff_compose(&id, &p).unwrap(), p);
        let hp = eff_compose(&EffMorphism::generator(&c, "hello").unwrap(), &p).unwrap();
        assert_eq!(hp.layers, vec![EffLayer::pure(0, "hello"), EffLayer::eff("print", 0)]);
        assert!(matches!(eff_compose(&p, &p), Err(RuntimeError::BoundaryMismatch { .. })));
    }

    #[test]
    fn whiskering_shifts_positions() {
        let c = print();
        let p = EffMorphism::generator(&c, "print").unwrap();
        assert_eq!(eff_whisker(&[], &p, &[]), p);
        let w = eff_whisker(&objs(&["A"]), &p, &[]);
        assert_eq!(w.layers, vec![EffLayer::eff("print", 1)]);
        assert_eq!(w.layers.len(), p.layers.len());
        w.check(&c).unwrap();
    }

    #[test]
    fn lift_pure_examples() {
        let c = print();
        assert_eq!(lift_pure(&c, &Diagram::identity(&[])).unwrap(), eff_identity(&[]));
        let hello = Diagram::generator(&c.pure, "hello").unwrap();
        assert_eq!(lift_pure(&c, &hello).unwrap().layers, vec![EffLayer::pure(0, "hello")]);
        let world = Diagram::generator(&c.pure, "world").unwrap();
        let a = lift_pure(&c, &hello.tensor(&world)).unwrap();
        let b = lift_pure(
            &c,
            &Diagram::from_slices(&c.pure, vec![], vec![Slice::new(0, "world"), Slice::new(0, "hello")]).unwrap(),
        )
        .unwrap();
        assert!(eff_equal(&c, &a, &b).unwrap());
        let bad = Diagram { dom: objs(&["A"]), cod: vec![], slices: vec![Slice::new(0, "print")] };
        assert_eq!(lift_pure(&c, &bad), Err(RuntimeError::NotPure("print".into())));
    }

    #[test]
    fn hello_world_is_not_world_hello() {
        let c = print();
        let e1 = hello_print_world_print(&c, "hello", "world");
        let e2 = hello_print_world_print(&c, "world", "hello");
        assert!(!eff_equal(&c, &e1, &e2).unwrap());
        assert_eq!(eff_bfs_equal(&c, &e1, &e2, 10_000).unwrap(), BfsOutcome::Unequal);
        assert!(eff_equal(&c, &e1, &e1).unwrap());
    }

    #[test]
    fn disjoint_pure_layer_commutes_with_effect() {
        let c = print();
        let dom = objs(&["A", "A", "A"]);
        let a = EffMorphism::from_layers(&c, dom.clone(), vec![EffLayer::pure(2, "v"), EffLayer::eff("print", 0)]).unwrap();
        let b = EffMorphism::from_layers(&c, dom, vec![EffLayer::eff("print", 0), EffLayer::pure(1, "v")]).unwrap();
        assert!(eff_equal(&c, &a, &b).unwrap());
        assert_eq!(eff_bfs_equal(&c, &a, &b, 100).unwrap(), BfsOutcome::Equal);
    }

    #[test]
    fn normalize_keeps_effect_order() {
        let c = print();
        let e = hello_print_world_print(&c, "world", "hello");
        let n = eff_normalize(&c, &e).unwrap();
        assert_eq!(n.effect_sequence(), e.effect_sequence());
        assert_eq!(eff_normalize(&c, &n).unwrap(), n);
    }

    #[test]
    fn embed_examples() {
        let c = print();
        let id = eff_identity(&objs(&["A"]));
        assert_eq!(embed_monrun(&c, &id).unwrap(), Diagram::identity(&objs(&["R", "A"])));
        let p0 = EffMorphism::generator(&c, "print").unwrap();
        assert_eq!(embed_monrun(&c, &p0).unwrap().slices, vec![Slice::new(0, "print")]);
        let p1 = eff_whisker(&objs(&["A"]), &p0, &[]);
        let d = embed_monrun(&c, &p1).unwrap();
        assert_eq!(d.slices.iter().filter(|s| s.gen.starts_with("sigma_")).count(), 2);
        assert_eq!(
            d.slices,
            vec![Slice::new(0, "sigma_R_A"), Slice::new(1, "print"), Slice::new(0, "sigma_A_R")]
        );
        d.check(&run_polygraph(&c).unwrap()).unwrap();
    }

    #[test]
    fn parse_examples() {
        let c = print();
        let run = run_polygraph(&c).unwrap();
        let id = Diagram::identity(&objs(&["R", "A"]));
        assert_eq!(parse_monrun(&c, &id).unwrap(), eff_identity(&objs(&["A"])));
        let there_and_back = Diagram::from_slices(
            &run,
            objs(&["R", "A"]),
            vec![Slice::new(0, "sigma_R_A"), Slice::new(0, "sigma_A_R")],
        )
        .unwrap();
        assert_eq!(parse_monrun(&c, &there_and_back).unwrap(), eff_identity(&objs(&["A"])));
        let hp = hello_print_world_print(&c, "hello", "world");
        assert_eq!(parse_monrun(&c, &embed_monrun(&c, &hp).unwrap()).unwrap(), hp);
    }

    #[test]
    fn parse_errors() {
        let c = print();
        let run = run_polygraph(&c).unwrap();
        let two = Diagram::identity(&objs(&["R", "R"]));
        assert!(matches!(parse_monrun(&c, &two), Err(RuntimeError::RuntimeCount(_))));
        let none = Diagram::identity(&objs(&["A"]));
        assert!(matches!(parse_monrun(&c, &none), Err(RuntimeError::RuntimeCount(_))));
        let inside = Diagram::from_slices(&run, objs(&["A", "R"]), vec![Slice::new(1, "hello")]).unwrap();
        // a producer right before the runtime sits left of it
        assert_eq!(parse_monrun(&c, &inside).unwrap().layers, vec![EffLayer::pure(1, "hello")]);
    }

    #[test]
    fn monrun_equality_examples() {
        let c = print();
        let run = run_polygraph(&c).unwrap();
        // hello created left of the runtime and braided across, or created on the right
        let left = Diagram::from_slices(&run, objs(&["R"]), vec![Slice::new(0, "hello"), Slice::new(0, "sigma_A_R")])
            .unwrap();
        let right = Diagram::from_slices(&run, objs(&["R"]), vec![Slice::new(1, "hello")]).unwrap();
        assert!(monrun_equal(&c, &left, &right).unwrap());
        assert!(monrun_equal(&c, &left, &left).unwrap());
        let e1 = embed_monrun(&c, &hello_print_world_print(&c, "hello", "world")).unwrap();
        let e2 = embed_monrun(&c, &hello_print_world_print(&c, "world", "hello")).unwrap();
        assert!(!monrun_equal(&c, &e1, &e2).unwrap());
    }

    #[test]
    fn clique_components() {
        let c = print();
        let p = EffMorphism::generator(&c, "print").unwrap();
        assert_eq!(clique_component(&c, &p, 0, 0).unwrap(), embed_monrun(&c, &p).unwrap());
        let id = eff_identity(&objs(&["A"]));
        let d = clique_component(&c, &id, 1, 0).unwrap();
        assert_eq!(d.slices, vec![Slice::new(0, "sigma_A_R")]);
        assert_eq!(d.dom, objs(&["A", "R"]));
        assert!(matches!(clique_component(&c, &id, 2, 0), Err(RuntimeError::IndexOutOfRange { .. })));
        let hp = hello_print_world_print(&c, "hello", "world");
        let e = eff_whisker(&objs(&["A"]), &hp, &objs(&["A"]));
        for i in 0..=2 {
            for j in 0..=2 {
                let d = clique_component(&c, &e, i, j).unwrap();
                assert!(eff_equal(&c, &parse_monrun(&c, &d).unwrap(), &e).unwrap());
            }
        }
    }

    #[test]
    fn centrality_examples() {
        let c = print();
        let hello = Diagram::generator(&c.pure, "hello").unwrap();
        let p = EffMorphism::generator(&c, "print").unwrap();
        assert!(centrality_check(&c, &hello, &p).unwrap());
        let v = Diagram::generator(&c.pure, "v").unwrap();
        assert!(centrality_check(&c, &v, &lift_pure(&c, &hello).unwrap()).unwrap());
        assert!(!centrality_check_effectful(&c, &p, &p).unwrap());
    }

    #[test]
    fn braid_clique_bounds() {
        assert!(BraidClique::new(objs(&["A"]), 2).is_err());
        let b = BraidClique::new(objs(&["A", "A"]), 2).unwrap();
        assert_eq!(b.boundary(), objs(&["A", "A", "R"]));
        assert_eq!(b.braid_to(0).unwrap().slices.len(), 2);
    }

    #[test]
    fn serde_layers() {
        let e = EffMorphism { dom: vec![], cod: vec![], layers: vec![EffLayer::pure(0, "hello"), EffLayer::eff("print", 0)] };
        let text = serde_json::to_string(&e.layers).unwrap();
        assert_eq!(text, r#"[{"pure":[0,"hello"]},{"eff":["print",0]}]"#);
        let back: Vec<EffLayer> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, e.layers);
    }
}
