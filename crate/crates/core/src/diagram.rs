//! Diagrams of the free strict monoidal category over a polygraph.
//!
//! A [`Diagram`] is a typed list of one-generator [`Slice`]s. Two diagrams
//! are equal when their slice lists are related by exchange moves;
//! [`normalize`] computes a canonical representative of that class and
//! [`bfs_equal`] searches the class directly as an independent check.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use crate::exchange::BfsOutcome;
use crate::exchange::{self, Cell};
use crate::polygraph::{ObjId, Polygraph};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Slice {
    pub offset: usize,
    pub gen: String,
}

impl Slice {
    pub fn new(offset: usize, gen: impl Into<String>) -> Self {
        Slice { offset, gen: gen.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Diagram {
    pub dom: Vec<ObjId>,
    pub cod: Vec<ObjId>,
    pub slices: Vec<Slice>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("boundary mismatch: {left} vs {right}")]
    BoundaryMismatch { left: String, right: String },
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("slice {index} ({gen} at offset {offset}) does not match the boundary {boundary}")]
    IllTyped { index: usize, gen: String, offset: usize, boundary: String },
    #[error("declared codomain {declared} but slices produce {computed}")]
    WrongCodomain { declared: String, computed: String },
}

pub(crate) fn show(objs: &[ObjId]) -> String {
    let names: Vec<&str> = objs.iter().map(ObjId::as_str).collect();
    format!("[{}]", names.join(","))
}

/// Rewrites `boundary` by one generator application, checking the inputs.
pub(crate) fn apply_slice(
    boundary: &[ObjId],
    offset: usize,
    inputs: &[ObjId],
    outputs: &[ObjId],
) -> Option<Vec<ObjId>> {
    let end = offset + inputs.len();
    if end > boundary.len() || boundary[offset..end] != *inputs {
        return None;
    }
    let mut next = Vec::with_capacity(boundary.len() + outputs.len() - inputs.len());
    next.extend_from_slice(&boundary[..offset]);
    next.extend_from_slice(outputs);
    next.extend_from_slice(&boundary[end..]);
    Some(next)
}

impl Diagram {
    pub fn identity(objs: &[ObjId]) -> Self {
        Diagram { dom: objs.to_vec(), cod: objs.to_vec(), slices: Vec::new() }
    }

    /// A single generator on exactly its own boundary.
    pub fn generator(sig: &Polygraph, name: &str) -> Result<Self, DiagramError> {
        let g = sig.gen(name).ok_or_else(|| DiagramError::UnknownGenerator(name.to_string()))?;
        Ok(Diagram { dom: g.inputs.clone(), cod: g.outputs.clone(), slices: vec![Slice::new(0, name)] })
    }

    /// Builds a diagram from slices, computing its codomain.
    pub fn from_slices(sig: &Polygraph, dom: Vec<ObjId>, slices: Vec<Slice>) -> Result<Self, DiagramError> {
        let cod = typecheck(sig, &dom, &slices)?;
        Ok(Diagram { dom, cod, slices })
    }

    /// Checks the typing chain and the declared codomain.
    pub fn check(&self, sig: &Polygraph) -> Result<(), DiagramError> {
        let computed = typecheck(sig, &self.dom, &self.slices)?;
        if computed != self.cod {
            return Err(DiagramError::WrongCodomain { declared: show(&self.cod), computed: show(&computed) });
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    /// `self` followed by `next`.
    pub fn compose(&self, next: &Diagram) -> Result<Diagram, DiagramError> {
        if self.cod != next.dom {
            return Err(DiagramError::BoundaryMismatch { left: show(&self.cod), right: show(&next.dom) });
        }
        let mut slices = self.slices.clone();
        slices.extend(next.slices.iter().cloned());
        Ok(Diagram { dom: self.dom.clone(), cod: next.cod.clone(), slices })
    }

    /// Left-first tensor: `self` runs beside `other.dom`, then `other` beside `self.cod`.
    pub fn tensor(&self, other: &Diagram) -> Diagram {
        let shift = self.cod.len();
        let mut slices = self.slices.clone();
        slices.extend(other.slices.iter().map(|s| Slice::new(s.offset + shift, s.gen.clone())));
        Diagram { dom: concat(&self.dom, &other.dom), cod: concat(&self.cod, &other.cod), slices }
    }

    pub fn whisker(&self, left: &[ObjId], right: &[ObjId]) -> Diagram {
        whisker(left, self, right)
    }

    /// Boundary before each slice, followed by the final boundary.
    pub fn boundaries(&self, sig: &Polygraph) -> Result<Vec<Vec<ObjId>>, DiagramError> {
        let mut out = vec![self.dom.clone()];
        let mut current = self.dom.clone();
        for (index, s) in self.slices.iter().enumerate() {
            let g = sig.gen(&s.gen).ok_or_else(|| DiagramError::UnknownGenerator(s.gen.clone()))?;
            current = apply_slice(&current, s.offset, &g.inputs, &g.outputs).ok_or_else(|| DiagramError::IllTyped {
                index,
                gen: s.gen.clone(),
                offset: s.offset,
                boundary: show(&current),
            })?;
            out.push(current.clone());
        }
        Ok(out)
    }

    /// Multiset of generator names, as a sorted list.
    pub fn generator_counts(&self) -> Vec<String> {
        let mut v: Vec<String> = self.slices.iter().map(|s| s.gen.clone()).collect();
        v.sort();
        v
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} :", show(&self.dom), show(&self.cod))?;
        for s in &self.slices {
            write!(f, " ({},{})", s.offset, s.gen)?;
        }
        Ok(())
    }
}

fn concat(a: &[ObjId], b: &[ObjId]) -> Vec<ObjId> {
    a.iter().chain(b).cloned().collect()
}

fn typecheck(sig: &Polygraph, dom: &[ObjId], slices: &[Slice]) -> Result<Vec<ObjId>, DiagramError> {
    let mut current: Vec<&ObjId> = dom.iter().collect();
    for (index, s) in slices.iter().enumerate() {
        let g = sig.gen(&s.gen).ok_or_else(|| DiagramError::UnknownGenerator(s.gen.clone()))?;
        let end = s.offset + g.inputs.len();
        if end > current.len() || !current[s.offset..end].iter().copied().eq(&g.inputs) {
            let boundary: Vec<ObjId> = current.iter().map(|&o| o.clone()).collect();
            return Err(DiagramError::IllTyped { index, gen: s.gen.clone(), offset: s.offset, boundary: show(&boundary) });
        }
        current.splice(s.offset..end, &g.outputs);
    }
    Ok(current.into_iter().cloned().collect())
}

pub fn identity(objs: &[ObjId]) -> Diagram {
    Diagram::identity(objs)
}

pub fn compose(d1: &Diagram, d2: &Diagram) -> Result<Diagram, DiagramError> {
    d1.compose(d2)
}

pub fn tensor(d1: &Diagram, d2: &Diagram) -> Diagram {
    d1.tensor(d2)
}

pub fn whisker(left: &[ObjId], d: &Diagram, right: &[ObjId]) -> Diagram {
    let shift = left.len();
    Diagram {
        dom: [left, &d.dom, right].concat(),
        cod: [left, &d.cod, right].concat(),
        slices: d.slices.iter().map(|s| Slice::new(s.offset + shift, s.gen.clone())).collect(),
    }
}

/// Generator names in sorted order; cell labels index into this table.
struct Labels<'a>(Vec<&'a str>);

impl<'a> Labels<'a> {
    fn for_diagrams(ds: impl IntoIterator<Item = &'a Diagram>) -> Self {
        let mut names: Vec<&str> = ds.into_iter().flat_map(|d| d.slices.iter().map(|s| s.gen.as_str())).collect();
        names.sort_unstable();
        names.dedup();
        Labels(names)
    }

    fn id(&self, name: &str) -> u32 {
        self.0.binary_search(&name).expect("label registered") as u32
    }

    fn cells(&self, sig: &Polygraph, d: &Diagram) -> Result<Vec<Cell>, DiagramError> {
        d.slices
            .iter()
            .map(|s| {
                let g = sig.gen(&s.gen).ok_or_else(|| DiagramError::UnknownGenerator(s.gen.clone()))?;
                Ok(Cell {
                    offset: s.offset,
                    label: self.id(&s.gen),
                    n_in: g.inputs.len(),
                    n_out: g.outputs.len(),
                    sequential: false,
                })
            })
            .collect()
    }

    fn slices(&self, cells: &[Cell]) -> Vec<Slice> {
        cells.iter().map(|c| Slice::new(c.offset, self.0[c.label as usize])).collect()
    }
}

/// Canonical representative of the exchange class of `d`.
pub fn normalize(sig: &Polygraph, d: &Diagram) -> Result<Diagram, DiagramError> {
    d.check(sig)?;
    let labels = Labels::for_diagrams([d]);
    let cells = labels.cells(sig, d)?;
    let normal = exchange::normalize(&cells);
    Ok(Diagram { dom: d.dom.clone(), cod: d.cod.clone(), slices: labels.slices(&normal) })
}

fn same_generators(d1: &Diagram, d2: &Diagram) -> bool {
    let (a, b) = (&d1.slices, &d2.slices);
    if a.len() != b.len() {
        return false;
    }
    if a.len() <= 16 {
        let count = |v: &[Slice], g: &str| v.iter().filter(|s| s.gen == g).count();
        return a.iter().all(|s| count(a, &s.gen) == count(b, &s.gen));
    }
    fn names(v: &[Slice]) -> Vec<&str> {
        let mut names: Vec<&str> = v.iter().map(|s| s.gen.as_str()).collect();
        names.sort_unstable();
        names
    }
    names(a) == names(b)
}

/// Equality in the free strict monoidal category.
pub fn equal(sig: &Polygraph, d1: &Diagram, d2: &Diagram) -> Result<bool, DiagramError> {
    if d1.dom != d2.dom || d1.cod != d2.cod || !same_generators(d1, d2) {
        return Ok(false);
    }
    d1.check(sig)?;
    d2.check(sig)?;
    let labels = Labels::for_diagrams([d1, d2]);
    Ok(exchange::equivalent(&labels.cells(sig, d1)?, &labels.cells(sig, d2)?))
}

/// Searches the exchange class of `d1` for `d2`, visiting at most `max_states` lists.
pub fn bfs_equal(sig: &Polygraph, d1: &Diagram, d2: &Diagram, max_states: usize) -> Result<BfsOutcome, DiagramError> {
    d1.check(sig)?;
    d2.check(sig)?;
    if d1.dom != d2.dom || d1.cod != d2.cod || d1.generator_counts() != d2.generator_counts() {
        return Ok(BfsOutcome::Unequal);
    }
    let labels = Labels::for_diagrams([d1, d2]);
    Ok(exchange::bfs_reaches(&labels.cells(sig, d1)?, &labels.cells(sig, d2)?, max_states))
}

/// Every well-typed slice list from `dom` with at most `max_slices` slices.
pub fn enumerate(h: &Polygraph, dom: &[ObjId], max_slices: usize) -> impl Iterator<Item = Diagram> {
    let mut out = Vec::new();
    let mut stack = vec![Diagram::identity(dom)];
    while let Some(d) = stack.pop() {
        if d.slices.len() < max_slices {
            for g in &h.gens {
                let width = d.cod.len();
                for offset in 0..=width {
                    if let Some(next) = apply_slice(&d.cod, offset, &g.inputs, &g.outputs) {
                        let mut slices = d.slices.clone();
                        slices.push(Slice::new(offset, g.name.clone()));
                        stack.push(Diagram { dom: d.dom.clone(), cod: next, slices });
                    }
                }
            }
        }
        out.push(d);
    }
    out.sort_by(|a, b| (a.slices.len(), &a.slices).cmp(&(b.slices.len(), &b.slices)));
    out.into_iter()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polygraph::{objs, GenDecl, PolygraphCouple};

    fn pure_print() -> Polygraph {
        let mut p = PolygraphCouple::print_example().pure;
        p.gens.push(GenDecl::pure("v", &["A"], &["A"]));
        p
    }

    #[test]
    fn identities() {
        assert!(Diagram::identity(&[]).is_empty());
        let a = Diagram::identity(&objs(&["A"]));
        assert_eq!((a.dom.clone(), a.cod.clone()), (objs(&["A"]), objs(&["A"])));
        assert_eq!(Diagram::identity(&objs(&["A", "A"])).cod.len(), 2);
        assert_eq!(a.compose(&a).unwrap(), a);
    }

    #[test]
    fn compose_checks_boundaries() {
        let sig = pure_print();
        let hello = Diagram::generator(&sig, "hello").unwrap();
        let v = Diagram::generator(&sig, "v").unwrap();
        let hv = hello.compose(&v).unwrap();
        assert_eq!(hv.slices, vec![Slice::new(0, "hello"), Slice::new(0, "v")]);
        assert!(matches!(v.compose(&hello), Err(DiagramError::BoundaryMismatch { .. })));
    }

    #[test]
    fn tensor_and_whisker() {
        let sig = pure_print();
        let hello = Diagram::generator(&sig, "hello").unwrap();
        let world = Diagram::generator(&sig, "world").unwrap();
        let hw = hello.tensor(&world);
        assert_eq!(hw.slices, vec![Slice::new(0, "hello"), Slice::new(1, "world")]);
        assert_eq!(Diagram::identity(&[]).tensor(&hello), hello);
        assert_eq!(hello.tensor(&Diagram::identity(&[])), hello);
        assert_eq!(whisker(&objs(&["A"]), &Diagram::identity(&[]), &[]), Diagram::identity(&objs(&["A"])));
        assert_eq!(whisker(&[], &hello, &[]), hello);
        assert_eq!(whisker(&objs(&["A"]), &hello, &[]).slices, vec![Slice::new(1, "hello")]);
    }

    #[test]
    fn normalize_examples() {
        let sig = pure_print();
        let d = Diagram::from_slices(&sig, vec![], vec![Slice::new(0, "world"), Slice::new(0, "hello")]).unwrap();
        let n = normalize(&sig, &d).unwrap();
        assert_eq!(n.slices, vec![Slice::new(0, "hello"), Slice::new(1, "world")]);
        let id = Diagram::identity(&objs(&["A"]));
        assert_eq!(normalize(&sig, &id).unwrap(), id);
        let vv = Diagram::from_slices(&sig, objs(&["A"]), vec![Slice::new(0, "v"), Slice::new(0, "v")]).unwrap();
        assert_eq!(normalize(&sig, &vv).unwrap(), vv);
    }

    #[test]
    fn equality_examples() {
        let sig = pure_print();
        let hello = Diagram::generator(&sig, "hello").unwrap();
        let world = Diagram::generator(&sig, "world").unwrap();
        let left_first = hello.tensor(&world);
        // world first, then hello inserted to its left
        let right_first =
            Diagram::from_slices(&sig, vec![], vec![Slice::new(0, "world"), Slice::new(0, "hello")]).unwrap();
        assert!(equal(&sig, &left_first, &right_first).unwrap());
        assert_eq!(bfs_equal(&sig, &left_first, &right_first, 100).unwrap(), BfsOutcome::Equal);
        let id_a = Diagram::identity(&objs(&["A"]));
        assert!(!equal(&sig, &id_a, &Diagram::identity(&objs(&["A", "A"]))).unwrap());
    }

    #[test]
    fn dependent_slices_never_commute() {
        let sig = pure_print();
        let hv = Diagram::from_slices(&sig, vec![], vec![Slice::new(0, "hello"), Slice::new(0, "v")]).unwrap();
        let vh = Diagram::from_slices(&sig, objs(&["A"]), vec![Slice::new(0, "v"), Slice::new(0, "hello")]);
        // different domains, so the second reading is not even comparable
        assert!(vh.is_ok());
        assert_eq!(bfs_equal(&sig, &hv, &hv, 10).unwrap(), BfsOutcome::Equal);
        assert_eq!(bfs_equal(&sig, &hv, &vh.unwrap(), 10).unwrap(), BfsOutcome::Unequal);
    }

    #[test]
    fn bfs_budget_is_reported() {
        let sig = pure_print();
        let names = ["hello", "world", "hello", "world", "hello", "world"];
        let d = Diagram::from_slices(&sig, vec![], names.iter().enumerate().map(|(i, n)| Slice::new(i, *n)).collect())
            .unwrap();
        // same cells emitted right to left
        let target = Diagram::from_slices(&sig, vec![], names.iter().rev().map(|n| Slice::new(0, *n)).collect()).unwrap();
        assert_eq!(bfs_equal(&sig, &d, &target, 1).unwrap(), BfsOutcome::Inconclusive);
        assert_eq!(bfs_equal(&sig, &d, &target, 100_000).unwrap(), BfsOutcome::Equal);
        assert!(equal(&sig, &d, &target).unwrap());
    }

    #[test]
    fn enumerate_small_cases() {
        let sig = PolygraphCouple::print_example().pure;
        let zero: Vec<_> = enumerate(&sig, &[], 0).collect();
        assert_eq!(zero, vec![Diagram::identity(&[])]);
        let one: Vec<_> = enumerate(&sig, &[], 1).collect();
        assert_eq!(one.len(), 3);
        assert!(one.iter().any(|d| d.slices == vec![Slice::new(0, "world")]));
        let empty = Polygraph::new(objs(&["A"]), vec![]);
        assert_eq!(enumerate(&empty, &objs(&["A"]), 3).count(), 1);
    }
}
