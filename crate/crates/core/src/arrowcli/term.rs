//! Text terms for morphisms.
//!
//! ```text
//! term   := tensor (';' tensor)*
//! tensor := atom ('*' atom)*
//! atom   := name | 'id' '(' object* ')' | '(' term ')'
//! ```
//!
//! `;` is diagrammatic composition. In the effectful reading `f * g` runs `f`
//! first: it is `(f ⊗ id) ; (id ⊗ g)`.

use std::fmt;

use thiserror::Error;

use super::lex::{Cursor, Pos, Tok};
use crate::diagram::{Diagram, DiagramError, Slice};
use crate::polygraph::{ObjId, Polygraph, PolygraphCouple};
use crate::runtime::{eff_compose, eff_whisker, EffMorphism, RuntimeError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Gen(String, Pos),
    Id(Vec<ObjId>),
    Seq(Vec<Term>),
    Tensor(Vec<Term>),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TermError {
    #[error("{pos}: {message}")]
    Syntax { pos: Pos, message: String },
    #[error("{pos}: unknown generator {name}")]
    UnknownGenerator { name: String, pos: Pos },
    #[error(transparent)]
    Runtime(#[from] RuntimeError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

impl From<(Pos, String)> for TermError {
    fn from((pos, message): (Pos, String)) -> Self {
        TermError::Syntax { pos, message }
    }
}

pub fn parse_term(text: &str) -> Result<Term, TermError> {
    let mut cur = Cursor::new(text)?;
    let t = seq(&mut cur)?;
    if !cur.done() {
        return Err(cur.unexpected("`;`, `*` or end of input").into());
    }
    Ok(t)
}

fn seq(cur: &mut Cursor) -> Result<Term, TermError> {
    let mut parts = vec![tensor(cur)?];
    while cur.eat_sym(";") {
        parts.push(tensor(cur)?);
    }
    Ok(if parts.len() == 1 { parts.pop().expect("one part") } else { Term::Seq(parts) })
}

fn tensor(cur: &mut Cursor) -> Result<Term, TermError> {
    let mut parts = vec![atom(cur)?];
    while cur.eat_sym("*") {
        parts.push(atom(cur)?);
    }
    Ok(if parts.len() == 1 { parts.pop().expect("one part") } else { Term::Tensor(parts) })
}

fn atom(cur: &mut Cursor) -> Result<Term, TermError> {
    if cur.eat_sym("(") {
        let t = seq(cur)?;
        cur.expect_sym(")")?;
        return Ok(t);
    }
    if cur.is_word("id") && cur.peek_at(1) == Some(&Tok::Sym("(")) {
        cur.next();
        cur.next();
        let mut objs = Vec::new();
        while !cur.eat_sym(")") {
            if cur.eat_sym(",") {
                continue;
            }
            objs.push(ObjId::new(cur.ident("an object name")?.0));
        }
        return Ok(Term::Id(objs));
    }
    let (name, pos) = cur.ident("a generator, `id(...)` or `(`")?;
    Ok(Term::Gen(name, pos))
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, ts: &[Term], sep: &str, wrap: fn(&Term) -> bool| {
            for (i, t) in ts.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                if wrap(t) {
                    write!(f, "({t})")?;
                } else {
                    write!(f, "{t}")?;
                }
            }
            Ok(())
        };
        match self {
            Term::Gen(g, _) => f.write_str(g),
            Term::Id(objs) => {
                let names: Vec<&str> = objs.iter().map(ObjId::as_str).collect();
                write!(f, "id({})", names.join(" "))
            }
            Term::Seq(ts) => join(f, ts, " ; ", |_| false),
            Term::Tensor(ts) => join(f, ts, " * ", |t| matches!(t, Term::Seq(_))),
        }
    }
}

/// Reads a term as a free effectful morphism.
pub fn term_to_eff(c: &PolygraphCouple, t: &Term) -> Result<EffMorphism, TermError> {
    match t {
        Term::Gen(name, pos) => {
            if c.gen(name).is_none() {
                return Err(TermError::UnknownGenerator { name: name.clone(), pos: *pos });
            }
            Ok(EffMorphism::generator(c, name)?)
        }
        Term::Id(objs) => Ok(EffMorphism::identity(objs)),
        Term::Seq(ts) => {
            let mut parts = ts.iter().map(|t| term_to_eff(c, t));
            let first = parts.next().expect("sequences are non-empty")?;
            parts.try_fold(first, |acc, next| Ok(eff_compose(&acc, &next?)?))
        }
        Term::Tensor(ts) => {
            let mut parts = ts.iter().map(|t| term_to_eff(c, t));
            let first = parts.next().expect("tensors are non-empty")?;
            parts.try_fold(first, |acc, next| {
                let next = next?;
                let left = eff_whisker(&[], &acc, &next.dom);
                Ok(eff_compose(&left, &eff_whisker(&acc.cod, &next, &[]))?)
            })
        }
    }
}

/// Reads a term as a diagram of the free strict monoidal category on `sig`.
pub fn term_to_diagram(sig: &Polygraph, t: &Term) -> Result<Diagram, TermError> {
    match t {
        Term::Gen(name, pos) => {
            if sig.gen(name).is_none() {
                return Err(TermError::UnknownGenerator { name: name.clone(), pos: *pos });
            }
            Ok(Diagram::generator(sig, name)?)
        }
        Term::Id(objs) => Ok(Diagram::identity(objs)),
        Term::Seq(ts) => {
            let mut parts = ts.iter().map(|t| term_to_diagram(sig, t));
            let first = parts.next().expect("sequences are non-empty")?;
            parts.try_fold(first, |acc, next| Ok(acc.compose(&next?)?))
        }
        Term::Tensor(ts) => {
            let mut parts = ts.iter().map(|t| term_to_diagram(sig, t));
            let first = parts.next().expect("tensors are non-empty")?;
            parts.try_fold(first, |acc, next| Ok(acc.tensor(&next?)))
        }
    }
}

fn layer_term(before: &[ObjId], offset: usize, gen: &str, n_in: usize) -> Term {
    let mut parts = Vec::new();
    if offset > 0 {
        parts.push(Term::Id(before[..offset].to_vec()));
    }
    parts.push(Term::Gen(gen.to_string(), Pos::default()));
    if offset + n_in < before.len() {
        parts.push(Term::Id(before[offset + n_in..].to_vec()));
    }
    if parts.len() == 1 {
        parts.pop().expect("one part")
    } else {
        Term::Tensor(parts)
    }
}

fn layered(dom: &[ObjId], layers: Vec<Term>) -> Term {
    match layers.len() {
        0 => Term::Id(dom.to_vec()),
        1 => layers.into_iter().next().expect("one layer"),
        _ => Term::Seq(layers),
    }
}

/// One whiskered generator per layer; parsing it back gives `e` again.
pub fn eff_to_term(c: &PolygraphCouple, e: &EffMorphism) -> Result<Term, TermError> {
    let bounds = e.boundaries(c)?;
    let layers = e
        .layers
        .iter()
        .enumerate()
        .map(|(k, l)| {
            let g = c.gen(l.gen()).expect("checked by boundaries");
            layer_term(&bounds[k], l.position(), l.gen(), g.inputs.len())
        })
        .collect();
    Ok(layered(&e.dom, layers))
}

pub fn diagram_to_term(sig: &Polygraph, d: &Diagram) -> Result<Term, TermError> {
    let bounds = d.boundaries(sig)?;
    let layers = d
        .slices
        .iter()
        .enumerate()
        .map(|(k, s): (usize, &Slice)| {
            let g = sig.gen(&s.gen).expect("checked by boundaries");
            layer_term(&bounds[k], s.offset, &s.gen, g.inputs.len())
        })
        .collect();
    Ok(layered(&d.dom, layers))
}

/// Parses and elaborates in one step.
pub fn eff_term(c: &PolygraphCouple, text: &str) -> Result<EffMorphism, TermError> {
    term_to_eff(c, &parse_term(text)?)
}

pub fn diagram_term(sig: &Polygraph, text: &str) -> Result<Diagram, TermError> {
    term_to_diagram(sig, &parse_term(text)?)
}
