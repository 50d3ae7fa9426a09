//! Arrow do-notation programs.
//!
//! ```text
//! program := [name '='] 'proc' pattern '->' body
//! body    := 'return' expr | 'do' '{' (stmt ';')* 'return' expr '}'
//! stmt    := pattern '<-' name '-<' expr
//!          | 'let' pattern '=' name expr
//! pattern := var [':' object] | '_' | '()' | '(' pattern (',' pattern)* ')'
//! expr    := var | name '(' [expr (',' expr)*] ')' | '()' | '(' expr (',' expr)* ')'
//! ```
//!
//! A variable is one wire. `_` and `()` bind nothing. Inside expressions
//! `name(...)` applies a pure generator.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use super::lex::{Cursor, Pos, Tok};
use crate::polygraph::{GenDecl, GenKind, ObjId, PolygraphCouple};
use crate::runtime::{eff_normalize, EffLayer, EffMorphism, RuntimeError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pattern {
    Var { name: String, ty: Option<ObjId>, pos: Pos },
    Unit,
    Wild,
    Tuple(Vec<Pattern>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Var(String, Pos),
    Unit,
    Tuple(Vec<Expr>),
    App(String, Box<Expr>, Pos),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stmt {
    Bind { pattern: Pattern, arrow: String, arg: Expr, pos: Pos },
    Let { pattern: Pattern, func: String, arg: Expr, pos: Pos },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub name: Option<String>,
    pub input: Pattern,
    pub stmts: Vec<Stmt>,
    pub ret: Expr,
    pub ret_pos: Pos,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ProgramError {
    #[error("{pos}: {message}")]
    Syntax { pos: Pos, message: String },
    #[error("{pos}: {name} is bound twice")]
    DuplicateBinder { name: String, pos: Pos },
    #[error("{pos}: {name} is not bound")]
    Unbound { name: String, pos: Pos },
    #[error("{0}")]
    Linearity(String),
    #[error("{pos}: {what} expects {expected} wires, got {found}")]
    Arity { what: String, expected: usize, found: usize, pos: Pos },
    #[error("{pos}: unknown generator {name}")]
    UnknownGenerator { name: String, pos: Pos },
    #[error("{pos}: {name} is pure; bind it with `let`")]
    NotEffectful { name: String, pos: Pos },
    #[error("{pos}: {name} is effectful; only pure generators may be applied in expressions")]
    NotPure { name: String, pos: Pos },
    #[error("{pos}: {what} expects {expected}, got {found}")]
    TypeMismatch { what: String, expected: String, found: String, pos: Pos },
    #[error("{pos}: cannot infer the type of {name}; annotate it as `{name} : Object`")]
    Uninferred { name: String, pos: Pos },
    #[error("{pos}: wires must be permuted here and swap generators are disabled")]
    NeedsSwaps { pos: Pos },
    #[error("{pos}: {name} would clash with an existing generator")]
    SwapClash { name: String, pos: Pos },
    #[error(transparent)]
    Runtime(#[from] RuntimeError),
}

impl From<(Pos, String)> for ProgramError {
    fn from((pos, message): (Pos, String)) -> Self {
        ProgramError::Syntax { pos, message }
    }
}

type Parsed<T> = Result<T, ProgramError>;

pub fn parse_program(text: &str) -> Parsed<Program> {
    let mut cur = Cursor::new(text)?;
    let name = if matches!(cur.peek(), Some(Tok::Ident(s)) if s != "proc") && cur.peek_at(1) == Some(&Tok::Sym("=")) {
        let (n, _) = cur.ident("a program name")?;
        cur.next();
        Some(n)
    } else {
        None
    };
    cur.expect_word("proc")?;
    let input = pattern(&mut cur)?;
    cur.expect_sym("->")?;
    let mut stmts = Vec::new();
    let ret_pos;
    let ret;
    if cur.is_word("do") {
        cur.next();
        cur.expect_sym("{")?;
        loop {
            if cur.is_word("return") {
                ret_pos = cur.pos();
                cur.next();
                ret = expr(&mut cur)?;
                cur.eat_sym(";");
                cur.expect_sym("}")?;
                break;
            }
            stmts.push(stmt(&mut cur)?);
            cur.expect_sym(";")?;
        }
    } else {
        ret_pos = cur.pos();
        cur.expect_word("return")?;
        ret = expr(&mut cur)?;
    }
    if !cur.done() {
        return Err(cur.unexpected("end of input").into());
    }
    Ok(Program { name, input, stmts, ret, ret_pos })
}

fn pattern(cur: &mut Cursor) -> Parsed<Pattern> {
    if cur.eat_sym("_") {
        return Ok(Pattern::Wild);
    }
    if cur.eat_sym("(") {
        if cur.eat_sym(")") {
            return Ok(Pattern::Unit);
        }
        let mut parts = vec![pattern(cur)?];
        while cur.eat_sym(",") {
            parts.push(pattern(cur)?);
        }
        cur.expect_sym(")")?;
        return Ok(if parts.len() == 1 { parts.pop().expect("one part") } else { Pattern::Tuple(parts) });
    }
    let (name, pos) = cur.ident("a pattern")?;
    check_var(&name, pos)?;
    let ty = if cur.eat_sym(":") { Some(ObjId::new(cur.ident("an object name")?.0)) } else { None };
    Ok(Pattern::Var { name, ty, pos })
}

const KEYWORDS: [&str; 5] = ["proc", "do", "return", "let", "id"];

fn check_var(name: &str, pos: Pos) -> Parsed<()> {
    if KEYWORDS.contains(&name) {
        return Err(ProgramError::Syntax { pos, message: format!("`{name}` is a keyword") });
    }
    Ok(())
}

fn expr(cur: &mut Cursor) -> Parsed<Expr> {
    if cur.eat_sym("(") {
        if cur.eat_sym(")") {
            return Ok(Expr::Unit);
        }
        let mut parts = vec![expr(cur)?];
        while cur.eat_sym(",") {
            parts.push(expr(cur)?);
        }
        cur.expect_sym(")")?;
        return Ok(if parts.len() == 1 { parts.pop().expect("one part") } else { Expr::Tuple(parts) });
    }
    let (name, pos) = cur.ident("an expression")?;
    check_var(&name, pos)?;
    if cur.is_sym("(") {
        let arg = expr(cur)?;
        return Ok(Expr::App(name, Box::new(arg), pos));
    }
    Ok(Expr::Var(name, pos))
}

fn stmt(cur: &mut Cursor) -> Parsed<Stmt> {
    let pos = cur.pos();
    if cur.is_word("let") {
        cur.next();
        let pattern = pattern(cur)?;
        cur.expect_sym("=")?;
        let (func, _) = cur.ident("a pure generator")?;
        let arg = expr(cur)?;
        return Ok(Stmt::Let { pattern, func, arg, pos });
    }
    let pattern = pattern(cur)?;
    cur.expect_sym("<-")?;
    let (arrow, _) = cur.ident("an effectful generator")?;
    cur.expect_sym("-<")?;
    let arg = expr(cur)?;
    Ok(Stmt::Bind { pattern, arrow, arg, pos })
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Var { name, ty: Some(t), .. } => write!(f, "{name} : {t}"),
            Pattern::Var { name, ty: None, .. } => f.write_str(name),
            Pattern::Unit => f.write_str("()"),
            Pattern::Wild => f.write_str("_"),
            Pattern::Tuple(ps) => {
                let parts: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                write!(f, "({})", parts.join(", "))
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(v, _) => f.write_str(v),
            Expr::Unit => f.write_str("()"),
            Expr::Tuple(es) => {
                let parts: Vec<String> = es.iter().map(|e| e.to_string()).collect();
                write!(f, "({})", parts.join(", "))
            }
            Expr::App(g, arg, _) => match arg.as_ref() {
                Expr::Unit | Expr::Tuple(_) => write!(f, "{g}{arg}"),
                other => write!(f, "{g}({other})"),
            },
        }
    }
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Bind { pattern, arrow, arg, .. } => write!(f, "{pattern} <- {arrow} -< {arg}"),
            Stmt::Let { pattern, func, arg, .. } => match arg {
                Expr::Unit | Expr::Tuple(_) => write!(f, "let {pattern} = {func}{arg}"),
                _ => write!(f, "let {pattern} = {func} {arg}"),
            },
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = &self.name {
            write!(f, "{n} = ")?;
        }
        write!(f, "proc {} -> ", self.input)?;
        if self.stmts.is_empty() {
            return writeln!(f, "return {}", self.ret);
        }
        writeln!(f, "do {{")?;
        for s in &self.stmts {
            writeln!(f, "  {s};")?;
        }
        writeln!(f, "  return {}", self.ret)?;
        writeln!(f, "}}")
    }
}

fn pattern_vars<'a>(p: &'a Pattern, out: &mut Vec<(&'a str, Option<&'a ObjId>, Pos)>) {
    match p {
        Pattern::Var { name, ty, pos } => out.push((name, ty.as_ref(), *pos)),
        Pattern::Unit | Pattern::Wild => {}
        Pattern::Tuple(ps) => ps.iter().for_each(|q| pattern_vars(q, out)),
    }
}

fn expr_vars<'a>(e: &'a Expr, out: &mut Vec<(&'a str, Pos)>) {
    match e {
        Expr::Var(v, pos) => out.push((v, *pos)),
        Expr::Unit => {}
        Expr::Tuple(es) => es.iter().for_each(|x| expr_vars(x, out)),
        Expr::App(_, arg, _) => expr_vars(arg, out),
    }
}

impl Stmt {
    fn parts(&self) -> (&Pattern, &str, &Expr, Pos) {
        match self {
            Stmt::Bind { pattern, arrow, arg, pos } => (pattern, arrow, arg, *pos),
            Stmt::Let { pattern, func, arg, pos } => (pattern, func, arg, *pos),
        }
    }
}

fn bind<'a>(pat: &'a Pattern, uses: &mut BTreeMap<&'a str, usize>, order: &mut Vec<&'a str>) -> Parsed<()> {
    let mut vs = Vec::new();
    pattern_vars(pat, &mut vs);
    for (v, _, pos) in vs {
        if uses.contains_key(v) {
            return Err(ProgramError::DuplicateBinder { name: v.to_string(), pos });
        }
        uses.insert(v, 0);
        order.push(v);
    }
    Ok(())
}

fn consume(e: &Expr, uses: &mut BTreeMap<&str, usize>) -> Parsed<()> {
    let mut vs = Vec::new();
    expr_vars(e, &mut vs);
    for (v, pos) in vs {
        match uses.get_mut(v) {
            Some(n) => *n += 1,
            None => return Err(ProgramError::Unbound { name: v.to_string(), pos }),
        }
    }
    Ok(())
}

/// Every variable is bound once, and used exactly once after its binding.
pub fn check_linear(p: &Program) -> Parsed<()> {
    let mut uses: BTreeMap<&str, usize> = BTreeMap::new();
    let mut order: Vec<&str> = Vec::new();
    bind(&p.input, &mut uses, &mut order)?;
    for s in &p.stmts {
        let (pat, _, arg, _) = s.parts();
        consume(arg, &mut uses)?;
        bind(pat, &mut uses, &mut order)?;
    }
    consume(&p.ret, &mut uses)?;
    let overused = order.iter().filter(|v| uses[*v] > 1).map(|v| match uses[v] {
        2 => format!("{v} used twice"),
        n => format!("{v} used {n} times"),
    });
    let unused = order.iter().filter(|v| uses[*v] == 0).map(|v| format!("{v} unused"));
    let problems: Vec<String> = overused.chain(unused).collect();
    if problems.is_empty() {
        Ok(())
    } else {
        Err(ProgramError::Linearity(problems.join(" / ")))
    }
}

/// Name of the formal swap generator `X Y -> Y X`.
pub fn swap_name(x: &ObjId, y: &ObjId) -> String {
    format!("swap_{x}_{y}")
}

/// `c` with a formal swap generator for every ordered pair of objects.
pub fn with_all_swaps(c: &PolygraphCouple) -> PolygraphCouple {
    let mut out = c.clone();
    for x in c.objects() {
        for y in c.objects() {
            out.ensure_pure(GenDecl::new(swap_name(x, y), vec![x.clone(), y.clone()], vec![y.clone(), x.clone()], GenKind::Pure));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ElaborateOptions {
    pub swaps: bool,
}

impl Default for ElaborateOptions {
    fn default() -> Self {
        ElaborateOptions { swaps: true }
    }
}

/// The compiled morphism, and the couple it lives over: the input couple
/// plus any swap generators the routing needed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Elaborated {
    pub couple: PolygraphCouple,
    pub morphism: EffMorphism,
}

#[derive(Debug, Clone)]
struct Wire {
    id: usize,
    obj: ObjId,
}

struct Elab {
    couple: PolygraphCouple,
    opts: ElaborateOptions,
    wires: Vec<Wire>,
    names: HashMap<String, usize>,
    fresh: usize,
    dom: Vec<ObjId>,
    layers: Vec<EffLayer>,
}

/// Compiles `p` over `c`. Unannotated input variables take their type from
/// the generator port they first feed.
pub fn elaborate(p: &Program, c: &PolygraphCouple, opts: ElaborateOptions) -> Parsed<Elaborated> {
    check_linear(p)?;
    let mut types: HashMap<String, ObjId> = HashMap::new();
    infer_inputs(p, c, &mut types)?;
    let mut el = Elab {
        couple: c.clone(),
        opts,
        wires: Vec::new(),
        names: HashMap::new(),
        fresh: 0,
        dom: Vec::new(),
        layers: Vec::new(),
    };
    let mut inputs = Vec::new();
    pattern_vars(&p.input, &mut inputs);
    for (v, ty, pos) in inputs {
        let obj = match ty {
            Some(t) => t.clone(),
            None => types.get(v).cloned().ok_or(ProgramError::Uninferred { name: v.to_string(), pos })?,
        };
        let id = el.new_wire(Some(v));
        el.wires.push(Wire { id, obj: obj.clone() });
        el.dom.push(obj);
    }
    for s in &p.stmts {
        el.stmt(s)?;
    }
    let out = el.eval(&p.ret, el.wires.len())?;
    el.route_all(&out, p.ret_pos)?;
    let morphism = EffMorphism::from_layers(&el.couple, el.dom.clone(), el.layers.clone())?;
    let morphism = eff_normalize(&el.couple, &morphism)?;
    Ok(Elaborated { couple: el.couple, morphism })
}

fn gen_inputs(c: &PolygraphCouple, name: &str, pos: Pos) -> Parsed<Vec<ObjId>> {
    c.gen(name).map(|g| g.inputs.clone()).ok_or(ProgramError::UnknownGenerator { name: name.to_string(), pos })
}

fn arity(c: &PolygraphCouple, e: &Expr) -> Parsed<usize> {
    Ok(match e {
        Expr::Var(..) => 1,
        Expr::Unit => 0,
        Expr::Tuple(es) => es.iter().map(|x| arity(c, x)).sum::<Parsed<usize>>()?,
        Expr::App(g, _, pos) => {
            c.gen(g).map(|d| d.outputs.len()).ok_or(ProgramError::UnknownGenerator { name: g.clone(), pos: *pos })?
        }
    })
}

/// Walks `e` against the objects it must produce, recording variable types.
fn infer_expr(c: &PolygraphCouple, e: &Expr, want: &[ObjId], types: &mut HashMap<String, ObjId>) -> Parsed<()> {
    match e {
        Expr::Var(v, _) => {
            if let [o] = want {
                types.entry(v.clone()).or_insert_with(|| o.clone());
            }
        }
        Expr::Unit => {}
        Expr::Tuple(es) => {
            let mut at = 0;
            for x in es {
                let n = arity(c, x)?;
                if at + n <= want.len() {
                    infer_expr(c, x, &want[at..at + n], types)?;
                }
                at += n;
            }
        }
        Expr::App(g, arg, pos) => {
            let ins = gen_inputs(c, g, *pos)?;
            infer_expr(c, arg, &ins, types)?;
        }
    }
    Ok(())
}

fn infer_inputs(p: &Program, c: &PolygraphCouple, types: &mut HashMap<String, ObjId>) -> Parsed<()> {
    for s in &p.stmts {
        let (_, g, arg, pos) = s.parts();
        let ins = gen_inputs(c, g, pos)?;
        infer_expr(c, arg, &ins, types)?;
    }
    infer_expr(c, &p.ret, &[], types)
}

fn show_objs(objs: &[ObjId]) -> String {
    let names: Vec<&str> = objs.iter().map(ObjId::as_str).collect();
    format!("[{}]", names.join(","))
}

impl Elab {
    fn new_wire(&mut self, name: Option<&str>) -> usize {
        let id = self.fresh;
        self.fresh += 1;
        if let Some(n) = name {
            self.names.insert(n.to_string(), id);
        }
        id
    }

    fn position(&self, id: usize) -> usize {
        self.wires.iter().position(|w| w.id == id).expect("live wire")
    }

    fn first_var_position(&self, e: &Expr) -> Option<usize> {
        let mut vs = Vec::new();
        expr_vars(e, &mut vs);
        vs.first().map(|(v, _)| self.position(self.names[*v]))
    }

    /// Produces the wires of `e`, emitting pure layers for applications.
    /// Zero-input applications put their outputs at `hint`.
    fn eval(&mut self, e: &Expr, hint: usize) -> Parsed<Vec<usize>> {
        match e {
            Expr::Var(v, _) => Ok(vec![self.names[v.as_str()]]),
            Expr::Unit => Ok(vec![]),
            Expr::Tuple(es) => {
                let mut out: Vec<usize> = Vec::new();
                for (k, x) in es.iter().enumerate() {
                    let h = match out.last() {
                        Some(&w) => self.position(w) + 1,
                        None => es[k..].iter().find_map(|y| self.first_var_position(y)).unwrap_or(hint),
                    };
                    out.extend(self.eval(x, h)?);
                }
                Ok(out)
            }
            Expr::App(g, arg, pos) => {
                let decl = match (self.couple.pure_gen(g), self.couple.effectful_gen(g)) {
                    (Some(d), _) => d.clone(),
                    (None, Some(_)) => return Err(ProgramError::NotPure { name: g.clone(), pos: *pos }),
                    _ => return Err(ProgramError::UnknownGenerator { name: g.clone(), pos: *pos }),
                };
                let h = self.first_var_position(arg).unwrap_or(hint);
                let ins = self.eval(arg, h)?;
                let at = self.apply(&decl, &ins, h, *pos, g)?;
                Ok((at..at + decl.outputs.len()).map(|k| self.wires[k].id).collect())
            }
        }
    }

    /// Routes `ins` together, applies `decl` to them and returns the offset
    /// of its outputs.
    fn apply(&mut self, decl: &GenDecl, ins: &[usize], hint: usize, pos: Pos, what: &str) -> Parsed<usize> {
        if ins.len() != decl.inputs.len() {
            return Err(ProgramError::Arity {
                what: what.to_string(),
                expected: decl.inputs.len(),
                found: ins.len(),
                pos,
            });
        }
        let offset = if ins.is_empty() { hint.min(self.wires.len()) } else { self.route(ins, pos)? };
        let found: Vec<ObjId> = self.wires[offset..offset + ins.len()].iter().map(|w| w.obj.clone()).collect();
        if found != decl.inputs {
            return Err(ProgramError::TypeMismatch {
                what: what.to_string(),
                expected: show_objs(&decl.inputs),
                found: show_objs(&found),
                pos,
            });
        }
        self.layers.push(match decl.kind {
            GenKind::Effectful => EffLayer::eff(decl.name.clone(), offset),
            _ => EffLayer::pure(offset, decl.name.clone()),
        });
        let outs: Vec<Wire> = decl
            .outputs
            .iter()
            .map(|o| {
                let id = self.new_wire(None);
                Wire { id, obj: o.clone() }
            })
            .collect();
        self.wires.splice(offset..offset + ins.len(), outs);
        Ok(offset)
    }

    /// Makes `ins` contiguous and in order, starting where the block of
    /// wires before the first one ends. Returns that offset.
    fn route(&mut self, ins: &[usize], pos: Pos) -> Parsed<usize> {
        let first = self.position(ins[0]);
        let before = self.wires[..first].iter().filter(|w| !ins.contains(&w.id)).count();
        let mut rank: HashMap<usize, usize> = HashMap::new();
        for (k, w) in self.wires.iter().filter(|w| !ins.contains(&w.id)).enumerate() {
            rank.insert(w.id, if k < before { k } else { k + ins.len() });
        }
        for (i, &w) in ins.iter().enumerate() {
            rank.insert(w, before + i);
        }
        self.sort_by_rank(&rank, pos)?;
        Ok(before)
    }

    /// Permutes the whole boundary into the order of `out`.
    fn route_all(&mut self, out: &[usize], pos: Pos) -> Parsed<()> {
        let rank: HashMap<usize, usize> = out.iter().enumerate().map(|(i, &w)| (w, i)).collect();
        self.sort_by_rank(&rank, pos)
    }

    /// Bubble sort with one swap generator per adjacent transposition.
    fn sort_by_rank(&mut self, rank: &HashMap<usize, usize>, pos: Pos) -> Parsed<()> {
        let n = self.wires.len();
        for pass in 0..n {
            let mut moved = false;
            for k in 0..n.saturating_sub(1 + pass) {
                if rank[&self.wires[k].id] > rank[&self.wires[k + 1].id] {
                    if !self.opts.swaps {
                        return Err(ProgramError::NeedsSwaps { pos });
                    }
                    let (x, y) = (self.wires[k].obj.clone(), self.wires[k + 1].obj.clone());
                    let name = swap_name(&x, &y);
                    let decl = GenDecl::new(name.clone(), vec![x.clone(), y.clone()], vec![y, x], GenKind::Pure);
                    match self.couple.gen(&name) {
                        Some(existing) if *existing != decl => return Err(ProgramError::SwapClash { name, pos }),
                        Some(_) => {}
                        None => self.couple.pure.gens.push(decl),
                    }
                    self.layers.push(EffLayer::pure(k, name));
                    self.wires.swap(k, k + 1);
                    moved = true;
                }
            }
            if !moved {
                break;
            }
        }
        Ok(())
    }

    fn stmt(&mut self, s: &Stmt) -> Parsed<()> {
        let (pat, g, arg, pos) = s.parts();
        let decl = match (s, self.couple.pure_gen(g), self.couple.effectful_gen(g)) {
            (Stmt::Bind { .. }, _, Some(d)) | (Stmt::Let { .. }, Some(d), _) => d.clone(),
            (Stmt::Bind { .. }, Some(_), None) => return Err(ProgramError::NotEffectful { name: g.to_string(), pos }),
            (Stmt::Let { .. }, None, Some(_)) => return Err(ProgramError::NotPure { name: g.to_string(), pos }),
            _ => return Err(ProgramError::UnknownGenerator { name: g.to_string(), pos }),
        };
        let hint = self.first_var_position(arg).unwrap_or(self.wires.len());
        let ins = self.eval(arg, hint)?;
        let at = self.apply(&decl, &ins, hint, pos, g)?;
        let mut vs = Vec::new();
        pattern_vars(pat, &mut vs);
        if vs.len() != decl.outputs.len() {
            return Err(ProgramError::Arity {
                what: format!("the pattern of {g}"),
                expected: decl.outputs.len(),
                found: vs.len(),
                pos,
            });
        }
        for (k, (v, ty, vpos)) in vs.into_iter().enumerate() {
            let w = &self.wires[at + k];
            if let Some(t) = ty {
                if *t != w.obj {
                    return Err(ProgramError::TypeMismatch {
                        what: v.to_string(),
                        expected: t.to_string(),
                        found: w.obj.to_string(),
                        pos: vpos,
                    });
                }
            }
            self.names.insert(v.to_string(), w.id);
        }
        Ok(())
    }
}

/// Parses, checks and compiles.
pub fn compile(text: &str, c: &PolygraphCouple, opts: ElaborateOptions) -> Parsed<Elaborated> {
    elaborate(&parse_program(text)?, c, opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrowcli::term::eff_term;
    use crate::polygraph::objs;
    use crate::runtime::eff_equal;

    const HELLO_WORLD: &str = "proc () -> do { _ <- print -< hello(); _ <- print -< world(); return () }";
    const WORLD_HELLO: &str = "proc () -> do { _ <- print -< world(); _ <- print -< hello(); return () }";

    fn print() -> PolygraphCouple {
        PolygraphCouple::print_example()
    }

    #[test]
    fn trivial_program() {
        let p = parse_program("proc x -> return x").unwrap();
        assert!(p.stmts.is_empty());
        assert_eq!(p.ret, Expr::Var("x".into(), Pos::default()));
    }

    #[test]
    fn one_bind() {
        let p = parse_program("proc x -> do { y <- f -< x; return y }").unwrap();
        assert_eq!(p.stmts.len(), 1);
        let Stmt::Bind { arrow, .. } = &p.stmts[0] else { panic!("expected a bind") };
        assert_eq!(arrow, "f");
    }

    #[test]
    fn linearity_errors_name_both_variables() {
        let p = parse_program("proc x -> do { y <- f -< x; return x }").unwrap();
        assert_eq!(check_linear(&p), Err(ProgramError::Linearity("x used twice / y unused".into())));
    }

    #[test]
    fn duplicate_binders_are_rejected() {
        let p = parse_program("proc (x : A, x : A) -> return (x, x)").unwrap();
        assert!(matches!(check_linear(&p), Err(ProgramError::DuplicateBinder { .. })));
    }

    #[test]
    fn syntax_errors_have_line_and_column() {
        let err = parse_program("proc x -> do {\n  y <- f x;\n  return y }").unwrap_err();
        match err {
            ProgramError::Syntax { pos, .. } => assert_eq!((pos.line, pos.col), (2, 10)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn identity_program() {
        let e = compile("proc x : A -> return x", &print(), ElaborateOptions::default()).unwrap();
        assert_eq!(e.morphism, EffMorphism::identity(&objs(&["A"])));
    }

    #[test]
    fn hello_world_program() {
        let c = print();
        let e = compile(HELLO_WORLD, &c, ElaborateOptions::default()).unwrap();
        let expected = eff_term(&c, "hello;print;world;print").unwrap();
        assert!(eff_equal(&c, &e.morphism, &expected).unwrap());
        let swapped = compile(WORLD_HELLO, &c, ElaborateOptions::default()).unwrap();
        assert!(!eff_equal(&c, &e.morphism, &swapped.morphism).unwrap());
    }

    #[test]
    fn printing_then_parsing_is_a_fixpoint() {
        for text in [HELLO_WORLD, "p = proc (x : A, (y, z)) -> do { let (u, v) = f (y, x); w <- g -< k(z, u); return (w, v) }"] {
            let p = parse_program(text).unwrap();
            let printed = p.to_string();
            assert_eq!(parse_program(&printed).unwrap(), p);
            assert_eq!(parse_program(&printed).unwrap().to_string(), printed);
        }
    }

    #[test]
    fn input_types_are_inferred_from_use() {
        let e = compile("proc x -> do { _ <- print -< x; return () }", &print(), ElaborateOptions::default()).unwrap();
        assert_eq!(e.morphism.dom, objs(&["A"]));
        let err = compile("proc x -> return x", &print(), ElaborateOptions::default()).unwrap_err();
        assert!(matches!(err, ProgramError::Uninferred { .. }));
    }

    #[test]
    fn permuting_wires_needs_swaps() {
        let text = "proc (x : A, y : A) -> return (y, x)";
        let c = print();
        let e = compile(text, &c, ElaborateOptions::default()).unwrap();
        assert_eq!(e.morphism.layers, vec![EffLayer::pure(0, "swap_A_A")]);
        let err = compile(text, &c, ElaborateOptions { swaps: false }).unwrap_err();
        assert!(matches!(err, ProgramError::NeedsSwaps { .. }));
    }

    #[test]
    fn generator_kinds_are_checked() {
        let c = print();
        let bind_pure = compile("proc () -> do { x <- hello -< (); _ <- print -< x; return () }", &c, Default::default());
        assert!(matches!(bind_pure, Err(ProgramError::NotEffectful { .. })));
        let let_eff = compile("proc x : A -> do { let () = print x; return () }", &c, Default::default());
        assert!(matches!(let_eff, Err(ProgramError::NotPure { .. })));
        let arity = compile("proc () -> do { (a, b) <- print -< hello(); return (a, b) }", &c, Default::default());
        assert!(matches!(arity, Err(ProgramError::Arity { .. })));
    }
}
