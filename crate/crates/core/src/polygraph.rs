//! Polygraphs, polygraph couples and the runtime polygraph.
//!
//! A [`Polygraph`] is a signature of generators with lists of input and
//! output objects. A [`PolygraphCouple`] pairs a polygraph of pure generators
//! with a polygraph of effectful generators over the same objects.
//! [`run_polygraph`] builds the signature of the runtime monoidal category:
//! every effectful generator gets the runtime object `R` prepended to both
//! boundaries, and `R` gets a braiding in each direction with every object.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Name of the runtime object. Only [`run_polygraph`] may introduce it.
pub const RUNTIME: &str = "R";

const BRAID_PREFIX: &str = "sigma_";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjId(String);

impl ObjId {
    pub fn new(name: impl Into<String>) -> Self {
        ObjId(name.into())
    }

    pub fn runtime() -> Self {
        ObjId(RUNTIME.to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_runtime(&self) -> bool {
        self.0 == RUNTIME
    }
}

impl fmt::Display for ObjId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ObjId {
    fn from(s: &str) -> Self {
        ObjId::new(s)
    }
}

/// Builds an object list from names, e.g. `objs(&["A", "B"])`.
pub fn objs(names: &[&str]) -> Vec<ObjId> {
    names.iter().map(|n| ObjId::new(*n)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GenKind {
    Pure,
    Effectful,
    Braid,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenDecl {
    pub name: String,
    pub inputs: Vec<ObjId>,
    pub outputs: Vec<ObjId>,
    pub kind: GenKind,
}

impl GenDecl {
    pub fn new(name: impl Into<String>, inputs: Vec<ObjId>, outputs: Vec<ObjId>, kind: GenKind) -> Self {
        GenDecl { name: name.into(), inputs, outputs, kind }
    }

    pub fn pure(name: &str, inputs: &[&str], outputs: &[&str]) -> Self {
        GenDecl::new(name, objs(inputs), objs(outputs), GenKind::Pure)
    }

    pub fn effectful(name: &str, inputs: &[&str], outputs: &[&str]) -> Self {
        GenDecl::new(name, objs(inputs), objs(outputs), GenKind::Effectful)
    }
}

/// One problem found while validating a polygraph or couple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyName,
    DuplicateObject(ObjId),
    DuplicateGenerator(String),
    UndeclaredObject { generator: String, object: ObjId },
    ReservedObject,
    MisplacedBraid(String),
    WrongKind { generator: String, expected: GenKind },
    ObjectSetsDiffer { pure_only: Vec<ObjId>, effectful_only: Vec<ObjId> },
    SharedGeneratorName(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyName => write!(f, "empty object or generator name"),
            Violation::DuplicateObject(o) => write!(f, "object {o} declared twice"),
            Violation::DuplicateGenerator(g) => write!(f, "generator {g} declared twice"),
            Violation::UndeclaredObject { generator, object } => {
                write!(f, "generator {generator} references undeclared object {object}")
            }
            Violation::ReservedObject => write!(f, "object name {RUNTIME} is reserved for the runtime"),
            Violation::MisplacedBraid(g) => write!(f, "braid generator {g} outside a runtime polygraph"),
            Violation::WrongKind { generator, expected } => {
                write!(f, "generator {generator} should have kind {expected:?}")
            }
            Violation::ObjectSetsDiffer { pure_only, effectful_only } => write!(
                f,
                "object sets differ (pure only: {}; effectful only: {})",
                join(pure_only, " "),
                join(effectful_only, " ")
            ),
            Violation::SharedGeneratorName(g) => {
                write!(f, "generator {g} is declared both pure and effectful")
            }
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolygraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid JSON polygraph: {0}")]
    Json(String),
    #[error("invalid couple: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("object name {RUNTIME} is reserved for the runtime")]
    ReservedObject,
    #[error("generator name {0} clashes with a runtime braid")]
    BraidNameClash(String),
    #[error("{0} has no image under the couple morphism")]
    Unmapped(String),
    #[error("boundary mismatch: {source_gen} maps to {target_gen} but boundaries differ")]
    BoundaryMismatch { source_gen: String, target_gen: String },
    #[error("generator {0} missing from the target couple")]
    MissingTarget(String),
    #[error("couple morphisms do not compose: {0}")]
    NotComposable(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polygraph {
    pub objects: Vec<ObjId>,
    pub gens: Vec<GenDecl>,
}

impl Polygraph {
    pub fn new(objects: Vec<ObjId>, gens: Vec<GenDecl>) -> Self {
        Polygraph { objects, gens }
    }

    pub fn gen(&self, name: &str) -> Option<&GenDecl> {
        self.gens.iter().find(|g| g.name == name)
    }

    pub fn has_object(&self, o: &ObjId) -> bool {
        self.objects.contains(o)
    }

    /// Structural checks shared by every polygraph; `runtime` allows `R` and braids.
    fn violations(&self, runtime: bool) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        for o in &self.objects {
            if o.as_str().is_empty() {
                out.push(Violation::EmptyName);
            }
            if o.is_runtime() && !runtime {
                out.push(Violation::ReservedObject);
            }
            if !seen.insert(o.clone()) {
                out.push(Violation::DuplicateObject(o.clone()));
            }
        }
        let mut names = BTreeSet::new();
        for g in &self.gens {
            if g.name.is_empty() {
                out.push(Violation::EmptyName);
            }
            if !names.insert(g.name.as_str()) {
                out.push(Violation::DuplicateGenerator(g.name.clone()));
            }
            for o in g.inputs.iter().chain(&g.outputs) {
                if !seen.contains(o) {
                    out.push(Violation::UndeclaredObject { generator: g.name.clone(), object: o.clone() });
                }
            }
            if g.kind == GenKind::Braid {
                let ok = runtime
                    && g.inputs.len() == 2
                    && g.outputs.len() == 2
                    && g.inputs[0] == g.outputs[1]
                    && g.inputs[1] == g.outputs[0]
                    && (g.inputs[0].is_runtime() != g.inputs[1].is_runtime());
                if !ok {
                    out.push(Violation::MisplacedBraid(g.name.clone()));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PolygraphCouple {
    pub pure: Polygraph,
    pub effectful: Polygraph,
}

impl PolygraphCouple {
    /// Builds a couple whose two polygraphs share `objects`.
    pub fn new(objects: Vec<ObjId>, pure: Vec<GenDecl>, effectful: Vec<GenDecl>) -> Self {
        PolygraphCouple {
            pure: Polygraph::new(objects.clone(), pure),
            effectful: Polygraph::new(objects, effectful),
        }
    }

    pub fn objects(&self) -> &[ObjId] {
        &self.pure.objects
    }

    pub fn pure_gen(&self, name: &str) -> Option<&GenDecl> {
        self.pure.gen(name)
    }

    pub fn effectful_gen(&self, name: &str) -> Option<&GenDecl> {
        self.effectful.gen(name)
    }

    /// Looks a generator up on either side.
    pub fn gen(&self, name: &str) -> Option<&GenDecl> {
        self.pure_gen(name).or_else(|| self.effectful_gen(name))
    }

    /// Adds a pure generator unless one with that name already exists.
    pub fn ensure_pure(&mut self, decl: GenDecl) {
        if self.gen(&decl.name).is_none() {
            self.pure.gens.push(decl);
        }
    }

    pub fn from_text(text: &str) -> Result<Self, PolygraphError> {
        parse_couple_text(text)
    }

    pub fn to_text(&self) -> String {
        print_couple_text(self)
    }

    pub fn from_json(text: &str) -> Result<Self, PolygraphError> {
        let file: CoupleFile = serde_json::from_str(text).map_err(|e| PolygraphError::Json(e.to_string()))?;
        Ok(file.into_couple())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CoupleFile::from_couple(self)).expect("couple serializes")
    }

    /// Parses either format; JSON is recognised by a leading `{`.
    pub fn parse(text: &str) -> Result<Self, PolygraphError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_text(text)
        }
    }

    /// The running example: two pure values and an effectful printer.
    pub fn print_example() -> Self {
        PolygraphCouple::new(
            objs(&["A"]),
            vec![GenDecl::pure("hello", &[], &["A"]), GenDecl::pure("world", &[], &["A"])],
            vec![GenDecl::effectful("print", &["A"], &[])],
        )
    }
}

/// Checks every invariant of a couple; the error carries all violations found.
pub fn validate_couple(c: &PolygraphCouple) -> Result<(), Vec<Violation>> {
    let mut out = c.pure.violations(false);
    out.extend(c.effectful.violations(false));
    let p: BTreeSet<_> = c.pure.objects.iter().cloned().collect();
    let e: BTreeSet<_> = c.effectful.objects.iter().cloned().collect();
    if p != e {
        out.push(Violation::ObjectSetsDiffer {
            pure_only: p.difference(&e).cloned().collect(),
            effectful_only: e.difference(&p).cloned().collect(),
        });
    }
    for g in &c.pure.gens {
        if g.kind != GenKind::Pure {
            out.push(Violation::WrongKind { generator: g.name.clone(), expected: GenKind::Pure });
        }
        if c.effectful.gen(&g.name).is_some() {
            out.push(Violation::SharedGeneratorName(g.name.clone()));
        }
    }
    for g in &c.effectful.gens {
        if g.kind != GenKind::Effectful {
            out.push(Violation::WrongKind { generator: g.name.clone(), expected: GenKind::Effectful });
        }
    }
    out.dedup();
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Name of the braid `[a, b] -> [b, a]` where exactly one of `a`, `b` is `R`.
pub fn braid_name(a: &ObjId, b: &ObjId) -> String {
    format!("{BRAID_PREFIX}{a}_{b}")
}

/// The polygraph freely generating the runtime monoidal category of `c`.
pub fn run_polygraph(c: &PolygraphCouple) -> Result<Polygraph, PolygraphError> {
    if c.objects().iter().any(ObjId::is_runtime) {
        return Err(PolygraphError::ReservedObject);
    }
    validate_couple(c).map_err(PolygraphError::Invalid)?;
    let r = ObjId::runtime();
    let mut objects = c.objects().to_vec();
    objects.push(r.clone());
    let mut gens: Vec<GenDecl> = c.pure.gens.clone();
    for g in &c.effectful.gens {
        let mut inputs = vec![r.clone()];
        inputs.extend(g.inputs.iter().cloned());
        let mut outputs = vec![r.clone()];
        outputs.extend(g.outputs.iter().cloned());
        gens.push(GenDecl::new(g.name.clone(), inputs, outputs, GenKind::Effectful));
    }
    for a in c.objects() {
        for (x, y) in [(&r, a), (a, &r)] {
            let name = braid_name(x, y);
            if c.gen(&name).is_some() {
                return Err(PolygraphError::BraidNameClash(name));
            }
            gens.push(GenDecl::new(name, vec![x.clone(), y.clone()], vec![y.clone(), x.clone()], GenKind::Braid));
        }
    }
    Ok(Polygraph { objects, gens })
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CoupleMorphism {
    pub obj_map: BTreeMap<ObjId, ObjId>,
    pub pure_gen_map: BTreeMap<String, String>,
    pub eff_gen_map: BTreeMap<String, String>,
}

impl CoupleMorphism {
    pub fn identity(c: &PolygraphCouple) -> Self {
        CoupleMorphism {
            obj_map: c.objects().iter().map(|o| (o.clone(), o.clone())).collect(),
            pure_gen_map: c.pure.gens.iter().map(|g| (g.name.clone(), g.name.clone())).collect(),
            eff_gen_map: c.effectful.gens.iter().map(|g| (g.name.clone(), g.name.clone())).collect(),
        }
    }

    fn map_obj(&self, o: &ObjId) -> Result<ObjId, PolygraphError> {
        self.obj_map.get(o).cloned().ok_or_else(|| PolygraphError::Unmapped(o.to_string()))
    }

    fn map_list(&self, os: &[ObjId]) -> Result<Vec<ObjId>, PolygraphError> {
        os.iter().map(|o| self.map_obj(o)).collect()
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &CoupleMorphism) -> Result<CoupleMorphism, PolygraphError> {
        let chase = |m: &BTreeMap<String, String>, n: &BTreeMap<String, String>| {
            m.iter()
                .map(|(k, v)| {
                    n.get(v)
                        .map(|w| (k.clone(), w.clone()))
                        .ok_or_else(|| PolygraphError::NotComposable(v.clone()))
                })
                .collect::<Result<BTreeMap<_, _>, _>>()
        };
        let obj_map = self
            .obj_map
            .iter()
            .map(|(k, v)| {
                next.obj_map
                    .get(v)
                    .map(|w| (k.clone(), w.clone()))
                    .ok_or_else(|| PolygraphError::NotComposable(v.to_string()))
            })
            .collect::<Result<_, _>>()?;
        Ok(CoupleMorphism {
            obj_map,
            pure_gen_map: chase(&self.pure_gen_map, &next.pure_gen_map)?,
            eff_gen_map: chase(&self.eff_gen_map, &next.eff_gen_map)?,
        })
    }
}

/// Image of `src` under `m`, as a sub-couple of `dst`.
///
/// Every generator of `src` must land on a generator of `dst` whose
/// boundaries are the pointwise image of its own.
pub fn apply_couple_morphism(
    m: &CoupleMorphism,
    src: &PolygraphCouple,
    dst: &PolygraphCouple,
) -> Result<PolygraphCouple, PolygraphError> {
    let mut objects: Vec<ObjId> = Vec::new();
    for o in src.objects() {
        let image = m.map_obj(o)?;
        if !dst.objects().contains(&image) {
            return Err(PolygraphError::MissingTarget(image.to_string()));
        }
        if !objects.contains(&image) {
            objects.push(image);
        }
    }
    let image_side = |gens: &[GenDecl], map: &BTreeMap<String, String>, target: &Polygraph| {
        let mut out: Vec<GenDecl> = Vec::new();
        for g in gens {
            let tname = map.get(&g.name).ok_or_else(|| PolygraphError::Unmapped(g.name.clone()))?;
            let t = target.gen(tname).ok_or_else(|| PolygraphError::MissingTarget(tname.clone()))?;
            if m.map_list(&g.inputs)? != t.inputs || m.map_list(&g.outputs)? != t.outputs {
                return Err(PolygraphError::BoundaryMismatch { source_gen: g.name.clone(), target_gen: tname.clone() });
            }
            if !out.iter().any(|d| d.name == t.name) {
                out.push(t.clone());
            }
        }
        Ok(out)
    };
    let pure = image_side(&src.pure.gens, &m.pure_gen_map, &dst.pure)?;
    let effectful = image_side(&src.effectful.gens, &m.eff_gen_map, &dst.effectful)?;
    Ok(PolygraphCouple::new(objects, pure, effectful))
}

fn join<T: fmt::Display>(items: &[T], sep: &str) -> String {
    items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(sep)
}

fn parse_couple_text(text: &str) -> Result<PolygraphCouple, PolygraphError> {
    let mut objects: Vec<ObjId> = Vec::new();
    let mut pure = Vec::new();
    let mut effectful = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: &str| PolygraphError::Parse { line: line_no, message: message.to_string() };
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match keyword {
            "objects" => objects.extend(rest.split_whitespace().map(ObjId::new)),
            "pure" | "effect" | "effectful" => {
                let (name, sig) = rest.split_once(':').ok_or_else(|| err("expected `name : inputs -> outputs`"))?;
                let name = name.trim();
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(err("generator name must be a single token"));
                }
                let (ins, outs) = sig.split_once("->").ok_or_else(|| err("missing `->`"))?;
                let ins: Vec<ObjId> = ins.split_whitespace().map(ObjId::new).collect();
                let outs: Vec<ObjId> = outs.split_whitespace().map(ObjId::new).collect();
                if keyword == "pure" {
                    pure.push(GenDecl::new(name, ins, outs, GenKind::Pure));
                } else {
                    effectful.push(GenDecl::new(name, ins, outs, GenKind::Effectful));
                }
            }
            other => return Err(err(&format!("unknown declaration `{other}`"))),
        }
    }
    Ok(PolygraphCouple::new(objects, pure, effectful))
}

fn print_couple_text(c: &PolygraphCouple) -> String {
    let mut out = String::new();
    out.push_str("objects");
    for o in c.objects() {
        out.push(' ');
        out.push_str(o.as_str());
    }
    out.push('\n');
    let decl = |kw: &str, g: &GenDecl| {
        let mut s = format!("{kw} {} :", g.name);
        for o in &g.inputs {
            s.push(' ');
            s.push_str(o.as_str());
        }
        s.push_str(" ->");
        for o in &g.outputs {
            s.push(' ');
            s.push_str(o.as_str());
        }
        s.push('\n');
        s
    };
    for g in &c.pure.gens {
        out.push_str(&decl("pure", g));
    }
    for g in &c.effectful.gens {
        out.push_str(&decl("effect", g));
    }
    out
}

#[derive(Serialize, Deserialize)]
struct GenEntry {
    name: String,
    #[serde(default)]
    inputs: Vec<ObjId>,
    #[serde(default)]
    outputs: Vec<ObjId>,
}

#[derive(Serialize, Deserialize)]
struct CoupleFile {
    objects: Vec<ObjId>,
    #[serde(default)]
    pure: Vec<GenEntry>,
    #[serde(default)]
    effectful: Vec<GenEntry>,
}

impl CoupleFile {
    fn from_couple(c: &PolygraphCouple) -> Self {
        let entries = |gs: &[GenDecl]| {
            gs.iter()
                .map(|g| GenEntry { name: g.name.clone(), inputs: g.inputs.clone(), outputs: g.outputs.clone() })
                .collect()
        };
        CoupleFile { objects: c.objects().to_vec(), pure: entries(&c.pure.gens), effectful: entries(&c.effectful.gens) }
    }

    fn into_couple(self) -> PolygraphCouple {
        let decls = |es: Vec<GenEntry>, kind| {
            es.into_iter().map(|e| GenDecl::new(e.name, e.inputs, e.outputs, kind)).collect()
        };
        PolygraphCouple::new(self.objects, decls(self.pure, GenKind::Pure), decls(self.effectful, GenKind::Effectful))
    }
}
