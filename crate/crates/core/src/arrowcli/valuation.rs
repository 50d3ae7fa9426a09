//! JSON valuations into the finite writer target.
//!
//! ```json
//! {
//!   "monoid": {"truncated_free": {"alphabet": ["h", "w"], "max_len": 2}},
//!   "carriers": {"A": ["h", "w"]},
//!   "pure": {"hello": {"": ["h"]}},
//!   "effectful": {"print": {"h": ["h", []], "w": ["w", []]}}
//! }
//! ```
//!
//! Objects go to the carrier of the same name. Function tables are keyed by
//! the input elements joined with `,`. Swap generators that the file leaves
//! out are filled in.

use std::collections::BTreeMap;

use serde::Deserialize;

use super::program::swap_name;
use crate::interp::{FiniteWriterTarget, InterpError, PureFn, Valuation, WriterFn};
use crate::monoid::FiniteMonoid;
use crate::polygraph::{GenDecl, ObjId, PolygraphCouple};

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonoidSpec {
    TruncatedFree { alphabet: Vec<String>, max_len: usize },
    Cyclic(usize),
    Table(FiniteMonoid),
}

impl MonoidSpec {
    pub fn build(&self) -> Result<FiniteMonoid, InterpError> {
        Ok(match self {
            MonoidSpec::TruncatedFree { alphabet, max_len } => {
                let letters: Vec<&str> = alphabet.iter().map(String::as_str).collect();
                FiniteMonoid::truncated_free(&letters, *max_len)
            }
            MonoidSpec::Cyclic(n) if *n > 0 => FiniteMonoid::cyclic(*n),
            MonoidSpec::Cyclic(_) => return Err(InterpError::BadMonoid("cyclic of order 0".into())),
            MonoidSpec::Table(m) => m.clone(),
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct ValuationFile {
    pub monoid: MonoidSpec,
    pub carriers: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub pure: BTreeMap<String, BTreeMap<String, Vec<String>>>,
    #[serde(default)]
    pub effectful: BTreeMap<String, BTreeMap<String, (String, Vec<String>)>>,
}

fn names(g: &GenDecl) -> (Vec<String>, Vec<String>) {
    let s = |os: &[ObjId]| os.iter().map(|o| o.to_string()).collect();
    (s(&g.inputs), s(&g.outputs))
}

fn is_swap(g: &GenDecl) -> bool {
    matches!((g.inputs.as_slice(), g.outputs.as_slice()), ([x, y], [y2, x2]) if x == x2 && y == y2 && g.name == swap_name(x, y))
}

impl ValuationFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    /// Builds the target and the valuation of every generator of `c`.
    pub fn build(&self, c: &PolygraphCouple) -> Result<(FiniteWriterTarget, Valuation<FiniteWriterTarget>), InterpError> {
        let t = FiniteWriterTarget::new(self.monoid.build()?, self.carriers.clone());
        let mut v = Valuation::default();
        for o in c.objects() {
            if !self.carriers.contains_key(o.as_str()) {
                return Err(InterpError::MissingObject(o.to_string()));
            }
            v.obj_map.insert(o.clone(), o.to_string());
        }
        let element = |carrier: &str, name: &str| t.element(carrier, name);
        let key = |dom: &[String], tuple: &[usize]| {
            dom.iter().zip(tuple).map(|(o, &x)| t.element_name(o, x)).collect::<Vec<_>>().join(",")
        };
        for g in &c.pure.gens {
            let (dom, cod) = names(g);
            let f = match self.pure.get(&g.name) {
                Some(table) => {
                    let mut rows = Vec::new();
                    for tuple in t.tuples(&dom) {
                        let outs = table.get(&key(&dom, &tuple)).ok_or_else(|| InterpError::NotTotal(g.name.clone()))?;
                        if outs.len() != cod.len() {
                            return Err(InterpError::TargetMismatch { gen: g.name.clone() });
                        }
                        rows.push(cod.iter().zip(outs).map(|(o, y)| element(o, y)).collect::<Result<Vec<_>, _>>()?);
                    }
                    PureFn { dom, cod, table: rows }
                }
                None if is_swap(g) => t.pure_fn(&dom, &cod, |x| vec![x[1], x[0]]),
                None => return Err(InterpError::MissingGenerator(g.name.clone())),
            };
            v.pure_map.insert(g.name.clone(), f);
        }
        for g in &c.effectful.gens {
            let (dom, cod) = names(g);
            let table = self.effectful.get(&g.name).ok_or_else(|| InterpError::MissingGenerator(g.name.clone()))?;
            let mut rows = Vec::new();
            for tuple in t.tuples(&dom) {
                let (log, outs) = table.get(&key(&dom, &tuple)).ok_or_else(|| InterpError::NotTotal(g.name.clone()))?;
                if outs.len() != cod.len() {
                    return Err(InterpError::TargetMismatch { gen: g.name.clone() });
                }
                let m = t.monoid.index(log).ok_or_else(|| InterpError::UnknownElement {
                    carrier: "the monoid".into(),
                    element: log.clone(),
                })?;
                let ys = cod.iter().zip(outs).map(|(o, y)| element(o, y)).collect::<Result<Vec<_>, _>>()?;
                rows.push((m, ys));
            }
            v.eff_map.insert(g.name.clone(), WriterFn { dom, cod, table: rows });
        }
        v.check(&t, c)?;
        Ok((t, v))
    }
}

/// Reads `h,w` as one element per input wire.
pub fn parse_input(t: &FiniteWriterTarget, dom: &[String], text: &str) -> Result<Vec<usize>, InterpError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if parts.len() != dom.len() {
        return Err(InterpError::BadInput(format!("`{text}` has {} values for {} wires", parts.len(), dom.len())));
    }
    dom.iter().zip(parts).map(|(o, x)| t.element(o, x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::{describe_output, evaluate};
    use crate::arrowcli::term::eff_term;

    const PRINT_VALUATION: &str = r#"{
        "monoid": {"truncated_free": {"alphabet": ["h", "w"], "max_len": 2}},
        "carriers": {"A": ["h", "w"]},
        "pure": {"hello": {"": ["h"]}, "world": {"": ["w"]}},
        "effectful": {"print": {"h": ["h", []], "w": ["w", []]}}
    }"#;

    #[test]
    fn print_valuation_writes_hw() {
        let c = PolygraphCouple::print_example();
        let (t, v) = ValuationFile::parse(PRINT_VALUATION).unwrap().build(&c).unwrap();
        let e = eff_term(&c, "hello;print;world;print").unwrap();
        let f = evaluate(&c, &e, &t, &v).unwrap();
        assert_eq!(describe_output(&t, &f, &[]), "(hw,())");
    }

    #[test]
    fn missing_rows_are_reported() {
        let c = PolygraphCouple::print_example();
        let text = PRINT_VALUATION.replace(r#""w": ["w", []]"#, r#""x": ["w", []]"#);
        let err = ValuationFile::parse(&text).unwrap().build(&c).unwrap_err();
        assert_eq!(err, InterpError::NotTotal("print".into()));
    }

    #[test]
    fn inputs_are_read_by_name() {
        let c = PolygraphCouple::print_example();
        let (t, _) = ValuationFile::parse(PRINT_VALUATION).unwrap().build(&c).unwrap();
        assert_eq!(parse_input(&t, &["A".into(), "A".into()], "w, h").unwrap(), vec![1, 0]);
        assert!(parse_input(&t, &["A".into()], "").is_err());
    }
}
