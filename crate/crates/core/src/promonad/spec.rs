//! JSON form of promonads: given by tables, by a writer monoid, or by an
//! identity-on-objects functor.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{
    CategorySpec, Element, FiniteCategory, FiniteFunctor, FinitePromonad, FiniteProfunctor, PromonadError,
};
use crate::monoid::FiniteMonoid;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementSpec {
    pub name: String,
    pub dom: String,
    pub cod: String,
}

/// Target category and the images of the non-identity source arrows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorSpec {
    pub source: CategorySpec,
    pub target: CategorySpec,
    #[serde(default)]
    pub map: BTreeMap<String, String>,
}

impl FunctorSpec {
    pub fn build(&self) -> Result<FiniteFunctor, PromonadError> {
        let (s, t) = (self.source.build()?, self.target.build()?);
        let pairs: Vec<(&str, &str)> = self.map.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        FiniteFunctor::by_names(&s, &t, &pairs)
    }

    pub fn of(f: &FiniteFunctor) -> Self {
        let map = (0..f.src.len())
            .filter(|&g| !f.src.is_identity(g))
            .map(|g| (f.src.name(g).to_string(), f.dst.name(f.mor_map[g]).to_string()))
            .collect();
        FunctorSpec { source: CategorySpec::of(&f.src), target: CategorySpec::of(&f.dst), map }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PromonadSpec {
    /// Full tables: `lact` holds `[f, p, f ◁ p]`, `ract` holds `[p, g, p ▷ g]`,
    /// `unit` holds `[f, unit f]` and `mult` holds `[p, q, p ⋆ q]`.
    Tables {
        base: CategorySpec,
        elements: Vec<ElementSpec>,
        lact: Vec<[String; 3]>,
        ract: Vec<[String; 3]>,
        unit: Vec<[String; 2]>,
        mult: Vec<[String; 3]>,
    },
    Writer {
        base: CategorySpec,
        monoid: FiniteMonoid,
    },
    Functor(FunctorSpec),
}

impl PromonadSpec {
    pub fn parse(text: &str) -> Result<Self, PromonadError> {
        serde_json::from_str(text).map_err(|e| PromonadError::Format(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("promonad specs serialize")
    }

    /// Builds the tables. Only well-formedness is checked here; the laws are
    /// left to [`FinitePromonad::check`].
    pub fn build(&self) -> Result<FinitePromonad, PromonadError> {
        match self {
            PromonadSpec::Writer { base, monoid } => {
                let m = FiniteMonoid::new(monoid.names.clone(), monoid.table.clone())?;
                Ok(FinitePromonad::writer(&base.build()?, &m))
            }
            PromonadSpec::Functor(f) => FinitePromonad::from_functor(&f.build()?),
            PromonadSpec::Tables { base, elements, lact, ract, unit, mult } => {
                let c = base.build()?;
                let obj = |o: &str| c.object(o).ok_or_else(|| PromonadError::UnknownName(o.into()));
                let mut els = Vec::new();
                for e in elements {
                    if els.iter().any(|x: &Element| x.name == e.name) {
                        return Err(PromonadError::DuplicateName(e.name.clone()));
                    }
                    els.push(Element { name: e.name.clone(), a: obj(&e.dom)?, b: obj(&e.cod)? });
                }
                let el = |n: &str| els.iter().position(|e| e.name == n).ok_or_else(|| PromonadError::UnknownName(n.into()));
                let mor = |n: &str| c.morphism(n).ok_or_else(|| PromonadError::UnknownName(n.into()));
                let n = els.len();
                let mut lt = vec![vec![None; n]; c.len()];
                for [f, p, r] in lact {
                    lt[mor(f)?][el(p)?] = Some(el(r)?);
                }
                let mut rt = vec![vec![None; c.len()]; n];
                for [p, g, r] in ract {
                    rt[el(p)?][mor(g)?] = Some(el(r)?);
                }
                let mut un = vec![None; c.len()];
                for [f, p] in unit {
                    un[mor(f)?] = Some(el(p)?);
                }
                let un = un
                    .into_iter()
                    .enumerate()
                    .map(|(f, u)| u.ok_or_else(|| PromonadError::Format(format!("no unit for {}", c.name(f)))))
                    .collect::<Result<Vec<_>, _>>()?;
                let mut mt = vec![vec![None; n]; n];
                for [p, q, r] in mult {
                    mt[el(p)?][el(q)?] = Some(el(r)?);
                }
                let prof = FiniteProfunctor { left: c.clone(), right: c, elements: els, lact: lt, ract: rt };
                Ok(FinitePromonad { prof, unit: un, mult: mt })
            }
        }
    }

    /// The tables form of any promonad.
    pub fn of(m: &FinitePromonad) -> Self {
        let c: &FiniteCategory = m.base();
        let p = &m.prof;
        let elements = p
            .elements
            .iter()
            .map(|e| ElementSpec { name: e.name.clone(), dom: c.objects[e.a].clone(), cod: c.objects[e.b].clone() })
            .collect();
        let mut lact = Vec::new();
        let mut ract = Vec::new();
        let mut mult = Vec::new();
        for x in 0..p.len() {
            for f in p.into_left(x) {
                lact.push([c.name(f).to_string(), p.name(x).to_string(), p.name(p.act_left(f, x)).to_string()]);
            }
            for g in p.out_of_right(x) {
                ract.push([p.name(x).to_string(), c.name(g).to_string(), p.name(p.act_right(x, g)).to_string()]);
            }
            for y in 0..p.len() {
                if let Some(z) = m.mult[x][y] {
                    mult.push([p.name(x).to_string(), p.name(y).to_string(), p.name(z).to_string()]);
                }
            }
        }
        let unit = (0..c.len()).map(|f| [c.name(f).to_string(), p.name(m.unit[f]).to_string()]).collect();
        PromonadSpec::Tables { base: CategorySpec::of(c), elements, lact, ract, unit, mult }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::promonad::curated_functors;

    #[test]
    fn tables_round_trip() {
        let m = FinitePromonad::writer(&FiniteCategory::discrete(&["X"]), &FiniteMonoid::cyclic(3));
        let spec = PromonadSpec::of(&m);
        let back = PromonadSpec::parse(&spec.to_json()).unwrap().build().unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn functor_specs_round_trip() {
        for (_, f) in curated_functors() {
            assert_eq!(FunctorSpec::of(&f).build().unwrap(), f);
        }
    }

    #[test]
    fn writer_spec_parses() {
        let text = r#"{"kind":"writer","base":{"objects":["X"]},
            "monoid":{"names":["0","1"],"table":[[0,1],[1,0]],"unit":0}}"#;
        let m = PromonadSpec::parse(text).unwrap().build().unwrap();
        assert_eq!(m.len(), 2);
        m.check().unwrap();
    }

    #[test]
    fn unknown_names_are_reported() {
        let text = r#"{"kind":"functor","source":{"objects":["X"]},"target":{"objects":["Y"]}}"#;
        assert_eq!(PromonadSpec::parse(text).unwrap().build(), Err(PromonadError::UnknownName("X".into())));
    }
}
