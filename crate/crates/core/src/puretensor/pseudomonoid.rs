//! Strict pseudomonoid laws for the free effectful category over a couple,
//! with multiplication `C ∗ C → C` given by whiskering each letter by the
//! frozen object of the other side.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Side;
use crate::diagram::{Diagram, Slice};
use crate::polygraph::{ObjId, PolygraphCouple};
use crate::promonad::Counterexample;
use crate::runtime::{
    applicable_layers, eff_compose, eff_equal, eff_identity, eff_whisker, lift_pure, sample_eff, EffLayer,
    EffMorphism, RuntimeError,
};

/// The multiplication map, or a deliberately wrong variant that whiskers left
/// letters on the wrong side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Multiplication {
    Standard,
    SwappedLeft,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffLetter {
    pub side: Side,
    pub morphism: EffMorphism,
    pub co_object: Vec<ObjId>,
}

/// A word of `C ∗ C`, not necessarily merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EffWord {
    pub dom: (Vec<ObjId>, Vec<ObjId>),
    pub letters: Vec<EffLetter>,
}

impl EffWord {
    pub fn cod(&self) -> (Vec<ObjId>, Vec<ObjId>) {
        let mut at = self.dom.clone();
        for l in &self.letters {
            match l.side {
                Side::Left => at.0 = l.morphism.cod.clone(),
                Side::Right => at.1 = l.morphism.cod.clone(),
            }
        }
        at
    }
}

pub fn tensor_letter(side: Side, e: &EffMorphism, co: &[ObjId], mult: Multiplication) -> EffMorphism {
    match (side, mult) {
        (Side::Left, Multiplication::Standard) => eff_whisker(&[], e, co),
        (Side::Left, Multiplication::SwappedLeft) | (Side::Right, _) => eff_whisker(co, e, &[]),
    }
}

/// The image of a word under the multiplication.
pub fn tensor_word(w: &EffWord, mult: Multiplication) -> Result<EffMorphism, RuntimeError> {
    let start = eff_identity(&[w.dom.0.clone(), w.dom.1.clone()].concat());
    w.letters
        .iter()
        .try_fold(start, |acc, l| eff_compose(&acc, &tensor_letter(l.side, &l.morphism, &l.co_object, mult)))
}

fn pure_diagram(c: &PolygraphCouple, e: &EffMorphism) -> Result<Diagram, RuntimeError> {
    let slices = e
        .layers
        .iter()
        .map(|l| match l {
            EffLayer::Pure(o, g) => Ok(Slice::new(*o, g.clone())),
            EffLayer::Eff(g, _) => Err(RuntimeError::NotPure(g.clone())),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Diagram::from_slices(&c.pure, e.dom.clone(), slices)?)
}

fn sample_objects<R: Rng>(c: &PolygraphCouple, rng: &mut R) -> Vec<ObjId> {
    let n = rng.gen_range(0..=2);
    (0..n).filter_map(|_| c.objects().choose(rng).cloned()).collect()
}

fn sample_pure<R: Rng>(c: &PolygraphCouple, dom: &[ObjId], max_layers: usize, rng: &mut R) -> EffMorphism {
    let mut e = EffMorphism::identity(dom);
    for _ in 0..rng.gen_range(0..=max_layers) {
        let options: Vec<_> = applicable_layers(c, &e.cod).into_iter().filter(|(l, _)| !l.is_effectful()).collect();
        let Some((layer, next)) = options.choose(rng).cloned() else { break };
        e.layers.push(layer);
        e.cod = next;
    }
    e
}

fn sample_word<R: Rng>(c: &PolygraphCouple, dom: (Vec<ObjId>, Vec<ObjId>), rng: &mut R) -> EffWord {
    let mut w = EffWord { dom, letters: vec![] };
    for _ in 0..rng.gen_range(0..=3) {
        let side = if rng.gen_bool(0.5) { Side::Left } else { Side::Right };
        let (own, co) = match (side, w.cod()) {
            (Side::Left, (x, y)) => (x, y),
            (Side::Right, (x, y)) => (y, x),
        };
        let morphism = if rng.gen_bool(0.3) { sample_pure(c, &own, 2, rng) } else { sample_eff(c, &own, 2, rng) };
        w.letters.push(EffLetter { side, morphism, co_object: co });
    }
    w
}

fn is_pure(e: &EffMorphism) -> bool {
    e.effect_sequence().is_empty()
}

struct Checker<'a> {
    c: &'a PolygraphCouple,
    mult: Multiplication,
}

impl Checker<'_> {
    fn same(&self, law: &str, a: Result<EffMorphism, RuntimeError>, b: Result<EffMorphism, RuntimeError>) -> Result<(), Counterexample> {
        let typing = |e: RuntimeError| Counterexample::new(&format!("{law}: typing"), &[&e.to_string()]);
        let (a, b) = (a.map_err(typing)?, b.map_err(typing)?);
        match eff_equal(self.c, &a, &b) {
            Ok(true) => Ok(()),
            Ok(false) => Err(Counterexample::new(law, &[&a.to_string(), &b.to_string()])),
            Err(e) => Err(Counterexample::new(&format!("{law}: typing"), &[&e.to_string()])),
        }
    }

    fn image(&self, w: &EffWord) -> Result<EffMorphism, RuntimeError> {
        tensor_word(w, self.mult)
    }

    /// Multiplicativity, merge and swap invariance on one pair of words.
    fn pair(&self, u: &EffWord, t: &EffWord) -> Result<(), Counterexample> {
        let joined = EffWord { dom: u.dom.clone(), letters: [u.letters.clone(), t.letters.clone()].concat() };
        let split = self.image(u).and_then(|a| self.image(t).and_then(|b| eff_compose(&a, &b)));
        self.same("preserves ⋆", self.image(&joined), split)?;
        let ls = &joined.letters;
        for i in 0..ls.len().saturating_sub(1) {
            let (a, b) = (&ls[i], &ls[i + 1]);
            let mut moved = joined.clone();
            if a.side == b.side {
                let merged = eff_compose(&a.morphism, &b.morphism).expect("adjacent letters compose");
                moved.letters.splice(i..i + 2, [EffLetter { morphism: merged, ..a.clone() }]);
                self.same("respects merging", self.image(&joined), self.image(&moved))?;
            } else if is_pure(&a.morphism) || is_pure(&b.morphism) {
                moved.letters[i] = EffLetter { co_object: a.morphism.dom.clone(), ..b.clone() };
                moved.letters[i + 1] = EffLetter { co_object: b.morphism.cod.clone(), ..a.clone() };
                self.same("respects centrality swaps", self.image(&joined), self.image(&moved))?;
            }
        }
        Ok(())
    }

    /// `⊗(pt_unit(v, w))` is the pure tensor `v ⊗ w`.
    fn unit(&self, v: &EffMorphism, w: &EffMorphism) -> Result<(), Counterexample> {
        let word = EffWord {
            dom: (v.dom.clone(), w.dom.clone()),
            letters: vec![
                EffLetter { side: Side::Left, morphism: v.clone(), co_object: w.dom.clone() },
                EffLetter { side: Side::Right, morphism: w.clone(), co_object: v.cod.clone() },
            ],
        };
        let expected = pure_diagram(self.c, v)
            .and_then(|dv| pure_diagram(self.c, w).map(|dw| dv.tensor(&dw)))
            .and_then(|d| lift_pure(self.c, &d));
        self.same("preserves unit", self.image(&word), expected)
    }

    /// A letter of one of three sides, mapped through both bracketings.
    fn associative(&self, side: usize, e: &EffMorphism, objs: &[Vec<ObjId>; 3]) -> Result<(), Counterexample> {
        let m = self.mult;
        let [x, y, z] = objs;
        let (left, right) = match side {
            0 => (
                tensor_letter(Side::Left, &tensor_letter(Side::Left, e, y, m), z, m),
                tensor_letter(Side::Left, e, &[y.clone(), z.clone()].concat(), m),
            ),
            1 => (
                tensor_letter(Side::Left, &tensor_letter(Side::Right, e, x, m), z, m),
                tensor_letter(Side::Right, &tensor_letter(Side::Left, e, z, m), x, m),
            ),
            _ => (
                tensor_letter(Side::Right, e, &[x.clone(), y.clone()].concat(), m),
                tensor_letter(Side::Right, &tensor_letter(Side::Right, e, y, m), x, m),
            ),
        };
        self.same("associativity", Ok(left), Ok(right))
    }

    fn unital(&self, e: &EffMorphism) -> Result<(), Counterexample> {
        self.same("left unitality", Ok(tensor_letter(Side::Right, e, &[], self.mult)), Ok(e.clone()))?;
        self.same("right unitality", Ok(tensor_letter(Side::Left, e, &[], self.mult)), Ok(e.clone()))
    }
}

/// Samples `pairs` composable word pairs and checks, for each: the
/// multiplication preserves `⋆`, merging and centrality swaps; it sends unit
/// words to pure tensors; both bracketings of a three-sided letter agree; and
/// whiskering by the unit object is the identity.
pub fn check_strict_pseudomonoid(c: &PolygraphCouple, pairs: usize, seed: u64) -> Result<(), Counterexample> {
    check_strict_pseudomonoid_with(c, pairs, seed, Multiplication::Standard)
}

pub fn check_strict_pseudomonoid_with(
    c: &PolygraphCouple,
    pairs: usize,
    seed: u64,
    mult: Multiplication,
) -> Result<(), Counterexample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ch = Checker { c, mult };
    ch.same("unit map", eff_compose(&eff_identity(&[]), &eff_identity(&[])), Ok(eff_identity(&[])))?;
    for _ in 0..pairs {
        let dom = (sample_objects(c, &mut rng), sample_objects(c, &mut rng));
        let u = sample_word(c, dom, &mut rng);
        let t = sample_word(c, u.cod(), &mut rng);
        ch.pair(&u, &t)?;
        let (x, y) = (sample_objects(c, &mut rng), sample_objects(c, &mut rng));
        let v = sample_pure(c, &x, 2, &mut rng);
        let w = sample_pure(c, &y, 2, &mut rng);
        ch.unit(&v, &w)?;
        let objs = [sample_objects(c, &mut rng), sample_objects(c, &mut rng), sample_objects(c, &mut rng)];
        let side = rng.gen_range(0..3);
        let e = sample_eff(c, &objs[side], 3, &mut rng);
        ch.associative(side, &e, &objs)?;
        ch.unital(&e)?;
    }
    Ok(())
}
