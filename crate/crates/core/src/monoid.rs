//! Finite monoids given by multiplication tables.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonoidError {
    #[error("monoid has no elements")]
    Empty,
    #[error("table row {0} has the wrong length")]
    Ragged(usize),
    #[error("table entry {0} is not an element")]
    OutOfRange(usize),
    #[error("{0} is not a two-sided unit")]
    NotUnit(String),
    #[error("no element acts as a unit")]
    MissingUnit,
    #[error("not associative: ({a}{b}){c} differs from {a}({b}{c})")]
    NotAssociative { a: String, b: String, c: String },
    #[error("unknown element {0}")]
    UnknownElement(String),
    #[error("duplicate element name {0}")]
    DuplicateName(String),
}

/// Elements are `0..len`; `table[a][b]` is the product `a · b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteMonoid {
    pub names: Vec<String>,
    pub table: Vec<Vec<usize>>,
    pub unit: usize,
}

impl FiniteMonoid {
    /// Validates the table; the unit is found by search.
    pub fn new(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, MonoidError> {
        let n = names.len();
        if n == 0 {
            return Err(MonoidError::Empty);
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(MonoidError::DuplicateName(name.clone()));
            }
        }
        if table.len() != n {
            return Err(MonoidError::Ragged(table.len().min(n)));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(MonoidError::Ragged(i));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(MonoidError::OutOfRange(bad));
            }
        }
        let unit = (0..n).find(|&u| (0..n).all(|x| table[u][x] == x && table[x][u] == x)).ok_or(MonoidError::MissingUnit)?;
        let m = FiniteMonoid { names, table, unit };
        m.check_associative()?;
        Ok(m)
    }

    /// Like [`FiniteMonoid::new`] but insists that `unit` is the unit.
    pub fn with_unit(names: Vec<String>, table: Vec<Vec<usize>>, unit: &str) -> Result<Self, MonoidError> {
        let m = FiniteMonoid::new(names, table)?;
        match m.index(unit) {
            Some(u) if u == m.unit => Ok(m),
            Some(_) => Err(MonoidError::NotUnit(unit.to_string())),
            None => Err(MonoidError::UnknownElement(unit.to_string())),
        }
    }

    fn check_associative(&self) -> Result<(), MonoidError> {
        let n = self.len();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        return Err(MonoidError::NotAssociative {
                            a: self.names[a].clone(),
                            b: self.names[b].clone(),
                            c: self.names[c].clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.len()).all(|a| (0..self.len()).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn trivial() -> Self {
        FiniteMonoid { names: vec!["1".into()], table: vec![vec![0]], unit: 0 }
    }

    /// Integers modulo `n` under addition.
    pub fn cyclic(n: usize) -> Self {
        assert!(n > 0, "cyclic monoid needs n > 0");
        let names = (0..n).map(|k| k.to_string()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteMonoid { names, table, unit: 0 }
    }

    /// Words over `alphabet` of length at most `max_len`, with every longer
    /// product collapsed to an absorbing element `⊤`. The empty word is `ε`.
    pub fn truncated_free(alphabet: &[&str], max_len: usize) -> Self {
        let mut words: Vec<Vec<&str>> = vec![vec![]];
        let mut frontier: Vec<Vec<&str>> = vec![vec![]];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for &a in alphabet {
                    let mut v = w.clone();
                    v.push(a);
                    next.push(v);
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        let top = words.len();
        let mut names: Vec<String> =
            words.iter().map(|w| if w.is_empty() { "ε".to_string() } else { w.concat() }).collect();
        names.push("⊤".to_string());
        let n = names.len();
        let mut table = vec![vec![top; n]; n];
        for (i, a) in words.iter().enumerate() {
            for (j, b) in words.iter().enumerate() {
                let mut ab = a.clone();
                ab.extend(b.iter());
                if let Some(k) = words.iter().position(|w| *w == ab) {
                    table[i][j] = k;
                }
            }
        }
        FiniteMonoid { names, table, unit: 0 }
    }

    /// Product monoid with pairs named `(m,n)`.
    pub fn product(&self, other: &FiniteMonoid) -> FiniteMonoid {
        let (n1, n2) = (self.len(), other.len());
        let mut names = Vec::with_capacity(n1 * n2);
        for a in &self.names {
            for b in &other.names {
                names.push(format!("({a},{b})"));
            }
        }
        let table = (0..n1 * n2)
            .map(|x| (0..n1 * n2).map(|y| self.mul(x / n2, y / n2) * n2 + other.mul(x % n2, y % n2)).collect())
            .collect();
        FiniteMonoid { names, table, unit: self.unit * n2 + other.unit }
    }
}
