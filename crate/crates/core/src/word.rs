//! Letters, words and reduced free-group elements of shape `alpha beta^-1`.

use crate::error::{Error, Result};
use serde::Serialize;
use std::fmt;

/// Letters order by family declaration, then by index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Letter {
    pub family: u32,
    pub index: u64,
}

impl Letter {
    pub fn new(family: u32, index: u64) -> Self {
        Letter { family, index }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    /// `alpha_{i,j}` with 1-based inclusive bounds; empty when `i > j`.
    pub fn slice(&self, i: usize, j: usize) -> Word {
        if i > j || i == 0 || i > self.len() {
            return Word::empty();
        }
        let j = j.min(self.len());
        Word(self.0[i - 1..j].to_vec())
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word(self.0[..n.min(self.len())].to_vec())
    }

    pub fn suffix_from(&self, n: usize) -> Word {
        Word(self.0[n.min(self.len())..].to_vec())
    }

    pub fn concat(&self, o: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&o.0);
        Word(v)
    }

    pub fn push(&self, a: Letter) -> Word {
        let mut v = self.0.clone();
        v.push(a);
        Word(v)
    }

    pub fn cons(a: Letter, w: &Word) -> Word {
        let mut v = Vec::with_capacity(w.len() + 1);
        v.push(a);
        v.extend_from_slice(&w.0);
        Word(v)
    }

    pub fn starts_with(&self, p: &Word) -> bool {
        self.0.starts_with(&p.0)
    }

    pub fn strip_prefix(&self, p: &Word) -> Option<Word> {
        self.0.strip_prefix(p.0.as_slice()).map(|s| Word(s.to_vec()))
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

/// Reduced free-group element `pos * neg^-1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FreeGroupElement {
    pub pos: Word,
    pub neg: Word,
}

impl FreeGroupElement {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn is_identity(&self) -> bool {
        self.pos.is_empty() && self.neg.is_empty()
    }

    pub fn inverse(&self) -> Self {
        FreeGroupElement { pos: self.neg.clone(), neg: self.pos.clone() }
    }

    /// `|pos| - |neg|`.
    pub fn degree(&self) -> i64 {
        self.pos.len() as i64 - self.neg.len() as i64
    }
}

/// Cancels the longest common suffix of `alpha` and `beta`.
pub fn fg_from_pair(alpha: &Word, beta: &Word) -> FreeGroupElement {
    let mut a = alpha.0.clone();
    let mut b = beta.0.clone();
    while let (Some(x), Some(y)) = (a.last(), b.last()) {
        if x != y {
            break;
        }
        a.pop();
        b.pop();
    }
    FreeGroupElement { pos: Word(a), neg: Word(b) }
}

/// Product in the free group, defined when the reduced result is positive-negative.
pub fn fg_mul(s: &FreeGroupElement, t: &FreeGroupElement) -> Result<FreeGroupElement> {
    // s t = alpha beta^-1 gamma delta^-1; cancel the common prefix of beta and gamma
    let beta = &s.neg.0;
    let gamma = &t.pos.0;
    let c = beta.iter().zip(gamma.iter()).take_while(|(x, y)| x == y).count();
    let beta_rest = Word(beta[c..].to_vec());
    let gamma_rest = Word(gamma[c..].to_vec());
    if beta_rest.is_empty() {
        Ok(fg_from_pair(&s.pos.concat(&gamma_rest), &t.neg))
    } else if gamma_rest.is_empty() {
        Ok(fg_from_pair(&s.pos, &t.neg.concat(&beta_rest)))
    } else {
        Err(Error::NotPositiveNegativeShape)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family, self.index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word(s.bytes().map(|b| Letter::new(0, (b - b'0') as u64)).collect())
    }

    #[test]
    fn pair_cancels_suffix() {
        assert_eq!(fg_from_pair(&w("01"), &w("11")), FreeGroupElement { pos: w("0"), neg: w("1") });
        assert!(fg_from_pair(&w(""), &w("")).is_identity());
        assert_eq!(fg_from_pair(&w("02"), &w("12")), FreeGroupElement { pos: w("0"), neg: w("1") });
    }

    #[test]
    fn mul_examples() {
        let e = |p: &str, n: &str| FreeGroupElement { pos: w(p), neg: w(n) };
        assert_eq!(fg_mul(&e("0", ""), &e("1", "")).unwrap(), e("01", ""));
        assert!(fg_mul(&e("0", "1"), &e("1", "0")).unwrap().is_identity());
        assert_eq!(fg_mul(&e("", "1"), &e("", "0")).unwrap(), e("", "01"));
        assert_eq!(fg_mul(&e("", "1"), &e("0", "")), Err(Error::NotPositiveNegativeShape));
    }

    #[test]
    fn slicing() {
        let a = w("0110");
        assert_eq!(a.slice(2, 3), w("11"));
        assert_eq!(a.slice(3, 2), Word::empty());
    }
}
