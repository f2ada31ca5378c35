//! Finite-depth approximations of the Stone dual of the unital set algebra:
//! atoms of the subalgebra generated by `C(alpha, beta)` with short words,
//! the induced shift on them, the cover map to the compactified space, and a
//! truncated Deaconu-Renault groupoid on eventually periodic points.

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::otw::{normalize_periodic, OTWPoint};
use crate::partial_action::domain_of;
use crate::ring::RingElem;
use crate::sets::{self, Flavor, SetExpr};
use crate::shift::{letter_set_letters, Shift};
use crate::word::{FreeGroupElement, Letter, Word};
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeSet;

/// Atoms of the subalgebra generated by a finite list of sets.
#[derive(Clone, Debug)]
pub struct Level {
    pub depth: usize,
    pub window: usize,
    pub gens: Vec<SetExpr>,
    pub atoms: Vec<SetExpr>,
}

/// `{C(alpha, beta) : |alpha|, |beta| <= depth}` over the first `window` letters, nonempty and deduplicated.
pub fn canonical_generators(sh: &Shift, depth: usize, window: usize) -> Vec<SetExpr> {
    let ws = sh.words_up_to(depth, window);
    let mut out: Vec<SetExpr> = Vec::new();
    for a in &ws {
        for b in &ws {
            let s = sets::c_set(sh, a, b).with_flavor(Flavor::U);
            if !s.is_empty() && !out.iter().any(|o| o.same_set(&s)) {
                out.push(s);
            }
        }
    }
    out
}

impl Level {
    pub fn new(sh: &Shift, depth: usize, window: usize, gens: Vec<SetExpr>) -> Level {
        let atoms = sets::atoms(sh, &gens);
        Level { depth, window, gens, atoms }
    }

    pub fn canonical(sh: &Shift, depth: usize, window: usize) -> Level {
        Level::new(sh, depth, window, canonical_generators(sh, depth, window))
    }

    /// The atom containing an eventually periodic point of X.
    pub fn atom_of_point(&self, sh: &Shift, pre: &Word, per: &Word) -> Option<usize> {
        self.atoms.iter().position(|a| sets::contains_point(sh, a, pre, per))
    }

    /// Atoms meeting a set.
    pub fn atoms_meeting(&self, sh: &Shift, s: &SetExpr) -> Vec<usize> {
        (0..self.atoms.len()).filter(|&i| !sets::intersect(sh, &self.atoms[i], s).is_empty()).collect()
    }
}

/// The letter every point of `a` starts with, if there is exactly one.
pub fn unique_letter(sh: &Shift, a: &SetExpr) -> Option<Letter> {
    let ls = letter_set_letters(&sets::emitted_letters(sh, a))?;
    if ls.len() == 1 {
        Some(ls[0])
    } else {
        None
    }
}

/// `r(A, a)` for the unique first letter `a` of `A`.
pub fn sigma_hat(sh: &Shift, a: &SetExpr) -> Result<SetExpr> {
    let l = unique_letter(sh, a).ok_or_else(|| Error::NotInDomain("atom does not lie in a single letter cylinder".into()))?;
    sets::relative_range(sh, a, &Word(vec![l]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PiStatus {
    /// The atom determines the prefix only up to the reported length.
    Truncated,
    /// The atom excludes every windowed one-letter extension: a finite sequence.
    Exact,
    /// Exact with the empty prefix: the empty sequence.
    Zero,
}

/// Longest prefix forced by the atom, extended at most `cap` letters.
pub fn pi(sh: &Shift, a: &SetExpr, window: usize, cap: usize) -> (Word, PiStatus) {
    let win: BTreeSet<Letter> = sh.alphabet.window(window).into_iter().collect();
    let mut prefix = Vec::new();
    let mut cur = a.clone();
    while prefix.len() < cap {
        let emitted = sets::emitted_letters(sh, &cur);
        match letter_set_letters(&emitted) {
            Some(ls) if ls.len() == 1 => {
                prefix.push(ls[0]);
                cur = sets::relative_range(sh, &cur, &Word(vec![ls[0]])).expect("letter in alphabet");
            }
            Some(_) => break,
            None => {
                let in_window = emitted.iter().any(|(&f, s)| win.iter().any(|l| l.family == f && s.contains(l.index)));
                if !in_window {
                    let st = if prefix.is_empty() { PiStatus::Zero } else { PiStatus::Exact };
                    return (Word(prefix), st);
                }
                break;
            }
        }
    }
    (Word(prefix), PiStatus::Truncated)
}

/// Atoms whose forced prefix is compatible with the point.
pub fn cover_fiber(sh: &Shift, level: &Level, x: &OTWPoint, cap: usize) -> Vec<usize> {
    (0..level.atoms.len())
        .filter(|&i| {
            let (p, st) = pi(sh, &level.atoms[i], level.window, cap);
            match (x, st) {
                (OTWPoint::Infinite { .. }, PiStatus::Truncated) => x.prefix(p.len()) == p,
                (OTWPoint::Infinite { .. }, _) => false,
                (OTWPoint::Finite(w), PiStatus::Exact) => *w == p,
                (OTWPoint::Finite(w), PiStatus::Truncated) => w.starts_with(&p),
                (OTWPoint::Finite(_), PiStatus::Zero) => false,
                (OTWPoint::Zero, PiStatus::Zero) => true,
                (OTWPoint::Zero, PiStatus::Truncated) => p.is_empty(),
                (OTWPoint::Zero, PiStatus::Exact) => false,
            }
        })
        .collect()
}

/// An eventually periodic point of X.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Point {
    pub pre: Word,
    pub per: Word,
}

impl Point {
    pub fn new(pre: Word, per: Word) -> Point {
        let (pre, per) = normalize_periodic(&pre, &per);
        Point { pre, per }
    }

    pub fn shift(&self, n: usize) -> Point {
        let (a, b) = sets::shift_point(&self.pre, &self.per, n);
        Point::new(a, b)
    }

    pub fn prepend(&self, w: &Word) -> Point {
        Point::new(w.concat(&self.pre), self.per.clone())
    }

    pub fn starts_with(&self, w: &Word) -> bool {
        let mut p = self.pre.clone();
        while p.len() < w.len() {
            p = p.concat(&self.per);
        }
        p.starts_with(w)
    }

    pub fn first(&self) -> Letter {
        self.pre.first().or(self.per.first()).expect("nonempty period")
    }

    pub fn fmt(&self, sh: &Shift) -> String {
        format!("inf({};{})", sh.fmt_word(&self.pre), sh.fmt_word(&self.per))
    }
}

/// `(x, k - m, y)` with `sigma^k x = sigma^m y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupoidArrow {
    pub range: Point,
    pub n: i64,
    pub source: Point,
    pub k: usize,
    pub m: usize,
}

impl GroupoidArrow {
    pub fn unit(x: Point) -> Self {
        GroupoidArrow { range: x.clone(), n: 0, source: x, k: 0, m: 0 }
    }

    pub fn is_consistent(&self) -> bool {
        self.n == self.k as i64 - self.m as i64 && self.range.shift(self.k) == self.source.shift(self.m)
    }

    pub fn inverse(&self) -> Self {
        GroupoidArrow { range: self.source.clone(), n: -self.n, source: self.range.clone(), k: self.m, m: self.k }
    }

    /// Product `self * other` when `self.source == other.range`.
    pub fn compose(&self, other: &GroupoidArrow) -> Option<GroupoidArrow> {
        if self.source != other.range {
            return None;
        }
        // sigma^{k1} x = sigma^{m1} y and sigma^{k2} y = sigma^{m2} z
        let top = self.m.max(other.k);
        let g = GroupoidArrow {
            range: self.range.clone(),
            n: self.n + other.n,
            source: other.source.clone(),
            k: self.k + top - self.m,
            m: other.m + top - other.k,
        };
        g.is_consistent().then_some(g)
    }
}

/// The arrow of `t` at a source point `y` in `W_{t^-1}`: `(pos z, |pos| - |neg|, neg z)`.
pub fn theta(sh: &Shift, x: &Point, t: &FreeGroupElement, y: &Point) -> Result<GroupoidArrow> {
    if !y.starts_with(&t.neg) {
        return Err(Error::Inconsistent("source point does not start with the negative part".into()));
    }
    let z = y.shift(t.neg.len());
    let image = z.prepend(&t.pos);
    if !sh.contains_point(&image.pre, &image.per) || image != *x {
        return Err(Error::Inconsistent("range point is not the image of the source point".into()));
    }
    let a = GroupoidArrow { range: x.clone(), n: t.degree(), source: y.clone(), k: t.pos.len(), m: t.neg.len() };
    if !a.is_consistent() {
        return Err(Error::Inconsistent("shift equation fails".into()));
    }
    Ok(a)
}

/// `(x, n, y) -> (sigma x, n, sigma y)`.
pub fn epsilon(a: &GroupoidArrow) -> GroupoidArrow {
    GroupoidArrow { range: a.range.shift(1), n: a.n, source: a.source.shift(1), k: a.k, m: a.m }
}

/// `epsilon` restricted to arrows whose end points start with a letter of `m`.
pub fn epsilon_m(a: &GroupoidArrow, m: &[Letter]) -> Result<GroupoidArrow> {
    if !m.contains(&a.range.first()) || !m.contains(&a.source.first()) {
        return Err(Error::NotInDomain("arrow end points outside the letter set".into()));
    }
    Ok(epsilon(a))
}

/// Value of the groupoid function of `x` at an arrow.
///
/// A term `f d_t` contributes `f(range)` exactly when the arrow is
/// `(pos z, |pos| - |neg|, neg z)`. Only point membership is used.
pub fn groupoid_eval(sh: &Shift, x: &AlgebraElement, a: &GroupoidArrow) -> Result<RingElem> {
    if !a.is_consistent() {
        return Err(Error::DepthInsufficient("arrow fails its shift equation".into()));
    }
    let mut v = BigRational::zero();
    for (t, f) in &x.terms {
        if t.degree() != a.n || !a.source.starts_with(&t.neg) {
            continue;
        }
        let z = a.source.shift(t.neg.len());
        if z.prepend(&t.pos) != a.range || !a.range.starts_with(&t.pos) {
            continue;
        }
        if !sh.contains_point(&a.range.pre, &a.range.per) {
            continue;
        }
        v += f.eval(|s| sets::contains_point(sh, s, &a.range.pre, &a.range.per));
    }
    Ok(RingElem { ring: x.ring, value: x.ring.norm(v) })
}

/// Representative arrows: for every group element in either element and
/// every piece of the common refinement of their sets, one arrow.
pub fn sample_arrows(sh: &Shift, xs: &[&AlgebraElement]) -> Vec<GroupoidArrow> {
    let mut ts: BTreeSet<FreeGroupElement> = BTreeSet::new();
    for x in xs {
        ts.extend(x.terms.keys().cloned());
    }
    let mut out = Vec::new();
    for t in ts {
        let gens: Vec<SetExpr> = xs.iter().filter_map(|x| x.terms.get(&t)).flat_map(|f| f.terms.iter().map(|(_, s)| s.clone())).collect();
        let w = domain_of(sh, &t);
        for piece in sets::atoms(sh, &gens) {
            let piece = sets::intersect(sh, &piece, &w);
            let Some((pre, per)) = sets::witness_point(sh, &piece) else {
                continue;
            };
            let x = Point::new(pre, per);
            let z = x.shift(t.pos.len());
            let y = z.prepend(&t.neg);
            if let Ok(a) = theta(sh, &x, &t, &y) {
                out.push(a);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Algebra;
    use crate::fixtures;
    use crate::ring::Ring;

    #[test]
    fn full_shift_levels() {
        let sh = fixtures::full_shift();
        let lv = Level::canonical(&sh, 2, 2);
        assert_eq!(lv.atoms.len(), 4);
        let w = |s: &str| sh.parse_word(s).unwrap();
        let i = lv.atom_of_point(&sh, &w(""), &w("0")).unwrap();
        assert!(lv.atoms[i].same_set(&sets::cylinder(&sh, &w("00"))));
        let z01 = sets::cylinder(&sh, &w("01"));
        assert!(sigma_hat(&sh, &z01).unwrap().same_set(&sets::cylinder(&sh, &w("1"))));
        assert!(sigma_hat(&sh, &sets::x_set(&sh)).is_err());
        assert_eq!(pi(&sh, &z01, 2, 8), (w("01"), PiStatus::Truncated));
    }

    #[test]
    fn pi_on_rule_graphs() {
        let sh = fixtures::fan_loop();
        let w = |s: &str| sh.parse_word(s).unwrap();
        let mut a = sets::x_set(&sh);
        for l in sh.alphabet.window(5) {
            a = sets::difference(&sh, &a, &sets::cylinder(&sh, &Word(vec![l])));
        }
        assert_eq!(pi(&sh, &a, 5, 8), (w(""), PiStatus::Zero));
    }

    #[test]
    fn steinberg_values() {
        let sh = fixtures::golden_mean();
        let alg = Algebra::unital(&sh, Ring::Integer);
        let w = |s: &str| sh.parse_word(s).unwrap();
        let s0 = alg.s(sh.letter("0").unwrap()).unwrap();
        let x = Point::new(w(""), w("01"));
        let t = FreeGroupElement { pos: w("0"), neg: w("") };
        let a = theta(&sh, &Point::new(w("0"), w("01")), &t, &x).unwrap();
        assert_eq!(groupoid_eval(&sh, &s0, &a).unwrap().value, BigRational::from_integer(1.into()));
        let b = GroupoidArrow { range: Point::new(w("1"), w("0")), n: 1, source: Point::new(w(""), w("0")), k: 1, m: 0 };
        assert!(groupoid_eval(&sh, &s0, &b).unwrap().value.is_zero());
        let e = epsilon(&a);
        assert_eq!(e.range, x);
        assert!(e.is_consistent());
    }
}
