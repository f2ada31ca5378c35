//! Unital and non-unital subshift algebras, computed in the partial skew group
//! ring normal form: a finite map from free group elements `pos·neg^-1` to
//! indicator combinations supported in `C(neg, pos)`.

use crate::error::{Error, Result};
use crate::partial_action::{domain_of, skew_mul, tau_apply, Combo, SkewTerm};
use crate::ring::Ring;
use crate::sets::{self, Flavor, SetExpr, Unitality};
use crate::shift::Shift;
use crate::word::{FreeGroupElement, Letter, Word};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    pub ring: Ring,
    pub flavor: Flavor,
    pub terms: BTreeMap<FreeGroupElement, Combo>,
}

impl AlgebraElement {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.terms.keys().map(|t| t.degree()).collect();
        d.dedup();
        d.sort();
        d.dedup();
        d
    }
}

/// Evaluation context: a shift, a coefficient ring and a flavor.
#[derive(Clone, Copy)]
pub struct Algebra<'a> {
    pub sh: &'a Shift,
    pub ring: Ring,
    pub flavor: Flavor,
}

impl<'a> Algebra<'a> {
    pub fn new(sh: &'a Shift, ring: Ring, flavor: Flavor) -> Self {
        Algebra { sh, ring, flavor }
    }

    pub fn unital(sh: &'a Shift, ring: Ring) -> Self {
        Algebra::new(sh, ring, Flavor::U)
    }

    fn el(&self, terms: BTreeMap<FreeGroupElement, Combo>) -> AlgebraElement {
        AlgebraElement { ring: self.ring, flavor: self.flavor, terms }
    }

    fn single(&self, t: FreeGroupElement, f: Combo) -> AlgebraElement {
        let mut m = BTreeMap::new();
        if !f.is_zero() {
            m.insert(t, f);
        }
        self.el(m)
    }

    fn check(&self, x: &AlgebraElement) -> Result<()> {
        if x.ring != self.ring || x.flavor != self.flavor {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn zero(&self) -> AlgebraElement {
        self.el(BTreeMap::new())
    }

    /// `1 = 1_X d_e`; in the top-free algebra only when X belongs to it.
    pub fn one(&self) -> Result<AlgebraElement> {
        if self.flavor == Flavor::B && sets::is_unital(self.sh) != Unitality::Yes {
            return Err(Error::TopUnavailable);
        }
        Ok(self.single(FreeGroupElement::identity(), Combo::indicator(self.ring, sets::x_set(self.sh))))
    }

    pub fn scalar(&self, c: &BigRational) -> Result<AlgebraElement> {
        Ok(self.scale(&self.one()?, c))
    }

    pub fn s(&self, a: Letter) -> Result<AlgebraElement> {
        let w = Word(vec![a]);
        self.sh.alphabet.check(&w)?;
        let t = FreeGroupElement { pos: w, neg: Word::empty() };
        let f = Combo::indicator(self.ring, domain_of(self.sh, &t));
        Ok(self.single(t, f))
    }

    pub fn s_star(&self, a: Letter) -> Result<AlgebraElement> {
        Ok(self.star(&self.s(a)?))
    }

    /// `s_w = s_{w_1} ... s_{w_n}`; the empty word gives 1.
    pub fn s_word(&self, w: &Word) -> Result<AlgebraElement> {
        self.sh.alphabet.check(w)?;
        if w.is_empty() {
            return self.one();
        }
        let mut x = self.s(w.letters()[0])?;
        for &a in &w.letters()[1..] {
            x = self.mul(&x, &self.s(a)?)?;
        }
        Ok(x)
    }

    pub fn s_word_star(&self, w: &Word) -> Result<AlgebraElement> {
        Ok(self.star(&self.s_word(w)?))
    }

    /// `p_A = 1_A d_e`.
    pub fn p(&self, a: &SetExpr) -> Result<AlgebraElement> {
        if self.flavor == Flavor::B && a.flavor == Flavor::U && sets::is_unital(self.sh) != Unitality::Yes {
            return Err(Error::TopUnavailable);
        }
        Ok(self.single(FreeGroupElement::identity(), Combo::indicator(self.ring, a.clone())))
    }

    /// `s_alpha p_A s_beta^*`, reading `s_omega` as absent.
    pub fn monomial(&self, alpha: &Word, a: &SetExpr, beta: &Word) -> Result<AlgebraElement> {
        let mut x = self.p(a)?;
        if !alpha.is_empty() {
            x = self.mul(&self.s_word(alpha)?, &x)?;
        }
        if !beta.is_empty() {
            x = self.mul(&x, &self.s_word_star(beta)?)?;
        }
        Ok(x)
    }

    pub fn add(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(x)?;
        self.check(y)?;
        let mut m = x.terms.clone();
        for (t, g) in &y.terms {
            let f = match m.remove(t) {
                Some(f) => f.add(self.sh, self.ring, g),
                None => g.clone(),
            };
            if !f.is_zero() {
                m.insert(t.clone(), f);
            }
        }
        Ok(self.el(m))
    }

    pub fn scale(&self, x: &AlgebraElement, c: &BigRational) -> AlgebraElement {
        let c = self.ring.norm(c.clone());
        let m = x.terms.iter().map(|(t, f)| (t.clone(), f.scale(self.sh, self.ring, &c))).filter(|(_, f)| !f.is_zero()).collect();
        self.el(m)
    }

    pub fn neg(&self, x: &AlgebraElement) -> AlgebraElement {
        self.scale(x, &-BigRational::one())
    }

    pub fn sub(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
        self.check(x)?;
        self.check(y)?;
        let mut m: BTreeMap<FreeGroupElement, Combo> = BTreeMap::new();
        for (s, f) in &x.terms {
            for (t, g) in &y.terms {
                let u = SkewTerm { t: s.clone(), f: f.clone() };
                let v = SkewTerm { t: t.clone(), f: g.clone() };
                if let Some(p) = skew_mul(self.sh, self.ring, &u, &v)? {
                    let h = match m.remove(&p.t) {
                        Some(h) => h.add(self.sh, self.ring, &p.f),
                        None => p.f,
                    };
                    if !h.is_zero() {
                        m.insert(p.t, h);
                    }
                }
            }
        }
        Ok(self.el(m))
    }

    /// `(f d_t)^* = tau_{t^-1}(f) d_{t^-1}`.
    pub fn star(&self, x: &AlgebraElement) -> AlgebraElement {
        let mut m = BTreeMap::new();
        for (t, f) in &x.terms {
            let ti = t.inverse();
            let g = tau_apply(self.sh, &ti, f).expect("letters already checked");
            if !g.is_zero() {
                m.insert(ti, g);
            }
        }
        AlgebraElement { ring: x.ring, flavor: x.flavor, terms: m }
    }

    pub fn equals(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<bool> {
        self.check(x)?;
        self.check(y)?;
        Ok(x.terms == y.terms)
    }

    /// Homogeneous components by `|pos| - |neg|`.
    pub fn degree_decompose(&self, x: &AlgebraElement) -> BTreeMap<i64, AlgebraElement> {
        let mut out: BTreeMap<i64, AlgebraElement> = BTreeMap::new();
        for (t, f) in &x.terms {
            out.entry(t.degree())
                .or_insert_with(|| AlgebraElement { ring: x.ring, flavor: x.flavor, terms: BTreeMap::new() })
                .terms
                .insert(t.clone(), f.clone());
        }
        out
    }

    /// `e_M = sum_{a in M} s_a s_a^*`.
    pub fn e_m(&self, m: &[Letter]) -> Result<AlgebraElement> {
        let mut acc = self.zero();
        for &a in m {
            let sa = self.s(a)?;
            acc = self.add(&acc, &self.mul(&sa, &self.star(&sa))?)?;
        }
        Ok(acc)
    }

    /// `tau_M(x) = sum_{a, b in M} s_a x s_b^*`.
    pub fn tau_m(&self, m: &[Letter], x: &AlgebraElement) -> Result<AlgebraElement> {
        let mut acc = self.zero();
        for &a in m {
            let left = self.mul(&self.s(a)?, x)?;
            if left.is_zero() {
                continue;
            }
            for &b in m {
                acc = self.add(&acc, &self.mul(&left, &self.s_star(b)?)?)?;
            }
        }
        Ok(acc)
    }

    /// Same skew form, viewed in the unital algebra.
    pub fn embed(&self, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement { ring: x.ring, flavor: Flavor::U, terms: x.terms.clone() }
    }

    /// `(x, r) -> x + r 1` in the unital algebra.
    pub fn unitize(&self, x: &AlgebraElement, r: &BigRational) -> Result<AlgebraElement> {
        let u = Algebra::unital(self.sh, self.ring);
        let one = u.one()?;
        u.add(&u.embed(x), &u.scale(&one, r))
    }

    /// Sum of `c_i * x_i`.
    pub fn combination(&self, items: &[(BigRational, AlgebraElement)]) -> Result<AlgebraElement> {
        let mut acc = self.zero();
        for (c, x) in items {
            if !c.is_zero() {
                acc = self.add(&acc, &self.scale(x, c))?;
            }
        }
        Ok(acc)
    }
}
