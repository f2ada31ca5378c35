//! The partial action of the free group on X, its dual on indicator
//! combinations, and products in the partial skew group ring.

use crate::error::Result;
use crate::ring::Ring;
use crate::sets::{self, Flavor, SetExpr};
use crate::shift::Shift;
use crate::word::{fg_mul, FreeGroupElement};
use num_rational::BigRational;
use num_traits::Zero;

/// `sum c_i 1_{A_i}` with pairwise disjoint nonempty `A_i` and distinct
/// nonzero `c_i`, sorted by coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Combo {
    pub terms: Vec<(BigRational, SetExpr)>,
}

impl Combo {
    pub fn zero() -> Self {
        Combo::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn indicator(ring: Ring, a: SetExpr) -> Self {
        if a.is_empty() {
            return Combo::zero();
        }
        Combo { terms: vec![(ring.one(), a.with_flavor(Flavor::U))] }
    }

    /// Canonical form of an arbitrary list of weighted sets.
    pub fn canonical_with(sh: &Shift, ring: Ring, items: Vec<(BigRational, SetExpr)>) -> Self {
        let mut parts: Vec<(BigRational, SetExpr)> = Vec::new();
        for (c, a) in items {
            if a.is_empty() {
                continue;
            }
            let a = a.with_flavor(Flavor::U);
            let mut rest = a.clone();
            let mut next = Vec::with_capacity(parts.len() + 1);
            for (d, p) in parts {
                let inside = sets::intersect(sh, &p, &a);
                if inside.is_empty() {
                    next.push((d, p));
                    continue;
                }
                let outside = sets::difference(sh, &p, &a);
                rest = sets::difference(sh, &rest, &p);
                next.push((ring.add(&d, &c), inside));
                if !outside.is_empty() {
                    next.push((d, outside));
                }
            }
            if !rest.is_empty() {
                next.push((c.clone(), rest));
            }
            parts = next;
        }
        merge(sh, parts)
    }

    pub fn add(&self, sh: &Shift, ring: Ring, o: &Combo) -> Combo {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        let items = self.terms.iter().chain(o.terms.iter()).cloned().collect();
        Combo::canonical_with(sh, ring, items)
    }

    pub fn scale(&self, sh: &Shift, ring: Ring, c: &BigRational) -> Combo {
        let items = self.terms.iter().map(|(d, a)| (ring.mul(c, d), a.clone())).collect();
        merge(sh, items)
    }

    /// Pointwise product.
    pub fn mul(&self, sh: &Shift, ring: Ring, o: &Combo) -> Combo {
        let mut items = Vec::new();
        for (c, a) in &self.terms {
            for (d, b) in &o.terms {
                let ab = sets::intersect(sh, a, b);
                if !ab.is_empty() {
                    items.push((ring.mul(c, d), ab));
                }
            }
        }
        merge(sh, items)
    }

    pub fn restrict(&self, sh: &Shift, s: &SetExpr) -> Combo {
        let items = self.terms.iter().map(|(c, a)| (c.clone(), sets::intersect(sh, a, s))).collect();
        merge(sh, items)
    }

    pub fn support(&self, sh: &Shift) -> SetExpr {
        self.terms.iter().fold(SetExpr::empty(Flavor::U), |acc, (_, a)| sets::union(sh, &acc, a))
    }

    /// Applies a map on sets that is injective on the support.
    pub fn map_sets<F: Fn(&SetExpr) -> Result<SetExpr>>(&self, sh: &Shift, f: F) -> Result<Combo> {
        let mut items = Vec::with_capacity(self.terms.len());
        for (c, a) in &self.terms {
            items.push((c.clone(), f(a)?));
        }
        Ok(merge(sh, items))
    }

    /// Value at a point given by a membership test.
    pub fn eval<F: Fn(&SetExpr) -> bool>(&self, member: F) -> BigRational {
        for (c, a) in &self.terms {
            if member(a) {
                return c.clone();
            }
        }
        BigRational::zero()
    }
}

/// Merges disjoint parts with equal coefficients and drops zeros.
fn merge(sh: &Shift, parts: Vec<(BigRational, SetExpr)>) -> Combo {
    let mut by: Vec<(BigRational, SetExpr)> = Vec::new();
    for (c, a) in parts {
        if c.is_zero() || a.is_empty() {
            continue;
        }
        let a = a.with_flavor(Flavor::U);
        match by.iter_mut().find(|(d, _)| *d == c) {
            Some((_, b)) => *b = sets::union(sh, b, &a),
            None => by.push((c, a)),
        }
    }
    by.sort();
    Combo { terms: by }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkewTerm {
    pub t: FreeGroupElement,
    pub f: Combo,
}

/// `W_t = C(neg, pos)`; empty off the positive-negative shape.
pub fn domain_of(sh: &Shift, t: &FreeGroupElement) -> SetExpr {
    sets::c_set(sh, &t.neg, &t.pos).with_flavor(Flavor::U)
}

/// `tau_t(B ∩ W_{t^-1})`: strip `neg`, require a `pos`-continuation, prepend `pos`.
pub fn tau_hat_apply(sh: &Shift, t: &FreeGroupElement, b: &SetExpr) -> Result<SetExpr> {
    if t.is_identity() {
        return Ok(b.clone());
    }
    let stripped = sets::relative_range(sh, b, &t.neg)?;
    let inner = sets::intersect(sh, &stripped, &sets::follower(sh, &t.pos)).with_flavor(b.flavor);
    sets::prepend_word(sh, &t.pos, &inner)
}

/// `tau_t` on functions supported in `W_{t^-1}`.
pub fn tau_apply(sh: &Shift, t: &FreeGroupElement, f: &Combo) -> Result<Combo> {
    if t.is_identity() {
        return Ok(f.clone());
    }
    f.map_sets(sh, |a| tau_hat_apply(sh, t, a))
}

/// `(f_s d_s)(g_t d_t) = tau_s(tau_{s^-1}(f_s) g_t) d_{st}`.
pub fn skew_mul(sh: &Shift, ring: Ring, u: &SkewTerm, v: &SkewTerm) -> Result<Option<SkewTerm>> {
    let Ok(st) = fg_mul(&u.t, &v.t) else {
        return Ok(None);
    };
    let pulled = tau_apply(sh, &u.t.inverse(), &u.f)?;
    let prod = pulled.mul(sh, ring, &v.f);
    if prod.is_zero() {
        return Ok(None);
    }
    let f = tau_apply(sh, &u.t, &prod)?;
    if f.is_zero() {
        return Ok(None);
    }
    Ok(Some(SkewTerm { t: st, f }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::word::fg_from_pair;

    #[test]
    fn domains_and_images() {
        let sh = fixtures::golden_mean();
        let w = |s: &str| sh.parse_word(s).unwrap();
        let t = fg_from_pair(&w("1"), &w("0"));
        assert!(domain_of(&sh, &t).same_set(&sets::cylinder(&sh, &w("10"))));
        let t = fg_from_pair(&w("0"), &w("1"));
        let img = tau_hat_apply(&sh, &t, &sets::cylinder(&sh, &w("10"))).unwrap();
        assert!(img.same_set(&sets::cylinder(&sh, &w("00"))));
    }

    #[test]
    fn skew_products() {
        let sh = fixtures::golden_mean();
        let r = Ring::Integer;
        let w = |s: &str| sh.parse_word(s).unwrap();
        let gen = |pos: &str, neg: &str| {
            let t = fg_from_pair(&w(pos), &w(neg));
            SkewTerm { f: Combo::indicator(r, domain_of(&sh, &t)), t }
        };
        let p = skew_mul(&sh, r, &gen("0", ""), &gen("", "0")).unwrap().unwrap();
        assert!(p.t.is_identity());
        assert!(p.f.terms[0].1.same_set(&sets::cylinder(&sh, &w("0"))));
        let p = skew_mul(&sh, r, &gen("0", ""), &gen("", "1")).unwrap().unwrap();
        assert_eq!(p.t, fg_from_pair(&w("0"), &w("1")));
        assert!(p.f.terms[0].1.same_set(&sets::c_set(&sh, &w("1"), &w("0"))));
        assert!(skew_mul(&sh, r, &gen("1", ""), &gen("1", "")).unwrap().is_none());
    }
}
