//! Points of the compactification that adds finite sequences and the empty
//! sequence for infinite alphabets, the shift on it, and generalized
//! cylinders `Z(alpha, F)`: points extending `alpha` whose next letter avoids `F`.

use crate::error::{Error, Result};
use crate::sets::{self, Flavor, SetExpr};
use crate::shift::Shift;
use crate::word::{Letter, Word};
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum OTWPoint {
    /// `pre per per per ...`, normalized to a primitive period and shortest preperiod.
    Infinite {
        pre: Word,
        per: Word,
    },
    Finite(Word),
    Zero,
}

/// Primitive period and shortest preperiod of `pre per^inf`.
pub fn normalize_periodic(pre: &Word, per: &Word) -> (Word, Word) {
    let n = per.len();
    let d = (1..=n).find(|d| n.is_multiple_of(*d) && (0..n).all(|i| per.letters()[i] == per.letters()[i % d])).unwrap_or(n);
    let mut per = per.prefix(d).letters().to_vec();
    let mut pre = pre.letters().to_vec();
    while let (Some(a), Some(b)) = (pre.last(), per.last()) {
        if a != b {
            break;
        }
        let b = per.pop().unwrap();
        per.insert(0, b);
        pre.pop();
    }
    (Word(pre), Word(per))
}

impl OTWPoint {
    pub fn infinite(sh: &Shift, pre: &Word, per: &Word) -> Result<OTWPoint> {
        if per.is_empty() {
            return Err(Error::Invalid("empty period".into()));
        }
        sh.alphabet.check(pre)?;
        sh.alphabet.check(per)?;
        if !sh.contains_point(pre, per) {
            return Err(Error::OutsideLanguage(format!("{}({})^inf", sh.fmt_word(pre), sh.fmt_word(per))));
        }
        let (pre, per) = normalize_periodic(pre, per);
        Ok(OTWPoint::Infinite { pre, per })
    }

    pub fn finite(sh: &Shift, w: &Word) -> Result<OTWPoint> {
        if w.is_empty() {
            return OTWPoint::zero(sh);
        }
        if !is_in_xfin(sh, w)? {
            return Err(Error::Invalid(format!("{} is not a finite sequence of the space", sh.fmt_word(w))));
        }
        Ok(OTWPoint::Finite(w.clone()))
    }

    pub fn zero(sh: &Shift) -> Result<OTWPoint> {
        if !is_in_xfin(sh, &Word::empty())? {
            return Err(Error::Invalid("the empty sequence is not a point of this space".into()));
        }
        Ok(OTWPoint::Zero)
    }

    /// Letter at 0-based position `i`, if the point is that long.
    pub fn letter_at(&self, i: usize) -> Option<Letter> {
        match self {
            OTWPoint::Infinite { pre, per } => {
                Some(if i < pre.len() { pre.letters()[i] } else { per.letters()[(i - pre.len()) % per.len()] })
            }
            OTWPoint::Finite(w) => w.letters().get(i).copied(),
            OTWPoint::Zero => None,
        }
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word((0..n).map_while(|i| self.letter_at(i)).collect())
    }

    pub fn fmt(&self, sh: &Shift) -> String {
        let w = |w: &Word| sh.fmt_word(w);
        match self {
            OTWPoint::Infinite { pre, per } => format!("inf({};{})", w(pre), w(per)),
            OTWPoint::Finite(v) => format!("fin({})", w(v)),
            OTWPoint::Zero => "zero".into(),
        }
    }
}

pub fn otw_shift(p: &OTWPoint) -> OTWPoint {
    match p {
        OTWPoint::Infinite { pre, per } => {
            let (a, b) = sets::shift_point(pre, per, 1);
            let (a, b) = normalize_periodic(&a, &b);
            OTWPoint::Infinite { pre: a, per: b }
        }
        OTWPoint::Finite(w) if w.len() >= 2 => OTWPoint::Finite(w.suffix_from(1)),
        _ => OTWPoint::Zero,
    }
}

/// `w` is in the language and has infinitely many one-letter extensions.
pub fn is_in_xfin(sh: &Shift, w: &Word) -> Result<bool> {
    sh.alphabet.check(w)?;
    if sh.is_finite_alphabet() {
        return Ok(false);
    }
    if sh.rules().is_none() {
        return Err(Error::UnsupportedBackend("finite sequences need a rule backend".into()));
    }
    let Some(q) = sh.state_of(w) else {
        return Ok(false);
    };
    Ok(sh.valid_letters(&q).values().any(|s| !s.is_finite()))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GenCylinder {
    pub base: Word,
    pub excluded: BTreeSet<Letter>,
}

impl GenCylinder {
    pub fn new(base: Word, excluded: impl IntoIterator<Item = Letter>) -> Self {
        GenCylinder { base, excluded: excluded.into_iter().collect() }
    }

    pub fn contains(&self, p: &OTWPoint) -> bool {
        let n = self.base.len();
        if p.prefix(n) != self.base {
            return false;
        }
        match p.letter_at(n) {
            Some(a) => !self.excluded.contains(&a),
            None => true,
        }
    }

    /// Membership of any point whose first `|base| + 1` letters are `w`.
    pub fn contains_word(&self, w: &Word) -> bool {
        let n = self.base.len();
        w.len() > n && w.prefix(n) == self.base && !self.excluded.contains(&w.letters()[n])
    }

    pub fn fmt(&self, sh: &Shift) -> String {
        let base = if self.base.is_empty() { "_".to_string() } else { sh.fmt_word(&self.base) };
        if self.excluded.is_empty() {
            format!("Z({base})")
        } else {
            let ex: Vec<String> = self.excluded.iter().map(|&a| sh.alphabet.letter_name(a)).collect();
            format!("Z({base},{{{}}})", ex.join(","))
        }
    }
}

/// `sigma^n(Z(alpha, F)) = Z(alpha_{n+1..}, F) ∩ F(alpha_{1..n})`, as the
/// cylinder and the follower word.
pub fn forward_image(z: &GenCylinder, n: usize) -> Result<(GenCylinder, Word)> {
    let len = z.base.len();
    if n > len {
        return Err(Error::BadDepth { n, len });
    }
    Ok((GenCylinder { base: z.base.suffix_from(n), excluded: z.excluded.clone() }, z.base.prefix(n)))
}

/// `Z(alpha, F) ∩ sigma^-n(Z(beta, G))`: empty or a single generalized cylinder.
pub fn pullback_intersect(sh: &Shift, z1: &GenCylinder, n: usize, z2: &GenCylinder) -> Result<Option<GenCylinder>> {
    let (alpha, f) = (&z1.base, &z1.excluded);
    let (beta, g) = (&z2.base, &z2.excluded);
    let la = alpha.len();
    if n > la {
        return Err(Error::BadDepth { n, len: la });
    }
    let lb = beta.len();
    let tail = alpha.suffix_from(n);
    let out = if lb > la - n {
        if beta.prefix(la - n) != tail || f.contains(&beta.letters()[la - n]) {
            None
        } else {
            Some(GenCylinder { base: alpha.prefix(n).concat(beta), excluded: g.clone() })
        }
    } else if lb == la - n {
        if *beta != tail {
            None
        } else {
            Some(GenCylinder { base: alpha.clone(), excluded: f.union(g).copied().collect() })
        }
    } else if beta.prefix(lb) != tail.prefix(lb) || g.contains(&tail.letters()[lb]) {
        None
    } else {
        Some(z1.clone())
    };
    Ok(out.filter(|c| !is_empty_cylinder(sh, c)))
}

/// No point of the space, finite or infinite, lies in the cylinder.
pub fn is_empty_cylinder(sh: &Shift, z: &GenCylinder) -> bool {
    let Some(q) = sh.state_of(&z.base) else {
        return true;
    };
    if !sh.is_finite_alphabet() && sh.valid_letters(&q).values().any(|s| !s.is_finite()) {
        return false;
    }
    restrict_to_xinf(sh, z).is_empty()
}

/// `Z(alpha, F) ∩ X = Z_alpha \ ∪_{a in F} Z_{alpha a}`.
pub fn restrict_to_xinf(sh: &Shift, z: &GenCylinder) -> SetExpr {
    let mut s = sets::cylinder(sh, &z.base);
    for &a in &z.excluded {
        s = sets::difference(sh, &s, &sets::cylinder(sh, &z.base.push(a)));
    }
    if z.base.is_empty() {
        s.with_flavor(Flavor::U)
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn shift_and_normalize() {
        let sh = fixtures::golden_mean();
        let w = |s: &str| sh.parse_word(s).unwrap();
        let p = OTWPoint::infinite(&sh, &w("01"), &w("0")).unwrap();
        assert_eq!(otw_shift(&p), OTWPoint::infinite(&sh, &w("1"), &w("00")).unwrap());
        assert_eq!(OTWPoint::infinite(&sh, &w("0101"), &w("01")).unwrap(), OTWPoint::Infinite { pre: w(""), per: w("01") });
        assert!(OTWPoint::finite(&sh, &w("0")).is_err());
        let ren = fixtures::renewal();
        let e1 = OTWPoint::finite(&ren, &ren.parse_word("e1").unwrap()).unwrap();
        assert_eq!(otw_shift(&e1), OTWPoint::Zero);
        assert!(!is_in_xfin(&ren, &ren.parse_word("e3").unwrap()).unwrap());
        let tpf = fixtures::fan_loop();
        assert!(is_in_xfin(&tpf, &Word::empty()).unwrap());
    }

    #[test]
    fn pullback_cases() {
        let sh = fixtures::golden_mean();
        let w = |s: &str| sh.parse_word(s).unwrap();
        let l = |s: &str| sh.letter(s).unwrap();
        let (c, f) = forward_image(&GenCylinder::new(w("01"), []), 1).unwrap();
        assert_eq!((c.base, f), (w("1"), w("0")));
        assert!(forward_image(&GenCylinder::new(w("0"), []), 2).is_err());
        let z = |b: &str, ex: &[&str]| GenCylinder::new(w(b), ex.iter().map(|s| l(s)));
        assert_eq!(pullback_intersect(&sh, &z("0", &["1"]), 1, &z("1", &[])).unwrap(), None);
        assert_eq!(pullback_intersect(&sh, &z("0", &[]), 1, &z("1", &[])).unwrap(), Some(z("01", &[])));
        assert_eq!(pullback_intersect(&sh, &z("01", &[]), 1, &z("1", &["0"])).unwrap(), None);
        let full = fixtures::full_shift();
        let zf = |b: &str, ex: &[&str]| GenCylinder::new(full.parse_word(b).unwrap(), ex.iter().map(|s| full.letter(s).unwrap()));
        assert_eq!(pullback_intersect(&full, &zf("01", &[]), 1, &zf("1", &["0"])).unwrap(), Some(zf("01", &["0"])));
        assert!(restrict_to_xinf(&sh, &z("0", &["1"])).same_set(&sets::cylinder(&sh, &w("00"))));
    }
}
