//! Sliding block codes between finite-alphabet subshifts, their action on the
//! set algebra and on atoms, and a finite-depth check of the conditions that
//! characterise conjugacies through the algebra and groupoid.

use crate::algebra::{Algebra, AlgebraElement};
use crate::display::fmt_set;
use crate::error::{Error, Result};
use crate::partial_action::Combo;
use crate::report::{Check, Report};
use crate::ring::Ring;
use crate::sets::{self, Flavor, SetExpr};
use crate::shift::Shift;
use crate::stone::{self, groupoid_eval, sample_arrows, GroupoidArrow, Level, Point};
use crate::word::{FreeGroupElement, Letter, Word};
use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::rc::Rc;

/// `x_i -> map(x_i ... x_{i+m})`. A `first` rule replaces the map at
/// coordinate 0 only (memory 0); such codes do not commute with the shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCode {
    pub memory: usize,
    pub map: BTreeMap<Word, Letter>,
    pub first: Option<BTreeMap<Letter, Letter>>,
    pub inverse: Option<Box<BlockCode>>,
}

impl BlockCode {
    /// Memory-0 code from letter pairs.
    pub fn letters(pairs: &[(Letter, Letter)]) -> BlockCode {
        BlockCode { memory: 0, map: pairs.iter().map(|&(a, b)| (Word(vec![a]), b)).collect(), first: None, inverse: None }
    }

    pub fn with_inverse(mut self, inv: BlockCode) -> Self {
        self.inverse = Some(Box::new(inv));
        self
    }

    fn letter(&self, a: Letter, at_start: bool) -> Option<Letter> {
        if at_start {
            if let Some(f) = &self.first {
                return f.get(&a).copied();
            }
        }
        self.map.get(&Word(vec![a])).copied()
    }

    /// The memory-0 code as a letter map, ignoring any `first` rule.
    fn letter_map(&self) -> Result<BTreeMap<Letter, Letter>> {
        if self.memory != 0 {
            return Err(Error::UnsupportedBackend("block codes with memory act on sets only through words".into()));
        }
        Ok(self.map.iter().map(|(w, &b)| (w.letters()[0], b)).collect())
    }

    /// Image of a point of the source shift (memory 0).
    pub fn apply_point(&self, p: &Point) -> Result<Point> {
        if self.memory != 0 {
            return Err(Error::UnsupportedBackend("point images need memory 0".into()));
        }
        let (pre, per) = if p.pre.is_empty() { (p.per.clone(), p.per.clone()) } else { (p.pre.clone(), p.per.clone()) };
        let miss = |a: Letter| Error::OutsideLanguage(format!("no rule for letter {a:?}"));
        let pre: Vec<Letter> =
            pre.letters().iter().enumerate().map(|(i, &a)| self.letter(a, i == 0).ok_or_else(|| miss(a))).collect::<Result<_>>()?;
        let per: Vec<Letter> = per.letters().iter().map(|&a| self.letter(a, false).ok_or_else(|| miss(a))).collect::<Result<_>>()?;
        Ok(Point::new(Word(pre), Word(per)))
    }
}

/// Letterwise image of a word of the source language: length `|w| - m`.
pub fn apply_code(sh: &Shift, h: &BlockCode, w: &Word) -> Result<Word> {
    if !sh.is_in_language(w)? {
        return Err(Error::OutsideLanguage(sh.fmt_word(w)));
    }
    if w.len() < h.memory + 1 {
        return Err(Error::OutsideLanguage(format!("{} is shorter than the code window", sh.fmt_word(w))));
    }
    let mut out = Vec::new();
    for i in 0..w.len() - h.memory {
        let b = w.slice(i + 1, i + h.memory + 1);
        let img = if h.memory == 0 { h.letter(b.letters()[0], i == 0) } else { h.map.get(&b).copied() };
        out.push(img.ok_or_else(|| Error::OutsideLanguage(format!("no rule for block {}", sh.fmt_word(&b))))?);
    }
    Ok(Word(out))
}

/// A word of length at most `depth` whose image leaves the target language, or
/// a block without a rule.
pub fn code_witness(src: &Shift, dst: &Shift, h: &BlockCode, depth: usize) -> Option<String> {
    for w in src.words_up_to(depth, usize::MAX) {
        if w.len() < h.memory + 1 {
            continue;
        }
        match apply_code(src, h, &w) {
            Ok(v) if dst.state_of(&v).is_some() => {}
            Ok(v) => return Some(format!("{} -> {} is not in the target language", src.fmt_word(&w), dst.fmt_word(&v))),
            Err(e) => return Some(e.to_string()),
        }
    }
    None
}

struct Piece {
    signs: Vec<bool>,
    set: SetExpr,
}

struct LevelImage {
    pieces: Vec<Piece>,
    images: Vec<SetExpr>,
}

/// Set images under a memory-0 code, decided over the subalgebra generated by
/// `C(alpha, beta)` with short words: there `C(alpha, beta)` goes to
/// `C(h alpha, h beta)`.
pub struct SetMap<'a> {
    pub src: &'a Shift,
    pub dst: &'a Shift,
    h: &'a BlockCode,
    phi: BTreeMap<Letter, Letter>,
    max_depth: usize,
    cache: RefCell<BTreeMap<usize, Rc<LevelImage>>>,
}

impl<'a> SetMap<'a> {
    pub fn new(src: &'a Shift, dst: &'a Shift, h: &'a BlockCode, max_depth: usize) -> Result<Self> {
        if h.inverse.is_none() {
            return Err(Error::NotInvertible);
        }
        if !src.is_finite_alphabet() || !dst.is_finite_alphabet() {
            return Err(Error::UnsupportedBackend("set images need finite alphabets".into()));
        }
        let phi = h.letter_map()?;
        Ok(SetMap { src, dst, h, phi, max_depth, cache: RefCell::new(BTreeMap::new()) })
    }

    fn map_word(&self, w: &Word) -> Option<Word> {
        w.letters().iter().map(|a| self.phi.get(a).copied()).collect::<Option<Vec<_>>>().map(Word)
    }

    fn level(&self, d: usize) -> Result<Rc<LevelImage>> {
        if let Some(l) = self.cache.borrow().get(&d) {
            return Ok(l.clone());
        }
        let (src, dst) = (self.src, self.dst);
        let ws = src.words_up_to(d, usize::MAX);
        let mut gens: Vec<SetExpr> = Vec::new();
        let mut imgs: Vec<SetExpr> = Vec::new();
        for a in &ws {
            for b in &ws {
                let s = sets::c_set(src, a, b).with_flavor(Flavor::U);
                if s.is_empty() || gens.iter().any(|g| g.same_set(&s)) {
                    continue;
                }
                let (Some(ha), Some(hb)) = (self.map_word(a), self.map_word(b)) else {
                    return Err(Error::OutsideLanguage(format!("no rule for a letter of {}", src.fmt_word(&a.concat(b)))));
                };
                gens.push(s);
                imgs.push(sets::c_set(dst, &ha, &hb).with_flavor(Flavor::U));
            }
        }
        let mut pieces = vec![Piece { signs: Vec::new(), set: sets::x_set(src) }];
        for g in &gens {
            let mut next = Vec::new();
            for p in pieces {
                let inside = sets::intersect(src, &p.set, g).with_flavor(Flavor::U);
                let outside = sets::difference(src, &p.set, g);
                for (s, sign) in [(inside, true), (outside, false)] {
                    if !s.is_empty() {
                        let mut signs = p.signs.clone();
                        signs.push(sign);
                        next.push(Piece { signs, set: s });
                    }
                }
            }
            pieces = next;
        }
        let images = pieces
            .iter()
            .map(|p| {
                let mut acc = sets::x_set(dst);
                for (i, &sg) in p.signs.iter().enumerate() {
                    acc = if sg { sets::intersect(dst, &acc, &imgs[i]) } else { sets::difference(dst, &acc, &imgs[i]) };
                }
                acc.with_flavor(Flavor::U)
            })
            .collect();
        let l = Rc::new(LevelImage { pieces, images });
        self.cache.borrow_mut().insert(d, l.clone());
        Ok(l)
    }

    /// Image under the shift-commuting part of the code.
    fn phi_bar(&self, a: &SetExpr) -> Result<SetExpr> {
        if a.is_empty() {
            return Ok(SetExpr::empty(a.flavor));
        }
        for d in 0..=self.max_depth {
            let lv = self.level(d)?;
            let mut acc = SetExpr::empty(Flavor::U);
            let mut exact = true;
            for (p, img) in lv.pieces.iter().zip(&lv.images) {
                if sets::is_subset(self.src, &p.set, a) {
                    acc = sets::union(self.dst, &acc, img);
                } else if !sets::intersect(self.src, &p.set, a).is_empty() {
                    exact = false;
                    break;
                }
            }
            if exact {
                return Ok(acc.with_flavor(a.flavor));
            }
        }
        Err(Error::DepthInsufficient(format!("{} is not generated at depth {}", fmt_set(self.src, a), self.max_depth)))
    }

    /// `h(A)`.
    pub fn image(&self, a: &SetExpr) -> Result<SetExpr> {
        let Some(first) = &self.h.first else {
            return self.phi_bar(a);
        };
        let mut acc = SetExpr::empty(a.flavor);
        for l in self.src.alphabet.finite_letters().unwrap() {
            let rest = sets::relative_range(self.src, a, &Word(vec![l]))?;
            if rest.is_empty() {
                continue;
            }
            let b =
                *first.get(&l).ok_or_else(|| Error::OutsideLanguage(format!("no first rule for {}", self.src.alphabet.letter_name(l))))?;
            let tail = self.phi_bar(&rest)?;
            let bw = Word(vec![b]);
            let fits = sets::intersect(self.dst, &tail, &sets::follower(self.dst, &bw)).with_flavor(tail.flavor);
            if !fits.same_set(&tail) {
                return Err(Error::Inconsistent(format!("image of {} leaves the target shift", fmt_set(self.src, a))));
            }
            acc = sets::union(self.dst, &acc, &sets::prepend(self.dst, b, &fits)?);
        }
        Ok(acc.with_flavor(a.flavor))
    }

    /// `Psi(f d_t) = (f o h^-1) d_{h t}` for shift-commuting letter codes.
    pub fn element_image(&self, target: &Algebra, x: &AlgebraElement) -> Result<AlgebraElement> {
        if self.h.first.is_some() {
            return Err(Error::UnsupportedBackend("element images need a shift-commuting code".into()));
        }
        let mut terms = BTreeMap::new();
        for (t, f) in &x.terms {
            let (Some(pos), Some(neg)) = (self.map_word(&t.pos), self.map_word(&t.neg)) else {
                return Err(Error::OutsideLanguage("letter without rule".into()));
            };
            let items = f.terms.iter().map(|(c, s)| Ok((c.clone(), self.image(s)?))).collect::<Result<Vec<_>>>()?;
            let g = Combo::canonical_with(self.dst, target.ring, items);
            if !g.is_zero() {
                terms.insert(FreeGroupElement { pos, neg }, g);
            }
        }
        Ok(AlgebraElement { ring: target.ring, flavor: target.flavor, terms })
    }
}

/// `h(A)` for a code with declared inverse.
pub fn image_of_set(src: &Shift, dst: &Shift, h: &BlockCode, a: &SetExpr, max_depth: usize) -> Result<SetExpr> {
    SetMap::new(src, dst, h, max_depth)?.image(a)
}

/// Atom map at a depth: for each source atom, the target atoms meeting its image.
#[derive(Clone, Debug)]
pub struct HatMap {
    pub source: Level,
    pub target: Level,
    pub images: Vec<Vec<usize>>,
}

impl HatMap {
    /// Every atom goes to exactly one atom and no two share it.
    pub fn is_bijective(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.images.iter().all(|v| v.len() == 1 && seen.insert(v[0])) && seen.len() == self.target.atoms.len()
    }
}

pub fn induced_h_hat(m: &SetMap, depth: usize) -> Result<HatMap> {
    let source = Level::canonical(m.src, depth, usize::MAX);
    let target = Level::canonical(m.dst, depth, usize::MAX);
    let mut images = Vec::new();
    for a in &source.atoms {
        let img = m.image(a)?;
        images.push(match target.atoms.iter().position(|b| b.same_set(&img)) {
            Some(i) => vec![i],
            None => target.atoms_meeting(m.dst, &img),
        });
    }
    Ok(HatMap { source, target, images })
}

fn subsets_up_to(letters: &[Letter], k: usize) -> Vec<Vec<Letter>> {
    let mut out: Vec<Vec<Letter>> = vec![Vec::new()];
    for &l in letters {
        let more: Vec<Vec<Letter>> = out.iter().filter(|s| s.len() < k).map(|s| [s.clone(), vec![l]].concat()).collect();
        out.extend(more);
    }
    out.retain(|s| !s.is_empty());
    out
}

/// Finite-depth check of the conjugacy conditions for `h: src -> dst`.
///
/// (a) set images respect the Boolean operations, are bijective on atoms and
/// carry forced prefixes to forced prefixes; (b) the induced map commutes
/// with the shift on atoms inside one-letter cylinders; (c) arrow images keep
/// their cocycle and letter-restricted domains; (d) the element map matches
/// composition with the inverse arrow map and the cut-down identities.
/// Passing says nothing beyond the depth.
pub fn verify_conjugacy(src: &Shift, dst: &Shift, h: &BlockCode, depth: usize, m_budget: usize, ring: Ring) -> Result<Report> {
    let inv = h.inverse.as_deref().ok_or(Error::NotInvertible)?;
    let mut rep = Report::new(&format!("conjugacy checks {} -> {}", src.name, dst.name));
    rep.param("depth", depth);
    rep.param("m_budget", m_budget);
    rep.param("ring", ring);
    if let Some(w) = code_witness(src, dst, h, depth).or_else(|| code_witness(dst, src, inv, depth)) {
        let mut c = Check::new("code");
        c.record(false, || w);
        rep.checks.push(c);
        return Ok(rep);
    }
    let map = SetMap::new(src, dst, h, depth + 2)?;
    let hat = induced_h_hat(&map, depth)?;
    let atoms = &hat.source.atoms;

    let mut a = Check::new("a");
    a.record(hat.is_bijective(), || "atom images are not a bijection onto the target atoms".into());
    let gens: Vec<&SetExpr> = hat.source.gens.iter().take(12).collect();
    for x in &gens {
        for y in &gens {
            let (hx, hy) = (map.image(x)?, map.image(y)?);
            for (name, l, r) in [
                ("union", sets::union(src, x, y), sets::union(dst, &hx, &hy)),
                ("intersection", sets::intersect(src, x, y), sets::intersect(dst, &hx, &hy)),
                ("difference", sets::difference(src, x, y), sets::difference(dst, &hx, &hy)),
            ] {
                let hl = map.image(&l)?;
                a.record(hl.same_set(&r), || format!("{name} of {} and {}", fmt_set(src, x), fmt_set(src, y)));
            }
        }
    }
    for u in atoms {
        let hu = map.image(u)?;
        if let Some((pre, per)) = sets::witness_point(src, u) {
            let p = Point::new(pre, per);
            let q = h.apply_point(&p)?;
            let ok = dst.contains_point(&q.pre, &q.per) && sets::contains_point(dst, &hu, &q.pre, &q.per);
            a.record(ok, || format!("{} in {} but its image is outside the image atom", p.fmt(src), fmt_set(src, u)));
        }
        let (w, _) = stone::pi(src, u, usize::MAX, depth);
        let (v, _) = stone::pi(dst, &hu, usize::MAX, depth);
        let hw = if w.is_empty() { Some(Word::empty()) } else { apply_code(src, h, &w).ok() };
        a.record(hw.as_ref() == Some(&v), || format!("forced prefix of {} is not carried to that of its image", fmt_set(src, u)));
    }
    rep.checks.push(a);

    let mut b = Check::new("b");
    for u in atoms {
        let Some(_) = stone::unique_letter(src, u) else {
            continue;
        };
        let hu = map.image(u)?;
        let lhs = map.image(&stone::sigma_hat(src, u)?)?;
        match stone::sigma_hat(dst, &hu) {
            Ok(rhs) => b.record(lhs.same_set(&rhs), || {
                format!("atom {}: h(shift) = {} but shift(h) = {}", fmt_set(src, u), fmt_set(dst, &lhs), fmt_set(dst, &rhs))
            }),
            Err(_) => b.record(false, || format!("image of atom {} spans several letters", fmt_set(src, u))),
        }
    }
    rep.checks.push(b);

    let ua = Algebra::unital(src, ring);
    let ub = Algebra::unital(dst, ring);
    let letters = src.alphabet.finite_letters().unwrap();
    let mut sample: Vec<AlgebraElement> = Vec::new();
    for &l in &letters {
        sample.push(ua.s(l)?);
        sample.push(ua.s_star(l)?);
    }
    for x in src.words_up_to(1, usize::MAX) {
        for y in src.words_up_to(1, usize::MAX) {
            let c = sets::c_set(src, &x, &y).with_flavor(Flavor::U);
            if !c.is_empty() {
                sample.push(ua.p(&c)?);
            }
        }
    }
    for &l in &letters {
        for &r in &letters {
            let m = ua.monomial(&Word(vec![l]), &sets::x_set(src), &Word(vec![r]))?;
            if !m.is_zero() {
                sample.push(m);
            }
        }
    }
    let refs: Vec<&AlgebraElement> = sample.iter().collect();
    let arrows = sample_arrows(src, &refs);

    let mut c = Check::new("c");
    let subsets = subsets_up_to(&letters, m_budget);
    let mut n_for_m: Vec<(Vec<Letter>, Vec<Letter>)> = Vec::new();
    for m in &subsets {
        let dom = m.iter().fold(SetExpr::empty(Flavor::U), |acc, &l| sets::union(src, &acc, &sets::cylinder(src, &Word(vec![l]))));
        let n: Vec<Letter> = match map.image(&dom) {
            Ok(img) => crate::shift::letter_set_letters(&sets::emitted_letters(dst, &img)).unwrap_or_default(),
            Err(_) => Vec::new(),
        };
        n_for_m.push((m.clone(), n));
    }
    for g in &arrows {
        let (x, y) = (h.apply_point(&g.range)?, h.apply_point(&g.source)?);
        let img = GroupoidArrow { range: x, n: g.n, source: y, k: g.k, m: g.m };
        c.record(img.is_consistent(), || format!("arrow ({}, {}, {}) maps off the groupoid", g.range.fmt(src), g.n, g.source.fmt(src)));
        for (m, n) in &n_for_m {
            if stone::epsilon_m(g, m).is_ok() {
                c.record(img.is_consistent() && stone::epsilon_m(&img, n).is_ok(), || {
                    format!("arrow ({}, {}, {}) leaves the restricted domain", g.range.fmt(src), g.n, g.source.fmt(src))
                });
            }
        }
    }
    rep.checks.push(c);

    let mut d = Check::new("d");
    if h.first.is_some() {
        d.skip();
        d.note = Some("the code does not commute with the shift, so no element map is defined".into());
    } else {
        let inv_arrow = |g: &GroupoidArrow| -> Result<GroupoidArrow> {
            Ok(GroupoidArrow { range: inv.apply_point(&g.range)?, n: g.n, source: inv.apply_point(&g.source)?, k: g.k, m: g.m })
        };
        for f in &sample {
            let pf = map.element_image(&ub, f)?;
            for g in sample_arrows(dst, &[&pf]) {
                let back = inv_arrow(&g)?;
                let ok = back.is_consistent() && groupoid_eval(dst, &pf, &g)? == groupoid_eval(src, f, &back)?;
                d.record(ok, || {
                    format!("Psi(f) differs from f after the inverse arrow map at ({}, {}, {})", g.range.fmt(dst), g.n, g.source.fmt(dst))
                });
            }
        }
        for (m, n) in &n_for_m {
            let pe = map.element_image(&ub, &ua.e_m(m)?)?;
            for f in sample.iter().take(8) {
                let lhs = map.element_image(&ub, &ua.tau_m(m, f)?)?;
                let inner = ub.tau_m(n, &map.element_image(&ub, f)?)?;
                let rhs = ub.mul(&ub.mul(&pe, &inner)?, &pe)?;
                let mut ok = ub.equals(&lhs, &rhs)?;
                for g in sample_arrows(dst, &[&lhs, &rhs]) {
                    ok &= groupoid_eval(dst, &lhs, &g)? == groupoid_eval(dst, &rhs, &g)?;
                }
                d.record(ok, || format!("cut-down identity fails for letter set of size {}", m.len()));
            }
        }
    }
    rep.checks.push(d);
    Ok(rep)
}

/// `0 <-> 1` from the golden mean shift onto the shift forbidding `00`.
pub fn swap_code() -> BlockCode {
    let (z, o) = (Letter::new(0, 0), Letter::new(0, 1));
    let s = BlockCode::letters(&[(z, o), (o, z)]);
    s.clone().with_inverse(s)
}

/// Swaps the letter at coordinate 0 only, on a two-letter alphabet.
pub fn first_letter_twist() -> BlockCode {
    let (z, o) = (Letter::new(0, 0), Letter::new(0, 1));
    let mut t = BlockCode::letters(&[(z, z), (o, o)]);
    t.first = Some([(z, o), (o, z)].into_iter().collect());
    t.clone().with_inverse(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn swap_images() {
        let (x11, x00) = (fixtures::golden_mean(), fixtures::golden_mean_00());
        let h = swap_code();
        let w = |s: &str| x11.parse_word(s).unwrap();
        assert_eq!(apply_code(&x11, &h, &w("010")).unwrap(), w("101"));
        let m = SetMap::new(&x11, &x00, &h, 4).unwrap();
        let img = m.image(&sets::cylinder(&x11, &w("0"))).unwrap();
        assert!(img.same_set(&sets::cylinder(&x00, &w("1"))));
        let img = m.image(&sets::c_set(&x11, &w("1"), &w("0"))).unwrap();
        assert!(img.same_set(&sets::c_set(&x00, &w("0"), &w("1"))));
    }

    #[test]
    fn memory_one_code() {
        let sh = fixtures::golden_mean();
        let w = |s: &str| sh.parse_word(s).unwrap();
        let (z, o) = (Letter::new(0, 0), Letter::new(0, 1));
        let map = [(w("00"), z), (w("01"), o), (w("10"), z)].into_iter().collect();
        let h = BlockCode { memory: 1, map, first: None, inverse: None };
        assert_eq!(apply_code(&sh, &h, &w("010")).unwrap().len(), 2);
        assert!(apply_code(&sh, &h, &w("011")).is_err());
    }
}
