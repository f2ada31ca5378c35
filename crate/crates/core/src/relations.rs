//! Relation suites: the defining relations of both algebras, their
//! multiplicative consequences, the skew ring product rules and the labelled
//! path algebra relations, instantiated over short words and a set pool.

use crate::algebra::{Algebra, AlgebraElement};
use crate::display::{fmt_element, fmt_set};
use crate::error::Result;
use crate::partial_action::Combo;
use crate::report::{Check, Report};
use crate::ring::Ring;
use crate::sets::{self, Flavor, SetExpr, Unitality};
use crate::shift::{letter_set_letters, Shift};
use crate::word::{FreeGroupElement, Letter, Word};
use std::collections::BTreeMap;

/// A pool set with an expression for `p_A` built from `s_a`, `s_a^*` and 1 only.
struct PoolSet {
    set: SetExpr,
    built: AlgebraElement,
}

fn eq_check(alg: &Algebra, c: &mut Check, label: impl FnOnce() -> String, lhs: &AlgebraElement, rhs: &AlgebraElement) -> Result<()> {
    let ok = alg.equals(lhs, rhs)?;
    c.record(ok, || format!("{}: {} != {}", label(), fmt_element(alg.sh, lhs), fmt_element(alg.sh, rhs)));
    Ok(())
}

fn prod(alg: &Algebra, xs: &[&AlgebraElement]) -> Result<AlgebraElement> {
    let mut acc = xs[0].clone();
    for x in &xs[1..] {
        acc = alg.mul(&acc, x)?;
    }
    Ok(acc)
}

/// `p_{C(alpha, beta)}` written as `s_beta s_alpha^* s_alpha s_beta^*`, with
/// empty words dropped.
fn c_from_s(alg: &Algebra, alpha: &Word, beta: &Word) -> Result<AlgebraElement> {
    let mut parts = Vec::new();
    if !beta.is_empty() {
        parts.push(alg.s_word(beta)?);
    }
    if !alpha.is_empty() {
        parts.push(alg.s_word_star(alpha)?);
        parts.push(alg.s_word(alpha)?);
    }
    if !beta.is_empty() {
        parts.push(alg.s_word_star(beta)?);
    }
    if parts.is_empty() {
        return alg.one();
    }
    prod(alg, &parts.iter().collect::<Vec<_>>())
}

fn pool(alg: &Algebra, words: &[Word], max_len: usize) -> Result<Vec<PoolSet>> {
    let sh = alg.sh;
    let short: Vec<&Word> = words.iter().filter(|w| w.len() <= max_len).collect();
    let mut gens: Vec<PoolSet> = Vec::new();
    for a in &short {
        for b in &short {
            if alg.flavor == Flavor::B && a.is_empty() && b.is_empty() {
                continue;
            }
            let mut set = sets::c_set(sh, a, b);
            if alg.flavor == Flavor::U {
                set = set.with_flavor(Flavor::U);
            }
            if set.is_empty() || gens.iter().any(|g| g.set.same_set(&set)) {
                continue;
            }
            gens.push(PoolSet { built: c_from_s(alg, a, b)?, set });
        }
    }
    let k = gens.len().min(6);
    let mut out: Vec<PoolSet> = Vec::new();
    let add = |out: &mut Vec<PoolSet>, set: SetExpr, built: AlgebraElement| {
        if !out.iter().any(|g| g.set.same_set(&set)) {
            out.push(PoolSet { set, built });
        }
    };
    for i in 0..k {
        for j in i + 1..k {
            let (a, b) = (&gens[i], &gens[j]);
            let ab = alg.mul(&a.built, &b.built)?;
            add(&mut out, sets::intersect(sh, &a.set, &b.set), ab.clone());
            add(&mut out, sets::union(sh, &a.set, &b.set), alg.sub(&alg.add(&a.built, &b.built)?, &ab)?);
            add(&mut out, sets::difference(sh, &a.set, &b.set), alg.sub(&a.built, &ab)?);
        }
        if alg.flavor == Flavor::U {
            add(&mut out, sets::complement(sh, &gens[i].set)?, alg.sub(&alg.one()?, &gens[i].built)?);
        }
    }
    for g in gens {
        add(&mut out, g.set, g.built);
    }
    Ok(out)
}

fn skew_single(alg: &Algebra, t: FreeGroupElement, set: SetExpr) -> AlgebraElement {
    let mut terms = BTreeMap::new();
    if !set.is_empty() {
        terms.insert(t, Combo::indicator(alg.ring, set));
    }
    AlgebraElement { ring: alg.ring, flavor: alg.flavor, terms }
}

/// Runs every suite over words of length at most `max_len` drawn from
/// `window` letters. Projection pools use words of length at most 2.
pub fn relation_suite(sh: &Shift, ring: Ring, max_len: usize, window: usize) -> Result<Report> {
    let mut rep = Report::new(&format!("relation suite on {}", sh.name));
    rep.param("ring", ring);
    rep.param("max_len", max_len);
    rep.param("window", window);
    let letters = sh.alphabet.window(window);
    let words: Vec<Word> = sh.words_up_to(max_len, window);
    let nonempty: Vec<&Word> = words.iter().filter(|w| !w.is_empty()).collect();
    let pool_len = max_len.min(2);

    let u = Algebra::unital(sh, ring);
    let upool = pool(&u, &words, pool_len)?;
    rep.param("pool_unital", upool.len());

    // unital definition
    let mut c = Check::new("unital (i)");
    eq_check(&u, &mut c, || "p_X".into(), &u.p(&sets::x_set(sh))?, &u.one()?)?;
    eq_check(&u, &mut c, || "p_{}".into(), &u.p(&SetExpr::empty(Flavor::U))?, &u.zero())?;
    boolean_relations(&u, &upool, &mut c)?;
    rep.checks.push(c);
    rep.checks.push(partial_isometries(&u, &letters, "unital (ii)")?);
    let mut c = Check::new("unital (iii)");
    for a in &words {
        for b in &words {
            let lhs = c_from_s(&u, a, b)?;
            let rhs = u.p(&sets::c_set(sh, a, b))?;
            eq_check(&u, &mut c, || format!("C({},{})", sh.fmt_word(a), sh.fmt_word(b)), &lhs, &rhs)?;
        }
    }
    rep.checks.push(c);

    // top-free definition
    let b = Algebra::new(sh, ring, Flavor::B);
    let bpool = pool(&b, &words, pool_len)?;
    rep.param("pool_top_free", bpool.len());
    rep.param("top_in_top_free", format!("{:?}", sets::is_unital(sh)).to_lowercase());
    let mut c = Check::new("top-free (i)");
    eq_check(&b, &mut c, || "p_{}".into(), &b.p(&SetExpr::empty(Flavor::B))?, &b.zero())?;
    boolean_relations(&b, &bpool, &mut c)?;
    rep.checks.push(c);
    rep.checks.push(partial_isometries(&b, &letters, "top-free (ii)")?);
    let mut c3 = Check::new("top-free (iii)");
    let mut c4 = Check::new("top-free (iv)");
    let mut c5 = Check::new("top-free (v)");
    for a in &nonempty {
        for bb in &nonempty {
            let lhs = c_from_s(&b, a, bb)?;
            let rhs = b.p(&sets::c_set(sh, a, bb))?;
            eq_check(&b, &mut c3, || format!("C({},{})", sh.fmt_word(a), sh.fmt_word(bb)), &lhs, &rhs)?;
        }
        let lhs = b.mul(&b.s_word_star(a)?, &b.s_word(a)?)?;
        eq_check(&b, &mut c4, || format!("F({})", sh.fmt_word(a)), &lhs, &b.p(&sets::follower(sh, a))?)?;
        let lhs = b.mul(&b.s_word(a)?, &b.s_word_star(a)?)?;
        eq_check(&b, &mut c5, || format!("Z({})", sh.fmt_word(a)), &lhs, &b.p(&sets::cylinder(sh, a))?)?;
    }
    rep.checks.extend([c3, c4, c5]);
    if sets::is_unital(sh) == Unitality::No {
        // the unitization must not identify 1 with any top-free element
        let mut c = Check::new("top-free unitization");
        for ps in &bpool {
            let x = b.unitize(&b.p(&ps.set)?, &-ring.one())?;
            c.record(!x.is_zero(), || format!("p_{} - 1 = 0", fmt_set(sh, &ps.set)));
        }
        rep.checks.push(c);
    }

    // multiplicative consequences in the unital algebra
    let mut c = Check::new("products (i)");
    for &x in &letters {
        for &y in &letters {
            let lhs = u.mul(&u.s_star(x)?, &u.s(y)?)?;
            let rhs = if x == y { u.p(&sets::follower(sh, &Word(vec![x])))? } else { u.zero() };
            eq_check(&u, &mut c, || format!("{}* {}", sh.alphabet.letter_name(x), sh.alphabet.letter_name(y)), &lhs, &rhs)?;
        }
    }
    rep.checks.push(c);
    let src: Vec<(AlgebraElement, AlgebraElement)> = words
        .iter()
        .map(|w| Ok((u.mul(&u.s_word_star(w)?, &u.s_word(w)?)?, u.mul(&u.s_word(w)?, &u.s_word_star(w)?)?)))
        .collect::<Result<_>>()?;
    let mut c2 = Check::new("products (ii)");
    let mut c3 = Check::new("products (iii)");
    for (i, a) in words.iter().enumerate() {
        for (j, bb) in words.iter().enumerate() {
            let (x, y) = (&src[i].0, &src[j].0);
            eq_check(&u, &mut c2, || format!("{} vs {}", sh.fmt_word(a), sh.fmt_word(bb)), &u.mul(x, y)?, &u.mul(y, x)?)?;
            let y = &src[j].1;
            eq_check(&u, &mut c3, || format!("{} vs {}", sh.fmt_word(a), sh.fmt_word(bb)), &u.mul(x, y)?, &u.mul(y, x)?)?;
        }
    }
    rep.checks.extend([c2, c3]);
    let mut c = Check::new("products (iv)");
    for a in &words {
        for bb in &words {
            if sh.state_of(&a.concat(bb)).is_some() {
                continue;
            }
            let lhs = u.mul(&u.s_word(a)?, &u.s_word(bb)?)?;
            eq_check(&u, &mut c, || format!("s_{} s_{}", sh.fmt_word(a), sh.fmt_word(bb)), &lhs, &u.zero())?;
        }
    }
    rep.checks.push(c);
    let mut c = Check::new("products (v)");
    for ps in &upool {
        eq_check(&u, &mut c, || fmt_set(sh, &ps.set), &ps.built, &u.p(&ps.set)?)?;
    }
    rep.checks.push(c);

    // skew ring product rules
    let unit = |w: &Word| FreeGroupElement { pos: w.clone(), neg: Word::empty() };
    let mut cs: Vec<Check> = (1..=5).map(|i| Check::new(&format!("skew ({})", ["i", "ii", "iii", "iv", "v"][i - 1]))).collect();
    for a in &nonempty {
        let t = unit(a);
        let fwd = skew_single(&u, t.clone(), sets::cylinder(sh, a));
        let back = skew_single(&u, t.inverse(), sets::follower(sh, a));
        let gen = |x: Letter| skew_single(&u, unit(&Word(vec![x])), sets::cylinder(sh, &Word(vec![x])));
        let gen_inv = |x: Letter| skew_single(&u, unit(&Word(vec![x])).inverse(), sets::follower(sh, &Word(vec![x])));
        let lf: Vec<AlgebraElement> = a.letters().iter().map(|&x| gen(x)).collect();
        let lb: Vec<AlgebraElement> = a.letters().iter().rev().map(|&x| gen_inv(x)).collect();
        let name = sh.fmt_word(a);
        eq_check(&u, &mut cs[0], || name.clone(), &prod(&u, &lf.iter().collect::<Vec<_>>())?, &fwd)?;
        eq_check(&u, &mut cs[1], || name.clone(), &prod(&u, &lb.iter().collect::<Vec<_>>())?, &back)?;
        let id = FreeGroupElement::identity();
        eq_check(&u, &mut cs[2], || name.clone(), &u.mul(&fwd, &back)?, &skew_single(&u, id.clone(), sets::cylinder(sh, a)))?;
        eq_check(&u, &mut cs[3], || name.clone(), &u.mul(&back, &fwd)?, &skew_single(&u, id, sets::follower(sh, a)))?;
        for bb in &nonempty {
            if a.last() == bb.last() {
                continue;
            }
            let t = FreeGroupElement { pos: (*a).clone(), neg: (*bb).clone() };
            let lhs = u.mul(&fwd, &skew_single(&u, unit(bb).inverse(), sets::follower(sh, bb)))?;
            let rhs = skew_single(&u, t, sets::c_set(sh, bb, a));
            eq_check(&u, &mut cs[4], || format!("{} / {}", name, sh.fmt_word(bb)), &lhs, &rhs)?;
        }
    }
    rep.checks.extend(cs);

    // labelled path algebra relations, with the labelled space built on the unital pool
    let mut c = Check::new("labelled (i)");
    boolean_relations(&u, &upool, &mut c)?;
    rep.checks.push(c);
    let mut c = Check::new("labelled (ii)");
    for ps in &upool {
        for &x in &letters {
            let w = Word(vec![x]);
            let pr = u.p(&sets::relative_range(sh, &ps.set, &w)?)?;
            let pa = u.p(&ps.set)?;
            let (s, st) = (u.s(x)?, u.s_star(x)?);
            let label = || format!("{} / {}", fmt_set(sh, &ps.set), sh.alphabet.letter_name(x));
            eq_check(&u, &mut c, label, &u.mul(&pa, &s)?, &u.mul(&s, &pr)?)?;
            eq_check(&u, &mut c, label, &u.mul(&st, &pa)?, &u.mul(&pr, &st)?)?;
        }
    }
    rep.checks.push(c);
    let mut c = Check::new("labelled (iii)");
    for &x in &letters {
        for &y in &letters {
            let lhs = u.mul(&u.s_star(y)?, &u.s(x)?)?;
            let rhs = if x == y { u.p(&sets::relative_range(sh, &sets::x_set(sh), &Word(vec![x]))?)? } else { u.zero() };
            eq_check(&u, &mut c, || format!("{}* {}", sh.alphabet.letter_name(y), sh.alphabet.letter_name(x)), &lhs, &rhs)?;
        }
    }
    rep.checks.push(c);
    rep.checks.push(partial_isometries(&u, &letters, "labelled (iv)")?);
    let mut c = Check::new("labelled (v)");
    for ps in &upool {
        if !sets::is_regular(sh, &ps.set) {
            c.skip();
            continue;
        }
        let emitted = letter_set_letters(&sets::emitted_letters(sh, &ps.set)).expect("regular sets emit finitely many letters");
        let mut acc = u.zero();
        for x in emitted {
            let r = sets::relative_range(sh, &ps.set, &Word(vec![x]))?;
            acc = u.add(&acc, &prod(&u, &[&u.s(x)?, &u.p(&r)?, &u.s_star(x)?])?)?;
        }
        eq_check(&u, &mut c, || fmt_set(sh, &ps.set), &u.p(&ps.set)?, &acc)?;
    }
    rep.checks.push(c);
    Ok(rep)
}

fn boolean_relations(alg: &Algebra, pool: &[PoolSet], c: &mut Check) -> Result<()> {
    let sh = alg.sh;
    for a in pool {
        for b in pool {
            let (pa, pb) = (alg.p(&a.set)?, alg.p(&b.set)?);
            let i = sets::intersect(sh, &a.set, &b.set);
            let pi = alg.p(&i)?;
            let label = || format!("{} , {}", fmt_set(sh, &a.set), fmt_set(sh, &b.set));
            eq_check(alg, c, label, &pi, &alg.mul(&pa, &pb)?)?;
            let lhs = alg.p(&sets::union(sh, &a.set, &b.set))?;
            eq_check(alg, c, label, &lhs, &alg.sub(&alg.add(&pa, &pb)?, &pi)?)?;
        }
    }
    Ok(())
}

fn partial_isometries(alg: &Algebra, letters: &[Letter], name: &str) -> Result<Check> {
    let mut c = Check::new(name);
    for &x in letters {
        let (s, st) = (alg.s(x)?, alg.s_star(x)?);
        let n = alg.sh.alphabet.letter_name(x);
        eq_check(alg, &mut c, || n.clone(), &prod(alg, &[&s, &st, &s])?, &s)?;
        eq_check(alg, &mut c, || format!("{n}*"), &prod(alg, &[&st, &s, &st])?, &st)?;
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn golden_mean_suite() {
        let sh = fixtures::golden_mean();
        let r = relation_suite(&sh, Ring::Integer, 2, 5).unwrap();
        assert!(r.passed(), "{}", r.to_table());
    }
}
