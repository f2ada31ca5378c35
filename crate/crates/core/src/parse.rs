//! Recursive-descent parsers for set, algebra and point expressions.
//!
//! Sets: `X`, `{}`, `Z(w)`, `F(w)`, `C(a,b)`, `~A`, `A & B`, `A \ B`, `A | B`.
//! Algebra: scalars, `1`, `s(w)`, `st(w)`, `p(set)`, `+`, `-`, `*`, parentheses.
//! Points: `inf(pre;per)`, `fin(w)`, `zero`.

use crate::algebra::{Algebra, AlgebraElement};
use crate::error::{Error, Result};
use crate::otw::OTWPoint;
use crate::sets::{self, Flavor, SetExpr};
use crate::shift::Shift;
use crate::word::Word;
use num_rational::BigRational;
use num_traits::One;

struct Cursor<'s> {
    src: &'s str,
    pos: usize,
}

impl<'s> Cursor<'s> {
    fn new(src: &'s str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let before = &self.src[..self.pos];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().unwrap().chars().count() + 1;
        Error::Parse { line, col, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn rest(&self) -> &'s str {
        &self.src[self.pos..]
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{s}`")))
        }
    }

    /// Raw text up to (not including) any of `stops`.
    fn until(&mut self, stops: &[char]) -> &'s str {
        let start = self.pos;
        while let Some(c) = self.rest().chars().next() {
            if stops.contains(&c) {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    fn end(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos < self.src.len() {
            Err(self.err("unexpected trailing input"))
        } else {
            Ok(())
        }
    }

    fn word(&mut self, sh: &Shift, stops: &[char]) -> Result<Word> {
        self.skip_ws();
        let at = self.pos;
        let raw = self.until(stops);
        sh.parse_word(raw).map_err(|e| {
            self.pos = at;
            self.err(e.to_string())
        })
    }
}

/// Parses a set; in flavor `U` every generator is read in the unital algebra.
pub fn parse_set(sh: &Shift, src: &str, flavor: Flavor) -> Result<SetExpr> {
    let mut c = Cursor::new(src);
    let s = set_union(sh, &mut c, flavor)?;
    c.end()?;
    Ok(s)
}

fn set_union(sh: &Shift, c: &mut Cursor, fl: Flavor) -> Result<SetExpr> {
    let mut acc = set_term(sh, c, fl)?;
    while c.eat("|") {
        let r = set_term(sh, c, fl)?;
        acc = sets::union(sh, &acc, &r);
    }
    Ok(acc)
}

fn set_term(sh: &Shift, c: &mut Cursor, fl: Flavor) -> Result<SetExpr> {
    let mut acc = set_unary(sh, c, fl)?;
    loop {
        if c.eat("&") {
            let r = set_unary(sh, c, fl)?;
            acc = sets::intersect(sh, &acc, &r);
        } else if c.eat("\\") {
            let r = set_unary(sh, c, fl)?;
            acc = sets::difference(sh, &acc, &r);
        } else {
            return Ok(acc);
        }
    }
}

fn set_unary(sh: &Shift, c: &mut Cursor, fl: Flavor) -> Result<SetExpr> {
    if c.eat("~") {
        let at = c.pos;
        let inner = set_unary(sh, c, fl)?;
        return sets::complement(sh, &inner).map_err(|e| {
            c.pos = at;
            c.err(e.to_string())
        });
    }
    let tag = |s: SetExpr| {
        if fl == Flavor::U {
            s.with_flavor(Flavor::U)
        } else {
            s
        }
    };
    if c.eat("(") {
        let s = set_union(sh, c, fl)?;
        c.expect(")")?;
        return Ok(s);
    }
    if c.eat("{}") {
        return Ok(SetExpr::empty(fl));
    }
    if c.eat("X") {
        return Ok(sets::x_set(sh));
    }
    if c.eat("Z(") {
        let w = c.word(sh, &[')'])?;
        c.expect(")")?;
        return Ok(tag(sets::cylinder(sh, &w)));
    }
    if c.eat("F(") {
        let w = c.word(sh, &[')'])?;
        c.expect(")")?;
        return Ok(tag(sets::follower(sh, &w)));
    }
    if c.eat("C(") {
        let a = c.word(sh, &[','])?;
        c.expect(",")?;
        let b = c.word(sh, &[')'])?;
        c.expect(")")?;
        return Ok(tag(sets::c_set(sh, &a, &b)));
    }
    Err(c.err("expected a set"))
}

/// Parses an algebra expression in the given algebra.
pub fn parse_element(alg: &Algebra, src: &str) -> Result<AlgebraElement> {
    let mut c = Cursor::new(src);
    let x = el_sum(alg, &mut c)?;
    c.end()?;
    Ok(x)
}

fn lift<T>(c: &Cursor, at: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { .. } => e,
        other => {
            let mut c2 = Cursor::new(c.src);
            c2.pos = at;
            c2.err(other.to_string())
        }
    })
}

fn el_sum(alg: &Algebra, c: &mut Cursor) -> Result<AlgebraElement> {
    let neg = c.eat("-");
    let mut acc = el_prod(alg, c)?;
    if neg {
        acc = alg.neg(&acc);
    }
    loop {
        if c.eat("+") {
            let r = el_prod(alg, c)?;
            acc = alg.add(&acc, &r)?;
        } else if c.eat("-") {
            let r = el_prod(alg, c)?;
            acc = alg.sub(&acc, &r)?;
        } else {
            return Ok(acc);
        }
    }
}

fn el_prod(alg: &Algebra, c: &mut Cursor) -> Result<AlgebraElement> {
    let at = c.pos;
    let mut coeff = BigRational::one();
    let mut acc: Option<AlgebraElement> = None;
    loop {
        match el_factor(alg, c)? {
            Factor::Scalar(s) => coeff *= s,
            Factor::El(x) => {
                acc = Some(match acc {
                    None => x,
                    Some(a) => lift(c, at, alg.mul(&a, &x))?,
                })
            }
        }
        if !c.eat("*") {
            break;
        }
    }
    let coeff = lift(c, at, alg.ring.elem(coeff))?;
    match acc {
        Some(x) => Ok(alg.scale(&x, &coeff)),
        None => lift(c, at, alg.scalar(&coeff)),
    }
}

enum Factor {
    Scalar(BigRational),
    El(AlgebraElement),
}

fn el_factor(alg: &Algebra, c: &mut Cursor) -> Result<Factor> {
    let sh = alg.sh;
    let at = {
        c.skip_ws();
        c.pos
    };
    match c.peek() {
        Some(d) if d.is_ascii_digit() => {
            let raw = c.until(&['*', '+', '-', ')', ' ', '\t', '\n']);
            let v = lift(c, at, alg.ring.parse_scalar(raw))?;
            return Ok(Factor::Scalar(v));
        }
        _ => {}
    }
    if c.eat("(") {
        let x = el_sum(alg, c)?;
        c.expect(")")?;
        return Ok(Factor::El(x));
    }
    if c.eat("st(") {
        let w = c.word(sh, &[')'])?;
        c.expect(")")?;
        return Ok(Factor::El(lift(c, at, star_word(alg, &w))?));
    }
    if c.eat("s(") {
        let w = c.word(sh, &[')'])?;
        c.expect(")")?;
        return Ok(Factor::El(lift(c, at, s_word(alg, &w))?));
    }
    if c.eat("p(") {
        let s = set_union(sh, c, alg.flavor)?;
        c.expect(")")?;
        return Ok(Factor::El(lift(c, at, alg.p(&s))?));
    }
    Err(c.err("expected a scalar, s(..), st(..), p(..) or a parenthesis"))
}

fn s_word(alg: &Algebra, w: &Word) -> Result<AlgebraElement> {
    if w.is_empty() {
        return alg.one();
    }
    alg.s_word(w)
}

fn star_word(alg: &Algebra, w: &Word) -> Result<AlgebraElement> {
    if w.is_empty() {
        return alg.one();
    }
    alg.s_word_star(w)
}

/// `inf(pre;per)`, `fin(w)` or `zero`.
pub fn parse_point(sh: &Shift, src: &str) -> Result<OTWPoint> {
    let mut c = Cursor::new(src);
    let p = if c.eat("inf(") {
        let pre = c.word(sh, &[';'])?;
        c.expect(";")?;
        let per = c.word(sh, &[')'])?;
        c.expect(")")?;
        lift(&c, 0, OTWPoint::infinite(sh, &pre, &per))?
    } else if c.eat("fin(") {
        let w = c.word(sh, &[')'])?;
        c.expect(")")?;
        lift(&c, 0, OTWPoint::finite(sh, &w))?
    } else if c.eat("zero") {
        lift(&c, 0, OTWPoint::zero(sh))?
    } else {
        return Err(c.err("expected inf(..;..), fin(..) or zero"));
    };
    c.end()?;
    Ok(p)
}
