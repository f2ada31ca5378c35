//! Text forms of sets and algebra elements, readable back by the parser.

use crate::algebra::AlgebraElement;
use crate::fincof::FinCof;
use crate::partial_action::Combo;
use crate::ring::scalar_string;
use crate::sets::{self, GCAtom, SetExpr, Tail};
use crate::shift::{Backend, Shift};
use crate::word::{Letter, Word};
use num_traits::{One, Signed};
use std::collections::BTreeSet;

fn w(sh: &Shift, w: &Word) -> String {
    if w.is_empty() {
        "_".into()
    } else {
        sh.fmt_word(w)
    }
}

fn z(sh: &Shift, p: &Word) -> String {
    if p.is_empty() {
        "X".into()
    } else {
        format!("Z({})", w(sh, p))
    }
}

fn c(sh: &Shift, a: &Word, b: &Word) -> String {
    if a.is_empty() {
        z(sh, b)
    } else {
        format!("C({},{})", w(sh, a), w(sh, b))
    }
}

fn union_of(parts: Vec<String>) -> String {
    if parts.len() == 1 {
        parts.into_iter().next().unwrap()
    } else {
        format!("({})", parts.join(" | "))
    }
}

pub fn fmt_set(sh: &Shift, a: &SetExpr) -> String {
    let atoms = sets::gc_atoms(a);
    if atoms.is_empty() {
        return "{}".into();
    }
    let parts: Vec<String> = atoms.iter().map(|g| fmt_atom(sh, g)).collect();
    if parts.len() == 1 {
        parts.into_iter().next().unwrap()
    } else {
        parts.join(" | ")
    }
}

fn fmt_atom(sh: &Shift, g: &GCAtom) -> String {
    let q = sh.state_of(&g.prefix).expect("atom prefix in language");
    let full = sh.full_tail(&q);
    match (&g.tail, &sh.backend) {
        (Tail::States(t), _) if *t == full => z(sh, &g.prefix),
        (Tail::States(t), Backend::Auto(aut)) => {
            let p = &g.prefix;
            for (s, sw) in aut.state_words.iter().enumerate() {
                let fs = sh.full_tail(&crate::shift::State::Auto(s));
                if fs.intersect(&full) == *t {
                    return c(sh, sw, p);
                }
            }
            for sw in &aut.state_words {
                let fs = sh.full_tail(&sh.state_of(sw).unwrap());
                if full.minus(&fs) == *t {
                    return format!("({} \\ {})", z(sh, p), c(sh, sw, p));
                }
            }
            let mut pieces = Vec::new();
            for atom in t.finite_elems().unwrap() {
                let pattern = &aut.atoms[*atom as usize];
                let mut s = z(sh, p);
                for st in pattern {
                    if !aut.state_words[*st].is_empty() {
                        s = format!("{s} & {}", c(sh, &aut.state_words[*st], p));
                    }
                }
                for st in (0..aut.n_states()).filter(|st| !pattern.contains(st)) {
                    s = format!("{s} \\ {}", c(sh, &aut.state_words[st], p));
                }
                pieces.push(format!("({s})"));
            }
            union_of(pieces)
        }
        (Tail::States(t), Backend::Rule(_)) => fmt_vertex_tail(sh, &g.prefix, &q, t, &full),
        (Tail::Residue { family, excluded }, _) => {
            let mut cut: Vec<Letter> = excluded.iter().map(|&i| Letter::new(*family, i)).collect();
            for (f, idx) in sh.valid_letters(&q) {
                if f == *family {
                    continue;
                }
                match idx.finite_elems() {
                    Some(is) => cut.extend(is.iter().map(|&i| Letter::new(f, i))),
                    None => return format!("<residue of family {} after {}>", sh.alphabet.families[f as usize].name, w(sh, &g.prefix)),
                }
            }
            if cut.is_empty() {
                return z(sh, &g.prefix);
            }
            let cuts: Vec<String> = cut.iter().map(|&a| z(sh, &g.prefix.push(a))).collect();
            format!("({} \\ {})", z(sh, &g.prefix), union_of(cuts))
        }
    }
}

/// Points `p y` with `y` starting at a vertex of `t`.
fn fmt_vertex_tail(sh: &Shift, p: &Word, q: &crate::shift::State, t: &FinCof, full: &FinCof) -> String {
    let out_letters = |vs: &BTreeSet<u64>| -> Option<Vec<Letter>> {
        let mut out = Vec::new();
        for f in 0..sh.alphabet.families.len() as u32 {
            let idx = sh.letters_with_source_in(q, f, &FinCof::Fin(vs.clone()));
            out.extend(idx.finite_elems()?.iter().map(|&i| Letter::new(f, i)));
        }
        Some(out)
    };
    if let Some(vs) = t.finite_elems() {
        if let Some(ls) = out_letters(vs) {
            return union_of(ls.iter().map(|&a| z(sh, &p.push(a))).collect());
        }
    }
    if let Some(vs) = full.minus(t).finite_elems() {
        if let Some(ls) = out_letters(vs) {
            let cuts: Vec<String> = ls.iter().map(|&a| z(sh, &p.push(a))).collect();
            return format!("({} \\ {})", z(sh, p), union_of(cuts));
        }
    }
    for a in sh.alphabet.window(32) {
        let Some(qa) = sh.state_of(&Word(vec![a])) else {
            continue;
        };
        if sh.full_tail(&qa).intersect(full) == *t {
            return c(sh, &Word(vec![a]), p);
        }
    }
    format!("<vertices after {}>", w(sh, p))
}

fn coeff_prefix(c: &num_rational::BigRational) -> (bool, String) {
    let neg = c.is_negative();
    let a = c.abs();
    if a.is_one() {
        (neg, String::new())
    } else {
        (neg, format!("{}*", scalar_string(&a)))
    }
}

pub fn fmt_element(sh: &Shift, x: &AlgebraElement) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (t, f) in &x.terms {
        for (c, body) in term_bodies(sh, t, f) {
            let (neg, pre) = coeff_prefix(&c);
            let body = if pre.is_empty() || body != "1" { format!("{pre}{body}") } else { pre.trim_end_matches('*').to_string() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
    }
    out
}

fn term_bodies(sh: &Shift, t: &crate::word::FreeGroupElement, f: &Combo) -> Vec<(num_rational::BigRational, String)> {
    let mut out = Vec::new();
    let implicit = sets::intersect(sh, &sets::follower(sh, &t.pos), &sets::follower(sh, &t.neg));
    for (c, a) in &f.terms {
        let b = sets::relative_range(sh, a, &t.pos).expect("letters checked");
        let mut parts = Vec::new();
        if !t.pos.is_empty() {
            parts.push(format!("s({})", sh.fmt_word(&t.pos)));
        }
        if !b.same_set(&implicit) {
            parts.push(format!("p({})", fmt_set(sh, &b)));
        }
        if !t.neg.is_empty() {
            parts.push(format!("st({})", sh.fmt_word(&t.neg)));
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        out.push((c.clone(), parts.join("*")));
    }
    out
}
