//! Canonical representation of the Boolean algebras generated by the sets
//! C(alpha, beta), with exact emptiness and equality.
//!
//! A set is a trie over letters. A leaf at word `w` carries a tail set `T`
//! and stands for `{w y in X : y in T}`, where `T` is a set of follower atoms
//! (automaton backends) or of start vertices (rule backends). A branch lists
//! explicit children plus, per infinite family, a residue: every readable
//! letter of the family outside a finite excluded set, with full tail.
//! Canonical form collapses every subtree that is expressible as a leaf, so
//! equal sets have equal tries.

use crate::error::{Error, Result};
use crate::fincof::FinCof;
use crate::shift::{letter_set_is_finite, LetterSet, Shift, State};
use crate::word::{Letter, Word};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Leaf(FinCof),
    Branch(Branch),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Branch {
    pub kids: BTreeMap<Letter, Node>,
    /// family -> excluded indices; the remaining readable letters are full.
    pub rest: BTreeMap<u32, BTreeSet<u64>>,
}

/// `U` may use the top element X; `B` never introduces it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Flavor {
    U,
    B,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetExpr {
    pub root: Option<Node>,
    pub flavor: Flavor,
}

/// One disjoint piece of a canonical set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tail {
    States(FinCof),
    Residue { family: u32, excluded: BTreeSet<u64> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GCAtom {
    pub prefix: Word,
    pub tail: Tail,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoolOp {
    Union,
    Intersect,
    ComplementInX,
    RelativeComplement,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Op {
    And,
    Or,
    Minus,
}

fn combine(s: &FinCof, t: &FinCof, op: Op) -> FinCof {
    match op {
        Op::And => s.intersect(t),
        Op::Or => s.union(t),
        Op::Minus => s.minus(t),
    }
}

fn full_leaf(sh: &Shift, q: &State) -> Node {
    Node::Leaf(sh.full_tail(q))
}

fn leaf_or_none(sh: &Shift, q: &State, t: FinCof) -> Option<Node> {
    let t = t.intersect(&sh.full_tail(q)).normalize(&sh.tail_universe());
    if t.is_empty() {
        None
    } else {
        Some(Node::Leaf(t))
    }
}

/// Readable letters of family `f` at `q` outside `ex`.
fn residue_allowed(sh: &Shift, q: &State, f: u32, ex: &BTreeSet<u64>) -> FinCof {
    let valid = sh.valid_letters(q).remove(&f).unwrap_or_else(FinCof::empty);
    valid.minus(&FinCof::Fin(ex.clone())).normalize(&sh.alphabet.families[f as usize].indices)
}

/// Expands a leaf into children, keeping `hint` letters explicit.
fn expand(sh: &Shift, q: &State, t: &FinCof, hint: &BTreeSet<Letter>) -> Branch {
    let mut b = Branch::default();
    if let Some(aut) = sh.auto() {
        for &a in &aut.letters {
            let p = sh.pull_tail(q, t, a);
            if !p.is_empty() {
                b.kids.insert(a, Node::Leaf(p));
            }
        }
        return b;
    }
    for f in 0..sh.alphabet.families.len() as u32 {
        let idx = sh.letters_with_source_in(q, f, t);
        match &idx {
            FinCof::Fin(is) => {
                for &i in is {
                    let a = Letter::new(f, i);
                    let qa = sh.step(q, a).expect("readable");
                    b.kids.insert(a, full_leaf(sh, &qa));
                }
            }
            FinCof::Cof(_) => {
                let valid = sh.valid_letters(q).remove(&f).unwrap_or_else(FinCof::empty);
                let mut ex: BTreeSet<u64> = match valid.minus(&idx) {
                    FinCof::Fin(s) => s,
                    FinCof::Cof(_) => unreachable!("cofinite inside readable letters"),
                };
                for a in hint.iter().filter(|a| a.family == f && idx.contains(a.index)) {
                    let qa = sh.step(q, *a).expect("readable");
                    b.kids.insert(*a, full_leaf(sh, &qa));
                    ex.insert(a.index);
                }
                b.rest.insert(f, ex);
            }
        }
    }
    b
}

fn as_branch(sh: &Shift, q: &State, n: &Node, other: &Node) -> Branch {
    match n {
        Node::Branch(b) => b.clone(),
        Node::Leaf(t) => {
            let hint = match other {
                Node::Branch(o) => o.kids.keys().copied().collect(),
                Node::Leaf(_) => BTreeSet::new(),
            };
            expand(sh, q, t, &hint)
        }
    }
}

fn residue_covers(b: &Branch, a: Letter) -> bool {
    b.rest.get(&a.family).is_some_and(|ex| !ex.contains(&a.index))
}

/// Child of `b` at `a`, materializing residue coverage as a full leaf.
fn kid_of(sh: &Shift, q: &State, b: &Branch, a: Letter) -> Option<Node> {
    if let Some(k) = b.kids.get(&a) {
        return Some(k.clone());
    }
    if residue_covers(b, a) {
        return sh.step(q, a).map(|qa| full_leaf(sh, &qa));
    }
    None
}

fn op_nodes(sh: &Shift, q: &State, x: Option<&Node>, y: Option<&Node>, op: Op) -> Option<Node> {
    match (x, y) {
        (None, None) => None,
        (Some(x), None) => match op {
            Op::And => None,
            _ => Some(x.clone()),
        },
        (None, Some(y)) => match op {
            Op::Or => Some(y.clone()),
            _ => None,
        },
        (Some(Node::Leaf(s)), Some(Node::Leaf(t))) => leaf_or_none(sh, q, combine(s, t, op)),
        (Some(x), Some(y)) => {
            let bx = as_branch(sh, q, x, y);
            let by = as_branch(sh, q, y, x);
            branch_op(sh, q, &bx, &by, op)
        }
    }
}

fn branch_op(sh: &Shift, q: &State, x: &Branch, y: &Branch, op: Op) -> Option<Node> {
    let mut rest: BTreeMap<u32, BTreeSet<u64>> = BTreeMap::new();
    let mut extra: Vec<Letter> = Vec::new();
    let fams: BTreeSet<u32> = x.rest.keys().chain(y.rest.keys()).copied().collect();
    for f in fams {
        let ykids: BTreeSet<u64> = y.kids.keys().filter(|a| a.family == f).map(|a| a.index).collect();
        match (x.rest.get(&f), y.rest.get(&f), op) {
            (Some(e1), Some(e2), Op::And) => {
                rest.insert(f, e1.union(e2).copied().collect());
            }
            (Some(e1), Some(e2), Op::Or) => {
                rest.insert(f, e1.intersection(e2).copied().collect());
            }
            (Some(e1), Some(e2), Op::Minus) => {
                for &i in e2.difference(e1) {
                    if !ykids.contains(&i) {
                        extra.push(Letter::new(f, i));
                    }
                }
            }
            (Some(e1), None, Op::Or) => {
                rest.insert(f, e1.clone());
            }
            (Some(e1), None, Op::Minus) => {
                rest.insert(f, e1.union(&ykids).copied().collect());
            }
            (None, Some(e2), Op::Or) => {
                rest.insert(f, e2.clone());
            }
            _ => {}
        }
    }
    let mut kids = BTreeMap::new();
    let letters: BTreeSet<Letter> = x.kids.keys().chain(y.kids.keys()).copied().collect();
    for a in letters {
        let Some(qa) = sh.step(q, a) else { continue };
        let kx = kid_of(sh, q, x, a);
        let ky = kid_of(sh, q, y, a);
        let r = op_nodes(sh, &qa, kx.as_ref(), ky.as_ref(), op);
        if rest.get(&a.family).is_some_and(|ex| !ex.contains(&a.index)) {
            continue; // covered by the result residue
        }
        if let Some(r) = r {
            if let Some(ex) = rest.get_mut(&a.family) {
                ex.insert(a.index);
            }
            kids.insert(a, r);
        }
    }
    for a in extra {
        if let Some(qa) = sh.step(q, a) {
            kids.insert(a, full_leaf(sh, &qa));
        }
    }
    normalize_branch(sh, q, Branch { kids, rest })
}

fn normalize_branch(sh: &Shift, q: &State, mut b: Branch) -> Option<Node> {
    let fams: Vec<u32> = b.rest.keys().copied().collect();
    for f in fams {
        let ex = b.rest.remove(&f).unwrap();
        let allowed = residue_allowed(sh, q, f, &ex);
        match &allowed {
            FinCof::Fin(is) => {
                for &i in is {
                    let a = Letter::new(f, i);
                    let qa = sh.step(q, a).expect("readable");
                    b.kids.insert(a, full_leaf(sh, &qa));
                }
            }
            FinCof::Cof(_) => {
                let valid = sh.valid_letters(q).remove(&f).unwrap_or_else(FinCof::empty);
                let mut ex: BTreeSet<u64> = match valid.minus(&allowed) {
                    FinCof::Fin(s) => s,
                    FinCof::Cof(_) => unreachable!(),
                };
                // absorb full explicit children
                let full_kids: Vec<Letter> = b
                    .kids
                    .iter()
                    .filter(|(a, k)| a.family == f && **k == full_leaf(sh, &sh.step(q, **a).unwrap()))
                    .map(|(a, _)| *a)
                    .collect();
                for a in full_kids {
                    b.kids.remove(&a);
                    ex.remove(&a.index);
                }
                for a in b.kids.keys().filter(|a| a.family == f) {
                    ex.insert(a.index);
                }
                b.rest.insert(f, ex);
            }
        }
    }
    if b.kids.is_empty() && b.rest.is_empty() {
        return None;
    }
    match collapse(sh, q, &b) {
        Some(t) => Some(Node::Leaf(t)),
        None => Some(Node::Branch(b)),
    }
}

/// A tail set `T` with `expand(T) = b`, if one exists.
fn collapse(sh: &Shift, q: &State, b: &Branch) -> Option<FinCof> {
    if sh.auto().is_some() {
        let mut t = FinCof::empty();
        for (a, k) in &b.kids {
            let Node::Leaf(ta) = k else { return None };
            t = t.union(&sh.push_tail(*a, ta));
        }
        let t = t.intersect(&sh.full_tail(q));
        for &a in &sh.auto().unwrap().letters {
            if sh.step(q, a).is_none() {
                continue;
            }
            let want = match b.kids.get(&a) {
                Some(Node::Leaf(ta)) => ta.clone(),
                _ => FinCof::empty(),
            };
            if sh.pull_tail(q, &t, a) != want {
                return None;
            }
        }
        return Some(t);
    }
    let g = sh.rules().unwrap();
    let mut v = FinCof::empty();
    for (a, k) in &b.kids {
        let qa = sh.step(q, *a)?;
        if *k != full_leaf(sh, &qa) {
            return None;
        }
        v = v.union(&FinCof::single(g.source(*a)));
    }
    for (&f, ex) in &b.rest {
        let allowed = residue_allowed(sh, q, f, ex);
        v = v.union(&g.source_image(f, &allowed)?);
    }
    let v = v.intersect(&sh.full_tail(q)).normalize(&g.vertices);
    for f in 0..sh.alphabet.families.len() as u32 {
        let fam = &sh.alphabet.families[f as usize].indices;
        let mut included = FinCof::from_iter(b.kids.keys().filter(|a| a.family == f).map(|a| a.index));
        if let Some(ex) = b.rest.get(&f) {
            included = included.union(&residue_allowed(sh, q, f, ex));
        }
        if sh.letters_with_source_in(q, f, &v) != included.normalize(fam) {
            return None;
        }
    }
    Some(v)
}

/// Re-roots a node valid at `q_old` to state `q_new`, intersecting with the
/// follower set of `q_new`.
fn reanchor(sh: &Shift, n: &Node, q_old: &State, q_new: &State) -> Result<Option<Node>> {
    match n {
        Node::Leaf(t) => Ok(leaf_or_none(sh, q_new, t.clone())),
        Node::Branch(b) => {
            let mut kids = BTreeMap::new();
            for (a, k) in &b.kids {
                let Some(qn) = sh.step(q_new, *a) else {
                    continue;
                };
                let qo = sh.step(q_old, *a).expect("child readable");
                if let Some(k2) = reanchor(sh, k, &qo, &qn)? {
                    kids.insert(*a, k2);
                }
            }
            let mut rest = BTreeMap::new();
            for (&f, ex) in &b.rest {
                let allowed = residue_allowed(sh, q_old, f, ex);
                let valid_new = sh.valid_letters(q_new).remove(&f).unwrap_or_else(FinCof::empty);
                let allowed_new = allowed.intersect(&valid_new);
                match &allowed_new {
                    FinCof::Fin(is) => {
                        for &i in is {
                            let a = Letter::new(f, i);
                            let qa = sh.step(q_new, a).expect("readable");
                            kids.insert(a, full_leaf(sh, &qa));
                        }
                    }
                    FinCof::Cof(_) => match valid_new.minus(&allowed_new) {
                        FinCof::Fin(s) => {
                            let mut s = s;
                            s.extend(kids.keys().filter(|a| a.family == f).map(|a| a.index));
                            rest.insert(f, s);
                        }
                        FinCof::Cof(_) => return Err(Error::ClosureViolation("re-rooted residue is neither finite nor cofinite".into())),
                    },
                }
            }
            Ok(normalize_branch(sh, q_new, Branch { kids, rest }))
        }
    }
}

fn chain(sh: &Shift, w: &Word, leaf: Option<Node>) -> Option<Node> {
    let mut states = vec![sh.init_state()];
    for &a in w.letters() {
        let q = sh.step(states.last().unwrap(), a)?;
        states.push(q);
    }
    let mut node = leaf?;
    for i in (0..w.len()).rev() {
        let mut b = Branch::default();
        b.kids.insert(w.letters()[i], node);
        node = normalize_branch(sh, &states[i], b)?;
    }
    Some(node)
}

impl SetExpr {
    pub fn empty(flavor: Flavor) -> Self {
        SetExpr { root: None, flavor }
    }

    pub fn is_empty(&self) -> bool {
        self.root.is_none()
    }

    /// Same underlying set, regardless of flavor.
    pub fn same_set(&self, o: &SetExpr) -> bool {
        self.root == o.root
    }

    pub fn with_flavor(mut self, f: Flavor) -> Self {
        self.flavor = f;
        self
    }
}

pub fn x_set(sh: &Shift) -> SetExpr {
    c_set(sh, &Word::empty(), &Word::empty())
}

/// `C(alpha, beta) = beta (F_alpha ∩ F_beta)`.
pub fn c_set(sh: &Shift, alpha: &Word, beta: &Word) -> SetExpr {
    let flavor = if alpha.is_empty() && beta.is_empty() { Flavor::U } else { Flavor::B };
    let (Some(qa), Some(qb)) = (sh.state_of(alpha), sh.state_of(beta)) else {
        return SetExpr::empty(flavor);
    };
    let t = sh.full_tail(&qa).intersect(&sh.full_tail(&qb));
    let leaf = leaf_or_none(sh, &qb, t);
    SetExpr { root: chain(sh, beta, leaf), flavor }
}

pub fn cylinder(sh: &Shift, beta: &Word) -> SetExpr {
    c_set(sh, &Word::empty(), beta)
}

pub fn follower(sh: &Shift, alpha: &Word) -> SetExpr {
    c_set(sh, alpha, &Word::empty())
}

pub fn check_letters(sh: &Shift, w: &Word) -> Result<()> {
    sh.alphabet.check(w)
}

pub fn union(sh: &Shift, a: &SetExpr, b: &SetExpr) -> SetExpr {
    let flavor = if a.flavor == Flavor::B && b.flavor == Flavor::B { Flavor::B } else { Flavor::U };
    SetExpr { root: op_nodes(sh, &sh.init_state(), a.root.as_ref(), b.root.as_ref(), Op::Or), flavor }
}

pub fn intersect(sh: &Shift, a: &SetExpr, b: &SetExpr) -> SetExpr {
    let flavor = if a.flavor == Flavor::B || b.flavor == Flavor::B { Flavor::B } else { Flavor::U };
    SetExpr { root: op_nodes(sh, &sh.init_state(), a.root.as_ref(), b.root.as_ref(), Op::And), flavor }
}

pub fn difference(sh: &Shift, a: &SetExpr, b: &SetExpr) -> SetExpr {
    SetExpr { root: op_nodes(sh, &sh.init_state(), a.root.as_ref(), b.root.as_ref(), Op::Minus), flavor: a.flavor }
}

pub fn complement(sh: &Shift, a: &SetExpr) -> Result<SetExpr> {
    if a.flavor == Flavor::B {
        return Err(Error::TopUnavailable);
    }
    Ok(difference(sh, &x_set(sh), a))
}

pub fn bool_op(sh: &Shift, op: BoolOp, a: &SetExpr, b: &SetExpr) -> Result<SetExpr> {
    Ok(match op {
        BoolOp::Union => union(sh, a, b),
        BoolOp::Intersect => intersect(sh, a, b),
        BoolOp::ComplementInX => complement(sh, a)?,
        BoolOp::RelativeComplement => difference(sh, a, b),
    })
}

pub fn is_subset(sh: &Shift, a: &SetExpr, b: &SetExpr) -> bool {
    difference(sh, a, b).is_empty()
}

pub fn is_empty(a: &SetExpr) -> bool {
    a.is_empty()
}

/// `r(A, alpha) = {x in X : alpha x in A}`.
pub fn relative_range(sh: &Shift, a: &SetExpr, alpha: &Word) -> Result<SetExpr> {
    sh.alphabet.check(alpha)?;
    let Some(root) = &a.root else {
        return Ok(a.clone());
    };
    let Some(q_alpha) = sh.state_of(alpha) else {
        return Ok(SetExpr::empty(a.flavor));
    };
    let init = sh.init_state();
    let mut node = root.clone();
    let mut q = init.clone();
    for (i, &l) in alpha.letters().iter().enumerate() {
        match node {
            Node::Leaf(t) => {
                let mut t = t;
                let mut qq = q.clone();
                for &b in &alpha.letters()[i..] {
                    t = sh.pull_tail(&qq, &t, b);
                    qq = sh.step(&qq, b).expect("alpha in language");
                }
                return Ok(SetExpr { root: leaf_or_none(sh, &init, t), flavor: a.flavor });
            }
            Node::Branch(b) => {
                let qa = sh.step(&q, l).expect("alpha in language");
                if let Some(k) = b.kids.get(&l) {
                    node = k.clone();
                    q = qa;
                } else if residue_covers(&b, l) {
                    return Ok(SetExpr { root: leaf_or_none(sh, &init, sh.full_tail(&q_alpha)), flavor: a.flavor });
                } else {
                    return Ok(SetExpr::empty(a.flavor));
                }
            }
        }
    }
    Ok(SetExpr { root: reanchor(sh, &node, &q, &init)?, flavor: a.flavor })
}

/// `a A = {a x in X : x in A}`.
pub fn prepend(sh: &Shift, a: Letter, set: &SetExpr) -> Result<SetExpr> {
    if !sh.alphabet.contains(a) {
        return Err(Error::UnknownLetter(sh.alphabet.letter_name(a)));
    }
    let init = sh.init_state();
    let (Some(root), Some(qa)) = (&set.root, sh.step(&init, a)) else {
        return Ok(SetExpr::empty(set.flavor));
    };
    let inner = reanchor(sh, root, &init, &qa)?;
    let Some(inner) = inner else {
        return Ok(SetExpr::empty(set.flavor));
    };
    let mut b = Branch::default();
    b.kids.insert(a, inner);
    Ok(SetExpr { root: normalize_branch(sh, &init, b), flavor: set.flavor })
}

pub fn prepend_word(sh: &Shift, w: &Word, set: &SetExpr) -> Result<SetExpr> {
    let mut s = set.clone();
    for &a in w.letters().iter().rev() {
        s = prepend(sh, a, &s)?;
    }
    Ok(s)
}

/// `{a : Z_a ∩ A ≠ ∅}`.
pub fn emitted_letters(sh: &Shift, a: &SetExpr) -> LetterSet {
    let init = sh.init_state();
    let mut out = LetterSet::new();
    match &a.root {
        None => {}
        Some(Node::Leaf(t)) => {
            if let Some(aut) = sh.auto() {
                for &l in &aut.letters {
                    if !sh.pull_tail(&init, t, l).is_empty() {
                        let e = out.entry(l.family).or_insert_with(FinCof::empty);
                        *e = e.union(&FinCof::single(l.index));
                    }
                }
            } else {
                for f in 0..sh.alphabet.families.len() as u32 {
                    let s = sh.letters_with_source_in(&init, f, t);
                    if !s.is_empty() {
                        out.insert(f, s);
                    }
                }
            }
        }
        Some(Node::Branch(b)) => {
            for l in b.kids.keys() {
                let e = out.entry(l.family).or_insert_with(FinCof::empty);
                *e = e.union(&FinCof::single(l.index));
            }
            for (&f, ex) in &b.rest {
                let e = out.entry(f).or_insert_with(FinCof::empty);
                *e = e.union(&residue_allowed(sh, &init, f, ex));
            }
        }
    }
    out
}

pub fn is_regular(sh: &Shift, a: &SetExpr) -> bool {
    letter_set_is_finite(&emitted_letters(sh, a))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Unitality {
    Yes,
    No,
    Unknown,
}

/// Whether X lies in the top-free algebra.
///
/// Decided when the alphabet is finite, when some letter has full follower
/// set, or when every cylinder and follower set of a letter is finite while X
/// is infinite. Anything else is reported as unknown.
pub fn is_unital(sh: &Shift) -> Unitality {
    if sh.is_finite_alphabet() {
        return Unitality::Yes;
    }
    let Some(g) = sh.rules() else {
        return Unitality::Unknown;
    };
    let all = FinCof::all(&g.vertices);
    let mut ranges = FinCof::empty();
    let mut ranges_known = true;
    for (f, fam) in g.families.iter().enumerate() {
        for &i in fam.overrides.keys() {
            let r = g.range(Letter::new(f as u32, i));
            if r == all {
                return Unitality::Yes;
            }
            ranges = ranges.union(&r);
        }
        if let Some(d) = &fam.default {
            match &d.range {
                crate::rules::RangeRule::Set(s) => {
                    let s = s.clone().normalize(&g.vertices);
                    if s == all {
                        return Unitality::Yes;
                    }
                    ranges = ranges.union(&s);
                }
                crate::rules::RangeRule::Single(m) if m.mul == 0 => {
                    ranges = ranges.union(&FinCof::single(m.add as u64));
                }
                _ => ranges_known = false,
            }
        }
    }
    if !ranges_known || !g.vertices.is_finite() {
        return Unitality::Unknown;
    }
    let finite_paths = finite_path_vertices(sh);
    match ranges.finite_elems() {
        Some(vs) if vs.iter().all(|v| finite_paths.contains(v)) => Unitality::No,
        _ => Unitality::Unknown,
    }
}

/// Vertices of a finite rule graph with finitely many infinite paths.
fn finite_path_vertices(sh: &Shift) -> BTreeSet<u64> {
    let g = sh.rules().unwrap();
    let n = g.vertices.end.unwrap();
    let verts: Vec<u64> = (g.vertices.start..n).collect();
    // out-edges as (target set) lists; None for infinitely many edges
    let mut out: BTreeMap<u64, Option<Vec<u64>>> = BTreeMap::new();
    for &u in &verts {
        let mut succ = Some(Vec::new());
        for f in 0..g.families.len() as u32 {
            match g.indices_with_source_in(f, &FinCof::single(u)) {
                FinCof::Fin(is) => {
                    for i in is {
                        let r = g.range(Letter::new(f, i));
                        match (&mut succ, r.finite_elems()) {
                            (Some(s), Some(vs)) => s.extend(vs.iter().copied()),
                            _ => succ = None,
                        }
                    }
                }
                FinCof::Cof(_) => succ = None,
            }
        }
        out.insert(u, succ);
    }
    // bad: infinite out-degree, or a cycle vertex with more than one way out
    let reach = |u: u64| -> BTreeSet<u64> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![u];
        while let Some(x) = stack.pop() {
            if let Some(Some(s)) = out.get(&x) {
                for &y in s {
                    if seen.insert(y) {
                        stack.push(y);
                    }
                }
            }
        }
        seen
    };
    let reaches: BTreeMap<u64, BTreeSet<u64>> = verts.iter().map(|&u| (u, reach(u))).collect();
    let bad: BTreeSet<u64> = verts
        .iter()
        .copied()
        .filter(|u| match &out[u] {
            None => true,
            Some(s) => reaches[u].contains(u) && s.len() > 1,
        })
        .collect();
    verts.into_iter().filter(|u| !bad.contains(u) && reaches[u].is_disjoint(&bad)).collect()
}

/// Nonempty atoms of the Boolean algebra generated by `gens` and X.
pub fn atoms(sh: &Shift, gens: &[SetExpr]) -> Vec<SetExpr> {
    let mut parts = vec![x_set(sh)];
    for g in gens {
        let mut next = Vec::with_capacity(parts.len() * 2);
        for p in &parts {
            let a = intersect(sh, p, g).with_flavor(Flavor::U);
            let b = difference(sh, p, g);
            if !a.is_empty() {
                next.push(a);
            }
            if !b.is_empty() {
                next.push(b);
            }
        }
        parts = next;
    }
    parts
}

/// Disjoint pieces of a canonical set, in trie order.
pub fn gc_atoms(a: &SetExpr) -> Vec<GCAtom> {
    let mut out = Vec::new();
    if let Some(n) = &a.root {
        flatten(n, &mut Vec::new(), &mut out);
    }
    out
}

fn flatten(n: &Node, w: &mut Vec<Letter>, out: &mut Vec<GCAtom>) {
    match n {
        Node::Leaf(t) => out.push(GCAtom { prefix: Word(w.clone()), tail: Tail::States(t.clone()) }),
        Node::Branch(b) => {
            for (a, k) in &b.kids {
                w.push(*a);
                flatten(k, w, out);
                w.pop();
            }
            for (f, ex) in &b.rest {
                out.push(GCAtom { prefix: Word(w.clone()), tail: Tail::Residue { family: *f, excluded: ex.clone() } });
            }
        }
    }
}

/// Eventually periodic presentation shifted by `i` letters.
pub fn shift_point(pre: &Word, per: &Word, i: usize) -> (Word, Word) {
    if i <= pre.len() {
        (pre.suffix_from(i), per.clone())
    } else {
        let k = (i - pre.len()) % per.len();
        let mut v = per.letters()[k..].to_vec();
        v.extend_from_slice(&per.letters()[..k]);
        (Word::empty(), Word(v))
    }
}

fn letter_at(pre: &Word, per: &Word, i: usize) -> Letter {
    if i < pre.len() {
        pre.letters()[i]
    } else {
        per.letters()[(i - pre.len()) % per.len()]
    }
}

/// Membership of the point `pre per^inf` (assumed to lie in X).
pub fn contains_point(sh: &Shift, a: &SetExpr, pre: &Word, per: &Word) -> bool {
    let Some(mut node) = a.root.as_ref() else {
        return false;
    };
    let mut q = sh.init_state();
    let mut i = 0;
    loop {
        match node {
            Node::Leaf(t) => {
                let (ypre, yper) = shift_point(pre, per, i);
                return match &sh.backend {
                    crate::shift::Backend::Auto(aut) => aut.atom_of_point(&ypre, &yper).is_some_and(|p| t.contains(p as u64)),
                    crate::shift::Backend::Rule(g) => t.contains(g.source(letter_at(pre, per, i))),
                };
            }
            Node::Branch(b) => {
                let l = letter_at(pre, per, i);
                if let Some(k) = b.kids.get(&l) {
                    let Some(ql) = sh.step(&q, l) else {
                        return false;
                    };
                    q = ql;
                    node = k;
                    i += 1;
                } else {
                    return residue_covers(b, l) && sh.step(&q, l).is_some();
                }
            }
        }
    }
}

/// An eventually periodic point inside a nonempty set.
pub fn witness_point(sh: &Shift, a: &SetExpr) -> Option<(Word, Word)> {
    let mut node = a.root.as_ref()?;
    let mut q = sh.init_state();
    let mut w = Vec::new();
    loop {
        match node {
            Node::Leaf(t) => {
                let pw = Word(w.clone());
                return match &sh.backend {
                    crate::shift::Backend::Auto(aut) => {
                        let p = t.iter_from(0).next()? as usize;
                        let (pre, per) = &aut.witnesses[p];
                        Some((pw.concat(pre), per.clone()))
                    }
                    crate::shift::Backend::Rule(g) => {
                        let v = t.iter_from(g.vertices.start).next()?;
                        let (pre, per) = rule_path_from(sh, &q, v)?;
                        Some((pw.concat(&pre), per))
                    }
                };
            }
            Node::Branch(b) => {
                if let Some((l, k)) = b.kids.iter().next() {
                    q = sh.step(&q, *l)?;
                    w.push(*l);
                    node = k;
                } else {
                    let (&f, ex) = b.rest.iter().next()?;
                    let allowed = residue_allowed(sh, &q, f, ex);
                    let start = sh.alphabet.families[f as usize].indices.start;
                    let l = Letter::new(f, allowed.iter_from(start).next()?);
                    let ql = sh.step(&q, l)?;
                    w.push(l);
                    let v = sh.full_tail(&ql).iter_from(sh.tail_universe().start).next()?;
                    let (pre, per) = rule_path_from(sh, &ql, v)?;
                    return Some((Word(w).concat(&pre), per));
                }
            }
        }
    }
}

/// An eventually periodic path starting at vertex `v`, readable from `q`.
fn rule_path_from(sh: &Shift, q: &State, v: u64) -> Option<(Word, Word)> {
    let g = sh.rules()?;
    let mut seen: Vec<u64> = Vec::new();
    let mut letters: Vec<Letter> = Vec::new();
    let mut cur = v;
    let mut state = q.clone();
    for _ in 0..10_000 {
        if let Some(j) = seen.iter().position(|&x| x == cur) {
            return Some((Word(letters[..j].to_vec()), Word(letters[j..].to_vec())));
        }
        seen.push(cur);
        // first readable letter leaving `cur`
        let mut next = None;
        for f in 0..g.families.len() as u32 {
            let idx = sh.letters_with_source_in(&state, f, &FinCof::single(cur));
            let start = sh.alphabet.families[f as usize].indices.start;
            let first = idx.iter_from(start).next();
            if let Some(i) = first {
                next = Some(Letter::new(f, i));
                break;
            }
        }
        let l = next?;
        state = sh.step(&state, l)?;
        letters.push(l);
        // continue from the least vertex in the range
        cur = sh.full_tail(&state).iter_from(g.vertices.start).next()?;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn golden_mean_basics() {
        let sh = fixtures::golden_mean();
        let w = |s: &str| sh.parse_word(s).unwrap();
        let z00 = cylinder(&sh, &w("00"));
        assert!(c_set(&sh, &w("1"), &w("0")).same_set(&z00));
        assert!(!c_set(&sh, &w("1"), &w("1")).is_empty());
        assert!(cylinder(&sh, &w("11")).is_empty());
        assert!(follower(&sh, &w("1")).same_set(&cylinder(&sh, &w("0"))));
        let z1 = cylinder(&sh, &w("1"));
        assert!(prepend(&sh, sh.letter("1").unwrap(), &z1).unwrap().is_empty());
        assert!(prepend(&sh, sh.letter("1").unwrap(), &x_set(&sh)).unwrap().same_set(&cylinder(&sh, &w("10"))));
    }

    #[test]
    fn full_shift_complement() {
        let sh = fixtures::full_shift();
        let w = |s: &str| sh.parse_word(s).unwrap();
        let z0 = cylinder(&sh, &w("0")).with_flavor(Flavor::U);
        assert!(complement(&sh, &z0).unwrap().same_set(&cylinder(&sh, &w("1"))));
        assert_eq!(complement(&sh, &z0.with_flavor(Flavor::B)), Err(Error::TopUnavailable));
    }

    #[test]
    fn renewal_complement_is_residue() {
        let sh = fixtures::renewal();
        let w = |s: &str| sh.parse_word(s).unwrap();
        let c = complement(&sh, &cylinder(&sh, &w("e2")).with_flavor(Flavor::U)).unwrap();
        let atoms = gc_atoms(&c);
        assert_eq!(atoms.len(), 1);
        // start vertex anything but 2
        assert_eq!(atoms[0].tail, Tail::States(FinCof::Cof([2u64].into_iter().collect())));
        assert!(contains_point(&sh, &c, &w("e3.e2"), &w("e1")));
        assert!(!contains_point(&sh, &c, &w("e2"), &w("e1")));
        let back = union(&sh, &c, &cylinder(&sh, &w("e2")));
        assert!(back.same_set(&x_set(&sh)));
    }

    #[test]
    fn fan_loop_singletons() {
        let sh = fixtures::fan_loop();
        let w = |s: &str| sh.parse_word(s).unwrap();
        let c = c_set(&sh, &w("f"), &w("e0"));
        let atoms = gc_atoms(&c);
        assert_eq!(atoms.len(), 1);
        assert_eq!(atoms[0].prefix, w("e0"));
        assert!(contains_point(&sh, &c, &w("e0"), &w("f")));
    }
}
