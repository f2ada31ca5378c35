//! Subshift handles: alphabet plus an automaton or rule backend.

use crate::alphabet::{Alphabet, Family};
use crate::automaton::Automaton;
use crate::error::{Error, Result};
use crate::fincof::{FinCof, Universe};
use crate::rules::RuleGraph;
use crate::word::{Letter, Word};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug)]
pub enum Backend {
    Auto(Automaton),
    Rule(RuleGraph),
}

#[derive(Clone, Debug)]
pub struct Shift {
    pub name: String,
    pub alphabet: Alphabet,
    pub backend: Backend,
}

/// Reached state after reading a word: an automaton state, or the range of
/// the last edge (all vertices for the empty word).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum State {
    Auto(usize),
    Rule(FinCof),
}

/// Per-family finite or cofinite index sets.
pub type LetterSet = BTreeMap<u32, FinCof>;

pub fn letter_set_is_finite(s: &LetterSet) -> bool {
    s.values().all(|v| v.is_finite())
}

pub fn letter_set_letters(s: &LetterSet) -> Option<Vec<Letter>> {
    let mut out = Vec::new();
    for (&f, v) in s {
        out.extend(v.finite_elems()?.iter().map(|&i| Letter::new(f, i)));
    }
    Some(out)
}

impl Shift {
    pub fn forbidden_words(name: &str, symbols: &[&str], forbidden: &[&str]) -> Result<Shift> {
        let alphabet = Alphabet::new(vec![Family::named("", symbols)]);
        let letters = alphabet.finite_letters().unwrap();
        let fw: Vec<Vec<usize>> = forbidden
            .iter()
            .map(|w| alphabet.parse_word(w).map(|w| w.letters().iter().map(|a| a.index as usize).collect()))
            .collect::<Result<_>>()?;
        let aut = Automaton::from_forbidden(letters, &fw)?;
        Ok(Shift { name: name.into(), alphabet, backend: Backend::Auto(aut) })
    }

    /// Right-resolving labelled graph on vertices `0..n`, edges `(from, symbol, to)`.
    pub fn labelled_graph(name: &str, symbols: &[&str], n: usize, edges: &[(usize, &str, usize)]) -> Result<Shift> {
        let alphabet = Alphabet::new(vec![Family::named("", symbols)]);
        let letters = alphabet.finite_letters().unwrap();
        let mut es = Vec::new();
        for &(u, s, v) in edges {
            let w = alphabet.parse_word(s)?;
            if w.len() != 1 {
                return Err(Error::Invalid(format!("edge label `{s}` is not a letter")));
            }
            es.push((u, w.letters()[0].index as usize, v));
        }
        let aut = Automaton::from_labelled_graph(letters, n, &es)?;
        Ok(Shift { name: name.into(), alphabet, backend: Backend::Auto(aut) })
    }

    pub fn rule_graph(name: &str, alphabet: Alphabet, g: RuleGraph) -> Result<Shift> {
        if alphabet.families.len() != g.families.len() {
            return Err(Error::Config("families and rules differ in number".into()));
        }
        for (f, r) in alphabet.families.iter().zip(g.families.iter()) {
            if f.indices != r.indices {
                return Err(Error::Config(format!("index set mismatch for family `{}`", f.name)));
            }
        }
        Ok(Shift { name: name.into(), alphabet, backend: Backend::Rule(g) })
    }

    pub fn is_finite_alphabet(&self) -> bool {
        self.alphabet.is_finite()
    }

    pub fn auto(&self) -> Option<&Automaton> {
        match &self.backend {
            Backend::Auto(a) => Some(a),
            Backend::Rule(_) => None,
        }
    }

    pub fn rules(&self) -> Option<&RuleGraph> {
        match &self.backend {
            Backend::Rule(g) => Some(g),
            Backend::Auto(_) => None,
        }
    }

    pub fn init_state(&self) -> State {
        match &self.backend {
            Backend::Auto(a) => State::Auto(a.init),
            Backend::Rule(g) => State::Rule(FinCof::all(&g.vertices)),
        }
    }

    pub fn step(&self, q: &State, a: Letter) -> Option<State> {
        if !self.alphabet.contains(a) {
            return None;
        }
        match (&self.backend, q) {
            (Backend::Auto(aut), State::Auto(q)) => aut.step(*q, a).map(State::Auto),
            (Backend::Rule(g), State::Rule(v)) => {
                if v.contains(g.source(a)) {
                    Some(State::Rule(g.range(a)))
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn run(&self, q: &State, w: &Word) -> Option<State> {
        let mut q = q.clone();
        for &a in w.letters() {
            q = self.step(&q, a)?;
        }
        Some(q)
    }

    pub fn state_of(&self, w: &Word) -> Option<State> {
        self.run(&self.init_state(), w)
    }

    /// Universe of tail atoms: follower atoms or vertices.
    pub fn tail_universe(&self) -> Universe {
        match &self.backend {
            Backend::Auto(a) => Universe::finite(a.n_atoms() as u64),
            Backend::Rule(g) => g.vertices,
        }
    }

    /// Tail atoms of the follower set of a state.
    pub fn full_tail(&self, q: &State) -> FinCof {
        match (&self.backend, q) {
            (Backend::Auto(a), State::Auto(q)) => FinCof::Fin(a.state_atoms[*q].clone()),
            (Backend::Rule(_), State::Rule(v)) => v.clone(),
            _ => FinCof::empty(),
        }
    }

    /// `{y : a y in T}` as tail atoms, restricted to the follower set of `q a`.
    pub fn pull_tail(&self, q: &State, t: &FinCof, a: Letter) -> FinCof {
        let Some(qa) = self.step(q, a) else {
            return FinCof::empty();
        };
        let full = self.full_tail(&qa);
        match &self.backend {
            Backend::Auto(aut) => {
                let FinCof::Fin(ts) = t else { unreachable!("automaton tails are finite") };
                FinCof::Fin(aut.pull(ts, a)).intersect(&full)
            }
            Backend::Rule(g) => {
                if t.contains(g.source(a)) {
                    full
                } else {
                    FinCof::empty()
                }
            }
        }
    }

    /// Tail atoms of `a T`.
    pub fn push_tail(&self, a: Letter, t: &FinCof) -> FinCof {
        match &self.backend {
            Backend::Auto(aut) => {
                let FinCof::Fin(ts) = t else { unreachable!("automaton tails are finite") };
                FinCof::Fin(aut.push(a, ts))
            }
            Backend::Rule(g) => {
                if t.is_empty() {
                    FinCof::empty()
                } else {
                    FinCof::single(g.source(a))
                }
            }
        }
    }

    /// Letters `a` with `step(q, a)` defined.
    pub fn valid_letters(&self, q: &State) -> LetterSet {
        let mut out = LetterSet::new();
        match (&self.backend, q) {
            (Backend::Auto(aut), State::Auto(q)) => {
                for (i, a) in aut.letters.iter().enumerate() {
                    if aut.delta[*q][i].is_some() {
                        out.entry(a.family).or_insert_with(FinCof::empty);
                        let e = out.get_mut(&a.family).unwrap();
                        *e = e.union(&FinCof::single(a.index));
                    }
                }
            }
            (Backend::Rule(g), State::Rule(v)) => {
                for f in 0..g.families.len() as u32 {
                    let s = g.indices_with_source_in(f, v);
                    if !s.is_empty() {
                        out.insert(f, s);
                    }
                }
            }
            _ => {}
        }
        out
    }

    /// Indices of family `f` readable from `q` whose source lies in `v` (rule backends).
    pub fn letters_with_source_in(&self, q: &State, f: u32, v: &FinCof) -> FinCof {
        match (&self.backend, q) {
            (Backend::Rule(g), State::Rule(qv)) => g.indices_with_source_in(f, &qv.intersect(v).normalize(&g.vertices)),
            _ => FinCof::empty(),
        }
    }

    pub fn is_in_language(&self, w: &Word) -> Result<bool> {
        self.alphabet.check(w)?;
        Ok(self.state_of(w).is_some())
    }

    /// Words of length `n` in canonical order, at most `budget` of them; the flag
    /// reports truncation.
    pub fn enumerate_language(&self, n: usize, budget: usize) -> (Vec<Word>, bool) {
        let mut out = Vec::new();
        let mut truncated = false;
        self.enum_rec(&self.init_state(), &mut Vec::new(), n, budget.max(1), &mut out, &mut truncated);
        (out, truncated)
    }

    fn enum_rec(&self, q: &State, cur: &mut Vec<Letter>, n: usize, budget: usize, out: &mut Vec<Word>, truncated: &mut bool) {
        if *truncated {
            return;
        }
        if cur.len() == n {
            if out.len() == budget {
                *truncated = true;
                return;
            }
            out.push(Word(cur.clone()));
            return;
        }
        for (f, idx) in self.valid_letters(q) {
            let start = self.alphabet.families[f as usize].indices.start;
            for i in idx.iter_from(start) {
                if *truncated {
                    return;
                }
                let a = Letter::new(f, i);
                let qa = self.step(q, a).expect("valid letter");
                cur.push(a);
                self.enum_rec(&qa, cur, n, budget, out, truncated);
                cur.pop();
            }
        }
    }

    /// All words of length at most `n` over the first `window` letters.
    pub fn words_up_to(&self, n: usize, window: usize) -> Vec<Word> {
        let letters = self.alphabet.window(window);
        let mut out = vec![Word::empty()];
        let mut frontier = vec![(Word::empty(), self.init_state())];
        for _ in 0..n {
            let mut next = Vec::new();
            for (w, q) in &frontier {
                for &a in &letters {
                    if let Some(qa) = self.step(q, a) {
                        let wa = w.push(a);
                        out.push(wa.clone());
                        next.push((wa, qa));
                    }
                }
            }
            frontier = next;
        }
        out
    }

    pub fn parse_word(&self, s: &str) -> Result<Word> {
        self.alphabet.parse_word(s)
    }

    pub fn fmt_word(&self, w: &Word) -> String {
        self.alphabet.format_word(w)
    }

    pub fn letter(&self, s: &str) -> Result<Letter> {
        let w = self.parse_word(s)?;
        if w.len() != 1 {
            return Err(Error::UnknownLetter(s.to_string()));
        }
        Ok(w.letters()[0])
    }

    /// Is `pre per^inf` a point of X?
    pub fn contains_point(&self, pre: &Word, per: &Word) -> bool {
        if per.is_empty() || self.alphabet.check(pre).is_err() || self.alphabet.check(per).is_err() {
            return false;
        }
        match &self.backend {
            Backend::Auto(aut) => aut.survives(aut.init, pre, per),
            Backend::Rule(g) => {
                let all: Vec<Letter> = pre.letters().iter().chain(per.letters()).copied().collect();
                let ok = |a: Letter, b: Letter| g.range(a).contains(g.source(b));
                all.windows(2).all(|p| ok(p[0], p[1])) && ok(*per.letters().last().unwrap(), per.letters()[0])
            }
        }
    }

    /// Names of vertices or automaton states, for display.
    pub fn describe(&self) -> String {
        match &self.backend {
            Backend::Auto(a) => format!(
                "{}: finite alphabet of {} letters, {} follower states, {} follower atoms",
                self.name,
                a.letters.len(),
                a.n_states(),
                a.n_atoms()
            ),
            Backend::Rule(g) => format!(
                "{}: rule graph with {} edge families, vertices {}",
                self.name,
                g.families.len(),
                match g.vertices.end {
                    Some(n) => format!("{}..{}", g.vertices.start, n),
                    None => format!("{}..", g.vertices.start),
                }
            ),
        }
    }
}

/// Distinct letters occurring in any of the words.
pub fn letters_of<'a, I: IntoIterator<Item = &'a Word>>(ws: I) -> BTreeSet<Letter> {
    ws.into_iter().flat_map(|w| w.letters().iter().copied()).collect()
}
