//! Deterministic follower-set automata for finite-alphabet subshifts, and
//! the atoms of the Boolean algebra generated by their follower sets.

use crate::error::{Error, Result};
use crate::word::{Letter, Word};
use std::collections::{BTreeSet, HashMap, VecDeque};

#[derive(Clone, Debug)]
pub struct Automaton {
    pub letters: Vec<Letter>,
    letter_pos: HashMap<Letter, usize>,
    /// `delta[q][i]` is the successor of state `q` on `letters[i]`.
    pub delta: Vec<Vec<Option<usize>>>,
    pub init: usize,
    /// Shortlex-least word reaching each state.
    pub state_words: Vec<Word>,
    /// Follower atoms, each given by the set of states whose runs survive on its points.
    pub atoms: Vec<Vec<usize>>,
    atom_lookup: HashMap<Vec<usize>, usize>,
    /// Atoms contained in the follower set of each state.
    pub state_atoms: Vec<BTreeSet<u64>>,
    /// `prepend[i][p]`: atom of `a y` for `y` in atom `p`, if `a y` is a point.
    pub prepend: Vec<Vec<Option<usize>>>,
    /// An eventually periodic point `(pre, period)` inside each atom.
    pub witnesses: Vec<(Word, Word)>,
}

impl Automaton {
    /// SFT given by forbidden words over letter positions.
    pub fn from_forbidden(letters: Vec<Letter>, forbidden: &[Vec<usize>]) -> Result<Self> {
        let k = forbidden.iter().map(|f| f.len()).max().unwrap_or(1).saturating_sub(1);
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut keys: Vec<Vec<usize>> = vec![vec![]];
        ids.insert(vec![], 0);
        let mut delta: Vec<Vec<Option<usize>>> = Vec::new();
        let mut i = 0;
        while i < keys.len() {
            let key = keys[i].clone();
            let mut row = Vec::with_capacity(letters.len());
            for a in 0..letters.len() {
                let mut ext = key.clone();
                ext.push(a);
                let bad = forbidden.iter().any(|f| !f.is_empty() && ext.ends_with(f));
                if bad {
                    row.push(None);
                    continue;
                }
                let next: Vec<usize> = ext[ext.len().saturating_sub(k)..].to_vec();
                let id = *ids.entry(next.clone()).or_insert_with(|| {
                    keys.push(next);
                    keys.len() - 1
                });
                row.push(Some(id));
            }
            delta.push(row);
            i += 1;
        }
        Self::from_dfa(letters, delta, 0)
    }

    /// Sofic shift given by a right-resolving labelled graph `(from, letter position, to)`.
    pub fn from_labelled_graph(letters: Vec<Letter>, n: usize, edges: &[(usize, usize, usize)]) -> Result<Self> {
        let mut out: Vec<Vec<Option<usize>>> = vec![vec![None; letters.len()]; n];
        for &(u, a, v) in edges {
            if u >= n || v >= n || a >= letters.len() {
                return Err(Error::Invalid(format!("edge ({u},{a},{v}) out of range")));
            }
            if out[u][a].is_some() && out[u][a] != Some(v) {
                return Err(Error::NotRightResolving(format!("vertex {u}")));
            }
            out[u][a] = Some(v);
        }
        let alive = infinite_core(&out);
        let start: BTreeSet<usize> = (0..n).filter(|v| alive[*v]).collect();
        if start.is_empty() {
            return Err(Error::Invalid("presentation has no infinite path".into()));
        }
        let mut ids: HashMap<BTreeSet<usize>, usize> = HashMap::new();
        let mut keys = vec![start.clone()];
        ids.insert(start, 0);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < keys.len() {
            let s = keys[i].clone();
            let mut row = Vec::new();
            for a in 0..letters.len() {
                let t: BTreeSet<usize> = s.iter().filter_map(|&v| out[v][a]).filter(|v| alive[*v]).collect();
                if t.is_empty() {
                    row.push(None);
                    continue;
                }
                let id = *ids.entry(t.clone()).or_insert_with(|| {
                    keys.push(t);
                    keys.len() - 1
                });
                row.push(Some(id));
            }
            delta.push(row);
            i += 1;
        }
        Self::from_dfa(letters, delta, 0)
    }

    fn from_dfa(letters: Vec<Letter>, raw: Vec<Vec<Option<usize>>>, init: usize) -> Result<Self> {
        let alive = infinite_core(&raw);
        if !alive[init] {
            return Err(Error::Invalid("subshift is empty".into()));
        }
        // keep live states reachable from init, numbered in BFS (shortlex) order
        let mut remap: HashMap<usize, usize> = HashMap::new();
        let mut order = vec![init];
        let mut words = vec![Word::empty()];
        remap.insert(init, 0);
        let mut qi = 0;
        while qi < order.len() {
            let q = order[qi];
            for (a, t) in raw[q].iter().enumerate() {
                if let Some(t) = *t {
                    if alive[t] && !remap.contains_key(&t) {
                        remap.insert(t, order.len());
                        order.push(t);
                        words.push(words[qi].push(letters[a]));
                    }
                }
            }
            qi += 1;
        }
        let delta: Vec<Vec<Option<usize>>> =
            order.iter().map(|&q| raw[q].iter().map(|t| t.and_then(|t| remap.get(&t).copied())).collect()).collect();
        let letter_pos = letters.iter().enumerate().map(|(i, a)| (*a, i)).collect();
        let mut aut = Automaton {
            letters,
            letter_pos,
            delta,
            init: 0,
            state_words: words,
            atoms: vec![],
            atom_lookup: HashMap::new(),
            state_atoms: vec![],
            prepend: vec![],
            witnesses: vec![],
        };
        aut.compute_atoms();
        Ok(aut)
    }

    pub fn n_states(&self) -> usize {
        self.delta.len()
    }

    pub fn n_atoms(&self) -> usize {
        self.atoms.len()
    }

    pub fn pos(&self, a: Letter) -> Option<usize> {
        self.letter_pos.get(&a).copied()
    }

    pub fn step(&self, q: usize, a: Letter) -> Option<usize> {
        self.pos(a).and_then(|i| self.delta[q][i])
    }

    pub fn run(&self, q: usize, w: &Word) -> Option<usize> {
        w.letters().iter().try_fold(q, |q, &a| self.step(q, a))
    }

    /// Does the run from `q` survive forever on `pre per per ...`?
    pub fn survives(&self, q: usize, pre: &Word, per: &Word) -> bool {
        let Some(mut q) = self.run(q, pre) else {
            return false;
        };
        let mut seen = BTreeSet::new();
        while seen.insert(q) {
            match self.run(q, per) {
                Some(t) => q = t,
                None => return false,
            }
        }
        true
    }

    /// Follower atom of the point `pre per^inf`, or `None` when it is not a point.
    pub fn atom_of_point(&self, pre: &Word, per: &Word) -> Option<usize> {
        let pat: Vec<usize> = (0..self.n_states()).filter(|&q| self.survives(q, pre, per)).collect();
        if !pat.contains(&self.init) {
            return None;
        }
        self.atom_lookup.get(&pat).copied()
    }

    /// `{p : a y in T for y in p}`.
    pub fn pull(&self, t: &BTreeSet<u64>, a: Letter) -> BTreeSet<u64> {
        let Some(i) = self.pos(a) else {
            return BTreeSet::new();
        };
        (0..self.n_atoms()).filter(|&p| self.prepend[i][p].is_some_and(|r| t.contains(&(r as u64)))).map(|p| p as u64).collect()
    }

    /// Atoms of `a T`.
    pub fn push(&self, a: Letter, t: &BTreeSet<u64>) -> BTreeSet<u64> {
        let Some(i) = self.pos(a) else {
            return BTreeSet::new();
        };
        t.iter().filter_map(|&p| self.prepend[i][p as usize]).map(|p| p as u64).collect()
    }

    fn compute_atoms(&mut self) {
        let nq = self.n_states();
        let nl = self.letters.len();
        let identity: Vec<Option<usize>> = (0..nq).map(Some).collect();
        let mut ids: HashMap<Vec<Option<usize>>, usize> = HashMap::new();
        let mut configs = vec![identity.clone()];
        let mut parent: Vec<Option<(usize, usize)>> = vec![None];
        ids.insert(identity, 0);
        let mut succ: Vec<Vec<(usize, usize)>> = Vec::new();
        let mut i = 0;
        while i < configs.len() {
            let c = configs[i].clone();
            let mut out = Vec::new();
            for a in 0..nl {
                let next: Vec<Option<usize>> = c.iter().map(|q| q.and_then(|q| self.delta[q][a])).collect();
                if next[self.init].is_none() {
                    continue;
                }
                let id = match ids.get(&next) {
                    Some(&id) => id,
                    None => {
                        configs.push(next.clone());
                        parent.push(Some((i, a)));
                        ids.insert(next, configs.len() - 1);
                        configs.len() - 1
                    }
                };
                out.push((a, id));
            }
            succ.push(out);
            i += 1;
        }
        let live_count = |c: &Vec<Option<usize>>| c.iter().filter(|q| q.is_some()).count();
        // configurations admitting an infinite death-free continuation
        let restricted: Vec<Vec<(usize, usize)>> = (0..configs.len())
            .map(|c| succ[c].iter().copied().filter(|&(_, d)| live_count(&configs[d]) == live_count(&configs[c])).collect())
            .collect();
        let mut keep = vec![true; configs.len()];
        loop {
            let mut changed = false;
            for c in 0..configs.len() {
                if keep[c] && !restricted[c].iter().any(|&(_, d)| keep[d]) {
                    keep[c] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut found: Vec<(Vec<usize>, Word, Word)> = Vec::new();
        let mut seen_pat = BTreeSet::new();
        for c in 0..configs.len() {
            if !keep[c] {
                continue;
            }
            let pat: Vec<usize> = (0..nq).filter(|&q| configs[c][q].is_some()).collect();
            if !seen_pat.insert(pat.clone()) {
                continue;
            }
            let mut u = Vec::new();
            let mut x = c;
            while let Some((p, a)) = parent[x] {
                u.push(self.letters[a]);
                x = p;
            }
            u.reverse();
            // walk the death-free graph until a configuration repeats
            let mut path: Vec<usize> = vec![c];
            let mut labels: Vec<Letter> = Vec::new();
            let mut cur = c;
            loop {
                let &(a, d) = restricted[cur].iter().find(|&&(_, d)| keep[d]).unwrap();
                labels.push(self.letters[a]);
                if let Some(j) = path.iter().position(|&y| y == d) {
                    let mut pre = u.clone();
                    pre.extend_from_slice(&labels[..j]);
                    found.push((pat, Word(pre), Word(labels[j..].to_vec())));
                    break;
                }
                path.push(d);
                cur = d;
            }
        }
        found.sort_by(|a, b| a.0.cmp(&b.0));
        self.atoms = found.iter().map(|f| f.0.clone()).collect();
        self.witnesses = found.iter().map(|f| (f.1.clone(), f.2.clone())).collect();
        self.atom_lookup = self.atoms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        self.state_atoms =
            (0..nq).map(|q| (0..self.atoms.len()).filter(|&p| self.atoms[p].contains(&q)).map(|p| p as u64).collect()).collect();
        self.prepend = (0..nl)
            .map(|a| {
                (0..self.atoms.len())
                    .map(|p| {
                        let pat: Vec<usize> = (0..nq).filter(|&q| self.delta[q][a].is_some_and(|t| self.atoms[p].contains(&t))).collect();
                        if pat.contains(&self.init) {
                            Some(*self.atom_lookup.get(&pat).expect("prepended pattern is an atom"))
                        } else {
                            None
                        }
                    })
                    .collect()
            })
            .collect();
    }
}

/// States with an infinite forward path.
fn infinite_core(delta: &[Vec<Option<usize>>]) -> Vec<bool> {
    let n = delta.len();
    let mut keep = vec![true; n];
    let mut queue: VecDeque<usize> = VecDeque::new();
    let mut outdeg: Vec<usize> = delta.iter().map(|r| r.iter().filter(|t| t.is_some()).count()).collect();
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (q, row) in delta.iter().enumerate() {
        for t in row.iter().flatten() {
            preds[*t].push(q);
        }
    }
    for q in 0..n {
        if outdeg[q] == 0 {
            queue.push_back(q);
        }
    }
    while let Some(q) = queue.pop_front() {
        if !keep[q] {
            continue;
        }
        keep[q] = false;
        for &p in &preds[q] {
            outdeg[p] -= 1;
            if outdeg[p] == 0 && keep[p] {
                queue.push_back(p);
            }
        }
    }
    keep
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bits() -> Vec<Letter> {
        vec![Letter::new(0, 0), Letter::new(0, 1)]
    }

    #[test]
    fn golden_mean_has_two_follower_atoms() {
        let a = Automaton::from_forbidden(bits(), &[vec![1, 1]]).unwrap();
        assert_eq!(a.n_states(), 3);
        assert_eq!(a.n_atoms(), 2);
    }

    #[test]
    fn even_shift_has_three_follower_atoms() {
        // A -1-> A, A -0-> B, B -0-> A
        let a = Automaton::from_labelled_graph(bits(), 2, &[(0, 1, 0), (0, 0, 1), (1, 0, 0)]).unwrap();
        assert_eq!(a.n_states(), 3);
        assert_eq!(a.n_atoms(), 3);
        for (p, (pre, per)) in a.witnesses.iter().enumerate() {
            assert_eq!(a.atom_of_point(pre, per), Some(p));
        }
    }

    #[test]
    fn rejects_non_right_resolving() {
        let r = Automaton::from_labelled_graph(bits(), 2, &[(0, 0, 0), (0, 0, 1)]);
        assert!(matches!(r, Err(Error::NotRightResolving(_))));
    }
}
