//! Graphs and ultragraphs as edge shifts, and the Leavitt path algebra
//! generators they induce inside the top-free subshift algebra.

use crate::algebra::{Algebra, AlgebraElement};
use crate::alphabet::{Alphabet, Family};
use crate::display::fmt_element;
use crate::error::{Error, Result};
use crate::fincof::{FinCof, Universe};
use crate::report::{Check, Report};
use crate::ring::Ring;
use crate::rules::{Affine, EdgeRule, FamilyRules, RangeRule, RuleGraph};
use crate::sets::{self, Flavor, SetExpr, Unitality};
use crate::shift::Shift;
use crate::word::{Letter, Word};
use std::collections::{BTreeMap, BTreeSet};

/// Finite directed graph. Edge names double as letters of the edge shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub name: String,
    pub vertices: Vec<String>,
    /// `(name, source, range)` by vertex index.
    pub edges: Vec<(String, usize, usize)>,
}

impl Graph {
    pub fn new(name: &str, vertices: &[&str], edges: &[(&str, &str, &str)]) -> Result<Graph> {
        let vs: Vec<String> = vertices.iter().map(|s| s.to_string()).collect();
        let idx = |v: &str| vs.iter().position(|x| x == v).ok_or_else(|| Error::Config(format!("unknown vertex `{v}`")));
        let mut es = Vec::new();
        let mut seen = BTreeSet::new();
        for &(e, s, r) in edges {
            if !seen.insert(e) {
                return Err(Error::Config(format!("duplicate edge `{e}`")));
            }
            es.push((e.to_string(), idx(s)?, idx(r)?));
        }
        Ok(Graph { name: name.to_string(), vertices: vs, edges: es })
    }

    /// Rose with `n` petals `e0, e1, ...` (`e`, `f` for two).
    pub fn rose(n: usize) -> Graph {
        let names: Vec<String> = if n == 2 { vec!["e".into(), "f".into()] } else { (0..n).map(|i| format!("e{i}")).collect() };
        let edges: Vec<(&str, &str, &str)> = names.iter().map(|e| (e.as_str(), "v", "v")).collect();
        Graph::new(&format!("rose-{n}"), &["v"], &edges).unwrap()
    }

    /// Directed cycle `u -a-> v -b-> w -c-> u`.
    pub fn three_cycle() -> Graph {
        Graph::new("3-cycle", &["u", "v", "w"], &[("a", "u", "v"), ("b", "v", "w"), ("c", "w", "u")]).unwrap()
    }

    pub fn out_edges(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].1 == v).collect()
    }

    pub fn in_edges(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].2 == v).collect()
    }

    pub fn to_dot(&self) -> String {
        let mut s = format!("digraph \"{}\" {{\n", self.name);
        for v in &self.vertices {
            s.push_str(&format!("  \"{v}\";\n"));
        }
        for (e, a, b) in &self.edges {
            s.push_str(&format!("  \"{}\" -> \"{}\" [label=\"{e}\"];\n", self.vertices[*a], self.vertices[*b]));
        }
        s.push_str("}\n");
        s
    }
}

/// Edge shift of a graph: one letter per edge, `ef` allowed iff `r(e) = s(f)`.
pub fn edge_shift(g: &Graph) -> Result<Shift> {
    let names: Vec<&str> = g.edges.iter().map(|e| e.0.as_str()).collect();
    let alphabet = Alphabet::new(vec![Family::named("", &names)]);
    let overrides = g
        .edges
        .iter()
        .enumerate()
        .map(|(i, (_, s, r))| {
            (i as u64, EdgeRule { source: Affine::constant(*s as u64), range: RangeRule::Set(FinCof::single(*r as u64)) })
        })
        .collect();
    let fam = FamilyRules { indices: Universe::finite(g.edges.len() as u64), default: None, overrides };
    let rg = RuleGraph::new(Universe::finite(g.vertices.len() as u64), Some(g.vertices.clone()), vec![fam])?;
    Shift::rule_graph(&g.name, alphabet, rg)
}

/// Images of the graph generators: `q_v`, `t_e`, `t_e^*` by index.
pub struct LpaGenerators {
    pub q: Vec<AlgebraElement>,
    pub t: Vec<AlgebraElement>,
    pub t_star: Vec<AlgebraElement>,
}

/// `q_v = p_{C(e, ω)}` for any `e` entering `v`; a source gets `sum s_e s_e^*`.
pub fn lpa_generators(g: &Graph, sh: &Shift, ring: Ring) -> Result<LpaGenerators> {
    let alg = Algebra::new(sh, ring, Flavor::B);
    let letter = |i: usize| Letter::new(0, i as u64);
    let mut q = Vec::new();
    for v in 0..g.vertices.len() {
        let outs = g.out_edges(v);
        if outs.is_empty() {
            return Err(Error::HasSink(g.vertices[v].clone()));
        }
        let ins = g.in_edges(v);
        q.push(match ins.first() {
            Some(&e) => alg.p(&sets::follower(sh, &Word(vec![letter(e)])))?,
            None => {
                let mut acc = alg.zero();
                for e in outs {
                    let s = alg.s(letter(e))?;
                    acc = alg.add(&acc, &alg.mul(&s, &alg.star(&s))?)?;
                }
                acc
            }
        });
    }
    let t: Vec<AlgebraElement> = (0..g.edges.len()).map(|e| alg.s(letter(e))).collect::<Result<_>>()?;
    let t_star = t.iter().map(|x| alg.star(x)).collect();
    Ok(LpaGenerators { q, t, t_star })
}

struct Eq<'a> {
    alg: Algebra<'a>,
}

impl Eq<'_> {
    fn check(&self, c: &mut Check, label: String, lhs: &AlgebraElement, rhs: &AlgebraElement) -> Result<()> {
        let ok = self.alg.equals(lhs, rhs)?;
        let sh = self.alg.sh;
        c.record(ok, || format!("{label}: {} != {}", fmt_element(sh, lhs), fmt_element(sh, rhs)));
        Ok(())
    }
}

/// Checks (V), (E1), (E2), (CK1), (CK2) for the generators of `lpa_generators`,
/// plus `sum_v q_v = p_X`.
pub fn verify_lpa_relations(g: &Graph, ring: Ring) -> Result<Report> {
    let sh = edge_shift(g)?;
    let gens = lpa_generators(g, &sh, ring)?;
    let alg = Algebra::new(&sh, ring, Flavor::B);
    let eq = Eq { alg };
    let mut rep = Report::new(&format!("graph relations on {}", g.name));
    rep.param("ring", ring);
    rep.param("vertices", g.vertices.len());
    rep.param("edges", g.edges.len());
    let nv = g.vertices.len();
    let ne = g.edges.len();
    let vn = |v: usize| g.vertices[v].clone();
    let en = |e: usize| g.edges[e].0.clone();

    let mut c = Check::new("V");
    for v in 0..nv {
        for w in 0..nv {
            let lhs = alg.mul(&gens.q[v], &gens.q[w])?;
            let rhs = if v == w { gens.q[v].clone() } else { alg.zero() };
            eq.check(&mut c, format!("q_{} q_{}", vn(v), vn(w)), &lhs, &rhs)?;
        }
    }
    rep.checks.push(c);

    let mut c = Check::new("E1");
    for e in 0..ne {
        let (_, s, r) = g.edges[e];
        eq.check(&mut c, format!("s({0}) {0}", en(e)), &alg.mul(&gens.q[s], &gens.t[e])?, &gens.t[e])?;
        eq.check(&mut c, format!("{0} r({0})", en(e)), &alg.mul(&gens.t[e], &gens.q[r])?, &gens.t[e])?;
    }
    rep.checks.push(c);

    let mut c = Check::new("E2");
    for e in 0..ne {
        let (_, s, r) = g.edges[e];
        eq.check(&mut c, format!("r({0}) {0}*", en(e)), &alg.mul(&gens.q[r], &gens.t_star[e])?, &gens.t_star[e])?;
        eq.check(&mut c, format!("{0}* s({0})", en(e)), &alg.mul(&gens.t_star[e], &gens.q[s])?, &gens.t_star[e])?;
    }
    rep.checks.push(c);

    let mut c = Check::new("CK1");
    for e in 0..ne {
        for f in 0..ne {
            let lhs = alg.mul(&gens.t_star[e], &gens.t[f])?;
            let rhs = if e == f { gens.q[g.edges[e].2].clone() } else { alg.zero() };
            eq.check(&mut c, format!("{}* {}", en(e), en(f)), &lhs, &rhs)?;
        }
    }
    rep.checks.push(c);

    let mut c = Check::new("CK2");
    for v in 0..nv {
        let mut acc = alg.zero();
        for e in g.out_edges(v) {
            acc = alg.add(&acc, &alg.mul(&gens.t[e], &gens.t_star[e])?)?;
        }
        eq.check(&mut c, format!("q_{}", vn(v)), &gens.q[v], &acc)?;
    }
    rep.checks.push(c);

    let mut c = Check::new("vertex sum");
    let mut acc = alg.zero();
    for q in &gens.q {
        acc = alg.add(&acc, q)?;
    }
    eq.check(&mut c, "sum q_v".into(), &acc, &alg.p(&sets::x_set(&sh))?)?;
    rep.checks.push(c);
    Ok(rep)
}

/// Out-edges of a vertex of a rule graph, when finitely many.
fn out_letters(g: &RuleGraph, v: u64) -> Option<Vec<Letter>> {
    let mut out = Vec::new();
    for f in 0..g.families.len() as u32 {
        let idx = g.indices_with_source_in(f, &FinCof::single(v));
        out.extend(idx.finite_elems()?.iter().map(|&i| Letter::new(f, i)));
    }
    Some(out)
}

/// `A' = {x : s(x) in A}` for a finite or cofinite vertex set `A`.
///
/// Finite sets use the out-edges of each vertex; a cofinite set is reached
/// from a cofinite range `R` as `R' ∪ (A \ R)'` minus `(R \ A)'`.
pub fn vertex_set_preimage(sh: &Shift, a: &FinCof) -> Result<SetExpr> {
    let g = sh.rules().ok_or_else(|| Error::UnsupportedBackend("vertex sets need a rule backend".into()))?;
    let a = a.clone().normalize(&g.vertices);
    match &a {
        FinCof::Fin(vs) => {
            let mut acc = SetExpr::empty(Flavor::B);
            for &v in vs {
                let outs = out_letters(g, v)
                    .ok_or_else(|| Error::HypothesisViolated(format!("vertex {} emits infinitely many edges", g.vertex_name(v))))?;
                for e in outs {
                    acc = sets::union(sh, &acc, &sets::cylinder(sh, &Word(vec![e])));
                }
            }
            Ok(acc)
        }
        FinCof::Cof(_) => {
            let (e, r) = cofinite_range(sh)
                .ok_or_else(|| Error::HypothesisViolated("no cofinite edge range to anchor a cofinite vertex set".into()))?;
            let base = sets::follower(sh, &Word(vec![e]));
            let extra = vertex_set_preimage(sh, &a.minus(&r).normalize(&g.vertices))?;
            let cut = vertex_set_preimage(sh, &r.minus(&a).normalize(&g.vertices))?;
            Ok(sets::difference(sh, &sets::union(sh, &base, &extra), &cut))
        }
    }
}

fn cofinite_range(sh: &Shift) -> Option<(Letter, FinCof)> {
    let g = sh.rules()?;
    for (f, fam) in g.families.iter().enumerate() {
        let mut cands: Vec<u64> = fam.overrides.keys().copied().collect();
        cands.extend(fam.indices.start..fam.indices.start + 4);
        for i in cands {
            if !fam.indices.contains(i) {
                continue;
            }
            let a = Letter::new(f as u32, i);
            let r = g.range(a);
            if !r.is_finite() {
                return Some((a, r));
            }
        }
    }
    None
}

fn fmt_vset(g: &RuleGraph, a: &FinCof) -> String {
    match a {
        FinCof::Fin(vs) => format!("{{{}}}", vs.iter().map(|&v| g.vertex_name(v)).collect::<Vec<_>>().join(",")),
        FinCof::Cof(ex) if ex.is_empty() => "G0".into(),
        FinCof::Cof(ex) => format!("G0\\{{{}}}", ex.iter().map(|&v| g.vertex_name(v)).collect::<Vec<_>>().join(",")),
    }
}

/// Relations (1)–(4) of the ultragraph algebra for `q_A = p_{A'}` and the
/// edge generators, over the first `vertex_budget` vertices, their out-edges,
/// and generalised vertices built from those in one round of unions and
/// intersections.
pub fn verify_ultragraph_relations(sh: &Shift, ring: Ring, vertex_budget: usize) -> Result<Report> {
    let g = sh.rules().ok_or_else(|| Error::UnsupportedBackend("ultragraph checks need a rule backend".into()))?;
    let alg = Algebra::new(sh, ring, Flavor::B);
    let eq = Eq { alg };
    let mut rep = Report::new(&format!("ultragraph relations on {}", sh.name));
    rep.param("ring", ring);
    rep.param("vertex_budget", vertex_budget);

    let verts: Vec<u64> = (g.vertices.start..).take_while(|&v| g.vertices.contains(v)).take(vertex_budget).collect();
    let mut edges = Vec::new();
    for &v in &verts {
        let outs = out_letters(g, v).ok_or_else(|| Error::HypothesisViolated(format!("vertex {} is not regular", g.vertex_name(v))))?;
        if outs.is_empty() {
            return Err(Error::HypothesisViolated(format!("vertex {} is not regular", g.vertex_name(v))));
        }
        edges.extend(outs);
    }
    rep.param("edges", edges.len());

    let mut pool: Vec<FinCof> = vec![FinCof::empty()];
    let push = |p: &mut Vec<FinCof>, a: FinCof| {
        let a = a.normalize(&g.vertices);
        if !p.contains(&a) {
            p.push(a);
        }
    };
    for &v in &verts {
        push(&mut pool, FinCof::single(v));
    }
    for &e in &edges {
        push(&mut pool, g.range(e));
    }
    let base = pool.clone();
    for a in &base {
        for b in &base {
            push(&mut pool, a.union(b));
            push(&mut pool, a.intersect(b));
        }
    }
    rep.param("generalised_vertices", pool.len());
    let mut q: BTreeMap<String, AlgebraElement> = BTreeMap::new();
    let mut q_of = |a: &FinCof| -> Result<AlgebraElement> {
        let a = a.clone().normalize(&g.vertices);
        let k = format!("{a:?}");
        if let Some(x) = q.get(&k) {
            return Ok(x.clone());
        }
        let x = alg.p(&vertex_set_preimage(sh, &a)?)?;
        q.insert(k, x.clone());
        Ok(x)
    };

    let mut c = Check::new("1");
    eq.check(&mut c, "q_{}".into(), &q_of(&FinCof::empty())?, &alg.zero())?;
    for a in &base {
        for b in &base {
            let (qa, qb) = (q_of(a)?, q_of(b)?);
            let qi = q_of(&a.intersect(b))?;
            let (na, nb) = (fmt_vset(g, a), fmt_vset(g, b));
            eq.check(&mut c, format!("q_{na} q_{nb}"), &alg.mul(&qa, &qb)?, &qi)?;
            let rhs = alg.sub(&alg.add(&qa, &qb)?, &qi)?;
            eq.check(&mut c, format!("q_({na} u {nb})"), &q_of(&a.union(b))?, &rhs)?;
        }
    }
    rep.checks.push(c);

    let gens: Vec<(AlgebraElement, AlgebraElement)> =
        edges.iter().map(|&e| alg.s(e).map(|s| (s.clone(), alg.star(&s)))).collect::<Result<_>>()?;
    let name = |e: Letter| sh.alphabet.letter_name(e);

    let mut c = Check::new("2");
    for (i, &e) in edges.iter().enumerate() {
        let (t, ts) = &gens[i];
        let qs = q_of(&FinCof::single(g.source(e)))?;
        let qr = q_of(&g.range(e))?;
        let n = name(e);
        eq.check(&mut c, format!("q_s({n}) {n}"), &alg.mul(&qs, t)?, t)?;
        eq.check(&mut c, format!("{n} q_r({n})"), &alg.mul(t, &qr)?, t)?;
        eq.check(&mut c, format!("q_r({n}) {n}*"), &alg.mul(&qr, ts)?, ts)?;
        eq.check(&mut c, format!("{n}* q_s({n})"), &alg.mul(ts, &qs)?, ts)?;
    }
    rep.checks.push(c);

    let mut c = Check::new("3");
    for (i, &e) in edges.iter().enumerate() {
        for (j, &f) in edges.iter().enumerate() {
            let lhs = alg.mul(&gens[i].1, &gens[j].0)?;
            let rhs = if i == j { q_of(&g.range(e))? } else { alg.zero() };
            eq.check(&mut c, format!("{}* {}", name(e), name(f)), &lhs, &rhs)?;
        }
    }
    rep.checks.push(c);

    let mut c = Check::new("4");
    for &v in &verts {
        let mut acc = alg.zero();
        for (i, &e) in edges.iter().enumerate() {
            if g.source(e) == v {
                acc = alg.add(&acc, &alg.mul(&gens[i].0, &gens[i].1)?)?;
            }
        }
        eq.check(&mut c, format!("q_{}", g.vertex_name(v)), &q_of(&FinCof::single(v))?, &acc)?;
    }
    rep.checks.push(c);

    if sets::is_unital(sh) == Unitality::Yes {
        let mut c = Check::new("top");
        let px = alg.p(&sets::x_set(sh))?;
        for &e in &edges {
            if g.range(e) == FinCof::all(&g.vertices) {
                eq.check(&mut c, format!("q_r({})", name(e)), &q_of(&g.range(e))?, &px)?;
            }
        }
        rep.checks.push(c);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn rose_and_cycle() {
        for g in [Graph::rose(2), Graph::rose(3), Graph::three_cycle()] {
            let r = verify_lpa_relations(&g, Ring::Integer).unwrap();
            assert!(r.passed(), "{}", r.to_table());
        }
        let g = Graph::rose(2);
        let sh = edge_shift(&g).unwrap();
        let gens = lpa_generators(&g, &sh, Ring::Integer).unwrap();
        let alg = Algebra::new(&sh, Ring::Integer, Flavor::B);
        assert!(alg.equals(&gens.q[0], &alg.p(&sets::x_set(&sh)).unwrap()).unwrap());
    }

    #[test]
    fn source_vertex_and_sink() {
        let g = Graph::new("src", &["u", "v"], &[("a", "u", "v"), ("b", "u", "v"), ("c", "v", "v")]).unwrap();
        let r = verify_lpa_relations(&g, Ring::Integer).unwrap();
        assert!(r.passed(), "{}", r.to_table());
        let sink = Graph::new("sink", &["u", "v"], &[("a", "u", "v")]).unwrap();
        assert!(matches!(edge_shift(&sink), Err(Error::HasSink(_))));
    }

    #[test]
    fn renewal_ultragraph() {
        let sh = fixtures::renewal();
        let r = verify_ultragraph_relations(&sh, Ring::Integer, 6).unwrap();
        assert!(r.passed(), "{}", r.to_table());
        assert!(r.check("top").unwrap().instances >= 1);
        let alg = Algebra::new(&sh, Ring::Integer, Flavor::B);
        let q3 = alg.p(&vertex_set_preimage(&sh, &FinCof::single(3)).unwrap()).unwrap();
        let q5 = alg.p(&vertex_set_preimage(&sh, &FinCof::single(5)).unwrap()).unwrap();
        assert!(alg.mul(&q3, &q5).unwrap().is_zero());
    }
}
