//! Rule-presented edge shifts: edge families with affine source maps and
//! finite or cofinite ranges.

use crate::error::{Error, Result};
use crate::fincof::{FinCof, Universe};
use crate::word::Letter;
use std::collections::BTreeMap;

/// `i -> mul * i + add`; `mul = 0` is a constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Affine {
    pub mul: u64,
    pub add: i64,
}

impl Affine {
    pub fn constant(c: u64) -> Self {
        Affine { mul: 0, add: c as i64 }
    }

    pub fn identity() -> Self {
        Affine { mul: 1, add: 0 }
    }

    pub fn apply(&self, i: u64) -> Option<u64> {
        let v = self.mul as i128 * i as i128 + self.add as i128;
        u64::try_from(v).ok()
    }

    /// All `i` with `apply(i) = v`, for injective maps.
    fn preimage(&self, v: u64) -> Option<u64> {
        let d = v as i128 - self.add as i128;
        if self.mul == 0 || d < 0 || d % self.mul as i128 != 0 {
            return None;
        }
        Some((d / self.mul as i128) as u64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RangeRule {
    Set(FinCof),
    Single(Affine),
    AllBut(Affine),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeRule {
    pub source: Affine,
    pub range: RangeRule,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyRules {
    pub indices: Universe,
    pub default: Option<EdgeRule>,
    pub overrides: BTreeMap<u64, EdgeRule>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleGraph {
    pub vertices: Universe,
    pub vertex_names: Option<Vec<String>>,
    pub families: Vec<FamilyRules>,
}

impl RuleGraph {
    pub fn new(vertices: Universe, vertex_names: Option<Vec<String>>, families: Vec<FamilyRules>) -> Result<Self> {
        let g = RuleGraph { vertices, vertex_names, families };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        for (fi, f) in self.families.iter().enumerate() {
            if f.default.is_none() {
                let n = f.indices.end.ok_or_else(|| Error::Config(format!("family {fi} is infinite and has no default rule")))?;
                for i in f.indices.start..n {
                    if !f.overrides.contains_key(&i) {
                        return Err(Error::Config(format!("edge {i} of family {fi} has no rule")));
                    }
                }
            }
            let check = |i: u64| -> Result<()> {
                let a = Letter::new(fi as u32, i);
                let s = self.source(a);
                if !self.vertices.contains(s) {
                    return Err(Error::Config(format!("edge {i} of family {fi} has source outside the vertices")));
                }
                if self.range(a).is_empty() {
                    return Err(Error::Config(format!("edge {i} of family {fi} has an empty range")));
                }
                Ok(())
            };
            for &i in f.overrides.keys() {
                check(i)?;
            }
            if f.default.is_some() {
                for i in f.indices.start..f.indices.start + 8 {
                    if f.indices.contains(i) {
                        check(i)?;
                    }
                }
            }
        }
        let mut emitting = FinCof::empty();
        for fi in 0..self.families.len() {
            let all = FinCof::all(&self.families[fi].indices);
            let img = self
                .source_image(fi as u32, &all)
                .ok_or_else(|| Error::ClosureViolation("source image is not finite or cofinite".into()))?;
            emitting = emitting.union(&img);
        }
        let sinks = FinCof::all(&self.vertices).minus(&emitting).normalize(&self.vertices);
        if !sinks.is_empty() {
            let v = sinks.iter_from(0).next().unwrap();
            return Err(Error::HasSink(self.vertex_name(v)));
        }
        Ok(())
    }

    pub fn vertex_name(&self, v: u64) -> String {
        match &self.vertex_names {
            Some(n) => n.get(v as usize).cloned().unwrap_or_else(|| v.to_string()),
            None => v.to_string(),
        }
    }

    fn rule(&self, a: Letter) -> &EdgeRule {
        let f = &self.families[a.family as usize];
        f.overrides.get(&a.index).or(f.default.as_ref()).expect("validated rule")
    }

    pub fn source(&self, a: Letter) -> u64 {
        self.rule(a).source.apply(a.index).unwrap_or(u64::MAX)
    }

    pub fn range(&self, a: Letter) -> FinCof {
        let r = match &self.rule(a).range {
            RangeRule::Set(s) => s.clone(),
            RangeRule::Single(m) => m.apply(a.index).map_or(FinCof::empty(), FinCof::single),
            RangeRule::AllBut(m) => m.apply(a.index).map_or(FinCof::Cof(Default::default()), |v| FinCof::single(v).complement()),
        };
        r.normalize(&self.vertices)
    }

    /// Indices `i` of family `f` with `s(e_i)` in `v`.
    pub fn indices_with_source_in(&self, f: u32, v: &FinCof) -> FinCof {
        let fam = &self.families[f as usize];
        let over: FinCof = FinCof::from_iter(fam.overrides.keys().copied());
        let base = match &fam.default {
            None => FinCof::empty(),
            Some(rule) => {
                let s = rule.source;
                if s.mul == 0 {
                    if s.add >= 0 && v.contains(s.add as u64) {
                        FinCof::all(&fam.indices)
                    } else {
                        FinCof::empty()
                    }
                } else {
                    match v {
                        FinCof::Fin(vs) => FinCof::from_iter(vs.iter().filter_map(|&x| s.preimage(x))),
                        FinCof::Cof(ex) => FinCof::Cof(ex.iter().filter_map(|&x| s.preimage(x)).collect()),
                    }
                }
            }
        };
        let hit = FinCof::from_iter(fam.overrides.iter().filter(|(&i, _)| v.contains(self.source(Letter::new(f, i)))).map(|(&i, _)| i));
        base.minus(&over).union(&hit).normalize(&fam.indices)
    }

    /// `{s(e_i) : i in idx}`, when it is finite or cofinite in the vertex set.
    pub fn source_image(&self, f: u32, idx: &FinCof) -> Option<FinCof> {
        let fam = &self.families[f as usize];
        let idx = idx.clone().normalize(&fam.indices);
        let mut out = FinCof::from_iter(fam.overrides.keys().filter(|i| idx.contains(**i)).map(|&i| self.source(Letter::new(f, i))));
        let over = FinCof::from_iter(fam.overrides.keys().copied());
        let rest = idx.minus(&over).normalize(&fam.indices);
        if rest.is_empty() {
            return Some(out.normalize(&self.vertices));
        }
        let s = fam.default.as_ref()?.source;
        let img = match &rest {
            FinCof::Fin(is) => FinCof::from_iter(is.iter().filter_map(|&i| s.apply(i))),
            FinCof::Cof(ex) => {
                if s.mul == 0 {
                    FinCof::single(s.add as u64)
                } else if s.mul == 1 {
                    let first = s.apply(fam.indices.start)?;
                    let mut excl: Vec<u64> = (self.vertices.start..first).collect();
                    excl.extend(ex.iter().filter_map(|&i| s.apply(i)));
                    FinCof::Cof(excl.into_iter().collect())
                } else {
                    return None;
                }
            }
        };
        out = out.union(&img);
        Some(out.normalize(&self.vertices))
    }
}
