//! Workbench configuration files (TOML): subshift definitions, block codes,
//! ring, depth and budgets. Unknown keys are rejected.

use crate::alphabet::{Alphabet, Family};
use crate::bridges::{edge_shift, Graph};
use crate::conjugacy::BlockCode;
use crate::error::{Error, Result};
use crate::fincof::{FinCof, Universe};
use crate::ring::Ring;
use crate::rules::{Affine, EdgeRule, FamilyRules, RangeRule, RuleGraph};
use crate::shift::Shift;
use crate::word::Word;
use serde::Deserialize;
use std::collections::BTreeMap;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkbenchConfig {
    pub ring: Option<String>,
    pub depth: Option<usize>,
    #[serde(default)]
    pub budgets: Budgets,
    #[serde(default)]
    pub shift: Vec<ShiftSpec>,
    #[serde(default)]
    pub code: Vec<CodeSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Budgets {
    /// Letters used from infinite alphabets.
    pub window: usize,
    pub max_len: usize,
    pub language: usize,
    pub vertex: usize,
    pub m_budget: usize,
    pub prefix_cap: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { window: 5, max_len: 3, language: 1000, vertex: 6, m_budget: 2, prefix_cap: 16 }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ShiftSpec {
    ForbiddenWords { name: String, symbols: Vec<String>, forbidden: Vec<String> },
    LabelledGraph { name: String, symbols: Vec<String>, states: usize, edges: Vec<(usize, String, usize)> },
    Graph { name: String, vertices: Vec<String>, edges: Vec<(String, String, String)> },
    UltragraphRules { name: String, vertices: VertexSpec, families: Vec<FamilySpec> },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexSpec {
    #[serde(default)]
    pub start: u64,
    pub end: Option<u64>,
    pub names: Option<Vec<String>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub name: String,
    /// Named letters for a finite family; otherwise letters are `name` plus index.
    pub symbols: Option<Vec<String>>,
    #[serde(default)]
    pub start: u64,
    pub end: Option<u64>,
    pub default: Option<RuleSpec>,
    #[serde(default)]
    pub overrides: Vec<OverrideSpec>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineSpec {
    pub mul: u64,
    pub add: i64,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum RangeSpec {
    Finite(Vec<u64>),
    Cofinite(Vec<u64>),
    Single(AffineSpec),
    AllBut(AffineSpec),
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleSpec {
    pub source: AffineSpec,
    pub range: RangeSpec,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverrideSpec {
    pub index: u64,
    pub source: AffineSpec,
    pub range: RangeSpec,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSpec {
    pub name: String,
    pub source: String,
    pub target: String,
    #[serde(default)]
    pub memory: usize,
    /// `(block, letter)` pairs.
    pub map: Vec<(String, String)>,
    /// Letter rule at coordinate 0 only.
    pub first: Option<Vec<(String, String)>>,
    pub inverse: Option<Vec<(String, String)>>,
}

impl AffineSpec {
    fn affine(&self) -> Affine {
        Affine { mul: self.mul, add: self.add }
    }
}

impl RangeSpec {
    fn rule(&self) -> RangeRule {
        match self {
            RangeSpec::Finite(v) => RangeRule::Set(FinCof::from_iter(v.iter().copied())),
            RangeSpec::Cofinite(v) => RangeRule::Set(FinCof::Cof(v.iter().copied().collect())),
            RangeSpec::Single(a) => RangeRule::Single(a.affine()),
            RangeSpec::AllBut(a) => RangeRule::AllBut(a.affine()),
        }
    }
}

impl ShiftSpec {
    pub fn name(&self) -> &str {
        match self {
            ShiftSpec::ForbiddenWords { name, .. }
            | ShiftSpec::LabelledGraph { name, .. }
            | ShiftSpec::Graph { name, .. }
            | ShiftSpec::UltragraphRules { name, .. } => name,
        }
    }

    pub fn graph(&self) -> Option<Result<Graph>> {
        match self {
            ShiftSpec::Graph { name, vertices, edges } => {
                let vs: Vec<&str> = vertices.iter().map(String::as_str).collect();
                let es: Vec<(&str, &str, &str)> = edges.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str())).collect();
                Some(Graph::new(name, &vs, &es))
            }
            _ => None,
        }
    }

    pub fn build(&self) -> Result<Shift> {
        match self {
            ShiftSpec::ForbiddenWords { name, symbols, forbidden } => {
                let syms: Vec<&str> = symbols.iter().map(String::as_str).collect();
                let f: Vec<&str> = forbidden.iter().map(String::as_str).collect();
                Shift::forbidden_words(name, &syms, &f)
            }
            ShiftSpec::LabelledGraph { name, symbols, states, edges } => {
                let syms: Vec<&str> = symbols.iter().map(String::as_str).collect();
                let es: Vec<(usize, &str, usize)> = edges.iter().map(|(a, s, b)| (*a, s.as_str(), *b)).collect();
                Shift::labelled_graph(name, &syms, *states, &es)
            }
            ShiftSpec::Graph { .. } => edge_shift(&self.graph().unwrap()?),
            ShiftSpec::UltragraphRules { name, vertices, families } => {
                let mut fams = Vec::new();
                let mut rules = Vec::new();
                for f in families {
                    let fam = match &f.symbols {
                        Some(s) => {
                            let syms: Vec<&str> = s.iter().map(String::as_str).collect();
                            Family::named(&f.name, &syms)
                        }
                        None => Family::indexed(&f.name, f.start, f.end),
                    };
                    let overrides: BTreeMap<u64, EdgeRule> =
                        f.overrides.iter().map(|o| (o.index, EdgeRule { source: o.source.affine(), range: o.range.rule() })).collect();
                    let default = f.default.as_ref().map(|d| EdgeRule { source: d.source.affine(), range: d.range.rule() });
                    rules.push(FamilyRules { indices: fam.indices, default, overrides });
                    fams.push(fam);
                }
                let g = RuleGraph::new(Universe { start: vertices.start, end: vertices.end }, vertices.names.clone(), rules)?;
                Shift::rule_graph(name, Alphabet::new(fams), g)
            }
        }
    }
}

impl CodeSpec {
    pub fn build(&self, src: &Shift, dst: &Shift) -> Result<BlockCode> {
        let pairs = |v: &[(String, String)], from: &Shift, to: &Shift| -> Result<Vec<(Word, crate::word::Letter)>> {
            v.iter().map(|(w, l)| Ok((from.parse_word(w)?, to.letter(l)?))).collect()
        };
        let map: BTreeMap<Word, _> = pairs(&self.map, src, dst)?.into_iter().collect();
        for w in map.keys() {
            if w.len() != self.memory + 1 {
                return Err(Error::Config(format!("code `{}`: block length differs from memory + 1", self.name)));
            }
        }
        let first = match &self.first {
            Some(f) => Some(pairs(f, src, dst)?.into_iter().map(|(w, b)| (w.letters()[0], b)).collect()),
            None => None,
        };
        let mut code = BlockCode { memory: self.memory, map, first, inverse: None };
        if let Some(inv) = &self.inverse {
            let map = pairs(inv, dst, src)?.into_iter().collect();
            let back_first = code.first.as_ref().map(|f: &BTreeMap<_, _>| f.iter().map(|(&a, &b)| (b, a)).collect());
            code.inverse = Some(Box::new(BlockCode { memory: 0, map, first: back_first, inverse: None }));
        }
        Ok(code)
    }
}

impl WorkbenchConfig {
    pub fn parse(src: &str) -> Result<Self> {
        toml::from_str(src).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let s = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&s)
    }

    pub fn ring(&self) -> Result<Ring> {
        Ring::parse(self.ring.as_deref().unwrap_or("Z"))
    }

    pub fn find_shift(&self, name: &str) -> Option<&ShiftSpec> {
        self.shift.iter().find(|s| s.name() == name)
    }
}
