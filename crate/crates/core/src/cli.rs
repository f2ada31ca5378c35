//! Command-line front end. `run` returns the exit code and both output
//! streams so the binary and the tests share one code path.

use crate::algebra::Algebra;
use crate::bridges::{self, Graph};
use crate::config::{Budgets, WorkbenchConfig};
use crate::conjugacy::{self, BlockCode};
use crate::display::{fmt_element, fmt_set};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::otw::OTWPoint;
use crate::parse;
use crate::relations;
use crate::report::Report;
use crate::ring::Ring;
use crate::sets::{self, Flavor};
use crate::shift::Shift;
use crate::stone::{self, Level, PiStatus};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::ffi::OsString;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(name = "subshift", version, about = "Exact computations with subshift algebras and their Stone duals")]
pub struct Cli {
    /// Workbench configuration (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Fixture, builtin graph or config shift name.
    #[arg(long, short, global = true, default_value = "golden-mean")]
    pub shift: String,
    /// Z, Q or F<p>; overrides the config.
    #[arg(long, global = true)]
    pub ring: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Depth used by stone and conj; overrides the config.
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Letters taken from infinite alphabets; overrides the config.
    #[arg(long, global = true)]
    pub window: Option<usize>,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// List the builtin shifts and those in the config.
    Shifts,
    /// Language membership and enumeration.
    #[command(subcommand)]
    Lang(LangCmd),
    /// Set expressions in the Boolean algebra.
    #[command(subcommand)]
    Set(SetCmd),
    /// Algebra expressions in normal form.
    #[command(subcommand)]
    Alg(AlgCmd),
    /// Atoms at a finite depth and their fibers over points.
    #[command(subcommand)]
    Stone(StoneCmd),
    /// Run the relation suite on pools of sets C(a, b).
    Relations {
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Check the graph or ultragraph relations.
    Lpa {
        /// Vertex budget for ultragraph pools.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Block codes between shifts.
    #[command(subcommand)]
    Conj(ConjCmd),
}

#[derive(Subcommand, Debug)]
pub enum LangCmd {
    /// Whether a word is in the language.
    Member { word: String },
    /// Words of length n.
    Enum {
        n: usize,
        #[arg(long)]
        budget: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum SetCmd {
    /// Canonical form of a set expression.
    Eval {
        expr: String,
        /// Read in the top-free algebra.
        #[arg(long)]
        top_free: bool,
    },
    Eq {
        a: String,
        b: String,
        #[arg(long)]
        top_free: bool,
    },
    /// Whether a point lies in a set.
    Contains { expr: String, point: String },
}

#[derive(Subcommand, Debug)]
pub enum AlgCmd {
    /// Normal form of an algebra expression.
    Eval {
        expr: String,
        #[arg(long)]
        top_free: bool,
    },
    Eq {
        a: String,
        b: String,
        #[arg(long)]
        top_free: bool,
    },
    /// Homogeneous components by degree.
    Degrees {
        expr: String,
        #[arg(long)]
        top_free: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum StoneCmd {
    /// Atoms of the canonical level with their forced prefixes.
    Atoms {
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Atoms whose forced prefix is compatible with a point.
    Fiber {
        #[arg(long)]
        point: String,
        #[arg(long)]
        cap: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum ConjCmd {
    /// Necessary conditions for a code to induce a conjugacy.
    Verify {
        /// `swap`, `twist`, `identity` or a config code.
        #[arg(long)]
        code: String,
        #[arg(long)]
        m_budget: Option<usize>,
    },
    /// Image of a word under a code.
    Apply {
        #[arg(long)]
        code: String,
        word: String,
    },
}

/// Exit code with captured output.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok((ok, stdout)) => Outcome { code: if ok { 0 } else { 1 }, stdout, stderr: String::new() },
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

struct Ctx {
    cfg: WorkbenchConfig,
    ring: Ring,
    depth: usize,
    budgets: Budgets,
    format: Format,
}

impl Ctx {
    fn shift(&self, name: &str) -> Result<Shift> {
        if let Some(s) = self.cfg.find_shift(name) {
            return s.build();
        }
        if let Some(sh) = fixtures::by_name(name) {
            return Ok(sh);
        }
        match builtin_graph(name) {
            Some(g) => bridges::edge_shift(&g),
            None => Err(Error::Config(format!("unknown shift `{name}`"))),
        }
    }

    fn graph(&self, name: &str) -> Option<Result<Graph>> {
        match self.cfg.find_shift(name) {
            Some(s) => s.graph(),
            None => builtin_graph(name).map(Ok),
        }
    }

    fn window(&self, sh: &Shift) -> usize {
        if sh.is_finite_alphabet() {
            usize::MAX
        } else {
            self.budgets.window
        }
    }

    fn header(&self, sh: &Shift, extra: &[(&str, String)]) -> Vec<(String, String)> {
        let mut h = vec![("shift".to_string(), sh.name.clone()), ("ring".to_string(), self.ring.to_string())];
        if !sh.is_finite_alphabet() {
            h.push(("window".into(), self.budgets.window.to_string()));
        }
        h.extend(extra.iter().map(|(k, v)| (k.to_string(), v.clone())));
        h
    }

    fn emit(&self, header: Vec<(String, String)>, table: String, data: Value) -> String {
        match self.format {
            Format::Json => {
                let params: serde_json::Map<String, Value> = header.into_iter().map(|(k, v)| (k, Value::String(v))).collect();
                let mut out = serde_json::to_string_pretty(&json!({ "params": params, "result": data })).unwrap();
                out.push('\n');
                out
            }
            _ => {
                let mut s: String = header.iter().map(|(k, v)| format!("# {k} = {v}\n")).collect();
                s.push_str(&table);
                s
            }
        }
    }

    fn emit_report(&self, rep: &Report) -> String {
        match self.format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(rep).unwrap();
                s.push('\n');
                s
            }
            _ => rep.to_table(),
        }
    }
}

fn builtin_graph(name: &str) -> Option<Graph> {
    match name {
        "rose-2" => Some(Graph::rose(2)),
        "rose-1" => Some(Graph::rose(1)),
        "3-cycle" => Some(Graph::three_cycle()),
        _ => None,
    }
}

fn flavor(top_free: bool) -> Flavor {
    if top_free {
        Flavor::B
    } else {
        Flavor::U
    }
}

fn execute(cli: &Cli) -> Result<(bool, String)> {
    let cfg = match &cli.config {
        Some(p) => WorkbenchConfig::load(p)?,
        None => WorkbenchConfig::default(),
    };
    let ring = match &cli.ring {
        Some(r) => Ring::parse(r)?,
        None => cfg.ring()?,
    };
    let mut budgets = cfg.budgets.clone();
    if let Some(w) = cli.window {
        budgets.window = w;
    }
    let depth = cli.depth.or(cfg.depth).unwrap_or(3);
    let ctx = Ctx { cfg, ring, depth, budgets, format: cli.format };
    if cli.format == Format::Dot && !matches!(cli.cmd, Cmd::Lpa { .. } | Cmd::Stone(StoneCmd::Atoms { .. }) | Cmd::Shifts) {
        return Err(Error::Invalid("dot output is available for `lpa`, `stone atoms` and `shifts`".into()));
    }
    match &cli.cmd {
        Cmd::Shifts => cmd_shifts(&ctx, &cli.shift),
        Cmd::Lang(c) => cmd_lang(&ctx, &ctx.shift(&cli.shift)?, c),
        Cmd::Set(c) => cmd_set(&ctx, &ctx.shift(&cli.shift)?, c),
        Cmd::Alg(c) => cmd_alg(&ctx, &ctx.shift(&cli.shift)?, c),
        Cmd::Stone(c) => cmd_stone(&ctx, &ctx.shift(&cli.shift)?, c),
        Cmd::Relations { max_len } => {
            let sh = ctx.shift(&cli.shift)?;
            let l = max_len.unwrap_or(ctx.budgets.max_len);
            let rep = relations::relation_suite(&sh, ctx.ring, l, ctx.budgets.window)?;
            Ok((rep.passed(), ctx.emit_report(&rep)))
        }
        Cmd::Lpa { budget } => cmd_lpa(&ctx, &cli.shift, *budget),
        Cmd::Conj(c) => cmd_conj(&ctx, &cli.shift, c),
    }
}

fn cmd_shifts(ctx: &Ctx, current: &str) -> Result<(bool, String)> {
    if ctx.format == Format::Dot {
        let g = ctx.graph(current).ok_or_else(|| Error::Invalid(format!("`{current}` is not a graph")))??;
        return Ok((true, g.to_dot()));
    }
    let mut names: Vec<String> = fixtures::NAMES.iter().map(|s| s.to_string()).collect();
    names.extend(["golden-mean-00", "rose-2", "3-cycle"].iter().map(|s| s.to_string()));
    names.extend(ctx.cfg.shift.iter().map(|s| s.name().to_string()));
    let mut rows = Vec::new();
    let mut table = String::new();
    for n in &names {
        let sh = ctx.shift(n)?;
        let d = sh.describe();
        table.push_str(&format!("{n:<16}  {d}\n"));
        rows.push(json!({ "name": n, "description": d }));
    }
    Ok((true, ctx.emit(vec![], table, Value::Array(rows))))
}

fn cmd_lang(ctx: &Ctx, sh: &Shift, c: &LangCmd) -> Result<(bool, String)> {
    match c {
        LangCmd::Member { word } => {
            let w = sh.parse_word(word)?;
            let m = sh.is_in_language(&w)?;
            Ok((true, ctx.emit(ctx.header(sh, &[]), format!("{m}\n"), json!({ "word": sh.fmt_word(&w), "member": m }))))
        }
        LangCmd::Enum { n, budget } => {
            let b = budget.unwrap_or(ctx.budgets.language);
            let (ws, truncated) = if sh.is_finite_alphabet() {
                sh.enumerate_language(*n, b)
            } else {
                let mut ws: Vec<_> = sh.words_up_to(*n, ctx.budgets.window).into_iter().filter(|w| w.len() == *n).collect();
                let t = ws.len() > b;
                ws.truncate(b);
                (ws, t)
            };
            let words: Vec<String> = ws.iter().map(|w| sh.fmt_word(w)).collect();
            let mut table: String = words.iter().map(|w| format!("{w}\n")).collect();
            table.push_str(&format!("# count = {}{}\n", words.len(), if truncated { " (budget reached)" } else { "" }));
            let h = ctx.header(sh, &[("length", n.to_string()), ("budget", b.to_string())]);
            Ok((true, ctx.emit(h, table, json!({ "words": words, "truncated": truncated }))))
        }
    }
}

fn point_membership(sh: &Shift, a: &sets::SetExpr, p: &OTWPoint) -> bool {
    match p {
        OTWPoint::Infinite { pre, per } => sets::contains_point(sh, a, pre, per),
        // finite sequences are not points of X
        _ => false,
    }
}

fn cmd_set(ctx: &Ctx, sh: &Shift, c: &SetCmd) -> Result<(bool, String)> {
    match c {
        SetCmd::Eval { expr, top_free } => {
            let a = parse::parse_set(sh, expr, flavor(*top_free))?;
            let s = fmt_set(sh, &a);
            let reg = sets::is_regular(sh, &a);
            let table = format!("{s}\n# empty = {}, regular = {reg}\n", a.is_empty());
            Ok((true, ctx.emit(ctx.header(sh, &[]), table, json!({ "set": s, "empty": a.is_empty(), "regular": reg }))))
        }
        SetCmd::Eq { a, b, top_free } => {
            let x = parse::parse_set(sh, a, flavor(*top_free))?;
            let y = parse::parse_set(sh, b, flavor(*top_free))?;
            let eq = x.same_set(&y);
            Ok((true, ctx.emit(ctx.header(sh, &[]), format!("{eq}\n"), json!({ "equal": eq }))))
        }
        SetCmd::Contains { expr, point } => {
            let a = parse::parse_set(sh, expr, Flavor::U)?;
            let p = parse::parse_point(sh, point)?;
            let m = point_membership(sh, &a, &p);
            Ok((true, ctx.emit(ctx.header(sh, &[]), format!("{m}\n"), json!({ "point": p.fmt(sh), "member": m }))))
        }
    }
}

fn cmd_alg(ctx: &Ctx, sh: &Shift, c: &AlgCmd) -> Result<(bool, String)> {
    match c {
        AlgCmd::Eval { expr, top_free } => {
            let alg = Algebra::new(sh, ctx.ring, flavor(*top_free));
            let x = parse::parse_element(&alg, expr)?;
            let s = fmt_element(sh, &x);
            Ok((true, ctx.emit(ctx.header(sh, &[]), format!("{s}\n"), json!({ "element": s, "degrees": x.degrees() }))))
        }
        AlgCmd::Eq { a, b, top_free } => {
            let alg = Algebra::new(sh, ctx.ring, flavor(*top_free));
            let x = parse::parse_element(&alg, a)?;
            let y = parse::parse_element(&alg, b)?;
            let eq = alg.equals(&x, &y)?;
            Ok((true, ctx.emit(ctx.header(sh, &[]), format!("{eq}\n"), json!({ "equal": eq }))))
        }
        AlgCmd::Degrees { expr, top_free } => {
            let alg = Algebra::new(sh, ctx.ring, flavor(*top_free));
            let x = parse::parse_element(&alg, expr)?;
            let parts = alg.degree_decompose(&x);
            let mut table = String::new();
            let mut rows = Vec::new();
            for (d, y) in &parts {
                let s = fmt_element(sh, y);
                table.push_str(&format!("{d:>3}  {s}\n"));
                rows.push(json!({ "degree": d, "component": s }));
            }
            Ok((true, ctx.emit(ctx.header(sh, &[]), table, Value::Array(rows))))
        }
    }
}

fn status_name(st: PiStatus) -> &'static str {
    match st {
        PiStatus::Truncated => "truncated",
        PiStatus::Exact => "exact",
        PiStatus::Zero => "zero",
    }
}

fn atoms_dot(sh: &Shift, level: &Level, cap: usize) -> String {
    let mut s = String::from("digraph atoms {\n  rankdir=LR;\n  node [shape=box];\n  \"p\" [label=\"\", shape=point];\n");
    let mut seen = std::collections::BTreeSet::new();
    for (i, a) in level.atoms.iter().enumerate() {
        let (p, st) = stone::pi(sh, a, level.window, cap);
        let mut parent = "p".to_string();
        for k in 1..=p.len() {
            let id = format!("p{}", sh.fmt_word(&p.prefix(k)));
            if seen.insert(id.clone()) {
                let last = sh.fmt_word(&p.slice(k, k));
                s.push_str(&format!("  \"{id}\" [label=\"\", shape=point];\n  \"{parent}\" -> \"{id}\" [label=\"{last}\"];\n"));
            }
            parent = id;
        }
        let label = fmt_set(sh, a).replace('"', "\\\"");
        s.push_str(&format!("  \"a{i}\" [label=\"{i}: {label} ({})\"];\n  \"{parent}\" -> \"a{i}\" [style=dashed];\n", status_name(st)));
    }
    s.push_str("}\n");
    s
}

fn cmd_stone(ctx: &Ctx, sh: &Shift, c: &StoneCmd) -> Result<(bool, String)> {
    let window = ctx.window(sh);
    let level = Level::canonical(sh, ctx.depth, window);
    match c {
        StoneCmd::Atoms { cap } => {
            let cap = cap.unwrap_or(ctx.budgets.prefix_cap);
            if ctx.format == Format::Dot {
                return Ok((true, atoms_dot(sh, &level, cap)));
            }
            let mut table = String::new();
            let mut rows = Vec::new();
            for (i, a) in level.atoms.iter().enumerate() {
                let (p, st) = stone::pi(sh, a, window, cap);
                let (set, pre) = (fmt_set(sh, a), sh.fmt_word(&p));
                table.push_str(&format!("{i:>3}  {set}  prefix {pre} ({})\n", status_name(st)));
                rows.push(json!({ "atom": set, "prefix": pre, "status": status_name(st) }));
            }
            table.push_str(&format!("# count = {}\n", level.atoms.len()));
            let h = ctx.header(sh, &[("depth", ctx.depth.to_string()), ("prefix_cap", cap.to_string())]);
            Ok((true, ctx.emit(h, table, Value::Array(rows))))
        }
        StoneCmd::Fiber { point, cap } => {
            let cap = cap.unwrap_or(ctx.budgets.prefix_cap);
            let x = parse::parse_point(sh, point)?;
            let fib = stone::cover_fiber(sh, &level, &x, cap);
            let mut table = String::new();
            let mut rows = Vec::new();
            for &i in &fib {
                let set = fmt_set(sh, &level.atoms[i]);
                table.push_str(&format!("{i:>3}  {set}\n"));
                rows.push(json!({ "index": i, "atom": set }));
            }
            table.push_str(&format!("# count = {}\n", fib.len()));
            let h = ctx.header(sh, &[("point", x.fmt(sh)), ("depth", ctx.depth.to_string()), ("prefix_cap", cap.to_string())]);
            Ok((true, ctx.emit(h, table, json!({ "count": fib.len(), "atoms": rows }))))
        }
    }
}

fn cmd_lpa(ctx: &Ctx, name: &str, budget: Option<usize>) -> Result<(bool, String)> {
    if let Some(g) = ctx.graph(name) {
        let g = g?;
        if ctx.format == Format::Dot {
            return Ok((true, g.to_dot()));
        }
        let rep = bridges::verify_lpa_relations(&g, ctx.ring)?;
        return Ok((rep.passed(), ctx.emit_report(&rep)));
    }
    if ctx.format == Format::Dot {
        return Err(Error::Invalid(format!("`{name}` is not a graph")));
    }
    let sh = ctx.shift(name)?;
    if sh.rules().is_none() {
        return Err(Error::UnsupportedBackend(format!("`{name}` has no graph or ultragraph presentation")));
    }
    let rep = bridges::verify_ultragraph_relations(&sh, ctx.ring, budget.unwrap_or(ctx.budgets.vertex))?;
    Ok((rep.passed(), ctx.emit_report(&rep)))
}

/// Builtin or config code with its source and target shifts.
fn resolve_code(ctx: &Ctx, shift: &str, name: &str) -> Result<(Shift, Shift, BlockCode)> {
    match name {
        "swap" => Ok((fixtures::golden_mean(), fixtures::golden_mean_00(), conjugacy::swap_code())),
        "twist" => Ok((fixtures::full_shift(), fixtures::full_shift(), conjugacy::first_letter_twist())),
        "identity" => {
            let sh = ctx.shift(shift)?;
            if !sh.is_finite_alphabet() {
                return Err(Error::UnsupportedBackend("codes need a finite alphabet".into()));
            }
            let ls: Vec<_> = sh.alphabet.window(usize::MAX).into_iter().map(|a| (a, a)).collect();
            let id = BlockCode::letters(&ls);
            Ok((sh.clone(), sh, id.clone().with_inverse(id)))
        }
        _ => {
            let spec = ctx.cfg.code.iter().find(|c| c.name == name).ok_or_else(|| Error::Config(format!("unknown code `{name}`")))?;
            let src = ctx.shift(&spec.source)?;
            let dst = ctx.shift(&spec.target)?;
            let h = spec.build(&src, &dst)?;
            Ok((src, dst, h))
        }
    }
}

fn cmd_conj(ctx: &Ctx, shift: &str, c: &ConjCmd) -> Result<(bool, String)> {
    match c {
        ConjCmd::Verify { code, m_budget } => {
            let (src, dst, h) = resolve_code(ctx, shift, code)?;
            let m = m_budget.unwrap_or(ctx.budgets.m_budget);
            let rep = conjugacy::verify_conjugacy(&src, &dst, &h, ctx.depth, m, ctx.ring)?;
            Ok((rep.passed(), ctx.emit_report(&rep)))
        }
        ConjCmd::Apply { code, word } => {
            let (src, dst, h) = resolve_code(ctx, shift, code)?;
            let w = src.parse_word(word)?;
            let img = dst.fmt_word(&conjugacy::apply_code(&src, &h, &w)?);
            let hd = vec![("source".to_string(), src.name.clone()), ("target".to_string(), dst.name.clone())];
            Ok((true, ctx.emit(hd, format!("{img}\n"), json!({ "image": img }))))
        }
    }
}
