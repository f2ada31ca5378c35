//! Pass/fail reports shared by the relation, bridge and conjugacy checkers.

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub instances: usize,
    pub skipped: usize,
    /// At most a handful of failing instances, printed.
    pub failures: Vec<String>,
    pub failed: usize,
    pub note: Option<String>,
}

impl Check {
    pub fn new(name: &str) -> Self {
        Check { name: name.to_string(), instances: 0, skipped: 0, failures: Vec::new(), failed: 0, note: None }
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < 5 {
                self.failures.push(witness());
            }
        }
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub title: String,
    /// Depths, windows and budgets the checks ran under.
    pub params: Vec<(String, String)>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: &str) -> Self {
        Report { title: title.to_string(), params: Vec::new(), checks: Vec::new() }
    }

    pub fn param(&mut self, k: &str, v: impl ToString) {
        self.params.push((k.to_string(), v.to_string()));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_table(&self) -> String {
        let mut s = format!("# {}\n", self.title);
        for (k, v) in &self.params {
            s.push_str(&format!("# {k} = {v}\n"));
        }
        let w = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
        s.push_str(&format!("{:<w$}  {:>9}  {:>7}  {:>6}  status\n", "check", "instances", "skipped", "failed"));
        for c in &self.checks {
            s.push_str(&format!(
                "{:<w$}  {:>9}  {:>7}  {:>6}  {}\n",
                c.name,
                c.instances,
                c.skipped,
                c.failed,
                if c.passed() { "pass" } else { "FAIL" }
            ));
            if let Some(n) = &c.note {
                s.push_str(&format!("    note: {n}\n"));
            }
            for f in &c.failures {
                s.push_str(&format!("    witness: {f}\n"));
            }
        }
        s
    }
}
