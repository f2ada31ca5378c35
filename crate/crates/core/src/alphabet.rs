//! Letter families, parsing and printing of words.

use crate::error::{Error, Result};
use crate::fincof::Universe;
use crate::word::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    pub name: String,
    /// Explicit symbol names for a finite family; `None` for an indexed family.
    pub symbols: Option<Vec<String>>,
    pub indices: Universe,
}

impl Family {
    pub fn named(name: &str, symbols: &[&str]) -> Self {
        Family {
            name: name.to_string(),
            symbols: Some(symbols.iter().map(|s| s.to_string()).collect()),
            indices: Universe::finite(symbols.len() as u64),
        }
    }

    pub fn indexed(name: &str, start: u64, end: Option<u64>) -> Self {
        Family { name: name.to_string(), symbols: None, indices: Universe { start, end } }
    }

    pub fn is_infinite(&self) -> bool {
        self.indices.end.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    pub families: Vec<Family>,
}

impl Alphabet {
    pub fn new(families: Vec<Family>) -> Self {
        Alphabet { families }
    }

    pub fn is_finite(&self) -> bool {
        self.families.iter().all(|f| !f.is_infinite())
    }

    pub fn family(&self, a: Letter) -> Option<&Family> {
        self.families.get(a.family as usize)
    }

    pub fn contains(&self, a: Letter) -> bool {
        self.family(a).is_some_and(|f| f.indices.contains(a.index))
    }

    pub fn check(&self, w: &Word) -> Result<()> {
        for &a in w.letters() {
            if !self.contains(a) {
                return Err(Error::UnknownLetter(self.letter_name(a)));
            }
        }
        Ok(())
    }

    /// All letters of a finite alphabet in canonical order.
    pub fn finite_letters(&self) -> Option<Vec<Letter>> {
        if !self.is_finite() {
            return None;
        }
        let mut out = Vec::new();
        for (fi, f) in self.families.iter().enumerate() {
            for i in f.indices.start..f.indices.end.unwrap() {
                out.push(Letter::new(fi as u32, i));
            }
        }
        Some(out)
    }

    /// `n` letters taken round-robin by rank within each family, returned in
    /// canonical order.
    pub fn window(&self, n: usize) -> Vec<Letter> {
        let mut out = Vec::new();
        let mut k = 0;
        while out.len() < n {
            let mut any = false;
            for (fi, f) in self.families.iter().enumerate() {
                let i = f.indices.start + k;
                if out.len() < n && f.indices.contains(i) {
                    out.push(Letter::new(fi as u32, i));
                    any = true;
                }
            }
            if !any {
                break;
            }
            k += 1;
        }
        out.sort();
        out
    }

    pub fn letter_name(&self, a: Letter) -> String {
        match self.family(a) {
            Some(f) => match &f.symbols {
                Some(s) => s.get(a.index as usize).cloned().unwrap_or_else(|| format!("{}?{}", f.name, a.index)),
                None => format!("{}{}", f.name, a.index),
            },
            None => format!("?{}:{}", a.family, a.index),
        }
    }

    fn single_char_symbols(&self) -> bool {
        self.families.iter().all(|f| f.symbols.as_ref().is_some_and(|s| s.iter().all(|x| x.chars().count() == 1)))
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return String::new();
        }
        let names: Vec<String> = w.letters().iter().map(|&a| self.letter_name(a)).collect();
        if self.single_char_symbols() {
            names.concat()
        } else {
            names.join(".")
        }
    }

    /// Parses a word. Tokens may be separated by `.` or whitespace, or written
    /// adjacently when unambiguous; `ω` or an empty string denotes the empty word.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() || s == "ω" || s == "_" {
            return Ok(Word::empty());
        }
        let mut out = Vec::new();
        for chunk in s.split(|c: char| c == '.' || c.is_whitespace()).filter(|c| !c.is_empty()) {
            let mut rest = chunk;
            while !rest.is_empty() {
                let (a, len) = self.match_token(rest).ok_or_else(|| Error::UnknownLetter(rest.to_string()))?;
                out.push(a);
                rest = &rest[len..];
            }
        }
        Ok(Word(out))
    }

    fn match_token(&self, s: &str) -> Option<(Letter, usize)> {
        let mut best: Option<(Letter, usize)> = None;
        for (fi, f) in self.families.iter().enumerate() {
            match &f.symbols {
                Some(syms) => {
                    for (i, sym) in syms.iter().enumerate() {
                        if s.starts_with(sym.as_str()) && best.is_none_or(|b| sym.len() > b.1) {
                            best = Some((Letter::new(fi as u32, i as u64), sym.len()));
                        }
                    }
                }
                None => {
                    if let Some(rest) = s.strip_prefix(f.name.as_str()) {
                        let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
                        if !digits.is_empty() {
                            let len = f.name.len() + digits.len();
                            if let Ok(idx) = digits.parse::<u64>() {
                                if f.indices.contains(idx) && best.is_none_or(|b| len > b.1) {
                                    best = Some((Letter::new(fi as u32, idx), len));
                                }
                            }
                        }
                    }
                }
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let a = Alphabet::new(vec![Family::named("", &["0", "1"])]);
        let w = a.parse_word("0110").unwrap();
        assert_eq!(w.len(), 4);
        assert_eq!(a.format_word(&w), "0110");
        let b = Alphabet::new(vec![Family::indexed("e", 1, None), Family::named("g", &["f"])]);
        let w = b.parse_word("e3.e2 f").unwrap();
        assert_eq!(b.format_word(&w), "e3.e2.f");
        assert!(b.parse_word("e0").is_err());
    }
}
