//! Finite and cofinite subsets of an interval of naturals.

use std::collections::BTreeSet;

/// Half-open interval `[start, end)`; `end = None` means unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Universe {
    pub start: u64,
    pub end: Option<u64>,
}

impl Universe {
    pub fn finite(n: u64) -> Self {
        Universe { start: 0, end: Some(n) }
    }

    pub fn from(start: u64) -> Self {
        Universe { start, end: None }
    }

    pub fn contains(&self, x: u64) -> bool {
        x >= self.start && self.end.is_none_or(|e| x < e)
    }

    pub fn is_finite(&self) -> bool {
        self.end.is_some()
    }
}

/// A finite set, or the complement of a finite set, relative to some universe.
/// Values are normalized against their universe: over a finite universe only
/// `Fin` occurs, and excluded elements of `Cof` always lie inside the universe.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FinCof {
    Fin(BTreeSet<u64>),
    Cof(BTreeSet<u64>),
}

impl FinCof {
    pub fn empty() -> Self {
        FinCof::Fin(BTreeSet::new())
    }

    pub fn all(u: &Universe) -> Self {
        FinCof::Cof(BTreeSet::new()).normalize(u)
    }

    pub fn single(x: u64) -> Self {
        FinCof::Fin([x].into_iter().collect())
    }

    pub fn from_iter<I: IntoIterator<Item = u64>>(it: I) -> Self {
        FinCof::Fin(it.into_iter().collect())
    }

    pub fn normalize(self, u: &Universe) -> Self {
        match self {
            FinCof::Fin(s) => FinCof::Fin(s.into_iter().filter(|x| u.contains(*x)).collect()),
            FinCof::Cof(e) => {
                let e: BTreeSet<u64> = e.into_iter().filter(|x| u.contains(*x)).collect();
                match u.end {
                    Some(end) => FinCof::Fin((u.start..end).filter(|x| !e.contains(x)).collect()),
                    None => FinCof::Cof(e),
                }
            }
        }
    }

    pub fn contains(&self, x: u64) -> bool {
        match self {
            FinCof::Fin(s) => s.contains(&x),
            FinCof::Cof(e) => !e.contains(&x),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, FinCof::Fin(s) if s.is_empty())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, FinCof::Fin(_))
    }

    pub fn finite_elems(&self) -> Option<&BTreeSet<u64>> {
        match self {
            FinCof::Fin(s) => Some(s),
            FinCof::Cof(_) => None,
        }
    }

    pub fn complement(&self) -> Self {
        match self {
            FinCof::Fin(s) => FinCof::Cof(s.clone()),
            FinCof::Cof(e) => FinCof::Fin(e.clone()),
        }
    }

    pub fn union(&self, o: &Self) -> Self {
        use FinCof::*;
        match (self, o) {
            (Fin(a), Fin(b)) => Fin(a.union(b).copied().collect()),
            (Cof(a), Cof(b)) => Cof(a.intersection(b).copied().collect()),
            (Fin(a), Cof(b)) | (Cof(b), Fin(a)) => Cof(b.difference(a).copied().collect()),
        }
    }

    pub fn intersect(&self, o: &Self) -> Self {
        use FinCof::*;
        match (self, o) {
            (Fin(a), Fin(b)) => Fin(a.intersection(b).copied().collect()),
            (Cof(a), Cof(b)) => Cof(a.union(b).copied().collect()),
            (Fin(a), Cof(b)) | (Cof(b), Fin(a)) => Fin(a.difference(b).copied().collect()),
        }
    }

    pub fn minus(&self, o: &Self) -> Self {
        self.intersect(&o.complement())
    }

    pub fn is_subset(&self, o: &Self) -> bool {
        self.minus(o).is_empty()
    }

    /// Ascending iterator; unbounded for `Cof` over an infinite universe.
    pub fn iter_from(&self, start: u64) -> Box<dyn Iterator<Item = u64> + '_> {
        match self {
            FinCof::Fin(s) => Box::new(s.iter().copied().filter(move |x| *x >= start)),
            FinCof::Cof(e) => Box::new((start..).filter(move |x| !e.contains(x))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_universe_normalizes_to_fin() {
        let u = Universe::finite(4);
        let s = FinCof::Cof([1].into_iter().collect()).normalize(&u);
        assert_eq!(s, FinCof::from_iter([0, 2, 3]));
    }

    #[test]
    fn cofinite_algebra() {
        let u = Universe::from(1);
        let a = FinCof::Cof([2].into_iter().collect());
        let b = FinCof::from_iter([2, 5]);
        assert_eq!(a.union(&b).normalize(&u), FinCof::all(&u));
        assert_eq!(a.intersect(&b), FinCof::single(5));
        assert!(FinCof::single(2).is_subset(&b));
        assert!(!a.is_subset(&b));
    }
}
