//! Small named subshifts used by tests, examples and the CLI.

use crate::alphabet::{Alphabet, Family};
use crate::fincof::{FinCof, Universe};
use crate::rules::{Affine, EdgeRule, FamilyRules, RangeRule, RuleGraph};
use crate::shift::Shift;
use std::collections::BTreeMap;

pub fn full_shift() -> Shift {
    Shift::forbidden_words("full-2-shift", &["0", "1"], &[]).unwrap()
}

pub fn golden_mean() -> Shift {
    Shift::forbidden_words("golden-mean", &["0", "1"], &["11"]).unwrap()
}

/// The golden mean shift with the roles of the letters exchanged.
pub fn golden_mean_00() -> Shift {
    Shift::forbidden_words("golden-mean-00", &["0", "1"], &["00"]).unwrap()
}

/// Even number of 0s between consecutive 1s.
pub fn even_shift() -> Shift {
    Shift::labelled_graph("even", &["0", "1"], 2, &[(0, "1", 0), (0, "0", 1), (1, "0", 0)]).unwrap()
}

/// Vertices `1, 2, ...`; edge `e_i` leaves `i`, enters `i-1`, and `e_1` enters every vertex.
pub fn renewal() -> Shift {
    let alphabet = Alphabet::new(vec![Family::indexed("e", 1, None)]);
    let mut overrides = BTreeMap::new();
    overrides.insert(1, EdgeRule { source: Affine::constant(1), range: RangeRule::Set(FinCof::Cof(Default::default())) });
    let fam = FamilyRules {
        indices: Universe::from(1),
        default: Some(EdgeRule { source: Affine::identity(), range: RangeRule::Single(Affine { mul: 1, add: -1 }) }),
        overrides,
    };
    let g = RuleGraph::new(Universe::from(1), None, vec![fam]).unwrap();
    Shift::rule_graph("renewal", alphabet, g).unwrap()
}

/// Two vertices `v`, `w`; edges `e_n : v -> w` for all `n` and a loop `f` at `w`.
pub fn fan_loop() -> Shift {
    let alphabet = Alphabet::new(vec![Family::indexed("e", 0, None), Family::named("", &["f"])]);
    let w = RangeRule::Set(FinCof::single(1));
    let e = FamilyRules {
        indices: Universe::from(0),
        default: Some(EdgeRule { source: Affine::constant(0), range: w.clone() }),
        overrides: BTreeMap::new(),
    };
    let mut fo = BTreeMap::new();
    fo.insert(0, EdgeRule { source: Affine::constant(1), range: w });
    let f = FamilyRules { indices: Universe::finite(1), default: None, overrides: fo };
    let g = RuleGraph::new(Universe::finite(2), Some(vec!["v".into(), "w".into()]), vec![e, f]).unwrap();
    Shift::rule_graph("fan-loop", alphabet, g).unwrap()
}

pub fn by_name(name: &str) -> Option<Shift> {
    Some(match name {
        "full" | "full-2-shift" => full_shift(),
        "golden" | "golden-mean" => golden_mean(),
        "golden-00" | "golden-mean-00" => golden_mean_00(),
        "even" => even_shift(),
        "renewal" => renewal(),
        "fan-loop" => fan_loop(),
        _ => return None,
    })
}

pub const NAMES: &[&str] = &["full-2-shift", "golden-mean", "even", "renewal", "fan-loop"];
