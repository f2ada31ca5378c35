//! Set operations checked against direct point membership on eventually
//! periodic points.

use proptest::prelude::*;
use subshift::fixtures;
use subshift::sets::{self, Flavor, SetExpr};
use subshift::shift::Shift;
use subshift::word::{Letter, Word};

fn words(sh: &Shift, n: usize, window: usize) -> Vec<Word> {
    sh.words_up_to(n, window)
}

/// Points `pre per^inf` of X with short presentations.
fn points(sh: &Shift, window: usize) -> Vec<(Word, Word)> {
    let ws = words(sh, 3, window);
    let mut out = Vec::new();
    for pre in &ws {
        for per in ws.iter().filter(|w| !w.is_empty()) {
            if sh.contains_point(pre, per) {
                out.push((pre.clone(), per.clone()));
            }
        }
    }
    out
}

fn in_c(sh: &Shift, alpha: &Word, beta: &Word, pre: &Word, per: &Word) -> bool {
    let mut w = pre.clone();
    while w.len() < beta.len() {
        w = w.concat(per);
    }
    let (head, rest) = (w.prefix(beta.len()), w.suffix_from(beta.len()));
    if head != *beta {
        return false;
    }
    // the rest of the point is rest per^inf
    sh.contains_point(&alpha.concat(&rest), per)
}

fn split_first(pre: &Word, per: &Word) -> (Letter, Word, Word) {
    match pre.first() {
        Some(a) => (a, pre.suffix_from(1), per.clone()),
        None => {
            let a = per.first().unwrap();
            let mut rot = per.suffix_from(1).letters().to_vec();
            rot.push(a);
            (a, Word::empty(), Word(rot))
        }
    }
}

#[derive(Clone, Debug)]
enum Expr {
    C(usize, usize),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Minus(Box<Expr>, Box<Expr>),
}

fn expr_strategy(nw: usize) -> impl Strategy<Value = Expr> {
    let leaf = (0..nw, 0..nw).prop_map(|(a, b)| Expr::C(a, b));
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Or(Box::new(a), Box::new(b))),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::Minus(Box::new(a), Box::new(b))),
        ]
    })
}

fn build(sh: &Shift, ws: &[Word], e: &Expr) -> SetExpr {
    match e {
        Expr::C(a, b) => sets::c_set(sh, &ws[*a % ws.len()], &ws[*b % ws.len()]).with_flavor(Flavor::U),
        Expr::And(a, b) => sets::intersect(sh, &build(sh, ws, a), &build(sh, ws, b)),
        Expr::Or(a, b) => sets::union(sh, &build(sh, ws, a), &build(sh, ws, b)),
        Expr::Minus(a, b) => sets::difference(sh, &build(sh, ws, a), &build(sh, ws, b)),
    }
}

fn member(sh: &Shift, ws: &[Word], e: &Expr, pre: &Word, per: &Word) -> bool {
    match e {
        Expr::C(a, b) => in_c(sh, &ws[*a % ws.len()], &ws[*b % ws.len()], pre, per),
        Expr::And(a, b) => member(sh, ws, a, pre, per) && member(sh, ws, b, pre, per),
        Expr::Or(a, b) => member(sh, ws, a, pre, per) || member(sh, ws, b, pre, per),
        Expr::Minus(a, b) => member(sh, ws, a, pre, per) && !member(sh, ws, b, pre, per),
    }
}

fn all_fixtures() -> Vec<(Shift, usize)> {
    vec![
        (fixtures::full_shift(), 2),
        (fixtures::golden_mean(), 2),
        (fixtures::even_shift(), 2),
        (fixtures::renewal(), 4),
        (fixtures::fan_loop(), 4),
    ]
}

fn check_expr(sh: &Shift, window: usize, e: &Expr) {
    let ws = words(sh, 2, window);
    let s = build(sh, &ws, e);
    for (pre, per) in points(sh, window) {
        assert_eq!(
            sets::contains_point(sh, &s, &pre, &per),
            member(sh, &ws, e, &pre, &per),
            "{} {:?} at {}({})^inf",
            sh.name,
            e,
            sh.fmt_word(&pre),
            sh.fmt_word(&per)
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn boolean_ops_match_points(e in expr_strategy(7), which in 0usize..5) {
        let (sh, window) = all_fixtures().swap_remove(which);
        check_expr(&sh, window, &e);
    }

    #[test]
    fn range_and_prepend_match_points(e in expr_strategy(7), which in 0usize..5, k in 0usize..7, l in 0usize..4) {
        let (sh, window) = all_fixtures().swap_remove(which);
        let ws = words(&sh, 2, window);
        let s = build(&sh, &ws, &e);
        let alpha = &ws[k % ws.len()];
        let rr = sets::relative_range(&sh, &s, alpha).unwrap();
        let letters = sh.alphabet.window(window);
        let a: Letter = letters[l % letters.len()];
        let pa = sets::prepend(&sh, a, &s).unwrap();
        for (pre, per) in points(&sh, window) {
            let shifted = alpha.concat(&pre);
            let want = sh.contains_point(&shifted, &per) && member(&sh, &ws, &e, &shifted, &per);
            prop_assert_eq!(sets::contains_point(&sh, &rr, &pre, &per), want);
            let (first, tail_pre, tail_per) = split_first(&pre, &per);
            let want = first == a && member(&sh, &ws, &e, &tail_pre, &tail_per);
            prop_assert_eq!(sets::contains_point(&sh, &pa, &pre, &per), want);
        }
    }
}

#[test]
fn canonical_forms_are_unique_on_finite_alphabets() {
    for (sh, window) in all_fixtures().into_iter().take(3) {
        let ws = words(&sh, 2, window);
        let pts = points(&sh, window);
        let mut seen: Vec<(Vec<bool>, SetExpr)> = Vec::new();
        for a in 0..ws.len() {
            for b in 0..ws.len() {
                for c in 0..ws.len() {
                    let e = Expr::Minus(Box::new(Expr::C(a, b)), Box::new(Expr::C(c, a)));
                    let s = build(&sh, &ws, &e);
                    let sig: Vec<bool> = pts.iter().map(|(p, q)| member(&sh, &ws, &e, p, q)).collect();
                    for (sig2, s2) in &seen {
                        if *sig2 == sig {
                            assert!(s.same_set(s2), "{}: {:?}", sh.name, e);
                        }
                    }
                    seen.push((sig, s));
                }
            }
        }
    }
}

#[test]
fn witness_points_lie_in_their_sets() {
    for (sh, window) in all_fixtures() {
        let ws = words(&sh, 2, window);
        for a in &ws {
            for b in &ws {
                let s = sets::c_set(&sh, a, b);
                match sets::witness_point(&sh, &s) {
                    Some((pre, per)) => {
                        assert!(sh.contains_point(&pre, &per));
                        assert!(sets::contains_point(&sh, &s, &pre, &per));
                    }
                    None => assert!(s.is_empty(), "{} {:?} {:?}", sh.name, a, b),
                }
            }
        }
    }
}
