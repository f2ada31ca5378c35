use subshift::algebra::Algebra;
use subshift::cli::run;
use subshift::display::{fmt_element, fmt_set};
use subshift::fixtures;
use subshift::parse::{parse_element, parse_set};
use subshift::ring::Ring;
use subshift::sets::Flavor;

fn cli(args: &[&str]) -> subshift::cli::Outcome {
    run(std::iter::once("subshift").chain(args.iter().copied()))
}

fn body(out: &str) -> Vec<&str> {
    out.lines().filter(|l| !l.starts_with('#')).collect()
}

#[test]
fn compression_of_a_letter() {
    let o = cli(&["alg", "eval", "st(0)*s(0)"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    // F(0) is all of X on the golden mean
    assert_eq!(body(&o.stdout), vec!["1"]);
    let o = cli(&["alg", "eval", "st(1)*s(1)"]);
    assert_eq!(body(&o.stdout), vec!["p(C(1,_))"]);
    let o = cli(&["alg", "eq", "st(1)*s(1)", "p(F(1))"]);
    assert_eq!(body(&o.stdout), vec!["true"]);
}

#[test]
fn headers_echo_depth() {
    let o = cli(&["--shift", "even", "stone", "fiber", "--point", "inf(;0)", "--depth", "3"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.contains("# depth = 3"));
    assert!(o.stdout.contains("# count = 3"));
    let o = cli(&["--shift", "golden-mean", "stone", "fiber", "--point", "inf(;0)"]);
    assert!(o.stdout.contains("# count = 1"));
}

#[test]
fn relation_suite_exit_codes() {
    let o = cli(&["relations", "--max-len", "3"]);
    assert_eq!(o.code, 0);
    assert!(!o.stdout.contains("FAIL"));
    let o = cli(&["conj", "verify", "--code", "twist"]);
    assert_eq!(o.code, 1);
    assert!(o.stdout.contains("witness:"));
    let o = cli(&["conj", "verify", "--code", "swap"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
}

#[test]
fn usage_and_parse_errors() {
    assert_eq!(cli(&["nonsense"]).code, 2);
    let o = cli(&["alg", "eval", "s(0"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("parse error at 1:"), "{}", o.stderr);
    assert_eq!(cli(&["--shift", "nowhere", "lang", "member", "0"]).code, 2);
    assert_eq!(cli(&["--format", "dot", "alg", "eval", "1"]).code, 2);
    let o = cli(&["--shift", "fan-loop", "alg", "eval", "1", "--top-free"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("unavailable"), "{}", o.stderr);
}

#[test]
fn graphs_and_dot() {
    let o = cli(&["--shift", "rose-2", "lpa"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    let o = cli(&["--shift", "3-cycle", "lpa", "--format", "dot"]);
    assert!(o.stdout.starts_with("digraph"));
    let o = cli(&["--shift", "golden-mean", "--format", "dot", "stone", "atoms", "--depth", "1"]);
    assert_eq!(o.stdout.matches("style=dashed").count(), 3);
    let o = cli(&["--shift", "renewal", "lpa", "--budget", "4"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
}

#[test]
fn json_is_deterministic() {
    let a = cli(&["--format", "json", "--shift", "even", "stone", "atoms", "--depth", "2"]);
    let b = cli(&["--format", "json", "--shift", "even", "stone", "atoms", "--depth", "2"]);
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(v["params"]["depth"], "2");
}

#[test]
fn config_shifts_and_codes() {
    let dir = std::env::temp_dir().join(format!("subshift-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("w.toml");
    std::fs::write(
        &path,
        r#"
depth = 2
[[shift]]
kind = "forbidden_words"
name = "no-aa"
symbols = ["a", "b"]
forbidden = ["aa"]

[[code]]
name = "rename"
source = "golden-mean"
target = "no-aa"
map = [["0", "b"], ["1", "a"]]
inverse = [["b", "0"], ["a", "1"]]
"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let o = cli(&["--config", p, "--shift", "no-aa", "lang", "enum", "2"]);
    assert_eq!(body(&o.stdout), vec!["ab", "ba", "bb"]);
    let o = cli(&["--config", p, "conj", "apply", "--code", "rename", "0101"]);
    assert_eq!(body(&o.stdout), vec!["baba"]);
    let o = cli(&["--config", p, "conj", "verify", "--code", "rename"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert!(o.stdout.contains("# depth = 2"));
    std::fs::write(&path, "depth = 2\ncolour = 3\n").unwrap();
    assert_eq!(cli(&["--config", p, "shifts"]).code, 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn printed_forms_reparse() {
    for name in fixtures::NAMES {
        let sh = fixtures::by_name(name).unwrap();
        for src in ["C(0,1) | F(1)", "Z(1) & ~C(,0)", "X \\ Z(0)"] {
            let Ok(a) = parse_set(&sh, src, Flavor::U) else {
                continue;
            };
            let b = parse_set(&sh, &fmt_set(&sh, &a), Flavor::U).unwrap();
            assert!(a.same_set(&b), "{name}: {src}");
        }
        let alg = Algebra::unital(&sh, Ring::Integer);
        let letters = sh.alphabet.window(2);
        let (a, b) = (sh.fmt_word(&subshift::word::Word(vec![letters[0]])), sh.fmt_word(&subshift::word::Word(vec![letters[1]])));
        for src in [format!("2*s({a})*st({b}) - st({a})*s({a})"), format!("s({a}{b}) + 3"), format!("st({a})*s({b})")] {
            let Ok(x) = parse_element(&alg, &src) else {
                continue;
            };
            let y = parse_element(&alg, &fmt_element(&sh, &x)).unwrap();
            assert!(alg.equals(&x, &y).unwrap(), "{name}: {src}");
        }
    }
}
