use std::path::PathBuf;
use std::process::Command;

use sakit::automata::text::parse_fst;
use sakit::sa::text::{parse_sa, write_sa};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn sakit(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sakit"))
        .args(args)
        .env_remove("SAKIT_BUDGET")
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn first_line(s: &str) -> &str {
    s.lines().next().unwrap_or("")
}

#[test]
fn run_reports_verdicts_and_traces() {
    let per2 = data("per2.sa");
    let (code, out) = sakit(&["run", &per2, "--word", "01#01#", "--trace"]);
    assert_eq!(code, 0);
    assert_eq!(first_line(&out), "ACCEPT");
    assert!(out.contains("protocol: #01#in#01#test+"));
    let (code, out) = sakit(&["run", &per2, "--word", "0#1#"]);
    assert_eq!((code, out.as_str()), (1, "REJECT\n"));
}

#[test]
fn budget_exhaustion_exits_3() {
    let per2 = data("per2.sa");
    let (code, out) = sakit(&["run", &per2, "--word", "0#0#0#", "--budget", "2"]);
    assert_eq!(code, 3);
    assert_eq!(first_line(&out), "BUDGET");
    let out = Command::new(env!("CARGO_BIN_EXE_sakit"))
        .args(["run", &per2, "--word", "0#0#0#"])
        .env("SAKIT_BUDGET", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn member_methods_agree() {
    let np = data("nonprimes.sa");
    for n in 0..10 {
        let w = "a".repeat(n);
        let (d, dout) = sakit(&["member", &np, "--word", &w, "--method", "direct"]);
        let (p, pout) = sakit(&["member", &np, "--word", &w, "--method", "protocol"]);
        assert_eq!((d, dout), (p, pout.clone()), "a^{n}");
        let composite = n < 2 || (2..n).any(|k| n % k == 0);
        assert_eq!(first_line(&pout), if composite { "ACCEPT" } else { "REJECT" });
    }
}

#[test]
fn empty_exits_zero_only_for_empty_languages() {
    let (code, out) = sakit(&["empty", &data("per2.sa")]);
    assert_eq!(code, 1);
    assert!(out.starts_with("NONEMPTY #"), "{out}");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("none.sa");
    std::fs::write(
        &path,
        "input: a\nwork: a\nendmarker: no\nstart: s\naccept: f\ns a in s\n",
    )
    .unwrap();
    let (code, out) = sakit(&["empty", path.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, "EMPTY\n"));
}

#[test]
fn protocol_check() {
    assert_eq!(sakit(&["protocol", "check", "#a#test+"]), (1, "INCORRECT 1\n".into()));
    assert_eq!(sakit(&["protocol", "check", "#a#in#a#test+"]), (0, "CORRECT\n".into()));
    assert_eq!(
        sakit(&["protocol", "check", "#a#in#a#out#a#test+"]),
        (1, "INCORRECT 3\n".into())
    );
    assert_eq!(sakit(&["protocol", "check", "#a#bogus"]).0, 2);
}

#[test]
fn nrr_finds_witness() {
    let (code, out) = sakit(&["nrr", &data("eps.nfa")]);
    assert_eq!((code, out.as_str()), (0, "NONEMPTY #a#in#a#test+\n"));
}

#[test]
fn emitted_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for sa in ["per2.sa", "nonprimes.sa"] {
        let src = data(sa);
        let fst = dir.path().join("t.fst");
        assert_eq!(sakit(&["extract", &src, "-o", fst.to_str().unwrap()]).0, 0);
        let text = std::fs::read_to_string(&fst).unwrap();
        let t = parse_fst(&text).unwrap();
        assert_eq!(sakit::automata::text::write_fst(&t), text);
        for form in ["req", "anf", "noeps"] {
            if form == "noeps" && sa == "nonprimes.sa" {
                // ε-loop removal needs a deterministic automaton
                assert_eq!(sakit(&["normalize", &src, "--form", form]).0, 2);
                continue;
            }
            let out = dir.path().join("n.sa");
            assert_eq!(
                sakit(&["normalize", &src, "--form", form, "-o", out.to_str().unwrap()]).0,
                0
            );
            let text = std::fs::read_to_string(&out).unwrap();
            assert_eq!(write_sa(&parse_sa(&text).unwrap()), text);
        }
    }
}

#[test]
fn reductions() {
    let (code, out) = sakit(&["reduce", "cvp", &data("and.cvp")]);
    assert_eq!(code, 0);
    assert_eq!(first_line(&out), "ACCEPT");
    assert_eq!(sakit(&["reduce", "cvp", &data("zero.cvp")]).0, 1);
    assert_eq!(sakit(&["reduce", "3sat", &data("sat.cnf")]).0, 0);
    assert_eq!(sakit(&["reduce", "3sat", &data("unsat.cnf")]).0, 1);
    assert_eq!(sakit(&["reduce", "tm", &data("writeback.tm"), "--cells", "4"]).0, 0);
    assert_eq!(sakit(&["reduce", "tm", &data("loop.tm"), "--cells", "4"]).0, 1);
    let per2 = data("per2.sa");
    assert_eq!(
        sakit(&["reduce", "member", &per2, "--word", "0#0#"]),
        (0, "EMPTY\n".into())
    );
    assert_eq!(sakit(&["reduce", "member", &per2, "--word", "0#1#"]).0, 1);
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(sakit(&["frobnicate"]).0, 2);
    assert_eq!(sakit(&["run", &data("per2.sa"), "--word", "0x"]).0, 2);
    assert_eq!(sakit(&["empty", &data("missing.sa")]).0, 2);
    assert_eq!(sakit(&["empty", &data("and.cvp")]).0, 2);
}

#[test]
fn output_is_deterministic() {
    let a = sakit(&["empty", &data("per2.sa")]);
    let b = sakit(&["empty", &data("per2.sa")]);
    assert_eq!(a, b);
}
