use std::collections::HashMap;

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::error::{Error, Result};
use crate::sa::{Action, InputLabel, SetAutomaton};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    And(usize, usize),
    Or(usize, usize),
    Not(usize),
    One,
    Zero,
}

/// One assignment `P_target := gate`. Variables are numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Assignment {
    pub target: usize,
    pub gate: Gate,
}

/// An assignment sequence. Its value is the value of the last assignment.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CvpProgram {
    pub assignments: Vec<Assignment>,
}

impl CvpProgram {
    /// Standard form: every operand index is smaller than the target, and
    /// every operand was assigned before.
    pub fn is_standard(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.assignments.iter().all(|a| {
            let ops: Vec<usize> = match a.gate {
                Gate::And(j, k) | Gate::Or(j, k) => vec![j, k],
                Gate::Not(j) => vec![j],
                Gate::One | Gate::Zero => vec![],
            };
            let ok = ops.iter().all(|&j| j < a.target && seen.contains(&j));
            seen.insert(a.target);
            ok
        })
    }

    /// Parses one assignment per line: `Pi := Pj AND Pk`, `Pi := Pj OR Pk`,
    /// `Pi := NOT Pj`, `Pi := 1`, `Pi := 0`. Lines may be separated by `;`
    /// as well; `#` starts a comment.
    pub fn parse(text: &str) -> Result<CvpProgram> {
        let mut assignments = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            for stmt in line.split(';') {
                let toks: Vec<&str> = stmt.split_whitespace().collect();
                if toks.is_empty() {
                    continue;
                }
                let var = |t: &str| -> Result<usize> {
                    t.strip_prefix('P')
                        .and_then(|d| d.parse::<usize>().ok())
                        .filter(|&i| i >= 1)
                        .ok_or_else(|| Error::parse(n + 1, format!("bad variable `{t}`")))
                };
                if toks.len() < 3 || toks[1] != ":=" {
                    return Err(Error::parse(n + 1, "expected `Pi := ...`"));
                }
                let target = var(toks[0])?;
                let gate = match toks[2..] {
                    ["1"] => Gate::One,
                    ["0"] => Gate::Zero,
                    ["NOT", j] => Gate::Not(var(j)?),
                    [j, "AND", k] => Gate::And(var(j)?, var(k)?),
                    [j, "OR", k] => Gate::Or(var(j)?, var(k)?),
                    _ => return Err(Error::parse(n + 1, "unknown assignment form")),
                };
                assignments.push(Assignment { target, gate });
            }
        }
        if assignments.is_empty() {
            return Err(Error::parse(0, "empty program"));
        }
        Ok(CvpProgram { assignments })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for a in &self.assignments {
            let rhs = match a.gate {
                Gate::And(j, k) => format!("P{j} AND P{k}"),
                Gate::Or(j, k) => format!("P{j} OR P{k}"),
                Gate::Not(j) => format!("NOT P{j}"),
                Gate::One => "1".into(),
                Gate::Zero => "0".into(),
            };
            out.push_str(&format!("P{} := {rhs}\n", a.target));
        }
        out
    }
}

/// Evaluates a program directly; unassigned variables read as 0.
pub fn cvp_eval(p: &CvpProgram) -> bool {
    let mut val: HashMap<usize, bool> = HashMap::new();
    let mut last = false;
    for a in &p.assignments {
        let get = |i: usize| val.get(&i).copied().unwrap_or(false);
        last = match a.gate {
            Gate::And(j, k) => get(j) && get(k),
            Gate::Or(j, k) => get(j) || get(k),
            Gate::Not(j) => !get(j),
            Gate::One => true,
            Gate::Zero => false,
        };
        val.insert(a.target, last);
    }
    last
}

/// Input alphabet of the reduced words: binary digits, the delimiter and the
/// five operation tokens.
pub fn sacvp_alphabet() -> Alphabet {
    Alphabet::new(["0", "1", "#", "AND", "OR", "NOT", "ONE", "ZERO"]).expect("valid alphabet")
}

fn code(i: usize) -> Word {
    format!("{i:b}").bytes().map(|b| Symbol((b - b'0') as u32)).collect()
}

/// Encodes the program as a sequence of reversed assignments. The word
/// starts with `#` and every assignment ends with `#`, so neighbours share
/// a delimiter: `Pj op Pk =: Pi` is `<j>#op#<k>#<i>#`, `NOT Pk =: Pi` is
/// `NOT#<k>#<i>#`, and constants are `ONE#<i>#` / `ZERO#<i>#`. Variable
/// codes are binary numerals.
pub fn cvp_to_sacvp(p: &CvpProgram) -> Word {
    let al = sacvp_alphabet();
    let sym = |n: &str| al.symbol(n).expect("known token");
    let hash = sym("#");
    let mut w = vec![hash];
    for a in &p.assignments {
        match a.gate {
            Gate::And(j, k) | Gate::Or(j, k) => {
                w.extend(code(j));
                w.push(hash);
                w.push(sym(if matches!(a.gate, Gate::And(..)) { "AND" } else { "OR" }));
                w.push(hash);
                w.extend(code(k));
                w.push(hash);
            }
            Gate::Not(k) => {
                w.push(sym("NOT"));
                w.push(hash);
                w.extend(code(k));
                w.push(hash);
            }
            Gate::One => {
                w.push(sym("ONE"));
                w.push(hash);
            }
            Gate::Zero => {
                w.push(sym("ZERO"));
                w.push(hash);
            }
        }
        w.extend(code(a.target));
        w.push(hash);
    }
    w
}

struct Builder {
    sa: SetAutomaton,
    names: HashMap<String, usize>,
}

impl Builder {
    fn q(&mut self, name: impl Into<String>) -> usize {
        let name = name.into();
        if let Some(&q) = self.names.get(&name) {
            return q;
        }
        let q = self.sa.add_state(name.clone());
        self.names.insert(name, q);
        q
    }

    fn rule(&mut self, src: usize, l: InputLabel, a: Action) {
        self.sa.add_rule(src, l, a).expect("valid rule");
    }

    /// A non-empty binary code copied to the tape and closed by `#`, which
    /// applies `last`.
    fn code(&mut self, name: &str, hash: InputLabel, last: Action) -> usize {
        let first = self.q(name);
        let rest = self.q(format!("{name}d"));
        for d in [Symbol(0), Symbol(1)] {
            self.rule(first, InputLabel::Sym(d), Action::Write(vec![d], rest));
            self.rule(rest, InputLabel::Sym(d), Action::Write(vec![d], rest));
        }
        self.rule(rest, hash, last);
        first
    }
}

/// Deterministic automaton with endmarker accepting the reversed programs
/// whose value is 1. A variable is 1 iff its code is in the set; the value of
/// the last assignment is kept in the state.
pub fn build_sacvp_dsa() -> SetAutomaton {
    let al = sacvp_alphabet();
    let work = Alphabet::new(["0", "1"]).expect("valid alphabet");
    let sym = |n: &str| InputLabel::Sym(al.symbol(n).expect("known token"));
    let hash = sym("#");
    let mut b = Builder {
        sa: SetAutomaton::new(al.clone(), work, true),
        names: HashMap::new(),
    };
    let start = b.q("start");
    b.sa.set_start(start);
    let fin = b.q("fin");
    b.sa.set_accepting(fin, true);
    // assignment heads, by value of the last assignment: none yet, 0, 1
    let heads = [b.q("A"), b.q("A0"), b.q("A1")];
    b.rule(start, hash, Action::Write(vec![], heads[0]));
    b.rule(heads[2], InputLabel::End, Action::Write(vec![], fin));

    // target code: in when the value is 1, out when it is 0
    let target = [
        b.code("T0", hash, Action::Out(heads[1])),
        b.code("T1", hash, Action::In(heads[2])),
    ];
    type GateFn = fn(bool, bool) -> bool;
    let gates: [(&str, GateFn); 2] = [("AND", |x, y| x && y), ("OR", |x, y| x || y)];
    let mut after_first = [0; 2];
    for v in [false, true] {
        let s = b.q(format!("J{}", v as u8));
        for (op, f) in gates {
            let test = Action::Test {
                pos: target[f(v, true) as usize],
                neg: target[f(v, false) as usize],
            };
            let k = b.code(&format!("K{op}{}", v as u8), hash, test);
            let gap = b.q(format!("G{op}{}", v as u8));
            b.rule(gap, hash, Action::Write(vec![], k));
            b.rule(s, sym(op), Action::Write(vec![], gap));
        }
        after_first[v as usize] = s;
    }
    let not_operand = b.code(
        "N",
        hash,
        Action::Test {
            pos: target[0],
            neg: target[1],
        },
    );
    let not_gap = b.q("NOT");
    b.rule(not_gap, hash, Action::Write(vec![], not_operand));
    let one_gap = b.q("ONE");
    b.rule(one_gap, hash, Action::Write(vec![], target[1]));
    let zero_gap = b.q("ZERO");
    b.rule(zero_gap, hash, Action::Write(vec![], target[0]));

    let first_rest = b.q("Jd");
    for d in [Symbol(0), Symbol(1)] {
        b.rule(first_rest, InputLabel::Sym(d), Action::Write(vec![d], first_rest));
    }
    b.rule(
        first_rest,
        hash,
        Action::Test {
            pos: after_first[1],
            neg: after_first[0],
        },
    );
    for h in heads {
        for d in [Symbol(0), Symbol(1)] {
            b.rule(h, InputLabel::Sym(d), Action::Write(vec![d], first_rest));
        }
        b.rule(h, sym("NOT"), Action::Write(vec![], not_gap));
        b.rule(h, sym("ONE"), Action::Write(vec![], one_gap));
        b.rule(h, sym("ZERO"), Action::Write(vec![], zero_gap));
    }
    b.sa
}
