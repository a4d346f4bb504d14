use std::collections::{BTreeMap, BTreeSet};

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::error::{Error, Result};
use crate::sa::{Action, InputLabel, SetAutomaton};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    /// Variable number, at least 1; its code is the binary numeral.
    pub var: usize,
    pub positive: bool,
}

/// A 3-CNF: every clause has exactly three literals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cnf {
    pub clauses: Vec<[Literal; 3]>,
}

impl Cnf {
    pub fn variables(&self) -> BTreeSet<usize> {
        self.clauses.iter().flatten().map(|l| l.var).collect()
    }
}

/// A 3-CNF together with the variable list placed before it in the reduced
/// word. The list may repeat or omit variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SatInstance {
    pub list: Vec<usize>,
    pub cnf: Cnf,
}

/// Parses DIMACS CNF. Comment lines start with `c`; the `p cnf V C` line is
/// optional. A line `v i j ...` gives the variable list (ended by an
/// optional `0`); without it every variable of the formula is listed once.
/// Clauses with fewer than three literals repeat their last literal.
pub fn parse_dimacs(text: &str) -> Result<SatInstance> {
    let mut list: Option<Vec<usize>> = None;
    let mut clauses = Vec::new();
    let mut pending: Vec<Literal> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('p') || line.starts_with('%') {
            continue;
        }
        let num = |t: &str| {
            t.parse::<i64>()
                .map_err(|_| Error::parse(n + 1, format!("bad number `{t}`")))
        };
        if let Some(rest) = line.strip_prefix('v') {
            let mut vs = Vec::new();
            for t in rest.split_whitespace() {
                match num(t)? {
                    0 => break,
                    v if v > 0 => vs.push(v as usize),
                    _ => return Err(Error::parse(n + 1, "negative variable in the list")),
                }
            }
            list.get_or_insert_with(Vec::new).extend(vs);
            continue;
        }
        for t in line.split_whitespace() {
            match num(t)? {
                0 => {
                    let lits = std::mem::take(&mut pending);
                    let Some(&last) = lits.last() else {
                        return Err(Error::parse(n + 1, "empty clause"));
                    };
                    if lits.len() > 3 {
                        return Err(Error::parse(n + 1, "clause with more than three literals"));
                    }
                    let get = |i: usize| lits.get(i).copied().unwrap_or(last);
                    clauses.push([get(0), get(1), get(2)]);
                }
                v => pending.push(Literal {
                    var: v.unsigned_abs() as usize,
                    positive: v > 0,
                }),
            }
        }
    }
    if !pending.is_empty() {
        return Err(Error::parse(0, "last clause is not terminated by 0"));
    }
    let cnf = Cnf { clauses };
    let list = list.unwrap_or_else(|| cnf.variables().into_iter().collect());
    Ok(SatInstance { list, cnf })
}

pub fn write_dimacs(inst: &SatInstance) -> String {
    let vars = inst
        .cnf
        .variables()
        .into_iter()
        .chain(inst.list.iter().copied())
        .max()
        .unwrap_or(0);
    let mut out = format!("p cnf {} {}\nv", vars, inst.cnf.clauses.len());
    for v in &inst.list {
        out.push_str(&format!(" {v}"));
    }
    out.push_str(" 0\n");
    for c in &inst.cnf.clauses {
        for l in c {
            let v = l.var as i64;
            out.push_str(&format!("{} ", if l.positive { v } else { -v }));
        }
        out.push_str("0\n");
    }
    out
}

/// Satisfiability of the derived formula: clauses with a variable listed
/// twice or more are dropped, variables absent from the list are fixed to
/// 0, and the rest is decided by trying every assignment.
pub fn phi_prime_sat(list: &[usize], cnf: &Cnf) -> bool {
    let mut count: BTreeMap<usize, usize> = BTreeMap::new();
    for &v in list {
        *count.entry(v).or_default() += 1;
    }
    let kept: Vec<&[Literal; 3]> = cnf
        .clauses
        .iter()
        .filter(|c| c.iter().all(|l| count.get(&l.var).copied().unwrap_or(0) < 2))
        .collect();
    let free: Vec<usize> = count.iter().filter(|&(_, &c)| c == 1).map(|(&v, _)| v).collect();
    assert!(free.len() < 31, "too many variables for the brute-force oracle");
    (0u32..1 << free.len()).any(|bits| {
        let value = |v: usize| match free.iter().position(|&f| f == v) {
            Some(i) => bits >> i & 1 == 1,
            None => false,
        };
        kept.iter().all(|c| c.iter().any(|l| value(l.var) == l.positive))
    })
}

/// Input alphabet of the reduced words.
pub fn sasat_alphabet() -> Alphabet {
    Alphabet::new(["0", "1", "#", "(", ")", ",", "+", "~"]).expect("valid alphabet")
}

fn code(v: usize) -> Word {
    format!("{v:b}").bytes().map(|b| Symbol((b - b'0') as u32)).collect()
}

/// `x1#...#xn##<φ>` for the given list; clauses are `(l,l,l)` with literals
/// `+code` or `~code` (`-` is reserved by the symbol syntax).
pub fn encode_sasat(list: &[usize], cnf: &Cnf) -> Word {
    let al = sasat_alphabet();
    let s = |n: &str| al.symbol(n).expect("known token");
    let mut w = Vec::new();
    for &v in list {
        w.extend(code(v));
        w.push(s("#"));
    }
    w.push(s("#"));
    for c in &cnf.clauses {
        w.push(s("("));
        for (i, l) in c.iter().enumerate() {
            if i > 0 {
                w.push(s(","));
            }
            w.push(s(if l.positive { "+" } else { "~" }));
            w.extend(code(l.var));
        }
        w.push(s(")"));
    }
    w
}

/// The reduction: every variable of `φ` listed exactly once.
pub fn threesat_to_sasat(cnf: &Cnf) -> Word {
    let list: Vec<usize> = cnf.variables().into_iter().collect();
    encode_sasat(&list, cnf)
}

/// Nondeterministic automaton accepting the words `x1#...#xn##<φ>` whose
/// derived formula is satisfiable.
///
/// Each listed occurrence inserts the word `x b` for a guessed bit `b`. In
/// each clause one literal is guessed and checked: `+x` needs `x1` in the
/// set; `~x` needs `x0` in the set or `x1` absent.
pub fn build_sasat_nsa() -> SetAutomaton {
    let al = sasat_alphabet();
    let work = Alphabet::new(["0", "1"]).expect("valid alphabet");
    let sym = |n: &str| InputLabel::Sym(al.symbol(n).expect("known token"));
    let digits = [Symbol(0), Symbol(1)];
    let mut sa = SetAutomaton::new(al.clone(), work, false);
    let add = |sa: &mut SetAutomaton, src: usize, l: InputLabel, a: Action| {
        sa.add_rule(src, l, a).expect("valid rule");
    };

    let list = sa.add_state("L");
    sa.set_start(list);
    let list_code = sa.add_state("Ld");
    let insert = sa.add_state("Lin");
    let clause = sa.add_state("C");
    sa.set_accepting(clause, true);
    let dead = sa.add_state("dead");
    for d in digits {
        add(&mut sa, list, InputLabel::Sym(d), Action::Write(vec![d], list_code));
        add(
            &mut sa,
            list_code,
            InputLabel::Sym(d),
            Action::Write(vec![d], list_code),
        );
    }
    for b in digits {
        add(&mut sa, list_code, sym("#"), Action::Write(vec![b], insert));
    }
    add(&mut sa, insert, InputLabel::Eps, Action::In(list));
    add(&mut sa, list, sym("#"), Action::Write(vec![], clause));

    // literal slots 0..3, before and after the checked literal
    let mut slot = [[0; 2]; 3];
    for (p, row) in slot.iter_mut().enumerate() {
        for (done, s) in row.iter_mut().enumerate() {
            *s = sa.add_state(format!("S{p}{}", if done == 1 { "c" } else { "" }));
        }
    }
    add(&mut sa, clause, sym("("), Action::Write(vec![], slot[0][0]));
    // where a literal ending in slot p leads, and on which delimiter
    let next = |p: usize, done: usize| {
        if p < 2 {
            (",", Some(slot[p + 1][done]))
        } else {
            (")", None)
        }
    };

    for p in 0..3 {
        for done in 0..2 {
            // skipped literal
            let skip = sa.add_state(format!("K{p}{done}"));
            let skip_code = sa.add_state(format!("K{p}{done}d"));
            for sign in ["+", "~"] {
                add(&mut sa, slot[p][done], sym(sign), Action::Write(vec![], skip));
            }
            for d in digits {
                add(&mut sa, skip, InputLabel::Sym(d), Action::Write(vec![], skip_code));
                add(&mut sa, skip_code, InputLabel::Sym(d), Action::Write(vec![], skip_code));
            }
            let (delim, to) = next(p, done);
            match to {
                Some(t) => add(&mut sa, skip_code, sym(delim), Action::Write(vec![], t)),
                // a clause closes only after its checked literal
                None if done == 1 => add(&mut sa, skip_code, sym(delim), Action::Write(vec![], clause)),
                None => {}
            }
        }
        // checked literal
        let after = next(p, 1);
        let dst = after.1.unwrap_or(clause);
        for (sign, checks) in [
            ("+", vec![(Symbol(1), true)]),
            ("~", vec![(Symbol(0), true), (Symbol(1), false)]),
        ] {
            let first = sa.add_state(format!("V{p}{sign}"));
            let rest = sa.add_state(format!("V{p}{sign}d"));
            add(&mut sa, slot[p][0], sym(sign), Action::Write(vec![], first));
            for d in digits {
                add(&mut sa, first, InputLabel::Sym(d), Action::Write(vec![d], rest));
                add(&mut sa, rest, InputLabel::Sym(d), Action::Write(vec![d], rest));
            }
            for (bit, present) in checks {
                let t = sa.add_state(format!("Q{p}{sign}{}", bit.0));
                add(&mut sa, rest, sym(after.0), Action::Write(vec![bit], t));
                let test = if present {
                    Action::Test { pos: dst, neg: dead }
                } else {
                    Action::Test { pos: dead, neg: dst }
                };
                add(&mut sa, t, InputLabel::Eps, test);
            }
        }
    }
    sa.trimmed()
}
