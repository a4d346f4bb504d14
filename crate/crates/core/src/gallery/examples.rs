use crate::alphabet::{Alphabet, Symbol};
use crate::error::{Error, Result};
use crate::sa::{Action, InputLabel, SetAutomaton};

/// Deterministic automaton with endmarker accepting `{(w#)^n : w ∈ Σ_k*, n ≥ 1}`
/// over `Σ_k = {0, ..., k-1}`.
///
/// The first word is copied and inserted; each later word is copied and
/// tested against the set.
pub fn build_perk_dsa(k: usize) -> Result<SetAutomaton> {
    if k == 0 {
        return Err(Error::Invalid("Per_k needs k ≥ 1".into()));
    }
    let digits: Vec<String> = (0..k).map(|i| i.to_string()).collect();
    let work = Alphabet::new(digits.iter().cloned())?;
    let input = Alphabet::new(digits.iter().cloned().chain(["#".to_string()]))?;
    let hash = InputLabel::Sym(Symbol(k as u32));
    let mut sa = SetAutomaton::new(input, work, true);
    let first = sa.add_state("c0");
    let boundary = sa.add_state("p");
    let copy = sa.add_state("c");
    let fin = sa.add_state("f");
    let dead = sa.add_state("dead");
    sa.set_start(first);
    sa.set_accepting(fin, true);
    for i in 0..k as u32 {
        let s = Symbol(i);
        sa.add_rule(first, InputLabel::Sym(s), Action::Write(vec![s], first))?;
        sa.add_rule(boundary, InputLabel::Sym(s), Action::Write(vec![s], copy))?;
        sa.add_rule(copy, InputLabel::Sym(s), Action::Write(vec![s], copy))?;
    }
    sa.add_rule(first, hash, Action::In(boundary))?;
    sa.add_rule(
        boundary,
        hash,
        Action::Test {
            pos: boundary,
            neg: dead,
        },
    )?;
    sa.add_rule(
        copy,
        hash,
        Action::Test {
            pos: boundary,
            neg: dead,
        },
    )?;
    sa.add_rule(boundary, InputLabel::End, Action::Write(vec![], fin))?;
    Ok(sa)
}

/// Nondeterministic automaton over `{a}` accepting `a^n` for `n` equal to 0,
/// 1 or a composite number.
///
/// It guesses a divisor `d ≥ 2`, inserts `a^d`, and then checks that the rest
/// of the input splits into blocks of the same length by testing each block.
/// The cases `n ∈ {0, 1}` use a dedicated test whose branches both accept.
pub fn build_nonprimes_nsa() -> SetAutomaton {
    let al = Alphabet::new(["a"]).expect("valid alphabet");
    let a = Symbol(0);
    let sym = InputLabel::Sym(a);
    let mut sa = SetAutomaton::new(al.clone(), al, false);
    let s0 = sa.add_state("s0");
    let c1 = sa.add_state("c1");
    let c2 = sa.add_state("c2");
    let t0 = sa.add_state("t0");
    let t1 = sa.add_state("t1");
    let acc = sa.add_state("acc");
    let dead = sa.add_state("dead");
    let small = sa.add_state("z");
    sa.set_start(s0);
    sa.set_accepting(acc, true);
    sa.set_accepting(small, true);
    let rules = [
        (s0, sym, Action::Write(vec![a], c1)),
        (c1, sym, Action::Write(vec![a], c2)),
        (c2, sym, Action::Write(vec![a], c2)),
        (c2, InputLabel::Eps, Action::In(t0)),
        (t0, sym, Action::Write(vec![a], t1)),
        (t1, sym, Action::Write(vec![a], t1)),
        (t1, InputLabel::Eps, Action::Test { pos: acc, neg: dead }),
        (acc, sym, Action::Write(vec![a], t1)),
        (s0, InputLabel::Eps, Action::Test { pos: small, neg: small }),
        (s0, sym, Action::Test { pos: small, neg: small }),
    ];
    for (src, l, act) in rules {
        sa.add_rule(src, l, act).expect("valid rule");
    }
    sa
}

/// Predicate oracle for Per_k: `w = (u#)^n` for some `u` without `#` and
/// `n ≥ 1`.
pub fn is_repetition(w: &[Symbol], hash: Symbol) -> bool {
    if w.last() != Some(&hash) {
        return false;
    }
    let mut blocks = w[..w.len() - 1].split(|&s| s == hash);
    let first = blocks.next().unwrap_or(&[]);
    blocks.all(|b| b == first)
}

pub fn is_nonprime(n: usize) -> bool {
    n < 2 || (2..n).take_while(|d| d * d <= n).any(|d| n.is_multiple_of(d))
}
