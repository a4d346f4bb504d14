//! Protocols: the record `#u1#op1#u2#op2...` of the query words and
//! operations of a run, their correctness, and the deterministic set
//! automaton recognizing correct protocols.

use std::collections::BTreeSet;
use std::fmt;

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::error::{Error, Result};
use crate::sa::{Action, InputLabel, SetAutomaton};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    In,
    Out,
    TestPos,
    TestNeg,
}

impl Op {
    pub const ALL: [Op; 4] = [Op::In, Op::Out, Op::TestPos, Op::TestNeg];

    pub fn token(self) -> &'static str {
        match self {
            Op::In => "in",
            Op::Out => "out",
            Op::TestPos => "test+",
            Op::TestNeg => "test-",
        }
    }

    pub fn from_token(s: &str) -> Option<Op> {
        Op::ALL.into_iter().find(|op| op.token() == s)
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Where the delimiter and operation tokens sit in a protocol alphabet built
/// by [`protocol_alphabet`]: right after the work symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProtocolSymbols {
    pub gamma_len: usize,
}

impl ProtocolSymbols {
    pub fn new(gamma: &Alphabet) -> Self {
        ProtocolSymbols { gamma_len: gamma.len() }
    }

    pub fn hash(self) -> Symbol {
        Symbol(self.gamma_len as u32)
    }

    pub fn op(self, op: Op) -> Symbol {
        Symbol((self.gamma_len + 1 + op.index()) as u32)
    }

    pub fn is_gamma(self, s: Symbol) -> bool {
        s.index() < self.gamma_len
    }

    pub fn as_op(self, s: Symbol) -> Option<Op> {
        let i = s.index().checked_sub(self.gamma_len + 1)?;
        Op::ALL.get(i).copied()
    }
}

/// `Γ ∪ {#, in, out, test+, test-}`, in that order.
pub fn protocol_alphabet(gamma: &Alphabet) -> Result<Alphabet> {
    if let Some(n) = gamma.names().iter().find(|n| n.contains('#')) {
        return Err(Error::Invalid(format!("work symbol `{n}` clashes with the delimiter")));
    }
    let mut names: Vec<String> = gamma.names().to_vec();
    names.push("#".into());
    names.extend(Op::ALL.iter().map(|op| op.token().to_string()));
    Alphabet::new(names)
}

/// Recovers `Γ` from an alphabet produced by [`protocol_alphabet`].
pub fn gamma_of(protocol_alphabet: &Alphabet) -> Result<Alphabet> {
    let names = protocol_alphabet.names();
    let tail: Vec<&str> = std::iter::once("#")
        .chain(Op::ALL.iter().map(|op| op.token()))
        .collect();
    if names.len() < tail.len() || names[names.len() - tail.len()..] != tail[..] {
        return Err(Error::AlphabetMismatch(format!(
            "{protocol_alphabet:?} is not a protocol alphabet"
        )));
    }
    Alphabet::new(names[..names.len() - tail.len()].iter().cloned())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QueryBlock {
    pub word: Word,
    pub op: Op,
    /// 0-based index of the block in its protocol.
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Protocol {
    gamma: Alphabet,
    blocks: Vec<QueryBlock>,
}

impl Protocol {
    pub fn new(gamma: Alphabet) -> Self {
        Protocol {
            gamma,
            blocks: Vec::new(),
        }
    }

    pub fn from_pairs(gamma: Alphabet, pairs: impl IntoIterator<Item = (Word, Op)>) -> Self {
        let mut p = Protocol::new(gamma);
        for (w, op) in pairs {
            p.push(w, op);
        }
        p
    }

    pub fn push(&mut self, word: Word, op: Op) {
        let position = self.blocks.len();
        self.blocks.push(QueryBlock { word, op, position });
    }

    pub fn gamma(&self) -> &Alphabet {
        &self.gamma
    }

    pub fn blocks(&self) -> &[QueryBlock] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&Word, Op)> + '_ {
        self.blocks.iter().map(|b| (&b.word, b.op))
    }

    /// Parses `(#word#op)+`. The empty string is the empty protocol.
    pub fn parse(gamma: &Alphabet, text: &str) -> Result<Protocol> {
        let mut p = Protocol::new(gamma.clone());
        if text.is_empty() {
            return Ok(p);
        }
        let Some(body) = text.strip_prefix('#') else {
            return Err(Error::MalformedProtocol("a protocol starts with `#`".into()));
        };
        let parts: Vec<&str> = body.split('#').collect();
        if !parts.len().is_multiple_of(2) {
            return Err(Error::MalformedProtocol(
                "trailing delimiter or missing operation".into(),
            ));
        }
        for chunk in parts.chunks(2) {
            let word = gamma
                .parse_word(chunk[0])
                .map_err(|e| Error::MalformedProtocol(e.to_string()))?;
            let op = Op::from_token(chunk[1])
                .ok_or_else(|| Error::MalformedProtocol(format!("unknown operation `{}`", chunk[1])))?;
            p.push(word, op);
        }
        Ok(p)
    }

    /// The protocol as a word over [`protocol_alphabet`].
    pub fn to_symbols(&self) -> Word {
        let ps = ProtocolSymbols::new(&self.gamma);
        let mut out = Vec::new();
        for b in &self.blocks {
            out.push(ps.hash());
            out.extend_from_slice(&b.word);
            out.push(ps.hash());
            out.push(ps.op(b.op));
        }
        out
    }

    /// Inverse of [`Protocol::to_symbols`].
    pub fn from_symbols(gamma: &Alphabet, w: &[Symbol]) -> Result<Protocol> {
        let ps = ProtocolSymbols::new(gamma);
        let mut p = Protocol::new(gamma.clone());
        let mut i = 0;
        while i < w.len() {
            if w[i] != ps.hash() {
                return Err(Error::MalformedProtocol(format!("expected `#` at symbol {i}")));
            }
            i += 1;
            let start = i;
            while i < w.len() && ps.is_gamma(w[i]) {
                i += 1;
            }
            let word = w[start..i].to_vec();
            if i + 1 >= w.len() || w[i] != ps.hash() {
                return Err(Error::MalformedProtocol("block is missing its operation".into()));
            }
            let op = ps
                .as_op(w[i + 1])
                .ok_or_else(|| Error::MalformedProtocol("expected an operation token".into()))?;
            p.push(word, op);
            i += 2;
        }
        Ok(p)
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            write!(f, "#{}#{}", self.gamma.join_word(&b.word), b.op)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Correct,
    /// 1-based number of the first violating block.
    IncorrectAt(usize),
}

/// Support-based correctness: a test block looks at the most recent `in` or
/// `out` block with the same word. `test+` needs an `in` there; `test-` needs
/// an `out` there or no such block at all.
pub fn check_correct(p: &Protocol) -> Verdict {
    for (k, b) in p.blocks.iter().enumerate() {
        let last = p.blocks[..k]
            .iter()
            .rev()
            .find(|e| e.word == b.word && matches!(e.op, Op::In | Op::Out))
            .map(|e| e.op);
        let ok = match b.op {
            Op::In | Op::Out => true,
            Op::TestPos => last == Some(Op::In),
            Op::TestNeg => last != Some(Op::In),
        };
        if !ok {
            return Verdict::IncorrectAt(k + 1);
        }
    }
    Verdict::Correct
}

/// Set contents after each block, obtained by performing the operations.
pub fn replay_sets(p: &Protocol) -> Vec<BTreeSet<Word>> {
    let mut set = BTreeSet::new();
    let mut out = Vec::with_capacity(p.len());
    for b in &p.blocks {
        match b.op {
            Op::In => {
                set.insert(b.word.clone());
            }
            Op::Out => {
                set.remove(&b.word);
            }
            Op::TestPos | Op::TestNeg => {}
        }
        out.push(set.clone());
    }
    out
}

/// Whether every recorded test result matches a direct simulation of the set.
pub fn replay_correct(p: &Protocol) -> bool {
    let mut set: BTreeSet<&Word> = BTreeSet::new();
    for b in &p.blocks {
        match b.op {
            Op::In => {
                set.insert(&b.word);
            }
            Op::Out => {
                set.remove(&b.word);
            }
            Op::TestPos if !set.contains(&b.word) => return false,
            Op::TestNeg if set.contains(&b.word) => return false,
            _ => {}
        }
    }
    true
}

/// Deterministic set automaton over the protocol alphabet of `gamma`
/// accepting exactly the correct protocols with at least one block.
pub fn build_mprot(gamma: &Alphabet) -> Result<SetAutomaton> {
    let alphabet = protocol_alphabet(gamma)?;
    let ps = ProtocolSymbols::new(gamma);
    let mut sa = SetAutomaton::new(alphabet, gamma.clone(), false);
    let start = sa.add_state("start");
    let word = sa.add_state("word");
    let op = sa.add_state("op");
    let after = sa.add_state("after");
    let dead = sa.add_state("dead");
    sa.set_start(start);
    sa.set_accepting(after, true);
    let hash = InputLabel::Sym(ps.hash());
    sa.add_rule(start, hash, Action::Write(vec![], word))?;
    for g in gamma.symbols() {
        sa.add_rule(word, InputLabel::Sym(g), Action::Write(vec![g], word))?;
    }
    sa.add_rule(word, hash, Action::Write(vec![], op))?;
    sa.add_rule(op, InputLabel::Sym(ps.op(Op::In)), Action::In(after))?;
    sa.add_rule(op, InputLabel::Sym(ps.op(Op::Out)), Action::Out(after))?;
    sa.add_rule(
        op,
        InputLabel::Sym(ps.op(Op::TestPos)),
        Action::Test { pos: after, neg: dead },
    )?;
    sa.add_rule(
        op,
        InputLabel::Sym(ps.op(Op::TestNeg)),
        Action::Test { pos: dead, neg: after },
    )?;
    sa.add_rule(after, hash, Action::Write(vec![], word))?;
    Ok(sa)
}

/// The binary work alphabet `{a, b}`.
pub fn binary_gamma() -> Alphabet {
    Alphabet::new(["a", "b"]).expect("valid alphabet")
}
