use crate::alphabet::{Alphabet, Symbol, Word};
use crate::error::{Error, Result};
use crate::protocol::{binary_gamma, Protocol};
use crate::sa::{Action, InputLabel, SetAutomaton};

/// Injective encoding of an arbitrary work alphabet into `{a, b}`.
///
/// Letters named `a` or `b` keep their name when every letter is one of the
/// two; otherwise letter `i` (1-based) becomes `b a^i b`. Both codes are
/// prefix-free, so decoding is unambiguous.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorkEncoding {
    original: Alphabet,
    codes: Vec<Word>,
}

impl WorkEncoding {
    pub fn for_alphabet(original: &Alphabet) -> WorkEncoding {
        let bin = binary_gamma();
        let by_name = original.names().iter().all(|n| n == "a" || n == "b");
        let codes = original
            .symbols()
            .map(|s| {
                if by_name {
                    vec![bin.symbol(original.name(s)).unwrap()]
                } else {
                    let (a, b) = (Symbol(0), Symbol(1));
                    let mut w = vec![b];
                    w.extend(std::iter::repeat_n(a, s.index() + 1));
                    w.push(b);
                    w
                }
            })
            .collect();
        WorkEncoding {
            original: original.clone(),
            codes,
        }
    }

    pub fn original(&self) -> &Alphabet {
        &self.original
    }

    pub fn is_identity(&self) -> bool {
        self.original == binary_gamma()
    }

    pub fn code(&self, s: Symbol) -> &[Symbol] {
        &self.codes[s.index()]
    }

    pub fn encode(&self, w: &[Symbol]) -> Word {
        w.iter().flat_map(|&s| self.codes[s.index()].iter().copied()).collect()
    }

    pub fn decode(&self, mut w: &[Symbol]) -> Result<Word> {
        let mut out = Vec::new();
        while !w.is_empty() {
            let (i, code) = self
                .codes
                .iter()
                .enumerate()
                .find(|(_, c)| w.starts_with(c))
                .ok_or_else(|| Error::Invalid("word is not a concatenation of codes".into()))?;
            out.push(Symbol(i as u32));
            w = &w[code.len()..];
        }
        Ok(out)
    }
}

/// Result of [`normalize_requirements`].
#[derive(Debug, Clone)]
pub struct Normalized {
    pub sa: SetAutomaton,
    pub encoding: WorkEncoding,
    /// Whether every accepting run of `sa` ends with an added dummy test.
    pub dummy_final: bool,
}

impl Normalized {
    /// Maps a protocol of the normalized automaton back to the original work
    /// alphabet, dropping the dummy block.
    pub fn decode_protocol(&self, p: &Protocol) -> Result<Protocol> {
        let mut pairs: Vec<(&Word, _)> = p.pairs().collect();
        if self.dummy_final {
            pairs.pop();
        }
        let mut out = Protocol::new(self.encoding.original().clone());
        for (w, op) in pairs {
            out.push(self.encoding.decode(w)?, op);
        }
        Ok(out)
    }
}

fn accepts_only_after_queries(sa: &SetAutomaton) -> bool {
    !sa.is_accepting(sa.start())
        && sa
            .rules()
            .iter()
            .all(|r| !matches!(r.action, Action::Write(_, d) if sa.is_accepting(d)))
}

/// Checks the three requirements: work alphabet `{a, b}`, no endmarker, and
/// accepting states entered only by query operations (the start state is not
/// accepting).
pub fn check_requirements(sa: &SetAutomaton) -> Result<()> {
    if sa.work_alphabet() != &binary_gamma() {
        return Err(Error::NotNormalized("work alphabet is not {a, b}".into()));
    }
    if sa.uses_endmarker() {
        return Err(Error::NotNormalized("automaton uses the endmarker".into()));
    }
    if !accepts_only_after_queries(sa) {
        return Err(Error::NotNormalized(
            "an accepting state is reachable without a final operation".into(),
        ));
    }
    Ok(())
}

fn fresh_name(sa: &SetAutomaton, base: &str) -> String {
    let mut name = base.to_string();
    while sa.state_index(&name).is_some() {
        name.push('_');
    }
    name
}

/// An equivalent automaton satisfying [`check_requirements`].
///
/// The endmarker is removed by guessing the end of the input: each endmarker
/// rule becomes an ε-rule into a copy of the state space that only keeps
/// ε-rules. When an accepting state can be entered without an operation, a
/// fresh accepting state is reached by a dummy test whose branches both lead
/// to it.
pub fn normalize_requirements(sa: &SetAutomaton) -> Normalized {
    let encoding = WorkEncoding::for_alphabet(sa.work_alphabet());
    if check_requirements(sa).is_ok() {
        return Normalized {
            sa: sa.clone(),
            encoding,
            dummy_final: false,
        };
    }
    let n = sa.num_states();
    let mut out = SetAutomaton::new(sa.input_alphabet().clone(), binary_gamma(), false);
    for q in 0..n {
        out.add_state(sa.state_name(q));
    }
    let post = if sa.uses_endmarker() {
        (0..n)
            .map(|q| out.add_state(format!("{}'", sa.state_name(q))))
            .collect()
    } else {
        Vec::new()
    };
    out.set_start(sa.start());
    let remap = |action: &Action, to_post: bool| {
        let m = |d: usize| if to_post { post[d] } else { d };
        match action {
            Action::Write(w, d) => Action::Write(encoding.encode(w), m(*d)),
            Action::In(d) => Action::In(m(*d)),
            Action::Out(d) => Action::Out(m(*d)),
            Action::Test { pos, neg } => Action::Test {
                pos: m(*pos),
                neg: m(*neg),
            },
        }
    };
    for r in sa.rules() {
        let added = match r.label {
            InputLabel::End => out.add_rule(r.src, InputLabel::Eps, remap(&r.action, true)),
            l => {
                if l.is_eps() && sa.uses_endmarker() {
                    out.add_rule(post[r.src], l, remap(&r.action, true))
                        .expect("valid rule");
                }
                out.add_rule(r.src, l, remap(&r.action, false))
            }
        };
        added.expect("valid rule");
    }
    for q in sa.accepting_states() {
        let target = if sa.uses_endmarker() { post[q] } else { q };
        out.set_accepting(target, true);
    }

    let dummy_final = !accepts_only_after_queries(&out);
    if dummy_final {
        let acc = out.add_state(fresh_name(&out, "acc"));
        let finals: Vec<usize> = out.accepting_states().collect();
        for q in finals {
            out.set_accepting(q, false);
            out.add_rule(q, InputLabel::Eps, Action::Test { pos: acc, neg: acc })
                .expect("valid rule");
        }
        out.set_accepting(acc, true);
    }
    Normalized {
        sa: out.trimmed(),
        encoding,
        dummy_final,
    }
}
