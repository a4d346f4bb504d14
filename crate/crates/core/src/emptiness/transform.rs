use std::collections::BTreeSet;

use crate::alphabet::Word;
use crate::emptiness::classify::classify_small_large;
use crate::emptiness::family::{smallest_outside, QueryLanguageFamily};
use crate::error::{Error, Result};
use crate::protocol::{check_correct, replay_sets, Op, Protocol, Verdict};

/// A protocol with one family index per block; block `k` must use a word of
/// language `types[k]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedProtocol {
    pub protocol: Protocol,
    pub types: Vec<usize>,
}

impl TypedProtocol {
    pub fn validate(&self, fam: &QueryLanguageFamily) -> Result<()> {
        if self.types.len() != self.protocol.len() {
            return Err(Error::InvalidTyping("one index per block is required".into()));
        }
        for (k, (b, &i)) in self.protocol.blocks().iter().zip(&self.types).enumerate() {
            if i >= fam.len() || !fam.language(i).accepts(&b.word) {
                return Err(Error::InvalidTyping(format!("block {} is not in language {i}", k + 1)));
            }
        }
        Ok(())
    }

    fn require_correct(&self) -> Result<()> {
        match check_correct(&self.protocol) {
            Verdict::Correct => Ok(()),
            Verdict::IncorrectAt(k) => Err(Error::IncorrectProtocol(k)),
        }
    }

    fn with_words(&self, words: Vec<Word>) -> TypedProtocol {
        let ops = self.protocol.blocks().iter().map(|b| b.op);
        TypedProtocol {
            protocol: Protocol::from_pairs(self.protocol.gamma().clone(), words.into_iter().zip(ops)),
            types: self.types.clone(),
        }
    }
}

/// Largest set content reached while replaying `p`.
pub fn max_set_size(p: &Protocol) -> usize {
    replay_sets(p).iter().map(|s| s.len()).max().unwrap_or(0)
}

/// Rewrites a correct typed protocol so that every set content holds at most
/// `N² + N` words: stable words are kept, unstable `in`/`test+` words are
/// replaced by the critical word of their language, and unstable
/// `out`/`test-` words by a word never inserted.
pub fn transform_bound_set(p: &TypedProtocol, fam: &QueryLanguageFamily) -> Result<TypedProtocol> {
    p.require_correct()?;
    p.validate(fam)?;
    let cls = classify_small_large(fam);
    let sets = replay_sets(&p.protocol);
    let unstable_in = |i: usize, s: &BTreeSet<Word>| s.iter().any(|w| !cls.is_stable(w) && fam.language(i).accepts(w));

    // critical[i]: the first unstable word of large language i to enter the set
    let mut critical: Vec<Option<Word>> = vec![None; fam.len()];
    for &i in &cls.large {
        if let Some(k) = sets.iter().position(|s| unstable_in(i, s)) {
            let b = &p.protocol.blocks()[k];
            debug_assert_eq!(b.op, Op::In);
            critical[i] = Some(b.word.clone());
        }
    }
    let critical_set: Vec<Word> = critical
        .iter()
        .flatten()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut excluded: Vec<Word> = cls.stable.iter().cloned().collect();
    excluded.extend(critical_set.iter().cloned());

    let mut words = Vec::with_capacity(p.protocol.len());
    for (b, &i) in p.protocol.blocks().iter().zip(&p.types) {
        let w = if cls.is_stable(&b.word) {
            b.word.clone()
        } else {
            match b.op {
                Op::In | Op::TestPos if critical_set.contains(&b.word) => b.word.clone(),
                Op::In | Op::TestPos => critical[i]
                    .clone()
                    .ok_or_else(|| Error::Invalid("no critical word for a large language".into()))?,
                Op::Out | Op::TestNeg => smallest_outside(fam.language(i), &excluded)
                    .ok_or_else(|| Error::Invalid("large language exhausted".into()))?,
            }
        };
        words.push(w);
    }
    Ok(p.with_words(words))
}

/// Rewrites a correct typed protocol so that every set content holds at most
/// one word per elementary type: in types with two or more words, `in` and
/// `test+` blocks use the smallest word and `out` and `test-` blocks the
/// second smallest.
pub fn transform_unique_per_type(p: &TypedProtocol, fam: &QueryLanguageFamily) -> Result<TypedProtocol> {
    p.require_correct()?;
    p.validate(fam)?;
    let types = fam.types();
    let mut words = Vec::with_capacity(p.protocol.len());
    for b in p.protocol.blocks() {
        let sig = fam.type_of(&b.word);
        let info = types
            .iter()
            .find(|t| t.signature == sig)
            .ok_or_else(|| Error::InvalidTyping("word outside every elementary type".into()))?;
        let w = match (info.v(), b.op) {
            (None, _) => b.word.clone(),
            (Some(_), Op::In | Op::TestPos) => info.u().clone(),
            (Some(v), Op::Out | Op::TestNeg) => v.clone(),
        };
        words.push(w);
    }
    Ok(p.with_words(words))
}

/// Largest number of words of one elementary type held at once while
/// replaying `p`.
pub fn max_words_per_type(p: &Protocol, fam: &QueryLanguageFamily) -> usize {
    replay_sets(p)
        .iter()
        .map(|s| {
            let mut sigs: Vec<Vec<usize>> = s.iter().map(|w| fam.type_of(w)).collect();
            sigs.sort();
            sigs.chunk_by(|a, b| a == b).map(|c| c.len()).max().unwrap_or(0)
        })
        .max()
        .unwrap_or(0)
}
