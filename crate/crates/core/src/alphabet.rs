//! Symbols, words and ordered alphabets.
//!
//! A [`Symbol`] is an index into an [`Alphabet`]. The declaration order of an
//! alphabet is the total symbol order used by every length-lexicographic
//! enumeration in the crate, so witnesses are reproducible.
//!
//! Words are written in text either by concatenating symbol names (decoded by
//! greedy longest match) or, when a symbol name is longer than one character,
//! by joining names with `.`. The token `-` stands for the empty word.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Index of a symbol within its alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u32);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

pub type Word = Vec<Symbol>;

/// Names that can never be symbols because the text formats give them meaning.
pub const RESERVED_NAMES: &[&str] = &["eps", "end", "-"];

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Arc<Vec<String>>,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty()
                || RESERVED_NAMES.contains(&n.as_str())
                || n.chars().any(|c| c.is_whitespace() || c == '.' || c == ';')
            {
                return Err(Error::Invalid(format!("illegal symbol name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(Error::Invalid(format!("duplicate symbol `{n}`")));
            }
        }
        Ok(Alphabet { names: Arc::new(names) })
    }

    /// Alphabet from a whitespace-separated list, e.g. `"a b"`.
    pub fn parse_list(s: &str) -> Result<Self> {
        Self::new(s.split_whitespace())
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.names.len() as u32).map(Symbol)
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.names[s.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.names.iter().position(|n| n == name).map(|i| Symbol(i as u32))
    }

    pub fn expect_symbol(&self, name: &str) -> Result<Symbol> {
        self.symbol(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    fn single_char(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }

    /// Decodes a word token. `-` and the empty string are the empty word;
    /// tokens containing `.` are split on it; otherwise names are matched
    /// greedily, longest first.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        if text.is_empty() || text == "-" {
            return Ok(Vec::new());
        }
        if text.contains('.') {
            return text
                .split('.')
                .filter(|t| !t.is_empty())
                .map(|t| self.expect_symbol(t))
                .collect();
        }
        let mut out = Vec::new();
        let mut rest = text;
        while !rest.is_empty() {
            let best = self
                .names
                .iter()
                .enumerate()
                .filter(|(_, n)| rest.starts_with(n.as_str()))
                .max_by_key(|(_, n)| n.len());
            match best {
                Some((i, n)) => {
                    out.push(Symbol(i as u32));
                    rest = &rest[n.len()..];
                }
                None => {
                    let c = rest.chars().next().unwrap();
                    return Err(Error::UnknownSymbol(c.to_string()));
                }
            }
        }
        Ok(out)
    }

    /// Encodes a word as a single token that [`Alphabet::parse_word`] reads back.
    pub fn format_word(&self, w: &[Symbol]) -> String {
        if w.is_empty() {
            return "-".to_string();
        }
        self.join_word(w)
    }

    /// Like [`Alphabet::format_word`] but the empty word is the empty string.
    pub fn join_word(&self, w: &[Symbol]) -> String {
        let sep = if self.single_char() { "" } else { "." };
        w.iter().map(|&s| self.name(s)).collect::<Vec<_>>().join(sep)
    }

    pub fn contains_word(&self, w: &[Symbol]) -> bool {
        w.iter().all(|s| s.index() < self.len())
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.names.iter()).finish()
    }
}

/// Length-lexicographic ("shortlex") order on words.
pub fn shortlex(a: &[Symbol], b: &[Symbol]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// All words over `alphabet` of length at most `max_len`, in shortlex order.
pub fn words_up_to(alphabet: &Alphabet, max_len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Word> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for w in &layer {
            for s in alphabet.symbols() {
                let mut v = w.clone();
                v.push(s);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
