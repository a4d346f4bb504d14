use std::collections::HashMap;

use crate::alphabet::{words_up_to, Word};
use crate::automata::Nfa;
use crate::error::{Error, Result};
use crate::protocol::{gamma_of, Op, Protocol, ProtocolSymbols};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BruteVerdict {
    Witness(Protocol),
    NotFoundWithinBounds,
}

impl BruteVerdict {
    pub fn witness(&self) -> Option<&Protocol> {
        match self {
            BruteVerdict::Witness(p) => Some(p),
            BruteVerdict::NotFoundWithinBounds => None,
        }
    }
}

struct Search<'a> {
    a: &'a Nfa,
    ps: ProtocolSymbols,
    words: Vec<Word>,
    subsets: Vec<Vec<usize>>,
    subset_index: HashMap<Vec<usize>, usize>,
    // (subset, word, op) -> subset
    moves: HashMap<(usize, usize, Op), usize>,
    live: Vec<bool>,
    coreachable: Vec<bool>,
    // largest remaining depth already explored without success
    failed: HashMap<(usize, u64), usize>,
}

impl Search<'_> {
    fn intern(&mut self, s: Vec<usize>) -> usize {
        if let Some(&id) = self.subset_index.get(&s) {
            return id;
        }
        let id = self.subsets.len();
        self.live.push(s.iter().any(|&q| self.coreachable[q]));
        self.subset_index.insert(s.clone(), id);
        self.subsets.push(s);
        id
    }

    fn block(&mut self, from: usize, w: usize, op: Op) -> usize {
        if let Some(&d) = self.moves.get(&(from, w, op)) {
            return d;
        }
        let mut cur = self.a.step(&self.subsets[from], self.ps.hash());
        for &s in &self.words[w] {
            cur = self.a.step(&cur, s);
        }
        cur = self.a.step(&cur, self.ps.hash());
        cur = self.a.step(&cur, self.ps.op(op));
        let d = self.intern(cur);
        self.moves.insert((from, w, op), d);
        d
    }

    fn accepting(&self, s: usize) -> bool {
        self.subsets[s].iter().any(|&q| self.a.is_accepting(q))
    }

    fn dfs(&mut self, s: usize, set: u64, left: usize, path: &mut Vec<(usize, Op)>) -> bool {
        if !path.is_empty() && self.accepting(s) {
            return true;
        }
        if left == 0 || !self.live[s] {
            return false;
        }
        if self.failed.get(&(s, set)).is_some_and(|&d| d >= left) {
            return false;
        }
        for w in 0..self.words.len() {
            let bit = 1u64 << w;
            for op in Op::ALL {
                let next_set = match op {
                    Op::In => set | bit,
                    Op::Out => set & !bit,
                    Op::TestPos if set & bit == 0 => continue,
                    Op::TestNeg if set & bit != 0 => continue,
                    Op::TestPos | Op::TestNeg => set,
                };
                let d = self.block(s, w, op);
                if self.subsets[d].is_empty() {
                    continue;
                }
                path.push((w, op));
                if self.dfs(d, next_set, left - 1, path) {
                    return true;
                }
                path.pop();
            }
        }
        self.failed.insert((s, set), left);
        false
    }
}

/// Enumerates correct protocols with at most `max_blocks` blocks and query
/// words of length at most `max_word_len`, and returns one accepted by `a`.
/// Blocks are tried in shortlex word order, then `in`, `out`, `test+`,
/// `test-`; the search is depth-first.
pub fn brute_force_nrr(a: &Nfa, max_blocks: usize, max_word_len: usize) -> Result<BruteVerdict> {
    let gamma = gamma_of(a.alphabet())?;
    let words = words_up_to(&gamma, max_word_len);
    if words.len() > 64 {
        return Err(Error::Invalid(format!(
            "{} query words exceed the 64-word limit",
            words.len()
        )));
    }
    let coreachable = a.coreachable();
    let mut search = Search {
        a,
        ps: ProtocolSymbols::new(&gamma),
        words,
        subsets: Vec::new(),
        subset_index: HashMap::new(),
        moves: HashMap::new(),
        live: Vec::new(),
        coreachable,
        failed: HashMap::new(),
    };
    let start = search.intern(a.closure_of(a.initial().iter().copied()));
    let mut path = Vec::new();
    if search.dfs(start, 0, max_blocks, &mut path) {
        let p = Protocol::from_pairs(gamma, path.into_iter().map(|(w, op)| (search.words[w].clone(), op)));
        Ok(BruteVerdict::Witness(p))
    } else {
        Ok(BruteVerdict::NotFoundWithinBounds)
    }
}
