use std::collections::{HashMap, VecDeque};

use crate::alphabet::{Alphabet, Symbol};
use crate::automata::nfa::Nfa;
use crate::error::{Error, Result};

/// One transducer move: reads at most one input symbol and writes at most one
/// output symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FstTransition {
    pub read: Option<Symbol>,
    pub write: Option<Symbol>,
    pub dst: usize,
}

/// Finite-state transducer. Multi-symbol moves given to
/// [`Fst::add_transition`] are split through fresh states, so every stored
/// transition reads and writes at most one symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct Fst {
    input: Alphabet,
    output: Alphabet,
    names: Vec<String>,
    trans: Vec<Vec<FstTransition>>,
    initial: usize,
    accepting: Vec<bool>,
}

impl Fst {
    /// A transducer with a single (initial, non-accepting) state.
    pub fn new(input: Alphabet, output: Alphabet) -> Self {
        let mut t = Fst {
            input,
            output,
            names: Vec::new(),
            trans: Vec::new(),
            initial: 0,
            accepting: Vec::new(),
        };
        t.add_state();
        t
    }

    pub fn add_state(&mut self) -> usize {
        let name = format!("t{}", self.trans.len());
        self.add_named_state(name)
    }

    pub fn add_named_state(&mut self, name: impl Into<String>) -> usize {
        self.names.push(name.into());
        self.trans.push(Vec::new());
        self.accepting.push(false);
        self.trans.len() - 1
    }

    pub fn rename_state(&mut self, q: usize, name: impl Into<String>) {
        self.names[q] = name.into();
    }

    pub fn set_initial(&mut self, q: usize) {
        self.initial = q;
    }

    pub fn set_accepting(&mut self, q: usize, yes: bool) {
        self.accepting[q] = yes;
    }

    /// Adds `src --read/write--> dst`, splitting through fresh states when
    /// either side is longer than one symbol.
    pub fn add_transition(&mut self, src: usize, read: &[Symbol], write: &[Symbol], dst: usize) {
        assert!(read.iter().all(|s| s.index() < self.input.len()));
        assert!(write.iter().all(|s| s.index() < self.output.len()));
        let steps = read.len().max(write.len()).max(1);
        let mut cur = src;
        for i in 0..steps {
            let next = if i + 1 == steps { dst } else { self.add_state() };
            let t = FstTransition {
                read: read.get(i).copied(),
                write: write.get(i).copied(),
                dst: next,
            };
            if !self.trans[cur].contains(&t) {
                self.trans[cur].push(t);
            }
            cur = next;
        }
    }

    pub fn input_alphabet(&self) -> &Alphabet {
        &self.input
    }

    pub fn output_alphabet(&self) -> &Alphabet {
        &self.output
    }

    pub fn num_states(&self) -> usize {
        self.trans.len()
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.names[q]
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn transitions_from(&self, q: usize) -> &[FstTransition] {
        &self.trans[q]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (usize, FstTransition)> + '_ {
        self.trans
            .iter()
            .enumerate()
            .flat_map(|(q, ts)| ts.iter().map(move |&t| (q, t)))
    }

    /// NFA over the output alphabet recognizing `T(w)`.
    pub fn apply(&self, w: &[Symbol]) -> Result<Nfa> {
        if let Some(s) = w.iter().find(|s| s.index() >= self.input.len()) {
            return Err(Error::UnknownSymbol(format!("#{}", s.0)));
        }
        let mut out = Nfa::new(self.output.clone());
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut intern = |out: &mut Nfa, queue: &mut VecDeque<((usize, usize), usize)>, key: (usize, usize)| {
            *index.entry(key).or_insert_with(|| {
                let id = out.add_state();
                out.set_accepting(id, self.accepting[key.0] && key.1 == w.len());
                queue.push_back((key, id));
                id
            })
        };
        let start = intern(&mut out, &mut queue, (self.initial, 0));
        out.add_initial(start);
        while let Some(((q, i), src)) = queue.pop_front() {
            for t in &self.trans[q] {
                let j = match t.read {
                    None => i,
                    Some(s) if i < w.len() && w[i] == s => i + 1,
                    Some(_) => continue,
                };
                let dst = intern(&mut out, &mut queue, (t.dst, j));
                out.add_transition(src, t.write, dst);
            }
        }
        Ok(out.trim())
    }

    /// Swaps reads and writes: `v ∈ T(u)` iff `u ∈ inverse(T)(v)`.
    pub fn inverse(&self) -> Fst {
        Fst {
            input: self.output.clone(),
            output: self.input.clone(),
            names: self.names.clone(),
            trans: self
                .trans
                .iter()
                .map(|ts| {
                    ts.iter()
                        .map(|t| FstTransition {
                            read: t.write,
                            write: t.read,
                            dst: t.dst,
                        })
                        .collect()
                })
                .collect(),
            initial: self.initial,
            accepting: self.accepting.clone(),
        }
    }

    /// NFA over the output alphabet recognizing `T(Σ*)`.
    pub fn range(&self) -> Nfa {
        let mut out = Nfa::new(self.output.clone());
        for q in 0..self.num_states() {
            out.add_named_state(self.names[q].clone());
            out.set_accepting(q, self.accepting[q]);
        }
        for (q, t) in self.transitions() {
            out.add_transition(q, t.write, t.dst);
        }
        out.add_initial(self.initial);
        out
    }

    /// Whether `v ∈ T(u)`.
    pub fn relates(&self, u: &[Symbol], v: &[Symbol]) -> bool {
        self.apply(u).map(|n| n.accepts(v)).unwrap_or(false)
    }
}
