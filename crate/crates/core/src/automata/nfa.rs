use std::collections::{HashMap, VecDeque};
use std::sync::{Arc, OnceLock};

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::automata::dfa::Dfa;
use crate::error::{Error, Result};

/// Nondeterministic finite automaton with ε-transitions (label `None`).
///
/// Values are immutable once built; the subset construction is computed on
/// first use and cached.
#[derive(Debug, Clone)]
pub struct Nfa {
    alphabet: Alphabet,
    names: Vec<String>,
    trans: Vec<Vec<(Option<Symbol>, usize)>>,
    initial: Vec<usize>,
    accepting: Vec<bool>,
    det: OnceLock<Arc<Dfa>>,
}

impl Nfa {
    pub fn new(alphabet: Alphabet) -> Self {
        Nfa {
            alphabet,
            names: Vec::new(),
            trans: Vec::new(),
            initial: Vec::new(),
            accepting: Vec::new(),
            det: OnceLock::new(),
        }
    }

    /// Empty language.
    pub fn empty(alphabet: Alphabet) -> Self {
        let mut n = Nfa::new(alphabet);
        let q = n.add_state();
        n.add_initial(q);
        n
    }

    /// Σ*.
    pub fn universal(alphabet: Alphabet) -> Self {
        let mut n = Nfa::new(alphabet.clone());
        let q = n.add_state();
        n.add_initial(q);
        n.set_accepting(q, true);
        for s in alphabet.symbols() {
            n.add_transition(q, Some(s), q);
        }
        n
    }

    pub fn single_word(alphabet: Alphabet, w: &[Symbol]) -> Self {
        Self::from_words(alphabet, &[w.to_vec()])
    }

    /// A trie-shaped automaton for a finite set of words.
    pub fn from_words(alphabet: Alphabet, words: &[Word]) -> Self {
        let mut n = Nfa::new(alphabet);
        let root = n.add_state();
        n.add_initial(root);
        let mut children: HashMap<(usize, Symbol), usize> = HashMap::new();
        for w in words {
            let mut q = root;
            for &s in w {
                q = match children.get(&(q, s)) {
                    Some(&c) => c,
                    None => {
                        let c = n.add_state();
                        n.add_transition(q, Some(s), c);
                        children.insert((q, s), c);
                        c
                    }
                };
            }
            n.set_accepting(q, true);
        }
        n
    }

    pub fn add_state(&mut self) -> usize {
        let id = self.trans.len();
        self.add_named_state(format!("q{id}"))
    }

    pub fn add_named_state(&mut self, name: impl Into<String>) -> usize {
        self.det = OnceLock::new();
        self.names.push(name.into());
        self.trans.push(Vec::new());
        self.accepting.push(false);
        self.trans.len() - 1
    }

    pub fn add_transition(&mut self, src: usize, label: Option<Symbol>, dst: usize) {
        assert!(src < self.trans.len() && dst < self.trans.len(), "undeclared state");
        if let Some(s) = label {
            assert!(s.index() < self.alphabet.len(), "symbol outside alphabet");
        }
        self.det = OnceLock::new();
        if !self.trans[src].contains(&(label, dst)) {
            self.trans[src].push((label, dst));
        }
    }

    pub fn add_initial(&mut self, q: usize) {
        self.det = OnceLock::new();
        if let Err(pos) = self.initial.binary_search(&q) {
            self.initial.insert(pos, q);
        }
    }

    pub fn set_accepting(&mut self, q: usize, yes: bool) {
        self.det = OnceLock::new();
        self.accepting[q] = yes;
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.trans.len()
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.names[q]
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_states()).filter(|&q| self.accepting[q])
    }

    pub fn transitions_from(&self, q: usize) -> &[(Option<Symbol>, usize)] {
        &self.trans[q]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (usize, Option<Symbol>, usize)> + '_ {
        self.trans
            .iter()
            .enumerate()
            .flat_map(|(q, ts)| ts.iter().map(move |&(l, d)| (q, l, d)))
    }

    /// Sorted ε-closure of a set of states.
    pub fn closure_of(&self, states: impl IntoIterator<Item = usize>) -> Vec<usize> {
        let mut seen = vec![false; self.num_states()];
        let mut stack: Vec<usize> = Vec::new();
        for q in states {
            if !seen[q] {
                seen[q] = true;
                stack.push(q);
            }
        }
        while let Some(q) = stack.pop() {
            for &(l, d) in &self.trans[q] {
                if l.is_none() && !seen[d] {
                    seen[d] = true;
                    stack.push(d);
                }
            }
        }
        (0..self.num_states()).filter(|&q| seen[q]).collect()
    }

    /// Reads one symbol from a closed state set; the result is closed again.
    pub fn step(&self, set: &[usize], s: Symbol) -> Vec<usize> {
        let targets = set.iter().flat_map(|&q| {
            self.trans[q]
                .iter()
                .filter(move |(l, _)| *l == Some(s))
                .map(|&(_, d)| d)
        });
        self.closure_of(targets.collect::<Vec<_>>())
    }

    pub fn accepts(&self, w: &[Symbol]) -> bool {
        let mut cur = self.closure_of(self.initial.iter().copied());
        for &s in w {
            if s.index() >= self.alphabet.len() {
                return false;
            }
            cur = self.step(&cur, s);
            if cur.is_empty() {
                return false;
            }
        }
        cur.iter().any(|&q| self.accepting[q])
    }

    pub fn determinized(&self) -> Arc<Dfa> {
        self.det.get_or_init(|| Arc::new(Dfa::from_nfa(self))).clone()
    }

    /// Intersection over a common alphabet; only the reachable pair space is
    /// built.
    pub fn product(&self, other: &Nfa) -> Result<Nfa> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch(format!(
                "{:?} vs {:?}",
                self.alphabet, other.alphabet
            )));
        }
        let mut out = Nfa::new(self.alphabet.clone());
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut intern = |out: &mut Nfa, queue: &mut VecDeque<(usize, usize)>, p: (usize, usize)| {
            *index.entry(p).or_insert_with(|| {
                let id = out.add_named_state(format!("{}*{}", self.names[p.0], other.names[p.1]));
                out.set_accepting(id, self.accepting[p.0] && other.accepting[p.1]);
                queue.push_back(p);
                id
            })
        };
        for &a in &self.initial {
            for &b in &other.initial {
                let id = intern(&mut out, &mut queue, (a, b));
                out.add_initial(id);
            }
        }
        while let Some((a, b)) = queue.pop_front() {
            let src = intern(&mut out, &mut queue, (a, b));
            for &(la, da) in &self.trans[a] {
                match la {
                    None => {
                        let d = intern(&mut out, &mut queue, (da, b));
                        out.add_transition(src, None, d);
                    }
                    Some(s) => {
                        for &(lb, db) in &other.trans[b] {
                            if lb == Some(s) {
                                let d = intern(&mut out, &mut queue, (da, db));
                                out.add_transition(src, Some(s), d);
                            }
                        }
                    }
                }
            }
            for &(lb, db) in &other.trans[b] {
                if lb.is_none() {
                    let d = intern(&mut out, &mut queue, (a, db));
                    out.add_transition(src, None, d);
                }
            }
        }
        Ok(out)
    }

    /// Σ* minus the language, via subset construction.
    pub fn complement(&self) -> Nfa {
        self.determinized().complement().to_nfa()
    }

    pub fn is_empty(&self) -> bool {
        let co = self.coreachable();
        let mut seen = vec![false; self.num_states()];
        let mut stack: Vec<usize> = self.initial.clone();
        for &q in &stack {
            seen[q] = true;
        }
        while let Some(q) = stack.pop() {
            if co[q] {
                return false;
            }
            for &(_, d) in &self.trans[q] {
                if !seen[d] {
                    seen[d] = true;
                    stack.push(d);
                }
            }
        }
        true
    }

    /// Whether the language contains at least `k` words.
    pub fn count_at_least(&self, k: usize) -> bool {
        self.determinized().count_at_least(k)
    }

    pub fn is_infinite(&self) -> bool {
        self.determinized().is_infinite()
    }

    /// Up to `k` shortlex-smallest accepted words.
    pub fn smallest_words(&self, k: usize) -> Vec<Word> {
        self.determinized().smallest_words(k)
    }

    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack = self.initial.clone();
        for &q in &stack {
            seen[q] = true;
        }
        while let Some(q) = stack.pop() {
            for &(_, d) in &self.trans[q] {
                if !seen[d] {
                    seen[d] = true;
                    stack.push(d);
                }
            }
        }
        seen
    }

    pub fn coreachable(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut rev = vec![Vec::new(); n];
        for (q, _, d) in self.transitions() {
            rev[d].push(q);
        }
        let mut seen = self.accepting.clone();
        let mut stack: Vec<usize> = (0..n).filter(|&q| seen[q]).collect();
        while let Some(q) = stack.pop() {
            for &p in &rev[q] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// Restriction to states that are both reachable and co-reachable. An
    /// automaton with an empty language keeps a single non-accepting initial
    /// state.
    pub fn trim(&self) -> Nfa {
        let r = self.reachable();
        let c = self.coreachable();
        let keep: Vec<bool> = r.iter().zip(&c).map(|(a, b)| *a && *b).collect();
        if !self.initial.iter().any(|&q| keep[q]) {
            return Nfa::empty(self.alphabet.clone());
        }
        let mut map = vec![usize::MAX; self.num_states()];
        let mut out = Nfa::new(self.alphabet.clone());
        for q in 0..self.num_states() {
            if keep[q] {
                map[q] = out.add_named_state(self.names[q].clone());
                out.set_accepting(map[q], self.accepting[q]);
            }
        }
        for (q, l, d) in self.transitions() {
            if keep[q] && keep[d] {
                out.add_transition(map[q], l, map[d]);
            }
        }
        for &q in &self.initial {
            if keep[q] {
                out.add_initial(map[q]);
            }
        }
        out
    }

    /// Renames states to `q0, q1, ...` (used before serialization of derived
    /// automata whose generated names may collide).
    pub fn with_canonical_names(mut self) -> Nfa {
        for (i, n) in self.names.iter_mut().enumerate() {
            *n = format!("q{i}");
        }
        self
    }

    pub fn state_names(&self) -> &[String] {
        &self.names
    }

    /// Same automaton read over a larger alphabet that starts with the
    /// current one.
    pub fn with_alphabet(&self, alphabet: Alphabet) -> Result<Nfa> {
        let ok = self.alphabet.names().iter().zip(alphabet.names()).all(|(a, b)| a == b)
            && alphabet.len() >= self.alphabet.len();
        if !ok {
            return Err(Error::AlphabetMismatch(format!(
                "{:?} is not a prefix of {:?}",
                self.alphabet, alphabet
            )));
        }
        let mut out = self.clone();
        out.alphabet = alphabet;
        out.det = OnceLock::new();
        Ok(out)
    }
}

impl PartialEq for Nfa {
    fn eq(&self, other: &Self) -> bool {
        let norm = |n: &Nfa| {
            let mut t: Vec<_> = n.transitions().collect();
            t.sort();
            t
        };
        self.alphabet == other.alphabet
            && self.names == other.names
            && self.initial == other.initial
            && self.accepting == other.accepting
            && norm(self) == norm(other)
    }
}
