use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap, VecDeque};

use crate::alphabet::{shortlex, Alphabet, Symbol, Word};
use crate::automata::nfa::Nfa;

/// Complete deterministic automaton produced by subset construction.
#[derive(Debug, Clone)]
pub struct Dfa {
    alphabet: Alphabet,
    // trans[state][symbol]
    trans: Vec<Vec<usize>>,
    accepting: Vec<bool>,
    start: usize,
}

impl Dfa {
    pub fn from_nfa(nfa: &Nfa) -> Dfa {
        let alphabet = nfa.alphabet().clone();
        let start_set = nfa.closure_of(nfa.initial().iter().copied());
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut sets: Vec<Vec<usize>> = Vec::new();
        let mut trans: Vec<Vec<usize>> = Vec::new();
        index.insert(start_set.clone(), 0);
        sets.push(start_set);
        let mut queue = VecDeque::from([0usize]);
        while let Some(d) = queue.pop_front() {
            let mut row = Vec::with_capacity(alphabet.len());
            for s in alphabet.symbols() {
                let next = nfa.step(&sets[d], s);
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = sets.len();
                        index.insert(next.clone(), id);
                        sets.push(next);
                        queue.push_back(id);
                        id
                    }
                };
                row.push(id);
            }
            if trans.len() <= d {
                trans.resize(d + 1, Vec::new());
            }
            trans[d] = row;
        }
        trans.resize(sets.len(), Vec::new());
        let accepting = sets
            .iter()
            .map(|set| set.iter().any(|&q| nfa.is_accepting(q)))
            .collect();
        Dfa {
            alphabet,
            trans,
            accepting,
            start: 0,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.trans.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn next(&self, state: usize, s: Symbol) -> usize {
        self.trans[state][s.index()]
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    pub fn accepts(&self, w: &[Symbol]) -> bool {
        let mut d = self.start;
        for &s in w {
            d = self.next(d, s);
        }
        self.accepting[d]
    }

    pub fn complement(&self) -> Dfa {
        let mut out = self.clone();
        for a in out.accepting.iter_mut() {
            *a = !*a;
        }
        out
    }

    pub fn to_nfa(&self) -> Nfa {
        let mut nfa = Nfa::new(self.alphabet.clone());
        for _ in 0..self.num_states() {
            nfa.add_state();
        }
        for (d, row) in self.trans.iter().enumerate() {
            for (i, &e) in row.iter().enumerate() {
                nfa.add_transition(d, Some(Symbol(i as u32)), e);
            }
            if self.accepting[d] {
                nfa.set_accepting(d, true);
            }
        }
        nfa.add_initial(self.start);
        nfa
    }

    fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        let mut stack = vec![self.start];
        seen[self.start] = true;
        while let Some(d) = stack.pop() {
            for &e in &self.trans[d] {
                if !seen[e] {
                    seen[e] = true;
                    stack.push(e);
                }
            }
        }
        seen
    }

    fn coreachable(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut rev = vec![Vec::new(); n];
        for (d, row) in self.trans.iter().enumerate() {
            for &e in row {
                rev[e].push(d);
            }
        }
        let mut seen = self.accepting.clone();
        let mut stack: Vec<usize> = (0..n).filter(|&d| seen[d]).collect();
        while let Some(d) = stack.pop() {
            for &p in &rev[d] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// States lying on some path from the start to an accepting state.
    pub fn useful(&self) -> Vec<bool> {
        let r = self.reachable();
        let c = self.coreachable();
        r.iter().zip(c).map(|(a, b)| *a && b).collect()
    }

    pub fn is_empty(&self) -> bool {
        !self.useful()[self.start]
    }

    /// `Some(order)` with a topological order of the useful states, or `None`
    /// when the useful part has a cycle (the language is infinite).
    fn useful_topological_order(&self, useful: &[bool]) -> Option<Vec<usize>> {
        let n = self.num_states();
        let mut indeg = vec![0usize; n];
        for d in 0..n {
            if !useful[d] {
                continue;
            }
            for &e in &self.trans[d] {
                if useful[e] {
                    indeg[e] += 1;
                }
            }
        }
        let mut queue: VecDeque<usize> = (0..n).filter(|&d| useful[d] && indeg[d] == 0).collect();
        let mut order = Vec::new();
        while let Some(d) = queue.pop_front() {
            order.push(d);
            for &e in &self.trans[d] {
                if useful[e] {
                    indeg[e] -= 1;
                    if indeg[e] == 0 {
                        queue.push_back(e);
                    }
                }
            }
        }
        let total = useful.iter().filter(|&&u| u).count();
        (order.len() == total).then_some(order)
    }

    pub fn is_infinite(&self) -> bool {
        let useful = self.useful();
        useful[self.start] && self.useful_topological_order(&useful).is_none()
    }

    /// Whether the language has at least `k` words.
    pub fn count_at_least(&self, k: usize) -> bool {
        if k == 0 {
            return true;
        }
        let useful = self.useful();
        if !useful[self.start] {
            return false;
        }
        let Some(order) = self.useful_topological_order(&useful) else {
            return true;
        };
        // paths[d] = number of words leading from the start to d, capped at k
        let mut paths = vec![0usize; self.num_states()];
        paths[self.start] = 1;
        let mut total = 0usize;
        for d in order {
            if self.accepting[d] {
                total = (total + paths[d]).min(k);
            }
            for &e in &self.trans[d] {
                if useful[e] {
                    paths[e] = (paths[e] + paths[d]).min(k);
                }
            }
        }
        total >= k
    }

    /// For every state, up to `k` shortlex-smallest words leading to it from
    /// the start.
    pub fn smallest_words_per_state(&self, k: usize) -> Vec<Vec<Word>> {
        smallest_words_per_state(self.num_states(), self.start, self.alphabet.len(), k, |d, s| {
            Some(self.trans[d][s])
        })
    }

    /// Up to `k` shortlex-smallest accepted words.
    pub fn smallest_words(&self, k: usize) -> Vec<Word> {
        let useful = self.useful();
        let per_state = smallest_words_per_state(self.num_states(), self.start, self.alphabet.len(), k, |d, s| {
            let e = self.trans[d][s];
            useful[e].then_some(e)
        });
        let mut all: Vec<Word> = per_state
            .into_iter()
            .enumerate()
            .filter(|(d, _)| self.accepting[*d])
            .flat_map(|(_, ws)| ws)
            .collect();
        all.sort_by(|a, b| shortlex(a, b));
        all.truncate(k);
        all
    }
}

#[derive(PartialEq, Eq)]
struct Candidate {
    word: Word,
    state: usize,
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        shortlex(&self.word, &other.word).then(self.state.cmp(&other.state))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// k-shortest-words search over a deterministic transition structure.
///
/// Appending a symbol preserves shortlex order, so the `k` smallest words of a
/// state always extend one of the `k` smallest words of a predecessor; each
/// state is therefore expanded at most `k` times.
pub(crate) fn smallest_words_per_state(
    num_states: usize,
    start: usize,
    num_symbols: usize,
    k: usize,
    next: impl Fn(usize, usize) -> Option<usize>,
) -> Vec<Vec<Word>> {
    let mut found: Vec<Vec<Word>> = vec![Vec::new(); num_states];
    if k == 0 {
        return found;
    }
    let mut heap = BinaryHeap::new();
    heap.push(Reverse(Candidate {
        word: Vec::new(),
        state: start,
    }));
    while let Some(Reverse(Candidate { word, state })) = heap.pop() {
        if found[state].len() >= k {
            continue;
        }
        for s in 0..num_symbols {
            if let Some(e) = next(state, s) {
                if found[e].len() < k {
                    let mut w = word.clone();
                    w.push(Symbol(s as u32));
                    heap.push(Reverse(Candidate { word: w, state: e }));
                }
            }
        }
        found[state].push(word);
    }
    found
}
