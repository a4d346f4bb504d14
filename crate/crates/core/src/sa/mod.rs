//! The set-automaton model.
//!
//! A set automaton reads its input one way, writes words onto a work tape and
//! maintains a finite set of work-tape words. Query operations (`in`, `out`,
//! `test`) act on the set with the current tape word and then erase the tape.

mod config;
mod run;
pub mod text;

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::automata::Nfa;
use crate::error::{Error, Result};

pub use config::{step, Configuration, StepOutcome};
pub use run::{
    extract_run_protocol, halting_budget, replay_certificate, run_dsa, run_nsa_bounded, verify_certificate, CertStep,
    DsaOutcome, DsaRun, NsaOutcome, NsaSearch, RunCertificate, Trace, TraceStep,
};

/// What a rule consumes from the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InputLabel {
    Eps,
    Sym(Symbol),
    End,
}

impl InputLabel {
    pub fn is_eps(self) -> bool {
        self == InputLabel::Eps
    }
}

/// Effect of a rule. Targets are state indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Action {
    Write(Word, usize),
    In(usize),
    Out(usize),
    Test { pos: usize, neg: usize },
}

impl Action {
    pub fn is_query(&self) -> bool {
        !matches!(self, Action::Write(..))
    }

    pub fn targets(&self) -> Vec<usize> {
        match *self {
            Action::Write(_, d) | Action::In(d) | Action::Out(d) => vec![d],
            Action::Test { pos, neg } => vec![pos, neg],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub src: usize,
    pub label: InputLabel,
    pub action: Action,
}

#[derive(Clone, PartialEq, Eq)]
pub struct SetAutomaton {
    input: Alphabet,
    work: Alphabet,
    endmarker: bool,
    names: Vec<String>,
    rules: Vec<Rule>,
    by_state: Vec<Vec<usize>>,
    start: usize,
    accepting: Vec<bool>,
}

impl SetAutomaton {
    /// An automaton with no states; the first added state becomes the start
    /// state unless [`SetAutomaton::set_start`] says otherwise.
    pub fn new(input: Alphabet, work: Alphabet, endmarker: bool) -> Self {
        SetAutomaton {
            input,
            work,
            endmarker,
            names: Vec::new(),
            rules: Vec::new(),
            by_state: Vec::new(),
            start: 0,
            accepting: Vec::new(),
        }
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> usize {
        self.names.push(name.into());
        self.by_state.push(Vec::new());
        self.accepting.push(false);
        self.names.len() - 1
    }

    pub fn set_start(&mut self, q: usize) {
        self.start = q;
    }

    pub fn set_accepting(&mut self, q: usize, yes: bool) {
        self.accepting[q] = yes;
    }

    /// Adds a rule after validating states and symbols. Identical rules are
    /// stored once; the index of the stored rule is returned.
    pub fn add_rule(&mut self, src: usize, label: InputLabel, action: Action) -> Result<usize> {
        let n = self.num_states();
        if src >= n || action.targets().iter().any(|&d| d >= n) {
            return Err(Error::Invalid("rule refers to an undeclared state".into()));
        }
        match label {
            InputLabel::Sym(s) if s.index() >= self.input.len() => {
                return Err(Error::UnknownSymbol(format!("#{}", s.0)))
            }
            InputLabel::End if !self.endmarker => {
                return Err(Error::Invalid(
                    "endmarker rule in an automaton without endmarker".into(),
                ))
            }
            _ => {}
        }
        if let Action::Write(w, _) = &action {
            if !self.work.contains_word(w) {
                return Err(Error::Invalid("written word is not over the work alphabet".into()));
            }
        }
        let rule = Rule { src, label, action };
        if let Some(i) = self.by_state[src].iter().copied().find(|&i| self.rules[i] == rule) {
            return Ok(i);
        }
        self.rules.push(rule);
        self.by_state[src].push(self.rules.len() - 1);
        Ok(self.rules.len() - 1)
    }

    pub fn input_alphabet(&self) -> &Alphabet {
        &self.input
    }

    pub fn work_alphabet(&self) -> &Alphabet {
        &self.work
    }

    pub fn uses_endmarker(&self) -> bool {
        self.endmarker
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.names[q]
    }

    pub fn state_names(&self) -> &[String] {
        &self.names
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_states()).filter(|&q| self.accepting[q])
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, i: usize) -> &Rule {
        &self.rules[i]
    }

    /// Indices of the rules leaving `q`.
    pub fn rules_from(&self, q: usize) -> &[usize] {
        &self.by_state[q]
    }

    pub fn max_write_len(&self) -> usize {
        self.rules
            .iter()
            .map(|r| match &r.action {
                Action::Write(w, _) => w.len(),
                _ => 0,
            })
            .max()
            .unwrap_or(0)
    }

    /// Structural determinism: at most one rule per (state, label), and a
    /// state with an ε-rule has no other rule.
    pub fn check_deterministic(&self) -> Result<()> {
        for q in 0..self.num_states() {
            let labels: Vec<InputLabel> = self.by_state[q].iter().map(|&i| self.rules[i].label).collect();
            for (i, l) in labels.iter().enumerate() {
                if labels[..i].contains(l) {
                    return Err(Error::NotDeterministic(format!(
                        "state `{}` has two rules on the same label",
                        self.names[q]
                    )));
                }
            }
            if labels.contains(&InputLabel::Eps) && labels.len() > 1 {
                return Err(Error::NotDeterministic(format!(
                    "state `{}` mixes an ε-rule with other rules",
                    self.names[q]
                )));
            }
        }
        Ok(())
    }

    pub fn is_deterministic(&self) -> bool {
        self.check_deterministic().is_ok()
    }

    /// Whether the graph of ε-rules has a cycle.
    pub fn has_eps_loop(&self) -> bool {
        let n = self.num_states();
        let succ: Vec<Vec<usize>> = (0..n)
            .map(|q| {
                self.by_state[q]
                    .iter()
                    .filter(|&&i| self.rules[i].label.is_eps())
                    .flat_map(|&i| self.rules[i].action.targets())
                    .collect()
            })
            .collect();
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut color = vec![0u8; n];
        for root in 0..n {
            if color[root] != 0 {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            color[root] = 1;
            while let Some(&mut (q, ref mut i)) = stack.last_mut() {
                if *i < succ[q].len() {
                    let d = succ[q][*i];
                    *i += 1;
                    match color[d] {
                        0 => {
                            color[d] = 1;
                            stack.push((d, 0));
                        }
                        1 => return true,
                        _ => {}
                    }
                } else {
                    color[q] = 2;
                    stack.pop();
                }
            }
        }
        false
    }

    /// Product with a regular filter over the input alphabet: the result
    /// accepts `L(self) ∩ L(filter)`. Determinism is preserved.
    pub fn intersect_regular(&self, filter: &Nfa) -> Result<SetAutomaton> {
        if filter.alphabet() != &self.input {
            return Err(Error::AlphabetMismatch(format!(
                "{:?} vs {:?}",
                filter.alphabet(),
                self.input
            )));
        }
        let dfa = filter.determinized();
        let mut out = SetAutomaton::new(self.input.clone(), self.work.clone(), self.endmarker);
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut queue = VecDeque::new();
        let mut intern = |out: &mut SetAutomaton, queue: &mut VecDeque<(usize, usize, usize)>, key: (usize, usize)| {
            *index.entry(key).or_insert_with(|| {
                let id = out.add_state(format!("{}.{}", self.names[key.0], key.1));
                out.set_accepting(id, self.accepting[key.0] && dfa.is_accepting(key.1));
                queue.push_back((key.0, key.1, id));
                id
            })
        };
        let start = intern(&mut out, &mut queue, (self.start, dfa.start()));
        out.set_start(start);
        while let Some((q, d, src)) = queue.pop_front() {
            for &i in &self.by_state[q] {
                let rule = &self.rules[i];
                let d2 = match rule.label {
                    InputLabel::Sym(s) => dfa.next(d, s),
                    _ => d,
                };
                let action = match &rule.action {
                    Action::Write(w, t) => Action::Write(w.clone(), intern(&mut out, &mut queue, (*t, d2))),
                    Action::In(t) => Action::In(intern(&mut out, &mut queue, (*t, d2))),
                    Action::Out(t) => Action::Out(intern(&mut out, &mut queue, (*t, d2))),
                    Action::Test { pos, neg } => Action::Test {
                        pos: intern(&mut out, &mut queue, (*pos, d2)),
                        neg: intern(&mut out, &mut queue, (*neg, d2)),
                    },
                };
                out.add_rule(src, rule.label, action)?;
            }
        }
        Ok(out)
    }

    /// States reachable from the start along rules.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.num_states()];
        if self.num_states() == 0 {
            return seen;
        }
        let mut stack = vec![self.start];
        seen[self.start] = true;
        while let Some(q) = stack.pop() {
            for &i in &self.by_state[q] {
                for d in self.rules[i].action.targets() {
                    if !seen[d] {
                        seen[d] = true;
                        stack.push(d);
                    }
                }
            }
        }
        seen
    }

    /// States from which some accepting state is reachable along rules.
    pub fn coreachable(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut rev = vec![Vec::new(); n];
        for r in &self.rules {
            for d in r.action.targets() {
                rev[d].push(r.src);
            }
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

    /// Drops unreachable states and rules that can never lead to acceptance.
    /// A test rule stays when one of its branches is still useful. The
    /// language and determinism are preserved.
    pub fn trimmed(&self) -> SetAutomaton {
        let reach = self.reachable();
        let co = self.coreachable();
        let mut map = vec![usize::MAX; self.num_states()];
        let mut out = SetAutomaton::new(self.input.clone(), self.work.clone(), self.endmarker);
        for q in 0..self.num_states() {
            if reach[q] {
                map[q] = out.add_state(self.names[q].clone());
                out.set_accepting(map[q], self.accepting[q]);
            }
        }
        if self.num_states() > 0 {
            out.set_start(map[self.start]);
        }
        for r in &self.rules {
            if !reach[r.src] || !co[r.src] {
                continue;
            }
            let action = match &r.action {
                Action::Write(w, d) if co[*d] => Action::Write(w.clone(), map[*d]),
                Action::In(d) if co[*d] => Action::In(map[*d]),
                Action::Out(d) if co[*d] => Action::Out(map[*d]),
                Action::Test { pos, neg } if co[*pos] || co[*neg] => Action::Test {
                    pos: map[*pos],
                    neg: map[*neg],
                },
                _ => continue,
            };
            out.add_rule(map[r.src], r.label, action)
                .expect("trimmed rule is valid");
        }
        out
    }

    /// Human-readable label, as used in the text format.
    pub fn label_name(&self, l: InputLabel) -> &str {
        match l {
            InputLabel::Eps => "eps",
            InputLabel::End => "end",
            InputLabel::Sym(s) => self.input.name(s),
        }
    }
}

impl fmt::Debug for SetAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::write_sa(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> SetAutomaton {
        let al = Alphabet::new(["a"]).unwrap();
        let mut sa = SetAutomaton::new(al.clone(), al, false);
        let p = sa.add_state("p");
        let q = sa.add_state("q");
        sa.set_accepting(q, true);
        sa.add_rule(p, InputLabel::Sym(Symbol(0)), Action::Write(vec![Symbol(0)], p))
            .unwrap();
        sa.add_rule(p, InputLabel::End, Action::In(q)).unwrap_err();
        sa
    }

    #[test]
    fn determinism_check() {
        let mut sa = tiny();
        assert!(sa.is_deterministic());
        sa.add_rule(0, InputLabel::Eps, Action::In(1)).unwrap();
        assert!(!sa.is_deterministic());
    }

    #[test]
    fn eps_loops_are_found() {
        let mut sa = tiny();
        assert!(!sa.has_eps_loop());
        sa.add_rule(1, InputLabel::Eps, Action::Write(vec![], 1)).unwrap();
        assert!(sa.has_eps_loop());
    }

    #[test]
    fn duplicate_rules_are_merged() {
        let mut sa = tiny();
        let before = sa.rules().len();
        sa.add_rule(0, InputLabel::Sym(Symbol(0)), Action::Write(vec![Symbol(0)], 0))
            .unwrap();
        assert_eq!(sa.rules().len(), before);
    }
}
