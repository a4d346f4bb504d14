use std::collections::BTreeSet;
use std::sync::Arc;

use crate::alphabet::{Symbol, Word};
use crate::error::{Error, Result};
use crate::sa::{Action, InputLabel, SetAutomaton};

/// A snapshot of a run: current state, input position, tape and set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub state: usize,
    /// The whole input, including the trailing endmarker when the automaton
    /// uses one.
    pub input: Arc<[InputLabel]>,
    pub pos: usize,
    pub tape: Word,
    pub set: BTreeSet<Word>,
}

impl Configuration {
    /// `(s0, w, ε, ∅)`.
    pub fn initial(sa: &SetAutomaton, w: &[Symbol]) -> Result<Configuration> {
        if !sa.input_alphabet().contains_word(w) {
            return Err(Error::UnknownSymbol("input symbol outside the input alphabet".into()));
        }
        let mut input: Vec<InputLabel> = w.iter().map(|&s| InputLabel::Sym(s)).collect();
        if sa.uses_endmarker() {
            input.push(InputLabel::End);
        }
        Ok(Configuration {
            state: sa.start(),
            input: input.into(),
            pos: 0,
            tape: Vec::new(),
            set: BTreeSet::new(),
        })
    }

    pub fn remaining(&self) -> &[InputLabel] {
        &self.input[self.pos..]
    }

    pub fn is_accepting(&self, sa: &SetAutomaton) -> bool {
        sa.is_accepting(self.state) && self.pos == self.input.len()
    }

    pub fn is_enabled(&self, sa: &SetAutomaton, rule: usize) -> bool {
        let r = sa.rule(rule);
        r.src == self.state
            && match r.label {
                InputLabel::Eps => true,
                l => self.input.get(self.pos) == Some(&l),
            }
    }

    pub fn enabled_rules<'a>(&'a self, sa: &'a SetAutomaton) -> impl Iterator<Item = usize> + 'a {
        sa.rules_from(self.state)
            .iter()
            .copied()
            .filter(move |&i| self.is_enabled(sa, i))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOutcome {
    pub config: Configuration,
    /// For a test rule, whether the tape word was in the set.
    pub test_result: Option<bool>,
}

/// Applies one rule to a configuration.
pub fn step(sa: &SetAutomaton, c: &Configuration, rule: usize) -> Result<StepOutcome> {
    if rule >= sa.rules().len() || !c.is_enabled(sa, rule) {
        return Err(Error::RuleNotEnabled { rule });
    }
    let r = sa.rule(rule);
    let mut next = c.clone();
    if !r.label.is_eps() {
        next.pos += 1;
    }
    let mut test_result = None;
    match &r.action {
        Action::Write(w, d) => {
            next.tape.extend_from_slice(w);
            next.state = *d;
        }
        Action::In(d) => {
            next.set.insert(std::mem::take(&mut next.tape));
            next.state = *d;
        }
        Action::Out(d) => {
            next.set.remove(&next.tape);
            next.tape.clear();
            next.state = *d;
        }
        Action::Test { pos, neg } => {
            let hit = next.set.contains(&next.tape);
            next.tape.clear();
            next.state = if hit { *pos } else { *neg };
            test_result = Some(hit);
        }
    }
    Ok(StepOutcome {
        config: next,
        test_result,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;

    fn machine() -> (SetAutomaton, [usize; 4]) {
        let input = Alphabet::new(["x"]).unwrap();
        let work = Alphabet::new(["0", "1"]).unwrap();
        let mut sa = SetAutomaton::new(input, work, false);
        let s = sa.add_state("s");
        let i = sa.add_rule(s, InputLabel::Eps, Action::In(s)).unwrap();
        let o = sa.add_rule(s, InputLabel::Eps, Action::Out(s)).unwrap();
        let t = sa
            .add_rule(s, InputLabel::Eps, Action::Test { pos: s, neg: s })
            .unwrap();
        let w = sa
            .add_rule(s, InputLabel::Sym(Symbol(0)), Action::Write(vec![Symbol(0)], s))
            .unwrap();
        (sa, [i, o, t, w])
    }

    fn at(sa: &SetAutomaton, tape: &str, set: &[&str]) -> Configuration {
        let mut c = Configuration::initial(sa, &[]).unwrap();
        c.tape = sa.work_alphabet().parse_word(tape).unwrap();
        c.set = set.iter().map(|w| sa.work_alphabet().parse_word(w).unwrap()).collect();
        c
    }

    #[test]
    fn in_inserts_and_clears() {
        let (sa, [i, ..]) = machine();
        let out = step(&sa, &at(&sa, "01", &[]), i).unwrap().config;
        assert_eq!(out.set, at(&sa, "", &["01"]).set);
        assert!(out.tape.is_empty());
    }

    #[test]
    fn out_removes_only_the_tape_word() {
        let (sa, [_, o, ..]) = machine();
        let out = step(&sa, &at(&sa, "01", &["01", "10"]), o).unwrap().config;
        assert_eq!(out.set, at(&sa, "", &["10"]).set);
    }

    #[test]
    fn test_takes_negative_branch_and_keeps_set() {
        let (sa, [_, _, t, _]) = machine();
        let c = at(&sa, "01", &["10"]);
        let out = step(&sa, &c, t).unwrap();
        assert_eq!(out.test_result, Some(false));
        assert_eq!(out.config.set, c.set);
    }

    #[test]
    fn write_needs_matching_input() {
        let (sa, [.., w]) = machine();
        let c = at(&sa, "", &[]);
        assert_eq!(step(&sa, &c, w), Err(Error::RuleNotEnabled { rule: w }));
    }
}
