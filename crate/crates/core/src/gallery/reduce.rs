use std::collections::{HashMap, VecDeque};

use crate::alphabet::Symbol;
use crate::error::{Error, Result};
use crate::normalform::remove_eps_loops;
use crate::sa::{Action, InputLabel, SetAutomaton};

/// An automaton accepting `{w}` minus `L(sa)`, so that `w ∈ L(sa)` iff the
/// result has an empty language.
///
/// The result follows the unique run of `sa` along `w`. A run that accepts
/// leads into a dead state; a run that gets stuck switches to reading the
/// rest of `w` and then accepts. ε-loops are removed first so that every run
/// halts.
pub fn membership_to_emptiness(sa: &SetAutomaton, w: &[Symbol]) -> Result<SetAutomaton> {
    sa.check_deterministic()?;
    if !sa.input_alphabet().contains_word(w) {
        return Err(Error::UnknownSymbol(format!("{w:?}")));
    }
    let looped;
    let sa = if sa.has_eps_loop() {
        looped = remove_eps_loops(sa)?;
        &looped
    } else {
        sa
    };
    let mut word: Vec<InputLabel> = w.iter().map(|&s| InputLabel::Sym(s)).collect();
    if sa.uses_endmarker() {
        word.push(InputLabel::End);
    }
    let len = word.len();

    let mut out = SetAutomaton::new(
        sa.input_alphabet().clone(),
        sa.work_alphabet().clone(),
        sa.uses_endmarker(),
    );
    // the tail chain: state i has read word[..i] after the run got stuck
    let tail: Vec<usize> = (0..=len).map(|i| out.add_state(format!("rest{i}"))).collect();
    out.set_accepting(tail[len], true);
    for i in 0..len {
        out.add_rule(tail[i], word[i], Action::Write(vec![], tail[i + 1]))?;
    }

    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |out: &mut SetAutomaton, queue: &mut VecDeque<(usize, usize)>, key: (usize, usize)| {
        *index.entry(key).or_insert_with(|| {
            queue.push_back(key);
            out.add_state(format!("{}@{}", sa.state_name(key.0), key.1))
        })
    };
    let start = intern(&mut out, &mut queue, (sa.start(), 0));
    out.set_start(start);
    while let Some((q, i)) = queue.pop_front() {
        let id = intern(&mut out, &mut queue, (q, i));
        if i == len && sa.is_accepting(q) {
            continue;
        }
        let rule = sa
            .rules_from(q)
            .iter()
            .map(|&r| sa.rule(r))
            .find(|r| r.label.is_eps() || (i < len && r.label == word[i]));
        let Some(rule) = rule else {
            // stuck: reject in `sa`, so read the rest of `w` and accept
            if i == len {
                out.set_accepting(id, true);
            } else {
                out.add_rule(id, word[i], Action::Write(vec![], tail[i + 1]))?;
            }
            continue;
        };
        let j = if rule.label.is_eps() { i } else { i + 1 };
        let mut to = |d: usize| intern(&mut out, &mut queue, (d, j));
        let action = match &rule.action {
            Action::Write(u, d) => Action::Write(u.clone(), to(*d)),
            Action::In(d) => Action::In(to(*d)),
            Action::Out(d) => Action::Out(to(*d)),
            Action::Test { pos, neg } => Action::Test {
                pos: to(*pos),
                neg: to(*neg),
            },
        };
        out.add_rule(id, rule.label, action)?;
    }
    Ok(out.trimmed())
}
