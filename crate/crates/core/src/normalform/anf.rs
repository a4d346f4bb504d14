use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::sa::{Action, SetAutomaton};

/// How a rule enters its target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mark {
    Init,
    Write,
    In,
    Out,
    TestPos,
    TestNeg,
}

impl Mark {
    fn suffix(self) -> &'static str {
        match self {
            Mark::Init => "init",
            Mark::Write => "write",
            Mark::In => "in",
            Mark::Out => "out",
            Mark::TestPos => "test+",
            Mark::TestNeg => "test-",
        }
    }
}

fn entries(action: &Action) -> Vec<(usize, Mark)> {
    match *action {
        Action::Write(_, d) => vec![(d, Mark::Write)],
        Action::In(d) => vec![(d, Mark::In)],
        Action::Out(d) => vec![(d, Mark::Out)],
        Action::Test { pos, neg } => vec![(pos, Mark::TestPos), (neg, Mark::TestNeg)],
    }
}

/// Action normal form: every state is entered by a single kind of move, and
/// the start state has no incoming rules. A state entered by several kinds
/// is split into one copy per kind; each copy keeps all outgoing rules.
/// Only reachable copies are built.
pub fn to_anf(sa: &SetAutomaton) -> SetAutomaton {
    let mut marks: Vec<BTreeSet<Mark>> = vec![BTreeSet::new(); sa.num_states()];
    for r in sa.rules() {
        for (d, m) in entries(&r.action) {
            marks[d].insert(m);
        }
    }
    let name = |q: usize, m: Mark| {
        if marks[q].len() <= 1 && !(m == Mark::Init && !marks[q].is_empty()) {
            sa.state_name(q).to_string()
        } else {
            format!("{}@{}", sa.state_name(q), m.suffix())
        }
    };

    let mut out = SetAutomaton::new(
        sa.input_alphabet().clone(),
        sa.work_alphabet().clone(),
        sa.uses_endmarker(),
    );
    let mut index: HashMap<(usize, Mark), usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |out: &mut SetAutomaton, queue: &mut VecDeque<(usize, Mark)>, key: (usize, Mark)| {
        *index.entry(key).or_insert_with(|| {
            let id = out.add_state(name(key.0, key.1));
            out.set_accepting(id, sa.is_accepting(key.0));
            queue.push_back(key);
            id
        })
    };
    let start = intern(&mut out, &mut queue, (sa.start(), Mark::Init));
    out.set_start(start);
    while let Some(key) = queue.pop_front() {
        let src = intern(&mut out, &mut queue, key);
        for &i in sa.rules_from(key.0) {
            let r = sa.rule(i);
            let action = match &r.action {
                Action::Write(w, d) => Action::Write(w.clone(), intern(&mut out, &mut queue, (*d, Mark::Write))),
                Action::In(d) => Action::In(intern(&mut out, &mut queue, (*d, Mark::In))),
                Action::Out(d) => Action::Out(intern(&mut out, &mut queue, (*d, Mark::Out))),
                Action::Test { pos, neg } => Action::Test {
                    pos: intern(&mut out, &mut queue, (*pos, Mark::TestPos)),
                    neg: intern(&mut out, &mut queue, (*neg, Mark::TestNeg)),
                },
            };
            out.add_rule(src, r.label, action).expect("copied rule is valid");
        }
    }
    out
}

/// The kind of move entering each state, or `None` when a state is entered
/// by two kinds. The start state must have no incoming rules.
pub fn anf_marks(sa: &SetAutomaton) -> Option<Vec<Option<Mark>>> {
    let mut marks: Vec<Option<Mark>> = vec![None; sa.num_states()];
    if sa.num_states() == 0 {
        return Some(marks);
    }
    marks[sa.start()] = Some(Mark::Init);
    for r in sa.rules() {
        for (d, m) in entries(&r.action) {
            match marks[d] {
                None => marks[d] = Some(m),
                Some(old) if old == m => {}
                Some(_) => return None,
            }
        }
    }
    Some(marks)
}

pub fn is_anf(sa: &SetAutomaton) -> bool {
    anf_marks(sa).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{build_nonprimes_nsa, build_perk_dsa};
    use crate::sa::text::parse_sa;

    #[test]
    fn splits_mixed_entries() {
        let sa = parse_sa(
            "input: x\nwork: a\nendmarker: no\nstart: s\naccept: f\n\
             s x write a m\nm eps test f s\n",
        )
        .unwrap();
        assert!(!is_anf(&sa));
        let anf = to_anf(&sa);
        assert!(is_anf(&anf));
        // s is entered by test- and is the start, f by test+
        let names: Vec<&str> = anf.state_names().iter().map(|s| s.as_str()).collect();
        assert!(names.contains(&"s@init") && names.contains(&"s"));
        assert_eq!(anf.num_states(), 4);
    }

    #[test]
    fn uniform_automaton_keeps_its_shape() {
        let sa = parse_sa("input: x\nwork: a\nendmarker: no\nstart: s\naccept: f\ns x in f\n").unwrap();
        let anf = to_anf(&sa);
        assert_eq!(anf.num_states(), 2);
        assert_eq!(anf.rules().len(), 1);
        assert_eq!(anf.state_names(), sa.state_names());
    }

    #[test]
    fn gallery_results_are_anf() {
        for sa in [build_perk_dsa(2).unwrap(), build_nonprimes_nsa()] {
            let anf = to_anf(&sa);
            assert!(is_anf(&anf));
            assert_eq!(anf.is_deterministic(), sa.is_deterministic());
        }
    }
}
