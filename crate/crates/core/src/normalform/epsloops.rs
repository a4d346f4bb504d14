use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use crate::alphabet::{shortlex, Word};
use crate::error::Result;
use crate::sa::{Action, InputLabel, SetAutomaton};

/// The unique ε-rule of a state, if its only rule is an ε-rule.
fn eps_rule(sa: &SetAutomaton, q: usize) -> Option<usize> {
    let rs = sa.rules_from(q);
    (rs.len() == 1 && sa.rule(rs[0]).label == InputLabel::Eps).then(|| rs[0])
}

/// Word written along the query-free ε-path from `q` up to the first
/// ε-query, if that path reaches one.
fn written_before_query(sa: &SetAutomaton, mut q: usize) -> Option<Word> {
    let mut w = Vec::new();
    let mut seen = HashSet::new();
    while seen.insert(q) {
        let r = sa.rule(eps_rule(sa, q)?);
        match &r.action {
            Action::Write(x, d) => {
                w.extend_from_slice(x);
                q = *d;
            }
            _ => return Some(w),
        }
    }
    None
}

/// Where the ε-path of a deterministic automaton leads when it starts with an
/// empty tape and a known membership of each ε-word in the set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EpsOutcome {
    /// The path never ends. `accepting` tells whether it visits an
    /// accepting state.
    Diverges { accepting: bool },
    /// The path stops in `state`, a state without ε-rule, with `written` on
    /// the tape. `members` is the final membership vector and `accepting`
    /// tells whether an accepting state was visited on the way.
    Exits {
        state: usize,
        written: Word,
        members: Vec<bool>,
        accepting: bool,
    },
}

/// The finite set of words an automaton can query on ε-paths after a query,
/// together with the resulting ε-path outcomes.
#[derive(Debug, Clone)]
pub struct EpsPathSummary {
    words: Vec<Word>,
}

impl EpsPathSummary {
    pub fn new(dsa: &SetAutomaton) -> Result<Self> {
        dsa.check_deterministic()?;
        let mut words: Vec<Word> = (0..dsa.num_states())
            .filter_map(|q| written_before_query(dsa, q))
            .collect();
        words.sort_by(|a, b| shortlex(a, b));
        words.dedup();
        Ok(EpsPathSummary { words })
    }

    /// `u_1, ..., u_m` in shortlex order.
    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn word_index(&self, w: &[crate::Symbol]) -> Option<usize> {
        self.words.binary_search_by(|u| shortlex(u, w)).ok()
    }

    /// Follows the ε-path from `state` with an empty tape.
    pub fn outcome(&self, dsa: &SetAutomaton, state: usize, members: &[bool]) -> EpsOutcome {
        let mut q = state;
        let mut tape = Vec::new();
        let mut members = members.to_vec();
        let mut accepting = false;
        let mut after_query: HashSet<(usize, Vec<bool>)> = HashSet::new();
        let mut segment: HashSet<usize> = HashSet::new();
        loop {
            accepting |= dsa.is_accepting(q);
            if !segment.insert(q) {
                return EpsOutcome::Diverges { accepting };
            }
            let Some(r) = eps_rule(dsa, q) else {
                return EpsOutcome::Exits {
                    state: q,
                    written: tape,
                    members,
                    accepting,
                };
            };
            let action = &dsa.rule(r).action;
            if let Action::Write(x, d) = action {
                tape.extend_from_slice(x);
                q = *d;
                continue;
            }
            let i = self.word_index(&tape).expect("ε-queries use ε-words");
            q = match *action {
                Action::In(d) => {
                    members[i] = true;
                    d
                }
                Action::Out(d) => {
                    members[i] = false;
                    d
                }
                Action::Test { pos, neg } => {
                    if members[i] {
                        pos
                    } else {
                        neg
                    }
                }
                Action::Write(..) => unreachable!(),
            };
            tape.clear();
            segment.clear();
            if !after_query.insert((q, members.clone())) {
                return EpsOutcome::Diverges {
                    accepting: accepting || dsa.is_accepting(q),
                };
            }
        }
    }
}

/// What a state of the ε-loop-free automaton stands for.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProductOrigin {
    pub state: usize,
    /// Membership of each ε-word in the set.
    pub members: Vec<bool>,
    /// The tape, when it is a prefix of some ε-word.
    pub tape: Option<Word>,
}

#[derive(Debug, Clone)]
pub struct EpsLoopFree {
    pub dsa: SetAutomaton,
    pub summary: EpsPathSummary,
    pub origin: Vec<ProductOrigin>,
}

/// Equivalent deterministic automaton without ε-loops.
pub fn remove_eps_loops(dsa: &SetAutomaton) -> Result<SetAutomaton> {
    Ok(remove_eps_loops_detailed(dsa)?.dsa)
}

/// As [`remove_eps_loops`], also returning the meaning of each state.
///
/// States are triples (state, membership vector of the ε-words, tape if it
/// is a prefix of an ε-word). Queries on a known ε-word get their outcome
/// from the vector. Every ε-cycle of this product only queries known words,
/// so it is a genuine infinite run; its states lose their ε-rule and become
/// accepting when the cycle visits an accepting state, which is exactly when
/// the original accepts there at the end of the input.
pub fn remove_eps_loops_detailed(dsa: &SetAutomaton) -> Result<EpsLoopFree> {
    let summary = EpsPathSummary::new(dsa)?;
    let words = summary.words();
    // prefixes of ε-words; index 0 is the empty tape
    let mut prefixes: BTreeMap<Word, usize> = BTreeMap::new();
    prefixes.insert(Vec::new(), 0);
    for u in words {
        for k in 1..=u.len() {
            let n = prefixes.len();
            prefixes.entry(u[..k].to_vec()).or_insert(n);
        }
    }
    let extend = |t: Option<&Word>, x: &[crate::Symbol]| -> Option<Word> {
        let mut w = t?.clone();
        w.extend_from_slice(x);
        prefixes.contains_key(&w).then_some(w)
    };

    type Key = (usize, Vec<bool>, Option<Word>);
    let mut keys: Vec<Key> = Vec::new();
    let mut index: HashMap<Key, usize> = HashMap::new();
    // rules as (src, label, action) over product ids
    let mut rules: Vec<(usize, InputLabel, Action)> = Vec::new();
    let mut queue = VecDeque::new();
    let mut intern = |keys: &mut Vec<Key>, queue: &mut VecDeque<usize>, key: Key| -> usize {
        *index.entry(key.clone()).or_insert_with(|| {
            keys.push(key);
            queue.push_back(keys.len() - 1);
            keys.len() - 1
        })
    };
    if dsa.num_states() > 0 {
        intern(
            &mut keys,
            &mut queue,
            (dsa.start(), vec![false; words.len()], Some(Vec::new())),
        );
    }
    while let Some(id) = queue.pop_front() {
        let (q, members, tape) = keys[id].clone();
        let known = tape.as_ref().and_then(|t| summary.word_index(t));
        for &ri in dsa.rules_from(q) {
            let r = dsa.rule(ri);
            let mut to = |keys: &mut Vec<Key>, queue: &mut VecDeque<usize>, d: usize, m: Vec<bool>| {
                intern(keys, queue, (d, m, Some(Vec::new())))
            };
            let action = match &r.action {
                Action::Write(x, d) => {
                    let t = extend(tape.as_ref(), x);
                    Action::Write(x.clone(), intern(&mut keys, &mut queue, (*d, members.clone(), t)))
                }
                Action::In(d) => {
                    let mut m = members.clone();
                    if let Some(i) = known {
                        m[i] = true;
                    }
                    Action::In(to(&mut keys, &mut queue, *d, m))
                }
                Action::Out(d) => {
                    let mut m = members.clone();
                    if let Some(i) = known {
                        m[i] = false;
                    }
                    Action::Out(to(&mut keys, &mut queue, *d, m))
                }
                Action::Test { pos, neg } => match known {
                    Some(i) => {
                        let d = to(
                            &mut keys,
                            &mut queue,
                            if members[i] { *pos } else { *neg },
                            members.clone(),
                        );
                        Action::Test { pos: d, neg: d }
                    }
                    None => Action::Test {
                        pos: to(&mut keys, &mut queue, *pos, members.clone()),
                        neg: to(&mut keys, &mut queue, *neg, members.clone()),
                    },
                },
            };
            rules.push((id, r.label, action));
        }
    }

    // ε-successors in the product; states on ε-cycles are found as the
    // non-trivial strongly connected components
    let n = keys.len();
    let mut eps_succ: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (src, label, action) in &rules {
        if label.is_eps() {
            eps_succ[*src].extend(action.targets());
        }
    }
    let comp = strongly_connected(&eps_succ);
    let mut comp_size = vec![0usize; n];
    let mut comp_accepting = vec![false; n];
    for q in 0..n {
        comp_size[comp[q]] += 1;
        comp_accepting[comp[q]] |= dsa.is_accepting(keys[q].0);
    }
    let on_cycle: Vec<bool> = (0..n)
        .map(|q| comp_size[comp[q]] > 1 || eps_succ[q].contains(&q))
        .collect();

    let mut out = SetAutomaton::new(
        dsa.input_alphabet().clone(),
        dsa.work_alphabet().clone(),
        dsa.uses_endmarker(),
    );
    for (id, (q, members, tape)) in keys.iter().enumerate() {
        let bits: String = members.iter().map(|&b| if b { '1' } else { '0' }).collect();
        let t = tape.as_ref().map_or("x".to_string(), |t| prefixes[t].to_string());
        let s = out.add_state(format!("{}/{}/{}", dsa.state_name(*q), bits, t));
        let acc = if on_cycle[id] {
            comp_accepting[comp[id]]
        } else {
            dsa.is_accepting(*q)
        };
        out.set_accepting(s, acc);
    }
    if n > 0 {
        out.set_start(0);
    }
    for (src, label, action) in rules {
        if label.is_eps() && on_cycle[src] {
            debug_assert!(
                matches!(action, Action::Write(..)) || action.targets().len() == 1 || {
                    let t = action.targets();
                    t[0] == t[1]
                }
            );
            continue;
        }
        out.add_rule(src, label, action)?;
    }
    let origin = keys
        .into_iter()
        .map(|(state, members, tape)| ProductOrigin { state, members, tape })
        .collect();
    Ok(EpsLoopFree {
        dsa: out,
        summary,
        origin,
    })
}

/// Component id of every node (iterative Tarjan).
fn strongly_connected(succ: &[Vec<usize>]) -> Vec<usize> {
    let n = succ.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut next_index = 0;
    let mut next_comp = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut i)) = call.last_mut() {
            if *i < succ[v].len() {
                let w = succ[v][*i];
                *i += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(p, _)) = call.last() {
                    low[p] = low[p].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("non-empty stack");
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}
