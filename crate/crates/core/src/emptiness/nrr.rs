use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::automata::Nfa;
use crate::emptiness::family::{BlockStructure, QueryTriple};
use crate::emptiness::types::{joint_types, TypeInfo};
use crate::error::{Error, Result};
use crate::protocol::{replay_correct, Op, Protocol};

/// A correct protocol accepted by the analyzed automaton, with the block
/// moves of an accepting run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NrrWitness {
    pub protocol: Protocol,
    pub triples: Vec<QueryTriple>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NrrVerdict {
    Nonempty(NrrWitness),
    Empty,
}

impl NrrVerdict {
    pub fn is_nonempty(&self) -> bool {
        matches!(self, NrrVerdict::Nonempty(_))
    }

    pub fn witness(&self) -> Option<&NrrWitness> {
        match self {
            NrrVerdict::Nonempty(w) => Some(w),
            NrrVerdict::Empty => None,
        }
    }
}

/// Elementary types of the query languages of `a`, computed in one joint
/// determinization. Labels are query triples.
pub fn query_types(a: &Nfa) -> Result<Vec<TypeInfo<QueryTriple>>> {
    let blocks = BlockStructure::new(a)?;
    Ok(types_of(&blocks))
}

fn types_of(blocks: &BlockStructure) -> Vec<TypeInfo<QueryTriple>> {
    // group states by their after-`#` set so equal origins share one track
    let mut origin_of: HashMap<&Vec<usize>, usize> = HashMap::new();
    let mut origins: Vec<Vec<usize>> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for (q, h) in blocks.after_hash.iter().enumerate() {
        if h.is_empty() {
            continue;
        }
        let o = *origin_of.entry(h).or_insert_with(|| {
            origins.push(h.clone());
            members.push(Vec::new());
            origins.len() - 1
        });
        members[o].push(q);
    }
    joint_types(blocks.gamma.len(), &blocks.step, &origins, |o, r| {
        let mut out = Vec::new();
        for op in Op::ALL {
            for &to in &blocks.finish[r][op.index()] {
                for &from in &members[o] {
                    out.push(QueryTriple { from, to, op });
                }
            }
        }
        out
    })
}

/// Decides whether `a` accepts a correct protocol.
///
/// The search runs over nodes (automaton state at a block boundary, set of
/// elementary types present in the set). The set is assumed to hold at most
/// one word per type, always the type's smallest word `u`; `out` and `test-`
/// on a present type may use the second word `v` instead, which is never in
/// the set. The witness is rebuilt from parent links and checked by replay
/// and by membership before it is returned.
pub fn nrr_decide(a: &Nfa) -> Result<NrrVerdict> {
    let blocks = BlockStructure::new(a)?;
    let types = types_of(&blocks);

    // moves[q] = (type, triple) pairs available from boundary state q
    let mut moves: Vec<Vec<(usize, QueryTriple)>> = vec![Vec::new(); a.num_states()];
    for (t, info) in types.iter().enumerate() {
        for &tr in &info.signature {
            moves[tr.from].push((t, tr));
        }
    }

    type Node = (usize, BTreeSet<usize>);
    type Parent = (usize, bool, QueryTriple, usize);
    // parent link: (parent node id, block word choice: false = u, true = v, triple)
    let mut nodes: Vec<(Node, Option<Parent>)> = Vec::new();
    let mut index: HashMap<Node, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    for &q in &blocks.initial {
        let node = (q, BTreeSet::new());
        if !index.contains_key(&node) {
            index.insert(node.clone(), nodes.len());
            nodes.push((node, None));
            queue.push_back(nodes.len() - 1);
        }
    }
    let mut found = None;
    'search: while let Some(id) = queue.pop_front() {
        let (q, present) = nodes[id].0.clone();
        for &(t, tr) in &moves[q] {
            let here = present.contains(&t);
            let two = types[t].at_least_two();
            let mut outcomes: Vec<(BTreeSet<usize>, bool)> = Vec::new();
            match tr.op {
                Op::In => {
                    let mut s = present.clone();
                    s.insert(t);
                    outcomes.push((s, false));
                }
                Op::Out => {
                    if here {
                        let mut s = present.clone();
                        s.remove(&t);
                        outcomes.push((s, false));
                        if two {
                            outcomes.push((present.clone(), true));
                        }
                    } else {
                        outcomes.push((present.clone(), false));
                    }
                }
                Op::TestPos => {
                    if here {
                        outcomes.push((present.clone(), false));
                    }
                }
                Op::TestNeg => {
                    if !here {
                        outcomes.push((present.clone(), false));
                    } else if two {
                        outcomes.push((present.clone(), true));
                    }
                }
            }
            for (s, use_v) in outcomes {
                let node = (tr.to, s);
                let link = Some((id, use_v, tr, t));
                // an initial node can be accepting but only counts after a block
                if a.is_accepting(tr.to) {
                    nodes.push((node, link));
                    found = Some(nodes.len() - 1);
                    break 'search;
                }
                if index.contains_key(&node) {
                    continue;
                }
                index.insert(node.clone(), nodes.len());
                nodes.push((node, link));
                queue.push_back(nodes.len() - 1);
            }
        }
    }

    let Some(mut cur) = found else {
        return Ok(NrrVerdict::Empty);
    };
    let mut rev = Vec::new();
    while let Some((parent, use_v, tr, t)) = nodes[cur].1 {
        let info = &types[t];
        let word = if use_v {
            info.v().expect("two words").clone()
        } else {
            info.u().clone()
        };
        rev.push((word, tr));
        cur = parent;
    }
    rev.reverse();
    let protocol = Protocol::from_pairs(blocks.gamma.clone(), rev.iter().map(|(w, tr)| (w.clone(), tr.op)));
    let triples = rev.into_iter().map(|(_, tr)| tr).collect();
    if !replay_correct(&protocol) || !a.accepts(&protocol.to_symbols()) {
        return Err(Error::Invalid(format!(
            "reconstructed witness {protocol} failed validation"
        )));
    }
    Ok(NrrVerdict::Nonempty(NrrWitness { protocol, triples }))
}
