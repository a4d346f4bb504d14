use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::alphabet::{shortlex, Word};
use crate::automata::dfa::smallest_words_per_state;

/// An elementary type: the exact set of labels (query languages) shared by
/// its words, with up to two shortlex-smallest representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeInfo<L> {
    pub signature: Vec<L>,
    pub words: Vec<Word>,
}

impl<L> TypeInfo<L> {
    pub fn at_least_two(&self) -> bool {
        self.words.len() >= 2
    }

    /// The representative used by `in` and `test+` blocks.
    pub fn u(&self) -> &Word {
        &self.words[0]
    }

    /// The second representative, used by `out` and `test-` blocks when the
    /// type holds at least two words.
    pub fn v(&self) -> Option<&Word> {
        self.words.get(1)
    }
}

/// Determinizes several automata that share one transition structure over
/// `Γ` at once. `step[r][g]` is the ε-closed successor set of state `r` on
/// symbol `g`; each origin is an ε-closed set of start states. A joint state
/// is the set of `(origin, state)` pairs reached by a word, and its labels
/// are the union of `labels(origin, state)`. Joint states with equal
/// non-empty label sets form one type.
pub(crate) fn joint_types<L, F>(
    num_symbols: usize,
    step: &[Vec<Vec<usize>>],
    origins: &[Vec<usize>],
    labels: F,
) -> Vec<TypeInfo<L>>
where
    L: Ord + Clone,
    F: Fn(usize, usize) -> Vec<L>,
{
    type Joint = Vec<(u32, u32)>;
    let start: Joint = {
        let mut v: Joint = origins
            .iter()
            .enumerate()
            .flat_map(|(o, set)| set.iter().map(move |&r| (o as u32, r as u32)))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let mut index: HashMap<Joint, usize> = HashMap::new();
    let mut states: Vec<Joint> = Vec::new();
    let mut trans: Vec<Vec<usize>> = Vec::new();
    index.insert(start.clone(), 0);
    states.push(start);
    let mut queue = VecDeque::from([0usize]);
    while let Some(d) = queue.pop_front() {
        let mut row = Vec::with_capacity(num_symbols);
        for g in 0..num_symbols {
            let mut next: Joint = states[d]
                .iter()
                .flat_map(|&(o, r)| step[r as usize][g].iter().map(move |&e| (o, e as u32)))
                .collect();
            next.sort_unstable();
            next.dedup();
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    let id = states.len();
                    index.insert(next.clone(), id);
                    states.push(next);
                    queue.push_back(id);
                    id
                }
            };
            row.push(id);
        }
        trans.resize(trans.len().max(d + 1), Vec::new());
        trans[d] = row;
    }
    trans.resize(states.len(), Vec::new());

    let mut label_cache: HashMap<(u32, u32), Vec<L>> = HashMap::new();
    let signatures: Vec<Vec<L>> = states
        .iter()
        .map(|joint| {
            let mut sig: Vec<L> = Vec::new();
            for &pair in joint {
                let ls = label_cache
                    .entry(pair)
                    .or_insert_with(|| labels(pair.0 as usize, pair.1 as usize));
                sig.extend(ls.iter().cloned());
            }
            sig.sort();
            sig.dedup();
            sig
        })
        .collect();

    let words = smallest_words_per_state(states.len(), 0, num_symbols, 2, |d, g| Some(trans[d][g]));
    let mut grouped: BTreeMap<Vec<L>, Vec<Word>> = BTreeMap::new();
    for (sig, ws) in signatures.into_iter().zip(words) {
        if !sig.is_empty() && !ws.is_empty() {
            grouped.entry(sig).or_default().extend(ws);
        }
    }
    let mut out: Vec<TypeInfo<L>> = grouped
        .into_iter()
        .map(|(signature, mut words)| {
            words.sort_by(|a, b| shortlex(a, b));
            words.truncate(2);
            TypeInfo { signature, words }
        })
        .collect();
    out.sort_by(|a, b| shortlex(a.u(), b.u()));
    out
}
