use std::collections::{HashMap, VecDeque};

use crate::alphabet::{Alphabet, Symbol};
use crate::automata::{Dfa, Nfa};
use crate::error::{Error, Result};

/// Name of the padding symbol: the first of `<>`, `<>'`, ... not in `sigma`.
fn pad_name(sigma: &Alphabet) -> String {
    let mut name = String::from("<>");
    while sigma.symbol(&name).is_some() {
        name.push('\'');
    }
    name
}

/// Track of one language inside the interleaved word: a state of its DFA, or
/// `None` once padding started.
type Track = Option<usize>;

fn track_step(d: &Dfa, t: Track, s: Symbol, pad: Symbol) -> Option<Track> {
    match t {
        Some(q) if s == pad => d.is_accepting(q).then_some(None),
        Some(q) => Some(Some(d.next(q, s))),
        None => (s == pad).then_some(None),
    }
}

fn track_done(d: &Dfa, t: Track) -> bool {
    t.is_none_or(|q| d.is_accepting(q))
}

/// The language of perfect shuffles `u1 v1 u2 v2 ...` whose odd and even
/// tracks both belong to `L(d)` followed by padding.
fn padded_pair_language(d: &Dfa, ext: &Alphabet, pad: Symbol) -> Nfa {
    let mut n = Nfa::new(ext.clone());
    let mut index: HashMap<(Track, Track, bool), usize> = HashMap::new();
    let start = (Some(d.start()), Some(d.start()), false);
    index.insert(start, n.add_state());
    n.add_initial(0);
    let mut queue = VecDeque::from([start]);
    while let Some(key @ (t1, t2, odd)) = queue.pop_front() {
        let id = index[&key];
        if !odd && track_done(d, t1) && track_done(d, t2) {
            n.set_accepting(id, true);
        }
        for s in ext.symbols() {
            let next = if odd {
                track_step(d, t2, s, pad).map(|t| (t1, t, false))
            } else {
                track_step(d, t1, s, pad).map(|t| (t, t2, true))
            };
            let Some(next) = next else { continue };
            let dst = *index.entry(next).or_insert_with(|| {
                queue.push_back(next);
                n.add_state()
            });
            n.add_transition(id, Some(s), dst);
        }
    }
    n
}

/// Shuffles whose two tracks differ in at least one position.
fn differing_tracks(ext: &Alphabet) -> Nfa {
    let k = ext.len();
    let mut n = Nfa::new(ext.clone());
    // state (pending symbol or none, differ flag)
    let id = |pending: Option<usize>, diff: bool| pending.map_or(0, |p| p + 1) + if diff { k + 1 } else { 0 };
    for _ in 0..2 * (k + 1) {
        n.add_state();
    }
    n.add_initial(id(None, false));
    n.set_accepting(id(None, true), true);
    for diff in [false, true] {
        for x in 0..k {
            n.add_transition(id(None, diff), Some(Symbol(x as u32)), id(Some(x), diff));
            for y in 0..k {
                n.add_transition(id(Some(x), diff), Some(Symbol(y as u32)), id(None, diff || x != y));
            }
        }
    }
    n
}

/// Decides `|L(n1) ∩ ... ∩ L(nm)| >= 2` through the interleaving
/// construction: two distinct words exist iff some shuffle of their padded
/// versions lies in the product of the pair languages and the difference
/// language.
pub fn shuffle_at_least_two(sigma: &Alphabet, nfas: &[Nfa]) -> Result<bool> {
    if let Some(n) = nfas.iter().find(|n| n.alphabet() != sigma) {
        return Err(Error::AlphabetMismatch(format!("{:?} vs {:?}", n.alphabet(), sigma)));
    }
    let pad_label = pad_name(sigma);
    let ext = Alphabet::new(sigma.names().iter().cloned().chain([pad_label.clone()]))?;
    let pad = ext.expect_symbol(&pad_label)?;
    let mut acc = differing_tracks(&ext);
    // the universal track forces the padded shape even when `nfas` is empty
    let universal = Nfa::universal(sigma.clone());
    for l in nfas.iter().chain([&universal]) {
        let pair = padded_pair_language(&l.determinized(), &ext, pad);
        acc = acc.product(&pair)?.trim();
        if acc.is_empty() {
            return Ok(false);
        }
    }
    Ok(!acc.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::binary_gamma;

    fn star_a() -> Nfa {
        let mut n = Nfa::new(binary_gamma());
        let q = n.add_state();
        n.add_initial(q);
        n.set_accepting(q, true);
        n.add_transition(q, Some(Symbol(0)), q);
        n
    }

    #[test]
    fn small_cases() {
        let g = binary_gamma();
        let a = Nfa::single_word(g.clone(), &[Symbol(0)]);
        assert!(!shuffle_at_least_two(&g, &[a.clone(), a.clone()]).unwrap());
        assert!(shuffle_at_least_two(&g, &[star_a(), star_a()]).unwrap());
        assert!(!shuffle_at_least_two(&g, &[star_a(), a.clone()]).unwrap());
        assert!(shuffle_at_least_two(&g, &[]).unwrap());
        let eps_or_a = Nfa::from_words(g.clone(), &[vec![], vec![Symbol(0)]]);
        assert!(shuffle_at_least_two(&g, &[eps_or_a]).unwrap());
        assert!(!shuffle_at_least_two(&g, &[Nfa::empty(g.clone())]).unwrap());
    }
}
