use std::collections::HashMap;

use crate::alphabet::{Alphabet, Symbol, Word};
use crate::automata::Nfa;
use crate::emptiness::types::{joint_types, TypeInfo};
use crate::error::{Error, Result};
use crate::protocol::{gamma_of, Op, ProtocolSymbols};

/// A block move of a protocol automaton: from state `from`, reading
/// `#u#op` can end in state `to`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QueryTriple {
    pub from: usize,
    pub to: usize,
    pub op: Op,
}

/// An indexed list of query languages over `Γ`. Indices are 0-based.
#[derive(Debug, Clone)]
pub struct QueryLanguageFamily {
    gamma: Alphabet,
    languages: Vec<Nfa>,
}

impl QueryLanguageFamily {
    pub fn new(gamma: Alphabet, languages: Vec<Nfa>) -> Result<Self> {
        if let Some(l) = languages.iter().find(|l| l.alphabet() != &gamma) {
            return Err(Error::AlphabetMismatch(format!("{:?} vs {:?}", l.alphabet(), gamma)));
        }
        Ok(QueryLanguageFamily { gamma, languages })
    }

    pub fn gamma(&self) -> &Alphabet {
        &self.gamma
    }

    pub fn len(&self) -> usize {
        self.languages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.languages.is_empty()
    }

    pub fn language(&self, i: usize) -> &Nfa {
        &self.languages[i]
    }

    pub fn languages(&self) -> &[Nfa] {
        &self.languages
    }

    /// Indices of the languages containing `w`: the type of `w`.
    pub fn type_of(&self, w: &[Symbol]) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.languages[i].accepts(w)).collect()
    }

    /// All non-empty elementary languages with non-empty type, with their
    /// two shortlex-smallest words.
    pub fn types(&self) -> Vec<TypeInfo<usize>> {
        let g = self.gamma.len();
        let mut offsets = Vec::with_capacity(self.len());
        let mut step: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut owner: Vec<usize> = Vec::new();
        for (i, l) in self.languages.iter().enumerate() {
            let base = step.len();
            offsets.push(base);
            for q in 0..l.num_states() {
                let closed = l.closure_of([q]);
                let row = (0..g)
                    .map(|s| {
                        l.step(&closed, Symbol(s as u32))
                            .into_iter()
                            .map(|d| d + base)
                            .collect()
                    })
                    .collect();
                step.push(row);
                owner.push(i);
            }
        }
        let origins: Vec<Vec<usize>> = self
            .languages
            .iter()
            .zip(&offsets)
            .map(|(l, &base)| {
                l.closure_of(l.initial().iter().copied())
                    .into_iter()
                    .map(|q| q + base)
                    .collect()
            })
            .collect();
        joint_types(g, &step, &origins, |o, r| {
            let i = owner[r];
            if i == o && self.languages[i].is_accepting(r - offsets[i]) {
                vec![i]
            } else {
                Vec::new()
            }
        })
    }
}

/// The part of a protocol automaton that reads work symbols: same states,
/// only `Γ`- and ε-transitions.
fn gamma_part(a: &Nfa, gamma: &Alphabet, ps: ProtocolSymbols) -> Nfa {
    let mut sub = Nfa::new(gamma.clone());
    for q in 0..a.num_states() {
        sub.add_named_state(a.state_name(q));
    }
    for (q, l, d) in a.transitions() {
        match l {
            None => sub.add_transition(q, None, d),
            Some(s) if ps.is_gamma(s) => sub.add_transition(q, Some(s), d),
            Some(_) => {}
        }
    }
    sub
}

/// Block structure of a protocol automaton shared by the explicit family
/// and the abstract search.
pub(crate) struct BlockStructure {
    pub gamma: Alphabet,
    /// ε-closed states after reading `#` from each state.
    pub after_hash: Vec<Vec<usize>>,
    /// `finish[r][op]`: states reached from `r` by `#op`, ε-closed.
    pub finish: Vec<[Vec<usize>; 4]>,
    /// `step[r][g]`: ε-closed successors of `r` on work symbol `g`.
    pub step: Vec<Vec<Vec<usize>>>,
    pub initial: Vec<usize>,
}

impl BlockStructure {
    pub fn new(a: &Nfa) -> Result<BlockStructure> {
        let gamma = gamma_of(a.alphabet())?;
        let ps = ProtocolSymbols::new(&gamma);
        let n = a.num_states();
        let closures: Vec<Vec<usize>> = (0..n).map(|q| a.closure_of([q])).collect();
        let after_hash: Vec<Vec<usize>> = (0..n).map(|q| a.step(&closures[q], ps.hash())).collect();
        let finish = (0..n)
            .map(|r| {
                let hashed = a.step(&closures[r], ps.hash());
                Op::ALL.map(|op| a.step(&hashed, ps.op(op)))
            })
            .collect();
        let step = (0..n)
            .map(|r| gamma.symbols().map(|g| a.step(&closures[r], g)).collect())
            .collect();
        Ok(BlockStructure {
            gamma,
            after_hash,
            finish,
            step,
            initial: a.closure_of(a.initial().iter().copied()),
        })
    }
}

/// The query languages `R(q, q', op)` of a protocol automaton, one per
/// triple with a non-empty language.
pub fn extract_query_languages(a: &Nfa) -> Result<(QueryLanguageFamily, Vec<QueryTriple>)> {
    let gamma = gamma_of(a.alphabet())?;
    let ps = ProtocolSymbols::new(&gamma);
    let blocks = BlockStructure::new(a)?;
    let sub = gamma_part(a, &gamma, ps);
    let n = a.num_states();
    // pre[(q', op)] = states r with q' reachable from r by #op
    let mut pre: HashMap<(usize, Op), Vec<usize>> = HashMap::new();
    for r in 0..n {
        for op in Op::ALL {
            for &d in &blocks.finish[r][op.index()] {
                pre.entry((d, op)).or_default().push(r);
            }
        }
    }
    let mut keys: Vec<(usize, Op)> = pre.keys().copied().collect();
    keys.sort_by_key(|&(d, op)| (d, op));
    let mut languages = Vec::new();
    let mut triples = Vec::new();
    for q in 0..n {
        if blocks.after_hash[q].is_empty() {
            continue;
        }
        for &(to, op) in &keys {
            let mut l = sub.clone();
            for &h in &blocks.after_hash[q] {
                l.add_initial(h);
            }
            for &r in &pre[&(to, op)] {
                l.set_accepting(r, true);
            }
            let l = l.trim();
            if !l.is_empty() {
                languages.push(l);
                triples.push(QueryTriple { from: q, to, op });
            }
        }
    }
    Ok((QueryLanguageFamily::new(gamma, languages)?, triples))
}

/// Product of the family members in `members` with the complements of the
/// others.
pub fn elementary_language(fam: &QueryLanguageFamily, members: &[usize]) -> Nfa {
    let mut acc = Nfa::universal(fam.gamma.clone());
    for (i, l) in fam.languages.iter().enumerate() {
        let factor = if members.contains(&i) {
            l.clone()
        } else {
            l.complement()
        };
        acc = acc.product(&factor).expect("common alphabet").trim();
    }
    acc
}

/// Memoized emptiness and two-word tests for elementary languages, computed
/// through products and complements.
pub struct ElementaryOracle<'f> {
    fam: &'f QueryLanguageFamily,
    memo: HashMap<Vec<usize>, (bool, bool)>,
}

impl<'f> ElementaryOracle<'f> {
    pub fn new(fam: &'f QueryLanguageFamily) -> Self {
        ElementaryOracle {
            fam,
            memo: HashMap::new(),
        }
    }

    fn get(&mut self, members: &[usize]) -> (bool, bool) {
        let mut key = members.to_vec();
        key.sort_unstable();
        key.dedup();
        let fam = self.fam;
        *self.memo.entry(key).or_insert_with_key(|key| {
            let l = elementary_language(fam, key);
            (l.count_at_least(1), l.count_at_least(2))
        })
    }

    pub fn nonempty(&mut self, members: &[usize]) -> bool {
        self.get(members).0
    }

    pub fn at_least_two(&mut self, members: &[usize]) -> bool {
        self.get(members).1
    }
}

pub fn elementary_nonempty(fam: &QueryLanguageFamily, members: &[usize]) -> bool {
    ElementaryOracle::new(fam).nonempty(members)
}

pub fn elementary_at_least_two(fam: &QueryLanguageFamily, members: &[usize]) -> bool {
    ElementaryOracle::new(fam).at_least_two(members)
}

/// Shortlex-smallest word of `l` outside `excluded`, if any.
pub(crate) fn smallest_outside(l: &Nfa, excluded: &[Word]) -> Option<Word> {
    let ex = Nfa::from_words(l.alphabet().clone(), excluded).complement();
    l.product(&ex).ok()?.smallest_words(1).into_iter().next()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::{binary_gamma, protocol_alphabet, Protocol};

    fn single(al: &Alphabet, w: &str) -> Nfa {
        Nfa::single_word(al.clone(), &al.parse_word(w).unwrap())
    }

    fn star(al: &Alphabet, s: Symbol) -> Nfa {
        let mut n = Nfa::new(al.clone());
        let q = n.add_state();
        n.add_initial(q);
        n.set_accepting(q, true);
        n.add_transition(q, Some(s), q);
        n
    }

    #[test]
    fn elementary_examples() {
        let g = binary_gamma();
        let fam = QueryLanguageFamily::new(g.clone(), vec![single(&g, "a"), star(&g, Symbol(0))]).unwrap();
        let mut o = ElementaryOracle::new(&fam);
        assert!(o.nonempty(&[0, 1]));
        assert!(!o.at_least_two(&[0, 1]));
        assert!(o.nonempty(&[1]) && o.at_least_two(&[1]));
        assert!(!o.nonempty(&[0]));

        let types = fam.types();
        let sigs: Vec<&Vec<usize>> = types.iter().map(|t| &t.signature).collect();
        assert_eq!(sigs, [&vec![1], &vec![0, 1]]);
        assert_eq!(types[1].words, vec![vec![Symbol(0)]]);
        assert_eq!(types[0].words, vec![vec![], vec![Symbol(0), Symbol(0)]]);
    }

    #[test]
    fn single_path_has_one_triple() {
        let g = binary_gamma();
        let pa = protocol_alphabet(&g).unwrap();
        let p = Protocol::parse(&g, "#ab#in").unwrap();
        let a = Nfa::single_word(pa, &p.to_symbols());
        let (fam, triples) = extract_query_languages(&a).unwrap();
        assert_eq!(fam.len(), 1);
        assert_eq!(triples[0].op, Op::In);
        assert!(fam.language(0).accepts(&g.parse_word("ab").unwrap()));
        assert!(!fam.language(0).count_at_least(2));
    }
}
