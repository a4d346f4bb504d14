use std::collections::BTreeSet;

use crate::alphabet::Word;
use crate::emptiness::family::QueryLanguageFamily;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub small: Vec<usize>,
    pub large: Vec<usize>,
    /// Union of the small languages: the stable words.
    pub stable: BTreeSet<Word>,
    /// Number of rounds that declared at least one language small.
    pub rounds: usize,
}

impl Classification {
    pub fn is_stable(&self, w: &Word) -> bool {
        self.stable.contains(w)
    }
}

/// Iterative small/large split. In each round every undecided language with
/// at most `N` words outside the current stable set is declared small; the
/// words of all languages declared small in the round are then added to the
/// stable set. Languages never declared small are large.
pub fn classify_small_large(fam: &QueryLanguageFamily) -> Classification {
    let n = fam.len();
    let mut undecided: Vec<usize> = (0..n).collect();
    let mut small = Vec::new();
    let mut stable: BTreeSet<Word> = BTreeSet::new();
    let mut rounds = 0;
    loop {
        let mut declared = Vec::new();
        for &i in &undecided {
            let l = fam.language(i);
            let inside = stable.iter().filter(|w| l.accepts(w)).count();
            if !l.count_at_least(n + 1 + inside) {
                declared.push(i);
            }
        }
        if declared.is_empty() {
            break;
        }
        rounds += 1;
        let mut added = Vec::new();
        for &i in &declared {
            // the language is finite with at most N + |stable| words
            let l = fam.language(i);
            added.extend(l.smallest_words(n + stable.len() + 1));
        }
        stable.extend(added);
        undecided.retain(|i| !declared.contains(i));
        small.extend(declared);
    }
    small.sort_unstable();
    Classification {
        small,
        large: undecided,
        stable,
        rounds,
    }
}
