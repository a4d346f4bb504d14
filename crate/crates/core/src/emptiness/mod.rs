//! Emptiness of set automata through the regular realizability of the
//! protocol language, plus the structural tools behind it: query languages,
//! elementary types, the small/large split and the two protocol rewrites.

mod brute;
mod classify;
mod family;
mod nrr;
mod shuffle;
mod transform;
mod types;

pub use brute::{brute_force_nrr, BruteVerdict};
pub use classify::{classify_small_large, Classification};
pub use family::{
    elementary_at_least_two, elementary_language, elementary_nonempty, extract_query_languages, ElementaryOracle,
    QueryLanguageFamily, QueryTriple,
};
pub use nrr::{nrr_decide, query_types, NrrVerdict, NrrWitness};
pub use shuffle::shuffle_at_least_two;
pub use transform::{max_set_size, max_words_per_type, transform_bound_set, transform_unique_per_type, TypedProtocol};
pub use types::TypeInfo;

use crate::cone::build_extractor;
use crate::error::Result;
use crate::normalform::normalize_requirements;
use crate::protocol::Protocol;
use crate::sa::SetAutomaton;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SaEmptiness {
    Empty,
    Nonempty {
        /// Correct protocol over `{a, b}` accepted by the range of the
        /// extractor of the normalized automaton.
        witness: Protocol,
        /// The same protocol over the original work alphabet.
        decoded: Protocol,
    },
}

impl SaEmptiness {
    pub fn is_empty(&self) -> bool {
        matches!(self, SaEmptiness::Empty)
    }
}

/// Decides `L(sa) = ∅`.
pub fn sa_emptiness(sa: &SetAutomaton) -> Result<SaEmptiness> {
    let normalized = normalize_requirements(sa);
    let range = build_extractor(&normalized.sa)?.range().trim();
    match nrr_decide(&range)? {
        NrrVerdict::Empty => Ok(SaEmptiness::Empty),
        NrrVerdict::Nonempty(w) => {
            let decoded = normalized.decode_protocol(&w.protocol)?;
            Ok(SaEmptiness::Nonempty {
                witness: w.protocol,
                decoded,
            })
        }
    }
}

/// The extractor range used by [`sa_emptiness`]: every correct protocol in
/// it witnesses an accepting run.
pub fn protocol_range(sa: &SetAutomaton) -> Result<crate::automata::Nfa> {
    let normalized = normalize_requirements(sa);
    Ok(build_extractor(&normalized.sa)?.range().trim())
}
