//! Extractors, protocol-based membership and the composition of a
//! transducer with the protocol language.

mod compose;
mod extractor;

pub use compose::cone_generate;
pub use extractor::build_extractor;

use crate::alphabet::Symbol;
use crate::automata::Fst;
use crate::emptiness::{nrr_decide, NrrVerdict};
use crate::error::Result;
use crate::normalform::{normalize_requirements, Normalized};
use crate::sa::SetAutomaton;

/// Normalized automaton and its extractor, built once for repeated
/// membership queries.
#[derive(Debug, Clone)]
pub struct ProtocolMembership {
    pub normalized: Normalized,
    pub extractor: Fst,
}

impl ProtocolMembership {
    pub fn new(sa: &SetAutomaton) -> Result<Self> {
        let normalized = normalize_requirements(sa);
        let extractor = build_extractor(&normalized.sa)?;
        Ok(ProtocolMembership { normalized, extractor })
    }

    /// Decides membership; on acceptance also returns a correct protocol of
    /// the normalized automaton on `w`.
    pub fn decide(&self, w: &[Symbol]) -> Result<NrrVerdict> {
        let image = self.extractor.apply(w)?;
        nrr_decide(&image)
    }

    pub fn accepts(&self, w: &[Symbol]) -> Result<bool> {
        Ok(self.decide(w)?.is_nonempty())
    }
}

/// Exact membership: `w` is accepted iff the extractor maps it to some
/// correct protocol. Works for any automaton, including ones with ε-loops.
pub fn member_via_protocols(sa: &SetAutomaton, w: &[Symbol]) -> Result<bool> {
    ProtocolMembership::new(sa)?.accepts(w)
}
