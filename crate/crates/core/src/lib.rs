//! Set automata: one-way finite automata with an auxiliary set of work-tape
//! words, together with their protocol languages, an exact emptiness
//! decision and a gallery of constructions and reductions.

pub mod alphabet;
pub mod automata;
pub mod cone;
pub mod emptiness;
pub mod error;
pub mod gallery;
pub mod normalform;
pub mod protocol;
pub mod sa;

pub use alphabet::{Alphabet, Symbol, Word};
pub use automata::{Dfa, Fst, Nfa};
pub use error::{Error, Result};
pub use protocol::{Op, Protocol};
pub use sa::SetAutomaton;
