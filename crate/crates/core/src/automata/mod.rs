//! Classical finite automata and transducers.

pub mod dfa;
pub mod fst;
pub mod nfa;
pub mod text;

pub use dfa::Dfa;
pub use fst::{Fst, FstTransition};
pub use nfa::Nfa;
