//! Normal forms for set automata.

mod anf;
mod epsloops;
mod requirements;

pub use anf::{anf_marks, is_anf, to_anf, Mark};
pub use epsloops::{
    remove_eps_loops, remove_eps_loops_detailed, EpsLoopFree, EpsOutcome, EpsPathSummary, ProductOrigin,
};
pub use requirements::{check_requirements, normalize_requirements, Normalized, WorkEncoding};
