//! Example automata, reductions and their evaluator oracles.

mod cvp;
mod examples;
mod reduce;
mod sat;
mod tm;

pub use cvp::{build_sacvp_dsa, cvp_eval, cvp_to_sacvp, sacvp_alphabet, Assignment, CvpProgram, Gate};
pub use examples::{build_nonprimes_nsa, build_perk_dsa, is_nonprime, is_repetition};
pub use reduce::membership_to_emptiness;
pub use sat::{
    build_sasat_nsa, encode_sasat, parse_dimacs, phi_prime_sat, sasat_alphabet, threesat_to_sasat, write_dimacs, Cnf,
    Literal, SatInstance,
};
pub use tm::{simulate_tm, tm_to_unary_dsa, TmDescription, TmMove, TmOutcome};
