//! Finite Markov chain numerics: mixing-time diagnostics, hitting times,
//! restart perturbations and the bounds on their stationary error, plus
//! coupling simulations for the example families.
//!
//! States are 0-based throughout the library. Serialized outputs meant for
//! people (certificates, sweep tables) use 1-based labels.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod chain;
pub mod coupling;
pub mod error;
pub mod families;
pub mod io;
pub mod mixing;
pub mod perturbation;
pub mod random;

pub use chain::{
    classify, lazify, stationary, step, total_variation, ChainProperties, Distribution,
    StochasticMatrix, BALANCE_TOL, STATIONARY_TOL, VALIDATION_TOL,
};
pub use coupling::{
    cgb_even_coupling, cgb_odd_coupling, restart_coupling, maximal_coupling_sample, CouplingTrace,
};
pub use error::{Error, Result};
pub use families::{
    cgb_adjacency, cgb_stationary, complete_graph_bijection, lazy_walk, winning_streak,
    winning_streak_reversal, wsr_stationary, Family, GraphAdjacency,
};
pub use mixing::{
    basu_check, cutoff_ratio, distance_profile, hitting_profile, mixing_time, spectrum,
    submultiplicativity_check, t_hit, HittingTimeCertificate, MixingProfile, SearchMode,
    SpectrumSummary,
};
pub use perturbation::{
    adversarial_restart, coincidence_check, condition61_check, perturbation_error, radius,
    restart_matrix, restart_stationary_series, trichotomy_sweep, upper_bound, AlphaRule,
    BoundOptions, PerturbationReport, PerturbationSchedule, RestartPerturbation,
};
