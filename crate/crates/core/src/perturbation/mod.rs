//! Restart perturbations `(1 - alpha) P + alpha 1^T sigma`, their exact
//! stationary error, and the bounds that sandwich it.

pub mod bounds;
pub mod restart;
pub mod schedule;
pub mod sweep;

pub use bounds::{
    adversarial_restart, perturbation_report, upper_bound, upper_bound_from_profile,
    AdversarialRestart, BoundOptions, PerturbationReport, UpperBound,
};
pub use restart::{
    perturbation_error, perturbation_error_from, radius, restart_matrix,
    restart_stationary_series, RestartPerturbation,
};
pub use schedule::{
    coincidence_check, condition61_check, CoincidenceReport, Condition61Report,
    PerturbationSchedule, TmixGrid,
};
pub use sweep::{sweep_csv, trichotomy_sweep, AlphaRule, RestartKind, SweepConfig};
