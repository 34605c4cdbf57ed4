//! Distance-to-stationarity curves, mixing and relaxation times, hitting
//! times of large sets, and checks of the inequalities relating them.

pub mod basu;
pub mod hitting;
pub mod profile;
pub mod spectrum;

pub use basu::{basu_check, submultiplicativity_check, BasuReport, SubmultiplicativityReport};
pub use hitting::{hitting_profile, t_hit, HittingTimeCertificate, SearchMode, BRUTE_FORCE_LIMIT};
pub use profile::{
    cutoff_ratio, distance_profile, mixing_time, pairwise_profile, profile_until, CutoffRatio,
    MixingProfile,
};
pub use spectrum::{spectrum, SpectrumSummary};
