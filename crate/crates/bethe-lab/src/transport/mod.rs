//! Transport observables: wave-packet spreading, disorder averages of
//! Σ|x|² E Tr|G(0,x;z)|², and the identities tying them together.

mod estimate;
pub mod quadrature;
mod plancherel;
mod sampler;
mod stats;
mod ward;
mod wavepacket;

pub use estimate::{
    ballistic_indicator, cube, estimate_eg2, j_function, j_series_scalar, Insertion, JRow, McConfig, RMax, TransportScan,
    AUTO_RMAX_CAP, AUTO_RMAX_START, CSV_HEADER, TAIL_FRACTION,
};
pub use plancherel::{
    energy_integral, laplace_r2, plancherel_check, plancherel_integrand, upper_bound_check, OriginResolvent, PlancherelReport,
    UpperBound, WINDOW_PAD,
};
pub use sampler::{
    default_depth, resolve_depth, sample_path, tr_abs2, tr_sandwich, tr_weighted, HalfSpaceSampler, PathSample, PreparedSampler,
    SamplerConfig, SamplerKind, DEFAULT_POOL_SIZE, DEPTH_CAP, DOMAIN_POOL, DOMAIN_SAMPLE,
};
pub use stats::{parallel_moments, EstimatorMeta, EstimatorResult, Welford, CHUNK};
pub use ward::{j_lower_bound, ward_identity_check, Moment, Verdict, WardCheck, WardReport, SIGMAS};
pub use wavepacket::{r2_origin, wavepacket_r2, BallSpectrum};
