//! Cat states through Gaussian lossy channels.
//!
//! Closed-form Wigner functions of coherent-state superpositions after
//! separable Gaussian channels, the channel condition for surviving Wigner
//! negativity, the Hilbert–Schmidt distance between opposite-parity cats,
//! and optimizers for the protective squeezing that best preserves them.
//! [`oracle`] holds independent quadrature implementations used to check
//! the closed forms.

pub mod channel;
pub mod cli;
pub mod distance;
pub mod error;
pub mod negativity;
pub mod optimize;
pub mod oracle;
pub mod state;
pub mod sweep;
pub mod units;
pub mod wigner;

pub use channel::{
    classicality_check, composite_channel, concatenate, effective_single, lossy_channel,
    ChannelParams, Classicality, CompositeSpec, EffectiveChannel, LossyStage,
};
pub use distance::{hs_distance, hs_factors, overlap, purity, DistanceBreakdown, HsFactors};
pub use error::{Error, Result};
pub use negativity::{
    central_negativity, feasible_region, feasible_v, is_feasible, negativity_margin,
    negativity_possible, FeasibleRegion,
};
pub use optimize::{
    optimize_composite, optimize_presqueeze_cn, optimize_presqueeze_hs, optimize_stage_hs, scalar_maximize,
    OptimizationResult, ScalarMax, SearchConfig,
};
pub use state::{CatState, Parity, PhasePoint};
pub use units::{db_to_nats, nats_to_db};
pub use wigner::{wigner_ideal, wigner_transformed, TransformedWigner};
