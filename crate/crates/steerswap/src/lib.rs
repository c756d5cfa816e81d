//! Simulator for entanglement swapping of Gaussian EPR-steerable states.
//!
//! Two identical two-mode squeezed vacuum resources (A,B) and (C,D) are
//! swapped by a joint homodyne measurement on B and C (after lossy, noisy
//! channels) followed by classical feedforward onto D. The crate computes
//! the output covariance matrix of the never-interacting pair (A, D') in
//! closed form, quantifies Gaussian steerability in both directions, and
//! locates the squeezing/distance thresholds, region maps, and crossover
//! points of the protocol.
//!
//! Steerability is reported in nats (natural logarithm). Variances are in
//! shot-noise units (vacuum quadrature variance = 1). An independent
//! Heisenberg-picture propagation engine ([`oracle`]) cross-checks every
//! closed-form covariance without sharing any element formula.

pub mod channel;
pub mod cli;
pub mod finders;
pub mod gauss;
pub mod oracle;
pub mod search;
pub mod swap;
pub mod verify;

pub use channel::{ChannelParams, DetectionParams};
pub use gauss::{
    epr_state, physicality_check, steerability, SqueezedResource, SteeringDirection,
    SteeringRegion, SteeringResult, TwoModeCovariance,
};
pub use swap::{
    numeric_optimal_gain, output_covariance, resolve_gain, swap_steering, GainSetting,
    SwapConfig,
};
