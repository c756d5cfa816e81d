//! Cross-validation of the closed-form output covariance against the
//! independent linear-combination simulator over randomized parameter
//! draws.
//!
//! The two paths share no algebra: one evaluates the closed-form matrix
//! elements, the other propagates quadrature operators source by source
//! and reads covariances off the declared source statistics. Agreement to
//! [`EQUIVALENCE_TOL`] on every element is the pass condition.

use crate::channel::{ChannelParams, DetectionParams};
use crate::gauss::SqueezedResource;
use crate::oracle::simulate_swap;
use crate::swap::{output_covariance_faulted, GainSetting, SwapConfig};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Largest tolerated per-element difference between the two paths.
pub const EQUIVALENCE_TOL: f64 = 1e-10;

/// Parameters of one randomized comparison case, for reproducing a
/// reported mismatch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseManifest {
    pub index: usize,
    pub r: f64,
    pub t1: f64,
    pub w1: f64,
    pub t2: f64,
    pub w2: f64,
    pub eta: f64,
    pub gain: f64,
    pub delta: f64,
}

/// Outcome of an equivalence run: how many cases executed, the worst
/// per-element difference seen, and the first failing case if any.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub cases: usize,
    pub max_delta: f64,
    pub failure: Option<CaseManifest>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Case 0 pins the fully ideal protocol so the lossless code path of the
/// simulator is always exercised; the rest draw from ranges wide enough
/// to cover strong squeezing, deep loss, heavy excess noise, and
/// inefficient detection.
fn sample(rng: &mut ChaCha8Rng, index: usize) -> CaseManifest {
    if index == 0 {
        return CaseManifest {
            index,
            r: 1.15,
            t1: 1.0,
            w1: 0.0,
            t2: 1.0,
            w2: 0.0,
            eta: 1.0,
            gain: 1.0,
            delta: 0.0,
        };
    }
    CaseManifest {
        index,
        r: rng.random_range(0.0..2.0),
        t1: rng.random_range(0.05..1.0),
        w1: rng.random_range(0.0..5.0),
        t2: rng.random_range(0.05..1.0),
        w2: rng.random_range(0.0..5.0),
        eta: rng.random_range(0.5..1.0),
        gain: rng.random_range(0.1..3.0),
        delta: 0.0,
    }
}

fn config_of(case: &CaseManifest) -> SwapConfig {
    SwapConfig::new(
        SqueezedResource::from_r(case.r).expect("sampled r is valid"),
        ChannelParams::new(case.t1, case.w1).expect("sampled channel is valid"),
        ChannelParams::new(case.t2, case.w2).expect("sampled channel is valid"),
        DetectionParams::new(case.eta).expect("sampled efficiency is valid"),
        GainSetting::Fixed(case.gain),
    )
    .expect("sampled gain is valid")
}

/// Compare `cases` randomized configurations drawn from `seed`. `fault`
/// perturbs the closed-form path only (zero for an honest run) and exists
/// to demonstrate that the check actually discriminates. Stops at the
/// first case exceeding [`EQUIVALENCE_TOL`].
pub fn run_equivalence(seed: u64, cases: usize, fault: f64) -> EquivalenceReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_delta: f64 = 0.0;
    let mut run = 0;
    for index in 0..cases {
        let mut case = sample(&mut rng, index);
        let cfg = config_of(&case);
        let closed = output_covariance_faulted(&cfg, fault).expect("sampled config resolves");
        let simulated = simulate_swap(&cfg).expect("sampled config simulates");
        let delta = (closed.a() - simulated.a())
            .abs()
            .max((closed.b() - simulated.b()).abs())
            .max((closed.c() - simulated.c()).abs());
        run += 1;
        max_delta = max_delta.max(delta);
        if delta > EQUIVALENCE_TOL {
            case.delta = delta;
            return EquivalenceReport { cases: run, max_delta, failure: Some(case) };
        }
    }
    EquivalenceReport { cases: run, max_delta, failure: None }
}
