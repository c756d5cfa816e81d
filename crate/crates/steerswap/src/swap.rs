//! The entanglement-swapping protocol: closed-form output covariance,
//! feedforward gain resolution (unit, optimal, fixed), and steering
//! classification of the swapped pair (A, D').
//!
//! Protocol wiring: two identical EPR resources (A,B) and (C,D); B travels
//! channel 1 and C channel 2; B and C interfere on a balanced beam
//! splitter; the difference-port x quadrature and sum-port p quadrature
//! are homodyned at efficiency `eta`; the photocurrents are fed forward
//! onto D with equal gain `g` in both quadratures, producing D'.

use crate::channel::{ChannelParams, DetectionParams};
use crate::gauss::{
    GaussError, SqueezedResource, SteeringDirection, SteeringResult, TwoModeCovariance,
};
use crate::search::golden_section_max;
use thiserror::Error;

/// Feedforward gain search range; gains are strictly positive.
pub const GAIN_BRACKET: (f64, f64) = (1e-9, 10.0);
/// Golden-section bracket tolerance for numeric gain optimization.
pub const GAIN_SEARCH_TOL: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum SwapError {
    #[error("fixed gain must be finite and positive, got {0}")]
    InvalidFixedGain(f64),
    #[error("optimal D'->A gain is undefined for an unsqueezed resource (r = 0)")]
    DegenerateResource,
    #[error(transparent)]
    Gauss(#[from] GaussError),
}

/// Feedforward gain policy; equal gain applies to both quadrature paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GainSetting {
    Unit,
    OptimalAtoD,
    OptimalDtoA,
    Fixed(f64),
}

/// Full protocol configuration: one shared resource squeezing, the two
/// channels of modes B and C, joint-measurement detection efficiency, and
/// the gain policy. Modes A and D stay local (no channel applies).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwapConfig {
    pub resource: SqueezedResource,
    pub channel1: ChannelParams,
    pub channel2: ChannelParams,
    pub detection: DetectionParams,
    pub gain: GainSetting,
}

impl SwapConfig {
    pub fn new(
        resource: SqueezedResource,
        channel1: ChannelParams,
        channel2: ChannelParams,
        detection: DetectionParams,
        gain: GainSetting,
    ) -> Result<Self, SwapError> {
        if let GainSetting::Fixed(g) = gain {
            if !g.is_finite() || g <= 0.0 {
                return Err(SwapError::InvalidFixedGain(g));
            }
        }
        Ok(Self { resource, channel1, channel2, detection, gain })
    }

    fn is_ideal(&self) -> bool {
        self.channel1.t() == 1.0
            && self.channel2.t() == 1.0
            && self.channel1.w() == 0.0
            && self.channel2.w() == 0.0
            && self.detection.eta() == 1.0
    }
}

/// Outcome of a numeric gain search: the argmax gain and the (clipped)
/// steerability there. `steering == 0` means no steering at any gain in
/// the bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainSearch {
    pub gain: f64,
    pub steering: f64,
}

impl GainSearch {
    pub fn steerable(&self) -> bool {
        self.steering > 0.0
    }
}

/// The quadratic coefficient of `g^2` in the output `b` element:
/// `K = 2 + eta [ (T1 + T2)(V - 1) - T1 W1 - T2 W2 + W1 + W2 ]`.
fn b_quadratic_coefficient(cfg: &SwapConfig, fault: f64) -> f64 {
    let v = cfg.resource.v();
    let (t1, w1) = (cfg.channel1.t(), cfg.channel1.w());
    let (t2, w2) = (cfg.channel2.t(), cfg.channel2.w());
    let eta = cfg.detection.eta();
    2.0 + eta * ((t1 + t2) * (v - 1.0) - t1 * w1 - t2 * w2 + w1 + w2) + fault
}

fn elements_at_gain(cfg: &SwapConfig, g: f64, fault: f64) -> (f64, f64, f64) {
    let v = cfg.resource.v();
    let s = (v * v - 1.0).sqrt();
    let eta = cfg.detection.eta();
    let k = b_quadratic_coefficient(cfg, fault);
    let a = v;
    let b = v - 2.0 * g * (eta * cfg.channel2.t()).sqrt() * s + g * g * k;
    let c = g * (eta * cfg.channel1.t()).sqrt() * s;
    (a, b, c)
}

/// Unclipped log-ratio objective whose positive part is the steerability
/// in the requested direction; total in `g` since the output state is
/// physical at every gain.
fn raw_steering_at_gain(cfg: &SwapConfig, g: f64, direction: SteeringDirection) -> f64 {
    let (a, b, c) = elements_at_gain(cfg, g, 0.0);
    let m = a * b - c * c;
    let num = match direction {
        SteeringDirection::AtoB => a,
        SteeringDirection::BtoA => b,
    };
    (num / m).ln()
}

/// Optimal feedforward gain for the A -> D' direction under arbitrary
/// channel loss, excess noise, and detection efficiency:
/// `g = V sqrt(eta T2) sqrt(V^2 - 1) / (V K - eta T1 (V^2 - 1))`.
/// Reduces to the ideal closed form of [`ideal_optimal_gain_a_to_d`] when
/// all imperfections vanish.
pub fn optimal_gain_a_to_d(cfg: &SwapConfig) -> f64 {
    let v = cfg.resource.v();
    let s = (v * v - 1.0).sqrt();
    let eta = cfg.detection.eta();
    let k = b_quadratic_coefficient(cfg, 0.0);
    v * (eta * cfg.channel2.t()).sqrt() * s / (v * k - eta * cfg.channel1.t() * s * s)
}

/// Ideal-case optimal gain for A -> D' steering: `V sqrt(V^2-1) / (V^2+1)`,
/// strictly below 1 for every V > 1.
pub fn ideal_optimal_gain_a_to_d(res: &SqueezedResource) -> f64 {
    let v = res.v();
    let s = (v * v - 1.0).sqrt();
    v * s / (v * v + 1.0)
}

/// Ideal-case optimal gain for D' -> A steering: `V / sqrt(V^2-1)`,
/// strictly above 1 and divergent as `r -> 0`.
pub fn ideal_optimal_gain_d_to_a(res: &SqueezedResource) -> Result<f64, SwapError> {
    let v = res.v();
    if v <= 1.0 {
        return Err(SwapError::DegenerateResource);
    }
    Ok(v / (v * v - 1.0).sqrt())
}

/// Resolves the configured gain policy to a numeric gain.
///
/// `OptimalAtoD` uses the closed form for any parameters; `OptimalDtoA`
/// uses its ideal closed form when no imperfection is present and numeric
/// maximization otherwise.
///
/// # Errors
/// `OptimalDtoA` with `r = 0` (the closed form diverges and the objective
/// is gain-independent).
pub fn resolve_gain(cfg: &SwapConfig) -> Result<f64, SwapError> {
    match cfg.gain {
        GainSetting::Unit => Ok(1.0),
        GainSetting::Fixed(g) => {
            if !g.is_finite() || g <= 0.0 {
                return Err(SwapError::InvalidFixedGain(g));
            }
            Ok(g)
        }
        GainSetting::OptimalAtoD => Ok(optimal_gain_a_to_d(cfg)),
        GainSetting::OptimalDtoA => {
            if cfg.resource.v() <= 1.0 {
                return Err(SwapError::DegenerateResource);
            }
            if cfg.is_ideal() {
                ideal_optimal_gain_d_to_a(&cfg.resource)
            } else {
                Ok(numeric_optimal_gain(cfg, SteeringDirection::BtoA).gain)
            }
        }
    }
}

pub(crate) fn output_covariance_faulted(
    cfg: &SwapConfig,
    fault: f64,
) -> Result<TwoModeCovariance, SwapError> {
    let g = resolve_gain(cfg)?;
    let (a, b, c) = elements_at_gain(cfg, g, fault);
    Ok(TwoModeCovariance::new(a, b, c)?)
}

/// Closed-form covariance of the swapped output pair (A, D'):
/// `a = V`,
/// `b = V - 2 g sqrt(eta T2) sqrt(V^2-1) + g^2 K`,
/// `c = g sqrt(eta T1) sqrt(V^2-1)`,
/// with `K` as in the `b`-element coefficient. Reduces to
/// `(V, (1 + 2g^2) V - 2 g sqrt(V^2-1), g sqrt(V^2-1))` in the ideal case.
pub fn output_covariance(cfg: &SwapConfig) -> Result<TwoModeCovariance, SwapError> {
    output_covariance_faulted(cfg, 0.0)
}

/// Steerabilities of the output pair in both directions plus the region
/// classification.
pub fn swap_steering(cfg: &SwapConfig) -> Result<SteeringResult, SwapError> {
    let cm = output_covariance(cfg)?;
    let g_ab = crate::gauss::steerability(&cm, SteeringDirection::AtoB)?;
    let g_ba = crate::gauss::steerability(&cm, SteeringDirection::BtoA)?;
    Ok(SteeringResult::new(g_ab, g_ba))
}

/// Convenience: steering of `cfg` with its gain policy replaced by a fixed
/// numeric gain (used by sweeps).
pub fn swap_steering_at_gain(cfg: &SwapConfig, g: f64) -> Result<SteeringResult, SwapError> {
    let (a, b, c) = elements_at_gain(cfg, g, 0.0);
    let cm = TwoModeCovariance::new(a, b, c)?;
    let g_ab = crate::gauss::steerability(&cm, SteeringDirection::AtoB)?;
    let g_ba = crate::gauss::steerability(&cm, SteeringDirection::BtoA)?;
    Ok(SteeringResult::new(g_ab, g_ba))
}

/// Maximizes the steerability in `direction` over the gain bracket
/// `(0, 10]` by a coarse scan plus golden-section refinement to
/// [`GAIN_SEARCH_TOL`]. The returned [`GainSearch::steering`] is 0 when no
/// gain in the bracket yields steering (a valid outcome, not an error).
pub fn numeric_optimal_gain(cfg: &SwapConfig, direction: SteeringDirection) -> GainSearch {
    let (lo, hi) = GAIN_BRACKET;
    let objective = |g: f64| raw_steering_at_gain(cfg, g, direction);

    const SCAN_POINTS: usize = 256;
    let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
    let mut best = (0, objective(lo));
    for i in 1..SCAN_POINTS {
        let val = objective(lo + step * i as f64);
        if val > best.1 {
            best = (i, val);
        }
    }
    let bracket_lo = lo + step * best.0.saturating_sub(1) as f64;
    let bracket_hi = (lo + step * (best.0 + 1) as f64).min(hi);
    let gain = golden_section_max(objective, bracket_lo, bracket_hi, GAIN_SEARCH_TOL);
    GainSearch { gain, steering: objective(gain).max(0.0) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const V_115: f64 = 5.037220649268761;

    fn ideal_cfg(r: f64, gain: GainSetting) -> SwapConfig {
        SwapConfig::new(
            SqueezedResource::from_r(r).unwrap(),
            ChannelParams::ideal(),
            ChannelParams::ideal(),
            DetectionParams::ideal(),
            gain,
        )
        .unwrap()
    }

    fn imperfect_cfg(gain: GainSetting) -> SwapConfig {
        SwapConfig::new(
            SqueezedResource::from_r(1.15).unwrap(),
            ChannelParams::new(0.7, 0.3).unwrap(),
            ChannelParams::new(0.9, 0.1).unwrap(),
            DetectionParams::new(0.9).unwrap(),
            gain,
        )
        .unwrap()
    }

    #[test]
    fn fixed_gain_is_validated() {
        let res = SqueezedResource::from_r(1.0).unwrap();
        let bad = SwapConfig::new(
            res,
            ChannelParams::ideal(),
            ChannelParams::ideal(),
            DetectionParams::ideal(),
            GainSetting::Fixed(0.0),
        );
        assert_eq!(bad.unwrap_err(), SwapError::InvalidFixedGain(0.0));
    }

    #[test]
    fn ideal_optimal_gains_match_closed_forms() {
        let cfg = ideal_cfg(1.15, GainSetting::OptimalAtoD);
        let g_ad = resolve_gain(&cfg).unwrap();
        assert!((g_ad - 0.9429343592892477).abs() < 1e-15);
        assert!((optimal_gain_a_to_d(&cfg) - g_ad).abs() < 1e-15);

        let cfg = ideal_cfg(1.15, GainSetting::OptimalDtoA);
        let g_da = resolve_gain(&cfg).unwrap();
        assert!((g_da - 1.0203078021811263).abs() < 1e-15);
    }

    #[test]
    fn optimal_gains_approach_unity_at_large_squeezing() {
        for gain in [GainSetting::OptimalAtoD, GainSetting::OptimalDtoA] {
            let g = resolve_gain(&ideal_cfg(7.0, gain)).unwrap();
            assert!((g - 1.0).abs() < 1e-5, "{gain:?}: {g}");
        }
    }

    #[test]
    fn degenerate_resource_rejected_for_d_to_a_gain() {
        let cfg = ideal_cfg(0.0, GainSetting::OptimalDtoA);
        assert_eq!(resolve_gain(&cfg), Err(SwapError::DegenerateResource));
        let cfg = imperfect_cfg(GainSetting::OptimalDtoA);
        let cfg = SwapConfig { resource: SqueezedResource::from_r(0.0).unwrap(), ..cfg };
        assert_eq!(resolve_gain(&cfg), Err(SwapError::DegenerateResource));
    }

    #[test]
    fn ideal_gain_bounds_and_unity_approach() {
        // A->D' optimum below 1, D'->A above 1, both approaching 1 in r.
        let mut last_ad = 0.0;
        let mut last_da = f64::INFINITY;
        for i in 1..=70 {
            let r = 0.1 * i as f64;
            let res = SqueezedResource::from_r(r).unwrap();
            let g_ad = ideal_optimal_gain_a_to_d(&res);
            let g_da = ideal_optimal_gain_d_to_a(&res).unwrap();
            assert!(g_ad < 1.0 && 1.0 < g_da, "r={r}");
            assert!(g_ad > last_ad, "r={r}");
            assert!(g_da < last_da, "r={r}");
            last_ad = g_ad;
            last_da = g_da;
        }
    }

    #[test]
    fn ideal_unit_gain_output_matches_known_elements() {
        let cfg = ideal_cfg(1.15, GainSetting::Unit);
        let cm = output_covariance(&cfg).unwrap();
        assert!((cm.a() - V_115).abs() < 1e-15);
        assert!((cm.b() - 5.237738336714369).abs() < 1e-12);
        assert!((cm.c() - 4.936961805545957).abs() < 1e-15);
        // b = 3V - 2 sqrt(V^2-1) for g = 1
        let expect_b = 3.0 * V_115 - 2.0 * (V_115 * V_115 - 1.0).sqrt();
        assert!((cm.b() - expect_b).abs() < 1e-12);

        let sr = swap_steering(&cfg).unwrap();
        assert!((sr.g_ab - 0.9186939608295723).abs() < 1e-12);
        assert!((sr.g_ba - 0.9577292793633498).abs() < 1e-12);
    }

    #[test]
    fn unsqueezed_resource_yields_uncorrelated_output() {
        let cfg = SwapConfig::new(
            SqueezedResource::from_r(0.0).unwrap(),
            ChannelParams::new(0.5, 0.3).unwrap(),
            ChannelParams::new(0.8, 1.0).unwrap(),
            DetectionParams::new(0.95).unwrap(),
            GainSetting::Fixed(0.7),
        )
        .unwrap();
        let cm = output_covariance(&cfg).unwrap();
        assert_eq!(cm.a(), 1.0);
        assert_eq!(cm.c(), 0.0);
        let k0 = 2.0 + 0.95 * (0.5 * 0.3 + 0.2 * 1.0);
        assert!((cm.b() - (1.0 + 0.49 * k0)).abs() < 1e-12);
        assert_eq!(swap_steering(&cfg).unwrap().region, crate::gauss::SteeringRegion::NoSteering);
    }

    #[test]
    fn imperfect_output_matches_frozen_elements() {
        let cfg = imperfect_cfg(GainSetting::OptimalAtoD);
        let g = resolve_gain(&cfg).unwrap();
        assert!((g - 0.9151527084813424).abs() < 1e-13);

        let cm = output_covariance(&cfg).unwrap();
        assert!((cm.b() - 3.52398601672021).abs() < 1e-12);
        assert!((cm.c() - 3.586110037308207).abs() < 1e-12);

        let sr = swap_steering(&cfg).unwrap();
        assert!((sr.g_ab - 0.029476105263487474).abs() < 1e-12);
        assert_eq!(sr.g_ba, 0.0);
        assert_eq!(sr.region, crate::gauss::SteeringRegion::OneWayAB);

        let unit = imperfect_cfg(GainSetting::Unit);
        let cm = output_covariance(&unit).unwrap();
        assert!((cm.b() - 4.054287134233053).abs() < 1e-12);
        assert!((cm.c() - 3.9185919509097076).abs() < 1e-12);
    }

    #[test]
    fn numeric_gain_matches_closed_forms_in_ideal_case() {
        let cfg = ideal_cfg(1.15, GainSetting::Unit);
        let ad = numeric_optimal_gain(&cfg, SteeringDirection::AtoB);
        assert!((ad.gain - 0.9429343592892477).abs() < 1e-6);
        assert!(ad.steerable());
        let da = numeric_optimal_gain(&cfg, SteeringDirection::BtoA);
        assert!((da.gain - 1.0203078021811263).abs() < 1e-6);
        assert!(da.steerable());
    }

    #[test]
    fn numeric_gain_matches_lossy_closed_form() {
        let cfg = SwapConfig::new(
            SqueezedResource::from_r(1.15).unwrap(),
            ChannelParams::new(0.12589254117941673, 0.0).unwrap(),
            ChannelParams::ideal(),
            DetectionParams::new(0.95).unwrap(),
            GainSetting::OptimalAtoD,
        )
        .unwrap();
        let closed = optimal_gain_a_to_d(&cfg);
        assert!((closed - 0.8383920783628159).abs() < 1e-13);
        let numeric = numeric_optimal_gain(&cfg, SteeringDirection::AtoB);
        assert!((numeric.gain - closed).abs() < 1e-6);
    }

    #[test]
    fn numeric_gain_reports_dead_steering_as_outcome() {
        let cfg = imperfect_cfg(GainSetting::Unit);
        let da = numeric_optimal_gain(&cfg, SteeringDirection::BtoA);
        assert!((da.gain - 1.1336753283392471).abs() < 1e-6);
        assert_eq!(da.steering, 0.0);
        assert!(!da.steerable());
    }

    #[test]
    fn numeric_optimum_dominates_sampled_gains() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let cfg = SwapConfig::new(
                SqueezedResource::from_r(rng.random_range(0.3..1.8)).unwrap(),
                ChannelParams::new(rng.random_range(0.2..1.0), rng.random_range(0.0..2.0))
                    .unwrap(),
                ChannelParams::new(rng.random_range(0.2..1.0), rng.random_range(0.0..2.0))
                    .unwrap(),
                DetectionParams::new(rng.random_range(0.6..1.0)).unwrap(),
                GainSetting::Unit,
            )
            .unwrap();
            for dir in [SteeringDirection::AtoB, SteeringDirection::BtoA] {
                let opt = numeric_optimal_gain(&cfg, dir);
                let g_at = |g: f64| match dir {
                    SteeringDirection::AtoB => swap_steering_at_gain(&cfg, g).unwrap().g_ab,
                    SteeringDirection::BtoA => swap_steering_at_gain(&cfg, g).unwrap().g_ba,
                };
                let best = g_at(opt.gain);
                for _ in 0..100 {
                    let g = rng.random_range(GAIN_BRACKET.0..GAIN_BRACKET.1);
                    assert!(g_at(g) <= best + 1e-9, "dir {dir:?} beaten at g={g}");
                }
            }
        }
    }

    #[test]
    fn closed_form_a_to_d_gain_is_argmax_everywhere() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let cfg = SwapConfig::new(
                SqueezedResource::from_r(rng.random_range(0.1..2.0)).unwrap(),
                ChannelParams::new(rng.random_range(0.05..1.0), rng.random_range(0.0..5.0))
                    .unwrap(),
                ChannelParams::new(rng.random_range(0.05..1.0), rng.random_range(0.0..5.0))
                    .unwrap(),
                DetectionParams::new(rng.random_range(0.5..1.0)).unwrap(),
                GainSetting::Unit,
            )
            .unwrap();
            let closed = optimal_gain_a_to_d(&cfg);
            let numeric = numeric_optimal_gain(&cfg, SteeringDirection::AtoB);
            assert!(
                (numeric.gain - closed).abs() < 1e-6,
                "closed {closed} vs numeric {}",
                numeric.gain
            );
        }
    }

    #[test]
    fn one_way_outputs_are_asymmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        let mut seen_one_way = 0;
        for _ in 0..400 {
            let cfg = SwapConfig::new(
                SqueezedResource::from_r(rng.random_range(0.1..1.5)).unwrap(),
                ChannelParams::new(rng.random_range(0.2..1.0), rng.random_range(0.0..1.0))
                    .unwrap(),
                ChannelParams::new(rng.random_range(0.2..1.0), rng.random_range(0.0..1.0))
                    .unwrap(),
                DetectionParams::new(rng.random_range(0.7..1.0)).unwrap(),
                GainSetting::OptimalAtoD,
            )
            .unwrap();
            let sr = swap_steering(&cfg).unwrap();
            if matches!(
                sr.region,
                crate::gauss::SteeringRegion::OneWayAB | crate::gauss::SteeringRegion::OneWayBA
            ) {
                let cm = output_covariance(&cfg).unwrap();
                assert_ne!(cm.a(), cm.b());
                seen_one_way += 1;
            }
        }
        assert!(seen_one_way > 10, "sample produced too few one-way cases");
    }

    #[test]
    fn swapping_always_degrades_the_resource() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..300 {
            let r = rng.random_range(0.05..2.0);
            let cfg = SwapConfig::new(
                SqueezedResource::from_r(r).unwrap(),
                ChannelParams::new(rng.random_range(0.05..1.0), rng.random_range(0.0..3.0))
                    .unwrap(),
                ChannelParams::new(rng.random_range(0.05..1.0), rng.random_range(0.0..3.0))
                    .unwrap(),
                DetectionParams::new(rng.random_range(0.5..1.0)).unwrap(),
                GainSetting::Fixed(rng.random_range(0.1..3.0)),
            )
            .unwrap();
            let sr = swap_steering(&cfg).unwrap();
            let resource_g = (2.0 * r).cosh().ln();
            assert!(sr.g_ab < resource_g, "r={r}");
            assert!(sr.g_ba < resource_g, "r={r}");
        }
    }

    #[test]
    fn steering_degrades_with_each_imperfection() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let eps = 1e-3;
        for _ in 0..100 {
            let t1 = rng.random_range(0.1..0.99);
            let t2 = rng.random_range(0.1..0.99);
            let w1 = rng.random_range(0.0..3.0);
            let w2 = rng.random_range(0.0..3.0);
            let eta = rng.random_range(0.5..0.999);
            let build = |t1: f64, w1: f64, t2: f64, w2: f64, eta: f64| {
                SwapConfig::new(
                    SqueezedResource::from_r(1.15).unwrap(),
                    ChannelParams::new(t1, w1).unwrap(),
                    ChannelParams::new(t2, w2).unwrap(),
                    DetectionParams::new(eta).unwrap(),
                    GainSetting::OptimalAtoD,
                )
                .unwrap()
            };
            let base = swap_steering(&build(t1, w1, t2, w2, eta)).unwrap().g_ab;
            let degraded = [
                build(t1 * (1.0 - eps), w1, t2, w2, eta),
                build(t1, w1 + eps, t2, w2, eta),
                build(t1, w1, t2 * (1.0 - eps), w2, eta),
                build(t1, w1, t2, w2 + eps, eta),
                build(t1, w1, t2, w2, eta * (1.0 - eps)),
            ];
            for (i, cfg) in degraded.iter().enumerate() {
                let g = swap_steering(cfg).unwrap().g_ab;
                assert!(g <= base + 1e-12, "imperfection {i} raised steering");
            }
        }
    }
}
