//! Root finders over protocol parameters: squeezing thresholds, maximum
//! transmission distances, the steering-direction crossover point, and
//! region maps over the two channel lengths.
//!
//! All finders take a template [`SwapConfig`] whose swept parameter
//! (squeezing or channel length) is replaced point by point; channel
//! excess noise, detection efficiency, and the gain policy come from the
//! template unchanged.

use crate::channel::ChannelParams;
use crate::gauss::{SqueezedResource, SteeringDirection, SteeringRegion};
use crate::search::bisect_boundary;
use crate::swap::{swap_steering, SwapConfig, SwapError};
use thiserror::Error;

/// Squeezing-threshold search bracket in `r`.
pub const SQUEEZING_BRACKET: (f64, f64) = (0.0, 3.0);
/// Bisection tolerance for squeezing thresholds.
pub const SQUEEZING_TOL: f64 = 1e-6;
/// Distance search bracket in km.
pub const DISTANCE_BRACKET: (f64, f64) = (0.0, 500.0);
/// Bisection tolerance for distance thresholds, km.
pub const DISTANCE_TOL: f64 = 1e-3;
/// Tolerance of each crossover coordinate, km.
pub const CROSSOVER_TOL: f64 = 1e-2;

#[derive(Debug, Error, PartialEq)]
pub enum FinderError {
    #[error(transparent)]
    Swap(#[from] SwapError),
    #[error(transparent)]
    Channel(#[from] crate::channel::ChannelError),
    #[error(transparent)]
    Gauss(#[from] crate::gauss::GaussError),
    #[error("steerability crosses zero more than once over the search bracket")]
    MultipleBoundaries,
    #[error("grid values must be finite, nonnegative, and ascending")]
    InvalidGrid,
}

/// Channel-length sweep layout: one lossy channel (the other lossless) or
/// both channels at equal length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    SingleChannel,
    SymmetricDual,
}

/// Outcome of a distance-threshold search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DistanceThreshold {
    /// Steering is absent already at zero channel length.
    DeadAtZero,
    /// Supremum length (km) with positive steering.
    Threshold(f64),
    /// Steering survives through the whole search bracket.
    BeyondBracket,
}

impl DistanceThreshold {
    pub fn km(&self) -> Option<f64> {
        match self {
            Self::Threshold(km) => Some(*km),
            _ => None,
        }
    }
}

fn steering_in(cfg: &SwapConfig, direction: SteeringDirection) -> Result<f64, SwapError> {
    let sr = swap_steering(cfg)?;
    Ok(match direction {
        SteeringDirection::AtoB => sr.g_ab,
        SteeringDirection::BtoA => sr.g_ba,
    })
}

fn with_r(template: &SwapConfig, r: f64) -> Result<SwapConfig, SwapError> {
    let resource = SqueezedResource::from_r(r)?;
    Ok(SwapConfig { resource, ..*template })
}

fn steering_at_r(
    template: &SwapConfig,
    r: f64,
    direction: SteeringDirection,
) -> Result<f64, SwapError> {
    if r <= 0.0 {
        return Ok(0.0);
    }
    steering_in(&with_r(template, r)?, direction)
}

/// Infimum squeezing `r` with positive steering in `direction`, by
/// bisection over [`SQUEEZING_BRACKET`] to [`SQUEEZING_TOL`]; `None` when
/// steering stays zero across the bracket.
///
/// Bisection needs a unique zero boundary, which is spot-checked on a
/// coarse grid first. Steerability itself need not be monotone: at fixed
/// gain it falls off again toward large r without re-crossing zero.
pub fn find_squeezing_threshold(
    template: &SwapConfig,
    direction: SteeringDirection,
) -> Result<Option<f64>, FinderError> {
    let (lo, hi) = SQUEEZING_BRACKET;
    let mut transitions = 0;
    let mut last = steering_at_r(template, lo, direction)? > 0.0;
    for i in 1..=12 {
        let r = lo + (hi - lo) * i as f64 / 12.0;
        let now = steering_at_r(template, r, direction)? > 0.0;
        if now != last {
            transitions += 1;
        }
        last = now;
    }
    if transitions > 1 {
        return Err(FinderError::MultipleBoundaries);
    }
    if steering_at_r(template, hi, direction)? <= 0.0 {
        return Ok(None);
    }
    let threshold = bisect_boundary(
        |r| {
            steering_at_r(template, r, direction)
                .expect("bracket endpoints validated; interior evaluation cannot fail")
                > 0.0
        },
        lo,
        hi,
        SQUEEZING_TOL,
    );
    Ok(Some(threshold))
}

fn config_at_lengths(
    template: &SwapConfig,
    alpha_db_per_km: f64,
    l1_km: f64,
    l2_km: f64,
) -> Result<SwapConfig, FinderError> {
    let channel1 = ChannelParams::from_distance(l1_km, alpha_db_per_km, template.channel1.w())?;
    let channel2 = ChannelParams::from_distance(l2_km, alpha_db_per_km, template.channel2.w())?;
    Ok(SwapConfig { channel1, channel2, ..*template })
}

/// Steering of the template with its channels replaced by fiber spans of
/// the given lengths.
pub fn steering_at_lengths(
    template: &SwapConfig,
    alpha_db_per_km: f64,
    l1_km: f64,
    l2_km: f64,
    direction: SteeringDirection,
) -> Result<f64, FinderError> {
    let cfg = config_at_lengths(template, alpha_db_per_km, l1_km, l2_km)?;
    Ok(steering_in(&cfg, direction)?)
}

/// Supremum channel length with positive steering in `direction`, by
/// bisection over [`DISTANCE_BRACKET`] to [`DISTANCE_TOL`] km.
///
/// `SingleChannel` sweeps channel 1 with channel 2 pinned lossless (its
/// excess noise setting is inert at t = 1); `SymmetricDual` sweeps both
/// lengths together.
pub fn find_distance_threshold(
    template: &SwapConfig,
    alpha_db_per_km: f64,
    direction: SteeringDirection,
    scheme: Scheme,
) -> Result<DistanceThreshold, FinderError> {
    let lengths = |l: f64| match scheme {
        Scheme::SingleChannel => (l, 0.0),
        Scheme::SymmetricDual => (l, l),
    };
    let (lo, hi) = DISTANCE_BRACKET;
    let alive = |l: f64| -> Result<bool, FinderError> {
        let (l1, l2) = lengths(l);
        Ok(steering_at_lengths(template, alpha_db_per_km, l1, l2, direction)? > 0.0)
    };
    if !alive(lo)? {
        return Ok(DistanceThreshold::DeadAtZero);
    }
    if alive(hi)? {
        return Ok(DistanceThreshold::BeyondBracket);
    }
    let km = bisect_boundary(
        |l| alive(l).expect("bracket endpoints validated; interior evaluation cannot fail"),
        lo,
        hi,
        DISTANCE_TOL,
    );
    Ok(DistanceThreshold::Threshold(km))
}

/// The `l2` at which steering in `direction` dies for fixed `l1`, or
/// `None` when it is dead at `l2 = 0` or alive through the bracket.
pub fn boundary_length(
    template: &SwapConfig,
    alpha_db_per_km: f64,
    direction: SteeringDirection,
    l1_km: f64,
) -> Result<Option<f64>, FinderError> {
    let (lo, hi) = DISTANCE_BRACKET;
    let alive = |l2: f64| -> Result<bool, FinderError> {
        Ok(steering_at_lengths(template, alpha_db_per_km, l1_km, l2, direction)? > 0.0)
    };
    if !alive(lo)? || alive(hi)? {
        return Ok(None);
    }
    Ok(Some(bisect_boundary(
        |l2| alive(l2).expect("bracket endpoints validated; interior evaluation cannot fail"),
        lo,
        hi,
        DISTANCE_TOL,
    )))
}

/// Intersection `(l1, l2)` of the two zero-steerability boundary curves in
/// the channel-length plane, to [`CROSSOVER_TOL`] km per coordinate;
/// `None` when the curves do not both exist or do not cross in the
/// searched box. On the returned boundary point the output state is
/// symmetric (`a = b`), which is the determinant-equality characterization
/// of the crossover.
pub fn find_crossover(
    template: &SwapConfig,
    alpha_db_per_km: f64,
) -> Result<Option<(f64, f64)>, FinderError> {
    let gap = |l1: f64| -> Result<Option<f64>, FinderError> {
        let ad = boundary_length(template, alpha_db_per_km, SteeringDirection::AtoB, l1)?;
        let da = boundary_length(template, alpha_db_per_km, SteeringDirection::BtoA, l1)?;
        match (ad, da) {
            (Some(ad), Some(da)) => Ok(Some(ad - da)),
            _ => Ok(None),
        }
    };

    // March l1 until the boundary-offset sign flips or a curve vanishes.
    const STEP: f64 = 0.5;
    let mut prev = match gap(0.0)? {
        Some(g) => g,
        None => return Ok(None),
    };
    if prev == 0.0 {
        let l2 = boundary_length(template, alpha_db_per_km, SteeringDirection::AtoB, 0.0)?;
        return Ok(l2.map(|l2| (0.0, l2)));
    }
    let mut l1 = 0.0;
    loop {
        let next_l1 = l1 + STEP;
        if next_l1 > DISTANCE_BRACKET.1 {
            return Ok(None);
        }
        match gap(next_l1)? {
            None => return Ok(None),
            Some(g) if g.signum() != prev.signum() => {
                let root = bisect_boundary(
                    |x| {
                        gap(x)
                            .expect("bracket endpoints validated")
                            .map(|g| g.signum() == prev.signum())
                            .unwrap_or(false)
                    },
                    l1,
                    next_l1,
                    CROSSOVER_TOL,
                );
                let l2 = boundary_length(template, alpha_db_per_km, SteeringDirection::AtoB, root)?
                    .expect("boundary exists inside the bracketing interval");
                return Ok(Some((root, l2)));
            }
            Some(g) => {
                prev = g;
                l1 = next_l1;
            }
        }
    }
}

/// Region classification at every `(l1, l2)` grid point, `l1` indexing the
/// outer vector. Grids must be finite, nonnegative, and ascending.
pub fn region_map(
    template: &SwapConfig,
    alpha_db_per_km: f64,
    l1_grid: &[f64],
    l2_grid: &[f64],
) -> Result<Vec<Vec<SteeringRegion>>, FinderError> {
    for grid in [l1_grid, l2_grid] {
        let ascending = grid.windows(2).all(|w| w[0] < w[1]);
        if grid.iter().any(|l| !l.is_finite() || *l < 0.0) || !ascending {
            return Err(FinderError::InvalidGrid);
        }
    }
    l1_grid
        .iter()
        .map(|&l1| {
            l2_grid
                .iter()
                .map(|&l2| {
                    let cfg = config_at_lengths(template, alpha_db_per_km, l1, l2)?;
                    Ok(swap_steering(&cfg)?.region)
                })
                .collect()
        })
        .collect()
}
