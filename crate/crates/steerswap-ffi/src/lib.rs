//! C ABI for the steerswap simulator core.
//!
//! Configurations are opaque handles created by [`steerswap_config_new`]
//! and released by [`steerswap_config_free`]; every compute call reports a
//! [`SteerswapStatus`] and writes results through out-pointers. The
//! `include/steerswap.h` header is generated from this file at build time.

use std::ffi::c_char;

use steerswap::gauss::{SteeringRegion, SqueezedResource};
use steerswap::swap::SwapError;
use steerswap::{
    output_covariance, resolve_gain, swap_steering, ChannelParams, DetectionParams, GainSetting,
    SwapConfig,
};

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteerswapStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A parameter was outside its documented domain.
    InvalidArgument = 2,
    /// The optimal D'->A gain is undefined for an unsqueezed resource.
    DegenerateResource = 3,
    /// A covariance matrix violated the uncertainty principle.
    Unphysical = 4,
    /// The closed-form/simulator equivalence check found a mismatch.
    VerifyFailed = 5,
}

/// Feedforward gain policy selector for [`steerswap_config_new`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteerswapGainMode {
    Unit = 0,
    OptimalAToD = 1,
    OptimalDToA = 2,
    /// Uses the `fixed_gain` argument.
    Fixed = 3,
}

/// Steering classification written by [`steerswap_steering`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteerswapRegion {
    TwoWay = 0,
    OneWayAB = 1,
    OneWayBA = 2,
    NoSteering = 3,
}

/// Opaque protocol configuration handle.
pub struct SteerswapConfig {
    inner: SwapConfig,
}

fn status_of(err: SwapError) -> SteerswapStatus {
    use steerswap::gauss::GaussError;
    match err {
        SwapError::InvalidFixedGain(_) => SteerswapStatus::InvalidArgument,
        SwapError::DegenerateResource => SteerswapStatus::DegenerateResource,
        SwapError::Gauss(GaussError::Unphysical(_)) | SwapError::Gauss(GaussError::NonPositiveDet(_)) => {
            SteerswapStatus::Unphysical
        }
        SwapError::Gauss(_) => SteerswapStatus::InvalidArgument,
    }
}

fn region_code(region: SteeringRegion) -> i32 {
    match region {
        SteeringRegion::TwoWay => SteerswapRegion::TwoWay as i32,
        SteeringRegion::OneWayAB => SteerswapRegion::OneWayAB as i32,
        SteeringRegion::OneWayBA => SteerswapRegion::OneWayBA as i32,
        SteeringRegion::NoSteering => SteerswapRegion::NoSteering as i32,
    }
}

/// Nul-terminated semantic version of this library.
#[no_mangle]
pub extern "C" fn steerswap_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Creates a configuration handle and writes it to `out`.
///
/// `r` is the resource squeezing parameter, `t1`/`w1` and `t2`/`w2` the
/// transmittance and excess noise of the two channels, `eta` the
/// joint-measurement detection efficiency. `fixed_gain` is read only when
/// `gain_mode` is `FIXED` (pass a `SteerswapGainMode` value).
///
/// On success the caller owns the handle and must release it with
/// `steerswap_config_free`.
///
/// # Safety
/// `out` must be a valid pointer to writable memory.
#[no_mangle]
pub unsafe extern "C" fn steerswap_config_new(
    r: f64,
    t1: f64,
    w1: f64,
    t2: f64,
    w2: f64,
    eta: f64,
    gain_mode: i32,
    fixed_gain: f64,
    out: *mut *mut SteerswapConfig,
) -> SteerswapStatus {
    if out.is_null() {
        return SteerswapStatus::NullPointer;
    }
    let gain = match gain_mode {
        x if x == SteerswapGainMode::Unit as i32 => GainSetting::Unit,
        x if x == SteerswapGainMode::OptimalAToD as i32 => GainSetting::OptimalAtoD,
        x if x == SteerswapGainMode::OptimalDToA as i32 => GainSetting::OptimalDtoA,
        x if x == SteerswapGainMode::Fixed as i32 => GainSetting::Fixed(fixed_gain),
        _ => return SteerswapStatus::InvalidArgument,
    };
    let resource = match SqueezedResource::from_r(r) {
        Ok(res) => res,
        Err(_) => return SteerswapStatus::InvalidArgument,
    };
    let channel1 = match ChannelParams::new(t1, w1) {
        Ok(ch) => ch,
        Err(_) => return SteerswapStatus::InvalidArgument,
    };
    let channel2 = match ChannelParams::new(t2, w2) {
        Ok(ch) => ch,
        Err(_) => return SteerswapStatus::InvalidArgument,
    };
    let detection = match DetectionParams::new(eta) {
        Ok(det) => det,
        Err(_) => return SteerswapStatus::InvalidArgument,
    };
    match SwapConfig::new(resource, channel1, channel2, detection, gain) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(SteerswapConfig { inner }));
            SteerswapStatus::Ok
        }
        Err(err) => status_of(err),
    }
}

/// Releases a handle created by `steerswap_config_new`; null is a no-op.
///
/// # Safety
/// `cfg` must be null or a pointer returned by `steerswap_config_new`
/// that has not been freed already.
#[no_mangle]
pub unsafe extern "C" fn steerswap_config_free(cfg: *mut SteerswapConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Resolves the configured gain policy to a numeric feedforward gain.
///
/// # Safety
/// `cfg` must be a live handle; `gain` must be a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn steerswap_resolve_gain(
    cfg: *const SteerswapConfig,
    gain: *mut f64,
) -> SteerswapStatus {
    if cfg.is_null() || gain.is_null() {
        return SteerswapStatus::NullPointer;
    }
    match resolve_gain(&(*cfg).inner) {
        Ok(g) => {
            *gain = g;
            SteerswapStatus::Ok
        }
        Err(err) => status_of(err),
    }
}

/// Writes the closed-form output covariance elements `a`, `b`, `c` of the
/// swapped pair (A, D').
///
/// # Safety
/// `cfg` must be a live handle; `a`, `b`, `c` must be valid writable
/// pointers.
#[no_mangle]
pub unsafe extern "C" fn steerswap_output_covariance(
    cfg: *const SteerswapConfig,
    a: *mut f64,
    b: *mut f64,
    c: *mut f64,
) -> SteerswapStatus {
    if cfg.is_null() || a.is_null() || b.is_null() || c.is_null() {
        return SteerswapStatus::NullPointer;
    }
    match output_covariance(&(*cfg).inner) {
        Ok(cm) => {
            *a = cm.a();
            *b = cm.b();
            *c = cm.c();
            SteerswapStatus::Ok
        }
        Err(err) => status_of(err),
    }
}

/// Writes both steerabilities of the swapped pair (nats) and the region
/// classification (a `SteerswapRegion` value).
///
/// # Safety
/// `cfg` must be a live handle; `g_ab`, `g_ba`, `region` must be valid
/// writable pointers.
#[no_mangle]
pub unsafe extern "C" fn steerswap_steering(
    cfg: *const SteerswapConfig,
    g_ab: *mut f64,
    g_ba: *mut f64,
    region: *mut i32,
) -> SteerswapStatus {
    if cfg.is_null() || g_ab.is_null() || g_ba.is_null() || region.is_null() {
        return SteerswapStatus::NullPointer;
    }
    match swap_steering(&(*cfg).inner) {
        Ok(sr) => {
            *g_ab = sr.g_ab;
            *g_ba = sr.g_ba;
            *region = region_code(sr.region);
            SteerswapStatus::Ok
        }
        Err(err) => status_of(err),
    }
}

/// Writes the steerability of the bare two-mode squeezed resource at
/// squeezing `r` (equal in both directions).
///
/// # Safety
/// `out` must be a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn steerswap_resource_steerability(
    r: f64,
    out: *mut f64,
) -> SteerswapStatus {
    if out.is_null() {
        return SteerswapStatus::NullPointer;
    }
    let resource = match SqueezedResource::from_r(r) {
        Ok(res) => res,
        Err(_) => return SteerswapStatus::InvalidArgument,
    };
    let cm = steerswap::epr_state(&resource);
    match steerswap::steerability(&cm, steerswap::SteeringDirection::AtoB) {
        Ok(g) => {
            *out = g;
            SteerswapStatus::Ok
        }
        Err(_) => SteerswapStatus::Unphysical,
    }
}

/// Runs the closed-form/simulator equivalence check on `cases` seeded
/// random configurations and writes the worst per-element difference.
/// Returns `VERIFY_FAILED` if any case exceeds the 1e-10 bound.
///
/// # Safety
/// `max_delta` must be a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn steerswap_run_equivalence(
    seed: u64,
    cases: u64,
    max_delta: *mut f64,
) -> SteerswapStatus {
    if max_delta.is_null() {
        return SteerswapStatus::NullPointer;
    }
    let report = steerswap::verify::run_equivalence(seed, cases as usize, 0.0);
    *max_delta = report.max_delta;
    if report.passed() {
        SteerswapStatus::Ok
    } else {
        SteerswapStatus::VerifyFailed
    }
}
