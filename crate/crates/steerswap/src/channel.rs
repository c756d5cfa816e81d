//! Lossy/noisy channel and detector-efficiency models, plus the fiber
//! distance <-> transmittance conversion.
//!
//! A channel acts on a quadrature as `q -> sqrt(T) q + sqrt(1-T) (nu + w)`
//! where `nu` is vacuum (variance 1) and `w` an independent excess-noise
//! term of variance `W`, so the environment adds `(1-T)(1+W)` of variance.
//! Both quadratures are treated identically (phase-insensitive channel).
//! Detector inefficiency is a beam splitter mixing in vacuum, not thermal
//! noise.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ChannelError {
    #[error("transmittance must be in (0, 1], got {0}")]
    InvalidTransmittance(f64),
    #[error("excess noise must be finite and nonnegative, got {0}")]
    InvalidExcessNoise(f64),
    #[error("channel length must be finite and nonnegative, got {0}")]
    InvalidLength(f64),
    #[error("attenuation must be finite and positive, got {0} dB/km")]
    InvalidAttenuation(f64),
    #[error("detection efficiency must be in (0, 1], got {0}")]
    InvalidEfficiency(f64),
}

/// One lossy, noisy channel: power transmittance `t` in (0, 1] and excess
/// noise `w >= 0` in shot-noise units (`w = 0` means loss only).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    t: f64,
    w: f64,
}

impl ChannelParams {
    pub fn new(t: f64, w: f64) -> Result<Self, ChannelError> {
        if !t.is_finite() || t <= 0.0 || t > 1.0 {
            return Err(ChannelError::InvalidTransmittance(t));
        }
        if !w.is_finite() || w < 0.0 {
            return Err(ChannelError::InvalidExcessNoise(w));
        }
        Ok(Self { t, w })
    }

    /// Channel through `length_km` of fiber at `alpha_db_per_km` attenuation.
    pub fn from_distance(
        length_km: f64,
        alpha_db_per_km: f64,
        w: f64,
    ) -> Result<Self, ChannelError> {
        Self::new(distance_to_transmittance(length_km, alpha_db_per_km)?, w)
    }

    /// Identity channel: full transmission, no excess noise.
    pub fn ideal() -> Self {
        Self { t: 1.0, w: 0.0 }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn w(&self) -> f64 {
        self.w
    }
}

/// Homodyne detection efficiency `eta` in (0, 1], modeled as a beam
/// splitter mixing the measured mode with vacuum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionParams {
    eta: f64,
}

impl DetectionParams {
    pub fn new(eta: f64) -> Result<Self, ChannelError> {
        if !eta.is_finite() || eta <= 0.0 || eta > 1.0 {
            return Err(ChannelError::InvalidEfficiency(eta));
        }
        Ok(Self { eta })
    }

    pub fn ideal() -> Self {
        Self { eta: 1.0 }
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }
}

/// Power transmittance of `length_km` of fiber: `10^(-alpha L / 10)`.
pub fn distance_to_transmittance(
    length_km: f64,
    alpha_db_per_km: f64,
) -> Result<f64, ChannelError> {
    if !length_km.is_finite() || length_km < 0.0 {
        return Err(ChannelError::InvalidLength(length_km));
    }
    if !alpha_db_per_km.is_finite() || alpha_db_per_km <= 0.0 {
        return Err(ChannelError::InvalidAttenuation(alpha_db_per_km));
    }
    Ok(10f64.powf(-alpha_db_per_km * length_km / 10.0))
}

/// Inverse of [`distance_to_transmittance`]: `L = -10 log10(T) / alpha`.
pub fn transmittance_to_distance(
    t: f64,
    alpha_db_per_km: f64,
) -> Result<f64, ChannelError> {
    if !t.is_finite() || t <= 0.0 || t > 1.0 {
        return Err(ChannelError::InvalidTransmittance(t));
    }
    if !alpha_db_per_km.is_finite() || alpha_db_per_km <= 0.0 {
        return Err(ChannelError::InvalidAttenuation(alpha_db_per_km));
    }
    Ok(-10.0 * t.log10() / alpha_db_per_km)
}

/// Signal amplitude scale and added quadrature variance of a channel:
/// `(sqrt(T), (1-T)(1+W))`.
pub fn channel_variance_terms(ch: &ChannelParams) -> (f64, f64) {
    (ch.t.sqrt(), (1.0 - ch.t) * (1.0 + ch.w))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn channel_params_validate() {
        assert!(ChannelParams::new(0.0, 0.0).is_err());
        assert!(ChannelParams::new(1.1, 0.0).is_err());
        assert!(ChannelParams::new(0.5, -1.0).is_err());
        assert!(ChannelParams::new(1.0, 3.0).is_ok());
        assert!(DetectionParams::new(0.0).is_err());
        assert!(DetectionParams::new(1.01).is_err());
        assert_eq!(DetectionParams::new(0.95).unwrap().eta(), 0.95);
    }

    #[test]
    fn distance_conversion_known_points() {
        assert_eq!(distance_to_transmittance(0.0, 0.2).unwrap(), 1.0);
        let t50 = distance_to_transmittance(50.0, 0.2).unwrap();
        assert!((t50 - 0.1).abs() < 1e-15);
        let t45 = distance_to_transmittance(45.0, 0.2).unwrap();
        assert!((t45 - 0.12589254117941673).abs() < 1e-12);
        assert!(distance_to_transmittance(-1.0, 0.2).is_err());
        assert!(distance_to_transmittance(10.0, 0.0).is_err());
    }

    #[test]
    fn distance_round_trips() {
        for i in 0..=40 {
            let l = 5.0 * i as f64;
            let t = distance_to_transmittance(l, 0.2).unwrap();
            let back = transmittance_to_distance(t, 0.2).unwrap();
            assert!((back - l).abs() < 1e-9, "L={l}: {back}");
        }
    }

    #[test]
    fn variance_terms_match_model() {
        let lossless = channel_variance_terms(&ChannelParams::new(1.0, 4.0).unwrap());
        assert_eq!(lossless, (1.0, 0.0));

        let (scale, added) = channel_variance_terms(&ChannelParams::new(0.5, 0.0).unwrap());
        assert!((scale - 0.7071067811865476).abs() < 1e-15);
        assert!((added - 0.5).abs() < 1e-15);

        let (_, noisy) = channel_variance_terms(&ChannelParams::new(0.5, 0.2).unwrap());
        assert!((noisy - 0.6).abs() < 1e-15);
    }

    #[test]
    fn added_variance_increases_with_w_under_loss() {
        let mut last = -1.0;
        for i in 0..10 {
            let w = 0.5 * i as f64;
            let (_, added) = channel_variance_terms(&ChannelParams::new(0.7, w).unwrap());
            assert!(added > last);
            last = added;
        }
        // and is zero exactly when t = 1
        let (_, zero) = channel_variance_terms(&ChannelParams::new(1.0, 9.0).unwrap());
        assert_eq!(zero, 0.0);
    }

    #[test]
    fn from_distance_composes_validation() {
        let ch = ChannelParams::from_distance(45.0, 0.2, 0.3).unwrap();
        assert!((ch.t() - 0.12589254117941673).abs() < 1e-12);
        assert_eq!(ch.w(), 0.3);
        assert!(ChannelParams::from_distance(-2.0, 0.2, 0.0).is_err());
    }
}
