//! Two-mode Gaussian states in standard form, the EPR resource, and the
//! Gaussian steerability quantifier.
//!
//! Every state handled here has a covariance matrix of the block form
//! `[[a*I, c*Z], [c*Z, b*I]]` with `I = diag(1,1)` and `Z = diag(1,-1)`,
//! so the scalar triple `(a, b, c)` is the canonical representation.
//! Variances are in shot-noise units; steerability values are in nats.

use thiserror::Error;

/// Numerical floor for the symplectic-eigenvalue physicality test.
pub const PHYSICALITY_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum GaussError {
    #[error("squeezing parameter must be finite and nonnegative, got {0}")]
    InvalidSqueezing(f64),
    #[error("diagonal covariance elements must be positive, got a={a}, b={b}")]
    NonPositiveDiagonal { a: f64, b: f64 },
    #[error("covariance element must be finite, got {0}")]
    NonFiniteElement(f64),
    #[error("covariance matrix is not positive definite: ab - c^2 = {0} <= 0")]
    NonPositiveDet(f64),
    #[error("covariance matrix violates the uncertainty principle: nu_minus = {0} < 1")]
    Unphysical(f64),
}

/// A two-mode squeezed vacuum resource with squeezing parameter `r` and
/// quadrature variance `V = cosh 2r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezedResource {
    r: f64,
    v: f64,
}

impl SqueezedResource {
    /// Builds the resource from the squeezing parameter; `V` is derived.
    pub fn from_r(r: f64) -> Result<Self, GaussError> {
        if !r.is_finite() || r < 0.0 {
            return Err(GaussError::InvalidSqueezing(r));
        }
        Ok(Self { r, v: (2.0 * r).cosh() })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Quadrature variance `V = cosh 2r >= 1` in shot-noise units.
    pub fn v(&self) -> f64 {
        self.v
    }
}

/// Standard-form covariance matrix of a two-mode Gaussian state: diagonal
/// elements `a`, `b` and signed cross-correlation `c` (x-correlation `+c`,
/// p-correlation `-c`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoModeCovariance {
    a: f64,
    b: f64,
    c: f64,
}

impl TwoModeCovariance {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self, GaussError> {
        for v in [a, b, c] {
            if !v.is_finite() {
                return Err(GaussError::NonFiniteElement(v));
            }
        }
        if a <= 0.0 || b <= 0.0 {
            return Err(GaussError::NonPositiveDiagonal { a, b });
        }
        Ok(Self { a, b, c })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// Determinant of the full 4x4 matrix, `(ab - c^2)^2`.
    pub fn det_full(&self) -> f64 {
        let m = self.sub_det();
        m * m
    }

    /// `ab - c^2`, the determinant shared by both 2x2 off-diagonal
    /// complements (the full determinant is its square).
    pub fn sub_det(&self) -> f64 {
        self.a * self.b - self.c * self.c
    }

    /// Full 4x4 view in mode ordering (x1, p1, x2, p2).
    pub fn full_matrix(&self) -> [[f64; 4]; 4] {
        let (a, b, c) = (self.a, self.b, self.c);
        [
            [a, 0.0, c, 0.0],
            [0.0, a, 0.0, -c],
            [c, 0.0, b, 0.0],
            [0.0, -c, 0.0, b],
        ]
    }
}

/// Steering direction for a two-mode state; for swap outputs mode 1 is A
/// and mode 2 is D'.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteeringDirection {
    AtoB,
    BtoA,
}

/// Steering classification of a two-mode state. Regions I/II/III of the
/// distance maps correspond to `TwoWay`/`OneWayAB`/`OneWayBA`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SteeringRegion {
    TwoWay,
    OneWayAB,
    OneWayBA,
    NoSteering,
}

impl SteeringRegion {
    pub fn classify(g_ab: f64, g_ba: f64) -> Self {
        match (g_ab > 0.0, g_ba > 0.0) {
            (true, true) => Self::TwoWay,
            (true, false) => Self::OneWayAB,
            (false, true) => Self::OneWayBA,
            (false, false) => Self::NoSteering,
        }
    }

    /// Label used in region-map output: I, II, III, or none.
    pub fn label(&self) -> &'static str {
        match self {
            Self::TwoWay => "I",
            Self::OneWayAB => "II",
            Self::OneWayBA => "III",
            Self::NoSteering => "none",
        }
    }
}

/// Both steerabilities of a state and its region classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteeringResult {
    pub g_ab: f64,
    pub g_ba: f64,
    pub region: SteeringRegion,
}

impl SteeringResult {
    pub fn new(g_ab: f64, g_ba: f64) -> Self {
        Self { g_ab, g_ba, region: SteeringRegion::classify(g_ab, g_ba) }
    }
}

/// Result of the uncertainty-principle check; `nu_minus` is the smaller
/// symplectic eigenvalue (1 for pure states saturating the bound).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalityReport {
    pub physical: bool,
    pub nu_minus: f64,
}

/// Covariance matrix of the two-mode squeezed vacuum: `a = b = V`,
/// `c = sqrt(V^2 - 1)`.
pub fn epr_state(res: &SqueezedResource) -> TwoModeCovariance {
    let v = res.v();
    TwoModeCovariance { a: v, b: v, c: (v * v - 1.0).sqrt() }
}

/// Gaussian steerability `G = max{0, (1/2) ln(det_reduced / det_full)}` in
/// nats; `AtoB` uses the steering party's reduced determinant `a^2`, `BtoA`
/// uses `b^2`.
///
/// # Errors
/// Rejects covariance matrices that fail [`physicality_check`], naming the
/// violated condition.
pub fn steerability(
    cm: &TwoModeCovariance,
    direction: SteeringDirection,
) -> Result<f64, GaussError> {
    let m = cm.sub_det();
    if m <= 0.0 {
        return Err(GaussError::NonPositiveDet(m));
    }
    let report = physicality_check(cm);
    if !report.physical {
        return Err(GaussError::Unphysical(report.nu_minus));
    }
    let num = match direction {
        SteeringDirection::AtoB => cm.a,
        SteeringDirection::BtoA => cm.b,
    };
    Ok((num / m).ln().max(0.0))
}

/// Checks the uncertainty principle via the smaller symplectic eigenvalue
/// `nu_minus` of the standard-form matrix: physical iff `nu_minus >= 1`
/// within tolerance and `ab - c^2 > 0`.
///
/// `nu_-^2 = (Delta - sqrt(Delta^2 - 4 det)) / 2` with
/// `Delta = a^2 + b^2 - 2c^2`; the discriminant is evaluated through the
/// exact factorization `(a - b)^2 ((a + b)^2 - 4c^2)`, which is free of
/// the catastrophic cancellation of the textbook form near degenerate
/// eigenvalues. The tolerance floor of [`PHYSICALITY_TOL`] widens to
/// `32 eps s^2` (`s` = largest element magnitude) for matrices so large
/// that f64 rounding of the elements themselves exceeds the floor.
pub fn physicality_check(cm: &TwoModeCovariance) -> PhysicalityReport {
    let (a, b, c) = (cm.a, cm.b, cm.c);
    let delta = a * a + b * b - 2.0 * c * c;
    let d = a - b;
    let s = a + b;
    let disc = (d * d) * (s * s - 4.0 * c * c);
    let nu_minus_sq = 0.5 * (delta - disc.max(0.0).sqrt());
    let nu_minus = nu_minus_sq.max(0.0).sqrt();
    let scale = a.abs().max(b.abs()).max(c.abs()).max(1.0);
    let tol = PHYSICALITY_TOL.max(32.0 * f64::EPSILON * scale * scale);
    let physical = cm.sub_det() > 0.0 && nu_minus >= 1.0 - tol;
    PhysicalityReport { physical, nu_minus }
}
