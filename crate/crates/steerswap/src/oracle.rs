//! Independent Heisenberg-picture verification engine.
//!
//! Quadrature operators are tracked as explicit linear combinations over
//! declared Gaussian noise sources (mode quadratures, channel vacua and
//! excess-noise terms, detector vacua). Output covariances follow purely
//! from source bookkeeping; no closed-form covariance element appears
//! anywhere in this module, which is what makes [`simulate_swap`] a
//! meaningful cross-check of the protocol formulas.

use std::collections::{BTreeMap, BTreeSet};

use crate::channel::ChannelParams;
use crate::gauss::TwoModeCovariance;
use crate::swap::{resolve_gain, SwapConfig, SwapError};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("source variance must be finite and nonnegative, got {0}")]
    InvalidVariance(f64),
    #[error("beam-splitter ratio must be in [0, 1], got {0}")]
    InvalidRatio(f64),
    #[error("a source cannot be correlated with itself")]
    SelfCorrelation,
    #[error("correlation between these sources is already declared")]
    DuplicateCorrelation,
    #[error("source {0} reused; fresh environment sources must be unused")]
    SourceReuse(String),
    #[error("lossy channel (t < 1) requires fresh vacuum and excess sources")]
    MissingFreshSources,
    #[error("lossless channel (t = 1) must not consume fresh sources")]
    SuperfluousFreshSources,
    #[error(transparent)]
    Swap(#[from] SwapError),
}

/// Handle to a registered noise source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct SourceId(usize);

/// Registry of independent Gaussian noise sources with their variances and
/// the explicitly declared pair correlations (the EPR partner terms).
#[derive(Debug, Default)]
pub struct SourceSpace {
    labels: Vec<String>,
    variances: Vec<f64>,
    correlations: BTreeMap<(usize, usize), f64>,
    consumed: BTreeSet<usize>,
}

impl SourceSpace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_source(&mut self, label: &str, variance: f64) -> Result<SourceId, OracleError> {
        if !variance.is_finite() || variance < 0.0 {
            return Err(OracleError::InvalidVariance(variance));
        }
        self.labels.push(label.to_string());
        self.variances.push(variance);
        Ok(SourceId(self.labels.len() - 1))
    }

    /// Declares a pairwise covariance between two distinct sources; all
    /// undeclared pairs are independent.
    pub fn declare_correlation(
        &mut self,
        first: SourceId,
        second: SourceId,
        covariance: f64,
    ) -> Result<(), OracleError> {
        if first == second {
            return Err(OracleError::SelfCorrelation);
        }
        let key = (first.0.min(second.0), first.0.max(second.0));
        if self.correlations.contains_key(&key) {
            return Err(OracleError::DuplicateCorrelation);
        }
        self.correlations.insert(key, covariance);
        Ok(())
    }

    /// The quadrature expression consisting of this source alone.
    pub fn quadrature(&self, id: SourceId) -> LinearQuadrature {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(id.0, 1.0);
        LinearQuadrature { coeffs }
    }

    pub fn source_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    fn pair_cov(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.variances[i]
        } else {
            *self.correlations.get(&(i.min(j), i.max(j))).unwrap_or(&0.0)
        }
    }

    /// Exact covariance of two quadrature expressions from declared
    /// variances and correlations.
    pub fn covariance(&self, q1: &LinearQuadrature, q2: &LinearQuadrature) -> f64 {
        let mut total = 0.0;
        for (&i, &ci) in &q1.coeffs {
            for (&j, &cj) in &q2.coeffs {
                let cov = self.pair_cov(i, j);
                if cov != 0.0 {
                    total += ci * cj * cov;
                }
            }
        }
        total
    }

    pub fn variance(&self, q: &LinearQuadrature) -> f64 {
        self.covariance(q, q)
    }

    fn consume_fresh(&mut self, id: SourceId) -> Result<(), OracleError> {
        if !self.consumed.insert(id.0) {
            return Err(OracleError::SourceReuse(self.labels[id.0].clone()));
        }
        Ok(())
    }
}

/// A quadrature operator as a finite linear combination of sources.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearQuadrature {
    coeffs: BTreeMap<usize, f64>,
}

impl LinearQuadrature {
    /// `alpha * self + beta * other`. Sources whose net coefficient is
    /// zero are dropped so structural equality matches algebraic equality.
    pub fn combine(&self, alpha: f64, other: &Self, beta: f64) -> Self {
        let mut coeffs = BTreeMap::new();
        for (&i, &c) in &self.coeffs {
            coeffs.insert(i, alpha * c);
        }
        for (&i, &c) in &other.coeffs {
            *coeffs.entry(i).or_insert(0.0) += beta * c;
        }
        coeffs.retain(|_, c| *c != 0.0);
        LinearQuadrature { coeffs }
    }

    fn contains(&self, id: SourceId) -> bool {
        self.coeffs.get(&id.0).is_some_and(|&c| c != 0.0)
    }
}

/// Balanced or unbalanced beam splitter:
/// `(sqrt(ratio) q1 - sqrt(1-ratio) q2, sqrt(1-ratio) q1 + sqrt(ratio) q2)`.
/// Ratio 1/2 realizes the joint-measurement mixing `(B - C)/sqrt(2)`,
/// `(B + C)/sqrt(2)`.
pub fn beam_splitter(
    q1: &LinearQuadrature,
    q2: &LinearQuadrature,
    ratio: f64,
) -> Result<(LinearQuadrature, LinearQuadrature), OracleError> {
    if !ratio.is_finite() || !(0.0..=1.0).contains(&ratio) {
        return Err(OracleError::InvalidRatio(ratio));
    }
    let tap = ratio.sqrt();
    let cross = (1.0 - ratio).sqrt();
    Ok((q1.combine(tap, q2, -cross), q1.combine(cross, q2, tap)))
}

/// Sends a quadrature through a lossy, noisy channel:
/// `sqrt(T) q + sqrt(1-T) (nu + w)`.
///
/// A channel with `t < 1` must be given fresh `(vacuum, excess)` sources
/// (variance 1 and W) that appear nowhere else; a lossless channel takes
/// none and returns the input unchanged.
pub fn lossy_noisy(
    space: &mut SourceSpace,
    q: &LinearQuadrature,
    ch: &ChannelParams,
    fresh: Option<(SourceId, SourceId)>,
) -> Result<LinearQuadrature, OracleError> {
    if ch.t() == 1.0 {
        return match fresh {
            None => Ok(q.clone()),
            Some(_) => Err(OracleError::SuperfluousFreshSources),
        };
    }
    let (vacuum, excess) = fresh.ok_or(OracleError::MissingFreshSources)?;
    if q.contains(vacuum) || q.contains(excess) {
        return Err(OracleError::SourceReuse(space.labels[vacuum.0].clone()));
    }
    space.consume_fresh(vacuum)?;
    space.consume_fresh(excess)?;
    let env_gain = (1.0 - ch.t()).sqrt();
    let env = space
        .quadrature(vacuum)
        .combine(1.0, &space.quadrature(excess), 1.0);
    Ok(q.combine(ch.t().sqrt(), &env, env_gain))
}

struct SectorOutput {
    a: f64,
    b: f64,
    c: f64,
}

/// One quadrature sector (x with `sign = +1`, p with `sign = -1`) of the
/// full swap pipeline, returning variances of A and D' and their
/// covariance.
fn run_sector(
    space: &mut SourceSpace,
    cfg: &SwapConfig,
    g: f64,
    sign: f64,
    suffix: &str,
) -> Result<SectorOutput, OracleError> {
    let v = cfg.resource.v();
    let s = (v * v - 1.0).sqrt();

    let mode_a = space.add_source(&format!("A.{suffix}"), v)?;
    let mode_b = space.add_source(&format!("B.{suffix}"), v)?;
    let mode_c = space.add_source(&format!("C.{suffix}"), v)?;
    let mode_d = space.add_source(&format!("D.{suffix}"), v)?;
    space.declare_correlation(mode_a, mode_b, sign * s)?;
    space.declare_correlation(mode_c, mode_d, sign * s)?;

    let env = |space: &mut SourceSpace, name: &str, ch: &ChannelParams| {
        if ch.t() < 1.0 {
            let vac = space.add_source(&format!("{name}.vac.{suffix}"), 1.0)?;
            let exc = space.add_source(&format!("{name}.excess.{suffix}"), ch.w())?;
            Ok::<_, OracleError>(Some((vac, exc)))
        } else {
            Ok(None)
        }
    };
    let fresh1 = env(space, "ch1", &cfg.channel1)?;
    let fresh2 = env(space, "ch2", &cfg.channel2)?;

    let q_b = space.quadrature(mode_b);
    let q_c = space.quadrature(mode_c);
    let b_out = lossy_noisy(space, &q_b, &cfg.channel1, fresh1)?;
    let c_out = lossy_noisy(space, &q_c, &cfg.channel2, fresh2)?;
    let (port_e, port_f) = beam_splitter(&b_out, &c_out, 0.5)?;

    let eta = cfg.detection.eta();
    let detect = |space: &mut SourceSpace, port: LinearQuadrature, name: &str| {
        if eta < 1.0 {
            let vac = space.add_source(&format!("det_{name}.vac.{suffix}"), 1.0)?;
            let vac_q = space.quadrature(vac);
            let (out, _) = beam_splitter(&port, &vac_q, eta)?;
            Ok::<_, OracleError>(out)
        } else {
            Ok(port)
        }
    };
    let e_detected = detect(space, port_e, "E")?;
    let f_detected = detect(space, port_f, "F")?;

    // x feedforward reads the difference port, p the sum port
    let photocurrent = if sign > 0.0 { e_detected } else { f_detected };
    let d_prime = space
        .quadrature(mode_d)
        .combine(1.0, &photocurrent, std::f64::consts::SQRT_2 * g);

    let a_quad = space.quadrature(mode_a);
    Ok(SectorOutput {
        a: space.variance(&a_quad),
        b: space.variance(&d_prime),
        c: space.covariance(&a_quad, &d_prime),
    })
}

/// Runs the full swap in the Heisenberg picture and returns the output
/// covariance of (A, D') along with the labels of every source the run
/// declared.
pub fn simulate_swap_audited(
    cfg: &SwapConfig,
) -> Result<(TwoModeCovariance, Vec<String>), OracleError> {
    let g = resolve_gain(cfg)?;
    let mut space = SourceSpace::new();
    let x = run_sector(&mut space, cfg, g, 1.0, "x")?;
    let p = run_sector(&mut space, cfg, g, -1.0, "p")?;

    let scale = x.b.abs().max(1.0);
    assert!((x.a - p.a).abs() <= 1e-9, "sector asymmetry in a");
    assert!((x.b - p.b).abs() <= 1e-9 * scale, "sector asymmetry in b");
    assert!((x.c + p.c).abs() <= 1e-9 * scale, "sector asymmetry in c");

    let cm = TwoModeCovariance::new(x.a, x.b, x.c).map_err(SwapError::from)?;
    Ok((cm, space.labels().to_vec()))
}

/// Output covariance of (A, D') by pure source bookkeeping; the
/// independent counterpart of the closed-form protocol elements.
pub fn simulate_swap(cfg: &SwapConfig) -> Result<TwoModeCovariance, OracleError> {
    simulate_swap_audited(cfg).map(|(cm, _)| cm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::DetectionParams;
    use crate::gauss::SqueezedResource;
    use crate::swap::GainSetting;

    fn cfg(
        r: f64,
        ch1: (f64, f64),
        ch2: (f64, f64),
        eta: f64,
        gain: GainSetting,
    ) -> SwapConfig {
        SwapConfig::new(
            SqueezedResource::from_r(r).unwrap(),
            ChannelParams::new(ch1.0, ch1.1).unwrap(),
            ChannelParams::new(ch2.0, ch2.1).unwrap(),
            DetectionParams::new(eta).unwrap(),
            gain,
        )
        .unwrap()
    }

    #[test]
    fn beam_splitter_identity_at_ratio_one() {
        let mut sp = SourceSpace::new();
        let a = sp.add_source("a", 1.0).unwrap();
        let b = sp.add_source("b", 2.0).unwrap();
        let (q1, q2) = (sp.quadrature(a), sp.quadrature(b));
        let (o1, o2) = beam_splitter(&q1, &q2, 1.0).unwrap();
        assert_eq!(o1, q1);
        assert_eq!(o2, q2);
        assert!(beam_splitter(&q1, &q2, 1.5).is_err());
    }

    #[test]
    fn balanced_splitter_preserves_vacuum_variance() {
        let mut sp = SourceSpace::new();
        let a = sp.add_source("a", 1.0).unwrap();
        let b = sp.add_source("b", 1.0).unwrap();
        let (o1, o2) = beam_splitter(&sp.quadrature(a), &sp.quadrature(b), 0.5).unwrap();
        assert!((sp.variance(&o1) - 1.0).abs() < 1e-15);
        assert!((sp.variance(&o2) - 1.0).abs() < 1e-15);
        assert!(sp.covariance(&o1, &o2).abs() < 1e-15);
    }

    #[test]
    fn balanced_splitter_composes_to_sign_swap() {
        let mut sp = SourceSpace::new();
        let a = sp.add_source("a", 1.0).unwrap();
        let b = sp.add_source("b", 1.0).unwrap();
        let (q1, q2) = (sp.quadrature(a), sp.quadrature(b));
        let (e, f) = beam_splitter(&q1, &q2, 0.5).unwrap();
        let (g, h) = beam_splitter(&e, &f, 0.5).unwrap();
        // twice through the balanced splitter maps (q1, q2) -> (-q2, q1)
        let minus_q2 = q2.combine(-1.0, &q1, 0.0);
        for (&i, &c) in &g.coeffs {
            assert!((c - minus_q2.coeffs.get(&i).copied().unwrap_or(0.0)).abs() < 4e-16);
        }
        for (&i, &c) in &h.coeffs {
            assert!((c - q1.coeffs.get(&i).copied().unwrap_or(0.0)).abs() < 4e-16);
        }
    }

    #[test]
    fn lossless_channel_is_identity() {
        let mut sp = SourceSpace::new();
        let a = sp.add_source("a", 3.0).unwrap();
        let q = sp.quadrature(a);
        let ch = ChannelParams::new(1.0, 2.0).unwrap();
        assert_eq!(lossy_noisy(&mut sp, &q, &ch, None).unwrap(), q);
        let vac = sp.add_source("vac", 1.0).unwrap();
        let exc = sp.add_source("exc", 2.0).unwrap();
        assert_eq!(
            lossy_noisy(&mut sp, &q, &ch, Some((vac, exc))),
            Err(OracleError::SuperfluousFreshSources)
        );
    }

    #[test]
    fn lossy_channel_variances_match_model() {
        // vacuum through (t=0.5, w=0) stays at variance 1
        let mut sp = SourceSpace::new();
        let a = sp.add_source("a", 1.0).unwrap();
        let vac = sp.add_source("vac", 1.0).unwrap();
        let exc = sp.add_source("exc", 0.0).unwrap();
        let ch = ChannelParams::new(0.5, 0.0).unwrap();
        let q = sp.quadrature(a);
        let out = lossy_noisy(&mut sp, &q, &ch, Some((vac, exc))).unwrap();
        assert!((sp.variance(&out) - 1.0).abs() < 1e-15);

        // vacuum through (t=0.5, w=2): 0.5*1 + 0.5*3 = 2
        let mut sp = SourceSpace::new();
        let a = sp.add_source("a", 1.0).unwrap();
        let vac = sp.add_source("vac", 1.0).unwrap();
        let exc = sp.add_source("exc", 2.0).unwrap();
        let ch = ChannelParams::new(0.5, 2.0).unwrap();
        let q = sp.quadrature(a);
        let out = lossy_noisy(&mut sp, &q, &ch, Some((vac, exc))).unwrap();
        assert!((sp.variance(&out) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn source_reuse_is_an_integrity_error() {
        let mut sp = SourceSpace::new();
        let a = sp.add_source("a", 1.0).unwrap();
        let b = sp.add_source("b", 1.0).unwrap();
        let vac = sp.add_source("vac", 1.0).unwrap();
        let exc = sp.add_source("exc", 0.5).unwrap();
        let ch = ChannelParams::new(0.5, 0.5).unwrap();
        let (qa, qb) = (sp.quadrature(a), sp.quadrature(b));
        lossy_noisy(&mut sp, &qa, &ch, Some((vac, exc))).unwrap();
        let again = lossy_noisy(&mut sp, &qb, &ch, Some((vac, exc)));
        assert!(matches!(again, Err(OracleError::SourceReuse(_))));
        assert!(lossy_noisy(&mut sp, &qb, &ch, None)
            .is_err_and(|e| e == OracleError::MissingFreshSources));
    }

    #[test]
    fn sequential_pure_loss_composes_multiplicatively() {
        // (t1, 0) then (t2, 0) acts like (t1*t2, 0) on variances and on
        // the correlation with an EPR partner
        let (t1, t2) = (0.6, 0.7);
        let v = 2.5;
        let s = (v * v - 1.0f64).sqrt();

        let run = |channels: &[f64]| {
            let mut sp = SourceSpace::new();
            let main = sp.add_source("main", v).unwrap();
            let partner = sp.add_source("partner", v).unwrap();
            sp.declare_correlation(main, partner, s).unwrap();
            let mut q = sp.quadrature(main);
            for (i, &t) in channels.iter().enumerate() {
                let vac = sp.add_source(&format!("vac{i}"), 1.0).unwrap();
                let exc = sp.add_source(&format!("exc{i}"), 0.0).unwrap();
                let ch = ChannelParams::new(t, 0.0).unwrap();
                q = lossy_noisy(&mut sp, &q, &ch, Some((vac, exc))).unwrap();
            }
            let partner_q = sp.quadrature(partner);
            (sp.variance(&q), sp.covariance(&q, &partner_q))
        };

        let (var_two, cov_two) = run(&[t1, t2]);
        let (var_one, cov_one) = run(&[t1 * t2]);
        assert!((var_two - var_one).abs() < 1e-12);
        assert!((cov_two - cov_one).abs() < 1e-12);
    }

    #[test]
    fn correlation_bookkeeping_rejects_bad_declarations() {
        let mut sp = SourceSpace::new();
        let a = sp.add_source("a", 1.0).unwrap();
        let b = sp.add_source("b", 1.0).unwrap();
        assert_eq!(
            sp.declare_correlation(a, a, 0.5),
            Err(OracleError::SelfCorrelation)
        );
        sp.declare_correlation(a, b, 0.5).unwrap();
        assert_eq!(
            sp.declare_correlation(b, a, 0.5),
            Err(OracleError::DuplicateCorrelation)
        );
        assert!(sp.add_source("bad", -1.0).is_err());
    }

    #[test]
    fn ideal_unit_gain_swap_reproduces_known_covariance() {
        let cfg = cfg(1.15, (1.0, 0.0), (1.0, 0.0), 1.0, GainSetting::Unit);
        let cm = simulate_swap(&cfg).unwrap();
        let v = 5.037220649268761f64;
        let s = (v * v - 1.0).sqrt();
        assert!((cm.a() - v).abs() < 1e-12);
        assert!((cm.b() - (3.0 * v - 2.0 * s)).abs() < 1e-12);
        assert!((cm.c() - s).abs() < 1e-12);
    }

    #[test]
    fn unsqueezed_swap_has_no_correlation() {
        let cfg = cfg(0.0, (0.7, 0.4), (0.9, 0.2), 0.9, GainSetting::Fixed(0.8));
        let cm = simulate_swap(&cfg).unwrap();
        assert!((cm.a() - 1.0).abs() < 1e-15);
        assert!(cm.c().abs() < 1e-15);
    }

    #[test]
    fn source_audit_counts_match_scenario() {
        let ideal = cfg(1.0, (1.0, 0.0), (1.0, 0.0), 1.0, GainSetting::Unit);
        let (_, labels) = simulate_swap_audited(&ideal).unwrap();
        assert_eq!(labels.len(), 8, "{labels:?}");

        let detected = cfg(1.0, (1.0, 0.0), (1.0, 0.0), 0.95, GainSetting::Unit);
        let (_, labels) = simulate_swap_audited(&detected).unwrap();
        assert_eq!(labels.len(), 12, "{labels:?}");
        assert_eq!(labels.iter().filter(|l| l.starts_with("det_")).count(), 4);
    }

    #[test]
    fn intermediate_modes_respect_uncertainty() {
        // assemble x/p variances of B-after-channel, the difference port,
        // and D' for a lossy noisy scenario; every single-mode pair must
        // satisfy Var(x) Var(p) >= 1
        let mut sp = SourceSpace::new();
        let v = (2.0f64 * 0.8).cosh();
        let s = (v * v - 1.0).sqrt();
        let ch = ChannelParams::new(0.6, 0.5).unwrap();
        let mut per_sector = Vec::new();
        for sign in [1.0f64, -1.0] {
            let b = sp.add_source("B", v).unwrap();
            let c = sp.add_source("C", v).unwrap();
            let d = sp.add_source("D", v).unwrap();
            sp.declare_correlation(c, d, sign * s).unwrap();
            let vac = sp.add_source("vac", 1.0).unwrap();
            let exc = sp.add_source("exc", 0.5).unwrap();
            let q_b = sp.quadrature(b);
            let b_out = lossy_noisy(&mut sp, &q_b, &ch, Some((vac, exc))).unwrap();
            let (e, _f) = beam_splitter(&b_out, &sp.quadrature(c), 0.5).unwrap();
            let d_prime = sp
                .quadrature(d)
                .combine(1.0, &e, std::f64::consts::SQRT_2 * 0.9);
            per_sector.push([sp.variance(&b_out), sp.variance(&e), sp.variance(&d_prime)]);
        }
        for mode in 0..3 {
            let product = per_sector[0][mode] * per_sector[1][mode];
            assert!(product >= 1.0 - 1e-12, "mode {mode}: {product}");
        }
    }
}
