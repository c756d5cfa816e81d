//! Flag, config-file, and default resolution into validated run
//! parameters. Precedence: command-line flag, then config-file key, then
//! the built-in (or preset) default.

use std::collections::BTreeMap;
use std::path::Path;

use super::{CliError, PhysicsArgs};
use crate::channel::{ChannelParams, DetectionParams};
use crate::finders::Scheme;
use crate::gauss::SqueezedResource;
use crate::swap::{GainSetting, SwapConfig};

pub(crate) fn usage(err: impl std::fmt::Display) -> CliError {
    CliError::Usage(err.to_string())
}

/// Shortest round-trip decimal rendering; the one float format used in
/// every output document.
pub(crate) fn num(x: f64) -> String {
    format!("{x}")
}

const KNOWN_KEYS: &[&str] = &[
    "r", "eta", "t1", "t2", "w1", "w2", "alpha", "gain-mode", "scheme", "steps", "g-min",
    "g-max", "r-min", "r-max", "l-max", "w-list", "preset", "seed", "cases",
];

/// Key-value pairs from an optional flat config file. Lines are
/// `key = value`; blank lines and `#` comments are skipped; keys mirror
/// the long flag names.
pub(crate) struct Resolver {
    file: BTreeMap<String, String>,
}

impl Resolver {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let mut file = BTreeMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::Usage(format!("cannot read config {}: {e}", path.display()))
            })?;
            for (n, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line.split_once('=').ok_or_else(|| {
                    CliError::Usage(format!("config line {}: expected key = value", n + 1))
                })?;
                let key = key.trim().to_string();
                if !KNOWN_KEYS.contains(&key.as_str()) {
                    return Err(CliError::Usage(format!("unknown config key `{key}`")));
                }
                file.insert(key, value.trim().to_string());
            }
        }
        Ok(Self { file })
    }

    pub fn f64(&self, key: &str, flag: Option<f64>, default: f64) -> Result<f64, CliError> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.file.get(key) {
            Some(s) => s
                .parse()
                .map_err(|_| CliError::Usage(format!("config key `{key}`: `{s}` is not a number"))),
            None => Ok(default),
        }
    }

    pub fn usize(&self, key: &str, flag: Option<usize>, default: usize) -> Result<usize, CliError> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.file.get(key) {
            Some(s) => s.parse().map_err(|_| {
                CliError::Usage(format!("config key `{key}`: `{s}` is not a count"))
            }),
            None => Ok(default),
        }
    }

    pub fn u64(&self, key: &str, flag: Option<u64>, default: u64) -> Result<u64, CliError> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.file.get(key) {
            Some(s) => s.parse().map_err(|_| {
                CliError::Usage(format!("config key `{key}`: `{s}` is not an integer"))
            }),
            None => Ok(default),
        }
    }

    pub fn string(&self, key: &str, flag: Option<String>, default: &str) -> String {
        flag.or_else(|| self.file.get(key).cloned())
            .unwrap_or_else(|| default.to_string())
    }

    pub fn string_opt(&self, key: &str, flag: Option<String>) -> Option<String> {
        flag.or_else(|| self.file.get(key).cloned())
    }
}

/// Built-in defaults, optionally re-based by a preset before flag and
/// config-file resolution.
#[derive(Debug, Clone)]
pub(crate) struct Defaults {
    pub r: f64,
    pub eta: f64,
    pub t1: f64,
    pub t2: f64,
    pub w1: f64,
    pub w2: f64,
    pub alpha: f64,
    pub gain_mode: &'static str,
}

pub(crate) const BASE_DEFAULTS: Defaults = Defaults {
    r: 1.15,
    eta: 0.95,
    t1: 1.0,
    t2: 1.0,
    w1: 0.0,
    w2: 0.0,
    alpha: 0.2,
    gain_mode: "opt-ad",
};

pub(crate) fn preset_defaults(name: &str) -> Result<Defaults, CliError> {
    match name {
        "fig2b-unit" => Ok(Defaults { gain_mode: "unit", ..BASE_DEFAULTS }),
        "fig2b-opt" | "fig3a" => Ok(BASE_DEFAULTS),
        "fig3b" => Ok(Defaults { eta: 0.995, ..BASE_DEFAULTS }),
        other => Err(CliError::Usage(format!(
            "unknown preset `{other}`; expected fig2b-unit, fig2b-opt, fig3a, or fig3b"
        ))),
    }
}

/// Fully resolved physics parameters shared by every command.
#[derive(Debug, Clone)]
pub(crate) struct ParamSet {
    pub r: f64,
    pub eta: f64,
    pub t1: f64,
    pub t2: f64,
    pub w1: f64,
    pub w2: f64,
    pub alpha: f64,
    pub gain: GainSetting,
}

impl ParamSet {
    pub fn resolve(
        phys: &PhysicsArgs,
        resolver: &Resolver,
        defaults: &Defaults,
    ) -> Result<Self, CliError> {
        let gain_str =
            resolver.string("gain-mode", phys.gain_mode.clone(), defaults.gain_mode);
        Ok(Self {
            r: resolver.f64("r", phys.r, defaults.r)?,
            eta: resolver.f64("eta", phys.eta, defaults.eta)?,
            t1: resolver.f64("t1", phys.t1, defaults.t1)?,
            t2: resolver.f64("t2", phys.t2, defaults.t2)?,
            w1: resolver.f64("w1", phys.w1, defaults.w1)?,
            w2: resolver.f64("w2", phys.w2, defaults.w2)?,
            alpha: resolver.f64("alpha", phys.alpha, defaults.alpha)?,
            gain: parse_gain_mode(&gain_str)?,
        })
    }

    pub fn swap_config(&self) -> Result<SwapConfig, CliError> {
        SwapConfig::new(
            SqueezedResource::from_r(self.r).map_err(usage)?,
            ChannelParams::new(self.t1, self.w1).map_err(usage)?,
            ChannelParams::new(self.t2, self.w2).map_err(usage)?,
            DetectionParams::new(self.eta).map_err(usage)?,
            self.gain,
        )
        .map_err(usage)
    }

    /// Manifest echo of the full parameter set, in flag order.
    pub fn manifest_entries(&self) -> Vec<(String, String)> {
        [
            ("r", num(self.r)),
            ("eta", num(self.eta)),
            ("t1", num(self.t1)),
            ("t2", num(self.t2)),
            ("w1", num(self.w1)),
            ("w2", num(self.w2)),
            ("alpha", num(self.alpha)),
            ("gain-mode", gain_mode_label(&self.gain)),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }
}

pub(crate) fn parse_gain_mode(s: &str) -> Result<GainSetting, CliError> {
    match s {
        "unit" => Ok(GainSetting::Unit),
        "opt-ad" => Ok(GainSetting::OptimalAtoD),
        "opt-da" => Ok(GainSetting::OptimalDtoA),
        other => {
            if let Some(raw) = other.strip_prefix("fixed:") {
                let g: f64 = raw.parse().map_err(|_| {
                    CliError::Usage(format!("fixed gain `{raw}` is not a number"))
                })?;
                if !g.is_finite() || g <= 0.0 {
                    return Err(CliError::Usage(format!(
                        "fixed gain must be finite and positive, got {g}"
                    )));
                }
                return Ok(GainSetting::Fixed(g));
            }
            Err(CliError::Usage(format!(
                "invalid gain mode `{other}`; expected unit, opt-ad, opt-da, or fixed:<g>"
            )))
        }
    }
}

pub(crate) fn gain_mode_label(gain: &GainSetting) -> String {
    match gain {
        GainSetting::Unit => "unit".to_string(),
        GainSetting::OptimalAtoD => "opt-ad".to_string(),
        GainSetting::OptimalDtoA => "opt-da".to_string(),
        GainSetting::Fixed(g) => format!("fixed:{g}"),
    }
}

pub(crate) fn parse_scheme(s: &str) -> Result<Scheme, CliError> {
    match s {
        "single" => Ok(Scheme::SingleChannel),
        "symmetric" => Ok(Scheme::SymmetricDual),
        other => Err(CliError::Usage(format!(
            "invalid scheme `{other}`; expected single or symmetric"
        ))),
    }
}

pub(crate) fn scheme_label(scheme: Scheme) -> &'static str {
    match scheme {
        Scheme::SingleChannel => "single",
        Scheme::SymmetricDual => "symmetric",
    }
}

pub(crate) fn parse_w_list(s: &str) -> Result<Vec<f64>, CliError> {
    let list: Vec<f64> = s
        .split(',')
        .map(|part| {
            let part = part.trim();
            part.parse::<f64>()
                .ok()
                .filter(|w| w.is_finite() && *w >= 0.0)
                .ok_or_else(|| {
                    CliError::Usage(format!("w-list entry `{part}` is not a nonnegative number"))
                })
        })
        .collect::<Result<_, _>>()?;
    if list.is_empty() {
        return Err(CliError::Usage("w-list must not be empty".to_string()));
    }
    Ok(list)
}

/// `steps` evenly spaced values covering [lo, hi] inclusive.
pub(crate) fn linspace(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    let span = hi - lo;
    (0..steps)
        .map(|i| lo + span * i as f64 / (steps - 1) as f64)
        .collect()
}
