//! Trial configuration: algorithm selection, instance parameters, constant
//! overrides, and the key-value config-file format (flags win over file).

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::Serialize;
use sfft_core::exact::ExactConfig;
use sfft_core::general::GeneralConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Exact,
    General,
    Reduction,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::Exact => write!(f, "exact"),
            Algorithm::General => write!(f, "general"),
            Algorithm::Reduction => write!(f, "reduction"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Named constant overrides (`--const.<name> <value>` on the CLI, or
/// `const.<name> = <value>` in a config file).
#[derive(Clone, Debug, Default, Serialize)]
pub struct ConstOverrides {
    pub beta: Option<f64>,
    pub c_alpha: Option<f64>,
    pub c_f: Option<f64>,
    pub c_b: Option<f64>,
    pub c_cover: Option<f64>,
    pub c_s: Option<f64>,
    pub r_loc_max: Option<usize>,
    pub r_est_max: Option<usize>,
}

impl ConstOverrides {
    pub fn set(&mut self, name: &str, value: &str) -> Result<(), String> {
        let fv = || {
            value
                .parse::<f64>()
                .map_err(|_| format!("const.{name}: bad float {value:?}"))
        };
        let uv = || {
            value
                .parse::<usize>()
                .map_err(|_| format!("const.{name}: bad integer {value:?}"))
        };
        match name {
            "beta" => self.beta = Some(fv()?),
            "c_alpha" => self.c_alpha = Some(fv()?),
            "c_f" => self.c_f = Some(fv()?),
            "c_b" => self.c_b = Some(fv()?),
            "c_cover" => self.c_cover = Some(fv()?),
            "c_s" => self.c_s = Some(fv()?),
            "r_loc_max" => self.r_loc_max = Some(uv()?),
            "r_est_max" => self.r_est_max = Some(uv()?),
            other => return Err(format!("unknown constant override {other:?}")),
        }
        Ok(())
    }

    pub fn exact_config(&self) -> ExactConfig {
        let mut cfg = ExactConfig::default();
        if let Some(b) = self.beta {
            cfg.beta = b;
        }
        if let Some(a) = self.c_alpha {
            cfg.c_alpha = a;
        }
        cfg
    }

    pub fn general_config(&self) -> GeneralConfig {
        let mut cfg = GeneralConfig::default();
        if let Some(v) = self.c_f {
            cfg.c_f = v;
        }
        if let Some(v) = self.c_alpha {
            cfg.c_alpha = v;
        }
        if let Some(v) = self.c_b {
            cfg.c_b = v;
        }
        if let Some(v) = self.c_cover {
            cfg.c_cover = v;
        }
        if let Some(v) = self.c_s {
            cfg.c_s = v;
        }
        if let Some(v) = self.r_loc_max {
            cfg.r_loc_bounds.1 = v.max(cfg.r_loc_bounds.0);
        }
        if let Some(v) = self.r_est_max {
            cfg.r_est_bounds.1 = v.max(cfg.r_est_bounds.0);
        }
        cfg
    }
}

/// One batch of trials.
#[derive(Clone, Debug, Serialize)]
pub struct TrialConfig {
    pub algorithm: Algorithm,
    pub n: usize,
    pub k: usize,
    /// Integer magnitude bound L for exact/reduction instances.
    pub magnitude_bound: f64,
    pub eps: f64,
    pub delta: f64,
    pub noise_sigma: f64,
    /// Head magnitude for noisy instances; defaults to 20·σ·√n/k.
    pub head_magnitude: Option<f64>,
    pub trials: usize,
    pub seed: u64,
    /// Aggregate success-rate gate for the process exit code.
    pub threshold: f64,
    /// Write wall_ns as zero (byte-stable reports).
    pub no_timing: bool,
    pub consts: ConstOverrides,
}

impl TrialConfig {
    pub fn new(algorithm: Algorithm, n: usize, k: usize) -> Self {
        Self {
            algorithm,
            n,
            k,
            magnitude_bound: 1023.0,
            eps: 1.0,
            delta: 0.01,
            noise_sigma: 1.0,
            head_magnitude: None,
            trials: 1,
            seed: 0,
            threshold: 2.0 / 3.0,
            no_timing: false,
            consts: ConstOverrides::default(),
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.n == 0 || !self.n.is_power_of_two() {
            return Err(format!("n = {} must be a power of two", self.n));
        }
        if self.k > self.n {
            return Err(format!("k = {} exceeds n = {}", self.k, self.n));
        }
        if self.trials < 1 {
            return Err("trials must be at least 1".into());
        }
        if self.algorithm == Algorithm::General {
            if !(self.eps > 0.0 && self.eps <= 1.0) {
                return Err(format!("eps = {} outside (0, 1]", self.eps));
            }
            if !(self.delta > 0.0 && self.delta < 1.0) {
                return Err(format!("delta = {} outside (0, 1)", self.delta));
            }
        }
        if self.algorithm == Algorithm::Reduction {
            if !self.k.is_power_of_two() {
                return Err(format!("reduction needs power-of-two k, got {}", self.k));
            }
            if !self.n.is_multiple_of(self.k) {
                return Err(format!("reduction needs k | n, got k={} n={}", self.k, self.n));
            }
        }
        Ok(())
    }

    pub fn head_magnitude(&self) -> f64 {
        self.head_magnitude
            .unwrap_or_else(|| crate::gen::default_head_magnitude(self.n, self.k, self.noise_sigma))
    }
}

/// Parse a `key = value` config file; `#` starts a comment. Unknown keys
/// are rejected so typos fail loudly. Returns the raw key/value map for
/// the caller to merge underneath CLI flags.
pub fn parse_config_file(path: &Path) -> Result<BTreeMap<String, String>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    parse_config_text(&text)
}

pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, String> {
    const KNOWN: &[&str] = &[
        "n", "k", "l", "eps", "delta", "noise", "head", "trials", "seed", "out", "format",
        "threshold",
    ];
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(format!("config line {}: expected key = value", lineno + 1));
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if !KNOWN.contains(&key.as_str()) && !key.starts_with("const.") {
            return Err(format!("config line {}: unknown key {key:?}", lineno + 1));
        }
        map.insert(key, value);
    }
    Ok(map)
}
