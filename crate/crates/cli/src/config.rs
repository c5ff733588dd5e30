//! Experiment configuration: TOML with kebab-case keys and sections.
//!
//! Parsing is strict (unknown keys are errors) while semantic validation is
//! exhaustive: every violation is reported, not just the first.

use oppnet_core::models::{AvailabilityRule, PopularityModel, RateDist, RateModel, RhoFn};
use oppnet_core::pmf::Pmf;
use oppnet_core::sim::{HolderSelection, Protocol};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config syntax error: {0}")]
    Syntax(String),
    #[error("invalid config:\n{}", .0.join("\n"))]
    Violations(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case", default)]
pub struct ExperimentConfig {
    /// Master seed; every random quantity derives from it.
    pub seed: u64,
    pub nodes: u32,
    pub contents: u32,
    /// Contact-process replications per scenario.
    pub replications: u32,
    /// Independently built scenarios pooled into one estimate.
    pub scenarios: u32,
    pub ttl: Vec<f64>,
    /// Censoring horizon; absent = 50× the mean-statistics delay bound.
    pub horizon: Option<f64>,
    /// Holder placement: "uniform" or "rate-weighted".
    pub selection: String,
    pub output_dir: Option<String>,
    pub rate: RateCfg,
    pub popularity: PopularityCfg,
    pub availability: AvailabilityCfg,
    pub protocol: ProtocolCfg,
    pub contact: ContactCfg,
    /// Second rate window for the temporal variant.
    pub windows: Option<WindowsCfg>,
    pub offload: OffloadCfg,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 0,
            nodes: 200,
            contents: 20,
            replications: 1,
            scenarios: 1,
            ttl: Vec::new(),
            horizon: None,
            selection: "uniform".into(),
            output_dir: None,
            rate: RateCfg::default(),
            popularity: PopularityCfg::default(),
            availability: AvailabilityCfg::default(),
            protocol: ProtocolCfg::default(),
            contact: ContactCfg::default(),
            windows: None,
            offload: OffloadCfg::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case", default)]
pub struct RateCfg {
    /// gamma | pareto | uniform | constant | empirical | pareto-shape
    pub family: String,
    pub mean: Option<f64>,
    pub cv: Option<f64>,
    /// Classical-Pareto alternative parameterization.
    pub shape: Option<f64>,
    pub scale: Option<f64>,
    pub min: Option<f64>,
    pub max: Option<f64>,
    pub rate: Option<f64>,
    pub values: Option<Vec<f64>>,
    /// pareto-shape only: common scale t0 and the f_α distribution.
    pub t0: Option<f64>,
    pub shapes: Option<Box<RateCfg>>,
}

impl Default for RateCfg {
    fn default() -> Self {
        RateCfg {
            family: "gamma".into(),
            mean: None,
            cv: None,
            shape: None,
            scale: None,
            min: None,
            max: None,
            rate: None,
            values: None,
            t0: None,
            shapes: None,
        }
    }
}

impl RateCfg {
    fn resolve_dist(&self, path: &str, errs: &mut Vec<String>) -> Option<RateDist> {
        let dist = match self.family.as_str() {
            "gamma" => {
                let mean = self.mean.unwrap_or(1.0);
                let cv = self.cv.unwrap_or(1.0);
                if !(mean > 0.0) {
                    errs.push(format!("{path}.mean: μ_λ must be > 0, got {mean}"));
                }
                if !(cv >= 0.0) {
                    errs.push(format!("{path}.cv: CV_λ must be ≥ 0, got {cv}"));
                }
                RateDist::Gamma { mean, cv }
            }
            "pareto" => {
                if let (Some(shape), Some(scale)) = (self.shape, self.scale) {
                    RateDist::Pareto { shape, scale }
                } else {
                    let mean = self.mean.unwrap_or(1.0);
                    let cv = self.cv.unwrap_or(1.0);
                    match RateDist::pareto_from_mean_cv(mean, cv) {
                        Ok(d) => d,
                        Err(e) => {
                            errs.push(format!("{path}: {e}"));
                            return None;
                        }
                    }
                }
            }
            "uniform" => RateDist::Uniform {
                min: self.min.unwrap_or(0.5),
                max: self.max.unwrap_or(1.5),
            },
            "constant" => RateDist::Constant {
                value: self.rate.or(self.mean).unwrap_or(1.0),
            },
            "empirical" => match &self.values {
                Some(values) => RateDist::Empirical {
                    values: values.clone(),
                },
                None => {
                    errs.push(format!("{path}.values: empirical rates require values"));
                    return None;
                }
            },
            other => {
                errs.push(format!(
                    "{path}.family: unknown rate family \"{other}\" (gamma, pareto, uniform, constant, empirical, pareto-shape)"
                ));
                return None;
            }
        };
        if let Err(e) = dist.validate() {
            errs.push(format!("{path}: {e}"));
            return None;
        }
        Some(dist)
    }

    pub fn resolve(&self, path: &str, errs: &mut Vec<String>) -> Option<RateModel> {
        if self.family == "pareto-shape" {
            let t0 = self.t0.unwrap_or(1.0);
            if !(t0 > 0.0) {
                errs.push(format!("{path}.t0: Pareto scale t0 must be > 0, got {t0}"));
            }
            let shapes_cfg = self.shapes.clone().unwrap_or_else(|| {
                Box::new(RateCfg {
                    family: "uniform".into(),
                    min: Some(1.5),
                    max: Some(4.0),
                    ..RateCfg::default()
                })
            });
            let shapes = shapes_cfg.resolve_dist(&format!("{path}.shapes"), errs)?;
            let model = RateModel::ParetoShape { shapes, t0 };
            if let Err(e) = model.validate() {
                errs.push(format!("{path}: {e}"));
                return None;
            }
            Some(model)
        } else {
            Some(RateModel::Rates {
                dist: self.resolve_dist(path, errs)?,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case", default)]
pub struct PopularityCfg {
    /// zipf | bounded-pareto | degenerate | explicit
    pub family: String,
    pub alpha: Option<f64>,
    pub n_min: Option<u32>,
    pub n_max: Option<u32>,
    pub n: Option<u32>,
    /// explicit pmf: popularity value (as string key) → probability
    pub pmf: Option<BTreeMap<String, f64>>,
}

impl Default for PopularityCfg {
    fn default() -> Self {
        PopularityCfg {
            family: "zipf".into(),
            alpha: None,
            n_min: None,
            n_max: None,
            n: None,
            pmf: None,
        }
    }
}

impl PopularityCfg {
    pub fn resolve(&self, errs: &mut Vec<String>) -> Option<PopularityModel> {
        let built = match self.family.as_str() {
            "zipf" => PopularityModel::zipf(
                self.alpha.unwrap_or(1.0),
                self.n_min.unwrap_or(1),
                self.n_max.unwrap_or(30),
            ),
            "bounded-pareto" => PopularityModel::bounded_pareto(
                self.alpha.unwrap_or(2.0),
                self.n_min.unwrap_or(50),
                self.n_max.unwrap_or(500),
            ),
            "degenerate" => PopularityModel::degenerate(self.n.unwrap_or(10)),
            "explicit" => {
                let Some(pmf) = &self.pmf else {
                    errs.push("popularity.pmf: explicit popularity requires a pmf table".into());
                    return None;
                };
                PopularityModel::explicit(parse_u32_table("popularity.pmf", pmf, errs)?)
            }
            other => {
                errs.push(format!(
                    "popularity.family: unknown family \"{other}\" (zipf, bounded-pareto, degenerate, explicit)"
                ));
                return None;
            }
        };
        match built {
            Ok(m) => Some(m),
            Err(e) => {
                errs.push(format!("popularity: {e}"));
                None
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case", default)]
pub struct AvailabilityCfg {
    /// deterministic | binomial | uncorrelated
    pub kind: String,
    /// linear | power | log | sqrt | table
    pub form: String,
    pub c: Option<f64>,
    pub k: Option<f64>,
    pub table: Option<BTreeMap<String, f64>>,
    /// uncorrelated pmf: holder count (string key) → probability
    pub pmf: Option<BTreeMap<String, f64>>,
}

impl Default for AvailabilityCfg {
    fn default() -> Self {
        AvailabilityCfg {
            kind: "deterministic".into(),
            form: "sqrt".into(),
            c: None,
            k: None,
            table: None,
            pmf: None,
        }
    }
}

impl AvailabilityCfg {
    fn rho(&self, errs: &mut Vec<String>) -> Option<RhoFn> {
        let c = self.c.unwrap_or(2.0);
        if !(c >= 0.0) {
            errs.push(format!("availability.c: must be ≥ 0, got {c}"));
        }
        Some(match self.form.as_str() {
            "linear" => RhoFn::Linear { c },
            "power" => RhoFn::Power {
                c,
                k: self.k.unwrap_or(1.0),
            },
            "log" => RhoFn::Log { c },
            "sqrt" => RhoFn::Sqrt { c },
            "table" => {
                let Some(table) = &self.table else {
                    errs.push("availability.table: form \"table\" requires a table".into());
                    return None;
                };
                let entries = parse_u32_table("availability.table", table, errs)?;
                RhoFn::Table {
                    values: entries.into_iter().collect(),
                }
            }
            other => {
                errs.push(format!(
                    "availability.form: unknown form \"{other}\" (linear, power, log, sqrt, table)"
                ));
                return None;
            }
        })
    }

    pub fn resolve(&self, errs: &mut Vec<String>) -> Option<AvailabilityRule> {
        match self.kind.as_str() {
            "deterministic" => Some(AvailabilityRule::deterministic(self.rho(errs)?)),
            "binomial" => Some(AvailabilityRule::binomial(self.rho(errs)?)),
            "uncorrelated" => {
                let Some(pmf) = &self.pmf else {
                    errs.push("availability.pmf: uncorrelated availability requires a pmf".into());
                    return None;
                };
                let entries = parse_u32_table("availability.pmf", pmf, errs)?;
                match Pmf::new(entries.into_iter().collect()) {
                    Ok(p) => Some(AvailabilityRule::uncorrelated(p)),
                    Err(e) => {
                        errs.push(format!("availability.pmf: {e}"));
                        None
                    }
                }
            }
            other => {
                errs.push(format!(
                    "availability.kind: unknown kind \"{other}\" (deterministic, binomial, uncorrelated)"
                ));
                None
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case", default)]
pub struct ProtocolCfg {
    /// static | multi-hop
    pub kind: String,
    pub cooperation: f64,
    /// Cap on new holders per content; absent = unlimited.
    pub limit: Option<u32>,
}

impl Default for ProtocolCfg {
    fn default() -> Self {
        ProtocolCfg {
            kind: "static".into(),
            cooperation: 1.0,
            limit: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, rename_all = "kebab-case", default)]
pub struct ContactCfg {
    /// exponential | pareto; absent = implied by the rate family.
    pub law: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case", default)]
pub struct WindowsCfg {
    pub length: f64,
    pub rate: RateCfg,
}

impl Default for WindowsCfg {
    fn default() -> Self {
        WindowsCfg {
            length: 1.0,
            rate: RateCfg::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case", default)]
pub struct OffloadCfg {
    /// Mean copies per content, c_M.
    pub budget: f64,
    /// qos | sqrt | log | uniform | power | random (for `optimize`)
    pub policy: String,
    pub k: Option<f64>,
    /// Policies compared by `offload-sim`.
    pub policies: Vec<String>,
    /// Algorithm-2 reallocation cadence, in deliveries.
    pub update_every: u64,
}

impl Default for OffloadCfg {
    fn default() -> Self {
        OffloadCfg {
            budget: 2.0,
            policy: "qos".into(),
            k: None,
            policies: vec!["qos".into(), "log".into(), "sqrt".into(), "random".into()],
            update_every: 10,
        }
    }
}

fn parse_u32_table(
    path: &str,
    table: &BTreeMap<String, f64>,
    errs: &mut Vec<String>,
) -> Option<BTreeMap<u32, f64>> {
    let mut out = BTreeMap::new();
    let mut ok = true;
    for (key, &value) in table {
        match key.parse::<u32>() {
            Ok(k) => {
                out.insert(k, value);
            }
            Err(_) => {
                errs.push(format!("{path}: key \"{key}\" is not a non-negative integer"));
                ok = false;
            }
        }
    }
    ok.then_some(out)
}

/// A fully validated configuration with materialized models.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub config: ExperimentConfig,
    pub rate: RateModel,
    pub popularity: PopularityModel,
    pub availability: AvailabilityRule,
    pub protocol: Protocol,
    pub selection: HolderSelection,
    /// (second-window rate distribution, window length)
    pub windows: Option<(RateDist, f64)>,
}

/// Parse and validate; semantic problems are reported all at once.
pub fn parse_config(text: &str) -> Result<Resolved, ConfigError> {
    let config: ExperimentConfig =
        toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
    resolve(config)
}

pub fn resolve(config: ExperimentConfig) -> Result<Resolved, ConfigError> {
    let mut errs = Vec::new();

    if config.nodes < 2 {
        errs.push(format!("nodes: need at least 2, got {}", config.nodes));
    }
    if config.contents < 1 {
        errs.push("contents: need at least 1".into());
    }
    if config.replications < 1 {
        errs.push("replications: need at least 1".into());
    }
    if config.scenarios < 1 {
        errs.push("scenarios: need at least 1".into());
    }
    for &t in &config.ttl {
        if !(t >= 0.0) || !t.is_finite() {
            errs.push(format!("ttl: values must be finite and ≥ 0, got {t}"));
        }
    }
    if let Some(h) = config.horizon {
        if !(h > 0.0) {
            errs.push(format!("horizon: must be > 0, got {h}"));
        }
    }

    let rate = config.rate.resolve("rate", &mut errs);
    let popularity = config.popularity.resolve(&mut errs);
    let availability = config.availability.resolve(&mut errs);

    let selection = match config.selection.as_str() {
        "uniform" => Some(HolderSelection::UniformRandom),
        "rate-weighted" => Some(HolderSelection::WeightedByRatesToRequesters),
        other => {
            errs.push(format!(
                "selection: unknown mechanism \"{other}\" (uniform, rate-weighted)"
            ));
            None
        }
    };

    let protocol = match config.protocol.kind.as_str() {
        "static" => Some(Protocol::Static),
        "multi-hop" => {
            if !(0.0..=1.0).contains(&config.protocol.cooperation) {
                errs.push(format!(
                    "protocol.cooperation: must be in [0, 1], got {}",
                    config.protocol.cooperation
                ));
            }
            Some(Protocol::MultiHop {
                cooperation: config.protocol.cooperation,
                limit: config.protocol.limit,
            })
        }
        other => {
            errs.push(format!(
                "protocol.kind: unknown protocol \"{other}\" (static, multi-hop)"
            ));
            None
        }
    };

    // contact-law consistency
    if let (Some(law), Some(rate)) = (&config.contact.law, &rate) {
        let implied = match rate.contact_law() {
            oppnet_core::models::ContactLaw::Exponential => "exponential",
            oppnet_core::models::ContactLaw::ParetoRenewal { .. } => "pareto",
        };
        match law.as_str() {
            "exponential" | "pareto" => {
                if law != implied {
                    errs.push(format!(
                        "contact.law: \"{law}\" conflicts with rate family \"{}\" (implies {implied})",
                        config.rate.family
                    ));
                }
            }
            other => errs.push(format!(
                "contact.law: unknown law \"{other}\" (exponential, pareto)"
            )),
        }
    }
    if let (Some(Protocol::MultiHop { .. }), Some(r)) = (&protocol, &rate) {
        if matches!(r.contact_law(), oppnet_core::models::ContactLaw::ParetoRenewal { .. }) {
            errs.push(
                "protocol: multi-hop under Pareto inter-contact times is unsupported".into(),
            );
        }
    }
    if config.windows.is_some() && matches!(protocol, Some(Protocol::MultiHop { .. })) {
        errs.push("windows: the temporal variant requires the static protocol".into());
    }

    let windows = match &config.windows {
        Some(w) => {
            if !(w.length > 0.0) {
                errs.push(format!("windows.length: must be > 0, got {}", w.length));
            }
            if w.rate.family == "pareto-shape" {
                errs.push("windows.rate: temporal windows require exponential contacts".into());
                None
            } else {
                w.rate.resolve_dist("windows.rate", &mut errs).map(|d| (d, w.length))
            }
        }
        None => None,
    };

    if let (Some(pop), Some(avail)) = (&popularity, &availability) {
        if u64::from(pop.max_n()) > u64::from(config.nodes) {
            errs.push(format!(
                "popularity: support up to {} exceeds nodes = {}",
                pop.max_n(),
                config.nodes
            ));
        }
        if let Err(e) = avail.validate(pop, config.nodes) {
            errs.push(format!("availability: {e}"));
        }
    }
    if !(config.offload.budget > 0.0) {
        errs.push(format!(
            "offload.budget: must be > 0, got {}",
            config.offload.budget
        ));
    }
    if config.offload.update_every < 1 {
        errs.push("offload.update-every: must be ≥ 1".into());
    }

    if !errs.is_empty() {
        return Err(ConfigError::Violations(errs));
    }
    Ok(Resolved {
        rate: rate.unwrap(),
        popularity: popularity.unwrap(),
        availability: availability.unwrap(),
        protocol: protocol.unwrap(),
        selection: selection.unwrap(),
        windows,
        config,
    })
}
