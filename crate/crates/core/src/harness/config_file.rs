use std::collections::BTreeMap;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::core::{
    log_sum_exp_objective, p_power_objective, quadratic_objective, AlgorithmConfig,
    AlgorithmKind, ConvexObjective, Dictionary, ErrorMode, ErrorSchedule, NormKind, Vector,
};
use crate::error::{Error, Result};

/// Fully validated description of one experiment. One config file equals
/// one experiment; the config hash pins provenance of every artifact.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub objective: ObjectiveSpec,
    pub dictionary: DictionarySpec,
    pub norm: NormKind,
    pub algorithm: AlgorithmConfig,
    pub bref_mode: BRefMode,
    pub fit_window: (usize, usize),
    pub majorant_check: bool,
    pub modulus_check: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ObjectiveSpec {
    Quadratic { f: Vec<f64> },
    PPower { f: Vec<f64>, s: f64 },
    LogSumExp { rows: Vec<Vec<f64>>, offsets: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum DictionarySpec {
    Canonical,
    Random { count: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BRefMode {
    Analytic,
    BruteForce,
    None,
}

impl BRefMode {
    fn name(&self) -> &'static str {
        match self {
            BRefMode::Analytic => "analytic",
            BRefMode::BruteForce => "brute-force",
            BRefMode::None => "none",
        }
    }
}

const KNOWN_KEYS: &[&str] = &[
    "objective.kind",
    "objective.f",
    "objective.s",
    "objective.rows",
    "objective.offsets",
    "dictionary.kind",
    "dictionary.count",
    "dictionary.seed",
    "norm.p",
    "algorithm.name",
    "algorithm.t",
    "schedule.kind",
    "schedule.c",
    "schedule.q",
    "schedule.delta",
    "error.mode",
    "run.max_iterations",
    "run.seed",
    "bref.mode",
    "analysis.fit_lo",
    "analysis.fit_hi",
    "analysis.majorant",
    "analysis.modulus",
    "wgafr.wmax",
];

fn cfg_err(key: &str, message: impl Into<String>) -> Error {
    Error::Config {
        key: key.into(),
        message: message.into(),
    }
}

/// Parse the flat `key = value` grammar (dotted keys, `#` comments,
/// optional `[section]` headers that prefix the keys below them). Unknown
/// keys are errors.
pub fn parse_config_str(text: &str) -> Result<ExperimentConfig> {
    let mut map: BTreeMap<String, String> = BTreeMap::new();
    let mut section = String::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') && line.ends_with(']') {
            section = line[1..line.len() - 1].trim().to_string();
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(cfg_err(
                &format!("line {}", lineno + 1),
                format!("expected `key = value`, got `{line}`"),
            ));
        };
        let key = if section.is_empty() {
            key.trim().to_string()
        } else {
            format!("{section}.{}", key.trim())
        };
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(cfg_err(&key, "unknown key"));
        }
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(cfg_err(&key, "duplicate key"));
        }
    }
    build_config(&map)
}

pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config_str(&text)
}

fn parse_f64(map: &BTreeMap<String, String>, key: &str) -> Result<Option<f64>> {
    match map.get(key) {
        None => Ok(None),
        Some(v) => v
            .parse::<f64>()
            .map(Some)
            .map_err(|_| cfg_err(key, format!("not a number: `{v}`"))),
    }
}

fn parse_usize(map: &BTreeMap<String, String>, key: &str) -> Result<Option<usize>> {
    match map.get(key) {
        None => Ok(None),
        Some(v) => v
            .parse::<usize>()
            .map(Some)
            .map_err(|_| cfg_err(key, format!("not a nonnegative integer: `{v}`"))),
    }
}

fn parse_vec(value: &str, key: &str) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| cfg_err(key, format!("bad entry `{s}`")))
        })
        .collect()
}

fn build_config(map: &BTreeMap<String, String>) -> Result<ExperimentConfig> {
    let objective = match map.get("objective.kind").map(String::as_str) {
        Some("quadratic") | None => {
            let f = parse_vec(
                map.get("objective.f")
                    .ok_or_else(|| cfg_err("objective.f", "required for quadratic"))?,
                "objective.f",
            )?;
            ObjectiveSpec::Quadratic { f }
        }
        Some("p-power") => {
            let f = parse_vec(
                map.get("objective.f")
                    .ok_or_else(|| cfg_err("objective.f", "required for p-power"))?,
                "objective.f",
            )?;
            let s = parse_f64(map, "objective.s")?
                .ok_or_else(|| cfg_err("objective.s", "required for p-power"))?;
            if !(s > 1.0 && s <= 2.0) {
                return Err(cfg_err("objective.s", "power must be in (1, 2]"));
            }
            ObjectiveSpec::PPower { f, s }
        }
        Some("log-sum-exp") => {
            let rows_raw = map
                .get("objective.rows")
                .ok_or_else(|| cfg_err("objective.rows", "required for log-sum-exp"))?;
            let rows: Vec<Vec<f64>> = rows_raw
                .split(';')
                .map(|r| parse_vec(r, "objective.rows"))
                .collect::<Result<_>>()?;
            let offsets = parse_vec(
                map.get("objective.offsets")
                    .ok_or_else(|| cfg_err("objective.offsets", "required for log-sum-exp"))?,
                "objective.offsets",
            )?;
            if rows.len() != offsets.len() || rows.is_empty() {
                return Err(cfg_err("objective.offsets", "row/offset count mismatch"));
            }
            ObjectiveSpec::LogSumExp { rows, offsets }
        }
        Some(other) => return Err(cfg_err("objective.kind", format!("unknown kind `{other}`"))),
    };

    let dictionary = match map.get("dictionary.kind").map(String::as_str) {
        Some("canonical") | None => DictionarySpec::Canonical,
        Some("random") => {
            let count = parse_usize(map, "dictionary.count")?
                .ok_or_else(|| cfg_err("dictionary.count", "required for random dictionary"))?;
            if count < 2 || count % 2 != 0 {
                return Err(cfg_err("dictionary.count", "must be even and >= 2"));
            }
            let seed = parse_usize(map, "dictionary.seed")?.unwrap_or(0) as u64;
            DictionarySpec::Random { count, seed }
        }
        Some(other) => return Err(cfg_err("dictionary.kind", format!("unknown kind `{other}`"))),
    };

    let norm = match map.get("norm.p").map(String::as_str) {
        None => NormKind::P(2.0),
        Some("inf") => NormKind::Inf,
        Some(v) => {
            let p: f64 = v
                .parse()
                .map_err(|_| cfg_err("norm.p", format!("not a number: `{v}`")))?;
            NormKind::p(p).map_err(|_| cfg_err("norm.p", "p must be in [1, inf]"))?
        }
    };

    let algorithm_kind: AlgorithmKind = map
        .get("algorithm.name")
        .ok_or_else(|| cfg_err("algorithm.name", "required"))?
        .parse()?;
    let mut algorithm = AlgorithmConfig::new(algorithm_kind);

    if let Some(t) = parse_f64(map, "algorithm.t")? {
        if !(t > 0.0 && t <= 1.0) {
            return Err(cfg_err("algorithm.t", "t must be in (0,1]"));
        }
        algorithm.weakness = t;
    }

    algorithm.schedule = match map.get("schedule.kind").map(String::as_str) {
        Some("zero") | None => ErrorSchedule::Zero,
        Some("constant") => {
            let d = parse_f64(map, "schedule.delta")?
                .ok_or_else(|| cfg_err("schedule.delta", "required for constant schedule"))?;
            if !(0.0..=1.0).contains(&d) {
                return Err(cfg_err("schedule.delta", "delta must be in [0,1]"));
            }
            ErrorSchedule::Constant(d)
        }
        Some("power") => {
            let c = parse_f64(map, "schedule.c")?
                .ok_or_else(|| cfg_err("schedule.c", "required for power schedule"))?;
            let q = parse_f64(map, "schedule.q")?
                .ok_or_else(|| cfg_err("schedule.q", "required for power schedule"))?;
            if !(0.0..=1.0).contains(&c) {
                return Err(cfg_err("schedule.c", "delta_0 = c must be in [0,1]"));
            }
            if q <= 0.0 {
                return Err(cfg_err("schedule.q", "decay exponent must be positive"));
            }
            ErrorSchedule::Power { c, q }
        }
        Some("harmonic") => ErrorSchedule::Harmonic,
        Some(other) => return Err(cfg_err("schedule.kind", format!("unknown kind `{other}`"))),
    };

    algorithm.error_mode = match map.get("error.mode").map(String::as_str) {
        Some("tolerance") | None => ErrorMode::Tolerance,
        Some("inject") => ErrorMode::Inject,
        Some(other) => return Err(cfg_err("error.mode", format!("unknown mode `{other}`"))),
    };

    algorithm.max_iterations = parse_usize(map, "run.max_iterations")?
        .ok_or_else(|| cfg_err("run.max_iterations", "required"))?;
    algorithm.seed = parse_usize(map, "run.seed")?.unwrap_or(0) as u64;

    if let Some(w) = parse_f64(map, "wgafr.wmax")? {
        if !(w >= 1.0) {
            return Err(cfg_err("wgafr.wmax", "W_max must be >= 1"));
        }
        algorithm.w_max = w;
    }

    let bref_mode = match map.get("bref.mode").map(String::as_str) {
        Some("analytic") => BRefMode::Analytic,
        Some("brute-force") => BRefMode::BruteForce,
        Some("none") | None => BRefMode::None,
        Some(other) => return Err(cfg_err("bref.mode", format!("unknown mode `{other}`"))),
    };

    let fit_lo = parse_usize(map, "analysis.fit_lo")?.unwrap_or(10);
    let fit_hi = parse_usize(map, "analysis.fit_hi")?.unwrap_or(algorithm.max_iterations);
    let parse_bool = |key: &str, default: bool| -> Result<bool> {
        match map.get(key).map(String::as_str) {
            None => Ok(default),
            Some("true") => Ok(true),
            Some("false") => Ok(false),
            Some(other) => Err(cfg_err(key, format!("expected true/false, got `{other}`"))),
        }
    };
    let majorant_check = parse_bool("analysis.majorant", true)?;
    let modulus_check = parse_bool("analysis.modulus", true)?;

    let config = ExperimentConfig {
        objective,
        dictionary,
        norm,
        algorithm,
        bref_mode,
        fit_window: (fit_lo, fit_hi),
        majorant_check,
        modulus_check,
    };
    config.validate()?;
    Ok(config)
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.algorithm.validate()?;
        let dim = self.dim();
        if dim == 0 {
            return Err(cfg_err("objective.f", "dimension must be >= 1"));
        }
        if let ObjectiveSpec::LogSumExp { rows, .. } = &self.objective {
            if rows.iter().any(|r| r.len() != dim) {
                return Err(cfg_err("objective.rows", "rows must share one dimension"));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match &self.objective {
            ObjectiveSpec::Quadratic { f } | ObjectiveSpec::PPower { f, .. } => f.len(),
            ObjectiveSpec::LogSumExp { rows, .. } => rows.first().map_or(0, |r| r.len()),
        }
    }

    pub fn build_objective(&self) -> Result<ConvexObjective> {
        Ok(match &self.objective {
            ObjectiveSpec::Quadratic { f } => quadratic_objective(Vector::new(f.clone())?),
            ObjectiveSpec::PPower { f, s } => p_power_objective(Vector::new(f.clone())?, *s)?,
            ObjectiveSpec::LogSumExp { rows, offsets } => {
                let rows = rows
                    .iter()
                    .map(|r| Vector::new(r.clone()))
                    .collect::<Result<Vec<_>>>()?;
                log_sum_exp_objective(rows, offsets.clone())
            }
        })
    }

    pub fn build_dictionary(&self) -> Result<Dictionary> {
        match &self.dictionary {
            DictionarySpec::Canonical => Dictionary::canonical(self.dim(), self.norm),
            DictionarySpec::Random { count, seed } => {
                Dictionary::random(self.dim(), *count, self.norm, *seed)
            }
        }
    }

    /// Canonical text form: fixed key order, one key per line. Reparsing it
    /// reproduces the config, and its hash is independent of the ordering
    /// of the original file.
    pub fn serialize(&self) -> String {
        let mut lines: Vec<String> = Vec::new();
        match &self.objective {
            ObjectiveSpec::Quadratic { f } => {
                lines.push("objective.kind = quadratic".into());
                lines.push(format!("objective.f = {}", join(f)));
            }
            ObjectiveSpec::PPower { f, s } => {
                lines.push("objective.kind = p-power".into());
                lines.push(format!("objective.f = {}", join(f)));
                lines.push(format!("objective.s = {s}"));
            }
            ObjectiveSpec::LogSumExp { rows, offsets } => {
                lines.push("objective.kind = log-sum-exp".into());
                let rows: Vec<String> = rows.iter().map(|r| join(r)).collect();
                lines.push(format!("objective.rows = {}", rows.join("; ")));
                lines.push(format!("objective.offsets = {}", join(offsets)));
            }
        }
        match &self.dictionary {
            DictionarySpec::Canonical => lines.push("dictionary.kind = canonical".into()),
            DictionarySpec::Random { count, seed } => {
                lines.push("dictionary.kind = random".into());
                lines.push(format!("dictionary.count = {count}"));
                lines.push(format!("dictionary.seed = {seed}"));
            }
        }
        match self.norm {
            NormKind::P(p) => lines.push(format!("norm.p = {p}")),
            NormKind::Inf => lines.push("norm.p = inf".into()),
        }
        lines.push(format!("algorithm.name = {}", self.algorithm.algorithm.name()));
        lines.push(format!("algorithm.t = {}", self.algorithm.weakness));
        match self.algorithm.schedule {
            ErrorSchedule::Zero => lines.push("schedule.kind = zero".into()),
            ErrorSchedule::Constant(d) => {
                lines.push("schedule.kind = constant".into());
                lines.push(format!("schedule.delta = {d}"));
            }
            ErrorSchedule::Power { c, q } => {
                lines.push("schedule.kind = power".into());
                lines.push(format!("schedule.c = {c}"));
                lines.push(format!("schedule.q = {q}"));
            }
            ErrorSchedule::Harmonic => lines.push("schedule.kind = harmonic".into()),
        }
        lines.push(format!("error.mode = {}", self.algorithm.error_mode.name()));
        lines.push(format!("run.max_iterations = {}", self.algorithm.max_iterations));
        lines.push(format!("run.seed = {}", self.algorithm.seed));
        lines.push(format!("wgafr.wmax = {}", self.algorithm.w_max));
        lines.push(format!("bref.mode = {}", self.bref_mode.name()));
        lines.push(format!("analysis.fit_lo = {}", self.fit_window.0));
        lines.push(format!("analysis.fit_hi = {}", self.fit_window.1));
        lines.push(format!("analysis.majorant = {}", self.majorant_check));
        lines.push(format!("analysis.modulus = {}", self.modulus_check));
        lines.join("\n") + "\n"
    }

    pub fn hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.serialize().as_bytes());
        format!("{:x}", hasher.finalize())
    }

    pub fn short_hash(&self) -> String {
        self.hash()[..16].to_string()
    }
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}
