//! Suite selection, configuration and the versioned verification report.

use crate::chain::{updown_product_check, verify_drawn_diagram, verify_table, Ladder, Table};
use crate::error::{Error, Result};
use crate::report::{error_record, sort_records, CheckRecord, Status, Summary};
use crate::{alpha, crosscheck, gauged, heun, identity, rodrigues};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Smallest series order accepted by the series suites.
pub const MIN_ORDER: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Operators,
    PowerCommutators,
    Tables,
    Diagrams,
    Updown,
    Rodrigues,
    Series,
    Alpha,
    Heun,
    DerivativeFrame,
    Crosscheck,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Operators,
        Suite::PowerCommutators,
        Suite::Tables,
        Suite::Diagrams,
        Suite::Updown,
        Suite::Rodrigues,
        Suite::Series,
        Suite::Alpha,
        Suite::Heun,
        Suite::DerivativeFrame,
        Suite::Crosscheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Operators => "operators",
            Suite::PowerCommutators => "power-commutators",
            Suite::Tables => "tables",
            Suite::Diagrams => "diagrams",
            Suite::Updown => "updown",
            Suite::Rodrigues => "rodrigues",
            Suite::Series => "series",
            Suite::Alpha => "alpha",
            Suite::Heun => "heun",
            Suite::DerivativeFrame => "derivative-frame",
            Suite::Crosscheck => "crosscheck",
        }
    }

    pub fn parse(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown suite `{s}`")))
    }

    pub fn uses_series(self) -> bool {
        matches!(self, Suite::Series | Suite::Alpha | Suite::Heun | Suite::DerivativeFrame)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suites: BTreeSet<Suite>,
    /// Inclusive index range `[lo, hi]`.
    pub range: (i64, i64),
    pub order: usize,
    pub max_power: u32,
    pub strict: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { suites: Suite::ALL.into_iter().collect(), range: (-8, 8), order: 24, max_power: 5, strict: false }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.range.0 > self.range.1 {
            return Err(Error::Invalid(format!("empty index range {}..{}", self.range.0, self.range.1)));
        }
        if self.suites.iter().any(|s| s.uses_series()) && self.order < MIN_ORDER {
            return Err(Error::Invalid(format!("series order must be at least {MIN_ORDER}, got {}", self.order)));
        }
        if self.max_power == 0 {
            return Err(Error::Invalid("commutator power must be at least 1".into()));
        }
        Ok(())
    }
}

/// Records of one suite under `config`; errors become failing records.
pub fn run_one(suite: Suite, config: &SuiteConfig) -> Vec<CheckRecord> {
    let (lo, hi) = config.range;
    let order = config.order;
    match suite {
        Suite::Operators => identity::verify_identities(),
        Suite::PowerCommutators => identity::verify_power_commutators(config.max_power),
        Suite::Tables => Table::ALL.into_iter().flat_map(|t| verify_table(t, lo, hi)).collect(),
        Suite::Diagrams => [Ladder::B, Ladder::C].into_iter().flat_map(verify_drawn_diagram).collect(),
        Suite::Updown => [Ladder::B, Ladder::C].into_iter().flat_map(|l| updown_product_check(l, lo, hi)).collect(),
        Suite::Rodrigues => {
            let bound = lo.abs().max(hi.abs());
            rodrigues::verify_rodrigues(bound).unwrap_or_else(|e| vec![error_record("rodrigues", "blocks", None, "evaluation", &e)])
        }
        Suite::Series => {
            let mut out = gauged::verify_gauged_recurrences(lo..=hi, order);
            out.extend(gauged::verify_ode(lo..=hi, order));
            out.extend(gauged::verify_hypergeometric(lo..=hi, order));
            out
        }
        Suite::Alpha => {
            let top = hi.max(3);
            let mut out = alpha::verify_alpha_forms(top, order);
            out.extend(alpha::verify_alpha_actions(top, order));
            out
        }
        Suite::Heun => heun::verify_heun(lo..=hi, order),
        Suite::DerivativeFrame => {
            let mut out = heun::verify_derivative_frame(lo..=hi, order);
            out.extend(heun::verify_frame_agreement(lo..=hi, order));
            out
        }
        Suite::Crosscheck => crosscheck::verify_crosscheck(lo..=hi, lo..=hi),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: SuiteConfig,
    pub summary: Summary,
    pub records: Vec<CheckRecord>,
}

impl VerificationReport {
    /// Assemble a report; records are sorted into canonical order.
    pub fn new(config: SuiteConfig, mut records: Vec<CheckRecord>) -> Self {
        sort_records(&mut records);
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION.to_string(),
            summary: Summary::of(&records),
            config,
            records,
        }
    }

    /// 0 when nothing failed (soft mismatches count as failures when strict), else 1.
    pub fn exit_code(&self) -> i32 {
        let soft = self.config.strict && self.summary.soft_mismatch > 0;
        if self.summary.fail > 0 || soft {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Invalid(format!("malformed report: {e}")))
    }

    /// One line per record followed by per-suite and overall counts.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            s.push_str(&r.to_string());
            s.push('\n');
        }
        for suite in &self.config.suites {
            let recs: Vec<CheckRecord> = self.records.iter().filter(|r| r.suite == suite.name()).cloned().collect();
            let sm = Summary::of(&recs);
            s.push_str(&format!("suite {suite}: {} checks, {} pass, {} soft-mismatch, {} fail\n", sm.total, sm.pass, sm.soft_mismatch, sm.fail));
        }
        let sm = &self.summary;
        s.push_str(&format!("total: {} checks, {} pass, {} soft-mismatch, {} fail\n", sm.total, sm.pass, sm.soft_mismatch, sm.fail));
        s
    }

    pub fn records_of(&self, suite: Suite) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(move |r| r.suite == suite.name())
    }

    pub fn worst(&self, suite: Suite) -> Status {
        self.records_of(suite).fold(Status::Pass, |acc, r| acc.and(r.status))
    }
}

/// Run every selected suite, suites in parallel.
pub fn run_suite(config: &SuiteConfig) -> Result<VerificationReport> {
    run_suite_cached(config, None)
}

/// Cache file of one suite's records; the name carries every parameter the
/// records depend on and the tool version.
pub fn cache_path(dir: &Path, suite: Suite, config: &SuiteConfig) -> PathBuf {
    let (lo, hi) = config.range;
    dir.join(format!("{suite}_r{lo}..{hi}_o{}_p{}_v{TOOL_VERSION}.json", config.order, config.max_power))
}

fn load_cached(path: &Path) -> Option<Vec<CheckRecord>> {
    let text = std::fs::read_to_string(path).ok()?;
    serde_json::from_str(&text).ok()
}

fn store_cached(path: &Path, records: &[CheckRecord]) -> Result<()> {
    let io = |e: std::io::Error| Error::Invalid(format!("cache write {}: {e}", path.display()));
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(io)?;
    }
    let tmp = path.with_extension("json.tmp");
    std::fs::write(&tmp, serde_json::to_string(records).expect("records serialize")).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}

/// As [`run_suite`], reusing and refreshing per-suite records under `cache`.
/// Unreadable cache entries are recomputed.
pub fn run_suite_cached(config: &SuiteConfig, cache: Option<&Path>) -> Result<VerificationReport> {
    config.validate()?;
    let suites: Vec<Suite> = config.suites.iter().copied().collect();
    let per_suite: Vec<Result<Vec<CheckRecord>>> = suites
        .par_iter()
        .map(|&s| {
            let Some(dir) = cache else { return Ok(run_one(s, config)) };
            let path = cache_path(dir, s, config);
            if let Some(records) = load_cached(&path) {
                return Ok(records);
            }
            let records = run_one(s, config);
            store_cached(&path, &records)?;
            Ok(records)
        })
        .collect();
    let mut records = Vec::new();
    for r in per_suite {
        records.extend(r?);
    }
    Ok(VerificationReport::new(config.clone(), records))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_suite_set_is_an_empty_passing_report() {
        let config = SuiteConfig { suites: BTreeSet::new(), ..SuiteConfig::default() };
        let report = run_suite(&config).unwrap();
        assert_eq!(report.summary.total, 0);
        assert_eq!(report.exit_code(), 0);
    }

    #[test]
    fn invalid_configs() {
        let bad_range = SuiteConfig { range: (3, 1), ..SuiteConfig::default() };
        assert!(run_suite(&bad_range).is_err());
        let low_order = SuiteConfig { order: 8, ..SuiteConfig::default() };
        assert!(run_suite(&low_order).is_err());
        let no_series = SuiteConfig { order: 8, suites: [Suite::Operators].into(), ..SuiteConfig::default() };
        assert!(no_series.validate().is_ok());
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::parse(s.name()).unwrap(), s);
        }
        assert!(Suite::parse("nope").is_err());
    }

    #[test]
    fn report_json_round_trip_and_strictness() {
        let config = SuiteConfig { suites: [Suite::Crosscheck].into(), range: (0, 4), ..SuiteConfig::default() };
        let report = run_suite(&config).unwrap();
        assert_eq!(VerificationReport::from_json(&report.to_json()).unwrap(), report);
        let mut soft = report.clone();
        soft.summary.soft_mismatch = 1;
        assert_eq!(soft.exit_code(), 0);
        soft.config.strict = true;
        assert_eq!(soft.exit_code(), 1);
    }

    #[test]
    fn cache_reuse_is_byte_identical() {
        let dir = std::env::temp_dir().join(format!("exherm-cache-test-{}", std::process::id()));
        let config = SuiteConfig { suites: [Suite::Crosscheck, Suite::Updown].into(), range: (0, 3), ..SuiteConfig::default() };
        let fresh = run_suite_cached(&config, Some(&dir)).unwrap();
        assert!(cache_path(&dir, Suite::Updown, &config).exists());
        let cached = run_suite_cached(&config, Some(&dir)).unwrap();
        assert_eq!(fresh.to_json(), cached.to_json());
        assert_eq!(fresh.to_json(), run_suite(&config).unwrap().to_json());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
