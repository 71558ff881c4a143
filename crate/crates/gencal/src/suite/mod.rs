//! Identity suites: seeded property batteries for every module.
//!
//! Each property runs a fixed number of cases. Case `i` of a property draws
//! from `ChaCha8(seed_p + i)`, where `seed_p` mixes the suite seed with the
//! property name, so a single failing case can be replayed from the report.

mod calibration;
mod clifford;
mod dirac;
mod exterior;
mod fieldforms;
mod genmetric;
mod purespinor;
mod random;
mod tduality;

use gencal_core::sample::seeded;
use gencal_core::Form;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::numeric::Mode;

pub const SUITES: [&str; 8] = ["exterior", "clifford", "genmetric", "dirac", "purespinor", "calibration", "tduality", "fieldforms"];

pub type CaseResult = Result<(), String>;

/// Per-case inputs: the seeded generator, the case index and the run options.
pub struct Case {
    pub rng: ChaCha8Rng,
    pub index: usize,
    pub mode: Mode,
    pub tol: f64,
}

impl Case {
    /// Dimension for this case, cycling through `lo..=hi`.
    pub fn dim(&self, lo: usize, hi: usize) -> usize {
        lo + self.index % (hi - lo + 1)
    }
}

pub struct Property {
    pub name: &'static str,
    pub cases: usize,
    pub check: fn(&mut Case) -> CaseResult,
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub case: usize,
    pub case_seed: u64,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    pub suite: &'static str,
    pub name: &'static str,
    pub seed: u64,
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    pub first_failure: Option<Counterexample>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub mode: &'static str,
    pub tol: f64,
    pub properties: Vec<PropertyReport>,
    pub properties_passed: usize,
    pub properties_failed: usize,
    pub cases_passed: usize,
    pub cases_failed: usize,
}

impl SuiteReport {
    pub fn exit_code(&self) -> i32 {
        if self.properties_failed == 0 {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialises");
        text.push('\n');
        text
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("suite {} seed {} mode {} tol {:e}\n", self.suite, self.seed, self.mode, self.tol);
        let width = self.properties.iter().map(|p| p.suite.len() + p.name.len() + 2).max().unwrap_or(0);
        for p in &self.properties {
            let label = format!("{}::{}", p.suite, p.name);
            let status = if p.failed == 0 { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{status} {label:<width$}  seed {:#018x}  cases {}/{}\n",
                p.seed, p.passed, p.cases
            ));
            if let Some(c) = &p.first_failure {
                out.push_str(&format!("     first counterexample: case {} (case seed {:#018x}): {}\n", c.case, c.case_seed, c.message));
            }
        }
        out.push_str(&format!(
            "summary: {} properties passed, {} failed; {} cases passed, {} failed\n",
            self.properties_passed, self.properties_failed, self.cases_passed, self.cases_failed
        ));
        out
    }
}

fn properties(suite: &str) -> Vec<Property> {
    match suite {
        "exterior" => exterior::properties(),
        "clifford" => clifford::properties(),
        "genmetric" => genmetric::properties(),
        "dirac" => dirac::properties(),
        "purespinor" => purespinor::properties(),
        "calibration" => calibration::properties(),
        "tduality" => tduality::properties(),
        "fieldforms" => fieldforms::properties(),
        _ => Vec::new(),
    }
}

/// SplitMix64 finaliser over the suite seed and an FNV-1a hash of the name.
pub fn property_seed(seed: u64, suite: &str, name: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in suite.bytes().chain(*b":").chain(name.bytes()) {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    let mut z = seed ^ h;
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn run_property(suite: &'static str, p: &Property, seed: u64, mode: Mode, tol: f64) -> PropertyReport {
    let pseed = property_seed(seed, suite, p.name);
    let mut passed = 0;
    let mut first_failure = None;
    for index in 0..p.cases {
        let case_seed = pseed.wrapping_add(index as u64);
        let mut case = Case { rng: seeded(case_seed), index, mode, tol };
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| (p.check)(&mut case)))
            .unwrap_or_else(|payload| {
                let msg = payload
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panic".into());
                Err(format!("panicked: {msg}"))
            });
        match outcome {
            Ok(()) => passed += 1,
            Err(message) => {
                if first_failure.is_none() {
                    first_failure = Some(Counterexample { case: index, case_seed, message });
                }
            }
        }
    }
    PropertyReport { suite, name: p.name, seed: pseed, cases: p.cases, passed, failed: p.cases - passed, first_failure }
}

/// Runs one suite or `all`. Properties are reported in declaration order,
/// suites in the fixed order of [`SUITES`].
pub fn run_suite(name: &str, seed: u64, mode: Mode, tol: f64) -> CliResult<SuiteReport> {
    let selected: Vec<&'static str> = match name {
        "all" => SUITES.to_vec(),
        other => vec![*SUITES.iter().find(|s| **s == other).ok_or_else(|| CliError::UnknownSuite(other.into()))?],
    };
    let mut reports = Vec::new();
    for suite in selected {
        for p in properties(suite) {
            reports.push(run_property(suite, &p, seed, mode, tol));
        }
    }
    let properties_failed = reports.iter().filter(|r| r.failed > 0).count();
    Ok(SuiteReport {
        suite: name.into(),
        seed,
        mode: mode.name(),
        tol,
        properties_passed: reports.len() - properties_failed,
        properties_failed,
        cases_passed: reports.iter().map(|r| r.passed).sum(),
        cases_failed: reports.iter().map(|r| r.failed).sum(),
        properties: reports,
    })
}

/// `|a − b| ≤ tol · max(1, |a|, |b|)`.
pub fn close(a: f64, b: f64, tol: f64, what: &str) -> CaseResult {
    let scale = 1f64.max(a.abs()).max(b.abs());
    if (a - b).abs() <= tol * scale && a.is_finite() && b.is_finite() {
        Ok(())
    } else {
        Err(format!("{what}: {a} vs {b} (difference {:e})", (a - b).abs()))
    }
}

pub fn forms_close(a: &Form<f64>, b: &Form<f64>, tol: f64, what: &str) -> CaseResult {
    let scale = 1f64.max(a.max_abs()).max(b.max_abs());
    let diff = (a - b).max_abs();
    if diff <= tol * scale {
        Ok(())
    } else {
        Err(format!("{what}: forms differ by {diff:e}"))
    }
}

pub fn ensure(condition: bool, message: impl FnOnce() -> String) -> CaseResult {
    if condition {
        Ok(())
    } else {
        Err(message())
    }
}

pub fn core<T>(r: gencal_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// `(−1)^e` as `f64`.
pub fn sign(e: usize) -> f64 {
    if e.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}
