//! `gencal check`: calibration reports for every pair of a scenario.

use gencal_core::calibration::{exact_verdict, is_calibrated, spinor_criterion, EQUALITY_TOL};
use gencal_core::exterior::Form;
use gencal_core::fieldforms::tdual_intertwine_check;
use gencal_core::literal::format_rational;
use gencal_core::Rational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::numeric::ModeScalar;
use crate::scenario::{calibration_form, AnyScenario, Scenario};

#[derive(Clone, Debug, Serialize)]
pub struct ExpectationResult {
    pub key: String,
    pub expected: Value,
    pub actual: Value,
    pub met: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExactReport {
    pub scaled_pairing: String,
    pub scale_sq: String,
    pub bound_sq: String,
    pub within_bound: bool,
    pub calibrated: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub id: String,
    pub k: usize,
    pub pairing_value: f64,
    pub bound_value: f64,
    pub deficit: f64,
    pub calibrated: bool,
    pub orientation: i8,
    pub witness: Option<f64>,
    pub exact: Option<ExactReport>,
    pub expectations: Vec<ExpectationResult>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FieldReport {
    pub tint: bool,
    pub tint2: bool,
    pub agree: bool,
    pub expectations: Vec<ExpectationResult>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpectationSummary {
    pub total: usize,
    pub met: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub schema_version: u32,
    pub scenario: Option<String>,
    pub mode: &'static str,
    pub n: usize,
    pub tol: f64,
    pub pairs: Vec<PairReport>,
    pub field: Option<FieldReport>,
    pub expectations: ExpectationSummary,
    pub status: &'static str,
}

impl CheckReport {
    pub fn exit_code(&self) -> i32 {
        if self.expectations.failed == 0 {
            0
        } else {
            1
        }
    }

    pub fn to_text(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialises");
        text.push('\n');
        text
    }
}

fn expectation(key: &str, expected: Value, actual: Value, met: bool) -> ExpectationResult {
    ExpectationResult { key: key.into(), expected, actual, met }
}

fn exact_report(
    rho: &Form<Rational>,
    s: &Scenario<Rational>,
    pair: &gencal_core::purespinor::IsotropicPair<Rational>,
) -> CliResult<(ExactReport, i8)> {
    let v = exact_verdict(rho, s.metric.g(), s.metric.b(), pair).map_err(|e| CliError::validation("calibration", e))?;
    let negative = num_traits::Signed::is_negative(&v.scaled_pairing);
    let scaled = if negative { -v.scaled_pairing.clone() } else { v.scaled_pairing.clone() };
    let lhs = scaled.clone() * scaled.clone() * v.scale_sq.clone();
    let report = ExactReport {
        scaled_pairing: format_rational(&scaled),
        scale_sq: format_rational(&v.scale_sq),
        bound_sq: format_rational(&v.bound_sq),
        within_bound: lhs <= v.bound_sq,
        calibrated: lhs == v.bound_sq,
    };
    Ok((report, if negative { -1 } else { 1 }))
}

trait ExactHook: ModeScalar {
    fn exact(_rho: &Form<Self>, _s: &Scenario<Self>, _i: usize) -> CliResult<Option<(ExactReport, i8)>> {
        Ok(None)
    }
}

impl ExactHook for f64 {}

impl ExactHook for Rational {
    fn exact(rho: &Form<Self>, s: &Scenario<Self>, i: usize) -> CliResult<Option<(ExactReport, i8)>> {
        exact_report(rho, s, &s.pairs[i].pair).map(Some)
    }
}

fn exact_calibration_form<S: ModeScalar>(s: &Scenario<S>, rho: &Form<f64>) -> CliResult<Form<S>> {
    match &s.calibration {
        Some(crate::scenario::CalibrationSpec::Form(f)) => Ok(f.clone()),
        _ => {
            let coeffs = rho
                .coeffs()
                .iter()
                .map(|c| S::from_computed(*c))
                .collect::<Option<Vec<S>>>()
                .ok_or_else(|| CliError::validation("calibration.fierz", "fierz form has non-rational coefficients"))?;
            Ok(Form::from_coeffs(s.n, coeffs).expect("same length"))
        }
    }
}

fn run<S: ExactHook>(s: &Scenario<S>, tol_override: Option<f64>) -> CliResult<CheckReport> {
    let tol = tol_override.or(s.tol).unwrap_or(EQUALITY_TOL);
    let rho = calibration_form(s)?.unwrap_or_else(|| Form::zero(s.n));
    let rho_exact = if S::EXACT { Some(exact_calibration_form(s, &rho)?) } else { None };
    let gm = s.metric.to_f64();
    let mut pairs = Vec::with_capacity(s.pairs.len());
    for (i, spec) in s.pairs.iter().enumerate() {
        let pair = spec.pair.to_f64();
        let path = format!("pairs[{i}]");
        let mut report = is_calibrated(&rho, &gm, &pair, tol).map_err(|e| CliError::validation(&path, e))?;
        let exact = match &rho_exact {
            Some(r) => S::exact(r, s, i)?,
            None => None,
        };
        if let Some((ex, orientation)) = &exact {
            report.calibrated = ex.calibrated;
            report.orientation = *orientation;
        }
        let witness = match &s.spinors {
            Some(sp) if s.calibration.is_some() => {
                let oriented = if report.orientation < 0 { pair.flipped() } else { pair.clone() };
                spinor_criterion(&sp.rep, &sp.left, &sp.right, &gm, &oriented).ok()
            }
            _ => None,
        };
        let mut expectations = Vec::new();
        if let Some(c) = spec.expect.calibrated {
            expectations.push(expectation("calibrated", json!(c), json!(report.calibrated), c == report.calibrated));
        }
        if let Some(d) = spec.expect.deficit {
            let within = spec.expect.deficit_tol.unwrap_or(tol);
            let met = (report.deficit - d).abs() <= within;
            expectations.push(expectation("deficit", json!(d), json!(report.deficit), met));
        }
        pairs.push(PairReport {
            id: spec.id.clone(),
            k: pair.k(),
            pairing_value: report.pairing_value,
            bound_value: report.bound_value,
            deficit: report.deficit,
            calibrated: report.calibrated,
            orientation: report.orientation,
            witness,
            exact: exact.map(|(e, _)| e),
            expectations,
        });
    }
    pairs.sort_by(|a, b| a.id.cmp(&b.id));

    let field = match &s.field {
        None => None,
        Some(f) => {
            let (tint, tint2) = tdual_intertwine_check(&f.data).map_err(|e| CliError::validation("field", e))?;
            let mut expectations = Vec::new();
            if let Some(t) = f.expect.tint {
                expectations.push(expectation("tint", json!(t), json!(tint), t == tint));
            }
            if let Some(t) = f.expect.tint2 {
                expectations.push(expectation("tint2", json!(t), json!(tint2), t == tint2));
            }
            if f.expect.agree {
                expectations.push(expectation("agree", json!(true), json!(tint == tint2), tint == tint2));
            }
            Some(FieldReport { tint, tint2, agree: tint == tint2, expectations })
        }
    };

    let all: Vec<&ExpectationResult> =
        pairs.iter().flat_map(|p| &p.expectations).chain(field.iter().flat_map(|f| &f.expectations)).collect();
    let met = all.iter().filter(|e| e.met).count();
    let summary = ExpectationSummary { total: all.len(), met, failed: all.len() - met };
    Ok(CheckReport {
        schema_version: crate::scenario::SCHEMA_VERSION,
        scenario: s.name.clone(),
        mode: S::MODE.name(),
        n: s.n,
        tol,
        pairs,
        field,
        status: if summary.failed == 0 { "ok" } else { "expectation_failed" },
        expectations: summary,
    })
}

pub fn run_check(scenario: &AnyScenario, tol_override: Option<f64>) -> CliResult<CheckReport> {
    match scenario {
        AnyScenario::Float(s) => run(s, tol_override),
        AnyScenario::Exact(s) => run(s, tol_override),
    }
}
