//! `gencal tdualize`: the dual scenario along a direction.

use gencal_core::exterior::Form;
use gencal_core::fieldforms::{basic_split, tdualize_field};
use gencal_core::literal::format_form;
use gencal_core::tduality::{
    tdualize_dilaton, tdualize_dilaton_weight, tdualize_metric, tdualize_pair, tdualize_pair_transport,
    tdualize_spinor, DualityContext,
};

use crate::error::{CliError, CliResult};
use crate::numeric::ModeScalar;
use crate::scenario::{calibration_form, to_raw, AnyScenario, CalibrationSpec, Dilaton, FieldSpec, RawCalibration, RawScenario, Scenario};

/// Result of dualising a scenario: the new file and one log line per
/// transported pair (`id: k -> k'`).
pub struct Dualized {
    pub scenario: RawScenario,
    pub log: Vec<String>,
}

fn context<S: ModeScalar>(s: &Scenario<S>, direction: Option<usize>) -> CliResult<DualityContext<S>> {
    match (direction, &s.duality) {
        (Some(axis), _) => {
            if axis == 0 || axis > s.n {
                return Err(CliError::validation("--direction", format!("direction must lie in 1..={}", s.n)));
            }
            DualityContext::coordinate(s.n, axis - 1).map_err(|e| CliError::validation("--direction", e))
        }
        (None, Some(ctx)) => Ok(ctx.clone()),
        (None, None) => Err(CliError::validation("duality", "no duality section and no --direction given")),
    }
}

fn float_context<S: ModeScalar>(ctx: &DualityContext<S>) -> DualityContext<f64> {
    DualityContext::new(
        ctx.direction().iter().map(|v| v.as_f64()).collect(),
        ctx.theta().iter().map(|v| v.as_f64()).collect(),
    )
    .expect("valid context stays valid in floating point")
}

fn dual_field(f: &FieldSpec) -> CliResult<FieldSpec> {
    let err = |e| CliError::validation("field", e);
    let d = &f.data;
    let rho = d.rho0.add(&d.theta.wedge(&d.rho1).map_err(err)?).map_err(err)?;
    let phi = d.phi0.add(&d.theta.wedge(&d.phi1).map_err(err)?).map_err(err)?;
    let rho_t = tdualize_field(&rho, &d.theta, d.axis).map_err(err)?;
    let phi_t = tdualize_field(&phi, &d.theta, d.axis).map_err(err)?.neg();
    let (rho0, rho1) = basic_split(&rho_t, &d.theta, d.axis).map_err(err)?;
    let (phi0, phi1) = basic_split(&phi_t, &d.theta, d.axis).map_err(err)?;
    let mut data = d.clone();
    (data.rho0, data.rho1, data.phi0, data.phi1) = (rho0, rho1, phi0, phi1);
    Ok(FieldSpec { data, expect: f.expect.clone() })
}

fn dualize_typed<S: ModeScalar>(s: &Scenario<S>, direction: Option<usize>) -> CliResult<Dualized> {
    let ctx = context(s, direction)?;
    let metric = tdualize_metric(&s.metric, &ctx).map_err(|e| CliError::validation("metric", e))?;
    let dilaton = s.dilaton.as_ref().map(|d| match d {
        Dilaton::Phi(phi) => {
            Dilaton::Phi(tdualize_dilaton(*phi, &s.metric.g().map(|v| v.as_f64()), &float_context(&ctx)))
        }
        Dilaton::Weight(w) => Dilaton::Weight(tdualize_dilaton_weight(w, s.metric.g(), &ctx)),
    });

    let calibration = match &s.calibration {
        None => None,
        Some(CalibrationSpec::Form(f)) => {
            Some(CalibrationSpec::Form(tdualize_spinor(f, &ctx).map_err(|e| CliError::validation("calibration", e))?))
        }
        Some(CalibrationSpec::Fierz(_)) => {
            let rho = calibration_form(s)?.expect("fierz section present");
            let coeffs = rho
                .coeffs()
                .iter()
                .map(|c| S::from_computed(*c))
                .collect::<Option<Vec<S>>>()
                .ok_or_else(|| CliError::validation("calibration.fierz", "fierz form has non-rational coefficients"))?;
            let rho = Form::from_coeffs(s.n, coeffs).expect("same length");
            Some(CalibrationSpec::Form(tdualize_spinor(&rho, &ctx).map_err(|e| CliError::validation("calibration", e))?))
        }
    };

    let mut log = Vec::with_capacity(s.pairs.len());
    let mut pairs = Vec::with_capacity(s.pairs.len());
    for (i, spec) in s.pairs.iter().enumerate() {
        let path = format!("pairs[{i}]");
        let dual = if S::EXACT {
            tdualize_pair_transport(&spec.pair, &ctx).map_err(|e| CliError::validation(&path, e))?
        } else {
            let (_, p) = tdualize_pair(&spec.pair.to_f64(), &s.metric.to_f64(), &float_context(&ctx))
                .map_err(|e| CliError::validation(&path, e))?;
            convert_pair::<S>(&p)
        };
        log.push(format!("{}: k {} -> {}", spec.id, spec.pair.k(), dual.k()));
        let mut expect = spec.expect.clone();
        expect.deficit = None;
        expect.deficit_tol = None;
        pairs.push(crate::scenario::PairSpec { id: spec.id.clone(), pair: dual, expect });
    }

    let field = s.field.as_ref().map(dual_field).transpose()?;
    let out = Scenario {
        metric,
        dilaton,
        spinors: None,
        calibration: calibration.clone(),
        pairs,
        field,
        ..s.clone()
    };
    let raw_calibration = calibration.map(|c| match c {
        CalibrationSpec::Form(f) => RawCalibration { form: Some(format_form(&f)), fierz: None },
        CalibrationSpec::Fierz(_) => unreachable!("fierz sections are expanded"),
    });
    Ok(Dualized { scenario: to_raw(&out, raw_calibration), log })
}

fn convert_pair<S: ModeScalar>(p: &gencal_core::purespinor::IsotropicPair<f64>) -> gencal_core::purespinor::IsotropicPair<S> {
    gencal_core::purespinor::IsotropicPair::new(p.l().map(|v| S::from_f64(*v)), p.f().map(|v| S::from_f64(*v)), p.orientation())
        .expect("factorised pair is valid")
}

pub fn tdualize(scenario: &AnyScenario, direction: Option<usize>) -> CliResult<Dualized> {
    match scenario {
        AnyScenario::Float(s) => dualize_typed(s, direction),
        AnyScenario::Exact(s) => dualize_typed(s, direction),
    }
}
