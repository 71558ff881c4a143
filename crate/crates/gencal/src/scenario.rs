//! Scenario files: JSON schema, validation and canonical output.

use std::collections::BTreeSet;

use gencal_core::dirac::{DiracSpinor, GammaRep, StructureKind};
use gencal_core::exterior::{Form, Parity};
use gencal_core::fieldforms::{format_poly_form, parse_poly_form, IntertwineData, PolyForm};
use gencal_core::genmetric::GeneralisedMetric;
use gencal_core::literal::{format_form, parse_form};
use gencal_core::poly::{format_poly, parse_poly, MAX_VARS};
use gencal_core::purespinor::IsotropicPair;
use gencal_core::tduality::DualityContext;
use gencal_core::{CoreError, Matrix, Rational};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};
use crate::numeric::{Mode, ModeScalar};

pub const SCHEMA_VERSION: u32 = 1;

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawScenario {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    pub metric: RawMetric,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dilaton: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dilaton_weight: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spinors: Option<RawSpinors>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibration: Option<RawCalibration>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<RawPair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duality: Option<RawDuality>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<RawField>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMetric {
    /// Row-major `n × n`.
    pub g: Vec<Value>,
    /// Strict upper triangle (`n(n−1)/2` entries) or a full row-major matrix.
    #[serde(rename = "B", default)]
    pub b: Vec<Value>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpinors {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub left: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub right: Option<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCalibration {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<String>,
    /// `"even"` or `"odd"`: the real fierz bilinear of the spinor section.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fierz: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPairExpect {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub calibrated: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deficit: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deficit_tol: Option<f64>,
}

fn default_orientation() -> i64 {
    1
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPair {
    pub id: String,
    /// Column list: `k` vectors of length `n`.
    #[serde(rename = "L")]
    pub l: Vec<Vec<Value>>,
    /// Strict upper triangle in `L`-indices.
    #[serde(rename = "F", default)]
    pub f: Vec<Value>,
    #[serde(default = "default_orientation")]
    pub orientation: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<RawPairExpect>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDuality {
    pub direction: Vec<Value>,
    pub theta: Vec<Value>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawFieldExpect {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tint: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tint2: Option<bool>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub agree: bool,
}

fn zero_literal() -> String {
    "0".into()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawField {
    /// One-based coordinate index of the duality direction `∂_axis`.
    pub axis: usize,
    pub theta: String,
    #[serde(default = "zero_literal")]
    pub dilaton: String,
    #[serde(default = "zero_literal")]
    pub rho0: String,
    #[serde(default = "zero_literal")]
    pub rho1: String,
    #[serde(default = "zero_literal")]
    pub phi0: String,
    #[serde(default = "zero_literal")]
    pub phi1: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<RawFieldExpect>,
}

/// Dilaton given either as `φ` (float mode) or as the weight `e^{−2φ}`.
#[derive(Clone, Debug, PartialEq)]
pub enum Dilaton<S> {
    Phi(f64),
    Weight(S),
}

impl<S: ModeScalar> Dilaton<S> {
    pub fn phi(&self) -> f64 {
        match self {
            Dilaton::Phi(p) => *p,
            Dilaton::Weight(w) => -0.5 * w.as_f64().ln(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SpinorSpec {
    pub kind: Option<StructureKind>,
    pub rep: GammaRep,
    pub left: DiracSpinor,
    pub right: DiracSpinor,
    /// `true` when the amplitudes were given in the file.
    pub explicit: bool,
}

#[derive(Clone, Debug)]
pub enum CalibrationSpec<S> {
    Form(Form<S>),
    Fierz(Parity),
}

#[derive(Clone, Debug)]
pub struct PairSpec<S> {
    pub id: String,
    pub pair: IsotropicPair<S>,
    pub expect: RawPairExpect,
}

#[derive(Clone, Debug)]
pub struct FieldSpec {
    pub data: IntertwineData,
    pub expect: RawFieldExpect,
}

#[derive(Clone, Debug)]
pub struct Scenario<S> {
    pub name: Option<String>,
    pub n: usize,
    pub mode_declared: bool,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub metric: GeneralisedMetric<S>,
    pub dilaton: Option<Dilaton<S>>,
    pub spinors: Option<SpinorSpec>,
    pub calibration: Option<CalibrationSpec<S>>,
    pub pairs: Vec<PairSpec<S>>,
    pub duality: Option<DualityContext<S>>,
    pub field: Option<FieldSpec>,
}

#[derive(Clone, Debug)]
pub enum AnyScenario {
    Float(Scenario<f64>),
    Exact(Scenario<Rational>),
}

/// Reads JSON text into the raw schema. Syntax errors are parse errors;
/// shape errors (wrong types, unknown keys) are validation errors.
pub fn parse_raw(text: &str) -> CliResult<RawScenario> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::parse("$", e))?;
    let raw: RawScenario = serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        CliError::validation(path, e.into_inner())
    })?;
    if raw.schema_version != SCHEMA_VERSION {
        return Err(CliError::validation(
            "schema_version",
            format!("unsupported version {}, expected {SCHEMA_VERSION}", raw.schema_version),
        ));
    }
    Ok(raw)
}

/// Loads a scenario in the mode given by `override_mode`, else by the file,
/// else float.
pub fn load(text: &str, override_mode: Option<Mode>) -> CliResult<AnyScenario> {
    let raw = parse_raw(text)?;
    match override_mode.or(raw.mode).unwrap_or(Mode::Float) {
        Mode::Float => Ok(AnyScenario::Float(validate(&raw)?)),
        Mode::Exact => Ok(AnyScenario::Exact(validate(&raw)?)),
    }
}

fn scalars<S: ModeScalar>(values: &[Value], path: &str) -> CliResult<Vec<S>> {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| S::from_json(v).map_err(|m| CliError::validation(format!("{path}[{i}]"), m)))
        .collect()
}

fn core_validation(path: &str) -> impl Fn(CoreError) -> CliError + '_ {
    move |e| match e {
        CoreError::Parse(m) => CliError::parse(path, m),
        other => CliError::validation(path, other),
    }
}

fn parse_kind(text: &str) -> CliResult<StructureKind> {
    match text {
        "G2" => Ok(StructureKind::G2),
        "Spin7" => Ok(StructureKind::Spin7),
        "SU3" => Ok(StructureKind::SU3),
        other => Err(CliError::validation("spinors.kind", format!("unknown kind `{other}` (G2, Spin7, SU3)"))),
    }
}

fn load_spinors(raw: &RawSpinors, n: usize) -> CliResult<SpinorSpec> {
    let rep = GammaRep::new(n).map_err(core_validation("spinors"))?;
    let kind = raw.kind.as_deref().map(parse_kind).transpose()?;
    if let Some(k) = kind {
        if k.dimension() != n {
            return Err(CliError::validation("spinors.kind", format!("{} needs n = {}", k.name(), k.dimension())));
        }
    }
    let read = |values: &Option<Vec<f64>>, path: &str| -> CliResult<Option<DiracSpinor>> {
        let Some(values) = values else { return Ok(None) };
        let expected = 2 * rep.spinor_dim();
        if values.len() != expected {
            return Err(CliError::validation(path, format!("expected {expected} interleaved values, found {}", values.len())));
        }
        let amplitudes = DiracSpinor::from_interleaved(values).map_err(core_validation(path))?;
        let psi = rep.spinor(amplitudes).map_err(core_validation(path))?;
        if (psi.norm() - 1.0).abs() > 1e-9 {
            return Err(CliError::validation(path, format!("spinor norm {} is not 1", psi.norm())));
        }
        Ok(Some(psi))
    };
    let left = read(&raw.left, "spinors.left")?;
    let right = read(&raw.right, "spinors.right")?;
    match (left, right, kind) {
        (Some(left), Some(right), kind) => Ok(SpinorSpec { kind, rep, left, right, explicit: true }),
        (None, None, Some(kind)) => {
            let psi = rep.canonical_spinor(kind).map_err(core_validation("spinors.kind"))?;
            let left = if kind == StructureKind::SU3 { rep.charge_conj(&psi) } else { psi.clone() };
            Ok(SpinorSpec { kind: Some(kind), rep, left, right: psi, explicit: false })
        }
        _ => Err(CliError::validation("spinors", "give both `left` and `right`, or only `kind`")),
    }
}

fn load_field(raw: &RawField, n: usize) -> CliResult<FieldSpec> {
    if n > MAX_VARS {
        return Err(CliError::validation("field", format!("field sections support n ≤ {MAX_VARS}")));
    }
    if raw.axis == 0 || raw.axis > n {
        return Err(CliError::validation("field.axis", format!("axis must lie in 1..={n}")));
    }
    let form = |text: &str, key: &str| -> CliResult<PolyForm> {
        parse_poly_form(text, n).map_err(core_validation(&format!("field.{key}")))
    };
    let data = IntertwineData {
        rho0: form(&raw.rho0, "rho0")?,
        rho1: form(&raw.rho1, "rho1")?,
        phi0: form(&raw.phi0, "phi0")?,
        phi1: form(&raw.phi1, "phi1")?,
        dilaton: parse_poly(&raw.dilaton, n).map_err(core_validation("field.dilaton"))?,
        theta: form(&raw.theta, "theta")?,
        axis: raw.axis - 1,
    };
    gencal_core::fieldforms::tdual_intertwine_check(&data).map_err(core_validation("field"))?;
    Ok(FieldSpec { data, expect: raw.expect.clone().unwrap_or_default() })
}

fn load_pair<S: ModeScalar>(raw: &RawPair, n: usize, index: usize) -> CliResult<PairSpec<S>> {
    let base = format!("pairs[{index}]");
    let k = raw.l.len();
    if k > n {
        return Err(CliError::validation(format!("{base}.L"), format!("{k} columns exceed n = {n}")));
    }
    let mut columns = Vec::with_capacity(k);
    for (a, col) in raw.l.iter().enumerate() {
        let path = format!("{base}.L[{a}]");
        if col.len() != n {
            return Err(CliError::validation(path, format!("column has {} entries, expected {n}", col.len())));
        }
        columns.push(scalars::<S>(col, &path)?);
    }
    let l = Matrix::from_columns(n, &columns);
    let f_path = format!("{base}.F");
    let f_values = scalars::<S>(&raw.f, &f_path)?;
    let f = if f_values.is_empty() {
        Matrix::zeros(k, k)
    } else {
        Matrix::skew_from_upper(k, &f_values).map_err(core_validation(&f_path))?
    };
    let orientation = match raw.orientation {
        1 => 1,
        -1 => -1,
        other => return Err(CliError::validation(format!("{base}.orientation"), format!("{other} is not ±1"))),
    };
    let pair = IsotropicPair::new(l, f, orientation).map_err(core_validation(&format!("{base}.L")))?;
    Ok(PairSpec { id: raw.id.clone(), pair, expect: raw.expect.clone().unwrap_or_default() })
}

pub fn validate<S: ModeScalar>(raw: &RawScenario) -> CliResult<Scenario<S>> {
    let n = raw.n;
    if !(2..=gencal_core::exterior::MAX_DIM).contains(&n) {
        return Err(CliError::validation("n", format!("n = {n} outside 2..=12")));
    }
    if let Some(tol) = raw.tol {
        if !(tol.is_finite() && tol >= 0.0) {
            return Err(CliError::validation("tol", "tolerance must be finite and non-negative"));
        }
    }
    if raw.metric.g.len() != n * n {
        return Err(CliError::validation("metric.g", format!("expected {} entries, found {}", n * n, raw.metric.g.len())));
    }
    let g = Matrix::from_row_major(n, n, scalars::<S>(&raw.metric.g, "metric.g")?).map_err(core_validation("metric.g"))?;
    let b_values = scalars::<S>(&raw.metric.b, "metric.B")?;
    let b = if b_values.is_empty() {
        Matrix::zeros(n, n)
    } else if b_values.len() == n * (n - 1) / 2 {
        Matrix::skew_from_upper(n, &b_values).map_err(core_validation("metric.B"))?
    } else if b_values.len() == n * n {
        let m = Matrix::from_row_major(n, n, b_values).map_err(core_validation("metric.B"))?;
        let tol = if S::EXACT { 0.0 } else { 1e-12 * m.max_abs().max(1.0) };
        if !m.is_skew(tol) {
            return Err(CliError::validation("metric.B", "matrix is not skew-symmetric"));
        }
        m
    } else {
        return Err(CliError::validation(
            "metric.B",
            format!("expected {} (strict upper triangle) or {} entries, found {}", n * (n - 1) / 2, n * n, b_values.len()),
        ));
    };
    let metric = GeneralisedMetric::build(g, b).map_err(|e| match e {
        CoreError::NotSkew => CliError::validation("metric.B", e),
        other => CliError::validation("metric.g", other),
    })?;

    let dilaton = match (&raw.dilaton, &raw.dilaton_weight) {
        (Some(_), Some(_)) => return Err(CliError::validation("dilaton", "give `dilaton` or `dilaton_weight`, not both")),
        (Some(_), None) if S::EXACT => {
            return Err(CliError::validation("dilaton", "exact mode takes the dilaton as `dilaton_weight` = e^(-2 phi)"))
        }
        (Some(v), None) => Some(Dilaton::Phi(f64::from_json(v).map_err(|m| CliError::validation("dilaton", m))?)),
        (None, Some(v)) => {
            let w = S::from_json(v).map_err(|m| CliError::validation("dilaton_weight", m))?;
            if w <= S::zero() {
                return Err(CliError::validation("dilaton_weight", "weight must be positive"));
            }
            Some(Dilaton::Weight(w))
        }
        (None, None) => None,
    };

    let spinors = raw.spinors.as_ref().map(|s| load_spinors(s, n)).transpose()?;
    let calibration = match &raw.calibration {
        None => None,
        Some(RawCalibration { form: Some(text), fierz: None }) => {
            Some(CalibrationSpec::Form(parse_form::<S>(text, n).map_err(core_validation("calibration.form"))?))
        }
        Some(RawCalibration { form: None, fierz: Some(which) }) => {
            let parity = match which.as_str() {
                "even" => Parity::Even,
                "odd" => Parity::Odd,
                other => return Err(CliError::validation("calibration.fierz", format!("`{other}` is not even/odd"))),
            };
            if spinors.is_none() {
                return Err(CliError::validation("calibration.fierz", "fierz calibration needs a `spinors` section"));
            }
            Some(CalibrationSpec::Fierz(parity))
        }
        Some(_) => return Err(CliError::validation("calibration", "give exactly one of `form` and `fierz`")),
    };

    let mut ids = BTreeSet::new();
    let mut pairs = Vec::with_capacity(raw.pairs.len());
    for (i, p) in raw.pairs.iter().enumerate() {
        if !ids.insert(p.id.clone()) {
            return Err(CliError::validation(format!("pairs[{i}].id"), format!("duplicate id `{}`", p.id)));
        }
        let spec = load_pair::<S>(p, n, i)?;
        if let Some(c) = &calibration {
            let (parity, zero) = match c {
                CalibrationSpec::Form(f) => (f.parity(), f.is_zero()),
                CalibrationSpec::Fierz(p) => (*p, false),
            };
            let needed = gencal_core::calibration::required_parity(spec.pair.k());
            if parity != needed && !zero {
                return Err(CliError::validation(
                    format!("pairs[{i}].L"),
                    format!("{}-dimensional pairs need a calibration form of parity {needed:?}", spec.pair.k()),
                ));
            }
        }
        pairs.push(spec);
    }

    let duality = match &raw.duality {
        None => None,
        Some(d) => {
            let x = scalars::<S>(&d.direction, "duality.direction")?;
            let t = scalars::<S>(&d.theta, "duality.theta")?;
            if x.len() != n || t.len() != n {
                return Err(CliError::validation("duality", format!("direction and theta need {n} entries")));
            }
            Some(DualityContext::new(x, t).map_err(|_| CliError::validation("duality.theta", "theta(direction) must equal 1"))?)
        }
    };
    let field = raw.field.as_ref().map(|f| load_field(f, n)).transpose()?;

    Ok(Scenario {
        name: raw.name.clone(),
        n,
        mode_declared: raw.mode.is_some(),
        seed: raw.seed,
        tol: raw.tol,
        metric,
        dilaton,
        spinors,
        calibration,
        pairs,
        duality,
        field,
    })
}

/// Real calibration form of the scenario, in standard coordinates.
pub fn calibration_form<S: ModeScalar>(s: &Scenario<S>) -> CliResult<Option<Form<f64>>> {
    match &s.calibration {
        None => Ok(None),
        Some(CalibrationSpec::Form(f)) => Ok(Some(f.map(|c| c.as_f64()))),
        Some(CalibrationSpec::Fierz(parity)) => {
            let sp = s.spinors.as_ref().expect("validated");
            let k = if *parity == Parity::Even { 0 } else { 1 };
            let gm = s.metric.to_f64();
            gencal_core::calibration::calibration_form(&sp.rep, &sp.left, &sp.right, &gm, k)
                .map(Some)
                .map_err(core_validation("calibration.fierz"))
        }
    }
}

fn row_major<S: ModeScalar>(m: &Matrix<S>) -> Vec<Value> {
    m.data().iter().map(ModeScalar::to_json).collect()
}

fn json_vec<S: ModeScalar>(v: &[S]) -> Vec<Value> {
    v.iter().map(ModeScalar::to_json).collect()
}

/// Writes a scenario back into the schema. `calibration` overrides the
/// stored calibration section (used when a fierz form has been expanded).
pub fn to_raw<S: ModeScalar>(s: &Scenario<S>, calibration: Option<RawCalibration>) -> RawScenario {
    let (dilaton, dilaton_weight) = match &s.dilaton {
        None => (None, None),
        Some(Dilaton::Phi(p)) => (Some(p.to_json()), None),
        Some(Dilaton::Weight(w)) => (None, Some(w.to_json())),
    };
    let spinors = s.spinors.as_ref().map(|sp| RawSpinors {
        kind: sp.kind.map(|k| k.name().to_string()),
        left: sp.explicit.then(|| sp.left.to_interleaved()),
        right: sp.explicit.then(|| sp.right.to_interleaved()),
    });
    let calibration = calibration.or_else(|| {
        s.calibration.as_ref().map(|c| match c {
            CalibrationSpec::Form(f) => RawCalibration { form: Some(format_form(f)), fierz: None },
            CalibrationSpec::Fierz(p) => RawCalibration {
                form: None,
                fierz: Some(if *p == Parity::Even { "even".into() } else { "odd".into() }),
            },
        })
    });
    let pairs = s
        .pairs
        .iter()
        .map(|p| RawPair {
            id: p.id.clone(),
            l: (0..p.pair.k()).map(|a| json_vec(&p.pair.l().column(a))).collect(),
            f: json_vec(&p.pair.f().upper_triangle()),
            orientation: p.pair.orientation() as i64,
            expect: (p.expect != RawPairExpect::default()).then(|| p.expect.clone()),
        })
        .collect();
    let field = s.field.as_ref().map(|f| RawField {
        axis: f.data.axis + 1,
        theta: format_poly_form(&f.data.theta),
        dilaton: format_poly(&f.data.dilaton),
        rho0: format_poly_form(&f.data.rho0),
        rho1: format_poly_form(&f.data.rho1),
        phi0: format_poly_form(&f.data.phi0),
        phi1: format_poly_form(&f.data.phi1),
        expect: (f.expect != RawFieldExpect::default()).then(|| f.expect.clone()),
    });
    RawScenario {
        schema_version: SCHEMA_VERSION,
        name: s.name.clone(),
        n: s.n,
        mode: s.mode_declared.then_some(S::MODE),
        seed: s.seed,
        tol: s.tol,
        metric: RawMetric { g: row_major(s.metric.g()), b: json_vec(&s.metric.b().upper_triangle()) },
        dilaton,
        dilaton_weight,
        spinors,
        calibration,
        pairs,
        duality: s.duality.as_ref().map(|d| RawDuality { direction: json_vec(d.direction()), theta: json_vec(d.theta()) }),
        field,
    }
}

/// Canonical text: two-space indented JSON with a trailing newline.
pub fn to_text(raw: &RawScenario) -> String {
    let mut text = serde_json::to_string_pretty(raw).expect("scenario serialises");
    text.push('\n');
    text
}
