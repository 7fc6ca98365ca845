//! Registry of bound systems and their evaluation into reports.
//!
//! A catalog is a TOML file with one `[[system]]` table per entry:
//!
//! ```toml
//! [[system]]
//! id = "hydrogen"
//! description = "electron bound to a proton"
//! mass = "m_e"            # quantity literal or constant name
//! radius = "1e-10 m"
//! n = 2.0
//! cite = "..."
//! force = { constants = { e2 = "1" }, r_exp = "-2" }
//! expect = { decades = 0.0, tol = 1.0 }
//! ```
//!
//! Optional keys: `params` (name -> quantity, e.g. `k_b`, `n_e`, `k`),
//! `thermal = { output, temperature, global_time, n }`, `notes`, and within
//! `expect`: `reference` (default `h`) and `informational`.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::constants::{Constants, Registry, ValueSet};
use crate::dimensions::{parse_rational, DimVec, Quantity, Rational};
use crate::error::{Error, Result};
use crate::estimator::{alpha_direct, tremor_chain, Env, ForceLaw, TremorBreakdown};
use crate::literal::parse_quantity;
use crate::solver::symbol_dim;
use crate::thermal::{ThermalOutput, ThermalSpec};

const BUILTIN: &str = include_str!("../data/catalog.toml");

/// Pass band, in decades, for entries that do not set `tol`.
pub const DEFAULT_TOLERANCE: f64 = 2.0;

/// A quantity given either as a literal or as a registry constant, resolved
/// per value set.
#[derive(Debug, Clone, PartialEq)]
pub enum QuantitySource {
    Literal { text: String, quantity: Quantity },
    Constant(String),
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic()) && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl QuantitySource {
    pub fn parse(text: &str) -> Result<QuantitySource> {
        match parse_quantity(text) {
            Ok(quantity) => Ok(QuantitySource::Literal {
                text: text.to_string(),
                quantity,
            }),
            Err(_) if is_identifier(text.trim()) => Ok(QuantitySource::Constant(text.trim().to_string())),
            Err(e) => Err(e.into()),
        }
    }

    pub fn text(&self) -> &str {
        match self {
            QuantitySource::Literal { text, .. } => text,
            QuantitySource::Constant(name) => name,
        }
    }

    pub fn resolve(&self, consts: &Constants<'_>) -> Result<Quantity> {
        match self {
            QuantitySource::Literal { quantity, .. } => Ok(*quantity),
            QuantitySource::Constant(name) => consts.get(name),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expectation {
    /// `None` means Planck's constant.
    pub reference: Option<QuantitySource>,
    /// Expected offset from the reference, in decades.
    pub decades: f64,
    pub tol: f64,
    pub informational: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermalEntry {
    pub output: ThermalOutput,
    pub temperature: Option<QuantitySource>,
    pub global_time: Option<QuantitySource>,
    pub count_n: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    pub id: String,
    pub description: String,
    pub constituent_mass: Option<QuantitySource>,
    pub radius: Option<QuantitySource>,
    pub count_n: Option<f64>,
    pub params: BTreeMap<String, QuantitySource>,
    pub force_law: Option<ForceLaw>,
    pub thermal: Option<ThermalEntry>,
    pub expect: Option<Expectation>,
    pub citation: String,
    pub notes: Vec<String>,
}

// ---- file schema ----

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCatalog {
    #[serde(default, rename = "system")]
    systems: Vec<RawSystem>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum RawRational {
    Int(i64),
    Text(String),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawForce {
    constants: BTreeMap<String, RawRational>,
    r_exp: RawRational,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawThermal {
    output: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    temperature: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    global_time: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<f64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExpect {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reference: Option<String>,
    #[serde(default)]
    decades: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tol: Option<f64>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    informational: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    id: String,
    #[serde(default)]
    description: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mass: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<f64>,
    #[serde(default)]
    cite: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    notes: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    params: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    force: Option<RawForce>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    thermal: Option<RawThermal>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    expect: Option<RawExpect>,
}

fn field_err(id: &str, field: &str, reason: impl ToString) -> Error {
    Error::Catalog {
        id: id.to_string(),
        field: field.to_string(),
        reason: reason.to_string(),
    }
}

fn invalid(id: &str, reason: impl Into<String>) -> Error {
    Error::Validation {
        id: id.to_string(),
        reason: reason.into(),
    }
}

fn raw_rational(r: &RawRational) -> Result<Rational> {
    match r {
        RawRational::Int(i) => Ok(Rational::from_integer(*i)),
        RawRational::Text(t) => parse_rational(t),
    }
}

fn rational_to_raw(r: Rational) -> RawRational {
    RawRational::Text(r.to_string())
}

fn source(id: &str, field: &str, text: &str) -> Result<QuantitySource> {
    QuantitySource::parse(text).map_err(|e| field_err(id, field, e))
}

fn source_dim(id: &str, field: &str, src: &QuantitySource, consts: &Constants<'_>) -> Result<DimVec> {
    src.resolve(consts).map(|q| q.dim).map_err(|e| field_err(id, field, e))
}

fn check_count(id: &str, field: &str, n: Option<f64>) -> Result<()> {
    match n {
        Some(n) if !(n.is_finite() && n >= 1.0) => Err(field_err(id, field, format!("count {n} must be >= 1"))),
        _ => Ok(()),
    }
}

fn convert(raw: RawSystem, registry: &Registry) -> Result<SystemSpec> {
    let id = raw.id.clone();
    if id.is_empty()
        || !id
            .chars()
            .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '-')
    {
        return Err(field_err(&id, "id", "ids use lowercase letters, digits and `-`"));
    }
    // dimensions do not depend on the value set
    let consts = registry.set(ValueSet::Paper);

    let mass = raw.mass.as_deref().map(|t| source(&id, "mass", t)).transpose()?;
    let radius = raw.radius.as_deref().map(|t| source(&id, "radius", t)).transpose()?;
    if let Some(m) = &mass {
        let d = source_dim(&id, "mass", m, &consts)?;
        if d != DimVec::MASS {
            return Err(field_err(&id, "mass", format!("expected a mass, found {d}")));
        }
    }
    if let Some(r) = &radius {
        let d = source_dim(&id, "radius", r, &consts)?;
        if d != DimVec::LENGTH {
            return Err(field_err(&id, "radius", format!("expected a length, found {d}")));
        }
    }
    check_count(&id, "n", raw.n)?;

    let mut params = BTreeMap::new();
    let mut env = Env::new(consts);
    for (name, text) in &raw.params {
        let field = format!("params.{name}");
        let src = source(&id, &field, text)?;
        let q = src.resolve(&consts).map_err(|e| field_err(&id, &field, e))?;
        if let Some(expected) = symbol_dim(name) {
            if expected != q.dim {
                return Err(field_err(&id, &field, format!("expected {expected}, found {}", q.dim)));
            }
        }
        env = env.with(name.clone(), q);
        params.insert(name.clone(), src);
    }

    let force_law = match &raw.force {
        None => None,
        Some(f) => {
            let mut constants = Vec::new();
            for (name, e) in &f.constants {
                let e = raw_rational(e).map_err(|err| field_err(&id, &format!("force.constants.{name}"), err))?;
                constants.push((name.clone(), e));
            }
            let r_exp = raw_rational(&f.r_exp).map_err(|err| field_err(&id, "force.r_exp", err))?;
            let law = ForceLaw::checked(constants, r_exp, &env).map_err(|e| field_err(&id, "force", e))?;
            if mass.is_none() || radius.is_none() {
                return Err(invalid(&id, "a force law needs both `mass` and `radius`"));
            }
            Some(law)
        }
    };

    let thermal = match &raw.thermal {
        None => None,
        Some(t) => {
            let output: ThermalOutput = t.output.parse().map_err(|e| field_err(&id, "thermal.output", e))?;
            let temperature = t
                .temperature
                .as_deref()
                .map(|s| source(&id, "thermal.temperature", s))
                .transpose()?;
            let global_time = t
                .global_time
                .as_deref()
                .map(|s| source(&id, "thermal.global_time", s))
                .transpose()?;
            check_count(&id, "thermal.n", t.n)?;
            Some(ThermalEntry {
                output,
                temperature,
                global_time,
                count_n: t.n,
            })
        }
    };

    if force_law.is_none() && thermal.is_none() {
        return Err(invalid(&id, "entry needs a `force` law or a `thermal` table"));
    }

    let expect = match &raw.expect {
        None => None,
        Some(e) => {
            let tol = e.tol.unwrap_or(DEFAULT_TOLERANCE);
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(field_err(&id, "expect.tol", "tolerance must be positive"));
            }
            let reference = e
                .reference
                .as_deref()
                .map(|s| source(&id, "expect.reference", s))
                .transpose()?;
            let output_dim = match (&force_law, &thermal) {
                (Some(_), _) => DimVec::ACTION,
                (None, Some(t)) => t.output.dim(),
                (None, None) => unreachable!(),
            };
            let ref_dim = match &reference {
                Some(r) => source_dim(&id, "expect.reference", r, &consts)?,
                None => DimVec::ACTION,
            };
            if ref_dim != output_dim {
                return Err(field_err(
                    &id,
                    "expect.reference",
                    format!("reference has dimension {ref_dim}, output has {output_dim}"),
                ));
            }
            Some(Expectation {
                reference,
                decades: e.decades,
                tol,
                informational: e.informational,
            })
        }
    };

    Ok(SystemSpec {
        id,
        description: raw.description,
        constituent_mass: mass,
        radius,
        count_n: raw.n,
        params,
        force_law,
        thermal,
        expect,
        citation: raw.cite,
        notes: raw.notes,
    })
}

fn to_raw(spec: &SystemSpec) -> RawSystem {
    RawSystem {
        id: spec.id.clone(),
        description: spec.description.clone(),
        mass: spec.constituent_mass.as_ref().map(|s| s.text().to_string()),
        radius: spec.radius.as_ref().map(|s| s.text().to_string()),
        n: spec.count_n,
        cite: spec.citation.clone(),
        notes: spec.notes.clone(),
        params: spec
            .params
            .iter()
            .map(|(k, v)| (k.clone(), v.text().to_string()))
            .collect(),
        force: spec.force_law.as_ref().map(|law| RawForce {
            constants: law
                .constants()
                .iter()
                .map(|(n, e)| (n.clone(), rational_to_raw(*e)))
                .collect(),
            r_exp: rational_to_raw(law.radius_exponent()),
        }),
        thermal: spec.thermal.as_ref().map(|t| RawThermal {
            output: t.output.to_string(),
            temperature: t.temperature.as_ref().map(|s| s.text().to_string()),
            global_time: t.global_time.as_ref().map(|s| s.text().to_string()),
            n: t.count_n,
        }),
        expect: spec.expect.as_ref().map(|e| RawExpect {
            reference: e.reference.as_ref().map(|s| s.text().to_string()),
            decades: e.decades,
            tol: Some(e.tol),
            informational: e.informational,
        }),
    }
}

/// Parses and validates catalog text. Constant names are checked against `registry`.
pub fn parse_catalog(text: &str, origin: &str, registry: &Registry) -> Result<Vec<SystemSpec>> {
    let raw: RawCatalog = toml::from_str(text).map_err(|e| Error::Toml {
        path: origin.to_string(),
        message: e.to_string(),
    })?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(raw.systems.len());
    for system in raw.systems {
        if !seen.insert(system.id.clone()) {
            return Err(invalid(&system.id, "duplicate id"));
        }
        out.push(convert(system, registry)?);
    }
    Ok(out)
}

pub fn load_catalog(path: impl AsRef<Path>, registry: &Registry) -> Result<Vec<SystemSpec>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_catalog(&text, &path.display().to_string(), registry)
}

/// The catalog shipped with the crate.
pub fn builtin_catalog(registry: &Registry) -> Result<Vec<SystemSpec>> {
    parse_catalog(BUILTIN, "<builtin catalog>", registry)
}

pub fn catalog_to_toml(specs: &[SystemSpec]) -> String {
    let raw = RawCatalog {
        systems: specs.iter().map(to_raw).collect(),
    };
    toml::to_string(&raw).expect("catalog schema serializes")
}

pub fn save_catalog(path: impl AsRef<Path>, specs: &[SystemSpec]) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, catalog_to_toml(specs)).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

// ---- evaluation ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Pass,
    Fail,
    Informational,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Informational => "informational",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub system_id: String,
    pub value_set: ValueSet,
    /// `action` for force-law entries, else the thermal output name.
    pub output_kind: String,
    pub value: Option<Quantity>,
    pub reference_label: String,
    pub reference: Option<Quantity>,
    pub decades: Option<f64>,
    /// Expected offset and tolerance after any override.
    pub expected: Option<(f64, f64)>,
    pub verdict: Verdict,
    pub breakdown: Option<TremorBreakdown>,
    /// Thermal estimate of an entry that also has a force law.
    pub thermal: Option<(ThermalOutput, Quantity)>,
    pub notes: Vec<String>,
    pub error: Option<String>,
}

fn resolve_opt(src: &Option<QuantitySource>, consts: &Constants<'_>) -> Result<Option<Quantity>> {
    src.as_ref().map(|s| s.resolve(consts)).transpose()
}

fn thermal_spec(spec: &SystemSpec, t: &ThermalEntry, consts: &Constants<'_>) -> Result<ThermalSpec> {
    Ok(ThermalSpec {
        temperature: resolve_opt(&t.temperature, consts)?,
        global_time: resolve_opt(&t.global_time, consts)?,
        count_n: t.count_n.or(spec.count_n),
        radius: resolve_opt(&spec.radius, consts)?,
        constituent_mass: resolve_opt(&spec.constituent_mass, consts)?,
    })
}

/// Evaluates one entry. `tolerance_override` replaces every stored tolerance.
pub fn evaluate(
    spec: &SystemSpec,
    registry: &Registry,
    set: ValueSet,
    tolerance_override: Option<f64>,
) -> Result<EstimateReport> {
    let consts = registry.set(set);
    let mut env = Env::new(consts);
    for (name, src) in &spec.params {
        env = env.with(name.clone(), src.resolve(&consts)?);
    }

    let mut breakdown = None;
    let mut thermal = None;
    let (output_kind, value) = match (&spec.force_law, &spec.thermal) {
        (Some(law), t) => {
            let missing = |field| Error::MissingField {
                field,
                operation: "force-law estimate",
            };
            let m = resolve_opt(&spec.constituent_mass, &consts)?.ok_or_else(|| missing("mass"))?;
            let r = resolve_opt(&spec.radius, &consts)?.ok_or_else(|| missing("radius"))?;
            let direct = alpha_direct(m, r, law, &env)?;
            let alpha = match spec.count_n {
                Some(n) => {
                    let b = tremor_chain(m, r, law, n, &env)?;
                    let a = b.action_alpha;
                    breakdown = Some(b);
                    a
                }
                None => direct,
            };
            if let Some(t) = t {
                let ts = thermal_spec(spec, t, &consts)?;
                thermal = Some((t.output, ts.evaluate(t.output, &consts)?));
            }
            ("action".to_string(), alpha)
        }
        (None, Some(t)) => {
            let ts = thermal_spec(spec, t, &consts)?;
            (t.output.to_string(), ts.evaluate(t.output, &consts)?)
        }
        (None, None) => return Err(invalid(&spec.id, "entry has neither force law nor thermal table")),
    };

    let (reference_label, reference) = match spec.expect.as_ref().and_then(|e| e.reference.as_ref()) {
        Some(src) => (src.text().to_string(), src.resolve(&consts)?),
        None => ("h".to_string(), consts.h()?),
    };
    let decades = value.decades_from(&reference)?;

    let mut notes = spec.notes.clone();
    let (expected, verdict) = match &spec.expect {
        None => (None, Verdict::Informational),
        Some(e) => {
            let tol = tolerance_override.unwrap_or(e.tol);
            let within = (decades - e.decades).abs() <= tol;
            let verdict = if e.informational {
                notes.push(format!(
                    "offset {decades:+.2} decades from {reference_label} is {} the stored expectation {:+.2} ± {tol:.2}; reported, not judged",
                    if within { "within" } else { "outside" },
                    e.decades
                ));
                Verdict::Informational
            } else if within {
                Verdict::Pass
            } else {
                Verdict::Fail
            };
            (Some((e.decades, tol)), verdict)
        }
    };

    Ok(EstimateReport {
        system_id: spec.id.clone(),
        value_set: set,
        output_kind,
        value: Some(value),
        reference_label,
        reference: Some(reference),
        decades: Some(decades),
        expected,
        verdict,
        breakdown,
        thermal,
        notes,
        error: None,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckTable {
    pub value_set: ValueSet,
    pub reports: Vec<EstimateReport>,
}

impl CheckTable {
    pub fn count(&self, verdict: Verdict) -> usize {
        self.reports.iter().filter(|r| r.verdict == verdict).count()
    }

    pub fn all_ok(&self) -> bool {
        self.count(Verdict::Fail) == 0
    }
}

/// Evaluates every entry, ordered by id. Evaluation errors become failed reports.
pub fn check_all(
    catalog: &[SystemSpec],
    registry: &Registry,
    set: ValueSet,
    tolerance_override: Option<f64>,
) -> CheckTable {
    let mut specs: Vec<&SystemSpec> = catalog.iter().collect();
    specs.sort_by(|a, b| a.id.cmp(&b.id));
    let reports = specs
        .into_iter()
        .map(|spec| {
            evaluate(spec, registry, set, tolerance_override).unwrap_or_else(|e| EstimateReport {
                system_id: spec.id.clone(),
                value_set: set,
                output_kind: String::new(),
                value: None,
                reference_label: String::new(),
                reference: None,
                decades: None,
                expected: None,
                verdict: Verdict::Fail,
                breakdown: None,
                thermal: None,
                notes: spec.notes.clone(),
                error: Some(e.to_string()),
            })
        })
        .collect();
    CheckTable {
        value_set: set,
        reports,
    }
}
