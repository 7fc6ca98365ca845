//! Named physical constants with a `paper` and a `modern` value set.
//!
//! Base constants come from a TOML file (one table per constant with keys
//! `paper`, `modern`, `unit`, `source`). A handful of derived constants are
//! computed on lookup from whichever set is selected.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dimensions::{rat, DimVec, Quantity};
use crate::error::{Error, Result};
use crate::literal::parse_unit_expr;

const BUILTIN: &str = include_str!("../data/constants.toml");

/// Names computed from base constants rather than stored.
pub const DERIVED: [&str; 4] = ["hbar", "e2", "lambda_c", "alpha_em"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueSet {
    Paper,
    Modern,
}

impl ValueSet {
    pub const ALL: [ValueSet; 2] = [ValueSet::Paper, ValueSet::Modern];

    pub fn as_str(&self) -> &'static str {
        match self {
            ValueSet::Paper => "paper",
            ValueSet::Modern => "modern",
        }
    }
}

impl fmt::Display for ValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ValueSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(ValueSet::Paper),
            "modern" => Ok(ValueSet::Modern),
            _ => Err(Error::InvalidValue {
                what: "value set".into(),
                reason: format!("`{s}` is not one of paper, modern"),
            }),
        }
    }
}

/// A resolved constant in one value set.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantEntry {
    pub name: String,
    pub quantity: Quantity,
    pub value_set: ValueSet,
    pub provenance: String,
}

#[derive(Debug, Deserialize)]
struct RawFile {
    #[serde(default)]
    version: Option<String>,
    #[serde(flatten)]
    constants: BTreeMap<String, RawConstant>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConstant {
    paper: f64,
    modern: f64,
    unit: String,
    source: String,
}

#[derive(Debug, Clone)]
struct Stored {
    paper: Quantity,
    modern: Quantity,
    source: String,
}

#[derive(Debug, Clone)]
pub struct Registry {
    version: Option<String>,
    constants: BTreeMap<String, Stored>,
}

impl Registry {
    /// The registry shipped with the crate.
    pub fn builtin() -> Registry {
        Registry::from_toml_str(BUILTIN, "<builtin constants>").expect("builtin constants are valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Registry> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        Registry::from_toml_str(&text, &path.display().to_string())
    }

    pub fn from_toml_str(text: &str, origin: &str) -> Result<Registry> {
        let raw: RawFile = toml::from_str(text).map_err(|e| Error::Toml {
            path: origin.to_string(),
            message: e.to_string(),
        })?;
        let mut constants = BTreeMap::new();
        for (name, c) in raw.constants {
            if DERIVED.contains(&name.as_str()) {
                return Err(Error::Validation {
                    id: name,
                    reason: "derived constants cannot be stored".into(),
                });
            }
            let dim = parse_unit_expr(&c.unit).map_err(|e| Error::Catalog {
                id: name.clone(),
                field: "unit".into(),
                reason: e.to_string(),
            })?;
            let value = |v: f64, which: &str| {
                Quantity::new(v, dim).map_err(|e| Error::Catalog {
                    id: name.clone(),
                    field: which.into(),
                    reason: e.to_string(),
                })
            };
            let stored = Stored {
                paper: value(c.paper, "paper")?,
                modern: value(c.modern, "modern")?,
                source: c.source,
            };
            constants.insert(name, stored);
        }
        Ok(Registry {
            version: raw.version,
            constants,
        })
    }

    pub fn version(&self) -> Option<&str> {
        self.version.as_deref()
    }

    /// Stored and derived names, stored first.
    pub fn names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.constants.keys().cloned().collect();
        names.extend(DERIVED.iter().map(|s| s.to_string()));
        names
    }

    pub fn set(&self, set: ValueSet) -> Constants<'_> {
        Constants { registry: self, set }
    }

    pub fn lookup(&self, name: &str, set: ValueSet) -> Result<Quantity> {
        self.set(set).get(name)
    }

    pub fn entry(&self, name: &str, set: ValueSet) -> Result<ConstantEntry> {
        let quantity = self.lookup(name, set)?;
        let provenance = match self.constants.get(name) {
            Some(s) => s.source.clone(),
            None => format!("derived: {}", derived_formula(name)),
        };
        Ok(ConstantEntry {
            name: name.to_string(),
            quantity,
            value_set: set,
            provenance,
        })
    }

    fn stored(&self, name: &str, set: ValueSet) -> Result<Quantity> {
        let s = self
            .constants
            .get(name)
            .ok_or_else(|| Error::UnknownConstant(name.to_string()))?;
        Ok(match set {
            ValueSet::Paper => s.paper,
            ValueSet::Modern => s.modern,
        })
    }
}

fn derived_formula(name: &str) -> &'static str {
    match name {
        "hbar" => "h / (2 pi)",
        "e2" => "e^2",
        "lambda_c" => "h / (m_e c)",
        "alpha_em" => "e^2 / (hbar c)",
        _ => "",
    }
}

/// Name resolution for monomial evaluation.
pub trait Lookup {
    fn quantity(&self, name: &str) -> Result<Quantity>;
}

impl Lookup for Constants<'_> {
    fn quantity(&self, name: &str) -> Result<Quantity> {
        self.get(name)
    }
}

/// A registry bound to one value set.
#[derive(Debug, Clone, Copy)]
pub struct Constants<'a> {
    registry: &'a Registry,
    set: ValueSet,
}

impl<'a> Constants<'a> {
    pub fn value_set(&self) -> ValueSet {
        self.set
    }

    pub fn registry(&self) -> &'a Registry {
        self.registry
    }

    pub fn get(&self, name: &str) -> Result<Quantity> {
        let stored = |n: &str| self.registry.stored(n, self.set);
        match name {
            "hbar" => {
                let two_pi = Quantity::number(2.0 * std::f64::consts::PI)?;
                Ok(stored("h")? / two_pi)
            }
            "e2" => Ok(stored("e")?.pow(rat(2, 1))),
            "lambda_c" => Ok(stored("h")? / (stored("m_e")? * stored("c")?)),
            "alpha_em" => {
                let e2 = self.get("e2")?;
                let alpha = e2 / (self.get("hbar")? * stored("c")?);
                alpha.ensure_dim(DimVec::DIMENSIONLESS, "alpha_em")?;
                Ok(alpha)
            }
            _ => stored(name),
        }
    }

    /// Dimension of a constant (identical across value sets).
    pub fn dim(&self, name: &str) -> Result<DimVec> {
        Ok(self.get(name)?.dim)
    }

    pub fn h(&self) -> Result<Quantity> {
        self.get("h")
    }

    pub fn k_b(&self) -> Result<Quantity> {
        self.get("k_B")
    }

    pub fn c(&self) -> Result<Quantity> {
        self.get("c")
    }
}
