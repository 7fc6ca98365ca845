//! Exact dimension algebra over the base dimensions M, L, T, Θ and
//! log-magnitude quantities built on top of it.
//!
//! Electric charge is not a base dimension: in Gaussian units a charge has
//! dimension M^(1/2) L^(3/2) T^(-1), so that e²/R² is a force without any
//! permittivity constant.

use std::fmt;
use std::ops::{Div, Mul};

use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub use num_rational::Rational64 as Rational;

/// Shorthand for building a [`Rational`].
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(numer, denom)
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let invalid = |reason: &str| Error::InvalidValue {
        what: format!("rational `{text}`"),
        reason: reason.to_string(),
    };
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: i64 = num.parse().map_err(|_| invalid("bad numerator"))?;
    let den: i64 = den.parse().map_err(|_| invalid("bad denominator"))?;
    if den == 0 {
        return Err(invalid("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

/// Always `num/den`, including integers (`-1/1`).
pub fn fraction_string(r: Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

const fn int(n: i64) -> Rational {
    Rational::new_raw(n, 1)
}

/// Exponents of mass, length, time and temperature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct DimVec {
    pub mass: Rational,
    pub length: Rational,
    pub time: Rational,
    pub temperature: Rational,
}

impl DimVec {
    pub const DIMENSIONLESS: DimVec = DimVec::ints(0, 0, 0, 0);
    pub const MASS: DimVec = DimVec::ints(1, 0, 0, 0);
    pub const LENGTH: DimVec = DimVec::ints(0, 1, 0, 0);
    pub const TIME: DimVec = DimVec::ints(0, 0, 1, 0);
    pub const TEMPERATURE: DimVec = DimVec::ints(0, 0, 0, 1);
    pub const VELOCITY: DimVec = DimVec::ints(0, 1, -1, 0);
    pub const FORCE: DimVec = DimVec::ints(1, 1, -2, 0);
    pub const ENERGY: DimVec = DimVec::ints(1, 2, -2, 0);
    pub const ACTION: DimVec = DimVec::ints(1, 2, -1, 0);
    /// Force per unit length (elastic constants).
    pub const STIFFNESS: DimVec = DimVec::ints(1, 0, -2, 0);
    pub const NUMBER_DENSITY: DimVec = DimVec::ints(0, -3, 0, 0);
    /// Gaussian charge, M^(1/2) L^(3/2) T^(-1).
    pub const CHARGE: DimVec = DimVec {
        mass: Rational::new_raw(1, 2),
        length: Rational::new_raw(3, 2),
        time: int(-1),
        temperature: int(0),
    };

    pub const fn ints(mass: i64, length: i64, time: i64, temperature: i64) -> Self {
        DimVec {
            mass: int(mass),
            length: int(length),
            time: int(time),
            temperature: int(temperature),
        }
    }

    pub fn new(mass: Rational, length: Rational, time: Rational, temperature: Rational) -> Self {
        DimVec {
            mass,
            length,
            time,
            temperature,
        }
    }

    /// Looks up a dimension by a common name (`action`, `force`, ...).
    pub fn named(name: &str) -> Option<DimVec> {
        let dim = match name {
            "dimensionless" | "1" => Self::DIMENSIONLESS,
            "mass" => Self::MASS,
            "length" => Self::LENGTH,
            "time" => Self::TIME,
            "temperature" => Self::TEMPERATURE,
            "velocity" => Self::VELOCITY,
            "force" => Self::FORCE,
            "energy" | "work" => Self::ENERGY,
            "action" => Self::ACTION,
            "stiffness" => Self::STIFFNESS,
            "charge" => Self::CHARGE,
            _ => return None,
        };
        Some(dim)
    }

    pub fn exponents(&self) -> [Rational; 4] {
        [self.mass, self.length, self.time, self.temperature]
    }

    pub fn from_exponents(e: [Rational; 4]) -> Self {
        DimVec::new(e[0], e[1], e[2], e[3])
    }

    pub fn is_dimensionless(&self) -> bool {
        self.exponents().iter().all(Zero::is_zero)
    }

    pub fn pow(self, r: Rational) -> DimVec {
        DimVec::from_exponents(self.exponents().map(|e| e * r))
    }

    pub fn recip(self) -> DimVec {
        self.pow(-Rational::one())
    }

    /// Renders as a unit expression over kg, m, s, K (empty when dimensionless).
    pub fn unit_string(&self) -> String {
        const TOKENS: [&str; 4] = ["kg", "m", "s", "K"];
        let mut parts = Vec::new();
        for (token, e) in TOKENS.iter().zip(self.exponents()) {
            if e.is_zero() {
                continue;
            }
            if e.is_one() {
                parts.push(token.to_string());
            } else {
                parts.push(format!("{token}^({e})"));
            }
        }
        parts.join(" ")
    }
}

impl Mul for DimVec {
    type Output = DimVec;

    fn mul(self, rhs: DimVec) -> DimVec {
        DimVec::new(
            self.mass + rhs.mass,
            self.length + rhs.length,
            self.time + rhs.time,
            self.temperature + rhs.temperature,
        )
    }
}

impl Div for DimVec {
    type Output = DimVec;

    fn div(self, rhs: DimVec) -> DimVec {
        DimVec::new(
            self.mass - rhs.mass,
            self.length - rhs.length,
            self.time - rhs.time,
            self.temperature - rhs.temperature,
        )
    }
}

/// Componentwise exponent sum.
pub fn dim_mul(a: DimVec, b: DimVec) -> DimVec {
    a * b
}

impl fmt::Display for DimVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_dimensionless() {
            f.write_str("1")
        } else {
            f.write_str(&self.unit_string())
        }
    }
}

/// A strictly positive magnitude, kept as its base-10 logarithm, with a dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub log10: f64,
    pub dim: DimVec,
}

impl Quantity {
    pub fn new(value: f64, dim: DimVec) -> Result<Quantity> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidValue {
                what: "quantity magnitude".into(),
                reason: format!("{value} is not a finite positive number"),
            });
        }
        Ok(Quantity {
            log10: value.log10(),
            dim,
        })
    }

    pub fn from_log10(log10: f64, dim: DimVec) -> Quantity {
        Quantity { log10, dim }
    }

    pub fn one() -> Quantity {
        Quantity::from_log10(0.0, DimVec::DIMENSIONLESS)
    }

    /// Dimensionless positive number.
    pub fn number(value: f64) -> Result<Quantity> {
        Quantity::new(value, DimVec::DIMENSIONLESS)
    }

    /// Linear magnitude; may overflow to infinity for extreme decades.
    pub fn value(&self) -> f64 {
        10f64.powf(self.log10)
    }

    pub fn pow(self, r: Rational) -> Quantity {
        let scale = *r.numer() as f64 / *r.denom() as f64;
        Quantity {
            log10: self.log10 * scale,
            dim: self.dim.pow(r),
        }
    }

    pub fn sqrt(self) -> Quantity {
        self.pow(rat(1, 2))
    }

    pub fn recip(self) -> Quantity {
        self.pow(-Rational::one())
    }

    pub fn ensure_dim(&self, expected: DimVec, context: &str) -> Result<()> {
        if self.dim == expected {
            Ok(())
        } else {
            Err(Error::mismatch(context, expected, self.dim))
        }
    }

    /// Decades between `self` and `other`; both must share a dimension.
    pub fn decades_from(&self, other: &Quantity) -> Result<f64> {
        log10_ratio(self, other)
    }

    /// Significand in [1, 10) and integer decade.
    pub fn sci_parts(&self) -> (f64, i64) {
        let mut decade = self.log10.floor();
        let mut sig = 10f64.powf(self.log10 - decade);
        if sig >= 10.0 {
            sig /= 10.0;
            decade += 1.0;
        }
        (sig, decade as i64)
    }

    /// Three significant digits, e.g. `6.60e-34 kg m^(2) s^(-1)`.
    pub fn short(&self) -> String {
        let (sig, decade) = self.sci_parts();
        let mut text = format!("{sig:.2}e{decade}");
        // rounding can carry into the next decade (9.996 -> 10.00)
        if text.starts_with("10.00") {
            text = format!("1.00e{}", decade + 1);
        }
        let unit = self.dim.unit_string();
        if unit.is_empty() {
            text
        } else {
            format!("{text} {unit}")
        }
    }
}

impl Mul for Quantity {
    type Output = Quantity;

    fn mul(self, rhs: Quantity) -> Quantity {
        Quantity {
            log10: self.log10 + rhs.log10,
            dim: self.dim * rhs.dim,
        }
    }
}

impl Div for Quantity {
    type Output = Quantity;

    fn div(self, rhs: Quantity) -> Quantity {
        Quantity {
            log10: self.log10 - rhs.log10,
            dim: self.dim / rhs.dim,
        }
    }
}

/// Raises a quantity to a rational power.
pub fn qty_pow(q: Quantity, r: Rational) -> Quantity {
    q.pow(r)
}

/// `log10(a / b)`; refuses to compare quantities of different dimension.
pub fn log10_ratio(a: &Quantity, b: &Quantity) -> Result<f64> {
    if a.dim != b.dim {
        return Err(Error::mismatch("log10_ratio", a.dim, b.dim));
    }
    Ok(a.log10 - b.log10)
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.short())
    }
}
