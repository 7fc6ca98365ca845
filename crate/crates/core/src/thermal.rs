//! Finite-temperature relations: fluctuation time `h / (k_B T)`, the
//! equivalent temperature of `N` constituents with global time `𝒯`, and the
//! thermal unit of action `h √N`, plus the estimates built from them.

use std::fmt;
use std::str::FromStr;

use crate::constants::Constants;
use crate::dimensions::{rat, DimVec, Quantity};
use crate::error::{Error, Result};

fn check_count(n: f64) -> Result<Quantity> {
    if !(n.is_finite() && n >= 1.0) {
        return Err(Error::NonPositiveN(n));
    }
    Quantity::number(n)
}

/// `τ = h / (k_B T)`.
pub fn tau_thermal(temperature: Quantity, consts: &Constants<'_>) -> Result<Quantity> {
    temperature.ensure_dim(DimVec::TEMPERATURE, "temperature")?;
    let tau = consts.h()? / (consts.k_b()? * temperature);
    tau.ensure_dim(DimVec::TIME, "tau_thermal")?;
    Ok(tau)
}

/// `T = (h / k_B) √N / 𝒯`.
pub fn equiv_temperature(n: f64, global_time: Quantity, consts: &Constants<'_>) -> Result<Quantity> {
    let count = check_count(n)?;
    global_time.ensure_dim(DimVec::TIME, "global time")?;
    let t = consts.h()? / consts.k_b()? * count.sqrt() / global_time;
    t.ensure_dim(DimVec::TEMPERATURE, "equiv_temperature")?;
    Ok(t)
}

/// `A_{T,N} = h √N`.
pub fn thermal_action(n: f64, consts: &Constants<'_>) -> Result<Quantity> {
    Ok(consts.h()? * check_count(n)?.sqrt())
}

/// Thermal action expressed as a length, `h √N / (m c)`; for electrons this
/// is `√N` Compton wavelengths.
pub fn emittance_length(n: f64, mass: Quantity, consts: &Constants<'_>) -> Result<Quantity> {
    mass.ensure_dim(DimVec::MASS, "emittance mass")?;
    let len = thermal_action(n, consts)? / (mass * consts.c()?);
    len.ensure_dim(DimVec::LENGTH, "emittance")?;
    Ok(len)
}

/// `v = (k_B / h) (T / √N) R`.
pub fn bec_velocity(temperature: Quantity, n: f64, radius: Quantity, consts: &Constants<'_>) -> Result<Quantity> {
    temperature.ensure_dim(DimVec::TEMPERATURE, "temperature")?;
    radius.ensure_dim(DimVec::LENGTH, "radius")?;
    let count = check_count(n)?;
    let v = consts.k_b()? / consts.h()? * temperature / count.sqrt() * radius;
    v.ensure_dim(DimVec::VELOCITY, "bec_velocity")?;
    Ok(v)
}

/// `N = m k_B T R² / h²`, with the velocity eliminated by equipartition
/// (`m v² ≅ k_B T`) and `𝒯 = R / v`.
pub fn universe_nucleon_count(
    mass: Quantity,
    temperature: Quantity,
    radius: Quantity,
    consts: &Constants<'_>,
) -> Result<f64> {
    mass.ensure_dim(DimVec::MASS, "nucleon mass")?;
    temperature.ensure_dim(DimVec::TEMPERATURE, "temperature")?;
    radius.ensure_dim(DimVec::LENGTH, "radius")?;
    let n = mass * consts.k_b()? * temperature * radius.pow(rat(2, 1)) / consts.h()?.pow(rat(2, 1));
    n.ensure_dim(DimVec::DIMENSIONLESS, "nucleon count")?;
    Ok(n.value())
}

/// Which thermal estimate to produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThermalOutput {
    TauThermal,
    EquivTemperature,
    ThermalAction,
    Emittance,
    BecVelocity,
    NucleonCount,
}

impl ThermalOutput {
    pub const ALL: [ThermalOutput; 6] = [
        ThermalOutput::TauThermal,
        ThermalOutput::EquivTemperature,
        ThermalOutput::ThermalAction,
        ThermalOutput::Emittance,
        ThermalOutput::BecVelocity,
        ThermalOutput::NucleonCount,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ThermalOutput::TauThermal => "tau-thermal",
            ThermalOutput::EquivTemperature => "equiv-temperature",
            ThermalOutput::ThermalAction => "thermal-action",
            ThermalOutput::Emittance => "emittance",
            ThermalOutput::BecVelocity => "bec-velocity",
            ThermalOutput::NucleonCount => "nucleon-count",
        }
    }

    pub fn dim(&self) -> DimVec {
        match self {
            ThermalOutput::TauThermal => DimVec::TIME,
            ThermalOutput::EquivTemperature => DimVec::TEMPERATURE,
            ThermalOutput::ThermalAction => DimVec::ACTION,
            ThermalOutput::Emittance => DimVec::LENGTH,
            ThermalOutput::BecVelocity => DimVec::VELOCITY,
            ThermalOutput::NucleonCount => DimVec::DIMENSIONLESS,
        }
    }
}

impl fmt::Display for ThermalOutput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ThermalOutput {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ThermalOutput::ALL
            .into_iter()
            .find(|o| o.as_str() == s)
            .ok_or_else(|| Error::InvalidValue {
                what: "thermal output".into(),
                reason: format!("`{s}` is not a known thermal output"),
            })
    }
}

/// Inputs for thermal estimates. Any field may be absent; each operation
/// reports the first missing field it needs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ThermalSpec {
    pub temperature: Option<Quantity>,
    pub global_time: Option<Quantity>,
    pub count_n: Option<f64>,
    pub radius: Option<Quantity>,
    pub constituent_mass: Option<Quantity>,
}

fn need<T: Copy>(v: Option<T>, field: &'static str, operation: &'static str) -> Result<T> {
    v.ok_or(Error::MissingField { field, operation })
}

impl ThermalSpec {
    pub fn tau_thermal(&self, consts: &Constants<'_>) -> Result<Quantity> {
        tau_thermal(need(self.temperature, "temperature", "tau_thermal")?, consts)
    }

    pub fn equiv_temperature(&self, consts: &Constants<'_>) -> Result<Quantity> {
        let n = need(self.count_n, "n", "equiv_temperature")?;
        let t = need(self.global_time, "global_time", "equiv_temperature")?;
        equiv_temperature(n, t, consts)
    }

    pub fn thermal_action(&self, consts: &Constants<'_>) -> Result<Quantity> {
        thermal_action(need(self.count_n, "n", "thermal_action")?, consts)
    }

    pub fn emittance(&self, consts: &Constants<'_>) -> Result<Quantity> {
        let n = need(self.count_n, "n", "emittance")?;
        let m = need(self.constituent_mass, "mass", "emittance")?;
        emittance_length(n, m, consts)
    }

    pub fn bec_velocity(&self, consts: &Constants<'_>) -> Result<Quantity> {
        let t = need(self.temperature, "temperature", "bec_velocity")?;
        let n = need(self.count_n, "n", "bec_velocity")?;
        let r = need(self.radius, "radius", "bec_velocity")?;
        bec_velocity(t, n, r, consts)
    }

    pub fn universe_nucleon_count(&self, consts: &Constants<'_>) -> Result<f64> {
        let m = need(self.constituent_mass, "mass", "universe_nucleon_count")?;
        let t = need(self.temperature, "temperature", "universe_nucleon_count")?;
        let r = need(self.radius, "radius", "universe_nucleon_count")?;
        universe_nucleon_count(m, t, r, consts)
    }

    /// Runs the requested estimate; counts come back as dimensionless quantities.
    pub fn evaluate(&self, output: ThermalOutput, consts: &Constants<'_>) -> Result<Quantity> {
        match output {
            ThermalOutput::TauThermal => self.tau_thermal(consts),
            ThermalOutput::EquivTemperature => self.equiv_temperature(consts),
            ThermalOutput::ThermalAction => self.thermal_action(consts),
            ThermalOutput::Emittance => self.emittance(consts),
            ThermalOutput::BecVelocity => self.bec_velocity(consts),
            ThermalOutput::NucleonCount => Quantity::number(self.universe_nucleon_count(consts)?),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{Registry, ValueSet};
    use crate::literal::parse_quantity;
    use approx::assert_abs_diff_eq;

    fn q(text: &str) -> Quantity {
        parse_quantity(text).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a / b - 1.0).abs()
    }

    #[test]
    fn fluctuation_time_from_temperature() {
        let reg = Registry::builtin();
        let c = reg.set(ValueSet::Paper);
        // 6.6e-34 / (1.38e-23 * 2.7) = 1.7713e-11
        assert!(rel(tau_thermal(q("2.7 K"), &c).unwrap().value(), 1.7713e-11) < 1e-4);
        // 6.6e-34 / 1.38e-11 = 4.7826e-23
        assert!(rel(tau_thermal(q("1e12 K"), &c).unwrap().value(), 4.7826e-23) < 1e-4);
        let unit_t = Quantity::from_log10(c.h().unwrap().log10 - c.k_b().unwrap().log10, DimVec::TEMPERATURE);
        assert_abs_diff_eq!(tau_thermal(unit_t, &c).unwrap().log10, 0.0, epsilon = 1e-12);
        assert!(tau_thermal(q("1 s"), &c).is_err());
    }

    #[test]
    fn equivalent_temperatures() {
        let reg = Registry::builtin();
        let c = reg.set(ValueSet::Paper);
        // 4.7826e-11 * sqrt(1e23) / 1e-2 = 1512.4
        assert!(rel(equiv_temperature(1e23, q("1e-2 s"), &c).unwrap().value(), 1512.4) < 1e-4);
        assert!(rel(equiv_temperature(1.0, q("1e-23 s"), &c).unwrap().value(), 4.7826e12) < 1e-4);
        let unit_time = Quantity::from_log10(c.h().unwrap().log10 - c.k_b().unwrap().log10, DimVec::TIME);
        assert_abs_diff_eq!(
            equiv_temperature(1.0, unit_time, &c).unwrap().log10,
            0.0,
            epsilon = 1e-12
        );
        assert!(equiv_temperature(0.0, q("1 s"), &c).is_err());
    }

    #[test]
    fn thermal_action_and_emittance() {
        let reg = Registry::builtin();
        let c = reg.set(ValueSet::Paper);
        assert_eq!(thermal_action(1.0, &c).unwrap(), c.h().unwrap());
        assert!(rel(thermal_action(1e12, &c).unwrap().value(), 6.6e-28) < 1e-9);
        let m = reg.set(ValueSet::Modern);
        let e = emittance_length(1e12, m.get("m_e").unwrap(), &m).unwrap();
        // 6.62607e-28 / (9.10938e-31 * 2.99792e8) = 2.4263e-6
        assert!(rel(e.value(), 2.4263e-6) < 1e-4);
        let lambda_c = m.get("lambda_c").unwrap();
        assert_abs_diff_eq!(e.decades_from(&lambda_c).unwrap(), 6.0, epsilon = 1e-9);
    }

    #[test]
    fn bec_velocity_scaling() {
        let reg = Registry::builtin();
        let c = reg.set(ValueSet::Paper);
        let v = bec_velocity(q("1e-6 K"), 1e7, q("1e-4 m"), &c).unwrap();
        // 1.38e-23 / 6.6e-34 * 1e-6 / 3162.28 * 1e-4 = 6.6121e-4
        assert!(rel(v.value(), 6.6121e-4) < 1e-4);
        let slower = bec_velocity(q("1e-6 K"), 1e9, q("1e-4 m"), &c).unwrap();
        assert_abs_diff_eq!(v.log10 - slower.log10, 1.0, epsilon = 1e-12);
        let cold = bec_velocity(q("1e-300 K"), 1e7, q("1e-4 m"), &c).unwrap();
        assert!(cold.value() < 1e-290);
    }

    #[test]
    fn nucleon_count() {
        let reg = Registry::builtin();
        let c = reg.set(ValueSet::Paper);
        let n = universe_nucleon_count(q("1e-27 kg"), q("2.7 K"), q("1e30 m"), &c).unwrap();
        // 1e-27 * 1.38e-23 * 2.7 * 1e60 / 4.356e-67 = 8.5537e76
        assert!(rel(n, 8.5537e76) < 1e-4);
        let half = universe_nucleon_count(q("1e-27 kg"), q("2.7 K"), q("5e29 m"), &c).unwrap();
        assert!(rel(n / half, 4.0) < 1e-9);
        let m = reg.set(ValueSet::Modern);
        let modern = universe_nucleon_count(q("1e-27 kg"), q("2.7 K"), q("4.4e26 m"), &m).unwrap();
        // 1e-27 * 1.380649e-23 * 2.7 * 1.936e53 / 4.39048e-67 = 1.6438e70
        assert!(rel(modern, 1.6438e70) < 1e-3);
    }

    #[test]
    fn missing_fields_reported() {
        let reg = Registry::builtin();
        let c = reg.set(ValueSet::Paper);
        let spec = ThermalSpec {
            count_n: Some(1e7),
            temperature: Some(q("1e-6 K")),
            ..Default::default()
        };
        match spec.bec_velocity(&c) {
            Err(Error::MissingField { field, .. }) => assert_eq!(field, "radius"),
            other => panic!("{other:?}"),
        }
        assert!(ThermalSpec::default().tau_thermal(&c).is_err());
        let full = ThermalSpec {
            radius: Some(q("1e-4 m")),
            ..spec
        };
        let v = full.evaluate(ThermalOutput::BecVelocity, &c).unwrap();
        assert_eq!(v.dim, ThermalOutput::BecVelocity.dim());
    }

    #[test]
    fn output_names_round_trip() {
        for o in ThermalOutput::ALL {
            assert_eq!(o.as_str().parse::<ThermalOutput>().unwrap(), o);
        }
        assert!("entropy".parse::<ThermalOutput>().is_err());
    }
}
