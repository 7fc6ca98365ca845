//! Stability estimate of the characteristic action per constituent.
//!
//! Given a constituent mass `m`, a system radius `R`, a count `N` and a
//! force law `F(R)`, the virial balance `N F(R) R ≅ m v²` fixes the
//! velocity, the global time is `R / v`, and the per-constituent
//! fluctuation time is `N^(-1/2)` of it. The resulting action
//! `α = m v² τ` reduces to `m^(1/2) R^(3/2) F(R)^(1/2)`, with `N` cancelling.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::constants::{Constants, Lookup};
use crate::dimensions::{rat, DimVec, Quantity, Rational};
use crate::error::{Error, Result};
use crate::solver::{evaluate_monomial, symbol_dim, Exponents, MonomialSolution};

/// Joules per GeV.
pub const GEV_IN_J: f64 = 1.602e-10;
/// Metres per femtometre.
pub const FM_IN_M: f64 = 1e-15;

pub fn gev(x: f64) -> Result<Quantity> {
    Quantity::new(x * GEV_IN_J, DimVec::ENERGY)
}

pub fn fm(x: f64) -> Result<Quantity> {
    Quantity::new(x * FM_IN_M, DimVec::LENGTH)
}

/// `x GeV/fm` as a force.
pub fn gev_per_fm(x: f64) -> Result<Quantity> {
    Ok(gev(x)? / fm(1.0)?)
}

/// `x GeV/c²` as a mass, using the selected value of `c`.
pub fn gev_mass(x: f64, consts: &Constants<'_>) -> Result<Quantity> {
    Ok(gev(x)? / consts.c()?.pow(rat(2, 1)))
}

/// Plasma oscillation stiffness `k_p = 4π n_e e²`.
pub fn plasma_stiffness(n_e: Quantity, consts: &Constants<'_>) -> Result<Quantity> {
    n_e.ensure_dim(DimVec::NUMBER_DENSITY, "electron density")?;
    let k = Quantity::number(4.0 * std::f64::consts::PI)? * n_e * consts.get("e2")?;
    k.ensure_dim(DimVec::STIFFNESS, "plasma stiffness")?;
    Ok(k)
}

/// Constants plus system-specific parameters (`m`, `k_b`, `n_e`, ...).
///
/// Lookup order: parameters, then `k_p` derived from `n_e`, then the registry.
#[derive(Debug, Clone)]
pub struct Env<'a> {
    consts: Constants<'a>,
    params: BTreeMap<String, Quantity>,
}

impl<'a> Env<'a> {
    pub fn new(consts: Constants<'a>) -> Self {
        Env {
            consts,
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, name: impl Into<String>, q: Quantity) -> Self {
        self.params.insert(name.into(), q);
        self
    }

    /// Binds the constituent mass to the symbol `m`.
    pub fn with_mass(self, m: Quantity) -> Self {
        self.with("m", m)
    }

    pub fn consts(&self) -> &Constants<'a> {
        &self.consts
    }

    pub fn params(&self) -> &BTreeMap<String, Quantity> {
        &self.params
    }

    /// Dimension of a name, including unbound system symbols such as `m`.
    pub fn dim_of(&self, name: &str) -> Result<DimVec> {
        match self.quantity(name) {
            Ok(q) => Ok(q.dim),
            Err(Error::UnknownConstant(_)) => symbol_dim(name).ok_or_else(|| Error::UnknownConstant(name.to_string())),
            Err(e) => Err(e),
        }
    }
}

impl Lookup for Env<'_> {
    fn quantity(&self, name: &str) -> Result<Quantity> {
        if let Some(q) = self.params.get(name) {
            return Ok(*q);
        }
        if name == "k_p" {
            if let Some(n_e) = self.params.get("n_e") {
                return plasma_stiffness(*n_e, &self.consts);
            }
        }
        self.consts.get(name)
    }
}

/// `F(R) = Π cᵢ^pᵢ · R^q`, a force magnitude.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceLaw {
    constants: Exponents,
    radius_exponent: Rational,
}

impl ForceLaw {
    /// Builds a law and checks that it has the dimension of a force.
    pub fn new(
        constants: Exponents,
        radius_exponent: Rational,
        dim_of: impl Fn(&str) -> Result<DimVec>,
    ) -> Result<ForceLaw> {
        let mut dim = DimVec::LENGTH.pow(radius_exponent);
        for (name, e) in &constants {
            dim = dim * dim_of(name)?.pow(*e);
        }
        if dim != DimVec::FORCE {
            return Err(Error::mismatch("force law", DimVec::FORCE, dim));
        }
        Ok(ForceLaw {
            constants,
            radius_exponent,
        })
    }

    /// Builds a law whose names are resolved through `env` (unbound `m`, `R`,
    /// `k`, `k_b`, `k_p` fall back to their symbol dimensions).
    pub fn checked(constants: Exponents, radius_exponent: Rational, env: &Env<'_>) -> Result<ForceLaw> {
        ForceLaw::new(constants, radius_exponent, |n| env.dim_of(n))
    }

    /// `G m² / R²`.
    pub fn gravity() -> ForceLaw {
        ForceLaw {
            constants: vec![("G".into(), rat(1, 1)), ("m".into(), rat(2, 1))],
            radius_exponent: rat(-2, 1),
        }
    }

    /// `e² / R²`.
    pub fn coulomb() -> ForceLaw {
        ForceLaw {
            constants: vec![("e2".into(), rat(1, 1))],
            radius_exponent: rat(-2, 1),
        }
    }

    /// `k R` for a spring constant named `stiffness` (`k_b`, `k_p`).
    pub fn elastic(stiffness: &str) -> ForceLaw {
        ForceLaw {
            constants: vec![(stiffness.into(), rat(1, 1))],
            radius_exponent: rat(1, 1),
        }
    }

    /// Constant string tension `k`.
    pub fn string() -> ForceLaw {
        ForceLaw {
            constants: vec![("k".into(), rat(1, 1))],
            radius_exponent: Rational::zero(),
        }
    }

    /// Turns a solved force monomial into a law, pulling out the radius generator.
    pub fn from_solution(sol: &MonomialSolution, radius: &str) -> ForceLaw {
        let radius_exponent = sol.exponent(radius).unwrap_or_default();
        let constants = sol
            .exponents
            .iter()
            .filter(|(n, e)| n != radius && !e.is_zero())
            .cloned()
            .collect();
        ForceLaw {
            constants,
            radius_exponent,
        }
    }

    pub fn constants(&self) -> &[(String, Rational)] {
        &self.constants
    }

    pub fn radius_exponent(&self) -> Rational {
        self.radius_exponent
    }

    /// Exponents of `α = m^(1/2) R^(3/2) F^(1/2)` over the law's constants,
    /// `m` and `R`, computed exactly.
    pub fn action_exponents(&self) -> Exponents {
        let half = rat(1, 2);
        let mut out: Exponents = self.constants.iter().map(|(n, e)| (n.clone(), *e * half)).collect();
        match out.iter_mut().find(|(n, _)| n == "m") {
            Some((_, e)) => *e += half,
            None => out.push(("m".into(), half)),
        }
        out.push(("R".into(), rat(3, 2) + self.radius_exponent * half));
        out
    }
}

/// Magnitude of `law` at separation `radius`.
pub fn force_at(law: &ForceLaw, radius: Quantity, env: &Env<'_>) -> Result<Quantity> {
    radius.ensure_dim(DimVec::LENGTH, "force_at radius")?;
    let f = evaluate_monomial(&law.constants, env)? * radius.pow(law.radius_exponent);
    f.ensure_dim(DimVec::FORCE, "force_at")?;
    Ok(f)
}

/// `α = m^(1/2) R^(3/2) F(R)^(1/2)`.
pub fn alpha_direct(m: Quantity, radius: Quantity, law: &ForceLaw, env: &Env<'_>) -> Result<Quantity> {
    m.ensure_dim(DimVec::MASS, "constituent mass")?;
    let env = env.clone().with_mass(m);
    let f = force_at(law, radius, &env)?;
    let alpha = m.sqrt() * radius.pow(rat(3, 2)) * f.sqrt();
    alpha.ensure_dim(DimVec::ACTION, "alpha_direct")?;
    Ok(alpha)
}

/// Every intermediate of the stability chain.
#[derive(Debug, Clone, PartialEq)]
pub struct TremorBreakdown {
    pub count_n: f64,
    pub radius: Quantity,
    pub force: Quantity,
    pub work_l: Quantity,
    pub velocity_v: Quantity,
    pub global_time_t: Quantity,
    pub tremor_time_tau: Quantity,
    pub energy_per_particle_eps: Quantity,
    pub total_energy_e: Quantity,
    pub total_action_a: Quantity,
    pub action_alpha: Quantity,
    pub mean_free_path_l: Quantity,
}

impl TremorBreakdown {
    /// `(name, quantity)` pairs in chain order.
    pub fn fields(&self) -> [(&'static str, Quantity); 11] {
        [
            ("force", self.force),
            ("work", self.work_l),
            ("velocity", self.velocity_v),
            ("global_time", self.global_time_t),
            ("tremor_time", self.tremor_time_tau),
            ("energy_per_particle", self.energy_per_particle_eps),
            ("total_energy", self.total_energy_e),
            ("total_action", self.total_action_a),
            ("action_per_particle", self.action_alpha),
            ("mean_free_path", self.mean_free_path_l),
            ("radius", self.radius),
        ]
    }
}

pub fn tremor_chain(m: Quantity, radius: Quantity, law: &ForceLaw, n: f64, env: &Env<'_>) -> Result<TremorBreakdown> {
    if !(n.is_finite() && n >= 1.0) {
        return Err(Error::NonPositiveN(n));
    }
    m.ensure_dim(DimVec::MASS, "constituent mass")?;
    let env = env.clone().with_mass(m);
    let count = Quantity::number(n)?;

    let force = force_at(law, radius, &env)?;
    let work_l = count * force * radius;
    let velocity_v = (work_l / m).sqrt();
    let global_time_t = radius / velocity_v;
    let tremor_time_tau = count.pow(rat(-1, 2)) * global_time_t;
    let energy_per_particle_eps = m * velocity_v.pow(rat(2, 1));
    let total_energy_e = count * energy_per_particle_eps;
    let total_action_a = total_energy_e * global_time_t;
    let action_alpha = energy_per_particle_eps * tremor_time_tau;
    let mean_free_path_l = (radius.pow(rat(3, 1)) / count).pow(rat(1, 3));

    let checks = [
        (work_l, DimVec::ENERGY, "work"),
        (velocity_v, DimVec::VELOCITY, "velocity"),
        (global_time_t, DimVec::TIME, "global time"),
        (tremor_time_tau, DimVec::TIME, "tremor time"),
        (energy_per_particle_eps, DimVec::ENERGY, "energy per particle"),
        (total_energy_e, DimVec::ENERGY, "total energy"),
        (total_action_a, DimVec::ACTION, "total action"),
        (action_alpha, DimVec::ACTION, "action per particle"),
        (mean_free_path_l, DimVec::LENGTH, "mean free path"),
    ];
    for (q, dim, what) in checks {
        q.ensure_dim(dim, what)?;
    }

    Ok(TremorBreakdown {
        count_n: n,
        radius,
        force,
        work_l,
        velocity_v,
        global_time_t,
        tremor_time_tau,
        energy_per_particle_eps,
        total_energy_e,
        total_action_a,
        action_alpha,
        mean_free_path_l,
    })
}

/// `log10(l³ 𝒯² / (τ² R³))`; zero when `l ~ τ^(2/3)` holds with unit constant.
pub fn keplerian_check(b: &TremorBreakdown) -> f64 {
    let q = b.mean_free_path_l.pow(rat(3, 1)) * b.global_time_t.pow(rat(2, 1))
        / (b.tremor_time_tau.pow(rat(2, 1)) * b.radius.pow(rat(3, 1)));
    debug_assert!(q.dim.is_dimensionless());
    q.log10
}
