//! Finds the monomial in a set of generators whose dimension equals a target.
//!
//! Each generator contributes one unknown exponent; the four base dimensions
//! give four linear equations. Some generators may carry a fixed exponent
//! (the power of `c` in a screened force law, for example). The remaining
//! system is reduced exactly over the rationals.

use std::fmt;

use num_traits::{One, Zero};

use crate::constants::Lookup;
use crate::dimensions::{DimVec, Quantity, Rational};
use crate::error::Result;

pub type Exponents = Vec<(String, Rational)>;

#[derive(Debug, Clone, PartialEq)]
pub struct MonomialProblem {
    pub generators: Vec<(String, DimVec)>,
    pub fixed: Vec<(String, Rational)>,
    pub target: DimVec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonomialSolution {
    /// One exponent per generator, in generator order.
    pub exponents: Exponents,
    pub residual_dim: DimVec,
}

impl MonomialSolution {
    pub fn exponent(&self, name: &str) -> Option<Rational> {
        self.exponents.iter().find(|(n, _)| n == name).map(|(_, e)| *e)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolveError {
    #[error("malformed problem: {0}")]
    InvalidProblem(String),

    /// The free exponents are not pinned down. `nullspace` spans the
    /// directions along which any solution can move.
    #[error("underdetermined: {} free direction(s) remain", nullspace.len())]
    Underdetermined {
        particular: Option<Exponents>,
        nullspace: Vec<Exponents>,
    },

    #[error("inconsistent: {diagnosis}")]
    Inconsistent { diagnosis: String },
}

const BASE_NAMES: [&str; 4] = ["mass", "length", "time", "temperature"];

impl MonomialProblem {
    pub fn new(generators: Vec<(String, DimVec)>, fixed: Vec<(String, Rational)>, target: DimVec) -> Self {
        MonomialProblem {
            generators,
            fixed,
            target,
        }
    }

    fn validate(&self) -> Result<(), SolveError> {
        for (i, (name, _)) in self.generators.iter().enumerate() {
            if self.generators[..i].iter().any(|(n, _)| n == name) {
                return Err(SolveError::InvalidProblem(format!("generator `{name}` listed twice")));
            }
        }
        for (i, (name, _)) in self.fixed.iter().enumerate() {
            if !self.generators.iter().any(|(n, _)| n == name) {
                return Err(SolveError::InvalidProblem(format!(
                    "fixed exponent for `{name}`, which is not a generator"
                )));
            }
            if self.fixed[..i].iter().any(|(n, _)| n == name) {
                return Err(SolveError::InvalidProblem(format!("`{name}` fixed twice")));
            }
        }
        let free = self.generators.len() - self.fixed.len();
        if free > 4 {
            return Err(SolveError::InvalidProblem(format!(
                "{free} free generators; at most 4 can be determined by M, L, T, Θ"
            )));
        }
        Ok(())
    }

    fn fixed_exponent(&self, name: &str) -> Option<Rational> {
        self.fixed.iter().find(|(n, _)| n == name).map(|(_, e)| *e)
    }
}

/// Product of generator dimensions raised to `exponents`.
pub fn monomial_dim(generators: &[(String, DimVec)], exponents: &[(String, Rational)]) -> DimVec {
    exponents.iter().fold(DimVec::DIMENSIONLESS, |acc, (name, e)| {
        let dim = generators
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, d)| *d)
            .unwrap_or_default();
        acc * dim.pow(*e)
    })
}

/// Reduced row echelon form in place; returns pivot columns.
fn rref(rows: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let lead = rows[r][col];
        for x in rows[r].iter_mut() {
            *x /= lead;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let factor = rows[i][col];
                for j in 0..rows[i].len() {
                    let delta = factor * rows[r][j];
                    rows[i][j] -= delta;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

pub fn solve(problem: &MonomialProblem) -> Result<MonomialSolution, SolveError> {
    problem.validate()?;

    let free: Vec<&(String, DimVec)> = problem
        .generators
        .iter()
        .filter(|(n, _)| problem.fixed_exponent(n).is_none())
        .collect();
    let fixed_dim = monomial_dim(&problem.generators, &problem.fixed);
    let rhs = (problem.target / fixed_dim).exponents();

    let k = free.len();
    let mut rows: Vec<Vec<Rational>> = (0..4)
        .map(|b| {
            let mut row: Vec<Rational> = free.iter().map(|(_, d)| d.exponents()[b]).collect();
            row.push(rhs[b]);
            row
        })
        .collect();
    let pivots = rref(&mut rows, k);

    if rows
        .iter()
        .any(|row| row[..k].iter().all(Zero::is_zero) && !row[k].is_zero())
    {
        let missing: Vec<&str> = (0..4)
            .filter(|&b| !rhs[b].is_zero() && free.iter().all(|(_, d)| d.exponents()[b].is_zero()))
            .map(|b| BASE_NAMES[b])
            .collect();
        let diagnosis = if missing.is_empty() {
            "target dimension is not reachable by any combination of the generators".to_string()
        } else {
            format!("no free generator carries {}", missing.join(", "))
        };
        return Err(SolveError::Inconsistent { diagnosis });
    }

    // particular solution with free variables at zero
    let mut values = vec![Rational::zero(); k];
    for (r, &col) in pivots.iter().enumerate() {
        values[col] = rows[r][k];
    }
    let assemble = |free_values: &[Rational]| -> Exponents {
        let mut it = free_values.iter();
        problem
            .generators
            .iter()
            .map(|(name, _)| {
                let e = problem
                    .fixed_exponent(name)
                    .unwrap_or_else(|| *it.next().expect("one value per free generator"));
                (name.clone(), e)
            })
            .collect()
    };

    if pivots.len() < k {
        let nullspace = (0..k)
            .filter(|c| !pivots.contains(c))
            .map(|fc| {
                let mut v = vec![Rational::zero(); k];
                v[fc] = Rational::one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = -rows[r][fc];
                }
                free.iter().zip(v).map(|((n, _), e)| (n.clone(), e)).collect()
            })
            .collect();
        return Err(SolveError::Underdetermined {
            particular: Some(assemble(&values)),
            nullspace,
        });
    }

    let exponents = assemble(&values);
    let residual_dim = problem.target / monomial_dim(&problem.generators, &exponents);
    if !residual_dim.is_dimensionless() {
        return Err(SolveError::Inconsistent {
            diagnosis: format!("substitution left residual dimension {residual_dim}"),
        });
    }
    Ok(MonomialSolution {
        exponents,
        residual_dim,
    })
}

/// Multiplies out a monomial with values from `lookup`.
pub fn evaluate_monomial(exponents: &[(String, Rational)], lookup: &dyn Lookup) -> Result<Quantity> {
    exponents.iter().try_fold(Quantity::one(), |acc, (name, e)| {
        Ok(acc * lookup.quantity(name)?.pow(*e))
    })
}

/// `G^(1/2) M^(3/2) R^(1/2)`; zero exponents are omitted.
pub struct MonomialDisplay<'a>(pub &'a [(String, Rational)]);

impl fmt::Display for MonomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .0
            .iter()
            .filter(|(_, e)| !e.is_zero())
            .map(|(n, e)| format!("{n}^({e})"))
            .collect();
        if terms.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&terms.join(" "))
        }
    }
}

/// Same monomial with `e2^(p)` shown as `e^(2p)`.
pub fn with_charge_exponent(exponents: &[(String, Rational)]) -> Exponents {
    exponents
        .iter()
        .map(|(n, e)| {
            if n == "e2" {
                ("e".to_string(), *e * Rational::from_integer(2))
            } else {
                (n.clone(), *e)
            }
        })
        .collect()
}

/// Dimensions of symbols that are not registry constants: system-level
/// masses, radii and spring constants.
pub fn symbol_dim(name: &str) -> Option<DimVec> {
    match name {
        "m" | "M" => Some(DimVec::MASS),
        "R" | "r" | "R_D" => Some(DimVec::LENGTH),
        "k" => Some(DimVec::FORCE),
        "k_b" | "k_p" => Some(DimVec::STIFFNESS),
        "n_e" => Some(DimVec::NUMBER_DENSITY),
        _ => None,
    }
}
