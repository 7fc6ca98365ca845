//! Dimensional analysis and order-of-magnitude estimation of the action per
//! constituent of bound physical systems.
//!
//! Quantities carry exact rational exponents over mass, length, time and
//! temperature, and a log10 magnitude. Every product and quotient is
//! dimension-checked; nothing is coerced.

pub mod catalog;
pub mod constants;
pub mod dimensions;
pub mod error;
pub mod estimator;
pub mod literal;
pub mod solver;
pub mod thermal;

pub use catalog::{check_all, evaluate, CheckTable, EstimateReport, SystemSpec, Verdict};
pub use constants::{Constants, Lookup, Registry, ValueSet};
pub use dimensions::{DimVec, Quantity, Rational};
pub use error::{Error, ParseError, Result};
pub use estimator::{tremor_chain, Env, ForceLaw, TremorBreakdown};
pub use solver::{MonomialProblem, MonomialSolution, SolveError};
pub use thermal::{ThermalOutput, ThermalSpec};
