//! Exact arithmetic substrate: extended binomials, sparse Laurent polynomials
//! over arbitrary-precision integers, rational functions and truncated series.

mod binom;
mod monomial;
mod poly;
mod rational;
mod series;

pub use binom::extended_binomial;
pub use monomial::{Monomial, Var};
pub use poly::LaurentPoly;
pub use rational::RationalFunction;
pub use series::{
    series_invert, series_power, split_u, u_monomial, unit_lead, unit_power, Grading, TruncatedSeries, UnitLead,
};

pub use num_bigint::BigInt;
