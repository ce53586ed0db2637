//! Exact multiplier ideals of monomial space curves.

pub mod appendix;
pub mod curve;
pub mod exec;
pub mod linalg;
pub mod multiplier;
pub mod newton;
pub mod poly;
pub mod symbolic;
pub mod valuation;
