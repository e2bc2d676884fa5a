//! Exact-arithmetic workbench for sum-product experiments.
//!
//! The crate is organised bottom-up:
//!
//! * [`setcore`]: exact rationals and finite sets with sumsets, product
//!   sets, ratio sets, dilations and dyadic statistics;
//! * [`pte`]: Prouhet–Tarry–Escott solutions and the `0/±1` polynomials
//!   they induce, with exact root multiplicity and Taylor data at `x = 1`;
//! * [`cube`]: greedy multiplicative cube construction;
//! * [`distinct`]: spread subsets and the weighted distinct-sums certifier;
//! * [`witness`]: end-to-end growth certificates, progression search and the
//!   Ruzsa–Plünnecke audit;
//! * [`harness`]: set generators and the experiment runner behind the CLI.

pub mod cube;
pub mod distinct;
pub mod harness;
pub mod pte;
pub mod setcore;
pub mod witness;

pub use setcore::{FiniteSet, Scalar, SetError};
