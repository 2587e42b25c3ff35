//! Finite-dimensional algebras of substitutions.
//!
//! The crate implements transposition algebras (signature `TA`: Boolean
//! operations plus the swap substitutions `s[i,j]`), substitution algebras
//! with transpositions (`SA`: additionally the replacement substitutions
//! `s[i/j]`), and their extension by diagonal constants `d[i,j]` (`SAD`),
//! all over a fixed finite dimension `n >= 2`.
//!
//! The main entry points are:
//!
//! * [`perm`] — transformations of `{0..n-1}`, generator words, canonical
//!   forms and rewrite traces;
//! * [`set`] — concrete set algebras over units `V ⊆ ^nU` with bitset
//!   elements, including the small algebras `A_nk`;
//! * [`term`] — term and modal-formula syntax, parsing, axiom schema
//!   instantiation and brute-force evaluation;
//! * [`decide`] — normal forms and decision procedures for equations and
//!   quasi-equations, with replayable countermodels;
//! * [`free`] — finite free algebras, their atom counts, and constructive
//!   Craig interpolation;
//! * [`rep`] — abstract finite algebras, ultrafilter and complete
//!   representations, relativization, complex algebras, and the
//!   non-variety certificate;
//! * [`kripke`] — finite Kripke models and the modal reading of the
//!   algebraic countermodels.
//!
//! The crate is `no_std` (with `alloc`); IO, file formats and the command
//! line front end live in the companion `tasa` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod bits;
pub mod config;
pub mod decide;
pub mod free;
pub mod kripke;
pub mod perm;
pub mod rep;
pub mod rng;
pub mod set;
pub mod term;

pub use config::Config;
