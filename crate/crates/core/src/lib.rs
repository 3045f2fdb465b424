//! Exact arithmetic toolkit for q-separated real polynomials: root isolation,
//! interspersion predicates, q-difference operators, theorem harnesses,
//! log-concavity certificates and a moment experiment for the Riemann
//! Xi-function kernel.

pub mod exec;
pub mod intersperse;
pub mod logconcave;
pub mod polycore;
pub mod qcalc;
pub mod realroots;
pub mod riemann;
pub mod theoremlab;

pub use polycore::{rat, rint, CPoly, GaussRat, Poly, RPoly, Rat};
