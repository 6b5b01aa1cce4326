//! Basis pursuit and LP decoding over the same zero-one matrix.

pub mod bridge;
pub mod cclpd;
pub mod corpus;
pub mod cover;
pub mod cslpd;
pub mod error;
pub mod gf2;
pub mod linalg;
pub mod lp;
pub mod nsp;
pub mod polyhedra;
pub mod polytope;
pub mod pseudoweight;
pub mod rng;
pub mod tanner;

pub use error::{Error, Result};
pub use gf2::{Gf2Matrix, Gf2Vector};
