//! Exact modular data, fusion and characters for sl(3) at denominator-2
//! admissible levels and the associated Bershadsky-Polyakov algebras.

pub mod characters;
pub mod cyclo;
pub mod error;
pub mod fusion;
pub mod io;
pub mod modular;
pub mod verify;
pub mod weights;

pub use error::{Error, Result};
