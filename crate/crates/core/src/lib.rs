//! Binary quartic forms whose Galois group is small: family coordinates,
//! explicit maximality criteria, an independent order oracle, local densities,
//! exact field counts and the asymptotic constants they are compared against.

pub mod arith;
pub mod asymptotics;
pub mod census;
pub mod classify;
pub mod densities;
pub mod error;
pub mod forms;
pub mod linalg;
pub mod maximality;
pub mod order_oracle;
pub mod resolvent;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use classify::{GaloisTag, RealSignature, ReducibleType};
pub use error::{Error, Result};
pub use forms::{BinQuadForm, BinQuartForm, Family, FamilyCoords, GL2Mat, FAMILIES};
