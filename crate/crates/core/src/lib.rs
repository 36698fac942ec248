//! Commutative rings with algebra-compatible closure operators, and decision
//! procedures for approximate ideals, spectra, localization and modules.

pub mod closure;
pub mod error;
pub mod fun;
pub mod hom;
pub mod ideal;
pub mod ideal_theory;
pub mod localization;
pub mod modules;
pub mod nullstellensatz;
pub mod ring;
pub mod spectrum;

pub use error::{Error, Result};
pub use ring::{Elem, Ring, RingDescriptor, RingElem, Subset};
