//! Exact coefficient arithmetic: rationals, monogenic number rings and their Galois maps.

mod coeff;
pub mod nt;
pub mod poly;
mod rational;
mod ring;

pub use coeff::{CoeffRing, Integrality, NumberRing, Rationals, RingDescriptor};
pub use rational::Rational;
pub use ring::{CyclotomicNumber, GaloisMap, MonogenicRing, RingKind};
