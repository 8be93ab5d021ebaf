//! Exact formal group laws for completions of Neron models of algebraic tori.
//!
//! The crate is layered bottom-up:
//!
//! * [`arith`]: rationals, monogenic number rings `Z[xi]`, Galois maps.
//! * [`series`]: sparse truncated multivariate power series over an exact ring.
//! * [`fgl`]: formal group laws, logarithms, homomorphisms, the explicit catalog.
//! * [`honda`]: Frobenius polynomials `u = sum C_i D^i`, types, and the laws `F_Xi`.
//! * [`weil`]: Weil restriction along a free basis; the law `Phi` and its logarithm.
//! * [`lattice`]: integer matrices, Smith forms, Galois representations, torus specs.
//! * [`fixed_pair`]: fixed-rank lattices, explicit `Q` matrices, fixed pairs.
//! * [`pipeline`]: end-to-end completions with verification reports.

pub mod arith;
pub mod error;
pub mod fgl;
pub mod fixed_pair;
pub mod honda;
pub mod lattice;
pub mod pipeline;
pub mod series;
pub mod weil;

pub use error::{Error, ParseError};
