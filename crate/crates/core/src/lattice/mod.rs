//! Integer linear algebra and Galois data of tori.

mod matrix;
pub mod snf;
pub mod torus;

pub use matrix::{int_matrix_from_json, IntMatrix, Matrix, RatMatrix, Scalar};
pub use snf::{complete_unimodular, hermite_rows, is_saturated, kernel, smith, Smith};
pub use torus::{
    psi_matrix, split_anisotropic_dims, theta, xi_from_torus, AnisotropicSplit, Base, ChiMatrix, Conductor, GaloisRep,
    Torus, TorusKind, TorusSpec,
};
