//! Computational potential theory on finite-gap subsets of the real line
//! and isospectral Toda dynamics on periodic Jacobi operators.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod equilibrium;
pub mod error;
pub mod jacobi_periodic;
pub mod polynomial;
pub mod quadrature;
pub mod scan;
pub mod spectral_set;
pub mod toda;

pub use equilibrium::{
    capacity, critical_polynomial, density_at, find_integer_relation, frequencies,
    normalize_capacity, omega_jacobian, submersion_defect, EquilibriumData, IntegerRelation,
};
pub use error::{Error, Result};
pub use jacobi_periodic::{BandSpectrum, Floquet, PeriodicJacobi};
pub use polynomial::RealPolynomial;
pub use spectral_set::FiniteGapSet;
