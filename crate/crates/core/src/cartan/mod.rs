//! Exterior calculus on a chart: forms, vector fields, pullbacks and `gl_r`-valued forms.
//!
//! A `p`-form acts on `p` vector fields by the determinant convention
//! `(dx1∧dx2)(∂1,∂2) = 1`, so `α(ξ1,…,ξp) = ι_{ξp}⋯ι_{ξ1}α`.

mod chart_map;
mod form;
pub mod literal;
mod matrix;
mod vector;

pub use chart_map::{pullback, ChartMap};
pub use form::{basis_degree, basis_from, basis_indices, ext_d, interior, lie_derivative, merge_sign, wedge, Basis, DiffForm};
pub use literal::{parse_form, parse_vector};
pub use matrix::{covariant_d, det, inverse, mat_bracket, mat_wedge_pair, MatrixForm};
pub use vector::{vf_bracket, VectorField};
