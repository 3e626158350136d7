//! Courant algebroids on a chart: the extensions `Â_{∇,H} = Ω¹ ⊕ gl_r ⊕ T`, exact
//! algebroids `Q_H` (rank 0), their morphisms and Baer arithmetic.
//!
//! `H(ξ1,ξ2,•)` means `ι_{ξ2} ι_{ξ1} H`.

mod axioms;
mod baer;
mod lift;
mod morphism;
mod structure;

pub use axioms::{check_courant_axioms, jacobiator, Axiom, AxiomReport, AxiomResult, CourantAlgebroid, Residual, Witness};
pub use baer::{baer_pushout, baer_sum, courant_difference, torsor_twist, TorsorLabel, TorsorTwist};
pub use lift::{curvature_courant, isotropize, Lift};
pub use morphism::{
    change_of_connection, cs_form, exp_b, exp_b_bracket_defect, phi_change, phi_map, triple_composition, TwoFormMorphism,
};
pub use structure::{admissible_h, pontryagin_form, CourantElement, CourantStructure, Generator};
