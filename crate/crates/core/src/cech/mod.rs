//! Formal covers, the Čech–de Rham total complex and characteristic cocycles.

mod classes;
mod cover;
mod eva;
mod solve;

pub use classes::{
    adjoint_transport, ch2_cocycle, cotangent_bundle, gauge_transform, hat_p_assembly, induced_connections,
    pontryagin_cocycle, primitive_cochain, transport_frame, HatP, InducedConnections, Pontryagin, Seed,
};
pub use cover::{cech_d, total_d, BundleCocycle, CechCochain, CoverSpec, TotalCochain};
pub use eva::{eva_class_cocycle, EvaClass};
pub use solve::{coboundary_solve, DEFAULT_DEGREE_BOUND};
