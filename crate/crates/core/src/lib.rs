//! Exact symbolic construction and verification of Courant algebroids,
//! vertex algebroids and Cech-de Rham characteristic cocycles on coordinate charts.

pub mod algebroid;
pub mod cartan;
pub mod cech;
pub mod courant;
pub mod error;
pub mod linalg;
pub mod ring;
pub mod sample;
pub mod vertex;

pub use error::{Error, Result};
