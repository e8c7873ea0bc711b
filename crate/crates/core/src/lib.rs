//! Numerical experiments around Crouzeix's conjecture: model spaces of finite
//! Blaschke products, numerical ranges, conformal maps onto the disk, extremal
//! functions and their boundary measures.

pub mod boundary_measures;
pub mod cli;
pub mod conformal_map;
pub mod error;
pub mod extremal_search;
pub mod hyp_geometry;
pub mod io;
pub mod linalg;
pub mod matrix_functions;
pub mod model_space;
pub mod numerical_range;
pub mod pick_oracle;
pub mod pipeline;
pub mod spectral;
pub mod verify;

pub use error::{CrxError, Result};
