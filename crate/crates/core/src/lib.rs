//! Tightening polygonal knots towards ropelength minimizers.

pub mod analysis;
pub mod composite;
pub mod contact;
pub mod error;
pub mod geom;
pub mod io;
pub mod snnls;
pub mod starts;
pub mod tighten;

pub use error::{Error, Result};
pub use geom::{Polygon, Vec3};
