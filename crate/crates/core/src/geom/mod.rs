//! Geometric measurements of closed polygons.

pub mod hull;
mod measure;
mod polygon;
mod segment;
mod smooth;

pub use measure::{
    closest_nonlocal_pair, dcsd, local_radii, min_rad, normalize_thickness,
    polygon_length, ropelength, ropelength_with_bound, strut_window, thickness, turning_angles,
    ControllingFeature, EdgePair, ExclusionWindow, RopelengthValues, ThicknessBreakdown, LENGTH_TOL,
};
pub(crate) use measure::is_doubly_critical;
pub use polygon::{Polygon, Vec3};
pub use segment::{point_segment_distance, segment_distance, SegmentContact};
pub use smooth::smoothed_rop_bound;
