use super::polygon::Vec3;

/// Closest points between segments `p0 + s (p1 - p0)` and `q0 + t (q1 - q0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentContact {
    pub distance: f64,
    pub s: f64,
    pub t: f64,
}

/// Exact minimum distance between two non-degenerate segments with clamped parameters.
pub fn segment_distance(p0: Vec3, p1: Vec3, q0: Vec3, q1: Vec3) -> SegmentContact {
    let d1 = p1 - p0;
    let d2 = q1 - q0;
    let r = p0 - q0;
    let a = d1.norm_squared();
    let e = d2.norm_squared();
    let f = d2.dot(&r);
    let c = d1.dot(&r);
    let b = d1.dot(&d2);
    let denom = a * e - b * b;

    let mut s = if denom > 1e-14 * a * e {
        ((b * f - c * e) / denom).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let mut t = (b * s + f) / e;
    if t < 0.0 {
        t = 0.0;
        s = (-c / a).clamp(0.0, 1.0);
    } else if t > 1.0 {
        t = 1.0;
        s = ((b - c) / a).clamp(0.0, 1.0);
    }
    let distance = ((p0 + d1 * s) - (q0 + d2 * t)).norm();
    SegmentContact { distance, s, t }
}

/// Distance from a point to a segment.
pub fn point_segment_distance(x: Vec3, a: Vec3, b: Vec3) -> f64 {
    let d = b - a;
    let t = ((x - a).dot(&d) / d.norm_squared()).clamp(0.0, 1.0);
    (a + d * t - x).norm()
}
