use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geom::{thickness, Polygon, Vec3};

/// Signed solid angle subtended by segment `p1 p2` as seen from segment `p3 p4`
/// (the Klenin-Langowski form of the Gauss integral for two straight segments).
pub fn pair_solid_angle(p1: Vec3, p2: Vec3, p3: Vec3, p4: Vec3) -> f64 {
    let r13 = p3 - p1;
    let r14 = p4 - p1;
    let r23 = p3 - p2;
    let r24 = p4 - p2;
    let faces = [r13.cross(&r14), r14.cross(&r24), r24.cross(&r23), r23.cross(&r13)];
    let mut units = [Vec3::zeros(); 4];
    for (u, f) in units.iter_mut().zip(&faces) {
        match f.try_normalize(1e-300) {
            Some(x) => *u = x,
            // coplanar segments subtend no solid angle
            None => return 0.0,
        }
    }
    // asin(u . v) written as pi/2 - angle(u, v), which stays accurate when the
    // faces are nearly coplanar and the dot product is close to +-1
    let omega: f64 = (0..4)
        .map(|k| {
            let (u, v) = (units[k], units[(k + 1) % 4]);
            PI / 2.0 - u.cross(&v).norm().atan2(u.dot(&v))
        })
        .sum();
    let orientation = (p4 - p3).cross(&(p2 - p1)).dot(&r13);
    omega * orientation.signum() * if orientation == 0.0 { 0.0 } else { 1.0 }
}

/// Writhe: the Gauss double integral over all pairs of non-adjacent edges, over 4 pi.
pub fn writhe(p: &Polygon) -> Result<f64> {
    if !thickness(p)?.embedded {
        return Err(Error::NonEmbedded { distance: 0.0 });
    }
    let n = p.len();
    let v = p.vertices();
    let mut total = 0.0;
    for i in 0..n {
        let (a0, a1) = (v[i], v[(i + 1) % n]);
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            total += pair_solid_angle(a0, a1, v[j], v[(j + 1) % n]);
        }
    }
    // each unordered pair stands for two ordered ones
    Ok(2.0 * total / (4.0 * PI))
}
