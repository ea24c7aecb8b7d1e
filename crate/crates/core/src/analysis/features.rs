use crate::contact::{find_struts_near_thickness, DEFAULT_ACTIVATION_GAP};
use crate::error::Result;
use crate::geom::{normalize_thickness, turning_angles, Polygon};

/// Vertices within this many radians of the turning-angle bound are kinks.
pub const KINK_EXCESS_TOL: f64 = 1e-3;
/// Vertices turning less than this are straight.
pub const STRAIGHT_ANGLE_TOL: f64 = 1e-3;
const MIN_STRAIGHT_RUN: usize = 3;

/// Runs of vertex indices, each listed in cyclic order.
#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct Features {
    pub kink_runs: Vec<Vec<usize>>,
    pub straight_runs: Vec<Vec<usize>>,
    pub strut_free_spans: Vec<Vec<usize>>,
}

/// Maximal cyclic runs of indices where `flag` holds.
fn cyclic_runs(flag: &[bool]) -> Vec<Vec<usize>> {
    let n = flag.len();
    if flag.iter().all(|&f| f) {
        return vec![(0..n).collect()];
    }
    let Some(first_off) = flag.iter().position(|&f| !f) else {
        return Vec::new();
    };
    let mut runs = Vec::new();
    let mut current = Vec::new();
    for k in 1..=n {
        let i = (first_off + k) % n;
        if flag[i] {
            current.push(i);
        } else if !current.is_empty() {
            runs.push(std::mem::take(&mut current));
        }
    }
    runs
}

/// Kinks, straight stretches and strut-free stretches of a (nearly) tight polygon,
/// measured after scaling to unit thickness.
pub fn detect_features(p: &Polygon) -> Result<Features> {
    let q = normalize_thickness(p)?;
    let n = q.len();
    let lengths = q.edge_lengths();
    let angles = turning_angles(&q);
    let kink: Vec<bool> = (0..n)
        .map(|i| {
            let l = lengths[(i + n - 1) % n].min(lengths[i]);
            angles[i] - 2.0 * (l / 2.0).atan() >= -KINK_EXCESS_TOL
        })
        .collect();
    let straight: Vec<bool> = angles.iter().map(|&a| a <= STRAIGHT_ANGLE_TOL).collect();
    let mut touched = vec![false; n];
    for s in find_struts_near_thickness(&q, DEFAULT_ACTIVATION_GAP, 1.0) {
        for (edge, t) in [(s.edge_a, s.s), (s.edge_b, s.t)] {
            if t < 1.0 {
                touched[edge] = true;
            }
            if t > 0.0 {
                touched[(edge + 1) % n] = true;
            }
        }
    }
    let free: Vec<bool> = touched.iter().map(|&t| !t).collect();
    Ok(Features {
        kink_runs: cyclic_runs(&kink),
        straight_runs: cyclic_runs(&straight)
            .into_iter()
            .filter(|r| r.len() >= MIN_STRAIGHT_RUN)
            .collect(),
        strut_free_spans: cyclic_runs(&free),
    })
}
