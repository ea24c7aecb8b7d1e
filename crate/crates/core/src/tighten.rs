//! Constrained gradient descent on length.
//!
//! Each step normalizes the polygon to unit thickness, detects struts and
//! kinks, removes from the length gradient the part the contacts can push
//! back against (an SNNLS projection), moves along what is left, repairs any
//! constraint violations and rescales to unit thickness again. A step is kept
//! only if the length went down.

use std::collections::HashSet;
use std::path::PathBuf;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::contact::{
    detect_contacts, find_kinks, find_struts_near_thickness, kink_gradient, kink_value,
    length_gradient, strut_gradient, ContactOptions, ContactSet, SparseColumn,
};
use crate::error::{Error, Result};
use crate::geom::{normalize_thickness, polygon_length, Polygon, Vec3};
use crate::snnls::{solve_snnls_warm, SnnlsSolution};

/// Consecutive rejected steps before a run counts as stalled.
pub const MAX_REJECTIONS: usize = 10;
/// Worst constraint violation left by [`correct_constraints`].
pub const CORRECTION_TOL: f64 = 1e-6;
const MAX_CORRECTIONS: usize = 10;
const MAX_VIOLATION: f64 = 0.05;
const ACCEPTS_BEFORE_GROWTH: usize = 5;

#[derive(Debug, Clone, PartialEq)]
pub struct TightenConfig {
    pub target_residual: f64,
    pub max_steps: usize,
    /// Largest vertex displacement per step, in units of thickness.
    pub initial_step: f64,
    /// Steps between equilateral resamplings; 0 disables resampling.
    pub resample_every: usize,
    /// Edges per unit ropelength used when resampling.
    pub target_resolution: f64,
    pub rng_seed: u64,
    pub contacts: ContactOptions,
    /// Stop when length fell by less than `stall_tolerance` (relative) over this many steps.
    pub stall_window: usize,
    pub stall_tolerance: f64,
    /// Write a checkpoint polygon every this many steps; 0 disables.
    pub checkpoint_every: usize,
    pub checkpoint_dir: Option<PathBuf>,
}

impl Default for TightenConfig {
    fn default() -> Self {
        TightenConfig {
            target_residual: 0.01,
            max_steps: 20_000,
            initial_step: 0.01,
            resample_every: 100,
            target_resolution: 8.0,
            rng_seed: 0,
            contacts: ContactOptions::default(),
            stall_window: 200,
            stall_tolerance: 1e-9,
            checkpoint_every: 0,
            checkpoint_dir: None,
        }
    }
}

impl TightenConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.target_residual > 0.0 && self.target_residual < 1.0) {
            return Err(Error::InvalidInput(format!(
                "target residual {} must lie in (0, 1)",
                self.target_residual
            )));
        }
        if self.target_resolution < 8.0 {
            return Err(Error::InvalidInput(format!(
                "target resolution {} is below 8",
                self.target_resolution
            )));
        }
        if !(self.initial_step > 0.0 && self.initial_step.is_finite()) {
            return Err(Error::InvalidInput("initial step must be positive".into()));
        }
        Ok(())
    }
}

/// State of the polygon at the start of one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub length: f64,
    pub thickness: f64,
    pub residual: f64,
    pub strut_count: usize,
    pub kink_count: usize,
}

#[derive(Debug, Clone)]
pub struct TightenResult {
    /// Final polygon, normalized to thickness 1.
    pub polygon: Polygon,
    pub trace: Vec<StepRecord>,
    pub converged: bool,
    pub steps_taken: usize,
}

impl TightenResult {
    /// Ropelength of the final polygon (its length, since thickness is 1).
    pub fn prop(&self) -> f64 {
        polygon_length(&self.polygon)
    }

    pub fn residual(&self) -> f64 {
        self.trace.last().map_or(1.0, |r| r.residual)
    }

    pub fn trace_csv(&self) -> String {
        trace_csv(&self.trace)
    }
}

pub fn trace_csv(trace: &[StepRecord]) -> String {
    let mut out = String::from("step,length,thickness,residual,strut_count,kink_count\n");
    for r in trace {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.step, r.length, r.thickness, r.residual, r.strut_count, r.kink_count
        ));
    }
    out
}

/// Contacts at a polygon and the projection of its length gradient against them.
#[derive(Debug, Clone)]
pub struct Projection {
    pub contacts: ContactSet,
    pub solution: SnnlsSolution,
}

/// Detects contacts on a unit-thickness polygon and projects the length gradient.
pub fn project_gradient(p: &Polygon, opts: &ContactOptions) -> Result<Projection> {
    project_gradient_warm(p, opts, &HashSet::new())
}

/// Identifies a contact across nearby polygons with the same vertex count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum ContactKey {
    Strut(usize, usize),
    Kink(usize, usize),
}

fn contact_keys(contacts: &ContactSet) -> impl Iterator<Item = ContactKey> + '_ {
    contacts
        .struts
        .iter()
        .map(|s| ContactKey::Strut(s.edge_a, s.edge_b))
        .chain(contacts.kinks.iter().map(|k| ContactKey::Kink(k.vertex, k.edge)))
}

fn loaded_keys(proj: &Projection) -> HashSet<ContactKey> {
    contact_keys(&proj.contacts)
        .zip(&proj.solution.lambda)
        .filter(|(_, &l)| l > 0.0)
        .map(|(k, _)| k)
        .collect()
}

fn project_gradient_warm(
    p: &Polygon,
    opts: &ContactOptions,
    warm: &HashSet<ContactKey>,
) -> Result<Projection> {
    let contacts = detect_contacts(p, opts)?;
    let g = length_gradient(p);
    let start: Vec<usize> = contact_keys(&contacts)
        .enumerate()
        .filter(|(_, k)| warm.contains(k))
        .map(|(i, _)| i)
        .collect();
    let solution = solve_or_best(&contacts, &g, &start)?;
    Ok(Projection { contacts, solution })
}

fn solve_or_best(contacts: &ContactSet, rhs: &[f64], warm: &[usize]) -> Result<SnnlsSolution> {
    match solve_snnls_warm(&contacts.rigidity, rhs, warm) {
        Ok(s) => Ok(s),
        Err(Error::NoConvergence { best, .. }) => Ok(*best),
        Err(e) => Err(e),
    }
}

/// Fraction of the length gradient left after resolving it against the contacts.
///
/// The polygon is first scaled to unit thickness. A polygon with no contacts
/// has residual 1.
pub fn residual_of(p: &Polygon) -> Result<f64> {
    let q = normalize_thickness(p)?;
    let proj = project_gradient(&q, &ContactOptions::default())?;
    Ok(if proj.contacts.is_empty() {
        1.0
    } else {
        proj.solution.residual_fraction
    })
}

/// Pushes a unit-thickness polygon back to feasibility after a small move.
///
/// Violated struts (distance below 2) and kinks (local radius below 1) are
/// re-detected on every iteration and removed with a least-norm Newton step.
/// A contact violated at any iteration stays in the working set and is held
/// at its current value once satisfied, so repairing one constraint does not
/// push a neighbour back over.
pub fn correct_constraints(p: &Polygon, opts: &ContactOptions) -> Result<Polygon> {
    let mut q = p.clone();
    let mut working: HashSet<ContactKey> = HashSet::new();
    for iteration in 0..=MAX_CORRECTIONS {
        let mut columns = Vec::new();
        let mut targets = Vec::new();
        let mut worst = 0.0f64;
        let mut worst_key = None;
        let mut consider = |key: ContactKey, value: f64, grad: &dyn Fn() -> Result<Vec<(usize, Vec3)>>| -> Result<()> {
            if -value > worst {
                worst = -value;
                worst_key = Some(key);
            }
            if value < 0.0 {
                working.insert(key);
            }
            if working.contains(&key) {
                columns.push(SparseColumn::from_vertex_gradients(&grad()?));
                targets.push(value.min(0.0));
            }
            Ok(())
        };
        for s in find_struts_near_thickness(&q, opts.activation_gap, 1.0) {
            consider(ContactKey::Strut(s.edge_a, s.edge_b), s.gap, &|| strut_gradient(&q, &s))?;
        }
        for k in find_kinks(&q, opts.kink_tolerance)? {
            consider(ContactKey::Kink(k.vertex, k.edge), kink_value(&q, &k), &|| kink_gradient(&q, &k))?;
        }
        if worst <= CORRECTION_TOL {
            return Ok(q);
        }
        if worst > MAX_VIOLATION {
            return Err(Error::StepRejected(format!(
                "constraint violation {worst:.3e} is too large to correct ({worst_key:?}, iteration {iteration})"
            )));
        }
        if iteration == MAX_CORRECTIONS {
            break;
        }
        let delta = least_norm_displacement(q.len(), &columns, &targets)?;
        q = q.displaced(&delta, 1.0);
    }
    Err(Error::StepRejected(
        "constraint correction did not converge".into(),
    ))
}

/// Smallest displacement `d` with `A^T d = -values` (slightly regularized).
fn least_norm_displacement(n: usize, columns: &[SparseColumn], values: &[f64]) -> Result<Vec<f64>> {
    let k = columns.len();
    let mut scratch = vec![0.0; 3 * n];
    let mut gram = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        columns[i].axpy(1.0, &mut scratch);
        for j in 0..=i {
            let v = columns[j].dot_dense(&scratch);
            gram[(i, j)] = v;
            gram[(j, i)] = v;
        }
        columns[i].axpy(-1.0, &mut scratch);
    }
    let trace = (0..k).map(|i| gram[(i, i)]).sum::<f64>() / k as f64;
    for i in 0..k {
        gram[(i, i)] += 1e-10 * trace;
    }
    let rhs = DVector::from_iterator(k, values.iter().map(|v| -v));
    let y = gram
        .cholesky()
        .ok_or_else(|| Error::StepRejected("singular correction system".into()))?
        .solve(&rhs);
    let mut delta = vec![0.0; 3 * n];
    for (c, &yi) in columns.iter().zip(y.iter()) {
        c.axpy(yi, &mut delta);
    }
    Ok(delta)
}

/// Resamples `p` at `n` points equally spaced in arc length, starting at vertex 0.
pub fn resample_equilateral(p: &Polygon, n: usize) -> Result<Polygon> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("cannot resample to {n} vertices")));
    }
    let lengths = p.edge_lengths();
    let total: f64 = lengths.iter().sum();
    let spacing = total / n as f64;
    let mut out = Vec::with_capacity(n);
    let mut edge = 0;
    let mut start = 0.0;
    for k in 0..n {
        let target = spacing * k as f64;
        while edge + 1 < lengths.len() && start + lengths[edge] < target {
            start += lengths[edge];
            edge += 1;
        }
        let (a, b) = p.edge(edge);
        let s = ((target - start) / lengths[edge]).clamp(0.0, 1.0);
        out.push(a + (b - a) * s);
    }
    Polygon::new(out)
}

/// Stateful tightening run.
#[derive(Debug, Clone)]
pub struct Tightener {
    cfg: TightenConfig,
    polygon: Polygon,
    step_size: f64,
    accepted_in_row: usize,
    steps: usize,
    trace: Vec<StepRecord>,
    warm: HashSet<ContactKey>,
}

impl Tightener {
    pub fn new(p: &Polygon, cfg: &TightenConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Tightener {
            cfg: cfg.clone(),
            polygon: normalize_thickness(p)?,
            step_size: cfg.initial_step,
            accepted_in_row: 0,
            steps: 0,
            trace: Vec::new(),
            warm: HashSet::new(),
        })
    }

    pub fn polygon(&self) -> &Polygon {
        &self.polygon
    }

    pub fn step_size(&self) -> f64 {
        self.step_size
    }

    pub fn trace(&self) -> &[StepRecord] {
        &self.trace
    }

    fn record(&self, proj: &Projection) -> StepRecord {
        StepRecord {
            step: self.steps,
            length: polygon_length(&self.polygon),
            thickness: 1.0,
            residual: if proj.contacts.is_empty() {
                1.0
            } else {
                proj.solution.residual_fraction
            },
            strut_count: proj.contacts.struts.len(),
            kink_count: proj.contacts.kinks.len(),
        }
    }

    /// Moves along the resolved direction, halving the step until length decreases.
    fn advance(&mut self, resolved: &[f64]) -> Result<()> {
        let max_move = resolved
            .chunks_exact(3)
            .map(|c| Vec3::new(c[0], c[1], c[2]).norm())
            .fold(0.0, f64::max);
        if max_move == 0.0 {
            return Err(Error::Stalled { rejections: 0 });
        }
        let len0 = polygon_length(&self.polygon);
        for _ in 0..MAX_REJECTIONS {
            let trial = self.polygon.displaced(resolved, -self.step_size / max_move);
            let outcome = correct_constraints(&trial, &self.cfg.contacts)
                .and_then(|q| normalize_thickness(&q));
            if let Ok(q) = &outcome {
                if polygon_length(q) < len0 {
                    self.polygon = q.clone();
                    self.accepted_in_row += 1;
                    if self.accepted_in_row >= ACCEPTS_BEFORE_GROWTH {
                        self.step_size = (2.0 * self.step_size).min(self.cfg.initial_step);
                        self.accepted_in_row = 0;
                    }
                    return Ok(());
                }
            }
            self.step_size /= 2.0;
            self.accepted_in_row = 0;
        }
        Err(Error::Stalled {
            rejections: MAX_REJECTIONS,
        })
    }

    fn resample(&mut self) {
        let prop = polygon_length(&self.polygon);
        let n = (self.cfg.target_resolution * prop).ceil() as usize;
        let resampled = resample_equilateral(&self.polygon, n.max(3))
            .and_then(|q| correct_constraints(&q, &self.cfg.contacts))
            .and_then(|q| normalize_thickness(&q));
        if let Ok(q) = resampled {
            self.polygon = q;
            self.warm.clear();
        }
    }

    fn checkpoint(&self) -> Result<()> {
        if self.cfg.checkpoint_every == 0 || self.steps % self.cfg.checkpoint_every != 0 {
            return Ok(());
        }
        if let Some(dir) = &self.cfg.checkpoint_dir {
            let path = dir.join(format!("checkpoint_{:06}.txt", self.steps));
            crate::io::write_polygon(path, &self.polygon)?;
        }
        Ok(())
    }

    fn length_stalled(&self) -> bool {
        let w = self.cfg.stall_window;
        if w == 0 || self.trace.len() <= w {
            return false;
        }
        let now = self.trace[self.trace.len() - 1].length;
        let then = self.trace[self.trace.len() - 1 - w].length;
        (then - now) / then < self.cfg.stall_tolerance
    }

    /// Runs until the residual target, the step limit, or a stall.
    pub fn run(mut self) -> Result<TightenResult> {
        let mut converged = false;
        loop {
            let proj = project_gradient_warm(&self.polygon, &self.cfg.contacts, &self.warm)?;
            self.warm = loaded_keys(&proj);
            let record = self.record(&proj);
            self.trace.push(record);
            if record.residual <= self.cfg.target_residual {
                converged = true;
                break;
            }
            if self.steps >= self.cfg.max_steps || self.length_stalled() {
                break;
            }
            match self.advance(&proj.solution.resolved) {
                Ok(()) => {}
                Err(Error::Stalled { .. }) => break,
                Err(e) => return Err(e),
            }
            self.steps += 1;
            if self.cfg.resample_every > 0 && self.steps % self.cfg.resample_every == 0 {
                self.resample();
            }
            self.checkpoint()?;
        }
        Ok(TightenResult {
            polygon: self.polygon,
            trace: self.trace,
            converged,
            steps_taken: self.steps,
        })
    }
}

/// A single step from `p` (normalized first) with the configured initial step size.
pub fn step(p: &Polygon, cfg: &TightenConfig) -> Result<(Polygon, StepRecord)> {
    let mut t = Tightener::new(p, cfg)?;
    let proj = project_gradient(&t.polygon, &cfg.contacts)?;
    let record = t.record(&proj);
    t.advance(&proj.solution.resolved)?;
    Ok((t.polygon, record))
}

pub fn tighten(p: &Polygon, cfg: &TightenConfig) -> Result<TightenResult> {
    Tightener::new(p, cfg)?.run()
}

/// A rotation about a randomly placed circle: points swirl around the circle's core.
#[derive(Debug, Clone, Copy)]
struct ToroidalField {
    center: Vec3,
    axis: Vec3,
    radius: f64,
    omega: f64,
}

impl ToroidalField {
    fn random(rng: &mut ChaCha8Rng, p: &Polygon) -> Self {
        let size = p.bounding_box_diagonal();
        let axis = random_unit(rng);
        let center = p.centroid() + random_unit(rng) * (0.25 * size * rng.gen::<f64>());
        ToroidalField {
            center,
            axis,
            radius: size * rng.gen_range(0.1..0.5),
            omega: if rng.gen::<bool>() { 1.0 } else { -1.0 },
        }
    }

    fn at(&self, v: Vec3) -> Vec3 {
        let w = v - self.center;
        let planar = w - self.axis * w.dot(&self.axis);
        let radial = if planar.norm() > 1e-12 {
            planar.normalize()
        } else {
            self.axis.cross(&Vec3::x()).try_normalize(1e-12).unwrap_or_else(Vec3::y)
        };
        let core = self.center + radial * self.radius;
        let tangent = self.axis.cross(&radial);
        tangent.cross(&(v - core)) * self.omega
    }
}

fn random_unit(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let n = v.norm();
        if n > 1e-3 && n <= 1.0 {
            return v / n;
        }
    }
}

/// Steps between redraws of the mangle force field.
pub const MANGLE_REDRAW: usize = 50;

/// Randomized exploration: pushes the polygon along random toroidal force
/// fields resolved against its contacts. The result has unit thickness and
/// the same vertex count as `p`.
pub fn mangle(p: &Polygon, seed: u64, steps: usize) -> Result<Polygon> {
    let opts = ContactOptions::default();
    let n = p.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut q = normalize_thickness(p)?;
    let mean_edge = polygon_length(&q) / n as f64;
    let mut field = ToroidalField::random(&mut rng, &q);
    let mut h = 0.25 * mean_edge;
    for i in 0..steps {
        if i > 0 && i % MANGLE_REDRAW == 0 {
            field = ToroidalField::random(&mut rng, &q);
            if let Ok(r) = resample_equilateral(&q, n)
                .and_then(|r| correct_constraints(&r, &opts))
                .and_then(|r| normalize_thickness(&r))
            {
                q = r;
            }
        }
        let force: Vec<f64> = q.vertices().iter().flat_map(|&v| {
            let f = field.at(v);
            [f.x, f.y, f.z]
        }).collect();
        let contacts = match detect_contacts(&q, &opts) {
            Ok(c) => c,
            Err(_) => break,
        };
        let neg: Vec<f64> = force.iter().map(|f| -f).collect();
        let sol = solve_or_best(&contacts, &neg, &[])?;
        // motion = f + A lambda = -(resolved)
        let max_move = sol
            .resolved
            .chunks_exact(3)
            .map(|c| Vec3::new(c[0], c[1], c[2]).norm())
            .fold(0.0, f64::max);
        if max_move == 0.0 {
            continue;
        }
        let mut moved = false;
        for _ in 0..MAX_REJECTIONS {
            let trial = q.displaced(&sol.resolved, -h / max_move);
            if let Ok(r) = correct_constraints(&trial, &opts).and_then(|r| normalize_thickness(&r)) {
                q = r;
                moved = true;
                break;
            }
            h /= 2.0;
        }
        if !moved {
            break;
        }
        h = (2.0 * h).min(0.25 * mean_edge);
    }
    let r = resample_equilateral(&q, n)
        .and_then(|r| correct_constraints(&r, &opts))
        .and_then(|r| normalize_thickness(&r));
    Ok(r.unwrap_or(q))
}

/// Number of worker threads: `TIGHTKNOT_THREADS` when set, otherwise rayon's default.
pub fn thread_count() -> usize {
    std::env::var("TIGHTKNOT_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(rayon::current_num_threads)
}

/// Runs `f` on a pool capped by [`thread_count`].
pub fn with_thread_cap<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    match rayon::ThreadPoolBuilder::new().num_threads(thread_count()).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Tightens every start and returns the shortest result (lowest index on ties).
pub fn best_of_ensemble(starts: &[Polygon], cfg: &TightenConfig) -> Result<TightenResult> {
    if starts.is_empty() {
        return Err(Error::EmptyEnsemble);
    }
    let results: Vec<Result<TightenResult>> =
        with_thread_cap(|| starts.par_iter().map(|s| tighten(s, cfg)).collect());
    let mut best: Option<TightenResult> = None;
    let mut first_error = None;
    for r in results {
        match r {
            Ok(r) => {
                if best.as_ref().map_or(true, |b| r.prop() < b.prop()) {
                    best = Some(r);
                }
            }
            Err(e) => {
                first_error.get_or_insert(e);
            }
        }
    }
    best.ok_or_else(|| first_error.unwrap_or(Error::EmptyEnsemble))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::starts::{ellipse, regular_polygon};

    #[test]
    fn correction_is_identity_without_violations() {
        let p = normalize_thickness(&regular_polygon(32, 1.0)).unwrap();
        let q = correct_constraints(&p.scaled(1.01), &ContactOptions::default()).unwrap();
        assert_eq!(q, p.scaled(1.01));
    }

    #[test]
    fn resampling_gives_nearly_equal_edges() {
        let p = ellipse(50, 3.0, 1.0);
        let q = resample_equilateral(&p, 80).unwrap();
        let l = q.edge_lengths();
        let mean = l.iter().sum::<f64>() / l.len() as f64;
        assert!(l.iter().all(|x| (x - mean).abs() < 0.05 * mean));
    }

    #[test]
    fn ellipse_step_decreases_length() {
        let p = ellipse(64, 2.0, 1.0);
        let before = polygon_length(&normalize_thickness(&p).unwrap());
        let (q, _) = step(&p, &TightenConfig::default()).unwrap();
        assert!(polygon_length(&q) < before);
    }

    #[test]
    fn config_validation() {
        let mut cfg = TightenConfig::default();
        cfg.target_residual = 1.5;
        assert!(cfg.validate().is_err());
        cfg.target_residual = 0.01;
        cfg.target_resolution = 4.0;
        assert!(cfg.validate().is_err());
    }
}
