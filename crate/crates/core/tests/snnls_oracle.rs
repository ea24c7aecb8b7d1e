//! SNNLS against an exhaustive subset oracle and the KKT conditions.

mod common;

use common::oracles::{kkt_violation, objective_and_oracle, random_snnls_instance};
use rand::Rng;
use tightknot::contact::RigidityMatrix;
use tightknot::snnls::solve_snnls;

#[test]
fn matches_exhaustive_oracle_on_200_instances() {
    let mut rng = common::rng(11);
    for case in 0..200 {
        let rows = rng.gen_range(3..15);
        let cols = rng.gen_range(1..11);
        let (a, g) = random_snnls_instance(&mut rng, rows, cols);
        let s = solve_snnls(&a, &g).unwrap();
        let (ours, oracle, scale) = objective_and_oracle(&a, &g, &s.lambda);
        assert!(
            (ours - oracle).abs() <= 1e-8 * scale.max(1e-300),
            "case {case}: objective {ours} vs oracle {oracle}"
        );
        check_kkt(&a, &g, &s.lambda, &s.resolved);
    }
}

fn check_kkt(a: &RigidityMatrix, g: &[f64], lambda: &[f64], resolved: &[f64]) {
    if let Some(msg) = kkt_violation(a, g, lambda, resolved) {
        panic!("{msg}");
    }
}

#[test]
fn kkt_holds_on_larger_instances() {
    let mut rng = common::rng(12);
    for _ in 0..50 {
        let rows = rng.gen_range(30..120);
        let cols = rng.gen_range(10..150);
        let (a, g) = random_snnls_instance(&mut rng, rows, cols);
        let s = solve_snnls(&a, &g).unwrap();
        check_kkt(&a, &g, &s.lambda, &s.resolved);
    }
}

#[test]
fn rigidity_matrix_of_a_tight_knot_is_solved() {
    use tightknot::contact::{detect_contacts, length_gradient, ContactOptions};
    let p = tightknot::io::read_polygon(common::fixture("primes/3_1.txt")).unwrap();
    let c = detect_contacts(&p, &ContactOptions::default()).unwrap();
    let g = length_gradient(&p);
    let s = solve_snnls(&c.rigidity, &g).unwrap();
    check_kkt(&c.rigidity, &g, &s.lambda, &s.resolved);
    assert!(s.residual_fraction <= 0.01);
}
