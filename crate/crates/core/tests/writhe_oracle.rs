//! Writhe against a Monte-Carlo estimate of the Gauss double integral.

mod common;

use common::oracles::monte_carlo_writhe;
use tightknot::analysis::writhe;

#[test]
fn agrees_with_monte_carlo_on_20_knots() {
    let mut shapes = common::rng(31);
    for case in 0..20 {
        let p = common::jittered_torus_knot(&mut shapes);
        let exact = writhe(&p).unwrap();
        let mut samples = common::rng(1000 + case);
        let (estimate, sigma) = monte_carlo_writhe(&p, 1_000_000, &mut samples);
        assert!(
            (exact - estimate).abs() <= 3.0 * sigma,
            "case {case}: exact {exact}, Monte Carlo {estimate} +- {sigma}"
        );
    }
}
