//! Rigidity columns and the length gradient against central finite differences.

mod common;

use common::oracles::{central_difference, relative_error};
use tightknot::contact::{
    detect_contacts, find_struts, kink_value, length_gradient, strut_value,
    ContactOptions,
};
use tightknot::geom::{normalize_thickness, polygon_length};

#[test]
fn rigidity_columns_match_finite_differences() {
    let mut rng = common::rng(3);
    let opts = ContactOptions {
        activation_gap: 0.4,
        kink_tolerance: 0.5,
    };
    let mut checked = (0, 0);
    for config in 0..20 {
        let p = normalize_thickness(&common::jittered_torus_knot(&mut rng)).unwrap();
        let contacts = detect_contacts(&p, &opts).unwrap();
        assert!(!contacts.is_empty(), "configuration {config} has no contacts");
        let dim = 3 * p.len();
        for (j, col) in contacts.rigidity.columns.iter().enumerate() {
            let mut analytic = vec![0.0; dim];
            col.axpy(contacts.gradient_norms[j], &mut analytic);
            let numeric = if j < contacts.struts.len() {
                let s = contacts.struts[j];
                checked.0 += 1;
                central_difference(&p, |q| strut_value(q, &s))
            } else {
                let k = contacts.kinks[j - contacts.struts.len()];
                checked.1 += 1;
                central_difference(&p, |q| kink_value(q, &k))
            };
            let err = relative_error(&analytic, &numeric);
            assert!(err <= 1e-5, "configuration {config}, column {j}: relative error {err:e}");
        }
    }
    assert!(checked.0 > 100 && checked.1 > 100, "too few contacts checked: {checked:?}");
}

#[test]
fn length_gradient_matches_finite_differences() {
    let mut rng = common::rng(4);
    for _ in 0..5 {
        let p = common::random_polygon(&mut rng, 17);
        let err = relative_error(&length_gradient(&p), &central_difference(&p, polygon_length));
        assert!(err <= 1e-7, "relative error {err:e}");
    }
}

#[test]
fn struts_vanish_on_thick_polygons() {
    let mut rng = common::rng(5);
    for _ in 0..10 {
        let p = normalize_thickness(&common::jittered_torus_knot(&mut rng)).unwrap();
        let thick = p.scaled(1.0 + 1e-6);
        assert!(find_struts(&thick, 0.0).unwrap().is_empty());
    }
}
