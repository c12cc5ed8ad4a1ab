mod support;

use rand::rngs::StdRng;
use rand::SeedableRng;

use gozinta::feasibility::{
    check_witness, difference_feasible, is_feasible, solve, solve_values, Comparison, FeasibilityResult,
    LinExpr, LinearSystem,
};
use gozinta::Scalar;
use support::oracle::{oracle_point, random_system, to_linear_system, witness_holds};

#[test]
fn random_systems_agree_with_vertex_oracle() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let (mut feasible, mut difference) = (0, 0);
    for i in 0..1000 {
        let generated = random_system(&mut rng);
        let sys = to_linear_system(&generated);
        let expected = oracle_point(&generated).is_some();
        let result = solve(&sys).unwrap();
        assert_eq!(result.is_feasible(), expected, "system {i}:\n{sys}");
        assert_eq!(is_feasible(&sys).unwrap(), expected, "system {i}:\n{sys}");
        if let FeasibilityResult::Feasible(assignment) = &result {
            assert!(check_witness(&sys, assignment).unwrap(), "system {i}");
            let values = solve_values(&sys).unwrap().unwrap();
            assert!(witness_holds(&generated, &values), "system {i}");
            feasible += 1;
        }
        if let Some(verdict) = difference_feasible(&sys) {
            assert_eq!(verdict, expected, "system {i}");
            difference += 1;
        }
    }
    // Both verdicts and both solver routes are well represented.
    assert!((200..800).contains(&feasible), "{feasible} feasible");
    assert!(difference > 200, "{difference} difference systems");
}

#[test]
fn check_witness_rejects_boundary_points() {
    let mut sys = LinearSystem::new();
    let x = sys.add_var("x");
    let y = sys.add_var("y");
    sys.push(x, Comparison::Less, y);
    sys.push(LinExpr::constant(Scalar::one()), Comparison::LessEq, x);
    let on_edge = [("x", 1), ("y", 1)]
        .into_iter()
        .map(|(n, v)| (n.to_string(), Scalar::from_int(v)))
        .collect();
    assert!(!check_witness(&sys, &on_edge).unwrap());
    let inside = [("x", 1), ("y", 2)]
        .into_iter()
        .map(|(n, v)| (n.to_string(), Scalar::from_int(v)))
        .collect();
    assert!(check_witness(&sys, &inside).unwrap());
}

#[test]
fn difference_route_handles_mixed_strictness_cycles() {
    // x < y ≤ z ≤ x + 0 is empty, x ≤ y ≤ z ≤ x is a single point.
    for (strict_first, expected) in [(true, false), (false, true)] {
        let mut sys = LinearSystem::new();
        let x = sys.add_var("x");
        let y = sys.add_var("y");
        let z = sys.add_var("z");
        let first = if strict_first {
            Comparison::Less
        } else {
            Comparison::LessEq
        };
        sys.push(x, first, y);
        sys.push(y, Comparison::LessEq, z);
        sys.push(z, Comparison::LessEq, x);
        assert_eq!(difference_feasible(&sys), Some(expected));
        assert_eq!(solve(&sys).unwrap().is_feasible(), expected);
    }
}

#[test]
fn general_rows_skip_the_difference_route() {
    let mut sys = LinearSystem::new();
    let x = sys.add_var("x");
    let y = sys.add_var("y");
    sys.push(LinExpr::var(x) * &Scalar::from_int(2), Comparison::Less, y);
    assert_eq!(difference_feasible(&sys), None);
    assert!(is_feasible(&sys).unwrap());
}
