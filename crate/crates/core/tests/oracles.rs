mod common;

use common::{argument_principle_trials, laurent_trials};

#[test]
fn argument_principle_matches_lattice_enumeration() {
    let trials = argument_principle_trials(100, 41);
    for t in &trials {
        assert_eq!(t.counted, t.oracle, "λ = {}, r = {}", t.lambda, t.radius);
    }
    assert!(trials.iter().any(|t| t.oracle > 3));
}

#[test]
fn laurent_solver_matches_brute_force() {
    let trials = laurent_trials(20, 5);
    for t in &trials {
        assert_eq!(t.counted, t.oracle, "supports {:?}", t.supports);
    }
    assert!(trials.iter().any(|t| t.oracle > 0));
}
