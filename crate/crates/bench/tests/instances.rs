use resqpass::{solve, SolverConfig, Termination};
use resqpass_bench::{contact, tuneable, unconstrained};

#[test]
fn instances_are_deterministic() {
    assert_eq!(unconstrained(60, 30).b, unconstrained(60, 30).b);
    assert_eq!(tuneable(8).lower, tuneable(8).lower);
}

#[test]
fn benchmarked_solves_converge() {
    for p in [unconstrained(100, 50), tuneable(8)] {
        let out = solve(&p, &SolverConfig::default()).unwrap();
        assert_eq!(out.termination, Termination::ResidualTol);
    }
    let out = solve(&contact(8), &SolverConfig { tol: 1e-6, ..Default::default() }).unwrap();
    assert!(out.x.iter().all(|&v| (-1e-9..=0.1 + 1e-9).contains(&v)));
}
