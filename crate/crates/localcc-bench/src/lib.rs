//! Shared fixtures for the pipeline benchmarks.

use localcc::*;

/// A solved complete instance ready for rounding benchmarks.
pub struct SolvedInstance {
    pub graph: SignedCompleteGraph,
    pub x: FractionalClustering,
}

pub fn solved_random_complete(n: usize, p_plus: f64, seed: u64) -> SolvedInstance {
    let graph = random_complete(n, p_plus, seed).expect("valid generator arguments");
    let solution = solve(&minimax_lp(&graph).expect("n >= 2")).expect("solvable");
    let x = fractional_from_solution(n, &solution);
    SolvedInstance { graph, x }
}
