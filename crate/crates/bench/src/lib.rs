//! Shared inputs for the benchmarks.

use graphcode::factorize::kotzig_p1f;
use graphcode::treecode::{build_treecode, Coloring, TreeCodeParams};

/// The 37-vertex, 3-leaf family with syndrome coloring.
pub fn treecode_37() -> TreeCodeParams {
    let f = kotzig_p1f(37).expect("37 is prime");
    build_treecode(37, 3, &f, Coloring::Syndrome, None).expect("feasible")
}
