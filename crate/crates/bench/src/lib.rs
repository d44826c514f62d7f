//! Workloads shared by the criterion benchmarks.

use reap_core::{Coloring, TreeShape};

/// A fixed, irregular coloring of `T(h, i)`: leaf `x` gets `(x * 7 + x / 3) mod j`.
pub fn scrambled(i: usize, h: usize, j: usize) -> Coloring {
    let shape = TreeShape::new(i, h).expect("valid shape");
    let leaves = (0..shape.leaf_count())
        .map(|x| (x * 7 + x / 3) % j)
        .collect();
    Coloring::new(shape, j, leaves).expect("valid coloring")
}
