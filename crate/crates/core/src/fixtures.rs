//! Built-in fixtures: the two functions on the 20-cycle with one and two
//! peaks, and a graph with an adjacent twin pair whose λ₂-eigenfunction
//! takes equal values on the twins.

use crate::graph::Graph;

/// Single-maximum function on `cycle(20)`: `sin(2πi/20)`.
pub fn c20_single_peak() -> Vec<f64> {
    (0..20)
        .map(|i| (2.0 * std::f64::consts::PI * i as f64 / 20.0).sin())
        .collect()
}

/// Two maxima separated by a dip to `1/2`, two minima separated by a bump to
/// `-1/2`. Zero at vertices 0 and 10, so the zero level still cuts the cycle
/// into exactly two weak sign-graphs.
pub fn c20_two_peaks() -> Vec<f64> {
    let half = [0.3, 1.0, 1.0, 1.0, 0.5, 1.0, 1.0, 1.0, 0.3];
    let mut u = Vec::with_capacity(20);
    u.push(0.0);
    u.extend(half);
    u.push(0.0);
    u.extend(half.iter().map(|x| -x));
    u
}

/// `cycle(6)` plus vertex 6, a twin of vertex 0 (same neighbours 1 and 5),
/// joined to it by an edge of weight 5. The antisymmetric twin mode sits at
/// eigenvalue 12, far above λ₂, so every λ₂-eigenfunction agrees on 0 and 6.
pub fn twin_graph() -> Graph {
    let mut pairs: Vec<(usize, usize)> = (0..6).map(|i| (i, (i + 1) % 6)).collect();
    pairs.extend([(6, 1), (6, 5), (0, 6)]);
    let mut weights = vec![1.0; 8];
    weights.push(5.0);
    Graph::new(7, &pairs, Some(&weights)).expect("valid fixture")
}
