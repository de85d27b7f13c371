//! Polyhedral critical points of a vertex function on an embedded surface.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::Result;
use crate::surface::CombinatorialSurface;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalReport {
    pub maxima: usize,
    pub minima: usize,
    /// Saddles counted with multiplicity.
    pub saddles: usize,
    /// `(vertex, multiplicity)` for every saddle vertex.
    pub saddle_multiplicities: Vec<(usize, usize)>,
    /// `Σ_v (1 - c_v / 2)` where `c_v` counts sign changes around the link.
    pub morse_sum: i64,
    pub chi: i64,
}

impl CriticalReport {
    pub fn consistent(&self) -> bool {
        self.morse_sum == self.chi
    }
}

/// Classifies every vertex by the sign changes of `u(w) - u(v)` as `w` runs
/// around the rotation at `v`. Equal values are ordered by vertex index, which
/// is a fixed symbolic perturbation, so every vertex is classifiable.
pub fn critical_points(surface: &CombinatorialSurface, u: &[f64]) -> Result<CriticalReport> {
    surface.graph.require_function(u)?;
    let above = |w: usize, v: usize| match u[w].total_cmp(&u[v]) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => w > v,
    };
    let mut report = CriticalReport {
        maxima: 0,
        minima: 0,
        saddles: 0,
        saddle_multiplicities: Vec::new(),
        morse_sum: 0,
        chi: surface.euler_characteristic,
    };
    for (v, link) in surface.rotation.0.iter().enumerate() {
        let signs: Vec<bool> = link.iter().map(|&w| above(w, v)).collect();
        let d = signs.len();
        let changes = (0..d).filter(|&k| signs[k] != signs[(k + 1) % d]).count();
        report.morse_sum += 1 - (changes / 2) as i64;
        match changes {
            0 if signs.iter().any(|&s| s) => report.minima += 1,
            0 => report.maxima += 1,
            2 => {}
            c => {
                let mult = c / 2 - 1;
                report.saddles += mult;
                report.saddle_multiplicities.push((v, mult));
            }
        }
    }
    Ok(report)
}
