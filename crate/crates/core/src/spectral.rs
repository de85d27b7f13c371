//! Laplacian and Schrödinger operators, their spectra, degeneracy grouping
//! and the second-eigenvalue eigenspace.

use serde::{Deserialize, Serialize};

use crate::eigen::symmetric_eigen;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default relative gap below which consecutive eigenvalues are merged.
pub const DEFAULT_REL_TOL: f64 = 1e-8;
/// Orthogonality tolerance for eigenvector bases.
pub const TOL_ORTH: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    Laplacian,
    Schroedinger,
}

/// Dense symmetric operator `H = Δ + diag(V)` on the vertices of a graph.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricOperator {
    n: usize,
    matrix: Vec<f64>,
    kind: OperatorKind,
    potential: Option<Vec<f64>>,
}

impl SymmetricOperator {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn potential(&self) -> Option<&[f64]> {
        self.potential.as_deref()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[i * self.n + j]
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.matrix
    }

    /// Applies the operator to `x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.matrix
            .chunks_exact(self.n)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// Weighted Laplacian of `g`: `Δ_ij = -w_ij` on edges and `Δ_ii` the negated
/// off-diagonal row sum. With a potential the result is `Δ + diag(V)`.
pub fn build_operator(g: &Graph, potential: Option<&[f64]>) -> Result<SymmetricOperator> {
    let n = g.n_vertices();
    if let Some(p) = potential {
        if p.len() != n {
            return Err(Error::LengthMismatch {
                what: "potential",
                expected: n,
                actual: p.len(),
            });
        }
    }
    let mut m = vec![0.0; n * n];
    for e in g.edges() {
        m[e.u * n + e.v] = -e.weight;
        m[e.v * n + e.u] = -e.weight;
    }
    for i in 0..n {
        let off: f64 = (0..n).filter(|&j| j != i).map(|j| m[i * n + j]).sum();
        m[i * n + i] = -off;
    }
    if let Some(p) = potential {
        for (i, vi) in p.iter().enumerate() {
            m[i * n + i] += vi;
        }
    }
    Ok(SymmetricOperator {
        n,
        matrix: m,
        kind: if potential.is_some() {
            OperatorKind::Schroedinger
        } else {
            OperatorKind::Laplacian
        },
        potential: potential.map(<[f64]>::to_vec),
    })
}

/// Ascending eigenvalues with orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub kind: OperatorKind,
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[k]` pairs with `eigenvalues[k]`.
    pub eigenvectors: Vec<Vec<f64>>,
    /// `max_k ||M u_k - λ_k u_k||_2`.
    pub residual_norm: f64,
}

impl Spectrum {
    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
    }

    pub fn groups(&self, rel_tol: f64) -> Vec<EigenGroup> {
        group_eigenvalues(self, rel_tol)
    }
}

/// Flips `x` so that its first entry of largest magnitude is positive.
pub fn canonical_sign(x: &mut [f64]) {
    let max = x.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    if let Some(first) = x.iter().find(|v| v.abs() >= max * (1.0 - 1e-12)) {
        if *first < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
    }
}

/// Full eigendecomposition, eigenvalues ascending.
pub fn eigendecompose(op: &SymmetricOperator) -> Result<Spectrum> {
    let n = op.n;
    let (values, vectors) = symmetric_eigen(&op.matrix, n)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| values[k]).collect();
    let eigenvectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&k| {
            let mut col: Vec<f64> = (0..n).map(|i| vectors[i * n + k]).collect();
            canonical_sign(&mut col);
            col
        })
        .collect();
    let residual_norm = eigenvalues
        .iter()
        .zip(&eigenvectors)
        .map(|(lambda, u)| {
            op.apply(u)
                .iter()
                .zip(u)
                .map(|(mu, ui)| (mu - lambda * ui).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max);
    let spectrum = Spectrum {
        kind: op.kind,
        eigenvalues,
        eigenvectors,
        residual_norm,
    };
    let tol_resid = 1e-9 * (1.0 + spectrum.spectral_radius());
    if spectrum.residual_norm > tol_resid {
        return Err(Error::NoConvergence {
            sweeps: 0,
            residual: spectrum.residual_norm,
        });
    }
    Ok(spectrum)
}

/// A maximal run of (numerically) equal eigenvalues.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenGroup {
    /// Mean of the eigenvalues in the run.
    pub value: f64,
    pub multiplicity: usize,
    /// Indices into the ascending spectrum.
    pub indices: std::ops::Range<usize>,
}

/// Merges consecutive eigenvalues whose gap is at most
/// `rel_tol * max(1, spectral radius)`.
pub fn group_eigenvalues(s: &Spectrum, rel_tol: f64) -> Vec<EigenGroup> {
    let tol = rel_tol * s.spectral_radius().max(1.0);
    let mut groups = Vec::new();
    let mut start = 0;
    let n = s.n();
    for k in 1..=n {
        if k == n || s.eigenvalues[k] - s.eigenvalues[k - 1] > tol {
            let run = &s.eigenvalues[start..k];
            groups.push(EigenGroup {
                value: run.iter().sum::<f64>() / run.len() as f64,
                multiplicity: run.len(),
                indices: start..k,
            });
            start = k;
        }
    }
    groups
}

/// The eigenspace of the second eigenvalue group.
#[derive(Debug, Clone, Serialize)]
pub struct Eigenspace {
    pub eigenvalue: f64,
    pub dimension: usize,
    /// Orthonormal basis, one vertex function per entry.
    pub basis: Vec<Vec<f64>>,
    pub group_tolerance: f64,
}

impl Eigenspace {
    /// `Σ_k c_k u_k`.
    pub fn combine(&self, coeffs: &[f64]) -> Vec<f64> {
        let n = self.basis.first().map_or(0, Vec::len);
        let mut out = vec![0.0; n];
        for (c, u) in coeffs.iter().zip(&self.basis) {
            for (o, x) in out.iter_mut().zip(u) {
                *o += c * x;
            }
        }
        out
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(a: &mut [f64]) {
    let norm = dot(a, a).sqrt();
    a.iter_mut().for_each(|x| *x /= norm);
}

/// Extracts the λ₂ group. For Laplacians the block is re-orthogonalised
/// against the all-ones vector and within itself.
pub fn lambda2_eigenspace(s: &Spectrum, rel_tol: f64) -> Result<Eigenspace> {
    let groups = group_eigenvalues(s, rel_tol);
    let first = groups.first().ok_or(Error::NoSecondEigenvalue(0))?;
    if first.multiplicity > 1 {
        return Err(Error::Disconnected {
            multiplicity: first.multiplicity,
        });
    }
    let second = groups.get(1).ok_or(Error::NoSecondEigenvalue(s.n()))?;
    let n = s.n();
    let ones = vec![1.0 / (n as f64).sqrt(); n];
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(second.multiplicity);
    for k in second.indices.clone() {
        let mut u = s.eigenvectors[k].clone();
        if s.kind == OperatorKind::Laplacian {
            let c = dot(&u, &ones);
            u.iter_mut().zip(&ones).for_each(|(x, o)| *x -= c * o);
        }
        for b in &basis {
            let c = dot(&u, b);
            u.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
        }
        normalize(&mut u);
        canonical_sign(&mut u);
        basis.push(u);
    }
    Ok(Eigenspace {
        eigenvalue: second.value,
        dimension: second.multiplicity,
        basis,
        group_tolerance: rel_tol,
    })
}

/// Convenience: Laplacian λ₂-eigenspace of `g`.
pub fn laplacian_lambda2(g: &Graph, rel_tol: f64) -> Result<(Spectrum, Eigenspace)> {
    let spectrum = eigendecompose(&build_operator(g, None)?)?;
    let space = lambda2_eigenspace(&spectrum, rel_tol)?;
    Ok((spectrum, space))
}
