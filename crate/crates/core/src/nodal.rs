//! Sign-graphs, the discrete Courant bound, Fiedler's connectivity property of
//! λ₂-eigenfunctions and level-set tightness of functions and eigenspaces.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::Graph;
use crate::spectral::{Eigenspace, Spectrum};
use crate::unionfind::UnionFind;

/// Relative tolerance used to snap numerically computed vertex functions
/// before exact combinatorial tests.
pub const DEFAULT_VALUE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignMode {
    Weak,
    Strong,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignComponent {
    pub sign: Side,
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignGraphReport {
    pub mode: SignMode,
    pub count: usize,
    pub components: Vec<SignComponent>,
}

/// Maximal connected subgraphs on which `u` keeps one sign.
///
/// Weak mode uses `{u >= 0}` and `{u <= 0}`, so a zero vertex can belong to a
/// component of each sign. Strong mode uses `{u > 0}` and `{u < 0}`.
pub fn sign_graphs(g: &Graph, u: &[f64], mode: SignMode) -> Result<SignGraphReport> {
    g.require_function(u)?;
    let (plus, minus): (Vec<bool>, Vec<bool>) = match mode {
        SignMode::Weak => (
            u.iter().map(|&x| x >= 0.0).collect(),
            u.iter().map(|&x| x <= 0.0).collect(),
        ),
        SignMode::Strong => (
            u.iter().map(|&x| x > 0.0).collect(),
            u.iter().map(|&x| x < 0.0).collect(),
        ),
    };
    let mut components: Vec<SignComponent> = g
        .components(Some(&plus))
        .into_iter()
        .map(|vertices| SignComponent {
            sign: Side::Plus,
            vertices,
        })
        .collect();
    components.extend(g.components(Some(&minus)).into_iter().map(|vertices| SignComponent {
        sign: Side::Minus,
        vertices,
    }));
    Ok(SignGraphReport {
        mode,
        count: components.len(),
        components,
    })
}

/// Snaps `u` for exact tests: entries within `rel_tol * max|u|` of zero become
/// zero, and runs of sorted values whose consecutive gaps are within the same
/// tolerance collapse to one level (zero if the run contains zero, otherwise
/// its smallest value).
pub fn snap_levels(u: &[f64], rel_tol: f64) -> Vec<f64> {
    let scale = u.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    let tol = rel_tol * scale;
    let mut out: Vec<f64> = u.iter().map(|&x| if x.abs() <= tol { 0.0 } else { x }).collect();
    let mut order: Vec<usize> = (0..u.len()).collect();
    order.sort_by(|&a, &b| out[a].total_cmp(&out[b]));
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && out[order[end]] - out[order[end - 1]] <= tol {
            end += 1;
        }
        let run = &order[start..end];
        let level = if run.iter().any(|&i| out[i] == 0.0) {
            0.0
        } else {
            out[run[0]]
        };
        for &i in run {
            out[i] = level;
        }
        start = end;
    }
    out
}

/// One disconnected induced subgraph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelWitness {
    pub level: f64,
    pub side: Side,
    pub components: usize,
}

/// Component counts of `G+(u, s)` and `G-(u, s)` at every distinct value `s`
/// of `u`, ascending. Computed with two union-find sweeps.
pub fn level_profile(g: &Graph, u: &[f64]) -> Result<Vec<(f64, usize, usize)>> {
    g.require_function(u)?;
    let n = u.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| u[a].total_cmp(&u[b]));
    let mut levels: Vec<f64> = order.iter().map(|&i| u[i]).collect();
    levels.dedup();

    let sweep = |iter: &mut dyn Iterator<Item = usize>| -> Vec<usize> {
        let mut uf = UnionFind::new(n);
        let mut present = vec![false; n];
        let mut comps = 0usize;
        let mut counts = Vec::with_capacity(levels.len());
        let mut pending = iter.peekable();
        while let Some(&first) = pending.peek() {
            let level = u[first];
            while let Some(&v) = pending.peek() {
                if u[v] != level {
                    break;
                }
                pending.next();
                present[v] = true;
                comps += 1;
                for w in g.neighbors(v) {
                    if present[w] && uf.union(v, w) {
                        comps -= 1;
                    }
                }
            }
            counts.push(comps);
        }
        counts
    };
    let minus = sweep(&mut order.iter().copied());
    let mut plus = sweep(&mut order.iter().rev().copied());
    plus.reverse();
    Ok(levels
        .into_iter()
        .zip(plus.into_iter().zip(minus))
        .map(|(s, (p, m))| (s, p, m))
        .collect())
}

/// Outcome of a tightness test.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TightnessResult {
    pub tight: bool,
    pub witness: Option<LevelWitness>,
    pub levels_checked: usize,
    /// Number of vertex functions tested (1 for a single function).
    pub functions_checked: usize,
    /// Coefficients of the failing combination, for eigenspace tests.
    pub direction: Option<Vec<f64>>,
}

/// Every level at which `G+(u, s)` or `G-(u, s)` is disconnected, ordered
/// outward from the zero level: by `|s|`, nonnegative levels first, and at a
/// given level the minus side first.
pub fn tightness_violations(g: &Graph, u: &[f64]) -> Result<Vec<LevelWitness>> {
    let mut out = Vec::new();
    for (s, p, m) in level_profile(g, u)? {
        if m > 1 {
            out.push(LevelWitness {
                level: s,
                side: Side::Minus,
                components: m,
            });
        }
        if p > 1 {
            out.push(LevelWitness {
                level: s,
                side: Side::Plus,
                components: p,
            });
        }
    }
    out.sort_by(|a, b| {
        a.level
            .abs()
            .total_cmp(&b.level.abs())
            .then((a.level < 0.0).cmp(&(b.level < 0.0)))
    });
    Ok(out)
}

/// Exact tightness: both induced subgraphs are connected (or empty) at every
/// level. `V+(u, s)` is constant on `(v_k, v_{k+1}]` and `V-(u, s)` on
/// `[v_k, v_{k+1})` between consecutive distinct values, so testing each
/// distinct value decides every real level.
pub fn is_tight_function(g: &Graph, u: &[f64]) -> Result<TightnessResult> {
    let levels_checked = level_profile(g, u)?.len();
    let witness = tightness_violations(g, u)?.into_iter().next();
    Ok(TightnessResult {
        tight: witness.is_none(),
        witness,
        levels_checked,
        functions_checked: 1,
        direction: None,
    })
}

/// Fiedler's property of λ₂-eigenfunctions: `G+(u, s)` connected for `s <= 0`
/// and `G-(u, s)` connected for `s >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelConnectivityReport {
    pub pass: bool,
    /// First violation in ascending level order.
    pub witness: Option<LevelWitness>,
    pub levels_checked: usize,
}

/// Scans the distinct values of `u` together with `0`, ascending.
pub fn check_level_connectivity(g: &Graph, u: &[f64]) -> Result<LevelConnectivityReport> {
    g.require_function(u)?;
    let mut levels: Vec<f64> = u.iter().copied().chain(std::iter::once(0.0)).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    for &s in &levels {
        let lp = g.level_partition(u, s)?;
        let violation = if s <= 0.0 && lp.plus_components > 1 {
            Some((Side::Plus, lp.plus_components))
        } else if s >= 0.0 && lp.minus_components > 1 {
            Some((Side::Minus, lp.minus_components))
        } else {
            None
        };
        if let Some((side, components)) = violation {
            return Ok(LevelConnectivityReport {
                pass: false,
                witness: Some(LevelWitness {
                    level: s,
                    side,
                    components,
                }),
                levels_checked: levels.len(),
            });
        }
    }
    Ok(LevelConnectivityReport {
        pass: true,
        witness: None,
        levels_checked: levels.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CourantEntry {
    /// 1-based eigenvalue index `n`; the bound is `n`.
    pub index: usize,
    pub eigenvalue: f64,
    pub weak_sign_graphs: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CourantReport {
    pub pass: bool,
    pub violations: usize,
    pub entries: Vec<CourantEntry>,
}

/// Checks that the `n`-th eigenvector has at most `n` weak sign-graphs, for
/// every stored eigenvector. Entries within `zero_tol * max|u|` of zero are
/// treated as zeros.
pub fn check_courant(g: &Graph, s: &Spectrum, zero_tol: f64) -> Result<CourantReport> {
    let mut entries = Vec::with_capacity(s.n());
    for (k, (lambda, u)) in s.eigenvalues.iter().zip(&s.eigenvectors).enumerate() {
        let snapped = snap_levels(u, zero_tol);
        let count = sign_graphs(g, &snapped, SignMode::Weak)?.count;
        entries.push(CourantEntry {
            index: k + 1,
            eigenvalue: *lambda,
            weak_sign_graphs: count,
            pass: count <= k + 1,
        });
    }
    let violations = entries.iter().filter(|e| !e.pass).count();
    Ok(CourantReport {
        pass: violations == 0,
        violations,
        entries,
    })
}

/// Direction sampling for eigenspace-level tests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplingConfig {
    pub seed: u64,
    pub n_random: usize,
    /// Relative snapping tolerance applied to each combination.
    pub value_tol: f64,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        SamplingConfig {
            seed: 42,
            n_random: 1000,
            value_tol: DEFAULT_VALUE_TOL,
        }
    }
}

/// Unit directions in `R^m`: the basis vectors, the normalised pairwise sums
/// and differences, then `n_random` uniform directions from the seeded stream.
pub fn sample_directions(m: usize, cfg: &SamplingConfig) -> Vec<Vec<f64>> {
    let mut dirs = Vec::new();
    for i in 0..m {
        let mut d = vec![0.0; m];
        d[i] = 1.0;
        dirs.push(d);
    }
    if m == 1 {
        return dirs;
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..m {
        for j in i + 1..m {
            for sign in [1.0, -1.0] {
                let mut d = vec![0.0; m];
                d[i] = h;
                d[j] = sign * h;
                dirs.push(d);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    dirs.extend((0..cfg.n_random).map(|_| random_unit(&mut rng, m)));
    dirs
}

/// Uniform direction on the unit sphere in `R^m` (normalised Gaussian).
pub fn random_unit(rng: &mut impl Rng, m: usize) -> Vec<f64> {
    let mut d: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
    let norm = d.iter().map(|x| x * x).sum::<f64>().sqrt();
    d.iter_mut().for_each(|x| *x /= norm);
    d
}

/// Tests the combinations `Σ d_k u_k` along sampled directions. Exact for
/// `m = 1`; a certificate by sampling otherwise.
pub fn is_tight_space(g: &Graph, e: &Eigenspace, cfg: &SamplingConfig) -> Result<TightnessResult> {
    let functions = sample_directions(e.dimension, cfg)
        .into_iter()
        .map(|d| (e.combine(&d), d));
    tight_along(g, functions, cfg.value_tol)
}

pub(crate) fn tight_along(
    g: &Graph,
    functions: impl Iterator<Item = (Vec<f64>, Vec<f64>)>,
    value_tol: f64,
) -> Result<TightnessResult> {
    let mut levels_checked = 0;
    let mut functions_checked = 0;
    for (u, d) in functions {
        let r = is_tight_function(g, &snap_levels(&u, value_tol))?;
        levels_checked += r.levels_checked;
        functions_checked += 1;
        if !r.tight {
            return Ok(TightnessResult {
                tight: false,
                witness: r.witness,
                levels_checked,
                functions_checked,
                direction: Some(d),
            });
        }
    }
    Ok(TightnessResult {
        tight: true,
        witness: None,
        levels_checked,
        functions_checked,
        direction: None,
    })
}
