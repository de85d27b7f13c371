//! Randomised verification suites.
//!
//! Every trial draws from its own ChaCha stream (`seed`, stream = trial
//! index), so results do not depend on how trials are scheduled.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{self, cartesian_product, Graph};
use crate::mapping::{heawood, verify_bound, GenusSource};
use crate::morse::critical_points;
use crate::nodal::{
    check_courant, check_level_connectivity, is_tight_function, is_tight_space, random_unit, sign_graphs, snap_levels,
    SamplingConfig, SignMode,
};
use crate::spectral::{build_operator, eigendecompose, lambda2_eigenspace, laplacian_lambda2};
use crate::surface::{trace_embedding, Rotation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Courant,
    Fiedler,
    #[serde(rename = "lemma1")]
    LevelConnectivity,
    #[serde(rename = "lemma2")]
    PathsCycles,
    #[serde(rename = "lemma3")]
    Products,
    ProductSpectra,
    Morse,
    Bound,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Courant,
        Suite::Fiedler,
        Suite::LevelConnectivity,
        Suite::PathsCycles,
        Suite::Products,
        Suite::ProductSpectra,
        Suite::Morse,
        Suite::Bound,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Courant => "courant",
            Suite::Fiedler => "fiedler",
            Suite::LevelConnectivity => "lemma1",
            Suite::PathsCycles => "lemma2",
            Suite::Products => "lemma3",
            Suite::ProductSpectra => "product_spectra",
            Suite::Morse => "morse",
            Suite::Bound => "bound",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
            Error::UnknownSuite {
                name: s.to_string(),
                valid: names.join(", "),
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CampaignConfig {
    pub trials: usize,
    pub seed: u64,
    pub rel_tol: f64,
    pub sampling: SamplingConfig,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            trials: 100,
            seed: 42,
            rel_tol: crate::spectral::DEFAULT_REL_TOL,
            sampling: SamplingConfig::default(),
        }
    }
}

/// Edge list with weights, enough to replay an instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphRecord {
    pub n: usize,
    pub edges: Vec<(usize, usize, f64)>,
}

impl From<&Graph> for GraphRecord {
    fn from(g: &Graph) -> Self {
        GraphRecord {
            n: g.n_vertices(),
            edges: g.edges().iter().map(|e| (e.u, e.v, e.weight)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub trial: usize,
    pub description: String,
    pub graph: GraphRecord,
    pub detail: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub trials: usize,
    pub seed: u64,
    /// Individual assertions evaluated.
    pub checks: usize,
    pub violations: usize,
    /// Observations outside the guaranteed classes (not failures).
    pub findings: usize,
    pub counterexamples: Vec<Counterexample>,
    pub notes: Vec<Counterexample>,
    pub pass: bool,
}

struct Tally {
    report: SuiteReport,
}

impl Tally {
    fn new(suite: Suite, cfg: &CampaignConfig) -> Self {
        Tally {
            report: SuiteReport {
                suite,
                trials: cfg.trials,
                seed: cfg.seed,
                checks: 0,
                violations: 0,
                findings: 0,
                counterexamples: Vec::new(),
                notes: Vec::new(),
                pass: true,
            },
        }
    }

    fn check(&mut self, ok: bool, trial: usize, g: &Graph, description: impl Into<String>, detail: serde_json::Value) {
        self.report.checks += 1;
        if !ok {
            self.report.violations += 1;
            self.report.counterexamples.push(Counterexample {
                trial,
                description: description.into(),
                graph: g.into(),
                detail,
            });
        }
    }

    fn finding(&mut self, trial: usize, g: &Graph, description: impl Into<String>, detail: serde_json::Value) {
        self.report.findings += 1;
        self.report.notes.push(Counterexample {
            trial,
            description: description.into(),
            graph: g.into(),
            detail,
        });
    }

    fn finish(mut self) -> SuiteReport {
        self.report.pass = self.report.violations == 0;
        self.report
    }
}

/// Generator for trial `t` of a campaign seeded with `seed`.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Edge weights drawn uniformly from `[0.5, 2]`.
pub fn random_weights(rng: &mut impl Rng, count: usize) -> Vec<f64> {
    (0..count).map(|_| rng.random_range(0.5..=2.0)).collect()
}

/// Erdős–Rényi graph on `4..=max_n` vertices with `p = 2 ln N / N`,
/// resampled until connected, with weights uniform in `[0.5, 2]`.
pub fn random_connected_graph(rng: &mut impl Rng, max_n: usize) -> Graph {
    let n = rng.random_range(4..=max_n.max(4));
    let p = (2.0 * (n as f64).ln() / n as f64).min(1.0);
    loop {
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(p) {
                    pairs.push((i, j));
                }
            }
        }
        let w = random_weights(rng, pairs.len());
        let g = Graph::new(n, &pairs, Some(&w)).expect("valid random graph");
        if g.is_connected() {
            return g;
        }
    }
}

fn reweighted(g: &Graph, rng: &mut impl Rng) -> Graph {
    g.with_weights(&random_weights(rng, g.n_edges()))
        .expect("positive weights")
}

/// A random factor for product experiments: path, cycle or complete graph on
/// 3 to 7 vertices with random weights.
fn random_factor(rng: &mut impl Rng) -> Graph {
    let n = rng.random_range(3..=7);
    let g = match rng.random_range(0..3) {
        0 => graph::path(n),
        1 => graph::cycle(n),
        _ => graph::complete(n),
    }
    .expect("valid factor");
    reweighted(&g, rng)
}

fn lambda2(g: &Graph, rel_tol: f64) -> Result<f64> {
    Ok(laplacian_lambda2(g, rel_tol)?.1.eigenvalue)
}

pub fn run_suite(suite: Suite, cfg: &CampaignConfig) -> Result<SuiteReport> {
    match suite {
        Suite::Courant | Suite::Fiedler | Suite::LevelConnectivity => random_graph_suite(suite, cfg),
        Suite::PathsCycles => path_cycle_suite(cfg),
        Suite::Products => product_suite(cfg),
        Suite::ProductSpectra => product_spectra_suite(cfg),
        Suite::Morse => morse_suite(cfg),
        Suite::Bound => bound_suite(cfg),
    }
}

fn random_graph_suite(suite: Suite, cfg: &CampaignConfig) -> Result<SuiteReport> {
    let mut tally = Tally::new(suite, cfg);
    let tol = cfg.sampling.value_tol;
    for t in 0..cfg.trials {
        let g = random_connected_graph(&mut trial_rng(cfg.seed, t), 40);
        let spectrum = eigendecompose(&build_operator(&g, None)?)?;
        match suite {
            Suite::Courant => {
                let report = check_courant(&g, &spectrum, tol)?;
                for e in report.entries {
                    tally.check(
                        e.pass,
                        t,
                        &g,
                        format!("eigenvector {} has {} weak sign-graphs", e.index, e.weak_sign_graphs),
                        serde_json::to_value(&e).unwrap(),
                    );
                }
            }
            Suite::Fiedler => {
                let space = lambda2_eigenspace(&spectrum, cfg.rel_tol)?;
                for (k, u) in space.basis.iter().enumerate() {
                    let count = sign_graphs(&g, &snap_levels(u, tol), SignMode::Weak)?.count;
                    tally.check(
                        count == 2,
                        t,
                        &g,
                        format!("λ₂ basis vector {k} has {count} weak sign-graphs"),
                        serde_json::json!({ "basis_index": k, "function": u }),
                    );
                }
            }
            _ => {
                let space = lambda2_eigenspace(&spectrum, cfg.rel_tol)?;
                for (k, u) in space.basis.iter().enumerate() {
                    let r = check_level_connectivity(&g, &snap_levels(u, tol))?;
                    tally.check(
                        r.pass,
                        t,
                        &g,
                        format!("λ₂ basis vector {k} violates the level connectivity property"),
                        serde_json::json!({ "basis_index": k, "witness": r.witness, "function": u }),
                    );
                }
            }
        }
    }
    Ok(tally.finish())
}

/// Sizes used by the path/cycle suite.
pub const PATH_CYCLE_SIZES: [usize; 3] = [5, 20, 100];

fn path_cycle_suite(cfg: &CampaignConfig) -> Result<SuiteReport> {
    let mut tally = Tally::new(Suite::PathsCycles, cfg);
    for t in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, t);
        for n in PATH_CYCLE_SIZES {
            for base in [graph::path(n)?, graph::cycle(n)?] {
                let g = reweighted(&base, &mut rng);
                let (_, space) = laplacian_lambda2(&g, cfg.rel_tol)?;
                let r = is_tight_space(&g, &space, &cfg.sampling)?;
                tally.check(
                    r.tight,
                    t,
                    &g,
                    format!(
                        "λ₂-eigenspace of a weighted {:?} on {n} vertices is not tight",
                        g.family().unwrap()
                    ),
                    serde_json::to_value(&r).unwrap(),
                );
            }
        }
    }
    Ok(tally.finish())
}

/// Largest deviation of `u` from being constant along the coordinate that
/// is *not* `keep` (0 = first factor, 1 = second factor).
pub fn product_structure_error(u: &[f64], n_first: usize, n_second: usize, keep: usize) -> f64 {
    let mut worst = 0.0f64;
    for a in 0..n_first {
        for b in 0..n_second {
            let reference = if keep == 0 { u[a * n_second] } else { u[b] };
            worst = worst.max((u[a * n_second + b] - reference).abs());
        }
    }
    worst
}

/// Random product of two factors whose λ₂ differ by at least 20%.
fn separated_factors(rng: &mut impl Rng, rel_tol: f64) -> Result<(Graph, Graph, f64, f64)> {
    let g = random_factor(rng);
    let mut h = random_factor(rng);
    let lg = lambda2(&g, rel_tol)?;
    let mut lh = lambda2(&h, rel_tol)?;
    if (lg - lh).abs() < 0.2 * lg.max(lh) {
        h = h.scaled(if lh >= lg { 1.5 } else { 1.0 / 1.5 })?;
        lh = lambda2(&h, rel_tol)?;
        // factor 1.5 moves λ₂ by 50%, so the gap is now at least 20%
        if (lg - lh).abs() < 0.2 * lg.max(lh) {
            h = h.scaled(if lh >= lg { 2.0 } else { 0.5 })?;
            lh = lambda2(&h, rel_tol)?;
        }
    }
    Ok((g, h, lg, lh))
}

fn product_suite(cfg: &CampaignConfig) -> Result<SuiteReport> {
    let mut tally = Tally::new(Suite::Products, cfg);
    for t in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, t);
        let (g, h, lg, lh) = separated_factors(&mut rng, cfg.rel_tol)?;
        let p = cartesian_product(&g, &h);
        let (_, space) = laplacian_lambda2(&p, cfg.rel_tol)?;
        let r = is_tight_space(&p, &space, &cfg.sampling)?;
        tally.check(
            r.tight,
            t,
            &p,
            "λ₂-eigenspace of the product is not tight",
            serde_json::to_value(&r).unwrap(),
        );
        let keep = if lg < lh { 0 } else { 1 };
        for (k, u) in space.basis.iter().enumerate() {
            let err = product_structure_error(u, g.n_vertices(), h.n_vertices(), keep);
            tally.check(
                err <= 1e-8,
                t,
                &p,
                format!("basis vector {k} is not constant along the factor with larger λ₂"),
                serde_json::json!({ "basis_index": k, "max_deviation": err, "lambda2": [lg, lh] }),
            );
        }
    }
    Ok(tally.finish())
}

/// Sorted pairwise sums of two spectra.
pub fn kronecker_sum_spectrum(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut sums: Vec<f64> = a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect();
    sums.sort_by(f64::total_cmp);
    sums
}

fn product_spectra_suite(cfg: &CampaignConfig) -> Result<SuiteReport> {
    let mut tally = Tally::new(Suite::ProductSpectra, cfg);
    for t in 0..cfg.trials {
        let mut rng = trial_rng(cfg.seed, t);
        let g = if rng.random_bool(0.5) {
            random_factor(&mut rng)
        } else {
            random_connected_graph(&mut rng, 8)
        };
        let h = random_factor(&mut rng);
        let p = cartesian_product(&g, &h);
        let sg = eigendecompose(&build_operator(&g, None)?)?;
        let sh = eigendecompose(&build_operator(&h, None)?)?;
        let sp = eigendecompose(&build_operator(&p, None)?)?;
        let expected = kronecker_sum_spectrum(&sg.eigenvalues, &sh.eigenvalues);
        let err = expected
            .iter()
            .zip(&sp.eigenvalues)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        tally.check(
            err <= 1e-8,
            t,
            &p,
            "product spectrum differs from the pairwise sums",
            serde_json::json!({ "max_error": err }),
        );
        let l2 = sg.eigenvalues[1].min(sh.eigenvalues[1]);
        let l2_err = (sp.eigenvalues[1] - l2).abs();
        tally.check(
            l2_err <= 1e-8,
            t,
            &p,
            "λ₂ of the product is not the smaller factor λ₂",
            serde_json::json!({ "error": l2_err }),
        );
    }
    Ok(tally.finish())
}

/// Triangular tori used by the Morse suite.
pub const MORSE_TORUS_SIZES: [usize; 5] = [4, 5, 6, 7, 8];

fn morse_suite(cfg: &CampaignConfig) -> Result<SuiteReport> {
    let mut tally = Tally::new(Suite::Morse, cfg);
    let tori = MORSE_TORUS_SIZES
        .iter()
        .map(|&n| {
            let g = graph::triangular_torus(n)?;
            let s = trace_embedding(&g, &Rotation::triangular_grid(n))?;
            let (_, e) = laplacian_lambda2(&g, cfg.rel_tol)?;
            Ok((g, s, e))
        })
        .collect::<Result<Vec<_>>>()?;
    for t in 0..cfg.trials {
        let (g, surface, space) = &tori[t % tori.len()];
        let dir = random_unit(&mut trial_rng(cfg.seed, t), space.dimension);
        let u = snap_levels(&space.combine(&dir), cfg.sampling.value_tol);
        let cp = critical_points(surface, &u)?;
        tally.check(
            cp.consistent(),
            t,
            g,
            "Morse sum differs from the Euler characteristic",
            serde_json::to_value(&cp).unwrap(),
        );
        let tight = is_tight_function(g, &u)?;
        if tight.tight {
            tally.check(
                (cp.maxima, cp.minima, cp.saddles) == (1, 1, 2),
                t,
                g,
                "tight λ₂-eigenfunction with unexpected critical points",
                serde_json::json!({ "critical": cp, "direction": dir }),
            );
        } else {
            tally.finding(
                t,
                g,
                "non-tight λ₂-eigenfunction on the triangular torus",
                serde_json::json!({ "critical": cp, "witness": tight.witness, "direction": dir }),
            );
        }
    }
    Ok(tally.finish())
}

/// Family instances with a known genus, cycled through by the bound suite.
pub fn bound_instances() -> Vec<Graph> {
    let mut out = Vec::new();
    for n in [2, 5, 10] {
        out.push(graph::path(n).unwrap());
    }
    for n in [3, 6, 11] {
        out.push(graph::cycle(n).unwrap());
    }
    for n in 2..=12 {
        out.push(graph::complete(n).unwrap());
    }
    for n in [4, 5, 6, 7] {
        out.push(graph::triangular_torus(n).unwrap());
    }
    for (a, b) in [(3, 4), (4, 6), (5, 7)] {
        out.push(cartesian_product(&graph::cycle(a).unwrap(), &graph::cycle(b).unwrap()));
    }
    out.push(cartesian_product(&graph::path(4).unwrap(), &graph::cycle(5).unwrap()));
    for qs in [&[2, 2, 2][..], &[2, 3], &[3, 3]] {
        out.push(graph::hamming(qs).unwrap());
    }
    out
}

/// `m <= chr(genus) - 1` for every instance with a sampled-tight λ₂-eigenspace.
/// The first pass over the instances uses unit weights, later passes random
/// weights in `[0.5, 2]`.
fn bound_suite(cfg: &CampaignConfig) -> Result<SuiteReport> {
    let mut tally = Tally::new(Suite::Bound, cfg);
    let instances = bound_instances();
    for t in 0..cfg.trials {
        let base = &instances[t % instances.len()];
        let g = if t < instances.len() {
            base.clone()
        } else {
            reweighted(base, &mut trial_rng(cfg.seed, t))
        };
        let (_, space) = laplacian_lambda2(&g, cfg.rel_tol)?;
        let r = is_tight_space(&g, &space, &cfg.sampling)?;
        let cert = verify_bound(&g, &space, GenusSource::Family)?;
        if r.tight {
            tally.check(
                cert.satisfied,
                t,
                &g,
                format!(
                    "m = {} exceeds chr({}) - 1 = {}",
                    cert.m,
                    cert.genus,
                    heawood(cert.genus as u64) - 1
                ),
                serde_json::to_value(&cert).unwrap(),
            );
        } else {
            tally.finding(
                t,
                &g,
                "λ₂-eigenspace not tight; bound not applicable",
                serde_json::json!({ "certificate": cert, "tightness": r }),
            );
        }
    }
    Ok(tally.finish())
}
