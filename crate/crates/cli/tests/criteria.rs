//! Acceptance criteria, one printed PASS/FAIL line each, in order. Runs
//! without the libtest harness so the lines show in plain `cargo test`
//! output; exits nonzero when any criterion fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use spectight::campaign::{kronecker_sum_spectrum, product_structure_error, run_suite, CampaignConfig, Suite};
use spectight::fixtures::{c20_single_peak, c20_two_peaks, twin_graph};
use spectight::mapping::MappingTolerances;
use spectight::morse::critical_points;
use spectight::nodal::{sample_directions, Side};
use spectight::spectral::DEFAULT_REL_TOL;
use spectight::*;

const SPECTRUM_TOL: f64 = 1e-8;
const PRODUCT_TOL: f64 = 1e-8;
const IMAGE_TOL: f64 = 1e-9;

fn report(id: u32, name: &str, pass: bool, elapsed: Duration, limit: Duration, detail: String) -> bool {
    let ok = pass && elapsed <= limit;
    println!(
        "acceptance {id:>2} {:<4} {name}: {detail} [{:.3}s / {}s]",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    ok
}

fn laplacian_eigenvalues(g: &Graph) -> Vec<f64> {
    eigendecompose(&build_operator(g, None).unwrap()).unwrap().eigenvalues
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn multiplicity(g: &Graph) -> usize {
    laplacian_lambda2(g, DEFAULT_REL_TOL).unwrap().1.dimension
}

fn criterion_01_closed_form_spectra() -> bool {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for n in [5usize, 10, 20, 100] {
        let path_expected: Vec<f64> = (1..=n)
            .map(|k| 2.0 - 2.0 * (PI * (k - 1) as f64 / n as f64).cos())
            .collect();
        worst = worst.max(max_abs_diff(&laplacian_eigenvalues(&path(n).unwrap()), &path_expected));

        let mut cycle_expected: Vec<f64> = (0..n)
            .map(|k| 2.0 - 2.0 * (2.0 * PI * k as f64 / n as f64).cos())
            .collect();
        cycle_expected.sort_by(f64::total_cmp);
        worst = worst.max(max_abs_diff(
            &laplacian_eigenvalues(&cycle(n).unwrap()),
            &cycle_expected,
        ));
    }
    for n in 2..=20usize {
        let mut expected = vec![n as f64; n];
        expected[0] = 0.0;
        worst = worst.max(max_abs_diff(&laplacian_eigenvalues(&complete(n).unwrap()), &expected));
    }
    report(
        1,
        "closed-form path, cycle and complete spectra",
        worst <= SPECTRUM_TOL,
        start.elapsed(),
        Duration::from_secs(1),
        format!("max abs error {worst:.2e} (tol {SPECTRUM_TOL:e})"),
    )
}

fn criterion_02_multiplicity_fixtures() -> bool {
    let start = Instant::now();
    let c20 = multiplicity(&cycle(20).unwrap());
    let k7 = multiplicity(&complete(7).unwrap());
    let t5 = multiplicity(&triangular_torus(5).unwrap());
    let chr1 = heawood(1) as usize;
    report(
        2,
        "lambda_2 multiplicities at rel_tol 1e-8",
        c20 == 2 && k7 == 6 && t5 == 6 && t5 == chr1 - 1,
        start.elapsed(),
        Duration::from_secs(1),
        format!(
            "cycle(20) {c20}, complete(7) {k7}, triangular_torus(5) {t5}, chr(1) - 1 = {}",
            chr1 - 1
        ),
    )
}

fn criterion_03_courant_fiedler_campaign() -> bool {
    let start = Instant::now();
    let cfg = CampaignConfig {
        trials: 200,
        seed: 42,
        ..CampaignConfig::default()
    };
    let reports: Vec<_> = [Suite::Courant, Suite::Fiedler, Suite::LevelConnectivity]
        .into_iter()
        .map(|s| run_suite(s, &cfg).unwrap())
        .collect();
    let detail = reports
        .iter()
        .map(|r| format!("{} {}/{} violations", r.suite, r.violations, r.checks))
        .collect::<Vec<_>>()
        .join(", ");
    report(
        3,
        "Courant bound, two weak sign-graphs, level connectivity on 200 random graphs",
        reports.iter().all(|r| r.violations == 0 && r.checks > 0),
        start.elapsed(),
        Duration::from_secs(60),
        detail,
    )
}

fn criterion_04_two_peak_cycle_function() -> bool {
    let start = Instant::now();
    let g = cycle(20).unwrap();
    let upper = is_tight_function(&g, &c20_single_peak()).unwrap();
    let lower = c20_two_peaks();
    let weak = sign_graphs(&g, &lower, SignMode::Weak).unwrap().count;
    let tight = is_tight_function(&g, &lower).unwrap();
    let levels = check_level_connectivity(&g, &lower).unwrap();
    let w = tight.witness.expect("witness");
    let l = levels.witness.expect("level witness");
    let pass = upper.tight
        && weak == 2
        && !tight.tight
        && w.level == 0.5
        && w.side == Side::Minus
        && w.components >= 2
        && !levels.pass
        && l.level == -0.5;
    report(
        4,
        "single-peak function tight, two-peak function not tight",
        pass,
        start.elapsed(),
        Duration::from_secs(1),
        format!(
            "upper tight {}, lower weak count {weak}, witness s = {} {:?} ({} comps), level check fails at s = {}",
            upper.tight, w.level, w.side, w.components, l.level
        ),
    )
}

fn criterion_05_weighted_paths_and_cycles() -> bool {
    let start = Instant::now();
    let cfg = CampaignConfig {
        trials: 100,
        ..CampaignConfig::default()
    };
    let r = run_suite(Suite::PathsCycles, &cfg).unwrap();
    report(
        5,
        "weighted paths and cycles have tight lambda_2-eigenspaces",
        r.violations == 0 && r.checks == 600,
        start.elapsed(),
        Duration::from_secs(120),
        format!(
            "{} eigenspaces checked, {} counterexamples",
            r.checks,
            r.counterexamples.len()
        ),
    )
}

fn criterion_06_cycle_product() -> bool {
    let start = Instant::now();
    let (c10, c20) = (cycle(10).unwrap(), cycle(20).unwrap());
    let p = cartesian_product(&c10, &c20);
    let (sp, space) = laplacian_lambda2(&p, DEFAULT_REL_TOL).unwrap();
    let l2_c20 = laplacian_lambda2(&c20, DEFAULT_REL_TOL).unwrap().1.eigenvalue;
    let l2_err = (space.eigenvalue - l2_c20).abs();
    let structure = space
        .basis
        .iter()
        .map(|u| product_structure_error(u, 10, 20, 1))
        .fold(0.0, f64::max);
    let tight = is_tight_space(&p, &space, &SamplingConfig::default()).unwrap();
    let sums = kronecker_sum_spectrum(&laplacian_eigenvalues(&c10), &laplacian_eigenvalues(&c20));
    let spectrum_err = max_abs_diff(&sums, &sp.eigenvalues);
    report(
        6,
        "cycle(10) x cycle(20) spectrum and lambda_2-eigenspace",
        l2_err <= PRODUCT_TOL && structure <= PRODUCT_TOL && tight.tight && spectrum_err <= PRODUCT_TOL,
        start.elapsed(),
        Duration::from_secs(30),
        format!(
            "lambda_2 error {l2_err:.2e}, deviation along cycle(10) {structure:.2e}, tight {} over {} directions, spectrum error {spectrum_err:.2e}",
            tight.tight, tight.functions_checked
        ),
    )
}

fn criterion_07_torus_critical_points() -> bool {
    let start = Instant::now();
    let g = triangular_torus(5).unwrap();
    let surface = trace_embedding(&g, &Rotation::triangular_grid(5)).unwrap();
    let (_, space) = laplacian_lambda2(&g, DEFAULT_REL_TOL).unwrap();
    let mut counts = Vec::new();
    let mut pass = surface.euler_characteristic == 0 && space.dimension == 6;
    for u in &space.basis {
        let cp = critical_points(&surface, &nodal::snap_levels(u, nodal::DEFAULT_VALUE_TOL)).unwrap();
        pass &= (cp.maxima, cp.minima, cp.saddles) == (1, 1, 2) && cp.morse_sum == 0 && cp.consistent();
        counts.push(format!("{}/{}/{}", cp.maxima, cp.minima, cp.saddles));
    }
    // context: share of the eigenspace that is tight at all
    let cfg = SamplingConfig::default();
    let dirs = sample_directions(space.dimension, &cfg);
    let tight = dirs[dirs.len() - cfg.n_random..]
        .iter()
        .filter(|d| {
            is_tight_function(&g, &nodal::snap_levels(&space.combine(d), cfg.value_tol))
                .unwrap()
                .tight
        })
        .count();
    report(
        7,
        "every lambda_2 basis vector of triangular_torus(5) has 1 max, 1 min, 2 saddles",
        pass,
        start.elapsed(),
        Duration::from_secs(1),
        format!(
            "chi {}, max/min/saddles per basis vector [{}]; {tight}/{} random directions of the eigenspace are tight",
            surface.euler_characteristic,
            counts.join(", "),
            cfg.n_random
        ),
    )
}

fn criterion_08_multiplicity_bound() -> bool {
    let start = Instant::now();
    let r = run_suite(Suite::Bound, &CampaignConfig::default()).unwrap();
    let certify = |g: &Graph| {
        let (_, space) = laplacian_lambda2(g, DEFAULT_REL_TOL).unwrap();
        verify_bound(g, &space, GenusSource::Family).unwrap()
    };
    let k7 = certify(&complete(7).unwrap());
    let t5 = certify(&triangular_torus(5).unwrap());
    let chr: Vec<u64> = (0..4).map(heawood).collect();
    let pass = r.violations == 0
        && [&k7, &t5].iter().all(|c| c.satisfied && c.m == 6 && c.chr - 1 == 6)
        && chr == [4, 7, 8, 9];
    report(
        8,
        "m <= chr(genus) - 1 on tight instances, equality for complete(7) and triangular_torus(5)",
        pass,
        start.elapsed(),
        Duration::from_secs(10),
        format!(
            "{} checks, {} violations, {} non-tight findings; complete(7) {} <= {}, triangular_torus(5) {} <= {}; chr(0..3) = {chr:?}",
            r.checks,
            r.violations,
            r.findings,
            k7.m,
            k7.chr - 1,
            t5.m,
            t5.chr - 1
        ),
    )
}

fn image_set(values: Vec<f64>) -> Vec<f64> {
    let mut v = values;
    v.sort_by(f64::total_cmp);
    v.dedup_by(|a, b| (*a - *b).abs() <= IMAGE_TOL);
    v
}

fn criterion_09_twin_contraction() -> bool {
    let start = Instant::now();
    let g = twin_graph();
    let (_, space) = laplacian_lambda2(&g, DEFAULT_REL_TOL).unwrap();
    let original = build_mapping(&g, &space, MappingTolerances::default()).unwrap();
    let contracted = contract_pathological(&original).unwrap();
    let dirs = sample_directions(original.m, &SamplingConfig::default());
    let same_images = dirs.iter().all(|d| {
        let a = image_set(original.project(d));
        let b = image_set(contracted.project(d));
        a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= IMAGE_TOL)
    });
    let pass = original.pathological_edges == [(0, 6)]
        && contracted.contraction_log.len() == 1
        && contracted.graph.n_vertices() == g.n_vertices() - 1
        && contracted.basis_rank() == original.m
        && contracted.pathological_edges.is_empty()
        && same_images;
    report(
        9,
        "twin-vertex fixture contracts exactly one edge",
        pass,
        start.elapsed(),
        Duration::from_secs(1),
        format!(
            "pathological {:?}, log {:?}, rank {} of m = {}, image sets equal over {} directions: {same_images}",
            original.pathological_edges,
            contracted.contraction_log,
            contracted.basis_rank(),
            original.m,
            dirs.len()
        ),
    )
}

fn off_is_valid(text: &str) -> Result<(usize, usize), String> {
    let mut lines = text.lines();
    if lines.next() != Some("OFF") {
        return Err("missing OFF header".into());
    }
    let counts: Vec<usize> = lines
        .next()
        .ok_or("missing counts")?
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| format!("bad count `{t}`")))
        .collect::<Result<_, _>>()?;
    let [nv, nf, _] = counts[..] else {
        return Err("counts line needs three fields".into());
    };
    for _ in 0..nv {
        let coords: Vec<f64> = lines
            .next()
            .ok_or("missing vertex line")?
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| format!("bad coordinate `{t}`")))
            .collect::<Result<_, _>>()?;
        if coords.len() != 3 || coords.iter().any(|x: &f64| !x.is_finite()) {
            return Err("vertex line needs three finite coordinates".into());
        }
    }
    let mut triangles = 0;
    for _ in 0..nf {
        let idx: Vec<usize> = lines
            .next()
            .ok_or("missing face line")?
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| format!("bad index `{t}`")))
            .collect::<Result<_, _>>()?;
        if idx.first() != Some(&(idx.len() - 1)) || idx[1..].iter().any(|&i| i >= nv) {
            return Err("malformed face line".into());
        }
        triangles += usize::from(idx[0] == 3);
    }
    if lines.any(|l| !l.trim().is_empty()) {
        return Err("trailing content".into());
    }
    if triangles != nf {
        return Err("non-triangular face".into());
    }
    Ok((nv, nf))
}

fn criterion_10_off_export() -> bool {
    let start = Instant::now();
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_spectight"))
            .args([
                "embed",
                "--family",
                "triangular_torus:5",
                "--project",
                "0,1,2",
                "--seed",
                "42",
                "-o",
            ])
            .arg(&out)
            .output()
            .unwrap();
        assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
        std::fs::read(out).unwrap()
    };
    let first = run("a.off");
    let second = run("b.off");
    let parsed = off_is_valid(std::str::from_utf8(&first).unwrap());
    report(
        10,
        "triangular_torus(5) OFF export",
        parsed == Ok((25, 50)) && first == second,
        start.elapsed(),
        Duration::from_secs(1),
        format!("parsed {parsed:?}, byte-identical {}", first == second),
    )
}

fn main() {
    let criteria: [fn() -> bool; 10] = [
        criterion_01_closed_form_spectra,
        criterion_02_multiplicity_fixtures,
        criterion_03_courant_fiedler_campaign,
        criterion_04_two_peak_cycle_function,
        criterion_05_weighted_paths_and_cycles,
        criterion_06_cycle_product,
        criterion_07_torus_critical_points,
        criterion_08_multiplicity_bound,
        criterion_09_twin_contraction,
        criterion_10_off_export,
    ];
    let failed = criteria.iter().filter(|c| !c()).count();
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
