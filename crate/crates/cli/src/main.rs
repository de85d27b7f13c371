use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use spectight::campaign::{run_suite, CampaignConfig, Suite};
use spectight::io::{parse_edge_list, parse_function, parse_rotation};
use spectight::mapping::{DEFAULT_POINT_TOL, DEFAULT_RANK_TOL};
use spectight::nodal::{snap_levels, DEFAULT_VALUE_TOL};
use spectight::report::{analyze, spectrum_report, EmbedReport};
use spectight::spectral::DEFAULT_REL_TOL;
use spectight::{
    build_mapping, build_operator, contract_pathological, contract_surface, eigendecompose, export_mesh,
    is_tight_function, sign_graphs, trace_embedding, verify_bound, CombinatorialSurface, FamilySpec, GenusSource,
    Graph, MappingTolerances, Rotation, SamplingConfig, SignMode,
};

#[derive(Parser)]
#[command(
    name = "spectight",
    version,
    about = "Second Laplacian eigenspaces, sign-graphs and tightness"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Laplacian spectrum with eigenvalue groups and the λ₂ multiplicity.
    Spectrum {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, default_value_t = DEFAULT_REL_TOL, value_parser = positive)]
        rel_tol: f64,
        /// Write the JSON report here instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Courant, Fiedler, level connectivity, tightness and the genus bound.
    Analyze {
        #[command(flatten)]
        input: GraphInput,
        #[command(flatten)]
        opts: Tolerances,
        #[arg(long, value_enum, default_value_t = GenusArg::Auto)]
        genus: GenusArg,
        /// Rotation system: a file, `builtin-k7-torus` or `grid`.
        #[arg(long)]
        rotation: Option<String>,
        /// Rejected: single functions are tested with `tight`.
        #[arg(long, hide = true)]
        function: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exact tightness of one vertex function.
    Tight {
        #[command(flatten)]
        input: GraphInput,
        /// One real per line, in vertex order.
        #[arg(long)]
        function: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Randomised verification campaigns.
    Verify {
        /// Suite name or `all`; repeatable.
        #[arg(long, required = true)]
        suite: Vec<String>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[command(flatten)]
        opts: Tolerances,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Eigenspace mapping of an embedded graph, written as an OFF mesh.
    Embed {
        #[command(flatten)]
        input: GraphInput,
        #[command(flatten)]
        opts: Tolerances,
        #[arg(long)]
        rotation: Option<String>,
        /// Three coordinate indices of the mapping.
        #[arg(long, default_value = "0,1,2", value_parser = parse_projection)]
        project: [usize; 3],
        /// OFF destination; the mesh goes to standard output when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct GraphInput {
    /// Family graph, e.g. `cycle:20`, `triangular_torus:5`, `prod:cycle:10,cycle:20`.
    #[arg(long)]
    family: Option<FamilySpec>,
    /// Edge list file: `n N` header, then `i j [w]` lines.
    #[arg(long)]
    edges: Option<PathBuf>,
}

#[derive(Args)]
struct Tolerances {
    #[arg(long, env = "SPECTRAL_TIGHT_SEED", default_value_t = 42)]
    seed: u64,
    /// Random directions sampled per eigenspace.
    #[arg(long, default_value_t = 1000)]
    dirs: usize,
    #[arg(long, default_value_t = DEFAULT_REL_TOL, value_parser = positive)]
    rel_tol: f64,
    #[arg(long, default_value_t = DEFAULT_POINT_TOL, value_parser = positive)]
    point_tol: f64,
    #[arg(long, default_value_t = DEFAULT_RANK_TOL, value_parser = positive)]
    rank_tol: f64,
}

impl Tolerances {
    fn sampling(&self) -> SamplingConfig {
        SamplingConfig {
            seed: self.seed,
            n_random: self.dirs,
            value_tol: DEFAULT_VALUE_TOL,
        }
    }

    fn mapping(&self) -> MappingTolerances {
        MappingTolerances {
            point_tol: self.point_tol,
            rank_tol: self.rank_tol,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenusArg {
    /// Family formula when declared, else the rotation's embedding, else none.
    Auto,
    Family,
    Embedding,
    None,
}

fn positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        Ok(_) => Err("must be a positive number".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_projection(s: &str) -> Result<[usize; 3], String> {
    let parts = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    parts.try_into().map_err(|_| "expected three indices i,j,k".to_string())
}

/// Failure modes mapped onto exit codes.
enum Failure {
    /// A check ran and failed (exit 1).
    Check,
    /// Bad input, IO or an error from the library (exit 2).
    Usage(String),
}

impl From<spectight::Error> for Failure {
    fn from(e: spectight::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_graph(input: &GraphInput) -> Result<Graph, Failure> {
    match (&input.family, &input.edges) {
        (Some(spec), _) => Ok(spec.build()?),
        (None, Some(path)) => {
            parse_edge_list(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
        }
        (None, None) => Err(Failure::Usage("one of --family or --edges is required".into())),
    }
}

fn load_rotation(g: &Graph, arg: Option<&str>) -> Result<Option<Rotation>, Failure> {
    match arg {
        None => Ok(Rotation::builtin_for(g)),
        Some("builtin-k7-torus") => {
            if g.n_vertices() != 7 || g.n_edges() != 21 {
                return Err(Failure::Usage("builtin-k7-torus needs complete:7".into()));
            }
            Ok(Some(Rotation::k7_torus()))
        }
        Some("grid") => {
            let n = (g.n_vertices() as f64).sqrt().round() as usize;
            if n * n != g.n_vertices() {
                return Err(Failure::Usage("grid rotation needs an n x n triangular torus".into()));
            }
            Ok(Some(Rotation::triangular_grid(n)))
        }
        Some(file) => {
            let path = Path::new(file);
            parse_rotation(&read(path)?, g.n_vertices())
                .map(Some)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
        }
    }
}

fn surface_for(g: &Graph, arg: Option<&str>) -> Result<CombinatorialSurface, Failure> {
    let rotation = load_rotation(g, arg)?
        .ok_or_else(|| Failure::Usage("no built-in rotation for this graph; pass --rotation FILE".into()))?;
    Ok(trace_embedding(g, &rotation)?)
}

fn emit(value: &impl Serialize, output: Option<&Path>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verdict(pass: bool) -> Result<(), Failure> {
    if pass {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Spectrum { input, rel_tol, output } => {
            let g = load_graph(&input)?;
            let spectrum = eigendecompose(&build_operator(&g, None)?)?;
            let report = spectrum_report(&spectrum, rel_tol);
            let connectivity = g.connectivity(None)?;
            emit(
                &json!({
                    "n": g.n_vertices(),
                    "edges": g.n_edges(),
                    "connected": connectivity.connected,
                    "components": connectivity.components,
                    "spectrum": report,
                }),
                output.as_deref(),
            )?;
            eprintln!(
                "n = {}, lambda2 = {}, m = {}",
                g.n_vertices(),
                report.lambda2.map_or("-".into(), |x| format!("{x:.10}")),
                report.m.map_or("-".into(), |m| m.to_string())
            );
            if !connectivity.connected {
                eprintln!(
                    "error: graph is disconnected ({} components); lambda_2 = 0",
                    connectivity.components.len()
                );
                return Err(Failure::Check);
            }
            Ok(())
        }
        Command::Analyze {
            input,
            opts,
            genus,
            rotation,
            function,
            output,
        } => {
            if function.is_some() {
                return Err(Failure::Usage(
                    "analyze works on a graph; test a single function with `tight`".into(),
                ));
            }
            let g = load_graph(&input)?;
            let spectrum = eigendecompose(&build_operator(&g, None)?)?;
            let surface = match (genus, rotation.as_deref()) {
                (GenusArg::Embedding, r) => Some(surface_for(&g, r)?),
                (GenusArg::Auto, Some(r)) => Some(surface_for(&g, Some(r))?),
                (GenusArg::Auto, None) if g.declared_genus().is_none() => {
                    load_rotation(&g, None)?.map(|r| trace_embedding(&g, &r)).transpose()?
                }
                _ => None,
            };
            let source = match genus {
                GenusArg::None => None,
                GenusArg::Family => Some(GenusSource::Family),
                _ => match &surface {
                    Some(s) => Some(GenusSource::Embedding(s)),
                    None if g.declared_genus().is_some() => Some(GenusSource::Family),
                    None => None,
                },
            };
            let report = analyze(&g, &spectrum, opts.rel_tol, &opts.sampling(), source)?;
            emit(&report, output.as_deref())?;
            eprintln!(
                "lambda2 = {:.10}, m = {}, courant {}, fiedler {}, levels {}, tightness {:?}{}",
                report.lambda2,
                report.m,
                word(report.courant_pass),
                word(report.fiedler_pass),
                word(report.level_connectivity_pass),
                report.tightness.status,
                match &report.bound {
                    Some(b) => format!(", bound {} <= {} - 1 {}", b.m, b.chr, word(b.satisfied)),
                    None => String::new(),
                }
            );
            verdict(report.pass)
        }
        Command::Tight {
            input,
            function,
            output,
        } => {
            let g = load_graph(&input)?;
            let u = parse_function(&read(&function)?)
                .map_err(|e| Failure::Usage(format!("{}: {e}", function.display())))?;
            let u = snap_levels(&u, DEFAULT_VALUE_TOL);
            let result = is_tight_function(&g, &u)?;
            let weak = sign_graphs(&g, &u, SignMode::Weak)?.count;
            let strong = sign_graphs(&g, &u, SignMode::Strong)?.count;
            emit(
                &json!({
                    "tightness": result,
                    "weak_sign_graphs": weak,
                    "strong_sign_graphs": strong,
                }),
                output.as_deref(),
            )?;
            match &result.witness {
                None => eprintln!("tight ({} levels)", result.levels_checked),
                Some(w) => eprintln!(
                    "not tight: s = {}, {:?} side has {} components",
                    w.level, w.side, w.components
                ),
            }
            verdict(result.tight)
        }
        Command::Verify {
            suite,
            trials,
            opts,
            output,
        } => {
            let mut suites = Vec::new();
            for name in &suite {
                if name == "all" {
                    suites.extend(Suite::ALL);
                } else {
                    suites.push(name.parse::<Suite>()?);
                }
            }
            let cfg = CampaignConfig {
                trials,
                seed: opts.seed,
                rel_tol: opts.rel_tol,
                sampling: opts.sampling(),
            };
            let reports = suites
                .iter()
                .map(|&s| run_suite(s, &cfg))
                .collect::<Result<Vec<_>, _>>()?;
            let pass = reports.iter().all(|r| r.pass);
            emit(&json!({ "suites": reports, "pass": pass }), output.as_deref())?;
            for r in &reports {
                eprintln!(
                    "{}: {} checks, {} violations, {} findings",
                    r.suite, r.checks, r.violations, r.findings
                );
            }
            verdict(pass)
        }
        Command::Embed {
            input,
            opts,
            rotation,
            project,
            output,
        } => {
            let g = load_graph(&input)?;
            let (_, space) = spectight::laplacian_lambda2(&g, opts.rel_tol)?;
            if space.dimension < 3 {
                return Err(Failure::Usage(format!(
                    "m = {} < 3 projection dimensions",
                    space.dimension
                )));
            }
            let surface = surface_for(&g, rotation.as_deref())?;
            let mapping = build_mapping(&g, &space, opts.mapping())?;
            let (mapping, mesh_surface) = if mapping.pathological_edges.is_empty() {
                (mapping, surface.clone())
            } else {
                let repaired = contract_pathological(&mapping)?;
                let contracted = contract_surface(&surface, &repaired.contraction_log)?;
                (repaired, contracted)
            };
            let off = export_mesh(&mapping, &mesh_surface, project)?;
            let source = if g.declared_genus().is_some() {
                GenusSource::Family
            } else {
                GenusSource::Embedding(&surface)
            };
            let certificate = verify_bound(&g, &space, source)?;
            let report = EmbedReport {
                satisfied: certificate.satisfied,
                certificate,
                m: mapping.m,
                substantial_dim: mapping.substantial_dim,
                contractions: mapping.contraction_log.clone(),
                mesh_vertices: mapping.coords.len(),
                mesh_faces: off.lines().filter(|l| l.starts_with("3 ")).count(),
                surface_genus: mesh_surface.embedding_genus,
            };
            match &output {
                Some(path) => {
                    fs::write(path, &off)
                        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
                    emit(&report, None)?;
                }
                None => {
                    print!("{off}");
                    eprintln!("{}", serde_json::to_string(&report).expect("report serializes"));
                }
            }
            eprintln!(
                "m = {} <= chr({}) - 1 = {}: {}",
                report.certificate.m,
                report.certificate.genus,
                report.certificate.chr - 1,
                word(report.satisfied)
            );
            verdict(report.satisfied)
        }
    }
}

fn word(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
