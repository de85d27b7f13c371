//! JSON report documents assembled from the analyses.

use serde::Serialize;

use crate::campaign::GraphRecord;
use crate::error::Result;
use crate::graph::{FamilyTag, Graph};
use crate::mapping::{verify_bound, BoundCertificate, GenusSource};
use crate::nodal::{
    check_courant, check_level_connectivity, is_tight_space, sign_graphs, snap_levels, LevelConnectivityReport,
    SamplingConfig, SignMode, TightnessResult,
};
use crate::spectral::{group_eigenvalues, lambda2_eigenspace, Spectrum};

#[derive(Debug, Clone, Serialize)]
pub struct GroupRecord {
    pub value: f64,
    pub multiplicity: usize,
    pub indices: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<f64>,
    pub groups: Vec<GroupRecord>,
    pub residual_norm: f64,
    pub lambda2: Option<f64>,
    pub m: Option<usize>,
}

pub fn spectrum_report(s: &Spectrum, rel_tol: f64) -> SpectrumReport {
    let groups: Vec<GroupRecord> = group_eigenvalues(s, rel_tol)
        .into_iter()
        .map(|g| GroupRecord {
            value: g.value,
            multiplicity: g.multiplicity,
            indices: g.indices.collect(),
        })
        .collect();
    SpectrumReport {
        eigenvalues: s.eigenvalues.clone(),
        lambda2: groups.get(1).map(|g| g.value),
        m: groups.get(1).map(|g| g.multiplicity),
        groups,
        residual_norm: s.residual_norm,
    }
}

/// Whether tightness of the λ₂-eigenspace is guaranteed for this graph:
/// paths, cycles, complete graphs and Cartesian products of these.
pub fn tightness_guaranteed(g: &Graph) -> bool {
    (g.is_connected() && g.max_degree() <= 2)
        || matches!(
            g.family(),
            Some(FamilyTag::Complete | FamilyTag::Hamming | FamilyTag::Product)
        )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Not tight, on a graph outside the classes where tightness is guaranteed.
    Finding,
}

#[derive(Debug, Clone, Serialize)]
pub struct TightnessSection {
    pub guaranteed: bool,
    pub status: CheckStatus,
    pub result: TightnessResult,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub graph: GraphRecord,
    pub family: Option<FamilyTag>,
    pub lambda2: f64,
    pub m: usize,
    pub residual_norm: f64,
    pub courant_pass: bool,
    pub courant_violations: usize,
    pub fiedler_weak_counts: Vec<usize>,
    pub fiedler_pass: bool,
    pub level_connectivity: Vec<LevelConnectivityReport>,
    pub level_connectivity_pass: bool,
    pub tightness: TightnessSection,
    pub bound: Option<BoundCertificate>,
    pub pass: bool,
}

/// All checks on one graph: the Courant bound for every
/// eigenvector, two weak sign-graphs and level connectivity for every
/// λ₂-basis vector, sampled tightness of the λ₂-eigenspace and, when a genus
/// source is given, the multiplicity bound.
pub fn analyze(
    g: &Graph,
    spectrum: &Spectrum,
    rel_tol: f64,
    sampling: &SamplingConfig,
    genus: Option<GenusSource<'_>>,
) -> Result<AnalysisReport> {
    let space = lambda2_eigenspace(spectrum, rel_tol)?;
    let courant = check_courant(g, spectrum, sampling.value_tol)?;
    let snapped: Vec<Vec<f64>> = space.basis.iter().map(|u| snap_levels(u, sampling.value_tol)).collect();
    let fiedler_weak_counts = snapped
        .iter()
        .map(|u| sign_graphs(g, u, SignMode::Weak).map(|r| r.count))
        .collect::<Result<Vec<_>>>()?;
    let level_connectivity = snapped
        .iter()
        .map(|u| check_level_connectivity(g, u))
        .collect::<Result<Vec<_>>>()?;
    let result = is_tight_space(g, &space, sampling)?;
    let guaranteed = tightness_guaranteed(g);
    let status = match (result.tight, guaranteed) {
        (true, _) => CheckStatus::Pass,
        (false, true) => CheckStatus::Fail,
        (false, false) => CheckStatus::Finding,
    };
    let bound = genus.map(|src| verify_bound(g, &space, src)).transpose()?;

    let fiedler_pass = fiedler_weak_counts.iter().all(|&c| c == 2);
    let level_connectivity_pass = level_connectivity.iter().all(|r| r.pass);
    let pass = courant.pass
        && fiedler_pass
        && level_connectivity_pass
        && status != CheckStatus::Fail
        && bound.as_ref().is_none_or(|b| b.satisfied);
    Ok(AnalysisReport {
        graph: g.into(),
        family: g.family(),
        lambda2: space.eigenvalue,
        m: space.dimension,
        residual_norm: spectrum.residual_norm,
        courant_pass: courant.pass,
        courant_violations: courant.violations,
        fiedler_weak_counts,
        fiedler_pass,
        level_connectivity,
        level_connectivity_pass,
        tightness: TightnessSection {
            guaranteed,
            status,
            result,
        },
        bound,
        pass,
    })
}

/// Certificate plus mesh statistics printed by the embed command.
#[derive(Debug, Clone, Serialize)]
pub struct EmbedReport {
    pub certificate: BoundCertificate,
    pub m: usize,
    pub substantial_dim: usize,
    pub contractions: Vec<(usize, usize)>,
    pub mesh_vertices: usize,
    pub mesh_faces: usize,
    pub surface_genus: u32,
    pub satisfied: bool,
}
