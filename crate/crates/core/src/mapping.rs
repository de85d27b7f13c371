//! The eigenspace mapping `v -> (u_1(v), ..., u_m(v))`, repair of edges that
//! collapse to a point, the two-piece test, Heawood's bound and OFF export.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::eigen::{numerical_rank, singular_values};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::nodal::{sample_directions, tight_along, SamplingConfig, TightnessResult};
use crate::spectral::Eigenspace;
use crate::surface::CombinatorialSurface;
use crate::unionfind::UnionFind;

/// Default pathological-edge tolerance, relative to the largest row norm.
pub const DEFAULT_POINT_TOL: f64 = 1e-7;
/// Default relative singular-value cutoff for ranks.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MappingTolerances {
    pub point_tol: f64,
    pub rank_tol: f64,
}

impl Default for MappingTolerances {
    fn default() -> Self {
        MappingTolerances {
            point_tol: DEFAULT_POINT_TOL,
            rank_tol: DEFAULT_RANK_TOL,
        }
    }
}

/// Vertex coordinates in `R^m` together with the repair state.
#[derive(Debug, Clone, Serialize)]
pub struct Mapping {
    #[serde(skip)]
    pub graph: Graph,
    pub coords: Vec<Vec<f64>>,
    pub m: usize,
    /// Edges `(a, b)` of `graph` whose endpoint images coincide.
    pub pathological_edges: Vec<(usize, usize)>,
    /// Identified vertex pairs, in original vertex indices.
    pub contraction_log: Vec<(usize, usize)>,
    /// For each original vertex, its index in the current graph.
    pub vertex_map: Vec<usize>,
    pub substantial_dim: usize,
    pub tolerances: MappingTolerances,
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn point_scale(coords: &[Vec<f64>]) -> f64 {
    coords
        .iter()
        .map(|r| r.iter().map(|x| x * x).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}

fn flatten(coords: &[Vec<f64>], m: usize, centered: bool) -> Vec<f64> {
    let rows = coords.len();
    let mean: Vec<f64> = (0..m)
        .map(|j| {
            if centered && rows > 0 {
                coords.iter().map(|r| r[j]).sum::<f64>() / rows as f64
            } else {
                0.0
            }
        })
        .collect();
    coords
        .iter()
        .flat_map(|r| r.iter().zip(&mean).map(|(x, c)| x - c))
        .collect()
}

impl Mapping {
    /// Wraps explicit coordinates (one row per vertex of `graph`).
    pub fn from_coords(graph: &Graph, coords: Vec<Vec<f64>>, tolerances: MappingTolerances) -> Result<Self> {
        if coords.len() != graph.n_vertices() {
            return Err(Error::LengthMismatch {
                what: "mapping rows",
                expected: graph.n_vertices(),
                actual: coords.len(),
            });
        }
        let m = coords.first().map_or(0, Vec::len);
        if let Some(bad) = coords.iter().find(|r| r.len() != m) {
            return Err(Error::LengthMismatch {
                what: "mapping row",
                expected: m,
                actual: bad.len(),
            });
        }
        let mut mapping = Mapping {
            graph: graph.clone(),
            coords,
            m,
            pathological_edges: Vec::new(),
            contraction_log: Vec::new(),
            vertex_map: (0..graph.n_vertices()).collect(),
            substantial_dim: 0,
            tolerances,
        };
        mapping.refresh();
        Ok(mapping)
    }

    fn refresh(&mut self) {
        let tol = self.tolerances.point_tol * point_scale(&self.coords);
        self.pathological_edges = self
            .graph
            .edges()
            .iter()
            .filter(|e| dist(&self.coords[e.u], &self.coords[e.v]) <= tol)
            .map(|e| (e.u, e.v))
            .collect();
        self.substantial_dim = self.affine_rank();
    }

    /// Rank of the mean-centred coordinate matrix.
    pub fn affine_rank(&self) -> usize {
        numerical_rank(
            &flatten(&self.coords, self.m, true),
            self.coords.len(),
            self.m,
            self.tolerances.rank_tol,
        )
    }

    /// Rank of the coordinate columns, i.e. of the (contracted) basis functions.
    pub fn basis_rank(&self) -> usize {
        numerical_rank(
            &flatten(&self.coords, self.m, false),
            self.coords.len(),
            self.m,
            self.tolerances.rank_tol,
        )
    }

    pub fn singular_values(&self) -> Vec<f64> {
        singular_values(&flatten(&self.coords, self.m, true), self.coords.len(), self.m)
    }

    /// Scalar function `v -> <d, φ(v)>`.
    pub fn project(&self, d: &[f64]) -> Vec<f64> {
        self.coords
            .iter()
            .map(|r| r.iter().zip(d).map(|(x, y)| x * y).sum())
            .collect()
    }

    /// Copy with zero columns appended up to `dim` coordinates.
    pub fn padded(&self, dim: usize) -> Mapping {
        let mut out = self.clone();
        if dim > self.m {
            for r in &mut out.coords {
                r.resize(dim, 0.0);
            }
            out.m = dim;
        }
        out
    }
}

/// `φ(v) = (u_1(v), ..., u_m(v))` for the basis of `e`.
pub fn build_mapping(g: &Graph, e: &Eigenspace, tolerances: MappingTolerances) -> Result<Mapping> {
    if let Some(bad) = e.basis.iter().find(|u| u.len() != g.n_vertices()) {
        return Err(Error::LengthMismatch {
            what: "eigenspace basis vector",
            expected: g.n_vertices(),
            actual: bad.len(),
        });
    }
    let coords = (0..g.n_vertices())
        .map(|v| e.basis.iter().map(|u| u[v]).collect())
        .collect();
    Mapping::from_coords(g, coords, tolerances)
}

/// Contracts pathological edges until none remain.
///
/// Every round merges the endpoints of all current pathological edges with a
/// union-find whose representatives are smallest indices; the merged vertex
/// keeps the representative's row. Parallel edges are merged (weights summed)
/// and loops dropped. Afterwards the coordinate columns must still have rank
/// `m` and at least `m` vertices must remain.
pub fn contract_pathological(mapping: &Mapping) -> Result<Mapping> {
    let mut cur = mapping.clone();
    while !cur.pathological_edges.is_empty() {
        let n = cur.graph.n_vertices();
        let mut uf = UnionFind::new(n);
        // original index of each current vertex, for the log
        let mut original = vec![usize::MAX; n];
        for (orig, &now) in cur.vertex_map.iter().enumerate() {
            if original[now] == usize::MAX {
                original[now] = orig;
            }
        }
        for &(a, b) in &cur.pathological_edges {
            let (ra, rb) = (uf.find(a), uf.find(b));
            if uf.union(a, b) {
                cur.contraction_log.push((original[ra.min(rb)], original[ra.max(rb)]));
            }
        }
        let reps: Vec<usize> = (0..n).filter(|&v| uf.find(v) == v).collect();
        let mut index = vec![0; n];
        for (k, &r) in reps.iter().enumerate() {
            index[r] = k;
        }
        let relabel: Vec<usize> = (0..n).map(|v| index[uf.find(v)]).collect();

        let mut merged: std::collections::BTreeMap<(usize, usize), f64> = Default::default();
        for e in cur.graph.edges() {
            let (a, b) = (relabel[e.u], relabel[e.v]);
            if a != b {
                *merged.entry((a.min(b), a.max(b))).or_insert(0.0) += e.weight;
            }
        }
        let pairs: Vec<_> = merged.keys().copied().collect();
        let weights: Vec<f64> = merged.values().copied().collect();
        let graph = Graph::new(reps.len(), &pairs, Some(&weights))?;
        let coords: Vec<Vec<f64>> = reps.iter().map(|&r| cur.coords[r].clone()).collect();
        let vertex_map = cur.vertex_map.iter().map(|&v| relabel[v]).collect();
        cur = Mapping {
            graph,
            coords,
            vertex_map,
            ..cur
        };
        cur.refresh();
    }
    if cur.coords.len() < cur.m {
        return Err(Error::TooFewVertices {
            vertices: cur.coords.len(),
            m: cur.m,
        });
    }
    let rank = cur.basis_rank();
    if rank < cur.m {
        return Err(Error::RankCollapse { rank, m: cur.m });
    }
    Ok(cur)
}

/// Two-piece property along sampled directions: each projection
/// `v -> <d, φ(v)>` must be a tight function on the mapping's graph.
pub fn check_two_piece(mapping: &Mapping, cfg: &SamplingConfig) -> Result<TightnessResult> {
    let functions = sample_directions(mapping.m, cfg)
        .into_iter()
        .map(|d| (mapping.project(&d), d));
    tight_along(&mapping.graph, functions, cfg.value_tol)
}

/// Heawood number `⌊(7 + √(49 − 24χ)) / 2⌋` with `χ = 2 − 2γ`, evaluated in
/// integers: `49 − 24χ = 1 + 48γ`.
pub fn heawood(genus: u64) -> u64 {
    let disc = 1 + 48 * genus;
    (7 + disc.isqrt()) / 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenusKind {
    FamilyFormula,
    EmbeddingUpperBound,
}

/// Where the genus for the bound comes from.
#[derive(Debug, Clone, Copy)]
pub enum GenusSource<'a> {
    Family,
    Embedding(&'a CombinatorialSurface),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub m: usize,
    pub genus: u32,
    pub genus_source: GenusKind,
    pub chr: u64,
    /// `m <= chr - 1`.
    pub satisfied: bool,
}

pub fn verify_bound(g: &Graph, e: &Eigenspace, source: GenusSource<'_>) -> Result<BoundCertificate> {
    let (genus, genus_source) = match source {
        GenusSource::Family => (
            g.declared_genus().ok_or(Error::NoGenusSource)?,
            GenusKind::FamilyFormula,
        ),
        GenusSource::Embedding(s) => {
            if s.graph.n_vertices() != g.n_vertices() || s.graph.n_edges() != g.n_edges() {
                return Err(Error::LengthMismatch {
                    what: "embedded graph vertices",
                    expected: g.n_vertices(),
                    actual: s.graph.n_vertices(),
                });
            }
            (s.embedding_genus, GenusKind::EmbeddingUpperBound)
        }
    };
    let chr = heawood(genus as u64);
    Ok(BoundCertificate {
        m: e.dimension,
        genus,
        genus_source,
        chr,
        satisfied: (e.dimension as u64) < chr,
    })
}

/// OFF text for the surface under the projection onto three coordinates.
/// Faces with more than three vertices are fan-triangulated from their
/// lowest-index vertex; faces with fewer than three vertices are skipped.
pub fn export_mesh(mapping: &Mapping, surface: &CombinatorialSurface, projection: [usize; 3]) -> Result<String> {
    for &index in &projection {
        if index >= mapping.m {
            return Err(Error::ProjectionOutOfRange { index, m: mapping.m });
        }
    }
    if surface.graph.n_vertices() != mapping.coords.len() {
        return Err(Error::LengthMismatch {
            what: "surface vertices",
            expected: mapping.coords.len(),
            actual: surface.graph.n_vertices(),
        });
    }
    let mut triangles = Vec::new();
    for face in surface.faces.iter().filter(|f| f.len() >= 3) {
        let start = (0..face.len()).min_by_key(|&k| face[k]).unwrap();
        let f: Vec<usize> = (0..face.len()).map(|k| face[(start + k) % face.len()]).collect();
        for k in 1..f.len() - 1 {
            triangles.push([f[0], f[k], f[k + 1]]);
        }
    }
    let mut out = String::new();
    writeln!(out, "OFF").unwrap();
    writeln!(out, "{} {} 0", mapping.coords.len(), triangles.len()).unwrap();
    for r in &mapping.coords {
        let [i, j, k] = projection;
        writeln!(out, "{} {} {}", r[i], r[j], r[k]).unwrap();
    }
    for [a, b, c] in triangles {
        writeln!(out, "3 {a} {b} {c}").unwrap();
    }
    Ok(out)
}
