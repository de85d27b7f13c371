//! Weighted simple graphs, the named families used throughout the crate,
//! Cartesian products and induced level-set subgraphs.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Family a graph was generated from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyTag {
    Path,
    Cycle,
    Complete,
    TriangularTorus,
    Hamming,
    Product,
    Custom,
}

/// An undirected edge stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

impl Edge {
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// Undirected, simple, loop-free graph with strictly positive edge weights.
///
/// Vertices are `0..n`. The adjacency lists are kept in edge-insertion order.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(usize, usize)>>,
    family: Option<FamilyTag>,
    declared_genus: Option<u32>,
}

impl Graph {
    /// Validates and builds a graph. Missing weights default to 1.
    pub fn new(n: usize, pairs: &[(usize, usize)], weights: Option<&[f64]>) -> Result<Self> {
        if let Some(w) = weights {
            if w.len() != pairs.len() {
                return Err(Error::LengthMismatch {
                    what: "edge weights",
                    expected: pairs.len(),
                    actual: w.len(),
                });
            }
        }
        let mut seen = HashSet::with_capacity(pairs.len());
        let mut edges = Vec::with_capacity(pairs.len());
        let mut adjacency = vec![Vec::new(); n];
        for (index, &(a, b)) in pairs.iter().enumerate() {
            if a >= n || b >= n {
                return Err(Error::VertexOutOfRange { index, u: a, v: b, n });
            }
            if a == b {
                return Err(Error::SelfLoop { index, u: a, v: b });
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if !seen.insert((u, v)) {
                return Err(Error::DuplicateEdge { index, u: a, v: b });
            }
            let weight = weights.map_or(1.0, |w| w[index]);
            if !weight.is_finite() || weight <= 0.0 {
                return Err(Error::NonPositiveWeight { index, weight });
            }
            adjacency[u].push((v, edges.len()));
            adjacency[v].push((u, edges.len()));
            edges.push(Edge { u, v, weight });
        }
        Ok(Graph {
            n,
            edges,
            adjacency,
            family: None,
            declared_genus: None,
        })
    }

    fn tagged(mut self, family: FamilyTag, genus: Option<u32>) -> Self {
        self.family = Some(family);
        self.declared_genus = genus;
        self
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn family(&self) -> Option<FamilyTag> {
        self.family
    }

    pub fn declared_genus(&self) -> Option<u32> {
        self.declared_genus
    }

    /// `(neighbor, edge index)` pairs incident to `v`.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].iter().map(|&(w, _)| w)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Index of the edge `{a, b}` if present.
    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.adjacency.get(a)?.iter().find(|&&(w, _)| w == b).map(|&(_, e)| e)
    }

    /// Same topology, new weights (one per edge, in edge order).
    pub fn with_weights(&self, weights: &[f64]) -> Result<Self> {
        let pairs: Vec<_> = self.edges.iter().map(|e| (e.u, e.v)).collect();
        let g = Graph::new(self.n, &pairs, Some(weights))?;
        Ok(Graph {
            family: self.family,
            declared_genus: self.declared_genus,
            ..g
        })
    }

    /// Multiplies every edge weight by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let w: Vec<f64> = self.edges.iter().map(|e| e.weight * factor).collect();
        self.with_weights(&w)
    }

    /// Marks the graph with a genus known from outside (e.g. a traced embedding
    /// of minimal genus).
    pub fn with_declared_genus(mut self, genus: Option<u32>) -> Self {
        self.declared_genus = genus;
        self
    }

    /// Breadth-first components of the subgraph induced by `subset`
    /// (the whole graph when `None`). Components are sorted by smallest vertex.
    pub fn components(&self, subset: Option<&[bool]>) -> Vec<Vec<usize>> {
        let inside = |v: usize| subset.is_none_or(|s| s[v]);
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..self.n {
            if seen[start] || !inside(start) {
                continue;
            }
            seen[start] = true;
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for w in self.neighbors(v) {
                    if !seen[w] && inside(w) {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Connectivity of the induced subgraph on `subset` (a list of vertices),
    /// or of the whole graph. The empty vertex set counts as connected.
    pub fn connectivity(&self, subset: Option<&[usize]>) -> Result<Connectivity> {
        let mask = match subset {
            Some(list) => {
                let mut mask = vec![false; self.n];
                for &v in list {
                    if v >= self.n {
                        return Err(Error::VertexOutOfRange {
                            index: 0,
                            u: v,
                            v,
                            n: self.n,
                        });
                    }
                    mask[v] = true;
                }
                Some(mask)
            }
            None => None,
        };
        let components = self.components(mask.as_deref());
        Ok(Connectivity {
            connected: components.len() <= 1,
            components,
        })
    }

    pub fn is_connected(&self) -> bool {
        self.components(None).len() <= 1
    }

    fn check_function(&self, u: &[f64]) -> Result<()> {
        if u.len() != self.n {
            return Err(Error::LengthMismatch {
                what: "vertex function",
                expected: self.n,
                actual: u.len(),
            });
        }
        Ok(())
    }

    /// The two induced subgraphs `G+(u, s)` on `{u >= s}` and `G-(u, s)` on
    /// `{u <= s}` with their component counts.
    pub fn level_partition(&self, u: &[f64], s: f64) -> Result<LevelPartition> {
        self.check_function(u)?;
        let plus: Vec<bool> = u.iter().map(|&x| x >= s).collect();
        let minus: Vec<bool> = u.iter().map(|&x| x <= s).collect();
        let plus_components = self.components(Some(&plus)).len();
        let minus_components = self.components(Some(&minus)).len();
        Ok(LevelPartition {
            level: s,
            plus_vertices: (0..self.n).filter(|&v| plus[v]).collect(),
            minus_vertices: (0..self.n).filter(|&v| minus[v]).collect(),
            plus_components,
            minus_components,
        })
    }

    pub(crate) fn require_function(&self, u: &[f64]) -> Result<()> {
        self.check_function(u)
    }
}

/// Result of a connectivity query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Connectivity {
    pub connected: bool,
    pub components: Vec<Vec<usize>>,
}

/// The partition of the vertex set by a level `s`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelPartition {
    pub level: f64,
    pub plus_vertices: Vec<usize>,
    pub minus_vertices: Vec<usize>,
    pub plus_components: usize,
    pub minus_components: usize,
}

/// Parametrised graph family, parsed from `name:params`.
///
/// ```text
/// path:20  cycle:20  complete:7  triangular_torus:5  hamming:3x3
/// prod:cycle:10,cycle:20
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Path(usize),
    Cycle(usize),
    Complete(usize),
    TriangularTorus(usize),
    Hamming(Vec<usize>),
    Product(Vec<FamilySpec>),
}

impl FamilySpec {
    pub fn build(&self) -> Result<Graph> {
        match self {
            FamilySpec::Path(n) => path(*n),
            FamilySpec::Cycle(n) => cycle(*n),
            FamilySpec::Complete(n) => complete(*n),
            FamilySpec::TriangularTorus(n) => triangular_torus(*n),
            FamilySpec::Hamming(qs) => hamming(qs),
            FamilySpec::Product(factors) => {
                if factors.len() < 2 {
                    return Err(Error::FamilyParameter("a product needs at least two factors".into()));
                }
                let graphs = factors.iter().map(|f| f.build()).collect::<Result<Vec<_>>>()?;
                Ok(product_all(&graphs))
            }
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Path(n) => write!(f, "path:{n}"),
            FamilySpec::Cycle(n) => write!(f, "cycle:{n}"),
            FamilySpec::Complete(n) => write!(f, "complete:{n}"),
            FamilySpec::TriangularTorus(n) => write!(f, "triangular_torus:{n}"),
            FamilySpec::Hamming(qs) => {
                let parts: Vec<String> = qs.iter().map(|q| q.to_string()).collect();
                write!(f, "hamming:{}", parts.join("x"))
            }
            FamilySpec::Product(fs) => {
                let parts: Vec<String> = fs.iter().map(|x| x.to_string()).collect();
                write!(f, "prod:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, params) = s
            .split_once(':')
            .ok_or_else(|| Error::FamilyParameter(format!("`{s}`: expected name:params")))?;
        let count = |p: &str| -> Result<usize> {
            p.trim()
                .parse::<usize>()
                .map_err(|_| Error::FamilyParameter(format!("`{s}`: `{p}` is not a count")))
        };
        match name {
            "path" => Ok(FamilySpec::Path(count(params)?)),
            "cycle" => Ok(FamilySpec::Cycle(count(params)?)),
            "complete" => Ok(FamilySpec::Complete(count(params)?)),
            "triangular_torus" => Ok(FamilySpec::TriangularTorus(count(params)?)),
            "hamming" => Ok(FamilySpec::Hamming(
                params.split('x').map(count).collect::<Result<_>>()?,
            )),
            "prod" => Ok(FamilySpec::Product(
                params.split(',').map(str::parse).collect::<Result<_>>()?,
            )),
            other => Err(Error::FamilyParameter(format!("unknown family `{other}`"))),
        }
    }
}

fn at_least(name: &str, n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::FamilyParameter(format!("{name} needs n >= {min}, got {n}")));
    }
    Ok(())
}

pub fn path(n: usize) -> Result<Graph> {
    at_least("path", n, 2)?;
    let pairs: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
    Ok(Graph::new(n, &pairs, None)?.tagged(FamilyTag::Path, Some(0)))
}

pub fn cycle(n: usize) -> Result<Graph> {
    at_least("cycle", n, 3)?;
    let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Ok(Graph::new(n, &pairs, None)?.tagged(FamilyTag::Cycle, Some(0)))
}

/// Genus of the complete graph, `ceil((n-3)(n-4)/12)` for `n >= 3`.
pub fn complete_graph_genus(n: usize) -> u32 {
    if n < 3 {
        return 0;
    }
    let p = (n as i64 - 3) * (n as i64 - 4);
    (p.max(0) as u64).div_ceil(12) as u32
}

pub fn complete(n: usize) -> Result<Graph> {
    at_least("complete", n, 1)?;
    let mut pairs = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((i, j));
        }
    }
    Ok(Graph::new(n, &pairs, None)?.tagged(FamilyTag::Complete, Some(complete_graph_genus(n))))
}

/// Lattice offsets of the six neighbours of a triangular-grid vertex, in
/// counter-clockwise order. Vertex `(i, j)` has index `i * n + j`.
pub const TRIANGULAR_OFFSETS: [(i64, i64); 6] = [(1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1)];

pub(crate) fn torus_index(n: usize, i: i64, j: i64) -> usize {
    let n = n as i64;
    (i.rem_euclid(n) * n + j.rem_euclid(n)) as usize
}

/// The `n x n` triangulated torus: periodic grid with one diagonal per square,
/// 6-regular, `n^2` vertices and `3 n^2` edges.
pub fn triangular_torus(n: usize) -> Result<Graph> {
    at_least("triangular_torus", n, 4)?;
    let mut pairs = Vec::with_capacity(3 * n * n);
    for i in 0..n as i64 {
        for j in 0..n as i64 {
            let v = torus_index(n, i, j);
            for &(a, b) in &TRIANGULAR_OFFSETS[..3] {
                pairs.push((v, torus_index(n, i + a, j + b)));
            }
        }
    }
    Ok(Graph::new(n * n, &pairs, None)?.tagged(FamilyTag::TriangularTorus, Some(1)))
}

fn hamming_genus(qs: &[usize]) -> Option<u32> {
    let mut sorted = qs.to_vec();
    sorted.sort_unstable();
    match sorted.as_slice() {
        [_] => Some(complete_graph_genus(sorted[0])),
        // square, triangular prism, cube
        [2, 2] | [2, 3] | [2, 2, 2] => Some(0),
        [3, 3] => Some(1),
        _ => None,
    }
}

/// Hamming graph `K_{q1} x ... x K_{qk}`.
pub fn hamming(qs: &[usize]) -> Result<Graph> {
    if qs.is_empty() {
        return Err(Error::FamilyParameter("hamming needs at least one factor".into()));
    }
    for &q in qs {
        at_least("hamming factor", q, 2)?;
    }
    let factors = qs.iter().map(|&q| complete(q)).collect::<Result<Vec<_>>>()?;
    let g = if factors.len() == 1 {
        factors.into_iter().next().unwrap()
    } else {
        product_all(&factors)
    };
    Ok(g.tagged(FamilyTag::Hamming, hamming_genus(qs)))
}

/// Products are only tagged as such when built from paths, cycles, complete
/// graphs and their products; anything else is `Custom`.
fn is_product_factor(g: &Graph) -> bool {
    use FamilyTag::*;
    matches!(g.family, Some(Path | Cycle | Complete | Hamming | Product))
}

fn product_genus(g: &Graph, h: &Graph) -> Option<u32> {
    use FamilyTag::*;
    match (g.family?, h.family?) {
        (Path, Path) | (Path, Cycle) | (Cycle, Path) => Some(0),
        (Cycle, Cycle) => Some(1),
        _ => None,
    }
}

/// Cartesian product `G x H`. Vertex `(g, h)` gets index `g * |V_H| + h`;
/// the copies of `H` edges come first (grouped by `g`), then the copies of
/// `G` edges (grouped by `h`). Each edge keeps the weight of its factor edge.
pub fn cartesian_product(g: &Graph, h: &Graph) -> Graph {
    let nh = h.n;
    let mut pairs = Vec::with_capacity(g.n * h.edges.len() + nh * g.edges.len());
    let mut weights = Vec::with_capacity(pairs.capacity());
    for a in 0..g.n {
        for e in &h.edges {
            pairs.push((a * nh + e.u, a * nh + e.v));
            weights.push(e.weight);
        }
    }
    for b in 0..nh {
        for e in &g.edges {
            pairs.push((e.u * nh + b, e.v * nh + b));
            weights.push(e.weight);
        }
    }
    let genus = product_genus(g, h);
    let tag = if is_product_factor(g) && is_product_factor(h) {
        FamilyTag::Product
    } else {
        FamilyTag::Custom
    };
    Graph::new(g.n * nh, &pairs, Some(&weights))
        .expect("product of valid graphs is valid")
        .tagged(tag, genus)
}

/// Left-associated product `((G1 x G2) x G3) x ...`.
pub fn product_all(factors: &[Graph]) -> Graph {
    let mut iter = factors.iter();
    let first = iter.next().expect("at least one factor").clone();
    let mut acc = iter.fold(first, |acc, f| cartesian_product(&acc, f));
    if factors.len() > 2 {
        acc.declared_genus = None;
    }
    acc
}
