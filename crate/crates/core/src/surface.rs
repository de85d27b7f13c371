//! Rotation systems and the orientable surfaces they determine.
//!
//! A rotation system lists, for every vertex, its neighbours in cyclic order.
//! Faces are traced by following darts: after arriving at `v` along `u -> v`
//! the walk leaves along `v -> w`, where `w` follows `u` in the rotation at
//! `v`. Every dart lies on exactly one face.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{torus_index, FamilyTag, Graph, TRIANGULAR_OFFSETS};

/// Per-vertex cyclic order of neighbours.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rotation(pub Vec<Vec<usize>>);

impl Rotation {
    pub fn order(&self, v: usize) -> &[usize] {
        &self.0[v]
    }

    /// Rotation of `complete(7)` on the torus: vertex `i` sees
    /// `i+1, i+3, i+2, i+6, i+4, i+5 (mod 7)`.
    pub fn k7_torus() -> Self {
        let steps = [1, 3, 2, 6, 4, 5];
        Rotation((0..7).map(|i| steps.iter().map(|s| (i + s) % 7).collect()).collect())
    }

    /// Counter-clockwise neighbour order of the `n x n` triangular torus.
    pub fn triangular_grid(n: usize) -> Self {
        let mut rot = vec![Vec::new(); n * n];
        for i in 0..n as i64 {
            for j in 0..n as i64 {
                rot[torus_index(n, i, j)] = TRIANGULAR_OFFSETS
                    .iter()
                    .map(|&(a, b)| torus_index(n, i + a, j + b))
                    .collect();
            }
        }
        Rotation(rot)
    }

    /// `v -> (v-1, v+1)` on a cycle, `v -> (v-1, v+1)` with the ends clipped on a path.
    pub fn natural_cycle(n: usize) -> Self {
        Rotation((0..n).map(|v| vec![(v + n - 1) % n, (v + 1) % n]).collect())
    }

    /// Rotation induced by the adjacency lists as stored.
    pub fn from_adjacency(g: &Graph) -> Self {
        Rotation((0..g.n_vertices()).map(|v| g.neighbors(v).collect()).collect())
    }

    /// The built-in rotation for a family graph, when one exists.
    pub fn builtin_for(g: &Graph) -> Option<Self> {
        match g.family()? {
            FamilyTag::TriangularTorus => {
                let n = (g.n_vertices() as f64).sqrt().round() as usize;
                Some(Rotation::triangular_grid(n))
            }
            FamilyTag::Complete if g.n_vertices() == 7 => Some(Rotation::k7_torus()),
            FamilyTag::Cycle => Some(Rotation::natural_cycle(g.n_vertices())),
            FamilyTag::Complete if g.n_vertices() <= 3 => Some(Rotation::from_adjacency(g)),
            FamilyTag::Path => Some(Rotation::from_adjacency(g)),
            _ => None,
        }
    }

    /// Applies a vertex relabelling `perm[old] = new`.
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        let mut out = vec![Vec::new(); self.0.len()];
        for (v, order) in self.0.iter().enumerate() {
            out[perm[v]] = order.iter().map(|&w| perm[w]).collect();
        }
        Rotation(out)
    }
}

/// A graph embedded on an orientable surface.
#[derive(Debug, Clone, Serialize)]
pub struct CombinatorialSurface {
    #[serde(skip)]
    pub graph: Graph,
    pub rotation: Rotation,
    /// Each face as the cyclic sequence of vertices visited.
    pub faces: Vec<Vec<usize>>,
    pub euler_characteristic: i64,
    pub embedding_genus: u32,
}

impl CombinatorialSurface {
    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }
}

fn position(order: &[usize], w: usize) -> Option<usize> {
    order.iter().position(|&x| x == w)
}

/// Traces the faces of the embedding of `g` given by `rotation`.
pub fn trace_embedding(g: &Graph, rotation: &Rotation) -> Result<CombinatorialSurface> {
    let n = g.n_vertices();
    if rotation.0.len() != n {
        return Err(Error::LengthMismatch {
            what: "rotation system",
            expected: n,
            actual: rotation.0.len(),
        });
    }
    for v in 0..n {
        let order = rotation.order(v);
        let mut expected: Vec<usize> = g.neighbors(v).collect();
        let mut got = order.to_vec();
        expected.sort_unstable();
        got.sort_unstable();
        if got.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::MalformedRotation {
                vertex: v,
                reason: "a neighbour is listed twice".into(),
            });
        }
        if expected != got {
            return Err(Error::MalformedRotation {
                vertex: v,
                reason: format!("lists {got:?}, incident neighbours are {expected:?}"),
            });
        }
    }

    // dart (v, k): leaves v towards rotation[v][k]
    let offsets: Vec<usize> = std::iter::once(0)
        .chain(rotation.0.iter().scan(0, |acc, o| {
            *acc += o.len();
            Some(*acc)
        }))
        .collect();
    let mut used = vec![false; offsets[n]];
    let mut faces = Vec::new();
    for v in 0..n {
        for k in 0..rotation.order(v).len() {
            if used[offsets[v] + k] {
                continue;
            }
            let mut face = Vec::new();
            let (mut a, mut ka) = (v, k);
            while !used[offsets[a] + ka] {
                used[offsets[a] + ka] = true;
                face.push(a);
                let b = rotation.order(a)[ka];
                let ob = rotation.order(b);
                let back = position(ob, a).expect("validated rotation");
                ka = (back + 1) % ob.len();
                a = b;
            }
            faces.push(face);
        }
    }
    let chi = n as i64 - g.n_edges() as i64 + faces.len() as i64;
    // isolated vertices and forests still give chi <= 2 per component; a
    // disconnected graph is summed over components
    let comps = g.components(None).len().max(1) as i64;
    let genus2 = 2 * comps - chi;
    if genus2 < 0 || genus2 % 2 != 0 {
        return Err(Error::MalformedRotation {
            vertex: 0,
            reason: format!("Euler characteristic {chi} is not that of an orientable surface"),
        });
    }
    Ok(CombinatorialSurface {
        graph: g.clone(),
        rotation: rotation.clone(),
        faces,
        euler_characteristic: chi,
        embedding_genus: (genus2 / 2) as u32,
    })
}

/// Contracts the edges in `log` (pairs of original vertex indices, applied in
/// order) on the embedded surface, then re-traces the faces.
///
/// Each contraction splices the rotation of the absorbed vertex into the
/// rotation of the surviving one at the position of the contracted edge.
/// Edges that become parallel are deleted. The surviving vertex of a merged
/// class is its smallest original index, and the result is relabelled to
/// `0..k` in increasing order of those representatives.
pub fn contract_surface(surface: &CombinatorialSurface, log: &[(usize, usize)]) -> Result<CombinatorialSurface> {
    let g = &surface.graph;
    let n = g.n_vertices();
    let mut rep: Vec<usize> = (0..n).collect();
    let find = |rep: &Vec<usize>, mut x: usize| {
        while rep[x] != x {
            x = rep[x];
        }
        x
    };
    let mut rot: Vec<Option<Vec<usize>>> = surface.rotation.0.iter().cloned().map(Some).collect();
    let mut weight = std::collections::HashMap::new();
    for e in g.edges() {
        weight.insert((e.u, e.v), e.weight);
    }

    for &(x, y) in log {
        let (ra, rb) = (find(&rep, x), find(&rep, y));
        if ra == rb {
            continue;
        }
        let (a, b) = (ra.min(rb), ra.max(rb));
        let rot_a = rot[a].take().unwrap();
        let rot_b = rot[b].take().unwrap();
        let pa = position(&rot_a, b).ok_or_else(|| Error::MalformedRotation {
            vertex: a,
            reason: format!("cannot contract non-edge ({a}, {b})"),
        })?;
        let pb = position(&rot_b, a).expect("symmetric rotation");
        let seg_a: Vec<usize> = (1..rot_a.len()).map(|k| rot_a[(pa + k) % rot_a.len()]).collect();
        let mut seg_b: Vec<usize> = (1..rot_b.len()).map(|k| rot_b[(pb + k) % rot_b.len()]).collect();
        // common neighbours: drop the edge coming from b
        let common: Vec<usize> = seg_b.iter().copied().filter(|c| seg_a.contains(c)).collect();
        for &c in &common {
            let oc = rot[c].as_mut().unwrap();
            oc.retain(|&w| w != b);
            let wb = weight.remove(&key(b, c)).unwrap_or(0.0);
            *weight.get_mut(&key(a, c)).unwrap() += wb;
        }
        seg_b.retain(|c| !common.contains(c));
        for &c in &seg_b {
            for w in rot[c].as_mut().unwrap().iter_mut() {
                if *w == b {
                    *w = a;
                }
            }
            let wb = weight.remove(&key(b, c)).unwrap();
            weight.insert(key(a, c), wb);
        }
        weight.remove(&key(a, b));
        let mut merged = seg_a;
        merged.extend(seg_b);
        rot[a] = Some(merged);
        rep[b] = a;
    }

    let survivors: Vec<usize> = (0..n).filter(|&v| rot[v].is_some()).collect();
    let mut new_index = vec![usize::MAX; n];
    for (k, &v) in survivors.iter().enumerate() {
        new_index[v] = k;
    }
    let new_rot: Vec<Vec<usize>> = survivors
        .iter()
        .map(|&v| rot[v].as_ref().unwrap().iter().map(|&w| new_index[w]).collect())
        .collect();
    let mut keys: Vec<_> = weight.into_iter().collect();
    keys.sort_by_key(|x| x.0);
    let pairs: Vec<_> = keys.iter().map(|((u, v), _)| (new_index[*u], new_index[*v])).collect();
    let weights: Vec<f64> = keys.iter().map(|(_, w)| *w).collect();
    let cg = Graph::new(survivors.len(), &pairs, Some(&weights))?;
    trace_embedding(&cg, &Rotation(new_rot))
}

fn key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, triangular_torus};

    #[test]
    fn triangle_on_sphere() {
        let g = cycle(3).unwrap();
        let s = trace_embedding(&g, &Rotation::natural_cycle(3)).unwrap();
        assert_eq!((s.n_faces(), s.euler_characteristic, s.embedding_genus), (2, 2, 0));
    }

    #[test]
    fn k7_on_torus() {
        let g = complete(7).unwrap();
        let s = trace_embedding(&g, &Rotation::k7_torus()).unwrap();
        assert_eq!((s.n_faces(), s.euler_characteristic, s.embedding_genus), (14, 0, 1));
        assert!(s.faces.iter().all(|f| f.len() == 3));
    }

    #[test]
    fn triangular_torus_grid() {
        let g = triangular_torus(5).unwrap();
        let s = trace_embedding(&g, &Rotation::triangular_grid(5)).unwrap();
        assert_eq!((s.n_faces(), s.euler_characteristic, s.embedding_genus), (50, 0, 1));
        assert!(s.faces.iter().all(|f| f.len() == 3));
    }

    #[test]
    fn adjacency_rotation_of_k5_is_not_planar() {
        let g = complete(5).unwrap();
        let s = trace_embedding(&g, &Rotation::from_adjacency(&g)).unwrap();
        assert!(s.embedding_genus >= 1);
    }

    #[test]
    fn malformed_rotation() {
        let g = cycle(4).unwrap();
        let mut r = Rotation::natural_cycle(4);
        r.0[2] = vec![1, 1];
        assert!(matches!(
            trace_embedding(&g, &r),
            Err(Error::MalformedRotation { vertex: 2, .. })
        ));
        r.0[2] = vec![1];
        assert!(trace_embedding(&g, &r).is_err());
    }

    #[test]
    fn contraction_on_k7_torus() {
        let g = complete(7).unwrap();
        let s = trace_embedding(&g, &Rotation::k7_torus()).unwrap();
        let c = contract_surface(&s, &[(0, 1)]).unwrap();
        assert_eq!(c.graph.n_vertices(), 6);
        assert_eq!(c.graph.n_edges(), 15);
        assert!(c.embedding_genus <= 1);
        let c2 = contract_surface(&s, &[(0, 1), (2, 3), (1, 3)]).unwrap();
        assert_eq!(c2.graph.n_vertices(), 4);
        assert!(c2.embedding_genus <= c.embedding_genus);
    }

    #[test]
    fn contraction_of_triangle_leaves_edge() {
        let g = cycle(3).unwrap();
        let s = trace_embedding(&g, &Rotation::natural_cycle(3)).unwrap();
        let c = contract_surface(&s, &[(1, 2)]).unwrap();
        assert_eq!((c.graph.n_vertices(), c.graph.n_edges()), (2, 1));
        assert_eq!(c.embedding_genus, 0);
    }
}
