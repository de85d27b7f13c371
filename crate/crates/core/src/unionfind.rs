//! Disjoint sets with path compression. The representative of a set is
//! always its smallest element, which keeps contraction logs reproducible.

#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Merges the sets of `a` and `b`; returns false if they were already one.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}

#[cfg(test)]
mod tests {
    use super::UnionFind;

    #[test]
    fn smallest_is_representative() {
        let mut uf = UnionFind::new(5);
        assert!(uf.union(4, 2));
        assert!(uf.union(2, 3));
        assert!(!uf.union(3, 4));
        assert_eq!(uf.find(4), 2);
        assert!(uf.union(1, 4));
        assert_eq!(uf.find(3), 1);
        assert_eq!(uf.find(0), 0);
    }
}
