use crate::error::{LabError, Result};

pub const DEFAULT_VERTEX_CAP: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeKind {
    /// All vertices within distance ℓ of the root; the root has K+1 children.
    Ball(usize),
    /// Rooted half-space of height ℓ; the root has K children.
    HalfSpace(usize),
}

impl TreeKind {
    pub fn depth(&self) -> usize {
        match *self {
            TreeKind::Ball(l) | TreeKind::HalfSpace(l) => l,
        }
    }

    pub fn vertex_count(&self, k: usize) -> u128 {
        let k = k as u128;
        let geometric = |l: usize| -> u128 { (0..l).fold(0u128, |acc, _| acc.saturating_mul(k).saturating_add(1)) };
        match *self {
            TreeKind::Ball(l) => 1u128.saturating_add((k + 1).saturating_mul(geometric(l))),
            TreeKind::HalfSpace(l) => geometric(l + 1),
        }
    }
}

/// Breadth-first indexed tree. Children of a vertex are contiguous and every
/// parent index is smaller than its children's.
#[derive(Clone, Debug)]
pub struct TreeGeometry {
    pub kind: TreeKind,
    pub k: usize,
    parent: Vec<usize>,
    first_child: Vec<usize>,
    child_count: Vec<u32>,
    depth: Vec<u32>,
}

const NO_PARENT: usize = usize::MAX;

impl TreeGeometry {
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        let p = self.parent[v];
        (p != NO_PARENT).then_some(p)
    }

    pub fn children(&self, v: usize) -> std::ops::Range<usize> {
        let s = self.first_child[v];
        s..s + self.child_count[v] as usize
    }

    pub fn depth(&self, v: usize) -> usize {
        self.depth[v] as usize
    }

    pub fn max_depth(&self) -> usize {
        self.kind.depth()
    }

    /// Iterates over (vertex, neighbour) pairs, each edge once in each direction.
    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.parent(v).into_iter().chain(self.children(v))
    }

    /// The first-child chain 0 = x₀, x₁, …, x_r.
    pub fn canonical_path(&self, r: usize) -> Result<Vec<usize>> {
        if r > self.max_depth() {
            return Err(LabError::InvalidIndex(format!("path length {r} exceeds tree depth {}", self.max_depth())));
        }
        let mut path = vec![0];
        for _ in 0..r {
            let last = *path.last().unwrap();
            path.push(self.first_child[last]);
        }
        Ok(path)
    }
}

pub fn build_tree(k: usize, kind: TreeKind) -> Result<TreeGeometry> {
    build_tree_with_cap(k, kind, DEFAULT_VERTEX_CAP)
}

pub fn build_tree_with_cap(k: usize, kind: TreeKind, cap: usize) -> Result<TreeGeometry> {
    if k < 2 {
        return Err(LabError::InvalidConnectivity(k));
    }
    let size = kind.vertex_count(k);
    if size > cap as u128 {
        return Err(LabError::TreeTooLarge { size, cap });
    }
    let n = size as usize;
    let ell = kind.depth();
    let mut parent = Vec::with_capacity(n);
    let mut first_child = Vec::with_capacity(n);
    let mut child_count = Vec::with_capacity(n);
    let mut depth = Vec::with_capacity(n);
    parent.push(NO_PARENT);
    depth.push(0u32);
    let mut next = 1usize;
    let mut v = 0usize;
    while v < parent.len() {
        let d = depth[v] as usize;
        let count = if d == ell {
            0
        } else if v == 0 && matches!(kind, TreeKind::Ball(_)) {
            k + 1
        } else {
            k
        };
        first_child.push(next);
        child_count.push(count as u32);
        for _ in 0..count {
            parent.push(v);
            depth.push(d as u32 + 1);
        }
        next += count;
        v += 1;
    }
    debug_assert_eq!(parent.len(), n);
    Ok(TreeGeometry { kind, k, parent, first_child, child_count, depth })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(build_tree(2, TreeKind::Ball(0)).unwrap().len(), 1);
        assert_eq!(build_tree(2, TreeKind::Ball(2)).unwrap().len(), 10);
        assert_eq!(build_tree(2, TreeKind::HalfSpace(1)).unwrap().len(), 3);
        for k in 2..=4usize {
            for l in 0..=6usize {
                let t = build_tree(k, TreeKind::Ball(l)).unwrap();
                let formula = 1 + (k + 1) * (k.pow(l as u32) - 1) / (k - 1);
                assert_eq!(t.len(), formula);
            }
        }
    }

    #[test]
    fn structure() {
        let t = build_tree(3, TreeKind::Ball(3)).unwrap();
        assert_eq!(t.children(0).len(), 4);
        for v in 1..t.len() {
            let p = t.parent(v).unwrap();
            assert!(p < v);
            assert_eq!(t.depth(v), t.depth(p) + 1);
            assert!(t.children(p).contains(&v));
            if t.depth(v) < 3 {
                assert_eq!(t.children(v).len(), 3);
            } else {
                assert!(t.children(v).is_empty());
            }
        }
        let h = build_tree(3, TreeKind::HalfSpace(2)).unwrap();
        assert_eq!(h.children(0).len(), 3);
        let path = t.canonical_path(3).unwrap();
        assert_eq!(path.len(), 4);
        for (j, &x) in path.iter().enumerate() {
            assert_eq!(t.depth(x), j);
        }
        assert!(t.canonical_path(4).is_err());
    }

    #[test]
    fn cap() {
        assert!(matches!(build_tree(4, TreeKind::Ball(40)), Err(LabError::TreeTooLarge { .. })));
        assert!(matches!(build_tree_with_cap(2, TreeKind::Ball(3), 10), Err(LabError::TreeTooLarge { .. })));
    }
}
