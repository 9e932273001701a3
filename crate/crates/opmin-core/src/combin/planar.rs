//! Reduced planar rooted trees: every internal vertex has at least two
//! children; leaves are implicitly numbered left to right.

use std::fmt;

/// A reduced planar rooted tree. Equality is structural; the planar structure
/// (child order) is part of the data.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlanarTree {
    Leaf,
    Node(Vec<PlanarTree>),
}

impl PlanarTree {
    pub fn leaves(&self) -> usize {
        match self {
            PlanarTree::Leaf => 1,
            PlanarTree::Node(cs) => cs.iter().map(|c| c.leaves()).sum(),
        }
    }

    pub fn vertices(&self) -> usize {
        match self {
            PlanarTree::Leaf => 0,
            PlanarTree::Node(cs) => 1 + cs.iter().map(|c| c.vertices()).sum::<usize>(),
        }
    }

    pub fn internal_edges(&self) -> usize {
        match self {
            PlanarTree::Leaf => 0,
            PlanarTree::Node(cs) => cs
                .iter()
                .map(|c| match c {
                    PlanarTree::Leaf => 0,
                    PlanarTree::Node(_) => 1 + c.internal_edges(),
                })
                .sum(),
        }
    }

    /// Canonical serialization: `*` for a leaf, `(...)` for a vertex.
    pub fn encode(&self) -> String {
        match self {
            PlanarTree::Leaf => "*".to_string(),
            PlanarTree::Node(cs) => {
                let inner: Vec<String> = cs.iter().map(|c| c.encode()).collect();
                format!("({})", inner.join(""))
            }
        }
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encode())
    }
}

/// All reduced planar rooted trees with `n` leaves, in a deterministic order.
/// Counts for n = 2.. are 1, 3, 11, 45, 197, … (the little Schroeder numbers).
pub fn enum_planar(n: usize) -> Vec<PlanarTree> {
    assert!(n >= 2, "a reduced tree needs at least two leaves");
    trees(n)
}

fn trees(n: usize) -> Vec<PlanarTree> {
    if n == 1 {
        return vec![PlanarTree::Leaf];
    }
    let mut out = Vec::new();
    // root with k >= 2 children; compositions of n into k positive parts,
    // in lexicographic order per k
    for k in 2..=n {
        for comp in compositions(n, k) {
            let choices: Vec<Vec<PlanarTree>> = comp.iter().map(|&m| trees(m)).collect();
            let mut stack = vec![Vec::new()];
            for level in &choices {
                let mut next = Vec::new();
                for partial in &stack {
                    for t in level {
                        let mut p: Vec<PlanarTree> = partial.clone();
                        p.push(t.clone());
                        next.push(p);
                    }
                }
                stack = next;
            }
            out.extend(stack.into_iter().map(PlanarTree::Node));
        }
    }
    out
}

/// Compositions of `n` into exactly `k` positive parts, lexicographic.
fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in 1..=(n - k + 1) {
        for mut rest in compositions(n - first, k - 1) {
            let mut c = vec![first];
            c.append(&mut rest);
            out.push(c);
        }
    }
    out
}
