//! Leaf-labelled abstract reduced rooted trees, one representative per
//! isomorphism class. Canonical form: children sorted by their encoding;
//! since leaf sets of siblings are disjoint, labelled rooted trees are rigid
//! and encoding equality decides isomorphism.

use std::fmt;

use super::planar::PlanarTree;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LabelledTree {
    Leaf(u32),
    Node(Vec<LabelledTree>),
}

impl LabelledTree {
    pub fn leaves(&self) -> usize {
        match self {
            LabelledTree::Leaf(_) => 1,
            LabelledTree::Node(cs) => cs.iter().map(|c| c.leaves()).sum(),
        }
    }

    pub fn encode(&self) -> String {
        match self {
            LabelledTree::Leaf(l) => format!("{l}"),
            LabelledTree::Node(cs) => {
                let inner: Vec<String> = cs.iter().map(|c| c.encode()).collect();
                format!("({})", inner.join(","))
            }
        }
    }

    /// Recursively sort children by encoding. Idempotent.
    pub fn canonicalize(&self) -> LabelledTree {
        match self {
            LabelledTree::Leaf(l) => LabelledTree::Leaf(*l),
            LabelledTree::Node(cs) => {
                let mut kids: Vec<LabelledTree> = cs.iter().map(|c| c.canonicalize()).collect();
                kids.sort_by_key(|k| k.encode());
                LabelledTree::Node(kids)
            }
        }
    }

    /// Forget the labels, keeping the canonical child order as a planar
    /// structure, and report the leaf labels left to right (0-based).
    pub fn planar_shape(&self) -> (PlanarTree, Vec<usize>) {
        match self {
            LabelledTree::Leaf(l) => (PlanarTree::Leaf, vec![*l as usize]),
            LabelledTree::Node(cs) => {
                let mut shape = Vec::new();
                let mut labels = Vec::new();
                for c in cs {
                    let (s, mut ls) = c.planar_shape();
                    shape.push(s);
                    labels.append(&mut ls);
                }
                (PlanarTree::Node(shape), labels)
            }
        }
    }
}

impl fmt::Display for LabelledTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encode())
    }
}

/// All set partitions of `set`, each partition a list of blocks; blocks keep
/// the input order of their elements and are ordered by first element.
pub fn set_partitions(set: &[u32]) -> Vec<Vec<Vec<u32>>> {
    if set.is_empty() {
        return vec![vec![]];
    }
    let first = set[0];
    let rest = &set[1..];
    let mut out = Vec::new();
    for mut p in set_partitions(rest) {
        // put `first` into each existing block, or into a new block in front
        for i in 0..p.len() {
            let mut q = p.clone();
            q[i].insert(0, first);
            out.push(q);
        }
        p.insert(0, vec![first]);
        out.push(p);
    }
    out
}

/// All isomorphism classes of leaf-labelled reduced rooted trees with leaves
/// `{1..n}` (stored 0-based), each exactly once, in canonical form. Counts for
/// n = 2.. are 1, 4, 26, 236, … .
pub fn enum_labelled(n: usize) -> Vec<LabelledTree> {
    assert!(n >= 2, "a reduced tree needs at least two leaves");
    let set: Vec<u32> = (0..n as u32).collect();
    let mut out = trees_on(&set);
    out.sort_by_key(|t| t.encode());
    out
}

fn trees_on(set: &[u32]) -> Vec<LabelledTree> {
    if set.len() == 1 {
        return vec![LabelledTree::Leaf(set[0])];
    }
    let mut out = Vec::new();
    for partition in set_partitions(set) {
        if partition.len() < 2 {
            continue;
        }
        let choices: Vec<Vec<LabelledTree>> =
            partition.iter().map(|block| trees_on(block)).collect();
        let mut stack: Vec<Vec<LabelledTree>> = vec![Vec::new()];
        for level in &choices {
            let mut next = Vec::new();
            for partial in &stack {
                for t in level {
                    let mut p = partial.clone();
                    p.push(t.clone());
                    next.push(p);
                }
            }
            stack = next;
        }
        for kids in stack {
            out.push(LabelledTree::Node(kids).canonicalize());
        }
    }
    out
}
