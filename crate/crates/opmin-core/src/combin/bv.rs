//! Two-colored trees: rooted trees with black/white internal edges, where
//! bivalent vertices may appear only next to an extremity (a leaf below, or
//! the root edge above).

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeColor {
    Black,
    White,
}

impl EdgeColor {
    pub fn is_black(self) -> bool {
        self == EdgeColor::Black
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BvChild {
    Leaf(u32),
    Edge(EdgeColor, BvNode),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BvNode {
    pub children: Vec<BvChild>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BvTree {
    pub root: BvNode,
}

impl BvNode {
    fn encode(&self) -> String {
        let inner: Vec<String> = self
            .children
            .iter()
            .map(|c| match c {
                BvChild::Leaf(l) => format!("l{l}"),
                BvChild::Edge(EdgeColor::Black, n) => format!("b{}", n.encode()),
                BvChild::Edge(EdgeColor::White, n) => format!("w{}", n.encode()),
            })
            .collect();
        format!("({})", inner.join(","))
    }

    fn vertices(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(|c| match c {
                BvChild::Leaf(_) => 0,
                BvChild::Edge(_, n) => n.vertices(),
            })
            .sum::<usize>()
    }

    fn leaves(&self) -> usize {
        self.children
            .iter()
            .map(|c| match c {
                BvChild::Leaf(_) => 1,
                BvChild::Edge(_, n) => n.leaves(),
            })
            .sum()
    }

    fn internal_ok(&self, is_root: bool) -> bool {
        if self.children.is_empty() {
            return false;
        }
        if self.children.len() == 1 {
            let next_to_extremity = is_root || matches!(self.children[0], BvChild::Leaf(_));
            if !next_to_extremity {
                return false;
            }
        }
        self.children.iter().all(|c| match c {
            BvChild::Leaf(_) => true,
            BvChild::Edge(_, n) => n.internal_ok(false),
        })
    }

    fn sort(&mut self) {
        for c in self.children.iter_mut() {
            if let BvChild::Edge(_, n) = c {
                n.sort();
            }
        }
        self.children.sort_by_key(|c| match c {
            BvChild::Leaf(l) => format!("l{l}"),
            BvChild::Edge(EdgeColor::Black, n) => format!("b{}", n.encode()),
            BvChild::Edge(EdgeColor::White, n) => format!("w{}", n.encode()),
        });
    }

    fn black_edges(&self) -> usize {
        self.children
            .iter()
            .map(|c| match c {
                BvChild::Leaf(_) => 0,
                BvChild::Edge(color, n) => {
                    (if color.is_black() { 1 } else { 0 }) + n.black_edges()
                }
            })
            .sum()
    }

    fn recolor_nth_black(&self, counter: &mut usize, target: usize) -> BvNode {
        BvNode {
            children: self
                .children
                .iter()
                .map(|c| match c {
                    BvChild::Leaf(l) => BvChild::Leaf(*l),
                    BvChild::Edge(color, n) => {
                        let mut color = *color;
                        if color.is_black() {
                            if *counter == target {
                                color = EdgeColor::White;
                            }
                            *counter += 1;
                        }
                        BvChild::Edge(color, n.recolor_nth_black(counter, target))
                    }
                })
                .collect(),
        }
    }
}

impl BvTree {
    pub fn encode(&self) -> String {
        self.root.encode()
    }

    pub fn vertices(&self) -> usize {
        self.root.vertices()
    }

    pub fn leaves(&self) -> usize {
        self.root.leaves()
    }

    /// The bivalence constraint: every single-child vertex sits next to an
    /// extremity.
    pub fn is_valid(&self) -> bool {
        self.root.internal_ok(true)
    }

    pub fn canonicalize(&self) -> BvTree {
        let mut root = self.root.clone();
        root.sort();
        BvTree { root }
    }

    pub fn black_edge_count(&self) -> usize {
        self.root.black_edges()
    }

    /// The tree with the `k`-th black edge (in traversal order) turned white.
    pub fn recolor_black(&self, k: usize) -> BvTree {
        let mut counter = 0;
        BvTree {
            root: self.root.recolor_nth_black(&mut counter, k),
        }
    }
}

impl fmt::Display for BvTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encode())
    }
}

/// All two-colored trees with leaves `{0..n-1}` and at most `max_vertices`
/// vertices, canonical forms in deterministic order.
pub fn enum_bvtrees(n: usize, max_vertices: usize) -> Vec<BvTree> {
    assert!(n >= 1);
    let set: Vec<u32> = (0..n as u32).collect();
    let mut out = Vec::new();
    for (node, used) in node_options(&set, max_vertices) {
        out.push(BvTree { root: node.clone() }.canonicalize());
        // one bivalent wrapper above the root is allowed
        if used + 1 <= max_vertices {
            for color in [EdgeColor::Black, EdgeColor::White] {
                out.push(
                    BvTree {
                        root: BvNode {
                            children: vec![BvChild::Edge(color, node.clone())],
                        },
                    }
                    .canonicalize(),
                );
            }
        }
    }
    out.sort_by_key(|t| t.encode());
    out.dedup();
    out
}

/// Non-root vertices over the leaf set: either the bivalent leaf-holder (for
/// a singleton), or a vertex with >= 2 children.
fn node_options(set: &[u32], budget: usize) -> Vec<(BvNode, usize)> {
    if budget == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    if set.len() == 1 {
        out.push((
            BvNode {
                children: vec![BvChild::Leaf(set[0])],
            },
            1,
        ));
        return out;
    }
    for partition in super::set_partitions(set) {
        if partition.len() < 2 {
            continue;
        }
        let choices: Vec<Vec<(BvChild, usize)>> = partition
            .iter()
            .map(|block| branch_options(block, budget - 1))
            .collect();
        if choices.iter().any(|c| c.is_empty()) {
            continue;
        }
        let mut stack: Vec<(Vec<BvChild>, usize)> = vec![(Vec::new(), 1)];
        for level in &choices {
            let mut next = Vec::new();
            for (partial, used) in &stack {
                for (child, cu) in level {
                    if used + cu <= budget {
                        let mut p = partial.clone();
                        p.push(child.clone());
                        next.push((p, used + cu));
                    }
                }
            }
            stack = next;
        }
        for (children, used) in stack {
            out.push((BvNode { children }, used));
        }
    }
    out
}

/// Branch over a leaf block: a bare leaf (singleton only) or a colored edge
/// to a subtree.
fn branch_options(block: &[u32], budget: usize) -> Vec<(BvChild, usize)> {
    let mut out = Vec::new();
    if block.len() == 1 {
        out.push((BvChild::Leaf(block[0]), 0));
    }
    for (node, used) in node_options(block, budget) {
        for color in [EdgeColor::Black, EdgeColor::White] {
            out.push((BvChild::Edge(color, node.clone()), used));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_leaf_small_budgets() {
        // one vertex: just the leaf-holder; two vertices add the colored chain
        assert_eq!(enum_bvtrees(1, 1).len(), 1);
        assert_eq!(enum_bvtrees(1, 2).len(), 3);
        // chains of three bivalent vertices are forbidden
        assert_eq!(enum_bvtrees(1, 3).len(), 3);
    }

    #[test]
    fn all_returned_trees_are_valid() {
        for n in 1..=3 {
            for t in enum_bvtrees(n, 4) {
                assert!(t.is_valid(), "{t}");
                assert_eq!(t.leaves(), n);
                assert!(t.vertices() <= 4);
            }
        }
    }

    #[test]
    fn recoloring_closure() {
        for n in 1..=3 {
            let list = enum_bvtrees(n, 4);
            let set: std::collections::BTreeSet<String> =
                list.iter().map(|t| t.encode()).collect();
            for t in &list {
                for k in 0..t.black_edge_count() {
                    let r = t.recolor_black(k).canonicalize();
                    assert!(set.contains(&r.encode()), "missing recoloring of {t}");
                }
            }
        }
    }

    #[test]
    fn matches_unconstrained_bruteforce_oracle() {
        // oracle: enumerate all rooted trees with arbitrary bivalent chains
        // within the budget, then filter by the validity predicate
        for n in 1..=3 {
            for budget in 1..=4 {
                let mut oracle: Vec<String> = unconstrained(&(0..n as u32).collect::<Vec<_>>(), budget)
                    .into_iter()
                    .map(|node| BvTree { root: node })
                    .filter(|t| t.is_valid())
                    .map(|t| t.canonicalize().encode())
                    .collect();
                oracle.sort();
                oracle.dedup();
                let listed: Vec<String> = enum_bvtrees(n, budget)
                    .iter()
                    .map(|t| t.encode())
                    .collect();
                assert_eq!(oracle, listed, "n = {n}, budget = {budget}");
            }
        }
    }

    fn unconstrained(set: &[u32], budget: usize) -> Vec<BvNode> {
        if budget == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        if set.len() == 1 {
            out.push(BvNode {
                children: vec![BvChild::Leaf(set[0])],
            });
        }
        // single-child chain over the full set
        for sub in unconstrained(set, budget - 1) {
            for color in [EdgeColor::Black, EdgeColor::White] {
                out.push(BvNode {
                    children: vec![BvChild::Edge(color, sub.clone())],
                });
            }
        }
        if set.len() >= 2 {
            for partition in crate::combin::set_partitions(set) {
                if partition.len() < 2 {
                    continue;
                }
                let choices: Vec<Vec<(BvChild, usize)>> = partition
                    .iter()
                    .map(|block| {
                        let mut opts = Vec::new();
                        if block.len() == 1 {
                            opts.push((BvChild::Leaf(block[0]), 0));
                        }
                        for sub in unconstrained(block, budget.saturating_sub(1)) {
                            let used = sub.vertices();
                            for color in [EdgeColor::Black, EdgeColor::White] {
                                opts.push((BvChild::Edge(color, sub.clone()), used));
                            }
                        }
                        opts
                    })
                    .collect();
                if choices.iter().any(|c| c.is_empty()) {
                    continue;
                }
                let mut stack: Vec<(Vec<BvChild>, usize)> = vec![(Vec::new(), 1)];
                for level in &choices {
                    let mut next = Vec::new();
                    for (partial, used) in &stack {
                        for (child, cu) in level {
                            if used + cu <= budget {
                                let mut p = partial.clone();
                                p.push(child.clone());
                                next.push((p, used + cu));
                            }
                        }
                    }
                    stack = next;
                }
                out.extend(stack.into_iter().map(|(children, _)| BvNode { children }));
            }
        }
        out
    }
}
