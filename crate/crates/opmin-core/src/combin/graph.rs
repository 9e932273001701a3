//! Stable genus-labelled multigraphs (no legs): connected graphs with loops
//! and parallel edges allowed, every vertex satisfying `2g - 2 + valence > 0`.
//! The edge list order doubles as the reference orientation; a permutation of
//! the list carries the parity sign of the permutation.

use std::collections::BTreeMap;
use std::fmt;

/// A connected multigraph with genus-labelled vertices. Edges are stored as
/// normalized pairs `(u, v)` with `u <= v`; their order in the list is the
/// reference orientation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StableGraph {
    pub genera: Vec<u32>,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractionKind {
    Loop,
    NonLoop,
}

impl StableGraph {
    pub fn new(genera: Vec<u32>, edges: Vec<(usize, usize)>) -> StableGraph {
        let edges = edges
            .into_iter()
            .map(|(u, v)| if u <= v { (u, v) } else { (v, u) })
            .collect();
        StableGraph { genera, edges }
    }

    pub fn n_vertices(&self) -> usize {
        self.genera.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    pub fn is_stable(&self) -> bool {
        (0..self.n_vertices())
            .all(|v| 2 * self.genera[v] as i64 - 2 + self.valence(v) as i64 > 0)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n_vertices();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.edges {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Total genus: first Betti number plus the vertex genera.
    pub fn total_genus(&self) -> u32 {
        debug_assert!(self.is_connected());
        let b1 = self.n_edges() as i64 - self.n_vertices() as i64 + 1;
        (b1 + self.genera.iter().map(|&g| g as i64).sum::<i64>()) as u32
    }

    /// Canonical serialization of the graph as stored (genera; edge list).
    pub fn encode(&self) -> String {
        let gs: Vec<String> = self.genera.iter().map(|g| g.to_string()).collect();
        let es: Vec<String> = self
            .edges
            .iter()
            .map(|(u, v)| format!("{u}-{v}"))
            .collect();
        format!("g[{}];e[{}]", gs.join(","), es.join(","))
    }

    /// Canonical form: minimize `(genera, sorted edge list)` over all vertex
    /// permutations. Returns the canonical graph (edges sorted) and, for the
    /// minimizing permutation, the map from this graph's edge positions to
    /// canonical edge positions (parallel edges matched in order).
    pub fn canonical(&self) -> (StableGraph, Vec<usize>) {
        let n = self.n_vertices();
        let mut best: Option<(Vec<u32>, Vec<(usize, usize)>, Vec<usize>)> = None;
        for perm in permutations(n) {
            let genera: Vec<u32> = {
                let mut g = vec![0u32; n];
                for (old, &new) in perm.iter().enumerate() {
                    g[new] = self.genera[old];
                }
                g
            };
            let mapped: Vec<(usize, usize)> = self
                .edges
                .iter()
                .map(|&(u, v)| {
                    let (a, b) = (perm[u], perm[v]);
                    if a <= b {
                        (a, b)
                    } else {
                        (b, a)
                    }
                })
                .collect();
            let mut sorted = mapped.clone();
            sorted.sort_unstable();
            let key = (genera.clone(), sorted.clone());
            let better = match &best {
                None => true,
                Some((bg, bs, _)) => key < (bg.clone(), bs.clone()),
            };
            if better {
                // stable assignment of original positions to sorted positions
                let mut taken = vec![false; mapped.len()];
                let mut edge_perm = vec![0usize; mapped.len()];
                for (p, e) in mapped.iter().enumerate() {
                    let q = sorted
                        .iter()
                        .enumerate()
                        .position(|(q, f)| f == e && !taken[q])
                        .expect("edge present in its own sort");
                    taken[q] = true;
                    edge_perm[p] = q;
                }
                best = Some((genera, sorted, edge_perm));
            }
        }
        let (genera, edges, edge_perm) = best.expect("nonempty vertex set");
        (StableGraph { genera, edges }, edge_perm)
    }

    /// Order of the automorphism group in the half-edge sense: vertex
    /// permutations preserving genera and the edge multiset, times the
    /// matchings of parallel edges, times a flip factor 2 per loop.
    pub fn aut_order(&self) -> u64 {
        let n = self.n_vertices();
        let mut classes: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for &e in &self.edges {
            *classes.entry(e).or_insert(0) += 1;
        }
        let mut total = 0u64;
        for perm in permutations(n) {
            let genus_ok = (0..n).all(|v| self.genera[v] == {
                let old = perm.iter().position(|&x| x == v).unwrap();
                self.genera[old]
            });
            if !genus_ok {
                continue;
            }
            let mut mapped: BTreeMap<(usize, usize), u64> = BTreeMap::new();
            for &(u, v) in &self.edges {
                let (a, b) = (perm[u], perm[v]);
                let e = if a <= b { (a, b) } else { (b, a) };
                *mapped.entry(e).or_insert(0) += 1;
            }
            if mapped != classes {
                continue;
            }
            let mut contrib = 1u64;
            for (&(u, v), &m) in &classes {
                contrib *= factorial(m);
                if u == v {
                    contrib *= 1u64 << m;
                }
            }
            total += contrib;
        }
        total
    }
}

impl fmt::Display for StableGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encode())
    }
}

fn factorial(m: u64) -> u64 {
    (1..=m).product()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Contract the edge at `idx`: a non-loop merges its endpoints and adds the
/// genera; a loop disappears and increments its vertex's genus. The remaining
/// edges keep their induced order. Returns the contraction, its kind, and
/// whether the result is stable (total genus is always preserved).
pub fn contract_edge(g: &StableGraph, idx: usize) -> (StableGraph, ContractionKind, bool) {
    let (u, v) = g.edges[idx];
    let mut genera = g.genera.clone();
    let mut edges: Vec<(usize, usize)> = g
        .edges
        .iter()
        .enumerate()
        .filter(|(p, _)| *p != idx)
        .map(|(_, &e)| e)
        .collect();
    let kind;
    if u == v {
        genera[u] += 1;
        kind = ContractionKind::Loop;
    } else {
        genera[u] += genera[v];
        genera.remove(v);
        let relabel = |w: usize| {
            if w == v {
                u
            } else if w > v {
                w - 1
            } else {
                w
            }
        };
        edges = edges
            .into_iter()
            .map(|(a, b)| {
                let (a, b) = (relabel(a), relabel(b));
                if a <= b {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        kind = ContractionKind::NonLoop;
    }
    let out = StableGraph { genera, edges };
    let stable = out.is_stable();
    (out, kind, stable)
}

/// All isomorphism classes of stable connected graphs with the given total
/// genus and at most `max_vertices` vertices, each in canonical form with its
/// automorphism order, deterministically ordered.
pub fn enum_stable_graphs(total_genus: u32, max_vertices: usize) -> Vec<(StableGraph, u64)> {
    assert!(total_genus >= 1, "no stable legless graphs below genus 1");
    let mut seen: BTreeMap<String, (StableGraph, u64)> = BTreeMap::new();
    for nv in 1..=max_vertices {
        for genera in genus_vectors(nv, total_genus) {
            let gsum: u32 = genera.iter().sum();
            let b1 = total_genus - gsum;
            let ne = b1 as usize + nv - 1;
            let pairs: Vec<(usize, usize)> = (0..nv)
                .flat_map(|u| (u..nv).map(move |v| (u, v)))
                .collect();
            for multiset in multisets(&pairs, ne) {
                let g = StableGraph::new(genera.clone(), multiset);
                if !g.is_connected() || !g.is_stable() {
                    continue;
                }
                debug_assert_eq!(g.total_genus(), total_genus);
                let (canon, _) = g.canonical();
                let key = canon.encode();
                seen.entry(key).or_insert_with(|| {
                    let aut = canon.aut_order();
                    (canon, aut)
                });
            }
        }
    }
    seen.into_values().collect()
}

fn genus_vectors(nv: usize, max_sum: u32) -> Vec<Vec<u32>> {
    if nv == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for g in 0..=max_sum {
        for mut rest in genus_vectors(nv - 1, max_sum - g) {
            let mut v = vec![g];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

fn multisets<T: Clone>(items: &[T], k: usize) -> Vec<Vec<T>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.is_empty() {
        return vec![];
    }
    let mut out = Vec::new();
    // take j >= 0 copies of the first item
    for j in 0..=k {
        for mut rest in multisets(&items[1..], k - j) {
            let mut v = vec![items[0].clone(); j];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}
