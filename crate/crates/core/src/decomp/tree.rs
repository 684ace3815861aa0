use std::fmt;

use crate::error::{Error, Result};
use crate::graphs::Graph;

/// A tree decomposition: node bags plus tree edges between node indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn new(mut bags: Vec<Vec<usize>>, edges: Vec<(usize, usize)>) -> Self {
        for b in &mut bags {
            b.sort_unstable();
            b.dedup();
        }
        TreeDecomposition { bags, edges }
    }

    /// A single bag holding every vertex.
    pub fn trivial(n: usize) -> Self {
        TreeDecomposition::new(vec![(0..n).collect()], Vec::new())
    }

    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    /// Largest bag size minus one (0 for decompositions without vertices).
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        adj
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TdViolation {
    NoNodes,
    BadNode {
        node: usize,
    },
    NotATree,
    UnknownVertex {
        node: usize,
        vertex: usize,
    },
    /// (T1) the vertex is in no bag.
    VertexUncovered {
        vertex: usize,
    },
    /// (T2) no bag contains both endpoints.
    EdgeUncovered {
        u: usize,
        v: usize,
    },
    /// (T3) the bags containing the vertex are not connected.
    Disconnected {
        vertex: usize,
        components: usize,
    },
}

impl fmt::Display for TdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TdViolation::NoNodes => write!(f, "decomposition has no nodes"),
            TdViolation::BadNode { node } => write!(f, "edge references missing node {node}"),
            TdViolation::NotATree => write!(f, "decomposition graph is not a tree"),
            TdViolation::UnknownVertex { node, vertex } => {
                write!(f, "bag of node {node} contains unknown vertex {vertex}")
            }
            TdViolation::VertexUncovered { vertex } => write!(f, "vertex {vertex} is in no bag"),
            TdViolation::EdgeUncovered { u, v } => write!(f, "edge {{{u}, {v}}} is in no bag"),
            TdViolation::Disconnected { vertex, components } => {
                write!(f, "bags containing vertex {vertex} form {components} components")
            }
        }
    }
}

/// Checks tree shape and conditions (T1)–(T3); reports the first violation found.
pub fn validate_tree_decomposition(g: &Graph, td: &TreeDecomposition) -> std::result::Result<(), TdViolation> {
    let k = td.bags.len();
    if k == 0 {
        return Err(TdViolation::NoNodes);
    }
    if let Some(&(a, b)) = td.edges.iter().find(|&&(a, b)| a >= k || b >= k || a == b) {
        return Err(TdViolation::BadNode { node: if a >= k || a == b { a } else { b } });
    }
    let adj = td.adjacency();
    if td.edges.len() != k - 1 || count_components(&adj, |_| true) != 1 {
        return Err(TdViolation::NotATree);
    }
    let n = g.vertex_count();
    let mut holders = vec![Vec::new(); n];
    for (t, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if v >= n {
                return Err(TdViolation::UnknownVertex { node: t, vertex: v });
            }
            holders[v].push(t);
        }
    }
    if let Some(v) = (0..n).find(|&v| holders[v].is_empty()) {
        return Err(TdViolation::VertexUncovered { vertex: v });
    }
    for (u, v) in g.edges() {
        let covered = holders[u].iter().any(|t| td.bags[*t].binary_search(&v).is_ok());
        if !covered {
            return Err(TdViolation::EdgeUncovered { u, v });
        }
    }
    for (v, hs) in holders.iter().enumerate() {
        let mut inside = vec![false; k];
        hs.iter().for_each(|&t| inside[t] = true);
        let c = count_components(&adj, |t| inside[t]);
        if c != 1 {
            return Err(TdViolation::Disconnected { vertex: v, components: c });
        }
    }
    Ok(())
}

fn count_components(adj: &[Vec<usize>], keep: impl Fn(usize) -> bool) -> usize {
    let mut seen = vec![false; adj.len()];
    let mut count = 0;
    for s in 0..adj.len() {
        if seen[s] || !keep(s) {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] && keep(w) {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    count
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Heuristic {
    MinDegree,
    MinFill,
}

/// Greedy elimination ordering; ties go to the lowest vertex id.
pub fn elimination_ordering(g: &Graph, heuristic: Heuristic) -> Vec<usize> {
    let n = g.vertex_count();
    let mut nb: Vec<Vec<bool>> = (0..n).map(|u| (0..n).map(|v| g.has_edge(u, v)).collect()).collect();
    let mut alive = vec![true; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let score = |v: usize| -> usize {
            let ns: Vec<usize> = (0..n).filter(|&w| alive[w] && nb[v][w]).collect();
            match heuristic {
                Heuristic::MinDegree => ns.len(),
                Heuristic::MinFill => {
                    let mut fill = 0;
                    for (a, &x) in ns.iter().enumerate() {
                        fill += ns[a + 1..].iter().filter(|&&y| !nb[x][y]).count();
                    }
                    fill
                }
            }
        };
        let v = (0..n).filter(|&v| alive[v]).min_by_key(|&v| (score(v), v)).expect("vertex left");
        let ns: Vec<usize> = (0..n).filter(|&w| alive[w] && nb[v][w]).collect();
        for &x in &ns {
            for &y in &ns {
                if x != y {
                    nb[x][y] = true;
                }
            }
        }
        alive[v] = false;
        order.push(v);
    }
    order
}

/// Builds the decomposition induced by eliminating vertices in `order`.
pub fn tree_decomposition_from_ordering(g: &Graph, order: &[usize]) -> TreeDecomposition {
    let n = g.vertex_count();
    if n == 0 {
        return TreeDecomposition::trivial(0);
    }
    let mut pos = vec![0; n];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    let mut later: Vec<Vec<usize>> =
        (0..n).map(|v| g.neighbors(v).iter().copied().filter(|&w| pos[w] > pos[v]).collect()).collect();
    let mut bags = Vec::with_capacity(n);
    let mut parent: Vec<Option<usize>> = vec![None; n];
    for (k, &v) in order.iter().enumerate() {
        let mut nbrs = std::mem::take(&mut later[v]);
        nbrs.sort_unstable();
        nbrs.dedup();
        for (a, &x) in nbrs.iter().enumerate() {
            for &y in &nbrs[a + 1..] {
                let (lo, hi) = if pos[x] < pos[y] { (x, y) } else { (y, x) };
                if !later[lo].contains(&hi) {
                    later[lo].push(hi);
                }
            }
        }
        parent[k] = nbrs.iter().map(|&w| pos[w]).min();
        let mut bag = nbrs;
        bag.push(v);
        bags.push(bag);
    }
    let mut edges = Vec::new();
    let mut prev_root: Option<usize> = None;
    for (k, &up) in parent.iter().enumerate().take(n) {
        match up {
            Some(p) => edges.push((k, p)),
            None => {
                if let Some(r) = prev_root {
                    edges.push((r, k));
                }
                prev_root = Some(k);
            }
        }
    }
    TreeDecomposition::new(bags, edges)
}

pub fn heuristic_tree_decomposition(g: &Graph, heuristic: Heuristic) -> TreeDecomposition {
    tree_decomposition_from_ordering(g, &elimination_ordering(g, heuristic))
}

pub const DEFAULT_EXACT_LIMIT: usize = 12;

/// Optimal width by the subset recurrence over elimination orderings.
pub fn exact_treewidth(g: &Graph) -> Result<(usize, TreeDecomposition)> {
    exact_treewidth_with_limit(g, DEFAULT_EXACT_LIMIT)
}

pub fn exact_treewidth_with_limit(g: &Graph, limit: usize) -> Result<(usize, TreeDecomposition)> {
    let n = g.vertex_count();
    if n > limit || n > 24 {
        return Err(Error::Resource(format!("exact treewidth limited to {limit} vertices, graph has {n}")));
    }
    if n == 0 {
        return Ok((0, TreeDecomposition::trivial(0)));
    }
    let adj: Vec<u32> = (0..n).map(|v| g.neighbors(v).iter().fold(0u32, |acc, &w| acc | (1 << w))).collect();
    // q(s, v): vertices outside s ∪ {v} reachable from v through s.
    let q = |s: u32, v: usize| -> u32 {
        let mut reach = adj[v];
        let mut frontier = adj[v] & s;
        let mut visited = frontier | (1 << v);
        while frontier != 0 {
            let w = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            reach |= adj[w];
            let fresh = adj[w] & s & !visited;
            visited |= fresh;
            frontier |= fresh;
        }
        reach & !s & !(1 << v)
    };
    let full = (1u32 << n) - 1;
    let mut tw = vec![u8::MAX; 1 << n];
    let mut last = vec![0u8; 1 << n];
    tw[0] = 0;
    for s in 1..=full {
        let mut best = u8::MAX;
        let mut arg = 0;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let without = s & !(1 << v);
            let val = tw[without as usize].max(q(without, v).count_ones() as u8);
            if val < best {
                best = val;
                arg = v as u8;
            }
        }
        tw[s as usize] = best;
        last[s as usize] = arg;
    }
    let mut order = Vec::with_capacity(n);
    let mut s = full;
    while s != 0 {
        let v = last[s as usize] as usize;
        order.push(v);
        s &= !(1 << v);
    }
    order.reverse();
    let td = tree_decomposition_from_ordering(g, &order);
    let width = tw[full as usize] as usize;
    debug_assert_eq!(td.width(), width);
    Ok((width, td))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|v| (v - 1, v)))
    }

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    fn grid(r: usize, c: usize) -> Graph {
        let mut e = Vec::new();
        for a in 0..r {
            for b in 0..c {
                let v = a * c + b;
                if b + 1 < c {
                    e.push((v, v + 1));
                }
                if a + 1 < r {
                    e.push((v, v + c));
                }
            }
        }
        Graph::from_edges(r * c, e)
    }

    #[test]
    fn single_bag_is_valid() {
        let g = complete(4);
        let td = TreeDecomposition::trivial(4);
        assert_eq!(validate_tree_decomposition(&g, &td), Ok(()));
        assert_eq!(td.width(), 3);
    }

    #[test]
    fn missing_vertex_is_t1() {
        let g = path(3);
        let td = TreeDecomposition::new(vec![vec![0, 1]], vec![]);
        assert_eq!(validate_tree_decomposition(&g, &td), Err(TdViolation::VertexUncovered { vertex: 2 }));
    }

    #[test]
    fn split_vertex_is_t3() {
        let g = path(3);
        let td = TreeDecomposition::new(vec![vec![0, 1], vec![1, 2], vec![0]], vec![(0, 1), (1, 2)]);
        assert_eq!(validate_tree_decomposition(&g, &td), Err(TdViolation::Disconnected { vertex: 0, components: 2 }));
    }

    #[test]
    fn missing_edge_is_t2() {
        let g = path(3);
        let td = TreeDecomposition::new(vec![vec![0], vec![1, 2]], vec![(0, 1)]);
        assert_eq!(validate_tree_decomposition(&g, &td), Err(TdViolation::EdgeUncovered { u: 0, v: 1 }));
    }

    #[test]
    fn heuristics_on_trees_and_cliques() {
        let tree = Graph::from_edges(6, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5)]);
        for h in [Heuristic::MinDegree, Heuristic::MinFill] {
            let td = heuristic_tree_decomposition(&tree, h);
            assert_eq!(validate_tree_decomposition(&tree, &td), Ok(()));
            assert_eq!(td.width(), 1);
            let k5 = complete(5);
            let td = heuristic_tree_decomposition(&k5, h);
            assert_eq!(td.width(), 4);
        }
    }

    #[test]
    fn exact_small_graphs() {
        assert_eq!(exact_treewidth(&path(4)).unwrap().0, 1);
        assert_eq!(exact_treewidth(&complete(4)).unwrap().0, 3);
        let (w, td) = exact_treewidth(&grid(3, 3)).unwrap();
        assert_eq!(w, 3);
        assert_eq!(validate_tree_decomposition(&grid(3, 3), &td), Ok(()));
        assert!(exact_treewidth(&path(13)).is_err());
    }

    #[test]
    fn disconnected_graph_yields_tree() {
        let g = Graph::from_edges(5, [(0, 1), (3, 4)]);
        let td = heuristic_tree_decomposition(&g, Heuristic::MinFill);
        assert_eq!(validate_tree_decomposition(&g, &td), Ok(()));
    }
}
