use std::fmt;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::graphs::{cut_rank, Graph};

/// A branch decomposition: a tree on `adj.len()` nodes whose leaves carry the graph vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchDecomposition {
    pub adj: Vec<Vec<usize>>,
    /// Tree node holding each graph vertex.
    pub leaf_of: Vec<usize>,
}

impl BranchDecomposition {
    pub fn from_edges(nodes: usize, edges: &[(usize, usize)], leaf_of: Vec<usize>) -> Self {
        let mut adj = vec![Vec::new(); nodes];
        for &(a, b) in edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        BranchDecomposition { adj, leaf_of }
    }

    /// Caterpillar whose leaves appear along the spine in the given vertex order.
    pub fn caterpillar(order: &[usize]) -> Self {
        let n = order.len();
        let mut leaf_of = vec![0; n];
        for (k, &v) in order.iter().enumerate() {
            leaf_of[v] = k;
        }
        let mut edges = Vec::new();
        let nodes = match n {
            0 | 1 => n,
            2 => {
                edges.push((0, 1));
                2
            }
            _ => {
                let spine = |s: usize| n + s;
                edges.push((0, spine(0)));
                edges.push((1, spine(0)));
                for s in 1..n - 2 {
                    edges.push((spine(s - 1), spine(s)));
                    edges.push((s + 1, spine(s)));
                }
                edges.push((n - 1, spine(n - 3)));
                2 * n - 2
            }
        };
        BranchDecomposition::from_edges(nodes, &edges, leaf_of)
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.leaf_of.len()
    }

    /// Tree edges `(a, b)` with `a < b`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = (0..self.node_count())
            .flat_map(|a| self.adj[a].iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .collect();
        out.sort_unstable();
        out
    }

    /// Graph vertex stored at each tree node.
    pub fn vertex_at(&self) -> Vec<Option<usize>> {
        let mut at = vec![None; self.node_count()];
        for (v, &t) in self.leaf_of.iter().enumerate() {
            at[t] = Some(v);
        }
        at
    }

    /// Vertices on `node`'s side after deleting the edge `{node, away}`.
    pub fn side(&self, node: usize, away: usize) -> FixedBitSet {
        let at = self.vertex_at();
        let mut out = FixedBitSet::with_capacity(self.vertex_count());
        let mut stack = vec![(node, away)];
        while let Some((u, from)) = stack.pop() {
            if let Some(v) = at[u] {
                out.insert(v);
            }
            for &w in &self.adj[u] {
                if w != from {
                    stack.push((w, u));
                }
            }
        }
        out
    }

    /// Replaces vertex `v` by the twin vertices `groups[v]` (each group nonempty), hanging
    /// them off a caterpillar where the old leaf was.
    pub fn expand(&self, groups: &[Vec<usize>], new_vertex_count: usize) -> Self {
        assert_eq!(groups.len(), self.vertex_count());
        if self.vertex_count() == 1 {
            let g = &groups[0];
            let base = BranchDecomposition::caterpillar(&(0..g.len()).collect::<Vec<_>>());
            let mut leaf_of = vec![0; new_vertex_count];
            for (k, &v) in g.iter().enumerate() {
                leaf_of[v] = base.leaf_of[k];
            }
            return BranchDecomposition { adj: base.adj, leaf_of };
        }
        let mut adj = self.adj.clone();
        let mut leaf_of = vec![usize::MAX; new_vertex_count];
        for (v, g) in groups.iter().enumerate() {
            assert!(!g.is_empty(), "every vertex needs at least one copy");
            let leaf = self.leaf_of[v];
            leaf_of[g[0]] = leaf;
            if g.len() == 1 {
                continue;
            }
            let outer = adj[leaf][0];
            let new_node = |adj: &mut Vec<Vec<usize>>| {
                adj.push(Vec::new());
                adj.len() - 1
            };
            let connect = |adj: &mut Vec<Vec<usize>>, a: usize, b: usize| {
                adj[a].push(b);
                adj[b].push(a);
            };
            adj[leaf].clear();
            adj[outer].retain(|&x| x != leaf);
            let k = g.len();
            let mut prev = outer;
            for (idx, &copy) in g.iter().enumerate().take(k - 1) {
                let spine = new_node(&mut adj);
                connect(&mut adj, prev, spine);
                let l = if idx == 0 { leaf } else { new_node(&mut adj) };
                connect(&mut adj, spine, l);
                leaf_of[copy] = l;
                prev = spine;
            }
            let l = new_node(&mut adj);
            connect(&mut adj, prev, l);
            leaf_of[g[k - 1]] = l;
        }
        BranchDecomposition { adj, leaf_of }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BdViolation {
    VertexCount { expected: usize, found: usize },
    NotATree,
    NotALeaf { vertex: usize, node: usize },
    SharedLeaf { node: usize },
    EmptyLeaf { node: usize },
    BadDegree { node: usize, degree: usize },
}

impl fmt::Display for BdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BdViolation::VertexCount { expected, found } => {
                write!(f, "decomposition covers {found} vertices, graph has {expected}")
            }
            BdViolation::NotATree => write!(f, "decomposition graph is not a tree"),
            BdViolation::NotALeaf { vertex, node } => write!(f, "vertex {vertex} sits at non-leaf node {node}"),
            BdViolation::SharedLeaf { node } => write!(f, "leaf {node} holds several vertices"),
            BdViolation::EmptyLeaf { node } => write!(f, "leaf {node} holds no vertex"),
            BdViolation::BadDegree { node, degree } => write!(f, "internal node {node} has degree {degree}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BdReport {
    pub rankwidth: usize,
    /// Cut-rank of every tree edge, in the order of [`BranchDecomposition::edges`].
    pub edge_widths: Vec<((usize, usize), usize)>,
}

pub fn validate_branch_decomposition(g: &Graph, bd: &BranchDecomposition) -> Result<BdReport, BdViolation> {
    let n = g.vertex_count();
    if bd.vertex_count() != n {
        return Err(BdViolation::VertexCount { expected: n, found: bd.vertex_count() });
    }
    let k = bd.node_count();
    if bd.leaf_of.iter().any(|&t| t >= k) || bd.adj.iter().flatten().any(|&w| w >= k) {
        return Err(BdViolation::NotATree);
    }
    let edge_count: usize = bd.adj.iter().map(Vec::len).sum::<usize>() / 2;
    if k == 0 || edge_count + 1 != k || !connected(&bd.adj) {
        if n == 0 && k == 0 {
            return Ok(BdReport { rankwidth: 0, edge_widths: Vec::new() });
        }
        return Err(BdViolation::NotATree);
    }
    let mut holder = vec![None; k];
    for (v, &t) in bd.leaf_of.iter().enumerate() {
        if bd.adj[t].len() > 1 {
            return Err(BdViolation::NotALeaf { vertex: v, node: t });
        }
        if holder[t].replace(v).is_some() {
            return Err(BdViolation::SharedLeaf { node: t });
        }
    }
    for (t, held) in holder.iter().enumerate().take(k) {
        let d = bd.adj[t].len();
        if d <= 1 && held.is_none() {
            return Err(BdViolation::EmptyLeaf { node: t });
        }
        if d == 2 || d > 3 {
            return Err(BdViolation::BadDegree { node: t, degree: d });
        }
    }
    let edge_widths: Vec<((usize, usize), usize)> =
        bd.edges().into_par_iter().map(|(a, b)| ((a, b), cut_rank(g, &bd.side(a, b)))).collect();
    let rankwidth = edge_widths.iter().map(|e| e.1).max().unwrap_or(0);
    Ok(BdReport { rankwidth, edge_widths })
}

fn connected(adj: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.iter().all(|&s| s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    #[test]
    fn complete_graph_has_rankwidth_one() {
        let g = complete(6);
        let bd = BranchDecomposition::caterpillar(&[3, 1, 4, 0, 5, 2]);
        assert_eq!(validate_branch_decomposition(&g, &bd).unwrap().rankwidth, 1);
    }

    #[test]
    fn edgeless_graph_has_rankwidth_zero() {
        let g = Graph::new(5);
        let bd = BranchDecomposition::caterpillar(&[0, 1, 2, 3, 4]);
        assert_eq!(validate_branch_decomposition(&g, &bd).unwrap().rankwidth, 0);
    }

    #[test]
    fn tiny_trees() {
        for n in 0..3 {
            let g = Graph::new(n);
            let bd = BranchDecomposition::caterpillar(&(0..n).collect::<Vec<_>>());
            assert!(validate_branch_decomposition(&g, &bd).is_ok(), "n = {n}");
        }
    }

    #[test]
    fn rejects_degree_two() {
        let g = Graph::new(2);
        let bd = BranchDecomposition::from_edges(3, &[(0, 2), (2, 1)], vec![0, 1]);
        assert_eq!(validate_branch_decomposition(&g, &bd), Err(BdViolation::BadDegree { node: 2, degree: 2 }));
    }

    #[test]
    fn expansion_stays_valid() {
        let bd = BranchDecomposition::caterpillar(&[0, 1, 2]);
        let groups = vec![vec![0, 3, 4], vec![1], vec![2, 5]];
        let big = bd.expand(&groups, 6);
        let g = Graph::new(6);
        assert!(validate_branch_decomposition(&g, &big).is_ok());
        let single = BranchDecomposition::caterpillar(&[0]).expand(&[vec![0, 1, 2]], 3);
        assert!(validate_branch_decomposition(&Graph::new(3), &single).is_ok());
    }
}
