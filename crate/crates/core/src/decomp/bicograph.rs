use fixedbitset::FixedBitSet;

use super::branch::BranchDecomposition;
use crate::error::{Error, Result};
use crate::graphs::Graph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BiCoNode {
    Leaf(usize),
    /// The children are the components of the node's vertex set, taken in the graph itself
    /// or, when `complemented`, in its bi-complement.
    Split {
        complemented: bool,
        children: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiCotree {
    pub nodes: Vec<BiCoNode>,
    pub root: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recognition {
    Bicograph(BiCotree),
    /// A vertex set connected both in the graph and in its bi-complement.
    Witness(Vec<usize>),
}

/// Bipartite graph with a fixed side per vertex, viewed either directly or bi-complemented.
struct Sided<'a> {
    g: &'a Graph,
    left: FixedBitSet,
    right: FixedBitSet,
}

impl Sided<'_> {
    fn neighbors_within(&self, u: usize, s: &FixedBitSet, complemented: bool) -> FixedBitSet {
        let mut out = if complemented {
            let mut opp = if self.left.contains(u) { self.right.clone() } else { self.left.clone() };
            opp.difference_with(self.g.row(u));
            opp
        } else {
            self.g.row(u).clone()
        };
        out.intersect_with(s);
        out
    }

    fn components(&self, s: &FixedBitSet, complemented: bool) -> Vec<FixedBitSet> {
        let mut rest = s.clone();
        let mut comps = Vec::new();
        while let Some(start) = rest.ones().next() {
            let mut comp = FixedBitSet::with_capacity(s.len());
            comp.insert(start);
            rest.set(start, false);
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                let mut fresh = self.neighbors_within(u, &rest, complemented);
                fresh.intersect_with(&rest);
                for w in fresh.ones() {
                    rest.set(w, false);
                    comp.insert(w);
                    stack.push(w);
                }
            }
            comps.push(comp);
        }
        comps
    }
}

/// Recognizes bi-cographs. `left[v]` gives the side of vertex `v`; every edge must cross sides.
pub fn bicograph_recognize(g: &Graph, left: &[bool]) -> Result<Recognition> {
    let n = g.vertex_count();
    if left.len() != n {
        return Err(Error::Invalid("side labels do not match the vertex count".into()));
    }
    if let Some((u, v)) = g.edges().into_iter().find(|&(u, v)| left[u] == left[v]) {
        return Err(Error::Invalid(format!("graph is not bipartite for the given sides: edge {{{u}, {v}}}")));
    }
    if n == 0 {
        return Err(Error::Invalid("graph has no vertices".into()));
    }
    let mut lset = FixedBitSet::with_capacity(n);
    (0..n).filter(|&v| left[v]).for_each(|v| lset.insert(v));
    let mut rset = FixedBitSet::with_capacity(n);
    rset.insert_range(..);
    rset.difference_with(&lset);
    let sided = Sided { g, left: lset, right: rset };
    let mut all = FixedBitSet::with_capacity(n);
    all.insert_range(..);

    let mut nodes = Vec::new();
    if n == 1 {
        nodes.push(BiCoNode::Leaf(0));
        return Ok(Recognition::Bicograph(BiCotree { nodes, root: 0 }));
    }
    let top = [false, true].into_iter().map(|c| (c, sided.components(&all, c))).find(|(_, comps)| comps.len() > 1);
    let Some((complemented, comps)) = top else {
        return Ok(Recognition::Witness((0..n).collect()));
    };
    match build(&sided, comps, complemented, &mut nodes) {
        Ok(root) => Ok(Recognition::Bicograph(BiCotree { nodes, root })),
        Err(w) => Ok(Recognition::Witness(w.ones().collect())),
    }
}

fn build(
    sided: &Sided<'_>,
    comps: Vec<FixedBitSet>,
    complemented: bool,
    nodes: &mut Vec<BiCoNode>,
) -> std::result::Result<usize, FixedBitSet> {
    let mut children = Vec::with_capacity(comps.len());
    for c in comps {
        if c.count_ones(..) == 1 {
            nodes.push(BiCoNode::Leaf(c.ones().next().expect("one vertex")));
            children.push(nodes.len() - 1);
            continue;
        }
        let sub = sided.components(&c, !complemented);
        if sub.len() == 1 {
            return Err(c);
        }
        children.push(build(sided, sub, !complemented, nodes)?);
    }
    nodes.push(BiCoNode::Split { complemented, children });
    Ok(nodes.len() - 1)
}

impl BiCotree {
    fn vertices(&self, t: usize, out: &mut Vec<usize>) {
        match &self.nodes[t] {
            BiCoNode::Leaf(v) => out.push(*v),
            BiCoNode::Split { children, .. } => children.iter().for_each(|&c| self.vertices(c, out)),
        }
    }

    /// Re-checks every recorded split against the graph: each split separates its children
    /// completely in the recorded view, and every vertex appears at exactly one leaf.
    pub fn replay(&self, g: &Graph, left: &[bool]) -> bool {
        let n = g.vertex_count();
        let mut all = Vec::new();
        self.vertices(self.root, &mut all);
        all.sort_unstable();
        if all != (0..n).collect::<Vec<_>>() {
            return false;
        }
        let adjacent = |u: usize, v: usize, complemented: bool| {
            if complemented {
                left[u] != left[v] && !g.has_edge(u, v)
            } else {
                g.has_edge(u, v)
            }
        };
        self.nodes.iter().all(|node| match node {
            BiCoNode::Leaf(_) => true,
            BiCoNode::Split { complemented, children } => {
                let parts: Vec<Vec<usize>> = children
                    .iter()
                    .map(|&c| {
                        let mut vs = Vec::new();
                        self.vertices(c, &mut vs);
                        vs
                    })
                    .collect();
                children.len() >= 2
                    && parts.iter().enumerate().all(|(a, pa)| {
                        parts[a + 1..]
                            .iter()
                            .all(|pb| pa.iter().all(|&u| pb.iter().all(|&v| !adjacent(u, v, *complemented))))
                    })
            }
        })
    }

    /// Binarizes the cotree and unroots it into a branch decomposition.
    pub fn to_branch_decomposition(&self, vertex_count: usize) -> BranchDecomposition {
        let mut adj: Vec<Vec<usize>> = Vec::new();
        let mut leaf_of = vec![0; vertex_count];
        let connect = |adj: &mut Vec<Vec<usize>>, a: usize, b: usize| {
            adj[a].push(b);
            adj[b].push(a);
        };
        fn fresh(adj: &mut Vec<Vec<usize>>) -> usize {
            adj.push(Vec::new());
            adj.len() - 1
        }
        // Rooted subtree per cotree node; the root split joins its last child directly instead.
        let mut built: Vec<Option<usize>> = vec![None; self.nodes.len()];
        let order = self.postorder();
        for &t in &order {
            let id = match &self.nodes[t] {
                BiCoNode::Leaf(v) => {
                    let id = fresh(&mut adj);
                    leaf_of[*v] = id;
                    id
                }
                BiCoNode::Split { children, .. } => {
                    let ids: Vec<usize> = children.iter().map(|&c| built[c].expect("child built")).collect();
                    let last = if t == self.root { ids.len() - 1 } else { ids.len() };
                    let mut acc = ids[0];
                    for &c in &ids[1..last] {
                        let x = fresh(&mut adj);
                        connect(&mut adj, x, acc);
                        connect(&mut adj, x, c);
                        acc = x;
                    }
                    if t == self.root {
                        connect(&mut adj, acc, ids[ids.len() - 1]);
                    }
                    acc
                }
            };
            built[t] = Some(id);
        }
        BranchDecomposition { adj, leaf_of }
    }

    fn postorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((t, done)) = stack.pop() {
            if done {
                out.push(t);
                continue;
            }
            stack.push((t, true));
            if let BiCoNode::Split { children, .. } = &self.nodes[t] {
                for &c in children.iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        out
    }
}
