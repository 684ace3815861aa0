use std::collections::VecDeque;

use super::tree::TreeDecomposition;
use crate::error::{Error, Result};

/// Rooted binary decomposition with empty leaf bags and an empty-bag leaf as root.
///
/// The root has exactly one child; every other internal node has exactly two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleFormDecomposition {
    pub bags: Vec<Vec<usize>>,
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    pub root: usize,
}

impl SimpleFormDecomposition {
    pub fn node_count(&self) -> usize {
        self.bags.len()
    }

    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn is_leaf(&self, t: usize) -> bool {
        self.children[t].is_empty()
    }

    /// Nodes ordered so that every child precedes its parent.
    pub fn postorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.node_count());
        let mut stack = vec![(self.root, false)];
        while let Some((t, expanded)) = stack.pop() {
            if expanded {
                out.push(t);
            } else {
                stack.push((t, true));
                for &c in self.children[t].iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    pub fn to_tree_decomposition(&self) -> TreeDecomposition {
        let edges = (0..self.node_count()).filter_map(|t| self.parent[t].map(|p| (p, t))).collect();
        TreeDecomposition::new(self.bags.clone(), edges)
    }

    /// Shape checks beyond (T1)–(T3).
    pub fn check_shape(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Invalid(msg));
        if self.parent[self.root].is_some() || !self.bags[self.root].is_empty() {
            return bad("root must be a parentless node with an empty bag".into());
        }
        if self.children[self.root].len() != 1 {
            return bad("root must be a leaf of the tree".into());
        }
        for t in 0..self.node_count() {
            if t == self.root {
                continue;
            }
            match self.children[t].len() {
                0 if !self.bags[t].is_empty() => return bad(format!("leaf {t} has a nonempty bag")),
                0 | 2 => {}
                k => return bad(format!("internal node {t} has {k} children")),
            }
            for &c in &self.children[t] {
                if self.parent[c] != Some(t) {
                    return bad(format!("parent link of node {c} is inconsistent"));
                }
            }
        }
        Ok(())
    }
}

/// Roots `td` at `root_choice` (default node 0) and adds dummy nodes until the tree is in simple form.
pub fn normalize_simple_form(td: &TreeDecomposition, root_choice: Option<usize>) -> Result<SimpleFormDecomposition> {
    if td.node_count() == 0 {
        return Err(Error::Invalid("tree decomposition has no nodes".into()));
    }
    let r = root_choice.unwrap_or(0);
    if r >= td.node_count() {
        return Err(Error::Invalid(format!("root choice {r} is not a node")));
    }
    let adj = td.adjacency();
    let mut out = SimpleFormDecomposition { bags: Vec::new(), parent: Vec::new(), children: Vec::new(), root: 0 };
    let add = |out: &mut SimpleFormDecomposition, bag: Vec<usize>, parent: Option<usize>| -> usize {
        let id = out.bags.len();
        out.bags.push(bag);
        out.parent.push(parent);
        out.children.push(Vec::new());
        if let Some(p) = parent {
            out.children[p].push(id);
        }
        id
    };
    let a = add(&mut out, Vec::new(), None);
    out.root = a;
    let top = add(&mut out, td.bags[r].clone(), Some(a));
    let mut visited = vec![false; td.node_count()];
    visited[r] = true;
    let mut queue = VecDeque::from([(r, top)]);
    while let Some((t, nt)) = queue.pop_front() {
        let kids: Vec<usize> = adj[t].iter().copied().filter(|&c| !visited[c]).collect();
        kids.iter().for_each(|&c| visited[c] = true);
        match kids.len() {
            0 => {
                add(&mut out, Vec::new(), Some(nt));
                add(&mut out, Vec::new(), Some(nt));
            }
            1 => {
                let nc = add(&mut out, td.bags[kids[0]].clone(), Some(nt));
                queue.push_back((kids[0], nc));
                add(&mut out, Vec::new(), Some(nt));
            }
            k => {
                let mut cur = nt;
                for &c in &kids[..k - 2] {
                    let nc = add(&mut out, td.bags[c].clone(), Some(cur));
                    queue.push_back((c, nc));
                    cur = add(&mut out, td.bags[t].clone(), Some(cur));
                }
                for &c in &kids[k - 2..] {
                    let nc = add(&mut out, td.bags[c].clone(), Some(cur));
                    queue.push_back((c, nc));
                }
            }
        }
    }
    if visited.iter().any(|v| !v) {
        return Err(Error::Invalid("tree decomposition is not connected".into()));
    }
    Ok(out)
}
