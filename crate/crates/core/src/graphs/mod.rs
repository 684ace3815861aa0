//! Primal, dual and incidence graphs of an instance.

mod gf2;
mod types;

pub use gf2::{cut_rank, gf2_rank};
pub use types::{connection_types, ConnectionType, ConnectionTypePartition};

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::instance::Instance;

/// Undirected simple graph on `0..n` with sorted adjacency lists and bitset rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    rows: Vec<FixedBitSet>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], rows: vec![FixedBitSet::with_capacity(n); n] }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Adds `{u, v}`; loops and repeated edges are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u == v || self.rows[u].contains(v) {
            return;
        }
        self.rows[u].insert(v);
        self.rows[v].insert(u);
        let pos = self.adj[u].binary_search(&v).unwrap_err();
        self.adj[u].insert(pos, v);
        let pos = self.adj[v].binary_search(&u).unwrap_err();
        self.adj[v].insert(pos, u);
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn row(&self, v: usize) -> &FixedBitSet {
        &self.rows[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.vertex_count())
            .flat_map(|u| self.adj[u].iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect()
    }

    pub fn component_count(&self) -> usize {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        let mut count = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        count
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Primal,
    Dual,
    Incidence,
}

impl std::str::FromStr for GraphKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "primal" => Ok(GraphKind::Primal),
            "dual" => Ok(GraphKind::Dual),
            "incidence" => Ok(GraphKind::Incidence),
            _ => Err(crate::Error::Invalid(format!("unknown graph kind `{s}`"))),
        }
    }
}

/// One of the three restriction graphs. Incidence vertices are jobs `0..n` then machines `n..n+m`.
#[derive(Clone, Debug)]
pub struct RestrictionGraph {
    pub kind: GraphKind,
    pub n_jobs: usize,
    pub n_machines: usize,
    pub graph: Graph,
}

impl RestrictionGraph {
    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Vertex of job `j`, if jobs are vertices of this kind.
    pub fn job_vertex(&self, j: usize) -> Option<usize> {
        match self.kind {
            GraphKind::Dual => None,
            _ => Some(j),
        }
    }

    pub fn machine_vertex(&self, i: usize) -> Option<usize> {
        match self.kind {
            GraphKind::Primal => None,
            GraphKind::Dual => Some(i),
            GraphKind::Incidence => Some(self.n_jobs + i),
        }
    }

    pub fn is_job_vertex(&self, v: usize) -> bool {
        match self.kind {
            GraphKind::Primal => true,
            GraphKind::Dual => false,
            GraphKind::Incidence => v < self.n_jobs,
        }
    }

    /// Job index of a job vertex, or machine index of a machine vertex.
    pub fn element(&self, v: usize) -> usize {
        match self.kind {
            GraphKind::Incidence if v >= self.n_jobs => v - self.n_jobs,
            _ => v,
        }
    }

    /// Human-readable vertex names. Incidence names get `j:`/`m:` prefixes when ids collide.
    pub fn vertex_names(&self, inst: &Instance) -> Vec<String> {
        match self.kind {
            GraphKind::Primal => inst.job_ids().to_vec(),
            GraphKind::Dual => inst.machine_ids().to_vec(),
            GraphKind::Incidence => {
                let clash = inst.job_ids().iter().any(|j| inst.machine_ids().contains(j));
                let tag = |p: &str, s: &String| if clash { format!("{p}:{s}") } else { s.clone() };
                inst.job_ids()
                    .iter()
                    .map(|s| tag("j", s))
                    .chain(inst.machine_ids().iter().map(|s| tag("m", s)))
                    .collect()
            }
        }
    }

    pub fn to_dot(&self, inst: &Instance) -> String {
        let names = self.vertex_names(inst);
        let mut out = format!("graph {:?} {{\n", self.kind).to_lowercase();
        for (v, name) in names.iter().enumerate() {
            let shape = if self.is_job_vertex(v) { "ellipse" } else { "box" };
            let _ = writeln!(out, "  v{v} [label={name:?}, shape={shape}];");
        }
        for (u, v) in self.graph.edges() {
            let _ = writeln!(out, "  v{u} -- v{v};");
        }
        out.push_str("}\n");
        out
    }
}

pub fn build_graph(inst: &Instance, kind: GraphKind) -> RestrictionGraph {
    let (n, m) = (inst.n(), inst.m());
    let graph = match kind {
        GraphKind::Primal => {
            let mut g = Graph::new(n);
            for i in 0..m {
                clique(&mut g, inst.valid_jobs(i).iter().copied());
            }
            g
        }
        GraphKind::Dual => {
            let mut g = Graph::new(m);
            for j in 0..n {
                clique(&mut g, inst.valid_machines(j).iter().copied());
            }
            g
        }
        GraphKind::Incidence => {
            let mut g = Graph::new(n + m);
            for j in 0..n {
                for &i in inst.valid_machines(j) {
                    g.add_edge(j, n + i);
                }
            }
            g
        }
    };
    RestrictionGraph { kind, n_jobs: n, n_machines: m, graph }
}

fn clique(g: &mut Graph, members: impl Iterator<Item = usize>) {
    let members: Vec<usize> = members.collect();
    for (a, &u) in members.iter().enumerate() {
        for &v in &members[a + 1..] {
            g.add_edge(u, v);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphSummary {
    pub vertices: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub components: usize,
}

impl GraphSummary {
    pub fn of(g: &Graph) -> Self {
        GraphSummary {
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            max_degree: (0..g.vertex_count()).map(|v| g.degree(v)).max().unwrap_or(0),
            components: g.component_count(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphStats {
    pub jobs: usize,
    pub machines: usize,
    pub max_jobs_per_machine: usize,
    pub max_machines_per_job: usize,
    pub primal: GraphSummary,
    pub dual: GraphSummary,
    pub incidence: GraphSummary,
}

pub fn graph_stats(inst: &Instance) -> GraphStats {
    GraphStats {
        jobs: inst.n(),
        machines: inst.m(),
        max_jobs_per_machine: (0..inst.m()).map(|i| inst.valid_jobs(i).len()).max().unwrap_or(0),
        max_machines_per_job: (0..inst.n()).map(|j| inst.valid_machines(j).len()).max().unwrap_or(0),
        primal: GraphSummary::of(&build_graph(inst, GraphKind::Primal).graph),
        dual: GraphSummary::of(&build_graph(inst, GraphKind::Dual).graph),
        incidence: GraphSummary::of(&build_graph(inst, GraphKind::Incidence).graph),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_job_many_machines() {
        let inst = Instance::restricted(&[2], &[vec![0, 1, 2, 3]], 4).unwrap();
        assert_eq!(build_graph(&inst, GraphKind::Primal).graph.edge_count(), 0);
        assert_eq!(build_graph(&inst, GraphKind::Dual).graph.edge_count(), 6);
        let inc = build_graph(&inst, GraphKind::Incidence);
        assert_eq!(inc.graph.degree(0), 4);
        assert_eq!(inc.graph.edge_count(), 4);
    }

    #[test]
    fn many_jobs_one_machine() {
        let inst = Instance::restricted(&[1, 2, 3], &[vec![0], vec![0], vec![0]], 1).unwrap();
        assert_eq!(build_graph(&inst, GraphKind::Primal).graph.edge_count(), 3);
        assert_eq!(build_graph(&inst, GraphKind::Dual).graph.edge_count(), 0);
        let stats = graph_stats(&inst);
        assert_eq!(stats.primal.max_degree, 2);
        assert_eq!(stats.incidence.max_degree, 3);
        assert_eq!(stats.max_jobs_per_machine, 3);
    }

    #[test]
    fn incidence_names_prefix_on_clash() {
        let inst = Instance::from_json_str(r#"{"jobs":["a"],"machines":["a"],"proc":{"a":{"a":1}}}"#).unwrap();
        let g = build_graph(&inst, GraphKind::Incidence);
        assert_eq!(g.vertex_names(&inst), vec!["j:a", "m:a"]);
        assert!(g.to_dot(&inst).contains("v0 -- v1"));
    }
}
