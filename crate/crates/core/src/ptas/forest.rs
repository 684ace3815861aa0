//! Rounding of fractional job assignments whose support is a forest or pseudoforest.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use petgraph::algo::maximum_matching;
use petgraph::graph::{NodeIndex, UnGraph};

/// One support edge: `mass` units of job `job` placed on machine `machine`.
#[derive(Clone, Debug)]
pub(crate) struct FracEdge {
    pub job: usize,
    pub machine: usize,
    pub mass: BigRational,
}

/// Shifts mass around cycles of the bipartite support until it is a forest. Each shift keeps
/// every job's total mass and every machine's total mass unchanged.
pub(crate) fn cancel_cycles(mut edges: Vec<FracEdge>) -> Vec<FracEdge> {
    edges.retain(|e| e.mass.is_positive());
    while let Some(cycle) = find_cycle(&edges) {
        let theta = cycle
            .iter()
            .enumerate()
            .filter(|(k, _)| k % 2 == 1)
            .map(|(_, &e)| edges[e].mass.clone())
            .min()
            .expect("cycles have at least four edges");
        for (k, &e) in cycle.iter().enumerate() {
            if k % 2 == 0 {
                edges[e].mass += &theta;
            } else {
                edges[e].mass -= &theta;
            }
        }
        edges.retain(|e| e.mass.is_positive());
    }
    edges
}

/// Edge indices of some cycle, listed so consecutive edges share a vertex.
fn find_cycle(edges: &[FracEdge]) -> Option<Vec<usize>> {
    // Vertices: jobs as ("j", id), machines as ("m", id), compacted to dense indices.
    let mut ids: HashMap<(bool, usize), usize> = HashMap::new();
    let mut intern = |key: (bool, usize)| {
        let next = ids.len();
        *ids.entry(key).or_insert(next)
    };
    let ends: Vec<(usize, usize)> = edges.iter().map(|e| (intern((true, e.job)), intern((false, e.machine)))).collect();
    let n = ids.len();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut comp: Vec<usize> = (0..n).collect();
    fn root(comp: &mut [usize], mut x: usize) -> usize {
        while comp[x] != x {
            comp[x] = comp[comp[x]];
            x = comp[x];
        }
        x
    }
    for (k, &(u, v)) in ends.iter().enumerate() {
        let (ru, rv) = (root(&mut comp, u), root(&mut comp, v));
        if ru != rv {
            comp[ru] = rv;
            adj[u].push((v, k));
            adj[v].push((u, k));
            continue;
        }
        // Path v → u in the forest, then close with edge k.
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[v] = true;
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            if x == u {
                break;
            }
            for &(y, e) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    prev[y] = Some((x, e));
                    queue.push_back(y);
                }
            }
        }
        let mut path = Vec::new();
        let mut x = u;
        while let Some((p, e)) = prev[x] {
            path.push(e);
            x = p;
        }
        // Edge k joins u and v; path edges run from u back to v.
        let mut cycle = vec![k];
        cycle.extend(path);
        return Some(cycle);
    }
    None
}

/// Picks one support machine per job so that no machine receives two jobs, when possible.
/// Jobs left unmatched fall back to their first support machine.
pub(crate) fn match_jobs(support: &BTreeMap<usize, Vec<usize>>) -> BTreeMap<usize, usize> {
    let mut g: UnGraph<(), ()> = UnGraph::new_undirected();
    let mut job_node = BTreeMap::new();
    let mut machine_node: BTreeMap<usize, NodeIndex> = BTreeMap::new();
    for (&j, ms) in support {
        let jn = g.add_node(());
        job_node.insert(j, jn);
        for &i in ms {
            let mn = *machine_node.entry(i).or_insert_with(|| g.add_node(()));
            g.add_edge(jn, mn, ());
        }
    }
    let matching = maximum_matching(&g);
    let machine_of_node: HashMap<NodeIndex, usize> = machine_node.iter().map(|(&i, &n)| (n, i)).collect();
    support
        .iter()
        .map(|(&j, ms)| {
            let i = matching.mate(job_node[&j]).and_then(|n| machine_of_node.get(&n).copied()).unwrap_or(ms[0]);
            (j, i)
        })
        .collect()
}

/// Rounds a fractional assignment given as job mass per machine. `total[j]` is the full mass
/// of job `j`; jobs whose mass sits on one machine stay there, the rest are matched.
pub(crate) fn round_assignment(
    edges: Vec<FracEdge>,
    total: &HashMap<usize, BigRational>,
    cancel: bool,
) -> BTreeMap<usize, usize> {
    let edges = if cancel { cancel_cycles(edges) } else { edges.into_iter().filter(|e| !e.mass.is_zero()).collect() };
    let mut support: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut out = BTreeMap::new();
    for e in &edges {
        if e.mass == total[&e.job] {
            out.insert(e.job, e.machine);
        } else {
            support.entry(e.job).or_default().push(e.machine);
        }
    }
    for ms in support.values_mut() {
        ms.sort_unstable();
    }
    out.extend(match_jobs(&support));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn four_cycle_is_broken() {
        let edges = vec![
            FracEdge { job: 0, machine: 0, mass: q(1) },
            FracEdge { job: 0, machine: 1, mass: q(1) },
            FracEdge { job: 1, machine: 0, mass: q(1) },
            FracEdge { job: 1, machine: 1, mass: q(1) },
        ];
        let out = cancel_cycles(edges);
        assert_eq!(out.len(), 2);
        let job0: BigRational = out.iter().filter(|e| e.job == 0).map(|e| e.mass.clone()).sum();
        let m0: BigRational = out.iter().filter(|e| e.machine == 0).map(|e| e.mass.clone()).sum();
        assert_eq!(job0, q(2));
        assert_eq!(m0, q(2));
    }

    #[test]
    fn split_job_goes_to_one_side() {
        let edges = vec![FracEdge { job: 0, machine: 0, mass: q(1) }, FracEdge { job: 0, machine: 1, mass: q(1) }];
        let total = HashMap::from([(0, q(2))]);
        let a = round_assignment(edges, &total, true);
        assert!(a[&0] == 0 || a[&0] == 1);
    }
}
