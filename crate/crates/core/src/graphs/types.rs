use fixedbitset::FixedBitSet;

use super::{GraphKind, RestrictionGraph};

/// Jobs of one connection type and their shared machine neighborhood.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionType {
    pub jobs: Vec<usize>,
    pub machines: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectionTypePartition {
    pub groups: Vec<ConnectionType>,
}

impl ConnectionTypePartition {
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// Group index of each job in `x`, in the order of `x`.
    pub fn group_of(&self, job: usize) -> Option<usize> {
        self.groups.iter().position(|g| g.jobs.contains(&job))
    }
}

/// Partitions the jobs `x` by their machine neighborhood within `y` (indices into the instance).
pub fn connection_types(g: &RestrictionGraph, x: &[usize], y: &[usize]) -> ConnectionTypePartition {
    assert_eq!(g.kind, GraphKind::Incidence, "connection types need the incidence graph");
    let total = g.vertex_count();
    let mut ymask = FixedBitSet::with_capacity(total);
    for &i in y {
        ymask.insert(g.n_jobs + i);
    }
    let mut keyed: Vec<(FixedBitSet, usize)> = x
        .iter()
        .map(|&j| {
            let mut r = g.graph.row(j).clone();
            r.intersect_with(&ymask);
            (r, j)
        })
        .collect();
    keyed.sort();
    let mut groups: Vec<ConnectionType> = Vec::new();
    let mut last: Option<&FixedBitSet> = None;
    for (nb, j) in &keyed {
        if last == Some(nb) {
            groups.last_mut().expect("group exists").jobs.push(*j);
        } else {
            groups.push(ConnectionType { jobs: vec![*j], machines: nb.ones().map(|v| v - g.n_jobs).collect() });
            last = Some(nb);
        }
    }
    ConnectionTypePartition { groups }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::build_graph;
    use crate::Instance;

    #[test]
    fn empty_machine_side_gives_one_type() {
        let inst = Instance::restricted(&[1, 2, 3], &[vec![0], vec![1], vec![0, 1]], 2).unwrap();
        let g = build_graph(&inst, GraphKind::Incidence);
        assert_eq!(connection_types(&g, &[0, 1, 2], &[]).len(), 1);
        assert_eq!(connection_types(&g, &[0, 1, 2], &[0, 1]).len(), 3);
        let p = connection_types(&g, &[0, 1, 2], &[0]);
        assert_eq!(p.len(), 2);
        assert_eq!(p.group_of(0), p.group_of(2));
    }
}
