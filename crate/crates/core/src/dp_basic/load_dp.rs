use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::instance::{Instance, LoadVector, Schedule, Solution, SubinstanceRef};

pub const DEFAULT_STATE_BUDGET: usize = 5_000_000;
/// Dominance filtering is quadratic in the layer size; larger layers are kept whole.
const PRUNE_LIMIT: usize = 4_000;

#[derive(Clone, Debug)]
struct Layer {
    vectors: Vec<Vec<u64>>,
    /// Predecessor vector index and the machine position the job went to.
    back: Vec<(u32, u32)>,
}

/// The sets Λ(0), ..., Λ(n) of load vectors reachable by scheduling the job prefixes.
#[derive(Clone, Debug)]
pub struct LoadTable {
    jobs: Vec<usize>,
    machines: Vec<usize>,
    layers: Vec<Layer>,
}

impl LoadTable {
    /// The exact sets, with loads above `cap` discarded.
    pub fn build(inst: &Instance, jobs: &[usize], machines: &[usize], cap: Option<u64>) -> Result<Self> {
        Self::build_with(inst, jobs, machines, cap, false, DEFAULT_STATE_BUDGET)
    }

    pub fn build_with(
        inst: &Instance,
        jobs: &[usize],
        machines: &[usize],
        cap: Option<u64>,
        prune: bool,
        budget: usize,
    ) -> Result<Self> {
        let mut layers = vec![Layer { vectors: vec![vec![0; machines.len()]], back: vec![(0, 0)] }];
        let mut total = 1usize;
        for &j in jobs {
            let prev = layers.last().expect("layer 0 exists");
            let mut index: HashMap<Vec<u64>, u32> = HashMap::new();
            let mut next = Layer { vectors: Vec::new(), back: Vec::new() };
            for (k, v) in prev.vectors.iter().enumerate() {
                for (pos, &i) in machines.iter().enumerate() {
                    let Some(p) = inst.p(i, j) else { continue };
                    let load = v[pos] + p;
                    if cap.is_some_and(|c| load > c) {
                        continue;
                    }
                    let mut w = v.clone();
                    w[pos] = load;
                    if let std::collections::hash_map::Entry::Vacant(e) = index.entry(w) {
                        next.vectors.push(e.key().clone());
                        next.back.push((k as u32, pos as u32));
                        e.insert(next.vectors.len() as u32 - 1);
                    }
                }
            }
            if prune && next.vectors.len() <= PRUNE_LIMIT {
                next = prune_dominated(next);
            }
            total += next.vectors.len();
            if total > budget {
                return Err(Error::Resource(format!("load-vector table exceeds {budget} states")));
            }
            layers.push(next);
        }
        Ok(LoadTable { jobs: jobs.to_vec(), machines: machines.to_vec(), layers })
    }

    pub fn machines(&self) -> &[usize] {
        &self.machines
    }

    pub fn jobs(&self) -> &[usize] {
        &self.jobs
    }

    /// Λ(k): vectors after the first `k` jobs.
    pub fn layer(&self, k: usize) -> &[Vec<u64>] {
        &self.layers[k].vectors
    }

    /// Λ(n).
    pub fn finals(&self) -> &[Vec<u64>] {
        &self.layers.last().expect("layer 0 exists").vectors
    }

    pub fn state_count(&self) -> usize {
        self.layers.iter().map(|l| l.vectors.len()).sum()
    }

    pub fn final_load_vector(&self, idx: usize) -> LoadVector {
        LoadVector { machines: self.machines.clone(), loads: self.finals()[idx].clone() }
    }

    /// A job → machine assignment realizing final vector `idx`.
    pub fn assignment(&self, idx: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.jobs.len());
        let mut k = idx;
        for layer in (1..self.layers.len()).rev() {
            let (prev, pos) = self.layers[layer].back[k];
            out.push((self.jobs[layer - 1], self.machines[pos as usize]));
            k = prev as usize;
        }
        out.reverse();
        out
    }
}

fn prune_dominated(layer: Layer) -> Layer {
    let mut order: Vec<usize> = (0..layer.vectors.len()).collect();
    order.sort_by_key(|&k| (layer.vectors[k].iter().sum::<u64>(), k));
    let mut kept: Vec<usize> = Vec::new();
    for k in order {
        let v = &layer.vectors[k];
        let dominated = kept.iter().any(|&u| layer.vectors[u].iter().zip(v).all(|(a, b)| a <= b));
        if !dominated {
            kept.push(k);
        }
    }
    kept.sort_unstable();
    Layer {
        vectors: kept.iter().map(|&k| layer.vectors[k].clone()).collect(),
        back: kept.iter().map(|&k| layer.back[k]).collect(),
    }
}

/// Exact optimum over schedules whose machine loads stay within `load_cap`.
pub fn solve_load_dp(sub: &SubinstanceRef<'_>, load_cap: Option<u64>) -> Result<Solution> {
    sub.check_feasible()?;
    let table =
        LoadTable::build_with(sub.instance(), sub.jobs(), sub.machines(), load_cap, true, DEFAULT_STATE_BUDGET)?;
    let best = table
        .finals()
        .iter()
        .enumerate()
        .min_by_key(|(k, v)| (v.iter().copied().max().unwrap_or(0), *k))
        .map(|(k, v)| (k, v.iter().copied().max().unwrap_or(0)));
    let (idx, value) = best.ok_or_else(|| Error::Infeasible("no schedule respects the load cap".into()))?;
    Ok(Solution { value, schedule: Schedule::from_pairs(table.assignment(idx)) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_jobs() {
        let inst = Instance::restricted(&[], &[], 2).unwrap();
        let t = LoadTable::build(&inst, &[], &[0, 1], None).unwrap();
        assert_eq!(t.finals(), &[vec![0, 0]]);
        assert_eq!(solve_load_dp(&inst.full(), None).unwrap().value, 0);
    }

    #[test]
    fn single_machine_sums() {
        let inst = Instance::restricted(&[2, 3, 4], &[vec![0], vec![0], vec![0]], 1).unwrap();
        let t = LoadTable::build(&inst, &[0, 1, 2], &[0], None).unwrap();
        assert_eq!(t.finals(), &[vec![9]]);
    }

    #[test]
    fn cap_can_exclude_everything() {
        let inst = Instance::restricted(&[5], &[vec![0]], 1).unwrap();
        assert!(matches!(solve_load_dp(&inst.full(), Some(4)), Err(Error::Infeasible(_))));
    }

    #[test]
    fn assignment_realizes_vector() {
        let inst = Instance::unrelated(vec![vec![Some(2), Some(5)], vec![Some(4), Some(1)]], 2).unwrap();
        let t = LoadTable::build(&inst, &[0, 1], &[0, 1], None).unwrap();
        for k in 0..t.finals().len() {
            let s = Schedule::from_pairs(t.assignment(k));
            assert!(t.final_load_vector(k).is_fulfilled_by(&inst.full(), &s));
        }
        assert_eq!(solve_load_dp(&inst.full(), None).unwrap().value, 2);
    }

    #[test]
    fn budget_is_enforced() {
        let inst = Instance::restricted(&[1, 2, 4, 8], &vec![vec![0, 1, 2]; 4], 3).unwrap();
        let r = LoadTable::build_with(&inst, &[0, 1, 2, 3], &[0, 1, 2], None, false, 10);
        assert!(matches!(r, Err(Error::Resource(_))));
    }
}
