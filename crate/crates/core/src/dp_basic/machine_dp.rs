use crate::error::{Error, Result};
use crate::instance::{Cost, Instance, Schedule, Solution, SubinstanceRef};

pub const DEFAULT_JOB_CAP: usize = 20;
const CELL_BUDGET: usize = 1 << 27;

/// Values OPT(k, J): the best makespan of the universe jobs outside `J` on the first `k`
/// machines, for every subset `J` of the job universe.
#[derive(Clone, Debug)]
pub struct MachineDpTable {
    jobs: Vec<usize>,
    machines: Vec<usize>,
    opt: Vec<Vec<Cost>>,
    /// Jobs placed on machine `k - 1` by the optimal choice for OPT(k, J).
    choice: Vec<Vec<u32>>,
}

impl MachineDpTable {
    pub fn build(inst: &Instance, jobs: &[usize], machines: &[usize], cap: usize) -> Result<Self> {
        let u = jobs.len();
        if u > cap || u > 31 {
            return Err(Error::Resource(format!("machine DP limited to {cap} jobs, got {u}")));
        }
        let size = 1usize << u;
        if size.saturating_mul(machines.len() + 1) > CELL_BUDGET {
            return Err(Error::Resource("machine DP table exceeds the memory budget".into()));
        }
        let full = (size - 1) as u32;
        let mut opt = vec![vec![Cost::Infinite; size]; machines.len() + 1];
        let mut choice = vec![Vec::new(); machines.len() + 1];
        opt[0][full as usize] = Cost::Finite(0);
        for (k, &i) in machines.iter().enumerate() {
            let load = subset_loads(inst, i, jobs);
            let (prev, rest) = opt.split_at_mut(k + 1);
            let prev = &prev[k];
            let cur = &mut rest[0];
            let mut pick = vec![0u32; size];
            for j_set in 0..=full {
                let free = full ^ j_set;
                let mut best = Cost::Infinite;
                let mut arg = 0;
                // Enumerate S ⊆ free from the empty set upward so ties keep the smaller set.
                let mut s = 0u32;
                loop {
                    if let (Cost::Finite(before), Some(l)) = (prev[(j_set | s) as usize], load[s as usize]) {
                        let val = Cost::Finite(before.max(l));
                        if val < best {
                            best = val;
                            arg = s;
                        }
                    }
                    if s == free {
                        break;
                    }
                    s = (s.wrapping_sub(free)) & free;
                }
                cur[j_set as usize] = best;
                pick[j_set as usize] = arg;
            }
            choice[k + 1] = pick;
        }
        Ok(MachineDpTable { jobs: jobs.to_vec(), machines: machines.to_vec(), opt, choice })
    }

    pub fn jobs(&self) -> &[usize] {
        &self.jobs
    }

    /// OPT(k, J) with `J` a bitmask over the job universe.
    pub fn value(&self, k: usize, remaining: u32) -> Cost {
        self.opt[k][remaining as usize]
    }

    fn full(&self) -> u32 {
        ((1u64 << self.jobs.len()) - 1) as u32
    }

    /// OPT(I[A, machines]) for a subset `A` of the universe, as a bitmask.
    pub fn opt_of(&self, subset: u32) -> Cost {
        self.opt[self.machines.len()][(self.full() ^ subset) as usize]
    }

    /// An optimal assignment of the subset `A`, or `None` if none exists.
    pub fn assignment_of(&self, subset: u32) -> Option<Vec<(usize, usize)>> {
        if !self.opt_of(subset).is_finite() {
            return None;
        }
        let mut out = Vec::new();
        let mut remaining = self.full() ^ subset;
        for k in (1..=self.machines.len()).rev() {
            let s = self.choice[k][remaining as usize];
            for b in bits(s) {
                out.push((self.jobs[b], self.machines[k - 1]));
            }
            remaining |= s;
        }
        debug_assert_eq!(remaining, self.full());
        Some(out)
    }
}

/// Load of each job subset on machine `i`; `None` if the subset contains a forbidden job.
fn subset_loads(inst: &Instance, i: usize, jobs: &[usize]) -> Vec<Option<u64>> {
    let mut load = vec![Some(0u64); 1 << jobs.len()];
    for s in 1..load.len() {
        let low = s.trailing_zeros() as usize;
        load[s] = match (load[s & (s - 1)], inst.p(i, jobs[low])) {
            (Some(a), Some(p)) => Some(a + p),
            _ => None,
        };
    }
    load
}

pub(crate) fn bits(mut s: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if s == 0 {
            None
        } else {
            let b = s.trailing_zeros() as usize;
            s &= s - 1;
            Some(b)
        }
    })
}

/// Exact optimum by the machine-by-machine subset recurrence.
pub fn solve_machine_dp(sub: &SubinstanceRef<'_>) -> Result<Solution> {
    solve_machine_dp_with_cap(sub, DEFAULT_JOB_CAP)
}

pub fn solve_machine_dp_with_cap(sub: &SubinstanceRef<'_>, cap: usize) -> Result<Solution> {
    sub.check_feasible()?;
    let table = MachineDpTable::build(sub.instance(), sub.jobs(), sub.machines(), cap)?;
    let full = table.full();
    let value = table.opt_of(full).finite().ok_or_else(|| Error::Infeasible("no feasible schedule".into()))?;
    let schedule = Schedule::from_pairs(table.assignment_of(full).expect("finite value has a schedule"));
    Ok(Solution { value, schedule })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        let one = Instance::restricted(&[7], &[vec![0]], 1).unwrap();
        assert_eq!(solve_machine_dp(&one.full()).unwrap().value, 7);
        let two = Instance::restricted(&[3, 3], &[vec![0, 1], vec![0, 1]], 2).unwrap();
        let sol = solve_machine_dp(&two.full()).unwrap();
        assert_eq!(sol.value, 3);
        assert_eq!(crate::makespan(&two, &sol.schedule).unwrap(), 3);
    }

    #[test]
    fn infeasible_and_empty() {
        let inst = Instance::restricted(&[3], &[vec![1]], 2).unwrap();
        let sub = inst.subinstance(&[0], &[0]).unwrap();
        assert!(matches!(solve_machine_dp(&sub), Err(Error::Infeasible(_))));
        let empty = inst.subinstance(&[], &[]).unwrap();
        assert_eq!(solve_machine_dp(&empty).unwrap().value, 0);
    }

    #[test]
    fn per_subset_values() {
        let inst = Instance::unrelated(vec![vec![Some(2), Some(5), None], vec![Some(4), Some(1), Some(3)]], 3).unwrap();
        let t = MachineDpTable::build(&inst, &[0, 1, 2], &[0, 1], 20).unwrap();
        assert_eq!(t.opt_of(0), Cost::Finite(0));
        assert_eq!(t.opt_of(0b001), Cost::Finite(2));
        assert_eq!(t.opt_of(0b110), Cost::Finite(4));
        assert_eq!(t.opt_of(0b111), Cost::Finite(4));
        let a = t.assignment_of(0b111).unwrap();
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn cap_is_enforced() {
        let inst = Instance::restricted(&[1; 4], &vec![vec![0]; 4], 1).unwrap();
        assert!(matches!(solve_machine_dp_with_cap(&inst.full(), 3), Err(Error::Resource(_))));
    }
}
