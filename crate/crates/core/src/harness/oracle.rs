use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::instance::{Schedule, Solution, SubinstanceRef};

pub const DEFAULT_ORACLE_BUDGET: u128 = 10_000_000;

/// Exhaustive optimum. Jobs with identical rows are placed on nondecreasing machines, which
/// removes only symmetric duplicates, and branches that cannot beat the incumbent are cut.
pub fn brute_force(sub: &SubinstanceRef<'_>) -> Result<Solution> {
    brute_force_with_budget(sub, DEFAULT_ORACLE_BUDGET)
}

pub fn brute_force_with_budget(sub: &SubinstanceRef<'_>, budget: u128) -> Result<Solution> {
    sub.check_feasible()?;
    let inst = sub.instance();
    let machines = sub.machines();
    let row = |j: usize| -> Vec<Option<u64>> { machines.iter().map(|&i| inst.p(i, j)).collect() };

    let mut jobs: Vec<(Vec<Option<u64>>, usize)> = sub.jobs().iter().map(|&j| (row(j), j)).collect();
    // Big jobs first tighten the bound early; equal rows end up adjacent.
    jobs.sort_by(|a, b| {
        let ma = a.0.iter().flatten().max();
        let mb = b.0.iter().flatten().max();
        mb.cmp(&ma).then_with(|| a.0.cmp(&b.0)).then(a.1.cmp(&b.1))
    });

    let mut group_sizes: HashMap<&Vec<Option<u64>>, u128> = HashMap::new();
    for (r, _) in &jobs {
        *group_sizes.entry(r).or_default() += 1;
    }
    let mut count: u128 = 1;
    for (r, &c) in &group_sizes {
        let k = r.iter().flatten().count() as u128;
        count = count.saturating_mul(multisets(k, c));
        if count > budget {
            return Err(Error::Resource(format!("exhaustive search exceeds {budget} assignments")));
        }
    }

    let steps: Vec<Step> = jobs
        .iter()
        .enumerate()
        .map(|(k, (r, j))| Step {
            job: *j,
            options: r.iter().enumerate().filter_map(|(pos, p)| p.map(|p| (pos, p))).collect(),
            twin_of_prev: k > 0 && jobs[k - 1].0 == *r,
        })
        .collect();
    let mut search = Search {
        steps: &steps,
        loads: vec![0; machines.len()],
        current: vec![0; steps.len()],
        best: u64::MAX,
        best_assign: Vec::new(),
    };
    search.dfs(0, 0);
    if search.best == u64::MAX {
        return Err(Error::Infeasible("no feasible schedule".into()));
    }
    let schedule = Schedule::from_pairs(steps.iter().zip(&search.best_assign).map(|(s, &pos)| (s.job, machines[pos])));
    Ok(Solution { value: search.best, schedule })
}

fn multisets(k: u128, c: u128) -> u128 {
    // C(c + k - 1, k - 1) computed incrementally.
    if k == 0 {
        return if c == 0 { 1 } else { 0 };
    }
    let mut r: u128 = 1;
    for t in 1..k {
        r = r.saturating_mul(c + t) / t;
    }
    r
}

struct Step {
    job: usize,
    options: Vec<(usize, u64)>,
    twin_of_prev: bool,
}

struct Search<'a> {
    steps: &'a [Step],
    loads: Vec<u64>,
    current: Vec<usize>,
    best: u64,
    best_assign: Vec<usize>,
}

impl Search<'_> {
    fn dfs(&mut self, k: usize, cur_max: u64) {
        if k == self.steps.len() {
            if cur_max < self.best {
                self.best = cur_max;
                self.best_assign = self.current.clone();
            }
            return;
        }
        let step = &self.steps[k];
        let min_pos = if step.twin_of_prev { self.current[k - 1] } else { 0 };
        for &(pos, p) in &step.options {
            if pos < min_pos {
                continue;
            }
            let load = self.loads[pos] + p;
            let next_max = cur_max.max(load);
            if next_max >= self.best {
                continue;
            }
            self.loads[pos] = load;
            self.current[k] = pos;
            self.dfs(k + 1, next_max);
            self.loads[pos] -= p;
        }
    }
}
