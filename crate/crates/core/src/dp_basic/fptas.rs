use crate::dp_basic::solve_load_dp;
use crate::eps::{check_eps, Eps};
use crate::error::Result;
use crate::instance::{makespan, Instance, Schedule, Solution, SubinstanceRef};
use crate::ptas::two_approx;

/// Processing times rounded up to a grid of `δB/n` with `δ = ε/2`, measured in grid units,
/// and the load cap `(1+δ)B` in the same units.
#[derive(Clone, Debug)]
pub struct GridRounding {
    pub rounded: Instance,
    pub cap: u64,
    /// The upper bound B on the optimum.
    pub bound: u64,
}

impl GridRounding {
    pub fn new(inst: &Instance, eps: Eps) -> Result<Self> {
        check_eps(eps)?;
        let bound = two_approx(inst)?.value;
        let delta = eps / 2;
        let (a, b) = (*delta.numer() as u128, *delta.denom() as u128);
        let n = inst.n() as u128;
        let unit_den = a * bound.max(1) as u128;
        let proc = (0..inst.m())
            .map(|i| {
                (0..inst.n()).map(|j| inst.p(i, j).map(|p| (p as u128 * n * b).div_ceil(unit_den) as u64)).collect()
            })
            .collect();
        let rounded = Instance::new(inst.job_ids().to_vec(), inst.machine_ids().to_vec(), proc, false)?;
        let cap = (n * b / a + n) as u64;
        Ok(GridRounding { rounded, cap, bound })
    }
}

/// Schedule within a factor `1 + ε` of optimal, polynomial for a constant number of machines.
pub fn fptas_fixed_m(sub: &SubinstanceRef<'_>, eps: Eps) -> Result<Solution> {
    check_eps(eps)?;
    sub.check_feasible()?;
    let (inst, jobs, machines) = sub.materialize();
    if inst.n() == 0 {
        return Ok(Solution { value: 0, schedule: Schedule::new() });
    }
    let grid = GridRounding::new(&inst, eps)?;
    let sol = solve_load_dp(&grid.rounded.full(), Some(grid.cap))?;
    let value = makespan(&inst, &sol.schedule)?;
    let schedule = Schedule::from_pairs(sol.schedule.iter().map(|(j, i)| (jobs[j], machines[i])));
    Ok(Solution { value, schedule })
}
