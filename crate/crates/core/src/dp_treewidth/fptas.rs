use super::{solve_dual, solve_incidence};
use crate::decomp::SimpleFormDecomposition;
use crate::dp_basic::GridRounding;
use crate::eps::{check_eps, Eps};
use crate::error::{Error, Result};
use crate::graphs::GraphKind;
use crate::instance::{makespan, Instance, Schedule, Solution};

/// Schedule within a factor `1 + ε` of optimal: the dual or incidence program runs on
/// processing times rounded up to a grid, with loads capped, and the schedule is evaluated
/// on the original times.
pub fn fptas_treewidth(inst: &Instance, sfd: &SimpleFormDecomposition, kind: GraphKind, eps: Eps) -> Result<Solution> {
    check_eps(eps)?;
    if kind == GraphKind::Primal {
        return Err(Error::Invalid("the treewidth FPTAS runs on the dual or incidence graph".into()));
    }
    if inst.n() == 0 {
        return Ok(Solution { value: 0, schedule: Schedule::new() });
    }
    let grid = GridRounding::new(inst, eps)?;
    let sol = match kind {
        GraphKind::Dual => solve_dual(&grid.rounded, sfd, Some(grid.cap))?,
        _ => solve_incidence(&grid.rounded, sfd, Some(grid.cap))?,
    };
    let value = makespan(inst, &sol.schedule)?;
    Ok(Solution { value, schedule: sol.schedule })
}
