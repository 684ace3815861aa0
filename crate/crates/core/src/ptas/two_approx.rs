use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use petgraph::algo::dinics;
use petgraph::graph::DiGraph;

use super::forest::{round_assignment, FracEdge};
use super::lp::feasible_vertex;
use crate::error::{Error, Result};
use crate::instance::{makespan, Instance, Schedule, Solution};

fn q(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Schedule of makespan at most twice the optimum, by relaxation at the smallest feasible
/// integer target and rounding of the fractional support.
pub fn two_approx(inst: &Instance) -> Result<Solution> {
    if !inst.is_feasible() {
        return Err(Error::Infeasible(format!(
            "job `{}` has no allowed machine",
            inst.job_id(inst.stranded_jobs()[0])
        )));
    }
    if inst.n() == 0 {
        return Ok(Solution { value: 0, schedule: Schedule::new() });
    }
    let min_p: Vec<u64> = (0..inst.n())
        .map(|j| inst.valid_machines(j).iter().filter_map(|&i| inst.p(i, j)).min().expect("feasible"))
        .collect();
    let lo = *min_p.iter().max().expect("jobs exist");
    let hi: u64 = min_p.iter().sum();
    let identical = inst.has_identical_rows();
    let relax = |t: u64| if identical { flow_relaxation(inst, t) } else { lp_relaxation(inst, t) };
    let (mut lo, mut hi) = (lo, hi);
    // `best` always holds a relaxed solution for the current `hi`.
    let mut best = relax(hi).expect("assigning every job to its fastest machine fits the sum");
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match relax(mid) {
            Some(sol) => {
                best = sol;
                hi = mid;
            }
            None => lo = mid + 1,
        }
    }
    let totals: HashMap<usize, BigRational> = best
        .iter()
        .map(|e| (e.job, if identical { q(inst.size(e.job).expect("feasible")) } else { BigRational::one() }))
        .collect();
    let assign = round_assignment(best, &totals, identical);
    let schedule = Schedule::from_pairs(assign);
    let value = makespan(inst, &schedule)?;
    Ok(Solution { value, schedule })
}

/// Restricted-identical relaxation as a flow; masses are processing time units.
fn flow_relaxation(inst: &Instance, t: u64) -> Option<Vec<FracEdge>> {
    let (n, m) = (inst.n(), inst.m());
    let mut g: DiGraph<(), u64> = DiGraph::new();
    let source = g.add_node(());
    let jobs: Vec<_> = (0..n).map(|_| g.add_node(())).collect();
    let machines: Vec<_> = (0..m).map(|_| g.add_node(())).collect();
    let sink = g.add_node(());
    let mut total = 0;
    let mut pair_edges = Vec::new();
    for (j, &job) in jobs.iter().enumerate() {
        let p = inst.size(j)?;
        if p > t {
            return None;
        }
        total += p;
        g.add_edge(source, job, p);
        for &i in inst.valid_machines(j) {
            pair_edges.push((j, i, g.add_edge(job, machines[i], p)));
        }
    }
    for &mn in &machines {
        g.add_edge(mn, sink, t);
    }
    let (flow, flows) = dinics(&g, source, sink);
    if flow < total {
        return None;
    }
    Some(
        pair_edges
            .into_iter()
            .filter(|&(_, _, e)| flows[e.index()] > 0)
            .map(|(job, machine, e)| FracEdge { job, machine, mass: q(flows[e.index()]) })
            .collect(),
    )
}

/// Unrelated relaxation; masses are assignment fractions of a vertex solution.
fn lp_relaxation(inst: &Instance, t: u64) -> Option<Vec<FracEdge>> {
    let (n, m) = (inst.n(), inst.m());
    let pairs: Vec<(usize, usize, u64)> = (0..n)
        .flat_map(|j| {
            inst.valid_machines(j).iter().filter_map(move |&i| inst.p(i, j).filter(|&p| p <= t).map(|p| (j, i, p)))
        })
        .collect();
    let cols = pairs.len() + m;
    let mut a = vec![vec![BigRational::zero(); cols]; n + m];
    for (c, &(j, i, p)) in pairs.iter().enumerate() {
        a[j][c] = BigRational::one();
        a[n + i][c] = q(p);
    }
    for i in 0..m {
        a[n + i][pairs.len() + i] = BigRational::one();
    }
    let b: Vec<BigRational> = (0..n).map(|_| BigRational::one()).chain((0..m).map(|_| q(t))).collect();
    let slack: Vec<Option<usize>> = (0..n).map(|_| None).chain((0..m).map(|i| Some(pairs.len() + i))).collect();
    let x = feasible_vertex(&a, &b, &slack)?;
    Some(
        pairs
            .iter()
            .enumerate()
            .filter(|(c, _)| !x[*c].is_zero())
            .map(|(c, &(job, machine, _))| FracEdge { job, machine, mass: x[c].clone() })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_machine_is_exact() {
        let inst = Instance::restricted(&[2, 3, 4], &[vec![0], vec![0], vec![0]], 1).unwrap();
        assert_eq!(two_approx(&inst).unwrap().value, 9);
    }

    #[test]
    fn unit_jobs() {
        let inst = Instance::restricted(&[1, 1], &[vec![0, 1], vec![0, 1]], 2).unwrap();
        assert!(two_approx(&inst).unwrap().value <= 2);
    }

    #[test]
    fn unrelated_within_factor_two() {
        let inst = Instance::unrelated(
            vec![
                vec![Some(3), Some(7), None, Some(2)],
                vec![Some(5), Some(2), Some(4), None],
                vec![None, Some(6), Some(1), Some(8)],
            ],
            4,
        )
        .unwrap();
        let sol = two_approx(&inst).unwrap();
        let opt = crate::dp_basic::solve_machine_dp(&inst.full()).unwrap().value;
        assert!(opt <= sol.value && sol.value <= 2 * opt, "{} vs {opt}", sol.value);
    }

    #[test]
    fn infeasible_rejected() {
        let inst = Instance::restricted(&[1], &[vec![]], 1).unwrap();
        assert!(matches!(two_approx(&inst), Err(Error::Infeasible(_))));
    }
}
