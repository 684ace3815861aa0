//! Approximation for restricted assignment on incidence graphs of bounded rankwidth.

mod audit;
mod edge_dp;
mod forest;
mod lp;
mod rounding;
mod two_approx;

pub use audit::{class_representative_audit, cut_types, AuditVerdict};
pub use edge_dp::{solve_edge_dp, sub_vectors, EdgeDp, SizeCatalog, TypeSide};
pub use rounding::{round_instance, round_small_jobs_back, rounding_delta, RoundedInstance, MAX_ROUNDED_JOBS};
pub use two_approx::two_approx;

use crate::decomp::{bicograph_recognize, validate_branch_decomposition, BranchDecomposition, Recognition};
use crate::eps::{check_eps, Eps};
use crate::error::{Error, Result};
use crate::graphs::{build_graph, GraphKind};
use crate::instance::{makespan, Instance, Schedule, Solution};

/// Every stage of one PTAS run.
#[derive(Clone, Debug)]
pub struct PtasRun {
    /// Makespan of the 2-approximation.
    pub bound: u64,
    pub rounded: RoundedInstance,
    /// Optimal schedule of the rounded instance, in its units.
    pub rounded_solution: Solution,
    pub solution: Solution,
}

/// Branch decomposition of the incidence graph through bi-cograph recognition.
pub fn incidence_branch_decomposition(inst: &Instance) -> Result<BranchDecomposition> {
    let g = build_graph(inst, GraphKind::Incidence);
    let left: Vec<bool> = (0..g.vertex_count()).map(|v| g.is_job_vertex(v)).collect();
    match bicograph_recognize(&g.graph, &left)? {
        Recognition::Bicograph(tree) => Ok(tree.to_branch_decomposition(g.vertex_count())),
        Recognition::Witness(w) => Err(Error::Invalid(format!(
            "the incidence graph is not a bi-cograph (obstruction on vertices {w:?}); supply a branch decomposition"
        ))),
    }
}

/// Schedule of makespan at most (1 + ε)·OPT for a restricted-identical instance. Without `bd`
/// the incidence graph must be a bi-cograph.
pub fn ptas(inst: &Instance, eps: Eps, bd: Option<&BranchDecomposition>) -> Result<Solution> {
    Ok(ptas_run(inst, eps, bd)?.solution)
}

pub fn ptas_run(inst: &Instance, eps: Eps, bd: Option<&BranchDecomposition>) -> Result<PtasRun> {
    check_eps(eps)?;
    if !inst.has_identical_rows() {
        return Err(Error::Invalid("the PTAS needs a restricted-identical instance".into()));
    }
    let bound = two_approx(inst)?.value;
    let rounded = round_instance(inst, eps, bound)?;
    if inst.n() == 0 {
        let empty = Solution { value: 0, schedule: Schedule::new() };
        return Ok(PtasRun { bound, rounded, rounded_solution: empty.clone(), solution: empty });
    }
    let bd = match bd {
        Some(bd) => {
            let g = build_graph(inst, GraphKind::Incidence);
            validate_branch_decomposition(&g.graph, bd)
                .map_err(|v| Error::Invalid(format!("not a branch decomposition of the incidence graph: {v}")))?;
            bd.clone()
        }
        None => incidence_branch_decomposition(inst)?,
    };
    let n_rounded = rounded.instance.n();
    let mut groups: Vec<Vec<usize>> = rounded.copies.clone();
    groups.extend((0..inst.m()).map(|i| vec![n_rounded + i]));
    let lifted = bd.expand(&groups, n_rounded + inst.m());
    let rounded_solution = solve_edge_dp(&rounded.instance, &lifted)?;
    let schedule = round_small_jobs_back(inst, &rounded, &rounded_solution.schedule)?;
    let value = makespan(inst, &schedule)?;
    Ok(PtasRun { bound, rounded, rounded_solution, solution: Solution { value, schedule } })
}

#[cfg(test)]
mod tests {
    use num_rational::Ratio;

    use super::*;
    use crate::harness::{brute_force, generate, GeneratorSpec, InstanceClass};

    #[test]
    fn hierarchical_instances_within_ratio() {
        for class in [InstanceClass::PathHierarchical, InstanceClass::TreeHierarchical, InstanceClass::Nested] {
            for seed in 0..8 {
                let spec = GeneratorSpec::new(class, 2 + seed as usize % 4, 1 + seed as usize % 3, seed);
                let inst = generate(&spec).unwrap();
                let opt = brute_force(&inst.full()).unwrap().value;
                for eps in [Ratio::new(1, 1), Ratio::new(1, 2)] {
                    let run = ptas_run(&inst, eps, None).unwrap();
                    let v = run.solution.value;
                    assert!(v >= opt);
                    assert!(
                        Ratio::from_integer(v) <= (Ratio::from_integer(1) + eps) * Ratio::from_integer(opt),
                        "{class} {seed}"
                    );
                }
            }
        }
    }

    #[test]
    fn aligned_big_jobs_are_exact() {
        // Equal big jobs stay equal after rounding, so the rounded optimum maps back exactly.
        let inst = Instance::restricted(&[3, 3, 3], &[vec![0, 1], vec![0, 1], vec![1]], 2).unwrap();
        let opt = brute_force(&inst.full()).unwrap().value;
        assert_eq!(ptas(&inst, Ratio::new(1, 1), None).unwrap().value, opt);
    }

    #[test]
    fn non_bicograph_needs_decomposition() {
        // The path j0-m0-j1-m1-j2-m2-j3 on seven vertices is not a bi-cograph.
        let inst = Instance::restricted(&[1, 1, 1, 1], &[vec![0], vec![0, 1], vec![1, 2], vec![2]], 3).unwrap();
        let err = ptas(&inst, Ratio::new(1, 2), None).unwrap_err();
        assert!(matches!(err, Error::Invalid(_)));
        let order: Vec<usize> = (0..7).collect();
        let bd = BranchDecomposition::caterpillar(&order);
        assert_eq!(ptas(&inst, Ratio::new(1, 2), Some(&bd)).unwrap().value, 2);
    }
}
