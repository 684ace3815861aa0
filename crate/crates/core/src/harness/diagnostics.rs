use serde::Serialize;

use crate::decomp::{
    bicograph_recognize, exact_treewidth, heuristic_tree_decomposition, validate_branch_decomposition, Heuristic,
    Recognition, DEFAULT_EXACT_LIMIT,
};
use crate::graphs::{build_graph, GraphKind, RestrictionGraph};
use crate::instance::Instance;

/// A treewidth value: exact, or the better of two heuristic upper bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WidthEstimate {
    pub width: usize,
    pub exact: bool,
}

/// Structural report on one instance.
#[derive(Clone, Debug, Serialize)]
pub struct Diagnostics {
    pub n: usize,
    pub m: usize,
    pub tw_primal: WidthEstimate,
    pub tw_dual: WidthEstimate,
    pub tw_incidence: WidthEstimate,
    /// max_i |J(i)| - 1: every J(i) is a clique of the primal graph.
    pub primal_clique_bound: usize,
    /// max_j |M(j)| - 1: every M(j) is a clique of the dual graph.
    pub dual_clique_bound: usize,
    pub clique_bounds_hold: bool,
    /// tw_i ≤ tw_p + 1 and tw_i ≤ tw_d + 1, checked only when all three widths are exact.
    pub incidence_bounds_hold: Option<bool>,
    pub restricted_identical: bool,
    pub bicograph: bool,
    /// Vertices of an obstruction when the incidence graph is not a bi-cograph.
    pub bicograph_witness: Option<Vec<usize>>,
    /// Rankwidth of the branch decomposition derived from the bi-cotree.
    pub bicograph_rankwidth: Option<usize>,
    /// Exact solver with the smallest width-driven table.
    pub recommended: &'static str,
    pub notes: Vec<String>,
}

impl Diagnostics {
    /// True if every checked structural inequality holds.
    pub fn consistent(&self) -> bool {
        self.clique_bounds_hold && self.incidence_bounds_hold != Some(false)
    }
}

fn width_of(g: &RestrictionGraph) -> WidthEstimate {
    if g.vertex_count() <= DEFAULT_EXACT_LIMIT {
        if let Ok((w, _)) = exact_treewidth(&g.graph) {
            return WidthEstimate { width: w, exact: true };
        }
    }
    let width = [Heuristic::MinDegree, Heuristic::MinFill]
        .into_iter()
        .map(|h| heuristic_tree_decomposition(&g.graph, h).width())
        .min()
        .unwrap_or(0);
    WidthEstimate { width, exact: false }
}

pub fn diagnostics(inst: &Instance) -> Diagnostics {
    let (n, m) = (inst.n(), inst.m());
    let tw_primal = width_of(&build_graph(inst, GraphKind::Primal));
    let tw_dual = width_of(&build_graph(inst, GraphKind::Dual));
    let incidence = build_graph(inst, GraphKind::Incidence);
    let tw_incidence = width_of(&incidence);

    let primal_clique_bound = (0..m).map(|i| inst.valid_jobs(i).len()).max().unwrap_or(0).saturating_sub(1);
    let dual_clique_bound = (0..n).map(|j| inst.valid_machines(j).len()).max().unwrap_or(0).saturating_sub(1);
    let clique_bounds_hold = tw_primal.width >= primal_clique_bound && tw_dual.width >= dual_clique_bound;
    let incidence_bounds_hold = (tw_primal.exact && tw_dual.exact && tw_incidence.exact)
        .then(|| tw_incidence.width <= tw_primal.width + 1 && tw_incidence.width <= tw_dual.width + 1);

    let left: Vec<bool> = (0..incidence.vertex_count()).map(|v| incidence.is_job_vertex(v)).collect();
    let (bicograph, bicograph_witness, bicograph_rankwidth) = match bicograph_recognize(&incidence.graph, &left) {
        Ok(Recognition::Bicograph(tree)) => {
            let bd = tree.to_branch_decomposition(incidence.vertex_count());
            let rw = validate_branch_decomposition(&incidence.graph, &bd).ok().map(|r| r.rankwidth);
            (true, None, rw)
        }
        Ok(Recognition::Witness(w)) => (false, Some(w), None),
        Err(_) => (false, None, None),
    };

    let restricted_identical = inst.has_identical_rows();
    let recommended = if tw_primal.width <= tw_incidence.width && tw_primal.width <= tw_dual.width {
        "tw-primal"
    } else if tw_incidence.width <= tw_dual.width {
        "tw-incidence"
    } else {
        "tw-dual"
    };
    let mut notes = Vec::new();
    if restricted_identical && bicograph {
        notes.push("ptas-rw applies with the bi-cotree decomposition".to_string());
    }
    notes.push(
        "primal and dual rankwidth are not reported: adding one job allowed everywhere and one machine \
         taking every job makes both graphs complete without simplifying the instance"
            .to_string(),
    );
    if !(tw_primal.exact && tw_dual.exact && tw_incidence.exact) {
        notes.push("some widths are heuristic upper bounds".to_string());
    }
    Diagnostics {
        n,
        m,
        tw_primal,
        tw_dual,
        tw_incidence,
        primal_clique_bound,
        dual_clique_bound,
        clique_bounds_hold,
        incidence_bounds_hold,
        restricted_identical,
        bicograph,
        bicograph_witness,
        bicograph_rankwidth,
        recommended,
        notes,
    }
}
