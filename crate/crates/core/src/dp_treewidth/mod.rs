//! Exact dynamic programs over simple-form tree decompositions of the primal, dual and
//! incidence graphs, and the FPTAS built on the dual and incidence programs.

mod dual;
mod fptas;
mod incidence;
mod labels;
mod primal;

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::hash::Hash;

pub use dual::solve_dual;
pub use fptas::fptas_treewidth;
pub use incidence::solve_incidence;
pub use labels::{audit_labeling, label_activity, ActivityLabeling, LabelViolation, NodeLabel};
pub use primal::solve_primal;

use crate::decomp::{
    exact_treewidth, heuristic_tree_decomposition, normalize_simple_form, validate_tree_decomposition, Heuristic,
    SimpleFormDecomposition, DEFAULT_EXACT_LIMIT,
};
use crate::error::{Error, Result};
use crate::graphs::{build_graph, GraphKind};
use crate::instance::Instance;

/// Largest active job set a node may carry; job-set keys are bitmasks over it.
pub const MAX_ACTIVE_JOBS: usize = 20;
/// Largest number of entries in one node table.
pub const TABLE_BUDGET: usize = 2_000_000;

/// Simple-form decomposition of the `kind` graph: exact width when the graph is small,
/// otherwise the min-fill heuristic.
pub fn decomposition_for(inst: &Instance, kind: GraphKind) -> Result<SimpleFormDecomposition> {
    let g = build_graph(inst, kind);
    let td = if g.vertex_count() <= DEFAULT_EXACT_LIMIT {
        exact_treewidth(&g.graph)?.1
    } else {
        heuristic_tree_decomposition(&g.graph, Heuristic::MinFill)
    };
    normalize_simple_form(&td, None)
}

/// Common entry checks: feasibility, decomposition shape and validity, then labels.
fn prepare(inst: &Instance, sfd: &SimpleFormDecomposition, kind: GraphKind) -> Result<ActivityLabeling> {
    if !inst.is_feasible() {
        return Err(Error::Infeasible(format!(
            "job `{}` has no allowed machine",
            inst.job_id(inst.stranded_jobs()[0])
        )));
    }
    sfd.check_shape()?;
    let g = build_graph(inst, kind);
    validate_tree_decomposition(&g.graph, &sfd.to_tree_decomposition())
        .map_err(|v| Error::Invalid(format!("not a tree decomposition of the {kind:?} graph: {v}").to_lowercase()))?;
    let labels = label_activity(sfd, inst, kind)?;
    if let Some(l) = labels.nodes.iter().find(|l| l.jobs_act.len() > MAX_ACTIVE_JOBS) {
        return Err(Error::Resource(format!(
            "a node has {} active jobs, the limit is {MAX_ACTIVE_JOBS}",
            l.jobs_act.len()
        )));
    }
    Ok(labels)
}

/// Keyed minimum table with one backpointer per key.
pub(crate) struct Table<K, B> {
    pub(crate) keys: Vec<K>,
    pub(crate) vals: Vec<u64>,
    pub(crate) back: Vec<B>,
    index: HashMap<K, usize>,
}

impl<K: Hash + Eq + Clone, B> Table<K, B> {
    pub(crate) fn new() -> Self {
        Table { keys: Vec::new(), vals: Vec::new(), back: Vec::new(), index: HashMap::new() }
    }

    /// Keeps the smaller value per key; the first offer wins ties.
    pub(crate) fn offer(&mut self, key: K, val: u64, back: B) -> Result<()> {
        match self.index.entry(key) {
            Entry::Occupied(e) => {
                let k = *e.get();
                if val < self.vals[k] {
                    self.vals[k] = val;
                    self.back[k] = back;
                }
            }
            Entry::Vacant(e) => {
                if self.keys.len() >= TABLE_BUDGET {
                    return Err(Error::Resource(format!("a decomposition node table exceeds {TABLE_BUDGET} entries")));
                }
                self.keys.push(e.key().clone());
                self.vals.push(val);
                self.back.push(back);
                e.insert(self.keys.len() - 1);
            }
        }
        Ok(())
    }

    pub(crate) fn get(&self, key: &K) -> Option<usize> {
        self.index.get(key).copied()
    }
}

/// All submasks of `m`, from 0 upward.
fn submasks(m: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(0u32);
    std::iter::from_fn(move || {
        let s = next?;
        next = if s == m { None } else { Some(s.wrapping_sub(m) & m) };
        Some(s)
    })
}

/// Bitmask of `items` over the sorted universe `universe`.
fn mask_of(items: &[usize], universe: &[usize]) -> u32 {
    items.iter().fold(0, |acc, x| acc | (1 << universe.binary_search(x).expect("item in universe")))
}

fn members(mask: u32, universe: &[usize]) -> Vec<usize> {
    crate::dp_basic::bits(mask).map(|b| universe[b]).collect()
}

/// For each position of `from`, the bit of the same element in `to`, if present.
fn bit_map(from: &[usize], to: &[usize]) -> Vec<Option<u32>> {
    from.iter().map(|x| to.binary_search(x).ok().map(|p| p as u32)).collect()
}

/// Re-expresses a mask over `from` as a mask over `to`; `None` if an element is missing.
fn remap(mask: u32, map: &[Option<u32>]) -> Option<u32> {
    crate::dp_basic::bits(mask).try_fold(0u32, |acc, b| map[b].map(|t| acc | (1 << t)))
}

/// τ: entries on shared machines are kept, the rest are 0.
fn transport_add(acc: &mut [u64], from: &[u64], pos: &[Option<u32>]) {
    for (v, p) in from.iter().zip(pos) {
        if let Some(p) = p {
            acc[*p as usize] += v;
        }
    }
}
