use std::collections::BTreeMap;

use serde::Serialize;

use super::edge_dp::{EdgeDp, SizeCatalog, TypeSide};
use crate::decomp::BranchDecomposition;
use crate::error::{Error, Result};
use crate::harness::brute_force;
use crate::instance::{Cost, Instance};

/// Outcome of checking one pair of class vectors on one cut.
#[derive(Clone, Debug, Serialize)]
pub struct AuditVerdict {
    /// Number of (leaving, arriving) representative pairs solved.
    pub pairs: usize,
    /// Minimum over leaving representatives of the common optimum over arriving ones.
    pub best: Option<u64>,
    /// Table value for the pair, when the table is rooted on the upper side.
    pub table: Option<Option<u64>>,
    pub mismatches: Vec<String>,
}

impl AuditVerdict {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Types of the jobs leaving side `b` of the tree edge `{a, b}` (with respect to the machines
/// on side `a`) and of the jobs arriving there (with respect to the machines on side `b`).
pub fn cut_types(
    inst: &Instance,
    bd: &BranchDecomposition,
    edge: (usize, usize),
) -> Result<(SizeCatalog, TypeSide, TypeSide)> {
    let (a, b) = edge;
    if a >= bd.node_count() || b >= bd.node_count() || !bd.adj[a].contains(&b) {
        return Err(Error::Invalid(format!("{a}-{b} is not a decomposition edge")));
    }
    let catalog = SizeCatalog::new(inst)?;
    let n = inst.n();
    let lower = bd.side(b, a);
    let jobs_below: Vec<usize> = (0..n).filter(|&j| lower.contains(j)).collect();
    let jobs_above: Vec<usize> = (0..n).filter(|&j| !lower.contains(j)).collect();
    let mut machines_below = fixedbitset::FixedBitSet::with_capacity(inst.m());
    for i in 0..inst.m() {
        machines_below.set(i, lower.contains(n + i));
    }
    let mut machines_above = machines_below.clone();
    machines_above.toggle_range(..);
    let up = TypeSide::new(inst, &catalog, &jobs_below, &machines_above);
    let down = TypeSide::new(inst, &catalog, &jobs_above, &machines_below);
    Ok((catalog, up, down))
}

/// All job sets on `side` whose class vector is `want`.
fn representatives(side: &TypeSide, cat: &SizeCatalog, want: &[u16]) -> Vec<Vec<usize>> {
    let d = cat.d();
    let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (t, jobs) in side.jobs.iter().enumerate() {
        for &j in jobs {
            cells.entry(t * d + cat.index[j]).or_default().push(j);
        }
    }
    let mut out = vec![Vec::new()];
    for (c, &k) in want.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let pool = cells.get(&c).cloned().unwrap_or_default();
        let picks = combinations(&pool, k as usize);
        out = out
            .iter()
            .flat_map(|base| {
                picks.iter().map(move |p| {
                    let mut s = base.clone();
                    s.extend(p);
                    s
                })
            })
            .collect();
    }
    for s in &mut out {
        s.sort_unstable();
    }
    out
}

fn combinations(pool: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if pool.len() < k {
        return Vec::new();
    }
    let mut out = combinations(&pool[1..], k - 1);
    for c in &mut out {
        c.insert(0, pool[0]);
    }
    out.extend(combinations(&pool[1..], k));
    out
}

/// Solves the lower subproblem for every representative of the classes `up` (jobs leaving
/// side `b`) and `down` (jobs arriving from side `a`) by brute force. Every arriving
/// representative must give the same optimum, and the best leaving representative must match
/// the exhaustive table when one can be rooted on side `a`.
pub fn class_representative_audit(
    inst: &Instance,
    bd: &BranchDecomposition,
    edge: (usize, usize),
    up: &[u16],
    down: &[u16],
) -> Result<AuditVerdict> {
    let (catalog, up_side, down_side) = cut_types(inst, bd, edge)?;
    if up.len() != up_side.full.len() || down.len() != down_side.full.len() {
        return Err(Error::Invalid("class vectors do not match the cut".into()));
    }
    let n = inst.n();
    let lower = bd.side(edge.1, edge.0);
    let jobs_below: Vec<usize> = (0..n).filter(|&j| lower.contains(j)).collect();
    let machines_below: Vec<usize> = (0..inst.m()).filter(|&i| lower.contains(n + i)).collect();

    let mut verdict = AuditVerdict { pairs: 0, best: None, table: None, mismatches: Vec::new() };
    let mut best = Cost::Infinite;
    let arrivals = representatives(&down_side, &catalog, down);
    for leaving in representatives(&up_side, &catalog, up) {
        let mut seen: Option<Cost> = None;
        for arriving in &arrivals {
            let mut jobs: Vec<usize> = jobs_below.iter().copied().filter(|j| !leaving.contains(j)).collect();
            jobs.extend(arriving);
            jobs.sort_unstable();
            let sub = inst.subinstance(&jobs, &machines_below)?;
            let val = if sub.is_feasible() { Cost::Finite(brute_force(&sub)?.value) } else { Cost::Infinite };
            verdict.pairs += 1;
            match seen {
                None => seen = Some(val),
                Some(v) if v != val => verdict.mismatches.push(format!(
                    "leaving {leaving:?}: arriving {arriving:?} gives {val}, another representative gives {v}"
                )),
                Some(_) => {}
            }
        }
        if let Some(v) = seen {
            best = best.min(v);
        }
    }
    verdict.best = best.finite();

    let root_job = (0..n).find(|&j| !lower.contains(j));
    if let Some(root_job) = root_job {
        let dp = EdgeDp::build(inst, bd, root_job, None)?;
        debug_assert_eq!(dp.parent(edge.1), Some(edge.0));
        let table = dp.value(edge.1, up, down);
        verdict.table = Some(table.finite());
        if table != best {
            verdict.mismatches.push(format!("table holds {table}, representatives give {best}"));
        }
    }
    Ok(verdict)
}
