use std::fmt;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::decomp::SimpleFormDecomposition;
use crate::error::{Error, Result};
use crate::graphs::GraphKind;
use crate::instance::Instance;

/// Active, inactive and nearly inactive jobs and machines of one decomposition node.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct NodeLabel {
    pub jobs_act: Vec<usize>,
    pub jobs_ina: Vec<usize>,
    pub jobs_nia: Vec<usize>,
    pub machines_act: Vec<usize>,
    pub machines_ina: Vec<usize>,
    pub machines_nia: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ActivityLabeling {
    pub kind: GraphKind,
    pub nodes: Vec<NodeLabel>,
}

fn set(len: usize, items: impl IntoIterator<Item = usize>) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(len);
    s.extend(items);
    s
}

fn list(s: &FixedBitSet) -> Vec<usize> {
    s.ones().collect()
}

fn minus(a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
    let mut out = a.clone();
    out.difference_with(b);
    out
}

fn union(a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
    let mut out = a.clone();
    out.union_with(b);
    out
}

/// Splits each bag of `sfd` (vertices of the `kind` graph) into its job and machine parts.
fn bag_parts(
    sfd: &SimpleFormDecomposition,
    inst: &Instance,
    kind: GraphKind,
) -> Result<Vec<(FixedBitSet, FixedBitSet)>> {
    let (n, m) = (inst.n(), inst.m());
    let limit = match kind {
        GraphKind::Primal => n,
        GraphKind::Dual => m,
        GraphKind::Incidence => n + m,
    };
    sfd.bags
        .iter()
        .map(|bag| {
            let mut jobs = FixedBitSet::with_capacity(n);
            let mut machines = FixedBitSet::with_capacity(m);
            for &v in bag {
                if v >= limit {
                    return Err(Error::Invalid(format!("bag vertex {v} is not a vertex of the {kind:?} graph")));
                }
                match kind {
                    GraphKind::Primal => jobs.insert(v),
                    GraphKind::Dual => machines.insert(v),
                    GraphKind::Incidence if v < n => jobs.insert(v),
                    GraphKind::Incidence => machines.insert(v - n),
                }
            }
            Ok((jobs, machines))
        })
        .collect()
}

/// Derives the activity sets of every node. Sets defined from bags follow the bag's vertex
/// type; the other side is derived through the allowed-machine relation.
pub fn label_activity(sfd: &SimpleFormDecomposition, inst: &Instance, kind: GraphKind) -> Result<ActivityLabeling> {
    let (n, m) = (inst.n(), inst.m());
    let parts = bag_parts(sfd, inst, kind)?;
    let nodes = sfd.node_count();
    // Union of the bag parts strictly below each node.
    let mut below: Vec<(FixedBitSet, FixedBitSet)> =
        vec![(FixedBitSet::with_capacity(n), FixedBitSet::with_capacity(m)); nodes];
    for t in sfd.postorder() {
        let mut acc = (FixedBitSet::with_capacity(n), FixedBitSet::with_capacity(m));
        for &c in &sfd.children[t] {
            acc.0.union_with(&below[c].0);
            acc.0.union_with(&parts[c].0);
            acc.1.union_with(&below[c].1);
            acc.1.union_with(&parts[c].1);
        }
        below[t] = acc;
    }
    let empty = (FixedBitSet::with_capacity(n), FixedBitSet::with_capacity(m));
    let out = (0..nodes)
        .map(|t| {
            let (bag_jobs, bag_machines) = &parts[t];
            let (parent_jobs, parent_machines) = match sfd.parent[t] {
                Some(p) => &parts[p],
                None => &empty,
            };
            let is_root = sfd.parent[t].is_none();
            let mut label = NodeLabel::default();
            let (ja, ji, jn);
            let (ma, mi, mn);
            if kind == GraphKind::Dual {
                ma = bag_machines.clone();
                mi = minus(&below[t].1, bag_machines);
                mn = if is_root { FixedBitSet::with_capacity(m) } else { minus(&ma, parent_machines) };
                ji = inst.jobs_of_machines(mi.ones());
                ja = minus(&inst.jobs_of_machines(ma.ones()), &ji);
                jn = minus(&inst.jobs_of_machines(mn.ones()), &ji);
            } else {
                ja = bag_jobs.clone();
                ji = minus(&below[t].0, bag_jobs);
                jn = if is_root { FixedBitSet::with_capacity(n) } else { minus(&ja, parent_jobs) };
                if kind == GraphKind::Incidence {
                    ma = bag_machines.clone();
                    mi = minus(&below[t].1, bag_machines);
                    mn = if is_root { FixedBitSet::with_capacity(m) } else { minus(&ma, parent_machines) };
                } else {
                    mi = inst.machines_of_jobs(ji.ones());
                    ma = minus(&inst.machines_of_jobs(ja.ones()), &mi);
                    mn = minus(&inst.machines_of_jobs(jn.ones()), &mi);
                }
            }
            label.jobs_act = list(&ja);
            label.jobs_ina = list(&ji);
            label.jobs_nia = list(&jn);
            label.machines_act = list(&ma);
            label.machines_ina = list(&mi);
            label.machines_nia = list(&mn);
            label
        })
        .collect();
    Ok(ActivityLabeling { kind, nodes: out })
}

/// One failed activity condition at a node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabelViolation {
    pub node: usize,
    pub condition: u8,
    pub detail: String,
}

impl fmt::Display for LabelViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "node {}: condition ({}) fails: {}", self.node, self.condition, self.detail)
    }
}

/// Re-checks the activity conditions from scratch by set algebra. Conditions (1)–(4) apply
/// to every kind; (5) and (6) are the primal or dual specific ones and are skipped for the
/// incidence graph.
pub fn audit_labeling(
    sfd: &SimpleFormDecomposition,
    inst: &Instance,
    labels: &ActivityLabeling,
) -> Vec<LabelViolation> {
    let (n, m) = (inst.n(), inst.m());
    let mut out = Vec::new();
    let mut report = |node: usize, condition: u8, detail: String| out.push(LabelViolation { node, condition, detail });
    for (t, l) in labels.nodes.iter().enumerate() {
        let ja = set(n, l.jobs_act.iter().copied());
        let ji = set(n, l.jobs_ina.iter().copied());
        let jn = set(n, l.jobs_nia.iter().copied());
        let ma = set(m, l.machines_act.iter().copied());
        let mi = set(m, l.machines_ina.iter().copied());
        let mn = set(m, l.machines_nia.iter().copied());

        let reach_m = inst.machines_of_jobs(union(&ji, &jn).ones());
        if !reach_m.is_subset(&union(&ma, &mi)) {
            report(
                t,
                1,
                format!(
                    "machines {:?} reachable from (nearly) inactive jobs",
                    list(&minus(&reach_m, &union(&ma, &mi)))
                ),
            );
        }
        let reach_j = inst.jobs_of_machines(union(&mi, &mn).ones());
        if !reach_j.is_subset(&union(&ja, &ji)) {
            report(
                t,
                2,
                format!(
                    "jobs {:?} reachable from (nearly) inactive machines",
                    list(&minus(&reach_j, &union(&ja, &ji)))
                ),
            );
        }
        if sfd.parent[t].is_none() && (!jn.is_clear() || !mn.is_clear()) {
            report(t, 3, "root has nearly inactive elements".into());
        }
        if !sfd.children[t].is_empty() {
            let kids: Vec<&NodeLabel> = sfd.children[t].iter().map(|&c| &labels.nodes[c]).collect();
            let mut jobs = FixedBitSet::with_capacity(n);
            let mut machines = FixedBitSet::with_capacity(m);
            let mut job_clash = false;
            let mut machine_clash = false;
            for k in &kids {
                for &j in k.jobs_ina.iter().chain(&k.jobs_nia) {
                    job_clash |= jobs.put(j);
                }
                for &i in k.machines_ina.iter().chain(&k.machines_nia) {
                    machine_clash |= machines.put(i);
                }
            }
            if job_clash || jobs != ji {
                report(t, 3, "inactive jobs are not the disjoint union of the children's".into());
            }
            if machine_clash || machines != mi {
                report(t, 4, "inactive machines are not the disjoint union of the children's".into());
            }
        }
        match labels.kind {
            GraphKind::Primal => {
                if !inst.jobs_of_machines(mn.ones()).is_subset(&ja) {
                    report(t, 5, "nearly inactive machines serve non-active jobs".into());
                }
                if reach_m != union(&mn, &mi) {
                    report(t, 6, "machines of (nearly) inactive jobs differ from (nearly) inactive machines".into());
                }
            }
            GraphKind::Dual => {
                if !inst.machines_of_jobs(jn.ones()).is_subset(&ma) {
                    report(t, 5, "nearly inactive jobs reach non-active machines".into());
                }
                if reach_j != union(&jn, &ji) {
                    report(t, 6, "jobs of (nearly) inactive machines differ from (nearly) inactive jobs".into());
                }
            }
            GraphKind::Incidence => {}
        }
    }
    out
}
