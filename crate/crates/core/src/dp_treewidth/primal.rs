use super::{bit_map, mask_of, prepare, remap, submasks, Table};
use crate::decomp::SimpleFormDecomposition;
use crate::dp_basic::MachineDpTable;
use crate::error::{Error, Result};
use crate::graphs::GraphKind;
use crate::instance::{makespan, Instance, Schedule, Solution};

/// Tables of one node. Keys are job sets as bitmasks over the node's active jobs.
struct Node {
    /// OPT(S(t, J)); backpointers are entry indices into the children's tilde tables.
    plain: Table<u32, Vec<usize>>,
    /// OPT(S̃(t, J')); backpointers are (A, entry of X in `plain`).
    tilde: Table<u32, (u32, usize)>,
    machines: MachineDpTable,
}

/// Exact optimum by dynamic programming over a simple-form decomposition of the primal graph.
pub fn solve_primal(inst: &Instance, sfd: &SimpleFormDecomposition) -> Result<Solution> {
    if inst.n() == 0 {
        return Ok(Solution { value: 0, schedule: Schedule::new() });
    }
    let labels = prepare(inst, sfd, GraphKind::Primal)?;
    let mut nodes: Vec<Option<Node>> = (0..sfd.node_count()).map(|_| None).collect();
    for t in sfd.postorder() {
        let l = &labels.nodes[t];
        let act = &l.jobs_act;
        let mut plain = Table::new();
        if sfd.is_leaf(t) {
            plain.offer(0, 0, Vec::new())?;
        } else {
            // Φ(J): every child contributes a disjoint part of J.
            let mut partial: Vec<(u32, u64, Vec<usize>)> = vec![(0, 0, Vec::new())];
            for &c in &sfd.children[t] {
                let child = nodes[c].as_ref().expect("children come first");
                let map = bit_map(&labels.nodes[c].jobs_act, act);
                let mut next = Vec::new();
                for (set, val, back) in &partial {
                    for (k, &key) in child.tilde.keys.iter().enumerate() {
                        let part = remap(key, &map).expect("kept jobs stay active at the parent");
                        if part & set != 0 {
                            continue;
                        }
                        let mut b = back.clone();
                        b.push(k);
                        next.push((set | part, (*val).max(child.tilde.vals[k]), b));
                    }
                }
                partial = next;
            }
            for (set, val, back) in partial {
                plain.offer(set, val, back)?;
            }
        }
        let machines = MachineDpTable::build(inst, act, &l.machines_nia, super::MAX_ACTIVE_JOBS)?;
        let full = ((1u64 << act.len()) - 1) as u32;
        let nia = mask_of(&l.jobs_nia, act);
        let mut tilde = Table::new();
        for kept in submasks(full & !nia) {
            let routed = kept | nia;
            // Ψ(J'): A goes to the nearly inactive machines, X to the inactive ones.
            for a in submasks(routed) {
                let Some(x) = plain.get(&(routed ^ a)) else { continue };
                let Some(on_nia) = machines.opt_of(a).finite() else { continue };
                tilde.offer(kept, plain.vals[x].max(on_nia), (a, x))?;
            }
        }
        nodes[t] = Some(Node { plain, tilde, machines });
    }

    let root = nodes[sfd.root].as_ref().expect("root solved");
    let Some(top) = root.plain.get(&0) else {
        return Err(Error::Infeasible("no feasible schedule".into()));
    };
    let mut schedule = Schedule::new();
    // (node, entry, is_tilde)
    let mut stack = vec![(sfd.root, top, false)];
    while let Some((t, k, is_tilde)) = stack.pop() {
        let node = nodes[t].as_ref().expect("solved");
        if is_tilde {
            let (a, x) = node.tilde.back[k];
            for (j, i) in node.machines.assignment_of(a).expect("finite entry") {
                schedule.assign(j, i);
            }
            stack.push((t, x, false));
        } else {
            for (&c, &ck) in sfd.children[t].iter().zip(&node.plain.back[k]) {
                stack.push((c, ck, true));
            }
        }
    }
    let value = makespan(inst, &schedule)?;
    debug_assert_eq!(value, root.plain.vals[top]);
    Ok(Solution { value, schedule })
}
