use super::{bit_map, prepare, transport_add, Table};
use crate::decomp::SimpleFormDecomposition;
use crate::dp_basic::LoadTable;
use crate::error::{Error, Result};
use crate::graphs::GraphKind;
use crate::instance::{makespan, Instance, Schedule, Solution};
use crate::ptas::two_approx;

/// Tables of one node. Keys are load vectors over the node's active machines.
struct Node {
    /// OPT(S(t, λ)); backpointers are entry indices into the children's tilde tables.
    plain: Table<Vec<u64>, Vec<usize>>,
    /// OPT(S̃(t, λ')); backpointers are (entry of ξ in `plain`, index of α in `nia`).
    tilde: Table<Vec<u64>, (usize, usize)>,
    /// Λ(Jnia, Mact).
    nia: LoadTable,
}

/// Exact optimum by dynamic programming over a simple-form decomposition of the dual graph.
/// Loads above `load_bound` are discarded; without a bound the 2-approximation value is used.
pub fn solve_dual(inst: &Instance, sfd: &SimpleFormDecomposition, load_bound: Option<u64>) -> Result<Solution> {
    if inst.n() == 0 {
        return Ok(Solution { value: 0, schedule: Schedule::new() });
    }
    let labels = prepare(inst, sfd, GraphKind::Dual)?;
    let cap = match load_bound {
        Some(c) => c,
        None => two_approx(inst)?.value,
    };
    let mut nodes: Vec<Option<Node>> = (0..sfd.node_count()).map(|_| None).collect();
    for t in sfd.postorder() {
        let l = &labels.nodes[t];
        let act = &l.machines_act;
        let mut plain = Table::new();
        if sfd.is_leaf(t) {
            plain.offer(Vec::new(), 0, Vec::new())?;
        } else {
            // Ξ(λ): λ = Σ τ(λ_s) over the children.
            let mut partial: Vec<(Vec<u64>, u64, Vec<usize>)> = vec![(vec![0; act.len()], 0, Vec::new())];
            for &c in &sfd.children[t] {
                let child = nodes[c].as_ref().expect("children come first");
                let pos = bit_map(&labels.nodes[c].machines_act, act);
                let mut next = Vec::new();
                for (load, val, back) in &partial {
                    for (k, key) in child.tilde.keys.iter().enumerate() {
                        let mut sum = load.clone();
                        transport_add(&mut sum, key, &pos);
                        if sum.iter().any(|&x| x > cap) {
                            continue;
                        }
                        let mut b = back.clone();
                        b.push(k);
                        next.push((sum, (*val).max(child.tilde.vals[k]), b));
                    }
                }
                partial = next;
            }
            for (load, val, back) in partial {
                plain.offer(load, val, back)?;
            }
        }
        let nia = LoadTable::build(inst, &l.jobs_nia, act, Some(cap))?;
        let mut tilde = Table::new();
        // Υ(λ'): λ' = α + ξ.
        for (x, xi) in plain.keys.iter().enumerate() {
            for (ai, alpha) in nia.finals().iter().enumerate() {
                let load: Vec<u64> = xi.iter().zip(alpha).map(|(a, b)| a + b).collect();
                let top = load.iter().copied().max().unwrap_or(0);
                if top > cap {
                    continue;
                }
                tilde.offer(load, plain.vals[x].max(top), (x, ai))?;
            }
        }
        nodes[t] = Some(Node { plain, tilde, nia });
    }

    let root = nodes[sfd.root].as_ref().expect("root solved");
    let Some(top) = root.plain.get(&Vec::new()) else {
        return Err(Error::Infeasible(format!("no feasible schedule with loads within {cap}")));
    };
    let mut schedule = Schedule::new();
    let mut stack = vec![(sfd.root, top, false)];
    while let Some((t, k, is_tilde)) = stack.pop() {
        let node = nodes[t].as_ref().expect("solved");
        if is_tilde {
            let (x, ai) = node.tilde.back[k];
            for (j, i) in node.nia.assignment(ai) {
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
