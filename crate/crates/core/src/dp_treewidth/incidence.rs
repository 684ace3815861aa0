use std::collections::hash_map::Entry;
use std::collections::HashMap;

use super::{bit_map, mask_of, members, prepare, remap, submasks, transport_add, Table};
use crate::decomp::SimpleFormDecomposition;
use crate::dp_basic::LoadTable;
use crate::error::{Error, Result};
use crate::graphs::GraphKind;
use crate::instance::{makespan, Instance, Schedule, Solution};
use crate::ptas::two_approx;

type Key = (u32, Vec<u64>);

/// Route of a tilde entry: the plain entry for (X, ξ), the set A, and the chosen vectors
/// α ∈ Λ(A ∩ J', Mnia) and β ∈ Λ(A ∩ Jnia, Mact).
#[derive(Clone, Copy)]
struct Route {
    plain: usize,
    a: u32,
    alpha: usize,
    beta: usize,
}

/// Tables of one node. Job sets are bitmasks over the active jobs, load vectors range over
/// the active machines.
struct Node {
    plain: Table<Key, Vec<usize>>,
    tilde: Table<Key, Route>,
    /// Λ(A ∩ J', Mnia) keyed by the job mask.
    alpha: HashMap<u32, LoadTable>,
    /// Λ(A ∩ Jnia, Mact) keyed by the job mask.
    beta: HashMap<u32, LoadTable>,
}

/// Exact optimum by dynamic programming over a simple-form decomposition of the incidence
/// graph. Loads above `load_bound` are discarded; without a bound the 2-approximation value
/// is used.
pub fn solve_incidence(inst: &Instance, sfd: &SimpleFormDecomposition, load_bound: Option<u64>) -> Result<Solution> {
    if inst.n() == 0 {
        return Ok(Solution { value: 0, schedule: Schedule::new() });
    }
    let labels = prepare(inst, sfd, GraphKind::Incidence)?;
    let cap = match load_bound {
        Some(c) => c,
        None => two_approx(inst)?.value,
    };
    let mut nodes: Vec<Option<Node>> = (0..sfd.node_count()).map(|_| None).collect();
    for t in sfd.postorder() {
        let l = &labels.nodes[t];
        let (jobs, act) = (&l.jobs_act, &l.machines_act);
        let mut plain = Table::new();
        if sfd.is_leaf(t) {
            plain.offer((0, Vec::new()), 0, Vec::new())?;
        } else {
            // Φ(J) together with Ξ(λ, (J_ℓ, J_r)): disjoint job parts, loads added through τ.
            let mut partial: Vec<(u32, Vec<u64>, u64, Vec<usize>)> = vec![(0, vec![0; act.len()], 0, Vec::new())];
            for &c in &sfd.children[t] {
                let child = nodes[c].as_ref().expect("children come first");
                let jmap = bit_map(&labels.nodes[c].jobs_act, jobs);
                let mpos = bit_map(&labels.nodes[c].machines_act, act);
                let mut next = Vec::new();
                for (set, load, val, back) in &partial {
                    for (k, (key, vec)) in child.tilde.keys.iter().enumerate() {
                        let part = remap(*key, &jmap).expect("kept jobs stay active at the parent");
                        if part & set != 0 {
                            continue;
                        }
                        let mut sum = load.clone();
                        transport_add(&mut sum, vec, &mpos);
                        if sum.iter().any(|&x| x > cap) {
                            continue;
                        }
                        let mut b = back.clone();
                        b.push(k);
                        next.push((set | part, sum, (*val).max(child.tilde.vals[k]), b));
                    }
                }
                partial = next;
            }
            for (set, load, val, back) in partial {
                plain.offer((set, load), val, back)?;
            }
        }

        let mut by_set: HashMap<u32, Vec<usize>> = HashMap::new();
        for (k, (set, _)) in plain.keys.iter().enumerate() {
            by_set.entry(*set).or_default().push(k);
        }
        let nia_pos = bit_map(&l.machines_nia, act);
        let full = ((1u64 << jobs.len()) - 1) as u32;
        let nia = mask_of(&l.jobs_nia, jobs);
        let mut alpha: HashMap<u32, LoadTable> = HashMap::new();
        let mut beta: HashMap<u32, LoadTable> = HashMap::new();
        let mut tilde = Table::new();
        for kept in submasks(full & !nia) {
            let routed = kept | nia;
            // Ψ(J'): A ∪ X = J' ∪ Jnia; A ∩ J' goes to Mnia, A ∩ Jnia to Mact, X to Mina.
            for a in submasks(routed) {
                let Some(xs) = by_set.get(&(routed ^ a)) else { continue };
                let (a_kept, a_nia) = (a & kept, a & nia);
                if let Entry::Vacant(e) = alpha.entry(a_kept) {
                    e.insert(LoadTable::build(inst, &members(a_kept, jobs), &l.machines_nia, Some(cap))?);
                }
                if let Entry::Vacant(e) = beta.entry(a_nia) {
                    e.insert(LoadTable::build(inst, &members(a_nia, jobs), act, Some(cap))?);
                }
                let (ta, tb) = (&alpha[&a_kept], &beta[&a_nia]);
                // τ(α) + β, deduplicated.
                let mut shifts: HashMap<Vec<u64>, (usize, usize)> = HashMap::new();
                for (ai, av) in ta.finals().iter().enumerate() {
                    for (bi, bv) in tb.finals().iter().enumerate() {
                        let mut s = bv.clone();
                        transport_add(&mut s, av, &nia_pos);
                        shifts.entry(s).or_insert((ai, bi));
                    }
                }
                let mut shifts: Vec<(Vec<u64>, (usize, usize))> = shifts.into_iter().collect();
                shifts.sort_unstable();
                for &x in xs {
                    let xi = &plain.keys[x].1;
                    for (shift, (ai, bi)) in &shifts {
                        let load: Vec<u64> = xi.iter().zip(shift).map(|(p, q)| p + q).collect();
                        let top = load.iter().copied().max().unwrap_or(0);
                        if top > cap {
                            continue;
                        }
                        let route = Route { plain: x, a, alpha: *ai, beta: *bi };
                        tilde.offer((kept, load), plain.vals[x].max(top), route)?;
                    }
                }
            }
        }
        nodes[t] = Some(Node { plain, tilde, alpha, beta });
    }

    let root = nodes[sfd.root].as_ref().expect("root solved");
    let Some(top) = root.plain.get(&(0, Vec::new())) else {
        return Err(Error::Infeasible(format!("no feasible schedule with loads within {cap}")));
    };
    let mut schedule = Schedule::new();
    let mut stack = vec![(sfd.root, top, false)];
    while let Some((t, k, is_tilde)) = stack.pop() {
        let node = nodes[t].as_ref().expect("solved");
        if is_tilde {
            let r = node.tilde.back[k];
            let kept = node.tilde.keys[k].0;
            let nia = mask_of(&labels.nodes[t].jobs_nia, &labels.nodes[t].jobs_act);
            let pairs = node.alpha[&(r.a & kept)]
                .assignment(r.alpha)
                .into_iter()
                .chain(node.beta[&(r.a & nia)].assignment(r.beta));
            for (j, i) in pairs {
                schedule.assign(j, i);
            }
            stack.push((t, r.plain, false));
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
