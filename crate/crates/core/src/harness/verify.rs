use std::collections::BTreeSet;

use serde::Serialize;

use super::generate::InstanceClass;
use crate::instance::Instance;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum ClassVerdict {
    Pass,
    Fail { reason: String, witness_jobs: Vec<usize> },
}

impl ClassVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, ClassVerdict::Pass)
    }
}

fn fail(reason: impl Into<String>, witness_jobs: Vec<usize>) -> ClassVerdict {
    ClassVerdict::Fail { reason: reason.into(), witness_jobs }
}

/// Bitmask of M(j); instances checked here have at most 128 machines.
fn mask(inst: &Instance, j: usize) -> u128 {
    inst.valid_machines(j).iter().fold(0, |acc, &i| acc | (1 << i))
}

fn subset(a: u128, b: u128) -> bool {
    a & !b == 0
}

/// Re-checks the restriction structure of an instance against a class definition.
pub fn verify_class(inst: &Instance, class: InstanceClass) -> ClassVerdict {
    if class == InstanceClass::RandomUnrelated {
        return ClassVerdict::Pass;
    }
    if inst.m() > 128 {
        return fail("class checks support at most 128 machines", Vec::new());
    }
    if let Some(j) = (0..inst.n()).find(|&j| {
        let mut ps = inst.valid_machines(j).iter().filter_map(|&i| inst.p(i, j));
        let first = ps.next();
        ps.any(|p| Some(p) != first)
    }) {
        return fail("job has different times on its machines", vec![j]);
    }
    let sets: Vec<u128> = (0..inst.n()).map(|j| mask(inst, j)).collect();
    let pairs = || (0..sets.len()).flat_map(|a| (a + 1..sets.len()).map(move |b| (a, b)));
    match class {
        InstanceClass::RandomUnrelated | InstanceClass::RandomRestricted => ClassVerdict::Pass,
        InstanceClass::PathHierarchical => {
            match pairs().find(|&(a, b)| !subset(sets[a], sets[b]) && !subset(sets[b], sets[a])) {
                Some((a, b)) => fail("machine sets are not a chain under inclusion", vec![a, b]),
                None => ClassVerdict::Pass,
            }
        }
        InstanceClass::Nested => {
            match pairs()
                .find(|&(a, b)| sets[a] & sets[b] != 0 && !subset(sets[a], sets[b]) && !subset(sets[b], sets[a]))
            {
                Some((a, b)) => fail("machine sets overlap without nesting", vec![a, b]),
                None => ClassVerdict::Pass,
            }
        }
        InstanceClass::TreeHierarchical => tree_hierarchical(&sets),
        InstanceClass::GraphBalancing => match (0..sets.len()).find(|&j| sets[j].count_ones() > 2) {
            Some(j) => fail("job has more than two machines", vec![j]),
            None => ClassVerdict::Pass,
        },
        InstanceClass::GraphBalancingSimple => {
            if let Some(j) = (0..sets.len()).find(|&j| sets[j].count_ones() != 2) {
                return fail("job does not have exactly two machines", vec![j]);
            }
            match pairs().find(|&(a, b)| sets[a] == sets[b]) {
                Some((a, b)) => fail("two jobs share the same machine pair", vec![a, b]),
                None => ClassVerdict::Pass,
            }
        }
    }
}

/// Root-anchored paths of some machine tree: all sets share a machine, and within the
/// intersection closure the members below any set form a chain.
fn tree_hierarchical(sets: &[u128]) -> ClassVerdict {
    let nonempty: Vec<usize> = (0..sets.len()).filter(|&j| sets[j] != 0).collect();
    if nonempty.is_empty() {
        return ClassVerdict::Pass;
    }
    let common = nonempty.iter().fold(u128::MAX, |acc, &j| acc & sets[j]);
    if common == 0 {
        return fail("machine sets have no common machine", nonempty);
    }
    let mut closure: BTreeSet<u128> = nonempty.iter().map(|&j| sets[j]).collect();
    loop {
        let items: Vec<u128> = closure.iter().copied().collect();
        let before = closure.len();
        for (k, &a) in items.iter().enumerate() {
            for &b in &items[k + 1..] {
                closure.insert(a & b);
            }
        }
        if closure.len() == before {
            break;
        }
    }
    for &p in &closure {
        let below: Vec<u128> = closure.iter().copied().filter(|&s| subset(s, p)).collect();
        for (k, &a) in below.iter().enumerate() {
            for &b in &below[k + 1..] {
                if !subset(a, b) && !subset(b, a) {
                    let witness = nonempty
                        .iter()
                        .copied()
                        .filter(|&j| subset(sets[j] & p, p) && (sets[j] == p || sets[j] & (a | b) != 0))
                        .take(2)
                        .collect();
                    return fail("machine sets do not form root paths of a tree", witness);
                }
            }
        }
    }
    ClassVerdict::Pass
}
