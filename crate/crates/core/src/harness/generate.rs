use std::fmt;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::Instance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceClass {
    RandomUnrelated,
    RandomRestricted,
    PathHierarchical,
    TreeHierarchical,
    Nested,
    GraphBalancing,
    GraphBalancingSimple,
}

impl InstanceClass {
    pub const ALL: [InstanceClass; 7] = [
        InstanceClass::RandomUnrelated,
        InstanceClass::RandomRestricted,
        InstanceClass::PathHierarchical,
        InstanceClass::TreeHierarchical,
        InstanceClass::Nested,
        InstanceClass::GraphBalancing,
        InstanceClass::GraphBalancingSimple,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InstanceClass::RandomUnrelated => "random_unrelated",
            InstanceClass::RandomRestricted => "random_restricted",
            InstanceClass::PathHierarchical => "path_hierarchical",
            InstanceClass::TreeHierarchical => "tree_hierarchical",
            InstanceClass::Nested => "nested",
            InstanceClass::GraphBalancing => "graph_balancing",
            InstanceClass::GraphBalancingSimple => "graph_balancing_simple",
        }
    }

    /// Classes whose incidence graphs are bi-cographs.
    pub fn is_hierarchical(self) -> bool {
        matches!(self, InstanceClass::PathHierarchical | InstanceClass::TreeHierarchical | InstanceClass::Nested)
    }
}

impl fmt::Display for InstanceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InstanceClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.replace('-', "_");
        InstanceClass::ALL
            .into_iter()
            .find(|c| c.name() == key)
            .ok_or_else(|| Error::Invalid(format!("unknown instance class `{s}`")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneratorSpec {
    pub class: InstanceClass,
    pub n: usize,
    pub m: usize,
    pub p_min: u64,
    pub p_max: u64,
    pub seed: u64,
    /// Probability that a job may use a given machine, where the class leaves room for it.
    pub density: f64,
}

impl GeneratorSpec {
    pub fn new(class: InstanceClass, n: usize, m: usize, seed: u64) -> Self {
        GeneratorSpec { class, n, m, p_min: 1, p_max: 10, seed, density: 0.5 }
    }
}

/// Seeded source: ChaCha8 seeded from a `u64`; bounded draws use the high half of a 64×64
/// multiplication, so streams are reproducible independently of library sampling code.
pub struct SeededRng(ChaCha8Rng);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform in `0..n` (`n > 0`).
    pub fn below(&mut self, n: u64) -> u64 {
        ((self.0.next_u64() as u128 * n as u128) >> 64) as u64
    }

    pub fn range(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.below(hi - lo + 1)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        (self.below(1 << 53) as f64) < p * (1u64 << 53) as f64
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for k in (1..items.len()).rev() {
            let r = self.below(k as u64 + 1) as usize;
            items.swap(k, r);
        }
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<Instance> {
    let (n, m) = (spec.n, spec.m);
    if spec.p_min == 0 || spec.p_min > spec.p_max {
        return Err(Error::Invalid("size range must satisfy 1 <= p_min <= p_max".into()));
    }
    if !(0.0..=1.0).contains(&spec.density) {
        return Err(Error::Invalid("density must lie in [0, 1]".into()));
    }
    if n > 0 && m == 0 {
        return Err(Error::Invalid("jobs need at least one machine".into()));
    }
    let mut rng = SeededRng::new(spec.seed);
    let size = |rng: &mut SeededRng| rng.range(spec.p_min, spec.p_max);

    if spec.class == InstanceClass::RandomUnrelated {
        let mut proc = vec![vec![None; n]; m];
        for j in 0..n {
            let mut any = false;
            for row in proc.iter_mut() {
                let p = size(&mut rng);
                if rng.chance(spec.density) {
                    row[j] = Some(p);
                    any = true;
                }
            }
            if !any {
                let i = rng.below(m as u64) as usize;
                proc[i][j] = Some(size(&mut rng));
            }
        }
        return Instance::unrelated(proc, n);
    }

    let allowed: Vec<Vec<usize>> = match spec.class {
        InstanceClass::RandomUnrelated => unreachable!(),
        InstanceClass::RandomRestricted => (0..n)
            .map(|_| {
                let mut set: Vec<usize> = (0..m).filter(|_| rng.chance(spec.density)).collect();
                if set.is_empty() {
                    set.push(rng.below(m as u64) as usize);
                }
                set
            })
            .collect(),
        InstanceClass::PathHierarchical => (0..n).map(|_| (0..=rng.below(m as u64) as usize).collect()).collect(),
        InstanceClass::TreeHierarchical => {
            let parent: Vec<usize> = (0..m).map(|i| if i == 0 { 0 } else { rng.below(i as u64) as usize }).collect();
            (0..n)
                .map(|_| {
                    let mut v = rng.below(m as u64) as usize;
                    let mut path = vec![v];
                    while v != 0 {
                        v = parent[v];
                        path.push(v);
                    }
                    path.sort_unstable();
                    path
                })
                .collect()
        }
        InstanceClass::Nested => {
            let family = laminar_intervals(&mut rng, m);
            (0..n).map(|_| family[rng.below(family.len() as u64) as usize].clone()).collect()
        }
        InstanceClass::GraphBalancing => (0..n)
            .map(|_| {
                let a = rng.below(m as u64) as usize;
                if m > 1 && rng.chance(spec.density) {
                    let b = (a + 1 + rng.below(m as u64 - 1) as usize) % m;
                    let mut s = vec![a, b];
                    s.sort_unstable();
                    s
                } else {
                    vec![a]
                }
            })
            .collect(),
        InstanceClass::GraphBalancingSimple => {
            let mut pairs: Vec<Vec<usize>> = (0..m).flat_map(|a| (a + 1..m).map(move |b| vec![a, b])).collect();
            if n > pairs.len() {
                return Err(Error::Invalid(format!(
                    "{n} jobs need distinct machine pairs but only {} exist",
                    pairs.len()
                )));
            }
            rng.shuffle(&mut pairs);
            pairs.truncate(n);
            pairs
        }
    };
    let sizes: Vec<u64> = (0..n).map(|_| size(&mut rng)).collect();
    Instance::restricted(&sizes, &allowed, m)
}

/// Nodes of a random recursive split of `0..m` into intervals.
fn laminar_intervals(rng: &mut SeededRng, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack = vec![(0, m)];
    while let Some((l, r)) = stack.pop() {
        out.push((l..r).collect());
        if r - l >= 2 {
            let cut = l + 1 + rng.below((r - l - 1) as u64) as usize;
            stack.push((l, cut));
            stack.push((cut, r));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        for class in InstanceClass::ALL {
            let spec = GeneratorSpec::new(class, 3, 3, 7);
            assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap(), "{class}");
        }
    }

    #[test]
    fn path_prefixes() {
        let inst = generate(&GeneratorSpec::new(InstanceClass::PathHierarchical, 6, 4, 1)).unwrap();
        for j in 0..6 {
            let ms = inst.valid_machines(j);
            assert_eq!(ms, (0..ms.len()).collect::<Vec<_>>().as_slice());
        }
    }

    #[test]
    fn simple_balancing_needs_enough_pairs() {
        assert!(generate(&GeneratorSpec::new(InstanceClass::GraphBalancingSimple, 4, 3, 1)).is_err());
        let inst = generate(&GeneratorSpec::new(InstanceClass::GraphBalancingSimple, 3, 3, 1)).unwrap();
        assert!((0..3).all(|j| inst.valid_machines(j).len() == 2));
    }

    #[test]
    fn class_names_roundtrip() {
        for class in InstanceClass::ALL {
            assert_eq!(class.name().parse::<InstanceClass>().unwrap(), class);
        }
        assert!("tree-hierarchical".parse::<InstanceClass>().is_ok());
    }

    #[test]
    fn below_stays_in_range() {
        let mut rng = SeededRng::new(3);
        assert!((0..1000).all(|_| rng.below(7) < 7));
    }
}
