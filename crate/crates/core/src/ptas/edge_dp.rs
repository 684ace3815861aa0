use std::collections::{BTreeMap, HashMap, VecDeque};

use fixedbitset::FixedBitSet;

use crate::decomp::{validate_branch_decomposition, BranchDecomposition};
use crate::dp_treewidth::{Table, TABLE_BUDGET};
use crate::error::{Error, Result};
use crate::graphs::{build_graph, GraphKind};
use crate::instance::{makespan, Cost, Instance, Schedule, Solution};
use crate::ptas::two_approx;

/// The distinct processing times of a restricted-identical instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SizeCatalog {
    /// Sorted distinct sizes p(1), ..., p(d).
    pub sizes: Vec<u64>,
    /// Position of each job's size in `sizes`.
    pub index: Vec<usize>,
}

impl SizeCatalog {
    pub fn new(inst: &Instance) -> Result<Self> {
        if !inst.has_identical_rows() {
            return Err(Error::Invalid("job classes need a restricted-identical instance".into()));
        }
        let mut per_job = Vec::with_capacity(inst.n());
        for j in 0..inst.n() {
            match inst.size(j) {
                Some(p) => per_job.push(p),
                None => return Err(Error::Infeasible(format!("job `{}` has no allowed machine", inst.job_id(j)))),
            }
        }
        let mut sizes = per_job.clone();
        sizes.sort_unstable();
        sizes.dedup();
        let index = per_job.iter().map(|p| sizes.binary_search(p).expect("listed")).collect();
        Ok(SizeCatalog { sizes, index })
    }

    pub fn d(&self) -> usize {
        self.sizes.len()
    }

    /// p(λ) of a class vector flattened as `type * d + size`.
    pub fn load(&self, cls: &[u16]) -> u64 {
        cls.iter().enumerate().map(|(c, &k)| self.sizes[c % self.d()] * k as u64).sum()
    }
}

/// Connection types of the jobs on one side of a cut with respect to the machines on the
/// other side, with the per-type size vectors.
#[derive(Clone, Debug)]
pub struct TypeSide {
    /// Machine neighborhood of each type across the cut.
    pub machines: Vec<Vec<usize>>,
    pub jobs: Vec<Vec<usize>>,
    /// Size vector of each type, flattened as `type * d + size`.
    pub full: Vec<u16>,
    type_of: HashMap<usize, usize>,
}

impl TypeSide {
    pub(crate) fn new(inst: &Instance, cat: &SizeCatalog, jobs: &[usize], across: &FixedBitSet) -> Self {
        let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for &j in jobs {
            let key: Vec<usize> = inst.valid_machines(j).iter().copied().filter(|&i| across.contains(i)).collect();
            groups.entry(key).or_default().push(j);
        }
        let d = cat.d();
        let mut side = TypeSide {
            machines: Vec::new(),
            jobs: Vec::new(),
            full: vec![0; groups.len() * d],
            type_of: HashMap::new(),
        };
        for (t, (machines, members)) in groups.into_iter().enumerate() {
            for &j in &members {
                side.full[t * d + cat.index[j]] += 1;
                side.type_of.insert(j, t);
            }
            side.machines.push(machines);
            side.jobs.push(members);
        }
        side
    }

    pub fn len(&self) -> usize {
        self.machines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.machines.is_empty()
    }

    pub fn type_of(&self, job: usize) -> Option<usize> {
        self.type_of.get(&job).copied()
    }

    /// True if no job of the vector lies in a type without machines across the cut.
    fn reachable(&self, cls: &[u16], d: usize) -> bool {
        cls.iter().enumerate().all(|(c, &k)| k == 0 || !self.machines[c / d].is_empty())
    }
}

/// The translation τ as a cell map: cell `t * d + s` of `from` goes to `υ(t) * d + s` of `to`,
/// where υ(t) is the type of `to` whose machines are those of `t` inside `region`.
fn translation(from: &TypeSide, to: &TypeSide, region: &FixedBitSet, d: usize) -> Vec<usize> {
    let index: HashMap<&[usize], usize> = to.machines.iter().enumerate().map(|(t, ms)| (ms.as_slice(), t)).collect();
    let mut map = Vec::with_capacity(from.full.len());
    for ms in &from.machines {
        let key: Vec<usize> = ms.iter().copied().filter(|&i| region.contains(i)).collect();
        let t = index[key.as_slice()];
        map.extend((0..d).map(|s| t * d + s));
    }
    map
}

fn image(map: &[usize], v: &[u16], len: usize) -> Vec<u16> {
    let mut out = vec![0; len];
    for (c, &k) in v.iter().enumerate() {
        out[map[c]] += k;
    }
    out
}

fn add(a: &[u16], b: &[u16]) -> Vec<u16> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[u16], b: &[u16]) -> Vec<u16> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn fits(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// All vectors `v ≤ bound`.
pub fn sub_vectors(bound: &[u16]) -> Vec<Vec<u16>> {
    fitting(bound, &(0..bound.len()).collect::<Vec<_>>(), bound, false)
}

/// All vectors `v ≤ bound` whose image under `map` is at most `limit`, or exactly `limit`
/// when `exact` is set.
fn fitting(bound: &[u16], map: &[usize], limit: &[u16], exact: bool) -> Vec<Vec<u16>> {
    let mut last = vec![None; limit.len()];
    for (c, &t) in map.iter().enumerate() {
        last[t] = Some(c);
    }
    let mut out = Vec::new();
    if exact && limit.iter().zip(&last).any(|(&x, l)| x > 0 && l.is_none()) {
        return out;
    }
    struct Walk<'a> {
        bound: &'a [u16],
        map: &'a [usize],
        last: Vec<Option<usize>>,
        exact: bool,
        cur: Vec<u16>,
        rem: Vec<u16>,
    }
    fn rec(w: &mut Walk<'_>, c: usize, out: &mut Vec<Vec<u16>>) {
        if c == w.bound.len() {
            out.push(w.cur.clone());
            return;
        }
        let t = w.map[c];
        let hi = w.bound[c].min(w.rem[t]);
        let lo = if w.exact && w.last[t] == Some(c) { w.rem[t] } else { 0 };
        if lo > hi {
            return;
        }
        for x in lo..=hi {
            w.cur[c] = x;
            w.rem[t] -= x;
            rec(w, c + 1, out);
            w.rem[t] += x;
        }
        w.cur[c] = 0;
    }
    let mut w = Walk { bound, map, last, exact, cur: vec![0; bound.len()], rem: limit.to_vec() };
    rec(&mut w, 0, &mut out);
    out
}

/// How an internal entry was obtained: the child entries, the parts of each child's upward
/// jobs that continue upward, and the part of the downward jobs sent left.
#[derive(Clone, Debug)]
struct Split {
    left: usize,
    right: usize,
    left_up: Vec<u16>,
    right_up: Vec<u16>,
    down_left: Vec<u16>,
}

/// Class-vector pair (ι̂, ι̌): jobs leaving the lower side, jobs arriving from the upper side.
type Key = (Vec<u16>, Vec<u16>);

struct EdgeTable {
    /// Jobs below with respect to the machines above.
    up: TypeSide,
    /// Jobs above with respect to the machines below.
    down: TypeSide,
    table: Table<Key, Option<Split>>,
}

/// Per-edge tables of the job-class program over a branch decomposition of the incidence
/// graph, rooted at the edge leaving the leaf of one job.
pub struct EdgeDp<'a> {
    inst: &'a Instance,
    catalog: SizeCatalog,
    root_job: usize,
    /// Lower node of the root edge, the neighbor of the root job's leaf.
    root_node: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    /// Non-top nodes, children before parents.
    order: Vec<usize>,
    at: Vec<Option<usize>>,
    edges: Vec<Option<EdgeTable>>,
}

impl<'a> EdgeDp<'a> {
    /// Fills all tables. With a `cap`, entries whose value exceeds it and entries routing jobs
    /// toward sides without allowed machines are dropped.
    pub fn build(inst: &'a Instance, bd: &BranchDecomposition, root_job: usize, cap: Option<u64>) -> Result<Self> {
        if root_job >= inst.n() {
            return Err(Error::Invalid("the root edge needs a job leaf".into()));
        }
        let catalog = SizeCatalog::new(inst)?;
        let g = build_graph(inst, GraphKind::Incidence);
        validate_branch_decomposition(&g.graph, bd)
            .map_err(|v| Error::Invalid(format!("not a branch decomposition of the incidence graph: {v}")))?;
        let n = inst.n();
        let nodes = bd.node_count();
        let at = bd.vertex_at();
        let top = bd.leaf_of[root_job];
        let mut parent = vec![None; nodes];
        let mut children = vec![Vec::new(); nodes];
        let mut bfs = Vec::with_capacity(nodes);
        let mut queue = VecDeque::from([top]);
        let mut seen = vec![false; nodes];
        seen[top] = true;
        while let Some(u) = queue.pop_front() {
            bfs.push(u);
            for &w in &bd.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    children[u].push(w);
                    queue.push_back(w);
                }
            }
        }
        let order: Vec<usize> = bfs.iter().rev().copied().filter(|&v| v != top).collect();

        let mut below_jobs = vec![FixedBitSet::with_capacity(n); nodes];
        let mut below_machines = vec![FixedBitSet::with_capacity(inst.m()); nodes];
        for &v in &order {
            if let Some(x) = at[v] {
                if x < n {
                    below_jobs[v].insert(x);
                } else {
                    below_machines[v].insert(x - n);
                }
            }
            for &c in &children[v] {
                let (j, m) = (below_jobs[c].clone(), below_machines[c].clone());
                below_jobs[v].union_with(&j);
                below_machines[v].union_with(&m);
            }
        }
        let complement = |s: &FixedBitSet, len: usize| {
            let mut c = FixedBitSet::with_capacity(len);
            c.insert_range(..);
            c.difference_with(s);
            c
        };

        let d = catalog.d();
        let mut edges: Vec<Option<EdgeTable>> = (0..nodes).map(|_| None).collect();
        for &v in &order {
            let above_machines = complement(&below_machines[v], inst.m());
            let jobs_below: Vec<usize> = below_jobs[v].ones().collect();
            let jobs_above: Vec<usize> = complement(&below_jobs[v], n).ones().collect();
            let up = TypeSide::new(inst, &catalog, &jobs_below, &above_machines);
            let down = TypeSide::new(inst, &catalog, &jobs_above, &below_machines[v]);
            let keep = |key: &Key, val: u64| {
                cap.is_none_or(|c| val <= c && up.reachable(&key.0, d) && down.reachable(&key.1, d))
            };
            let mut table = Table::new();
            match at[v] {
                Some(j) if j < n => {
                    let key = (up.full.clone(), vec![0; down.full.len()]);
                    if keep(&key, 0) {
                        table.offer(key, 0, None)?;
                    }
                }
                Some(x) => {
                    let i = x - n;
                    for arriving in sub_vectors(&down.full) {
                        let allowed =
                            arriving.iter().enumerate().all(|(c, &k)| k == 0 || down.machines[c / d].contains(&i));
                        if !allowed {
                            continue;
                        }
                        let val = catalog.load(&arriving);
                        let key = (Vec::new(), arriving);
                        if keep(&key, val) {
                            table.offer(key, val, None)?;
                        }
                    }
                }
                None => {
                    let (l, r) = (children[v][0], children[v][1]);
                    let (le, re) = (edges[l].as_ref().expect("child first"), edges[r].as_ref().expect("child first"));
                    let maps = Maps {
                        left_to_up: translation(&le.up, &up, &above_machines, d),
                        right_to_up: translation(&re.up, &up, &above_machines, d),
                        down_to_left: translation(&down, &le.down, &below_machines[l], d),
                        right_to_left: translation(&re.up, &le.down, &below_machines[l], d),
                        down_to_right: translation(&down, &re.down, &below_machines[r], d),
                        left_to_right: translation(&le.up, &re.down, &below_machines[r], d),
                    };
                    combine(le, re, &up, &down, &maps, d, cap.is_some(), &mut |key, val, split| {
                        if keep(&key, val) {
                            table.offer(key, val, Some(split))?;
                        }
                        Ok(())
                    })?;
                }
            }
            edges[v] = Some(EdgeTable { up, down, table });
        }
        let root_node = children[top][0];
        Ok(EdgeDp { inst, catalog, root_job, root_node, parent, children, order, at, edges })
    }

    pub fn catalog(&self) -> &SizeCatalog {
        &self.catalog
    }

    /// Number of entries in the table of the edge above `node`.
    pub fn table_len(&self, node: usize) -> usize {
        self.edges[node].as_ref().map_or(0, |e| e.table.keys.len())
    }

    /// Upper node of the edge above `node`.
    pub fn parent(&self, node: usize) -> Option<usize> {
        self.parent[node]
    }

    /// Type sides (jobs leaving, jobs arriving) of the edge above `node`.
    pub fn sides(&self, node: usize) -> Option<(&TypeSide, &TypeSide)> {
        self.edges[node].as_ref().map(|e| (&e.up, &e.down))
    }

    /// OPT(e, ι̂, ι̌) for the edge above `node`; dropped or impossible entries are infinite.
    pub fn value(&self, node: usize, up: &[u16], down: &[u16]) -> Cost {
        let Some(e) = self.edges[node].as_ref() else { return Cost::Infinite };
        match e.table.get(&(up.to_vec(), down.to_vec())) {
            Some(k) => Cost::Finite(e.table.vals[k]),
            None => Cost::Infinite,
        }
    }

    /// Optimum and schedule read off the root edge.
    pub fn solve(&self) -> Result<Solution> {
        let root = self.edges[self.root_node].as_ref().expect("root edge filled");
        let key = (vec![0; root.up.full.len()], root.down.full.clone());
        let Some(top_entry) = root.table.get(&key) else {
            return Err(Error::Infeasible("no schedule within the load bound".into()));
        };
        let nodes = self.parent.len();
        let d = self.catalog.d();
        let split = |v: usize, k: usize| -> &Split {
            self.edges[v].as_ref().expect("filled").table.back[k].as_ref().expect("internal entry")
        };

        let mut chosen = vec![usize::MAX; nodes];
        chosen[self.root_node] = top_entry;
        for &v in self.order.iter().rev() {
            if self.at[v].is_none() {
                let s = split(v, chosen[v]);
                chosen[self.children[v][0]] = s.left;
                chosen[self.children[v][1]] = s.right;
            }
        }

        let mut leaving: Vec<Vec<usize>> = vec![Vec::new(); nodes];
        let mut sideways: Vec<Vec<usize>> = vec![Vec::new(); nodes];
        for &v in &self.order {
            match self.at[v] {
                Some(j) if j < self.inst.n() => leaving[v] = vec![j],
                Some(_) => {}
                None => {
                    let s = split(v, chosen[v]);
                    let mut up_jobs = Vec::new();
                    for (c, want) in [(self.children[v][0], &s.left_up), (self.children[v][1], &s.right_up)] {
                        let side = &self.edges[c].as_ref().expect("filled").up;
                        let (go, rest) = self.pick(side, &leaving[c], want, d);
                        up_jobs.extend(go);
                        sideways[c] = rest;
                    }
                    up_jobs.sort_unstable();
                    leaving[v] = up_jobs;
                }
            }
        }

        let mut arriving: Vec<Vec<usize>> = vec![Vec::new(); nodes];
        arriving[self.root_node] = vec![self.root_job];
        let mut schedule = Schedule::new();
        for &v in self.order.iter().rev() {
            match self.at[v] {
                Some(x) if x >= self.inst.n() => {
                    for &j in &arriving[v] {
                        schedule.assign(j, x - self.inst.n());
                    }
                }
                Some(_) => debug_assert!(arriving[v].is_empty()),
                None => {
                    let s = split(v, chosen[v]);
                    let side = &self.edges[v].as_ref().expect("filled").down;
                    let (l, r) = (self.children[v][0], self.children[v][1]);
                    let (mut to_l, mut to_r) = self.pick(side, &arriving[v], &s.down_left, d);
                    to_l.extend(&sideways[r]);
                    to_r.extend(&sideways[l]);
                    to_l.sort_unstable();
                    to_r.sort_unstable();
                    arriving[l] = to_l;
                    arriving[r] = to_r;
                }
            }
        }
        let value = makespan(self.inst, &schedule)?;
        debug_assert_eq!(value, root.table.vals[top_entry]);
        Ok(Solution { value, schedule })
    }

    /// Splits concrete jobs into a part of class `want` and the rest.
    fn pick(&self, side: &TypeSide, jobs: &[usize], want: &[u16], d: usize) -> (Vec<usize>, Vec<usize>) {
        let mut want = want.to_vec();
        let (mut take, mut rest) = (Vec::new(), Vec::new());
        for &j in jobs {
            let cell = side.type_of(j).expect("job on this side") * d + self.catalog.index[j];
            if want[cell] > 0 {
                want[cell] -= 1;
                take.push(j);
            } else {
                rest.push(j);
            }
        }
        debug_assert!(want.iter().all(|&k| k == 0));
        (take, rest)
    }
}

struct Maps {
    left_to_up: Vec<usize>,
    right_to_up: Vec<usize>,
    down_to_left: Vec<usize>,
    right_to_left: Vec<usize>,
    down_to_right: Vec<usize>,
    left_to_right: Vec<usize>,
}

/// Best value, child entry and the child's upward-continuing vector per half-key.
type Half = BTreeMap<Key, (u64, usize, Vec<u16>)>;

/// Combines the child tables of an internal node. Each child entry is expanded into halves
/// keyed by the jobs crossing between the two children; halves with equal crossings join.
#[allow(clippy::too_many_arguments)]
fn combine(
    le: &EdgeTable,
    re: &EdgeTable,
    up: &TypeSide,
    down: &TypeSide,
    maps: &Maps,
    d: usize,
    prune: bool,
    emit: &mut dyn FnMut(Key, u64, Split) -> Result<()>,
) -> Result<()> {
    let mut budget = TABLE_BUDGET;
    let spend = |budget: &mut usize| -> Result<()> {
        *budget = budget
            .checked_sub(1)
            .ok_or_else(|| Error::Resource(format!("an edge table expansion exceeds {TABLE_BUDGET} entries")))?;
        Ok(())
    };
    let offer = |half: &mut BTreeMap<Key, Half>, cross: Key, own: Key, val: u64, k: usize, kept: Vec<u16>| {
        let slot = half.entry(cross).or_default();
        match slot.get(&own) {
            Some(&(old, _, _)) if old <= val => {}
            _ => {
                slot.insert(own, (val, k, kept));
            }
        }
    };

    // Left halves keyed by (λ̂_r, ρ̂_ℓ): left jobs sent right, right jobs sent left.
    let mut left: BTreeMap<Key, Half> = BTreeMap::new();
    for (k, (lh, lc)) in le.table.keys.iter().enumerate() {
        let val = le.table.vals[k];
        for keep_up in sub_vectors(lh) {
            let to_up = image(&maps.left_to_up, &keep_up, up.full.len());
            let to_right = sub(lh, &keep_up);
            if prune
                && (!up.reachable(&to_up, d)
                    || !re.down.reachable(&image(&maps.left_to_right, &to_right, re.down.full.len()), d))
            {
                continue;
            }
            for from_right in fitting(&re.up.full, &maps.right_to_left, lc, false) {
                let rest = sub(lc, &image(&maps.right_to_left, &from_right, le.down.full.len()));
                for down_left in fitting(&down.full, &maps.down_to_left, &rest, true) {
                    spend(&mut budget)?;
                    let cross = (to_right.clone(), from_right.clone());
                    offer(&mut left, cross, (to_up.clone(), down_left), val, k, keep_up.clone());
                }
            }
        }
    }
    let mut right: BTreeMap<Key, Half> = BTreeMap::new();
    for (k, (rh, rc)) in re.table.keys.iter().enumerate() {
        let val = re.table.vals[k];
        for keep_up in sub_vectors(rh) {
            let to_left = sub(rh, &keep_up);
            let cross_key_part = to_left;
            let to_up = image(&maps.right_to_up, &keep_up, up.full.len());
            if prune && !up.reachable(&to_up, d) {
                continue;
            }
            for from_left in fitting(&le.up.full, &maps.left_to_right, rc, false) {
                let rest = sub(rc, &image(&maps.left_to_right, &from_left, re.down.full.len()));
                for down_right in fitting(&down.full, &maps.down_to_right, &rest, true) {
                    spend(&mut budget)?;
                    let cross = (from_left.clone(), cross_key_part.clone());
                    offer(&mut right, cross, (to_up.clone(), down_right), val, k, keep_up.clone());
                }
            }
        }
    }

    for (cross, lhalf) in &left {
        let Some(rhalf) = right.get(cross) else { continue };
        for ((lu, ld), (lv, lk, lkeep)) in lhalf {
            for ((ru, rd), (rv, rk, rkeep)) in rhalf {
                let arriving = add(ld, rd);
                if !fits(&arriving, &down.full) {
                    continue;
                }
                let split = Split {
                    left: *lk,
                    right: *rk,
                    left_up: lkeep.clone(),
                    right_up: rkeep.clone(),
                    down_left: ld.clone(),
                };
                emit((add(lu, ru), arriving), (*lv).max(*rv), split)?;
            }
        }
    }
    Ok(())
}

/// Exact optimum of a restricted-identical instance by the job-class program over a branch
/// decomposition of its incidence graph.
pub fn solve_edge_dp(inst: &Instance, bd: &BranchDecomposition) -> Result<Solution> {
    if let Some(&j) = inst.stranded_jobs().first() {
        return Err(Error::Infeasible(format!("job `{}` has no allowed machine", inst.job_id(j))));
    }
    if inst.n() == 0 {
        return Ok(Solution { value: 0, schedule: Schedule::new() });
    }
    let cap = two_approx(inst)?.value;
    EdgeDp::build(inst, bd, 0, Some(cap))?.solve()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn enumeration() {
        assert_eq!(sub_vectors(&[1, 2]).len(), 6);
        assert_eq!(sub_vectors(&[]).len(), 1);
        // Cells 0 and 1 both map to target 0; exactly 2 in total.
        let v = fitting(&[2, 1], &[0, 0], &[2], true);
        assert_eq!(v, vec![vec![1, 1], vec![2, 0]]);
        let v = fitting(&[2, 1], &[0, 0], &[1], false);
        assert_eq!(v.len(), 3);
        assert!(fitting(&[1], &[0], &[0, 1], true).is_empty());
    }

    #[test]
    fn single_pair() {
        let inst = Instance::restricted(&[5], &[vec![0]], 1).unwrap();
        let bd = BranchDecomposition::caterpillar(&[0, 1]);
        assert_eq!(solve_edge_dp(&inst, &bd).unwrap().value, 5);
    }

    #[test]
    fn machine_leaf_value() {
        let inst = Instance::restricted(&[5, 3], &[vec![0], vec![1]], 2).unwrap();
        let bd = BranchDecomposition::caterpillar(&[0, 1, 2, 3]);
        let dp = EdgeDp::build(&inst, &bd, 0, None).unwrap();
        let leaf = bd.leaf_of[2];
        let (_, down) = dp.sides(leaf).unwrap();
        let t = (0..down.len()).find(|&t| down.machines[t] == vec![0]).unwrap();
        let mut arriving = vec![0; down.full.len()];
        arriving[t * dp.catalog().d() + dp.catalog().index[0]] = 1;
        assert_eq!(dp.value(leaf, &[], &arriving), Cost::Finite(5));
        assert_eq!(dp.value(leaf, &[], &vec![0; down.full.len()]), Cost::Finite(0));
    }

    #[test]
    fn caterpillars_match_oracle() {
        use crate::harness::{brute_force, generate, GeneratorSpec, InstanceClass};
        for class in [InstanceClass::RandomRestricted, InstanceClass::Nested, InstanceClass::GraphBalancing] {
            for seed in 0..12 {
                let spec = GeneratorSpec {
                    p_max: 3,
                    ..GeneratorSpec::new(class, 1 + seed as usize % 5, 1 + seed as usize % 3, seed)
                };
                let inst = generate(&spec).unwrap();
                let order: Vec<usize> = (0..inst.n() + inst.m()).rev().collect();
                let bd = BranchDecomposition::caterpillar(&order);
                let opt = brute_force(&inst.full()).unwrap().value;
                let sol = solve_edge_dp(&inst, &bd).unwrap();
                assert_eq!(sol.value, opt, "{class} seed {seed}");
                assert_eq!(makespan(&inst, &sol.schedule).unwrap(), opt);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn translations_are_additive_and_consistent(seed in 0u64..10_000, n in 1usize..=6, m in 1usize..=3, shift in 0usize..9) {
            use crate::harness::{generate, GeneratorSpec, InstanceClass};
            let Ok(inst) = generate(&GeneratorSpec::new(InstanceClass::RandomRestricted, n, m, seed)) else { return Ok(()) };
            let len = inst.n() + inst.m();
            let order: Vec<usize> = (0..len).map(|k| (k + shift) % len).collect();
            let bd = BranchDecomposition::caterpillar(&order);
            let dp = EdgeDp::build(&inst, &bd, 0, None).unwrap();
            let d = dp.catalog.d();
            for &v in &dp.order {
                if dp.children[v].len() != 2 {
                    continue;
                }
                let (l, r) = (dp.children[v][0], dp.children[v][1]);
                let (e, le, re) = (dp.edges[v].as_ref().unwrap(), dp.edges[l].as_ref().unwrap(), dp.edges[r].as_ref().unwrap());
                let mut above = FixedBitSet::with_capacity(inst.m());
                above.insert_range(..);
                let mut below_l = FixedBitSet::with_capacity(inst.m());
                let mut below_r = FixedBitSet::with_capacity(inst.m());
                for x in 0..inst.m() {
                    let leaf = bd.leaf_of[inst.n() + x];
                    let mut u = leaf;
                    while let Some(p) = dp.parent[u] {
                        if u == l {
                            below_l.insert(x);
                        }
                        if u == r {
                            below_r.insert(x);
                        }
                        if u == v {
                            above.set(x, false);
                        }
                        u = p;
                    }
                }
                let pairs = [
                    (&le.up, &e.up, &above),
                    (&re.up, &e.up, &above),
                    (&e.down, &le.down, &below_l),
                    (&re.up, &le.down, &below_l),
                    (&e.down, &re.down, &below_r),
                    (&le.up, &re.down, &below_r),
                ];
                for (from, to, area) in pairs {
                    let map = translation(from, to, area, d);
                    for (t, jobs) in from.jobs.iter().enumerate() {
                        for &j in jobs {
                            let c = dp.catalog.index[j];
                            prop_assert_eq!(map[t * d + c], to.type_of(j).unwrap() * d + c);
                        }
                    }
                    let parts = sub_vectors(&from.full);
                    let a = &parts[seed as usize % parts.len()];
                    let b = sub(&from.full, a);
                    prop_assert_eq!(image(&map, &from.full, to.full.len()), add(&image(&map, a, to.full.len()), &image(&map, &b, to.full.len())));
                }
                let up_l = image(&translation(&le.up, &e.up, &above, d), &le.up.full, e.up.full.len());
                let up_r = image(&translation(&re.up, &e.up, &above, d), &re.up.full, e.up.full.len());
                prop_assert_eq!(add(&up_l, &up_r), e.up.full.clone());
                let into_l = image(&translation(&e.down, &le.down, &below_l, d), &e.down.full, le.down.full.len());
                let from_r = image(&translation(&re.up, &le.down, &below_l, d), &re.up.full, le.down.full.len());
                prop_assert_eq!(add(&into_l, &from_r), le.down.full.clone());
            }
        }
    }
}
