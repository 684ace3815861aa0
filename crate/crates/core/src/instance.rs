use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Objective value with a distinct top element for "no schedule exists".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cost {
    Finite(u64),
    Infinite,
}

impl Cost {
    pub fn finite(self) -> Option<u64> {
        match self {
            Cost::Finite(v) => Some(v),
            Cost::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Cost::Finite(_))
    }
}

impl Ord for Cost {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Cost::Finite(a), Cost::Finite(b)) => a.cmp(b),
            (Cost::Finite(_), Cost::Infinite) => Ordering::Less,
            (Cost::Infinite, Cost::Finite(_)) => Ordering::Greater,
            (Cost::Infinite, Cost::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Cost {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Finite(v) => write!(f, "{v}"),
            Cost::Infinite => write!(f, "inf"),
        }
    }
}

/// A scheduling instance. Processing times are stored machine-major; `None` marks a forbidden pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    job_ids: Vec<String>,
    machine_ids: Vec<String>,
    proc: Vec<Vec<Option<u64>>>,
    identical: bool,
    scale: u64,
    machines_of: Vec<Vec<usize>>,
    jobs_of: Vec<Vec<usize>>,
}

impl Instance {
    /// `proc[i][j]` is the time of job `j` on machine `i`.
    pub fn new(
        job_ids: Vec<String>,
        machine_ids: Vec<String>,
        proc: Vec<Vec<Option<u64>>>,
        identical: bool,
    ) -> Result<Self> {
        check_unique("job", &job_ids)?;
        check_unique("machine", &machine_ids)?;
        if proc.len() != machine_ids.len() || proc.iter().any(|r| r.len() != job_ids.len()) {
            return Err(Error::Invalid("processing time matrix has the wrong shape".into()));
        }
        for (i, row) in proc.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                if *p == Some(0) {
                    return Err(Error::NonPositive { job: job_ids[j].clone(), machine: machine_ids[i].clone() });
                }
            }
        }
        let n = job_ids.len();
        let m = machine_ids.len();
        let machines_of: Vec<Vec<usize>> = (0..n).map(|j| (0..m).filter(|&i| proc[i][j].is_some()).collect()).collect();
        let jobs_of: Vec<Vec<usize>> = (0..m).map(|i| (0..n).filter(|&j| proc[i][j].is_some()).collect()).collect();
        let inst = Instance { job_ids, machine_ids, proc, identical, scale: 1, machines_of, jobs_of };
        if identical && !inst.has_identical_rows() {
            return Err(Error::Invalid("instance is marked identical but some job has differing finite times".into()));
        }
        Ok(inst)
    }

    /// Restricted-identical instance with generated ids `j00.., m00..`.
    pub fn restricted(sizes: &[u64], allowed: &[Vec<usize>], m: usize) -> Result<Self> {
        if sizes.len() != allowed.len() {
            return Err(Error::Invalid("sizes and allowed sets differ in length".into()));
        }
        let mut proc = vec![vec![None; sizes.len()]; m];
        for (j, set) in allowed.iter().enumerate() {
            for &i in set {
                if i >= m {
                    return Err(Error::Invalid(format!("machine index {i} out of range")));
                }
                proc[i][j] = Some(sizes[j]);
            }
        }
        Instance::new(default_ids('j', sizes.len()), default_ids('m', m), proc, true)
    }

    /// Unrelated instance with generated ids from a machine-major matrix.
    pub fn unrelated(proc: Vec<Vec<Option<u64>>>, n: usize) -> Result<Self> {
        let m = proc.len();
        Instance::new(default_ids('j', n), default_ids('m', m), proc, false)
    }

    pub fn n(&self) -> usize {
        self.job_ids.len()
    }

    pub fn m(&self) -> usize {
        self.machine_ids.len()
    }

    pub fn p(&self, i: usize, j: usize) -> Option<u64> {
        self.proc[i][j]
    }

    pub fn job_id(&self, j: usize) -> &str {
        &self.job_ids[j]
    }

    pub fn machine_id(&self, i: usize) -> &str {
        &self.machine_ids[i]
    }

    pub fn job_ids(&self) -> &[String] {
        &self.job_ids
    }

    pub fn machine_ids(&self) -> &[String] {
        &self.machine_ids
    }

    pub fn job_index(&self, id: &str) -> Result<usize> {
        self.job_ids.iter().position(|x| x == id).ok_or_else(|| Error::UnknownId { kind: "job", id: id.to_string() })
    }

    pub fn machine_index(&self, id: &str) -> Result<usize> {
        self.machine_ids
            .iter()
            .position(|x| x == id)
            .ok_or_else(|| Error::UnknownId { kind: "machine", id: id.to_string() })
    }

    /// The flag as declared in the input.
    pub fn identical_flag(&self) -> bool {
        self.identical
    }

    /// Factor by which decimal inputs were multiplied on load.
    pub fn scale(&self) -> u64 {
        self.scale
    }

    /// True if every job has the same time on all of its allowed machines.
    pub fn has_identical_rows(&self) -> bool {
        (0..self.n()).all(|j| {
            let mut it = self.machines_of[j].iter().map(|&i| self.proc[i][j]);
            match it.next() {
                Some(first) => it.all(|p| p == first),
                None => true,
            }
        })
    }

    /// Size of job `j` in a restricted-identical instance (its first finite entry).
    pub fn size(&self, j: usize) -> Option<u64> {
        self.machines_of[j].first().and_then(|&i| self.proc[i][j])
    }

    pub fn valid_machines(&self, j: usize) -> &[usize] {
        &self.machines_of[j]
    }

    pub fn valid_jobs(&self, i: usize) -> &[usize] {
        &self.jobs_of[i]
    }

    /// Union of M(j) over the given jobs.
    pub fn machines_of_jobs(&self, jobs: impl IntoIterator<Item = usize>) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.m());
        for j in jobs {
            for &i in &self.machines_of[j] {
                out.insert(i);
            }
        }
        out
    }

    /// Union of J(i) over the given machines.
    pub fn jobs_of_machines(&self, machines: impl IntoIterator<Item = usize>) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.n());
        for i in machines {
            for &j in &self.jobs_of[i] {
                out.insert(j);
            }
        }
        out
    }

    pub fn is_feasible(&self) -> bool {
        self.machines_of.iter().all(|s| !s.is_empty())
    }

    /// Jobs without any allowed machine.
    pub fn stranded_jobs(&self) -> Vec<usize> {
        (0..self.n()).filter(|&j| self.machines_of[j].is_empty()).collect()
    }

    pub fn full(&self) -> SubinstanceRef<'_> {
        SubinstanceRef::new(self, (0..self.n()).collect(), (0..self.m()).collect())
    }

    pub fn subinstance(&self, jobs: &[usize], machines: &[usize]) -> Result<SubinstanceRef<'_>> {
        if let Some(&j) = jobs.iter().find(|&&j| j >= self.n()) {
            return Err(Error::UnknownId { kind: "job", id: format!("#{j}") });
        }
        if let Some(&i) = machines.iter().find(|&&i| i >= self.m()) {
            return Err(Error::UnknownId { kind: "machine", id: format!("#{i}") });
        }
        Ok(SubinstanceRef::new(self, jobs.to_vec(), machines.to_vec()))
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let raw: RawInstance = serde_json::from_str(text)?;
        raw.into_instance()
    }

    pub fn to_json_string(&self) -> String {
        let mut jobs = self.job_ids.clone();
        jobs.sort();
        let mut machines = self.machine_ids.clone();
        machines.sort();
        let mut proc = BTreeMap::new();
        for (i, mid) in self.machine_ids.iter().enumerate() {
            let mut row = BTreeMap::new();
            for (j, jid) in self.job_ids.iter().enumerate() {
                if let Some(p) = self.proc[i][j] {
                    row.insert(jid.clone(), format_scaled(p, self.scale));
                }
            }
            proc.insert(mid.clone(), row);
        }
        let out = serde_json::json!({
            "jobs": jobs,
            "machines": machines,
            "proc": proc,
            "identical": self.identical,
        });
        serde_json::to_string_pretty(&out).expect("json values always serialize")
    }
}

fn default_ids(prefix: char, count: usize) -> Vec<String> {
    let width = count.saturating_sub(1).to_string().len().max(2);
    (0..count).map(|k| format!("{prefix}{k:0width$}")).collect()
}

fn check_unique(kind: &'static str, ids: &[String]) -> Result<()> {
    let mut seen = HashMap::new();
    for id in ids {
        if seen.insert(id.as_str(), ()).is_some() {
            return Err(Error::DuplicateId { kind, id: id.clone() });
        }
    }
    Ok(())
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let text = std::fs::read_to_string(path)?;
    Instance::from_json_str(&text)
}

pub fn write_instance(path: impl AsRef<Path>, inst: &Instance) -> Result<()> {
    std::fs::write(path, inst.to_json_string() + "\n")?;
    Ok(())
}

#[derive(Deserialize, Serialize)]
struct RawInstance {
    jobs: Vec<String>,
    machines: Vec<String>,
    #[serde(default)]
    proc: BTreeMap<String, BTreeMap<String, serde_json::Value>>,
    #[serde(default)]
    identical: bool,
}

/// A processing time as read: integer digits and fractional digits.
struct Decimal {
    digits: u128,
    frac_len: u32,
}

fn parse_time(value: &serde_json::Value, job: &str, machine: &str) -> Result<Option<Decimal>> {
    let text = match value {
        serde_json::Value::Null => return Ok(None),
        serde_json::Value::String(s) if s.eq_ignore_ascii_case("forbidden") => return Ok(None),
        serde_json::Value::Number(n) => n.to_string(),
        other => {
            return Err(Error::Parse(format!(
                "processing time of job `{job}` on machine `{machine}` is not a number: {other}"
            )))
        }
    };
    let non_positive = || Error::NonPositive { job: job.to_string(), machine: machine.to_string() };
    if text.starts_with('-') {
        return Err(non_positive());
    }
    if text.contains(['e', 'E']) {
        return Err(Error::Parse(format!("exponent notation is not supported: {text}")));
    }
    let (int_part, frac_part) = text.split_once('.').unwrap_or((&text, ""));
    let frac_part = frac_part.trim_end_matches('0');
    let all: String = format!("{int_part}{frac_part}");
    let digits: u128 = all.parse().map_err(|_| Error::Parse(format!("processing time out of range: {text}")))?;
    if digits == 0 {
        return Err(non_positive());
    }
    Ok(Some(Decimal { digits, frac_len: frac_part.len() as u32 }))
}

fn format_scaled(p: u64, scale: u64) -> serde_json::Value {
    if scale == 1 {
        return serde_json::Value::from(p);
    }
    let width = scale.to_string().len() - 1;
    let int = p / scale;
    let frac = format!("{:0width$}", p % scale);
    let frac = frac.trim_end_matches('0');
    if frac.is_empty() {
        serde_json::Value::from(int)
    } else {
        let text = format!("{int}.{frac}");
        serde_json::from_str(&text).expect("decimal literal is valid json")
    }
}

impl RawInstance {
    fn into_instance(self) -> Result<Instance> {
        let mut jobs = self.jobs;
        let mut machines = self.machines;
        check_unique("job", &jobs)?;
        check_unique("machine", &machines)?;
        jobs.sort();
        machines.sort();
        let job_pos: HashMap<&str, usize> = jobs.iter().enumerate().map(|(k, s)| (s.as_str(), k)).collect();
        let machine_pos: HashMap<&str, usize> = machines.iter().enumerate().map(|(k, s)| (s.as_str(), k)).collect();

        let mut entries = Vec::new();
        let mut frac_len = 0;
        for (mid, row) in &self.proc {
            let i =
                *machine_pos.get(mid.as_str()).ok_or_else(|| Error::UnknownId { kind: "machine", id: mid.clone() })?;
            for (jid, value) in row {
                let j = *job_pos.get(jid.as_str()).ok_or_else(|| Error::UnknownId { kind: "job", id: jid.clone() })?;
                if let Some(d) = parse_time(value, jid, mid)? {
                    frac_len = frac_len.max(d.frac_len);
                    entries.push((i, j, d));
                }
            }
        }
        if frac_len > 9 {
            return Err(Error::Parse("more than 9 decimal places in processing times".into()));
        }
        let scale = 10u64.pow(frac_len);
        let mut proc = vec![vec![None; jobs.len()]; machines.len()];
        for (i, j, d) in entries {
            let v = d.digits * 10u128.pow(frac_len - d.frac_len);
            let v = u64::try_from(v).map_err(|_| Error::Parse("processing time too large after scaling".into()))?;
            proc[i][j] = Some(v);
        }
        let mut inst = Instance::new(jobs, machines, proc, self.identical)?;
        inst.scale = scale;
        Ok(inst)
    }
}

/// A total (or partial) assignment of jobs to machines, keyed by job index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Schedule {
    assignment: BTreeMap<usize, usize>,
}

impl Schedule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        Schedule { assignment: pairs.into_iter().collect() }
    }

    pub fn assign(&mut self, job: usize, machine: usize) {
        self.assignment.insert(job, machine);
    }

    pub fn machine_of(&self, job: usize) -> Option<usize> {
        self.assignment.get(&job).copied()
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.assignment.iter().map(|(&j, &i)| (j, i))
    }

    pub fn extend(&mut self, other: &Schedule) {
        for (j, i) in other.iter() {
            self.assign(j, i);
        }
    }
}

/// Makespan of a complete feasible schedule of `inst`.
pub fn makespan(inst: &Instance, sched: &Schedule) -> Result<u64> {
    inst.full().makespan(sched)
}

/// The subinstance I[J', M'] as a view over its parent.
#[derive(Clone, Debug)]
pub struct SubinstanceRef<'a> {
    inst: &'a Instance,
    jobs: Vec<usize>,
    machines: Vec<usize>,
    job_mask: FixedBitSet,
    machine_mask: FixedBitSet,
}

impl<'a> SubinstanceRef<'a> {
    fn new(inst: &'a Instance, mut jobs: Vec<usize>, mut machines: Vec<usize>) -> Self {
        jobs.sort_unstable();
        jobs.dedup();
        machines.sort_unstable();
        machines.dedup();
        let mut job_mask = FixedBitSet::with_capacity(inst.n());
        jobs.iter().for_each(|&j| job_mask.insert(j));
        let mut machine_mask = FixedBitSet::with_capacity(inst.m());
        machines.iter().for_each(|&i| machine_mask.insert(i));
        SubinstanceRef { inst, jobs, machines, job_mask, machine_mask }
    }

    pub fn instance(&self) -> &'a Instance {
        self.inst
    }

    pub fn jobs(&self) -> &[usize] {
        &self.jobs
    }

    pub fn machines(&self) -> &[usize] {
        &self.machines
    }

    pub fn contains_job(&self, j: usize) -> bool {
        self.job_mask.contains(j)
    }

    pub fn contains_machine(&self, i: usize) -> bool {
        self.machine_mask.contains(i)
    }

    /// M(j) ∩ M'.
    pub fn valid_machines(&self, j: usize) -> Vec<usize> {
        self.inst.valid_machines(j).iter().copied().filter(|&i| self.contains_machine(i)).collect()
    }

    /// J(i) ∩ J'.
    pub fn valid_jobs(&self, i: usize) -> Vec<usize> {
        self.inst.valid_jobs(i).iter().copied().filter(|&j| self.contains_job(j)).collect()
    }

    pub fn is_feasible(&self) -> bool {
        self.jobs.iter().all(|&j| self.inst.valid_machines(j).iter().any(|&i| self.contains_machine(i)))
    }

    pub fn check_feasible(&self) -> Result<()> {
        match self.jobs.iter().find(|&&j| !self.inst.valid_machines(j).iter().any(|&i| self.contains_machine(i))) {
            Some(&j) => Err(Error::Infeasible(format!("job `{}` has no allowed machine", self.inst.job_id(j)))),
            None => Ok(()),
        }
    }

    /// I[J1, M1][J2, M2] = I[J1 ∩ J2, M1 ∩ M2].
    pub fn restrict(&self, jobs: &[usize], machines: &[usize]) -> SubinstanceRef<'a> {
        let js = jobs.iter().copied().filter(|&j| self.contains_job(j)).collect();
        let ms = machines.iter().copied().filter(|&i| self.contains_machine(i)).collect();
        SubinstanceRef::new(self.inst, js, ms)
    }

    /// Makespan over the machines of the view; every job of the view must be assigned feasibly.
    pub fn makespan(&self, sched: &Schedule) -> Result<u64> {
        let mut load: HashMap<usize, u64> = HashMap::new();
        for &j in &self.jobs {
            let i = sched
                .machine_of(j)
                .ok_or_else(|| Error::Invalid(format!("job `{}` is not assigned", self.inst.job_id(j))))?;
            if !self.contains_machine(i) {
                return Err(Error::Invalid(format!("job `{}` assigned outside the machine set", self.inst.job_id(j))));
            }
            let p = self.inst.p(i, j).ok_or_else(|| {
                Error::Invalid(format!(
                    "job `{}` assigned to forbidden machine `{}`",
                    self.inst.job_id(j),
                    self.inst.machine_id(i)
                ))
            })?;
            *load.entry(i).or_default() += p;
        }
        if let Some((j, _)) = sched.iter().find(|(j, _)| !self.contains_job(*j)) {
            return Err(Error::Invalid(format!("schedule assigns foreign job #{j}")));
        }
        Ok(load.values().copied().max().unwrap_or(0))
    }

    /// Copies the view into a standalone instance; returns the index maps back to the parent.
    pub fn materialize(&self) -> (Instance, Vec<usize>, Vec<usize>) {
        let proc = self.machines.iter().map(|&i| self.jobs.iter().map(|&j| self.inst.p(i, j)).collect()).collect();
        let job_ids = self.jobs.iter().map(|&j| self.inst.job_ids[j].clone()).collect();
        let machine_ids = self.machines.iter().map(|&i| self.inst.machine_ids[i].clone()).collect();
        let mut inst = Instance::new(job_ids, machine_ids, proc, false).expect("a view of a valid instance is valid");
        inst.identical = self.inst.identical;
        inst.scale = self.inst.scale;
        (inst, self.jobs.clone(), self.machines.clone())
    }
}

/// Per-machine loads over a declared machine subset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LoadVector {
    pub machines: Vec<usize>,
    pub loads: Vec<u64>,
}

impl LoadVector {
    pub fn zero(machines: Vec<usize>) -> Self {
        let loads = vec![0; machines.len()];
        LoadVector { machines, loads }
    }

    /// Loads induced by `sched` restricted to the view's jobs, over this vector's machines.
    pub fn of_schedule(sub: &SubinstanceRef<'_>, machines: Vec<usize>, sched: &Schedule) -> Self {
        let mut lv = LoadVector::zero(machines);
        for &j in sub.jobs() {
            if let Some(i) = sched.machine_of(j) {
                if let Some(k) = lv.machines.iter().position(|&x| x == i) {
                    lv.loads[k] += sub.instance().p(i, j).unwrap_or(0);
                }
            }
        }
        lv
    }

    pub fn is_fulfilled_by(&self, sub: &SubinstanceRef<'_>, sched: &Schedule) -> bool {
        *self == LoadVector::of_schedule(sub, self.machines.clone(), sched)
    }

    pub fn max(&self) -> u64 {
        self.loads.iter().copied().max().unwrap_or(0)
    }
}

/// Result of an exact or approximate solver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub value: u64,
    pub schedule: Schedule,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_job() -> Instance {
        Instance::restricted(&[3, 4], &[vec![0, 1], vec![0, 1]], 2).unwrap()
    }

    #[test]
    fn makespan_examples() {
        let inst = two_job();
        assert_eq!(makespan(&inst, &Schedule::from_pairs([(0, 0), (1, 1)])).unwrap(), 4);
        assert_eq!(makespan(&inst, &Schedule::from_pairs([(0, 0), (1, 0)])).unwrap(), 7);
        let empty = Instance::restricted(&[], &[], 2).unwrap();
        assert_eq!(makespan(&empty, &Schedule::new()).unwrap(), 0);
    }

    #[test]
    fn makespan_rejects_forbidden() {
        let inst = Instance::restricted(&[3], &[vec![1]], 2).unwrap();
        assert!(makespan(&inst, &Schedule::from_pairs([(0, 0)])).is_err());
        assert!(makespan(&inst, &Schedule::new()).is_err());
    }

    #[test]
    fn loads_single_job() {
        let inst = Instance::from_json_str(r#"{"jobs":["x"],"machines":["A"],"proc":{"A":{"x":5}}}"#).unwrap();
        assert_eq!((inst.n(), inst.m()), (1, 1));
        assert_eq!(inst.valid_machines(0), &[0]);
        assert!(inst.is_feasible());
    }

    #[test]
    fn job_without_entries_is_flagged() {
        let inst =
            Instance::from_json_str(r#"{"jobs":["x","y"],"machines":["A"],"proc":{"A":{"x":5,"y":"FORBIDDEN"}}}"#)
                .unwrap();
        assert!(!inst.is_feasible());
        assert_eq!(inst.stranded_jobs(), vec![1]);
    }

    #[test]
    fn load_errors() {
        let dup = r#"{"jobs":["x","x"],"machines":["A"],"proc":{}}"#;
        assert!(matches!(Instance::from_json_str(dup), Err(Error::DuplicateId { .. })));
        let zero = r#"{"jobs":["x"],"machines":["A"],"proc":{"A":{"x":0}}}"#;
        assert!(matches!(Instance::from_json_str(zero), Err(Error::NonPositive { .. })));
        let neg = r#"{"jobs":["x"],"machines":["A"],"proc":{"A":{"x":-2}}}"#;
        assert!(matches!(Instance::from_json_str(neg), Err(Error::NonPositive { .. })));
        let unk = r#"{"jobs":["x"],"machines":["A"],"proc":{"B":{"x":1}}}"#;
        assert!(matches!(Instance::from_json_str(unk), Err(Error::UnknownId { .. })));
        assert!(matches!(Instance::from_json_str("{"), Err(Error::Parse(_))));
        let mixed = r#"{"jobs":["x"],"machines":["A","B"],"proc":{"A":{"x":1},"B":{"x":2}},"identical":true}"#;
        assert!(matches!(Instance::from_json_str(mixed), Err(Error::Invalid(_))));
    }

    #[test]
    fn decimals_are_scaled() {
        let inst =
            Instance::from_json_str(r#"{"jobs":["a","b"],"machines":["M"],"proc":{"M":{"a":2.5,"b":1.25}}}"#).unwrap();
        assert_eq!(inst.scale(), 100);
        assert_eq!(inst.p(0, 0), Some(250));
        assert_eq!(inst.p(0, 1), Some(125));
        let again = Instance::from_json_str(&inst.to_json_string()).unwrap();
        assert_eq!(again, inst);
    }

    #[test]
    fn roundtrip_sorts_ids() {
        let inst = Instance::from_json_str(
            r#"{"jobs":["b","a"],"machines":["Z","Y"],"proc":{"Z":{"a":1},"Y":{"b":2,"a":3}}}"#,
        )
        .unwrap();
        assert_eq!(inst.job_ids(), &["a", "b"]);
        let again = Instance::from_json_str(&inst.to_json_string()).unwrap();
        assert_eq!(again, inst);
    }

    #[test]
    fn subinstance_restricts_machines() {
        let inst = two_job();
        let sub = inst.subinstance(&[0, 1], &[1]).unwrap();
        assert_eq!(sub.valid_machines(0), vec![1]);
        let none = inst.subinstance(&[0], &[]).unwrap();
        assert!(!none.is_feasible());
        let empty = inst.subinstance(&[], &[0, 1]).unwrap();
        assert!(empty.is_feasible());
        assert_eq!(empty.makespan(&Schedule::new()).unwrap(), 0);
    }

    #[test]
    fn cost_order() {
        assert!(Cost::Finite(u64::MAX) < Cost::Infinite);
        assert_eq!(Cost::Finite(3).max(Cost::Infinite), Cost::Infinite);
        assert_eq!(Cost::Finite(3).min(Cost::Finite(2)), Cost::Finite(2));
    }
}
