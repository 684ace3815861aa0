use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};

use super::forest::{round_assignment, FracEdge};
use crate::eps::{check_eps, Eps};
use crate::error::{Error, Result};
use crate::instance::{makespan, Instance, Schedule};

/// Largest number of jobs a rounded instance may have.
pub const MAX_ROUNDED_JOBS: usize = 10_000;

/// A restricted-identical instance after rounding: big jobs moved up to a grid of δ²B, small
/// jobs replaced by copies of size δB/n.
///
/// Sizes in `instance` are integers counted in `unit` (original time per unit), so that one
/// grid step δ²B is `a·n` units and one small copy is `b` units for δ = a/b.
#[derive(Clone, Debug)]
pub struct RoundedInstance {
    pub instance: Instance,
    pub bound: u64,
    pub delta: Ratio<u64>,
    pub unit: Ratio<u128>,
    /// Whether each original job is big (p > δB).
    pub big: Vec<bool>,
    /// Jobs of `instance` standing for each original job.
    pub copies: Vec<Vec<usize>>,
    /// Original job of each job of `instance`.
    pub origin: Vec<usize>,
}

/// δ = min(1/3, ε/7).
pub fn rounding_delta(eps: Eps) -> Ratio<u64> {
    let seventh = eps / Ratio::from_integer(7);
    seventh.min(Ratio::new(1, 3))
}

impl RoundedInstance {
    /// `units` of the rounded instance expressed in original time.
    pub fn to_original(&self, units: u64) -> Ratio<u128> {
        self.unit * Ratio::from_integer(units as u128)
    }
}

pub fn round_instance(inst: &Instance, eps: Eps, bound: u64) -> Result<RoundedInstance> {
    check_eps(eps)?;
    if !inst.has_identical_rows() {
        return Err(Error::Invalid("rounding needs a restricted-identical instance".into()));
    }
    if let Some(&j) = inst.stranded_jobs().first() {
        return Err(Error::Infeasible(format!("job `{}` has no allowed machine", inst.job_id(j))));
    }
    let n = inst.n();
    if n > 0 && bound == 0 {
        return Err(Error::Invalid("the makespan bound must be positive".into()));
    }
    let delta = rounding_delta(eps);
    let (a, b) = (*delta.numer() as u128, *delta.denom() as u128);
    let (nn, bb) = (n.max(1) as u128, bound as u128);
    let unit = Ratio::new(a * bb, b * b * nn);
    let overflow = || Error::Resource("rounded processing times overflow".into());

    let mut ids = Vec::new();
    let mut sizes: Vec<u64> = Vec::new();
    let mut big = Vec::with_capacity(n);
    let mut copies = Vec::with_capacity(n);
    let mut origin = Vec::new();
    for j in 0..n {
        let p = inst.size(j).expect("feasible job has a size") as u128;
        let is_big = p * b > a * bb;
        let (count, units) = if is_big {
            let steps = (p * b * b).div_ceil(a * a * bb);
            (1, a * nn * steps)
        } else {
            ((nn * p * b).div_ceil(a * bb), b)
        };
        let units = u64::try_from(units).map_err(|_| overflow())?;
        let count = usize::try_from(count).map_err(|_| overflow())?;
        if origin.len() + count > MAX_ROUNDED_JOBS {
            return Err(Error::Resource(format!("the rounded instance exceeds {MAX_ROUNDED_JOBS} jobs")));
        }
        let mut mine = Vec::with_capacity(count);
        for k in 0..count {
            mine.push(origin.len());
            origin.push(j);
            sizes.push(units);
            ids.push(if is_big { inst.job_id(j).to_string() } else { format!("{}#{}", inst.job_id(j), k + 1) });
        }
        big.push(is_big);
        copies.push(mine);
    }
    let proc: Vec<Vec<Option<u64>>> =
        (0..inst.m()).map(|i| origin.iter().zip(&sizes).map(|(&j, &s)| inst.p(i, j).map(|_| s)).collect()).collect();
    let instance = Instance::new(ids, inst.machine_ids().to_vec(), proc, true)?;
    Ok(RoundedInstance { instance, bound, delta, unit, big, copies, origin })
}

/// Turns a schedule of the rounded instance into one of `inst`. Big jobs follow their
/// rounded copy; small jobs get the fractional assignment given by where their copies went,
/// which is then rounded so that each machine gains at most one extra small job.
pub fn round_small_jobs_back(inst: &Instance, rounded: &RoundedInstance, sched: &Schedule) -> Result<Schedule> {
    makespan(&rounded.instance, sched)?;
    let mut out = Schedule::new();
    let mut edges = Vec::new();
    let mut total = HashMap::new();
    for j in 0..inst.n() {
        let mine = &rounded.copies[j];
        if rounded.big[j] {
            out.assign(j, sched.machine_of(mine[0]).expect("checked above"));
            continue;
        }
        let mut per_machine: BTreeMap<usize, u64> = BTreeMap::new();
        for &c in mine {
            *per_machine.entry(sched.machine_of(c).expect("checked above")).or_default() += 1;
        }
        let p = BigInt::from(inst.size(j).expect("feasible job has a size"));
        for (i, count) in per_machine {
            let mass = BigRational::new(&p * BigInt::from(count), BigInt::from(mine.len()));
            edges.push(FracEdge { job: j, machine: i, mass });
        }
        total.insert(j, BigRational::from_integer(p));
    }
    for (j, i) in round_assignment(edges, &total, true) {
        out.assign(j, i);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_and_copies() {
        // B = 100, ε = 0.7: δ = 1/10, δ²B = 1, δB/n = 10/n.
        let inst = Instance::restricted(&[35, 2, 50], &[vec![0], vec![0, 1], vec![1]], 2).unwrap();
        let r = round_instance(&inst, Ratio::new(7, 10), 100).unwrap();
        assert_eq!(r.delta, Ratio::new(1, 10));
        assert_eq!(r.big, vec![true, false, true]);
        assert_eq!(r.copies[1].len(), 1);
        assert_eq!(r.to_original(r.instance.size(r.copies[0][0]).unwrap()), Ratio::from_integer(35));
        assert_eq!(r.to_original(r.instance.size(r.copies[1][0]).unwrap()), Ratio::new(10, 3));
        assert_eq!(r.instance.valid_machines(r.copies[1][0]), &[0, 1]);
    }

    #[test]
    fn off_grid_size_moves_up() {
        // δ = 1/10 and B = 200 give a grid step δ²B = 2.
        let inst = Instance::restricted(&[35], &[vec![0]], 1).unwrap();
        let r = round_instance(&inst, Ratio::new(7, 10), 200).unwrap();
        assert_eq!(r.to_original(r.instance.size(0).unwrap()), Ratio::from_integer(36));
        let on_grid = Instance::restricted(&[36], &[vec![0]], 1).unwrap();
        let r = round_instance(&on_grid, Ratio::new(7, 10), 200).unwrap();
        assert_eq!(r.to_original(r.instance.size(0).unwrap()), Ratio::from_integer(36));
    }

    #[test]
    fn small_job_copy_count() {
        // n = 10, δB = 10: a job of size 2 becomes two copies of size 1.
        let mut sizes = vec![2];
        sizes.extend([50; 9]);
        let inst = Instance::restricted(&sizes, &vec![vec![0]; 10], 1).unwrap();
        let r = round_instance(&inst, Ratio::new(7, 10), 100).unwrap();
        assert_eq!(r.copies[0].len(), 2);
        assert_eq!(r.to_original(r.instance.size(r.copies[0][0]).unwrap()), Ratio::from_integer(1));
    }

    #[test]
    fn split_small_job_lands_on_one_machine() {
        let inst = Instance::restricted(&[4, 30, 30], &[vec![0, 1], vec![0], vec![1]], 2).unwrap();
        let r = round_instance(&inst, Ratio::new(7, 10), 60).unwrap();
        assert!(!r.big[0] && r.copies[0].len() == 2);
        let mut s = Schedule::new();
        for (k, &c) in r.copies[0].iter().enumerate() {
            s.assign(c, k % 2);
        }
        s.assign(r.copies[1][0], 0);
        s.assign(r.copies[2][0], 1);
        let back = round_small_jobs_back(&inst, &r, &s).unwrap();
        assert_eq!(makespan(&inst, &back).unwrap(), 34);
    }

    #[test]
    fn rejects_unrelated_times() {
        let inst = Instance::unrelated(vec![vec![Some(1)], vec![Some(2)]], 1).unwrap();
        assert!(round_instance(&inst, Ratio::new(1, 2), 2).is_err());
    }
}
