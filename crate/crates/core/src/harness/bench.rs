use std::time::Instant;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use super::generate::{generate, GeneratorSpec, InstanceClass};
use super::oracle::brute_force;
use super::solve::{run_algorithm, Algorithm, SolveOptions};
use crate::eps::Eps;
use crate::graphs::GraphKind;
use crate::instance::{makespan, Instance};

/// A family of small generated instances.
#[derive(Clone, Debug)]
pub struct CorpusSpec {
    pub classes: Vec<InstanceClass>,
    pub seeds: Vec<u64>,
    pub max_n: usize,
    pub max_m: usize,
    /// Accuracies for the approximation schemes; empty skips them.
    pub eps: Vec<Eps>,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            classes: InstanceClass::ALL.to_vec(),
            seeds: (1..=100).collect(),
            max_n: 6,
            max_m: 3,
            eps: vec![Eps::new(1, 2)],
        }
    }
}

/// One generated corpus member.
#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub class: InstanceClass,
    pub seed: u64,
    pub instance: Instance,
}

impl CorpusSpec {
    /// Sizes cycle through `1..=max_n` jobs and `1..=max_m` machines with the seed; specs the
    /// generator rejects (such as too many distinct pairs) are skipped.
    pub fn entries(&self) -> Vec<CorpusEntry> {
        let mut out = Vec::new();
        for &class in &self.classes {
            for &seed in &self.seeds {
                let n = 1 + (seed as usize % self.max_n.max(1));
                let m = 1 + (seed as usize / self.max_n.max(1) % self.max_m.max(1));
                if let Ok(instance) = generate(&GeneratorSpec::new(class, n, m, seed)) {
                    out.push(CorpusEntry { class, seed, instance });
                }
            }
        }
        out
    }
}

/// Result of one solver on one instance.
#[derive(Clone, Debug, Serialize)]
pub struct BenchRecord {
    pub class: InstanceClass,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    pub algorithm: String,
    pub eps: Option<String>,
    pub value: Option<u64>,
    pub error: Option<String>,
    pub wall_ms: f64,
    pub width: Option<usize>,
    /// Brute-force optimum, when it could be computed.
    pub reference: Option<u64>,
    pub ratio: Option<f64>,
    pub ok: bool,
    /// The instance as JSON, attached to failing records for replay.
    pub instance: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
}

impl BenchReport {
    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &BenchRecord> {
        self.records.iter().filter(|r| !r.ok)
    }

    pub fn to_json_lines(&self) -> String {
        self.records.iter().map(|r| serde_json::to_string(r).expect("records serialize") + "\n").collect()
    }
}

/// Solver runs for one instance: algorithm, options label and options.
fn plan(inst: &Instance, eps: &[Eps]) -> Vec<(Algorithm, Option<Eps>, GraphKind)> {
    let mut runs: Vec<(Algorithm, Option<Eps>, GraphKind)> =
        [Algorithm::MachineDp, Algorithm::LoadDp, Algorithm::TwPrimal, Algorithm::TwDual, Algorithm::TwIncidence]
            .into_iter()
            .map(|a| (a, None, GraphKind::Incidence))
            .collect();
    let restricted = inst.has_identical_rows();
    let bicograph = restricted && crate::ptas::incidence_branch_decomposition(inst).is_ok();
    if bicograph {
        runs.push((Algorithm::EdgeDp, None, GraphKind::Incidence));
    }
    for &e in eps {
        runs.push((Algorithm::FptasM, Some(e), GraphKind::Incidence));
        runs.push((Algorithm::FptasTw, Some(e), GraphKind::Dual));
        runs.push((Algorithm::FptasTw, Some(e), GraphKind::Incidence));
        if bicograph {
            runs.push((Algorithm::PtasRw, Some(e), GraphKind::Incidence));
        }
    }
    runs
}

fn within(value: u64, reference: u64, eps: Eps) -> bool {
    let v = Ratio::from_integer(value as u128);
    let bound = (Ratio::from_integer(1u128) + Ratio::new(*eps.numer() as u128, *eps.denom() as u128))
        * Ratio::from_integer(reference as u128);
    value >= reference && v <= bound
}

fn check_entry(entry: &CorpusEntry, eps: &[Eps]) -> Vec<BenchRecord> {
    let inst = &entry.instance;
    let reference = brute_force(&inst.full()).ok().map(|s| s.value);
    plan(inst, eps)
        .into_iter()
        .map(|(algo, e, graph)| {
            let opts = SolveOptions { eps: e, fptas_graph: graph, ..SolveOptions::default() };
            let start = Instant::now();
            let outcome = run_algorithm(inst, algo, &opts);
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            let name = match algo {
                Algorithm::FptasTw => format!("{algo}-{}", if graph == GraphKind::Dual { "dual" } else { "incidence" }),
                _ => algo.to_string(),
            };
            let mut rec = BenchRecord {
                class: entry.class,
                seed: entry.seed,
                n: inst.n(),
                m: inst.m(),
                algorithm: name,
                eps: e.map(|x| x.to_string()),
                value: None,
                error: None,
                wall_ms,
                width: None,
                reference,
                ratio: None,
                ok: false,
                instance: None,
            };
            match outcome {
                Ok(out) => {
                    let v = out.solution.value;
                    rec.value = Some(v);
                    rec.width = out.width;
                    let honest = makespan(inst, &out.solution.schedule).ok() == Some(v);
                    rec.ok = honest
                        && match (reference, e) {
                            (Some(r), None) => v == r,
                            (Some(r), Some(e)) => within(v, r, e),
                            (None, _) => true,
                        };
                    rec.ratio = reference.filter(|&r| r > 0).map(|r| v as f64 / r as f64);
                }
                Err(err) => rec.error = Some(err.to_string()),
            }
            if !rec.ok {
                rec.instance = Some(inst.to_json_string());
            }
            rec
        })
        .collect()
}

/// Runs every applicable solver on every corpus instance against the brute-force optimum.
/// Exact solvers must match it; approximation schemes must stay within their factor.
pub fn cross_validate(corpus: &CorpusSpec) -> BenchReport {
    let entries = corpus.entries();
    let records = entries.par_iter().flat_map_iter(|e| check_entry(e, &corpus.eps)).collect();
    BenchReport { records }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_corpus() {
        let spec = CorpusSpec { seeds: Vec::new(), ..CorpusSpec::default() };
        assert!(cross_validate(&spec).records.is_empty());
    }

    #[test]
    fn small_corpus_is_green() {
        let spec = CorpusSpec { seeds: (1..=8).collect(), ..CorpusSpec::default() };
        let report = cross_validate(&spec);
        assert!(!report.records.is_empty());
        let bad: Vec<_> = report.failures().collect();
        assert!(bad.is_empty(), "{bad:?}");
        assert_eq!(report.to_json_lines().lines().count(), report.records.len());
    }
}
