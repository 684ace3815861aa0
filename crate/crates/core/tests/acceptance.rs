//! Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

use std::io::Write;

use fixedbitset::FixedBitSet;
use num_rational::Ratio;
use structsched::decomp::{validate_branch_decomposition, BranchDecomposition, SimpleFormDecomposition};
use structsched::dp_basic::{fptas_fixed_m, solve_load_dp, solve_machine_dp};
use structsched::dp_treewidth::{
    audit_labeling, decomposition_for, fptas_treewidth, label_activity, solve_dual, solve_incidence, solve_primal,
};
use structsched::eps::Eps;
use structsched::graphs::{build_graph, connection_types, cut_rank, GraphKind};
use structsched::harness::{
    brute_force, brute_force_with_budget, diagnostics, generate, GeneratorSpec, InstanceClass, SeededRng,
};
use structsched::ptas::{
    class_representative_audit, cut_types, incidence_branch_decomposition, ptas_run, solve_edge_dp, sub_vectors,
};
use structsched::{makespan, Instance};

/// Prints the verdict line outside the test harness capture, then fails on violations.
fn verdict(criterion: u32, title: &str, checked: usize, failures: &[String]) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "[{status}] criterion {criterion}: {title} ({checked} checks, {} failures)", failures.len()).unwrap();
    out.flush().unwrap();
    assert!(failures.is_empty(), "criterion {criterion}: {:#?}", &failures[..failures.len().min(10)]);
}

const RESTRICTED: [InstanceClass; 6] = [
    InstanceClass::RandomRestricted,
    InstanceClass::PathHierarchical,
    InstanceClass::TreeHierarchical,
    InstanceClass::Nested,
    InstanceClass::GraphBalancing,
    InstanceClass::GraphBalancingSimple,
];

const HIERARCHICAL: [InstanceClass; 3] =
    [InstanceClass::PathHierarchical, InstanceClass::TreeHierarchical, InstanceClass::Nested];

/// Tiny corpus: n ≤ max_n, m ≤ 3, all requested classes.
fn corpus(classes: &[InstanceClass], seeds: std::ops::Range<u64>, max_n: usize, p_max: u64) -> Vec<(String, Instance)> {
    let mut out = Vec::new();
    for &class in classes {
        for seed in seeds.clone() {
            let n = 1 + seed as usize % max_n;
            let m = 1 + (seed as usize / max_n) % 3;
            let spec = GeneratorSpec { p_max, ..GeneratorSpec::new(class, n, m, seed) };
            if let Ok(inst) = generate(&spec) {
                out.push((format!("{class} seed {seed} n={n} m={m}"), inst));
            }
        }
    }
    out
}

fn exact_decompositions(inst: &Instance) -> Vec<(GraphKind, SimpleFormDecomposition)> {
    [GraphKind::Primal, GraphKind::Dual, GraphKind::Incidence]
        .into_iter()
        .map(|k| (k, decomposition_for(inst, k).expect("decomposition")))
        .collect()
}

/// Bi-cotree decomposition when available, otherwise a caterpillar over all vertices.
fn any_branch_decomposition(inst: &Instance) -> BranchDecomposition {
    incidence_branch_decomposition(inst)
        .unwrap_or_else(|_| BranchDecomposition::caterpillar(&(0..inst.n() + inst.m()).collect::<Vec<_>>()))
}

fn within(value: u64, opt: u64, eps: Eps) -> bool {
    let bound = (Ratio::from_integer(1u64) + eps) * Ratio::from_integer(opt);
    value >= opt && Ratio::from_integer(value) <= bound
}

#[test]
fn criterion_1_exact_solvers_match_oracle() {
    let instances = corpus(&InstanceClass::ALL, 0..90, 6, 10);
    let mut failures = Vec::new();
    let mut checked = 0;
    for (label, inst) in &instances {
        let opt = brute_force(&inst.full()).unwrap().value;
        let mut results =
            vec![("machine-dp", solve_machine_dp(&inst.full())), ("load-dp", solve_load_dp(&inst.full(), None))];
        for (kind, sfd) in exact_decompositions(inst) {
            let r = match kind {
                GraphKind::Primal => solve_primal(inst, &sfd),
                GraphKind::Dual => solve_dual(inst, &sfd, None),
                GraphKind::Incidence => solve_incidence(inst, &sfd, None),
            };
            results.push((
                if kind == GraphKind::Primal {
                    "primal"
                } else if kind == GraphKind::Dual {
                    "dual"
                } else {
                    "incidence"
                },
                r,
            ));
        }
        for (name, r) in results {
            checked += 1;
            match r {
                Ok(sol) if sol.value == opt && makespan(inst, &sol.schedule).ok() == Some(opt) => {}
                Ok(sol) => failures.push(format!("{label}: {name} gave {} vs {opt}", sol.value)),
                Err(e) => failures.push(format!("{label}: {name} failed: {e}")),
            }
        }
    }
    if instances.len() < 500 {
        failures.push(format!("only {} instances", instances.len()));
    }
    verdict(1, "exact solvers equal the brute-force optimum", checked, &failures);
}

#[test]
fn criterion_2_edge_dp_matches_oracle() {
    let instances = corpus(&RESTRICTED, 0..40, 8, 3);
    let mut failures = Vec::new();
    for (label, inst) in &instances {
        let bd = any_branch_decomposition(inst);
        let opt = brute_force(&inst.full()).unwrap().value;
        match solve_edge_dp(inst, &bd) {
            Ok(sol) if sol.value == opt && makespan(inst, &sol.schedule).ok() == Some(opt) => {}
            Ok(sol) => failures.push(format!("{label}: edge DP gave {} vs {opt}", sol.value)),
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    }
    if instances.len() < 200 {
        failures.push(format!("only {} instances", instances.len()));
    }
    verdict(2, "edge DP equals the brute-force optimum", instances.len(), &failures);
}

#[test]
fn criterion_3_fptas_ratios() {
    let instances = corpus(&InstanceClass::ALL, 0..30, 6, 10);
    let mut failures = Vec::new();
    let mut checked = 0;
    for (label, inst) in &instances {
        let opt = brute_force(&inst.full()).unwrap().value;
        let dual = decomposition_for(inst, GraphKind::Dual).unwrap();
        let incidence = decomposition_for(inst, GraphKind::Incidence).unwrap();
        for eps in [Eps::new(1, 1), Eps::new(1, 2), Eps::new(1, 5), Eps::new(1, 10)] {
            let runs = [
                ("fptas-m", fptas_fixed_m(&inst.full(), eps)),
                ("fptas-tw dual", fptas_treewidth(inst, &dual, GraphKind::Dual, eps)),
                ("fptas-tw incidence", fptas_treewidth(inst, &incidence, GraphKind::Incidence, eps)),
            ];
            for (name, r) in runs {
                checked += 1;
                match r {
                    Ok(sol) if within(sol.value, opt, eps) && makespan(inst, &sol.schedule).ok() == Some(sol.value) => {
                    }
                    Ok(sol) => failures.push(format!("{label}: {name} ε={eps} gave {} vs {opt}", sol.value)),
                    Err(e) => failures.push(format!("{label}: {name} ε={eps}: {e}")),
                }
            }
        }
    }
    verdict(3, "FPTAS values lie in [OPT, (1+ε)OPT]", checked, &failures);
}

#[test]
fn criterion_4_ptas_ratio() {
    let instances = corpus(&HIERARCHICAL, 0..30, 6, 10);
    let mut failures = Vec::new();
    let mut checked = 0;
    for (label, inst) in &instances {
        let opt = brute_force(&inst.full()).unwrap().value;
        for eps in [Eps::new(1, 1), Eps::new(1, 2), Eps::new(1, 5)] {
            checked += 1;
            match ptas_run(inst, eps, None) {
                Ok(run) if within(run.solution.value, opt, eps) => {}
                Ok(run) => failures.push(format!("{label}: ε={eps} gave {} vs {opt}", run.solution.value)),
                Err(e) => failures.push(format!("{label}: ε={eps}: {e}")),
            }
        }
    }
    verdict(4, "PTAS values are at most (1+ε)OPT", checked, &failures);
}

#[test]
fn criterion_5_rounding_internals() {
    let instances = corpus(&HIERARCHICAL, 0..20, 6, 10);
    let mut failures = Vec::new();
    let mut checked = 0;
    for (label, inst) in &instances {
        let opt = brute_force(&inst.full()).unwrap().value as u128;
        for eps in [Eps::new(1, 1), Eps::new(1, 2), Eps::new(1, 5)] {
            let run = match ptas_run(inst, eps, None) {
                Ok(run) => run,
                Err(e) => {
                    failures.push(format!("{label}: ε={eps}: {e}"));
                    continue;
                }
            };
            let r = &run.rounded;
            let (a, b) = (*r.delta.numer() as u128, *r.delta.denom() as u128);
            let (n, big_b) = (inst.n() as u128, r.bound as u128);
            let rounded_opt = match brute_force_with_budget(&r.instance.full(), 50_000_000) {
                Ok(s) => s.value,
                Err(_) => solve_load_dp(&r.instance.full(), None).unwrap().value,
            } as u128;
            checked += 2;
            // OPT(I')·u ≤ (1+3δ)·OPT(I) with u = aB/(b²n).
            if rounded_opt * a * big_b > (b + 3 * a) * b * n * opt {
                failures.push(format!("{label}: ε={eps}: rounded optimum {rounded_opt} units too large"));
            }
            if run.rounded_solution.value as u128 != rounded_opt {
                failures.push(format!("{label}: ε={eps}: edge DP is not optimal on the rounded instance"));
            }
            // C(σ) ≤ C(σ')·u + δB.
            let c = run.solution.value as u128;
            let c_rounded = run.rounded_solution.value as u128;
            if c * b * b * n > c_rounded * a * big_b + a * b * n * big_b {
                failures.push(format!("{label}: ε={eps}: back-rounding adds more than δB"));
            }
        }
    }
    verdict(5, "rounded optimum and back-rounding bounds", checked, &failures);
}

#[test]
fn criterion_6_structural_facts() {
    let instances = corpus(&InstanceClass::ALL, 0..30, 6, 10);
    let mut failures = Vec::new();
    let mut checked = 0;
    for (label, inst) in &instances {
        let primal = build_graph(inst, GraphKind::Primal);
        let dual = build_graph(inst, GraphKind::Dual);
        for i in 0..inst.m() {
            let js = inst.valid_jobs(i);
            checked += 1;
            if js.iter().any(|&a| js.iter().any(|&b| a != b && !primal.graph.has_edge(a, b))) {
                failures.push(format!("{label}: J({i}) is not a primal clique"));
            }
        }
        for j in 0..inst.n() {
            let ms = inst.valid_machines(j);
            checked += 1;
            if ms.iter().any(|&a| ms.iter().any(|&b| a != b && !dual.graph.has_edge(a, b))) {
                failures.push(format!("{label}: M({j}) is not a dual clique"));
            }
        }
        let d = diagnostics(inst);
        checked += 1;
        if d.incidence_bounds_hold != Some(true) || !d.clique_bounds_hold {
            failures.push(format!("{label}: width inequalities fail: {d:?}"));
        }

        let incidence = build_graph(inst, GraphKind::Incidence);
        let bd = any_branch_decomposition(inst);
        let n = inst.n();
        for (a, b) in bd.edges() {
            let below = bd.side(b, a);
            let rank = cut_rank(&incidence.graph, &below);
            for (side, other) in [(below.clone(), complement(&below)), (complement(&below), below.clone())] {
                let jobs: Vec<usize> = side.ones().filter(|&v| v < n).collect();
                let machines: Vec<usize> = other.ones().filter(|&v| v >= n).map(|v| v - n).collect();
                let kappa = connection_types(&incidence, &jobs, &machines).len();
                checked += 1;
                if kappa > 1 << rank {
                    failures.push(format!("{label}: edge {a}-{b} has {kappa} types but cut-rank {rank}"));
                }
            }
        }
    }
    let hierarchical = corpus(&HIERARCHICAL, 0..100, 6, 10);
    for (label, inst) in &hierarchical {
        checked += 1;
        let bd = match incidence_branch_decomposition(inst) {
            Ok(bd) => bd,
            Err(e) => {
                failures.push(format!("{label}: not recognized as a bi-cograph: {e}"));
                continue;
            }
        };
        let incidence = build_graph(inst, GraphKind::Incidence);
        let report = validate_branch_decomposition(&incidence.graph, &bd).unwrap();
        if report.rankwidth > 4 {
            failures.push(format!("{label}: bi-cotree decomposition has rankwidth {}", report.rankwidth));
        }
        for (a, b) in bd.edges() {
            for (x, y) in [(a, b), (b, a)] {
                let (_, up, down) = cut_types(inst, &bd, (x, y)).unwrap();
                if up.len() > 2 || down.len() > 2 {
                    failures.push(format!("{label}: edge {x}-{y} has {} and {} types", up.len(), down.len()));
                }
            }
        }
    }
    verdict(6, "cliques, width inequalities, type counts and bi-cograph decompositions", checked, &failures);
}

fn complement(s: &FixedBitSet) -> FixedBitSet {
    let mut c = FixedBitSet::with_capacity(s.len());
    c.insert_range(..);
    c.difference_with(s);
    c
}

#[test]
fn criterion_7_class_well_definedness() {
    let instances = corpus(&RESTRICTED, 0..20, 5, 3);
    let mut rng = SeededRng::new(7);
    let mut failures = Vec::new();
    let mut audits = 0;
    for (label, inst) in &instances {
        let bd = any_branch_decomposition(inst);
        let edges = bd.edges();
        for _ in 0..2 {
            let (a, b) = edges[rng.below(edges.len() as u64) as usize];
            let (a, b) = if rng.chance(0.5) { (a, b) } else { (b, a) };
            let (_, up, down) = cut_types(inst, &bd, (a, b)).unwrap();
            let ups = sub_vectors(&up.full);
            let downs = sub_vectors(&down.full);
            let u = &ups[rng.below(ups.len() as u64) as usize];
            let v = &downs[rng.below(downs.len() as u64) as usize];
            audits += 1;
            match class_representative_audit(inst, &bd, (a, b), u, v) {
                Ok(verdict) if verdict.passed() => {}
                Ok(verdict) => failures.push(format!("{label}: edge {a}-{b}: {:?}", verdict.mismatches)),
                Err(e) => failures.push(format!("{label}: edge {a}-{b}: {e}")),
            }
        }
    }
    if audits < 50 {
        failures.push(format!("only {audits} cuts audited"));
    }
    verdict(7, "all representatives of a class give the same subproblem optimum", audits, &failures);
}

#[test]
fn criterion_8_decomposition_auditor() {
    let instances = corpus(&InstanceClass::ALL, 0..90, 6, 10);
    let mut failures = Vec::new();
    let mut checked = 0;
    for (label, inst) in &instances {
        for (kind, sfd) in exact_decompositions(inst) {
            checked += 1;
            let labels = label_activity(&sfd, inst, kind).unwrap();
            let violations = audit_labeling(&sfd, inst, &labels);
            if !violations.is_empty() {
                failures.push(format!("{label}: {kind:?}: {}", violations[0]));
            }
        }
    }
    verdict(8, "activity labels satisfy every node condition", checked, &failures);
}
