//! Acceptance suite: one `[PASS]`/`[FAIL]` line per criterion, nonzero exit
//! status when any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orbitfold::cascade::{all_types, build_root_system, open_orbit_rank_test, Family};
use orbitfold::coadjoint::{bform, coadjoint_flow, flow_rank_profile, open_component_census, FlowConfig};
use orbitfold::exact_la::{
    eigenvalues_numeric, int, matrix_exp_numeric, rat_to_f64, Matrix, Rat,
};
use orbitfold::grpd::corpus::groupoid_corpus;
use orbitfold::grpd::random::{random_groupoid, random_transformation_groupoid};
use orbitfold::grpd::{
    algebra_profile, classify, equivalence_bimodule_verify, load_groupoid, morphism_count_identity,
    orbits_isotropy, pullback_isomorphism_verify, regular_representation_faithful, FiniteGroupoid,
};
use orbitfold::lie::{corpus, LieAlgebra, LieModule, Subspace};
use orbitfold::roots_exp::{exponential_type_test, module_weights, Violation};
use orbitfold::stratify::{jordan_holder_flag, jump_index, stratify_module, IndexSet, StratConfig};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("{what} took {t:.2?}, limit {limit:?}"))
}

/// Counts every groupoid checked against the morphism-count identity.
#[derive(Default)]
struct CountLedger {
    checked: usize,
    failed: Vec<String>,
}

impl CountLedger {
    fn check(&mut self, name: &str, g: &FiniteGroupoid) {
        self.checked += 1;
        if !morphism_count_identity(g) {
            self.failed.push(name.to_string());
        }
    }
}

fn golden_open_orbit(f: Family, l: usize) -> bool {
    match f {
        Family::A => l == 1,
        Family::B | Family::C => true,
        Family::D => l.is_multiple_of(2),
        Family::E => l == 7 || l == 8,
        Family::F | Family::G => true,
    }
}

fn cascade_table() -> Outcome {
    let start = Instant::now();
    let types = all_types(8);
    let mut mismatches = Vec::new();
    for &(f, l) in &types {
        let t = open_orbit_rank_test(&build_root_system(f, l).map_err(|e| e.to_string())?);
        if t.has_open_orbit != golden_open_orbit(f, l) {
            mismatches.push(format!("{}{l}", f.letter()));
        }
    }
    ensure(mismatches.is_empty(), || format!("mismatch at {mismatches:?}"))?;
    within(start, Duration::from_secs(5), "cascade table")?;
    Ok(format!("{} types", types.len()))
}

fn census_evenness() -> Outcome {
    let cfg = FlowConfig {
        samples: 512,
        seed: 0,
        ..FlowConfig::default()
    };
    let mut detail = Vec::new();
    let cases = [
        ("axb", corpus::ax_plus_b(), 2usize),
        ("h3", corpus::heisenberg(), 0),
        ("e2", corpus::e2(), 0),
        ("realified_borel", corpus::realified_borel(), 1),
    ];
    for (name, l, want) in cases {
        let start = Instant::now();
        let c = open_component_census(&l, &cfg).map_err(|e| format!("{name}: {e}"))?;
        within(start, Duration::from_secs(10), name)?;
        ensure(c.open_components == want, || {
            format!("{name}: {} components, want {want}", c.open_components)
        })?;
        match name {
            "axb" => {
                let pairs: BTreeSet<(usize, usize)> = c.negation_pairs.iter().cloned().collect();
                ensure(pairs == BTreeSet::from([(0, 1), (1, 0)]), || {
                    format!("axb negation pairs {:?}", c.negation_pairs)
                })?;
                ensure(c.even == Some(true), || "axb not reported even".into())?;
            }
            "realified_borel" => {
                ensure(!c.exponential && c.even.is_none(), || {
                    format!("realified Borel flags: exponential {} even {:?}", c.exponential, c.even)
                })?;
            }
            _ => {}
        }
        detail.push(format!("{name}={}", c.open_components));
    }
    Ok(detail.join(" "))
}

fn exponentiality() -> Outcome {
    let cases = [
        ("h3", corpus::heisenberg(), true),
        ("n4", corpus::filiform4(), true),
        ("axb", corpus::ax_plus_b(), true),
        ("axb_semidirect", corpus::axb_semidirect(), true),
        ("e2", corpus::e2(), false),
        ("realified_borel", corpus::realified_borel(), false),
    ];
    for (name, l, want) in cases {
        let ad = LieModule::adjoint(Arc::new(l.clone()));
        let cert = exponential_type_test(&l, &ad).map_err(|e| format!("{name}: {e}"))?;
        ensure(!cert.heuristic, || format!("{name}: heuristic verdict"))?;
        ensure(cert.exponential == want, || format!("{name}: verdict {}", cert.exponential))?;
        let kind_ok = match (name, &cert.violation) {
            ("e2", Some(Violation::PurelyImaginary { .. })) => true,
            ("realified_borel", Some(Violation::IndependentParts { .. })) => true,
            (_, None) => want,
            _ => false,
        };
        ensure(kind_ok, || format!("{name}: violation {:?}", cert.violation))?;
    }
    Ok("6 verdicts exact".into())
}

fn dual_weights() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for k in 0..20 {
        let (w, dw) = if k % 2 == 0 {
            let n = rng.gen_range(2..=4);
            let (l, m) = common::random_complex_pair(&mut rng, n, 2);
            (module_weights(&l, &m), module_weights(&l, &m.dual()))
        } else {
            let blocks = rng.gen_range(1..=2);
            let (l, m) = common::random_real_pair(&mut rng, blocks, 2);
            (module_weights(&l, &m), module_weights(&l, &m.dual()))
        };
        let (w, dw) = (w.map_err(|e| e.to_string())?, dw.map_err(|e| e.to_string())?);
        ensure(!w.heuristic && !dw.heuristic, || format!("pair {k}: weights not exact"))?;
        let (w, dw) = (w.exact_multiset().unwrap(), dw.exact_multiset().unwrap());
        ensure(dw == common::negate_all(&w), || format!("pair {k}: dual weights differ"))?;
    }
    Ok("20 pairs".into())
}

fn grid(n: usize, r: i64) -> Vec<Vec<Rat>> {
    let side = (2 * r + 1) as usize;
    (0..side.pow(n as u32))
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let d = (code % side) as i64 - r;
                    code /= side;
                    int(d)
                })
                .collect()
        })
        .collect()
}

fn rank_identity(l: &LieAlgebra<Rat>, points: &[Vec<Rat>]) -> Result<(), String> {
    let flag = jordan_holder_flag(l).map_err(|e| e.to_string())?;
    for p in points {
        let j = jump_index(l, &flag, p).map_err(|e| e.to_string())?;
        let r = bform(l, p).map_err(|e| e.to_string())?.rank().map_err(|e| e.to_string())?;
        ensure(j.len() == r, || format!("|J| = {} but rank B = {r} at {p:?}", j.len()))?;
    }
    Ok(())
}

fn jump_strata() -> Outcome {
    let start = Instant::now();
    let h = corpus::heisenberg();
    let co = LieModule::coadjoint(Arc::new(h.clone()));
    let r = stratify_module(&h, &co, &StratConfig::default()).map_err(|e| e.to_string())?;
    let e1 = r.first_piece.as_ref().map(|p| p.e1.clone());
    ensure(e1 == Some(IndexSet::from([2, 3])), || format!("h3 e1 = {e1:?}"))?;
    let flag = jordan_holder_flag(&h).map_err(|e| e.to_string())?;
    for p in grid(3, 2) {
        let in_a1 = jump_index(&h, &flag, &p).map_err(|e| e.to_string())? == IndexSet::from([2, 3]);
        ensure(in_a1 == !num_traits::Zero::is_zero(&p[2]), || format!("A1 membership wrong at {p:?}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for l in [corpus::heisenberg(), corpus::filiform4()] {
        let m = l.dim();
        let pts: Vec<Vec<Rat>> = (0..200).map(|_| common::rational_point(&mut rng, m)).collect();
        rank_identity(&l, &pts)?;
        rank_identity(&l, &grid(m, 2))?;
    }
    within(start, Duration::from_secs(2), "stratification")?;
    Ok("h3 and n4, 200 points plus grid".into())
}

fn pullback_fuzz(ledger: &mut CountLedger) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for k in 0..500 {
        let g = random_transformation_groupoid(&mut rng, 6);
        ledger.check(&format!("transformation groupoid {k}"), &g);
        let iso = pullback_isomorphism_verify(&g);
        ensure(iso.verified && iso.checks.all(), || format!("case {k}: Φ checks {:?}", iso.checks))?;
        let labels = g.objects().to_vec();
        let theta: Vec<usize> = (0..g.object_count()).collect();
        let (_, report) = equivalence_bimodule_verify(&g, &labels, &theta).map_err(|e| format!("case {k}: {e}"))?;
        let failing: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
        ensure(report.all_passed && failing.is_empty(), || format!("case {k}: {failing:?}"))?;
    }
    within(start, Duration::from_secs(60), "pullback fuzz")?;
    Ok("500 groupoids".into())
}

/// Groupoid and action files bundled with the command-line tool.
fn bundled_groupoids() -> Vec<(String, FiniteGroupoid)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../cli/examples");
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)
        .map(|it| it.filter_map(|e| e.ok().map(|e| e.path())).collect())
        .unwrap_or_default();
    paths.sort();
    paths
        .into_iter()
        .filter_map(|p| {
            let text = std::fs::read_to_string(&p).ok()?;
            let v: serde_json::Value = serde_json::from_str(&text).ok()?;
            if v.get("objects").is_none() && v.get("group").is_none() {
                return None;
            }
            let g = load_groupoid(&text).ok()?.groupoid;
            Some((p.file_name()?.to_string_lossy().into_owned(), g))
        })
        .collect()
}

fn full_corpus() -> Vec<(String, FiniteGroupoid)> {
    let mut out: Vec<(String, FiniteGroupoid)> =
        groupoid_corpus().into_iter().map(|(n, g)| (n.to_string(), g)).collect();
    out.extend(bundled_groupoids());
    out
}

fn single_block(ledger: &mut CountLedger) -> Outcome {
    let mut all = full_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    all.extend((0..200).map(|k| (format!("random groupoid {k}"), random_groupoid(&mut rng))));
    let mut pairs = 0;
    for (name, g) in &all {
        ledger.check(name, g);
        let single = algebra_profile(g, None).is_single_matrix_block();
        let pair = classify(g).is_pair_groupoid;
        ensure(single == pair, || format!("{name}: single block {single}, pair groupoid {pair}"))?;
        pairs += usize::from(pair);
    }
    Ok(format!("{} groupoids, {pairs} pair groupoids", all.len()))
}

fn faithfulness(ledger: &mut CountLedger) -> Outcome {
    let mut checked = 0;
    for (name, g) in full_corpus() {
        ledger.check(&name, &g);
        let orbits = orbits_isotropy(&g);
        for x in 0..g.object_count() {
            let dense = orbits.members[orbits.orbit_of[x]].len() == g.object_count();
            let rep = regular_representation_faithful(&g, x);
            ensure(rep.faithful == dense, || {
                format!("{name} at {}: faithful {}, dense {dense}", g.objects()[x], rep.faithful)
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} objects"))
}

fn axb_strata() -> Outcome {
    let m = corpus::axb_tautological();
    let r = stratify_module(m.algebra(), &m, &StratConfig::default()).map_err(|e| e.to_string())?;
    let iso: Vec<usize> = r.layers.iter().map(|l| l.isotropy_dimension).collect();
    ensure(iso == vec![0, 1, 2], || format!("isotropy dimensions {iso:?}"))?;
    let unipotent = Subspace::span(2, &[vec![int(0), int(1)]]).map_err(|e| e.to_string())?;
    let middle = &r.layers[1].isotropy;
    ensure(*middle == unipotent, || format!("dimension-1 isotropy {middle:?}"))?;
    Ok("isotropy 0/1/2".into())
}

fn max_abs_diff(a: &Matrix<f64>, b: &Matrix<f64>) -> f64 {
    a.entries().iter().zip(b.entries()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn numeric_guardrails(suite_start: Instant) -> Outcome {
    let algebras = corpus::real_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let cfg = FlowConfig::default();
    for k in 0..50 {
        let (name, l) = &algebras[k % algebras.len()];
        let m = l.dim();
        let xi = common::rational_point(&mut rng, m);
        let want = bform(l, &xi).map_err(|e| e.to_string())?.rank().map_err(|e| e.to_string())?;
        let xi0: Vec<f64> = xi.iter().map(rat_to_f64).collect();
        let dir = common::f64_point(&mut rng, m);
        let traj = coadjoint_flow(l, &xi0, &dir, 1.0, &cfg).map_err(|e| e.to_string())?;
        let ranks = flow_rank_profile(l, &traj, 1e-6).map_err(|e| e.to_string())?;
        ensure(ranks.iter().all(|&r| r == want), || {
            format!("triple {k} on {name}: rank {want} not conserved")
        })?;
    }

    let mut exp_res: f64 = 0.0;
    let mut eig_res: f64 = 0.0;
    for _ in 0..20 {
        let n = 4;
        let a = Matrix::from_vec(n, n, (0..n * n).map(|_| rng.gen_range(-2.0..2.0)).collect())
            .map_err(|e| e.to_string())?;
        let prod = matrix_exp_numeric(&a, 1e-14)
            .and_then(|e| e.try_mul(&matrix_exp_numeric(&a.scale(&-1.0), 1e-14)?))
            .map_err(|e| e.to_string())?;
        exp_res = exp_res.max(max_abs_diff(&prod, &Matrix::identity(n)));

        // eigenvalues 1..=3 and 2 ± i, hidden by a unimodular change of basis
        let mut t: Matrix<Rat> = Matrix::zeros(5, 5);
        for i in 0..3 {
            t[(i, i)] = int(i as i64 + 1);
        }
        t[(3, 3)] = int(2);
        t[(4, 4)] = int(2);
        t[(3, 4)] = int(-1);
        t[(4, 3)] = int(1);
        for i in 0..5 {
            for j in i + 1..5 {
                if !(i == 3 && j == 4) {
                    t[(i, j)] = int(rng.gen_range(-2..=2));
                }
            }
        }
        let (p, pinv) = common::random_conjugator::<Rat>(&mut rng, 5);
        let c = common::conjugate(&t, &p, &pinv);
        let ev = eigenvalues_numeric(&c, 1e-10).map_err(|e| e.to_string())?;
        let exact = [
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(3.0, 0.0),
            Complex64::new(2.0, 1.0),
            Complex64::new(2.0, -1.0),
        ];
        ensure(ev.len() == 5, || format!("{} eigenvalues", ev.len()))?;
        for z in &exact {
            let d = ev.iter().map(|w| (w - z).norm()).fold(f64::INFINITY, f64::min);
            eig_res = eig_res.max(d);
        }
    }
    ensure(exp_res <= 1e-8, || format!("exp residual {exp_res:e}"))?;
    ensure(eig_res <= 1e-8, || format!("eigenvalue residual {eig_res:e}"))?;
    within(suite_start, Duration::from_secs(180), "whole suite")?;
    Ok(format!(
        "50 flows; exp residual {exp_res:.1e}; eig residual {eig_res:.1e}; suite {:.1?}",
        suite_start.elapsed()
    ))
}

fn count_identity(ledger: &CountLedger) -> Outcome {
    ensure(ledger.failed.is_empty(), || format!("fails on {:?}", ledger.failed))?;
    ensure(ledger.checked > 0, || "nothing checked".into())?;
    Ok(format!("{} groupoids", ledger.checked))
}

fn report(id: usize, name: &str, start: Instant, outcome: &Outcome) -> bool {
    let t = start.elapsed();
    match outcome {
        Ok(detail) => {
            println!("[PASS] {id:>2} {name} ({t:.2?}): {detail}");
            true
        }
        Err(why) => {
            println!("[FAIL] {id:>2} {name} ({t:.2?}): {why}");
            false
        }
    }
}

fn main() -> ExitCode {
    let suite = Instant::now();
    let mut ledger = CountLedger::default();
    let mut ok = true;
    let mut run = |id: usize, name: &str, f: &mut dyn FnMut() -> Outcome| {
        let start = Instant::now();
        let outcome = f();
        ok &= report(id, name, start, &outcome);
    };
    run(1, "cascade classification", &mut cascade_table);
    run(2, "open-orbit census evenness", &mut census_evenness);
    run(3, "exponential-type verdicts", &mut exponentiality);
    run(4, "dual-weight negation", &mut dual_weights);
    run(5, "jump-index stratification", &mut jump_strata);
    run(6, "pullback isomorphism fuzz", &mut || pullback_fuzz(&mut ledger));
    run(7, "single block iff pair groupoid", &mut || single_block(&mut ledger));
    run(8, "faithful iff dense orbit", &mut || faithfulness(&mut ledger));
    run(9, "morphism-count identity", &mut || count_identity(&ledger));
    run(10, "ax+b tautological strata", &mut axb_strata);
    run(11, "numeric guardrails", &mut || numeric_guardrails(suite));
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
