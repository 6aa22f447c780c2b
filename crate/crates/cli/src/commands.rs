use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use orbitfold::cascade::{build_root_system, open_orbit_rank_test, CascadeError, Family};
use orbitfold::coadjoint::{
    bform, frobenius_test, isotropy_algebra, minus_one_probe, open_component_census, orbit_dimension, FlowConfig,
};
use orbitfold::exact_la::{format_rat, parse_rat, Rat};
use orbitfold::grpd::{
    algebra_profile, classify, equivalence_bimodule_verify, filtration_from_json, load_groupoid,
    morphism_count_identity, orbits_isotropy, piecewise_decompose, pullback_isomorphism_verify,
    regular_representation_faithful, theta_from_json, Filtration, FiniteGroupoid, GrpdError,
};
use orbitfold::lie::{
    algebra_from_json, module_from_json, realify_module, AnyLieAlgebra, AnyLieModule, LieAlgebra, LieError,
    LieField, LieModule, Subspace,
};
use orbitfold::roots_exp::{exponential_type_test, module_weights};
use orbitfold::stratify::{stratify_module, StratConfig};

use crate::{CliError, Common, GrpdOp, Inputs, LieOp, Outcome};

fn variant<E: std::fmt::Debug>(e: &E) -> String {
    format!("{e:?}")
        .split([' ', '(', '{'])
        .next()
        .unwrap_or_default()
        .to_string()
}

impl From<LieError> for CliError {
    fn from(e: LieError) -> Self {
        match e {
            LieError::Input(m) => CliError::Usage(m),
            e => CliError::domain(&variant(&e), e.to_string()),
        }
    }
}

impl From<GrpdError> for CliError {
    fn from(e: GrpdError) -> Self {
        match e {
            GrpdError::Input(m) => CliError::Usage(m),
            e => CliError::domain(&variant(&e), e.to_string()),
        }
    }
}

impl From<CascadeError> for CliError {
    fn from(e: CascadeError) -> Self {
        CliError::domain(&variant(&e), e.to_string())
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn ok(result: Value) -> Result<Outcome, CliError> {
    Ok(Outcome {
        result,
        warnings: Vec::new(),
    })
}

fn subspace_json<F: LieField>(s: &Subspace<F>) -> Value {
    let basis: Vec<Vec<String>> = s
        .basis()
        .iter()
        .map(|v| v.iter().map(|x| x.format()).collect())
        .collect();
    json!({"dim": s.dim(), "basis": basis})
}

fn load_algebra(inputs: &mut Inputs, path: &std::path::PathBuf) -> Result<AnyLieAlgebra, CliError> {
    let text = inputs.read(path)?;
    Ok(algebra_from_json(&text)?)
}

/// The real form of the module (adjoint when no file is given).
fn load_real_module(
    inputs: &mut Inputs,
    alg: &AnyLieAlgebra,
    real: &Arc<LieAlgebra<Rat>>,
    path: Option<&std::path::PathBuf>,
) -> Result<Option<LieModule<Rat>>, CliError> {
    let Some(path) = path else {
        return Ok(None);
    };
    let text = inputs.read(path)?;
    Ok(Some(match module_from_json(&text, alg)? {
        AnyLieModule::Real(m) => LieModule::new(real.clone(), m.actions().to_vec())?,
        AnyLieModule::Complex(m) => realify_module(&m, real.clone())?,
    }))
}

fn validate_json<F: LieField>(l: &LieAlgebra<F>) -> Value {
    json!({
        "valid": true,
        "dim": l.dim(),
        "field": l.ground_field(),
        "basis": l.names(),
        "solvable": l.is_solvable(),
        "nilpotent": l.is_nilpotent(),
    })
}

fn series_json<F: LieField>(l: &LieAlgebra<F>) -> Result<Value, CliError> {
    let s = l.structure_series()?;
    let ucs = l.upper_central_series()?;
    Ok(json!({
        "derived_series": s.derived_series.iter().map(subspace_json).collect::<Vec<_>>(),
        "lower_central_series": s.lower_central_series.iter().map(subspace_json).collect::<Vec<_>>(),
        "upper_central_series": ucs.iter().map(subspace_json).collect::<Vec<_>>(),
        "center": subspace_json(&s.center),
        "solvable": s.is_solvable,
        "nilpotent": s.is_nilpotent,
    }))
}

fn parse_xi(s: &str, m: usize) -> Result<Vec<Rat>, CliError> {
    let xi = s
        .split(',')
        .map(|t| parse_rat(t.trim()).map_err(|e| CliError::Usage(format!("bad coordinate {t:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if xi.len() != m {
        return Err(CliError::Usage(format!("ξ has {} coordinates, the algebra has dimension {m}", xi.len())));
    }
    Ok(xi)
}

pub fn lie(op: &LieOp, common: &Common, inputs: &mut Inputs) -> Result<Outcome, CliError> {
    match op {
        LieOp::Validate { file } => match load_algebra(inputs, file)? {
            AnyLieAlgebra::Real(l) => ok(validate_json(&l)),
            AnyLieAlgebra::Complex(l) => ok(validate_json(&l)),
        },
        LieOp::Series { file } => match load_algebra(inputs, file)? {
            AnyLieAlgebra::Real(l) => ok(series_json(&l)?),
            AnyLieAlgebra::Complex(l) => ok(series_json(&l)?),
        },
        LieOp::Roots { file, module } => {
            let alg = load_algebra(inputs, file)?;
            let report = match (&alg, module) {
                (AnyLieAlgebra::Real(l), None) => module_weights(l, &LieModule::adjoint(Arc::new(l.clone())))?,
                (AnyLieAlgebra::Complex(l), None) => {
                    module_weights(l, &LieModule::adjoint(Arc::new(l.clone())))?
                }
                (_, Some(path)) => {
                    let text = inputs.read(path)?;
                    match module_from_json(&text, &alg)? {
                        AnyLieModule::Real(m) => module_weights(m.algebra(), &m)?,
                        AnyLieModule::Complex(m) => module_weights(m.algebra(), &m)?,
                    }
                }
            };
            let mut warnings = Vec::new();
            if report.heuristic {
                warnings.push("heuristic: some characteristic polynomial did not split over Q(i)".into());
            }
            Ok(Outcome {
                result: to_value(&report),
                warnings,
            })
        }
        LieOp::Exptest { file, module } => {
            let alg = load_algebra(inputs, file)?;
            let real = Arc::new(alg.to_real()?);
            let module = load_real_module(inputs, &alg, &real, module.as_ref())?
                .unwrap_or_else(|| LieModule::adjoint(real.clone()));
            let cert = exponential_type_test(&real, &module)?;
            let mut warnings = Vec::new();
            if matches!(alg, AnyLieAlgebra::Complex(_)) {
                warnings.push("complex algebra tested through its realification".into());
            }
            if cert.heuristic {
                warnings.push("heuristic: verdict rests on floating-point weights".into());
            }
            Ok(Outcome {
                result: to_value(&cert),
                warnings,
            })
        }
        LieOp::Coadjoint { file, xi } => {
            let l = load_algebra(inputs, file)?.to_real()?;
            let trials = common.samples.unwrap_or(16);
            let frob = frobenius_test(&l, trials, common.seed)?;
            let mut result = json!({"dim": l.dim(), "frobenius": to_value(&frob)});
            if let Some(xi) = xi {
                inputs.literal(xi);
                let xi = parse_xi(xi, l.dim())?;
                let b = bform(&l, &xi)?;
                let d = orbit_dimension(&l, &xi)?;
                result["point"] = json!({
                    "xi": xi.iter().map(format_rat).collect::<Vec<_>>(),
                    "bform": to_value(&b),
                    "orbit_dimension": d,
                    "isotropy": to_value(&isotropy_algebra(&l, &xi)?),
                    "open_orbit": d == l.dim(),
                });
            }
            let warnings = if frob.is_frobenius || l.dim() % 2 == 1 {
                Vec::new()
            } else {
                vec![format!(
                    "no nondegenerate functional found; a Frobenius algebra is missed with probability at most {:e}",
                    frob.false_negative_bound
                )]
            };
            Ok(Outcome { result, warnings })
        }
        LieOp::Census { file } => {
            let l = load_algebra(inputs, file)?.to_real()?;
            let cfg = flow_config(common);
            let c = open_component_census(&l, &cfg)?;
            Ok(Outcome {
                result: to_value(&c),
                warnings: c.warnings.clone(),
            })
        }
        LieOp::Stratify { file, module } => {
            let alg = load_algebra(inputs, file)?;
            let real = Arc::new(alg.to_real()?);
            let module = load_real_module(inputs, &alg, &real, module.as_ref())?
                .unwrap_or_else(|| LieModule::coadjoint(real.clone()));
            let mut cfg = StratConfig {
                seed: common.seed,
                ..StratConfig::default()
            };
            if let Some(s) = common.samples {
                cfg.samples = s;
            }
            let r = stratify_module(&real, &module, &cfg)?;
            Ok(Outcome {
                result: to_value(&r),
                warnings: r.notes.clone(),
            })
        }
        LieOp::ProbeMinusOne { file } => {
            let l = load_algebra(inputs, file)?.to_real()?;
            let r = minus_one_probe(&l, &flow_config(common))?;
            ok(to_value(&r))
        }
    }
}

fn flow_config(common: &Common) -> FlowConfig {
    let mut cfg = FlowConfig {
        seed: common.seed,
        ..FlowConfig::default()
    };
    if let Some(s) = common.samples {
        cfg.samples = s;
    }
    if let Some(t) = common.tol {
        cfg.tol = t;
    }
    cfg
}

pub fn cascade(family: &str, rank: usize, inputs: &mut Inputs) -> Result<Outcome, CliError> {
    inputs.literal(&format!("cascade {family} {rank}"));
    let fam = Family::parse(family).ok_or_else(|| CliError::Usage(format!("unknown family {family:?}")))?;
    let rs = build_root_system(fam, rank)?;
    ok(to_value(&open_orbit_rank_test(&rs)))
}

fn summary(g: &FiniteGroupoid) -> Value {
    let o = orbits_isotropy(g);
    json!({
        "objects": g.object_count(),
        "morphisms": g.morphism_count(),
        "orbits": o.orbits,
        "isotropy_orders": o.isotropy.iter().map(|i| i.order()).collect::<Vec<_>>(),
        "morphism_count_identity": morphism_count_identity(g),
    })
}

fn verified(flag: bool, what: &str) -> Result<(), CliError> {
    if flag {
        Ok(())
    } else {
        Err(CliError::domain("VerificationFailed", format!("{what} failed")))
    }
}

pub fn grpd(op: &GrpdOp, inputs: &mut Inputs) -> Result<Outcome, CliError> {
    let file = match op {
        GrpdOp::Validate { file }
        | GrpdOp::Classify { file }
        | GrpdOp::PullbackVerify { file }
        | GrpdOp::BimoduleVerify { file, .. }
        | GrpdOp::Decompose { file, .. }
        | GrpdOp::Profile { file, .. }
        | GrpdOp::Regrep { file, .. } => file,
    };
    let text = inputs.read(file)?;
    let loaded = load_groupoid(&text)?;
    let g = &loaded.groupoid;
    let filtration = |inputs: &mut Inputs, path: &Option<std::path::PathBuf>| -> Result<Option<Filtration>, CliError> {
        match path {
            Some(p) => Ok(Some(filtration_from_json(&inputs.read(p)?, g)?)),
            None => Ok(None),
        }
    };
    match op {
        GrpdOp::Validate { .. } => {
            let mut v = summary(g);
            v["valid"] = json!(true);
            v["from_action"] = json!(loaded.action.is_some());
            ok(v)
        }
        GrpdOp::Classify { .. } => {
            let mut v = to_value(&classify(g));
            v["summary"] = summary(g);
            ok(v)
        }
        GrpdOp::PullbackVerify { .. } => {
            let r = pullback_isomorphism_verify(g);
            verified(r.verified, "pullback isomorphism verification")?;
            ok(to_value(&r))
        }
        GrpdOp::BimoduleVerify { theta, .. } => {
            let (labels, theta) = match theta {
                Some(p) => theta_from_json(&inputs.read(p)?, g)?,
                None => (g.objects().to_vec(), (0..g.object_count()).collect()),
            };
            let (_, r) = equivalence_bimodule_verify(g, &labels, &theta)?;
            verified(r.all_passed, "equivalence bimodule verification")?;
            ok(to_value(&r))
        }
        GrpdOp::Decompose { filtration: f, .. } => {
            let f = filtration(inputs, f)?.unwrap_or_else(|| Filtration::trivial(g));
            let r = piecewise_decompose(g, &f)?;
            verified(r.verified, "piecewise pullback decomposition")?;
            ok(to_value(&r))
        }
        GrpdOp::Profile { filtration: f, .. } => {
            let f = filtration(inputs, f)?;
            let p = algebra_profile(g, f.as_ref());
            Ok(Outcome {
                result: to_value(&p),
                warnings: p.notes.clone(),
            })
        }
        GrpdOp::Regrep { object, .. } => {
            let objects: Vec<usize> = match object {
                Some(id) => {
                    inputs.literal(id);
                    vec![g
                        .object_index(id)
                        .ok_or_else(|| CliError::Usage(format!("unknown object id {id:?}")))?]
                }
                None => (0..g.object_count()).collect(),
            };
            let reps: Vec<Value> = objects
                .iter()
                .map(|&x| to_value(&regular_representation_faithful(g, x)))
                .collect();
            ok(json!({"representations": reps}))
        }
    }
}
