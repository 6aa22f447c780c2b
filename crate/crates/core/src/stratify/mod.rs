//! Jordan–Hölder flags, jump indices and orbit-dimension stratifications
//! of linear modules.

mod minors;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::exact_la::{format_rat, int, rat, Rat};
use crate::lie::{LieAlgebra, LieError, LieModule, Subspace};

pub use minors::{rank_conditions, MPoly, RankCondition};

pub type IndexSet = BTreeSet<usize>;

/// A full flag of ideals `0 = g₀ ⊂ g₁ ⊂ … ⊂ g_m = g` with `dim gⱼ = j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Flag {
    /// `X₁, …, X_m` with `gⱼ = span{X₁, …, Xⱼ}`.
    pub basis: Vec<Vec<Rat>>,
    pub members: Vec<Subspace<Rat>>,
}

impl Serialize for Flag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let basis: Vec<Vec<String>> = self
            .basis
            .iter()
            .map(|v| v.iter().map(format_rat).collect())
            .collect();
        basis.serialize(s)
    }
}

/// Flag of ideals refining the ascending central series.
///
/// Inside each step of the series the new vectors are taken from the
/// canonical basis of the larger term, last pivot first.
pub fn jordan_holder_flag(l: &LieAlgebra<Rat>) -> Result<Flag, LieError> {
    if !l.is_nilpotent() {
        return Err(LieError::NotNilpotent);
    }
    let m = l.dim();
    let ucs = l.upper_central_series()?;
    let mut basis: Vec<Vec<Rat>> = Vec::new();
    let mut span = Subspace::zero(m);
    for term in ucs.iter().skip(1) {
        for v in term.basis().iter().rev() {
            if span.contains(v) {
                continue;
            }
            basis.push(v.clone());
            span = Subspace::span(m, &basis)?;
        }
    }
    let members: Vec<Subspace<Rat>> = (0..=m)
        .map(|k| Subspace::span(m, &basis[..k]))
        .collect::<Result<_, _>>()?;
    for (k, g) in members.iter().enumerate() {
        if g.dim() != k || !l.is_ideal(g) {
            return Err(LieError::Input(format!("flag member {k} is not an ideal")));
        }
    }
    Ok(Flag { basis, members })
}

/// `e ⪯ e'` iff `min(e ∖ e') ≤ min(e' ∖ e)`, with `min ∅ = ∞`.
pub fn index_order_leq(e: &IndexSet, f: &IndexSet) -> bool {
    let a = e.difference(f).next();
    let b = f.difference(e).next();
    match (a, b) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(x), Some(y)) => x <= y,
    }
}

fn index_cmp(e: &IndexSet, f: &IndexSet) -> Ordering {
    match (index_order_leq(e, f), index_order_leq(f, e)) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Less,
        _ => Ordering::Greater,
    }
}

/// `J(ξ) = { j : g(ξ) + g_{j−1} ⊊ g(ξ) + gⱼ }`.
pub fn jump_index(l: &LieAlgebra<Rat>, flag: &Flag, xi: &[Rat]) -> Result<IndexSet, LieError> {
    let iso = crate::coadjoint::isotropy_algebra(l, xi)?;
    jump_index_of(&iso, flag)
}

fn jump_index_of(iso: &Subspace<Rat>, flag: &Flag) -> Result<IndexSet, LieError> {
    let mut out = IndexSet::new();
    let mut prev = iso.dim();
    for (j, g) in flag.members.iter().enumerate().skip(1) {
        let d = iso.sum(g)?.dim();
        if d > prev {
            out.insert(j);
        }
        prev = d;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StratConfig {
    pub samples: usize,
    pub seed: u64,
    /// Grid `{−r, …, r}^n` used as a cross-check when `n ≤ max_grid_dim`.
    pub grid_radius: i64,
    pub max_grid_dim: usize,
    pub perturbations: usize,
}

impl Default for StratConfig {
    fn default() -> Self {
        StratConfig {
            samples: 200,
            seed: 0,
            grid_radius: 2,
            max_grid_dim: 6,
            perturbations: 4,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Layer {
    pub orbit_dimension: usize,
    pub isotropy_dimension: usize,
    pub sample_count: usize,
    pub grid_count: usize,
    #[serde(serialize_with = "ser_vecs")]
    pub representatives: Vec<Vec<Rat>>,
    /// Isotropy algebra of the first representative.
    #[serde(serialize_with = "ser_subspace")]
    pub isotropy: Subspace<Rat>,
    /// Jump-index sets seen on this layer (nilpotent coadjoint case).
    pub index_sets: Vec<IndexSet>,
    /// Exact rank conditions describing the layer (small dimensions only).
    pub condition: Option<RankCondition>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OpennessProbe {
    /// Number of leading layers forming `D_k`.
    pub k: usize,
    pub probes: usize,
    pub passed: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FirstPiece {
    pub e1: IndexSet,
    pub sample_count: usize,
    pub grid_count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct StratReport {
    pub algebra_dimension: usize,
    pub module_dimension: usize,
    pub coadjoint: bool,
    pub layers: Vec<Layer>,
    pub openness: Vec<OpennessProbe>,
    pub flag: Option<Flag>,
    pub first_piece: Option<FirstPiece>,
    pub samples: usize,
    pub grid_points: usize,
    pub notes: Vec<String>,
}

impl StratReport {
    /// The layer containing points of the given orbit dimension.
    pub fn layer(&self, orbit_dimension: usize) -> Option<&Layer> {
        self.layers.iter().find(|l| l.orbit_dimension == orbit_dimension)
    }
}

fn ser_vecs<S: serde::Serializer>(v: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
    let out: Vec<Vec<String>> = v.iter().map(|r| r.iter().map(format_rat).collect()).collect();
    out.serialize(s)
}

fn ser_subspace<S: serde::Serializer>(v: &Subspace<Rat>, s: S) -> Result<S::Ok, S::Error> {
    v.serialize(s)
}

struct Point {
    v: Vec<Rat>,
    from_grid: bool,
    iso: Subspace<Rat>,
    jumps: Option<IndexSet>,
}

fn grid(n: usize, r: i64) -> Vec<Vec<Rat>> {
    let side = (2 * r + 1) as usize;
    let total = side.pow(n as u32);
    (0..total)
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

fn module_isotropy(module: &LieModule<Rat>, v: &[Rat]) -> Result<Subspace<Rat>, LieError> {
    let m = module.algebra().dim();
    let (_, ker) = module.evaluation_matrix(v)?.rank_kernel()?;
    Ok(Subspace::span(m, &ker)?)
}

/// Orbit-dimension stratification of a module over a solvable algebra.
pub fn stratify_module(
    l: &LieAlgebra<Rat>,
    module: &LieModule<Rat>,
    cfg: &StratConfig,
) -> Result<StratReport, LieError> {
    if !l.is_solvable() {
        return Err(LieError::NotSolvable);
    }
    if module.algebra().as_ref() != l {
        return Err(LieError::Input("module is over a different algebra".into()));
    }
    let m = l.dim();
    let n = module.dim();
    let coadjoint = module.actions() == LieModule::coadjoint(module.algebra().clone()).actions();
    let flag = if coadjoint && l.is_nilpotent() {
        Some(jordan_holder_flag(l)?)
    } else {
        None
    };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut raw: Vec<(Vec<Rat>, bool)> = (0..cfg.samples)
        .map(|_| ((0..n).map(|_| int(rng.gen_range(-10..=10))).collect(), false))
        .collect();
    let use_grid = n <= cfg.max_grid_dim;
    if use_grid {
        raw.extend(grid(n, cfg.grid_radius).into_iter().map(|v| (v, true)));
    }
    let points: Vec<Point> = raw
        .into_par_iter()
        .map(|(v, from_grid)| {
            let iso = module_isotropy(module, &v)?;
            let jumps = match &flag {
                Some(f) => Some(jump_index_of(&iso, f)?),
                None => None,
            };
            Ok(Point {
                v,
                from_grid,
                iso,
                jumps,
            })
        })
        .collect::<Result<_, LieError>>()?;

    let mut by_dim: BTreeMap<usize, Vec<&Point>> = BTreeMap::new();
    for p in &points {
        by_dim.entry(m - p.iso.dim()).or_default().push(p);
    }
    let conditions = if n <= 4 && m <= 4 {
        Some(rank_conditions(module, if coadjoint { "ξ" } else { "v" }))
    } else {
        None
    };
    let mut layers = Vec::new();
    for (&d, pts) in by_dim.iter().rev() {
        let mut index_sets: Vec<IndexSet> = Vec::new();
        for p in pts {
            if let Some(j) = &p.jumps {
                if !index_sets.contains(j) {
                    index_sets.push(j.clone());
                }
            }
        }
        index_sets.sort_by(index_cmp);
        let reps: Vec<Vec<Rat>> = pts
            .iter()
            .filter(|p| !p.from_grid)
            .chain(pts.iter().filter(|p| p.from_grid))
            .take(4)
            .map(|p| p.v.clone())
            .collect();
        layers.push(Layer {
            orbit_dimension: d,
            isotropy_dimension: m - d,
            sample_count: pts.iter().filter(|p| !p.from_grid).count(),
            grid_count: pts.iter().filter(|p| p.from_grid).count(),
            isotropy: pts[0].iso.clone(),
            representatives: reps,
            index_sets,
            condition: conditions
                .as_ref()
                .and_then(|c| c.iter().find(|c| c.rank == d).cloned()),
        });
    }

    // D_k is open only if small perturbations of its points stay in it
    let mut openness = Vec::new();
    for k in 1..=layers.len() {
        let floor = layers[k - 1].orbit_dimension;
        let mut probes = 0;
        let mut passed = 0;
        for p in points.iter().filter(|p| m - p.iso.dim() >= floor).take(64) {
            for _ in 0..cfg.perturbations {
                let q: Vec<Rat> = p
                    .v
                    .iter()
                    .map(|x| x.clone() + rat(rng.gen_range(-1000..=1000), 1_000_000))
                    .collect();
                probes += 1;
                if m - module_isotropy(module, &q)?.dim() >= floor {
                    passed += 1;
                }
            }
        }
        openness.push(OpennessProbe { k, probes, passed });
    }

    let first_piece = match &flag {
        Some(_) => {
            let min_of = |grid_pass: bool| -> Option<IndexSet> {
                points
                    .iter()
                    .filter(|p| p.from_grid == grid_pass)
                    .filter_map(|p| p.jumps.clone())
                    .min_by(index_cmp)
            };
            let from_samples = min_of(false);
            let from_grid = if use_grid { min_of(true) } else { None };
            let e1 = match (from_samples, from_grid) {
                (Some(a), Some(b)) if a != b => {
                    return Err(LieError::Input(format!(
                        "first index set disagrees: samples give {a:?}, grid gives {b:?}"
                    )))
                }
                (Some(a), _) | (None, Some(a)) => a,
                (None, None) => IndexSet::new(),
            };
            let count = |g: bool| {
                points
                    .iter()
                    .filter(|p| p.from_grid == g && p.jumps.as_ref() == Some(&e1))
                    .count()
            };
            Some(FirstPiece {
                sample_count: count(false),
                grid_count: count(true),
                e1,
            })
        }
        None => None,
    };

    let samples = points.iter().filter(|p| !p.from_grid).count();
    Ok(StratReport {
        algebra_dimension: m,
        module_dimension: n,
        coadjoint,
        layers,
        openness,
        flag,
        first_piece,
        samples,
        grid_points: points.len() - samples,
        notes: vec![
            "layers are certified on sampled points only; no continuous cross-sections are constructed"
                .into(),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::corpus;
    use std::sync::Arc;

    fn set(xs: &[usize]) -> IndexSet {
        xs.iter().copied().collect()
    }

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn heisenberg_flag() {
        let f = jordan_holder_flag(&corpus::heisenberg()).unwrap();
        assert_eq!(f.basis, vec![v(&[0, 0, 1]), v(&[0, 1, 0]), v(&[1, 0, 0])]);
        let f4 = jordan_holder_flag(&corpus::filiform4()).unwrap();
        assert_eq!(f4.basis[0], v(&[0, 0, 0, 1]));
        assert_eq!(f4.basis[1], v(&[0, 0, 1, 0]));
        let ab = LieAlgebra::<Rat>::abelian(vec!["a".into(), "b".into()]);
        assert_eq!(jordan_holder_flag(&ab).unwrap().basis, vec![v(&[0, 1]), v(&[1, 0])]);
        assert_eq!(
            jordan_holder_flag(&corpus::ax_plus_b()).unwrap_err(),
            LieError::NotNilpotent
        );
    }

    #[test]
    fn index_order() {
        assert!(index_order_leq(&set(&[1]), &set(&[2])));
        assert!(!index_order_leq(&set(&[2]), &set(&[1])));
        assert!(index_order_leq(&set(&[2, 3]), &set(&[])));
        assert!(index_order_leq(&set(&[4, 5]), &set(&[4, 5])));
    }

    #[test]
    fn heisenberg_jumps() {
        let h = corpus::heisenberg();
        let f = jordan_holder_flag(&h).unwrap();
        assert_eq!(jump_index(&h, &f, &v(&[0, 0, 1])).unwrap(), set(&[2, 3]));
        assert_eq!(jump_index(&h, &f, &v(&[1, 0, 0])).unwrap(), set(&[]));
        assert_eq!(jump_index(&h, &f, &v(&[0, 0, 0])).unwrap(), set(&[]));
    }

    #[test]
    fn heisenberg_coadjoint_strata() {
        let h = corpus::heisenberg();
        let co = LieModule::coadjoint(Arc::new(h.clone()));
        let r = stratify_module(&h, &co, &StratConfig::default()).unwrap();
        assert!(r.coadjoint);
        let dims: Vec<usize> = r.layers.iter().map(|l| l.orbit_dimension).collect();
        assert_eq!(dims, vec![2, 0]);
        assert_eq!(r.first_piece.as_ref().unwrap().e1, set(&[2, 3]));
        assert!(r.openness.iter().all(|p| p.passed == p.probes));
        let top = r.layer(2).unwrap();
        assert_eq!(top.index_sets, vec![set(&[2, 3])]);
        assert_eq!(r.layer(0).unwrap().condition.as_ref().unwrap().vanishing, vec!["ξ3"]);
    }

    #[test]
    fn axb_tautological_strata() {
        let m = corpus::axb_tautological();
        let r = stratify_module(m.algebra(), &m, &StratConfig::default()).unwrap();
        let iso: Vec<usize> = r.layers.iter().map(|l| l.isotropy_dimension).collect();
        assert_eq!(iso, vec![0, 1, 2]);
        assert_eq!(r.layer(1).unwrap().isotropy, Subspace::span(2, &[v(&[0, 1])]).unwrap());
        assert!(r.first_piece.is_none());
        let top = r.layer(2).unwrap().condition.clone().unwrap();
        assert_eq!(top.nonvanishing, vec!["v2^2"]);
    }
}
