use std::sync::Arc;

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::exact_la::{
    eigenvalues_numeric, f64_to_rat_with_denominator, format_rat, matrix_exp_numeric, rat_to_f64,
    Matrix, Rat,
};
use crate::lie::{LieAlgebra, LieError, LieModule};
use crate::roots_exp::exponential_type_test;

use super::flow::{coadjoint_flow, FlowConfig};
use super::sturm::{count_roots, interpolate};
use super::{bform, bform_numeric, random_functional};

/// Members of a component tried per connection attempt.
const PROBE_MEMBERS: usize = 6;
/// Components with fewer sampled members make the census a lower bound.
const THIN_COMPONENT: usize = 3;

fn det_b(l: &LieAlgebra<Rat>, xi: &[Rat]) -> Rat {
    bform(l, xi)
        .and_then(|b| Ok(b.det()?))
        .expect("functional has the algebra dimension")
}

/// Whether the segment from `a` to `b` stays in the nondegenerate set.
///
/// `s ↦ det B_{(1−s)a + sb}` is a polynomial of degree at most `m`; it is
/// interpolated exactly and its roots in `[0, 1]` are counted by Sturm
/// sequences.
pub fn line_connected(l: &LieAlgebra<Rat>, a: &[Rat], b: &[Rat]) -> bool {
    let m = l.dim();
    let d = m.max(1) as i64;
    let values: Vec<Rat> = (0..=d)
        .map(|j| {
            let s = Rat::new(j.into(), d.into());
            let one_minus = Rat::from_integer(1.into()) - &s;
            let xi: Vec<Rat> = a
                .iter()
                .zip(b)
                .map(|(x, y)| one_minus.clone() * x + s.clone() * y)
                .collect();
            det_b(l, &xi)
        })
        .collect();
    if values[0].is_zero() || values[d as usize].is_zero() {
        return false;
    }
    let p = interpolate(&values);
    count_roots(&p, &Rat::zero(), &Rat::from_integer(1.into())) == 0
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // smaller index stays the root so the merge order is canonical
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(target: &[f64], candidates: &[usize], coords: &[Vec<f64>], k: usize) -> Vec<usize> {
    let mut c: Vec<usize> = candidates.to_vec();
    c.sort_by(|&i, &j| {
        dist2(target, &coords[i])
            .total_cmp(&dist2(target, &coords[j]))
            .then(i.cmp(&j))
    });
    c.truncate(k);
    c
}

/// Connected components of the nondegenerate set `{ξ : det B_ξ ≠ 0}` as
/// seen by sampling.
#[derive(Debug, Clone)]
pub struct ComponentCensus {
    pub open_components: usize,
    pub representatives: Vec<Vec<Rat>>,
    pub component_sizes: Vec<usize>,
    /// `(c, d)`: the negative of the representative of `c` lies in `d`.
    pub negation_pairs: Vec<(usize, usize)>,
    /// Whether the algebra passed the exponential-type test; evenness is
    /// only claimed in that case.
    pub exponential: bool,
    pub even: Option<bool>,
    pub samples_drawn: usize,
    pub samples_nondegenerate: usize,
    pub lower_bound: bool,
    pub warnings: Vec<String>,
}

#[derive(Serialize)]
struct CensusJson<'a> {
    open_components: usize,
    representatives: Vec<Vec<String>>,
    component_sizes: &'a [usize],
    negation_pairs: &'a [(usize, usize)],
    exponential: bool,
    even: Option<bool>,
    samples_drawn: usize,
    samples_nondegenerate: usize,
    lower_bound: bool,
    counts: &'static str,
}

impl Serialize for ComponentCensus {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CensusJson {
            open_components: self.open_components,
            representatives: self
                .representatives
                .iter()
                .map(|r| r.iter().map(format_rat).collect())
                .collect(),
            component_sizes: &self.component_sizes,
            negation_pairs: &self.negation_pairs,
            exponential: self.exponential,
            even: self.even,
            samples_drawn: self.samples_drawn,
            samples_nondegenerate: self.samples_nondegenerate,
            lower_bound: self.lower_bound,
            counts: "components of the nondegenerate set",
        }
        .serialize(s)
    }
}

pub fn open_component_census(l: &LieAlgebra<Rat>, cfg: &FlowConfig) -> Result<ComponentCensus, LieError> {
    if !l.is_solvable() {
        return Err(LieError::NotSolvable);
    }
    let m = l.dim();
    let exp = exponential_type_test(l, &LieModule::adjoint(Arc::new(l.clone())))?;
    let mut warnings = Vec::new();
    if exp.heuristic {
        warnings.push("exponential-type verdict used the float path".to_string());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let drawn: Vec<Vec<Rat>> = (0..cfg.samples)
        .map(|_| random_functional(&mut rng, m, 10))
        .collect();
    let keep: Vec<bool> = if m % 2 == 1 {
        vec![false; drawn.len()]
    } else {
        drawn.par_iter().map(|xi| !det_b(l, xi).is_zero()).collect()
    };
    let kept: Vec<Vec<Rat>> = drawn
        .iter()
        .zip(&keep)
        .filter(|(_, k)| **k)
        .map(|(x, _)| x.clone())
        .collect();
    let coords: Vec<Vec<f64>> = kept
        .iter()
        .map(|x| x.iter().map(rat_to_f64).collect())
        .collect();
    let n = kept.len();

    let mut uf = UnionFind((0..n).collect());
    let members_of = |uf: &mut UnionFind, upto: usize| -> Vec<(usize, Vec<usize>)> {
        let mut comps: Vec<(usize, Vec<usize>)> = Vec::new();
        for j in 0..upto {
            let r = uf.find(j);
            match comps.iter_mut().find(|c| c.0 == r) {
                Some(c) => c.1.push(j),
                None => comps.push((r, vec![j])),
            }
        }
        comps
    };

    // straight-line probes against the nearest members of each component
    for i in 0..n {
        for (_, members) in members_of(&mut uf, i) {
            if uf.find(members[0]) == uf.find(i) {
                continue;
            }
            for j in nearest(&coords[i], &members, &coords, PROBE_MEMBERS) {
                if line_connected(l, &kept[i], &kept[j]) {
                    uf.union(i, j);
                    break;
                }
            }
        }
    }

    // flow probes: move along each basis direction, then try straight lines
    let comps = members_of(&mut uf, n);
    if comps.len() > 1 {
        for (_, a_members) in &comps {
            for &a in a_members.iter().take(PROBE_MEMBERS) {
                for q in flow_neighbours(l, &coords[a], cfg)? {
                    for (_, b_members) in members_of(&mut uf, n) {
                        if uf.find(b_members[0]) == uf.find(a) {
                            continue;
                        }
                        let qf: Vec<f64> = q.iter().map(rat_to_f64).collect();
                        if nearest(&qf, &b_members, &coords, PROBE_MEMBERS)
                            .into_iter()
                            .any(|b| line_connected(l, &q, &kept[b]))
                        {
                            uf.union(a, b_members[0]);
                        }
                    }
                }
            }
        }
    }

    let comps = members_of(&mut uf, n);
    let representatives: Vec<Vec<Rat>> = comps.iter().map(|c| kept[c.1[0]].clone()).collect();
    let component_sizes: Vec<usize> = comps.iter().map(|c| c.1.len()).collect();

    let mut negation_pairs = Vec::new();
    let mut unmatched = false;
    for (ci, rep) in representatives.iter().enumerate() {
        let neg: Vec<Rat> = rep.iter().map(|x| -x.clone()).collect();
        let negf: Vec<f64> = neg.iter().map(rat_to_f64).collect();
        let partner = comps.iter().position(|(_, members)| {
            nearest(&negf, members, &coords, PROBE_MEMBERS)
                .into_iter()
                .any(|b| line_connected(l, &neg, &kept[b]))
        });
        match partner {
            Some(d) => negation_pairs.push((ci, d)),
            None => unmatched = true,
        }
    }
    if unmatched {
        warnings.push("some negated representative matched no sampled component".into());
    }
    let thin = component_sizes.iter().any(|&s| s < THIN_COMPONENT);
    if thin {
        warnings.push("a component holds very few samples".into());
    }
    let involution_ok = !unmatched
        && negation_pairs.iter().all(|&(c, d)| {
            c != d && negation_pairs.iter().any(|&(x, y)| x == d && y == c)
        });
    let even = exp
        .exponential
        .then_some(comps.len() % 2 == 0 && involution_ok);
    Ok(ComponentCensus {
        open_components: comps.len(),
        representatives,
        component_sizes,
        negation_pairs,
        exponential: exp.exponential,
        even,
        samples_drawn: drawn.len(),
        samples_nondegenerate: n,
        lower_bound: unmatched || thin,
        warnings,
    })
}

/// Rational points near the endpoints of the flows from `xi` along each
/// basis direction, kept only if `B` stays nondegenerate between the
/// float endpoint and its rounding.
fn flow_neighbours(l: &LieAlgebra<Rat>, xi: &[f64], cfg: &FlowConfig) -> Result<Vec<Vec<Rat>>, LieError> {
    let m = l.dim();
    let mut out = Vec::new();
    for d in 0..m {
        let mut x = vec![0.0; m];
        x[d] = 1.0;
        for t in [-cfg.probe_time, cfg.probe_time] {
            let end = coadjoint_flow(l, xi, &x, t, cfg)?.last().to_vec();
            let Some(q) = end
                .iter()
                .map(|v| f64_to_rat_with_denominator(*v, 1000))
                .collect::<Option<Vec<Rat>>>()
            else {
                continue;
            };
            let qf: Vec<f64> = q.iter().map(rat_to_f64).collect();
            let ok = (0..=8).all(|k| {
                let s = k as f64 / 8.0;
                let p: Vec<f64> = end.iter().zip(&qf).map(|(a, b)| (1.0 - s) * a + s * b).collect();
                let det = float_det(&bform_numeric(l, &p).expect("dimension matches"));
                det.abs() > cfg.tol
            });
            if ok && !det_b(l, &q).is_zero() {
                out.push(q);
            }
        }
    }
    Ok(out)
}

fn float_det(b: &Matrix<f64>) -> f64 {
    let n = b.rows();
    let mut a = b.clone();
    let mut det = 1.0;
    for c in 0..n {
        let Some(p) = (c..n).max_by(|&i, &j| a[(i, c)].abs().total_cmp(&a[(j, c)].abs())) else {
            return 0.0;
        };
        if a[(p, c)] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap_rows(p, c);
            det = -det;
        }
        det *= a[(c, c)];
        for i in c + 1..n {
            let f = a[(i, c)] / a[(c, c)];
            for j in c..n {
                let v = a[(c, j)];
                a[(i, j)] -= f * v;
            }
        }
    }
    det
}

/// Result of scanning `exp(ad x)` for the eigenvalue `−1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinusOneReport {
    pub found: bool,
    pub witness: Option<Vec<f64>>,
    pub points_scanned: usize,
    pub points_skipped: usize,
}

/// Scans `x = t·d` over basis and random directions `d` and a time grid
/// containing rational multiples of `π`, looking for an eigenvalue of
/// `exp(ad x)` within `1e−6` of `−1`.
pub fn minus_one_probe(l: &LieAlgebra<Rat>, cfg: &FlowConfig) -> Result<MinusOneReport, LieError> {
    let m = l.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut dirs: Vec<Vec<f64>> = (0..m)
        .map(|d| {
            let mut v = vec![0.0; m];
            v[d] = 1.0;
            v
        })
        .collect();
    for _ in 0..8 {
        dirs.push((0..m).map(|_| rng.gen_range(-4i64..=4) as f64 / 2.0).collect());
    }
    let mut times: Vec<f64> = (1..=16).map(|k| k as f64 * std::f64::consts::PI / 4.0).collect();
    times.extend((1..=12).map(|k| k as f64 / 2.0));
    let times: Vec<f64> = times.iter().flat_map(|&t| [t, -t]).collect();

    let mut scanned = 0;
    let mut skipped = 0;
    for d in &dirs {
        if d.iter().all(|v| *v == 0.0) {
            continue;
        }
        for &t in &times {
            let x: Vec<f64> = d.iter().map(|v| v * t).collect();
            let ad = ad_numeric(l, &x);
            let spectrum = matrix_exp_numeric(&ad, 1e-13).and_then(|e| eigenvalues_numeric(&e, 1e-4));
            scanned += 1;
            match spectrum {
                Ok(eig) => {
                    if eig.iter().any(|z| (z - Complex64::new(-1.0, 0.0)).norm() < 1e-6) {
                        return Ok(MinusOneReport {
                            found: true,
                            witness: Some(x),
                            points_scanned: scanned,
                            points_skipped: skipped,
                        });
                    }
                }
                Err(_) => skipped += 1,
            }
        }
    }
    Ok(MinusOneReport {
        found: false,
        witness: None,
        points_scanned: scanned,
        points_skipped: skipped,
    })
}

fn ad_numeric(l: &LieAlgebra<Rat>, x: &[f64]) -> Matrix<f64> {
    let m = l.dim();
    let mut ad = Matrix::zeros(m, m);
    for (i, xi) in x.iter().enumerate() {
        for j in 0..m {
            for k in 0..m {
                let c = l.c(i, j, k);
                if !c.is_zero() {
                    ad[(k, j)] += xi * rat_to_f64(c);
                }
            }
        }
    }
    ad
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_la::int;
    use crate::lie::corpus;

    fn v(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn line_probes() {
        let a = corpus::ax_plus_b();
        assert!(line_connected(&a, &v(&[3, 1]), &v(&[-7, 4])));
        assert!(!line_connected(&a, &v(&[3, 1]), &v(&[3, -1])));
        let b = corpus::realified_borel();
        // the segment from ξ to −ξ passes through 0
        assert!(!line_connected(&b, &v(&[1, 1, 0, 0]), &v(&[-1, -1, 0, 0])));
        assert!(line_connected(&b, &v(&[1, 1, 0, 0]), &v(&[0, 0, 1, 1])));
    }

    #[test]
    fn small_census() {
        let cfg = FlowConfig {
            samples: 64,
            ..FlowConfig::default()
        };
        let c = open_component_census(&corpus::ax_plus_b(), &cfg).unwrap();
        assert_eq!(c.open_components, 2);
        assert_eq!(c.even, Some(true));
        let h = open_component_census(&corpus::heisenberg(), &cfg).unwrap();
        assert_eq!(h.open_components, 0);
    }

    #[test]
    fn minus_one() {
        let e2 = minus_one_probe(&corpus::e2(), &FlowConfig::default()).unwrap();
        assert!(e2.found);
        let w = e2.witness.unwrap();
        assert!((w[0].abs() - std::f64::consts::PI).abs() < 1e-12);
        assert!(!minus_one_probe(&corpus::ax_plus_b(), &FlowConfig::default()).unwrap().found);
        assert!(!minus_one_probe(&corpus::heisenberg(), &FlowConfig::default()).unwrap().found);
    }
}
