//! Weights of modules over solvable algebras and the exponential-type test.

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::exact_la::{
    charpoly_exact_roots, cmp_gauss, eigenvalues_numeric, format_rat, GaussRat, Matrix, Rat,
};
use crate::lie::{LieAlgebra, LieError, LieField, LieModule};

/// Tolerance used when a characteristic polynomial does not split over ℚ(i).
pub const FLOAT_FALLBACK_TOL: f64 = 1e-9;

/// A weight `λ: g → ℂ`, stored by its values on the basis.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightValues {
    Exact(Vec<GaussRat>),
    Approx(Vec<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootFunctional {
    pub values: WeightValues,
    pub multiplicity: usize,
}

impl RootFunctional {
    pub fn is_exact(&self) -> bool {
        matches!(self.values, WeightValues::Exact(_))
    }

    pub fn exact(&self) -> Option<&[GaussRat]> {
        match &self.values {
            WeightValues::Exact(v) => Some(v),
            WeightValues::Approx(_) => None,
        }
    }

    /// Real and imaginary parts as rational functionals (exact weights only).
    pub fn parts(&self) -> Option<(Vec<Rat>, Vec<Rat>)> {
        self.exact().map(|v| {
            (
                v.iter().map(|z| z.re.clone()).collect(),
                v.iter().map(|z| z.im.clone()).collect(),
            )
        })
    }

    pub fn approx(&self) -> Vec<Complex64> {
        match &self.values {
            WeightValues::Exact(v) => v.iter().map(crate::exact_la::Field::to_c64).collect(),
            WeightValues::Approx(v) => v.clone(),
        }
    }
}

#[derive(Serialize)]
struct RootJson {
    re: Vec<serde_json::Value>,
    im: Vec<serde_json::Value>,
    exact: bool,
    multiplicity: usize,
}

impl Serialize for RootFunctional {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (re, im) = match &self.values {
            WeightValues::Exact(v) => (
                v.iter().map(|z| format_rat(&z.re).into()).collect(),
                v.iter().map(|z| format_rat(&z.im).into()).collect(),
            ),
            WeightValues::Approx(v) => (
                v.iter().map(|z| z.re.into()).collect(),
                v.iter().map(|z| z.im.into()).collect(),
            ),
        };
        RootJson {
            re,
            im,
            exact: self.is_exact(),
            multiplicity: self.multiplicity,
        }
        .serialize(s)
    }
}

/// Weights of a module, with multiplicity.
#[derive(Debug, Clone, Serialize)]
pub struct WeightReport {
    pub weights: Vec<RootFunctional>,
    /// Set when some characteristic polynomial failed to split over ℚ(i)
    /// and the float path was used.
    pub heuristic: bool,
}

impl WeightReport {
    /// Exact weights repeated according to multiplicity, sorted.
    pub fn exact_multiset(&self) -> Option<Vec<Vec<GaussRat>>> {
        let mut out = Vec::new();
        for w in &self.weights {
            let v = w.exact()?;
            out.extend(std::iter::repeat_n(v.to_vec(), w.multiplicity));
        }
        out.sort_by(|a, b| cmp_vec(a, b));
        Some(out)
    }

    pub fn total_multiplicity(&self) -> usize {
        self.weights.iter().map(|w| w.multiplicity).sum()
    }
}

fn cmp_vec(a: &[GaussRat], b: &[GaussRat]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = cmp_gauss(x, y);
        if o.is_ne() {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

/// Weights of `module` by repeated common-eigenvector extraction.
pub fn module_weights<F: LieField>(
    algebra: &LieAlgebra<F>,
    module: &LieModule<F>,
) -> Result<WeightReport, LieError> {
    if !algebra.is_solvable() {
        return Err(LieError::NotSolvable);
    }
    let gens: Vec<Matrix<GaussRat>> = module
        .actions()
        .iter()
        .map(|a| a.map(LieField::to_gauss))
        .collect();
    let m = algebra.dim();
    if m == 0 {
        let weights = (module.dim() > 0)
            .then(|| RootFunctional {
                values: WeightValues::Exact(Vec::new()),
                multiplicity: module.dim(),
            })
            .into_iter()
            .collect();
        return Ok(WeightReport {
            weights,
            heuristic: false,
        });
    }
    let flat = match exact_flag(gens.clone(), m)? {
        Some(ws) => {
            for w in &ws {
                check_vanishes_on_derived(algebra, w)?;
            }
            group(ws.into_iter().map(WeightValues::Exact).collect(), false)
        }
        None => {
            let cgens: Vec<Matrix<Complex64>> = gens.iter().map(Matrix::to_c64).collect();
            let ws = float_flag(cgens, m, FLOAT_FALLBACK_TOL)?;
            group(ws.into_iter().map(WeightValues::Approx).collect(), true)
        }
    };
    Ok(flat)
}

fn group(mut ws: Vec<WeightValues>, heuristic: bool) -> WeightReport {
    if !heuristic {
        ws.sort_by(|a, b| match (a, b) {
            (WeightValues::Exact(x), WeightValues::Exact(y)) => cmp_vec(x, y),
            _ => std::cmp::Ordering::Equal,
        });
    }
    let mut weights: Vec<RootFunctional> = Vec::new();
    for w in ws {
        let same = |last: &RootFunctional| match (&last.values, &w) {
            (WeightValues::Exact(x), WeightValues::Exact(y)) => x == y,
            (WeightValues::Approx(x), WeightValues::Approx(y)) => x
                .iter()
                .zip(y)
                .all(|(a, b)| (a - b).norm() <= 1e-6 * (1.0 + a.norm())),
            _ => false,
        };
        match weights.last_mut() {
            Some(last) if same(last) => last.multiplicity += 1,
            _ => weights.push(RootFunctional {
                values: w,
                multiplicity: 1,
            }),
        }
    }
    WeightReport { weights, heuristic }
}

fn check_vanishes_on_derived<F: LieField>(l: &LieAlgebra<F>, w: &[GaussRat]) -> Result<(), LieError> {
    let m = l.dim();
    for a in 0..m {
        for b in a + 1..m {
            let mut s = GaussRat::zero();
            for (k, wk) in w.iter().enumerate() {
                let c = l.c(a, b, k);
                if !c.is_zero() {
                    s += c.to_gauss() * wk;
                }
            }
            if !s.is_zero() {
                return Err(LieError::Input(format!(
                    "weight does not vanish on [Y{}, Y{}]",
                    a + 1,
                    b + 1
                )));
            }
        }
    }
    Ok(())
}

/// Exact flag construction. `None` means some spectrum did not split.
fn exact_flag(mut gens: Vec<Matrix<GaussRat>>, m: usize) -> Result<Option<Vec<Vec<GaussRat>>>, LieError> {
    let mut out = Vec::new();
    while gens.first().is_some_and(|g| g.rows() > 0) {
        let n = gens[0].rows();
        let mut spectra = Vec::with_capacity(gens.len());
        for g in &gens {
            let sp = charpoly_exact_roots(g)?;
            if !sp.complete {
                return Ok(None);
            }
            spectra.push(sp.roots.into_iter().map(|r| r.0).collect::<Vec<_>>());
        }
        let start: Vec<Vec<GaussRat>> = Matrix::<GaussRat>::identity(n).row_vecs();
        let mut chosen = Vec::new();
        let v = common_eigenvector(&gens, &spectra, start, &mut chosen, &|a: &Matrix<GaussRat>| {
            a.rank_kernel().map(|r| r.1).unwrap_or_default()
        })
        .ok_or_else(|| LieError::Input("no common eigenvector; module is not solvable".into()))?;
        out.push(chosen);
        gens = gens.iter().map(|g| quotient(g, &v)).collect();
    }
    debug_assert!(out.iter().all(|w| w.len() == m));
    Ok(Some(out))
}

fn float_flag(mut gens: Vec<Matrix<Complex64>>, m: usize, tol: f64) -> Result<Vec<Vec<Complex64>>, LieError> {
    let mut out = Vec::new();
    while gens.first().is_some_and(|g| g.rows() > 0) {
        let n = gens[0].rows();
        let mut spectra = Vec::with_capacity(gens.len());
        for g in &gens {
            spectra.push(cluster(eigenvalues_numeric(g, tol.sqrt())?));
        }
        let start = Matrix::<Complex64>::identity(n).row_vecs();
        // a defective eigenvalue is only known to about √tol
        let ktol = tol.sqrt();
        let mut chosen = Vec::new();
        let v = common_eigenvector(&gens, &spectra, start, &mut chosen, &|a: &Matrix<Complex64>| {
            let scale = a.entries().iter().map(|z| z.norm()).fold(1.0, f64::max);
            a.rank_kernel_with(ktol * scale).1
        })
        .ok_or_else(|| LieError::La(crate::exact_la::LaError::Numeric("no common eigenvector found".into())))?;
        out.push(chosen);
        gens = gens.iter().map(|g| quotient(g, &v)).collect();
    }
    debug_assert!(out.iter().all(|w| w.len() == m));
    Ok(out)
}

fn cluster(mut eig: Vec<Complex64>) -> Vec<Complex64> {
    let mut groups: Vec<(Complex64, usize)> = Vec::new();
    eig.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    for z in eig {
        match groups.iter_mut().find(|(c, k)| (*c / *k as f64 - z).norm() < 1e-6) {
            Some((c, k)) => {
                *c += z;
                *k += 1;
            }
            None => groups.push((z, 1)),
        }
    }
    groups.into_iter().map(|(c, k)| c / k as f64).collect()
}

/// Depth-first search for `v ≠ 0` with `gᵢ v = μᵢ v`, choosing `μᵢ` from
/// `spectra[i]`. `space` holds a basis of the current candidate space.
fn common_eigenvector<F: crate::exact_la::Field>(
    gens: &[Matrix<F>],
    spectra: &[Vec<F>],
    space: Vec<Vec<F>>,
    chosen: &mut Vec<F>,
    kernel: &dyn Fn(&Matrix<F>) -> Vec<Vec<F>>,
) -> Option<Vec<F>> {
    let i = chosen.len();
    if i == gens.len() {
        return space.into_iter().next();
    }
    let n = gens[i].rows();
    let basis = Matrix::from_columns(n, &space).ok()?;
    for mu in &spectra[i] {
        let shifted = gens[i]
            .try_sub(&Matrix::identity(n).scale(mu))
            .and_then(|s| s.try_mul(&basis))
            .ok()?;
        let coeffs = kernel(&shifted);
        if coeffs.is_empty() {
            continue;
        }
        let next: Vec<Vec<F>> = coeffs
            .iter()
            .map(|c| basis.try_mul_vec(c).expect("coefficient length matches basis"))
            .collect();
        chosen.push(mu.clone());
        if let Some(v) = common_eigenvector(gens, spectra, next, chosen, kernel) {
            return Some(v);
        }
        chosen.pop();
    }
    None
}

/// Induced map on `F^n / ⟨v⟩`, in the basis of the coordinate vectors
/// other than the pivot `p` of `v`.
fn quotient<F: crate::exact_la::Field>(a: &Matrix<F>, v: &[F]) -> Matrix<F> {
    let n = a.rows();
    let p = if F::EXACT {
        v.iter().position(|x| !x.is_zero()).expect("eigenvector is nonzero")
    } else {
        (0..n)
            .max_by(|&i, &j| v[i].modulus().total_cmp(&v[j].modulus()))
            .expect("eigenvector is nonempty")
    };
    let keep: Vec<usize> = (0..n).filter(|&k| k != p).collect();
    let mut q = Matrix::zeros(n - 1, n - 1);
    for (r, &k) in keep.iter().enumerate() {
        let ratio = v[k].clone() / &v[p];
        for (c, &j) in keep.iter().enumerate() {
            q[(r, c)] = a[(k, j)].clone() - ratio.clone() * &a[(p, j)];
        }
    }
    q
}

/// Why a module failed the exponential-type test.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Violation {
    /// `Re λ = 0` but `Im λ ≠ 0`.
    PurelyImaginary { weight: usize },
    /// `Re λ` and `Im λ` are linearly independent.
    IndependentParts { weight: usize },
}

/// Certificate entry `λⱼ = (1 + iθⱼ) γⱼ`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightCertificate {
    pub theta: Rat,
    pub gamma: Vec<Rat>,
}

#[derive(Serialize)]
struct CertJson {
    theta: String,
    gamma: Vec<String>,
}

impl Serialize for WeightCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CertJson {
            theta: format_rat(&self.theta),
            gamma: self.gamma.iter().map(format_rat).collect(),
        }
        .serialize(s)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExponentialCertificate {
    pub exponential: bool,
    pub heuristic: bool,
    pub weights: WeightReport,
    /// One entry per weight when the verdict is positive (exact mode).
    pub certificate: Vec<WeightCertificate>,
    pub violation: Option<Violation>,
}

/// Exponential-type test for a module over a real solvable algebra.
///
/// Every weight must satisfy: `Re λ` and `Im λ` are dependent, and
/// `Re λ = 0 ⇒ Im λ = 0`.
pub fn exponential_type_test(
    algebra: &LieAlgebra<Rat>,
    module: &LieModule<Rat>,
) -> Result<ExponentialCertificate, LieError> {
    let weights = module_weights(algebra, module)?;
    let mut certificate = Vec::new();
    let mut violation = None;
    for (idx, w) in weights.weights.iter().enumerate() {
        let outcome = match w.parts() {
            Some((re, im)) => exact_check(&re, &im, idx),
            None => float_check(&w.approx(), idx),
        };
        match outcome {
            Ok(cert) => {
                if let Some(c) = cert {
                    certificate.push(c);
                }
            }
            Err(v) => {
                violation = Some(v);
                break;
            }
        }
    }
    if violation.is_some() || weights.heuristic {
        certificate.clear();
    }
    Ok(ExponentialCertificate {
        exponential: violation.is_none(),
        heuristic: weights.heuristic,
        weights,
        certificate,
        violation,
    })
}

fn exact_check(re: &[Rat], im: &[Rat], idx: usize) -> Result<Option<WeightCertificate>, Violation> {
    let Some(p) = re.iter().position(|x| !x.is_zero()) else {
        if im.iter().any(|x| !x.is_zero()) {
            return Err(Violation::PurelyImaginary { weight: idx });
        }
        return Ok(Some(WeightCertificate {
            theta: Rat::zero(),
            gamma: re.to_vec(),
        }));
    };
    let pair = Matrix::from_rows(vec![re.to_vec(), im.to_vec()]).expect("equal lengths");
    if pair.rank().expect("exact matrix") > 1 {
        return Err(Violation::IndependentParts { weight: idx });
    }
    let theta = im[p].clone() / &re[p];
    debug_assert!(re.iter().zip(im).all(|(r, i)| r.clone() * &theta == *i));
    Ok(Some(WeightCertificate {
        theta,
        gamma: re.to_vec(),
    }))
}

fn float_check(w: &[Complex64], idx: usize) -> Result<Option<WeightCertificate>, Violation> {
    let tol = 1e-6;
    let re: Vec<f64> = w.iter().map(|z| z.re).collect();
    let im: Vec<f64> = w.iter().map(|z| z.im).collect();
    let nre = re.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nim = im.iter().map(|x| x * x).sum::<f64>().sqrt();
    if nre <= tol {
        return if nim <= tol {
            Ok(None)
        } else {
            Err(Violation::PurelyImaginary { weight: idx })
        };
    }
    let pair = Matrix::from_rows(vec![re, im]).expect("equal lengths");
    if crate::exact_la::numeric_rank(&pair, tol) > 1 {
        return Err(Violation::IndependentParts { weight: idx });
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_la::{gauss, int};
    use crate::lie::corpus;
    use std::sync::Arc;

    fn adjoint(l: &LieAlgebra<Rat>) -> LieModule<Rat> {
        LieModule::adjoint(Arc::new(l.clone()))
    }

    fn real(xs: &[i64]) -> Vec<GaussRat> {
        xs.iter().map(|&x| gauss(int(x), int(0))).collect()
    }

    #[test]
    fn nilpotent_weights_vanish() {
        let h = corpus::heisenberg();
        let r = module_weights(&h, &adjoint(&h)).unwrap();
        assert!(!r.heuristic);
        assert_eq!(r.weights.len(), 1);
        assert_eq!(r.weights[0].multiplicity, 3);
        assert_eq!(r.weights[0].exact().unwrap(), real(&[0, 0, 0]));
    }

    #[test]
    fn axb_roots() {
        let a = corpus::ax_plus_b();
        let r = module_weights(&a, &adjoint(&a)).unwrap();
        assert_eq!(
            r.exact_multiset().unwrap(),
            vec![real(&[0, 0]), real(&[1, 0])]
        );
    }

    #[test]
    fn realified_borel_roots() {
        let b = corpus::realified_borel();
        let r = module_weights(&b, &adjoint(&b)).unwrap();
        assert_eq!(r.total_multiplicity(), 4);
        let two = |re: i64, im: i64| gauss(int(re), int(im));
        let z = two(0, 0);
        let ms = r.exact_multiset().unwrap();
        // λ(H) = 2, λ(iH) = 2i and its conjugate
        assert!(ms.contains(&vec![two(2, 0), z.clone(), two(0, 2), z.clone()]));
        assert!(ms.contains(&vec![two(2, 0), z.clone(), two(0, -2), z.clone()]));
    }

    #[test]
    fn exponential_verdicts() {
        let h = corpus::heisenberg();
        let t = exponential_type_test(&h, &adjoint(&h)).unwrap();
        assert!(t.exponential && !t.heuristic);
        assert_eq!(t.certificate[0].theta, Rat::zero());

        let e2 = corpus::e2();
        let t = exponential_type_test(&e2, &adjoint(&e2)).unwrap();
        assert!(!t.exponential);
        assert!(matches!(t.violation, Some(Violation::PurelyImaginary { .. })));

        let b = corpus::realified_borel();
        let t = exponential_type_test(&b, &adjoint(&b)).unwrap();
        assert!(matches!(t.violation, Some(Violation::IndependentParts { .. })));
    }

    #[test]
    fn rotation_scaling_weight_has_theta() {
        // [A, X] = X + Y, [A, Y] = −X + Y: weights (1 ± i) A*
        let l = LieAlgebra::from_brackets(
            vec!["A".into(), "X".into(), "Y".into()],
            &[
                crate::lie::Bracket { i: 0, j: 1, coeffs: vec![(1, int(1)), (2, int(1))] },
                crate::lie::Bracket { i: 0, j: 2, coeffs: vec![(1, int(-1)), (2, int(1))] },
            ],
        )
        .unwrap();
        let t = exponential_type_test(&l, &adjoint(&l)).unwrap();
        assert!(t.exponential);
        let thetas: Vec<Rat> = t.certificate.iter().map(|c| c.theta.clone()).collect();
        assert!(thetas.contains(&int(1)) && thetas.contains(&int(-1)));
    }

    #[test]
    fn non_split_spectrum_uses_float() {
        // [A, X] = Y, [A, Y] = 2X: ad A has eigenvalues ±√2
        let l = LieAlgebra::from_brackets(
            vec!["A".into(), "X".into(), "Y".into()],
            &[
                crate::lie::Bracket { i: 0, j: 1, coeffs: vec![(2, int(1))] },
                crate::lie::Bracket { i: 0, j: 2, coeffs: vec![(1, int(2))] },
            ],
        )
        .unwrap();
        let r = module_weights(&l, &adjoint(&l)).unwrap();
        assert!(r.heuristic);
        assert_eq!(r.total_multiplicity(), 3);
        let t = exponential_type_test(&l, &adjoint(&l)).unwrap();
        assert!(t.exponential && t.heuristic);
    }

    #[test]
    fn non_solvable_is_rejected() {
        let s = corpus::sl2_split();
        assert_eq!(
            module_weights(&s, &adjoint(&s)).unwrap_err(),
            LieError::NotSolvable
        );
    }
}
