//! Characteristic polynomials and their roots over the Gaussian rationals.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::matrix::{require_exact, Matrix};
use super::numeric::eigenvalues_numeric;
use super::scalar::{f64_to_rat_with_denominator, format_gauss, gauss, GaussRat, Rat};
use super::{Field, LaError};

/// Total number of candidate tests allowed per polynomial.
pub const ROOT_CANDIDATE_BUDGET: u64 = 1_000_000;

/// Characteristic polynomial together with its Gaussian-rational roots.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSpectrum {
    /// Coefficients of `det(tI − m)`, constant term first; monic.
    pub poly: Vec<GaussRat>,
    /// Distinct roots with multiplicity, sorted by real then imaginary part.
    pub roots: Vec<(GaussRat, usize)>,
    /// Whether the multiplicities add up to the degree.
    pub complete: bool,
}

impl ExactSpectrum {
    pub fn degree(&self) -> usize {
        self.poly.len() - 1
    }

    /// Roots repeated according to multiplicity.
    pub fn root_multiset(&self) -> Vec<GaussRat> {
        self.roots
            .iter()
            .flat_map(|(z, k)| std::iter::repeat_n(z.clone(), *k))
            .collect()
    }
}

#[derive(Serialize)]
struct SpectrumJson {
    poly: Vec<String>,
    roots: Vec<(String, usize)>,
    complete: bool,
}

impl Serialize for ExactSpectrum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SpectrumJson {
            poly: self.poly.iter().map(format_gauss).collect(),
            roots: self.roots.iter().map(|(z, k)| (format_gauss(z), *k)).collect(),
            complete: self.complete,
        }
        .serialize(s)
    }
}

/// Monic characteristic polynomial `det(tI − m)`, constant term first.
///
/// Reduces to upper Hessenberg form by exact similarity transforms and
/// runs the Hessenberg determinant recurrence.
pub fn charpoly<F: Field>(m: &Matrix<F>) -> Result<Vec<F>, LaError> {
    require_exact::<F>()?;
    if !m.is_square() {
        return Err(LaError::NotSquare(m.rows(), m.cols()));
    }
    let n = m.rows();
    let mut h = m.clone();
    for j in 0..n.saturating_sub(2) {
        let Some(p) = (j + 1..n).find(|&i| !h[(i, j)].is_zero()) else {
            continue;
        };
        if p != j + 1 {
            h.swap_rows(p, j + 1);
            for i in 0..n {
                let a = h[(i, p)].clone();
                h[(i, p)] = std::mem::replace(&mut h[(i, j + 1)], a);
            }
        }
        let pivot = h[(j + 1, j)].clone();
        for k in j + 2..n {
            if h[(k, j)].is_zero() {
                continue;
            }
            let f = h[(k, j)].clone() / &pivot;
            for c in 0..n {
                let sub = f.clone() * &h[(j + 1, c)];
                let v = std::mem::replace(&mut h[(k, c)], F::zero());
                h[(k, c)] = v - sub;
            }
            for r in 0..n {
                let add = f.clone() * &h[(r, k)];
                let v = std::mem::replace(&mut h[(r, j + 1)], F::zero());
                h[(r, j + 1)] = v + add;
            }
        }
    }

    // p[k] is the charpoly of the leading k×k block
    let mut p: Vec<Vec<F>> = vec![vec![F::one()]];
    for k in 1..=n {
        let hkk = h[(k - 1, k - 1)].clone();
        let prev = &p[k - 1];
        let mut next = vec![F::zero(); k + 1];
        for (d, c) in prev.iter().enumerate() {
            next[d + 1] = next[d + 1].clone() + c;
            next[d] = next[d].clone() - hkk.clone() * c;
        }
        let mut sub_prod = F::one();
        for i in (1..k).rev() {
            sub_prod = sub_prod * &h[(i, i - 1)];
            if sub_prod.is_zero() {
                break;
            }
            let coeff = h[(i - 1, k - 1)].clone() * &sub_prod;
            if coeff.is_zero() {
                continue;
            }
            for (d, c) in p[i - 1].iter().enumerate() {
                next[d] = next[d].clone() - coeff.clone() * c;
            }
        }
        p.push(next);
    }
    Ok(p.pop().unwrap_or_else(|| vec![F::one()]))
}

pub fn poly_eval<F: Field>(poly: &[F], x: &F) -> F {
    poly.iter()
        .rev()
        .fold(F::zero(), |acc, c| acc * x + c)
}

/// Divides by `(t − root)`, dropping the remainder.
fn deflate(poly: &[GaussRat], root: &GaussRat) -> Vec<GaussRat> {
    let n = poly.len() - 1;
    let mut q = vec![GaussRat::zero(); n];
    let mut carry = GaussRat::zero();
    for k in (1..=n).rev() {
        carry = carry * root + &poly[k];
        q[k - 1] = carry.clone();
    }
    q
}

/// Characteristic polynomial and exact Gaussian-rational roots of `m`.
pub fn charpoly_exact_roots<F: Field>(m: &Matrix<F>) -> Result<ExactSpectrum, LaError> {
    let poly: Vec<GaussRat> = charpoly(m)?
        .iter()
        .map(|c| to_gauss(c))
        .collect::<Result<_, _>>()?;
    // numeric eigenvalues only propose candidates; every root is verified exactly
    let hints = eigenvalues_numeric(m, 1e-6).unwrap_or_default();
    let (roots, complete) = gaussian_roots(&poly, &hints);
    Ok(ExactSpectrum {
        poly,
        roots,
        complete,
    })
}

fn to_gauss<F: Field>(c: &F) -> Result<GaussRat, LaError> {
    let any: &dyn std::any::Any = c;
    if let Some(r) = any.downcast_ref::<Rat>() {
        Ok(GaussRat::from_rat(r))
    } else if let Some(z) = any.downcast_ref::<GaussRat>() {
        Ok(z.clone())
    } else {
        Err(LaError::Mode("exact roots need a rational or gaussian matrix"))
    }
}

/// Finds every Gaussian-rational root of `poly` (constant term first).
///
/// Returns the roots with multiplicity and whether they account for the
/// whole degree.
pub fn gaussian_roots(poly: &[GaussRat], hints: &[Complex64]) -> (Vec<(GaussRat, usize)>, bool) {
    let mut p: Vec<GaussRat> = poly.to_vec();
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    let degree = p.len() - 1;
    let mut found: Vec<GaussRat> = Vec::new();

    while p.len() > 1 && p[0].is_zero() {
        found.push(GaussRat::zero());
        p.remove(0);
    }

    let take_root = |p: &mut Vec<GaussRat>, z: &GaussRat, found: &mut Vec<GaussRat>| {
        let mut hit = false;
        while p.len() > 1 && poly_eval(p, z).is_zero() {
            *p = deflate(p, z);
            found.push(z.clone());
            hit = true;
        }
        hit
    };

    'hints: for h in hints {
        if p.len() <= 1 {
            break;
        }
        for q in 1..=64i64 {
            let (Some(re), Some(im)) = (
                f64_to_rat_with_denominator(h.re, q),
                f64_to_rat_with_denominator(h.im, q),
            ) else {
                continue 'hints;
            };
            if take_root(&mut p, &gauss(re, im), &mut found) {
                continue 'hints;
            }
        }
    }

    if p.len() > 1 {
        if let Some(candidates) = divisor_candidates(&p) {
            for z in candidates {
                if p.len() <= 1 {
                    break;
                }
                take_root(&mut p, &z, &mut found);
            }
        }
    }

    found.sort_by(cmp_gauss);
    let mut roots: Vec<(GaussRat, usize)> = Vec::new();
    for z in found {
        match roots.last_mut() {
            Some((last, k)) if *last == z => *k += 1,
            _ => roots.push((z, 1)),
        }
    }
    let total: usize = roots.iter().map(|r| r.1).sum();
    (roots, total == degree)
}

pub fn cmp_gauss(a: &GaussRat, b: &GaussRat) -> std::cmp::Ordering {
    a.re.cmp(&b.re).then_with(|| a.im.cmp(&b.im))
}

type GaussInt = (i128, i128);

/// Candidates `u/v` with `u | c₀` and `v | cₙ` in ℤ[i], after clearing
/// denominators. `None` when the candidate budget is exhausted.
fn divisor_candidates(p: &[GaussRat]) -> Option<Vec<GaussRat>> {
    let mut denom = BigInt::one();
    for c in p {
        denom = denom.lcm(c.re.denom()).lcm(c.im.denom());
    }
    let scale = |c: &GaussRat| -> Option<GaussInt> {
        let re = (c.re.numer() * (&denom / c.re.denom())).to_i128()?;
        let im = (c.im.numer() * (&denom / c.im.denom())).to_i128()?;
        Some((re, im))
    };
    let c0 = scale(&p[0])?;
    let cn = scale(p.last()?)?;
    let mut budget = ROOT_CANDIDATE_BUDGET;
    let us = gaussian_divisors(c0, &mut budget)?;
    let mut vs = gaussian_divisors(cn, &mut budget)?;
    // one representative per unit class is enough for denominators
    vs.retain(|&(a, b)| a > 0 && b >= 0);
    if (us.len() as u64).saturating_mul(vs.len() as u64) > budget {
        return None;
    }
    let mut out = Vec::with_capacity(us.len() * vs.len());
    for &(a, b) in &us {
        for &(c, d) in &vs {
            let u = gauss(Rat::from_integer(a.into()), Rat::from_integer(b.into()));
            let v = gauss(Rat::from_integer(c.into()), Rat::from_integer(d.into()));
            out.push(u / v);
        }
    }
    out.sort_by(cmp_gauss);
    out.dedup();
    Some(out)
}

/// All Gaussian integers dividing `c` (every associate included).
fn gaussian_divisors(c: GaussInt, budget: &mut u64) -> Option<Vec<GaussInt>> {
    let norm = (c.0.checked_mul(c.0)?).checked_add(c.1.checked_mul(c.1)?)? as u128;
    if norm == 0 {
        return None;
    }
    let mut divs = Vec::new();
    for d in integer_divisors(norm, budget)? {
        let top = d.sqrt();
        *budget = budget.checked_sub(top as u64 + 1)?;
        for x in 0..=top {
            let rest = d - x * x;
            let y = rest.sqrt();
            if y * y != rest {
                continue;
            }
            let (x, y) = (x as i128, y as i128);
            for (a, b) in [(x, y), (-y, x), (-x, -y), (y, -x)] {
                // u | c  ⇔  c·ū ≡ 0 mod N(u)
                let n = a * a + b * b;
                let re = c.0 * a + c.1 * b;
                let im = c.1 * a - c.0 * b;
                if re % n == 0 && im % n == 0 {
                    divs.push((a, b));
                }
            }
        }
    }
    divs.sort_unstable();
    divs.dedup();
    Some(divs)
}

fn integer_divisors(n: u128, budget: &mut u64) -> Option<Vec<u128>> {
    let mut primes = Vec::new();
    let mut rest = n;
    let mut f = 2u128;
    while f * f <= rest {
        *budget = budget.checked_sub(1)?;
        if rest.is_multiple_of(f) {
            let mut e = 0;
            while rest.is_multiple_of(f) {
                rest /= f;
                e += 1;
            }
            primes.push((f, e));
        }
        f += if f == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        primes.push((rest, 1));
    }
    let mut divs = vec![1u128];
    for (p, e) in primes {
        let mut next = Vec::with_capacity(divs.len() * (e + 1));
        for &d in &divs {
            let mut pk = 1u128;
            for _ in 0..=e {
                next.push(d * pk);
                pk *= p;
            }
        }
        divs = next;
    }
    divs.sort_unstable();
    Some(divs)
}
