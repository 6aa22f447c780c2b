//! Exact real-root counting for rational polynomials (constant term first).

use num_traits::{Signed, Zero};

use crate::exact_la::{int, Matrix, Rat};

fn trim(mut p: Vec<Rat>) -> Vec<Rat> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn eval(p: &[Rat], x: &Rat) -> Rat {
    p.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
}

fn derivative(p: &[Rat]) -> Vec<Rat> {
    if p.len() <= 1 {
        return vec![Rat::zero()];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.clone() * int(k as i64))
        .collect()
}

fn rem(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db].clone();
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        let f = r[dr].clone() / &lead;
        for (k, c) in b.iter().enumerate() {
            let v = std::mem::replace(&mut r[dr - db + k], Rat::zero());
            r[dr - db + k] = v - f.clone() * c;
        }
        r.pop();
        if r.is_empty() {
            r.push(Rat::zero());
        }
        r = trim(r);
    }
    r
}

fn is_zero_poly(p: &[Rat]) -> bool {
    p.iter().all(Zero::is_zero)
}

/// Number of distinct real roots of `p` in `(a, b]` by Sturm's theorem.
/// `p` must not vanish identically.
pub fn count_roots(p: &[Rat], a: &Rat, b: &Rat) -> usize {
    let p = trim(p.to_vec());
    if p.len() <= 1 {
        return 0;
    }
    let mut seq = vec![p.clone(), trim(derivative(&p))];
    loop {
        let n = seq.len();
        let r = rem(&seq[n - 2], &seq[n - 1]);
        if is_zero_poly(&r) {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    let changes = |x: &Rat| {
        let signs: Vec<bool> = seq
            .iter()
            .map(|q| eval(q, x))
            .filter(|v| !v.is_zero())
            .map(|v| v.is_positive())
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    changes(a).saturating_sub(changes(b))
}

/// Coefficients of the degree-`≤ d` polynomial taking `values[j]` at
/// `s = j / d`.
pub fn interpolate(values: &[Rat]) -> Vec<Rat> {
    let n = values.len();
    if n == 1 {
        return values.to_vec();
    }
    let d = (n - 1) as i64;
    let rows: Vec<Vec<Rat>> = (0..n)
        .map(|j| {
            let s = Rat::new((j as i64).into(), d.into());
            let mut row = Vec::with_capacity(n);
            let mut pw = int(1);
            for _ in 0..n {
                row.push(pw.clone());
                pw *= &s;
            }
            row
        })
        .collect();
    let vander = Matrix::from_rows(rows).expect("square vandermonde");
    vander
        .solve(values)
        .expect("exact solve")
        .expect("distinct nodes make the system regular")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_la::rat;

    fn p(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn counts_roots_in_interval() {
        // (s − 1/2)² (s − 3)
        let q = vec![rat(-3, 4), rat(13, 4), int(-4), int(1)];
        assert_eq!(count_roots(&q, &int(0), &int(1)), 1);
        assert_eq!(count_roots(&q, &int(0), &int(4)), 2);
        assert_eq!(count_roots(&p(&[1, 0, 1]), &int(-5), &int(5)), 0);
        assert_eq!(count_roots(&p(&[7]), &int(0), &int(1)), 0);
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let q = p(&[2, -1, 3]);
        let vals: Vec<Rat> = (0..3).map(|j| eval(&q, &rat(j, 2))).collect();
        assert_eq!(interpolate(&vals), q);
    }
}
