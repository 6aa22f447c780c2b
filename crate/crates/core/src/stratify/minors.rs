//! Symbolic minors of the evaluation map `x ↦ a(x)v`, as polynomials in `v`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::exact_la::{format_rat, Rat};
use crate::lie::LieModule;

/// Multivariate polynomial with rational coefficients, keyed by exponent
/// vectors.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct MPoly(BTreeMap<Vec<u32>, Rat>);

impl MPoly {
    pub fn zero() -> Self {
        MPoly(BTreeMap::new())
    }

    pub fn linear(coeffs: &[Rat]) -> Self {
        let n = coeffs.len();
        let mut t = BTreeMap::new();
        for (j, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut e = vec![0; n];
                e[j] = 1;
                t.insert(e, c.clone());
            }
        }
        MPoly(t)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rat) {
        let entry = self.0.entry(e.clone()).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.0.remove(&e);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.0 {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MPoly(self.0.iter().map(|(e, c)| (e.clone(), -c.clone())).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = MPoly::zero();
        for (e1, c1) in &self.0 {
            for (e2, c2) in &other.0 {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2);
            }
        }
        out
    }

    /// Scales so the leading (largest exponent) coefficient is one.
    pub fn monic(&self) -> Self {
        let Some((_, lead)) = self.0.iter().next_back() else {
            return self.clone();
        };
        let inv = Rat::one() / lead;
        MPoly(self.0.iter().map(|(e, c)| (e.clone(), c.clone() * &inv)).collect())
    }

    pub fn eval(&self, v: &[Rat]) -> Rat {
        let mut s = Rat::zero();
        for (e, c) in &self.0 {
            let mut t = c.clone();
            for (x, &k) in v.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            s += t;
        }
        s
    }

    pub fn render(&self, var: &str) -> String {
        if self.0.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.0.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| {
                    if k == 1 {
                        format!("{var}{}", j + 1)
                    } else {
                        format!("{var}{}^{k}", j + 1)
                    }
                })
                .collect();
            let negative = c < &Rat::zero();
            let mag = if negative { -c.clone() } else { c.clone() };
            let sign = match (i, negative) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            out.push_str(sign);
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => out.push_str(&format_rat(&mag)),
                (false, true) => out.push_str(&mono.join("*")),
                (false, false) => out.push_str(&format!("{}*{}", format_rat(&mag), mono.join("*"))),
            }
        }
        out
    }
}

fn det(m: &[Vec<MPoly>]) -> MPoly {
    let n = m.len();
    debug_assert!(n > 0, "minors have positive size");
    if n == 1 {
        return m[0][0].clone();
    }
    let mut s = MPoly::zero();
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<MPoly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
            .collect();
        let t = m[0][c].mul(&det(&minor));
        s = if c % 2 == 0 { s.add(&t) } else { s.add(&t.neg()) };
    }
    s
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Exact description of `{v : rank(x ↦ a(x)v) = rank}`: every polynomial in
/// `vanishing` is zero and some polynomial in `nonvanishing` is not (an
/// empty `nonvanishing` list means no condition).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankCondition {
    pub rank: usize,
    pub nonvanishing: Vec<String>,
    pub vanishing: Vec<String>,
}

fn distinct_minors(e: &[Vec<MPoly>], k: usize) -> BTreeSet<MPoly> {
    let rows = e.len();
    let cols = e.first().map_or(0, Vec::len);
    let mut out = BTreeSet::new();
    if k == 0 || k > rows || k > cols {
        return out;
    }
    for rs in combinations(rows, k) {
        for cs in combinations(cols, k) {
            let sub: Vec<Vec<MPoly>> = rs
                .iter()
                .map(|&r| cs.iter().map(|&c| e[r][c].clone()).collect())
                .collect();
            let d = det(&sub);
            if !d.is_zero() {
                out.insert(d.monic());
            }
        }
    }
    out
}

/// Rank conditions of the evaluation map, for every possible rank.
pub fn rank_conditions(module: &LieModule<Rat>, var: &str) -> Vec<RankCondition> {
    let n = module.dim();
    let m = module.actions().len();
    // e[k][i] = (a(Y_i) v)_k as a linear form in v
    let e: Vec<Vec<MPoly>> = (0..n)
        .map(|k| (0..m).map(|i| MPoly::linear(module.actions()[i].row(k))).collect())
        .collect();
    let render = |s: BTreeSet<MPoly>| -> Vec<String> {
        let mut v: Vec<MPoly> = s.into_iter().collect();
        v.sort_by(|a, b| b.cmp(a));
        v.iter().map(|p| p.render(var)).collect()
    };
    (0..=n.min(m))
        .map(|r| RankCondition {
            rank: r,
            nonvanishing: render(distinct_minors(&e, r)),
            vanishing: render(distinct_minors(&e, r + 1)),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_la::{int, rat};

    #[test]
    fn polynomial_rendering() {
        let x = MPoly::linear(&[int(1), int(0)]);
        let y = MPoly::linear(&[int(0), rat(1, 2)]);
        let p = x.mul(&x).add(&y.neg());
        assert_eq!(p.render("v"), "v1^2 - 1/2*v2");
        assert_eq!(y.monic().render("v"), "v2");
        assert_eq!(p.eval(&[int(3), int(4)]), int(7));
    }

    #[test]
    fn determinant_of_symbolic_matrix() {
        let x = MPoly::linear(&[int(1), int(0)]);
        let y = MPoly::linear(&[int(0), int(1)]);
        let d = det(&[vec![x.clone(), y.clone()], vec![y.neg(), x.clone()]]);
        assert_eq!(d.render("t"), "t1^2 + t2^2");
    }
}
