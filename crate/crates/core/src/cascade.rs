//! Root systems in Euclidean coordinates and the Kostant cascade of
//! strongly orthogonal roots.

use std::collections::HashSet;
use std::fmt;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact_la::{format_rat, int, rat, Rat};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CascadeError {
    #[error("no root system of type {family}{rank}")]
    InvalidType { family: char, rank: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn parse(s: &str) -> Option<Family> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Some(Family::A),
            "B" => Some(Family::B),
            "C" => Some(Family::C),
            "D" => Some(Family::D),
            "E" => Some(Family::E),
            "F" => Some(Family::F),
            "G" => Some(Family::G),
            _ => None,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    pub const ALL: [Family; 7] = [
        Family::A,
        Family::B,
        Family::C,
        Family::D,
        Family::E,
        Family::F,
        Family::G,
    ];
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl Serialize for Family {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.letter().to_string())
    }
}

/// A positive root: Euclidean coordinates and coefficients on the simple
/// roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Root {
    pub coords: Vec<Rat>,
    pub coeffs: Vec<i64>,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.coeffs.iter().sum()
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    pub family: Family,
    pub rank: usize,
    pub simple: Vec<Vec<Rat>>,
    pub positive: Vec<Root>,
    /// `(αᵢ, αⱼ)` for the simple roots.
    pub gram: Vec<Vec<Rat>>,
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |s, (x, y)| s + x.clone() * y)
}

fn unit(n: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); n];
    v[i] = int(1);
    v
}

fn sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y).collect()
}

fn add(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y).collect()
}

fn from_ints(xs: &[i64]) -> Vec<Rat> {
    xs.iter().map(|&x| int(x)).collect()
}

fn halves(xs: &[i64]) -> Vec<Rat> {
    xs.iter().map(|&x| rat(x, 2)).collect()
}

/// Expected number of positive roots.
pub fn positive_root_count(family: Family, rank: usize) -> usize {
    let l = rank;
    match family {
        Family::A => l * (l + 1) / 2,
        Family::B | Family::C => l * l,
        Family::D => l * (l - 1),
        Family::E => match l {
            6 => 36,
            7 => 63,
            _ => 120,
        },
        Family::F => 24,
        Family::G => 6,
    }
}

fn simple_roots(family: Family, l: usize) -> Result<Vec<Vec<Rat>>, CascadeError> {
    let invalid = || CascadeError::InvalidType {
        family: family.letter(),
        rank: l,
    };
    let chain = |n: usize, k: usize| -> Vec<Vec<Rat>> {
        (0..k).map(|i| sub(&unit(n, i), &unit(n, i + 1))).collect()
    };
    Ok(match family {
        Family::A if l >= 1 => chain(l + 1, l),
        Family::B if l >= 2 => {
            let mut s = chain(l, l - 1);
            s.push(unit(l, l - 1));
            s
        }
        Family::C if l >= 2 => {
            let mut s = chain(l, l - 1);
            s.push(unit(l, l - 1).into_iter().map(|x| x * int(2)).collect());
            s
        }
        Family::D if l >= 3 => {
            let mut s = chain(l, l - 1);
            s.push(add(&unit(l, l - 2), &unit(l, l - 1)));
            s
        }
        Family::E if (6..=8).contains(&l) => {
            let mut s = vec![
                halves(&[1, -1, -1, -1, -1, -1, -1, 1]),
                from_ints(&[1, 1, 0, 0, 0, 0, 0, 0]),
            ];
            for i in 0..6 {
                s.push(sub(&unit(8, i + 1), &unit(8, i)));
            }
            s.truncate(l);
            s
        }
        Family::F if l == 4 => vec![
            from_ints(&[0, 1, -1, 0]),
            from_ints(&[0, 0, 1, -1]),
            from_ints(&[0, 0, 0, 1]),
            halves(&[1, -1, -1, -1]),
        ],
        Family::G if l == 2 => vec![from_ints(&[1, -1, 0]), from_ints(&[-2, 1, 1])],
        _ => return Err(invalid()),
    })
}

/// Builds the root system of the given type.
///
/// Positive roots come from closing the simple roots under `α`-strings:
/// for a positive root `β` and simple `αᵢ`, `β + αᵢ` is a root exactly when
/// `p − ⟨β, αᵢ^∨⟩ > 0`, where `p` is the length of the string below `β`.
pub fn build_root_system(family: Family, rank: usize) -> Result<RootSystem, CascadeError> {
    let simple = simple_roots(family, rank)?;
    let l = simple.len();
    let gram: Vec<Vec<Rat>> = simple
        .iter()
        .map(|a| simple.iter().map(|b| dot(a, b)).collect())
        .collect();
    let mut positive: Vec<Root> = (0..l)
        .map(|i| {
            let mut c = vec![0; l];
            c[i] = 1;
            Root {
                coords: simple[i].clone(),
                coeffs: c,
            }
        })
        .collect();
    let mut known: HashSet<Vec<i64>> = positive.iter().map(|r| r.coeffs.clone()).collect();
    let mut frontier: Vec<usize> = (0..l).collect();
    // the highest root of E8 has height 29
    for _height in 1..64 {
        let mut next = Vec::new();
        for &bi in &frontier {
            for i in 0..l {
                let beta = positive[bi].clone();
                let mut p = 0;
                let mut down = beta.coeffs.clone();
                loop {
                    down[i] -= 1;
                    if known.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let pairing = int(2) * dot(&beta.coords, &simple[i]) / &gram[i][i];
                let pairing = pairing.to_integer().to_i64().expect("cartan integers are small");
                if p - pairing > 0 {
                    let mut up = beta.coeffs.clone();
                    up[i] += 1;
                    if known.insert(up.clone()) {
                        positive.push(Root {
                            coords: add(&beta.coords, &simple[i]),
                            coeffs: up,
                        });
                        next.push(positive.len() - 1);
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    debug_assert_eq!(positive.len(), positive_root_count(family, rank));
    Ok(RootSystem {
        family,
        rank,
        simple,
        positive,
        gram,
    })
}

impl RootSystem {
    /// Whether `v` is a root (positive or negative).
    pub fn is_root(&self, v: &[Rat]) -> bool {
        self.positive.iter().any(|r| {
            r.coords.as_slice() == v || r.coords.iter().zip(v).all(|(a, b)| a.clone() + b == Rat::zero())
        })
    }

    pub fn highest_root(&self) -> &Root {
        self.positive
            .iter()
            .max_by_key(|r| r.height())
            .expect("root systems are nonempty")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeRoot {
    pub root: Root,
    /// Number of positive roots in the irreducible subsystem it tops.
    pub subsystem_size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cascade {
    pub roots: Vec<CascadeRoot>,
}

impl Cascade {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

fn components(roots: &[&Root]) -> Vec<Vec<usize>> {
    let n = roots.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut comp = vec![s];
        seen[s] = true;
        let mut k = 0;
        while k < comp.len() {
            let a = comp[k];
            for b in 0..n {
                if !seen[b] && !dot(&roots[a].coords, &roots[b].coords).is_zero() {
                    seen[b] = true;
                    comp.push(b);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    // lexicographic order of the smallest coordinate vector
    let key = |c: &Vec<usize>| -> Vec<Rat> {
        c.iter()
            .map(|&i| roots[i].coords.clone())
            .min()
            .expect("components are nonempty")
    };
    out.sort_by_key(key);
    out
}

/// Kostant cascade: the highest root of each irreducible component, then
/// recursion on the roots orthogonal to it.
pub fn kostant_cascade(rs: &RootSystem) -> Cascade {
    let mut out = Vec::new();
    let all: Vec<&Root> = rs.positive.iter().collect();
    let mut stack = vec![all];
    while let Some(current) = stack.pop() {
        let comps = components(&current);
        // push in reverse so the lexicographically first component is handled first
        for comp in comps.into_iter().rev() {
            let members: Vec<&Root> = comp.iter().map(|&i| current[i]).collect();
            let top = *members
                .iter()
                .max_by_key(|r| r.height())
                .expect("components are nonempty");
            let rest: Vec<&Root> = members
                .iter()
                .copied()
                .filter(|r| dot(&r.coords, &top.coords).is_zero())
                .collect();
            out.push(CascadeRoot {
                root: top.clone(),
                subsystem_size: members.len(),
            });
            if !rest.is_empty() {
                stack.push(rest);
            }
        }
    }
    Cascade { roots: out }
}

/// `(cascade size, rank, cascade size == rank)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankTest {
    pub family: Family,
    pub rank: usize,
    #[serde(serialize_with = "ser_roots")]
    pub cascade: Vec<Vec<Rat>>,
    pub cascade_size: usize,
    pub has_open_orbit: bool,
}

fn ser_roots<S: serde::Serializer>(v: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
    let out: Vec<Vec<String>> = v.iter().map(|r| r.iter().map(format_rat).collect()).collect();
    out.serialize(s)
}

pub fn open_orbit_rank_test(rs: &RootSystem) -> RankTest {
    let c = kostant_cascade(rs);
    RankTest {
        family: rs.family,
        rank: rs.rank,
        cascade: c.roots.iter().map(|r| r.root.coords.clone()).collect(),
        cascade_size: c.len(),
        has_open_orbit: c.len() == rs.rank,
    }
}

/// Whether every pair in the cascade is strongly orthogonal.
pub fn strongly_orthogonal(rs: &RootSystem, c: &Cascade) -> bool {
    c.roots.iter().enumerate().all(|(i, a)| {
        c.roots.iter().skip(i + 1).all(|b| {
            dot(&a.root.coords, &b.root.coords).is_zero()
                && !rs.is_root(&add(&a.root.coords, &b.root.coords))
                && !rs.is_root(&sub(&a.root.coords, &b.root.coords))
        })
    })
}

/// Every valid `(family, rank)` with rank at most `max_rank`.
pub fn all_types(max_rank: usize) -> Vec<(Family, usize)> {
    let mut out = Vec::new();
    for f in Family::ALL {
        for l in 1..=max_rank {
            if simple_roots(f, l).is_ok() {
                out.push((f, l));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn root_counts() {
        for (f, l) in all_types(8) {
            let rs = build_root_system(f, l).unwrap();
            assert_eq!(rs.positive.len(), positive_root_count(f, l), "{f}{l}");
        }
        assert!(build_root_system(Family::F, 3).is_err());
        assert!(build_root_system(Family::B, 1).is_err());
        assert!(build_root_system(Family::E, 5).is_err());
    }

    #[test]
    fn b2_positive_roots() {
        let rs = build_root_system(Family::B, 2).unwrap();
        let mut coords: Vec<Vec<Rat>> = rs.positive.iter().map(|r| r.coords.clone()).collect();
        coords.sort();
        let mut expect = vec![
            from_ints(&[1, -1]),
            from_ints(&[0, 1]),
            from_ints(&[1, 1]),
            from_ints(&[1, 0]),
        ];
        expect.sort();
        assert_eq!(coords, expect);
    }

    #[test]
    fn small_cascades() {
        let a1 = open_orbit_rank_test(&build_root_system(Family::A, 1).unwrap());
        assert_eq!((a1.cascade_size, a1.has_open_orbit), (1, true));
        let a2 = open_orbit_rank_test(&build_root_system(Family::A, 2).unwrap());
        assert_eq!(a2.cascade, vec![from_ints(&[1, 0, -1])]);
        assert!(!a2.has_open_orbit);
        let b2 = open_orbit_rank_test(&build_root_system(Family::B, 2).unwrap());
        assert_eq!(b2.cascade, vec![from_ints(&[1, 1]), from_ints(&[1, -1])]);
        assert!(b2.has_open_orbit);
        let d3 = open_orbit_rank_test(&build_root_system(Family::D, 3).unwrap());
        assert_eq!((d3.cascade_size, d3.rank, d3.has_open_orbit), (2, 3, false));
        let a3 = open_orbit_rank_test(&build_root_system(Family::A, 3).unwrap());
        assert_eq!(
            a3.cascade,
            vec![from_ints(&[1, 0, 0, -1]), from_ints(&[0, 1, -1, 0])]
        );
    }

    #[test]
    fn cascades_are_strongly_orthogonal() {
        for (f, l) in all_types(8) {
            let rs = build_root_system(f, l).unwrap();
            let c = kostant_cascade(&rs);
            assert!(strongly_orthogonal(&rs, &c), "{f}{l}");
            assert!(c.len() <= l);
        }
    }
}
