use serde::Serialize;

use super::GrpdError;

/// A finite group by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteGroup {
    pub elements: Vec<String>,
    /// `mul[a][b]` is the index of `a·b`.
    pub mul: Vec<Vec<usize>>,
    pub identity: usize,
    #[serde(skip)]
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates the group axioms exhaustively.
    pub fn new(elements: Vec<String>, mul: Vec<Vec<usize>>, identity: usize) -> Result<Self, GrpdError> {
        let n = elements.len();
        if n == 0 {
            return Err(GrpdError::Axiom("a group needs at least one element".into()));
        }
        if identity >= n || mul.len() != n || mul.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(GrpdError::Axiom("multiplication table has the wrong shape".into()));
        }
        for a in 0..n {
            if mul[identity][a] != a || mul[a][identity] != a {
                return Err(GrpdError::Axiom(format!(
                    "{} is not neutral for {}",
                    elements[identity], elements[a]
                )));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return Err(GrpdError::Axiom(format!(
                            "associativity fails on ({}, {}, {})",
                            elements[a], elements[b], elements[c]
                        )));
                    }
                }
            }
        }
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            match (0..n).find(|&b| mul[a][b] == identity && mul[b][a] == identity) {
                Some(b) => inverse.push(b),
                None => {
                    return Err(GrpdError::Axiom(format!("{} has no inverse", elements[a])));
                }
            }
        }
        Ok(FiniteGroup {
            elements,
            mul,
            identity,
            inverse,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul[a][b] == self.mul[b][a]))
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// Cyclic group `ℤ/n` with elements `0, …, n−1`.
    pub fn cyclic(n: usize) -> Self {
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::new((0..n).map(|k| k.to_string()).collect(), mul, 0).expect("cyclic group")
    }

    /// Direct product, elements ordered first-factor-major.
    pub fn product(&self, other: &Self) -> Self {
        let (n, k) = (self.order(), other.order());
        let idx = |a: usize, b: usize| a * k + b;
        let mut names = Vec::with_capacity(n * k);
        for a in &self.elements {
            for b in &other.elements {
                names.push(format!("({a},{b})"));
            }
        }
        let mul = (0..n * k)
            .map(|x| {
                (0..n * k)
                    .map(|y| idx(self.op(x / k, y / k), other.op(x % k, y % k)))
                    .collect()
            })
            .collect();
        FiniteGroup::new(names, mul, idx(self.identity, other.identity)).expect("product of groups")
    }

    /// Group generated by permutations of `{0, …, d−1}` (composition
    /// `(στ)(i) = σ(τ(i))`), elements sorted.
    pub fn from_permutations(gens: &[Vec<usize>]) -> Self {
        let d = gens.first().map_or(0, Vec::len);
        let id: Vec<usize> = (0..d).collect();
        let mut elems = vec![id.clone()];
        let mut k = 0;
        while k < elems.len() {
            for g in gens {
                let p: Vec<usize> = (0..d).map(|i| g[elems[k][i]]).collect();
                if !elems.contains(&p) {
                    elems.push(p);
                }
            }
            k += 1;
        }
        elems.sort();
        let pos = |p: &Vec<usize>| elems.iter().position(|e| e == p).expect("closed under composition");
        let mul = elems
            .iter()
            .map(|a| {
                elems
                    .iter()
                    .map(|b| pos(&(0..d).map(|i| a[b[i]]).collect()))
                    .collect()
            })
            .collect();
        let names = elems
            .iter()
            .map(|p| p.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(""))
            .collect();
        FiniteGroup::new(names, mul, pos(&id)).expect("permutation group")
    }

    pub fn symmetric3() -> Self {
        Self::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]])
    }

    pub fn dihedral4() -> Self {
        Self::from_permutations(&[vec![1, 2, 3, 0], vec![0, 3, 2, 1]])
    }

    /// Quaternion group `{±1, ±i, ±j, ±k}`.
    pub fn quaternion() -> Self {
        // unit index 0..4 = 1, i, j, k; element = 2*unit + (sign bit)
        let unit_mul = |a: usize, b: usize| -> (usize, bool) {
            match (a, b) {
                (0, x) | (x, 0) => (x, false),
                (x, y) if x == y => (0, true),
                (1, 2) => (3, false),
                (2, 3) => (1, false),
                (3, 1) => (2, false),
                (2, 1) => (3, true),
                (3, 2) => (1, true),
                (1, 3) => (2, true),
                _ => unreachable!("units are 0..4"),
            }
        };
        let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"];
        let mul = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (u, s) = unit_mul(x / 2, y / 2);
                        let neg = (x % 2 == 1) ^ (y % 2 == 1) ^ s;
                        2 * u + usize::from(neg)
                    })
                    .collect()
            })
            .collect();
        FiniteGroup::new(names.iter().map(|s| s.to_string()).collect(), mul, 0).expect("quaternion group")
    }

    /// Every group of order at most 8 up to isomorphism.
    pub fn small_groups() -> Vec<(&'static str, FiniteGroup)> {
        let z = FiniteGroup::cyclic;
        vec![
            ("Z1", z(1)),
            ("Z2", z(2)),
            ("Z3", z(3)),
            ("Z4", z(4)),
            ("Z2xZ2", z(2).product(&z(2))),
            ("Z5", z(5)),
            ("Z6", z(6)),
            ("S3", FiniteGroup::symmetric3()),
            ("Z7", z(7)),
            ("Z8", z(8)),
            ("Z2xZ4", z(2).product(&z(4))),
            ("Z2xZ2xZ2", z(2).product(&z(2)).product(&z(2))),
            ("D4", FiniteGroup::dihedral4()),
            ("Q8", FiniteGroup::quaternion()),
        ]
    }

    /// Subgroup generated by `gens`, as a sorted index list.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut h = vec![self.identity];
        let mut k = 0;
        while k < h.len() {
            for &g in gens {
                let p = self.op(g, h[k]);
                if !h.contains(&p) {
                    h.push(p);
                }
            }
            k += 1;
        }
        h.sort_unstable();
        h
    }

    /// All subgroups, found by enlarging subgroups one generator at a time.
    pub fn subgroups(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut out: Vec<Vec<usize>> = vec![vec![self.identity]];
        let mut k = 0;
        while k < out.len() {
            for g in 0..n {
                if out[k].contains(&g) {
                    continue;
                }
                let mut gens = out[k].clone();
                gens.push(g);
                let h = self.generated(&gens);
                if !out.contains(&h) {
                    out.push(h);
                }
            }
            k += 1;
        }
        out.sort_by_key(|h| (h.len(), h.clone()));
        out
    }
}

/// A finite group acting on a finite set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupAction {
    pub group: FiniteGroup,
    pub set: Vec<String>,
    /// `act[g][x]` is the index of `g·x`.
    pub act: Vec<Vec<usize>>,
}

impl FiniteGroupAction {
    pub fn new(group: FiniteGroup, set: Vec<String>, act: Vec<Vec<usize>>) -> Result<Self, GrpdError> {
        let n = set.len();
        if act.len() != group.order() || act.iter().any(|r| r.len() != n || r.iter().any(|&y| y >= n)) {
            return Err(GrpdError::Axiom("action table has the wrong shape".into()));
        }
        for x in 0..n {
            if act[group.identity][x] != x {
                return Err(GrpdError::Axiom(format!("identity moves {}", set[x])));
            }
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                for x in 0..n {
                    if act[group.op(g, h)][x] != act[g][act[h][x]] {
                        return Err(GrpdError::Axiom(format!(
                            "action is not compatible with multiplication at ({}, {}, {})",
                            group.elements[g], group.elements[h], set[x]
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroupAction { group, set, act })
    }

    /// Left multiplication on the cosets `gH`.
    pub fn cosets(group: &FiniteGroup, subgroup: &[usize]) -> Self {
        let mut cosets: Vec<Vec<usize>> = Vec::new();
        for g in 0..group.order() {
            let mut c: Vec<usize> = subgroup.iter().map(|&h| group.op(g, h)).collect();
            c.sort_unstable();
            if !cosets.contains(&c) {
                cosets.push(c);
            }
        }
        let act = (0..group.order())
            .map(|g| {
                cosets
                    .iter()
                    .map(|c| {
                        let image = group.op(g, c[0]);
                        cosets.iter().position(|d| d.contains(&image)).expect("cosets partition")
                    })
                    .collect()
            })
            .collect();
        let set = (0..cosets.len()).map(|k| format!("c{k}")).collect();
        FiniteGroupAction::new(group.clone(), set, act).expect("coset action")
    }

    /// Disjoint union of actions of the same group.
    pub fn disjoint_union(parts: &[FiniteGroupAction]) -> Self {
        let group = parts[0].group.clone();
        let mut set = Vec::new();
        let mut act: Vec<Vec<usize>> = vec![Vec::new(); group.order()];
        for (k, p) in parts.iter().enumerate() {
            let offset = set.len();
            set.extend(p.set.iter().map(|s| format!("{s}.{k}")));
            for (g, row) in act.iter_mut().enumerate() {
                row.extend(p.act[g].iter().map(|y| y + offset));
            }
        }
        FiniteGroupAction::new(group, set, act).expect("union of actions")
    }

    /// Relabels the set by a permutation: new index `perm[x]` for old `x`.
    pub fn permute_set(&self, perm: &[usize]) -> Self {
        let n = self.set.len();
        let mut set = vec![String::new(); n];
        for x in 0..n {
            set[perm[x]] = self.set[x].clone();
        }
        let act = self
            .act
            .iter()
            .map(|row| {
                let mut out = vec![0; n];
                for x in 0..n {
                    out[perm[x]] = perm[row[x]];
                }
                out
            })
            .collect();
        FiniteGroupAction::new(self.group.clone(), set, act).expect("relabelled action")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_group_orders() {
        let orders: Vec<usize> = FiniteGroup::small_groups().iter().map(|g| g.1.order()).collect();
        assert_eq!(orders, vec![1, 2, 3, 4, 4, 5, 6, 6, 7, 8, 8, 8, 8, 8]);
        assert!(!FiniteGroup::symmetric3().is_abelian());
        assert!(!FiniteGroup::quaternion().is_abelian());
        assert!(FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(4)).is_abelian());
    }

    #[test]
    fn subgroups_of_s3() {
        let s3 = FiniteGroup::symmetric3();
        let sizes: Vec<usize> = s3.subgroups().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![1, 2, 2, 2, 3, 6]);
        let z2 = FiniteGroup::cyclic(2);
        assert_eq!(z2.product(&z2).product(&z2).subgroups().len(), 16);
        assert_eq!(FiniteGroup::dihedral4().subgroups().len(), 10);
        assert_eq!(FiniteGroup::quaternion().subgroups().len(), 6);
    }

    #[test]
    fn bad_tables() {
        let mul = vec![vec![0, 1], vec![1, 1]];
        assert!(FiniteGroup::new(vec!["e".into(), "a".into()], mul, 0).is_err());
        let z2 = FiniteGroup::cyclic(2);
        assert!(FiniteGroupAction::new(z2, vec!["x".into(), "y".into()], vec![vec![1, 0], vec![1, 0]]).is_err());
    }
}
