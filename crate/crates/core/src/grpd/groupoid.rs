use std::collections::HashMap;

use rayon::prelude::*;

use super::group::{FiniteGroup, FiniteGroupAction};
use super::GrpdError;

/// Largest morphism count accepted for exhaustive verification.
pub const MAX_MORPHISMS: usize = 10_000;

/// Unvalidated groupoid tables, all indices into the object/morphism lists.
#[derive(Debug, Clone, Default)]
pub struct RawGroupoid {
    pub objects: Vec<String>,
    pub morphisms: Vec<String>,
    pub d: Vec<usize>,
    pub r: Vec<usize>,
    /// `(g, h, g∘h)`, meaning "h then g".
    pub compose: Vec<(usize, usize, usize)>,
    pub inverse: Vec<usize>,
    pub identity: Vec<usize>,
}

/// A validated finite groupoid.
#[derive(Debug, Clone)]
pub struct FiniteGroupoid {
    objects: Vec<String>,
    morphisms: Vec<String>,
    d: Vec<usize>,
    r: Vec<usize>,
    compose: HashMap<(usize, usize), usize>,
    inverse: Vec<usize>,
    identity: Vec<usize>,
    // morphisms grouped by range object
    by_range: Vec<Vec<usize>>,
}

/// Checks every category axiom by enumeration.
pub fn validate_groupoid(raw: RawGroupoid) -> Result<FiniteGroupoid, GrpdError> {
    let RawGroupoid {
        objects,
        morphisms,
        d,
        r,
        compose: table,
        inverse,
        identity,
    } = raw;
    let (no, nm) = (objects.len(), morphisms.len());
    if nm > MAX_MORPHISMS {
        return Err(GrpdError::TooLarge { count: nm });
    }
    for (what, names) in [("object", &objects), ("morphism", &morphisms)] {
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = names.iter().find(|x| !seen.insert(*x)) {
            return Err(GrpdError::Input(format!("duplicate {what} id {dup}")));
        }
    }
    if d.len() != nm || r.len() != nm || inverse.len() != nm || identity.len() != no {
        return Err(GrpdError::Input("groupoid tables have inconsistent lengths".into()));
    }
    if d.iter().chain(&r).any(|&x| x >= no)
        || identity.iter().chain(&inverse).any(|&g| g >= nm)
    {
        return Err(GrpdError::Input("index out of range in groupoid tables".into()));
    }
    let name = |g: usize| morphisms[g].clone();
    let mut compose = HashMap::with_capacity(table.len());
    for &(g, h, gh) in &table {
        if g >= nm || h >= nm || gh >= nm {
            return Err(GrpdError::Input("index out of range in composition table".into()));
        }
        if d[g] != r[h] {
            return Err(GrpdError::Axiom(format!(
                "composition {}∘{} listed for a non-composable pair",
                name(g),
                name(h)
            )));
        }
        if compose.insert((g, h), gh).is_some_and(|old| old != gh) {
            return Err(GrpdError::Axiom(format!("composition {}∘{} listed twice", name(g), name(h))));
        }
        if d[gh] != d[h] || r[gh] != r[g] {
            return Err(GrpdError::Axiom(format!(
                "{}∘{} = {} has the wrong domain or range",
                name(g),
                name(h),
                name(gh)
            )));
        }
    }
    let mut by_range = vec![Vec::new(); no];
    for g in 0..nm {
        by_range[r[g]].push(g);
    }
    let pairs: usize = (0..nm).map(|g| by_range[d[g]].len()).sum();
    if pairs != compose.len() {
        let missing = (0..nm)
            .flat_map(|g| by_range[d[g]].iter().map(move |&h| (g, h)))
            .find(|p| !compose.contains_key(p))
            .expect("a composable pair is missing");
        return Err(GrpdError::Axiom(format!(
            "composition {}∘{} is not defined",
            name(missing.0),
            name(missing.1)
        )));
    }
    for x in 0..no {
        let e = identity[x];
        if d[e] != x || r[e] != x {
            return Err(GrpdError::Axiom(format!("identity of {} is not a loop at it", objects[x])));
        }
    }
    for g in 0..nm {
        if compose[&(identity[r[g]], g)] != g || compose[&(g, identity[d[g]])] != g {
            return Err(GrpdError::Axiom(format!("identities are not neutral for {}", name(g))));
        }
        let gi = inverse[g];
        if d[gi] != r[g]
            || r[gi] != d[g]
            || compose[&(g, gi)] != identity[r[g]]
            || compose[&(gi, g)] != identity[d[g]]
        {
            return Err(GrpdError::Axiom(format!("{} is not an inverse of {}", name(gi), name(g))));
        }
    }
    // (f∘g)∘h = f∘(g∘h) over all composable triples
    let bad = (0..nm).into_par_iter().find_map_first(|f| {
        for &g in &by_range[d[f]] {
            let fg = compose[&(f, g)];
            for &h in &by_range[d[g]] {
                if compose[&(fg, h)] != compose[&(f, compose[&(g, h)])] {
                    return Some((f, g, h));
                }
            }
        }
        None
    });
    if let Some((f, g, h)) = bad {
        return Err(GrpdError::Axiom(format!(
            "associativity fails on ({}, {}, {})",
            name(f),
            name(g),
            name(h)
        )));
    }
    Ok(FiniteGroupoid {
        objects,
        morphisms,
        d,
        r,
        compose,
        inverse,
        identity,
        by_range,
    })
}

impl FiniteGroupoid {
    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[String] {
        &self.morphisms
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn d(&self, g: usize) -> usize {
        self.d[g]
    }

    pub fn r(&self, g: usize) -> usize {
        self.r[g]
    }

    /// `g∘h` ("h then g") when `d(g) = r(h)`.
    pub fn compose(&self, g: usize, h: usize) -> Option<usize> {
        self.compose.get(&(g, h)).copied()
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identity[x]
    }

    pub fn object_index(&self, id: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == id)
    }

    pub fn morphism_index(&self, id: &str) -> Option<usize> {
        self.morphisms.iter().position(|o| o == id)
    }

    /// Morphisms with range `x`.
    pub fn into_object(&self, x: usize) -> &[usize] {
        &self.by_range[x]
    }

    /// `𝒢_x`, the morphisms with domain `x`.
    pub fn from_object(&self, x: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.by_range[x].iter().map(|&g| self.inverse[g]).collect();
        out.sort_unstable();
        out
    }

    /// Isotropy group `𝒢(x)` as listed morphism indices.
    pub fn loops(&self, x: usize) -> Vec<usize> {
        self.by_range[x].iter().copied().filter(|&g| self.d[g] == x).collect()
    }

    pub fn isotropy_group(&self, x: usize) -> FiniteGroup {
        let loops = self.loops(x);
        let pos = |g: usize| loops.iter().position(|&k| k == g).expect("loops compose to loops");
        let mul = loops
            .iter()
            .map(|&a| loops.iter().map(|&b| pos(self.compose[&(a, b)])).collect())
            .collect();
        let names = loops.iter().map(|&g| self.morphisms[g].clone()).collect();
        FiniteGroup::new(names, mul, pos(self.identity[x])).expect("isotropy of a valid groupoid")
    }

    pub fn to_raw(&self) -> RawGroupoid {
        let mut compose: Vec<(usize, usize, usize)> = self.compose.iter().map(|(&(g, h), &k)| (g, h, k)).collect();
        compose.sort_unstable();
        RawGroupoid {
            objects: self.objects.clone(),
            morphisms: self.morphisms.clone(),
            d: self.d.clone(),
            r: self.r.clone(),
            compose,
            inverse: self.inverse.clone(),
            identity: self.identity.clone(),
        }
    }

    /// Builds a groupoid from a composition closure: `mul(g, h)` is queried
    /// for every composable pair.
    pub fn from_fn(
        objects: Vec<String>,
        morphisms: Vec<String>,
        d: Vec<usize>,
        r: Vec<usize>,
        mul: impl Fn(usize, usize) -> usize,
        inverse: Vec<usize>,
        identity: Vec<usize>,
    ) -> Result<Self, GrpdError> {
        let nm = morphisms.len();
        if nm > MAX_MORPHISMS {
            return Err(GrpdError::TooLarge { count: nm });
        }
        let mut by_range = vec![Vec::new(); objects.len()];
        for h in 0..nm {
            if let Some(v) = by_range.get_mut(r[h]) {
                v.push(h);
            }
        }
        let mut compose = Vec::new();
        for g in 0..nm {
            for &h in by_range.get(d[g]).map_or(&[][..], Vec::as_slice) {
                compose.push((g, h, mul(g, h)));
            }
        }
        validate_groupoid(RawGroupoid {
            objects,
            morphisms,
            d,
            r,
            compose,
            inverse,
            identity,
        })
    }

    /// Pair groupoid on the given objects, morphisms `(y,x)` ordered
    /// range-major.
    pub fn pair(objects: &[&str]) -> Self {
        let n = objects.len();
        let morphisms = (0..n * n)
            .map(|k| format!("({},{})", objects[k / n], objects[k % n]))
            .collect();
        FiniteGroupoid::from_fn(
            objects.iter().map(|s| s.to_string()).collect(),
            morphisms,
            (0..n * n).map(|k| k % n).collect(),
            (0..n * n).map(|k| k / n).collect(),
            |g, h| (g / n) * n + h % n,
            (0..n * n).map(|k| (k % n) * n + k / n).collect(),
            (0..n).map(|x| x * n + x).collect(),
        )
        .expect("pair groupoid")
    }

    /// A group as a groupoid over one object.
    pub fn from_group(group: &FiniteGroup, object: &str) -> Self {
        let n = group.order();
        FiniteGroupoid::from_fn(
            vec![object.to_string()],
            group.elements.clone(),
            vec![0; n],
            vec![0; n],
            |g, h| group.op(g, h),
            (0..n).map(|g| group.inv(g)).collect(),
            vec![group.identity],
        )
        .expect("group as groupoid")
    }

    /// Disjoint union, objects and morphisms concatenated in order.
    pub fn disjoint_union(parts: &[FiniteGroupoid]) -> Result<Self, GrpdError> {
        let mut raw = RawGroupoid::default();
        for (k, p) in parts.iter().enumerate() {
            let (oo, om) = (raw.objects.len(), raw.morphisms.len());
            let tag = |s: &String| if parts.len() > 1 { format!("{s}#{k}") } else { s.clone() };
            raw.objects.extend(p.objects.iter().map(tag));
            raw.morphisms.extend(p.morphisms.iter().map(tag));
            raw.d.extend(p.d.iter().map(|x| x + oo));
            raw.r.extend(p.r.iter().map(|x| x + oo));
            raw.inverse.extend(p.inverse.iter().map(|g| g + om));
            raw.identity.extend(p.identity.iter().map(|g| g + om));
            raw.compose
                .extend(p.compose.iter().map(|(&(g, h), &c)| (g + om, h + om, c + om)));
        }
        if raw.morphisms.len() > MAX_MORPHISMS {
            return Err(GrpdError::TooLarge {
                count: raw.morphisms.len(),
            });
        }
        validate_groupoid(raw)
    }

    /// Relabels indices: object `x` moves to `obj[x]`, morphism `g` to `mor[g]`.
    pub fn permuted(&self, obj: &[usize], mor: &[usize]) -> Self {
        let (no, nm) = (self.object_count(), self.morphism_count());
        let mut raw = RawGroupoid {
            objects: vec![String::new(); no],
            morphisms: vec![String::new(); nm],
            d: vec![0; nm],
            r: vec![0; nm],
            compose: Vec::new(),
            inverse: vec![0; nm],
            identity: vec![0; no],
        };
        for x in 0..no {
            raw.objects[obj[x]] = self.objects[x].clone();
            raw.identity[obj[x]] = mor[self.identity[x]];
        }
        for g in 0..nm {
            raw.morphisms[mor[g]] = self.morphisms[g].clone();
            raw.d[mor[g]] = obj[self.d[g]];
            raw.r[mor[g]] = obj[self.r[g]];
            raw.inverse[mor[g]] = mor[self.inverse[g]];
        }
        raw.compose = self
            .compose
            .iter()
            .map(|(&(g, h), &c)| (mor[g], mor[h], mor[c]))
            .collect();
        validate_groupoid(raw).expect("relabelling preserves the axioms")
    }
}

/// `G × X ⇉ X`, morphism `(g, x)` at index `g·|X| + x`.
pub fn transformation_groupoid(a: &FiniteGroupAction) -> FiniteGroupoid {
    let n = a.set.len();
    let gr = &a.group;
    let nm = gr.order() * n;
    let morphisms = (0..nm)
        .map(|k| format!("({},{})", gr.elements[k / n], a.set[k % n]))
        .collect();
    FiniteGroupoid::from_fn(
        a.set.clone(),
        morphisms,
        (0..nm).map(|k| k % n).collect(),
        (0..nm).map(|k| a.act[k / n][k % n]).collect(),
        |g, h| gr.op(g / n, h / n) * n + h % n,
        (0..nm).map(|k| gr.inv(k / n) * n + a.act[k / n][k % n]).collect(),
        (0..n).map(|x| gr.identity * n + x).collect(),
    )
    .expect("transformation groupoid of a valid action")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_and_group_validate() {
        let p = FiniteGroupoid::pair(&["a", "b"]);
        assert_eq!(p.morphism_count(), 4);
        let z2 = FiniteGroupoid::from_group(&FiniteGroup::cyclic(2), "pt");
        assert_eq!(z2.morphism_count(), 2);
        assert_eq!(z2.isotropy_group(0).order(), 2);
    }

    #[test]
    fn broken_associativity_is_reported() {
        // one object, three elements, a commutative but non-associative table
        let mut raw = FiniteGroupoid::from_group(&FiniteGroup::cyclic(3), "pt").to_raw();
        for t in raw.compose.iter_mut() {
            match (t.0, t.1) {
                (1, 1) => t.2 = 1,
                (1, 2) | (2, 1) => t.2 = 0,
                (2, 2) => t.2 = 2,
                _ => {}
            }
        }
        raw.inverse = vec![0, 2, 1];
        let err = validate_groupoid(raw).unwrap_err();
        assert!(matches!(err, GrpdError::Axiom(_)), "{err}");
    }

    #[test]
    fn missing_composition_is_reported() {
        let mut raw = FiniteGroupoid::pair(&["a", "b"]).to_raw();
        raw.compose.pop();
        let err = validate_groupoid(raw).unwrap_err();
        assert!(err.to_string().contains("not defined"), "{err}");
    }

    #[test]
    fn transformation_groupoid_of_swap() {
        let z2 = FiniteGroup::cyclic(2);
        let a = FiniteGroupAction::new(z2, vec!["1".into(), "2".into()], vec![vec![0, 1], vec![1, 0]]).unwrap();
        let g = transformation_groupoid(&a);
        assert_eq!(g.morphism_count(), 4);
        assert_eq!(g.morphisms()[3], "(1,2)");
        assert_eq!((g.d(3), g.r(3)), (1, 0));
        assert!(g.isotropy_group(0).is_trivial());
    }

    #[test]
    fn permuting_keeps_structure() {
        let g = FiniteGroupoid::pair(&["a", "b"]);
        let h = g.permuted(&[1, 0], &[3, 2, 1, 0]);
        assert_eq!(h.objects(), &["b".to_string(), "a".to_string()]);
        assert_eq!(h.morphisms()[0], "(b,b)");
        assert_eq!(h.identity(0), 0);
    }
}
