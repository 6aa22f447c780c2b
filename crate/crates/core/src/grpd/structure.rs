use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::group::FiniteGroup;
use super::groupoid::{FiniteGroupoid, MAX_MORPHISMS};
use super::GrpdError;

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut root = x;
    while parent[root] != root {
        root = parent[root];
    }
    let mut y = x;
    while parent[y] != root {
        let next = parent[y];
        parent[y] = root;
        y = next;
    }
    root
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi] = lo;
    }
}

/// Groups `0..n` by the union-find classes of `edges`, classes ordered by
/// their least member.
fn classes(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut parent: Vec<usize> = (0..n).collect();
    for (a, b) in edges {
        union(&mut parent, a, b);
    }
    let mut class_of = vec![usize::MAX; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for x in 0..n {
        let root = find(&mut parent, x);
        if class_of[root] == usize::MAX {
            class_of[root] = members.len();
            members.push(Vec::new());
        }
        class_of[x] = class_of[root];
        members[class_of[x]].push(x);
    }
    (class_of, members)
}

/// Orbit partition with isotropy groups at the least member of each orbit.
#[derive(Debug, Clone, Serialize)]
pub struct OrbitIsotropy {
    pub orbits: Vec<Vec<String>>,
    pub representatives: Vec<String>,
    pub isotropy: Vec<FiniteGroup>,
    #[serde(skip)]
    pub orbit_of: Vec<usize>,
    #[serde(skip)]
    pub members: Vec<Vec<usize>>,
}

impl OrbitIsotropy {
    pub fn count(&self) -> usize {
        self.members.len()
    }

    pub fn representative(&self, orbit: usize) -> usize {
        self.members[orbit][0]
    }
}

pub fn orbits_isotropy(g: &FiniteGroupoid) -> OrbitIsotropy {
    let (orbit_of, members) = classes(g.object_count(), (0..g.morphism_count()).map(|k| (g.d(k), g.r(k))));
    let name = |xs: &Vec<usize>| xs.iter().map(|&x| g.objects()[x].clone()).collect();
    OrbitIsotropy {
        orbits: members.iter().map(name).collect(),
        representatives: members.iter().map(|o| g.objects()[o[0]].clone()).collect(),
        isotropy: members.iter().map(|o| g.isotropy_group(o[0])).collect(),
        orbit_of,
        members,
    }
}

/// Identity `|Mor| = Σ_O |O|²·|𝒢(x_O)|`.
pub fn morphism_count_identity(g: &FiniteGroupoid) -> bool {
    let o = orbits_isotropy(g);
    let sum: usize = o
        .members
        .iter()
        .zip(&o.isotropy)
        .map(|(m, iso)| m.len() * m.len() * iso.order())
        .sum();
    sum == g.morphism_count()
}

/// The reduction `𝒢_A` to an invariant object set.
pub fn reduce_invariant(g: &FiniteGroupoid, subset: &[usize]) -> Result<FiniteGroupoid, GrpdError> {
    let mut inside = vec![false; g.object_count()];
    for &x in subset {
        if x >= inside.len() {
            return Err(GrpdError::Input(format!("object index {x} out of range")));
        }
        inside[x] = true;
    }
    if let Some(w) = (0..g.morphism_count()).find(|&k| inside[g.d(k)] != inside[g.r(k)]) {
        let w = if inside[g.d(w)] { w } else { g.inverse(w) };
        return Err(GrpdError::NotInvariant {
            morphism: g.morphisms()[w].clone(),
            from: g.objects()[g.d(w)].clone(),
            to: g.objects()[g.r(w)].clone(),
        });
    }
    let objs: Vec<usize> = (0..g.object_count()).filter(|&x| inside[x]).collect();
    let mors: Vec<usize> = (0..g.morphism_count()).filter(|&k| inside[g.d(k)]).collect();
    restrict(g, &objs, &mors)
}

/// Subgroupoid on the given (closed) object and morphism lists.
fn restrict(g: &FiniteGroupoid, objs: &[usize], mors: &[usize]) -> Result<FiniteGroupoid, GrpdError> {
    let mut onew = vec![usize::MAX; g.object_count()];
    for (i, &x) in objs.iter().enumerate() {
        onew[x] = i;
    }
    let mut mnew = vec![usize::MAX; g.morphism_count()];
    for (i, &k) in mors.iter().enumerate() {
        mnew[k] = i;
    }
    FiniteGroupoid::from_fn(
        objs.iter().map(|&x| g.objects()[x].clone()).collect(),
        mors.iter().map(|&k| g.morphisms()[k].clone()).collect(),
        mors.iter().map(|&k| onew[g.d(k)]).collect(),
        mors.iter().map(|&k| onew[g.r(k)]).collect(),
        |a, b| mnew[g.compose(mors[a], mors[b]).expect("composable")],
        mors.iter().map(|&k| mnew[g.inverse(k)]).collect(),
        objs.iter().map(|&x| mnew[g.identity(x)]).collect(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub is_group_bundle: bool,
    pub is_pair_groupoid: bool,
    pub is_transitive: bool,
    pub is_principal: bool,
}

pub fn classify(g: &FiniteGroupoid) -> Classification {
    let o = orbits_isotropy(g);
    let is_group_bundle = (0..g.morphism_count()).all(|k| g.d(k) == g.r(k));
    let is_transitive = o.count() == 1;
    let is_principal = o.isotropy.iter().all(FiniteGroup::is_trivial);
    Classification {
        is_group_bundle,
        is_pair_groupoid: is_transitive && is_principal,
        is_transitive,
        is_principal,
    }
}

/// Cross-section `Ξ` and section morphisms `σ(x): x → γ(orbit(x))`.
#[derive(Debug, Clone)]
pub struct Sections {
    pub cross_section: Vec<usize>,
    pub orbit_of: Vec<usize>,
    pub sigma: Vec<usize>,
}

impl Sections {
    /// `γ(orbit(x))`.
    pub fn target(&self, x: usize) -> usize {
        self.cross_section[self.orbit_of[x]]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SectionsReport {
    pub cross_section: Vec<String>,
    /// `(x, σ(x))`.
    pub sigma: Vec<(String, String)>,
}

impl Sections {
    pub fn report(&self, g: &FiniteGroupoid) -> SectionsReport {
        SectionsReport {
            cross_section: self.cross_section.iter().map(|&x| g.objects()[x].clone()).collect(),
            sigma: self
                .sigma
                .iter()
                .enumerate()
                .map(|(x, &s)| (g.objects()[x].clone(), g.morphisms()[s].clone()))
                .collect(),
        }
    }
}

pub fn canonical_sections(g: &FiniteGroupoid) -> Sections {
    let o = orbits_isotropy(g);
    let cross_section: Vec<usize> = o.members.iter().map(|m| m[0]).collect();
    let sigma = (0..g.object_count())
        .map(|x| {
            let target = cross_section[o.orbit_of[x]];
            if target == x {
                g.identity(x)
            } else {
                *g.into_object(target)
                    .iter()
                    .find(|&&k| g.d(k) == x)
                    .expect("orbit members are connected to the representative")
            }
        })
        .collect();
    Sections {
        cross_section,
        orbit_of: o.orbit_of,
        sigma,
    }
}

/// `θ^↓(𝒢)` with its triples `(n₂, g, n₁)`, listed in lexicographic order.
#[derive(Debug, Clone)]
pub struct Pullback {
    pub groupoid: FiniteGroupoid,
    pub triples: Vec<(usize, usize, usize)>,
    index: HashMap<(usize, usize, usize), usize>,
}

impl Pullback {
    pub fn index_of(&self, n2: usize, g: usize, n1: usize) -> Option<usize> {
        self.index.get(&(n2, g, n1)).copied()
    }
}

pub fn pullback(g: &FiniteGroupoid, labels: &[String], theta: &[usize]) -> Result<Pullback, GrpdError> {
    if labels.len() != theta.len() {
        return Err(GrpdError::Input("θ must assign an object to every label".into()));
    }
    if let Some(&bad) = theta.iter().find(|&&x| x >= g.object_count()) {
        return Err(GrpdError::Input(format!("θ targets object index {bad} out of range")));
    }
    let mut fibre = vec![Vec::new(); g.object_count()];
    for (n, &x) in theta.iter().enumerate() {
        fibre[x].push(n);
    }
    let count: usize = (0..g.morphism_count())
        .map(|k| fibre[g.r(k)].len() * fibre[g.d(k)].len())
        .sum();
    if count > MAX_MORPHISMS {
        return Err(GrpdError::TooLarge { count });
    }
    let mut triples = Vec::with_capacity(count);
    for n2 in 0..labels.len() {
        for &k in g.into_object(theta[n2]) {
            for &n1 in &fibre[g.d(k)] {
                triples.push((n2, k, n1));
            }
        }
    }
    let index: HashMap<(usize, usize, usize), usize> = triples.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let names = triples
        .iter()
        .map(|&(n2, k, n1)| format!("({},{},{})", labels[n2], g.morphisms()[k], labels[n1]))
        .collect();
    let groupoid = FiniteGroupoid::from_fn(
        labels.to_vec(),
        names,
        triples.iter().map(|t| t.2).collect(),
        triples.iter().map(|t| t.0).collect(),
        |a, b| {
            let ((n3, x, _), (_, y, n1)) = (triples[a], triples[b]);
            index[&(n3, g.compose(x, y).expect("composable middle terms"), n1)]
        },
        triples
            .iter()
            .map(|&(n2, k, n1)| index[&(n1, g.inverse(k), n2)])
            .collect(),
        (0..labels.len()).map(|n| index[&(n, g.identity(theta[n]), n)]).collect(),
    )?;
    Ok(Pullback {
        groupoid,
        triples,
        index,
    })
}

/// Isotropy bundle over the cross-section, with each bundle morphism's
/// index in the ambient groupoid.
fn isotropy_bundle(g: &FiniteGroupoid, xi: &[usize]) -> (FiniteGroupoid, Vec<usize>) {
    let mors: Vec<usize> = xi.iter().flat_map(|&x| g.loops(x)).collect();
    let bundle = restrict(g, xi, &mors).expect("isotropy loops form a group bundle");
    (bundle, mors)
}

#[derive(Debug, Clone, Serialize)]
pub struct IsotropyFibre {
    pub object: String,
    pub group: FiniteGroup,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PhiChecks {
    pub sizes_match: bool,
    pub preserves_ends: bool,
    pub bijective: bool,
    pub homomorphism: bool,
    pub inverse_round_trip: bool,
}

impl PhiChecks {
    pub fn all(&self) -> bool {
        self.sizes_match && self.preserves_ends && self.bijective && self.homomorphism && self.inverse_round_trip
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PullbackIsoReport {
    pub sections: SectionsReport,
    pub bundle: Vec<IsotropyFibre>,
    /// `(x, θ(x))` with `θ = γ∘q`.
    pub theta: Vec<(String, String)>,
    pub morphisms: usize,
    pub pullback_morphisms: usize,
    /// `(g, Φ(g))`.
    pub phi: Vec<(String, String)>,
    pub convention: &'static str,
    pub checks: PhiChecks,
    pub verified: bool,
}

const PHI_CONVENTION: &str = "g∘h is h then g; Φ(g) = (r(g), σ(r(g))∘g∘σ(d(g))⁻¹, d(g)); \
Φ⁻¹(x, h, y) = σ(x)⁻¹∘h∘σ(y) for a triple with range label x and domain label y";

/// Builds `Φ: 𝒢 → θ^↓(Γ)` and checks by enumeration that it is an
/// isomorphism with the stated inverse.
pub fn pullback_isomorphism_verify(g: &FiniteGroupoid) -> PullbackIsoReport {
    let s = canonical_sections(g);
    let (bundle, bundle_mors) = isotropy_bundle(g, &s.cross_section);
    let to_bundle: HashMap<usize, usize> = bundle_mors.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    // θ(x) is the position of γ(orbit(x)) in Ξ, i.e. the orbit index
    let theta: Vec<usize> = s.orbit_of.clone();
    let p = pullback(&bundle, g.objects(), &theta).expect("pullback of the isotropy bundle");
    let comp = |a: usize, b: usize| g.compose(a, b).expect("composable");
    let middle = |k: usize| comp(comp(s.sigma[g.r(k)], k), g.inverse(s.sigma[g.d(k)]));
    let phi: Vec<Option<usize>> = (0..g.morphism_count())
        .map(|k| {
            let m = to_bundle.get(&middle(k))?;
            p.index_of(g.r(k), *m, g.d(k))
        })
        .collect();
    let sizes_match = p.groupoid.morphism_count() == g.morphism_count();
    let total = phi.iter().all(Option::is_some);
    let preserves_ends = total
        && phi.iter().enumerate().all(|(k, f)| {
            let f = f.expect("total");
            p.groupoid.d(f) == g.d(k) && p.groupoid.r(f) == g.r(k)
        });
    let mut hit = vec![false; p.groupoid.morphism_count()];
    let mut injective = total;
    for f in phi.iter().flatten() {
        injective &= !std::mem::replace(&mut hit[*f], true);
    }
    let bijective = injective && hit.iter().all(|&h| h);
    let homomorphism = total
        && (0..g.morphism_count()).into_par_iter().all(|a| {
            g.into_object(g.d(a)).iter().all(|&b| {
                let lhs = phi[comp(a, b)];
                let rhs = p.groupoid.compose(phi[a].expect("total"), phi[b].expect("total"));
                lhs == rhs
            })
        });
    let inverse = |t: usize| -> usize {
        let (x, h, y) = p.triples[t];
        comp(comp(g.inverse(s.sigma[x]), bundle_mors[h]), s.sigma[y])
    };
    let inverse_round_trip = bijective
        && (0..g.morphism_count()).all(|k| inverse(phi[k].expect("total")) == k)
        && (0..p.groupoid.morphism_count()).all(|t| phi[inverse(t)] == Some(t));
    let checks = PhiChecks {
        sizes_match,
        preserves_ends,
        bijective,
        homomorphism,
        inverse_round_trip,
    };
    PullbackIsoReport {
        sections: s.report(g),
        bundle: s
            .cross_section
            .iter()
            .map(|&x| IsotropyFibre {
                object: g.objects()[x].clone(),
                group: g.isotropy_group(x),
            })
            .collect(),
        theta: (0..g.object_count())
            .map(|x| (g.objects()[x].clone(), g.objects()[s.target(x)].clone()))
            .collect(),
        morphisms: g.morphism_count(),
        pullback_morphisms: p.groupoid.morphism_count(),
        phi: phi
            .iter()
            .enumerate()
            .map(|(k, f)| {
                let image = f.map_or_else(|| "undefined".to_string(), |f| p.groupoid.morphisms()[f].clone());
                (g.morphisms()[k].clone(), image)
            })
            .collect(),
        convention: PHI_CONVENTION,
        verified: checks.all(),
        checks,
    }
}

/// `Z = {(g, n) : d(g) = θ(n)}` with `ρ(g, n) = r(g)` and `σ(g, n) = n`.
#[derive(Debug, Clone)]
pub struct EquivalenceBimodule {
    pub elements: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
}

impl EquivalenceBimodule {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn rho(&self, g: &FiniteGroupoid, z: usize) -> usize {
        g.r(self.elements[z].0)
    }

    pub fn sigma(&self, z: usize) -> usize {
        self.elements[z].1
    }

    /// `h·(k, n) = (h∘k, n)` when `d(h) = r(k)`.
    pub fn left(&self, g: &FiniteGroupoid, h: usize, z: usize) -> Option<usize> {
        let (k, n) = self.elements[z];
        g.compose(h, k).and_then(|hk| self.index.get(&(hk, n)).copied())
    }

    /// `(k, n)·(n, h, n₁) = (k∘h, n₁)` when the range label matches.
    pub fn right(&self, g: &FiniteGroupoid, p: &Pullback, z: usize, t: usize) -> Option<usize> {
        let (k, n) = self.elements[z];
        let (n2, h, n1) = p.triples[t];
        if n2 != n {
            return None;
        }
        g.compose(k, h).and_then(|kh| self.index.get(&(kh, n1)).copied())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BimoduleCheck {
    pub name: &'static str,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BimoduleReport {
    pub z_size: usize,
    pub elements: Vec<String>,
    pub pullback_morphisms: usize,
    pub checks: Vec<BimoduleCheck>,
    pub all_passed: bool,
}

impl BimoduleReport {
    pub fn check(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.passed)
    }
}

/// Builds `Z` for `θ: N → objects` and checks the actions and the five
/// equivalence conditions.
pub fn equivalence_bimodule_verify(
    g: &FiniteGroupoid,
    labels: &[String],
    theta: &[usize],
) -> Result<(EquivalenceBimodule, BimoduleReport), GrpdError> {
    if let Some(x) = (0..g.object_count()).find(|x| !theta.contains(x)) {
        return Err(GrpdError::NotSurjective {
            object: g.objects()[x].clone(),
        });
    }
    let p = pullback(g, labels, theta)?;
    let pg = &p.groupoid;
    let mut elements = Vec::new();
    for k in 0..g.morphism_count() {
        for (n, &x) in theta.iter().enumerate() {
            if g.d(k) == x {
                elements.push((k, n));
            }
        }
    }
    let index = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let z = EquivalenceBimodule { elements, index };
    let zs: Vec<usize> = (0..z.len()).collect();
    // all h with d(h) = ρ(z), and all t with range label σ(z)
    let from: Vec<Vec<usize>> = (0..g.object_count()).map(|x| g.from_object(x)).collect();
    let left_of = |zz: usize| from[z.rho(g, zz)].iter().copied();
    let rights = |zz: usize| pg.into_object(z.sigma(zz)).to_vec();

    let left_defined = zs.par_iter().all(|&zz| {
        left_of(zz).all(|h| {
            z.left(g, h, zz)
                .is_some_and(|w| z.rho(g, w) == g.r(h) && z.sigma(w) == z.sigma(zz))
        })
    });
    let right_defined = zs.par_iter().all(|&zz| {
        rights(zz).into_iter().all(|t| {
            z.right(g, &p, zz, t)
                .is_some_and(|w| z.rho(g, w) == z.rho(g, zz) && z.sigma(w) == pg.d(t))
        })
    });
    let well_defined = left_defined
        && right_defined
        && zs.par_iter().all(|&zz| {
            let unit_left = z.left(g, g.identity(z.rho(g, zz)), zz) == Some(zz);
            let unit_right = z.right(g, &p, zz, pg.identity(z.sigma(zz))) == Some(zz);
            let assoc_left = left_of(zz).all(|h2| {
                let w = z.left(g, h2, zz).expect("defined");
                left_of(w).all(|h1| z.left(g, g.compose(h1, h2).expect("composable"), zz) == z.left(g, h1, w))
            });
            let assoc_right = rights(zz).into_iter().all(|t1| {
                let w = z.right(g, &p, zz, t1).expect("defined");
                rights(w).into_iter().all(|t2| {
                    z.right(g, &p, zz, pg.compose(t1, t2).expect("composable")) == z.right(g, &p, w, t2)
                })
            });
            unit_left && unit_right && assoc_left && assoc_right
        });
    let left_free = well_defined
        && zs
            .par_iter()
            .all(|&zz| left_of(zz).all(|h| z.left(g, h, zz) != Some(zz) || h == g.identity(g.d(h))));
    let right_free = well_defined
        && zs.par_iter().all(|&zz| {
            rights(zz)
                .into_iter()
                .all(|t| z.right(g, &p, zz, t) != Some(zz) || t == pg.identity(pg.d(t)))
        });
    let commute = well_defined
        && zs.par_iter().all(|&zz| {
            left_of(zz).all(|h| {
                rights(zz).into_iter().all(|t| {
                    let a = z.left(g, h, zz).and_then(|w| z.right(g, &p, w, t));
                    let b = z.right(g, &p, zz, t).and_then(|w| z.left(g, h, w));
                    a.is_some() && a == b
                })
            })
        });
    let orbit_map_bijective = |edges: Vec<(usize, usize)>, value: &dyn Fn(usize) -> usize, target: usize| {
        let (class_of, members) = classes(z.len(), edges);
        let constant = (0..z.len()).all(|zz| value(zz) == value(members[class_of[zz]][0]));
        let mut images: Vec<usize> = members.iter().map(|m| value(m[0])).collect();
        images.sort_unstable();
        images.dedup();
        constant && images.len() == members.len() && images.len() == target
    };
    let (zr, pr) = (&z, &p);
    let right_edges: Vec<(usize, usize)> = zs
        .iter()
        .flat_map(|&zz| rights(zz).into_iter().filter_map(move |t| zr.right(g, pr, zz, t).map(|w| (zz, w))))
        .collect();
    let left_edges: Vec<(usize, usize)> = zs
        .iter()
        .flat_map(|&zz| left_of(zz).filter_map(move |h| zr.left(g, h, zz).map(|w| (zz, w))))
        .collect();
    let rho_bijection = well_defined && orbit_map_bijective(right_edges, &|zz| z.rho(g, zz), g.object_count());
    let sigma_bijection = well_defined && orbit_map_bijective(left_edges, &|zz| z.sigma(zz), labels.len());
    let checks = vec![
        BimoduleCheck {
            name: "well_defined",
            passed: well_defined,
        },
        BimoduleCheck {
            name: "left_free",
            passed: left_free,
        },
        BimoduleCheck {
            name: "right_free",
            passed: right_free,
        },
        BimoduleCheck {
            name: "actions_commute",
            passed: commute,
        },
        BimoduleCheck {
            name: "rho_orbit_bijection",
            passed: rho_bijection,
        },
        BimoduleCheck {
            name: "sigma_orbit_bijection",
            passed: sigma_bijection,
        },
    ];
    let report = BimoduleReport {
        z_size: z.len(),
        elements: z
            .elements
            .iter()
            .map(|&(k, n)| format!("({},{})", g.morphisms()[k], labels[n]))
            .collect(),
        pullback_morphisms: pg.morphism_count(),
        all_passed: checks.iter().all(|c| c.passed),
        checks,
    };
    Ok((z, report))
}

/// `∅ = U₀ ⊊ U₁ ⊊ … ⊊ U_n = objects`, each `U_k` invariant.
#[derive(Debug, Clone)]
pub struct Filtration {
    sets: Vec<Vec<usize>>,
}

impl Filtration {
    pub fn new(g: &FiniteGroupoid, sets: Vec<Vec<usize>>) -> Result<Self, GrpdError> {
        let no = g.object_count();
        if sets.is_empty() {
            return Err(GrpdError::BadFiltration("a filtration needs at least one set".into()));
        }
        let mut prev = vec![false; no];
        let mut out = Vec::with_capacity(sets.len());
        for (k, set) in sets.into_iter().enumerate() {
            let mut cur = vec![false; no];
            for &x in &set {
                if x >= no {
                    return Err(GrpdError::BadFiltration(format!("U{} names an unknown object", k + 1)));
                }
                cur[x] = true;
            }
            if (0..no).any(|x| prev[x] && !cur[x]) {
                return Err(GrpdError::BadFiltration(format!("U{} does not contain U{}", k + 1, k)));
            }
            if cur == prev {
                return Err(GrpdError::BadFiltration(format!("layer V{} is empty", k + 1)));
            }
            if let Some(w) = (0..g.morphism_count()).find(|&m| cur[g.d(m)] && !cur[g.r(m)]) {
                return Err(GrpdError::BadFiltration(format!(
                    "U{} is not invariant: {} leaves it",
                    k + 1,
                    g.morphisms()[w]
                )));
            }
            out.push((0..no).filter(|&x| cur[x]).collect());
            prev = cur;
        }
        if prev.iter().any(|&b| !b) {
            return Err(GrpdError::BadFiltration("the last set must contain every object".into()));
        }
        Ok(Filtration { sets: out })
    }

    /// The single-step filtration `U₁ = objects`.
    pub fn trivial(g: &FiniteGroupoid) -> Self {
        Filtration {
            sets: vec![(0..g.object_count()).collect()],
        }
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// `V_k = U_k ∖ U_{k−1}`.
    pub fn layers(&self) -> Vec<Vec<usize>> {
        let mut prev: Vec<usize> = Vec::new();
        self.sets
            .iter()
            .map(|u| {
                let v = u.iter().copied().filter(|x| !prev.contains(x)).collect();
                prev = u.clone();
                v
            })
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionLayer {
    pub layer: usize,
    pub objects: Vec<String>,
    pub morphisms: usize,
    pub orbit_count: usize,
    pub classification: Classification,
    pub isomorphism: PullbackIsoReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecompositionReport {
    pub layers: Vec<DecompositionLayer>,
    pub morphisms_partitioned: bool,
    pub verified: bool,
}

pub fn piecewise_decompose(g: &FiniteGroupoid, f: &Filtration) -> Result<DecompositionReport, GrpdError> {
    let mut layers = Vec::new();
    let mut layer_of = vec![usize::MAX; g.object_count()];
    let mut counted = 0;
    for (k, v) in f.layers().into_iter().enumerate() {
        for &x in &v {
            layer_of[x] = k;
        }
        let red = reduce_invariant(g, &v).map_err(|e| GrpdError::BadFiltration(e.to_string()))?;
        counted += red.morphism_count();
        layers.push(DecompositionLayer {
            layer: k + 1,
            objects: red.objects().to_vec(),
            morphisms: red.morphism_count(),
            orbit_count: orbits_isotropy(&red).count(),
            classification: classify(&red),
            isomorphism: pullback_isomorphism_verify(&red),
        });
    }
    let morphisms_partitioned =
        counted == g.morphism_count() && (0..g.morphism_count()).all(|m| layer_of[g.d(m)] == layer_of[g.r(m)]);
    Ok(DecompositionReport {
        verified: morphisms_partitioned && layers.iter().all(|l| l.isomorphism.verified),
        morphisms_partitioned,
        layers,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Block {
    pub representative: String,
    pub orbit_size: usize,
    pub isotropy_order: usize,
    pub isotropy_abelian: bool,
    /// Characters of the isotropy group, when it is abelian.
    pub irreducibles: Option<usize>,
    pub dim: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct AlgebraProfile {
    pub blocks: Vec<Block>,
    pub total_dim: usize,
    pub morphisms: usize,
    pub dual_count: Option<usize>,
    pub ideal_dims: Option<Vec<usize>>,
    pub notes: Vec<String>,
}

impl AlgebraProfile {
    /// One block with trivial isotropy, so `ℂ[𝒢]` is a single full matrix
    /// algebra.
    pub fn is_single_matrix_block(&self) -> bool {
        self.blocks.len() == 1 && self.blocks[0].isotropy_order == 1
    }
}

pub fn algebra_profile(g: &FiniteGroupoid, f: Option<&Filtration>) -> AlgebraProfile {
    let o = orbits_isotropy(g);
    let blocks: Vec<Block> = o
        .members
        .iter()
        .zip(&o.isotropy)
        .enumerate()
        .map(|(i, (m, iso))| {
            let abelian = iso.is_abelian();
            Block {
                representative: o.representatives[i].clone(),
                orbit_size: m.len(),
                isotropy_order: iso.order(),
                isotropy_abelian: abelian,
                irreducibles: abelian.then_some(iso.order()),
                dim: m.len() * m.len() * iso.order(),
            }
        })
        .collect();
    let total_dim = blocks.iter().map(|b| b.dim).sum();
    let mut notes = Vec::new();
    let dual_count = if blocks.iter().all(|b| b.isotropy_abelian) {
        Some(blocks.iter().map(|b| b.isotropy_order).sum())
    } else {
        notes.push("dual count omitted: some isotropy group is not abelian".to_string());
        None
    };
    let ideal_dims = f.map(|f| {
        f.sets()
            .iter()
            .map(|u| {
                o.members
                    .iter()
                    .zip(&blocks)
                    .filter(|(m, _)| u.contains(&m[0]))
                    .map(|(_, b)| b.dim)
                    .sum()
            })
            .collect()
    });
    AlgebraProfile {
        blocks,
        total_dim,
        morphisms: g.morphism_count(),
        dual_count,
        ideal_dims,
        notes,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SparseMatrix {
    pub morphism: String,
    /// `(row, column)` positions of the ones.
    pub ones: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegularRepresentation {
    pub object: String,
    pub basis: Vec<String>,
    pub matrices: Vec<SparseMatrix>,
    pub faithful: bool,
    /// A morphism whose indicator acts as zero.
    pub kernel_witness: Option<String>,
    pub orbit_is_everything: bool,
}

/// Left convolution of morphism indicators on the span of `𝒢_x`.
pub fn regular_representation_faithful(g: &FiniteGroupoid, x: usize) -> RegularRepresentation {
    let basis = g.from_object(x);
    let pos: HashMap<usize, usize> = basis.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let matrices: Vec<Vec<(usize, usize)>> = (0..g.morphism_count())
        .map(|m| {
            basis
                .iter()
                .enumerate()
                .filter_map(|(col, &k)| g.compose(m, k).map(|mk| (pos[&mk], col)))
                .collect()
        })
        .collect();
    let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
    let disjoint = matrices
        .iter()
        .enumerate()
        .all(|(m, ones)| ones.iter().all(|&e| owner.insert(e, m).is_none()));
    let kernel_witness = matrices.iter().position(Vec::is_empty);
    let faithful = if disjoint {
        kernel_witness.is_none()
    } else {
        independent(&matrices, basis.len())
    };
    let orbit_is_everything = {
        let mut seen = vec![false; g.object_count()];
        for &k in &basis {
            seen[g.r(k)] = true;
        }
        seen.iter().all(|&b| b)
    };
    RegularRepresentation {
        object: g.objects()[x].clone(),
        basis: basis.iter().map(|&k| g.morphisms()[k].clone()).collect(),
        matrices: matrices
            .into_iter()
            .enumerate()
            .map(|(m, ones)| SparseMatrix {
                morphism: g.morphisms()[m].clone(),
                ones,
            })
            .collect(),
        faithful,
        kernel_witness: kernel_witness.map(|m| g.morphisms()[m].clone()),
        orbit_is_everything,
    }
}

fn independent(matrices: &[Vec<(usize, usize)>], n: usize) -> bool {
    use crate::exact_la::{int, Matrix, Rat};
    let rows: Vec<Vec<Rat>> = matrices
        .iter()
        .map(|ones| {
            let mut v = vec![int(0); n * n];
            for &(i, j) in ones {
                v[i * n + j] = int(1);
            }
            v
        })
        .collect();
    match Matrix::from_rows(rows) {
        Ok(m) => m.rank().is_ok_and(|r| r == matrices.len()),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grpd::{corpus, transformation_groupoid, FiniteGroup, FiniteGroupAction};

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn negation_orbits_and_sections() {
        let g = corpus::negation_groupoid();
        let o = orbits_isotropy(&g);
        assert_eq!(o.orbits, vec![names(&["-1", "1"]), names(&["0"])]);
        assert_eq!(o.isotropy.iter().map(FiniteGroup::order).collect::<Vec<_>>(), vec![1, 2]);
        let s = canonical_sections(&g).report(&g);
        assert_eq!(s.cross_section, names(&["-1", "0"]));
        assert_eq!(s.sigma[2], ("1".to_string(), "(swap,1)".to_string()));
        assert!(morphism_count_identity(&g));
    }

    #[test]
    fn s3_natural_isotropy() {
        let o = orbits_isotropy(&corpus::s3_natural());
        assert_eq!(o.count(), 1);
        assert_eq!(o.isotropy[0].order(), 2);
    }

    #[test]
    fn reduction() {
        let g = corpus::negation_groupoid();
        let zero = reduce_invariant(&g, &[1]).unwrap();
        assert_eq!(zero.morphism_count(), 2);
        assert_eq!(reduce_invariant(&g, &[0, 1, 2]).unwrap().morphism_count(), 6);
        match reduce_invariant(&g, &[0]).unwrap_err() {
            GrpdError::NotInvariant { from, to, .. } => assert_eq!((from.as_str(), to.as_str()), ("-1", "1")),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn classification_flags() {
        assert!(classify(&FiniteGroupoid::pair(&["a", "b", "c", "d"])).is_pair_groupoid);
        let c = classify(&corpus::z4_parity());
        assert!(!c.is_group_bundle && !c.is_pair_groupoid && c.is_transitive);
        let bundle = FiniteGroupoid::disjoint_union(&[
            FiniteGroupoid::from_group(&FiniteGroup::cyclic(2), "x"),
            FiniteGroupoid::from_group(&FiniteGroup::cyclic(3), "y"),
            FiniteGroupoid::from_group(&FiniteGroup::symmetric3(), "z"),
        ])
        .unwrap();
        assert!(classify(&bundle).is_group_bundle);
        let s = canonical_sections(&bundle);
        assert_eq!(s.cross_section, vec![0, 1, 2]);
        assert!((0..3).all(|x| s.sigma[x] == bundle.identity(x)));
    }

    #[test]
    fn pair_sections() {
        let g = FiniteGroupoid::pair(&["a", "b"]);
        let s = canonical_sections(&g).report(&g);
        assert_eq!(s.cross_section, names(&["a"]));
        assert_eq!(s.sigma[1].1, "(a,b)");
    }

    #[test]
    fn pullbacks() {
        let g = FiniteGroupoid::pair(&["a", "b"]);
        let p = pullback(&g, &names(&["1", "2", "3"]), &[0, 0, 1]).unwrap();
        assert_eq!(p.groupoid.morphism_count(), 9);
        assert!(classify(&p.groupoid).is_pair_groupoid);
        let z2 = FiniteGroupoid::from_group(&FiniteGroup::cyclic(2), "pt");
        let q = pullback(&z2, &names(&["1", "2"]), &[0, 0]).unwrap();
        assert_eq!(q.groupoid.morphism_count(), 8);
        let id = pullback(&g, g.objects(), &[0, 1]).unwrap();
        assert_eq!(id.groupoid.morphism_count(), 4);
        assert!(morphism_count_identity(&q.groupoid));
    }

    #[test]
    fn phi_on_examples() {
        let r = pullback_isomorphism_verify(&FiniteGroupoid::pair(&["a", "b"]));
        assert!(r.verified);
        assert_eq!(r.bundle.len(), 1);
        assert!(r.bundle[0].group.is_trivial());
        let r = pullback_isomorphism_verify(&corpus::z4_parity());
        assert!(r.verified, "{:?}", r.checks);
        assert_eq!((r.pullback_morphisms, r.bundle[0].group.order()), (8, 2));
    }

    #[test]
    fn bimodules() {
        let g = FiniteGroupoid::pair(&["a", "b"]);
        let (_, rep) = equivalence_bimodule_verify(&g, &names(&["1", "2", "3"]), &[0, 0, 1]).unwrap();
        assert_eq!(rep.z_size, 6);
        assert!(rep.all_passed, "{:?}", rep.checks);
        let z2 = FiniteGroupoid::from_group(&FiniteGroup::cyclic(2), "pt");
        let (_, rep) = equivalence_bimodule_verify(&z2, &names(&["1", "2"]), &[0, 0]).unwrap();
        assert_eq!(rep.z_size, 4);
        assert!(rep.all_passed);
        let neg = corpus::negation_groupoid();
        let (_, rep) = equivalence_bimodule_verify(&neg, neg.objects(), &[0, 1, 2]).unwrap();
        assert_eq!(rep.z_size, neg.morphism_count());
        assert!(rep.all_passed);
        assert!(matches!(
            equivalence_bimodule_verify(&g, &names(&["1"]), &[0]),
            Err(GrpdError::NotSurjective { .. })
        ));
    }

    #[test]
    fn decomposition_of_negation() {
        let g = corpus::negation_groupoid();
        let f = Filtration::new(&g, vec![vec![0, 2], vec![0, 1, 2]]).unwrap();
        let rep = piecewise_decompose(&g, &f).unwrap();
        assert!(rep.verified);
        assert!(rep.layers[0].classification.is_pair_groupoid);
        assert!(rep.layers[1].classification.is_group_bundle);
        assert_eq!(rep.layers[1].isomorphism.bundle[0].group.order(), 2);
        let prof = algebra_profile(&g, Some(&f));
        assert_eq!(prof.ideal_dims, Some(vec![4, 6]));
        assert_eq!(prof.total_dim, 6);
        assert!(Filtration::new(&g, vec![vec![0], vec![0, 1, 2]]).is_err());
        assert!(Filtration::new(&g, vec![vec![0, 2], vec![0, 2], vec![0, 1, 2]]).is_err());
        assert!(Filtration::new(&g, vec![vec![0, 2]]).is_err());
        let one = piecewise_decompose(&g, &Filtration::trivial(&g)).unwrap();
        assert_eq!(one.layers.len(), 1);
    }

    #[test]
    fn translation_decomposition() {
        let z4 = FiniteGroup::cyclic(4);
        let act = (0..4).map(|g| (0..4).map(|x| (g + x) % 4).collect()).collect();
        let a = FiniteGroupAction::new(z4, names(&["0", "1", "2", "3"]), act).unwrap();
        let g = transformation_groupoid(&a);
        let rep = piecewise_decompose(&g, &Filtration::trivial(&g)).unwrap();
        assert!(rep.verified && rep.layers[0].classification.is_pair_groupoid);
        assert_eq!(rep.layers[0].objects.len(), 4);
    }

    #[test]
    fn profiles() {
        let p = algebra_profile(&FiniteGroupoid::pair(&["a", "b"]), None);
        assert_eq!((p.blocks.len(), p.total_dim, p.dual_count), (1, 4, Some(1)));
        assert!(p.is_single_matrix_block());
        let p = algebra_profile(&corpus::z4_parity(), None);
        assert_eq!((p.blocks[0].orbit_size, p.blocks[0].isotropy_order), (2, 2));
        assert_eq!((p.total_dim, p.dual_count), (8, Some(2)));
        let s3 = FiniteGroupoid::from_group(&FiniteGroup::symmetric3(), "pt");
        let p = algebra_profile(&s3, None);
        assert_eq!(p.dual_count, None);
        assert_eq!(p.notes.len(), 1);
    }

    #[test]
    fn regular_representations() {
        let g = FiniteGroupoid::pair(&["a", "b"]);
        assert!(regular_representation_faithful(&g, 1).faithful);
        let neg = corpus::negation_groupoid();
        let r = regular_representation_faithful(&neg, 2);
        assert!(!r.faithful && !r.orbit_is_everything);
        assert_eq!(r.kernel_witness.as_deref(), Some("(id,0)"));
        let z2 = FiniteGroupoid::from_group(&FiniteGroup::cyclic(2), "pt");
        assert!(regular_representation_faithful(&z2, 0).faithful);
    }
}
