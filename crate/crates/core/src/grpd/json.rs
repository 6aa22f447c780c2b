use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{
    transformation_groupoid, validate_groupoid, Filtration, FiniteGroup, FiniteGroupAction, FiniteGroupoid,
    GrpdError, RawGroupoid,
};

/// Ids may be written as JSON strings or numbers.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Id {
    Str(String),
    Int(i64),
}

impl Id {
    fn key(&self) -> String {
        match self {
            Id::Str(s) => s.clone(),
            Id::Int(n) => n.to_string(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismJson {
    pub id: Id,
    pub d: Id,
    pub r: Id,
}

/// Wire form of a groupoid.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidJson {
    pub objects: Vec<Id>,
    pub morphisms: Vec<MorphismJson>,
    pub compose: Vec<(Id, Id, Id)>,
    pub inverse: BTreeMap<String, Id>,
    pub identity: BTreeMap<String, Id>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupJson {
    elements: Vec<Id>,
    mul: Vec<Vec<Id>>,
    id: Id,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionJson {
    group: GroupJson,
    set: Vec<Id>,
    act: Vec<(Id, Id, Id)>,
}

fn lookup(table: &HashMap<String, usize>, id: &str, what: &str) -> Result<usize, GrpdError> {
    table
        .get(id)
        .copied()
        .ok_or_else(|| GrpdError::Input(format!("unknown {what} id {id:?}")))
}

fn index(ids: &[String]) -> HashMap<String, usize> {
    ids.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect()
}

pub fn groupoid_from_json(text: &str) -> Result<FiniteGroupoid, GrpdError> {
    let raw: GroupoidJson = serde_json::from_str(text).map_err(|e| GrpdError::Input(e.to_string()))?;
    let objects: Vec<String> = raw.objects.iter().map(Id::key).collect();
    let morphisms: Vec<String> = raw.morphisms.iter().map(|m| m.id.key()).collect();
    let (oi, mi) = (index(&objects), index(&morphisms));
    let obj = |id: &Id| lookup(&oi, &id.key(), "object");
    let mor = |id: &str| lookup(&mi, id, "morphism");
    let d = raw.morphisms.iter().map(|m| obj(&m.d)).collect::<Result<_, _>>()?;
    let r = raw.morphisms.iter().map(|m| obj(&m.r)).collect::<Result<_, _>>()?;
    let compose = raw
        .compose
        .iter()
        .map(|(g, h, gh)| Ok((mor(&g.key())?, mor(&h.key())?, mor(&gh.key())?)))
        .collect::<Result<_, GrpdError>>()?;
    let mut inverse = vec![usize::MAX; morphisms.len()];
    for (g, gi) in &raw.inverse {
        inverse[mor(g)?] = mor(&gi.key())?;
    }
    if let Some(g) = inverse.iter().position(|&x| x == usize::MAX) {
        return Err(GrpdError::Input(format!("no inverse listed for {}", morphisms[g])));
    }
    let mut identity = vec![usize::MAX; objects.len()];
    for (x, e) in &raw.identity {
        identity[lookup(&oi, x, "object")?] = mor(&e.key())?;
    }
    if let Some(x) = identity.iter().position(|&e| e == usize::MAX) {
        return Err(GrpdError::Input(format!("no identity listed for {}", objects[x])));
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

pub fn groupoid_to_json(g: &FiniteGroupoid) -> GroupoidJson {
    let raw = g.to_raw();
    let m = |k: usize| Id::Str(raw.morphisms[k].clone());
    GroupoidJson {
        objects: raw.objects.iter().cloned().map(Id::Str).collect(),
        morphisms: (0..raw.morphisms.len())
            .map(|k| MorphismJson {
                id: m(k),
                d: Id::Str(raw.objects[raw.d[k]].clone()),
                r: Id::Str(raw.objects[raw.r[k]].clone()),
            })
            .collect(),
        compose: raw.compose.iter().map(|&(a, b, c)| (m(a), m(b), m(c))).collect(),
        inverse: (0..raw.morphisms.len())
            .map(|k| (raw.morphisms[k].clone(), m(raw.inverse[k])))
            .collect(),
        identity: (0..raw.objects.len())
            .map(|x| (raw.objects[x].clone(), m(raw.identity[x])))
            .collect(),
    }
}

/// Accepts `mul` either as triples `[a, b, ab]` or as a square table.
pub fn action_from_json(text: &str) -> Result<FiniteGroupAction, GrpdError> {
    let raw: ActionJson = serde_json::from_str(text).map_err(|e| GrpdError::Input(e.to_string()))?;
    let elements: Vec<String> = raw.group.elements.iter().map(Id::key).collect();
    let n = elements.len();
    let gi = index(&elements);
    let el = |id: &Id| lookup(&gi, &id.key(), "group element");
    if gi.len() != n {
        return Err(GrpdError::Input("duplicate group element".into()));
    }
    let mut mul = vec![vec![usize::MAX; n]; n];
    let rows = &raw.group.mul;
    if rows.len() == n * n && rows.iter().all(|r| r.len() == 3) {
        for t in rows {
            mul[el(&t[0])?][el(&t[1])?] = el(&t[2])?;
        }
    } else if rows.len() == n && rows.iter().all(|r| r.len() == n) {
        for (a, row) in rows.iter().enumerate() {
            for (b, c) in row.iter().enumerate() {
                mul[a][b] = el(c)?;
            }
        }
    } else {
        return Err(GrpdError::Input("mul must be n² triples or an n×n table".into()));
    }
    if mul.iter().flatten().any(|&x| x == usize::MAX) {
        return Err(GrpdError::Input("multiplication table is incomplete".into()));
    }
    let group = FiniteGroup::new(elements, mul, el(&raw.group.id)?)?;
    let set: Vec<String> = raw.set.iter().map(Id::key).collect();
    let si = index(&set);
    if si.len() != set.len() {
        return Err(GrpdError::Input("duplicate set element".into()));
    }
    let mut act = vec![vec![usize::MAX; set.len()]; n];
    for (g, x, gx) in &raw.act {
        let (g, x) = (el(g)?, lookup(&si, &x.key(), "set element")?);
        act[g][x] = lookup(&si, &gx.key(), "set element")?;
    }
    if act.iter().flatten().any(|&x| x == usize::MAX) {
        return Err(GrpdError::Input("action table is incomplete".into()));
    }
    FiniteGroupAction::new(group, set, act)
}

/// A groupoid read from either schema.
#[derive(Debug, Clone)]
pub struct LoadedGroupoid {
    pub groupoid: FiniteGroupoid,
    pub action: Option<FiniteGroupAction>,
}

/// Reads a groupoid file, or an action file (recognised by its `group`
/// key), which yields the transformation groupoid.
pub fn load_groupoid(text: &str) -> Result<LoadedGroupoid, GrpdError> {
    let v: Value = serde_json::from_str(text).map_err(|e| GrpdError::Input(e.to_string()))?;
    if v.get("group").is_some() {
        let a = action_from_json(text)?;
        Ok(LoadedGroupoid {
            groupoid: transformation_groupoid(&a),
            action: Some(a),
        })
    } else {
        Ok(LoadedGroupoid {
            groupoid: groupoid_from_json(text)?,
            action: None,
        })
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ThetaJson {
    theta: Vec<(Id, Id)>,
}

/// `{"theta": [[label, object], …]}`, labels in the listed order.
pub fn theta_from_json(text: &str, g: &FiniteGroupoid) -> Result<(Vec<String>, Vec<usize>), GrpdError> {
    let raw: ThetaJson = serde_json::from_str(text).map_err(|e| GrpdError::Input(e.to_string()))?;
    let mut labels = Vec::new();
    let mut theta = Vec::new();
    for (n, x) in raw.theta {
        let n = n.key();
        if labels.contains(&n) {
            return Err(GrpdError::Input(format!("label {n:?} listed twice")));
        }
        let x = g
            .object_index(&x.key())
            .ok_or_else(|| GrpdError::Input(format!("unknown object id {:?}", x.key())))?;
        labels.push(n);
        theta.push(x);
    }
    Ok((labels, theta))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FiltrationJson {
    filtration: Vec<Vec<Id>>,
}

/// `{"filtration": [[ids of U₁], [ids of U₂], …]}`.
pub fn filtration_from_json(text: &str, g: &FiniteGroupoid) -> Result<Filtration, GrpdError> {
    let raw: FiltrationJson = serde_json::from_str(text).map_err(|e| GrpdError::Input(e.to_string()))?;
    let sets = raw
        .filtration
        .iter()
        .map(|u| {
            u.iter()
                .map(|x| {
                    g.object_index(&x.key())
                        .ok_or_else(|| GrpdError::BadFiltration(format!("unknown object id {:?}", x.key())))
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Filtration::new(g, sets)
}
