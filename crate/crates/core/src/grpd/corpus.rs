//! Named groupoids and actions used in tests and the bundled examples.

use super::{transformation_groupoid, FiniteGroup, FiniteGroupAction, FiniteGroupoid};

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// `ℤ/2 = {id, swap}` acting on `{−1, 0, 1}` by negation.
pub fn negation_action() -> FiniteGroupAction {
    let z2 = FiniteGroup::new(strings(&["id", "swap"]), vec![vec![0, 1], vec![1, 0]], 0).expect("Z/2");
    FiniteGroupAction::new(z2, strings(&["-1", "0", "1"]), vec![vec![0, 1, 2], vec![2, 1, 0]])
        .expect("negation action")
}

pub fn negation_groupoid() -> FiniteGroupoid {
    transformation_groupoid(&negation_action())
}

/// `ℤ/4` acting on `{0, 1}` through its parity.
pub fn z4_parity_action() -> FiniteGroupAction {
    let act = (0..4).map(|g| (0..2).map(|x| (g + x) % 2).collect()).collect();
    FiniteGroupAction::new(FiniteGroup::cyclic(4), strings(&["0", "1"]), act).expect("parity action")
}

pub fn z4_parity() -> FiniteGroupoid {
    transformation_groupoid(&z4_parity_action())
}

/// `S₃` permuting `{1, 2, 3}`.
pub fn s3_natural_action() -> FiniteGroupAction {
    let s3 = FiniteGroup::symmetric3();
    let act = s3
        .elements
        .iter()
        .map(|name| name.bytes().map(|b| usize::from(b - b'1')).collect())
        .collect();
    FiniteGroupAction::new(s3, strings(&["1", "2", "3"]), act).expect("natural action")
}

pub fn s3_natural() -> FiniteGroupoid {
    transformation_groupoid(&s3_natural_action())
}

/// The bundled groupoids with their names.
pub fn groupoid_corpus() -> Vec<(&'static str, FiniteGroupoid)> {
    vec![
        ("negation_groupoid", negation_groupoid()),
        ("z4_parity", z4_parity()),
        ("s3_natural", s3_natural()),
        ("pair3", FiniteGroupoid::pair(&["a", "b", "c"])),
        ("z2_point", FiniteGroupoid::from_group(&FiniteGroup::cyclic(2), "pt")),
    ]
}
