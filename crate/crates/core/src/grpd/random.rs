//! Random groups, actions and groupoids for fuzzing.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{pullback, transformation_groupoid, FiniteGroup, FiniteGroupAction, FiniteGroupoid};

pub fn random_group<R: Rng>(rng: &mut R) -> FiniteGroup {
    let mut all = FiniteGroup::small_groups();
    let k = rng.gen_range(0..all.len());
    all.swap_remove(k).1
}

/// A disjoint union of coset spaces `G/H` on at most `max_set` points,
/// with the points shuffled.
pub fn random_action<R: Rng>(rng: &mut R, max_set: usize) -> FiniteGroupAction {
    let group = random_group(rng);
    let subgroups = group.subgroups();
    let target = rng.gen_range(1..=max_set.max(1));
    let mut parts = Vec::new();
    let mut size = 0;
    while size < target {
        let room = target - size;
        let fits: Vec<&Vec<usize>> = subgroups
            .iter()
            .filter(|h| group.order() / h.len() <= room)
            .collect();
        let h = fits.choose(rng).expect("the whole group always fits");
        let part = FiniteGroupAction::cosets(&group, h);
        size += part.set.len();
        parts.push(part);
    }
    let a = FiniteGroupAction::disjoint_union(&parts);
    let mut perm: Vec<usize> = (0..a.set.len()).collect();
    perm.shuffle(rng);
    a.permute_set(&perm)
}

pub fn random_transformation_groupoid<R: Rng>(rng: &mut R, max_set: usize) -> FiniteGroupoid {
    transformation_groupoid(&random_action(rng, max_set))
}

/// A disjoint union of transitive groupoids (each a group pulled back to a
/// few objects, the group trivial a third of the time), with objects and
/// morphisms shuffled. Every finite groupoid has this form up to
/// isomorphism.
pub fn random_groupoid<R: Rng>(rng: &mut R) -> FiniteGroupoid {
    let parts: Vec<FiniteGroupoid> = (0..rng.gen_range(1..=3))
        .map(|_| {
            let group = if rng.gen_bool(1.0 / 3.0) {
                FiniteGroup::cyclic(1)
            } else {
                random_group(rng)
            };
            let g = FiniteGroupoid::from_group(&group, "pt");
            let n = rng.gen_range(1..=3);
            let labels: Vec<String> = (0..n).map(|k| format!("x{k}")).collect();
            pullback(&g, &labels, &vec![0; n]).expect("small pullback").groupoid
        })
        .collect();
    let u = FiniteGroupoid::disjoint_union(&parts).expect("small union");
    let mut obj: Vec<usize> = (0..u.object_count()).collect();
    let mut mor: Vec<usize> = (0..u.morphism_count()).collect();
    obj.shuffle(rng);
    mor.shuffle(rng);
    u.permuted(&obj, &mor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grpd::morphism_count_identity;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_objects_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = random_action(&mut rng, 6);
            assert!(a.set.len() <= 6);
            assert!(morphism_count_identity(&transformation_groupoid(&a)));
            assert!(morphism_count_identity(&random_groupoid(&mut rng)));
        }
    }
}
