//! Seeded random instances for sweeps and property tests.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::base_topology::SpaceSpec;
use crate::core_sets::{FamilySpec, SubsetMask};
use crate::transversals::HittingInstance;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Each element kept with probability `p`.
pub fn random_subset<R: Rng>(rng: &mut R, m: usize, p: f64) -> SubsetMask {
    let els: Vec<usize> = (0..m).filter(|_| rng.gen_bool(p)).collect();
    SubsetMask::of(m, &els)
}

pub fn random_nonempty_subset<R: Rng>(rng: &mut R, m: usize, p: f64) -> SubsetMask {
    loop {
        let x = random_subset(rng, m, p);
        if !x.is_empty() {
            return x;
        }
    }
}

/// Closure under binary unions.
pub fn union_closure(sets: impl IntoIterator<Item = SubsetMask>) -> Vec<SubsetMask> {
    let mut closed: BTreeSet<SubsetMask> = sets.into_iter().collect();
    loop {
        let list: Vec<SubsetMask> = closed.iter().copied().collect();
        let before = closed.len();
        for (i, x) in list.iter().enumerate() {
            for y in &list[i + 1..] {
                closed.insert(x.union(y));
            }
        }
        if closed.len() == before {
            return closed.into_iter().collect();
        }
    }
}

/// A random `Z` containing `∅` and every singleton; union-closed about
/// seven times in ten.
pub fn random_z<R: Rng>(rng: &mut R, m: usize) -> FamilySpec {
    match rng.gen_range(0..10) {
        0..=2 => FamilySpec::card_at_most(m, rng.gen_range(1..=m.max(1))).expect("bound within ground"),
        3 => FamilySpec::powerset(m),
        _ => {
            let mut sets: Vec<SubsetMask> = (0..m).map(|i| SubsetMask::singleton(m, i)).collect();
            sets.push(SubsetMask::empty(m));
            for _ in 0..rng.gen_range(0..=m) {
                sets.push(random_subset(rng, m, 0.5));
            }
            if rng.gen_bool(0.6) {
                sets = union_closure(sets);
            }
            FamilySpec::explicit(m, sets).expect("masks share the ground")
        }
    }
}

/// A random non-empty point family of one of several shapes.
pub fn random_a<R: Rng>(rng: &mut R, m: usize) -> FamilySpec {
    match rng.gen_range(0..8) {
        0 => FamilySpec::card_at_most(m, rng.gen_range(0..=m)).expect("bound within ground"),
        1 => FamilySpec::below_top(m, rng.gen_range(0..m.max(1))).expect("top within ground"),
        2 => FamilySpec::powerset(m),
        3 => FamilySpec::powerset_of(random_subset(rng, m, 0.6)),
        _ => {
            let count = rng.gen_range(1..=(1usize << m).min(12));
            let sets: Vec<SubsetMask> = (0..count).map(|_| random_subset(rng, m, 0.5)).collect();
            FamilySpec::explicit(m, sets).expect("masks share the ground")
        }
    }
}

pub fn random_space_spec<R: Rng>(rng: &mut R, m: usize) -> SpaceSpec {
    SpaceSpec::new(random_a(rng, m), random_z(rng, m)).expect("Z contains the empty set")
}

/// `count` random non-empty members over `0..m`.
pub fn random_hitting_instance<R: Rng>(rng: &mut R, m: usize, count: usize) -> HittingInstance {
    let members = (0..count.max(1)).map(|_| random_nonempty_subset(rng, m, 0.4)).collect();
    HittingInstance::plain(m, members).expect("members are non-empty")
}

/// Several hitting instances over one ground set, with a size bound `Z`.
pub fn random_thm39_instance<R: Rng>(rng: &mut R, m: usize) -> (Vec<HittingInstance>, FamilySpec) {
    let families = (0..rng.gen_range(1..=3))
        .map(|_| {
            let count = rng.gen_range(1..=4);
            random_hitting_instance(rng, m, count)
        })
        .collect();
    (families, random_z(rng, m))
}

/// A random partition of `0..m` into non-empty blocks.
pub fn random_partition<R: Rng>(rng: &mut R, m: usize) -> Vec<SubsetMask> {
    let k = rng.gen_range(1..=m.max(1));
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(rng);
    let mut blocks = vec![SubsetMask::empty(m); k];
    for (i, &a) in order.iter().enumerate() {
        let slot = if i < k { i } else { rng.gen_range(0..k) };
        blocks[slot] = blocks[slot].with(a);
    }
    blocks.sort();
    blocks
}

/// Partitions `members` into random blocks.
pub fn random_grouping<R: Rng>(rng: &mut R, members: &[SubsetMask]) -> Vec<Vec<SubsetMask>> {
    let k = rng.gen_range(1..=members.len().max(1));
    let mut order = members.to_vec();
    order.shuffle(rng);
    let mut blocks = vec![Vec::new(); k];
    for (i, x) in order.into_iter().enumerate() {
        let slot = if i < k { i } else { rng.gen_range(0..k) };
        blocks[slot].push(x);
    }
    blocks
}

/// `(A, U, seeds)` for the trace recursion.
pub fn random_trace_instance<R: Rng>(
    rng: &mut R,
    m: usize,
) -> (Vec<SubsetMask>, Vec<SubsetMask>, Vec<Vec<Vec<SubsetMask>>>) {
    let count = rng.gen_range(1..=12);
    let a: Vec<SubsetMask> = (0..count)
        .map(|_| random_nonempty_subset(rng, m, 0.4))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let u = random_partition(rng, m);
    let seeds = (0..rng.gen_range(1..=2)).map(|_| random_grouping(rng, &a)).collect();
    (a, u, seeds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_generation_repeats() {
        let a = random_space_spec(&mut rng(7), 4);
        let b = random_space_spec(&mut rng(7), 4);
        assert_eq!(a, b);
    }

    #[test]
    fn partitions_cover() {
        let mut r = rng(3);
        for _ in 0..50 {
            let p = random_partition(&mut r, 6);
            let mut seen = SubsetMask::empty(6);
            for b in &p {
                assert!(!b.is_empty() && !b.intersects(&seen));
                seen = seen.union(b);
            }
            assert!(seen.is_full());
        }
    }

    #[test]
    fn union_closure_closes() {
        let sets = union_closure([SubsetMask::of(3, &[0]), SubsetMask::of(3, &[1]), SubsetMask::of(3, &[2])]);
        assert_eq!(sets.len(), 7);
    }
}
