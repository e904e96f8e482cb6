//! Hitting sets, canonical choices from families of transversals, and the
//! partition constructions built on them.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::core_sets::{union_all, FamilySpec, SetError, SubsetMask};

mod ps0;
mod trace;

pub use ps0::{
    enumerate_qualifying_partitions, ps0_instance_eval, PartitionOutcome, PartitionSearch, Ps0Instance,
    Ps0Report, Ps0Variant,
};
pub use trace::{trace_of, trace_recursion, TraceBlock, TracePartition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransversalError {
    #[error(transparent)]
    Set(#[from] SetError),
    #[error("the family has no members")]
    EmptyFamily,
    #[error("member {0} is empty")]
    EmptyMember(usize),
    #[error("no admissible hitting set within the caps")]
    NoAdmissible,
    #[error("family {0} has no transversal within the caps")]
    NoTransversal(usize),
    #[error("{c} misses the member {member}")]
    Misses { c: SubsetMask, member: SubsetMask },
    #[error("precondition failed: {0}")]
    Precondition(String),
}

/// A family `A` of non-empty sets with the exception cap `K` and an
/// optional bound on witness size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HittingInstance {
    ground_size: usize,
    members: Vec<SubsetMask>,
    k_cap: usize,
    size_cap: Option<usize>,
}

impl HittingInstance {
    /// Members are deduplicated and put in canonical order.
    pub fn new(
        ground_size: usize,
        members: Vec<SubsetMask>,
        k_cap: usize,
        size_cap: Option<usize>,
    ) -> Result<Self, TransversalError> {
        if members.is_empty() {
            return Err(TransversalError::EmptyFamily);
        }
        for (i, m) in members.iter().enumerate() {
            if m.ground_size() != ground_size {
                return Err(SetError::GroundMismatch(ground_size, m.ground_size()).into());
            }
            if m.is_empty() {
                return Err(TransversalError::EmptyMember(i));
            }
        }
        let mut members = members;
        members.sort();
        members.dedup();
        Ok(HittingInstance {
            ground_size,
            members,
            k_cap,
            size_cap,
        })
    }

    pub fn plain(ground_size: usize, members: Vec<SubsetMask>) -> Result<Self, TransversalError> {
        Self::new(ground_size, members, 0, None)
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn members(&self) -> &[SubsetMask] {
        &self.members
    }

    pub fn k_cap(&self) -> usize {
        self.k_cap
    }

    pub fn size_cap(&self) -> Option<usize> {
        self.size_cap
    }

    pub fn union(&self) -> SubsetMask {
        union_all(self.ground_size, &self.members)
    }

    pub fn misses(&self, x: &SubsetMask) -> usize {
        self.members.iter().filter(|a| !a.intersects(x)).count()
    }

    pub fn is_hit_by(&self, x: &SubsetMask) -> bool {
        self.members.iter().all(|a| a.intersects(x))
    }

    fn with_k_cap(&self, k_cap: usize) -> Self {
        HittingInstance {
            k_cap,
            ..self.clone()
        }
    }
}

/// `Φ(A, k, x)`: `x` misses at most `k` members of `A`.
pub fn phi(a: &HittingInstance, k: usize, x: &SubsetMask) -> bool {
    a.misses(x) <= k
}

/// Least witness size `n0`, least exception count `k0` at that size, every
/// witness `F` of that size and count, and their union `f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalHitting {
    pub n0: usize,
    pub k0: usize,
    #[serde(rename = "F")]
    pub family: Vec<SubsetMask>,
    pub f: SubsetMask,
}

pub fn canonical_min_hitting(a: &HittingInstance) -> Result<CanonicalHitting, TransversalError> {
    let universe = a.union();
    let top = a.size_cap.map_or(universe.cardinality(), |s| s.min(universe.cardinality()));
    for r in 0..=top {
        let mut best = usize::MAX;
        let mut witnesses = Vec::new();
        for x in universe.k_subsets(r) {
            let miss = a.misses(&x);
            if miss < best {
                best = miss;
                witnesses.clear();
            }
            if miss == best {
                witnesses.push(x);
            }
        }
        if best <= a.k_cap {
            return Ok(CanonicalHitting {
                n0: r,
                k0: best,
                f: union_all(a.ground_size, &witnesses),
                family: witnesses,
            });
        }
    }
    Err(TransversalError::NoAdmissible)
}

/// Per family: its union when it has at most `small_threshold` members,
/// otherwise the union of all its minimum transversals.
pub fn canonical_choice(
    families: &[HittingInstance],
    small_threshold: usize,
) -> Result<Vec<SubsetMask>, TransversalError> {
    families
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let choice = if a.members.len() <= small_threshold {
                a.union()
            } else {
                canonical_min_hitting(&a.with_k_cap(0))
                    .map_err(|_| TransversalError::NoTransversal(i))?
                    .f
            };
            if !a.is_hit_by(&choice) {
                return Err(TransversalError::NoTransversal(i));
            }
            Ok(choice)
        })
        .collect()
}

/// `C = {z ∈ Z : z meets every member of A}` in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransversalFamily {
    pub members: Vec<SubsetMask>,
}

impl TransversalFamily {
    pub fn first(&self) -> Option<SubsetMask> {
        self.members.first().copied()
    }
}

pub fn transversal_set(a: &HittingInstance, z: &FamilySpec) -> Result<TransversalFamily, TransversalError> {
    if z.ground_size() != a.ground_size {
        return Err(SetError::GroundMismatch(a.ground_size, z.ground_size()).into());
    }
    Ok(TransversalFamily {
        members: z.members()?.into_iter().filter(|x| a.is_hit_by(x)).collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyStatus {
    /// `C_n` is non-empty.
    pub has_transversal: bool,
    /// Canonical first member of `C_n`.
    pub choice: Option<SubsetMask>,
}

/// Outcome of searching `⋂ C_n` and of the union-of-choices step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CommonTransversalReport {
    pub families: Vec<FamilyStatus>,
    /// Every `C_n` is non-empty, so per-family choices exist.
    pub choices_exist: bool,
    /// `⋃ z_n` over the per-family choices.
    pub union_of_choices: Option<SubsetMask>,
    pub union_in_z: bool,
    pub z_union_closed: bool,
    /// Canonical first member of `⋂ C_n`.
    pub common: Option<SubsetMask>,
    /// Whenever the choices exist and their union is in `Z`, `common` is found.
    pub step_holds: bool,
}

pub fn common_transversal(
    families: &[HittingInstance],
    z: &FamilySpec,
) -> Result<CommonTransversalReport, TransversalError> {
    let mut statuses = Vec::with_capacity(families.len());
    for a in families {
        let c = transversal_set(a, z)?;
        statuses.push(FamilyStatus {
            has_transversal: !c.members.is_empty(),
            choice: c.first(),
        });
    }
    let choices_exist = statuses.iter().all(|s| s.has_transversal);
    let union_of_choices = choices_exist.then(|| {
        union_all(z.ground_size(), statuses.iter().filter_map(|s| s.choice.as_ref()))
    });
    let union_in_z = union_of_choices.is_some_and(|u| z.contains(&u));
    let common = z
        .members()?
        .into_iter()
        .find(|x| families.iter().all(|a| a.is_hit_by(x)));
    Ok(CommonTransversalReport {
        step_holds: !(choices_exist && union_in_z) || common.is_some(),
        families: statuses,
        choices_exist,
        union_of_choices,
        union_in_z,
        z_union_closed: z.flags().union_closed,
        common,
    })
}

/// How the choice for one family was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChoiceRoute {
    /// The union of all minimum transversals lies in `Z`.
    UnionOfMinimum,
    /// The first minimum transversal lies in `Z`.
    FirstMinimum,
    /// Canonical first member of `C_n`.
    FirstTransversal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChoiceEntry {
    pub has_transversal: bool,
    pub choice: Option<SubsetMask>,
    pub route: Option<ChoiceRoute>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChoiceConditionReport {
    pub holds: bool,
    pub entries: Vec<ChoiceEntry>,
}

/// Every `C_n` is non-empty and the canonical procedure picks a member of it.
pub fn p0_condition_check(
    z: &FamilySpec,
    families: &[HittingInstance],
) -> Result<ChoiceConditionReport, TransversalError> {
    let mut entries = Vec::with_capacity(families.len());
    for a in families {
        let c = transversal_set(a, z)?;
        let canonical = canonical_min_hitting(&a.with_k_cap(0)).ok();
        let candidates = [
            canonical.as_ref().map(|h| (h.f, ChoiceRoute::UnionOfMinimum)),
            canonical
                .as_ref()
                .and_then(|h| h.family.first())
                .map(|x| (*x, ChoiceRoute::FirstMinimum)),
            c.first().map(|x| (x, ChoiceRoute::FirstTransversal)),
        ];
        let picked = candidates
            .into_iter()
            .flatten()
            .find(|(x, _)| z.contains(x) && a.is_hit_by(x));
        entries.push(ChoiceEntry {
            has_transversal: !c.members.is_empty(),
            choice: picked.map(|p| p.0),
            route: picked.map(|p| p.1),
        });
    }
    Ok(ChoiceConditionReport {
        holds: entries.iter().all(|e| e.has_transversal && e.choice.is_some()),
        entries,
    })
}

/// A block `Z_F = {z ∈ A : z ∩ c = F}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberBlock {
    pub label: SubsetMask,
    pub members: Vec<SubsetMask>,
}

/// Partition of `A` by the trace on a transversal `c`, blocks ordered by label.
pub fn partition_from_transversal(
    a: &HittingInstance,
    c: &SubsetMask,
) -> Result<Vec<FiberBlock>, TransversalError> {
    if c.ground_size() != a.ground_size {
        return Err(SetError::GroundMismatch(a.ground_size, c.ground_size()).into());
    }
    let mut blocks: BTreeMap<SubsetMask, Vec<SubsetMask>> = BTreeMap::new();
    for z in &a.members {
        let f = z.intersection(c);
        if f.is_empty() {
            return Err(TransversalError::Misses { c: *c, member: *z });
        }
        blocks.entry(f).or_default().push(*z);
    }
    Ok(blocks
        .into_iter()
        .map(|(label, members)| FiberBlock { label, members })
        .collect())
}

/// `⋃ choices` and whether it lies in `Z`.
pub fn union_lift(choices: &[SubsetMask], z: &FamilySpec) -> (SubsetMask, bool) {
    let u = union_all(z.ground_size(), choices);
    (u, z.contains(&u))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(m: usize, e: &[usize]) -> SubsetMask {
        SubsetMask::of(m, e)
    }

    fn inst(m: usize, sets: &[&[usize]]) -> HittingInstance {
        HittingInstance::plain(m, sets.iter().map(|e| s(m, e)).collect()).unwrap()
    }

    #[test]
    fn phi_examples() {
        let a = inst(4, &[&[0, 1], &[1, 2], &[2, 3]]);
        assert!(phi(&a, 0, &a.union()));
        assert!(phi(&a, 1, &s(4, &[1])));
        assert!(!phi(&a, 0, &s(4, &[])));
    }

    #[test]
    fn canonical_path_example() {
        let a = inst(4, &[&[0, 1], &[1, 2], &[2, 3]]);
        let h = canonical_min_hitting(&a).unwrap();
        assert_eq!(h.n0, 2);
        assert_eq!(h.k0, 0);
        assert_eq!(h.family, vec![s(4, &[0, 2]), s(4, &[1, 2]), s(4, &[1, 3])]);
        assert_eq!(h.f, s(4, &[0, 1, 2, 3]));
    }

    #[test]
    fn canonical_single_and_pairs() {
        let h = canonical_min_hitting(&inst(6, &[&[5]])).unwrap();
        assert_eq!((h.n0, h.family.clone(), h.f), (1, vec![s(6, &[5])], s(6, &[5])));
        let h = canonical_min_hitting(&inst(4, &[&[0, 1], &[2, 3]])).unwrap();
        assert_eq!(h.family.len(), 4);
        assert_eq!(h.f, s(4, &[0, 1, 2, 3]));
    }

    #[test]
    fn k_cap_and_size_cap() {
        let a = HittingInstance::new(4, vec![s(4, &[0, 1]), s(4, &[2, 3])], 1, None).unwrap();
        let h = canonical_min_hitting(&a).unwrap();
        assert_eq!((h.n0, h.k0), (1, 1));
        let capped = HittingInstance::new(4, vec![s(4, &[0, 1]), s(4, &[2, 3])], 0, Some(1)).unwrap();
        assert_eq!(canonical_min_hitting(&capped).unwrap_err(), TransversalError::NoAdmissible);
    }

    #[test]
    fn construction_rejects_empty() {
        assert_eq!(HittingInstance::plain(3, vec![]).unwrap_err(), TransversalError::EmptyFamily);
        assert_eq!(
            HittingInstance::plain(3, vec![s(3, &[1]), s(3, &[])]).unwrap_err(),
            TransversalError::EmptyMember(1)
        );
    }

    #[test]
    fn transversal_set_example() {
        let z = FamilySpec::card_at_most(4, 2).unwrap();
        let c = transversal_set(&inst(4, &[&[0, 1], &[2, 3]]), &z).unwrap();
        assert_eq!(c.members, vec![s(4, &[0, 2]), s(4, &[0, 3]), s(4, &[1, 2]), s(4, &[1, 3])]);
        let c = transversal_set(&inst(2, &[&[0]]), &FamilySpec::card_at_most(2, 1).unwrap()).unwrap();
        assert_eq!(c.members, vec![s(2, &[0])]);
    }

    #[test]
    fn common_transversal_example() {
        let z = FamilySpec::card_at_most(4, 2).unwrap();
        let fams = [inst(4, &[&[0, 1], &[2, 3]]), inst(4, &[&[0, 2], &[1, 3]])];
        let r = common_transversal(&fams, &z).unwrap();
        assert_eq!(r.common, Some(s(4, &[0, 3])));
        assert_eq!(r.families[0].choice, Some(s(4, &[0, 2])));
        assert_eq!(r.families[1].choice, Some(s(4, &[0, 1])));
        assert!(r.step_holds);
    }

    #[test]
    fn partition_example() {
        let a = inst(3, &[&[0, 1], &[0, 2], &[1, 2]]);
        let blocks = partition_from_transversal(&a, &s(3, &[0, 1])).unwrap();
        let got: Vec<_> = blocks.iter().map(|b| (b.label, b.members.clone())).collect();
        assert_eq!(
            got,
            vec![
                (s(3, &[0]), vec![s(3, &[0, 2])]),
                (s(3, &[1]), vec![s(3, &[1, 2])]),
                (s(3, &[0, 1]), vec![s(3, &[0, 1])]),
            ]
        );
        let err = partition_from_transversal(&a, &s(3, &[2])).unwrap_err();
        assert_eq!(err, TransversalError::Misses { c: s(3, &[2]), member: s(3, &[0, 1]) });
    }

    #[test]
    fn union_lift_examples() {
        let z = FamilySpec::card_at_most(4, 2).unwrap();
        assert_eq!(union_lift(&[s(4, &[0]), s(4, &[1])], &z), (s(4, &[0, 1]), true));
        assert_eq!(union_lift(&[s(4, &[0, 1]), s(4, &[2, 3])], &z), (s(4, &[0, 1, 2, 3]), false));
        assert_eq!(union_lift(&[], &z), (s(4, &[]), true));
    }

    #[test]
    fn p0_examples() {
        let fams = [inst(4, &[&[0, 1], &[2, 3]]), inst(4, &[&[0, 2], &[1, 3]])];
        let r = p0_condition_check(&FamilySpec::card_at_most(4, 2).unwrap(), &fams).unwrap();
        assert!(r.holds);
        assert_eq!(r.entries[0].route, Some(ChoiceRoute::FirstMinimum));
        let r = p0_condition_check(&FamilySpec::card_at_most(4, 1).unwrap(), &fams).unwrap();
        assert!(!r.holds && !r.entries[0].has_transversal);
        let r = p0_condition_check(&FamilySpec::card_at_most(4, 4).unwrap(), &fams).unwrap();
        assert_eq!(r.entries[1].route, Some(ChoiceRoute::UnionOfMinimum));
    }
}
