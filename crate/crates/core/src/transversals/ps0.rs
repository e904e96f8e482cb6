//! Finite-instance evaluators for the four transversal-choice principles.

use serde::{Deserialize, Serialize};

use super::{common_transversal, transversal_set, HittingInstance, TransversalError};
use crate::core_sets::{union_all, FamilySpec, SubsetMask};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ps0Variant {
    /// A single set meeting every member of every family.
    I,
    /// A choice from each family of transversals.
    II,
    /// Partitions with at most `partition_cap` blocks.
    C,
    /// Partitions with exactly `partition_cap` blocks.
    D,
}

/// Families over a ground set, the small-set bound `s` (`Z = [X]^{≤s}`),
/// the partition cap and an enumeration budget for the partition variants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ps0Instance {
    pub families: Vec<HittingInstance>,
    pub s: usize,
    pub partition_cap: usize,
    pub budget: u64,
}

/// Result of the partition search for one family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionSearch {
    /// `|A_n| > s`, the finite stand-in for "uncountable".
    pub applicable: bool,
    pub outcome: PartitionOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum PartitionOutcome {
    /// Full enumeration: `count` qualifying partitions, the first of them chosen.
    Chosen {
        count: u64,
        partition: Vec<Vec<SubsetMask>>,
    },
    /// Full enumeration found nothing.
    Empty { considered: u64 },
    /// The budget ran out; `first` is the earliest qualifying partition seen.
    BudgetExhausted {
        considered: u64,
        first: Option<Vec<Vec<SubsetMask>>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Ps0Report {
    pub variant: Ps0Variant,
    /// How the variant was read at finite scale.
    pub reading: String,
    /// The premises hold (each `C_n`, resp. `B_n`, is non-empty).
    pub premises_hold: bool,
    /// The conclusion was established.
    pub conclusion_holds: bool,
    /// `(I)`: the common transversal; `(II)`: the per-family choices.
    pub choices: Vec<SubsetMask>,
    pub partitions: Vec<PartitionSearch>,
}

pub fn ps0_instance_eval(variant: Ps0Variant, inst: &Ps0Instance) -> Result<Ps0Report, TransversalError> {
    let m = inst
        .families
        .first()
        .map(|a| a.ground_size())
        .ok_or(TransversalError::EmptyFamily)?;
    let z = FamilySpec::card_at_most(m, inst.s.min(m))?;
    match variant {
        Ps0Variant::I => {
            let r = common_transversal(&inst.families, &z)?;
            Ok(Ps0Report {
                variant,
                reading: format!("C_n = transversals of size at most {}; look for one set in every C_n", inst.s),
                premises_hold: r.choices_exist,
                conclusion_holds: r.common.is_some(),
                choices: r.common.into_iter().collect(),
                partitions: Vec::new(),
            })
        }
        Ps0Variant::II => {
            let mut choices = Vec::new();
            let mut premises = true;
            for a in &inst.families {
                match transversal_set(a, &z)?.first() {
                    Some(c) => choices.push(c),
                    None => premises = false,
                }
            }
            Ok(Ps0Report {
                variant,
                reading: format!("C_n = transversals of size at most {}; choose the canonical first of each", inst.s),
                premises_hold: premises,
                conclusion_holds: premises,
                choices: if premises { choices } else { Vec::new() },
                partitions: Vec::new(),
            })
        }
        Ps0Variant::C | Ps0Variant::D => {
            let exact = variant == Ps0Variant::D;
            let mut partitions = Vec::new();
            for a in &inst.families {
                partitions.push(PartitionSearch {
                    applicable: a.members().len() > inst.s,
                    outcome: enumerate_qualifying_partitions(a.members(), inst.partition_cap, exact, inst.budget),
                });
            }
            let applicable: Vec<&PartitionSearch> = partitions.iter().filter(|p| p.applicable).collect();
            let premises_hold = applicable
                .iter()
                .all(|p| !matches!(p.outcome, PartitionOutcome::Empty { .. }));
            let conclusion_holds = applicable
                .iter()
                .all(|p| matches!(p.outcome, PartitionOutcome::Chosen { .. }));
            let shape = if exact { "exactly" } else { "at most" };
            Ok(Ps0Report {
                variant,
                reading: format!(
                    "families with more than {} members; partitions into {shape} {} blocks, each met by a finite subset of its union",
                    inst.s, inst.partition_cap
                ),
                premises_hold,
                conclusion_holds,
                choices: Vec::new(),
                partitions,
            })
        }
    }
}

/// Every block is met, member by member, by a finite subset of its own union.
fn block_qualifies(block: &[SubsetMask]) -> bool {
    let Some(first) = block.first() else { return false };
    let u = union_all(first.ground_size(), block);
    block.iter().all(|z| z.intersects(&u))
}

/// Partitions of `members` (in the given order) into at most `cap` blocks,
/// or exactly `cap` when `exact`, ordered by block count and then by
/// restricted growth string.
pub fn enumerate_qualifying_partitions(
    members: &[SubsetMask],
    cap: usize,
    exact: bool,
    budget: u64,
) -> PartitionOutcome {
    let n = members.len();
    let lo = if exact { cap } else { 1 };
    let hi = cap.min(n);
    let mut considered = 0u64;
    let mut count = 0u64;
    let mut first: Option<Vec<Vec<SubsetMask>>> = None;
    let mut rgs = vec![0usize; n];
    for k in lo.max(1)..=hi {
        let done = walk(&mut rgs, 0, 0, k, &mut |labels| {
            if considered >= budget {
                return false;
            }
            considered += 1;
            let blocks = blocks_of(members, labels, k);
            if blocks.iter().all(|b| block_qualifies(b)) {
                count += 1;
                if first.is_none() {
                    first = Some(blocks);
                }
            }
            true
        });
        if !done {
            return PartitionOutcome::BudgetExhausted { considered, first };
        }
    }
    match first {
        Some(partition) => PartitionOutcome::Chosen { count, partition },
        None => PartitionOutcome::Empty { considered },
    }
}

fn blocks_of(members: &[SubsetMask], labels: &[usize], k: usize) -> Vec<Vec<SubsetMask>> {
    let mut blocks = vec![Vec::new(); k];
    for (x, &l) in members.iter().zip(labels) {
        blocks[l].push(*x);
    }
    blocks
}

/// Restricted growth strings of length `rgs.len()` using exactly `k` labels,
/// in lexicographic order. Returns `false` when `visit` asks to stop.
fn walk(rgs: &mut [usize], pos: usize, used: usize, k: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    let n = rgs.len();
    if pos == n {
        return used != k || visit(rgs);
    }
    if k - used > n - pos {
        return true;
    }
    for label in 0..=used.min(k - 1) {
        rgs[pos] = label;
        let next = if label == used { used + 1 } else { used };
        if !walk(rgs, pos + 1, next, k, visit) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(m: usize, e: &[usize]) -> SubsetMask {
        SubsetMask::of(m, e)
    }

    fn bell(n: usize) -> u64 {
        let mut row = vec![1u64];
        for _ in 0..n {
            let mut next = vec![*row.last().unwrap()];
            for v in &row {
                next.push(next.last().unwrap() + v);
            }
            row = next;
        }
        row[0]
    }

    #[test]
    fn partition_counts_are_bell_numbers() {
        for n in 1..=6 {
            let members: Vec<_> = (0..n).map(|i| s(8, &[i])).collect();
            match enumerate_qualifying_partitions(&members, n, false, u64::MAX) {
                PartitionOutcome::Chosen { count, partition } => {
                    assert_eq!(count, bell(n));
                    assert_eq!(partition.len(), 1);
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn budget_exhaustion_is_distinct() {
        let members: Vec<_> = (0..5).map(|i| s(8, &[i])).collect();
        let r = enumerate_qualifying_partitions(&members, 5, false, 3);
        assert!(matches!(r, PartitionOutcome::BudgetExhausted { considered: 3, first: Some(_) }));
        let r = enumerate_qualifying_partitions(&members[..2], 3, true, 100);
        assert_eq!(r, PartitionOutcome::Empty { considered: 0 });
    }

    #[test]
    fn variant_two_on_pair_instance() {
        let inst = Ps0Instance {
            families: vec![
                HittingInstance::plain(4, vec![s(4, &[0, 1]), s(4, &[2, 3])]).unwrap(),
                HittingInstance::plain(4, vec![s(4, &[0, 2]), s(4, &[1, 3])]).unwrap(),
            ],
            s: 2,
            partition_cap: 2,
            budget: 1000,
        };
        let r = ps0_instance_eval(Ps0Variant::II, &inst).unwrap();
        assert_eq!(r.choices, vec![s(4, &[0, 2]), s(4, &[0, 1])]);
        let r = ps0_instance_eval(Ps0Variant::I, &inst).unwrap();
        assert_eq!(r.choices, vec![s(4, &[0, 3])]);
    }

    #[test]
    fn variant_one_single_family_is_nonemptiness() {
        let inst = Ps0Instance {
            families: vec![HittingInstance::plain(4, vec![s(4, &[0]), s(4, &[1]), s(4, &[2])]).unwrap()],
            s: 2,
            partition_cap: 1,
            budget: 10,
        };
        let r = ps0_instance_eval(Ps0Variant::I, &inst).unwrap();
        assert!(!r.premises_hold && !r.conclusion_holds);
    }
}
