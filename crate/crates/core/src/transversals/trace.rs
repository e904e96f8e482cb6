//! Traces of finitely-transversal blocks on a partition of the ground set,
//! and the stage-by-stage regrouping they drive.

use std::collections::BTreeSet;

use serde::Serialize;

use super::TransversalError;
use crate::core_sets::{union_all, SubsetMask};

/// One regrouped block: its members, the index set whose blocks of `U` meet
/// every member, and the finite region doing the meeting.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceBlock {
    pub members: Vec<SubsetMask>,
    /// Indices into `U`.
    pub index_set: Vec<usize>,
    pub region: SubsetMask,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TracePartition {
    pub blocks: Vec<TraceBlock>,
    pub termination_stage: usize,
    /// Each distinct seed block with its trace, in canonical block order.
    pub traces: Vec<(Vec<SubsetMask>, Vec<usize>)>,
}

/// Union of all minimum-size index sets `I` such that the blocks `U_α`,
/// `α ∈ I`, jointly meet every member of `block` and each of them meets some member.
pub fn trace_of(block: &[SubsetMask], u: &[SubsetMask]) -> SubsetMask {
    let k = u.len();
    let all = SubsetMask::full(k);
    for r in 0..=k {
        let mut trace = SubsetMask::empty(k);
        let mut found = false;
        for idx in all.k_subsets(r) {
            let region = union_all(u[0].ground_size(), idx.elements().map(|a| &u[a]));
            let meets_all = block.iter().all(|z| z.intersects(&region));
            let each_used = idx.elements().all(|a| block.iter().any(|z| z.intersects(&u[a])));
            if meets_all && each_used {
                trace = trace.union(&idx);
                found = true;
            }
        }
        if found {
            return trace;
        }
    }
    all
}

fn check_partition_of(
    a: &BTreeSet<SubsetMask>,
    blocks: &[Vec<SubsetMask>],
    what: &str,
) -> Result<(), TransversalError> {
    let mut seen = BTreeSet::new();
    for (i, b) in blocks.iter().enumerate() {
        if b.is_empty() {
            return Err(TransversalError::Precondition(format!("{what}: block {i} is empty")));
        }
        for x in b {
            if !a.contains(x) {
                return Err(TransversalError::Precondition(format!("{what}: {x} in block {i} is not in A")));
            }
            if !seen.insert(*x) {
                return Err(TransversalError::Precondition(format!("{what}: {x} appears twice")));
            }
        }
    }
    if seen.len() != a.len() {
        let missing = a.difference(&seen).next().expect("missing member");
        return Err(TransversalError::Precondition(format!("{what}: {missing} is not covered")));
    }
    Ok(())
}

pub fn trace_recursion(
    a: &[SubsetMask],
    u: &[SubsetMask],
    seed: &[Vec<Vec<SubsetMask>>],
) -> Result<TracePartition, TransversalError> {
    let first = a.first().ok_or(TransversalError::EmptyFamily)?;
    let m = first.ground_size();
    if let Some(z) = a.iter().find(|z| z.is_empty()) {
        return Err(TransversalError::Precondition(format!("A contains the empty set {z}")));
    }
    if u.is_empty() || u.len() > crate::core_sets::MAX_GROUND {
        return Err(TransversalError::Precondition(format!("U has {} blocks", u.len())));
    }
    let mut covered = SubsetMask::empty(m);
    for (i, b) in u.iter().enumerate() {
        if b.is_empty() || b.intersects(&covered) {
            return Err(TransversalError::Precondition(format!("U block {i} is empty or overlaps")));
        }
        covered = covered.union(b);
    }
    if !covered.is_full() {
        return Err(TransversalError::Precondition("U does not cover the ground set".into()));
    }
    let a_set: BTreeSet<SubsetMask> = a.iter().copied().collect();
    if seed.is_empty() {
        return Err(TransversalError::Precondition("no seed partition".into()));
    }
    let mut blocks: BTreeSet<Vec<SubsetMask>> = BTreeSet::new();
    for (i, p) in seed.iter().enumerate() {
        let sorted: Vec<Vec<SubsetMask>> = p
            .iter()
            .map(|b| {
                let mut b = b.clone();
                b.sort();
                b
            })
            .collect();
        check_partition_of(&a_set, &sorted, &format!("seed {i}"))?;
        for b in sorted {
            let reach = union_all(m, &b);
            if let Some(z) = b.iter().find(|z| !z.intersects(&reach)) {
                return Err(TransversalError::Precondition(format!("{z} has no finite transversal in its block")));
            }
            blocks.insert(b);
        }
    }
    let blocks: Vec<Vec<SubsetMask>> = blocks.into_iter().collect();
    let traces: Vec<SubsetMask> = blocks.iter().map(|b| trace_of(b, u)).collect();

    let mut alive: Vec<usize> = (0..blocks.len()).collect();
    let mut done: BTreeSet<SubsetMask> = BTreeSet::new();
    let mut out = Vec::new();
    while !alive.is_empty() {
        if out.len() >= blocks.len() {
            return Err(TransversalError::Precondition("stage bound exceeded".into()));
        }
        let least = alive.iter().map(|&i| traces[i]).min().expect("alive");
        let mut members: BTreeSet<SubsetMask> = BTreeSet::new();
        for &i in &alive {
            if traces[i] == least {
                members.extend(blocks[i].iter().filter(|x| !done.contains(x)));
            }
        }
        let members: Vec<SubsetMask> = members.into_iter().collect();
        let reach = union_all(m, least.elements().map(|i| &u[i]));
        let region = union_all(m, &members).intersection(&reach);
        done.extend(members.iter().copied());
        out.push(TraceBlock {
            members,
            index_set: least.to_vec(),
            region,
        });
        alive.retain(|&i| !blocks[i].iter().all(|x| done.contains(x)));
    }

    let result: Vec<Vec<SubsetMask>> = out.iter().map(|b| b.members.clone()).collect();
    check_partition_of(&a_set, &result, "result")?;
    for b in &out {
        if let Some(z) = b.members.iter().find(|z| !z.intersects(&b.region)) {
            return Err(TransversalError::Precondition(format!("region {} misses {z}", b.region)));
        }
    }
    Ok(TracePartition {
        termination_stage: out.len(),
        blocks: out,
        traces: blocks.into_iter().zip(traces.iter().map(|t| t.to_vec())).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(m: usize, e: &[usize]) -> SubsetMask {
        SubsetMask::of(m, e)
    }

    #[test]
    fn four_member_example() {
        let a = vec![s(4, &[0, 2]), s(4, &[0, 3]), s(4, &[1, 2]), s(4, &[1, 3])];
        let u = vec![s(4, &[0, 1]), s(4, &[2, 3])];
        let seed = vec![vec![vec![s(4, &[0, 2]), s(4, &[0, 3])], vec![s(4, &[1, 2]), s(4, &[1, 3])]]];
        let t = trace_recursion(&a, &u, &seed).unwrap();
        assert!(t.traces.iter().all(|(_, tr)| tr == &vec![0, 1]));
        assert_eq!(t.termination_stage, 1);
        assert_eq!(t.blocks.len(), 1);
        assert_eq!(t.blocks[0].members, a);
        assert_eq!(t.blocks[0].region, s(4, &[0, 1, 2, 3]));
    }

    #[test]
    fn single_member() {
        let a = vec![s(2, &[1])];
        let t = trace_recursion(&a, &[s(2, &[0, 1])], &[vec![a.clone()]]).unwrap();
        assert_eq!(t.blocks.len(), 1);
        assert_eq!(t.termination_stage, 1);
    }

    #[test]
    fn seed_must_partition() {
        let a = vec![s(2, &[0]), s(2, &[1])];
        let err = trace_recursion(&a, &[s(2, &[0, 1])], &[vec![vec![s(2, &[0])]]]).unwrap_err();
        assert!(err.to_string().contains("not covered"));
    }
}
