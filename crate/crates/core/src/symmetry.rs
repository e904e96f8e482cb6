//! Block-preserving permutation groups on a finite set of atoms, supports,
//! and the decision of whether a family of transversals has a supported
//! member.
//!
//! The group is never listed. A set `z` is fixed by every permutation that
//! preserves each block and fixes `E` pointwise exactly when, in each block
//! `B`, `z` contains none or all of `B∖E`.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::core_sets::{binomial, union_all, SetError, SubsetMask, MAX_ENUMERATION, MAX_GROUND};

/// Largest support scan attempted.
pub const MAX_SCAN: u128 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymmetryError {
    #[error(transparent)]
    Set(#[from] SetError),
    #[error("invalid block system: {0}")]
    Blocks(String),
    #[error("support {e} puts {count} atoms in block {block}, above the cap {cap}")]
    Cap {
        e: SubsetMask,
        block: BlockLabel,
        count: usize,
        cap: usize,
    },
    #[error("family {index} is not closed under the block group: {member} maps to {image}")]
    NotInvariant {
        index: usize,
        member: SubsetMask,
        image: SubsetMask,
    },
    #[error("{0} items, too many to enumerate")]
    TooLarge(u128),
    #[error("support scan needs {required} candidates, above the limit {MAX_SCAN}")]
    ScanRefused { required: u128 },
    #[error("invalid model parameters: {0}")]
    Parameters(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(untagged)]
pub enum BlockLabel {
    Pair(usize, usize),
    Single(usize),
}

impl std::fmt::Display for BlockLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BlockLabel::Pair(n, j) => write!(f, "({n},{j})"),
            BlockLabel::Single(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub label: BlockLabel,
    pub atoms: SubsetMask,
}

/// Atoms `0..u` partitioned into labelled blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockSystem {
    atom_count: usize,
    blocks: Vec<Block>,
}

impl BlockSystem {
    pub fn new(atom_count: usize, blocks: Vec<Block>) -> Result<Self, SymmetryError> {
        if atom_count > MAX_GROUND {
            return Err(SetError::GroundTooLarge(atom_count).into());
        }
        let mut seen = SubsetMask::empty(atom_count);
        let mut labels = BTreeSet::new();
        for b in &blocks {
            if b.atoms.ground_size() != atom_count {
                return Err(SetError::GroundMismatch(atom_count, b.atoms.ground_size()).into());
            }
            if b.atoms.is_empty() {
                return Err(SymmetryError::Blocks(format!("block {} is empty", b.label)));
            }
            if b.atoms.intersects(&seen) {
                return Err(SymmetryError::Blocks(format!("block {} overlaps an earlier block", b.label)));
            }
            if !labels.insert(b.label) {
                return Err(SymmetryError::Blocks(format!("label {} repeats", b.label)));
            }
            seen = seen.union(&b.atoms);
        }
        if !seen.is_full() {
            return Err(SymmetryError::Blocks(format!(
                "atoms {} belong to no block",
                seen.complement()
            )));
        }
        Ok(BlockSystem { atom_count, blocks })
    }

    /// Unlabelled blocks from atom lists, labelled by position.
    pub fn from_sizes(sizes: &[usize]) -> Result<Self, SymmetryError> {
        let u: usize = sizes.iter().sum();
        if u > MAX_GROUND {
            return Err(SetError::GroundTooLarge(u).into());
        }
        let mut next = 0;
        let blocks = sizes
            .iter()
            .enumerate()
            .map(|(i, &k)| {
                let atoms: Vec<usize> = (next..next + k).collect();
                next += k;
                Ok(Block {
                    label: BlockLabel::Single(i),
                    atoms: SubsetMask::from_elements(u, &atoms)?,
                })
            })
            .collect::<Result<Vec<_>, SetError>>()?;
        BlockSystem::new(u, blocks)
    }

    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn atoms(&self) -> SubsetMask {
        SubsetMask::full(self.atom_count)
    }
}

/// A support `E` with an optional cap on `|E ∩ B|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Support {
    pub e: SubsetMask,
    pub per_block_cap: Option<usize>,
}

impl Support {
    pub fn new(blocks: &BlockSystem, e: SubsetMask, per_block_cap: Option<usize>) -> Result<Self, SymmetryError> {
        if e.ground_size() != blocks.atom_count {
            return Err(SetError::GroundMismatch(blocks.atom_count, e.ground_size()).into());
        }
        if let Some(cap) = per_block_cap {
            for b in &blocks.blocks {
                let count = b.atoms.intersection(&e).cardinality();
                if count > cap {
                    return Err(SymmetryError::Cap {
                        e,
                        block: b.label,
                        count,
                        cap,
                    });
                }
            }
        }
        Ok(Support { e, per_block_cap })
    }

    pub fn empty(blocks: &BlockSystem) -> Self {
        Support {
            e: SubsetMask::empty(blocks.atom_count),
            per_block_cap: None,
        }
    }
}

/// `z` is fixed by every block-preserving permutation fixing `E` pointwise.
pub fn is_invariant(blocks: &BlockSystem, e: &SubsetMask, z: &SubsetMask) -> bool {
    blocks.blocks.iter().all(|b| {
        let residue = b.atoms.difference(e);
        let part = z.intersection(&residue);
        part.is_empty() || part == residue
    })
}

/// The invariant subsets for a support.
pub struct FixedSubsets<'a> {
    blocks: &'a BlockSystem,
    e: SubsetMask,
}

pub fn fixed_subsets<'a>(blocks: &'a BlockSystem, support: &Support) -> FixedSubsets<'a> {
    FixedSubsets { blocks, e: support.e }
}

impl FixedSubsets<'_> {
    pub fn contains(&self, z: &SubsetMask) -> bool {
        is_invariant(self.blocks, &self.e, z)
    }

    /// `∏_B 2^{|E∩B|} · (2 if B∖E ≠ ∅ else 1)`.
    pub fn count(&self) -> u128 {
        self.blocks
            .blocks
            .iter()
            .map(|b| {
                let fixed = b.atoms.intersection(&self.e).cardinality();
                let free = if b.atoms.is_subset_of(&self.e) { 1 } else { 2 };
                (1u128 << fixed) * free
            })
            .product()
    }

    /// All invariant subsets in canonical order.
    pub fn enumerate(&self) -> Result<Vec<SubsetMask>, SymmetryError> {
        let count = self.count();
        if count > MAX_ENUMERATION {
            return Err(SymmetryError::TooLarge(count));
        }
        let e_atoms = self.e;
        let mut units: Vec<SubsetMask> = e_atoms.elements().map(|a| SubsetMask::singleton(self.blocks.atom_count, a)).collect();
        units.extend(
            self.blocks
                .blocks
                .iter()
                .map(|b| b.atoms.difference(&e_atoms))
                .filter(|r| !r.is_empty()),
        );
        let mut out: Vec<SubsetMask> = (0u64..1 << units.len())
            .map(|pick| {
                union_all(
                    self.blocks.atom_count,
                    units.iter().enumerate().filter(|(i, _)| pick >> i & 1 == 1).map(|(_, u)| u),
                )
            })
            .collect();
        out.sort();
        Ok(out)
    }
}

/// Size of the orbit of `z`: `∏_B C(|B∖E|, |z ∩ (B∖E)|)`.
pub fn orbit_size(blocks: &BlockSystem, e: &SubsetMask, z: &SubsetMask) -> u128 {
    blocks
        .blocks
        .iter()
        .map(|b| {
            let residue = b.atoms.difference(e);
            binomial(residue.cardinality(), z.intersection(&residue).cardinality())
        })
        .product()
}

/// The orbit of `z` under the pointwise stabilizer of `E`, in canonical order.
pub fn orbit_of(blocks: &BlockSystem, e: &SubsetMask, z: &SubsetMask) -> Result<Vec<SubsetMask>, SymmetryError> {
    let size = orbit_size(blocks, e, z);
    if size > MAX_ENUMERATION {
        return Err(SymmetryError::TooLarge(size));
    }
    let m = blocks.atom_count;
    let mut acc = vec![z.difference(&blocks.atoms().difference(e))];
    for b in &blocks.blocks {
        let residue = b.atoms.difference(e);
        let k = z.intersection(&residue).cardinality();
        let choices: Vec<SubsetMask> = residue.k_subsets(k).collect();
        acc = acc
            .iter()
            .flat_map(|base| choices.iter().map(move |c| base.union(c)))
            .collect();
    }
    debug_assert!(acc.iter().all(|x| x.ground_size() == m));
    acc.sort();
    acc.dedup();
    Ok(acc)
}

/// A permutation model instance: the block group, families `A_n` of atom
/// sets, and the size bound for the transversal families `C_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymModelInstance {
    pub blocks: BlockSystem,
    pub families: Vec<Vec<SubsetMask>>,
    /// Known partitions `𝒵_n` of the families, when the builder has them.
    pub partitions: Vec<Vec<Vec<SubsetMask>>>,
    pub s_cap: usize,
}

impl SymModelInstance {
    /// Checks every family is closed under the full block group.
    pub fn new(blocks: BlockSystem, families: Vec<Vec<SubsetMask>>, s_cap: usize) -> Result<Self, SymmetryError> {
        let empty = SubsetMask::empty(blocks.atom_count);
        let mut sorted = Vec::with_capacity(families.len());
        for (index, fam) in families.into_iter().enumerate() {
            let set: BTreeSet<SubsetMask> = fam.into_iter().collect();
            for member in &set {
                if member.ground_size() != blocks.atom_count {
                    return Err(SetError::GroundMismatch(blocks.atom_count, member.ground_size()).into());
                }
                for image in orbit_of(&blocks, &empty, member)? {
                    if !set.contains(&image) {
                        return Err(SymmetryError::NotInvariant {
                            index,
                            member: *member,
                            image,
                        });
                    }
                }
            }
            sorted.push(set.into_iter().collect());
        }
        Ok(SymModelInstance {
            blocks,
            families: sorted,
            partitions: Vec::new(),
            s_cap,
        })
    }

    /// `x` belongs to `C_n`: it meets every member of `A_n` and has at most `s_cap` atoms.
    pub fn in_c(&self, n: usize, x: &SubsetMask) -> bool {
        x.cardinality() <= self.s_cap && self.families[n].iter().all(|a| a.intersects(x))
    }

    /// Canonical first member of `C_n`.
    pub fn first_transversal(&self, n: usize) -> Option<SubsetMask> {
        let reach = union_all(self.blocks.atom_count, &self.families[n]);
        (0..=self.s_cap.min(reach.cardinality()))
            .flat_map(|k| reach.k_subsets(k))
            .find(|x| self.in_c(n, x))
    }
}

/// A transposition of two atoms of one block, both outside `E`, that moves
/// a claimed choice value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub member: SubsetMask,
    pub block: BlockLabel,
    /// Outside the member.
    pub a: usize,
    /// Inside the member.
    pub b: usize,
    /// The member after swapping `a` and `b`.
    pub image: SubsetMask,
}

impl Obstruction {
    /// The swap fixes `E` pointwise, preserves the block and moves the member.
    pub fn is_valid(&self, blocks: &BlockSystem, e: &SubsetMask) -> bool {
        let same_block = blocks
            .blocks
            .iter()
            .find(|b| b.label == self.block)
            .is_some_and(|b| b.atoms.contains(self.a) && b.atoms.contains(self.b));
        same_block
            && !e.contains(self.a)
            && !e.contains(self.b)
            && !self.member.contains(self.a)
            && self.member.contains(self.b)
            && self.image == swap(&self.member, self.a, self.b)
            && self.image != self.member
    }
}

fn swap(z: &SubsetMask, a: usize, b: usize) -> SubsetMask {
    match (z.contains(a), z.contains(b)) {
        (true, false) => z.without(a).with(b),
        (false, true) => z.without(b).with(a),
        _ => *z,
    }
}

/// A transposition moving `z`, if `z` is not invariant.
pub fn obstruction_for(blocks: &BlockSystem, e: &SubsetMask, z: &SubsetMask) -> Option<Obstruction> {
    blocks.blocks.iter().find_map(|blk| {
        let residue = blk.atoms.difference(e);
        let a = residue.difference(z).elements().next()?;
        let b = residue.intersection(z).elements().next()?;
        Some(Obstruction {
            member: *z,
            block: blk.label,
            a,
            b,
            image: swap(z, a, b),
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexVerdict {
    /// `C_n` is non-empty.
    pub transversals_exist: bool,
    pub supported: bool,
    /// An invariant member of `C_n`.
    pub witness: Option<SubsetMask>,
    /// Why the canonical first member of `C_n` cannot be a supported value.
    pub certificate: Option<Obstruction>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChoiceDecision {
    pub e: SubsetMask,
    pub indices: Vec<IndexVerdict>,
    pub all_supported: bool,
}

impl ChoiceDecision {
    pub fn failing(&self) -> Vec<usize> {
        self.indices
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.supported)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Least-weight union of invariant units meeting every member, by branch and bound.
fn min_invariant_transversal(members: &[SubsetMask], units: &[SubsetMask]) -> Option<SubsetMask> {
    fn go(
        members: &[SubsetMask],
        units: &[SubsetMask],
        current: SubsetMask,
        best: &mut Option<SubsetMask>,
    ) {
        let weight = current.cardinality();
        if best.is_some_and(|b| weight >= b.cardinality()) {
            return;
        }
        let Some(missed) = members.iter().find(|a| !a.intersects(&current)) else {
            *best = Some(current);
            return;
        };
        for u in units.iter().filter(|u| u.intersects(missed)) {
            go(members, units, current.union(u), best);
        }
    }
    let m = members.first()?.ground_size();
    let mut best = None;
    go(members, units, SubsetMask::empty(m), &mut best);
    best
}

/// For each `n`, whether `C_n` has a member fixed by every block-preserving
/// permutation that fixes `E` pointwise.
pub fn supported_choice_decision(inst: &SymModelInstance, support: &Support) -> ChoiceDecision {
    let e = support.e;
    let m = inst.blocks.atom_count;
    let mut units: Vec<SubsetMask> = e.elements().map(|a| SubsetMask::singleton(m, a)).collect();
    units.extend(
        inst.blocks
            .blocks
            .iter()
            .map(|b| b.atoms.difference(&e))
            .filter(|r| !r.is_empty()),
    );
    let indices: Vec<IndexVerdict> = (0..inst.families.len())
        .map(|n| {
            let first = inst.first_transversal(n);
            let witness = min_invariant_transversal(&inst.families[n], &units)
                .filter(|w| w.cardinality() <= inst.s_cap);
            let supported = witness.is_some();
            IndexVerdict {
                transversals_exist: first.is_some(),
                supported,
                witness,
                certificate: if supported {
                    None
                } else {
                    first.and_then(|z| obstruction_for(&inst.blocks, &e, &z))
                },
            }
        })
        .collect();
    ChoiceDecision {
        e,
        all_supported: indices.iter().all(|v| v.supported),
        indices,
    }
}

/// Atom numbering for the staircase model: block `(n, j)` has `j + 1` atoms.
fn staircase_blocks(n_count: usize, j_count: usize) -> Result<(BlockSystem, Vec<Vec<SubsetMask>>), SymmetryError> {
    let u = n_count * j_count * (j_count + 1) / 2;
    if u > MAX_GROUND {
        return Err(SymmetryError::Parameters(format!("{u} atoms exceed {MAX_GROUND}")));
    }
    let mut next = 0;
    let mut blocks = Vec::new();
    let mut by_n = Vec::new();
    for n in 0..n_count {
        let mut row = Vec::new();
        for j in 0..j_count {
            let atoms: Vec<usize> = (next..next + j + 1).collect();
            next += j + 1;
            let mask = SubsetMask::from_elements(u, &atoms)?;
            blocks.push(Block {
                label: BlockLabel::Pair(n, j),
                atoms: mask,
            });
            row.push(mask);
        }
        by_n.push(row);
    }
    Ok((BlockSystem::new(u, blocks)?, by_n))
}

/// Sets with exactly one atom from each of `blocks`.
fn choice_sets(u: usize, blocks: &[SubsetMask]) -> Vec<SubsetMask> {
    let mut acc = vec![SubsetMask::empty(u)];
    for b in blocks {
        acc = acc
            .iter()
            .flat_map(|x| b.elements().map(move |a| x.with(a)))
            .collect();
    }
    acc
}

/// The staircase model truncated to `n_count` families of `j_count` blocks.
pub fn build_model_710(n_count: usize, j_count: usize, s_cap: usize) -> Result<SymModelInstance, SymmetryError> {
    if n_count == 0 || j_count == 0 {
        return Err(SymmetryError::Parameters("N and J must be at least 1".into()));
    }
    let (blocks, rows) = staircase_blocks(n_count, j_count)?;
    let u = blocks.atom_count;
    let mut families = Vec::new();
    let mut partitions = Vec::new();
    for row in &rows {
        let mut parts: Vec<Vec<SubsetMask>> = Vec::new();
        for j in 0..j_count {
            let mut part: BTreeSet<SubsetMask> = choice_sets(u, &row[..=j]).into_iter().collect();
            part.insert(row[j]);
            parts.push(part.into_iter().collect());
        }
        let family: Vec<SubsetMask> = parts.iter().flatten().copied().collect();
        let distinct: BTreeSet<SubsetMask> = family.iter().copied().collect();
        if distinct.len() != family.len() {
            return Err(SymmetryError::Parameters("partition blocks overlap".into()));
        }
        for (j, part) in parts.iter().enumerate() {
            let reach = union_all(u, &row[..=j]);
            let x = union_all(u, part).intersection(&reach);
            if !part.iter().all(|z| z.intersects(&x)) {
                return Err(SymmetryError::Parameters(format!("block {j} lacks its finite transversal")));
            }
        }
        families.push(distinct.into_iter().collect());
        partitions.push(parts);
    }
    let mut inst = SymModelInstance::new(blocks, families, s_cap)?;
    inst.partitions = partitions;
    Ok(inst)
}

/// `n_count` two-atom blocks; family `n` is the single pair `{a_n, b_n}` and
/// its transversals of size one are the choices from the pair.
pub fn build_model_n2(n_count: usize) -> Result<SymModelInstance, SymmetryError> {
    if n_count == 0 {
        return Err(SymmetryError::Parameters("N must be at least 1".into()));
    }
    let blocks = BlockSystem::from_sizes(&vec![2; n_count])?;
    let families = blocks.blocks.iter().map(|b| vec![b.atoms]).collect();
    SymModelInstance::new(blocks, families, 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub e: SubsetMask,
    pub all_supported: bool,
    pub failing: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanReport {
    pub max_support: usize,
    pub per_block_cap: Option<usize>,
    pub rows: Vec<ScanRow>,
    /// Some scanned support makes every index supported.
    pub supported_choice_exists: bool,
}

/// Number of supports with at most `max_e` atoms and at most `cap` per block.
pub fn support_count(blocks: &BlockSystem, max_e: usize, cap: Option<usize>) -> u128 {
    let mut ways = vec![0u128; max_e + 1];
    ways[0] = 1;
    for b in &blocks.blocks {
        let size = b.atoms.cardinality();
        let top = cap.map_or(size, |c| c.min(size));
        let mut next = vec![0u128; max_e + 1];
        for (have, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for take in 0..=top {
                if have + take <= max_e {
                    next[have + take] += w * binomial(size, take);
                }
            }
        }
        ways = next;
    }
    ways.iter().sum()
}

/// Every support within the budget, with the indices it fails to support.
pub fn no_choice_scan(inst: &SymModelInstance, max_e: usize, per_block_cap: Option<usize>) -> Result<ScanReport, SymmetryError> {
    let required = support_count(&inst.blocks, max_e, per_block_cap);
    if required > MAX_SCAN {
        return Err(SymmetryError::ScanRefused { required });
    }
    let m = inst.blocks.atom_count;
    let mut supports = vec![SubsetMask::empty(m)];
    for b in &inst.blocks.blocks {
        let top = per_block_cap.map_or(b.atoms.cardinality(), |c| c.min(b.atoms.cardinality()));
        let parts: Vec<SubsetMask> = (0..=top).flat_map(|k| b.atoms.k_subsets(k)).collect();
        supports = supports
            .iter()
            .flat_map(|e| parts.iter().map(move |p| e.union(p)))
            .filter(|e| e.cardinality() <= max_e)
            .collect();
    }
    supports.sort();
    let rows: Vec<ScanRow> = supports
        .into_par_iter()
        .map(|e| {
            let d = supported_choice_decision(inst, &Support { e, per_block_cap });
            ScanRow {
                e,
                all_supported: d.all_supported,
                failing: d.failing(),
            }
        })
        .collect();
    Ok(ScanReport {
        max_support: max_e,
        per_block_cap,
        supported_choice_exists: rows.iter().any(|r| r.all_supported),
        rows,
    })
}

/// Verdict label for instances whose sizes only stand in for the
/// infinite cardinals of the original model.
pub const SCALED_ANALOG: &str = "scaled analog";

/// Largest family whose partitions are enumerated.
pub const MAX_PARTITIONED: usize = 10;

/// `n_count` blocks of `block_size` atoms; family `n` is the singletons of block `n`.
pub fn build_model_n17(n_count: usize, block_size: usize) -> Result<SymModelInstance, SymmetryError> {
    if n_count == 0 || block_size == 0 {
        return Err(SymmetryError::Parameters("N and the block size must be at least 1".into()));
    }
    let blocks = BlockSystem::from_sizes(&vec![block_size; n_count])?;
    let u = blocks.atom_count;
    let families = blocks
        .blocks
        .iter()
        .map(|b| b.atoms.elements().map(|a| SubsetMask::singleton(u, a)).collect())
        .collect();
    SymModelInstance::new(blocks, families, 1)
}

/// A transposition that moves a partition to a different partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionObstruction {
    pub partition: Vec<Vec<SubsetMask>>,
    pub a: usize,
    pub b: usize,
    /// A block whose image is not a block.
    pub moved_block: Vec<SubsetMask>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionVerdict {
    pub label: &'static str,
    pub index: usize,
    pub block_count: usize,
    pub considered: u64,
    pub supported: bool,
    /// The first invariant partition into exactly `block_count` blocks.
    pub witness: Option<Vec<Vec<SubsetMask>>>,
    /// Why the first candidate partition is not invariant.
    pub certificate: Option<PartitionObstruction>,
}

fn swap_block(block: &[SubsetMask], a: usize, b: usize) -> Vec<SubsetMask> {
    let mut out: Vec<SubsetMask> = block.iter().map(|z| swap(z, a, b)).collect();
    out.sort();
    out
}

fn partition_mover(
    blocks: &BlockSystem,
    e: &SubsetMask,
    partition: &[Vec<SubsetMask>],
) -> Option<(usize, usize, Vec<SubsetMask>)> {
    let canon: BTreeSet<Vec<SubsetMask>> = partition.iter().cloned().collect();
    for blk in &blocks.blocks {
        let free = blk.atoms.difference(e).to_vec();
        for (i, &a) in free.iter().enumerate() {
            for &b in &free[i + 1..] {
                if let Some(p) = partition.iter().find(|p| !canon.contains(&swap_block(p, a, b))) {
                    return Some((a, b, p.clone()));
                }
            }
        }
    }
    None
}

/// Set partitions of `items` into exactly `k` blocks, in restricted-growth order.
fn partitions_into(items: &[SubsetMask], k: usize, visit: &mut dyn FnMut(Vec<Vec<SubsetMask>>) -> bool) {
    fn go(
        items: &[SubsetMask],
        k: usize,
        pos: usize,
        blocks: &mut Vec<Vec<SubsetMask>>,
        visit: &mut dyn FnMut(Vec<Vec<SubsetMask>>) -> bool,
    ) -> bool {
        if pos == items.len() {
            return blocks.len() != k || visit(blocks.clone());
        }
        if k - blocks.len().min(k) > items.len() - pos {
            return true;
        }
        for i in 0..blocks.len() {
            blocks[i].push(items[pos]);
            let go_on = go(items, k, pos + 1, blocks, visit);
            blocks[i].pop();
            if !go_on {
                return false;
            }
        }
        if blocks.len() < k {
            blocks.push(vec![items[pos]]);
            let go_on = go(items, k, pos + 1, blocks, visit);
            blocks.pop();
            if !go_on {
                return false;
            }
        }
        true
    }
    go(items, k, 0, &mut Vec::new(), visit);
}

/// Whether family `n` has a partition into exactly `block_count` blocks that
/// every block-preserving permutation fixing `E` pointwise maps to itself.
pub fn supported_partition_decision(
    inst: &SymModelInstance,
    n: usize,
    support: &Support,
    block_count: usize,
) -> Result<PartitionVerdict, SymmetryError> {
    let family = inst
        .families
        .get(n)
        .ok_or_else(|| SymmetryError::Parameters(format!("no family {n}")))?;
    if family.len() > MAX_PARTITIONED {
        return Err(SymmetryError::TooLarge(family.len() as u128));
    }
    let mut considered = 0u64;
    let mut witness = None;
    let mut certificate = None;
    partitions_into(family, block_count, &mut |p| {
        considered += 1;
        match partition_mover(&inst.blocks, &support.e, &p) {
            None => {
                witness = Some(p);
                false
            }
            Some((a, b, moved_block)) => {
                if certificate.is_none() {
                    certificate = Some(PartitionObstruction {
                        partition: p,
                        a,
                        b,
                        moved_block,
                    });
                }
                true
            }
        }
    });
    Ok(PartitionVerdict {
        label: SCALED_ANALOG,
        index: n,
        block_count,
        considered,
        supported: witness.is_some(),
        certificate: if witness.is_some() { None } else { certificate },
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(m: usize, e: &[usize]) -> SubsetMask {
        SubsetMask::of(m, e)
    }

    #[test]
    fn fixed_subsets_example() {
        let bs = BlockSystem::from_sizes(&[2, 3]).unwrap();
        let sup = Support::new(&bs, s(5, &[2]), None).unwrap();
        let fx = fixed_subsets(&bs, &sup);
        assert_eq!(fx.count(), 8);
        let all = fx.enumerate().unwrap();
        assert_eq!(all.len(), 8);
        assert!(all.contains(&s(5, &[2])) && all.contains(&s(5, &[0, 1, 3, 4])));
    }

    #[test]
    fn fixed_subsets_extremes() {
        let bs = BlockSystem::from_sizes(&[2, 3]).unwrap();
        let full = Support::new(&bs, SubsetMask::full(5), None).unwrap();
        assert_eq!(fixed_subsets(&bs, &full).count(), 32);
        let none = Support::empty(&bs);
        assert_eq!(
            fixed_subsets(&bs, &none).enumerate().unwrap(),
            vec![s(5, &[]), s(5, &[0, 1]), s(5, &[2, 3, 4]), s(5, &[0, 1, 2, 3, 4])]
        );
    }

    #[test]
    fn orbit_examples() {
        let one = BlockSystem::from_sizes(&[3]).unwrap();
        assert_eq!(orbit_of(&one, &s(3, &[]), &s(3, &[0])).unwrap(), vec![s(3, &[0]), s(3, &[1]), s(3, &[2])]);
        let bs = BlockSystem::from_sizes(&[2, 3]).unwrap();
        assert_eq!(
            orbit_of(&bs, &s(5, &[0]), &s(5, &[0, 2])).unwrap(),
            vec![s(5, &[0, 2]), s(5, &[0, 3]), s(5, &[0, 4])]
        );
        assert_eq!(orbit_of(&bs, &s(5, &[]), &s(5, &[0, 1])).unwrap(), vec![s(5, &[0, 1])]);
    }

    #[test]
    fn model_710_small() {
        let inst = build_model_710(1, 2, 2).unwrap();
        assert_eq!(inst.blocks.atom_count(), 3);
        assert_eq!(inst.families[0], vec![s(3, &[0]), s(3, &[0, 1]), s(3, &[0, 2]), s(3, &[1, 2])]);
        assert_eq!(
            inst.partitions[0],
            vec![vec![s(3, &[0])], vec![s(3, &[0, 1]), s(3, &[0, 2]), s(3, &[1, 2])]]
        );
        let tiny = build_model_710(1, 1, 1).unwrap();
        assert_eq!(tiny.families[0], vec![s(1, &[0])]);
    }

    #[test]
    fn pairs_need_a_support_in_each_pair() {
        let inst = build_model_n2(2).unwrap();
        let d = supported_choice_decision(&inst, &Support::empty(&inst.blocks));
        assert!(!d.all_supported);
        for v in &d.indices {
            assert!(v.certificate.as_ref().unwrap().is_valid(&inst.blocks, &d.e));
        }
        let d = supported_choice_decision(&inst, &Support::new(&inst.blocks, s(4, &[0, 3]), None).unwrap());
        assert!(d.all_supported);
        let scan = no_choice_scan(&inst, 1, None).unwrap();
        assert!(!scan.supported_choice_exists);
        assert_eq!(scan.rows.len(), 5);
    }

    #[test]
    fn cap_violation_named() {
        let bs = BlockSystem::from_sizes(&[3]).unwrap();
        let err = Support::new(&bs, s(3, &[0, 1]), Some(1)).unwrap_err();
        assert!(matches!(err, SymmetryError::Cap { count: 2, cap: 1, .. }));
    }

    #[test]
    fn non_invariant_family_rejected() {
        let bs = BlockSystem::from_sizes(&[2]).unwrap();
        let err = SymModelInstance::new(bs, vec![vec![s(2, &[0])]], 1).unwrap_err();
        assert!(matches!(err, SymmetryError::NotInvariant { .. }));
    }

    #[test]
    fn block_partitions_need_the_block_in_the_support() {
        let inst = build_model_n17(2, 4).unwrap();
        let outside = Support::new(&inst.blocks, s(8, &[0, 1, 2, 3]), None).unwrap();
        let v = supported_partition_decision(&inst, 1, &outside, 2).unwrap();
        assert_eq!(v.label, SCALED_ANALOG);
        assert!(!v.supported);
        assert_eq!(v.considered, 7);
        let c = v.certificate.unwrap();
        assert!(!c.moved_block.is_empty() && c.a != c.b);
        let v = supported_partition_decision(&inst, 0, &outside, 2).unwrap();
        assert!(v.supported);
        let v = supported_partition_decision(&inst, 1, &outside, 4).unwrap();
        assert!(v.supported);
    }

    #[test]
    fn scan_refuses_large_budgets() {
        let inst = build_model_710(3, 4, 6).unwrap();
        let err = no_choice_scan(&inst, 30, None).unwrap_err();
        assert!(matches!(err, SymmetryError::ScanRefused { .. }));
    }
}
