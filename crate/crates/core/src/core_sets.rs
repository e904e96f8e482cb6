//! Subsets of a finite ground set and families of them.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

/// Largest supported ground set.
pub const MAX_GROUND: usize = 64;

/// Families larger than this are never materialized.
pub const MAX_ENUMERATION: u128 = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SetError {
    #[error("ground size {0} exceeds the supported maximum of {MAX_GROUND}")]
    GroundTooLarge(usize),
    #[error("element {element} is outside the ground set of size {ground}")]
    ElementOutOfRange { element: usize, ground: usize },
    #[error("ground size mismatch: {0} vs {1}")]
    GroundMismatch(usize, usize),
    #[error("cardinality bound {s} exceeds ground size {m}")]
    BoundTooLarge { s: usize, m: usize },
    #[error("family has {0} members, too many to enumerate")]
    TooLarge(u128),
}

/// A subset of `{0, .., m-1}` stored as a characteristic bit vector.
///
/// `Ord` is the canonical order used everywhere: ground size, then
/// cardinality, then lexicographic comparison of the sorted element lists.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    ground: u8,
    bits: u64,
}

fn ground_mask(m: usize) -> u64 {
    if m >= 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

impl SubsetMask {
    pub fn new(ground_size: usize, bits: u64) -> Result<Self, SetError> {
        if ground_size > MAX_GROUND {
            return Err(SetError::GroundTooLarge(ground_size));
        }
        let stray = bits & !ground_mask(ground_size);
        if stray != 0 {
            return Err(SetError::ElementOutOfRange {
                element: stray.trailing_zeros() as usize,
                ground: ground_size,
            });
        }
        Ok(SubsetMask {
            ground: ground_size as u8,
            bits,
        })
    }

    pub fn from_elements(ground_size: usize, elements: &[usize]) -> Result<Self, SetError> {
        if ground_size > MAX_GROUND {
            return Err(SetError::GroundTooLarge(ground_size));
        }
        let mut bits = 0u64;
        for &e in elements {
            if e >= ground_size {
                return Err(SetError::ElementOutOfRange {
                    element: e,
                    ground: ground_size,
                });
            }
            bits |= 1 << e;
        }
        Ok(SubsetMask {
            ground: ground_size as u8,
            bits,
        })
    }

    /// Panics when `ground_size` is out of range; meant for literals in tests and builders.
    pub fn of(ground_size: usize, elements: &[usize]) -> Self {
        Self::from_elements(ground_size, elements).expect("valid subset literal")
    }

    pub fn empty(ground_size: usize) -> Self {
        assert!(ground_size <= MAX_GROUND);
        SubsetMask {
            ground: ground_size as u8,
            bits: 0,
        }
    }

    pub fn full(ground_size: usize) -> Self {
        assert!(ground_size <= MAX_GROUND);
        SubsetMask {
            ground: ground_size as u8,
            bits: ground_mask(ground_size),
        }
    }

    pub fn singleton(ground_size: usize, element: usize) -> Self {
        Self::of(ground_size, &[element])
    }

    pub fn ground_size(&self) -> usize {
        self.ground as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn cardinality(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        self.bits == ground_mask(self.ground_size())
    }

    pub fn contains(&self, element: usize) -> bool {
        element < 64 && self.bits >> element & 1 == 1
    }

    pub fn is_subset_of(&self, other: &SubsetMask) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn intersects(&self, other: &SubsetMask) -> bool {
        self.bits & other.bits != 0
    }

    pub fn union(&self, other: &SubsetMask) -> SubsetMask {
        debug_assert_eq!(self.ground, other.ground);
        SubsetMask {
            ground: self.ground,
            bits: self.bits | other.bits,
        }
    }

    pub fn intersection(&self, other: &SubsetMask) -> SubsetMask {
        debug_assert_eq!(self.ground, other.ground);
        SubsetMask {
            ground: self.ground,
            bits: self.bits & other.bits,
        }
    }

    pub fn difference(&self, other: &SubsetMask) -> SubsetMask {
        debug_assert_eq!(self.ground, other.ground);
        SubsetMask {
            ground: self.ground,
            bits: self.bits & !other.bits,
        }
    }

    pub fn symmetric_difference(&self, other: &SubsetMask) -> SubsetMask {
        debug_assert_eq!(self.ground, other.ground);
        SubsetMask {
            ground: self.ground,
            bits: self.bits ^ other.bits,
        }
    }

    pub fn complement(&self) -> SubsetMask {
        SubsetMask {
            ground: self.ground,
            bits: !self.bits & ground_mask(self.ground_size()),
        }
    }

    pub fn with(&self, element: usize) -> SubsetMask {
        assert!(element < self.ground_size());
        SubsetMask {
            ground: self.ground,
            bits: self.bits | 1 << element,
        }
    }

    pub fn without(&self, element: usize) -> SubsetMask {
        SubsetMask {
            ground: self.ground,
            bits: self.bits & !(1u64.checked_shl(element as u32).unwrap_or(0)),
        }
    }

    /// The same bits over a larger or equal ground set.
    pub fn widen(&self, ground_size: usize) -> Result<SubsetMask, SetError> {
        SubsetMask::new(ground_size, self.bits)
    }

    pub fn elements(&self) -> Elements {
        Elements { rest: self.bits }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.elements().collect()
    }

    /// All subsets of `self`, in no particular order.
    pub fn submasks(&self) -> Submasks {
        Submasks {
            ground: self.ground,
            of: self.bits,
            next: Some(self.bits),
        }
    }

    /// All `k`-element subsets of `self`, in canonical order.
    pub fn k_subsets(&self, k: usize) -> KSubsets {
        let positions = self.to_vec();
        let state = if k <= positions.len() {
            Some((0..k).collect())
        } else {
            None
        };
        KSubsets {
            ground: self.ground,
            positions,
            state,
        }
    }
}

impl Ord for SubsetMask {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ground
            .cmp(&other.ground)
            .then(self.cardinality().cmp(&other.cardinality()))
            .then_with(|| {
                let diff = self.bits ^ other.bits;
                if diff == 0 {
                    Ordering::Equal
                } else if self.bits & diff & diff.wrapping_neg() != 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            })
    }
}

impl PartialOrd for SubsetMask {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elements().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}/{}", self.ground)
    }
}

/// Masks serialize as their sorted element arrays; the ground size travels
/// with the enclosing value.
impl Serialize for SubsetMask {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.elements())
    }
}

pub struct Elements {
    rest: u64,
}

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.rest == 0 {
            return None;
        }
        let e = self.rest.trailing_zeros() as usize;
        self.rest &= self.rest - 1;
        Some(e)
    }
}

pub struct Submasks {
    ground: u8,
    of: u64,
    next: Option<u64>,
}

impl Iterator for Submasks {
    type Item = SubsetMask;

    fn next(&mut self) -> Option<SubsetMask> {
        let cur = self.next?;
        self.next = if cur == 0 {
            None
        } else {
            Some((cur - 1) & self.of)
        };
        Some(SubsetMask {
            ground: self.ground,
            bits: cur,
        })
    }
}

pub struct KSubsets {
    ground: u8,
    positions: Vec<usize>,
    state: Option<Vec<usize>>,
}

impl Iterator for KSubsets {
    type Item = SubsetMask;

    fn next(&mut self) -> Option<SubsetMask> {
        let idx = self.state.as_mut()?;
        let bits = idx.iter().fold(0u64, |b, &i| b | 1 << self.positions[i]);
        let n = self.positions.len();
        let k = idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.state = None;
                break;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(SubsetMask {
            ground: self.ground,
            bits,
        })
    }
}

/// Union of a list of masks over `ground_size`.
pub fn union_all<'a>(ground_size: usize, masks: impl IntoIterator<Item = &'a SubsetMask>) -> SubsetMask {
    masks
        .into_iter()
        .fold(SubsetMask::empty(ground_size), |acc, m| acc.union(m))
}

/// Binomial coefficient as `u128`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    /// Deduplicated, canonically sorted members.
    Explicit(Vec<SubsetMask>),
    /// All subsets with at most `s` elements.
    CardAtMost(usize),
    /// All subsets of `Y`.
    PowersetOf(SubsetMask),
    /// All subsets avoiding the element `top`.
    BelowTop(usize),
}

/// A family of subsets of a common ground set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FamilyRepr", into = "FamilyRepr")]
pub struct FamilySpec {
    ground_size: usize,
    kind: FamilyKind,
}

impl FamilySpec {
    pub fn explicit(ground_size: usize, members: Vec<SubsetMask>) -> Result<Self, SetError> {
        if ground_size > MAX_GROUND {
            return Err(SetError::GroundTooLarge(ground_size));
        }
        for m in &members {
            if m.ground_size() != ground_size {
                return Err(SetError::GroundMismatch(ground_size, m.ground_size()));
            }
        }
        let set: BTreeSet<SubsetMask> = members.into_iter().collect();
        Ok(FamilySpec {
            ground_size,
            kind: FamilyKind::Explicit(set.into_iter().collect()),
        })
    }

    pub fn card_at_most(ground_size: usize, s: usize) -> Result<Self, SetError> {
        if ground_size > MAX_GROUND {
            return Err(SetError::GroundTooLarge(ground_size));
        }
        if s > ground_size {
            return Err(SetError::BoundTooLarge { s, m: ground_size });
        }
        Ok(FamilySpec {
            ground_size,
            kind: FamilyKind::CardAtMost(s),
        })
    }

    pub fn powerset_of(y: SubsetMask) -> Self {
        FamilySpec {
            ground_size: y.ground_size(),
            kind: FamilyKind::PowersetOf(y),
        }
    }

    pub fn powerset(ground_size: usize) -> Self {
        Self::powerset_of(SubsetMask::full(ground_size))
    }

    pub fn below_top(ground_size: usize, top: usize) -> Result<Self, SetError> {
        if ground_size > MAX_GROUND {
            return Err(SetError::GroundTooLarge(ground_size));
        }
        if top >= ground_size {
            return Err(SetError::ElementOutOfRange {
                element: top,
                ground: ground_size,
            });
        }
        Ok(FamilySpec {
            ground_size,
            kind: FamilyKind::BelowTop(top),
        })
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn contains(&self, x: &SubsetMask) -> bool {
        if x.ground_size() != self.ground_size {
            return false;
        }
        match &self.kind {
            FamilyKind::Explicit(members) => members.binary_search(x).is_ok(),
            FamilyKind::CardAtMost(s) => x.cardinality() <= *s,
            FamilyKind::PowersetOf(y) => x.is_subset_of(y),
            FamilyKind::BelowTop(t) => !x.contains(*t),
        }
    }

    pub fn len(&self) -> u128 {
        let m = self.ground_size;
        match &self.kind {
            FamilyKind::Explicit(members) => members.len() as u128,
            FamilyKind::CardAtMost(s) => (0..=*s).map(|i| binomial(m, i)).sum(),
            FamilyKind::PowersetOf(y) => 1u128 << y.cardinality(),
            FamilyKind::BelowTop(_) => 1u128 << (m - 1),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Members in canonical order.
    pub fn members(&self) -> Result<Vec<SubsetMask>, SetError> {
        self.members_within(SubsetMask::full(self.ground_size))
    }

    /// Members contained in `within`, in canonical order.
    pub fn members_within(&self, within: SubsetMask) -> Result<Vec<SubsetMask>, SetError> {
        let m = self.ground_size;
        if within.ground_size() != m {
            return Err(SetError::GroundMismatch(m, within.ground_size()));
        }
        let mut out: Vec<SubsetMask> = match &self.kind {
            FamilyKind::Explicit(members) => {
                return Ok(members
                    .iter()
                    .filter(|x| x.is_subset_of(&within))
                    .copied()
                    .collect())
            }
            FamilyKind::CardAtMost(s) => {
                let n = within.cardinality();
                let count: u128 = (0..=(*s).min(n)).map(|i| binomial(n, i)).sum();
                guard(count)?;
                return Ok((0..=(*s).min(n))
                    .flat_map(|k| within.k_subsets(k))
                    .collect());
            }
            FamilyKind::PowersetOf(y) => {
                let base = y.intersection(&within);
                guard(1u128 << base.cardinality())?;
                base.submasks().collect()
            }
            FamilyKind::BelowTop(t) => {
                let base = within.without(*t);
                guard(1u128 << base.cardinality())?;
                base.submasks().collect()
            }
        };
        out.sort();
        Ok(out)
    }

    /// `Z(x)`: the members disjoint from `x`, in canonical order.
    pub fn z_of(&self, x: &SubsetMask) -> Result<Vec<SubsetMask>, SetError> {
        if x.ground_size() != self.ground_size {
            return Err(SetError::GroundMismatch(self.ground_size, x.ground_size()));
        }
        self.members_within(x.complement())
    }

    /// Union of all members.
    pub fn union_of_members(&self) -> SubsetMask {
        let m = self.ground_size;
        match &self.kind {
            FamilyKind::Explicit(members) => union_all(m, members),
            FamilyKind::CardAtMost(0) => SubsetMask::empty(m),
            FamilyKind::CardAtMost(_) => SubsetMask::full(m),
            FamilyKind::PowersetOf(y) => *y,
            FamilyKind::BelowTop(t) => SubsetMask::full(m).without(*t),
        }
    }

    pub fn flags(&self) -> FamilyFlags {
        classify_family(self)
    }
}

fn guard(count: u128) -> Result<(), SetError> {
    if count > MAX_ENUMERATION {
        Err(SetError::TooLarge(count))
    } else {
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyFlags {
    pub downward_closed: bool,
    pub union_closed: bool,
    pub covers_ground: bool,
    pub contains_empty: bool,
    pub contains_singletons: bool,
    pub contains_ground: bool,
}

impl FamilyFlags {
    pub fn is_ideal(&self) -> bool {
        self.downward_closed && self.union_closed && self.contains_empty
    }

    pub fn is_bornology(&self) -> bool {
        self.is_ideal() && self.covers_ground
    }
}

/// Exact closure flags: by enumeration for explicit families, analytically
/// for the symbolic kinds.
pub fn classify_family(family: &FamilySpec) -> FamilyFlags {
    let m = family.ground_size;
    match &family.kind {
        FamilyKind::CardAtMost(s) => FamilyFlags {
            downward_closed: true,
            union_closed: *s == 0 || *s >= m,
            covers_ground: *s >= 1 || m == 0,
            contains_empty: true,
            contains_singletons: *s >= 1 || m == 0,
            contains_ground: *s >= m,
        },
        FamilyKind::PowersetOf(y) => FamilyFlags {
            downward_closed: true,
            union_closed: true,
            covers_ground: y.is_full(),
            contains_empty: true,
            contains_singletons: y.is_full(),
            contains_ground: y.is_full(),
        },
        FamilyKind::BelowTop(_) => FamilyFlags {
            downward_closed: true,
            union_closed: true,
            covers_ground: false,
            contains_empty: true,
            contains_singletons: false,
            contains_ground: false,
        },
        FamilyKind::Explicit(members) => {
            let set: BTreeSet<SubsetMask> = members.iter().copied().collect();
            let downward_closed = members
                .iter()
                .all(|x| x.elements().all(|e| set.contains(&x.without(e))));
            let union_closed = members
                .iter()
                .enumerate()
                .all(|(i, a)| members[i + 1..].iter().all(|b| set.contains(&a.union(b))));
            FamilyFlags {
                downward_closed,
                union_closed,
                covers_ground: union_all(m, members).is_full(),
                contains_empty: set.contains(&SubsetMask::empty(m)),
                contains_singletons: (0..m).all(|i| set.contains(&SubsetMask::singleton(m, i))),
                contains_ground: set.contains(&SubsetMask::full(m)),
            }
        }
    }
}

/// Smallest family containing `generators` that is closed downward and under
/// unions of at most `max_union_arity` members (`None` = unbounded).
///
/// Closure under binary unions already gives closure under all finite unions,
/// so any arity of two or more yields the powerset of the generators' union.
pub fn ideal_close(
    ground_size: usize,
    generators: &[SubsetMask],
    max_union_arity: Option<usize>,
) -> Result<FamilySpec, SetError> {
    for g in generators {
        if g.ground_size() != ground_size {
            return Err(SetError::GroundMismatch(ground_size, g.ground_size()));
        }
    }
    if max_union_arity == Some(0) {
        return Err(SetError::BoundTooLarge { s: 0, m: 1 });
    }
    let mut closed: BTreeSet<SubsetMask> = BTreeSet::new();
    closed.insert(SubsetMask::empty(ground_size));
    if max_union_arity == Some(1) {
        for g in generators {
            guard(1u128 << g.cardinality())?;
            closed.extend(g.submasks());
        }
    } else {
        let top = union_all(ground_size, generators);
        guard(1u128 << top.cardinality())?;
        closed.extend(top.submasks());
    }
    FamilySpec::explicit(ground_size, closed.into_iter().collect())
}

#[derive(Serialize, Deserialize)]
struct FamilyRepr {
    ground_size: usize,
    #[serde(flatten)]
    kind: KindRepr,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum KindRepr {
    Explicit { members: Vec<Vec<usize>> },
    CardAtMost { s: usize },
    PowersetOf { y: Vec<usize> },
    BelowTop { top: usize },
}

impl TryFrom<FamilyRepr> for FamilySpec {
    type Error = SetError;

    fn try_from(repr: FamilyRepr) -> Result<Self, SetError> {
        let m = repr.ground_size;
        match repr.kind {
            KindRepr::Explicit { members } => {
                let masks = members
                    .iter()
                    .map(|els| SubsetMask::from_elements(m, els))
                    .collect::<Result<Vec<_>, _>>()?;
                FamilySpec::explicit(m, masks)
            }
            KindRepr::CardAtMost { s } => FamilySpec::card_at_most(m, s),
            KindRepr::PowersetOf { y } => Ok(FamilySpec::powerset_of(SubsetMask::from_elements(m, &y)?)),
            KindRepr::BelowTop { top } => FamilySpec::below_top(m, top),
        }
    }
}

impl From<FamilySpec> for FamilyRepr {
    fn from(f: FamilySpec) -> Self {
        let kind = match f.kind {
            FamilyKind::Explicit(members) => KindRepr::Explicit {
                members: members.iter().map(SubsetMask::to_vec).collect(),
            },
            FamilyKind::CardAtMost(s) => KindRepr::CardAtMost { s },
            FamilyKind::PowersetOf(y) => KindRepr::PowersetOf { y: y.to_vec() },
            FamilyKind::BelowTop(top) => KindRepr::BelowTop { top },
        };
        FamilyRepr {
            ground_size: f.ground_size,
            kind,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(m: usize, e: &[usize]) -> SubsetMask {
        SubsetMask::of(m, e)
    }

    #[test]
    fn canonical_order_is_size_then_lex() {
        let mut v = vec![s(4, &[1, 2]), s(4, &[0, 3]), s(4, &[3]), s(4, &[]), s(4, &[0, 2])];
        v.sort();
        assert_eq!(v, vec![s(4, &[]), s(4, &[3]), s(4, &[0, 2]), s(4, &[0, 3]), s(4, &[1, 2])]);
    }

    #[test]
    fn k_subsets_come_out_sorted() {
        let all: Vec<_> = SubsetMask::full(5).k_subsets(3).collect();
        assert_eq!(all.len(), 10);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(SubsetMask::full(3).k_subsets(4).count(), 0);
        assert_eq!(SubsetMask::full(3).k_subsets(0).collect::<Vec<_>>(), vec![s(3, &[])]);
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(SubsetMask::from_elements(3, &[3]).is_err());
        assert!(SubsetMask::new(2, 0b100).is_err());
        assert!(FamilySpec::card_at_most(3, 4).is_err());
        assert!(FamilySpec::below_top(3, 3).is_err());
    }

    #[test]
    fn ideal_close_examples() {
        let p = ideal_close(3, &[s(3, &[0]), s(3, &[1])], None).unwrap();
        assert_eq!(p.members().unwrap(), vec![s(3, &[]), s(3, &[0]), s(3, &[1]), s(3, &[0, 1])]);
        assert_eq!(ideal_close(3, &[], Some(4)).unwrap().members().unwrap(), vec![s(3, &[])]);
        let d = ideal_close(3, &[s(3, &[0, 1]), s(3, &[2])], Some(1)).unwrap();
        assert_eq!(
            d.members().unwrap(),
            vec![s(3, &[]), s(3, &[0]), s(3, &[1]), s(3, &[2]), s(3, &[0, 1])]
        );
    }

    #[test]
    fn classify_symbolic_examples() {
        let f = FamilySpec::card_at_most(4, 2).unwrap().flags();
        assert!(f.downward_closed && !f.union_closed && f.covers_ground);
        let p = FamilySpec::powerset(3).flags();
        assert!(p.is_bornology() && p.contains_singletons && p.contains_ground);
        let b = FamilySpec::below_top(3, 2).unwrap();
        let bf = b.flags();
        assert!(bf.is_ideal() && !bf.covers_ground && !bf.contains_ground);
        assert_eq!(b.union_of_members(), s(3, &[0, 1]));
    }

    #[test]
    fn z_of_examples() {
        let z = FamilySpec::powerset_of(s(3, &[0, 1]));
        assert_eq!(z.z_of(&s(3, &[1])).unwrap(), vec![s(3, &[]), s(3, &[0])]);
        let c = FamilySpec::card_at_most(3, 2).unwrap();
        assert_eq!(c.z_of(&SubsetMask::full(3)).unwrap(), vec![s(3, &[])]);
        assert_eq!(c.z_of(&s(3, &[])).unwrap(), c.members().unwrap());
    }

    #[test]
    fn family_json_round_trip() {
        let fams = vec![
            FamilySpec::explicit(4, vec![s(4, &[2, 1]), s(4, &[0]), s(4, &[0])]).unwrap(),
            FamilySpec::card_at_most(5, 2).unwrap(),
            FamilySpec::powerset_of(s(4, &[1, 3])),
            FamilySpec::below_top(3, 0).unwrap(),
        ];
        for f in fams {
            let text = serde_json::to_string(&f).unwrap();
            let back: FamilySpec = serde_json::from_str(&text).unwrap();
            assert_eq!(back, f);
        }
        let text = serde_json::to_string(&FamilySpec::explicit(3, vec![s(3, &[2, 0])]).unwrap()).unwrap();
        assert_eq!(text, r#"{"ground_size":3,"kind":"explicit","members":[[0,2]]}"#);
        assert!(serde_json::from_str::<FamilySpec>(r#"{"ground_size":2,"kind":"explicit","members":[[2]]}"#).is_err());
    }
}
