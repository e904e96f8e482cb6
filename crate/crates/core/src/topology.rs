//! Finite topologies presented by a base with designated local bases.
//!
//! Every finite topology is determined by the minimal open neighbourhood
//! `U_p` of each point, so that is what gets stored: a set is open iff it
//! contains `U_p` for each of its points. The base and the per-point local
//! bases are kept alongside for the base-level notions (basic isolation,
//! separation by disjoint basic sets, and so on).

use fixedbitset::FixedBitSet;
use thiserror::Error;

/// A set of point indices.
pub type PointSet = FixedBitSet;

/// Point sets larger than this are never enumerated subset by subset.
pub const MAX_ENUMERATED_POINTS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error("local basic set {base} of point {point} does not contain the point")]
    LocalBaseMissesPoint { point: usize, base: usize },
    #[error("base set {0} has the wrong universe size")]
    BaseSize(usize),
    #[error("{points} points is too many to enumerate all subsets (limit {MAX_ENUMERATED_POINTS})")]
    TooManyPoints { points: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseSet<L> {
    pub label: L,
    pub members: PointSet,
}

#[derive(Clone, Debug)]
pub struct FiniteTopology<P, L> {
    points: Vec<P>,
    base: Vec<BaseSet<L>>,
    local: Vec<Vec<usize>>,
    minimal: Vec<PointSet>,
}

pub fn point_set(n: usize, members: impl IntoIterator<Item = usize>) -> PointSet {
    let mut s = PointSet::with_capacity(n);
    for i in members {
        s.insert(i);
    }
    s
}

fn full_set(n: usize) -> PointSet {
    let mut s = PointSet::with_capacity(n);
    s.insert_range(..);
    s
}

impl<P: Clone, L: Clone> FiniteTopology<P, L> {
    /// Builds the topology generated by `base`; `local[p]` lists the base
    /// indices that form the designated neighbourhood system of point `p`.
    pub fn from_local_bases(
        points: Vec<P>,
        base: Vec<BaseSet<L>>,
        local: Vec<Vec<usize>>,
    ) -> Result<Self, TopologyError> {
        let n = points.len();
        assert_eq!(local.len(), n, "one local base per point");
        for (i, b) in base.iter().enumerate() {
            if b.members.len() != n {
                return Err(TopologyError::BaseSize(i));
            }
        }
        for (p, ls) in local.iter().enumerate() {
            for &b in ls {
                if !base[b].members.contains(p) {
                    return Err(TopologyError::LocalBaseMissesPoint { point: p, base: b });
                }
            }
        }
        let mut minimal = vec![full_set(n); n];
        for b in &base {
            for p in b.members.ones() {
                minimal[p].intersect_with(&b.members);
            }
        }
        Ok(FiniteTopology {
            points,
            base,
            local,
            minimal,
        })
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[P] {
        &self.points
    }

    pub fn base(&self) -> &[BaseSet<L>] {
        &self.base
    }

    pub fn local_base(&self, p: usize) -> &[usize] {
        &self.local[p]
    }

    /// The smallest open set containing `p`.
    pub fn minimal_nbhd(&self, p: usize) -> &PointSet {
        &self.minimal[p]
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::with_capacity(self.point_count())
    }

    pub fn full_set(&self) -> PointSet {
        full_set(self.point_count())
    }

    pub fn is_open(&self, v: &PointSet) -> bool {
        v.ones().all(|p| self.minimal[p].is_subset(v))
    }

    pub fn is_closed(&self, v: &PointSet) -> bool {
        let mut c = self.full_set();
        c.difference_with(v);
        self.is_open(&c)
    }

    pub fn is_clopen(&self, v: &PointSet) -> bool {
        self.is_open(v) && self.is_closed(v)
    }

    /// The literal neighbourhood-system predicate: every point of `v` has a
    /// designated basic neighbourhood inside `v`.
    pub fn is_def_open(&self, v: &PointSet) -> bool {
        v.ones()
            .all(|p| self.local[p].iter().any(|&b| self.base[b].members.is_subset(v)))
    }

    /// `Ok` when the predicate family equals the generated topology; otherwise
    /// a point `p` whose minimal neighbourhood is generated-open but fails
    /// the predicate.
    pub fn def_equals_gen(&self) -> Result<(), usize> {
        match (0..self.point_count()).find(|&p| !self.minimal_is_basic(p)) {
            None => Ok(()),
            Some(p) => Err(p),
        }
    }

    fn minimal_is_basic(&self, p: usize) -> bool {
        self.local[p]
            .iter()
            .any(|&b| self.base[b].members == self.minimal[p])
    }

    /// Structural consistency of the minimal neighbourhoods; an empty result
    /// means the open family is closed under unions and intersections.
    pub fn verify_axioms(&self) -> Vec<String> {
        let mut problems = Vec::new();
        for p in 0..self.point_count() {
            if !self.minimal[p].contains(p) {
                problems.push(format!("point {p} is missing from its minimal neighbourhood"));
            }
            for q in self.minimal[p].ones() {
                if !self.minimal[q].is_subset(&self.minimal[p]) {
                    problems.push(format!("U_{q} is not inside U_{p} although {q} is in U_{p}"));
                }
            }
        }
        for (i, b) in self.base.iter().enumerate() {
            if !self.is_open(&b.members) {
                problems.push(format!("base set {i} is not open"));
            }
        }
        problems
    }

    /// All open sets, as bit masks over the points; only for small spaces.
    pub fn open_masks(&self) -> Result<Vec<u32>, TopologyError> {
        let n = self.point_count();
        if n > MAX_ENUMERATED_POINTS {
            return Err(TopologyError::TooManyPoints { points: n });
        }
        let mins: Vec<u32> = self.minimal.iter().map(to_mask).collect();
        Ok((0u32..1 << n)
            .filter(|&v| {
                let mut rest = v;
                while rest != 0 {
                    let p = rest.trailing_zeros() as usize;
                    if mins[p] & !v != 0 {
                        return false;
                    }
                    rest &= rest - 1;
                }
                true
            })
            .collect())
    }

    pub fn isolated_points(&self) -> Vec<usize> {
        (0..self.point_count())
            .filter(|&p| self.minimal[p].count_ones(..) == 1)
            .collect()
    }

    /// Some designated basic neighbourhood of `p` is `{p}`.
    pub fn is_base_isolated(&self, p: usize) -> bool {
        self.local[p]
            .iter()
            .any(|&b| self.base[b].members.count_ones(..) == 1)
    }

    pub fn base_isolated_points(&self) -> Vec<usize> {
        (0..self.point_count())
            .filter(|&p| self.is_base_isolated(p))
            .collect()
    }

    pub fn is_base_discrete(&self) -> bool {
        (0..self.point_count()).all(|p| self.is_base_isolated(p))
    }

    /// No base set is a singleton.
    pub fn is_base_crowded(&self) -> bool {
        self.base.iter().all(|b| b.members.count_ones(..) != 1)
    }

    /// First pair of distinct points without disjoint designated basic
    /// neighbourhoods, if any.
    pub fn base_hausdorff_failure(&self) -> Option<(usize, usize)> {
        let n = self.point_count();
        for p in 0..n {
            for q in p + 1..n {
                let separated = self.local[p].iter().any(|&u| {
                    self.local[q]
                        .iter()
                        .any(|&v| self.base[u].members.is_disjoint(&self.base[v].members))
                });
                if !separated {
                    return Some((p, q));
                }
            }
        }
        None
    }

    /// The intersection of the local base at `p` is itself a member of it.
    pub fn is_base_p_point(&self, p: usize) -> bool {
        let mut meet = self.full_set();
        for &b in &self.local[p] {
            meet.intersect_with(&self.base[b].members);
        }
        self.local[p].iter().any(|&b| self.base[b].members == meet)
    }

    /// The subspace on `indices` (kept in the given order), with traced base
    /// sets and the same local-base designations.
    pub fn subspace(&self, indices: &[usize]) -> FiniteTopology<P, L> {
        let k = indices.len();
        let points = indices.iter().map(|&i| self.points[i].clone()).collect();
        let base = self
            .base
            .iter()
            .map(|b| BaseSet {
                label: b.label.clone(),
                members: point_set(
                    k,
                    indices
                        .iter()
                        .enumerate()
                        .filter(|(_, &i)| b.members.contains(i))
                        .map(|(j, _)| j),
                ),
            })
            .collect();
        let local = indices.iter().map(|&i| self.local[i].clone()).collect();
        FiniteTopology::from_local_bases(points, base, local).expect("traces keep local membership")
    }

    /// Two topologies on the same indexed point set coincide.
    pub fn same_open_sets<Q, M>(&self, other: &FiniteTopology<Q, M>) -> bool {
        self.minimal == other.minimal
    }

    /// Image of a point set under an index map into a space of `target_size` points.
    pub fn image(set: &PointSet, map: &[usize], target_size: usize) -> PointSet {
        point_set(target_size, set.ones().map(|p| map[p]))
    }
}

fn to_mask(s: &PointSet) -> u32 {
    s.ones().fold(0u32, |m, i| m | 1 << i)
}

/// A violation of a pointwise map property: the point, and the designated
/// basic neighbourhood (as a base index) for which no partner was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MapFailure {
    pub point: usize,
    pub base: usize,
}

/// How an index map between two finite based spaces behaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapReport {
    pub bijective: bool,
    /// `h[U_p] ⊆ U_{h(p)}` for every `p`; first failing point.
    pub gen_continuity_failure: Option<usize>,
    /// `h[U_p]` open for every `p`; first failing point.
    pub gen_openness_failure: Option<usize>,
    /// For every basic `V` at `h(p)` some basic `U` at `p` has `h[U] ⊆ V`.
    pub base_continuity_failure: Option<MapFailure>,
    /// For every basic `U` at `p` some basic `V` at `h(p)` has `V ⊆ h[U]`.
    pub base_openness_failure: Option<MapFailure>,
}

impl MapReport {
    pub fn gen_homeomorphism(&self) -> bool {
        self.bijective && self.gen_continuity_failure.is_none() && self.gen_openness_failure.is_none()
    }

    pub fn base_homeomorphism(&self) -> bool {
        self.bijective
            && self.base_continuity_failure.is_none()
            && self.base_openness_failure.is_none()
    }
}

/// Evaluates `map` (point index in `src` to point index in `dst`).
pub fn check_map<P, L, Q, M>(
    src: &FiniteTopology<P, L>,
    dst: &FiniteTopology<Q, M>,
    map: &[usize],
) -> MapReport
where
    P: Clone,
    L: Clone,
    Q: Clone,
    M: Clone,
{
    let n = src.point_count();
    let t = dst.point_count();
    assert_eq!(map.len(), n);
    let mut hit = PointSet::with_capacity(t);
    let mut injective = true;
    for &q in map {
        if hit.put(q) {
            injective = false;
        }
    }
    let bijective = injective && n == t;

    let image = |s: &PointSet| FiniteTopology::<P, L>::image(s, map, t);
    let mut gen_continuity_failure = None;
    let mut gen_openness_failure = None;
    for (p, &q) in map.iter().enumerate() {
        let img = image(src.minimal_nbhd(p));
        if gen_continuity_failure.is_none() && !img.is_subset(dst.minimal_nbhd(q)) {
            gen_continuity_failure = Some(p);
        }
        if gen_openness_failure.is_none() && !dst.is_open(&img) {
            gen_openness_failure = Some(p);
        }
    }

    let src_images: Vec<PointSet> = src.base().iter().map(|b| image(&b.members)).collect();
    let mut base_continuity_failure = None;
    let mut base_openness_failure = None;
    'cont: for (p, &q) in map.iter().enumerate() {
        for &v in dst.local_base(q) {
            let target = &dst.base()[v].members;
            if !src.local_base(p).iter().any(|&u| src_images[u].is_subset(target)) {
                base_continuity_failure = Some(MapFailure { point: p, base: v });
                break 'cont;
            }
        }
    }
    'open: for (p, &q) in map.iter().enumerate() {
        for &u in src.local_base(p) {
            if !dst
                .local_base(q)
                .iter()
                .any(|&v| dst.base()[v].members.is_subset(&src_images[u]))
            {
                base_openness_failure = Some(MapFailure { point: p, base: u });
                break 'open;
            }
        }
    }
    MapReport {
        bijective,
        gen_continuity_failure,
        gen_openness_failure,
        base_continuity_failure,
        base_openness_failure,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Sierpinski space: {0} open, whole space open.
    fn sierpinski() -> FiniteTopology<u8, &'static str> {
        let base = vec![
            BaseSet { label: "a", members: point_set(2, [0]) },
            BaseSet { label: "all", members: point_set(2, [0, 1]) },
        ];
        FiniteTopology::from_local_bases(vec![0, 1], base, vec![vec![0], vec![1]]).unwrap()
    }

    #[test]
    fn sierpinski_opens() {
        let s = sierpinski();
        assert_eq!(s.open_masks().unwrap(), vec![0b00, 0b01, 0b11]);
        assert!(s.verify_axioms().is_empty());
        assert_eq!(s.isolated_points(), vec![0]);
        assert!(s.is_base_isolated(0) && !s.is_base_isolated(1));
        assert_eq!(s.base_hausdorff_failure(), Some((0, 1)));
    }

    #[test]
    fn swap_is_not_continuous_on_sierpinski() {
        let s = sierpinski();
        let r = check_map(&s, &s, &[1, 0]);
        assert!(r.bijective);
        assert!(!r.gen_homeomorphism());
        assert!(check_map(&s, &s, &[0, 1]).gen_homeomorphism());
    }

    #[test]
    fn local_base_must_contain_point() {
        let base = vec![BaseSet { label: (), members: point_set(2, [0]) }];
        let err = FiniteTopology::from_local_bases(vec![0, 1], base, vec![vec![0], vec![0]]);
        assert_eq!(err.unwrap_err(), TopologyError::LocalBaseMissesPoint { point: 1, base: 0 });
    }
}
