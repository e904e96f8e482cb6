//! The space `S_A(X, Z)`: points are the members of `A`, and the basic
//! neighbourhoods of a point `x` are `B_{x,z} = {y ∈ A : x ⊆ y, y ∩ z = ∅}`
//! for `z ∈ Z` disjoint from `x`.

use serde::Serialize;
use thiserror::Error;

use crate::core_sets::{FamilyFlags, FamilyKind, FamilySpec, SetError, SubsetMask};
use crate::topology::{check_map, point_set, BaseSet, FiniteTopology, MapReport, PointSet};

/// Largest point family materialized.
pub const MAX_POINTS: usize = 1 << 16;

/// Largest `points × basic sets` product materialized.
pub const MAX_BASE_BITS: u128 = 1 << 30;

/// Ground sizes up to this also get the ambient powerset space in the battery.
pub const MAX_AMBIENT_GROUND: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error(transparent)]
    Set(#[from] SetError),
    #[error("point family A is empty")]
    EmptyPointFamily,
    #[error("Z must contain the empty set")]
    EmptyNotInZ,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
}

/// `(m, A, Z)` with cached closure flags.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceSpec {
    a: FamilySpec,
    z: FamilySpec,
    a_flags: FamilyFlags,
    z_flags: FamilyFlags,
}

impl SpaceSpec {
    pub fn new(a: FamilySpec, z: FamilySpec) -> Result<Self, TopologyError> {
        if a.ground_size() != z.ground_size() {
            return Err(SetError::GroundMismatch(a.ground_size(), z.ground_size()).into());
        }
        if a.is_empty() {
            return Err(TopologyError::EmptyPointFamily);
        }
        if !z.contains(&SubsetMask::empty(z.ground_size())) {
            return Err(TopologyError::EmptyNotInZ);
        }
        let a_flags = a.flags();
        let z_flags = z.flags();
        Ok(SpaceSpec {
            a,
            z,
            a_flags,
            z_flags,
        })
    }

    pub fn ground_size(&self) -> usize {
        self.a.ground_size()
    }

    pub fn a(&self) -> &FamilySpec {
        &self.a
    }

    pub fn z(&self) -> &FamilySpec {
        &self.z
    }

    pub fn a_flags(&self) -> FamilyFlags {
        self.a_flags
    }

    pub fn z_flags(&self) -> FamilyFlags {
        self.z_flags
    }

    fn a_is_powerset(&self) -> bool {
        self.a.len() == 1u128 << self.ground_size()
    }

    fn z_is_powerset(&self) -> bool {
        self.z.len() == 1u128 << self.ground_size()
    }

    fn a_has_empty_and_singletons(&self) -> bool {
        self.a_flags.contains_empty && self.a_flags.contains_singletons
    }

    /// `A ⊆ Z`.
    pub fn a_within_z(&self) -> Result<bool, TopologyError> {
        Ok(self.a.members()?.iter().all(|x| self.z.contains(x)))
    }
}

/// `B_{x,z}`: the realized points `{y ∈ A : x ⊆ y, y ∩ z = ∅}`.
pub fn basic_nbhd(
    spec: &SpaceSpec,
    x: &SubsetMask,
    z: &SubsetMask,
) -> Result<Vec<SubsetMask>, TopologyError> {
    if !spec.a.contains(x) {
        return Err(TopologyError::Precondition(format!("x = {x} is not in A")));
    }
    if !spec.z.contains(z) {
        return Err(TopologyError::Precondition(format!("z = {z} is not in Z")));
    }
    if x.intersects(z) {
        return Err(TopologyError::Precondition(format!("x = {x} meets z = {z}")));
    }
    let outside = z.complement();
    Ok(spec
        .a
        .members_within(outside)?
        .into_iter()
        .filter(|y| x.is_subset_of(y))
        .collect())
}

/// Label of a realized basic set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BasicNbhd {
    pub x: SubsetMask,
    pub z: SubsetMask,
}

pub type SpaceTopology = FiniteTopology<SubsetMask, BasicNbhd>;

/// A generated space together with the literal-predicate comparison.
#[derive(Clone, Debug)]
pub struct Space {
    spec: SpaceSpec,
    topology: SpaceTopology,
    /// A point whose minimal neighbourhood is open in the generated topology
    /// but not a designated basic neighbourhood of it; `None` iff the two
    /// families coincide.
    def_gen_witness: Option<usize>,
}

impl Space {
    pub fn spec(&self) -> &SpaceSpec {
        &self.spec
    }

    pub fn topology(&self) -> &SpaceTopology {
        &self.topology
    }

    pub fn def_equals_gen(&self) -> bool {
        self.def_gen_witness.is_none()
    }

    pub fn def_gen_witness(&self) -> Option<SubsetMask> {
        self.def_gen_witness.map(|p| self.topology.points()[p])
    }

    pub fn points(&self) -> &[SubsetMask] {
        self.topology.points()
    }

    pub fn index_of(&self, x: &SubsetMask) -> Option<usize> {
        self.topology.points().binary_search(x).ok()
    }

    pub fn point_set_of(&self, xs: &[SubsetMask]) -> Option<PointSet> {
        let idx: Option<Vec<usize>> = xs.iter().map(|x| self.index_of(x)).collect();
        Some(point_set(self.topology.point_count(), idx?))
    }

    pub fn masks_of(&self, set: &PointSet) -> Vec<SubsetMask> {
        set.ones().map(|p| self.topology.points()[p]).collect()
    }

    /// Base indices of the designated neighbourhoods `B_{x,z}`.
    pub fn local_labels(&self, p: usize) -> impl Iterator<Item = &BasicNbhd> {
        self.topology
            .local_base(p)
            .iter()
            .map(move |&b| &self.topology.base()[b].label)
    }
}

/// Materializes `S_A(X, Z)`.
pub fn generate_topology(spec: &SpaceSpec) -> Result<Space, TopologyError> {
    let n = spec.a.len();
    if n > MAX_POINTS as u128 {
        return Err(TopologyError::TooLarge(format!("{n} points")));
    }
    let points = spec.a.members()?;
    let n = points.len();
    let m = spec.ground_size();

    let mut zs_per_point = Vec::with_capacity(n);
    let mut total: u128 = 0;
    for x in &points {
        let zs = spec.z.z_of(x)?;
        total += zs.len() as u128;
        zs_per_point.push(zs);
    }
    if total * n as u128 > MAX_BASE_BITS {
        return Err(TopologyError::TooLarge(format!(
            "{total} basic neighbourhoods over {n} points"
        )));
    }

    let mut base = Vec::with_capacity(total as usize);
    let mut local = Vec::with_capacity(n);
    for (i, x) in points.iter().enumerate() {
        let mut mine = Vec::with_capacity(zs_per_point[i].len());
        for z in &zs_per_point[i] {
            let members = point_set(
                n,
                points
                    .iter()
                    .enumerate()
                    .filter(|(_, y)| x.is_subset_of(y) && !y.intersects(z))
                    .map(|(j, _)| j),
            );
            mine.push(base.len());
            base.push(BaseSet {
                label: BasicNbhd { x: *x, z: *z },
                members,
            });
        }
        local.push(mine);
    }
    debug_assert!(points.iter().all(|p| p.ground_size() == m));
    let topology = FiniteTopology::from_local_bases(points, base, local)
        .expect("every B_{x,z} contains x");
    let def_gen_witness = topology.def_equals_gen().err();
    Ok(Space {
        spec: spec.clone(),
        topology,
        def_gen_witness,
    })
}

/// Isolated points of the generated topology next to the candidate set
/// `{x ∈ A : X∖x ∈ Z}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsolatedReport {
    pub isolated: Vec<SubsetMask>,
    pub candidates: Vec<SubsetMask>,
    pub maximal: Vec<SubsetMask>,
    /// Candidates and maximal members are all isolated.
    pub inclusions_hold: bool,
    /// A is union-closed and contains ∅ and every singleton, and Z is union-closed.
    pub equality_applies: bool,
    pub coincide: bool,
}

pub fn isolated_points(space: &Space) -> IsolatedReport {
    let t = space.topology();
    let spec = space.spec();
    let isolated: Vec<SubsetMask> = t.isolated_points().iter().map(|&p| t.points()[p]).collect();
    let candidates: Vec<SubsetMask> = t
        .points()
        .iter()
        .filter(|x| spec.z.contains(&x.complement()))
        .copied()
        .collect();
    let maximal = maximal_members(t.points());
    let inclusions_hold = candidates
        .iter()
        .chain(&maximal)
        .all(|x| isolated.binary_search(x).is_ok());
    let equality_applies = spec.a_flags.union_closed
        && spec.a_has_empty_and_singletons()
        && spec.z_flags.union_closed;
    IsolatedReport {
        coincide: isolated == candidates,
        isolated,
        candidates,
        maximal,
        inclusions_hold,
        equality_applies,
    }
}

fn maximal_members(points: &[SubsetMask]) -> Vec<SubsetMask> {
    points
        .iter()
        .filter(|x| !points.iter().any(|y| y != *x && x.is_subset_of(y)))
        .copied()
        .collect()
}

/// One hypothesis-conditioned implication of the battery.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BatteryItem {
    pub name: &'static str,
    pub statement: &'static str,
    pub hypotheses_hold: bool,
    pub conclusion_holds: bool,
    pub witness: Option<String>,
}

impl BatteryItem {
    pub fn violated(&self) -> bool {
        self.hypotheses_hold && !self.conclusion_holds
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub items: Vec<BatteryItem>,
    pub point_count: usize,
    pub base_isolated_count: usize,
}

impl StructureReport {
    pub fn violations(&self) -> Vec<&BatteryItem> {
        self.items.iter().filter(|i| i.violated()).collect()
    }

    pub fn item(&self, name: &str) -> Option<&BatteryItem> {
        self.items.iter().find(|i| i.name == name)
    }

    /// Some points are basically isolated and others are not, so no
    /// autohomeomorphism can move one kind to the other.
    pub fn mixed_isolation(&self) -> bool {
        self.base_isolated_count > 0 && self.base_isolated_count < self.point_count
    }
}

struct Battery {
    items: Vec<BatteryItem>,
}

impl Battery {
    fn push(
        &mut self,
        name: &'static str,
        statement: &'static str,
        hypotheses_hold: bool,
        outcome: Result<(), String>,
    ) {
        let (conclusion_holds, witness) = match outcome {
            Ok(()) => (true, None),
            Err(w) => (false, Some(w)),
        };
        self.items.push(BatteryItem {
            name,
            statement,
            hypotheses_hold,
            conclusion_holds,
            witness,
        });
    }

    fn skip(&mut self, name: &'static str, statement: &'static str, why: &str) {
        self.items.push(BatteryItem {
            name,
            statement,
            hypotheses_hold: false,
            conclusion_holds: false,
            witness: Some(format!("not evaluated: {why}")),
        });
    }
}

fn iff(label: &str, left: bool, right: bool) -> Result<(), String> {
    if left == right {
        Ok(())
    } else {
        Err(format!("{label}: left side {left}, right side {right}"))
    }
}

fn first_failure<T>(items: impl IntoIterator<Item = T>, ok: impl Fn(&T) -> Result<(), String>) -> Result<(), String> {
    for item in items {
        ok(&item)?;
    }
    Ok(())
}

/// Evaluates the structural implications on `space`.
pub fn structure_battery(space: &Space) -> Result<StructureReport, TopologyError> {
    let spec = space.spec();
    let t = space.topology();
    let pts = t.points();
    let n = t.point_count();
    let m = spec.ground_size();
    let af = spec.a_flags;
    let zf = spec.z_flags;
    let ground = SubsetMask::full(m);
    let empty = SubsetMask::empty(m);
    let a_within_z = spec.a_within_z()?;
    let ground_in_z = spec.z.contains(&ground);
    let base_iso: Vec<bool> = (0..n).map(|p| t.is_base_isolated(p)).collect();
    let empty_idx = space.index_of(&empty);
    let mut b = Battery { items: Vec::new() };

    b.push(
        "relative_base",
        "B^A_{x,z} = A ∩ B^P_{x,z}",
        true,
        first_failure(t.base(), |bs| {
            let expected = point_set(
                n,
                (0..n).filter(|&j| bs.label.x.is_subset_of(&pts[j]) && !pts[j].intersects(&bs.label.z)),
            );
            if expected == bs.members {
                Ok(())
            } else {
                Err(format!("B_{{{},{}}}", bs.label.x, bs.label.z))
            }
        }),
    );

    let axioms = t.verify_axioms();
    b.push(
        "generated_topology",
        "the base generates a topology",
        true,
        if axioms.is_empty() { Ok(()) } else { Err(axioms.join("; ")) },
    );

    b.push(
        "def_equals_gen",
        "Z union-closed ⇒ the neighbourhood predicate defines exactly the generated topology",
        zf.union_closed,
        match space.def_gen_witness() {
            None => Ok(()),
            Some(x) => Err(format!("U_{x} is open but not a basic neighbourhood of {x}")),
        },
    );

    let cover = spec.a.union_of_members();
    let singletons_of_cover = cover.elements().all(|e| spec.z.contains(&SubsetMask::singleton(m, e)));
    b.push(
        "base_clopen",
        "{t} ∈ Z for every t ∈ ⋃A ⇒ every basic set is clopen",
        singletons_of_cover,
        first_failure(t.base(), |bs| {
            if t.is_clopen(&bs.members) {
                Ok(())
            } else {
                Err(format!("B_{{{},{}}} is not closed", bs.label.x, bs.label.z))
            }
        }),
    );

    b.push(
        "local_base",
        "Z union-closed ⇒ B_Z(x) is a neighbourhood base at x",
        zf.union_closed,
        first_failure(0..n, |&p| {
            if t.local_base(p).iter().any(|&i| t.base()[i].members.is_subset(t.minimal_nbhd(p))) {
                Ok(())
            } else {
                Err(format!("no basic set of {} inside U_{}", pts[p], pts[p]))
            }
        }),
    );

    b.push(
        "base_convex",
        "basic sets are ⊆-convex",
        true,
        first_failure(t.base(), |bs| {
            for y1 in bs.members.ones() {
                for y2 in bs.members.ones() {
                    if !pts[y1].is_subset_of(&pts[y2]) {
                        continue;
                    }
                    for w in 0..n {
                        if pts[y1].is_subset_of(&pts[w])
                            && pts[w].is_subset_of(&pts[y2])
                            && !bs.members.contains(w)
                        {
                            return Err(format!(
                                "{} lies between {} and {} but not in B_{{{},{}}}",
                                pts[w], pts[y1], pts[y2], bs.label.x, bs.label.z
                            ));
                        }
                    }
                }
            }
            Ok(())
        }),
    );

    let ambient = if m <= MAX_AMBIENT_GROUND && !spec.a_is_powerset() {
        Some(generate_topology(&SpaceSpec::new(FamilySpec::powerset(m), spec.z.clone())?)?)
    } else {
        None
    };
    let ambient_ref: Option<&Space> = if spec.a_is_powerset() { Some(space) } else { ambient.as_ref() };

    match ambient_ref {
        Some(p) => {
            let idx: Vec<usize> = pts.iter().map(|x| p.index_of(x).expect("A ⊆ P(X)")).collect();
            let sub = p.topology().subspace(&idx);
            b.push(
                "subspace_of_powerset",
                "S_A is a subspace of S_P",
                true,
                if sub.same_open_sets(t) {
                    Ok(())
                } else {
                    let q = (0..n).find(|&q| sub.minimal_nbhd(q) != t.minimal_nbhd(q)).unwrap_or(0);
                    Err(format!("minimal neighbourhoods of {} differ", pts[q]))
                },
            );
        }
        None => b.skip(
            "subspace_of_powerset",
            "S_A is a subspace of S_P",
            "ground set too large for the ambient powerset space",
        ),
    }

    let all_clopen = t.base().iter().all(|bs| t.is_clopen(&bs.members));
    b.push(
        "zero_dimensional_hausdorff",
        "singletons in Z ⇒ clopen base and disjoint basic neighbourhoods for distinct points",
        zf.contains_singletons,
        if !all_clopen {
            Err("some basic set is not clopen".into())
        } else {
            match t.base_hausdorff_failure() {
                None => Ok(()),
                Some((p, q)) => Err(format!("{} and {} have no disjoint basic neighbourhoods", pts[p], pts[q])),
            }
        },
    );

    let iso = isolated_points(space);
    b.push(
        "isolated_inclusions",
        "X∖x ∈ Z or x maximal ⇒ x is isolated",
        true,
        first_failure(iso.candidates.iter().chain(&iso.maximal), |x| {
            let p = space.index_of(x).expect("point");
            if base_iso[p] {
                Ok(())
            } else {
                Err(format!("{x} is not isolated"))
            }
        }),
    );

    b.push(
        "isolated_exact",
        "A union-closed with ∅ and singletons, Z union-closed ⇒ isolated points are {x ∈ A : X∖x ∈ Z}",
        iso.equality_applies,
        if iso.coincide {
            Ok(())
        } else {
            Err(format!(
                "isolated {:?} vs candidates {:?}",
                iso.isolated.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                iso.candidates.iter().map(|x| x.to_string()).collect::<Vec<_>>()
            ))
        },
    );

    let empty_iso = empty_idx.map(|p| base_iso[p]).unwrap_or(false);
    b.push(
        "empty_isolated_iff_ground_small",
        "∅ and singletons in A ⇒ (∅ isolated ⇔ X ∈ Z)",
        spec.a_has_empty_and_singletons(),
        iff("∅ isolated ⇔ X ∈ Z", empty_iso, ground_in_z),
    );

    let any_iso = base_iso.iter().any(|&v| v);
    b.push(
        "empty_isolated_if_any",
        "∅ and singletons in A, A union-closed, A ⊆ Z, some isolated point ⇒ ∅ isolated",
        spec.a_has_empty_and_singletons() && af.union_closed && a_within_z && any_iso,
        if empty_iso { Ok(()) } else { Err("∅ is not isolated".into()) },
    );

    b.push(
        "isolation_descends",
        "A an ideal, A ⊆ Z, Z union-closed, a point of B_{x,∅} isolated ⇒ every y ⊆ x in A isolated",
        af.is_ideal() && a_within_z && zf.union_closed,
        first_failure(0..n, |&p| {
            let up = (0..n).filter(|&q| pts[p].is_subset_of(&pts[q]));
            if !up.into_iter().any(|q| base_iso[q]) {
                return Ok(());
            }
            match (0..n).find(|&q| pts[q].is_subset_of(&pts[p]) && !base_iso[q]) {
                None => Ok(()),
                Some(q) => Err(format!("{} is not isolated below {}", pts[q], pts[p])),
            }
        }),
    );

    let complements_in_a = t.base().iter().all(|bs| spec.a.contains(&bs.label.z.complement()));
    b.push(
        "iso_dense",
        "X∖z ∈ A for every z ∈ Z(x), x ∈ A ⇒ every basic set contains an isolated point",
        complements_in_a,
        first_failure(t.base(), |bs| {
            if bs.members.ones().any(|q| base_iso[q]) {
                Ok(())
            } else {
                Err(format!("B_{{{},{}}} has no isolated point", bs.label.x, bs.label.z))
            }
        }),
    );

    let discrete = t.is_base_discrete();
    b.push(
        "powerset_discrete_iff_z_full",
        "A = P(X) ⇒ (discrete ⇔ Z = P(X))",
        spec.a_is_powerset(),
        iff("discrete ⇔ Z = P(X)", discrete, spec.z_is_powerset()),
    );

    b.push(
        "discrete_iff_ground_small",
        "Z an ideal, ∅ and singletons in A ⇒ (discrete ⇔ X ∈ Z)",
        zf.is_ideal() && spec.a_has_empty_and_singletons(),
        iff("discrete ⇔ X ∈ Z", discrete, ground_in_z),
    );

    let crowded_hyp = af.union_closed && spec.a_has_empty_and_singletons() && a_within_z && zf.union_closed;
    let crowded = t.is_base_crowded();
    b.push(
        "crowded_iff_ground_large",
        "A union-closed, ∅ and singletons ⊆ A ⊆ Z, Z union-closed ⇒ (crowded ⇔ X ∉ Z)",
        crowded_hyp,
        iff("crowded ⇔ X ∉ Z", crowded, !ground_in_z),
    );

    match ambient_ref {
        Some(p) => {
            let pt = p.topology();
            let p_crowded = pt.is_base_crowded();
            let p_empty_iso = p.index_of(&empty).map(|i| pt.is_base_isolated(i)).unwrap_or(false);
            b.push(
                "crowded_transfer",
                "same hypotheses ⇒ S_A crowded ⇔ S_P crowded ⇔ ∅ not isolated in S_P",
                crowded_hyp,
                iff("S_A crowded ⇔ S_P crowded", crowded, p_crowded)
                    .and(iff("S_P crowded ⇔ ∅ not isolated in S_P", p_crowded, !p_empty_iso)),
            );
        }
        None => b.skip(
            "crowded_transfer",
            "same hypotheses ⇒ S_A crowded ⇔ S_P crowded ⇔ ∅ not isolated in S_P",
            "ground set too large for the ambient powerset space",
        ),
    }

    let scaled = match (spec.a.kind(), spec.z.kind()) {
        (FamilyKind::CardAtMost(ta), FamilyKind::CardAtMost(s)) if *ta >= 1 => Some(*s),
        _ => None,
    };
    b.push(
        "scaled_cardinality_dichotomy",
        "A = [X]^{≤t} with t ≥ 1, Z = [X]^{≤s} ⇒ (∅ isolated ⇔ s ≥ m ⇔ discrete)",
        scaled.is_some(),
        match scaled {
            Some(s) => iff("∅ isolated ⇔ s ≥ m", empty_iso, s >= m)
                .and(iff("discrete ⇔ s ≥ m", discrete, s >= m)),
            None => Ok(()),
        },
    );

    let p_points: Vec<bool> = (0..n).map(|p| t.is_base_p_point(p)).collect();
    let empty_p = empty_idx.map(|p| p_points[p]).unwrap_or(false);
    b.push(
        "p_point_forces_union",
        "∅ and singletons in A, Z downward-closed, ∅ a P-point ⇒ ⋃Z ∈ Z",
        spec.a_has_empty_and_singletons() && zf.downward_closed && empty_p,
        if spec.z.contains(&spec.z.union_of_members()) {
            Ok(())
        } else {
            Err(format!("⋃Z = {} is not in Z", spec.z.union_of_members()))
        },
    );

    let all_p = p_points.iter().all(|&v| v);
    let some_p = p_points.iter().any(|&v| v);
    b.push(
        "p_point_uniform",
        "A, Z ideals with A ⊆ Z ⇒ (every point P ⇔ some point P ⇔ ∅ P)",
        af.is_ideal() && zf.is_ideal() && a_within_z,
        iff("every ⇔ some", all_p, some_p).and(iff("some ⇔ ∅", some_p, empty_p)),
    );

    b.push(
        "powerset_homogeneity_obstruction",
        "A = P(X) ⇒ (isolation is all-or-nothing ⇔ Z = P(X))",
        spec.a_is_powerset(),
        {
            let count = base_iso.iter().filter(|&&v| v).count();
            iff("all-or-nothing ⇔ Z = P(X)", count == 0 || count == n, spec.z_is_powerset())
        },
    );

    Ok(StructureReport {
        items: b.items,
        point_count: n,
        base_isolated_count: base_iso.iter().filter(|&&v| v).count(),
    })
}

/// The verified involution swapping `B_{∅,x0}` and `B_{x0,∅}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomogeneityReport {
    pub x0: SubsetMask,
    /// `(y, h(y))` for every point, in point order.
    pub map: Vec<(SubsetMask, SubsetMask)>,
    pub bijective: bool,
    pub involution: bool,
    pub sends_empty_to_x0: bool,
    /// `h` maps opens to opens and preimages of opens are open.
    pub open_both_ways: bool,
    /// Pointwise basic-neighbourhood continuity and openness.
    pub base_homeomorphism: bool,
}

impl HomogeneityReport {
    pub fn verified(&self) -> bool {
        self.bijective
            && self.involution
            && self.sends_empty_to_x0
            && self.open_both_ways
            && self.base_homeomorphism
    }
}

pub fn homogeneity_homeo(space: &Space, x0: &SubsetMask) -> Result<HomogeneityReport, TopologyError> {
    let spec = space.spec();
    let m = spec.ground_size();
    let empty = SubsetMask::empty(m);
    let af = spec.a_flags;
    let zf = spec.z_flags;
    let missing = [
        (spec.a.contains(&empty), "∅ ∈ A"),
        (spec.a.contains(x0), "x0 ∈ A"),
        (!x0.is_empty(), "x0 ≠ ∅"),
        (af.downward_closed, "A downward-closed"),
        (af.union_closed, "A union-closed"),
        (zf.downward_closed, "Z downward-closed"),
        (zf.union_closed, "Z union-closed"),
        (spec.a_within_z()?, "A ⊆ Z"),
    ];
    if let Some((_, name)) = missing.iter().find(|(ok, _)| !ok) {
        return Err(TopologyError::Hypothesis(name.to_string()));
    }

    let h = |y: &SubsetMask| -> SubsetMask {
        if !y.intersects(x0) {
            y.union(x0)
        } else if x0.is_subset_of(y) {
            y.difference(x0)
        } else {
            *y
        }
    };
    let t = space.topology();
    let mut map = Vec::with_capacity(t.point_count());
    for y in t.points() {
        let img = h(y);
        let j = space
            .index_of(&img)
            .ok_or_else(|| TopologyError::Precondition(format!("h({y}) = {img} is not in A")))?;
        map.push(j);
    }
    let r: MapReport = check_map(t, t, &map);
    let involution = (0..map.len()).all(|p| map[map[p]] == p);
    let e = space.index_of(&empty).expect("∅ ∈ A");
    Ok(HomogeneityReport {
        x0: *x0,
        map: t.points().iter().zip(&map).map(|(y, &j)| (*y, t.points()[j])).collect(),
        bijective: r.bijective,
        involution,
        sends_empty_to_x0: t.points()[map[e]] == *x0,
        open_both_ways: r.gen_homeomorphism(),
        base_homeomorphism: r.base_homeomorphism(),
    })
}

/// A restricted spec and whether its topology matches the induced subspace.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub spec: SpaceSpec,
    pub space: Space,
    pub matches_subspace: bool,
}

/// `A_Y = {x ∩ Y}`, `Z_Y = {z ∩ Y}`, checked against the subspace of the
/// parent on `A_Y`.
pub fn restrict_subspace(space: &Space, y: &SubsetMask) -> Result<Restriction, TopologyError> {
    let spec = space.spec();
    let m = spec.ground_size();
    if y.ground_size() != m {
        return Err(SetError::GroundMismatch(m, y.ground_size()).into());
    }
    let pts = space.points();
    for x in pts {
        if !spec.a.contains(&x.intersection(y)) {
            return Err(TopologyError::Precondition(format!(
                "x = {x} has x ∩ Y = {} outside A",
                x.intersection(y)
            )));
        }
    }
    let a_y = FamilySpec::explicit(m, pts.iter().map(|x| x.intersection(y)).collect())?;
    let z_y = FamilySpec::explicit(m, spec.z.members()?.iter().map(|z| z.intersection(y)).collect())?;
    let rspec = SpaceSpec::new(a_y, z_y)?;
    let rspace = generate_topology(&rspec)?;
    let idx: Vec<usize> = rspace
        .points()
        .iter()
        .map(|x| space.index_of(x).expect("A_Y ⊆ A"))
        .collect();
    let sub = space.topology().subspace(&idx);
    Ok(Restriction {
        matches_subspace: sub.same_open_sets(rspace.topology()),
        spec: rspec,
        space: rspace,
    })
}

/// `Z = [X]^{≤t} ∪ {(X∖c0) ∪ c : c ∈ [X]^{≤t}}`: closed under the unions
/// the infinite version needs, yet not an ideal.
pub fn cofinite_shift_family(m: usize, c0: &SubsetMask, t: usize) -> Result<FamilySpec, SetError> {
    let small = FamilySpec::card_at_most(m, t)?.members()?;
    let shifted: Vec<SubsetMask> = small.iter().map(|c| c0.complement().union(c)).collect();
    FamilySpec::explicit(m, small.into_iter().chain(shifted).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(m: usize, e: &[usize]) -> SubsetMask {
        SubsetMask::of(m, e)
    }

    fn space(a: FamilySpec, z: FamilySpec) -> Space {
        generate_topology(&SpaceSpec::new(a, z).unwrap()).unwrap()
    }

    #[test]
    fn basic_nbhd_examples() {
        let spec = SpaceSpec::new(FamilySpec::card_at_most(3, 1).unwrap(), FamilySpec::card_at_most(3, 1).unwrap()).unwrap();
        assert_eq!(basic_nbhd(&spec, &s(3, &[]), &s(3, &[2])).unwrap(), vec![s(3, &[]), s(3, &[0]), s(3, &[1])]);
        let p = SpaceSpec::new(FamilySpec::powerset(2), FamilySpec::powerset(2)).unwrap();
        assert_eq!(basic_nbhd(&p, &s(2, &[0]), &s(2, &[1])).unwrap(), vec![s(2, &[0])]);
        let err = basic_nbhd(&spec, &s(3, &[0]), &s(3, &[0])).unwrap_err();
        assert!(err.to_string().contains("meets"));
    }

    #[test]
    fn z_without_empty_rejected() {
        let z = FamilySpec::explicit(2, vec![s(2, &[0])]).unwrap();
        assert_eq!(SpaceSpec::new(FamilySpec::powerset(2), z).unwrap_err(), TopologyError::EmptyNotInZ);
    }

    #[test]
    fn one_point_space() {
        let sp = space(
            FamilySpec::explicit(3, vec![s(3, &[])]).unwrap(),
            FamilySpec::explicit(3, vec![s(3, &[])]).unwrap(),
        );
        assert_eq!(sp.topology().open_masks().unwrap(), vec![0, 1]);
    }

    #[test]
    fn isolated_example() {
        let sp = space(FamilySpec::powerset(3), FamilySpec::powerset_of(s(3, &[0, 1])));
        let r = isolated_points(&sp);
        assert_eq!(r.isolated, vec![s(3, &[2]), s(3, &[0, 2]), s(3, &[1, 2]), s(3, &[0, 1, 2])]);
        assert!(r.coincide && r.equality_applies && r.inclusions_hold);
    }

    #[test]
    fn isolated_equality_needs_union_closed_z() {
        let z = FamilySpec::card_at_most(2, 1).unwrap();
        let sp = space(FamilySpec::powerset(2), z);
        let r = isolated_points(&sp);
        assert!(!r.equality_applies);
        assert!(!r.coincide);
        assert!(r.isolated.contains(&s(2, &[])));
    }

    #[test]
    fn def_strictly_smaller_without_union_closure() {
        let sp = space(FamilySpec::powerset(2), FamilySpec::card_at_most(2, 1).unwrap());
        assert_eq!(sp.def_gen_witness(), Some(s(2, &[])));
        let sp = space(FamilySpec::powerset(3), FamilySpec::powerset_of(s(3, &[0, 2])));
        assert!(sp.def_equals_gen());
    }

    #[test]
    fn homogeneity_example() {
        let p01 = FamilySpec::powerset_of(s(3, &[0, 1]));
        let sp = space(p01.clone(), p01);
        let r = homogeneity_homeo(&sp, &s(3, &[0])).unwrap();
        assert!(r.verified());
        assert!(r.map.contains(&(s(3, &[]), s(3, &[0]))));
        assert!(r.map.contains(&(s(3, &[1]), s(3, &[0, 1]))));
    }

    #[test]
    fn homogeneity_refuses_without_flags() {
        let sp = space(FamilySpec::powerset(2), FamilySpec::card_at_most(2, 1).unwrap());
        let err = homogeneity_homeo(&sp, &s(2, &[0])).unwrap_err();
        assert_eq!(err, TopologyError::Hypothesis("Z union-closed".into()));
    }

    #[test]
    fn restriction_example() {
        let c2 = FamilySpec::card_at_most(4, 2).unwrap();
        let sp = space(c2.clone(), c2);
        let r = restrict_subspace(&sp, &s(4, &[0, 1, 2])).unwrap();
        assert!(r.matches_subspace);
        let expect: Vec<_> = FamilySpec::card_at_most(4, 2)
            .unwrap()
            .members_within(s(4, &[0, 1, 2]))
            .unwrap();
        assert_eq!(r.space.points(), &expect[..]);
    }

    #[test]
    fn restriction_precondition_names_member() {
        let a = FamilySpec::explicit(3, vec![s(3, &[]), s(3, &[0, 1])]).unwrap();
        let sp = space(a, FamilySpec::powerset(3));
        let err = restrict_subspace(&sp, &s(3, &[0])).unwrap_err();
        assert!(err.to_string().contains("{0,1}"));
    }

    #[test]
    fn cofinite_shift_family_is_mixed() {
        let z = cofinite_shift_family(4, &s(4, &[0]), 1).unwrap();
        assert!(!z.flags().is_ideal());
        let sp = space(FamilySpec::card_at_most(4, 2).unwrap(), z);
        let rep = structure_battery(&sp).unwrap();
        assert!(rep.violations().is_empty(), "{:?}", rep.violations());
        assert!(rep.mixed_isolation());
        let t = sp.topology();
        assert!(t.is_base_isolated(sp.index_of(&s(4, &[0])).unwrap()));
        assert!(!t.is_base_isolated(sp.index_of(&s(4, &[1])).unwrap()));
    }

    #[test]
    fn battery_clean_on_discrete() {
        let sp = space(FamilySpec::powerset(3), FamilySpec::powerset(3));
        let rep = structure_battery(&sp).unwrap();
        assert!(rep.violations().is_empty());
        assert!(sp.topology().is_base_discrete());
    }
}
