//! The cube `2^X[Z]`: all functions `X → 2`, with the cylinders `[f↾z]`
//! for non-empty `z ∈ Z` as base.
//!
//! A function is stored as its support `f⁻¹[{1}]`, so the indicator map
//! `x ↦ χ_x` is the identity on bit patterns and point `i` of a
//! materialized cube is the function whose support has bits `i`.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::base_topology::{generate_topology, Space, SpaceSpec, TopologyError};
use crate::core_sets::{FamilySpec, SetError, SubsetMask};
use crate::topology::{check_map, point_set, BaseSet, FiniteTopology, MapFailure, MapReport};

/// Largest ground set for which the cube is materialized.
pub const MAX_MATERIALIZED_GROUND: usize = 12;

/// Largest `points × cylinders` product materialized.
pub const MAX_CYLINDER_BITS: u128 = 1 << 30;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CantorError {
    #[error(transparent)]
    Set(#[from] SetError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error("ground size {m} is too large to materialize (limit {MAX_MATERIALIZED_GROUND}, {cylinders} cylinders)")]
    TooLarge { m: usize, cylinders: u128 },
    #[error("the flip pattern must have at least one 1-bit")]
    ZeroFlip,
}

/// A function `X → 2`, stored as its support.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BitFunction(pub SubsetMask);

impl BitFunction {
    pub fn indicator(x: &SubsetMask) -> Self {
        BitFunction(*x)
    }

    pub fn zero(m: usize) -> Self {
        BitFunction(SubsetMask::empty(m))
    }

    pub fn value(&self, t: usize) -> u8 {
        self.0.contains(t) as u8
    }

    pub fn values(&self) -> Vec<u8> {
        (0..self.0.ground_size()).map(|t| self.value(t)).collect()
    }

    pub fn restrict(&self, z: &SubsetMask) -> Cylinder {
        Cylinder {
            domain: *z,
            ones: self.0.intersection(z),
        }
    }
}

/// `[p]` for a pattern `p: z → 2`; `ones` is `p⁻¹[{1}] ⊆ z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Cylinder {
    pub domain: SubsetMask,
    pub ones: SubsetMask,
}

impl Cylinder {
    pub fn contains(&self, f: &BitFunction) -> bool {
        !f.0.symmetric_difference(&self.ones).intersects(&self.domain)
    }

    /// Every function extending `other`'s pattern extends this one.
    pub fn contains_cylinder(&self, other: &Cylinder) -> bool {
        self.domain.is_subset_of(&other.domain) && other.ones.intersection(&self.domain) == self.ones
    }
}

pub type CubeTopology = FiniteTopology<BitFunction, Option<Cylinder>>;

/// How a cube answered: fully materialized or by closed-form membership.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EvaluationMode {
    Materialized,
    Lazy,
}

/// The cube with its cylinder domains `Z∖{∅}`.
#[derive(Clone, Debug)]
pub struct CantorSpace {
    m: usize,
    z: FamilySpec,
    domains: Vec<SubsetMask>,
}

impl CantorSpace {
    pub fn new(z: FamilySpec) -> Result<Self, CantorError> {
        let m = z.ground_size();
        let domains = z.members()?.into_iter().filter(|d| !d.is_empty()).collect();
        Ok(CantorSpace { m, z, domains })
    }

    pub fn ground_size(&self) -> usize {
        self.m
    }

    pub fn z(&self) -> &FamilySpec {
        &self.z
    }

    pub fn domains(&self) -> &[SubsetMask] {
        &self.domains
    }

    pub fn cylinder_count(&self) -> u128 {
        self.domains.iter().map(|d| 1u128 << d.cardinality()).sum()
    }

    /// Domain of the minimal open neighbourhood `[f↾W]`, `W = ⋃(Z∖{∅})`.
    pub fn minimal_domain(&self) -> SubsetMask {
        crate::core_sets::union_all(self.m, &self.domains)
    }

    pub fn is_open_cylinder(&self, c: &Cylinder) -> bool {
        c.domain.is_empty() || self.domains.iter().any(|d| d.is_subset_of(&c.domain))
    }

    /// Some cylinder is `{f}` (and then every `{f}` is).
    pub fn is_base_discrete(&self) -> bool {
        self.z.contains(&SubsetMask::full(self.m))
    }

    /// Every point is isolated in the generated topology.
    pub fn is_discrete(&self) -> bool {
        self.minimal_domain().is_full()
    }

    pub fn materialize(&self) -> Result<CubeTopology, CantorError> {
        let m = self.m;
        let cylinders = self.cylinder_count();
        if m > MAX_MATERIALIZED_GROUND || cylinders.max(1) << m > MAX_CYLINDER_BITS {
            return Err(CantorError::TooLarge { m, cylinders });
        }
        let n = 1usize << m;
        let points: Vec<BitFunction> = (0..n as u64)
            .map(|b| BitFunction(SubsetMask::new(m, b).expect("in range")))
            .collect();
        let mut base = Vec::new();
        let mut index: HashMap<(u64, u64), usize> = HashMap::new();
        for d in &self.domains {
            for ones in d.submasks() {
                let c = Cylinder { domain: *d, ones };
                index.insert((d.bits(), ones.bits()), base.len());
                base.push(BaseSet {
                    label: Some(c),
                    members: point_set(n, (0..n).filter(|&i| c.contains(&points[i]))),
                });
            }
        }
        let local: Vec<Vec<usize>> = if self.domains.is_empty() {
            base.push(BaseSet {
                label: None,
                members: point_set(n, 0..n),
            });
            vec![vec![0]; n]
        } else {
            points
                .iter()
                .map(|f| {
                    self.domains
                        .iter()
                        .map(|d| index[&(d.bits(), f.0.intersection(d).bits())])
                        .collect()
                })
                .collect()
        };
        Ok(FiniteTopology::from_local_bases(points, base, local).expect("f ∈ [f↾z]"))
    }
}

/// Checks on the cube itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CubeReport {
    pub mode: EvaluationMode,
    pub cylinder_count: u128,
    pub cylinders_clopen: bool,
    /// Largest `t` with every set of size at most `t` in `Z`.
    pub cube_scale: usize,
    /// Every cylinder on a domain of size at most `cube_scale` is open.
    pub finer_than_scaled_cube: bool,
    pub ground_in_z: bool,
    pub base_discrete: bool,
    /// Some cylinder is a singleton.
    pub has_singleton_cylinder: bool,
    pub open_count: Option<usize>,
}

impl CubeReport {
    pub fn verified(&self) -> bool {
        self.cylinders_clopen
            && self.finer_than_scaled_cube
            && self.base_discrete == self.ground_in_z
            && self.has_singleton_cylinder == self.ground_in_z
    }
}

pub fn build_cantor(z: &FamilySpec) -> Result<(CantorSpace, CubeReport), CantorError> {
    let space = CantorSpace::new(z.clone())?;
    let m = space.m;
    let ground_in_z = z.contains(&SubsetMask::full(m));
    let cube_scale = (0..=m)
        .take_while(|&t| {
            FamilySpec::card_at_most(m, t)
                .and_then(|c| c.members())
                .map(|ms| ms.iter().all(|x| z.contains(x)))
                .unwrap_or(false)
        })
        .last()
        .unwrap_or(0);
    let report = match space.materialize() {
        Ok(topo) => {
            let cylinders_clopen = topo.base().iter().all(|b| topo.is_clopen(&b.members));
            let finer = topo.base().iter().all(|b| match b.label {
                Some(c) if c.domain.cardinality() <= cube_scale => topo.is_open(&b.members),
                _ => true,
            }) && small_cylinders(m, cube_scale).all(|c| {
                let set = point_set(
                    topo.point_count(),
                    (0..topo.point_count()).filter(|&i| c.contains(&topo.points()[i])),
                );
                topo.is_open(&set)
            });
            let open_count = topo.open_masks().ok().map(|v| v.len());
            CubeReport {
                mode: EvaluationMode::Materialized,
                cylinder_count: space.cylinder_count(),
                cylinders_clopen,
                cube_scale,
                finer_than_scaled_cube: finer,
                ground_in_z,
                base_discrete: topo.is_base_discrete(),
                has_singleton_cylinder: topo.base().iter().any(|b| b.members.count_ones(..) == 1),
                open_count,
            }
        }
        Err(CantorError::TooLarge { .. }) => CubeReport {
            mode: EvaluationMode::Lazy,
            cylinder_count: space.cylinder_count(),
            // [p] is the complement of the union of the other patterns on its domain.
            cylinders_clopen: true,
            cube_scale,
            finer_than_scaled_cube: small_cylinders(m, cube_scale.min(2)).all(|c| space.is_open_cylinder(&c)),
            ground_in_z,
            base_discrete: space.is_base_discrete(),
            has_singleton_cylinder: space.domains.iter().any(|d| d.is_full()),
            open_count: None,
        },
        Err(e) => return Err(e),
    };
    Ok((space, report))
}

/// All-zero cylinders on non-empty domains of size at most `t`.
fn small_cylinders(m: usize, t: usize) -> impl Iterator<Item = Cylinder> {
    let full = SubsetMask::full(m);
    (1..=t.min(m)).flat_map(move |k| {
        full.k_subsets(k).flat_map(move |d| {
            d.submasks().map(move |ones| Cylinder { domain: d, ones })
        })
    })
}

/// The indicator map checked against both spaces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiReport {
    pub z_downward_closed: bool,
    pub z_union_closed: bool,
    pub a_within_z: bool,
    pub ground_in_z: bool,
    pub bijective: bool,
    /// Pointwise basic-neighbourhood continuity of `ψ: S_P → 2^X[Z]`.
    pub continuous: bool,
    pub continuity_witness: Option<String>,
    pub homeomorphism: bool,
    /// Why `ψ` is not open, when it is not.
    pub openness_witness: Option<String>,
    /// Same question asked of the generated topologies, where finite spaces
    /// with singletons in `Z` are all discrete.
    pub gen_homeomorphism: bool,
    /// `ψ↾A` onto its image, with basic sets traced on the image.
    pub embedding: bool,
    pub embedding_gen: bool,
    pub embedding_witness: Option<String>,
}

impl PsiReport {
    pub fn dichotomy_holds(&self) -> bool {
        self.homeomorphism == self.ground_in_z
    }

    /// True whenever the checks whose hypotheses hold came out as stated.
    pub fn verified(&self) -> bool {
        let cont_ok = !self.z_downward_closed || (self.bijective && self.continuous);
        let dich_ok = !self.z_downward_closed || self.dichotomy_holds();
        let emb_ok = !(self.z_downward_closed && self.z_union_closed && self.a_within_z) || self.embedding;
        cont_ok && dich_ok && emb_ok
    }
}

fn describe_failure(
    space: &Space,
    failure: &MapFailure,
    cube: &CubeTopology,
    target_side: bool,
) -> String {
    if target_side {
        let label = cube.base()[failure.base].label;
        let p = space.points()[failure.point];
        match label {
            Some(c) => format!(
                "no basic neighbourhood of {p} maps into the cylinder on {} with ones {}",
                c.domain, c.ones
            ),
            None => format!("no basic neighbourhood of {p} maps into the whole cube"),
        }
    } else {
        let label = space.topology().base()[failure.base].label;
        format!(
            "ψ[B_{{{},{}}}] contains no basic neighbourhood of χ_{}",
            label.x, label.z, label.x
        )
    }
}

pub fn psi_embedding_check(spec: &SpaceSpec) -> Result<PsiReport, CantorError> {
    let m = spec.ground_size();
    let z = spec.z();
    let zf = spec.z_flags();
    let cube = CantorSpace::new(z.clone())?.materialize()?;
    let full = generate_topology(&SpaceSpec::new(FamilySpec::powerset(m), z.clone())?)?;
    let map: Vec<usize> = full.points().iter().map(|x| x.bits() as usize).collect();
    let r: MapReport = check_map(full.topology(), &cube, &map);

    let sa = generate_topology(spec)?;
    let image: Vec<usize> = {
        let mut v: Vec<usize> = sa.points().iter().map(|x| x.bits() as usize).collect();
        v.sort_unstable();
        v
    };
    let sub = cube.subspace(&image);
    let emb_map: Vec<usize> = sa
        .points()
        .iter()
        .map(|x| image.binary_search(&(x.bits() as usize)).expect("image point"))
        .collect();
    let e = check_map(sa.topology(), &sub, &emb_map);
    let embedding_witness = e
        .base_continuity_failure
        .map(|f| format!("continuity fails at {}", sa.points()[f.point]))
        .or_else(|| {
            e.base_openness_failure.map(|f| {
                let label = sa.topology().base()[f.base].label;
                format!("ψ[B_{{{},{}}}] is not open in the image", label.x, label.z)
            })
        });

    Ok(PsiReport {
        z_downward_closed: zf.downward_closed,
        z_union_closed: zf.union_closed,
        a_within_z: spec.a_within_z()?,
        ground_in_z: z.contains(&SubsetMask::full(m)),
        bijective: r.bijective,
        continuous: r.base_continuity_failure.is_none(),
        continuity_witness: r.base_continuity_failure.map(|f| describe_failure(&full, &f, &cube, true)),
        homeomorphism: r.base_homeomorphism(),
        openness_witness: r.base_openness_failure.map(|f| describe_failure(&full, &f, &cube, false)),
        gen_homeomorphism: r.gen_homeomorphism(),
        embedding: e.base_homeomorphism(),
        embedding_gen: e.gen_homeomorphism(),
        embedding_witness,
    })
}

/// The flip `f ↦ f*` that complements `f` where `g0` is 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarReport {
    pub g0: BitFunction,
    pub involution: bool,
    pub sends_zero_to_g0: bool,
    pub open_both_ways: bool,
    pub base_homeomorphism: bool,
}

impl StarReport {
    pub fn verified(&self) -> bool {
        self.involution && self.sends_zero_to_g0 && self.open_both_ways && self.base_homeomorphism
    }
}

pub fn star(f: &BitFunction, g0: &BitFunction) -> BitFunction {
    BitFunction(f.0.symmetric_difference(&g0.0))
}

pub fn star_involution(z: &FamilySpec, g0: &BitFunction) -> Result<StarReport, CantorError> {
    if g0.0.is_empty() {
        return Err(CantorError::ZeroFlip);
    }
    if g0.0.ground_size() != z.ground_size() {
        return Err(SetError::GroundMismatch(z.ground_size(), g0.0.ground_size()).into());
    }
    let cube = CantorSpace::new(z.clone())?.materialize()?;
    let map: Vec<usize> = cube
        .points()
        .iter()
        .map(|f| star(f, g0).0.bits() as usize)
        .collect();
    let r = check_map(&cube, &cube, &map);
    Ok(StarReport {
        g0: *g0,
        involution: (0..map.len()).all(|i| map[map[i]] == i),
        sends_zero_to_g0: map[0] as u64 == g0.0.bits(),
        open_both_ways: r.gen_homeomorphism(),
        base_homeomorphism: r.base_homeomorphism(),
    })
}
