//! One function per command, each turning a config into checks.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use setlab::base_topology::{
    generate_topology, homogeneity_homeo, isolated_points, restrict_subspace, structure_battery, Space, SpaceSpec,
    TopologyError,
};
use setlab::cantor::{build_cantor, psi_embedding_check, star_involution, BitFunction, CantorError};
use setlab::core_sets::union_all;
use setlab::sampling::{random_space_spec, rng};
use setlab::symmetry::{
    build_model_710, build_model_n17, build_model_n2, no_choice_scan, supported_choice_decision,
    supported_partition_decision, SymModelInstance, Support,
};
use setlab::transversals::{
    canonical_choice, canonical_min_hitting, common_transversal, p0_condition_check, partition_from_transversal, phi,
    ps0_instance_eval, trace_recursion, union_lift, HittingInstance, PartitionOutcome, Ps0Instance, Ps0Variant,
};
use setlab::{FamilySpec, SubsetMask};

use crate::config::{Command, Model, RunConfig};
use crate::report::Check;
use crate::RunError;

type Result<T> = std::result::Result<T, RunError>;

fn usage(msg: impl std::fmt::Display) -> RunError {
    RunError::Usage(msg.to_string())
}

pub fn dispatch(cfg: &RunConfig) -> Result<Vec<Check>> {
    match cfg.command {
        Command::Space => space(cfg),
        Command::Cantor => cantor(cfg),
        Command::Hitting => hitting(cfg),
        Command::Thm39 => thm39(cfg),
        Command::Ps0 => ps0(cfg),
        Command::Trace => trace(cfg),
        Command::Symmetry => symmetry(cfg),
        Command::BatterySweep => battery_sweep(cfg),
    }
}

/// The ground size: `m` when given, else taken from the family specs or,
/// failing that, from the largest listed element.
fn ground(cfg: &RunConfig) -> Result<usize> {
    if let Some(m) = cfg.m {
        return Ok(m);
    }
    if let Some(f) = cfg.a.as_ref().or(cfg.z.as_ref()) {
        return Ok(f.ground_size());
    }
    let listed = cfg.families.iter().flatten().flatten().flatten().copied().max();
    listed.map(|e| e + 1).ok_or_else(|| usage("missing m"))
}

fn mask(m: usize, els: &[usize]) -> Result<SubsetMask> {
    SubsetMask::from_elements(m, els).map_err(usage)
}

fn same_ground(m: usize, f: &FamilySpec, what: &str) -> Result<()> {
    if f.ground_size() != m {
        return Err(usage(format!("{what} has ground size {}, expected {m}", f.ground_size())));
    }
    Ok(())
}

/// `Z` as given, else the sets of size at most `s`.
fn z_family(cfg: &RunConfig, m: usize) -> Result<FamilySpec> {
    let z = match (&cfg.z, cfg.s) {
        (Some(z), _) => z.clone(),
        (None, Some(s)) => FamilySpec::card_at_most(m, s).map_err(usage)?,
        (None, None) => return Err(usage("give z or s")),
    };
    same_ground(m, &z, "z")?;
    Ok(z)
}

/// `A` as given, else the sets of size at most `t`, else the powerset.
fn a_family(cfg: &RunConfig, m: usize) -> Result<FamilySpec> {
    let a = match (&cfg.a, cfg.t) {
        (Some(a), _) => a.clone(),
        (None, Some(t)) => FamilySpec::card_at_most(m, t).map_err(usage)?,
        (None, None) => FamilySpec::powerset(m),
    };
    same_ground(m, &a, "a")?;
    Ok(a)
}

fn hitting_families(cfg: &RunConfig, m: usize) -> Result<Vec<HittingInstance>> {
    let fams = cfg.families.as_ref().ok_or_else(|| usage("missing families"))?;
    if fams.is_empty() {
        return Err(usage("families is empty"));
    }
    fams.iter()
        .enumerate()
        .map(|(i, f)| {
            let members = f.iter().map(|x| mask(m, x)).collect::<Result<Vec<_>>>()?;
            HittingInstance::new(m, members, cfg.k_cap.unwrap_or(0), cfg.size_cap)
                .map_err(|e| usage(format!("family {i}: {e}")))
        })
        .collect()
}

fn topology_error(e: TopologyError) -> RunError {
    usage(e)
}

fn build_space(spec: &SpaceSpec) -> Result<Space> {
    generate_topology(spec).map_err(topology_error)
}

fn spec_json(spec: &SpaceSpec) -> Value {
    json!({ "a": spec.a(), "z": spec.z() })
}

fn space(cfg: &RunConfig) -> Result<Vec<Check>> {
    let m = ground(cfg)?;
    let spec = SpaceSpec::new(a_family(cfg, m)?, z_family(cfg, m)?).map_err(topology_error)?;
    let space = build_space(&spec)?;
    let t = space.topology();
    let problems = t.verify_axioms();
    let mut checks = vec![Check::plain(
        "topology_axioms",
        "minimal neighbourhoods are nested and every basic set is open",
        problems.is_empty(),
        json!({
            "points": t.point_count(),
            "base_sets": t.base().len(),
            "problems": problems,
            "def_gen_witness": space.def_gen_witness(),
        }),
    )];
    let battery = structure_battery(&space).map_err(topology_error)?;
    for item in &battery.items {
        checks.push(Check::new(item.name, item.statement, item.hypotheses_hold, item.conclusion_holds, &item.witness));
    }
    let iso = isolated_points(&space);
    checks.push(Check::plain(
        "isolated_points",
        "candidates and maximal points are isolated, with equality under the union-closure hypotheses",
        iso.inclusions_hold && (!iso.equality_applies || iso.coincide),
        &iso,
    ));
    if let Some(x0) = &cfg.x0 {
        let x0 = mask(m, x0)?;
        checks.push(match homogeneity_homeo(&space, &x0) {
            Ok(h) => Check::plain("homogeneity", "the swap of B_{∅,x0} and B_{x0,∅} is a self-inverse homeomorphism", h.verified(), &h),
            Err(TopologyError::Hypothesis(missing)) => Check::new(
                "homogeneity",
                "the swap of B_{∅,x0} and B_{x0,∅} is a self-inverse homeomorphism",
                false,
                false,
                json!({ "missing_hypothesis": missing }),
            ),
            Err(e) => return Err(topology_error(e)),
        });
    }
    if let Some(y) = &cfg.y {
        let y = mask(m, y)?;
        let r = restrict_subspace(&space, &y).map_err(topology_error)?;
        checks.push(Check::plain(
            "restriction",
            "restricting A and Z to Y generates the subspace topology on A_Y",
            r.matches_subspace,
            json!({ "y": y, "restricted": spec_json(&r.spec) }),
        ));
    }
    Ok(checks)
}

fn cantor(cfg: &RunConfig) -> Result<Vec<Check>> {
    let m = ground(cfg)?;
    let z = z_family(cfg, m)?;
    let cantor_err = |e: CantorError| usage(e);
    let (_, cube) = build_cantor(&z).map_err(cantor_err)?;
    let mut checks = vec![Check::plain(
        "cube",
        "cylinders are clopen, the topology refines the scaled cube, and it is discrete exactly when X ∈ Z",
        cube.verified(),
        &cube,
    )];
    let spec = SpaceSpec::new(a_family(cfg, m)?, z.clone()).map_err(topology_error)?;
    match psi_embedding_check(&spec) {
        Ok(p) => {
            checks.push(Check::new(
                "psi_continuous_bijective",
                "the indicator map from the powerset space to the cube is a continuous bijection",
                p.z_downward_closed,
                p.bijective && p.continuous,
                json!({ "bijective": p.bijective, "continuous": p.continuous, "witness": p.continuity_witness }),
            ));
            checks.push(Check::new(
                "psi_dichotomy",
                "the indicator map is a homeomorphism exactly when X ∈ Z",
                p.z_downward_closed,
                p.dichotomy_holds(),
                json!({
                    "ground_in_z": p.ground_in_z,
                    "homeomorphism": p.homeomorphism,
                    "gen_homeomorphism": p.gen_homeomorphism,
                    "witness": p.openness_witness,
                }),
            ));
            checks.push(Check::new(
                "psi_embedding",
                "the indicator map restricted to A is an embedding",
                p.z_downward_closed && p.z_union_closed && p.a_within_z,
                p.embedding,
                json!({ "embedding": p.embedding, "gen_embedding": p.embedding_gen, "witness": p.embedding_witness }),
            ));
        }
        Err(CantorError::TooLarge { m, cylinders }) => checks.push(Check::new(
            "psi",
            "the indicator map checks need a materialized cube",
            false,
            false,
            json!({ "m": m, "cylinders": cylinders.to_string() }),
        )),
        Err(e) => return Err(cantor_err(e)),
    }
    let g0 = match &cfg.g0 {
        Some(g) => mask(m, g)?,
        None => SubsetMask::full(m),
    };
    match star_involution(&z, &BitFunction(g0)) {
        Ok(s) => checks.push(Check::plain("star", "f ↦ f* is a self-inverse homeomorphism sending 0 to g0", s.verified(), &s)),
        Err(CantorError::TooLarge { .. }) => {}
        Err(e) => return Err(cantor_err(e)),
    }
    Ok(checks)
}

fn hitting(cfg: &RunConfig) -> Result<Vec<Check>> {
    let m = ground(cfg)?;
    let fams = hitting_families(cfg, m)?;
    let mut checks = Vec::new();
    for (i, a) in fams.iter().enumerate() {
        match canonical_min_hitting(a) {
            Ok(h) => {
                let sound = h.family.iter().all(|x| x.cardinality() == h.n0 && a.misses(x) == h.k0 && phi(a, a.k_cap(), x))
                    && h.f == union_all(m, &h.family);
                checks.push(Check::plain(
                    format!("canonical_min_hitting[{i}]"),
                    "n0, k0, every witness of that size and their union f",
                    sound,
                    &h,
                ));
                if h.k0 == 0 {
                    let blocks = partition_from_transversal(a, &h.f).map_err(usage)?;
                    let labelled = blocks.iter().all(|b| {
                        !b.members.is_empty() && b.members.iter().all(|z| z.intersection(&h.f) == b.label)
                    });
                    let covered: usize = blocks.iter().map(|b| b.members.len()).sum();
                    checks.push(Check::plain(
                        format!("fibers[{i}]"),
                        "the traces z ∩ f partition A into labelled blocks",
                        labelled && covered == a.members().len(),
                        &blocks,
                    ));
                }
            }
            Err(e) => checks.push(Check::new(
                format!("canonical_min_hitting[{i}]"),
                "n0, k0, every witness of that size and their union f",
                false,
                false,
                json!({ "error": e.to_string() }),
            )),
        }
    }
    if let Some(t) = cfg.t {
        let choice = canonical_choice(&fams, t).map_err(usage)?;
        let hits = fams.iter().zip(&choice).all(|(a, c)| a.is_hit_by(c));
        checks.push(Check::plain(
            "canonical_choice",
            "small families give their union and large ones the union of minimum transversals, each meeting its family",
            hits,
            &choice,
        ));
    }
    if cfg.z.is_some() || cfg.s.is_some() {
        let z = z_family(cfg, m)?;
        let r = p0_condition_check(&z, &fams).map_err(usage)?;
        let consistent = r.entries.iter().zip(&fams).all(|(e, a)| match e.choice {
            Some(c) => z.contains(&c) && a.is_hit_by(&c),
            None => true,
        });
        checks.push(Check::new(
            "p0_condition",
            "each family's chosen transversal lies in Z and meets every member",
            r.entries.iter().all(|e| e.has_transversal),
            consistent,
            &r,
        ));
    }
    Ok(checks)
}

fn thm39(cfg: &RunConfig) -> Result<Vec<Check>> {
    let m = ground(cfg)?;
    let fams = hitting_families(cfg, m)?;
    let z = z_family(cfg, m)?;
    let r = common_transversal(&fams, &z).map_err(usage)?;
    let verified = r
        .common
        .is_none_or(|c| z.contains(&c) && fams.iter().all(|a| a.is_hit_by(&c)));
    let choices: Vec<SubsetMask> = r.families.iter().filter_map(|f| f.choice).collect();
    let (lift, lift_in_z) = union_lift(&choices, &z);
    Ok(vec![
        Check::new(
            "common_transversal_step",
            "per-family choices whose union lies in Z give a common transversal in Z",
            r.choices_exist && r.union_in_z,
            r.common.is_some() && verified,
            &r,
        ),
        Check::plain("common_witness", "a returned common transversal lies in Z and meets every member", verified, r.common),
        Check::new(
            "union_lift",
            "the union of the choices stays in a union-closed Z",
            r.choices_exist && r.z_union_closed,
            lift_in_z,
            json!({ "union": lift, "in_z": lift_in_z }),
        ),
    ])
}

fn ps0(cfg: &RunConfig) -> Result<Vec<Check>> {
    let m = ground(cfg)?;
    let s = cfg.s.ok_or_else(|| usage("ps0 needs s"))?;
    let inst = Ps0Instance {
        families: hitting_families(cfg, m)?,
        s,
        partition_cap: cfg.partition_cap.unwrap_or(2),
        budget: cfg.budget.unwrap_or(100_000),
    };
    let variants = match cfg.variant {
        Some(v) => vec![v],
        None => vec![Ps0Variant::I, Ps0Variant::II, Ps0Variant::C, Ps0Variant::D],
    };
    let mut checks = Vec::new();
    for v in variants {
        let r = ps0_instance_eval(v, &inst).map_err(usage)?;
        let fits = |c: &SubsetMask| c.cardinality() <= s;
        let consistent = match v {
            Ps0Variant::I => r.choices.iter().all(|c| fits(c) && inst.families.iter().all(|a| a.is_hit_by(c))),
            Ps0Variant::II => r.choices.iter().zip(&inst.families).all(|(c, a)| fits(c) && a.is_hit_by(c)),
            Ps0Variant::C | Ps0Variant::D => r.partitions.iter().all(|p| match &p.outcome {
                PartitionOutcome::Chosen { partition, .. } => {
                    partition.len() <= inst.partition_cap
                        && (v == Ps0Variant::C || partition.len() == inst.partition_cap)
                        && partition.iter().all(|b| {
                            let u = union_all(m, b);
                            b.iter().all(|z| z.intersects(&u))
                        })
                }
                _ => true,
            }),
        };
        checks.push(Check::new(
            format!("ps0_{v:?}"),
            "the evaluated choices and partitions satisfy the variant's definition",
            r.premises_hold,
            consistent,
            &r,
        ));
    }
    Ok(checks)
}

fn trace(cfg: &RunConfig) -> Result<Vec<Check>> {
    let m = ground(cfg)?;
    let fams = cfg.families.as_ref().ok_or_else(|| usage("missing families"))?;
    let a = fams
        .first()
        .ok_or_else(|| usage("families is empty"))?
        .iter()
        .map(|x| mask(m, x))
        .collect::<Result<Vec<_>>>()?;
    let u = cfg
        .blocks
        .as_ref()
        .ok_or_else(|| usage("missing blocks"))?
        .iter()
        .map(|x| mask(m, x))
        .collect::<Result<Vec<_>>>()?;
    let seeds: Vec<Vec<Vec<SubsetMask>>> = match &cfg.seed_partitions {
        Some(p) => p
            .iter()
            .map(|part| {
                part.iter()
                    .map(|b| b.iter().map(|x| mask(m, x)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?,
        None => vec![a.iter().map(|x| vec![*x]).collect()],
    };
    let distinct: std::collections::BTreeSet<Vec<SubsetMask>> = seeds
        .iter()
        .flatten()
        .map(|b| {
            let mut b = b.clone();
            b.sort();
            b
        })
        .collect();
    let r = trace_recursion(&a, &u, &seeds).map_err(usage)?;
    let blocks_ok = r.blocks.iter().all(|b| {
        let reach = union_all(m, b.index_set.iter().map(|&i| &u[i]));
        b.region.is_subset_of(&reach.intersection(&union_all(m, &b.members)))
            && b.members.iter().all(|z| z.intersects(&b.region))
    });
    let covered: usize = r.blocks.iter().map(|b| b.members.len()).sum();
    Ok(vec![
        Check::plain(
            "trace_termination",
            "the regrouping stops within one stage per distinct seed block",
            r.termination_stage <= distinct.len(),
            json!({ "stages": r.termination_stage, "bound": distinct.len() }),
        ),
        Check::plain(
            "trace_blocks",
            "the regrouped blocks partition A and each is met by its finite region",
            blocks_ok && covered == a.len(),
            &r,
        ),
    ])
}

fn symmetry(cfg: &RunConfig) -> Result<Vec<Check>> {
    let model = cfg.model.ok_or_else(|| usage("missing model"))?;
    let n = cfg.n.unwrap_or(2);
    let sym = |e: setlab::symmetry::SymmetryError| usage(e);
    let inst: SymModelInstance = match model {
        Model::Pairs => build_model_n2(n).map_err(sym)?,
        Model::Staircase => {
            let j = cfg.j.ok_or_else(|| usage("staircase needs j"))?;
            let s_cap = cfg.s_cap.ok_or_else(|| usage("staircase needs s_cap"))?;
            build_model_710(n, j, s_cap).map_err(sym)?
        }
        Model::BlockPartition => {
            let size = cfg.block_size.ok_or_else(|| usage("block-partition needs block_size"))?;
            build_model_n17(n, size).map_err(sym)?
        }
    };
    let u = inst.blocks.atom_count();
    let partitions_ok = inst.partitions.iter().zip(&inst.families).all(|(parts, fam)| {
        let mut all: Vec<SubsetMask> = parts.iter().flatten().copied().collect();
        all.sort();
        all == *fam
    });
    let mut checks = vec![Check::plain(
        "model",
        "families are closed under the block group and the listed partitions partition them",
        partitions_ok,
        json!({
            "atoms": u,
            "blocks": inst.blocks.blocks(),
            "families": inst.families,
            "partitions": inst.partitions,
            "s_cap": inst.s_cap,
        }),
    )];
    let e = mask(u, cfg.support.as_deref().unwrap_or(&[]))?;
    let support = Support::new(&inst.blocks, e, cfg.per_block_cap).map_err(sym)?;
    if model == Model::BlockPartition {
        let count = cfg.partition_cap.unwrap_or(2);
        for i in 0..inst.families.len() {
            let v = supported_partition_decision(&inst, i, &support, count).map_err(sym)?;
            let sound = match (&v.witness, &v.certificate) {
                (Some(_), None) => true,
                (None, Some(c)) => c.a != c.b,
                (None, None) => v.considered == 0,
                _ => false,
            };
            checks.push(Check::plain(
                format!("partition_decision[{i}]"),
                "an invariant partition is found or the first candidate is moved by a transposition",
                sound,
                &v,
            ));
        }
        return Ok(checks);
    }
    let d = supported_choice_decision(&inst, &support);
    let sound = d.indices.iter().enumerate().all(|(i, v)| match (&v.witness, &v.certificate) {
        (Some(w), None) => inst.in_c(i, w) && setlab::symmetry::is_invariant(&inst.blocks, &e, w),
        (None, Some(c)) => c.is_valid(&inst.blocks, &e) && inst.in_c(i, &c.member),
        (None, None) => !v.transversals_exist,
        _ => false,
    });
    checks.push(Check::plain(
        "decision",
        "supported indices carry invariant witnesses and the rest carry moving transpositions",
        sound,
        &d,
    ));
    if let Some(max_e) = cfg.max_support {
        let scan = no_choice_scan(&inst, max_e, cfg.per_block_cap).map_err(sym)?;
        let overall = if scan.supported_choice_exists {
            "an E-supported choice exists within budget"
        } else {
            "no E-supported choice within budget"
        };
        checks.push(Check::plain(
            "scan",
            "every support within the budget was decided",
            !scan.rows.is_empty(),
            json!({ "overall": overall, "table": scan }),
        ));
    }
    Ok(checks)
}

#[derive(Default)]
struct Tally {
    statement: &'static str,
    held: usize,
    violations: usize,
    first: Option<Value>,
}

fn battery_sweep(cfg: &RunConfig) -> Result<Vec<Check>> {
    let count = cfg.count.unwrap_or(500);
    let max_m = cfg.m.unwrap_or(6);
    if max_m == 0 || max_m > 8 {
        return Err(usage("battery-sweep needs 1 ≤ m ≤ 8"));
    }
    let mut r = rng(cfg.seed);
    let mut tallies: BTreeMap<&'static str, Tally> = BTreeMap::new();
    let mut record = |name: &'static str, statement: &'static str, held: bool, ok: bool, ctx: &dyn Fn() -> Value| {
        let t = tallies.entry(name).or_insert_with(|| Tally { statement, ..Tally::default() });
        if held {
            t.held += 1;
            if !ok {
                t.violations += 1;
                if t.first.is_none() {
                    t.first = Some(ctx());
                }
            }
        }
    };
    for i in 0..count {
        let m = 1 + i % max_m;
        let spec = random_space_spec(&mut r, m);
        let space = build_space(&spec)?;
        let battery = structure_battery(&space).map_err(topology_error)?;
        let problems = space.topology().verify_axioms();
        record("topology_axioms", "minimal neighbourhoods are nested and every basic set is open", true, problems.is_empty(), &|| {
            json!({ "instance": i, "spec": spec_json(&spec), "problems": problems })
        });
        for item in &battery.items {
            record(item.name, item.statement, item.hypotheses_hold, item.conclusion_holds, &|| {
                json!({ "instance": i, "spec": spec_json(&spec), "witness": item.witness })
            });
        }
        let iso = isolated_points(&space);
        record(
            "isolated_points",
            "candidates and maximal points are isolated, with equality under the union-closure hypotheses",
            true,
            iso.inclusions_hold && (!iso.equality_applies || iso.coincide),
            &|| json!({ "instance": i, "spec": spec_json(&spec), "report": iso }),
        );
    }
    Ok(tallies
        .into_iter()
        .map(|(name, t)| {
            Check::new(
                name,
                t.statement,
                t.held > 0,
                t.violations == 0,
                json!({ "instances": count, "hypotheses_held": t.held, "violations": t.violations, "counterexample": t.first }),
            )
        })
        .collect())
}
