//! Library results against independent brute-force oracles.

use std::collections::BTreeSet;

use setlab::base_topology::{generate_topology, SpaceSpec};
use setlab::core_sets::{classify_family, ideal_close, union_all, FamilySpec, SubsetMask};
use setlab::sampling::{random_hitting_instance, random_space_spec, random_subset, random_thm39_instance, rng};
use setlab::symmetry::{
    build_model_710, build_model_n2, fixed_subsets, is_invariant, no_choice_scan, supported_choice_decision, BlockLabel, BlockSystem,
    SymModelInstance, Support,
};
use setlab::transversals::{canonical_min_hitting, common_transversal, HittingInstance};
use rand::Rng;

fn bits_of(m: usize, bits: u64) -> SubsetMask {
    SubsetMask::new(m, bits).unwrap()
}

/// Open sets from the definitions, as bitmasks over `points`.
fn brute_opens(spec: &SpaceSpec) -> (BTreeSet<u32>, BTreeSet<u32>) {
    let points = spec.a().members().unwrap();
    let zs = spec.z().members().unwrap();
    let n = points.len();
    let nbhd = |x: &SubsetMask, z: &SubsetMask| -> u32 {
        let mut v = 0u32;
        for (i, y) in points.iter().enumerate() {
            if x.bits() & !y.bits() == 0 && y.bits() & z.bits() == 0 {
                v |= 1 << i;
            }
        }
        v
    };
    let mut base = BTreeSet::new();
    let mut local: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (i, x) in points.iter().enumerate() {
        for z in &zs {
            if x.bits() & z.bits() == 0 {
                let b = nbhd(x, z);
                base.insert(b);
                local[i].push(b);
            }
        }
    }
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut meets = BTreeSet::from([full]);
    for b in &base {
        let cut: Vec<u32> = meets.iter().map(|v| v & b).collect();
        meets.extend(cut);
    }
    let mut gen = BTreeSet::from([0u32]);
    for b in &meets {
        let grown: Vec<u32> = gen.iter().map(|v| v | b).collect();
        gen.extend(grown);
    }
    let def = (0u32..1 << n)
        .filter(|&v| (0..n).filter(|i| v >> i & 1 == 1).all(|i| local[i].iter().any(|b| b & !v == 0)))
        .collect();
    (gen, def)
}

#[test]
fn generated_and_defined_topologies_match_brute_force() {
    let mut r = rng(0xdef);
    let mut checked = 0;
    while checked < 300 {
        let m = r.gen_range(1..=4);
        let spec = random_space_spec(&mut r, m);
        if spec.a().len() > 12 {
            continue;
        }
        let space = generate_topology(&spec).unwrap();
        let (gen, def) = brute_opens(&spec);
        let opens: BTreeSet<u32> = space.topology().open_masks().unwrap().into_iter().collect();
        assert_eq!(opens, gen, "{spec:?}");
        assert_eq!(space.def_equals_gen(), gen == def, "{spec:?}");
        if spec.z_flags().union_closed {
            assert_eq!(gen, def);
        }
        checked += 1;
    }
}

fn brute_min_hitting(a: &HittingInstance) -> (usize, Vec<SubsetMask>) {
    let m = a.ground_size();
    let u = a.union().bits();
    let mut best = usize::MAX;
    let mut found = Vec::new();
    let mut sub = u;
    loop {
        if a.members().iter().all(|x| x.bits() & sub != 0) {
            let c = sub.count_ones() as usize;
            if c < best {
                best = c;
                found.clear();
            }
            if c == best {
                found.push(bits_of(m, sub));
            }
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & u;
    }
    found.sort();
    (best, found)
}

#[test]
fn canonical_hitting_matches_exhaustive_search() {
    let mut r = rng(0x417);
    for _ in 0..400 {
        let m = r.gen_range(1..=10);
        let count = r.gen_range(1..=12);
        let a = random_hitting_instance(&mut r, m, count);
        let h = canonical_min_hitting(&a).unwrap();
        let (n0, family) = brute_min_hitting(&a);
        assert_eq!(h.n0, n0);
        assert_eq!(h.k0, 0);
        assert_eq!(h.family, family);
        let f = family.iter().fold(SubsetMask::empty(m), |acc, x| acc.union(x));
        assert_eq!(h.f, f);
    }
}

#[test]
fn common_transversal_matches_search_over_z() {
    let mut r = rng(0x39);
    for _ in 0..500 {
        let m = r.gen_range(1..=5);
        let (families, z) = random_thm39_instance(&mut r, m);
        let rep = common_transversal(&families, &z).unwrap();
        let mut all: Vec<SubsetMask> = (0..1u64 << m)
            .map(|b| bits_of(m, b))
            .filter(|x| z.contains(x))
            .filter(|x| families.iter().all(|a| a.members().iter().all(|y| y.intersects(x))))
            .collect();
        all.sort();
        assert_eq!(rep.common, all.first().copied());
        assert!(rep.step_holds);
    }
}

#[test]
fn classification_matches_enumeration() {
    let mut r = rng(0xc1a55);
    for _ in 0..300 {
        let m = r.gen_range(1..=4);
        let count = r.gen_range(0..8);
        let sets: Vec<SubsetMask> = (0..count).map(|_| random_subset(&mut r, m, 0.5)).collect();
        let fam = FamilySpec::explicit(m, sets.clone()).unwrap();
        let set: BTreeSet<SubsetMask> = sets.into_iter().collect();
        let flags = classify_family(&fam);
        let down = set.iter().all(|x| x.submasks().all(|y| set.contains(&y)));
        let unions = set.iter().all(|x| set.iter().all(|y| set.contains(&x.union(y))));
        assert_eq!(flags.downward_closed, down);
        assert_eq!(flags.union_closed, unions);
    }
}

#[test]
fn ideal_closure_is_least_fixpoint() {
    let mut r = rng(0x1dea1);
    for _ in 0..200 {
        let m = r.gen_range(1..=5);
        let gens: Vec<SubsetMask> = (0..r.gen_range(0..4)).map(|_| random_subset(&mut r, m, 0.5)).collect();
        let closed: BTreeSet<SubsetMask> = ideal_close(m, &gens, None).unwrap().members().unwrap().into_iter().collect();
        let mut fix: BTreeSet<SubsetMask> = gens.iter().copied().collect();
        fix.insert(SubsetMask::empty(m));
        loop {
            let before = fix.len();
            let list: Vec<SubsetMask> = fix.iter().copied().collect();
            for x in &list {
                fix.extend(x.submasks());
                for y in &list {
                    fix.insert(x.union(y));
                }
            }
            if fix.len() == before {
                break;
            }
        }
        assert_eq!(closed, fix);
    }
}

/// Invariance tested one transposition at a time.
fn fixed_by_transpositions(blocks: &BlockSystem, e: &SubsetMask, z: &SubsetMask) -> bool {
    blocks.blocks().iter().all(|b| {
        let free: Vec<usize> = b.atoms.difference(e).to_vec();
        free.iter().all(|&a| free.iter().all(|&c| z.contains(a) == z.contains(c)))
    })
}

fn random_blocks<R: Rng>(r: &mut R, max_atoms: usize) -> BlockSystem {
    let mut sizes = Vec::new();
    let mut total = 0;
    while total < max_atoms {
        let k = r.gen_range(1..=3).min(max_atoms - total);
        sizes.push(k);
        total += k;
        if r.gen_bool(0.25) {
            break;
        }
    }
    BlockSystem::from_sizes(&sizes).unwrap()
}

#[test]
fn fixed_subsets_agree_with_transpositions() {
    let mut r = rng(0xf1);
    for _ in 0..200 {
        let blocks = random_blocks(&mut r, 10);
        let u = blocks.atom_count();
        let e = random_subset(&mut r, u, 0.3);
        let sup = Support::new(&blocks, e, None).unwrap();
        let brute: Vec<SubsetMask> = (0..1u64 << u)
            .map(|b| bits_of(u, b))
            .filter(|z| fixed_by_transpositions(&blocks, &e, z))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let fx = fixed_subsets(&blocks, &sup);
        assert_eq!(fx.enumerate().unwrap(), brute);
        assert_eq!(fx.count(), brute.len() as u128);
        assert!(brute.iter().all(|z| is_invariant(&blocks, &e, z)));
    }
}

fn brute_supported(inst: &SymModelInstance, e: &SubsetMask, n: usize) -> bool {
    let u = inst.blocks.atom_count();
    (0..1u64 << u)
        .map(|b| bits_of(u, b))
        .any(|x| inst.in_c(n, &x) && fixed_by_transpositions(&inst.blocks, e, &x))
}

/// Union of whole orbits of random sets, so the family is invariant.
fn random_invariant_family<R: Rng>(r: &mut R, blocks: &BlockSystem) -> Vec<SubsetMask> {
    let u = blocks.atom_count();
    let empty = SubsetMask::empty(u);
    let mut fam = BTreeSet::new();
    for _ in 0..r.gen_range(1..=3) {
        let x = setlab::sampling::random_nonempty_subset(r, u, 0.3);
        fam.extend(setlab::symmetry::orbit_of(blocks, &empty, &x).unwrap());
    }
    fam.into_iter().collect()
}

#[test]
fn supported_choice_agrees_with_brute_force() {
    let mut r = rng(0x5ca1e);
    for _ in 0..150 {
        let blocks = random_blocks(&mut r, 12);
        let u = blocks.atom_count();
        let families: Vec<Vec<SubsetMask>> = (0..r.gen_range(1..=3)).map(|_| random_invariant_family(&mut r, &blocks)).collect();
        let s_cap = r.gen_range(1..=u);
        let inst = SymModelInstance::new(blocks, families, s_cap).unwrap();
        let e = random_subset(&mut r, u, 0.25);
        let d = supported_choice_decision(&inst, &Support::new(&inst.blocks, e, None).unwrap());
        for (n, v) in d.indices.iter().enumerate() {
            assert_eq!(v.supported, brute_supported(&inst, &e, n), "{inst:?} {e}");
            if let Some(w) = v.witness {
                assert!(inst.in_c(n, &w) && fixed_by_transpositions(&inst.blocks, &e, &w));
            }
            if let Some(c) = &v.certificate {
                assert!(c.is_valid(&inst.blocks, &e));
                assert!(inst.in_c(n, &c.image));
            }
            assert_eq!(v.supported || v.certificate.is_some(), v.transversals_exist);
        }
    }
}

#[test]
fn named_models_at_small_scale() {
    let inst = build_model_n2(3).unwrap();
    for b in 0..1u64 << 6 {
        let e = bits_of(6, b);
        let d = supported_choice_decision(&inst, &Support::new(&inst.blocks, e, None).unwrap());
        for n in 0..3 {
            assert_eq!(d.indices[n].supported, brute_supported(&inst, &e, n));
        }
    }
    let inst = build_model_710(2, 2, 2).unwrap();
    assert_eq!(inst.blocks.atom_count(), 6);
    for b in 0..1u64 << 6 {
        let e = bits_of(6, b);
        let d = supported_choice_decision(&inst, &Support::new(&inst.blocks, e, None).unwrap());
        for n in 0..2 {
            assert_eq!(d.indices[n].supported, brute_supported(&inst, &e, n));
        }
    }
}

#[test]
fn staircase_scan_fixture() {
    let inst = build_model_710(2, 3, 3).unwrap();
    let scan = no_choice_scan(&inst, 2, Some(1)).unwrap();
    assert_eq!(scan.rows.len(), 71);
    assert!(!scan.supported_choice_exists);
    let only = |f: &[usize]| scan.rows.iter().filter(|r| r.failing == f).count();
    assert_eq!((only(&[0, 1]), only(&[0]), only(&[1])), (59, 6, 6));
    for row in &scan.rows {
        let brute: Vec<usize> = (0..2).filter(|&n| !brute_supported(&inst, &row.e, n)).collect();
        assert_eq!(row.failing, brute, "{}", row.e);
    }
    assert_eq!(no_choice_scan(&inst, 2, Some(1)).unwrap(), scan);
}

#[test]
fn staircase_support_on_early_families_leaves_later_ones_unsupported() {
    let inst = build_model_710(3, 4, 4).unwrap();
    let early = union_all(inst.blocks.atom_count(), inst.blocks.blocks().iter().filter(|b| matches!(b.label, BlockLabel::Pair(0, _))).map(|b| &b.atoms));
    let d = supported_choice_decision(&inst, &Support::new(&inst.blocks, early, None).unwrap());
    assert!(d.indices[0].supported);
    for n in 1..3 {
        let v = &d.indices[n];
        assert!(v.transversals_exist && !v.supported);
        assert!(v.certificate.as_ref().unwrap().is_valid(&inst.blocks, &early));
    }
}

#[test]
fn enlarging_the_support_keeps_yes_verdicts() {
    let mut r = rng(0x3040);
    for _ in 0..100 {
        let blocks = random_blocks(&mut r, 10);
        let u = blocks.atom_count();
        let families = vec![random_invariant_family(&mut r, &blocks)];
        let inst = SymModelInstance::new(blocks, families, r.gen_range(1..=u)).unwrap();
        let e = random_subset(&mut r, u, 0.3);
        let bigger = e.union(&random_subset(&mut r, u, 0.3));
        let small = supported_choice_decision(&inst, &Support::new(&inst.blocks, e, None).unwrap());
        let large = supported_choice_decision(&inst, &Support::new(&inst.blocks, bigger, None).unwrap());
        assert!(!small.all_supported || large.all_supported);
    }
}

#[test]
fn pair_choice_needs_every_pair_to_meet_the_support() {
    for n in 1..=5 {
        let inst = build_model_n2(n).unwrap();
        for b in 0..1u64 << (2 * n) {
            let e = bits_of(2 * n, b);
            let d = supported_choice_decision(&inst, &Support::new(&inst.blocks, e, None).unwrap());
            let meets = inst.blocks.blocks().iter().all(|blk| blk.atoms.intersects(&e));
            assert_eq!(d.all_supported, meets);
        }
    }
}
