//! Seeded sweeps over random spaces.

use std::collections::BTreeMap;

use setlab::base_topology::{generate_topology, homogeneity_homeo, isolated_points, structure_battery};
use setlab::cantor::{psi_embedding_check, star_involution, BitFunction};
use setlab::sampling::{rng, random_space_spec, random_subset};

#[test]
fn battery_has_no_violations() {
    let mut r = rng(0x5e7_1ab);
    let mut hyp: BTreeMap<&str, usize> = BTreeMap::new();
    for i in 0..600 {
        let m = 1 + i % 6;
        let spec = random_space_spec(&mut r, m);
        let space = generate_topology(&spec).unwrap();
        let report = structure_battery(&space).unwrap();
        for item in &report.items {
            if item.hypotheses_hold {
                *hyp.entry(item.name).or_default() += 1;
            }
        }
        let v = report.violations();
        assert!(v.is_empty(), "instance {i}: {spec:?}\n{v:#?}");
        let iso = isolated_points(&space);
        assert!(iso.inclusions_hold, "{spec:?}");
        if iso.equality_applies {
            assert!(iso.coincide, "{spec:?}");
        }
    }
    eprintln!("{hyp:#?}");
}

#[test]
fn homogeneity_maps_verify() {
    let mut r = rng(11);
    let mut accepted = 0;
    let mut stars = 0;
    for i in 0..3000 {
        let m = 1 + i % 5;
        let spec = random_space_spec(&mut r, m);
        let space = generate_topology(&spec).unwrap();
        let x0 = random_subset(&mut r, m, 0.5);
        if let Ok(h) = homogeneity_homeo(&space, &x0) {
            assert!(h.verified(), "{spec:?} {h:?}");
            accepted += 1;
        }
        if !x0.is_empty() && stars < 300 {
            let s = star_involution(spec.z(), &BitFunction(x0)).unwrap();
            assert!(s.verified(), "{spec:?} {s:?}");
            stars += 1;
        }
    }
    eprintln!("accepted {accepted}, stars {stars}");
    assert!(accepted >= 200);
}

#[test]
fn psi_dichotomy_exhaustive_small() {
    let mut r = rng(5);
    for i in 0..200 {
        let spec = random_space_spec(&mut r, 1 + i % 4);
        let p = psi_embedding_check(&spec).unwrap();
        assert!(p.verified(), "{spec:?} {p:?}");
    }
}
