use proptest::prelude::*;
use setlab::core_sets::{FamilySpec, SubsetMask};

fn mask(m: usize) -> impl Strategy<Value = SubsetMask> {
    (0u64..1 << m).prop_map(move |b| SubsetMask::new(m, b).unwrap())
}

fn family() -> impl Strategy<Value = FamilySpec> {
    (1usize..=6).prop_flat_map(|m| {
        prop_oneof![
            prop::collection::vec(mask(m), 0..10).prop_map(move |v| FamilySpec::explicit(m, v).unwrap()),
            (0..=m).prop_map(move |s| FamilySpec::card_at_most(m, s).unwrap()),
            mask(m).prop_map(FamilySpec::powerset_of),
            (0..m).prop_map(move |t| FamilySpec::below_top(m, t).unwrap()),
        ]
    })
}

proptest! {
    #[test]
    fn family_json_round_trip(f in family()) {
        let text = serde_json::to_string(&f).unwrap();
        let back: FamilySpec = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn canonical_order_is_size_then_lexicographic(a in mask(6), b in mask(6)) {
        let key = |x: &SubsetMask| (x.cardinality(), x.to_vec());
        prop_assert_eq!(a.cmp(&b), key(&a).cmp(&key(&b)));
    }

    #[test]
    fn membership_matches_listing(f in family(), x in mask(6)) {
        let m = f.ground_size();
        let x = SubsetMask::new(m, x.bits() & ((1u64 << m) - 1)).unwrap();
        prop_assert_eq!(f.contains(&x), f.members().unwrap().contains(&x));
        prop_assert_eq!(f.len(), f.members().unwrap().len() as u128);
    }
}
