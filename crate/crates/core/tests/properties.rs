use fano3_core::ci_models::unprojection_genus;
use fano3_core::contractions::{
    inverse_link_transform, link_transform, propagate_genus, ContractionDescriptor, ContractionKind, Target,
};
use fano3_core::fano_db::{rho2_lookup, RHO2_NUMBERS};
use fano3_core::invariants::{genus_of, mk3_of_genus, node_count_nonfactorial};
use fano3_core::lattice::{
    blowup_lattice, flop_invariant_check, pbundle_chow, product_chow_over, triple_product, BundleBase, DivisorClass,
    IntersectionForm,
};
use fano3_core::Error;
use proptest::prelude::*;

fn random_form(rank: usize) -> impl Strategy<Value = IntersectionForm> {
    let n = fano3_core::lattice::monomials(rank, 3).count();
    prop::collection::vec(-9i64..=9, n).prop_map(move |vals| {
        let mut it = vals.into_iter();
        IntersectionForm::from_fn(
            (0..rank).map(|i| format!("D{i}")).collect(),
            3,
            DivisorClass::zero(rank),
            |_| it.next().unwrap(),
        )
        .unwrap()
    })
}

fn classes(rank: usize) -> impl Strategy<Value = [DivisorClass; 3]> {
    let c = || prop::collection::vec(-5i64..=5, rank).prop_map(DivisorClass::new);
    (c(), c(), c()).prop_map(|(a, b, c)| [a, b, c])
}

proptest! {
    #[test]
    fn triple_product_is_symmetric((form, [a, b, c]) in (2usize..=3).prop_flat_map(|r| (random_form(r), classes(r)))) {
        let v = triple_product(&form, &a, &b, &c).unwrap();
        for (x, y, z) in [(&a, &c, &b), (&b, &a, &c), (&b, &c, &a), (&c, &a, &b), (&c, &b, &a)] {
            prop_assert_eq!(triple_product(&form, x, y, z).unwrap(), v);
        }
    }

    #[test]
    fn triple_product_is_linear((form, [a, b, c]) in (2usize..=3).prop_flat_map(|r| (random_form(r), classes(r))), k in -4i64..=4) {
        let ab = a.add(&b).unwrap();
        let lhs = triple_product(&form, &ab, &c, &c).unwrap();
        let rhs = triple_product(&form, &a, &c, &c).unwrap() + triple_product(&form, &b, &c, &c).unwrap();
        prop_assert_eq!(lhs, rhs);
        let ka = a.scale(k).unwrap();
        prop_assert_eq!(triple_product(&form, &ka, &b, &c).unwrap(), k * triple_product(&form, &a, &b, &c).unwrap());
    }

    #[test]
    fn form_agrees_with_itself_under_flop_check(form in random_form(2)) {
        prop_assert!(flop_invariant_check(&form, &form, &[0]));
    }
}

/// Valid blowup data: `ι³·H³` even so that the target has a genus.
fn blowup_tuple() -> impl Strategy<Value = (i64, i64, i64, i64)> {
    (1i64..=4, 1i64..=8, 0i64..=12, 1i64..=14).prop_map(|(iota, h3, g, d)| {
        let h3 = if (iota * iota * iota * h3) % 2 == 1 { h3 * 2 } else { h3 };
        (h3, iota, g, d)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn blowup_genus_two_ways((h3, iota, g, d) in blowup_tuple()) {
        let form = blowup_lattice(h3, iota, g, d).unwrap();
        let k = form.anticanonical().clone();
        let mk3 = triple_product(&form, &k, &k, &k).unwrap();
        let g_z = iota * iota * iota * h3 / 2 + 1;
        let propagated = propagate_genus(ContractionKind::B1Curve, g_z, iota, Some((g, d))).unwrap();
        prop_assert_eq!(mk3 % 2, 0);
        prop_assert_eq!(mk3 / 2 + 1, propagated);
    }
}

proptest! {
    #[test]
    fn trivial_bundle_is_a_product(rank in 2usize..=4, over_p2 in any::<bool>()) {
        let (base, b) = if over_p2 { (BundleBase::P2, 2) } else { (BundleBase::P1, 1) };
        let bundle = pbundle_chow(base, rank, 0, 0).unwrap();
        let product = product_chow_over(1, rank - 1, b).unwrap();
        prop_assert_eq!(bundle.values(), product.values());
    }

    #[test]
    fn genus_round_trip(g in 2i64..=10_000) {
        prop_assert_eq!(genus_of(mk3_of_genus(g).unwrap()).unwrap(), g);
    }

    #[test]
    fn unprojection_inverts_node_blowup(g in 2i64..=1000) {
        prop_assert_eq!(unprojection_genus(g - 1).unwrap(), g);
    }

    #[test]
    fn node_count_shift(h in 0i64..=60, n in 1i64..=30) {
        prop_assert_eq!(node_count_nonfactorial(h, h + n - 1).unwrap(), n);
    }

    #[test]
    fn link_transform_round_trip(desc in descriptor()) {
        let iota = desc.target.iota().unwrap_or(1);
        match link_transform(&desc, iota) {
            Ok(t) => prop_assert_eq!(inverse_link_transform(&t, iota).unwrap(), desc),
            Err(Error::Excluded(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}

fn descriptor() -> impl Strategy<Value = ContractionDescriptor> {
    let target = prop_oneof![
        Just(Target::P3),
        Just(Target::Q3),
        (1i64..=5).prop_map(Target::del_pezzo),
        prop::sample::select(vec![2i64, 3, 4, 5, 6, 7, 8, 9, 10, 12]).prop_map(|g| Target::smooth(1, g)),
    ];
    prop_oneof![
        (target, 0i64..=20, 1i64..=20).prop_map(|(t, g, d)| ContractionDescriptor::curve_blowup(t, g, d)),
        (1i64..=12).prop_map(ContractionDescriptor::conic_bundle),
        (1i64..=6).prop_map(|f| ContractionDescriptor::del_pezzo(f, None)),
    ]
}

#[test]
fn rank_two_records_round_trip() {
    for m in RHO2_NUMBERS {
        let rec = rho2_lookup(m).unwrap();
        for c in &rec.contractions {
            if fano3_core::contractions::iota_of(c.kind) != 1 || c.kind == ContractionKind::B1Point {
                continue;
            }
            let iota = c.target.iota().unwrap_or(1);
            if let Ok(t) = link_transform(c, iota) {
                let back = inverse_link_transform(&t, iota).unwrap();
                assert_eq!(back.kind, c.kind, "2-{m}");
                assert_eq!(back.curve, c.curve, "2-{m}");
                assert_eq!(back.fiber_degree, c.fiber_degree, "2-{m}");
            }
        }
    }
}
