//! Fast paths checked against definitional computations on whole streams.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use proptest::prelude::*;
use rickart_core::arith::gcd;
use rickart_core::lab::{enumerate_abelian_groups, module_of_type};
use rickart_core::*;

fn groups(max: usize) -> Vec<FiniteModule> {
    enumerate_abelian_groups(max).unwrap().modules
}

fn z(orders: &[i64]) -> FiniteModule {
    FiniteModule::abelian_group(orders).unwrap()
}

#[test]
fn essential_and_superfluous_match_definitions() {
    for m in groups(32) {
        let lat = Lattice::new(&m).unwrap();
        let whole = Submodule::whole(&m);
        for k in lat.submodules() {
            assert_eq!(
                lat.is_essential(k, &whole).unwrap(),
                lat.is_essential_bruteforce(k, &whole).unwrap(),
                "{m}: essential {k}"
            );
            assert_eq!(
                lat.is_superfluous(k, &whole).unwrap(),
                lat.is_superfluous_bruteforce(k, &whole).unwrap(),
                "{m}: superfluous {k}"
            );
        }
        // inside each summand
        for d in lat.direct_summands() {
            for k in lat.submodules().iter().filter(|k| k.is_subset(&d)) {
                assert_eq!(
                    lat.is_essential(k, &d).unwrap(),
                    lat.is_essential_bruteforce(k, &d).unwrap()
                );
                assert_eq!(
                    lat.is_superfluous(k, &d).unwrap(),
                    lat.is_superfluous_bruteforce(k, &d).unwrap()
                );
            }
        }
    }
}

#[test]
fn summand_tables_match_definitions() {
    let lim = Limits::default();
    for m in groups(16) {
        let lat = Lattice::new(&m).unwrap();
        for (id, k) in lat.submodules().iter().enumerate() {
            assert_eq!(
                lat.is_summand_id(id),
                lat.is_direct_summand_bruteforce(k),
                "{m}: {k}"
            );
            let fast = lat.lies_above_summand(k).unwrap();
            let slow = lat.lies_above_summand_bruteforce(k, &lim).unwrap();
            assert_eq!(fast.is_some(), slow.is_some(), "{m}: lies above for {k}");
            let in_summand = lat.essential_in_summand(id).is_some();
            let brute = lat
                .direct_summands()
                .iter()
                .any(|d| k.is_subset(d) && lat.is_essential_bruteforce(k, d).unwrap());
            assert_eq!(in_summand, brute, "{m}: essential in a summand {k}");
        }
    }
}

#[test]
fn summands_are_idempotent_images() {
    let lim = Limits::default();
    for m in groups(32)
        .into_iter()
        .chain([z(&[2, 2, 4, 4]), z(&[4, 4, 4])])
    {
        let lat = Lattice::new(&m).unwrap();
        let by_complement: BTreeSet<Vec<u32>> = lat
            .direct_summands()
            .iter()
            .map(|d| d.elements().to_vec())
            .collect();
        let mut by_idempotent = BTreeSet::new();
        hom::for_each_idempotent(&m, &lim, |rows| {
            let e = ModuleHom::from_rows(&m, &m, rows.to_vec()).unwrap();
            by_idempotent.insert(e.image().elements().to_vec());
            ControlFlow::Continue(())
        })
        .unwrap();
        assert_eq!(by_complement, by_idempotent, "{m}");
    }
}

#[test]
fn hom_counts_follow_gcd_formula() {
    let lim = Limits::default();
    let ms = groups(32);
    for a in &ms {
        for b in &ms {
            let formula: u128 = a
                .orders()
                .iter()
                .flat_map(|&p| b.orders().iter().map(move |&q| u128::from(gcd(p, q))))
                .product();
            let space = HomSpace::new(a, b).unwrap();
            assert_eq!(space.count(&lim).unwrap(), formula, "Hom({a}, {b})");
            if formula <= 4096 {
                let mut walked = 0u128;
                space
                    .for_each_rows(&lim, |_, _| {
                        walked += 1;
                        ControlFlow::Continue(())
                    })
                    .unwrap();
                assert_eq!(walked, formula);
            }
        }
    }
}

#[test]
fn kernel_times_image_is_order() {
    let lim = Limits::default();
    for m in groups(32) {
        let space = HomSpace::new(&m, &m).unwrap();
        let census = space.kernel_image_census(&lim).unwrap();
        for (&(k, i), &count) in &census {
            assert_eq!(
                k * i,
                m.size(),
                "{m}: {count} endomorphisms with |Ker| = {k}, |Im| = {i}"
            );
        }
        assert_eq!(census.values().sum::<u128>(), space.count(&lim).unwrap());
        if space.count(&lim).unwrap() <= 1 << 16 {
            assert_eq!(
                census,
                space.kernel_image_census_by_enumeration(&lim).unwrap(),
                "{m}"
            );
        }
    }
}

#[test]
fn hom_routes_agree() {
    let ms = groups(12);
    let classify = Engine::new(EngineOptions {
        route: HomRoute::Classify,
        ..Default::default()
    });
    let walk = Engine::new(EngineOptions {
        route: HomRoute::Enumerate,
        ..Default::default()
    });
    let brute = Engine::new(EngineOptions {
        route: HomRoute::Enumerate,
        brute_force: true,
        ..Default::default()
    });
    for a in &ms {
        for b in &ms {
            for p in Property::ALL.into_iter().filter(|p| p.is_relative()) {
                let c = classify.decide_relative(p, a, b).unwrap();
                assert_eq!(c, walk.decide_relative(p, a, b).unwrap(), "{p} ({a}, {b})");
                assert_eq!(
                    c,
                    brute.decide_relative(p, a, b).unwrap(),
                    "{p} ({a}, {b}) brute force"
                );
            }
        }
    }
}

#[test]
fn canonical_form_of_sums_depends_on_types() {
    let lim = Limits::default();
    let ms = groups(16);
    for a in &ms {
        for b in &ms {
            let sum = direct_sum(a, b).unwrap().module;
            let rebuilt = direct_sum(&a.canonical().unwrap(), &b.canonical().unwrap())
                .unwrap()
                .module;
            assert_eq!(
                sum.canonical_form().unwrap(),
                rebuilt.canonical_form().unwrap()
            );
            if sum.size() <= 32 {
                assert!(is_isomorphic(
                    &sum,
                    &module_of_type(sum.ring(), &sum.canonical_form().unwrap()).unwrap(),
                    &lim
                )
                .unwrap());
            }
        }
    }
}

#[test]
fn worked_examples() {
    let e = Engine::default();
    let m = z(&[2, 16]);
    let lat = e.lattice(&m).unwrap();
    assert_eq!(lat.direct_summands().len(), 6);
    assert!(e.decide(Property::SipExtending, &m).unwrap());
    assert!(!e.decide(Property::Sip, &m).unwrap());
    assert!(!e.decide(Property::CsRickart, &m).unwrap());
    assert!(!e.decide(Property::DualCsRickart, &m).unwrap());
    for c in [z(&[2]), z(&[16])] {
        assert!(e.decide(Property::DualCsRickart, &c).unwrap());
        assert!(e.decide(Property::CsRickart, &c).unwrap());
    }
}

fn small_orders() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(1i64..=8, 1..=3)
        .prop_filter("order at most 64", |o| o.iter().product::<i64>() <= 64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reports_are_consistent(orders in small_orders()) {
        let m = z(&orders);
        let report = Engine::default().property_report(&m).unwrap();
        prop_assert!(report.check_consistency().is_ok());
    }

    #[test]
    fn canonical_form_ignores_order(mut orders in small_orders()) {
        let a = z(&orders).canonical_form().unwrap();
        orders.reverse();
        prop_assert_eq!(a, z(&orders).canonical_form().unwrap());
    }

    #[test]
    fn homs_satisfy_isomorphism_theorem(a in small_orders(), b in small_orders(), seed in any::<u64>()) {
        let (a, b) = (z(&a), z(&b));
        let lim = Limits::default();
        let space = HomSpace::new(&a, &b).unwrap();
        let count = space.count(&lim).unwrap();
        let f = space.nth((u128::from(seed) % count) as u64, &lim).unwrap().unwrap();
        f.validate_exhaustive().unwrap();
        prop_assert_eq!(f.kernel().len() * f.image().len(), a.size());
        let q = f.cokernel().unwrap();
        prop_assert_eq!(q.module().size() * f.image().len(), b.size());
    }
}
