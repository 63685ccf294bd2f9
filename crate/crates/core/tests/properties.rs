use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use pca_core::assemblies::{check_functoriality, Assembly, AssemblyMap};
use pca_core::bracket::check_completeness;
use pca_core::kernel::{rng, sample, Element, Fuel, NumericPca, Pca, TermPca};
use pca_core::morphisms::{check_preorder, check_realizer_on, compose, defined_pairs, identity};
use pca_core::oracle::{
    check_against_dialogue, iota, lift_morphism, ExtendedPca, OracleFn, Outcome,
};
use pca_core::suite::shift_table;

const F: u64 = 100_000;

fn term() -> Arc<dyn Pca> {
    static A: OnceLock<Arc<dyn Pca>> = OnceLock::new();
    A.get_or_init(|| Arc::new(TermPca::enriched())).clone()
}

fn pure() -> Arc<dyn Pca> {
    static A: OnceLock<Arc<dyn Pca>> = OnceLock::new();
    A.get_or_init(|| Arc::new(TermPca::pure())).clone()
}

fn succ() -> Arc<OracleFn> {
    static F16: OnceLock<Arc<OracleFn>> = OnceLock::new();
    F16.get_or_init(|| Arc::new(shift_table(&*term(), "succ", 1, 16)))
        .clone()
}

fn extended() -> Arc<ExtendedPca> {
    static E: OnceLock<Arc<ExtendedPca>> = OnceLock::new();
    E.get_or_init(|| Arc::new(ExtendedPca::new(term(), succ())))
        .clone()
}

fn element(pca: &dyn Pca, seed: u64) -> Element {
    sample::element(pca, &mut rng(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn apply_is_deterministic(s1: u64, s2: u64, fuel in 1u64..20_000) {
        for a in [term(), pure()] {
            let (x, y) = (element(&*a, s1), element(&*a, s2));
            let r1 = a.apply(&x, &y, &mut Fuel::new(fuel));
            let r2 = a.apply(&x, &y, &mut Fuel::new(fuel));
            prop_assert_eq!(r1, r2);
        }
    }

    #[test]
    fn values_survive_more_fuel(s1: u64, s2: u64, fuel in 1u64..5_000, extra in 0u64..100_000) {
        let a = term();
        let (x, y) = (element(&*a, s1), element(&*a, s2));
        if let Ok(v) = a.apply(&x, &y, &mut Fuel::new(fuel)) {
            prop_assert_eq!(a.apply(&x, &y, &mut Fuel::new(fuel + extra)), Ok(v));
        }
    }

    #[test]
    fn equality_is_a_congruence(s1: u64, s2: u64) {
        let a = Arc::new(TermPca::enriched());
        let n = NumericPca::new(a.clone());
        let (x, y) = (element(&*a, s1), element(&*a, s2));
        // A structurally equal copy built independently through the numeric coding.
        let copy = |e: &Element| n.decode(&n.encode(e).unwrap()).unwrap();
        let (x2, y2) = (copy(&x), copy(&y));
        prop_assert_eq!(&x, &x2);
        prop_assert_eq!(&x2, &x);
        prop_assert_eq!(x == y, y == x);
        prop_assert_eq!(a.apply(&x, &y, &mut Fuel::new(F)), a.apply(&x2, &y2, &mut Fuel::new(F)));
    }

    #[test]
    fn lambda_star_is_complete(seed: u64, arity in 1usize..=3) {
        for r in check_completeness(&*term(), arity, 8, seed, F) {
            prop_assert!(r.passed(), "{}", r);
        }
    }

    #[test]
    fn sequences_round_trip(seeds in prop::collection::vec(any::<u64>(), 0..8)) {
        for a in [term(), pure()] {
            let kit = a.kit();
            let items: Vec<Element> = seeds.iter().map(|&s| element(&*a, s)).collect();
            let u = kit.seq(&*a, &items, &mut Fuel::new(F)).unwrap();
            prop_assert_eq!(kit.decode_seq(&*a, &u, &mut Fuel::new(F)), Ok(Some(items)));
        }
    }

    #[test]
    fn concatenation_is_associative(l1 in 0usize..4, l2 in 0usize..4, l3 in 0usize..4, seed: u64) {
        for a in [term(), pure()] {
            let kit = a.kit();
            let mut r = rng(seed);
            let mut code = |n| {
                let xs = sample::elements(&*a, &mut r, n);
                kit.seq(&*a, &xs, &mut Fuel::new(F)).unwrap()
            };
            let (u, v, w) = (code(l1), code(l2), code(l3));
            let cat = |x: &Element, y: &Element| pca_core::kernel::eval_apps(&*a, &kit.cat, &[x.clone(), y.clone()], &mut Fuel::new(F)).unwrap();
            prop_assert_eq!(cat(&cat(&u, &v), &w), cat(&u, &cat(&v, &w)));
        }
    }

    #[test]
    fn combinators_agree_with_the_dialogue_loop(seed: u64) {
        let r = check_against_dialogue(&extended(), 4, seed, 1_000_000);
        prop_assert!(r.passed(), "{}", r);
    }

    #[test]
    fn traces_replay_with_their_prefixes(s1: u64, n in 0u64..16) {
        let ext = extended();
        let a = term();
        let kit = a.kit();
        let machines = [ext.representer().clone(), pca_core::oracle::double_query_witness(&*a), element(&*a, s1)];
        let b = kit.numeral(&*a, n.min(13), &mut Fuel::new(F)).unwrap();
        for m in &machines {
            let (_, trace) = ext.dialogue_apply(m, &b, &mut Fuel::new(F));
            prop_assert!(ext.replay(m, &b, &trace, &mut Fuel::new(F)).is_ok());
            for k in 0..trace.steps.len() {
                let mut prefix = trace.clone();
                prefix.steps.truncate(k);
                prefix.outcome = Outcome::FuelExhausted;
                prop_assert!(ext.replay(m, &b, &prefix, &mut Fuel::new(F)).is_ok());
            }
        }
    }

    #[test]
    fn larger_oracles_keep_values_and_traces(s1: u64, n in 0u64..8) {
        let a = term();
        let small = Arc::new(shift_table(&*a, "succ8", 1, 8));
        let f = ExtendedPca::new(a.clone(), small.clone());
        let g = ExtendedPca::new(a.clone(), succ());
        prop_assert!(small.table_subset_of(&succ()));
        let kit = a.kit();
        let inputs = [kit.numeral(&*a, n, &mut Fuel::new(F)).unwrap(), element(&*a, s1)];
        let machines = [f.representer().clone(), pca_core::oracle::double_query_witness(&*a), element(&*a, s1 ^ 1)];
        for m in &machines {
            for b in &inputs {
                let (r, t) = f.dialogue_apply(m, b, &mut Fuel::new(F));
                if r.is_ok() {
                    let (r2, t2) = g.dialogue_apply(m, b, &mut Fuel::new(F));
                    prop_assert_eq!(r, r2);
                    prop_assert_eq!(t, t2);
                }
            }
        }
    }

    #[test]
    fn lift_commutes_with_iota_on_the_nose(s1: u64) {
        let ext = extended();
        let gamma = iota(&ext);
        let (lifted, _) = lift_morphism(&gamma, &ext, ext.representer()).unwrap();
        let x = element(&*term(), s1);
        let through: Vec<Element> = iota(&ext).image(&x).iter().flat_map(|b| lifted.image(b)).collect();
        prop_assert_eq!(through, gamma.image(&x));
    }

    #[test]
    fn composition_preserves_realizers(seed: u64) {
        let ext = extended();
        let i = iota(&ext);
        let id = identity(term());
        let pairs = defined_pairs(&*term(), &mut rng(seed), 6, F);
        for g in [&i, &id] {
            prop_assert!(check_realizer_on(g, &pairs, seed, F).passed());
        }
        let c = compose(&i, &id);
        let r = check_realizer_on(&c, &pairs, seed, 1_000_000);
        prop_assert!(r.passed(), "{}", r);
        let refl = check_preorder(&c, &c, &ext.kit().id, 6, seed, F);
        prop_assert!(refl.passed(), "{}", refl);
    }

    #[test]
    fn gamma_star_preserves_composition(f1 in 0usize..2, f2 in 0usize..2) {
        let a = term();
        let kit = a.kit();
        let bools = Assembly::new(a.clone(), vec!["t".into(), "f".into()], vec![vec![kit.tru.clone()], vec![kit.fls.clone()]]).unwrap();
        let maps = [
            AssemblyMap { func: vec![0, 1], tracker: kit.id.clone() },
            AssemblyMap { func: vec![1, 0], tracker: kit.not.clone() },
        ];
        let r = check_functoriality(&iota(&extended()), &bools, &bools, &bools, &maps[f1], &maps[f2], 1_000_000);
        prop_assert!(r.passed(), "{}", r);
    }
}

#[test]
fn kf_and_sf_do_not_depend_on_the_oracle() {
    let a = term();
    let other = Arc::new(OracleFn::from_table("swap", [(a.k(), a.s())]).unwrap());
    let e1 = ExtendedPca::new(a.clone(), succ());
    let e2 = ExtendedPca::new(a, other);
    assert_eq!(e1.k(), e2.k());
    assert_eq!(e1.s(), e2.s());
}
