use std::sync::Arc;

use pca_core::kernel::{check_axioms, eval_apps, sample, Element, Fuel, Pca, TermPca};
use pca_core::oracle::{
    double_query_witness, iota, nontotal_witness, ExtendedPca, OracleFn, Outcome,
};
use pca_core::report::short;

const F: u64 = 100_000;

fn base() -> Arc<dyn Pca> {
    Arc::new(TermPca::enriched())
}

fn succ_table(a: &dyn Pca) -> OracleFn {
    let kit = a.kit();
    let num = |n| kit.numeral(a, n, &mut Fuel::new(F)).unwrap();
    OracleFn::from_table("succ", (0..16).map(|n| (num(n), num(n + 1)))).unwrap()
}

fn extended() -> (Arc<dyn Pca>, Arc<ExtendedPca>) {
    let a = base();
    let f = Arc::new(succ_table(&*a));
    let ext = Arc::new(ExtendedPca::new(a.clone(), f));
    (a, ext)
}

#[test]
fn kf_answers_first_argument() {
    let (a, ext) = extended();
    let mut fuel = Fuel::new(F);
    let v = eval_apps(&*ext, &ext.k(), &[a.s(), a.k()], &mut fuel).unwrap();
    assert_eq!(v, a.s());
}

#[test]
fn sf_composes_applications() {
    let (a, ext) = extended();
    let kit = ext.kit();
    // S_f K_f K_f x = x
    let i = eval_apps(&*ext, &ext.s(), &[ext.k(), ext.k()], &mut Fuel::new(F)).unwrap();
    assert_eq!(ext.apply(&i, &a.s(), &mut Fuel::new(F)), Ok(a.s()));
    assert_eq!(ext.apply(&kit.id, &a.k(), &mut Fuel::new(F)), Ok(a.k()));
}

#[test]
fn representer_asks_once() {
    let (a, ext) = extended();
    let kit = a.kit();
    for n in 0..16 {
        let x = kit.numeral(&*a, n, &mut Fuel::new(F)).unwrap();
        let (r, trace) = ext.dialogue_apply(ext.representer(), &x, &mut Fuel::new(F));
        assert_eq!(r, kit.numeral(&*a, n + 1, &mut Fuel::new(F)));
        assert_eq!(trace.steps.len(), 1);
        assert!(ext
            .replay(ext.representer(), &x, &trace, &mut Fuel::new(F))
            .is_ok());
    }
    let (_, trace) = ext.dialogue_apply(ext.representer(), &a.k(), &mut Fuel::new(F));
    assert_eq!(trace.outcome, Outcome::QueryOutsideDomain(a.k()));
}

#[test]
fn double_query_composes_twice() {
    let (a, ext) = extended();
    let kit = a.kit();
    let w = double_query_witness(&*a);
    let x = kit.numeral(&*a, 3, &mut Fuel::new(F)).unwrap();
    let (r, trace) = ext.dialogue_apply(&w, &x, &mut Fuel::new(F));
    assert_eq!(r, kit.numeral(&*a, 5, &mut Fuel::new(F)));
    assert_eq!(trace.steps.len(), 2);
}

#[test]
fn nontotal_never_answers() {
    let (a, ext) = extended();
    let w = nontotal_witness(&*a);
    let total = Arc::new(OracleFn::builtin("const", |_: &Element, _: &mut Fuel| {
        Ok(Some(Element::atom(pca_core::kernel::Atom::K)))
    }));
    let ext2 = ExtendedPca::new(a.clone(), total);
    let mut rng = pca_core::kernel::rng(1);
    for _ in 0..20 {
        let b = sample::element(&*a, &mut rng);
        for fuel in [1_000, 10_000] {
            assert!(ext.apply(&w, &b, &mut Fuel::new(fuel)).is_err());
            assert!(ext2.apply(&w, &b, &mut Fuel::new(fuel)).is_err());
        }
    }
    let b = a.k();
    let (_, t4) = ext2.dialogue_apply(&w, &b, &mut Fuel::new(10_000));
    let (_, t5) = ext2.dialogue_apply(&w, &b, &mut Fuel::new(100_000));
    assert!(t5.steps.len() > t4.steps.len());
}

#[test]
fn axioms_hold_in_extension() {
    let (_, ext) = extended();
    let t = std::time::Instant::now();
    for r in check_axioms(&*ext, 50, 7, 1_000_000) {
        assert!(r.passed(), "{r}");
    }
    eprintln!("axioms on A[f], 50 samples: {:?}", t.elapsed());
}

#[test]
fn iota_morphism_laws() {
    let (_, ext) = extended();
    let i = iota(&ext);
    let t = std::time::Instant::now();
    let r = pca_core::morphisms::check_realizer(&i, 50, 3, F);
    assert!(r.passed(), "{r}");
    let d = i.decider.clone().unwrap();
    let r = pca_core::morphisms::check_decidable(&i, &d, F);
    assert!(r.passed(), "{r}");
    eprintln!("iota laws: {:?}", t.elapsed());
}

fn machines(a: &dyn Pca) -> Vec<Element> {
    let kit = a.kit();
    vec![
        pca_core::oracle::build_kf(a),
        pca_core::oracle::representer(a),
        double_query_witness(a),
        pca_core::oracle::lift(a, &kit.succ, 1),
        pca_core::oracle::iota_realizer(a),
        a.k(),
    ]
}

fn agree_on_machines(pca: &dyn Pca, native: &Element, compiled: &Element, seed: u64, fuel: u64) {
    let mut rng = pca_core::kernel::rng(seed);
    let ms = machines(pca);
    let kit = pca.kit();
    let mut defined = 0;
    for x in &ms {
        for y in &ms {
            for len in 1..4 {
                let items: Vec<Element> = (0..len)
                    .map(|i| {
                        if i % 2 == 0 {
                            kit.numeral(pca, i as u64, &mut Fuel::new(F)).unwrap()
                        } else {
                            sample::element(pca, &mut rng)
                        }
                    })
                    .collect();
                let u = kit.seq(pca, &items, &mut Fuel::new(F)).unwrap();
                let run = |t: &Element, f: &mut Fuel| {
                    eval_apps(pca, t, &[x.clone(), y.clone(), u.clone()], f)
                };
                match pca_core::kernel::kleene_eq(fuel, |f| run(native, f), |f| run(compiled, f)) {
                    Ok(pca_core::kernel::Kleene::BothDefined(_)) => defined += 1,
                    Ok(_) => {}
                    Err(why) => panic!("x={} y={} u={}: {why}", short(x), short(y), short(&u)),
                }
            }
        }
    }
    assert!(defined > 20, "only {defined} defined runs");
}

#[test]
fn native_t_matches_compiled_t() {
    let a = base();
    let native = a.native_t().unwrap();
    agree_on_machines(
        &*a,
        &native,
        &pca_core::oracle::compiled_t_combinator(&*a),
        11,
        1_000_000,
    );
}

#[test]
fn relayed_t_matches_compiled_t_over_extension() {
    let (_, ext) = extended();
    let native = ext.native_t().unwrap();
    let t = std::time::Instant::now();
    let compiled = pca_core::oracle::compiled_t_combinator(&*ext);
    eprintln!("compiled T over A[f]: {:?}", t.elapsed());
    agree_on_machines(&*ext, &native, &compiled, 12, 20_000_000);
}
