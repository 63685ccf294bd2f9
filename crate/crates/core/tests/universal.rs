use std::sync::Arc;
use std::time::Instant;

use pca_core::kernel::{Element, Fuel, Pca, TermPca};
use pca_core::morphisms::{check_iso, check_realizer, compose, eq_oracle, identity};
use pca_core::oracle::{commutation, iota, lift_morphism, ExtendedPca, OracleFn};

const F: u64 = 100_000;

fn base() -> Arc<dyn Pca> {
    Arc::new(TermPca::enriched())
}

fn succ_table(a: &dyn Pca) -> OracleFn {
    let kit = a.kit();
    let num = |n| kit.numeral(a, n, &mut Fuel::new(F)).unwrap();
    OracleFn::from_table("succ", (0..16).map(|n| (num(n), num(n + 1)))).unwrap()
}

#[test]
fn lift_of_iota_realizes_application() {
    let a = base();
    let ext = Arc::new(ExtendedPca::new(a.clone(), Arc::new(succ_table(&*a))));
    let t = Instant::now();
    let (lifted, _) = lift_morphism(&iota(&ext), &ext, ext.representer()).unwrap();
    eprintln!("build lift: {:?}", t.elapsed());
    let t = Instant::now();
    let r = check_realizer(&lifted, 20, 1, 1_000_000);
    eprintln!("realizer 20: {:?} {r}", t.elapsed());
    assert!(r.passed(), "{r}");
}

#[test]
fn projection_oracle_collapses() {
    let a = base();
    let fst = a.kit().fst.clone();
    let pa = a.clone();
    let p0 = Arc::new(OracleFn::builtin(
        "p0",
        move |x: &Element, fuel: &mut Fuel| pa.apply(&pa.kit().fst, x, fuel).map(Some),
    ));
    let t = Instant::now();
    let (ext, down, up) = pca_core::oracle::collapse(a.clone(), p0, &fst).unwrap();
    let r = check_realizer(&down, 20, 2, 1_000_000);
    eprintln!("collapse realizer 20: {:?} {r}", t.elapsed());
    assert!(r.passed(), "{r}");
    let id_a = identity(a.clone());
    let ia = a.kit().id.clone();
    let r = check_iso(&compose(&down, &up), &id_a, &ia, &ia, 20, 3, F);
    assert!(r.passed(), "{r}");
    let id_ext = identity(ext.clone());
    let ie = ext.kit().id.clone();
    let r = check_iso(&compose(&up, &down), &id_ext, &ie, &ie, 20, 3, F);
    assert!(r.passed(), "{r}");
}

#[test]
fn commutation_morphisms() {
    let a = base();
    let f = Arc::new(succ_table(&*a));
    let g = Arc::new(eq_oracle(a.clone()));
    let t = Instant::now();
    let c = commutation(a, f, g).unwrap();
    eprintln!("build commutation: {:?}", t.elapsed());
    let t = Instant::now();
    let r = check_realizer(&c.there, 20, 4, 1_000_000_000);
    eprintln!("there realizer 20: {:?} {r}", t.elapsed());
    assert!(r.passed(), "{r}");
}

#[test]
fn u_step_preserves_the_dialogue() {
    let a = base();
    let ext = Arc::new(ExtendedPca::new(a.clone(), Arc::new(succ_table(&*a))));
    let (_, parts) = lift_morphism(&iota(&ext), &ext, ext.representer()).unwrap();
    let four = pca_core::syntax::define(
        &*a,
        &[],
        r"\u. if (numeq (lh u) num:5) (\z. pair true (at u num:4)) (\z. pair false (at u (pred (lh u)))) I",
    )
    .unwrap();
    let kit = a.kit();
    let pairs: Vec<(Element, Element)> = (0..13)
        .map(|n| {
            (
                four.clone(),
                kit.numeral(&*a, n, &mut Fuel::new(F)).unwrap(),
            )
        })
        .collect();
    let t = Instant::now();
    let r = pca_core::oracle::check_u_step(
        &iota(&ext),
        ext.representer(),
        &parts,
        &pairs,
        50,
        10_000_000,
    );
    eprintln!("u-step 50: {:?} {r}", t.elapsed());
    assert!(r.passed(), "{r}");
}
