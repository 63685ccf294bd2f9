//! Applicative morphisms between PCAs, the preorder on them, decidability,
//! representability, and the preorder `≤_A` on partial endofunctions.
//!
//! Every law is checked on samples, never proven; reports carry the seed.

use std::fmt;
use std::sync::Arc;

use crate::kernel::{eval_apps, sample, Element, Fuel, Halt, Pca, Rng};
use crate::oracle::{ExtendedPca, OracleFn};
use crate::report::{outcome, short, CheckReport};
use crate::syntax::define;

/// `a ↦ γ(a)`, a nonempty finite set of target elements.
pub type MapFn = Arc<dyn Fn(&Element) -> Vec<Element> + Send + Sync>;

/// Sampled applications attempted per requested defined instance.
const ATTEMPTS_PER_SAMPLE: usize = 20;

#[derive(Clone)]
pub struct ApplicativeMorphism {
    pub name: String,
    pub source: Arc<dyn Pca>,
    pub target: Arc<dyn Pca>,
    map: MapFn,
    pub realizer: Element,
    pub decider: Option<Element>,
}

impl fmt::Debug for ApplicativeMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} -> {}",
            self.name,
            self.source.name(),
            self.target.name()
        )
    }
}

impl ApplicativeMorphism {
    pub fn new(
        name: impl Into<String>,
        source: Arc<dyn Pca>,
        target: Arc<dyn Pca>,
        map: MapFn,
        realizer: Element,
        decider: Option<Element>,
    ) -> Self {
        ApplicativeMorphism {
            name: name.into(),
            source,
            target,
            map,
            realizer,
            decider,
        }
    }

    /// `a ↦ {a}` between models sharing a carrier.
    pub fn identity_on_elements(
        name: impl Into<String>,
        source: Arc<dyn Pca>,
        target: Arc<dyn Pca>,
        realizer: Element,
        decider: Option<Element>,
    ) -> Self {
        ApplicativeMorphism::new(
            name,
            source,
            target,
            Arc::new(|a| vec![a.clone()]),
            realizer,
            decider,
        )
    }

    pub fn image(&self, a: &Element) -> Vec<Element> {
        (self.map)(a)
    }

    /// Some element of `γ(a)`.
    pub fn pick(&self, a: &Element) -> Element {
        self.image(a)
            .into_iter()
            .next()
            .expect("applicative morphisms are total")
    }

    pub fn map_fn(&self) -> MapFn {
        self.map.clone()
    }

    pub fn with_decider(mut self, d: Element) -> Self {
        self.decider = Some(d);
        self
    }
}

/// `id_A`: `a ↦ {a}`, realized by `Λ*xy.xy` and decided by `I`.
pub fn identity(pca: Arc<dyn Pca>) -> ApplicativeMorphism {
    let realizer = define(&*pca, &[], r"\x y. x y").expect("identity realizer");
    let decider = pca.kit().id.clone();
    ApplicativeMorphism::identity_on_elements(
        format!("id_{}", pca.name()),
        pca.clone(),
        pca,
        realizer,
        Some(decider),
    )
}

/// `δ ∘ γ`, `a ↦ ⋃_{b ∈ γ(a)} δ(b)`.
///
/// With `e ∈ δ(r_γ)` the composite is realized by `Λ*xy. r_δ (r_δ e x) y`;
/// when both are decidable, `Λ*x. d_δ (r_δ e' x)` with `e' ∈ δ(d_γ)` decides it.
pub fn compose(delta: &ApplicativeMorphism, gamma: &ApplicativeMorphism) -> ApplicativeMorphism {
    let c = &*delta.target;
    let e = delta.pick(&gamma.realizer);
    let realizer = define(
        c,
        &[("rd", &delta.realizer), ("e", &e)],
        r"\x y. rd (rd e x) y",
    )
    .expect("composite realizer");
    let decider = match (&gamma.decider, &delta.decider) {
        (Some(dg), Some(dd)) => {
            let e2 = delta.pick(dg);
            Some(
                define(
                    c,
                    &[("rd", &delta.realizer), ("dd", dd), ("e", &e2)],
                    r"\x. dd (rd e x)",
                )
                .expect("composite decider"),
            )
        }
        _ => None,
    };
    let (gm, dm) = (gamma.map.clone(), delta.map.clone());
    let map: MapFn = Arc::new(move |a| {
        let mut out: Vec<Element> = Vec::new();
        for b in gm(a) {
            for c in dm(&b) {
                if !out.contains(&c) {
                    out.push(c);
                }
            }
        }
        out
    });
    ApplicativeMorphism::new(
        format!("{}.{}", delta.name, gamma.name),
        gamma.source.clone(),
        delta.target.clone(),
        map,
        realizer,
        decider,
    )
}

/// Draws `n` pairs `(a, a')` of source elements with `a a'` defined.
pub fn defined_pairs(
    pca: &dyn Pca,
    rng: &mut Rng,
    n: usize,
    fuel: u64,
) -> Vec<(Element, Element, Element)> {
    let mut out = Vec::with_capacity(n);
    for _ in 0..n * ATTEMPTS_PER_SAMPLE {
        if out.len() == n {
            break;
        }
        let a = sample::element(pca, rng);
        let b = sample::element(pca, rng);
        if let Ok(c) = pca.apply(&a, &b, &mut Fuel::new(fuel)) {
            out.push((a, b, c));
        }
    }
    out
}

/// Def. of realizer: `a a' = c`, `b ∈ γ(a)`, `b' ∈ γ(a')` imply `r b b' ∈ γ(c)`.
pub fn check_realizer(
    gamma: &ApplicativeMorphism,
    samples: usize,
    seed: u64,
    fuel: u64,
) -> CheckReport {
    let mut rng = crate::kernel::rng(seed);
    let pairs = defined_pairs(&*gamma.source, &mut rng, samples, fuel);
    check_realizer_on(gamma, &pairs, seed, fuel)
}

/// [`check_realizer`] over given defined applications `(a, a', a a')`.
pub fn check_realizer_on(
    gamma: &ApplicativeMorphism,
    pairs: &[(Element, Element, Element)],
    seed: u64,
    fuel: u64,
) -> CheckReport {
    let law = format!("realizer {}", gamma.name);
    let target = &*gamma.target;
    for (a, a2, c) in pairs {
        let want = gamma.image(c);
        for b in gamma.image(a) {
            for b2 in gamma.image(a2) {
                let r = eval_apps(
                    target,
                    &gamma.realizer,
                    &[b.clone(), b2.clone()],
                    &mut Fuel::new(fuel),
                );
                let ok = matches!(&r, Ok(v) if want.contains(v));
                if !ok {
                    let cx = format!(
                        "a={} a'={} aa'={} r b b' -> {}",
                        short(a),
                        short(a2),
                        short(c),
                        outcome(&r)
                    );
                    return CheckReport::new(law, pairs.len(), seed, Some(cx));
                }
            }
        }
    }
    if pairs.is_empty() {
        return CheckReport::new(law, 0, seed, Some("no defined applications sampled".into()));
    }
    CheckReport::new(law, pairs.len(), seed, None)
}

/// `γ ≼ δ` witnessed by `s`: `s b ∈ δ(a)` for sampled `a` and every `b ∈ γ(a)`.
pub fn check_preorder(
    gamma: &ApplicativeMorphism,
    delta: &ApplicativeMorphism,
    witness: &Element,
    samples: usize,
    seed: u64,
    fuel: u64,
) -> CheckReport {
    let law = format!("{} <= {}", gamma.name, delta.name);
    let mut rng = crate::kernel::rng(seed);
    let target = &*gamma.target;
    for _ in 0..samples {
        let a = sample::element(&*gamma.source, &mut rng);
        let want = delta.image(&a);
        for b in gamma.image(&a) {
            let r = target.apply(witness, &b, &mut Fuel::new(fuel));
            if !matches!(&r, Ok(v) if want.contains(v)) {
                let cx = format!("a={} b={} s b -> {}", short(&a), short(&b), outcome(&r));
                return CheckReport::new(law, samples, seed, Some(cx));
            }
        }
    }
    CheckReport::new(law, samples, seed, None)
}

/// `γ ≅ δ`: both preorder directions.
pub fn check_iso(
    gamma: &ApplicativeMorphism,
    delta: &ApplicativeMorphism,
    s1: &Element,
    s2: &Element,
    samples: usize,
    seed: u64,
    fuel: u64,
) -> CheckReport {
    let law = format!("{} ~= {}", gamma.name, delta.name);
    let there = check_preorder(gamma, delta, s1, samples, seed, fuel);
    let back = check_preorder(delta, gamma, s2, samples, seed, fuel);
    let cx = there.counterexample.or(back.counterexample);
    CheckReport::new(law, samples, seed, cx)
}

/// Decidability: `d b = ⊤_B` for all `b ∈ γ(⊤_A)` and `d b = ⊥_B` for all `b ∈ γ(⊥_A)`.
pub fn check_decidable(gamma: &ApplicativeMorphism, d: &Element, fuel: u64) -> CheckReport {
    let law = format!("decider {}", gamma.name);
    let (sk, tk) = (gamma.source.kit(), gamma.target.kit());
    let mut n = 0;
    for (src, want) in [(&sk.tru, &tk.tru), (&sk.fls, &tk.fls)] {
        for b in gamma.image(src) {
            n += 1;
            let r = gamma.target.apply(d, &b, &mut Fuel::new(fuel));
            if r.as_ref() != Ok(want) {
                let cx = format!(
                    "b={} d b -> {} expected {}",
                    short(&b),
                    outcome(&r),
                    short(want)
                );
                return CheckReport::new(law, n, 0, Some(cx));
            }
        }
    }
    CheckReport::new(law, n, 0, None)
}

/// `f` representable w.r.t. `γ` by `rf`: `rf b ∈ γ(f(a))` for `a ∈ dom(f)`, `b ∈ γ(a)`.
///
/// Table oracles are checked on every entry; builtins on `samples` sampled inputs.
pub fn check_representable(
    gamma: &ApplicativeMorphism,
    f: &OracleFn,
    rf: &Element,
    samples: usize,
    seed: u64,
    fuel: u64,
) -> CheckReport {
    let law = format!("representable {} via {}", f.name(), gamma.name);
    let points = domain_points(&*gamma.source, f, samples, seed, fuel);
    for (a, fa) in &points {
        let want = gamma.image(fa);
        for b in gamma.image(a) {
            let r = gamma.target.apply(rf, &b, &mut Fuel::new(fuel));
            if !matches!(&r, Ok(v) if want.contains(v)) {
                let cx = format!("a={} f(a)={} rf b -> {}", short(a), short(fa), outcome(&r));
                return CheckReport::new(law, points.len(), seed, Some(cx));
            }
        }
    }
    CheckReport::new(law, points.len(), seed, None)
}

/// Points of `dom(f)` with their values: all table entries, plus sampled
/// carrier elements on which a builtin answers.
pub fn domain_points(
    carrier: &dyn Pca,
    f: &OracleFn,
    samples: usize,
    seed: u64,
    fuel: u64,
) -> Vec<(Element, Element)> {
    let mut pts: Vec<(Element, Element)> = f.entries().to_vec();
    if f.has_builtin() {
        let mut rng = crate::kernel::rng(seed);
        for _ in 0..samples {
            let a = sample::element(carrier, &mut rng);
            if let Ok(Some(v)) = f.call(&a, &mut Fuel::new(fuel)) {
                pts.push((a, v));
            }
        }
    }
    pts
}

/// `f ≤_A g` witnessed by `w ∈ A[g]`: `w ·^g a = f(a)` on the domain points of `f`.
pub fn turing_leq(
    f: &OracleFn,
    ag: &ExtendedPca,
    witness: &Element,
    samples: usize,
    seed: u64,
    fuel: u64,
) -> CheckReport {
    let law = format!("{} <=_A {}", f.name(), ag.oracle().name());
    let points = domain_points(&**ag.base(), f, samples, seed, fuel);
    if points.is_empty() {
        return CheckReport::new(law, 0, seed, Some("empty domain sample".into()));
    }
    for (a, fa) in &points {
        let r = ag.apply(witness, a, &mut Fuel::new(fuel));
        if r.as_ref() != Ok(fa) {
            let cx = format!("a={} f(a)={} w a -> {}", short(a), short(fa), outcome(&r));
            return CheckReport::new(law, points.len(), seed, Some(cx));
        }
    }
    CheckReport::new(law, points.len(), seed, None)
}

/// `x ↦ ⊤` if `fst x = snd x`, else `⊥`; total up to the evaluation budget of the caller.
pub fn eq_oracle(pca: Arc<dyn Pca>) -> OracleFn {
    OracleFn::builtin(
        "eq",
        move |x: &Element, fuel: &mut Fuel| -> Result<Option<Element>, Halt> {
            let kit = pca.kit();
            let l = pca.apply(&kit.fst, x, fuel)?;
            let r = pca.apply(&kit.snd, x, fuel)?;
            Ok(Some(if l == r {
                kit.tru.clone()
            } else {
                kit.fls.clone()
            }))
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::TermPca;

    const F: u64 = 100_000;

    fn model() -> Arc<dyn Pca> {
        Arc::new(TermPca::enriched())
    }

    #[test]
    fn identity_maps_to_singletons_and_realizes() {
        let a = model();
        let id = identity(a.clone());
        assert_eq!(id.image(&a.k()), vec![a.k()]);
        assert!(check_realizer(&id, 50, 1, F).passed());
        assert!(check_decidable(&id, &a.kit().id, F).passed());
    }

    #[test]
    fn composition_with_identity_keeps_the_map() {
        let a = model();
        let id = identity(a.clone());
        let twice = compose(&id, &id);
        let mut rng = crate::kernel::rng(3);
        for _ in 0..20 {
            let x = sample::element(&*a, &mut rng);
            assert_eq!(twice.image(&x), id.image(&x));
        }
        assert!(check_realizer(&twice, 50, 2, F).passed());
        assert!(check_decidable(&twice, twice.decider.as_ref().unwrap(), F).passed());
    }

    #[test]
    fn preorder_reflexive_and_falsifiable() {
        let a = model();
        let id = identity(a.clone());
        assert!(check_preorder(&id, &id, &a.kit().id, 50, 4, F).passed());
        let bad = check_preorder(&id, &id, &a.kit().not, 50, 4, F);
        assert!(!bad.passed());
        assert!(bad.to_string().starts_with("FAIL"));
    }

    #[test]
    fn wrong_decider_fails() {
        let a = model();
        let id = identity(a.clone());
        assert!(!check_decidable(&id, &a.kit().not, F).passed());
    }

    #[test]
    fn eq_oracle_on_pairs() {
        let a = model();
        let f = eq_oracle(a.clone());
        let kit = a.kit();
        let pkk = eval_apps(&*a, &kit.pair, &[a.k(), a.k()], &mut Fuel::new(F)).unwrap();
        let pks = eval_apps(&*a, &kit.pair, &[a.k(), a.s()], &mut Fuel::new(F)).unwrap();
        assert_eq!(f.call(&pkk, &mut Fuel::new(F)), Ok(Some(kit.tru.clone())));
        assert_eq!(f.call(&pks, &mut Fuel::new(F)), Ok(Some(kit.fls.clone())));
    }

    #[test]
    fn identity_function_is_representable_by_i() {
        let a = model();
        let id = identity(a.clone());
        let kit = a.kit();
        let ident = OracleFn::builtin("id", |x: &Element, _: &mut Fuel| Ok(Some(x.clone())));
        assert!(check_representable(&id, &ident, &kit.id, 50, 5, F).passed());
        let entries: Vec<_> = (0..16)
            .map(|n| {
                (
                    kit.numeral(&*a, n, &mut Fuel::new(F)).unwrap(),
                    kit.numeral(&*a, n + 1, &mut Fuel::new(F)).unwrap(),
                )
            })
            .collect();
        let succ = OracleFn::from_table("succ", entries).unwrap();
        assert!(check_representable(&id, &succ, &kit.succ, 0, 5, F).passed());
        assert!(!check_representable(&id, &succ, &kit.pred, 0, 5, F).passed());
    }
}
