//! Witnesses that `A → A[f]`, `a ↦ a`, is computationally dense and an
//! inclusion: `m` runs a machine on the rest of its input, `transform b`
//! turns a machine into an ordinary element, and `c` wraps an element as
//! a machine answering it.

use crate::kernel::{kleene_eq, Element, Fuel, Kleene, Pca};
use crate::oracle::ExtendedPca;
use crate::report::{outcome, short, CheckReport};
use crate::syntax::define;

#[derive(Clone, Debug)]
pub struct DensityWitnesses {
    pub m: Element,
    pub c: Element,
}

impl DensityWitnesses {
    pub fn new(base: &dyn Pca) -> Self {
        DensityWitnesses {
            m: density_m(base),
            c: inclusion_c(base),
        }
    }

    /// The `a` for `b`: `a a' ≃ Λ*v. b ([a'] ∗ v)`.
    pub fn transform(&self, base: &dyn Pca, b: &Element) -> Element {
        density_transform(base, b)
    }
}

/// `m ([y] ∗ v) ≃ y v`.
pub fn density_m(base: &dyn Pca) -> Element {
    define(base, &[], r"\u. (at u zero) (drop u (succ zero))").expect("density witness")
}

/// `Λ*x v. b (cons x v)`.
pub fn density_transform(base: &dyn Pca, b: &Element) -> Element {
    define(base, &[("b", b)], r"\x v. b (cons x v)").expect("density transform")
}

/// `Λ*x. pair ⊤ (Λ*v. pair ⊤ x0)`.
pub fn inclusion_c(base: &dyn Pca) -> Element {
    define(base, &[], r"\x. pair true (\v. pair true (at x zero))").expect("inclusion witness")
}

/// `m ([y] ∗ v) ≃ y v` in `A` for every `(y, v)`.
pub fn check_m(
    base: &dyn Pca,
    cases: &[(Element, Vec<Element>)],
    seed: u64,
    fuel: u64,
) -> CheckReport {
    let m = density_m(base);
    let kit = base.kit();
    let mut shared_divergence = 0;
    for (y, items) in cases {
        let mut input = vec![y.clone()];
        input.extend(items.iter().cloned());
        let res = kleene_eq(
            fuel,
            |f| {
                let u = kit.seq(base, &input, f)?;
                base.apply(&m, &u, f)
            },
            |f| {
                let v = kit.seq(base, items, f)?;
                base.apply(y, &v, f)
            },
        );
        match res {
            Ok(Kleene::BothUndefined) => shared_divergence += 1,
            Ok(Kleene::BothDefined(_)) => {}
            Err(why) => {
                let cx = format!("y={} |v|={}: {why}", short(y), items.len());
                return CheckReport::new("m([y] * v) ~ y v", cases.len(), seed, Some(cx));
            }
        }
    }
    let law = format!("m([y] * v) ~ y v ({shared_divergence} both undefined)");
    CheckReport::new(law, cases.len(), seed, None)
}

/// With `a = transform b`: `a a'` is defined in `A` and
/// `m ·^f (a a') ≃ b ·^f a'` in `A[f]`.
pub fn check_transform(
    ext: &ExtendedPca,
    bs: &[Element],
    args: &[Element],
    seed: u64,
    fuel: u64,
) -> CheckReport {
    let base = &**ext.base();
    let m = density_m(base);
    let mut n = 0;
    let mut shared_divergence = 0;
    for b in bs {
        let a = density_transform(base, b);
        for a2 in args {
            n += 1;
            let aa = match base.apply(&a, a2, &mut Fuel::new(fuel)) {
                Ok(v) => v,
                Err(h) => {
                    let cx = format!("b={} a'={}: a a' -> {h}", short(b), short(a2));
                    return CheckReport::new("density transform", n, seed, Some(cx));
                }
            };
            match kleene_eq(fuel, |f| ext.apply(&m, &aa, f), |f| ext.apply(b, a2, f)) {
                Ok(Kleene::BothUndefined) => shared_divergence += 1,
                Ok(Kleene::BothDefined(_)) => {}
                Err(why) => {
                    let cx = format!("b={} a'={}: {why}", short(b), short(a2));
                    return CheckReport::new("m .f (a a') ~ b .f a'", n, seed, Some(cx));
                }
            }
        }
    }
    let law = format!("m .f (a a') ~ b .f a' ({shared_divergence} both undefined)");
    CheckReport::new(law, n, seed, None)
}

/// Condition (in): `c ·^f a = Λ*v. pair ⊤ a` (as an `A`-element) and
/// `m ·^f (c ·^f a) = a`.
pub fn check_inclusion(
    ext: &ExtendedPca,
    samples: &[Element],
    seed: u64,
    fuel: u64,
) -> CheckReport {
    let base = &**ext.base();
    let w = DensityWitnesses::new(base);
    let kit = base.kit();
    for a in samples {
        let ca = ext.apply(&w.c, a, &mut Fuel::new(fuel));
        let answers_a = |x: &Element| -> bool {
            let mut f = Fuel::new(fuel);
            let probes = [vec![], vec![a.clone()], vec![base.k(), base.s()]];
            probes.iter().all(|items| {
                let run = |f: &mut Fuel| -> Result<bool, crate::kernel::Halt> {
                    let v = kit.seq(base, items, f)?;
                    let out = base.apply(x, &v, f)?;
                    Ok(base.apply(&kit.fst, &out, f)? == kit.tru
                        && base.apply(&kit.snd, &out, f)? == *a)
                };
                run(&mut f).unwrap_or(false)
            })
        };
        if !matches!(&ca, Ok(x) if answers_a(x)) {
            let cx = format!("a={} c .f a -> {}", short(a), outcome(&ca));
            return CheckReport::new("c .f a = \\v. p T a", samples.len(), seed, Some(cx));
        }
        let back = ext.apply(&w.m, ca.as_ref().expect("checked"), &mut Fuel::new(fuel));
        if back.as_ref() != Ok(a) {
            let cx = format!("a={} m .f (c .f a) -> {}", short(a), outcome(&back));
            return CheckReport::new("m .f (c .f a) = a", samples.len(), seed, Some(cx));
        }
    }
    CheckReport::new("m .f (c .f a) = a", samples.len(), seed, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::TermPca;

    #[test]
    fn m_runs_the_head_on_the_tail() {
        let a = TermPca::enriched();
        let kit = a.kit();
        let m = density_m(&a);
        let mut fuel = Fuel::new(100_000);
        let u = kit.seq(&a, &[a.k(), a.s()], &mut fuel).unwrap();
        let tail = kit.seq(&a, &[a.s()], &mut fuel).unwrap();
        assert_eq!(
            a.apply(&m, &u, &mut fuel),
            a.apply(&a.k(), &tail, &mut fuel)
        );
    }

    #[test]
    fn c_applied_in_a_is_a_wrapped_answer() {
        let a = TermPca::enriched();
        let kit = a.kit();
        let c = inclusion_c(&a);
        let mut fuel = Fuel::new(100_000);
        let u = kit.seq(&a, &[a.k()], &mut fuel).unwrap();
        let out = a.apply(&c, &u, &mut fuel).unwrap();
        assert_eq!(a.apply(&kit.fst, &out, &mut fuel), Ok(kit.tru.clone()));
    }
}
