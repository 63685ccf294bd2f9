//! The universal property of `ι_f : A → A[f]`: a decidable `γ : A → B` under
//! which `f` is representable factors through `ι_f`.

use std::sync::Arc;

use super::ExtendedPca;
use crate::kernel::{eval_apps, kleene_eq, Element, Fuel, Halt, Pca};
use crate::morphisms::ApplicativeMorphism;
use crate::report::{short, CheckReport};
use crate::syntax::{define, SyntaxError};

#[derive(Debug, thiserror::Error)]
pub enum LiftError {
    #[error("{0} has no decider")]
    NotDecidable(String),
    #[error("{0} does not start from the base of {1}")]
    WrongSource(String, String),
    #[error("building the lift: {0}")]
    Build(#[from] SyntaxError),
}

/// The `B`-elements used to simulate `A[f]`-dialogues inside `B`.
#[derive(Clone, Debug)]
pub struct LiftParts {
    /// `γ`-images of `fst`, `snd` applied through the realizer.
    pub proj0: Element,
    pub proj1: Element,
    /// `b v ↦` an element of `γ(cons a s)` for `b ∈ γ(a)`, `v ∈ γ(s)`.
    pub prepend: Element,
    /// `w v ↦` an element of `γ(snoc s c)` for `w ∈ γ(c)`, `v ∈ γ(s)`.
    pub append: Element,
    /// An element of `γ(nil)`.
    pub empty: Element,
    /// `U b b' v`: continue the dialogue of `b` on `b'` with answers `v`.
    pub dialogue: Element,
    /// `Λ*xx'. U x x' e`.
    pub realizer: Element,
}

/// Extends `gamma : A → B` along `ι_f` to `A[f] → B`, given `fbar ∈ B`
/// representing `f` with respect to `gamma`. The map and decider are kept.
pub fn lift_morphism(
    gamma: &ApplicativeMorphism,
    ext: &Arc<ExtendedPca>,
    fbar: &Element,
) -> Result<(ApplicativeMorphism, LiftParts), LiftError> {
    let d = gamma
        .decider
        .clone()
        .ok_or_else(|| LiftError::NotDecidable(gamma.name.clone()))?;
    if gamma.source.name() != ext.base().name() {
        return Err(LiftError::WrongSource(gamma.name.clone(), ext.name()));
    }
    let b = &*gamma.target;
    let ak = gamma.source.kit();
    let r = &gamma.realizer;
    let e_fst = gamma.pick(&ak.fst);
    let e_snd = gamma.pick(&ak.snd);
    let e_cons = gamma.pick(&ak.cons);
    let e_snoc = gamma.pick(&ak.snoc);
    let empty = gamma.pick(&ak.nil);

    let proj0 = define(b, &[("r", r), ("e", &e_fst)], r"\x. r e x")?;
    let proj1 = define(b, &[("r", r), ("e", &e_snd)], r"\x. r e x")?;
    let prepend = define(b, &[("r", r), ("e", &e_cons)], r"\x v. r (r e x) v")?;
    let append = define(b, &[("r", r), ("e", &e_snoc)], r"\w v. r (r e v) w")?;
    let dialogue = define(
        b,
        &[
            ("r", r),
            ("d", &d),
            ("fbar", fbar),
            ("p0", &proj0),
            ("p1", &proj1),
            ("pre", &prepend),
            ("app", &append),
        ],
        r"Y (\u x x' v.
              (\o. if (d (p0 o)) (\z. p1 o) (\z. u x x' (app (fbar (p1 o)) v)) I)
              (r x (pre x' v)))",
    )?;
    let realizer = define(b, &[("U", &dialogue), ("e", &empty)], r"\x x'. U x x' e")?;

    let lifted = ApplicativeMorphism::new(
        format!("{}^{}", gamma.name, ext.oracle().name()),
        ext.clone(),
        gamma.target.clone(),
        gamma.map_fn(),
        realizer.clone(),
        Some(d),
    );
    let parts = LiftParts {
        proj0,
        proj1,
        prepend,
        append,
        empty,
        dialogue,
        realizer,
    };
    Ok((lifted, parts))
}

/// One round of `U b b' v` in `B`: `Some(w)` if the simulated machine asks a
/// query, where `w` extends `v` by the represented answer, so that
/// `U b b' v ≃ U b b' w`; `None` if it answers.
pub fn u_step(
    gamma: &ApplicativeMorphism,
    fbar: &Element,
    parts: &LiftParts,
    b: &Element,
    b2: &Element,
    v: &Element,
    fuel: &mut Fuel,
) -> Result<Option<Element>, Halt> {
    let target = &*gamma.target;
    let decider = gamma
        .decider
        .as_ref()
        .expect("lifted morphisms are decidable");
    let input = eval_apps(target, &parts.prepend, &[b2.clone(), v.clone()], fuel)?;
    let o = eval_apps(target, &gamma.realizer, &[b.clone(), input], fuel)?;
    let flag = target.apply(&parts.proj0, &o, fuel)?;
    let flag = target.apply(decider, &flag, fuel)?;
    if flag == target.kit().tru {
        return Ok(None);
    }
    let q = target.apply(&parts.proj1, &o, fuel)?;
    let ans = target.apply(fbar, &q, fuel)?;
    eval_apps(target, &parts.append, &[ans, v.clone()], fuel).map(Some)
}

/// Follows `U b b' v` from `v = e` for each `(b, b')` and checks
/// `U b b' v ≃ U b b' w` at every query step, stopping after `instances`
/// steps in total. A round with no query or an undefined round ends that pair.
pub fn check_u_step(
    gamma: &ApplicativeMorphism,
    fbar: &Element,
    parts: &LiftParts,
    pairs: &[(Element, Element)],
    instances: usize,
    fuel: u64,
) -> CheckReport {
    let law = "U b b' v ~ U b b' w";
    let target = &*gamma.target;
    let mut n = 0;
    for (b, b2) in pairs {
        let mut v = parts.empty.clone();
        while n < instances {
            let Ok(Some(w)) = u_step(gamma, fbar, parts, b, b2, &v, &mut Fuel::new(fuel)) else {
                break;
            };
            n += 1;
            let run = |s: &Element, f: &mut Fuel| {
                eval_apps(
                    target,
                    &parts.dialogue,
                    &[b.clone(), b2.clone(), s.clone()],
                    f,
                )
            };
            if let Err(why) = kleene_eq(fuel, |f| run(&v, f), |f| run(&w, f)) {
                let cx = format!("b={} b'={} step {n}: {why}", short(b), short(b2));
                return CheckReport::new(law, n, 0, Some(cx));
            }
            v = w;
        }
    }
    if n < instances {
        let cx = format!("only {n} query steps from {} pairs", pairs.len());
        return CheckReport::new(law, n, 0, Some(cx));
    }
    CheckReport::new(law, n, 0, None)
}
