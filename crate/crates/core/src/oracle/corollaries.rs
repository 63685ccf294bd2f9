//! Consequences of the universal property: collapsing a representable
//! oracle, commuting two oracles, simulating `A[f]` in a model with a
//! built-in oracle instruction, transitivity of `≤_A`, and deciding equality
//! after adjoining the equality oracle.

use std::sync::Arc;

use super::{iota, iota_realizer, lift_morphism, ExtendedPca, LiftError, OracleFn};
use crate::kernel::{Atom, Element, Fuel, Halt, Nf, Pca, Prim, TermMode, TermPca};
use crate::morphisms::{compose, identity, ApplicativeMorphism};
use crate::syntax::{define, SyntaxError};

/// `γ_f : A[f] → A` for `f` represented in `A` by `rf`, together with `ι_f`.
pub fn collapse(
    base: Arc<dyn Pca>,
    f: Arc<OracleFn>,
    rf: &Element,
) -> Result<(Arc<ExtendedPca>, ApplicativeMorphism, ApplicativeMorphism), LiftError> {
    let ext = Arc::new(ExtendedPca::new(base.clone(), f));
    let (down, _) = lift_morphism(&identity(base), &ext, rf)?;
    Ok((ext.clone(), down, iota(&ext)))
}

/// `A[f][g]` and `A[g][f]` with the comparison morphisms between them.
pub struct Commutation {
    pub fg: Arc<ExtendedPca>,
    pub gf: Arc<ExtendedPca>,
    /// `A[f][g] → A[g][f]`.
    pub there: ApplicativeMorphism,
    /// `A[g][f] → A[f][g]`.
    pub back: ApplicativeMorphism,
}

/// Builds `A[f][g] → A[g][f]` by lifting `A → A[g] → A[g][f]` first along
/// `ι_f` (the outer representer stands for `f`) and then along `ι_g`
/// (the inner representer, carried up by the outer `ι` realizer, stands for `g`).
fn swap(
    inner_f: &Arc<ExtendedPca>,
    fg: &Arc<ExtendedPca>,
    inner_g: &Arc<ExtendedPca>,
    gf: &Arc<ExtendedPca>,
) -> Result<ApplicativeMorphism, LiftError> {
    let start = compose(&iota(gf), &iota(inner_g));
    let (mid, _) = lift_morphism(&start, inner_f, gf.representer())?;
    let carried = iota_realizer(&**gf.base());
    let rep_g = gf
        .apply(
            &carried,
            inner_g.representer(),
            &mut Fuel::new(crate::syntax::DEFINE_FUEL),
        )
        .map_err(|h| LiftError::Build(SyntaxError::Eval(h)))?;
    let (top, _) = lift_morphism(&mid, fg, &rep_g)?;
    Ok(top)
}

pub fn commutation(
    base: Arc<dyn Pca>,
    f: Arc<OracleFn>,
    g: Arc<OracleFn>,
) -> Result<Commutation, LiftError> {
    let af = Arc::new(ExtendedPca::new(base.clone(), f.clone()));
    let ag = Arc::new(ExtendedPca::new(base, g.clone()));
    let fg = Arc::new(ExtendedPca::new(af.clone(), g));
    let gf = Arc::new(ExtendedPca::new(ag.clone(), f));
    let there = swap(&af, &fg, &ag, &gf)?;
    let back = swap(&ag, &gf, &af, &fg)?;
    Ok(Commutation {
        fg,
        gf,
        there,
        back,
    })
}

/// `f ≤_A h` from `w1 ∈ A[g]` (for `f ≤_A g`) and `w2 ∈ A[h]` (for
/// `g ≤_A h`): lift `ι_h` along `ι_g` with `w2` standing for `g`, and apply
/// the lifted realizer to `w1` in `A[h]`.
pub fn transitivity_witness(
    ag: &Arc<ExtendedPca>,
    ah: &Arc<ExtendedPca>,
    w1: &Element,
    w2: &Element,
    fuel: u64,
) -> Result<Element, LiftError> {
    let (lifted, _) = lift_morphism(&iota(ah), ag, w2)?;
    ah.apply(&lifted.realizer, w1, &mut Fuel::new(fuel))
        .map_err(|h| LiftError::Build(SyntaxError::Eval(h)))
}

/// In `A[eq]`, the compiled element `Λ*x. r x` where `r` represents the
/// equality oracle: it decides `fst x = snd x`.
pub fn equality_decider(ext: &ExtendedPca) -> Result<Element, SyntaxError> {
    define(ext, &[("r", ext.representer())], r"\x. r x")
}

/// The pieces of the comparison between `A[f]` and a model `Q` whose
/// interpreter answers `query a` from the oracle directly.
pub struct QueryModels {
    pub base: Arc<dyn Pca>,
    pub query: Arc<dyn Pca>,
    pub ext: Arc<ExtendedPca>,
    /// `A[f] → Q`: the inclusion `A → Q` lifted with `query` standing for `f`.
    pub simulate: ApplicativeMorphism,
}

/// `A[f] → Q` for `Q = A + query`.
pub fn query_models(mode: TermMode, f: Arc<OracleFn>) -> Result<QueryModels, LiftError> {
    let base: Arc<dyn Pca> = Arc::new(TermPca::new(mode));
    let query: Arc<dyn Pca> = Arc::new(TermPca::with_oracle_instruction(mode, f.clone()));
    let ext = Arc::new(ExtendedPca::new(base.clone(), f));
    let realizer = define(&*query, &[], r"\x y. x y")?;
    let decider = query.kit().id.clone();
    let inclusion = ApplicativeMorphism::identity_on_elements(
        "incl",
        base.clone(),
        query.clone(),
        realizer,
        Some(decider),
    );
    let (simulate, _) = lift_morphism(&inclusion, &ext, &Element::atom(Atom::Prim(Prim::Query)))?;
    Ok(QueryModels {
        base,
        query,
        ext,
        simulate,
    })
}

/// The reverse direction `Q → A[f']`: `τ` sends `K`, `S`, `query` to `K_f`,
/// `S_f`, `r_f` and application to `·^f`; `f'` is the oracle of `Q`
/// transported along `τ`. Only pure-SK models are translated.
pub struct Translation {
    pub query: Arc<dyn Pca>,
    pub ext: Arc<ExtendedPca>,
    pub embed: ApplicativeMorphism,
}

pub fn translate(ext: &ExtendedPca, e: &Element, fuel: &mut Fuel) -> Result<Element, Halt> {
    fn go(ext: &ExtendedPca, nf: &Nf, fuel: &mut Fuel) -> Result<Element, Halt> {
        let head = match nf.head() {
            Atom::K => ext.k(),
            Atom::S => ext.s(),
            Atom::Prim(Prim::Query) => ext.representer().clone(),
            Atom::Prim(p) => {
                return Err(Halt::Stuck(crate::kernel::Stuck::Malformed(format!(
                    "no translation for {}",
                    p.name()
                ))))
            }
        };
        let mut acc = head;
        for a in nf.args() {
            let v = go(ext, a, fuel)?;
            acc = ext.apply(&acc, &v, fuel)?;
        }
        Ok(acc)
    }
    let nf = e
        .as_term()
        .ok_or_else(|| Halt::Stuck(crate::kernel::Stuck::Malformed("not a term".into())))?;
    go(ext, nf, fuel)
}

/// `Q = sk + query` with oracle `g`, `A[f']` with `f' = τ g τ⁻¹`, and the
/// embedding `Q → A[f']`, `a ↦ {τ a}`, realized by application.
pub fn translation(g: Arc<OracleFn>, fuel: u64) -> Result<Translation, LiftError> {
    let base: Arc<dyn Pca> = Arc::new(TermPca::pure());
    let query: Arc<dyn Pca> = Arc::new(TermPca::with_oracle_instruction(TermMode::Pure, g.clone()));
    let eval_err = |h: Halt| LiftError::Build(SyntaxError::Eval(h));
    // τ does not consult the oracle, so any extension of the base computes it.
    let probe = ExtendedPca::new(base.clone(), Arc::new(OracleFn::empty("none")));
    let mut entries = Vec::new();
    for (x, y) in g.entries() {
        let tx = translate(&probe, x, &mut Fuel::new(fuel)).map_err(eval_err)?;
        let ty = translate(&probe, y, &mut Fuel::new(fuel)).map_err(eval_err)?;
        entries.push((tx, ty));
    }
    let moved = OracleFn::from_table(format!("{}'", g.name()), entries).map_err(|e| {
        LiftError::Build(SyntaxError::Parse {
            pos: 0,
            msg: e.to_string(),
        })
    })?;
    let ext = Arc::new(ExtendedPca::new(base, Arc::new(moved)));
    let realizer = define(&*ext, &[], r"\x y. x y")?;
    let decider = define(&*ext, &[], r"\b. b true false")?;
    let tx = ext.clone();
    let map: crate::morphisms::MapFn = Arc::new(move |a| {
        translate(&tx, a, &mut Fuel::new(fuel))
            .into_iter()
            .collect()
    });
    let embed = ApplicativeMorphism::new(
        "tau",
        query.clone(),
        ext.clone(),
        map,
        realizer,
        Some(decider),
    );
    Ok(Translation { query, ext, embed })
}
