//! Finite assemblies over a PCA: labelled sets with nonempty existence sets,
//! maps tracked by an element, `Γ ⊣ ∇`, the functor `γ*` induced by an
//! applicative morphism, and binary coproducts.
//!
//! Every check here is exhaustive over the finite data, so a pass is exact.
//! `∇` uses a designated finite carrier sample in place of the whole carrier.

use std::sync::Arc;

use crate::kernel::{eval_apps, Element, Fuel, Halt, Pca};
use crate::morphisms::{check_representable, ApplicativeMorphism};
use crate::oracle::OracleFn;
use crate::report::{outcome, short, CheckReport};
use crate::syntax::{define, eval_source, Env, SyntaxError};

#[derive(Clone)]
pub struct Assembly {
    pub pca: Arc<dyn Pca>,
    pub labels: Vec<String>,
    pub exist: Vec<Vec<Element>>,
}

#[derive(Debug, thiserror::Error)]
pub enum AssemblyError {
    #[error("label {0} has an empty existence set")]
    Empty(String),
    #[error("label {0} appears twice")]
    DuplicateLabel(String),
    #[error("labels and existence sets differ in number")]
    Shape,
    #[error("line {line}: expected `label: term, ...`")]
    Line { line: usize },
    #[error("line {line}: {err}")]
    Syntax { line: usize, err: SyntaxError },
}

impl std::fmt::Debug for Assembly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Assembly")
            .field("over", &self.pca.name())
            .field("labels", &self.labels)
            .finish()
    }
}

impl Assembly {
    pub fn new(
        pca: Arc<dyn Pca>,
        labels: Vec<String>,
        exist: Vec<Vec<Element>>,
    ) -> Result<Self, AssemblyError> {
        if labels.len() != exist.len() {
            return Err(AssemblyError::Shape);
        }
        for (i, (l, e)) in labels.iter().zip(&exist).enumerate() {
            if e.is_empty() {
                return Err(AssemblyError::Empty(l.clone()));
            }
            if labels[..i].contains(l) {
                return Err(AssemblyError::DuplicateLabel(l.clone()));
            }
        }
        Ok(Assembly { pca, labels, exist })
    }

    /// `label: t1, t2, ...` per line; `#` comments and blank lines ignored.
    pub fn parse(
        pca: Arc<dyn Pca>,
        env: &Env,
        text: &str,
        fuel: u64,
    ) -> Result<Self, AssemblyError> {
        let mut labels = Vec::new();
        let mut exist = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let s = raw.trim();
            if s.is_empty() || s.starts_with('#') {
                continue;
            }
            let (label, rest) = s.split_once(':').ok_or(AssemblyError::Line { line })?;
            let mut set = Vec::new();
            for src in split_top_level(rest) {
                let e = eval_source(&*pca, env, src.trim(), &mut Fuel::new(fuel))
                    .map_err(|err| AssemblyError::Syntax { line, err })?;
                if !set.contains(&e) {
                    set.push(e);
                }
            }
            labels.push(label.trim().to_string());
            exist.push(set);
        }
        Assembly::new(pca, labels, exist)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

fn split_top_level(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// A function on labels (`func[x]` indexes the target's labels) with a tracker.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssemblyMap {
    pub func: Vec<usize>,
    pub tracker: Element,
}

/// `t a ↓` and `t a ∈ E_Y(f(x))` for every `x` and `a ∈ E_X(x)`.
pub fn check_tracked(x: &Assembly, y: &Assembly, m: &AssemblyMap, fuel: u64) -> CheckReport {
    let law = format!("tracked {} by {}", describe(x, y), short(&m.tracker));
    let mut n = 0;
    if m.func.len() != x.len() || m.func.iter().any(|&j| j >= y.len()) {
        return CheckReport::new(
            law,
            0,
            0,
            Some("function does not map labels to labels".into()),
        );
    }
    for (i, set) in x.exist.iter().enumerate() {
        let want = &y.exist[m.func[i]];
        for a in set {
            n += 1;
            let r = x.pca.apply(&m.tracker, a, &mut Fuel::new(fuel));
            if !matches!(&r, Ok(v) if want.contains(v)) {
                let cx = format!("x={} a={} t a -> {}", x.labels[i], short(a), outcome(&r));
                return CheckReport::new(law, n, 0, Some(cx));
            }
        }
    }
    CheckReport::new(law, n, 0, None)
}

fn tracked(x: &Assembly, y: &Assembly, m: &AssemblyMap, fuel: u64) -> bool {
    check_tracked(x, y, m, fuel).passed()
}

fn describe(x: &Assembly, y: &Assembly) -> String {
    format!("{{{}}} -> {{{}}}", x.labels.join(","), y.labels.join(","))
}

/// `Γ`: the underlying set.
pub fn global_sections(asm: &Assembly) -> Vec<String> {
    asm.labels.clone()
}

/// `∇S` with every existence set equal to `sample`.
pub fn nabla(pca: Arc<dyn Pca>, set: &[String], sample: &[Element]) -> Assembly {
    Assembly::new(pca, set.to_vec(), vec![sample.to_vec(); set.len()])
        .expect("nonempty carrier sample")
}

/// Every function `n → m`, as index vectors.
pub fn all_functions(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|f| {
                (0..m).map(move |j| {
                    let mut g = f.clone();
                    g.push(j);
                    g
                })
            })
            .collect();
    }
    out
}

/// Trackers tried when deciding whether a function into `∇S` is tracked:
/// `I` and `K e` for each `e` of the sample.
fn nabla_trackers(pca: &dyn Pca, sample: &[Element], fuel: u64) -> Result<Vec<Element>, Halt> {
    let mut out = vec![pca.kit().id.clone()];
    for e in sample {
        out.push(pca.apply(&pca.k(), e, &mut Fuel::new(fuel))?);
    }
    Ok(out)
}

/// Every assembly on `1..=max_len` labels whose existence sets are
/// nonempty subsets of `pool` with at most `max_exist` elements.
pub fn small_assemblies(
    pca: &Arc<dyn Pca>,
    pool: &[Element],
    max_len: usize,
    max_exist: usize,
) -> Vec<Assembly> {
    let subsets: Vec<Vec<Element>> = (1..1usize << pool.len())
        .filter(|m| m.count_ones() as usize <= max_exist)
        .map(|m| {
            (0..pool.len())
                .filter(|i| m >> i & 1 == 1)
                .map(|i| pool[i].clone())
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for len in 1..=max_len {
        for choice in all_functions(len, subsets.len()) {
            let labels = (0..len).map(|i| format!("x{i}")).collect();
            let exist = choice.iter().map(|&j| subsets[j].clone()).collect();
            out.push(Assembly::new(pca.clone(), labels, exist).expect("nonempty existence sets"));
        }
    }
    out
}

/// `Γ ⊣ ∇` on `x` and `s`: every function `ΓX → S` is tracked as a map
/// `X → ∇S` (so the hom-sets have equal size), and both triangle identities
/// hold with tracked units. Requires the sample to contain `X`'s realizers.
pub fn check_adjunction(
    x: &Assembly,
    s: &[String],
    sample: &[Element],
    fuel: u64,
) -> Vec<CheckReport> {
    let pca = x.pca.clone();
    let ns = nabla(pca.clone(), s, sample);
    let scope = format!("|X|={} |S|={} sample={}", x.len(), s.len(), sample.len());
    let trackers = match nabla_trackers(&*pca, sample, fuel) {
        Ok(t) => t,
        Err(h) => {
            return vec![CheckReport::new(
                "Gamma -| Nabla",
                0,
                0,
                Some(h.to_string()),
            )]
        }
    };

    let functions = all_functions(x.len(), s.len());
    let mut hom = 0;
    let mut untracked = None;
    for func in &functions {
        let found = trackers.iter().any(|t| {
            let m = AssemblyMap {
                func: func.clone(),
                tracker: t.clone(),
            };
            tracked(x, &ns, &m, fuel)
        });
        if found {
            hom += 1;
        } else if untracked.is_none() {
            untracked = Some(format!("{func:?}"));
        }
    }
    let bijection = CheckReport::new(
        format!(
            "Asm(X, Nabla S) = Set(Gamma X, S) {scope} ({hom} vs {})",
            functions.len()
        ),
        functions.len(),
        0,
        untracked.map(|f| format!("function {f} has no tracker")),
    );

    // η_X : X → ∇ΓX is the identity on labels; ε_S : Γ∇S → S is the identity.
    let gx = global_sections(x);
    let ngx = nabla(pca.clone(), &gx, sample);
    let ident: Vec<usize> = (0..x.len()).collect();
    let unit = trackers
        .iter()
        .map(|t| AssemblyMap {
            func: ident.clone(),
            tracker: t.clone(),
        })
        .find(|m| tracked(x, &ngx, m, fuel));
    let gamma_nabla = global_sections(&ns);
    let first = match &unit {
        Some(_) if gamma_nabla == s => None,
        Some(_) => Some("Gamma Nabla S differs from S".to_string()),
        None => Some("unit X -> Nabla Gamma X is not tracked".to_string()),
    };
    let triangle1 = CheckReport::new(
        format!("eps_GammaX . Gamma(eta_X) = id {scope}"),
        x.len(),
        0,
        first,
    );

    // ∇ε_S ∘ η_∇S : ∇S → ∇Γ∇S → ∇S, identity on labels, tracked by I.
    let sid: Vec<usize> = (0..s.len()).collect();
    let nsid = AssemblyMap {
        func: sid,
        tracker: pca.kit().id.clone(),
    };
    let second = (!tracked(&ns, &ns, &nsid, fuel))
        .then(|| "identity on Nabla S is not tracked by I".to_string());
    let triangle2 = CheckReport::new(
        format!("Nabla(eps_S) . eta_NablaS = id {scope}"),
        s.len(),
        0,
        second,
    );

    vec![bijection, triangle1, triangle2]
}

/// `γ*X` over `B`: same labels, `E'(x) = ⋃_{a ∈ E(x)} γ(a)`.
pub fn gamma_star(gamma: &ApplicativeMorphism, asm: &Assembly) -> Assembly {
    let exist = asm
        .exist
        .iter()
        .map(|set| {
            let mut out: Vec<Element> = Vec::new();
            for a in set {
                for b in gamma.image(a) {
                    if !out.contains(&b) {
                        out.push(b);
                    }
                }
            }
            out
        })
        .collect();
    Assembly::new(gamma.target.clone(), asm.labels.clone(), exist).expect("images are nonempty")
}

/// `γ*` on maps: tracker `t` becomes `Λ*x. r e x` with `e ∈ γ(t)`.
pub fn transport(gamma: &ApplicativeMorphism, m: &AssemblyMap) -> Result<AssemblyMap, SyntaxError> {
    let e = gamma.pick(&m.tracker);
    let tracker = define(
        &*gamma.target,
        &[("r", &gamma.realizer), ("e", &e)],
        r"\x. r e x",
    )?;
    Ok(AssemblyMap {
        func: m.func.clone(),
        tracker,
    })
}

/// `g ∘ h` with tracker `Λ*x. g (h x)`.
pub fn compose_maps(
    pca: &dyn Pca,
    g: &AssemblyMap,
    h: &AssemblyMap,
) -> Result<AssemblyMap, SyntaxError> {
    let tracker = define(pca, &[("g", &g.tracker), ("h", &h.tracker)], r"\x. g (h x)")?;
    Ok(AssemblyMap {
        func: h.func.iter().map(|&i| g.func[i]).collect(),
        tracker,
    })
}

/// `γ*` sends tracked maps to tracked maps, the identity to a tracked
/// identity, and `g ∘ h` to a map equal to `γ*g ∘ γ*h`, both tracked.
pub fn check_functoriality(
    gamma: &ApplicativeMorphism,
    x: &Assembly,
    y: &Assembly,
    z: &Assembly,
    h: &AssemblyMap,
    g: &AssemblyMap,
    fuel: u64,
) -> CheckReport {
    let law = format!("gamma* functorial for {}", gamma.name);
    let run = || -> Result<Option<String>, String> {
        let (gx, gy, gz) = (
            gamma_star(gamma, x),
            gamma_star(gamma, y),
            gamma_star(gamma, z),
        );
        let b = &*gamma.target;
        let id = AssemblyMap {
            func: (0..x.len()).collect(),
            tracker: x.pca.kit().id.clone(),
        };
        let th = transport(gamma, h).map_err(|e| e.to_string())?;
        let tg = transport(gamma, g).map_err(|e| e.to_string())?;
        let tid = transport(gamma, &id).map_err(|e| e.to_string())?;
        let gh = compose_maps(&*x.pca, g, h).map_err(|e| e.to_string())?;
        let tgh = transport(gamma, &gh).map_err(|e| e.to_string())?;
        let comp = compose_maps(b, &tg, &th).map_err(|e| e.to_string())?;
        let checks = [
            check_tracked(&gx, &gx, &tid, fuel),
            check_tracked(&gx, &gy, &th, fuel),
            check_tracked(&gy, &gz, &tg, fuel),
            check_tracked(&gx, &gz, &tgh, fuel),
            check_tracked(&gx, &gz, &comp, fuel),
        ];
        if let Some(bad) = checks.iter().find(|c| !c.passed()) {
            return Ok(Some(bad.to_string()));
        }
        if tgh.func != comp.func || tid.func != id.func {
            return Ok(Some("underlying functions differ".into()));
        }
        Ok(None)
    };
    let cx = run().unwrap_or_else(Some);
    CheckReport::new(law, x.len() + y.len() + z.len(), 0, cx)
}

/// `X + Y` with `E(inl x) = {pair ⊤ a}`, `E(inr y) = {pair ⊥ b}`.
pub fn coproduct(x: &Assembly, y: &Assembly, fuel: u64) -> Result<Assembly, Halt> {
    let pca = &*x.pca;
    let kit = pca.kit();
    let mut labels = Vec::new();
    let mut exist = Vec::new();
    for (side, tag, asm) in [("inl", &kit.tru, x), ("inr", &kit.fls, y)] {
        for (l, set) in asm.labels.iter().zip(&asm.exist) {
            labels.push(format!("{side} {l}"));
            let mut tagged = Vec::new();
            for a in set {
                tagged.push(eval_apps(
                    pca,
                    &kit.pair,
                    &[tag.clone(), a.clone()],
                    &mut Fuel::new(fuel),
                )?);
            }
            exist.push(tagged);
        }
    }
    Ok(Assembly::new(x.pca.clone(), labels, exist).expect("coproduct of assemblies"))
}

/// The comparison trackers `γ*(X+Y) ⇄ γ*X + γ*Y` over `B`:
/// forward `Λ*x. pair (d (π0 x)) (π1 x)`, backward by cases on the tag.
pub fn coproduct_comparison(
    gamma: &ApplicativeMorphism,
) -> Result<(Element, Element), SyntaxError> {
    let d = gamma.decider.clone().expect("decidable morphism");
    let ak = gamma.source.kit();
    let a = &*gamma.source;
    let r = &gamma.realizer;
    let b = &*gamma.target;
    let inl = a
        .apply(&ak.pair, &ak.tru, &mut Fuel::new(1_000))
        .map_err(SyntaxError::Eval)?;
    let inr = a
        .apply(&ak.pair, &ak.fls, &mut Fuel::new(1_000))
        .map_err(SyntaxError::Eval)?;
    let (e_fst, e_snd, e_inl, e_inr) = (
        gamma.pick(&ak.fst),
        gamma.pick(&ak.snd),
        gamma.pick(&inl),
        gamma.pick(&inr),
    );
    let forward = define(
        b,
        &[("r", r), ("d", &d), ("ef", &e_fst), ("es", &e_snd)],
        r"\x. pair (d (r ef x)) (r es x)",
    )?;
    let backward = define(
        b,
        &[("r", r), ("el", &e_inl), ("er", &e_inr)],
        r"\x. if (fst x) (\z. r el (snd x)) (\z. r er (snd x)) I",
    )?;
    Ok((forward, backward))
}

/// `γ*(X+Y) ≅ γ*X + γ*Y` via the comparison trackers, identity on labels.
pub fn check_coproduct_preservation(
    gamma: &ApplicativeMorphism,
    x: &Assembly,
    y: &Assembly,
    fuel: u64,
) -> CheckReport {
    let law = format!("gamma*(X+Y) ~= gamma*X + gamma*Y for {}", gamma.name);
    if gamma.decider.is_none() {
        return CheckReport::new(law, 0, 0, Some("morphism has no decider".into()));
    }
    let built = (|| -> Result<_, String> {
        let sum = coproduct(x, y, fuel).map_err(|h| h.to_string())?;
        let left = gamma_star(gamma, &sum);
        let right = coproduct(&gamma_star(gamma, x), &gamma_star(gamma, y), fuel)
            .map_err(|h| h.to_string())?;
        let (fw, bw) = coproduct_comparison(gamma).map_err(|e| e.to_string())?;
        Ok((left, right, fw, bw))
    })();
    let (left, right, fw, bw) = match built {
        Ok(t) => t,
        Err(e) => return CheckReport::new(law, 0, 0, Some(e)),
    };
    let ident: Vec<usize> = (0..left.len()).collect();
    let there = check_tracked(
        &left,
        &right,
        &AssemblyMap {
            func: ident.clone(),
            tracker: fw,
        },
        fuel,
    );
    let back = check_tracked(
        &right,
        &left,
        &AssemblyMap {
            func: ident,
            tracker: bw,
        },
        fuel,
    );
    let n = there.samples + back.samples;
    CheckReport::new(law, n, 0, there.counterexample.or(back.counterexample))
}

/// `f` (a table) is representable w.r.t. `γ` by `rf` iff `x ↦ f(x)` is a map
/// `(dom f, γ) → (A, γ)` tracked by `rf`, where `A` is restricted to the
/// labels `dom f ∪ im f`. Passes when both sides agree; `representable`
/// reports the common verdict.
pub fn check_representable_iff_tracked(
    gamma: &ApplicativeMorphism,
    f: &OracleFn,
    rf: &Element,
    fuel: u64,
) -> (CheckReport, bool) {
    let law = format!("representable iff tracked for {}", f.name());
    let repr = check_representable(gamma, f, rf, 0, 0, fuel).passed();
    let mut points: Vec<Element> = Vec::new();
    for (k, v) in f.entries() {
        for e in [k, v] {
            if !points.contains(e) {
                points.push(e.clone());
            }
        }
    }
    let label = |e: &Element| short(e);
    let dom = Assembly::new(
        gamma.target.clone(),
        f.entries().iter().map(|(k, _)| label(k)).collect(),
        f.entries().iter().map(|(k, _)| gamma.image(k)).collect(),
    );
    let cod = Assembly::new(
        gamma.target.clone(),
        points.iter().map(label).collect(),
        points.iter().map(|p| gamma.image(p)).collect(),
    );
    let (dom, cod) = match (dom, cod) {
        (Ok(d), Ok(c)) => (d, c),
        (Err(e), _) | (_, Err(e)) => {
            return (CheckReport::new(law, 0, 0, Some(e.to_string())), false)
        }
    };
    let func = f
        .entries()
        .iter()
        .map(|(_, v)| points.iter().position(|p| p == v).expect("image point"))
        .collect();
    let track = tracked(
        &dom,
        &cod,
        &AssemblyMap {
            func,
            tracker: rf.clone(),
        },
        fuel,
    );
    let cx = (repr != track).then(|| format!("representable={repr} tracked={track}"));
    (CheckReport::new(law, f.entries().len(), 0, cx), repr)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::TermPca;
    use crate::morphisms::identity;

    const F: u64 = 100_000;

    fn model() -> Arc<dyn Pca> {
        Arc::new(TermPca::enriched())
    }

    fn booleans(a: &Arc<dyn Pca>) -> Assembly {
        let k = a.kit();
        Assembly::new(
            a.clone(),
            vec!["t".into(), "f".into()],
            vec![vec![k.tru.clone()], vec![k.fls.clone()]],
        )
        .unwrap()
    }

    #[test]
    fn identity_is_tracked_by_i_and_not_by_not() {
        let a = model();
        let b = booleans(&a);
        let id = AssemblyMap {
            func: vec![0, 1],
            tracker: a.kit().id.clone(),
        };
        assert!(check_tracked(&b, &b, &id, F).passed());
        let swapped = AssemblyMap {
            func: vec![1, 0],
            tracker: a.kit().not.clone(),
        };
        assert!(check_tracked(&b, &b, &swapped, F).passed());
        let wrong = AssemblyMap {
            func: vec![0, 1],
            tracker: a.kit().not.clone(),
        };
        assert!(!check_tracked(&b, &b, &wrong, F).passed());
    }

    #[test]
    fn parses_text_format() {
        let a = model();
        let env = a.kit().env();
        let asm = Assembly::parse(
            a.clone(),
            &env,
            "# bools\nt: true\nf: false, seq[K, S]\n",
            F,
        )
        .unwrap();
        assert_eq!(asm.labels, vec!["t", "f"]);
        assert_eq!(asm.exist[1].len(), 2);
        assert!(Assembly::parse(a.clone(), &env, "x:\n", F).is_err());
        assert!(Assembly::parse(a, &env, "x: K\nx: S\n", F).is_err());
    }

    #[test]
    fn nabla_maps_and_adjunction() {
        let a = model();
        let x = booleans(&a);
        let sample = vec![a.kit().tru.clone(), a.kit().fls.clone(), a.k()];
        let s: Vec<String> = vec!["p".into(), "q".into()];
        assert_eq!(global_sections(&nabla(a.clone(), &s, &sample)), s);
        let ke = a.apply(&a.k(), &a.k(), &mut Fuel::new(10)).unwrap();
        let ns = nabla(a.clone(), &s, &sample);
        assert!(check_tracked(
            &x,
            &ns,
            &AssemblyMap {
                func: vec![1, 1],
                tracker: ke
            },
            F
        )
        .passed());
        for r in check_adjunction(&x, &s, &sample, F) {
            assert!(r.passed(), "{r}");
        }
        assert_eq!(all_functions(2, 2).len(), 4);
    }

    #[test]
    fn gamma_star_identity_and_coproducts() {
        let a = model();
        let id = identity(a.clone());
        let x = booleans(&a);
        let gx = gamma_star(&id, &x);
        assert_eq!(gx.labels, x.labels);
        assert_eq!(gx.exist, x.exist);
        assert!(check_coproduct_preservation(&id, &x, &x, F).passed());
        let not = AssemblyMap {
            func: vec![1, 0],
            tracker: a.kit().not.clone(),
        };
        assert!(check_functoriality(&id, &x, &x, &x, &not, &not, F).passed());
    }
}
