//! Machine elements of `A` used to build `A[f]`.
//!
//! A machine `a` is run on a coded sequence `[b, u0, …]` (argument followed by
//! oracle answers) and replies `pair ⊥ v` to ask `f(v)` or `pair ⊤ c` to
//! answer `c`. All constructions here are independent of `f`.

use std::sync::Arc;

use super::ExtendedPca;
use crate::kernel::{AppResult, Element, Fuel, Pca};
use crate::morphisms::ApplicativeMorphism;
use crate::syntax::define;

fn fixed(pca: &dyn Pca, extras: &[(&str, &Element)], src: &str) -> Element {
    define(pca, extras, src).unwrap_or_else(|e| panic!("construction in {}: {e}", pca.name()))
}

/// The model `base` ultimately extends, and the number of oracle layers between.
pub fn root(base: &dyn Pca) -> (&dyn Pca, usize) {
    let mut cur = base;
    let mut layers = 0;
    while let Some(inner) = cur.extends() {
        cur = inner;
        layers += 1;
    }
    (cur, layers)
}

/// Source of a machine over a base `layers` oracle layers above the root,
/// whose body (reading its input as `var`) is plain root code: each layer
/// answers at once and strips one level of input.
fn wrap(layers: usize, var: &str, body: &str) -> String {
    if layers == 0 {
        return format!(r"\{var}. {body}");
    }
    let input = (0..layers).fold(format!("w{var}"), |acc, _| format!("(at {acc} zero)"));
    let answer = (0..layers).fold(format!(r"(\{var}. {body}) {input}"), |acc, _| {
        format!("pair true ({acc})")
    });
    format!(r"\w{var}. {answer}")
}

/// Compiles a wrapped machine in the root of `base`.
fn rooted(base: &dyn Pca, extras: &[(&str, &Element)], var: &str, body: &str) -> Element {
    let (root, layers) = root(base);
    fixed(root, extras, &wrap(layers, var, body))
}

/// `K_f = Λ*x. pair ⊤ (Λ*y. pair ⊤ x0)`.
pub fn build_kf(base: &dyn Pca) -> Element {
    let layers = root(base).1;
    let inner = wrap(layers, "y", "pair true (at x zero)");
    rooted(base, &[], "x", &format!("pair true ({inner})"))
}

/// Closed definitions evaluated in order, each seeing the earlier ones.
struct Defs<'a> {
    pca: &'a dyn Pca,
    env: Vec<(String, Element)>,
}

impl<'a> Defs<'a> {
    fn new(pca: &'a dyn Pca) -> Self {
        Defs {
            pca,
            env: Vec::new(),
        }
    }

    fn def(&mut self, name: &str, src: &str) -> Element {
        let extras: Vec<(&str, &Element)> = self.env.iter().map(|(n, e)| (n.as_str(), e)).collect();
        let e = fixed(self.pca, &extras, src);
        self.env.push((name.to_string(), e.clone()));
        e
    }
}

/// The two-parameter combinator `T` with `T x y = t(x, y)`.
///
/// On `u = [c, w1, …, wn]` the machine `t(x, y)` first runs `x` on growing
/// prefixes of `u` until it answers `α`, forwarding its queries; then runs
/// `y` on `c` followed by the next answers until it answers `β`; then runs
/// `α` on `β` followed by the remaining answers. Whatever the current machine
/// outputs at the end of `u` (a query, or the final `pair ⊤ _`) is the output.
/// Hence `t(a, b) ·^f c ≃ (a ·^f c) ·^f (b ·^f c)`.
///
/// Models that evaluate `T` natively supply it; otherwise see
/// [`compiled_t_combinator`].
pub fn build_t_combinator(base: &dyn Pca) -> Element {
    base.native_t()
        .unwrap_or_else(|| compiled_t_combinator(base))
}

/// `T` as a compiled element.
///
/// Loop state is a tuple `pair s0 (pair s1 (… I))` and every branch is a
/// closed combinator selected with `if`, so one loop round costs a bounded number of steps.
pub fn compiled_t_combinator(base: &dyn Pca) -> Element {
    let mut d = Defs::new(base);
    d.def("g0", r"\s. fst s");
    d.def("g1", r"\s. fst (snd s)");
    d.def("g2", r"\s. fst (snd (snd s))");
    d.def("g3", r"\s. fst (snd (snd (snd s)))");
    d.def("g4", r"\s. fst (snd (snd (snd (snd s))))");
    d.def("one", r"succ zero");
    d.def(
        "tup",
        r"\a b c e h. pair a (pair b (pair c (pair e (pair h I))))",
    );
    d.def("out", r"\r s o. o");
    d.def("hang", r"\r s o. Y (\l x. l x) o");
    // Dispatch on the flag of `o`; a non-boolean flag diverges when the model can tell.
    match base.equality() {
        Some(eq) => {
            d.env.push(("eq".into(), eq));
            d.def(
                "case",
                r"\o a q. if (eq (fst o) true) a (if (eq (fst o) false) q hang)",
            );
        }
        None => {
            d.def("case", r"\o a q. if (fst o) a q");
        }
    }
    d.def("done", r"\r s. numeq (g4 s) (lh (g2 s))");
    // Phase 3, state [α, β, u, j, k]: run α on [β] ∗ u[j..k).
    d.def(
        "step3",
        r"\r s o. r (tup (g0 s) (g1 s) (g2 s) (g3 s) (succ (g4 s)))",
    );
    d.def("next3", r"\r s o. if (done r s) out step3 r s o");
    d.def("sel3", r"\r s o. case o out next3 r s o");
    d.def(
        "p3",
        r"Y (\r s. sel3 r s (g0 s (cons (g1 s) (slice (g2 s) (g3 s) (g4 s)))))",
    );
    // Phase 2, state [α, y, u, i, j]: run y on [c] ∗ u[i..j).
    d.def(
        "go3",
        r"\r s o. p3 (tup (g0 s) (snd o) (g2 s) (g4 s) (g4 s))",
    );
    d.def(
        "step2",
        r"\r s o. r (tup (g0 s) (g1 s) (g2 s) (g3 s) (succ (g4 s)))",
    );
    d.def("next2", r"\r s o. if (done r s) out step2 r s o");
    d.def("sel2", r"\r s o. case o go3 next2 r s o");
    d.def(
        "p2",
        r"Y (\r s. sel2 r s (g1 s (cons (at (g2 s) zero) (slice (g2 s) (g3 s) (g4 s)))))",
    );
    // Phase 1, state [x, y, u, -, i]: run x on u[0..i).
    d.def(
        "go2",
        r"\r s o. p2 (tup (snd o) (g1 s) (g2 s) (g4 s) (g4 s))",
    );
    d.def(
        "step1",
        r"\r s o. r (tup (g0 s) (g1 s) (g2 s) (g3 s) (succ (g4 s)))",
    );
    d.def("next1", r"\r s o. if (done r s) out step1 r s o");
    d.def("sel1", r"\r s o. case o go2 next1 r s o");
    d.def("p1", r"Y (\r s. sel1 r s (g0 s (take (g2 s) (g4 s))))");
    d.def("T", r"\x y u. p1 (tup x y u zero one)")
}

/// `t(x, y)`: the machine element `T x y` of `A`.
pub fn build_t(base: &dyn Pca, x: &Element, y: &Element, fuel: &mut Fuel) -> AppResult {
    let t = build_t_combinator(base);
    let tx = base.apply(&t, x, fuel)?;
    base.apply(&tx, y, fuel)
}

/// `S_f = Λ*x. pair ⊤ (Λ*y. pair ⊤ t(x0, y0))`.
pub fn build_sf(base: &dyn Pca) -> Element {
    let (root_model, layers) = root(base);
    let t = match layers {
        0 => Some(build_t_combinator(base)),
        1 => root_model.native_t_for_extensions(),
        _ => None,
    };
    match t {
        Some(t) => {
            let inner = wrap(layers, "y", "pair true (T (at x zero) (at y zero))");
            rooted(base, &[("T", &t)], "x", &format!("pair true ({inner})"))
        }
        None => fixed(
            base,
            &[("T", &build_t_combinator(base))],
            r"\x. pair true (\y. pair true (T (at x zero) (at y zero)))",
        ),
    }
}

/// The machine that applies `e` (an `A`-element of the given arity) to its
/// arguments in `A`, answering after each without asking the oracle.
pub fn lift(base: &dyn Pca, e: &Element, arity: usize) -> Element {
    assert!(arity >= 1);
    let vars: Vec<String> = (0..arity).map(|i| format!("x{i}")).collect();
    let call = vars
        .iter()
        .fold("e".to_string(), |acc, v| format!("{acc} (at {v} zero)"));
    let src = vars
        .iter()
        .rev()
        .fold(format!("pair true ({call})"), |body, v| {
            format!(r"pair true (\{v}. {body})")
        });
    // The outermost layer is the machine itself, not a pair.
    let src = src
        .strip_prefix("pair true (")
        .and_then(|s| s.strip_suffix(')'))
        .expect("generated lift source");
    fixed(base, &[("e", e)], src)
}

/// [`lift`] for an element `e` of the root of `base`, applied there.
pub fn lift_root(base: &dyn Pca, e: &Element, arity: usize) -> Element {
    assert!(arity >= 1);
    let layers = root(base).1;
    let call = (0..arity).fold("e".to_string(), |acc, i| format!("{acc} (at x{i} zero)"));
    let mut body = format!("pair true ({call})");
    for i in (1..arity).rev() {
        body = format!("pair true ({})", wrap(layers, &format!("x{i}"), &body));
    }
    rooted(base, &[("e", e)], "x0", &body)
}

/// Realizer of `ι_f`: `r ·^f a` is the machine computing `a · _` in `A`, so
/// `(r ·^f a) ·^f b = a b` whenever `a b` is defined in `A`.
pub fn iota_realizer(base: &dyn Pca) -> Element {
    fixed(
        base,
        &[],
        r"\y. pair true (\x. pair true ((at y zero) (at x zero)))",
    )
}

/// Decider of `ι_f`: on `[b]` answers `if b ⊤' ⊥'` evaluated in `A`, where
/// `⊤'`, `⊥'` are the booleans of `A[f]`.
pub fn iota_decider(ext: &ExtendedPca) -> Element {
    let kit = ext.kit();
    rooted(
        &**ext.base(),
        &[("T'", &kit.tru), ("F'", &kit.fls)],
        "u",
        "pair true (if (at u zero) T' F')",
    )
}

/// Asks `f` once about its argument and answers with the reply.
pub fn representer(base: &dyn Pca) -> Element {
    rooted(
        base,
        &[],
        "u",
        r"if (numeq (lh u) (succ zero)) (\z. pair false (at u zero)) (\z. pair true (at u (succ zero))) I",
    )
}

/// `Λ*x. pair ⊥ ⊥`: asks `f(⊥)` forever, so `a ·^f b` is never defined.
pub fn nontotal_witness(base: &dyn Pca) -> Element {
    fixed(base, &[], r"\x. pair false false")
}

/// Represents `f ∘ f` in `A[f]` with exactly two queries.
pub fn double_query_witness(base: &dyn Pca) -> Element {
    fixed(
        base,
        &[],
        r"\u. if (numeq (lh u) (succ (succ (succ zero))))
               (\z. pair true (at u (succ (succ zero))))
               (\z. pair false (at u (pred (lh u)))) I",
    )
}

/// `ι_f : A → A[f]`, `a ↦ {a}`, with realizer and decider.
pub fn iota(ext: &Arc<ExtendedPca>) -> ApplicativeMorphism {
    let base = ext.base().clone();
    ApplicativeMorphism::identity_on_elements(
        format!("iota_{}", ext.oracle().name()),
        base.clone(),
        ext.clone(),
        iota_realizer(&*base),
        Some(iota_decider(ext)),
    )
}
