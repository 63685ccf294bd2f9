//! Derived structure available in every PCA: booleans, definition by cases,
//! pairing, numerals, primitive recursion, a fixpoint combinator and coded
//! finite sequences.
//!
//! Encodings: `⊤ = λxy.x`, `⊥ = λxy.y`; `pair x y = λz.z x y`; numerals
//! `0 = I`, `n+1 = pair ⊥ n`; a sequence `[u0,…,u(n-1)]` is `pair n L` where
//! `L = pair u0 (pair u1 (… I))`. Out-of-range indices give unspecified elements.

use std::collections::HashSet;

use rand::Rng as _;

use crate::kernel::{eval_apps, kleene_eq, rng, sample, AppResult, Element, Fuel, Halt, Pca};
use crate::report::{outcome, short, CheckReport};
use crate::syntax::{self, Env};

/// Definitions in dependency order. A model may supply any of these natively.
pub const DEFINITIONS: &[(&str, &str)] = &[
    ("I", r"\x. x"),
    ("true", r"\x y. x"),
    ("false", r"\x y. y"),
    ("if", r"\b x y. b x y"),
    ("not", r"\b. b false true"),
    ("pair", r"\x y z. z x y"),
    ("fst", r"\u. u true"),
    ("snd", r"\u. u false"),
    ("zero", r"\x. x"),
    ("succ", r"\n. pair false n"),
    ("pred", r"\n. n false"),
    ("iszero", r"\n. n true"),
    // Y = W W with W = λw f a. f (w w f) a
    ("Y", r"(\w f a. f (w w f) a) (\w f a. f (w w f) a)"),
    (
        "numeq",
        r"Y (\r n m. if (iszero n) (\z. iszero m) (\z. if (iszero m) (\z. false) (\z. r (pred n) (pred m)) I) I)",
    ),
    (
        "primrec",
        r"Y (\r g h n. if (iszero n) (\z. g) (\z. h (pred n) (r g h (pred n))) I)",
    ),
    ("nil", r"pair zero I"),
    ("lh", r"\u. fst u"),
    (
        "lat",
        r"Y (\r l i. if (iszero i) (\z. fst l) (\z. r (snd l) (pred i)) I)",
    ),
    ("at", r"\u i. lat (snd u) i"),
    (
        "add",
        r"Y (\r n m. if (iszero n) (\z. m) (\z. succ (r (pred n) m)) I)",
    ),
    (
        "monus",
        r"Y (\r n i. if (iszero i) (\z. n) (\z. r (pred n) (pred i)) I)",
    ),
    (
        "lapp",
        r"Y (\r l n m. if (iszero n) (\z. m) (\z. pair (fst l) (r (snd l) (pred n) m)) I)",
    ),
    (
        "cat",
        r"\u v. pair (add (fst u) (fst v)) (lapp (snd u) (fst u) (snd v))",
    ),
    ("cons", r"\a u. pair (succ (fst u)) (pair a (snd u))"),
    ("snoc", r"\u a. cat u (pair (succ zero) (pair a I))"),
    (
        "ltake",
        r"Y (\r l i. if (iszero i) (\z. I) (\z. pair (fst l) (r (snd l) (pred i))) I)",
    ),
    (
        "ldrop",
        r"Y (\r l i. if (iszero i) (\z. l) (\z. r (snd l) (pred i)) I)",
    ),
    ("take", r"\u i. pair i (ltake (snd u) i)"),
    ("drop", r"\u i. pair (monus (fst u) i) (ldrop (snd u) i)"),
    ("slice", r"\u i j. take (drop u i) (monus j i)"),
];

/// Definitions exposed as [`StdKit`] fields.
const FIELDS: &[&str] = &[
    "I", "true", "false", "if", "not", "pair", "fst", "snd", "zero", "succ", "pred", "iszero", "Y",
    "numeq", "primrec", "add", "nil", "lh", "at", "cat", "cons", "snoc", "take", "drop", "slice",
];

/// Budget for compiling one kit definition.
const KIT_FUEL: u64 = 100_000_000;

/// Per-model cache of the derived combinators.
#[derive(Clone, Debug)]
pub struct StdKit {
    pub id: Element,
    pub tru: Element,
    pub fls: Element,
    pub cond: Element,
    pub not: Element,
    pub pair: Element,
    pub fst: Element,
    pub snd: Element,
    pub zero: Element,
    pub succ: Element,
    pub pred: Element,
    pub iszero: Element,
    pub fix: Element,
    pub numeq: Element,
    pub primrec: Element,
    pub add: Element,
    pub nil: Element,
    pub lh: Element,
    pub at: Element,
    pub cat: Element,
    pub cons: Element,
    pub snoc: Element,
    pub take: Element,
    pub drop: Element,
    pub slice: Element,
}

impl StdKit {
    /// Compiles every definition in `pca`, taking elements from `native` where it answers.
    pub fn build(pca: &dyn Pca, native: &dyn Fn(&str) -> Option<Element>) -> StdKit {
        let natives: Vec<Option<Element>> =
            DEFINITIONS.iter().map(|(name, _)| native(name)).collect();
        // Helpers only used by natively supplied definitions are skipped.
        let mut needed: HashSet<&str> = FIELDS.iter().copied().collect();
        for ((name, src), nat) in DEFINITIONS.iter().zip(&natives).rev() {
            if needed.contains(name) && nat.is_none() {
                needed.extend(
                    src.split(|c: char| !c.is_alphanumeric())
                        .filter(|w| !w.is_empty()),
                );
            }
        }
        let mut env = Env::new();
        for ((name, src), nat) in DEFINITIONS.iter().zip(natives) {
            if !needed.contains(name) {
                continue;
            }
            let e = match nat {
                Some(e) => e,
                None => syntax::eval_source(pca, &env, src, &mut Fuel::new(KIT_FUEL))
                    .unwrap_or_else(|err| {
                        panic!("kit definition `{name}` in {}: {err}", pca.name())
                    }),
            };
            env.insert(name.to_string(), e);
        }
        let get = |n: &str| env[n].clone();
        StdKit {
            id: get("I"),
            tru: get("true"),
            fls: get("false"),
            cond: get("if"),
            not: get("not"),
            pair: get("pair"),
            fst: get("fst"),
            snd: get("snd"),
            zero: get("zero"),
            succ: get("succ"),
            pred: get("pred"),
            iszero: get("iszero"),
            fix: get("Y"),
            numeq: get("numeq"),
            primrec: get("primrec"),
            add: get("add"),
            nil: get("nil"),
            lh: get("lh"),
            at: get("at"),
            cat: get("cat"),
            cons: get("cons"),
            snoc: get("snoc"),
            take: get("take"),
            drop: get("drop"),
            slice: get("slice"),
        }
    }

    /// Applies `f` to every element.
    pub fn map(&self, f: impl Fn(&Element) -> Element) -> StdKit {
        StdKit {
            id: f(&self.id),
            tru: f(&self.tru),
            fls: f(&self.fls),
            cond: f(&self.cond),
            not: f(&self.not),
            pair: f(&self.pair),
            fst: f(&self.fst),
            snd: f(&self.snd),
            zero: f(&self.zero),
            succ: f(&self.succ),
            pred: f(&self.pred),
            iszero: f(&self.iszero),
            fix: f(&self.fix),
            numeq: f(&self.numeq),
            primrec: f(&self.primrec),
            add: f(&self.add),
            nil: f(&self.nil),
            lh: f(&self.lh),
            at: f(&self.at),
            cat: f(&self.cat),
            cons: f(&self.cons),
            snoc: f(&self.snoc),
            take: f(&self.take),
            drop: f(&self.drop),
            slice: f(&self.slice),
        }
    }

    /// Name → element bindings, as used by the term grammar.
    pub fn env(&self) -> Env {
        let mut env = Env::new();
        for (name, e) in [
            ("I", &self.id),
            ("true", &self.tru),
            ("false", &self.fls),
            ("if", &self.cond),
            ("not", &self.not),
            ("pair", &self.pair),
            ("fst", &self.fst),
            ("snd", &self.snd),
            ("zero", &self.zero),
            ("succ", &self.succ),
            ("pred", &self.pred),
            ("iszero", &self.iszero),
            ("Y", &self.fix),
            ("numeq", &self.numeq),
            ("primrec", &self.primrec),
            ("add", &self.add),
            ("nil", &self.nil),
            ("lh", &self.lh),
            ("at", &self.at),
            ("cat", &self.cat),
            ("cons", &self.cons),
            ("snoc", &self.snoc),
            ("take", &self.take),
            ("drop", &self.drop),
            ("slice", &self.slice),
        ] {
            env.insert(name.to_string(), e.clone());
        }
        env
    }

    pub fn numeral(&self, pca: &dyn Pca, n: u64, fuel: &mut Fuel) -> AppResult {
        let mut acc = self.zero.clone();
        for _ in 0..n {
            acc = pca.apply(&self.succ, &acc, fuel)?;
        }
        Ok(acc)
    }

    /// Codes a host list.
    pub fn seq(&self, pca: &dyn Pca, items: &[Element], fuel: &mut Fuel) -> AppResult {
        let mut acc = self.nil.clone();
        for item in items.iter().rev() {
            let c = pca.apply(&self.cons, item, fuel)?;
            acc = pca.apply(&c, &acc, fuel)?;
        }
        Ok(acc)
    }

    /// Reads a numeral back by repeated `iszero`/`pred`; `None` if `e` is not one.
    pub fn decode_numeral(
        &self,
        pca: &dyn Pca,
        e: &Element,
        fuel: &mut Fuel,
    ) -> Result<Option<u64>, Halt> {
        let mut cur = e.clone();
        let mut n = 0;
        loop {
            let z = pca.apply(&self.iszero, &cur, fuel)?;
            if z == self.tru {
                return Ok((cur == self.zero).then_some(n));
            }
            if z != self.fls {
                return Ok(None);
            }
            let p = pca.apply(&self.pred, &cur, fuel)?;
            let back = pca.apply(&self.succ, &p, fuel)?;
            if back != cur {
                return Ok(None);
            }
            cur = p;
            n += 1;
        }
    }

    /// Reads a sequence back through `fst`/`snd` alone, independently of `at`, `cat` and slicing.
    pub fn decode_seq(
        &self,
        pca: &dyn Pca,
        e: &Element,
        fuel: &mut Fuel,
    ) -> Result<Option<Vec<Element>>, Halt> {
        let len = pca.apply(&self.fst, e, fuel)?;
        let Some(n) = self.decode_numeral(pca, &len, fuel)? else {
            return Ok(None);
        };
        let mut list = pca.apply(&self.snd, e, fuel)?;
        let mut items = Vec::with_capacity(n as usize);
        for _ in 0..n {
            items.push(pca.apply(&self.fst, &list, fuel)?);
            list = pca.apply(&self.snd, &list, fuel)?;
        }
        Ok(Some(items))
    }
}

/// `Λ*x1…xn. h (g1 x1…xn) … (gk x1…xn)`.
pub fn compose_fns(
    pca: &dyn Pca,
    h: &Element,
    gs: &[Element],
    arity: usize,
) -> Result<Element, syntax::SyntaxError> {
    let xs: Vec<String> = (0..arity).map(|i| format!("x{i}")).collect();
    let args = xs.join(" ");
    let gnames: Vec<String> = (0..gs.len()).map(|i| format!("g{i}")).collect();
    let body: Vec<String> = gnames.iter().map(|g| format!("({g} {args})")).collect();
    let src = format!(r"\{args}. h {}", body.join(" "));
    let mut extras: Vec<(&str, &Element)> = vec![("h", h)];
    extras.extend(gnames.iter().map(String::as_str).zip(gs));
    syntax::define(pca, &extras, &src)
}

/// `Λ*n. primrec g h n`: `F 0 = g`, `F (n+1) = h n (F n)`.
pub fn recursion(pca: &dyn Pca, g: &Element, h: &Element) -> Result<Element, syntax::SyntaxError> {
    syntax::define(pca, &[("g", g), ("h", h)], r"\n. primrec g h n")
}

/// `Λ*x. μn. f x n = 0`, searching upwards from zero; undefined when no
/// such `n` exists or some `f x n` before it is undefined.
pub fn minimize(pca: &dyn Pca, f: &Element) -> Result<Element, syntax::SyntaxError> {
    syntax::define(
        pca,
        &[("f", f)],
        r"\x. Y (\r n. if (iszero (f x n)) (\z. n) (\z. r (succ n)) I) zero",
    )
}

/// First counterexample per equation.
struct Laws {
    seed: u64,
    samples: usize,
    rows: Vec<(&'static str, Option<String>)>,
}

impl Laws {
    fn record(&mut self, law: &'static str, fail: impl FnOnce() -> Option<String>) {
        let i = match self.rows.iter().position(|(l, _)| *l == law) {
            Some(i) => i,
            None => {
                self.rows.push((law, None));
                self.rows.len() - 1
            }
        };
        if self.rows[i].1.is_none() {
            self.rows[i].1 = fail();
        }
    }

    fn reports(self) -> Vec<CheckReport> {
        let (samples, seed) = (self.samples, self.seed);
        self.rows
            .into_iter()
            .map(|(law, cx)| CheckReport::new(law, samples, seed, cx))
            .collect()
    }
}

fn expect(got: AppResult, want: &Element, what: impl FnOnce() -> String) -> Option<String> {
    match got {
        Ok(v) if v == *want => None,
        other => Some(format!(
            "{}: got {}, want {}",
            what(),
            outcome(&other),
            short(want)
        )),
    }
}

/// Checks the defining equations of the kit on `samples` random instances
/// each: cases and negation, pairing, numerals up to 8 against their
/// structural form, primitive recursion, the fixpoint equation and the
/// sequence operations against host lists.
pub fn check_kit(pca: &dyn Pca, samples: usize, seed: u64, fuel: u64) -> Vec<CheckReport> {
    let kit = pca.kit();
    let mut rng = rng(seed);
    let mut laws = Laws {
        seed,
        samples,
        rows: Vec::new(),
    };
    let ap = |f: &Element, args: &[Element]| eval_apps(pca, f, args, &mut Fuel::new(fuel));
    let structural: Vec<Element> = (0..=9)
        .scan(kit.zero.clone(), |n, _| {
            let cur = n.clone();
            *n = ap(&kit.pair, &[kit.fls.clone(), cur.clone()]).expect("pairing is total");
            Some(cur)
        })
        .collect();
    let num = |n: usize| structural[n].clone();
    for _ in 0..samples {
        let x = sample::element(pca, &mut rng);
        let y = sample::element(pca, &mut rng);
        let sx = || format!("x={} y={}", short(&x), short(&y));
        laws.record("if true x y = x", || {
            expect(
                ap(&kit.cond, &[kit.tru.clone(), x.clone(), y.clone()]),
                &x,
                sx,
            )
        });
        laws.record("if false x y = y", || {
            expect(
                ap(&kit.cond, &[kit.fls.clone(), x.clone(), y.clone()]),
                &y,
                sx,
            )
        });
        let b = if rng.gen_bool(0.5) {
            &kit.tru
        } else {
            &kit.fls
        };
        let nb = if *b == kit.tru { &kit.fls } else { &kit.tru };
        laws.record("not b = negation of b", || {
            expect(ap(&kit.not, &[b.clone()]), nb, || short(b))
        });
        let p = ap(&kit.pair, &[x.clone(), y.clone()]);
        laws.record("fst (pair x y) = x", || match &p {
            Ok(p) => expect(ap(&kit.fst, &[p.clone()]), &x, sx),
            Err(h) => Some(format!("{}: pair -> {h}", sx())),
        });
        laws.record("snd (pair x y) = y", || match &p {
            Ok(p) => expect(ap(&kit.snd, &[p.clone()]), &y, sx),
            Err(h) => Some(format!("{}: pair -> {h}", sx())),
        });

        let n = rng.gen_range(0..=8usize);
        let m = rng.gen_range(0..=8usize);
        let sn = || format!("n={n}");
        laws.record("numeral n is n-fold pair false over zero", || {
            expect(
                kit.numeral(pca, n as u64, &mut Fuel::new(fuel)),
                &num(n),
                sn,
            )
        });
        laws.record("succ n = n+1", || {
            expect(ap(&kit.succ, &[num(n)]), &num(n + 1), sn)
        });
        laws.record("pred (n+1) = n", || {
            expect(ap(&kit.pred, &[num(n + 1)]), &num(n), sn)
        });
        let z = if n == 0 { &kit.tru } else { &kit.fls };
        laws.record("iszero n = (n == 0)", || {
            expect(ap(&kit.iszero, &[num(n)]), z, sn)
        });
        let e = if n == m { &kit.tru } else { &kit.fls };
        laws.record("numeq n m = (n == m)", || {
            expect(ap(&kit.numeq, &[num(n), num(m)]), e, || {
                format!("n={n} m={m}")
            })
        });
        let (a, c) = (n / 2, m / 2);
        laws.record("add n m = n+m", || {
            expect(ap(&kit.add, &[num(a), num(c)]), &num(a + c), || {
                format!("n={a} m={c}")
            })
        });
        laws.record("decode numeral n = n", || {
            let got = kit.decode_numeral(pca, &num(n), &mut Fuel::new(fuel));
            (got != Ok(Some(n as u64))).then(|| format!("n={n}: {got:?}"))
        });

        let g = sample::element(pca, &mut rng);
        let h = sample::element(pca, &mut rng);
        let sgh = || format!("g={} h={} n={n}", short(&g), short(&h));
        laws.record("primrec g h 0 = g", || {
            expect(ap(&kit.primrec, &[g.clone(), h.clone(), num(0)]), &g, sgh)
        });
        laws.record("primrec g h (n+1) ~ h n (primrec g h n)", || {
            kleene_eq(
                fuel,
                |f| eval_apps(pca, &kit.primrec, &[g.clone(), h.clone(), num(n + 1)], f),
                |f| {
                    let r = eval_apps(pca, &kit.primrec, &[g.clone(), h.clone(), num(n)], f)?;
                    eval_apps(pca, &h, &[num(n), r], f)
                },
            )
            .err()
            .map(|why| format!("{}: {why}", sgh()))
        });

        let yf = ap(&kit.fix, &[g.clone()]);
        laws.record("Y f defined", || {
            yf.as_ref().err().map(|h| format!("f={}: {h}", short(&g)))
        });
        laws.record("Y f a ~ f (Y f) a", || {
            let yf = yf.as_ref().ok()?;
            kleene_eq(
                fuel,
                |f| eval_apps(pca, yf, &[x.clone()], f),
                |f| eval_apps(pca, &g, &[yf.clone(), x.clone()], f),
            )
            .err()
            .map(|why| format!("f={} a={}: {why}", short(&g), short(&x)))
        });

        let len = rng.gen_range(0..=5usize);
        let items = sample::elements(pca, &mut rng, len);
        let extra = rng.gen_range(0..=3usize);
        let more = sample::elements(pca, &mut rng, extra);
        let code = |xs: &[Element]| {
            kit.seq(pca, xs, &mut Fuel::new(fuel))
                .expect("sequence coding is total")
        };
        let u = code(&items);
        let v = code(&more);
        let su = || {
            format!(
                "u=[{}]",
                items.iter().map(short).collect::<Vec<_>>().join(", ")
            )
        };
        let i = rng.gen_range(0..=len);
        let j = rng.gen_range(i..=len);
        let k = rng.gen_range(0..len.max(1));
        laws.record("decode (seq u) = u", || {
            let got = kit.decode_seq(pca, &u, &mut Fuel::new(fuel));
            (got.as_ref() != Ok(&Some(items.clone()))).then(|| format!("{}: decoded {got:?}", su()))
        });
        laws.record("lh u = |u|", || {
            expect(ap(&kit.lh, &[u.clone()]), &num(len), su)
        });
        laws.record("at u i = u_i", || match items.get(k) {
            Some(want) => expect(ap(&kit.at, &[u.clone(), num(k)]), want, || {
                format!("{} i={k}", su())
            }),
            None => None,
        });
        let joined: Vec<Element> = items.iter().chain(&more).cloned().collect();
        laws.record("cat u v = u ++ v", || {
            expect(ap(&kit.cat, &[u.clone(), v.clone()]), &code(&joined), su)
        });
        let consed: Vec<Element> = std::iter::once(x.clone())
            .chain(items.iter().cloned())
            .collect();
        laws.record("cons x u = [x] ++ u", || {
            expect(ap(&kit.cons, &[x.clone(), u.clone()]), &code(&consed), su)
        });
        let snocced: Vec<Element> = items
            .iter()
            .cloned()
            .chain(std::iter::once(x.clone()))
            .collect();
        laws.record("snoc u x = u ++ [x]", || {
            expect(ap(&kit.snoc, &[u.clone(), x.clone()]), &code(&snocced), su)
        });
        let sij = || format!("{} i={i} j={j}", su());
        laws.record("take u i = u[..i]", || {
            expect(ap(&kit.take, &[u.clone(), num(i)]), &code(&items[..i]), sij)
        });
        laws.record("drop u i = u[i..]", || {
            expect(ap(&kit.drop, &[u.clone(), num(i)]), &code(&items[i..]), sij)
        });
        laws.record("slice u i j = u[i..j]", || {
            expect(
                ap(&kit.slice, &[u.clone(), num(i), num(j)]),
                &code(&items[i..j]),
                sij,
            )
        });
    }
    laws.reports()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{eval_apps, TermPca};

    const F: u64 = 1_000_000;

    fn models() -> Vec<TermPca> {
        vec![TermPca::pure(), TermPca::enriched()]
    }

    fn run(pca: &dyn Pca, src: &str) -> Element {
        let env = pca.kit().env();
        syntax::eval_source(pca, &env, src, &mut Fuel::new(F)).unwrap()
    }

    fn num(pca: &dyn Pca, n: u64) -> Element {
        pca.kit().numeral(pca, n, &mut Fuel::new(F)).unwrap()
    }

    #[test]
    fn cases_pick_branches() {
        for pca in models() {
            assert_eq!(run(&pca, "if true K S"), pca.k());
            assert_eq!(run(&pca, "if false K S"), pca.s());
            assert_eq!(run(&pca, "not (not true)"), pca.kit().tru);
        }
    }

    #[test]
    fn projections() {
        for pca in models() {
            assert_eq!(run(&pca, "fst (pair K S)"), pca.k());
            assert_eq!(run(&pca, "snd (pair K S)"), pca.s());
        }
    }

    #[test]
    fn numerals() {
        for pca in models() {
            assert_eq!(run(&pca, "succ num:0"), num(&pca, 1));
            assert_eq!(run(&pca, "numeq num:3 num:3"), pca.kit().tru);
            assert_eq!(run(&pca, "numeq num:3 num:4"), pca.kit().fls);
            assert_eq!(run(&pca, "pred (succ (succ num:0))"), num(&pca, 1));
            let kit = pca.kit();
            assert_eq!(
                kit.decode_numeral(&pca, &num(&pca, 7), &mut Fuel::new(F)),
                Ok(Some(7))
            );
            assert_eq!(
                kit.decode_numeral(&pca, &pca.k(), &mut Fuel::new(F)),
                Ok(None)
            );
        }
    }

    #[test]
    fn primitive_recursion_arithmetic() {
        for pca in models() {
            // add m n = primrec m (λk acc. succ acc) n
            assert_eq!(
                run(&pca, r"primrec num:2 (\k a. succ a) num:3"),
                num(&pca, 5)
            );
            let mul = r"(\m n. primrec zero (\k a. primrec a (\j b. succ b) m) n)";
            assert_eq!(run(&pca, &format!("{mul} num:2 num:3")), num(&pca, 6));
            assert_eq!(run(&pca, r"primrec K S zero"), pca.k());
        }
    }

    #[test]
    fn fixpoint() {
        for pca in models() {
            assert!(pca
                .apply(&pca.kit().fix, &pca.k(), &mut Fuel::new(F))
                .is_ok());
            assert_eq!(run(&pca, "Y (K I) S"), pca.s());
            let fact = r"Y (\f n. if (iszero n) (\z. succ zero) (\z. primrec zero (\k a. add a (f (pred n))) n) I)";
            assert_eq!(run(&pca, &format!("{fact} num:4")), num(&pca, 24));
        }
    }

    #[test]
    fn sequences() {
        for pca in models() {
            let kit = pca.kit();
            let (k, s) = (pca.k(), pca.s());
            assert_eq!(run(&pca, "lh seq[]"), num(&pca, 0));
            assert_eq!(run(&pca, "lh seq[K, S, K]"), num(&pca, 3));
            assert_eq!(run(&pca, "at seq[K, S, K] num:1"), s);
            assert_eq!(run(&pca, "cat seq[K] seq[S, K]"), run(&pca, "seq[K, S, K]"));
            assert_eq!(
                run(&pca, "slice seq[K, S, S, K] num:1 num:3"),
                run(&pca, "seq[S, S]")
            );
            assert_eq!(run(&pca, "take seq[K, S, S] num:1"), run(&pca, "seq[K]"));
            assert_eq!(run(&pca, "drop seq[K, S, S] num:1"), run(&pca, "seq[S, S]"));
            assert_eq!(run(&pca, "snoc seq[K] S"), run(&pca, "seq[K, S]"));
            let u = kit
                .seq(&pca, &[k.clone(), s.clone()], &mut Fuel::new(F))
                .unwrap();
            assert_eq!(
                kit.decode_seq(&pca, &u, &mut Fuel::new(F)),
                Ok(Some(vec![k, s]))
            );
        }
    }

    #[test]
    fn pure_and_enriched_agree_on_structure() {
        let pure = TermPca::pure();
        let rich = TermPca::enriched();
        assert_eq!(pure.kit().tru, rich.kit().tru);
        assert_eq!(pure.kit().zero, rich.kit().zero);
        let r = eval_apps(
            &rich,
            &rich.kit().pair,
            &[rich.k(), rich.s()],
            &mut Fuel::new(10),
        )
        .unwrap();
        assert_eq!(r.to_string(), "pair K S");
    }

    #[test]
    fn kit_equations_hold() {
        for pca in models() {
            for r in check_kit(&pca, 60, 3, 100_000) {
                assert!(r.passed(), "{r}");
            }
        }
    }

    #[test]
    fn builders() {
        for pca in models() {
            let kit = pca.kit();
            let add =
                compose_fns(&pca, &kit.add, &[kit.succ.clone(), kit.pred.clone()], 1).unwrap();
            assert_eq!(
                pca.apply(&add, &num(&pca, 3), &mut Fuel::new(F)),
                Ok(num(&pca, 6))
            );
            let double = recursion(&pca, &kit.zero, &run(&pca, r"\k a. succ (succ a)")).unwrap();
            assert_eq!(
                pca.apply(&double, &num(&pca, 3), &mut Fuel::new(F)),
                Ok(num(&pca, 6))
            );
            let differ = run(&pca, r"\x n. if (numeq x n) zero (succ zero)");
            let search = minimize(&pca, &differ).unwrap();
            assert_eq!(
                pca.apply(&search, &num(&pca, 4), &mut Fuel::new(F)),
                Ok(num(&pca, 4))
            );
            let never = run(&pca, r"\x n. succ n");
            let search = minimize(&pca, &never).unwrap();
            assert_eq!(
                pca.apply(&search, &pca.k(), &mut Fuel::new(F)),
                Err(Halt::FuelExhausted)
            );
        }
    }
}
