//! Bracket abstraction: terms with variables compiled to PCA elements.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng as _;

use crate::kernel::{eval_apps, kleene_eq, rng, sample, Element, Fuel, Halt, Pca, Rng};
use crate::report::{short, CheckReport};

/// Applicative terms over variables, PCA constants and the symbolic `K`, `S`
/// (resolved to the target model's combinators at compile time).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Const(Element),
    K,
    S,
    App(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn app(f: Term, x: Term) -> Term {
        Term::App(Box::new(f), Box::new(x))
    }

    /// `f a1 a2 ...`
    pub fn apps(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(f, Term::app)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(x) => {
                out.insert(x.clone());
            }
            Term::App(f, x) => {
                f.collect_vars(out);
                x.collect_vars(out);
            }
            _ => {}
        }
    }

    pub fn mentions(&self, name: &str) -> bool {
        match self {
            Term::Var(x) => x == name,
            Term::App(f, x) => f.mentions(name) || x.mentions(name),
            _ => false,
        }
    }

    /// Replaces every occurrence of `name`.
    pub fn substitute(&self, name: &str, with: &Term) -> Term {
        match self {
            Term::Var(x) if x == name => with.clone(),
            Term::App(f, x) => Term::app(f.substitute(name, with), x.substitute(name, with)),
            other => other.clone(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) => f.write_str(x),
            Term::Const(e) => write!(f, "[{}]", crate::report::short(e)),
            Term::K => f.write_str("K"),
            Term::S => f.write_str("S"),
            Term::App(g, x) => {
                write!(f, "{g} ")?;
                if matches!(**x, Term::App(..)) {
                    write!(f, "({x})")
                } else {
                    write!(f, "{x}")
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BracketError {
    #[error("free variable `{0}` not among the abstracted variables")]
    FreeVariable(String),
    #[error("variable `{0}` abstracted twice")]
    DuplicateVariable(String),
    #[error("abstraction over an empty variable list")]
    NoVariables,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CompileError {
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error(transparent)]
    Halt(#[from] Halt),
}

/// `Λ*x.t` for one variable; other variables may stay free.
///
/// `Λ*x.x = S K K`; `Λ*x.a = K a` for an atom `a` other than `x`;
/// `Λ*x.(t s) = S (Λ*x.t) (Λ*x.s)`. The constant clause is restricted to
/// atoms so that partially applied abstractions never evaluate their body.
pub fn abstract_var(x: &str, t: &Term) -> Term {
    match t {
        Term::Var(y) if y == x => Term::apps(Term::S, [Term::K, Term::K]),
        Term::App(f, a) => Term::apps(Term::S, [abstract_var(x, f), abstract_var(x, a)]),
        atom => Term::app(Term::K, atom.clone()),
    }
}

/// `Λ*x1…xn.body`, innermost variable abstracted first. The result is closed.
pub fn lambda_star(vars: &[&str], body: &Term) -> Result<Term, BracketError> {
    if vars.is_empty() {
        return Err(BracketError::NoVariables);
    }
    let mut seen = BTreeSet::new();
    for v in vars {
        if !seen.insert(*v) {
            return Err(BracketError::DuplicateVariable(v.to_string()));
        }
    }
    if let Some(free) = body
        .free_vars()
        .into_iter()
        .find(|v| !seen.contains(v.as_str()))
    {
        return Err(BracketError::FreeVariable(free));
    }
    Ok(vars
        .iter()
        .rev()
        .fold(body.clone(), |t, x| abstract_var(x, &t)))
}

/// Evaluates a closed term in `pca`.
pub fn compile(pca: &dyn Pca, term: &Term, fuel: &mut Fuel) -> Result<Element, CompileError> {
    match term {
        Term::Var(x) => Err(CompileError::Unbound(x.clone())),
        Term::Const(e) => Ok(e.clone()),
        Term::K => Ok(pca.k()),
        Term::S => Ok(pca.s()),
        Term::App(f, x) => {
            let f = compile(pca, f, fuel)?;
            let x = compile(pca, x, fuel)?;
            Ok(pca.apply(&f, &x, fuel)?)
        }
    }
}

/// A random applicative term over `vars`, `K`, `S` and sampled constants.
pub fn random_term(pca: &dyn Pca, vars: &[&str], rng: &mut Rng, depth: u32) -> Term {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..6) {
            0 => Term::K,
            1 => Term::S,
            2 => Term::Const(sample::element(pca, rng)),
            _ if vars.is_empty() => Term::K,
            _ => Term::var(vars[rng.gen_range(0..vars.len())]),
        };
    }
    Term::app(
        random_term(pca, vars, rng, depth - 1),
        random_term(pca, vars, rng, depth - 1),
    )
}

/// For random bodies over `arity` variables: `Λ*x1…xn.t` applied to `n-1`
/// sampled arguments is defined, and applied to `n` arguments it agrees
/// (Kleene) with `t` after substituting them.
pub fn check_completeness(
    pca: &dyn Pca,
    arity: usize,
    samples: usize,
    seed: u64,
    fuel: u64,
) -> Vec<CheckReport> {
    assert!(arity >= 1);
    let names: Vec<String> = (0..arity).map(|i| format!("x{i}")).collect();
    let vars: Vec<&str> = names.iter().map(String::as_str).collect();
    let mut rng = rng(seed);
    let mut partial_fail = None;
    let mut subst_fail = None;
    for _ in 0..samples {
        let body = random_term(pca, &vars, &mut rng, 4);
        let args = sample::elements(pca, &mut rng, arity);
        let closed = lambda_star(&vars, &body).expect("body only uses the bound variables");
        let e = match compile(pca, &closed, &mut Fuel::new(fuel)) {
            Ok(e) => e,
            Err(err) => {
                partial_fail.get_or_insert_with(|| format!("body={body}: compile -> {err}"));
                continue;
            }
        };
        if partial_fail.is_none() {
            if let Err(h) = eval_apps(pca, &e, &args[..arity - 1], &mut Fuel::new(fuel)) {
                partial_fail = Some(format!("body={body}: first {} arguments -> {h}", arity - 1));
            }
        }
        if subst_fail.is_none() {
            let substituted = vars.iter().zip(&args).fold(body.clone(), |t, (x, a)| {
                t.substitute(x, &Term::Const(a.clone()))
            });
            let res = kleene_eq(
                fuel,
                |f| eval_apps(pca, &e, &args, f),
                |f| {
                    compile(pca, &substituted, f).map_err(|err| match err {
                        CompileError::Halt(h) => h,
                        CompileError::Unbound(_) => unreachable!("substitution closes the body"),
                    })
                },
            );
            if let Err(why) = res {
                let shown: Vec<String> = args.iter().map(short).collect();
                subst_fail = Some(format!("body={body} args=[{}]: {why}", shown.join(", ")));
            }
        }
    }
    vec![
        CheckReport::new(
            format!("lambda* partial application defined (arity {arity})"),
            samples,
            seed,
            partial_fail,
        ),
        CheckReport::new(
            format!("lambda* substitution (arity {arity})"),
            samples,
            seed,
            subst_fail,
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{eval_apps, TermPca};

    fn v(x: &str) -> Term {
        Term::var(x)
    }

    #[test]
    fn identity_abstraction() {
        let pca = TermPca::pure();
        let id = compile(
            &pca,
            &lambda_star(&["x"], &v("x")).unwrap(),
            &mut Fuel::new(100),
        )
        .unwrap();
        let r = pca.apply(&id, &pca.s(), &mut Fuel::new(100)).unwrap();
        assert_eq!(r, pca.s());
    }

    #[test]
    fn first_projection() {
        let pca = TermPca::pure();
        let t = compile(
            &pca,
            &lambda_star(&["x", "y"], &v("x")).unwrap(),
            &mut Fuel::new(100),
        )
        .unwrap();
        let r = eval_apps(&pca, &t, &[pca.k(), pca.s()], &mut Fuel::new(100)).unwrap();
        assert_eq!(r, pca.k());
    }

    #[test]
    fn self_application_of_identity() {
        let pca = TermPca::pure();
        let id = compile(
            &pca,
            &lambda_star(&["x"], &v("x")).unwrap(),
            &mut Fuel::new(100),
        )
        .unwrap();
        let sa = lambda_star(&["x"], &Term::app(v("x"), v("x"))).unwrap();
        let sa = compile(&pca, &sa, &mut Fuel::new(100)).unwrap();
        assert_eq!(pca.apply(&sa, &id, &mut Fuel::new(100)), Ok(id));
    }

    #[test]
    fn constants_compile_to_themselves() {
        let pca = TermPca::pure();
        assert_eq!(
            compile(&pca, &Term::Const(pca.k()), &mut Fuel::new(1)),
            Ok(pca.k())
        );
        let c = lambda_star(&["x"], &Term::Const(pca.k())).unwrap();
        let c = compile(&pca, &c, &mut Fuel::new(10)).unwrap();
        assert_eq!(pca.apply(&c, &pca.s(), &mut Fuel::new(10)), Ok(pca.k()));
    }

    #[test]
    fn rebuilt_s_behaves_as_s() {
        let pca = TermPca::pure();
        let body = Term::app(Term::app(v("x"), v("z")), Term::app(v("y"), v("z")));
        let s2 = compile(
            &pca,
            &lambda_star(&["x", "y", "z"], &body).unwrap(),
            &mut Fuel::new(10_000),
        )
        .unwrap();
        let args = [pca.k(), pca.s(), pca.k()];
        assert_eq!(
            eval_apps(&pca, &s2, &args, &mut Fuel::new(1000)),
            eval_apps(&pca, &pca.s(), &args, &mut Fuel::new(1000))
        );
    }

    #[test]
    fn rejects_free_and_duplicate_variables() {
        assert_eq!(
            lambda_star(&["x"], &v("y")),
            Err(BracketError::FreeVariable("y".into()))
        );
        assert_eq!(
            lambda_star(&["x", "x"], &v("x")),
            Err(BracketError::DuplicateVariable("x".into()))
        );
        assert_eq!(lambda_star(&[], &v("x")), Err(BracketError::NoVariables));
    }

    #[test]
    fn partial_application_never_runs_the_body() {
        // Λ*xy.(x x) applied to ω-ish argument once must be a value.
        let pca = TermPca::pure();
        let t = lambda_star(&["x", "y"], &Term::app(v("x"), v("x"))).unwrap();
        let t = compile(&pca, &t, &mut Fuel::new(100)).unwrap();
        let sa = compile(
            &pca,
            &lambda_star(&["x"], &Term::app(v("x"), v("x"))).unwrap(),
            &mut Fuel::new(100),
        )
        .unwrap();
        assert!(pca.apply(&t, &sa, &mut Fuel::new(100)).is_ok());
        assert_eq!(
            eval_apps(&pca, &t, &[sa.clone(), pca.k()], &mut Fuel::new(10_000)),
            Err(Halt::FuelExhausted)
        );
    }

    #[test]
    fn completeness_holds_for_small_arities() {
        let pca = crate::kernel::TermPca::enriched();
        for arity in 1..=3 {
            for r in check_completeness(&pca, arity, 40, 5, 100_000) {
                assert!(r.passed(), "{r}");
            }
        }
    }
}
