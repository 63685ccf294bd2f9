//! Named acceptance suites over the term or numeric model. Reports depend
//! only on the configuration, never on timing or scheduling.

use std::fmt;
use std::sync::Arc;

use crate::assemblies::{self, Assembly};
use crate::bracket::check_completeness;
use crate::density;
use crate::kernel::{
    check_axioms, eval_apps, rng, sample, Atom, Element, Fuel, Pca, TermMode, TermPca,
};
use crate::morphisms::{
    check_decidable, check_iso, check_realizer, check_realizer_on, compose, defined_pairs,
    eq_oracle, identity, turing_leq, ApplicativeMorphism,
};
use crate::oracle::{self, ExtendedPca, OracleFn, Outcome};
use crate::report::{outcome, short, CheckReport, SuiteReport};
use crate::stdlib::check_kit;
use crate::syntax::define;

pub const SUITES: &[&str] = &[
    "axioms",
    "oracle",
    "morphisms",
    "assemblies",
    "density",
    "all",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Model {
    Term,
    Numeric,
}

impl Model {
    pub fn build(self) -> Arc<dyn Pca> {
        match self {
            Model::Term => Arc::new(TermPca::enriched()),
            Model::Numeric => Arc::new(crate::kernel::NumericPca::new(Arc::new(
                TermPca::enriched(),
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Config {
    pub model: Model,
    pub seed: u64,
    pub samples: usize,
    /// Budget for one application in the base model. Checks over one oracle
    /// get ten times this, checks over two stacked oracles ten thousand times.
    pub fuel: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            model: Model::Term,
            seed: 0,
            samples: 200,
            fuel: 100_000,
        }
    }
}

impl Config {
    fn half(&self) -> usize {
        (self.samples / 2).max(1)
    }

    fn ext_fuel(&self) -> u64 {
        self.fuel.saturating_mul(10)
    }

    fn tower_fuel(&self) -> u64 {
        self.fuel.saturating_mul(10_000)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error(
    "unknown suite `{0}` (expected one of: axioms, oracle, morphisms, assemblies, density, all)"
)]
pub struct UnknownSuite(pub String);

/// One titled section per suite that ran.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Run {
    pub sections: Vec<(String, SuiteReport)>,
}

impl Run {
    pub fn passed(&self) -> bool {
        self.sections.iter().all(|(_, r)| r.passed())
    }
}

impl fmt::Display for Run {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut total = 0;
        let mut failed = 0;
        for (name, report) in &self.sections {
            writeln!(f, "== {name} ==")?;
            write!(f, "{report}")?;
            total += report.checks.len();
            failed += report.checks.iter().filter(|c| !c.passed()).count();
        }
        writeln!(
            f,
            "{} checks, {} failed: {}",
            total,
            failed,
            if failed == 0 { "PASS" } else { "FAIL" }
        )
    }
}

pub fn run(name: &str, cfg: &Config) -> Result<Run, UnknownSuite> {
    let names: Vec<&str> = match name {
        "all" => SUITES[..SUITES.len() - 1].to_vec(),
        n if SUITES.contains(&n) => vec![n],
        n => return Err(UnknownSuite(n.to_string())),
    };
    let sections = names
        .into_iter()
        .map(|n| (n.to_string(), section(n, cfg)))
        .collect();
    Ok(Run { sections })
}

fn section(name: &str, cfg: &Config) -> SuiteReport {
    let mut r = SuiteReport::default();
    match name {
        "axioms" => axioms(cfg, &mut r),
        "oracle" => oracle_suite(cfg, &mut r),
        "morphisms" => morphisms_suite(cfg, &mut r),
        "assemblies" => assemblies_suite(cfg, &mut r),
        "density" => density_suite(cfg, &mut r),
        _ => unreachable!("validated by run"),
    }
    r
}

fn tagged(tag: &str, rs: Vec<CheckReport>) -> Vec<CheckReport> {
    rs.into_iter()
        .map(|mut c| {
            c.law = format!("[{tag}] {}", c.law);
            c
        })
        .collect()
}

fn failure(law: &str, why: impl fmt::Display) -> CheckReport {
    CheckReport::new(law, 0, 0, Some(why.to_string()))
}

/// The table `n ↦ n + step` on numerals `0..len`.
pub fn shift_table(a: &dyn Pca, name: &str, step: u64, len: u64) -> OracleFn {
    let kit = a.kit();
    let num = |n| {
        kit.numeral(a, n, &mut Fuel::new(u64::MAX))
            .expect("numerals are total")
    };
    OracleFn::from_table(name, (0..len).map(|n| (num(n), num(n + step))))
        .expect("distinct numerals")
}

fn axioms(cfg: &Config, r: &mut SuiteReport) {
    let term = TermPca::enriched();
    let models: Vec<Arc<dyn Pca>> = vec![
        Arc::new(TermPca::enriched()),
        Arc::new(TermPca::pure()),
        Model::Numeric.build(),
    ];
    for m in &models {
        r.extend(check_axioms(&**m, cfg.samples, cfg.seed, cfg.fuel));
    }
    let instances = cfg.samples + cfg.half();
    for arity in 1..=3 {
        r.extend(tagged(
            &term.name(),
            check_completeness(&term, arity, instances, cfg.seed, cfg.fuel),
        ));
    }
    for m in &models[..2] {
        r.extend(tagged(
            &m.name(),
            check_kit(&**m, cfg.samples, cfg.seed, cfg.fuel),
        ));
    }
}

fn representability(ext: &ExtendedPca, fuel: u64) -> CheckReport {
    let law = "r_f answers f(a) after exactly one query";
    let a = &**ext.base();
    let f = ext.oracle();
    for (x, fx) in f.entries() {
        let (res, trace) = ext.dialogue_apply(ext.representer(), x, &mut Fuel::new(fuel));
        if res.as_ref() != Ok(fx) || trace.steps.len() != 1 {
            let cx = format!(
                "a={} -> {} after {} queries",
                short(x),
                outcome(&res),
                trace.steps.len()
            );
            return CheckReport::new(law, f.entries().len(), 0, Some(cx));
        }
    }
    let outside = a.k();
    let (_, trace) = ext.dialogue_apply(ext.representer(), &outside, &mut Fuel::new(fuel));
    if trace.outcome != Outcome::QueryOutsideDomain(outside.clone()) {
        let cx = format!("a={} outcome {:?}", short(&outside), trace.outcome);
        return CheckReport::new(law, f.entries().len() + 1, 0, Some(cx));
    }
    CheckReport::new(law, f.entries().len() + 1, 0, None)
}

fn nontotality(a: &Arc<dyn Pca>, ext: &ExtendedPca, cfg: &Config) -> Vec<CheckReport> {
    let w = oracle::nontotal_witness(&**a);
    let mut rng = rng(cfg.seed);
    let law = "nontotal witness never answers (fuels 1e3, 1e4, 1e5)";
    let n = cfg.half();
    let mut cx = None;
    'outer: for _ in 0..n {
        let b = sample::element(&**a, &mut rng);
        for budget in [1_000, 10_000, 100_000] {
            if let Ok(v) = ext.apply(&w, &b, &mut Fuel::new(budget)) {
                cx = Some(format!("b={} -> {} at fuel {budget}", short(&b), short(&v)));
                break 'outer;
            }
        }
    }
    let first = CheckReport::new(law, n, cfg.seed, cx);
    let total = Arc::new(OracleFn::builtin("const-K", |_: &Element, _: &mut Fuel| {
        Ok(Some(Element::atom(Atom::K)))
    }));
    let with_total = ExtendedPca::new(a.clone(), total);
    let (_, t4) = with_total.dialogue_apply(&w, &a.k(), &mut Fuel::new(10_000));
    let (_, t5) = with_total.dialogue_apply(&w, &a.k(), &mut Fuel::new(100_000));
    let grows = (t5.steps.len() <= t4.steps.len()).then(|| {
        format!(
            "{} queries at 1e5, {} at 1e4",
            t5.steps.len(),
            t4.steps.len()
        )
    });
    vec![
        first,
        CheckReport::new("total oracle: trace grows with fuel", 2, 0, grows),
    ]
}

fn oracle_suite(cfg: &Config, r: &mut SuiteReport) {
    let a = cfg.model.build();
    let f = Arc::new(shift_table(&*a, "succ", 1, 16));
    let ext = Arc::new(ExtendedPca::new(a.clone(), f));
    let ef = cfg.ext_fuel();
    r.extend(check_axioms(&*ext, cfg.samples, cfg.seed, ef));
    r.push(oracle::check_against_dialogue(
        &ext,
        cfg.samples,
        cfg.seed,
        ef,
    ));
    r.push(representability(&ext, ef));

    let iota = oracle::iota(&ext);
    r.push(check_realizer(&iota, cfg.samples, cfg.seed, cfg.fuel));
    match &iota.decider {
        Some(d) => r.push(check_decidable(&iota, d, cfg.fuel)),
        None => r.push(failure("decider iota", "missing")),
    }
    r.extend(nontotality(&a, &ext, cfg));

    match oracle::lift_morphism(&iota, &ext, ext.representer()) {
        Ok((lifted, parts)) => {
            r.push(check_realizer(&lifted, cfg.half(), cfg.seed, ef));
            let kit = a.kit();
            let machine = define(
                &*a,
                &[],
                r"\u. if (numeq (lh u) num:5) (\z. pair true (at u num:4)) (\z. pair false (at u (pred (lh u)))) I",
            )
            .expect("four-query machine");
            let pairs: Vec<(Element, Element)> = (0..13)
                .map(|n| {
                    (
                        machine.clone(),
                        kit.numeral(&*a, n, &mut Fuel::new(cfg.fuel))
                            .expect("numeral"),
                    )
                })
                .collect();
            let instances = (cfg.samples / 4).max(1);
            r.push(oracle::check_u_step(
                &iota,
                ext.representer(),
                &parts,
                &pairs,
                instances,
                cfg.tower_fuel(),
            ));
        }
        Err(e) => r.push(failure("lift of iota", e)),
    }

    let pa = a.clone();
    let p0 = Arc::new(OracleFn::builtin(
        "p0",
        move |x: &Element, fuel: &mut Fuel| pa.apply(&pa.kit().fst, x, fuel).map(Some),
    ));
    match oracle::collapse(a.clone(), p0, &a.kit().fst) {
        Ok((cext, down, up)) => {
            r.push(check_realizer(&down, cfg.half(), cfg.seed, ef));
            let ia = a.kit().id.clone();
            r.push(check_iso(
                &compose(&down, &up),
                &identity(a.clone()),
                &ia,
                &ia,
                cfg.half(),
                cfg.seed,
                ef,
            ));
            let ie = cext.kit().id.clone();
            r.push(check_iso(
                &compose(&up, &down),
                &identity(cext.clone()),
                &ie,
                &ie,
                cfg.half(),
                cfg.seed,
                ef,
            ));
        }
        Err(e) => r.push(failure("collapse p0", e)),
    }
}

/// Realizer law on applications found defined within `sample_fuel`, each
/// realized within `fuel`.
fn realizer(
    gamma: &ApplicativeMorphism,
    n: usize,
    seed: u64,
    sample_fuel: u64,
    fuel: u64,
) -> CheckReport {
    let pairs = defined_pairs(&*gamma.source, &mut rng(seed), n, sample_fuel);
    check_realizer_on(gamma, &pairs, seed, fuel)
}

fn morphisms_suite(cfg: &Config, r: &mut SuiteReport) {
    let a = cfg.model.build();
    let ef = cfg.ext_fuel();
    let tf = cfg.tower_fuel();

    let id = identity(a.clone());
    r.push(check_realizer(&id, cfg.samples, cfg.seed, cfg.fuel));
    r.push(check_realizer(
        &compose(&id, &id),
        cfg.samples,
        cfg.seed,
        cfg.fuel,
    ));

    let succ = Arc::new(shift_table(&*a, "succ", 1, 16));
    let eq = Arc::new(eq_oracle(a.clone()));
    match oracle::commutation(a.clone(), succ.clone(), eq.clone()) {
        Ok(c) => {
            let n = cfg.half();
            r.push(realizer(&c.there, n, cfg.seed, ef, tf));
            r.push(realizer(&c.back, n, cfg.seed, ef, tf));
            let ifg = c.fg.kit().id.clone();
            let igf = c.gf.kit().id.clone();
            r.push(check_iso(
                &compose(&c.back, &c.there),
                &identity(c.fg.clone()),
                &ifg,
                &ifg,
                n,
                cfg.seed,
                tf,
            ));
            r.push(check_iso(
                &compose(&c.there, &c.back),
                &identity(c.gf.clone()),
                &igf,
                &igf,
                n,
                cfg.seed,
                tf,
            ));
        }
        Err(e) => r.push(failure("commutation", e)),
    }

    let af = ExtendedPca::new(a.clone(), succ.clone());
    r.push(turing_leq(&succ, &af, af.representer(), 16, cfg.seed, ef));
    let twice = shift_table(&*a, "succ2", 2, 15);
    let w = oracle::double_query_witness(&*a);
    r.push(turing_leq(&twice, &af, &w, 15, cfg.seed, ef));
    let two_queries = twice.entries().iter().find_map(|(x, _)| {
        let (_, t) = af.dialogue_apply(&w, x, &mut Fuel::new(ef));
        (t.steps.len() != 2).then(|| format!("a={} asked {} queries", short(x), t.steps.len()))
    });
    r.push(CheckReport::new(
        "succ2 witness asks exactly two queries",
        15,
        0,
        two_queries,
    ));

    let ag = Arc::new(ExtendedPca::new(a.clone(), Arc::new(twice)));
    let ah = Arc::new(ExtendedPca::new(a.clone(), succ.clone()));
    let four = shift_table(&*a, "succ4", 4, 13);
    r.push(turing_leq(&four, &ag, &w, 13, cfg.seed, ef));
    match oracle::transitivity_witness(&ag, &ah, &w, &w, ef) {
        Ok(composite) => r.push(turing_leq(&four, &ah, &composite, 13, cfg.seed, tf)),
        Err(e) => r.push(failure("transitivity witness", e)),
    }

    let aeq = ExtendedPca::new(a.clone(), eq);
    r.push(decides_equality(&a, &aeq, cfg));

    let term = TermPca::enriched();
    match oracle::query_models(
        TermMode::Enriched,
        Arc::new(shift_table(&term, "succ", 1, 16)),
    ) {
        Ok(q) => r.push(realizer(&q.simulate, cfg.half(), cfg.seed, ef, tf)),
        Err(e) => r.push(failure("query model", e)),
    }
    let pure = TermPca::pure();
    let g = Arc::new(shift_table(&pure, "succ", 1, 8));
    match oracle::translation(g, tf) {
        Ok(t) => r.push(realizer(&t.embed, cfg.half(), cfg.seed, ef, tf)),
        Err(e) => r.push(failure("translation", e)),
    }
}

fn decides_equality(a: &Arc<dyn Pca>, aeq: &ExtendedPca, cfg: &Config) -> CheckReport {
    let law = "compiled decider for fst x = snd x in A[eq]";
    let d = match oracle::equality_decider(aeq) {
        Ok(d) => d,
        Err(e) => return failure(law, e),
    };
    let kit = a.kit();
    let mut rng = rng(cfg.seed);
    for i in 0..cfg.samples {
        let x = sample::element(&**a, &mut rng);
        let y = if i % 3 == 0 {
            x.clone()
        } else {
            sample::element(&**a, &mut rng)
        };
        let got = eval_apps(
            &**a,
            &kit.pair,
            &[x.clone(), y.clone()],
            &mut Fuel::new(cfg.fuel),
        )
        .and_then(|p| aeq.apply(&d, &p, &mut Fuel::new(cfg.ext_fuel())));
        let want = if x == y { &kit.tru } else { &kit.fls };
        if got.as_ref() != Ok(want) {
            let cx = format!("x={} y={} -> {}", short(&x), short(&y), outcome(&got));
            return CheckReport::new(law, i + 1, cfg.seed, Some(cx));
        }
    }
    CheckReport::new(law, cfg.samples, cfg.seed, None)
}

fn assemblies_suite(cfg: &Config, r: &mut SuiteReport) {
    let a = cfg.model.build();
    let kit = a.kit();
    let pool = [kit.tru.clone(), kit.fls.clone(), a.k()];
    let sample = pool.to_vec();
    let mut instances = 0;
    let mut first_failure = None;
    for x in assemblies::small_assemblies(&a, &pool, 3, 2) {
        for size in 1..=3 {
            let s: Vec<String> = (0..size).map(|i| format!("s{i}")).collect();
            for c in assemblies::check_adjunction(&x, &s, &sample, cfg.fuel) {
                instances += 1;
                if first_failure.is_none() && !c.passed() {
                    first_failure = Some(c.to_string());
                }
            }
        }
    }
    r.push(CheckReport::new(
        "Gamma -| Nabla: bijection and triangles on every |X| <= 3, |E(x)| <= 2, |S| <= 3",
        instances,
        0,
        first_failure,
    ));

    let f = Arc::new(shift_table(&*a, "succ", 1, 4));
    let ext = Arc::new(ExtendedPca::new(a.clone(), f.clone()));
    let iota = oracle::iota(&ext);
    let bools = Assembly::new(
        a.clone(),
        vec!["t".into(), "f".into()],
        vec![vec![kit.tru.clone()], vec![kit.fls.clone()]],
    );
    let env = kit.env();
    let mixed = Assembly::parse(a.clone(), &env, "x: K, S\ny: num:1\nz: seq[K]\n", cfg.fuel);
    match (bools, mixed) {
        (Ok(b), Ok(m)) => {
            r.push(assemblies::check_coproduct_preservation(
                &iota,
                &b,
                &m,
                cfg.ext_fuel(),
            ));
            r.push(assemblies::check_coproduct_preservation(
                &iota,
                &m,
                &b,
                cfg.ext_fuel(),
            ));
        }
        (Err(e), _) | (_, Err(e)) => r.push(failure("coproduct instances", e)),
    }

    let (report, representable) =
        assemblies::check_representable_iff_tracked(&iota, &f, ext.representer(), cfg.ext_fuel());
    r.push(report);
    r.push(CheckReport::new(
        "succ table representable in A[succ]",
        1,
        0,
        (!representable).then(|| "representer rejected".to_string()),
    ));
    let (report, representable) =
        assemblies::check_representable_iff_tracked(&identity(a.clone()), &f, &a.k(), cfg.fuel);
    r.push(report);
    r.push(CheckReport::new(
        "K does not represent succ in A",
        1,
        0,
        representable.then(|| "K accepted".to_string()),
    ));
}

fn density_suite(cfg: &Config, r: &mut SuiteReport) {
    let a = cfg.model.build();
    let mut rng = rng(cfg.seed);
    let diverge = define(&*a, &[], r"Y (\r v. r v)").expect("divergent element");
    let cases: Vec<(Element, Vec<Element>)> = (0..cfg.samples)
        .map(|i| {
            let y = if i % 4 == 0 {
                diverge.clone()
            } else {
                sample::element(&*a, &mut rng)
            };
            let len = i % 4;
            (y, sample::elements(&*a, &mut rng, len))
        })
        .collect();
    r.push(density::check_m(&*a, &cases, cfg.seed, cfg.fuel));

    let f = Arc::new(shift_table(&*a, "succ", 1, 16));
    let ext = ExtendedPca::new(a.clone(), f);
    let mut bs: Vec<Element> = vec![
        ext.representer().clone(),
        oracle::double_query_witness(&*a),
        diverge,
    ];
    bs.extend(sample::elements(&*a, &mut rng, 7));
    let kit = a.kit();
    let mut args: Vec<Element> = (0..10)
        .map(|n| {
            kit.numeral(&*a, n, &mut Fuel::new(cfg.fuel))
                .expect("numeral")
        })
        .collect();
    args.extend(sample::elements(&*a, &mut rng, 10));
    r.push(density::check_transform(
        &ext,
        &bs,
        &args,
        cfg.seed,
        cfg.ext_fuel(),
    ));

    let samples = sample::elements(&*a, &mut rng, cfg.samples);
    r.push(density::check_inclusion(
        &ext,
        &samples,
        cfg.seed,
        cfg.ext_fuel(),
    ));
}
