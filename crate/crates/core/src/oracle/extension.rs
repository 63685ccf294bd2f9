use std::fmt;
use std::sync::{Arc, OnceLock};

use super::{constructions, OracleFn};
use crate::kernel::memo::Memo;
use crate::kernel::{AppResult, Element, Fuel, Halt, Pca, Stuck};
use crate::report::short;
use crate::stdlib::StdKit;

/// How a dialogue ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Answered(Element),
    QueryOutsideDomain(Element),
    FuelExhausted,
    Stuck(String),
}

/// The queries and answers exchanged during one `a ·^f b`, plus its outcome.
///
/// Rendered one line per event: `? <query>`, `! <answer>`, then one of
/// `= <value>`, `outside-domain <query>`, `fuel-exhausted`, `stuck <reason>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DialogueTrace {
    pub steps: Vec<(Element, Element)>,
    pub outcome: Outcome,
}

impl DialogueTrace {
    pub fn queries(&self) -> impl Iterator<Item = &Element> {
        self.steps.iter().map(|(q, _)| q)
    }

    pub fn answers(&self) -> Vec<Element> {
        self.steps.iter().map(|(_, a)| a.clone()).collect()
    }
}

impl fmt::Display for DialogueTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (q, a) in &self.steps {
            writeln!(f, "? {q}")?;
            writeln!(f, "! {a}")?;
        }
        match &self.outcome {
            Outcome::Answered(c) => writeln!(f, "= {c}"),
            Outcome::QueryOutsideDomain(v) => writeln!(f, "outside-domain {v}"),
            Outcome::FuelExhausted => writeln!(f, "fuel-exhausted"),
            Outcome::Stuck(why) => writeln!(f, "stuck {why}"),
        }
    }
}

/// `A[f]`: the carrier of `A` with application rewired through `f`-dialogues.
///
/// `a ·^f b = c` iff there are answers `u0…u(n-1)` such that, for each `i`,
/// `a ([b] ∗ u<i)` evaluates in `A` to `pair ⊥ vi` with `f(vi) = ui`, and
/// `a ([b] ∗ u)` evaluates to `pair ⊤ c`.
pub struct ExtendedPca {
    base: Arc<dyn Pca>,
    oracle: Arc<OracleFn>,
    kf: Element,
    sf: Element,
    representer: Element,
    kit: OnceLock<StdKit>,
    memo: Memo<(Element, Element), Element>,
}

impl ExtendedPca {
    pub fn new(base: Arc<dyn Pca>, oracle: Arc<OracleFn>) -> ExtendedPca {
        let kf = constructions::build_kf(&*base);
        let sf = constructions::build_sf(&*base);
        let representer = constructions::representer(&*base);
        ExtendedPca {
            base,
            oracle,
            kf,
            sf,
            representer,
            kit: OnceLock::new(),
            memo: Memo::new(),
        }
    }

    pub fn base(&self) -> &Arc<dyn Pca> {
        &self.base
    }

    pub fn oracle(&self) -> &Arc<OracleFn> {
        &self.oracle
    }

    /// The element representing `f` in `A[f]`.
    pub fn representer(&self) -> &Element {
        &self.representer
    }

    /// The reference dialogue loop, recording the trace.
    pub fn dialogue_apply(
        &self,
        a: &Element,
        b: &Element,
        fuel: &mut Fuel,
    ) -> (AppResult, DialogueTrace) {
        let mut steps = Vec::new();
        let r = self.run(a, b, fuel, &mut steps);
        let outcome = match &r {
            Ok(c) => Outcome::Answered(c.clone()),
            Err(Halt::FuelExhausted) => Outcome::FuelExhausted,
            Err(Halt::Stuck(Stuck::OutsideDomain(v))) => Outcome::QueryOutsideDomain(v.clone()),
            Err(Halt::Stuck(s)) => Outcome::Stuck(s.to_string()),
        };
        (r, DialogueTrace { steps, outcome })
    }

    fn run(
        &self,
        a: &Element,
        b: &Element,
        fuel: &mut Fuel,
        steps: &mut Vec<(Element, Element)>,
    ) -> AppResult {
        let base = &*self.base;
        // Data is shared down to the root, where coding is cheapest.
        let data = constructions::root(base).0;
        let kit = data.kit();
        let mut input = vec![b.clone()];
        loop {
            fuel.tick()?;
            let u = kit.seq(data, &input, fuel)?;
            let out = base.apply(a, &u, fuel)?;
            let flag = data.apply(&kit.fst, &out, fuel)?;
            let payload = data.apply(&kit.snd, &out, fuel)?;
            if flag == kit.tru {
                return Ok(payload);
            }
            if flag != kit.fls {
                return Err(Halt::Stuck(Stuck::BadFlag(out)));
            }
            match self.oracle.call(&payload, fuel)? {
                Some(answer) => {
                    steps.push((payload, answer.clone()));
                    input.push(answer);
                }
                None => return Err(Halt::Stuck(Stuck::OutsideDomain(payload))),
            }
        }
    }

    /// Replays `trace` against the machine `a` on `b`: every step must be a
    /// query the machine really asks, answered by the oracle.
    pub fn replay(
        &self,
        a: &Element,
        b: &Element,
        trace: &DialogueTrace,
        fuel: &mut Fuel,
    ) -> Result<(), String> {
        let base = &*self.base;
        let data = constructions::root(base).0;
        let kit = data.kit();
        let mut input = vec![b.clone()];
        let step = |input: &[Element], fuel: &mut Fuel| -> Result<(Element, Element), Halt> {
            let u = kit.seq(data, input, fuel)?;
            let out = base.apply(a, &u, fuel)?;
            Ok((
                data.apply(&kit.fst, &out, fuel)?,
                data.apply(&kit.snd, &out, fuel)?,
            ))
        };
        for (i, (q, ans)) in trace.steps.iter().enumerate() {
            let (flag, payload) = step(&input, fuel).map_err(|h| format!("step {i}: {h}"))?;
            if flag != kit.fls || payload != *q {
                return Err(format!("step {i}: machine does not ask {}", short(q)));
            }
            match self
                .oracle
                .call(q, fuel)
                .map_err(|h| format!("step {i}: {h}"))?
            {
                Some(v) if v == *ans => {}
                _ => return Err(format!("step {i}: oracle does not answer {}", short(ans))),
            }
            input.push(ans.clone());
        }
        if let Outcome::Answered(c) = &trace.outcome {
            let (flag, payload) = step(&input, fuel).map_err(|h| format!("final: {h}"))?;
            if flag != kit.tru || payload != *c {
                return Err("final step does not answer".into());
            }
        }
        Ok(())
    }
}

impl Pca for ExtendedPca {
    fn name(&self) -> String {
        format!("{}[{}]", self.base.name(), self.oracle.name())
    }

    fn k(&self) -> Element {
        self.kf.clone()
    }

    fn s(&self) -> Element {
        self.sf.clone()
    }

    fn apply(&self, a: &Element, b: &Element, fuel: &mut Fuel) -> AppResult {
        self.memo.get_or_run((a.clone(), b.clone()), fuel, |fuel| {
            self.run(a, b, fuel, &mut Vec::new())
        })
    }

    fn contains(&self, e: &Element) -> bool {
        self.base.contains(e)
    }

    /// Data (booleans, numerals, sequences) is shared with `A`; operations are
    /// the root model's, lifted to one-round machines. `I`, `Y` and `primrec`
    /// are compiled with `K_f`, `S_f`.
    fn kit(&self) -> &StdKit {
        self.kit.get_or_init(|| {
            let base = &*self.base;
            let renv = constructions::root(base).0.kit().env();
            StdKit::build(self, &|name| {
                let lifted = |n: usize| Some(constructions::lift_root(base, &renv[name], n));
                match name {
                    "true" | "false" | "zero" | "nil" => Some(renv[name].clone()),
                    "not" | "fst" | "snd" | "succ" | "pred" | "iszero" | "lh" => lifted(1),
                    "pair" | "numeq" | "add" | "at" | "cat" | "cons" | "snoc" | "take" | "drop" => {
                        lifted(2)
                    }
                    "if" | "slice" => lifted(3),
                    _ => None,
                }
            })
        })
    }

    fn equality(&self) -> Option<Element> {
        let root = constructions::root(&*self.base).0;
        root.equality()
            .map(|e| constructions::lift_root(&*self.base, &e, 2))
    }

    fn extends(&self) -> Option<&dyn Pca> {
        Some(&*self.base)
    }

    fn native_t(&self) -> Option<Element> {
        let relay = self.base.native_t_for_extensions()?;
        Some(constructions::lift_root(&*self.base, &relay, 2))
    }

    fn generators(&self) -> Vec<Element> {
        vec![self.k(), self.s(), self.representer.clone()]
    }
}

/// Every step of the chains `K_f x y` and `S_f x y z`, for sampled `x, y, z`,
/// computed by `apply` agrees (Kleene) with [`ExtendedPca::dialogue_apply`].
pub fn check_against_dialogue(
    ext: &ExtendedPca,
    samples: usize,
    seed: u64,
    fuel: u64,
) -> crate::report::CheckReport {
    let law = "K_f, S_f apply ~ dialogue loop";
    let mut rng = crate::kernel::rng(seed);
    let mut steps = 0;
    for i in 0..samples {
        let (head, arity) = if i % 2 == 0 {
            (ext.k(), 2)
        } else {
            (ext.s(), 3)
        };
        let args = crate::kernel::sample::elements(ext, &mut rng, arity);
        let mut acc = head;
        for a in &args {
            steps += 1;
            let res = crate::kernel::kleene_eq(
                fuel,
                |f| ext.apply(&acc, a, f),
                |f| ext.dialogue_apply(&acc, a, f).0,
            );
            match res {
                Ok(crate::kernel::Kleene::BothDefined(v)) => acc = v,
                Ok(crate::kernel::Kleene::BothUndefined) => break,
                Err(why) => {
                    let cx = format!("{} . {}: {why}", short(&acc), short(a));
                    return crate::report::CheckReport::new(law, steps, seed, Some(cx));
                }
            }
        }
    }
    crate::report::CheckReport::new(law, steps, seed, None)
}
