//! Fuel-bounded partial application over pluggable PCA models.

mod element;
pub mod memo;
pub mod numeric;
pub mod sample;
pub mod term;

use std::fmt;

use rand::SeedableRng;

pub use element::{Atom, Element, Nf, Prim};
pub use numeric::NumericPca;
pub use term::{TermMode, TermPca};

use crate::report::CheckReport;
use crate::stdlib::StdKit;

/// Seeded generator used by every sampler in the crate.
pub type Rng = rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

/// Step budget. Every primitive reduction, dialogue round and oracle lookup costs at least one unit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fuel {
    remaining: u64,
}

impl Fuel {
    pub fn new(budget: u64) -> Fuel {
        Fuel { remaining: budget }
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }

    #[inline]
    pub fn tick(&mut self) -> Result<(), Halt> {
        self.spend(1)
    }

    #[inline]
    pub fn spend(&mut self, n: u64) -> Result<(), Halt> {
        if self.remaining < n {
            self.remaining = 0;
            Err(Halt::FuelExhausted)
        } else {
            self.remaining -= n;
            Ok(())
        }
    }
}

/// Why an application produced no value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stuck {
    /// The oracle has no answer for this query.
    OutsideDomain(Element),
    /// A dialogue machine answered with something other than a `⊤`/`⊥`-flagged pair.
    BadFlag(Element),
    /// An element outside the model's carrier reached `apply`.
    Malformed(String),
}

impl fmt::Display for Stuck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stuck::OutsideDomain(v) => write!(f, "outside-domain {}", crate::report::short(v)),
            Stuck::BadFlag(v) => write!(f, "non-boolean flag {}", crate::report::short(v)),
            Stuck::Malformed(s) => f.write_str(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Halt {
    #[error("fuel-exhausted")]
    FuelExhausted,
    #[error("stuck {0}")]
    Stuck(Stuck),
}

/// `Ok(value)`, or the reason no value was produced within the budget.
pub type AppResult = Result<Element, Halt>;

/// A carrier with partial application and distinguished `K`, `S`.
///
/// Implementations are immutable after construction and safe to share between threads.
pub trait Pca: Send + Sync {
    fn name(&self) -> String;

    fn k(&self) -> Element;

    fn s(&self) -> Element;

    fn apply(&self, a: &Element, b: &Element, fuel: &mut Fuel) -> AppResult;

    /// Carrier membership.
    fn contains(&self, e: &Element) -> bool;

    /// Booleans, numerals, pairing, sequences and recursion for this model.
    fn kit(&self) -> &StdKit;

    /// An element `e` with `e a b` the canonical `⊤` if `a = b` and `⊥`
    /// otherwise, when the model has one.
    fn equality(&self) -> Option<Element> {
        None
    }

    /// The model this one extends by an oracle, sharing its carrier and data.
    fn extends(&self) -> Option<&dyn Pca> {
        None
    }

    /// `T` with `T x y = t(x, y)` for machines over this model, when the
    /// model evaluates it natively.
    fn native_t(&self) -> Option<Element> {
        None
    }

    /// The same for machines over an oracle extension of this model.
    fn native_t_for_extensions(&self) -> Option<Element> {
        None
    }

    /// Elements the sampler builds random application trees from.
    fn generators(&self) -> Vec<Element> {
        vec![self.k(), self.s()]
    }
}

/// Left-associated iterated application sharing one budget.
pub fn eval_apps(pca: &dyn Pca, head: &Element, args: &[Element], fuel: &mut Fuel) -> AppResult {
    let mut acc = head.clone();
    for a in args {
        acc = pca.apply(&acc, a, fuel)?;
    }
    Ok(acc)
}

/// Slack applied when exactly one side of a Kleene comparison converges: the
/// other side is re-run with this many times the shared budget before the pair
/// is declared a counterexample.
pub const KLEENE_SLACK: u64 = 16;

/// Outcome of comparing two partial computations under `≃`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kleene {
    BothDefined(Element),
    BothUndefined,
}

/// `lhs ≃ rhs` at a shared budget: equal values, or neither side defined.
pub fn kleene_eq(
    budget: u64,
    lhs: impl Fn(&mut Fuel) -> AppResult,
    rhs: impl Fn(&mut Fuel) -> AppResult,
) -> Result<Kleene, String> {
    let l = lhs(&mut Fuel::new(budget));
    let r = rhs(&mut Fuel::new(budget));
    let (l, r) = match (l, r) {
        (Ok(a), Ok(b)) => (Ok(a), Ok(b)),
        (Err(_), Err(_)) => return Ok(Kleene::BothUndefined),
        (Ok(a), Err(_)) => (
            Ok(a),
            rhs(&mut Fuel::new(budget.saturating_mul(KLEENE_SLACK))),
        ),
        (Err(_), Ok(b)) => (
            lhs(&mut Fuel::new(budget.saturating_mul(KLEENE_SLACK))),
            Ok(b),
        ),
    };
    match (l, r) {
        (Ok(a), Ok(b)) if a == b => Ok(Kleene::BothDefined(a)),
        (Ok(a), Ok(b)) => Err(format!(
            "lhs = {} but rhs = {}",
            crate::report::short(&a),
            crate::report::short(&b)
        )),
        (Ok(a), Err(e)) => Err(format!("lhs = {} but rhs {e}", crate::report::short(&a))),
        (Err(e), Ok(b)) => Err(format!("lhs {e} but rhs = {}", crate::report::short(&b))),
        (Err(_), Err(_)) => Ok(Kleene::BothUndefined),
    }
}

/// Samples the K and S schemata on `samples` random triples.
///
/// Produces three reports: `Kab=a`, `Sab↓`, and `Sabc≃ac(bc)`.
pub fn check_axioms(pca: &dyn Pca, samples: usize, seed: u64, fuel: u64) -> Vec<CheckReport> {
    let mut rng = rng(seed);
    let k = pca.k();
    let s = pca.s();
    let mut k_fail = None;
    let mut sdef_fail = None;
    let mut s_fail = None;
    for _ in 0..samples {
        let a = sample::element(pca, &mut rng);
        let b = sample::element(pca, &mut rng);
        let c = sample::element(pca, &mut rng);
        if k_fail.is_none() {
            match eval_apps(pca, &k, &[a.clone(), b.clone()], &mut Fuel::new(fuel)) {
                Ok(v) if v == a => {}
                other => {
                    k_fail = Some(format!(
                        "a={} b={} Kab -> {}",
                        crate::report::short(&a),
                        crate::report::short(&b),
                        crate::report::outcome(&other)
                    ))
                }
            }
        }
        if sdef_fail.is_none() {
            let r = eval_apps(pca, &s, &[a.clone(), b.clone()], &mut Fuel::new(fuel));
            if r.is_err() {
                sdef_fail = Some(format!(
                    "a={} b={} Sab -> {}",
                    crate::report::short(&a),
                    crate::report::short(&b),
                    crate::report::outcome(&r)
                ));
            }
        }
        if s_fail.is_none() {
            let res = kleene_eq(
                fuel,
                |f| eval_apps(pca, &s, &[a.clone(), b.clone(), c.clone()], f),
                |f| {
                    let ac = pca.apply(&a, &c, f)?;
                    let bc = pca.apply(&b, &c, f)?;
                    pca.apply(&ac, &bc, f)
                },
            );
            if let Err(why) = res {
                s_fail = Some(format!(
                    "a={} b={} c={}: {why}",
                    crate::report::short(&a),
                    crate::report::short(&b),
                    crate::report::short(&c)
                ));
            }
        }
    }
    let name = pca.name();
    vec![
        CheckReport::new(format!("{name} K-axiom Kab=a"), samples, seed, k_fail),
        CheckReport::new(
            format!("{name} S-axiom Sab defined"),
            samples,
            seed,
            sdef_fail,
        ),
        CheckReport::new(format!("{name} S-axiom Sabc~ac(bc)"), samples, seed, s_fail),
    ]
}
