//! The SK term model, optionally enriched with host-defined primitives.

use std::sync::{Arc, OnceLock};

use super::memo::Memo;
use super::{Atom, Element, Fuel, Halt, Nf, Pca, Prim, Stuck};
use crate::bracket::{self, Term};
use crate::oracle::OracleFn;
use crate::stdlib::StdKit;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermMode {
    /// Constants `K` and `S` only; the whole kit is bracket-compiled.
    Pure,
    /// Adds pairing, numeral equality and sequence primitives.
    Enriched,
}

/// Pure-SK forms of `I`, `⊤`, `⊥`, which fix the data encodings the primitives decode.
#[derive(Clone)]
struct Canon {
    id: Nf,
    tru: Nf,
    fls: Nf,
}

enum Frame {
    /// `S x y z`: `x z` is running; next run `y z`.
    SecondBranch { y: Nf, z: Nf },
    /// Both branches of `S` done except the final application of `xz`.
    ApplyFirst { xz: Nf },
    /// Apply the returned value to `arg`.
    ApplyTo { arg: Nf },
}

/// Result of running one machine inside `dispatch`/`relay`.
enum Run {
    Output(Nf),
    /// A sub-dialogue needs an answer not yet supplied.
    Ask(Nf),
}

enum Step {
    Value(Nf),
    Apply(Nf, Nf),
    ApplyThen(Nf, Nf, Nf),
}

pub struct TermPca {
    mode: TermMode,
    oracle: Option<Arc<OracleFn>>,
    canon: Canon,
    kit: OnceLock<StdKit>,
    /// Machine runs inside `dispatch` and `relay`, which replay prefixes.
    runs: Memo<(Nf, Nf), Nf>,
}

impl TermPca {
    pub fn new(mode: TermMode) -> TermPca {
        TermPca::build(mode, None)
    }

    pub fn pure() -> TermPca {
        TermPca::new(TermMode::Pure)
    }

    pub fn enriched() -> TermPca {
        TermPca::new(TermMode::Enriched)
    }

    /// A model with a `query` constant answering from `oracle`: the
    /// interpreter carries the oracle as a built-in instruction.
    pub fn with_oracle_instruction(mode: TermMode, oracle: Arc<OracleFn>) -> TermPca {
        TermPca::build(mode, Some(oracle))
    }

    fn build(mode: TermMode, oracle: Option<Arc<OracleFn>>) -> TermPca {
        let k = Nf::atom(Atom::K);
        let placeholder = Canon {
            id: k.clone(),
            tru: k.clone(),
            fls: k,
        };
        let sk = TermPca {
            mode: TermMode::Pure,
            oracle: None,
            canon: placeholder,
            kit: OnceLock::new(),
            runs: Memo::new(),
        };
        let canon = Canon {
            id: canonical(&sk, &["x"], "x"),
            tru: canonical(&sk, &["x", "y"], "x"),
            fls: canonical(&sk, &["x", "y"], "y"),
        };
        TermPca {
            mode,
            oracle,
            canon,
            kit: OnceLock::new(),
            runs: Memo::new(),
        }
    }

    pub fn mode(&self) -> TermMode {
        self.mode
    }

    pub fn oracle(&self) -> Option<&Arc<OracleFn>> {
        self.oracle.as_ref()
    }

    /// Carrier membership for bare normal forms.
    pub fn admits(&self, nf: &Nf) -> bool {
        let mut work = vec![nf.clone()];
        while let Some(n) = work.pop() {
            match n.head() {
                Atom::K | Atom::S => {}
                Atom::Prim(Prim::Query) => {
                    if self.oracle.is_none() {
                        return false;
                    }
                }
                Atom::Prim(_) if self.mode == TermMode::Pure => return false,
                Atom::Prim(_) => {}
            }
            work.extend(n.args().iter().cloned());
        }
        true
    }

    /// Applies two normal forms with an explicit continuation stack.
    pub fn apply_nf(&self, f: &Nf, x: &Nf, fuel: &mut Fuel) -> Result<Nf, Halt> {
        let mut stack: Vec<Frame> = Vec::new();
        let mut cur = (f.clone(), x.clone());
        loop {
            fuel.tick()?;
            let (f, x) = cur;
            let head = f.head();
            let step = if f.args().len() + 1 < head.arity() {
                Step::Value(f.push(x))
            } else {
                let a = f.args();
                match head {
                    Atom::K => Step::Value(a[0].clone()),
                    Atom::S => {
                        stack.push(Frame::SecondBranch {
                            y: a[1].clone(),
                            z: x.clone(),
                        });
                        Step::Apply(a[0].clone(), x)
                    }
                    Atom::Prim(Prim::Pair) => Step::ApplyThen(x, a[0].clone(), a[1].clone()),
                    Atom::Prim(p) => {
                        let mut args = a.to_vec();
                        args.push(x);
                        Step::Value(self.reduce(p, &args, fuel)?)
                    }
                }
            };
            let value = match step {
                Step::Apply(g, y) => {
                    cur = (g, y);
                    continue;
                }
                Step::ApplyThen(g, y, then) => {
                    stack.push(Frame::ApplyTo { arg: then });
                    cur = (g, y);
                    continue;
                }
                Step::Value(v) => v,
            };
            cur = match stack.pop() {
                None => return Ok(value),
                Some(Frame::SecondBranch { y, z }) => {
                    stack.push(Frame::ApplyFirst { xz: value });
                    (y, z)
                }
                Some(Frame::ApplyFirst { xz }) => (xz, value),
                Some(Frame::ApplyTo { arg }) => (value, arg),
            };
        }
    }

    fn pair(&self, a: Nf, b: Nf) -> Nf {
        Nf::new(Atom::Prim(Prim::Pair), vec![a, b])
    }

    fn unpair<'a>(&self, n: &'a Nf) -> Option<(&'a Nf, &'a Nf)> {
        match (n.head(), n.args()) {
            (Atom::Prim(Prim::Pair), [a, b]) => Some((a, b)),
            _ => None,
        }
    }

    fn numeral(&self, n: u64) -> Nf {
        let mut acc = self.canon.id.clone();
        for _ in 0..n {
            acc = self.pair(self.canon.fls.clone(), acc);
        }
        acc
    }

    fn decode_numeral(&self, mut n: &Nf) -> Option<u64> {
        let mut count = 0;
        loop {
            if *n == self.canon.id {
                return Some(count);
            }
            let (flag, rest) = self.unpair(n)?;
            if *flag != self.canon.fls {
                return None;
            }
            count += 1;
            n = rest;
        }
    }

    fn decode_seq(&self, u: &Nf) -> Option<Vec<Nf>> {
        let (len, mut list) = self.unpair(u)?;
        let len = self.decode_numeral(len)?;
        let mut items = Vec::with_capacity(len as usize);
        for _ in 0..len {
            let (item, rest) = self.unpair(list)?;
            items.push(item.clone());
            list = rest;
        }
        Some(items)
    }

    fn encode_seq(&self, items: &[Nf]) -> Nf {
        let mut list = self.canon.id.clone();
        for item in items.iter().rev() {
            list = self.pair(item.clone(), list);
        }
        self.pair(self.numeral(items.len() as u64), list)
    }

    /// Splits a machine output into its flag and payload; a flag other than
    /// the canonical booleans diverges.
    fn flagged(&self, o: &Nf, fuel: &mut Fuel) -> Result<(bool, Nf), Halt> {
        let flag = self.apply_nf(o, &self.canon.tru, fuel)?;
        let flag = if flag == self.canon.tru {
            true
        } else if flag == self.canon.fls {
            false
        } else {
            return Err(diverge(fuel));
        };
        Ok((flag, self.apply_nf(o, &self.canon.fls, fuel)?))
    }

    /// The three phases of `t(x, y)` on `items`, running machines with `run`.
    fn dispatch(
        &self,
        x: &Nf,
        y: &Nf,
        items: &[Nf],
        fuel: &mut Fuel,
        run: &mut dyn FnMut(&Nf, Vec<Nf>, &mut Fuel) -> Result<Run, Halt>,
    ) -> Result<Run, Halt> {
        let n = items.len();
        if n == 0 {
            return Err(diverge(fuel));
        }
        // Runs `m` on growing inputs until it answers; `Err` carries the
        // round's output when the input runs out first.
        let mut phase = |m: &Nf,
                         head: Option<&Nf>,
                         from: usize,
                         fuel: &mut Fuel|
         -> Result<Result<(Nf, Nf, usize), Run>, Halt> {
            for end in from..=n {
                fuel.tick()?;
                let input = match head {
                    Some(h) => std::iter::once(h)
                        .chain(&items[from..end])
                        .cloned()
                        .collect(),
                    None => items[..end].to_vec(),
                };
                let o = match run(m, input, fuel)? {
                    Run::Output(o) => o,
                    ask => return Ok(Err(ask)),
                };
                match self.flagged(&o, fuel)? {
                    (true, payload) => return Ok(Ok((o, payload, end))),
                    (false, _) if end == n => return Ok(Err(Run::Output(o))),
                    (false, _) => {}
                }
            }
            Err(diverge(fuel))
        };
        let (_, alpha, i) = match phase(x, None, 1, fuel)? {
            Ok(v) => v,
            Err(out) => return Ok(out),
        };
        let (_, beta, j) = match phase(y, Some(&items[0]), i, fuel)? {
            Ok(v) => v,
            Err(out) => return Ok(out),
        };
        Ok(match phase(&alpha, Some(&beta), j, fuel)? {
            Ok((o, _, _)) => Run::Output(o),
            Err(out) => out,
        })
    }

    fn run_machine(&self, m: &Nf, input: &Nf, fuel: &mut Fuel) -> Result<Nf, Halt> {
        self.runs
            .get_or_run((m.clone(), input.clone()), fuel, |fuel| {
                self.apply_nf(m, input, fuel)
            })
    }

    /// `dispatch x y u`: sub-machines run by plain application.
    fn dispatch_direct(&self, x: &Nf, y: &Nf, u: &Nf, fuel: &mut Fuel) -> Result<Nf, Halt> {
        let Some(items) = self.decode_seq(u) else {
            return Err(diverge(fuel));
        };
        let mut run = |m: &Nf, input: Vec<Nf>, fuel: &mut Fuel| -> Result<Run, Halt> {
            Ok(Run::Output(self.run_machine(
                m,
                &self.encode_seq(&input),
                fuel,
            )?))
        };
        match self.dispatch(x, y, &items, fuel, &mut run)? {
            Run::Output(o) => Ok(o),
            Run::Ask(_) => unreachable!("plain application never asks"),
        }
    }

    /// `relay x y w`: sub-machines run as dialogues over the extension,
    /// answered in order from the tail of `w`; the first unanswered query is
    /// asked, otherwise the dispatch output is answered.
    fn dispatch_relayed(&self, x: &Nf, y: &Nf, w: &Nf, fuel: &mut Fuel) -> Result<Nf, Halt> {
        let Some(outer) = self.decode_seq(w) else {
            return Err(diverge(fuel));
        };
        let Some(items) = outer.first().and_then(|u| self.decode_seq(u)) else {
            return Err(diverge(fuel));
        };
        let answers = &outer[1..];
        let mut used = 0;
        let mut run = |m: &Nf, input: Vec<Nf>, fuel: &mut Fuel| -> Result<Run, Halt> {
            let mut seq = vec![self.encode_seq(&input)];
            loop {
                fuel.tick()?;
                let o = self.run_machine(m, &self.encode_seq(&seq), fuel)?;
                match self.flagged(&o, fuel)? {
                    (true, c) => return Ok(Run::Output(c)),
                    (false, q) => match answers.get(used) {
                        Some(a) => {
                            used += 1;
                            seq.push(a.clone());
                        }
                        None => return Ok(Run::Ask(q)),
                    },
                }
            }
        };
        Ok(match self.dispatch(x, y, &items, fuel, &mut run)? {
            Run::Output(o) => self.pair(self.canon.tru.clone(), o),
            Run::Ask(q) => self.pair(self.canon.fls.clone(), q),
        })
    }

    fn reduce(&self, p: Prim, args: &[Nf], fuel: &mut Fuel) -> Result<Nf, Halt> {
        let junk = || self.canon.fls.clone();
        let seq = |n: &Nf, fuel: &mut Fuel| -> Result<Option<Vec<Nf>>, Halt> {
            let items = self.decode_seq(n);
            if let Some(items) = &items {
                fuel.spend(items.len() as u64)?;
            }
            Ok(items)
        };
        let num = |n: &Nf, fuel: &mut Fuel| -> Result<Option<u64>, Halt> {
            let v = self.decode_numeral(n);
            if let Some(v) = v {
                fuel.spend(v)?;
            }
            Ok(v)
        };
        let out = match p {
            Prim::Pair => unreachable!("pairing reduces by application"),
            Prim::Query => {
                let oracle = self.oracle.as_ref().ok_or_else(|| {
                    Halt::Stuck(Stuck::Malformed("query without an oracle".into()))
                })?;
                let q = Element::Term(args[0].clone());
                match oracle.call(&q, fuel)? {
                    Some(Element::Term(nf)) => nf,
                    Some(other) => {
                        return Err(Halt::Stuck(Stuck::Malformed(format!(
                            "oracle answer {other} is not a term"
                        ))))
                    }
                    None => return Err(Halt::Stuck(Stuck::OutsideDomain(q))),
                }
            }
            Prim::Dispatch => grow(|| self.dispatch_direct(&args[0], &args[1], &args[2], fuel))?,
            Prim::Relay => grow(|| self.dispatch_relayed(&args[0], &args[1], &args[2], fuel))?,
            Prim::NumEq => match (num(&args[0], fuel)?, num(&args[1], fuel)?) {
                (Some(a), Some(b)) if a == b => self.canon.tru.clone(),
                _ => self.canon.fls.clone(),
            },
            Prim::Eq => {
                fuel.spend(args[0].size().min(args[1].size()))?;
                if args[0] == args[1] {
                    self.canon.tru.clone()
                } else {
                    self.canon.fls.clone()
                }
            }
            Prim::At => match (seq(&args[0], fuel)?, num(&args[1], fuel)?) {
                (Some(items), Some(i)) => items.get(i as usize).cloned().unwrap_or_else(junk),
                _ => junk(),
            },
            Prim::Cat => match (seq(&args[0], fuel)?, seq(&args[1], fuel)?) {
                (Some(mut xs), Some(ys)) => {
                    xs.extend(ys);
                    self.encode_seq(&xs)
                }
                _ => junk(),
            },
            Prim::Cons => match self.unpair(&args[1]) {
                Some((len, list)) if num(len, fuel)?.is_some() => {
                    let len = self.pair(self.canon.fls.clone(), len.clone());
                    self.pair(len, self.pair(args[0].clone(), list.clone()))
                }
                _ => junk(),
            },
            Prim::Snoc => match seq(&args[0], fuel)? {
                Some(mut xs) => {
                    xs.push(args[1].clone());
                    self.encode_seq(&xs)
                }
                None => junk(),
            },
            Prim::Take => match (seq(&args[0], fuel)?, num(&args[1], fuel)?) {
                (Some(xs), Some(i)) => self.encode_seq(&xs[..(i as usize).min(xs.len())]),
                _ => junk(),
            },
            Prim::Drop => match (seq(&args[0], fuel)?, num(&args[1], fuel)?) {
                (Some(xs), Some(i)) => self.encode_seq(&xs[(i as usize).min(xs.len())..]),
                _ => junk(),
            },
            Prim::Slice => match (
                seq(&args[0], fuel)?,
                num(&args[1], fuel)?,
                num(&args[2], fuel)?,
            ) {
                (Some(xs), Some(i), Some(j)) => {
                    let i = (i as usize).min(xs.len());
                    let j = (j as usize).clamp(i, xs.len());
                    self.encode_seq(&xs[i..j])
                }
                _ => junk(),
            },
        };
        fuel.tick()?;
        Ok(out)
    }
}

/// Dispatch nests host calls as deep as the machines it runs.
fn grow<T>(f: impl FnOnce() -> T) -> T {
    stacker::maybe_grow(256 * 1024, 16 * 1024 * 1024, f)
}

fn diverge(fuel: &mut Fuel) -> Halt {
    let _ = fuel.spend(u64::MAX);
    Halt::FuelExhausted
}

fn canonical(sk: &TermPca, vars: &[&str], body: &str) -> Nf {
    let term = bracket::lambda_star(vars, &Term::var(body)).expect("closed abstraction");
    let e = bracket::compile(sk, &term, &mut Fuel::new(1_000)).expect("abstraction compiles");
    match e {
        Element::Term(nf) => nf,
        Element::Code(_) => unreachable!(),
    }
}

impl Pca for TermPca {
    fn name(&self) -> String {
        match (self.mode, self.oracle.is_some()) {
            (TermMode::Pure, false) => "sk".into(),
            (TermMode::Pure, true) => "sk+query".into(),
            (TermMode::Enriched, false) => "term".into(),
            (TermMode::Enriched, true) => "term+query".into(),
        }
    }

    fn k(&self) -> Element {
        Element::atom(Atom::K)
    }

    fn s(&self) -> Element {
        Element::atom(Atom::S)
    }

    fn apply(&self, a: &Element, b: &Element, fuel: &mut Fuel) -> super::AppResult {
        match (a, b) {
            (Element::Term(f), Element::Term(x)) => self.apply_nf(f, x, fuel).map(Element::Term),
            _ => Err(Halt::Stuck(Stuck::Malformed(
                "numeric code applied in the term model".into(),
            ))),
        }
    }

    fn contains(&self, e: &Element) -> bool {
        e.as_term().is_some_and(|nf| self.admits(nf))
    }

    fn kit(&self) -> &StdKit {
        self.kit.get_or_init(|| {
            let enriched = self.mode == TermMode::Enriched;
            StdKit::build(self, &|name| {
                if !enriched {
                    return None;
                }
                let p = match name {
                    "pair" => Prim::Pair,
                    "numeq" => Prim::NumEq,
                    "at" => Prim::At,
                    "cat" => Prim::Cat,
                    "cons" => Prim::Cons,
                    "snoc" => Prim::Snoc,
                    "take" => Prim::Take,
                    "drop" => Prim::Drop,
                    "slice" => Prim::Slice,
                    _ => return None,
                };
                Some(Element::atom(Atom::Prim(p)))
            })
        })
    }

    fn equality(&self) -> Option<Element> {
        (self.mode == TermMode::Enriched).then(|| Element::atom(Atom::Prim(Prim::Eq)))
    }

    fn native_t(&self) -> Option<Element> {
        (self.mode == TermMode::Enriched).then(|| Element::atom(Atom::Prim(Prim::Dispatch)))
    }

    fn native_t_for_extensions(&self) -> Option<Element> {
        (self.mode == TermMode::Enriched).then(|| Element::atom(Atom::Prim(Prim::Relay)))
    }

    fn generators(&self) -> Vec<Element> {
        let mut g = vec![self.k(), self.s()];
        if self.mode == TermMode::Enriched {
            for p in [Prim::Pair, Prim::Cons, Prim::At, Prim::NumEq] {
                g.push(Element::atom(Atom::Prim(p)));
            }
        }
        if self.oracle.is_some() {
            g.push(Element::atom(Atom::Prim(Prim::Query)));
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::eval_apps;

    fn i(pca: &TermPca) -> Element {
        eval_apps(pca, &pca.s(), &[pca.k(), pca.k()], &mut Fuel::new(10)).unwrap()
    }

    #[test]
    fn k_applied_to_s_is_already_normal() {
        let pca = TermPca::pure();
        let v = pca.apply(&pca.k(), &pca.s(), &mut Fuel::new(100)).unwrap();
        assert_eq!(v.to_string(), "K S");
    }

    #[test]
    fn kab_returns_a() {
        let pca = TermPca::pure();
        let ka = pca.apply(&pca.k(), &pca.s(), &mut Fuel::new(100)).unwrap();
        let v = pca.apply(&ka, &pca.k(), &mut Fuel::new(100)).unwrap();
        assert_eq!(v, pca.s());
    }

    #[test]
    fn omega_omega_exhausts_any_budget() {
        let pca = TermPca::pure();
        let id = i(&pca);
        let omega = eval_apps(&pca, &pca.s(), &[id.clone(), id], &mut Fuel::new(10)).unwrap();
        for budget in [50, 1_000, 100_000] {
            assert_eq!(
                pca.apply(&omega, &omega, &mut Fuel::new(budget)),
                Err(Halt::FuelExhausted)
            );
        }
    }

    #[test]
    fn skks_is_s() {
        let pca = TermPca::pure();
        let v = eval_apps(
            &pca,
            &pca.s(),
            &[pca.k(), pca.k(), pca.s()],
            &mut Fuel::new(100),
        )
        .unwrap();
        assert_eq!(v, pca.s());
    }

    #[test]
    fn empty_application_chain_returns_head() {
        let pca = TermPca::pure();
        assert_eq!(
            eval_apps(&pca, &pca.k(), &[], &mut Fuel::new(0)),
            Ok(pca.k())
        );
    }

    #[test]
    fn pure_model_rejects_primitives() {
        let pca = TermPca::pure();
        assert!(!pca.contains(&Element::atom(Atom::Prim(Prim::Pair))));
        assert!(TermPca::enriched().contains(&Element::atom(Atom::Prim(Prim::Pair))));
        assert!(!TermPca::enriched().contains(&Element::atom(Atom::Prim(Prim::Query))));
    }

    #[test]
    fn long_loops_do_not_grow_the_host_stack() {
        // Y (K I) style loop: (S I I)(S I I) runs in constant continuation depth.
        let pca = TermPca::pure();
        let id = i(&pca);
        let omega = eval_apps(&pca, &pca.s(), &[id.clone(), id], &mut Fuel::new(10)).unwrap();
        let r = pca.apply(&omega, &omega, &mut Fuel::new(2_000_000));
        assert_eq!(r, Err(Halt::FuelExhausted));
    }
}
