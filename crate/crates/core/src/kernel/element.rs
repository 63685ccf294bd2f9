use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigUint;

/// Host-defined constants of the enriched term model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prim {
    /// `pair x y z = z x y`
    Pair,
    NumEq,
    At,
    Cat,
    Cons,
    Snoc,
    Take,
    Drop,
    Slice,
    /// Structural equality of normal forms.
    Eq,
    /// Oracle instruction; only valid in a term model built with an oracle.
    Query,
    /// `dispatch x y u`: one round of the machine `t(x, y)` on `u`.
    Dispatch,
    /// `relay x y w`: one round of `t(x, y)` over an oracle extension, run as
    /// a machine of that extension; `w` is `[u]` followed by the answers so far.
    Relay,
}

impl Prim {
    pub const ALL: [Prim; 13] = [
        Prim::Pair,
        Prim::NumEq,
        Prim::At,
        Prim::Cat,
        Prim::Cons,
        Prim::Snoc,
        Prim::Take,
        Prim::Drop,
        Prim::Slice,
        Prim::Eq,
        Prim::Query,
        Prim::Dispatch,
        Prim::Relay,
    ];

    pub fn arity(self) -> usize {
        match self {
            Prim::Pair | Prim::Slice | Prim::Dispatch | Prim::Relay => 3,
            Prim::Query => 1,
            _ => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Prim::Pair => "pair",
            Prim::NumEq => "numeq",
            Prim::At => "at",
            Prim::Cat => "cat",
            Prim::Cons => "cons",
            Prim::Snoc => "snoc",
            Prim::Take => "take",
            Prim::Drop => "drop",
            Prim::Slice => "slice",
            Prim::Eq => "eq",
            Prim::Query => "query",
            Prim::Dispatch => "dispatch",
            Prim::Relay => "relay",
        }
    }
}

/// Head constant of a term-model normal form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    K,
    S,
    Prim(Prim),
}

impl Atom {
    pub fn arity(self) -> usize {
        match self {
            Atom::K => 2,
            Atom::S => 3,
            Atom::Prim(p) => p.arity(),
        }
    }

    /// Dense index used by the numeric coding.
    pub fn index(self) -> u64 {
        match self {
            Atom::K => 0,
            Atom::S => 1,
            Atom::Prim(p) => 2 + Prim::ALL.iter().position(|q| *q == p).unwrap() as u64,
        }
    }

    pub fn from_index(i: u64) -> Option<Atom> {
        match i {
            0 => Some(Atom::K),
            1 => Some(Atom::S),
            n => Prim::ALL.get((n - 2) as usize).map(|p| Atom::Prim(*p)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Atom::K => "K",
            Atom::S => "S",
            Atom::Prim(p) => p.name(),
        }
    }
}

struct NfNode {
    head: Atom,
    args: Vec<Nf>,
    hash: u64,
    size: u64,
}

/// A term-model normal form: a head constant applied to fewer arguments than its arity.
///
/// Nodes are shared; `size` is the tree size (saturating), so heavily shared
/// values can report astronomically large sizes while staying small in memory.
#[derive(Clone)]
pub struct Nf(Arc<NfNode>);

fn mix(h: u64, x: u64) -> u64 {
    (h.rotate_left(7) ^ x).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

impl Nf {
    pub fn new(head: Atom, args: Vec<Nf>) -> Nf {
        debug_assert!(args.len() < head.arity());
        let mut hash = mix(0xcbf2_9ce4_8422_2325, head.index() + 1);
        let mut size: u64 = 1;
        for a in &args {
            hash = mix(hash, a.0.hash);
            size = size.saturating_add(a.0.size);
        }
        hash = mix(hash, args.len() as u64);
        Nf(Arc::new(NfNode {
            head,
            args,
            hash,
            size,
        }))
    }

    pub fn atom(head: Atom) -> Nf {
        Nf::new(head, Vec::new())
    }

    pub fn head(&self) -> Atom {
        self.0.head
    }

    pub fn args(&self) -> &[Nf] {
        &self.0.args
    }

    pub fn size(&self) -> u64 {
        self.0.size
    }

    /// Appends one argument; the caller guarantees the arity is not reached.
    pub fn push(&self, arg: Nf) -> Nf {
        let mut args = self.0.args.clone();
        args.push(arg);
        Nf::new(self.0.head, args)
    }

    pub fn ptr_eq(&self, other: &Nf) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    fn shallow_differs(&self, other: &Nf) -> bool {
        self.0.hash != other.0.hash
            || self.0.size != other.0.size
            || self.0.head != other.0.head
            || self.0.args.len() != other.0.args.len()
    }

    fn small_eq(&self, other: &Nf) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        if self.shallow_differs(other) {
            return false;
        }
        self.args()
            .iter()
            .zip(other.args())
            .all(|(a, b)| a.small_eq(b))
    }

    // Shared subterms are compared once, so DAGs with exponential tree size stay cheap.
    fn dag_eq(&self, other: &Nf) -> bool {
        let mut seen: HashSet<(usize, usize)> = HashSet::new();
        let mut work = vec![(self.clone(), other.clone())];
        while let Some((a, b)) = work.pop() {
            if a.ptr_eq(&b) {
                continue;
            }
            if a.shallow_differs(&b) {
                return false;
            }
            let key = (Arc::as_ptr(&a.0) as usize, Arc::as_ptr(&b.0) as usize);
            if !seen.insert(key) {
                continue;
            }
            for (x, y) in a.args().iter().zip(b.args()) {
                work.push((x.clone(), y.clone()));
            }
        }
        true
    }
}

impl PartialEq for Nf {
    fn eq(&self, other: &Nf) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        if self.shallow_differs(other) {
            return false;
        }
        if self.0.size < 512 {
            self.small_eq(other)
        } else {
            self.dag_eq(other)
        }
    }
}

impl Eq for Nf {}

impl Hash for Nf {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl Drop for NfNode {
    // Long argument chains (numerals, sequences) would otherwise recurse once per link.
    fn drop(&mut self) {
        let mut pending: Vec<Nf> = std::mem::take(&mut self.args);
        while let Some(nf) = pending.pop() {
            if let Ok(mut node) = Arc::try_unwrap(nf.0) {
                pending.append(&mut node.args);
            }
        }
    }
}

impl fmt::Display for Nf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.head().name())?;
        for a in self.args() {
            if a.args().is_empty() {
                write!(f, " {a}")?;
            } else {
                write!(f, " ({a})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Nf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An inhabitant of a PCA carrier: a term-model normal form or a numeric code.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Element {
    Term(Nf),
    Code(Arc<BigUint>),
}

impl Element {
    pub fn atom(a: Atom) -> Element {
        Element::Term(Nf::atom(a))
    }

    pub fn code(n: BigUint) -> Element {
        Element::Code(Arc::new(n))
    }

    pub fn as_term(&self) -> Option<&Nf> {
        match self {
            Element::Term(nf) => Some(nf),
            Element::Code(_) => None,
        }
    }

    pub fn as_code(&self) -> Option<&BigUint> {
        match self {
            Element::Code(c) => Some(c),
            Element::Term(_) => None,
        }
    }
}

impl From<Nf> for Element {
    fn from(nf: Nf) -> Element {
        Element::Term(nf)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Term(nf) => write!(f, "{nf}"),
            Element::Code(c) => write!(f, "#{c}"),
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
