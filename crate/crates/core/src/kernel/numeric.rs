//! The numeric model: the Gödel-coded image of a term model.
//!
//! A normal form is serialized in preorder, each node as the Elias-gamma code
//! of `atom index + 1` followed by that of `argument count + 1`. The bit string,
//! read least-significant-first, gets a terminating `1` above its top bit; the
//! resulting natural number is the element. The carrier is the set of naturals
//! that decode to a member of the underlying term model.

use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;

use super::{AppResult, Atom, Element, Fuel, Halt, Nf, Pca, Stuck, TermPca};
use crate::stdlib::StdKit;

struct BitWriter {
    bytes: Vec<u8>,
    len: usize,
}

impl BitWriter {
    fn push(&mut self, bit: bool) {
        if self.len % 8 == 0 {
            self.bytes.push(0);
        }
        if bit {
            *self.bytes.last_mut().unwrap() |= 1 << (self.len % 8);
        }
        self.len += 1;
    }

    fn gamma(&mut self, n: u64) {
        debug_assert!(n >= 1);
        let width = 64 - n.leading_zeros();
        for _ in 1..width {
            self.push(false);
        }
        for i in (0..width).rev() {
            self.push((n >> i) & 1 == 1);
        }
    }
}

struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
    len: usize,
}

impl BitReader<'_> {
    fn bit(&mut self) -> Option<bool> {
        if self.pos >= self.len {
            return None;
        }
        let b = (self.bytes[self.pos / 8] >> (self.pos % 8)) & 1 == 1;
        self.pos += 1;
        Some(b)
    }

    fn gamma(&mut self) -> Option<u64> {
        let mut zeros = 0;
        while !self.bit()? {
            zeros += 1;
            if zeros > 63 {
                return None;
            }
        }
        let mut n: u64 = 1;
        for _ in 0..zeros {
            n = (n << 1) | self.bit()? as u64;
        }
        Some(n)
    }
}

/// Codes a normal form.
pub fn encode(nf: &Nf) -> BigUint {
    let mut w = BitWriter {
        bytes: Vec::new(),
        len: 0,
    };
    let mut work = vec![nf.clone()];
    while let Some(n) = work.pop() {
        w.gamma(n.head().index() + 1);
        w.gamma(n.args().len() as u64 + 1);
        work.extend(n.args().iter().rev().cloned());
    }
    w.push(true);
    BigUint::from_bytes_le(&w.bytes)
}

/// Inverse of [`encode`] on its image; `None` for naturals outside it.
pub fn decode(code: &BigUint) -> Option<Nf> {
    let bits = code.bits() as usize;
    if bits == 0 {
        return None;
    }
    let bytes = code.to_bytes_le();
    let mut r = BitReader {
        bytes: &bytes,
        pos: 0,
        len: bits - 1,
    };
    // (atom, remaining args, collected args)
    let mut stack: Vec<(Atom, usize, Vec<Nf>)> = Vec::new();
    loop {
        let atom = Atom::from_index(r.gamma()? - 1)?;
        let nargs = (r.gamma()? - 1) as usize;
        if nargs >= atom.arity() {
            return None;
        }
        let mut done = if nargs == 0 {
            Some(Nf::atom(atom))
        } else {
            stack.push((atom, nargs, Vec::with_capacity(nargs)));
            None
        };
        while let Some(nf) = done.take() {
            match stack.last_mut() {
                None => return (r.pos == r.len).then_some(nf),
                Some((atom, want, args)) => {
                    args.push(nf);
                    if args.len() == *want {
                        let atom = *atom;
                        let (_, _, args) = stack.pop().unwrap();
                        done = Some(Nf::new(atom, args));
                    }
                }
            }
        }
    }
}

pub struct NumericPca {
    inner: Arc<TermPca>,
    kit: OnceLock<StdKit>,
}

impl NumericPca {
    pub fn new(inner: Arc<TermPca>) -> NumericPca {
        NumericPca {
            inner,
            kit: OnceLock::new(),
        }
    }

    pub fn inner(&self) -> &Arc<TermPca> {
        &self.inner
    }

    pub fn encode(&self, e: &Element) -> Option<Element> {
        e.as_term().map(|nf| Element::code(encode(nf)))
    }

    pub fn decode(&self, e: &Element) -> Option<Element> {
        e.as_code().and_then(decode).map(Element::Term)
    }

    fn nf(&self, e: &Element) -> Result<Nf, Halt> {
        e.as_code()
            .and_then(decode)
            .filter(|nf| self.inner.admits(nf))
            .ok_or_else(|| Halt::Stuck(Stuck::Malformed(format!("{e} is not a valid code"))))
    }
}

impl Pca for NumericPca {
    fn name(&self) -> String {
        format!("numeric({})", self.inner.name())
    }

    fn k(&self) -> Element {
        Element::code(encode(&Nf::atom(Atom::K)))
    }

    fn s(&self) -> Element {
        Element::code(encode(&Nf::atom(Atom::S)))
    }

    fn apply(&self, a: &Element, b: &Element, fuel: &mut Fuel) -> AppResult {
        let f = self.nf(a)?;
        let x = self.nf(b)?;
        let v = self.inner.apply_nf(&f, &x, fuel)?;
        // Writing the code out costs one unit per node.
        fuel.spend(v.size())?;
        Ok(Element::code(encode(&v)))
    }

    fn contains(&self, e: &Element) -> bool {
        self.nf(e).is_ok()
    }

    fn kit(&self) -> &StdKit {
        self.kit.get_or_init(|| {
            self.inner
                .kit()
                .map(|e| self.encode(e).expect("term-model kit element"))
        })
    }

    fn equality(&self) -> Option<Element> {
        self.inner.equality().and_then(|e| self.encode(&e))
    }

    fn native_t(&self) -> Option<Element> {
        self.inner.native_t().and_then(|e| self.encode(&e))
    }

    fn native_t_for_extensions(&self) -> Option<Element> {
        self.inner
            .native_t_for_extensions()
            .and_then(|e| self.encode(&e))
    }

    fn generators(&self) -> Vec<Element> {
        self.inner
            .generators()
            .iter()
            .filter_map(|e| self.encode(e))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::Prim;

    #[test]
    fn k_and_s_have_small_codes() {
        assert_eq!(encode(&Nf::atom(Atom::K)), BigUint::from(7u32));
        assert_eq!(decode(&BigUint::from(7u32)), Some(Nf::atom(Atom::K)));
        assert_eq!(decode(&BigUint::from(0u32)), None);
        assert_eq!(decode(&BigUint::from(1u32)), None);
    }

    #[test]
    fn codes_round_trip_through_application_results() {
        let pca = NumericPca::new(Arc::new(TermPca::enriched()));
        let ks = pca.apply(&pca.k(), &pca.s(), &mut Fuel::new(100)).unwrap();
        assert_eq!(pca.decode(&ks).unwrap().to_string(), "K S");
        let pair = Element::atom(Atom::Prim(Prim::Pair));
        let code = pca.encode(&pair).unwrap();
        assert_eq!(pca.decode(&code), Some(pair));
    }

    #[test]
    fn garbage_codes_are_rejected() {
        let pca = NumericPca::new(Arc::new(TermPca::pure()));
        // K applied to two arguments is not a normal form.
        let mut w = BitWriter {
            bytes: vec![],
            len: 0,
        };
        w.gamma(1);
        w.gamma(3);
        for _ in 0..2 {
            w.gamma(1);
            w.gamma(1);
        }
        w.push(true);
        let bad = Element::code(BigUint::from_bytes_le(&w.bytes));
        assert!(!pca.contains(&bad));
        assert!(matches!(
            pca.apply(&bad, &pca.k(), &mut Fuel::new(10)),
            Err(Halt::Stuck(Stuck::Malformed(_)))
        ));
    }
}
