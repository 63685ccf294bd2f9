//! Adjoining a partial endofunction `f` to a PCA `A`: the dialogue
//! application `·^f`, the combinators `K_f`, `S_f`, the morphism `ι_f` with
//! its realizer and decider, the representer of `f`, the universal lift, and
//! the element witnessing that `A[f]` is never total.

mod constructions;
mod corollaries;
mod extension;
mod table;
mod universal;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::kernel::{Element, Fuel, Halt};

pub use constructions::{
    build_kf, build_sf, build_t, build_t_combinator, compiled_t_combinator, double_query_witness,
    iota, iota_decider, iota_realizer, lift, nontotal_witness, representer,
};
pub use corollaries::{
    collapse, commutation, equality_decider, query_models, transitivity_witness, translate,
    translation, Commutation, QueryModels, Translation,
};
pub use extension::{check_against_dialogue, DialogueTrace, ExtendedPca, Outcome};
pub use table::{load_table, parse_table, TableError};
pub use universal::{check_u_step, lift_morphism, u_step, LiftError, LiftParts};

/// Host implementation of an oracle; `Ok(None)` means "not in the domain".
pub type Builtin = Arc<dyn Fn(&Element, &mut Fuel) -> Result<Option<Element>, Halt> + Send + Sync>;

/// A partial endofunction on a carrier, given by a finite table, a host
/// builtin, or both (the table takes precedence).
#[derive(Clone)]
pub struct OracleFn {
    name: String,
    table: Vec<(Element, Element)>,
    index: HashMap<Element, usize>,
    builtin: Option<Builtin>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("duplicate oracle input {0}")]
pub struct DuplicateInput(pub String);

impl OracleFn {
    pub fn empty(name: impl Into<String>) -> OracleFn {
        OracleFn {
            name: name.into(),
            table: Vec::new(),
            index: HashMap::new(),
            builtin: None,
        }
    }

    pub fn from_table(
        name: impl Into<String>,
        entries: impl IntoIterator<Item = (Element, Element)>,
    ) -> Result<OracleFn, DuplicateInput> {
        let mut f = OracleFn::empty(name);
        for (k, v) in entries {
            if f.index.contains_key(&k) {
                return Err(DuplicateInput(crate::report::short(&k)));
            }
            f.index.insert(k.clone(), f.table.len());
            f.table.push((k, v));
        }
        Ok(f)
    }

    pub fn builtin(
        name: impl Into<String>,
        f: impl Fn(&Element, &mut Fuel) -> Result<Option<Element>, Halt> + Send + Sync + 'static,
    ) -> OracleFn {
        OracleFn {
            builtin: Some(Arc::new(f)),
            ..OracleFn::empty(name)
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Table entries in insertion order.
    pub fn entries(&self) -> &[(Element, Element)] {
        &self.table
    }

    pub fn has_builtin(&self) -> bool {
        self.builtin.is_some()
    }

    /// One lookup; costs one unit of fuel plus whatever a builtin spends.
    pub fn call(&self, v: &Element, fuel: &mut Fuel) -> Result<Option<Element>, Halt> {
        fuel.tick()?;
        if let Some(i) = self.index.get(v) {
            return Ok(Some(self.table[*i].1.clone()));
        }
        match &self.builtin {
            Some(b) => b(v, fuel),
            None => Ok(None),
        }
    }

    /// Graph inclusion on the table part: every entry of `self` is an entry of `other`.
    pub fn table_subset_of(&self, other: &OracleFn) -> bool {
        self.table
            .iter()
            .all(|(k, v)| other.index.get(k).is_some_and(|i| other.table[*i].1 == *v))
    }
}

impl fmt::Debug for OracleFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OracleFn")
            .field("name", &self.name)
            .field("entries", &self.table.len())
            .field("builtin", &self.builtin.is_some())
            .finish()
    }
}
