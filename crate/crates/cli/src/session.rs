use std::path::Path;
use std::sync::Arc;

use pca_core::kernel::{Element, Fuel, NumericPca, Pca, TermMode, TermPca};
use pca_core::morphisms::turing_leq;
use pca_core::oracle::{load_table, nontotal_witness, DialogueTrace, ExtendedPca, TableError};
use pca_core::report::{outcome, CheckReport};
use pca_core::syntax::{eval_source, Env, SyntaxError};

/// Base model, oracle stack (innermost first), user definitions and default budget.
pub struct Session {
    base: Arc<dyn Pca>,
    stack: Vec<Arc<ExtendedPca>>,
    defs: Vec<(String, Element)>,
    pub fuel: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum SessionError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("no oracle loaded")]
    NoOracle,
}

impl Session {
    pub fn new(numeric: bool, pure_sk: bool, fuel: u64) -> Session {
        let mode = if pure_sk {
            TermMode::Pure
        } else {
            TermMode::Enriched
        };
        let term = Arc::new(TermPca::new(mode));
        let base: Arc<dyn Pca> = if numeric {
            Arc::new(NumericPca::new(term))
        } else {
            term
        };
        Session {
            base,
            stack: Vec::new(),
            defs: Vec::new(),
            fuel,
        }
    }

    /// The base extended by every oracle on the stack.
    pub fn model(&self) -> Arc<dyn Pca> {
        match self.stack.last() {
            Some(top) => top.clone(),
            None => self.base.clone(),
        }
    }

    /// Kit names, `K_f`, `S_f`, `r_f`, `bot-witness` for the top oracle, then user definitions.
    pub fn env(&self) -> Env {
        let model = self.model();
        let mut env = model.kit().env();
        if let Some(top) = self.stack.last() {
            env.insert("K_f".into(), top.k());
            env.insert("S_f".into(), top.s());
            env.insert("r_f".into(), top.representer().clone());
            env.insert("bot-witness".into(), nontotal_witness(&**top.base()));
        }
        for (name, e) in &self.defs {
            env.insert(name.clone(), e.clone());
        }
        env
    }

    pub fn eval(&self, src: &str) -> Result<Result<Element, pca_core::Halt>, SyntaxError> {
        match eval_source(&*self.model(), &self.env(), src, &mut Fuel::new(self.fuel)) {
            Ok(v) => Ok(Ok(v)),
            Err(SyntaxError::Eval(h)) => Ok(Err(h)),
            Err(e) => Err(e),
        }
    }

    /// `eval` rendered as the value or its outcome.
    pub fn show(&self, src: &str) -> Result<(bool, String), SyntaxError> {
        Ok(match self.eval(src)? {
            Ok(v) => (true, v.to_string()),
            r => (false, outcome(&r)),
        })
    }

    pub fn define(&mut self, name: &str, src: &str) -> Result<String, SessionError> {
        let v = eval_source(&*self.model(), &self.env(), src, &mut Fuel::new(self.fuel))?;
        let shown = v.to_string();
        self.defs.retain(|(n, _)| n != name);
        self.defs.push((name.to_string(), v));
        Ok(shown)
    }

    pub fn push(&mut self, path: &Path) -> Result<String, SessionError> {
        let model = self.model();
        let f = load_table(&*model, &self.env(), path, self.fuel)?;
        let ext = Arc::new(ExtendedPca::new(model, Arc::new(f)));
        let name = ext.name();
        self.stack.push(ext);
        Ok(name)
    }

    pub fn pop(&mut self) -> Result<String, SessionError> {
        let top = self.stack.pop().ok_or(SessionError::NoOracle)?;
        Ok(top.name())
    }

    pub fn trace(&self, a: &str, b: &str) -> Result<DialogueTrace, SessionError> {
        let top = self.stack.last().ok_or(SessionError::NoOracle)?.clone();
        let env = self.env();
        let eval = |src: &str| eval_source(&*top, &env, src, &mut Fuel::new(self.fuel));
        let (a, b) = (eval(a)?, eval(b)?);
        Ok(top.dialogue_apply(&a, &b, &mut Fuel::new(self.fuel)).1)
    }

    /// `f ≤_A g` with the witness evaluated in `A[g]`, `A` being the current model.
    pub fn leq(
        &self,
        f: &Path,
        g: &Path,
        witness: &str,
        samples: usize,
        seed: u64,
    ) -> Result<CheckReport, SessionError> {
        let model = self.model();
        let env = self.env();
        let f = load_table(&*model, &env, f, self.fuel)?;
        let g = load_table(&*model, &env, g, self.fuel)?;
        let ag = Arc::new(ExtendedPca::new(model, Arc::new(g)));
        let mut wenv = ag.kit().env();
        wenv.insert("K_f".into(), ag.k());
        wenv.insert("S_f".into(), ag.s());
        wenv.insert("r_f".into(), ag.representer().clone());
        for (name, e) in &self.defs {
            wenv.insert(name.clone(), e.clone());
        }
        let w = eval_source(&*ag, &wenv, witness, &mut Fuel::new(self.fuel))?;
        Ok(turing_leq(&f, &ag, &w, samples, seed, self.fuel))
    }
}
