//! Line-oriented check reports: `PASS <law> n=<samples> seed=<seed>` or
//! `FAIL <law> counterexample: <terms>`.

use std::fmt::{self, Write};

use crate::kernel::{AppResult, Element};

/// Longest rendering of an element inside a report line.
const SHORT_LIMIT: usize = 160;

struct Bounded {
    buf: String,
    limit: usize,
}

impl Write for Bounded {
    fn write_str(&mut self, s: &str) -> fmt::Result {
        if self.buf.len() + s.len() > self.limit {
            let room = self.limit.saturating_sub(self.buf.len());
            let cut = (0..=room)
                .rev()
                .find(|i| s.is_char_boundary(*i))
                .unwrap_or(0);
            self.buf.push_str(&s[..cut]);
            return Err(fmt::Error);
        }
        self.buf.push_str(s);
        Ok(())
    }
}

/// Renders `e`, truncated with `...` when long.
pub fn short(e: &Element) -> String {
    let mut w = Bounded {
        buf: String::new(),
        limit: SHORT_LIMIT,
    };
    if write!(w, "{e}").is_err() {
        w.buf.push_str("...");
    }
    w.buf
}

pub fn outcome(r: &AppResult) -> String {
    match r {
        Ok(v) => short(v),
        Err(h) => h.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub law: String,
    pub samples: usize,
    pub seed: u64,
    pub counterexample: Option<String>,
}

impl CheckReport {
    pub fn new(
        law: impl Into<String>,
        samples: usize,
        seed: u64,
        counterexample: Option<String>,
    ) -> Self {
        CheckReport {
            law: law.into(),
            samples,
            seed,
            counterexample,
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(f, "PASS {} n={} seed={}", self.law, self.samples, self.seed),
            Some(c) => write!(f, "FAIL {} counterexample: {}", self.law, c),
        }
    }
}

/// An ordered collection of reports; passes iff every entry passes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn push(&mut self, r: CheckReport) {
        self.checks.push(r);
    }

    pub fn extend(&mut self, rs: impl IntoIterator<Item = CheckReport>) {
        self.checks.extend(rs);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckReport::passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}
