use std::path::Path;

use super::{DuplicateInput, OracleFn};
use crate::kernel::{Fuel, Pca};
use crate::syntax::{eval_source, Env, SyntaxError};

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error("line {line}: {err}")]
    Syntax { line: usize, err: SyntaxError },
    #[error("line {line}: expected `<term> => <term>`")]
    Shape { line: usize },
    #[error("line {line}: {err}")]
    Duplicate { line: usize, err: DuplicateInput },
    #[error("{path}: {err}")]
    Io { path: String, err: std::io::Error },
}

/// Reads a finite oracle: one `<term> => <term>` per line, blank lines and
/// `#` comments ignored. A `#` followed by a digit is a numeric literal. Both sides are evaluated in `pca` under `env`.
pub fn parse_table(
    pca: &dyn Pca,
    env: &Env,
    name: &str,
    text: &str,
    fuel: u64,
) -> Result<OracleFn, TableError> {
    let mut entries = Vec::new();
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.trim();
        let comment = s.starts_with('#') && !s[1..].starts_with(|c: char| c.is_ascii_digit());
        if s.is_empty() || comment {
            continue;
        }
        let (lhs, rhs) = s.split_once("=>").ok_or(TableError::Shape { line })?;
        let eval = |src: &str| {
            eval_source(pca, env, src.trim(), &mut Fuel::new(fuel))
                .map_err(|err| TableError::Syntax { line, err })
        };
        entries.push((eval(lhs)?, eval(rhs)?));
        lines.push(line);
    }
    // Find the offending line when the table has a repeated input.
    for j in 0..entries.len() {
        if entries[..j].iter().any(|(k, _)| *k == entries[j].0) {
            let err = DuplicateInput(crate::report::short(&entries[j].0));
            return Err(TableError::Duplicate {
                line: lines[j],
                err,
            });
        }
    }
    Ok(OracleFn::from_table(name, entries).expect("duplicates already rejected"))
}

/// [`parse_table`] on a file; the oracle is named after the file stem.
pub fn load_table(
    pca: &dyn Pca,
    env: &Env,
    path: &Path,
    fuel: u64,
) -> Result<OracleFn, TableError> {
    let text = std::fs::read_to_string(path).map_err(|err| TableError::Io {
        path: path.display().to_string(),
        err,
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "f".into());
    parse_table(pca, env, &name, &text, fuel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::TermPca;

    #[test]
    fn reads_entries_and_skips_comments() {
        let a = TermPca::enriched();
        let env = a.kit().env();
        let f = parse_table(&a, &env, "f", "# swap\nK => S\n\nS => K\n", 10_000).unwrap();
        assert_eq!(f.entries().len(), 2);
        assert_eq!(f.call(&a.k(), &mut Fuel::new(10)), Ok(Some(a.s())));
        assert_eq!(f.call(&a.kit().id, &mut Fuel::new(10)), Ok(None));
    }

    #[test]
    fn numeric_literals_are_not_comments() {
        let a = crate::kernel::NumericPca::new(std::sync::Arc::new(TermPca::enriched()));
        let env = a.kit().env();
        let f = parse_table(&a, &env, "f", "# K to S\n#7 => #26\n", 10_000).unwrap();
        assert_eq!(f.entries().len(), 1);
        assert_eq!(f.call(&a.k(), &mut Fuel::new(10)), Ok(Some(a.s())));
    }

    #[test]
    fn duplicate_inputs_are_rejected_with_line() {
        let a = TermPca::enriched();
        let env = a.kit().env();
        let err =
            parse_table(&a, &env, "f", "K => S\nS => S\n# again\nK => K\n", 10_000).unwrap_err();
        assert!(
            matches!(err, TableError::Duplicate { line: 4, .. }),
            "{err}"
        );
    }

    #[test]
    fn malformed_lines_are_rejected() {
        let a = TermPca::enriched();
        let env = a.kit().env();
        assert!(matches!(
            parse_table(&a, &env, "f", "K S\n", 100),
            Err(TableError::Shape { line: 1 })
        ));
        assert!(matches!(
            parse_table(&a, &env, "f", "K => (S\n", 100),
            Err(TableError::Syntax { line: 1, .. })
        ));
    }
}
