//! The oracle command: match lengths from both engines side by side, as a
//! verification surface for the fast index.

use std::io::Read;

use anyhow::{bail, Result};
use seqent::entropy::{match_lengths, match_lengths_naive};
use seqent::seq::CategoricalSequence;

/// One row of the oracle table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleRow {
    /// 1-indexed position.
    pub position: usize,
    pub lambda: usize,
    pub lambda_naive: usize,
}

impl OracleRow {
    pub fn agrees(&self) -> bool {
        self.lambda == self.lambda_naive
    }
}

/// Match lengths from both engines for a one-symbol-per-line input.
pub fn oracle_rows<R: Read>(mut reader: R) -> Result<Vec<OracleRow>> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    let symbols: Vec<String> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(str::to_string)
        .collect();
    if symbols.is_empty() {
        bail!("sequence file is empty");
    }
    let seq = CategoricalSequence::from_labels(symbols);
    let fast = match_lengths(&seq)?;
    let naive = match_lengths_naive(&seq)?;
    Ok(fast
        .lambdas()
        .iter()
        .zip(naive.lambdas())
        .enumerate()
        .map(|(i, (&lambda, &lambda_naive))| OracleRow {
            position: i + 1,
            lambda,
            lambda_naive,
        })
        .collect())
}

/// Renders the oracle table: `i,lambda,lambda_naive,agreement` with `ok` or
/// `MISMATCH` per row. Returns the text and whether every row agreed.
pub fn render(rows: &[OracleRow]) -> (String, bool) {
    let mut out = String::from("i,lambda,lambda_naive,agreement\n");
    let mut all_ok = true;
    for row in rows {
        let flag = if row.agrees() {
            "ok"
        } else {
            all_ok = false;
            "MISMATCH"
        };
        out.push_str(&format!(
            "{},{},{},{}\n",
            row.position, row.lambda, row.lambda_naive, flag
        ));
    }
    (out, all_ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aab_rows() {
        let rows = oracle_rows("a\na\nb\n".as_bytes()).unwrap();
        assert_eq!(
            rows,
            vec![
                OracleRow {
                    position: 1,
                    lambda: 1,
                    lambda_naive: 1
                },
                OracleRow {
                    position: 2,
                    lambda: 2,
                    lambda_naive: 2
                },
                OracleRow {
                    position: 3,
                    lambda: 1,
                    lambda_naive: 1
                },
            ]
        );
        let (text, ok) = render(&rows);
        assert!(ok);
        assert_eq!(
            text,
            "i,lambda,lambda_naive,agreement\n1,1,1,ok\n2,2,2,ok\n3,1,1,ok\n"
        );
    }

    #[test]
    fn constant_eight_symbols() {
        let input = "x\n".repeat(8);
        let rows = oracle_rows(input.as_bytes()).unwrap();
        let lambdas: Vec<usize> = rows.iter().map(|r| r.lambda).collect();
        assert_eq!(lambdas, vec![1, 8, 7, 6, 5, 4, 3, 2]);
        assert!(rows.iter().all(OracleRow::agrees));
    }

    #[test]
    fn empty_file_is_an_error() {
        assert!(oracle_rows("".as_bytes()).is_err());
        assert!(oracle_rows("\n \n".as_bytes()).is_err());
    }

    #[test]
    fn disagreement_renders_mismatch() {
        // A fabricated disagreement exercises the fault path the command
        // takes when the engines ever diverge.
        let rows = vec![
            OracleRow {
                position: 1,
                lambda: 1,
                lambda_naive: 1,
            },
            OracleRow {
                position: 2,
                lambda: 3,
                lambda_naive: 2,
            },
        ];
        let (text, ok) = render(&rows);
        assert!(!ok);
        assert!(text.contains("2,3,2,MISMATCH"));
    }
}
