//! Reciprocal pairwise-comparison matrices on the 1/9..9 scale.

use num_rational::Ratio;

use crate::error::{Error, Result};

pub type Judgment = Ratio<i64>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonMatrix {
    k: usize,
    entries: Vec<Judgment>,
}

impl ComparisonMatrix {
    /// Validates shape, scale, unit diagonal and exact reciprocity, in that order.
    pub fn new(rows: Vec<Vec<Judgment>>) -> Result<Self> {
        let k = rows.len();
        if k == 0 {
            return Err(Error::Empty("comparison matrix"));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != k {
                return Err(Error::Matrix {
                    row: i,
                    col: row.len().min(k),
                    reason: format!("row has {} entries, expected {k}", row.len()),
                });
            }
        }
        let lo = Judgment::new(1, 9);
        let hi = Judgment::from_integer(9);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v < lo || v > hi {
                    return Err(Error::Matrix {
                        row: i,
                        col: j,
                        reason: format!("{v} is outside the scale [1/9, 9]"),
                    });
                }
            }
        }
        for (i, row) in rows.iter().enumerate() {
            if row[i] != Judgment::from_integer(1) {
                return Err(Error::Matrix {
                    row: i,
                    col: i,
                    reason: format!("diagonal entry is {}, expected 1", row[i]),
                });
            }
        }
        for i in 0..k {
            for j in i + 1..k {
                if rows[i][j] * rows[j][i] != Judgment::from_integer(1) {
                    return Err(Error::Matrix {
                        row: j,
                        col: i,
                        reason: format!(
                            "{} is not the reciprocal of {} at ({i}, {j})",
                            rows[j][i], rows[i][j]
                        ),
                    });
                }
            }
        }
        Ok(ComparisonMatrix {
            k,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds from the strict upper triangle, row by row; the rest is implied.
    pub fn from_upper(k: usize, upper: &[Judgment]) -> Result<Self> {
        if upper.len() != k * k.saturating_sub(1) / 2 {
            return Err(Error::InvalidValue(format!(
                "{} upper-triangle entries given for k = {k}",
                upper.len()
            )));
        }
        let mut rows = vec![vec![Judgment::from_integer(1); k]; k];
        let mut it = upper.iter();
        for i in 0..k {
            for j in i + 1..k {
                let v = *it.next().expect("length checked");
                if v <= Judgment::from_integer(0) {
                    return Err(Error::Matrix {
                        row: i,
                        col: j,
                        reason: format!("{v} is not positive"),
                    });
                }
                rows[i][j] = v;
                rows[j][i] = v.recip();
            }
        }
        Self::new(rows)
    }

    /// All-ones matrix: every element judged equally important.
    pub fn uniform(k: usize) -> Result<Self> {
        Self::new(vec![vec![Judgment::from_integer(1); k]; k])
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> Judgment {
        self.entries[i * self.k + j]
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.k)
            .map(|i| {
                (0..self.k)
                    .map(|j| {
                        let v = self.get(i, j);
                        *v.numer() as f64 / *v.denom() as f64
                    })
                    .collect()
            })
            .collect()
    }

    /// Matrix file: `#` comments, then `k` lines of `k` entries, each an
    /// integer, a decimal or an exact fraction `p/q`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        // (line, character column of each entry) for error positions
        let mut positions: Vec<(usize, Vec<usize>)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let mut row = Vec::new();
            let mut cols = Vec::new();
            for tok in line.split_whitespace() {
                let col = tok.as_ptr() as usize - raw.as_ptr() as usize + 1;
                row.push(parse_judgment(tok).map_err(|m| Error::parse(idx + 1, col, m))?);
                cols.push(col);
            }
            rows.push(row);
            positions.push((idx + 1, cols));
        }
        Self::new(rows).map_err(|e| match e {
            Error::Matrix { row, col, reason } => {
                let (line, cols) = &positions[row];
                let column = cols
                    .get(col)
                    .copied()
                    .unwrap_or_else(|| cols.last().map_or(1, |&c| c + 1));
                Error::parse(
                    *line,
                    column,
                    format!("entry ({}, {}): {reason}", row + 1, col + 1),
                )
            }
            other => other,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for i in 0..self.k {
            let row: Vec<String> = (0..self.k).map(|j| self.get(i, j).to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

/// Parses `7`, `0.25` or `1/3` exactly.
pub fn parse_judgment(tok: &str) -> std::result::Result<Judgment, String> {
    let bad = || format!("invalid entry `{tok}`");
    let v = if let Some((p, q)) = tok.split_once('/') {
        let p: i64 = p.parse().map_err(|_| bad())?;
        let q: i64 = q.parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(format!("zero denominator in `{tok}`"));
        }
        Judgment::new(p, q)
    } else if let Some((int, frac)) = tok.split_once('.') {
        if frac.is_empty() || frac.len() > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int: i64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let scale = 10i64.pow(frac.len() as u32);
        let frac: i64 = frac.parse().map_err(|_| bad())?;
        if int < 0 || tok.starts_with('-') {
            return Err(format!("`{tok}` is not positive"));
        }
        Judgment::new(int * scale + frac, scale)
    } else {
        Judgment::from_integer(tok.parse().map_err(|_| bad())?)
    };
    if v <= Judgment::from_integer(0) {
        return Err(format!("`{tok}` is not positive"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_mixed_entries() {
        let m = ComparisonMatrix::parse("# criteria\n1 2 4\n0.5 1 2\n1/4 0.5 1\n").unwrap();
        assert_eq!(m.k(), 3);
        assert_eq!(m.get(2, 0), Judgment::new(1, 4));
        assert_eq!(m.to_f64()[1][0], 0.5);
        assert_eq!(ComparisonMatrix::parse(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn rejects_invalid_matrices() {
        let cell = |text: &str| match ComparisonMatrix::parse(text) {
            Err(Error::Parse { line, column, .. }) => (line, column),
            other => panic!("unexpected {other:?}"),
        };
        // 0.333 is not exactly 1/3
        assert_eq!(cell("1 3\n0.333 1\n"), (2, 1));
        assert_eq!(cell("1 10\n1/10 1\n"), (1, 3));
        assert_eq!(cell("2 1\n1 1/2\n"), (1, 1));
        assert_eq!(cell("1 2\n1/2 x\n"), (2, 5));
        assert!(ComparisonMatrix::parse("1 2\n1/2\n").is_err());
        assert!(ComparisonMatrix::parse("").is_err());
        assert!(ComparisonMatrix::parse("1 0\n0 1\n").is_err());
        assert!(ComparisonMatrix::parse("1 -2\n-1/2 1\n").is_err());
    }

    #[test]
    fn judgment_tokens() {
        assert_eq!(parse_judgment("3").unwrap(), Judgment::from_integer(3));
        assert_eq!(parse_judgment("0.125").unwrap(), Judgment::new(1, 8));
        assert_eq!(parse_judgment("2/6").unwrap(), Judgment::new(1, 3));
        assert!(parse_judgment("1/0").is_err());
        assert!(parse_judgment("1.").is_err());
        assert!(parse_judgment("0").is_err());
    }

    #[test]
    fn from_upper_fills_reciprocals() {
        let m = ComparisonMatrix::from_upper(
            3,
            &[
                Judgment::from_integer(3),
                Judgment::from_integer(5),
                Judgment::from_integer(3),
            ],
        )
        .unwrap();
        assert_eq!(m.get(2, 0), Judgment::new(1, 5));
        assert!(ComparisonMatrix::from_upper(3, &[Judgment::from_integer(1)]).is_err());
    }
}
