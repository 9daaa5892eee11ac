//! Substitution tables assembled from component functions.
//!
//! Component `i` is output bit `i` (bit 0 least significant), so
//! `table[x] = Σ_i components[i](x) · 2^i`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bf::{classify, nonlinearity, PropertyReport, TruthTable};
use crate::error::{Error, Result};
use crate::search::{check_component_shape, linear_combination};

pub const MAX_SBOX_INPUTS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutionTable {
    n: usize,
    m: usize,
    table: Vec<u32>,
    components: Vec<TruthTable>,
}

fn check_dims(n: usize, m: usize) -> Result<()> {
    if n > MAX_SBOX_INPUTS {
        return Err(Error::Capacity {
            what: "substitution tables",
            n,
            max: MAX_SBOX_INPUTS,
        });
    }
    if n == 0 || m == 0 || m > n {
        return Err(Error::InvalidValue(format!(
            "substitution table needs 1 <= m <= n, got n = {n}, m = {m}"
        )));
    }
    Ok(())
}

pub fn build_sbox(components: &[TruthTable]) -> Result<SubstitutionTable> {
    let n = check_component_shape(components)?;
    let m = components.len();
    check_dims(n, m)?;
    let table = (0..1usize << n)
        .map(|x| {
            components
                .iter()
                .enumerate()
                .map(|(i, c)| u32::from(c.get(x)) << i)
                .sum()
        })
        .collect();
    Ok(SubstitutionTable {
        n,
        m,
        table,
        components: components.to_vec(),
    })
}

impl SubstitutionTable {
    /// Builds from the table view; every entry must be below `2^m`.
    pub fn from_table(n: usize, m: usize, table: Vec<u32>) -> Result<Self> {
        check_dims(n, m)?;
        if table.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                found: table.len(),
            });
        }
        if let Some((x, v)) = table.iter().enumerate().find(|(_, &v)| v >> m != 0) {
            return Err(Error::InvalidValue(format!(
                "entry {x} = {v:#x} does not fit in {m} output bits"
            )));
        }
        let components = (0..m)
            .map(|i| TruthTable::from_fn(n, |x| (table[x] >> i) & 1 == 1))
            .collect::<Result<Vec<_>>>()?;
        Ok(SubstitutionTable {
            n,
            m,
            table,
            components,
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_table(n, n, (0..1u32 << n).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn table(&self) -> &[u32] {
        &self.table
    }

    pub fn components(&self) -> &[TruthTable] {
        &self.components
    }

    pub fn apply(&self, x: usize) -> u32 {
        self.table[x]
    }

    /// `⊕_{i ∈ mask} component_i` for a nonzero output mask.
    pub fn combination(&self, mask: usize) -> TruthTable {
        linear_combination(&self.components, mask).expect("components share n")
    }

    /// Duplicate scan over the table.
    pub fn is_permutation(&self) -> bool {
        if self.n != self.m {
            return false;
        }
        let mut seen = vec![false; self.table.len()];
        for &v in &self.table {
            if std::mem::replace(&mut seen[v as usize], true) {
                return false;
            }
        }
        true
    }

    /// Whether every nonzero linear combination of the components is balanced.
    pub fn all_combinations_balanced(&self) -> bool {
        (1..1usize << self.m).all(|c| self.combination(c).is_balanced())
    }

    /// Permutation test; requires `n = m`. Both characterizations are evaluated
    /// and must agree.
    pub fn is_bijective(&self) -> Result<bool> {
        if self.n != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: self.m,
            });
        }
        let by_scan = self.is_permutation();
        let by_balance = self.all_combinations_balanced();
        assert_eq!(
            by_scan, by_balance,
            "permutation and balancedness tests disagree"
        );
        Ok(by_scan)
    }

    /// S-box file text: header `n=<n> m=<m>` and the entries in hex, 16 per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={} m={}\n", self.n, self.m);
        for row in self.table.chunks(16) {
            let line: Vec<String> = row.iter().map(|v| format!("{v:x}")).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut entries = Vec::new();
        let mut last_line = 1;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            last_line = line_no;
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let col_of = |s: &str| s.as_ptr() as usize - raw.as_ptr() as usize + 1;
            if header.is_none() {
                header = Some(parse_header(line, line_no, col_of(line.trim_start()))?);
                continue;
            }
            for tok in line.split_whitespace() {
                let v = u32::from_str_radix(tok, 16).map_err(|_| {
                    Error::parse(line_no, col_of(tok), format!("invalid hex entry `{tok}`"))
                })?;
                entries.push((v, line_no, col_of(tok)));
            }
        }
        let (n, m) = header.ok_or_else(|| Error::parse(1, 1, "missing `n=<n> m=<m>` header"))?;
        check_dims(n, m).map_err(|e| Error::parse(1, 1, e.to_string()))?;
        if entries.len() != 1 << n {
            return Err(Error::parse(
                last_line,
                1,
                format!("expected {} entries, found {}", 1usize << n, entries.len()),
            ));
        }
        if let Some(&(v, line, col)) = entries.iter().find(|(v, _, _)| v >> m != 0) {
            return Err(Error::parse(
                line,
                col,
                format!("entry {v:#x} does not fit in {m} bits"),
            ));
        }
        Self::from_table(n, m, entries.into_iter().map(|(v, _, _)| v).collect())
    }
}

fn parse_header(line: &str, line_no: usize, column: usize) -> Result<(usize, usize)> {
    let mut n = None;
    let mut m = None;
    for part in line.split_whitespace() {
        let slot = match part.split_once('=') {
            Some(("n", v)) => (&mut n, v),
            Some(("m", v)) => (&mut m, v),
            _ => {
                return Err(Error::parse(
                    line_no,
                    column,
                    format!("bad header field `{part}`"),
                ))
            }
        };
        *slot.0 =
            Some(slot.1.parse::<usize>().map_err(|_| {
                Error::parse(line_no, column, format!("bad header value `{part}`"))
            })?);
    }
    match (n, m) {
        (Some(n), Some(m)) => Ok((n, m)),
        _ => Err(Error::parse(
            line_no,
            column,
            "header must be `n=<n> m=<m>`",
        )),
    }
}

pub fn sbox_nonlinearity(s: &SubstitutionTable) -> u32 {
    (1..1usize << s.m)
        .map(|c| nonlinearity(&s.combination(c)))
        .min()
        .expect("m >= 1")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinationReport {
    pub mask: usize,
    pub report: PropertyReport,
}

/// Table-level analysis over every nonzero output combination.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SboxReport {
    pub n: usize,
    pub m: usize,
    pub min_nonlinearity: u32,
    pub max_absolute_indicator: u32,
    /// Present when `n = m`.
    pub bijective: Option<bool>,
    pub worst_linear_structure_count: usize,
    pub combinations: Vec<CombinationReport>,
}

pub fn sbox_report(s: &SubstitutionTable) -> SboxReport {
    let combinations: Vec<CombinationReport> = (1..1usize << s.m)
        .into_par_iter()
        .map(|mask| CombinationReport {
            mask,
            report: classify(&s.combination(mask)),
        })
        .collect();
    let reports = || combinations.iter().map(|c| &c.report);
    SboxReport {
        n: s.n,
        m: s.m,
        min_nonlinearity: reports().map(|r| r.nonlinearity).min().expect("m >= 1"),
        max_absolute_indicator: reports()
            .map(|r| r.absolute_indicator)
            .max()
            .expect("m >= 1"),
        bijective: (s.n == s.m).then(|| s.is_bijective().expect("n = m")),
        worst_linear_structure_count: reports()
            .map(|r| r.linear_structures.len())
            .max()
            .expect("m >= 1"),
        combinations,
    }
}
