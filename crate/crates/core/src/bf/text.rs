//! Truth-table text format.
//!
//! A file holds `#` comments (whole-line or trailing) and a single token: either `2^n`
//! characters `0`/`1` (character `j` is `f(j)`), or `hex:` followed by
//! `2^n / 4` hex digits where digit `k` packs `f(4k)..f(4k+3)` with `f(4k)`
//! as the most significant bit of the nibble.

use crate::bf::truth_table::{variables_for_len, TruthTable};
use crate::error::{Error, Result};

const HEX_PREFIX: &str = "hex:";

/// Parses a complete truth-table file.
pub fn parse_truth_table(text: &str) -> Result<TruthTable> {
    let mut found: Option<(usize, TruthTable)> = None;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.split('#').next().unwrap_or("").trim();
        if trimmed.is_empty() {
            continue;
        }
        let column = line.len() - line.trim_start().len() + 1;
        if let Some((first, _)) = found {
            return Err(Error::parse(
                line_no,
                column,
                format!("unexpected second token (table already given on line {first})"),
            ));
        }
        found = Some((line_no, parse_token(trimmed, line_no, column)?));
    }
    found
        .map(|(_, t)| t)
        .ok_or_else(|| Error::parse(1, 1, "no truth-table token found"))
}

/// Parses one token; `line`/`column` locate it for diagnostics.
pub fn parse_token(token: &str, line: usize, column: usize) -> Result<TruthTable> {
    if let Some(hex) = token.strip_prefix(HEX_PREFIX) {
        let column = column + HEX_PREFIX.len();
        let mut bits = Vec::with_capacity(hex.len() * 4);
        for (i, c) in hex.chars().enumerate() {
            let nibble = c.to_digit(16).ok_or_else(|| {
                Error::parse(line, column + i, format!("invalid hex digit {c:?}"))
            })?;
            bits.extend((0..4).rev().map(|b| ((nibble >> b) & 1) as u8));
        }
        let len = bits.len();
        if len < 4 {
            return Err(Error::parse(
                line,
                column,
                "hex form needs at least one digit (n >= 2)",
            ));
        }
        variables_for_len(len).map_err(|e| Error::parse(line, column, e.to_string()))?;
        return TruthTable::from_bits(&bits);
    }
    let mut bits = Vec::with_capacity(token.len());
    for (i, c) in token.chars().enumerate() {
        match c {
            '0' => bits.push(0),
            '1' => bits.push(1),
            _ => {
                return Err(Error::parse(
                    line,
                    column + i,
                    format!("expected '0' or '1', found {c:?}"),
                ))
            }
        }
    }
    variables_for_len(bits.len()).map_err(|e| Error::parse(line, column, e.to_string()))?;
    TruthTable::from_bits(&bits)
}

/// `hex:` form; requires `n >= 2`.
pub fn to_hex_token(f: &TruthTable) -> Result<String> {
    if f.n() < 2 {
        return Err(Error::InvalidValue("hex form needs n >= 2".into()));
    }
    let mut s = String::with_capacity(HEX_PREFIX.len() + f.len() / 4);
    s.push_str(HEX_PREFIX);
    for k in 0..f.len() / 4 {
        let nibble = (0..4).fold(0u32, |acc, i| (acc << 1) | u32::from(f.get(4 * k + i)));
        s.push(char::from_digit(nibble, 16).expect("nibble < 16"));
    }
    Ok(s)
}

/// Canonical token written by the tools: binary up to six variables, hex above.
pub fn to_token(f: &TruthTable) -> String {
    if f.n() <= 6 {
        f.to_bit_string()
    } else {
        to_hex_token(f).expect("n > 6")
    }
}

impl std::str::FromStr for TruthTable {
    type Err = Error;

    /// Same grammar as a truth-table file.
    fn from_str(s: &str) -> Result<Self> {
        parse_truth_table(s)
    }
}
