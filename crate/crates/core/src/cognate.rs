//! Cognate ensembles: the functions at single proximity to a nominal function,
//! and their curtailment into a working ensemble.
//!
//! Proximity between two tables is the exact fraction `d_H(f, g) / 2^n`. The
//! initial ensemble of a nominal `f` holds, for every input `x` in ascending
//! order, `f` with entry `x` flipped followed by the complement of that
//! table: `2^{n+1}` members, each at proximity `1/2^n` to `f` or to `f ⊕ 1`.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::bf::text::{parse_token, to_token};
use crate::bf::{classify, PropertyReport, TruthTable};
use crate::error::{Error, Result};
use crate::search::{ConstraintCheck, ConstraintSystem, Violation};

/// Exact proximity `distance / 2^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CognateProximity {
    distance: u64,
    n: usize,
}

impl CognateProximity {
    pub fn distance(&self) -> u64 {
        self.distance
    }

    pub fn denominator(&self) -> u64 {
        1 << self.n
    }

    pub fn value(&self) -> f64 {
        self.distance as f64 / self.denominator() as f64
    }

    /// The single-proximity step `1/2^n`.
    pub fn is_unit(&self) -> bool {
        self.distance == 1
    }
}

impl fmt::Display for CognateProximity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.distance, self.denominator())
    }
}

pub fn cognate_proximity(f: &TruthTable, g: &TruthTable) -> Result<CognateProximity> {
    Ok(CognateProximity {
        distance: f.hamming_distance(g)?,
        n: f.n(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Initial,
    Working,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Member {
    pub table: TruthTable,
    /// Entry of the nominal that was flipped.
    pub flipped_index: usize,
    /// Whether the flipped table was complemented afterwards.
    pub complemented: bool,
    /// Attached when the member has been through [`filter_ensemble`].
    pub report: Option<PropertyReport>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CognateEnsemble {
    nominal: TruthTable,
    members: Vec<Member>,
    stage: Stage,
}

impl CognateEnsemble {
    pub fn nominal(&self) -> &TruthTable {
        &self.nominal
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn tables(&self) -> impl Iterator<Item = &TruthTable> {
        self.members.iter().map(|m| &m.table)
    }
}

pub fn initial_ensemble(nominal: &TruthTable) -> CognateEnsemble {
    let members = (0..nominal.len())
        .flat_map(|x| {
            let near = nominal.flipped(x);
            let far = !&near;
            [
                Member {
                    table: near,
                    flipped_index: x,
                    complemented: false,
                    report: None,
                },
                Member {
                    table: far,
                    flipped_index: x,
                    complemented: true,
                    report: None,
                },
            ]
        })
        .collect();
    CognateEnsemble {
        nominal: nominal.clone(),
        members,
        stage: Stage::Initial,
    }
}

/// A member struck out of the ensemble.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rejection {
    /// Position in the ensemble that was filtered.
    pub index: usize,
    pub violations: Vec<Violation>,
}

impl Rejection {
    /// The first failed constraint.
    pub fn binding(&self) -> &Violation {
        &self.violations[0]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterOutcome {
    pub working: CognateEnsemble,
    pub rejected: Vec<Rejection>,
    /// The nominal function checked against the same constraints.
    pub nominal_report: PropertyReport,
    pub nominal_check: ConstraintCheck,
    source: CognateEnsemble,
    passed: Vec<bool>,
}

/// Keeps the members whose report satisfies `cs`, in their original order.
///
/// Members are classified in parallel; reports are attached to the kept members.
pub fn filter_ensemble(e: &CognateEnsemble, cs: &ConstraintSystem) -> Result<FilterOutcome> {
    if e.nominal.n() != cs.n {
        return Err(Error::DimensionMismatch {
            expected: cs.n,
            found: e.nominal.n(),
        });
    }
    let reports: Vec<PropertyReport> = e
        .members
        .par_iter()
        .map(|m| m.report.clone().unwrap_or_else(|| classify(&m.table)))
        .collect();

    let mut members = Vec::new();
    let mut rejected = Vec::new();
    let mut passed = Vec::with_capacity(reports.len());
    for (index, (m, report)) in e.members.iter().zip(reports).enumerate() {
        let check = cs.check_report(&report)?;
        passed.push(check.pass());
        if check.pass() {
            members.push(Member {
                report: Some(report),
                ..m.clone()
            });
        } else {
            rejected.push(Rejection {
                index,
                violations: check.violations,
            });
        }
    }
    let nominal_report = classify(&e.nominal);
    let nominal_check = cs.check_report(&nominal_report)?;
    Ok(FilterOutcome {
        working: CognateEnsemble {
            nominal: e.nominal.clone(),
            members,
            stage: Stage::Working,
        },
        rejected,
        nominal_report,
        nominal_check,
        source: e.clone(),
        passed,
    })
}

impl FilterOutcome {
    pub fn kept(&self) -> usize {
        self.working.len()
    }

    pub fn total(&self) -> usize {
        self.source.len()
    }

    /// Ensemble export text. Rejected members are listed too when `include_rejected`.
    pub fn export(&self, include_rejected: bool) -> String {
        let nominal = &self.source.nominal;
        let mut out = format!("# nominal: {}\n", to_token(nominal));
        out.push_str(&format!("# nominal pass={}\n", self.nominal_check.pass()));
        out.push_str(&format!("# kept {} of {}\n", self.kept(), self.total()));
        for (m, &pass) in self.source.members.iter().zip(&self.passed) {
            if !pass && !include_rejected {
                continue;
            }
            let c = cognate_proximity(nominal, &m.table).expect("same n");
            out.push_str(&format!("{}  # C_gn={c} pass={pass}\n", to_token(&m.table)));
        }
        out
    }
}

/// One line of an ensemble file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnsembleEntry {
    pub table: TruthTable,
    /// `None` when the line carries no `pass=` annotation.
    pub pass: Option<bool>,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnsembleFile {
    pub nominal: Option<TruthTable>,
    pub entries: Vec<EnsembleEntry>,
}

impl EnsembleFile {
    /// Entries not marked `pass=false`.
    pub fn accepted(&self) -> impl Iterator<Item = &EnsembleEntry> {
        self.entries.iter().filter(|e| e.pass != Some(false))
    }
}

/// Reads the ensemble export format; also accepts a bare list of tokens.
pub fn parse_ensemble(text: &str) -> Result<EnsembleFile> {
    let mut nominal = None;
    let mut entries = Vec::new();
    let mut n = None;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let trimmed = line.trim_start();
        let column = line.len() - trimmed.len() + 1;
        if let Some(rest) = trimmed.strip_prefix("# nominal:") {
            let token = rest.trim();
            let col = column + "# nominal:".len() + (rest.len() - rest.trim_start().len());
            nominal = Some(parse_token(token, line_no, col)?);
            continue;
        }
        let (body, comment) = match trimmed.split_once('#') {
            Some((b, c)) => (b.trim_end(), Some(c)),
            None => (trimmed.trim_end(), None),
        };
        if body.is_empty() {
            continue;
        }
        let table = parse_token(body, line_no, column)?;
        if let Some(expected) = n {
            if table.n() != expected {
                return Err(Error::parse(
                    line_no,
                    column,
                    format!(
                        "table has {} variables, earlier entries have {expected}",
                        table.n()
                    ),
                ));
            }
        }
        n = Some(table.n());
        let pass = comment.and_then(|c| {
            c.split_whitespace().find_map(|kv| match kv {
                "pass=true" => Some(true),
                "pass=false" => Some(false),
                _ => None,
            })
        });
        entries.push(EnsembleEntry {
            table,
            pass,
            line: line_no,
        });
    }
    Ok(EnsembleFile { nominal, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn tt(s: &str) -> TruthTable {
        let bits: Vec<u8> = s.bytes().map(|b| b - b'0').collect();
        TruthTable::from_bits(&bits).unwrap()
    }

    #[test]
    fn proximity_examples() {
        let f = tt("0110");
        assert_eq!(cognate_proximity(&f, &f).unwrap().distance(), 0);
        let c = cognate_proximity(&f, &!&f).unwrap();
        assert_eq!((c.distance(), c.denominator()), (4, 4));
        assert_eq!(c.value(), 1.0);
        let one = cognate_proximity(&f, &f.flipped(2)).unwrap();
        assert!(one.is_unit());
        assert_eq!(one.to_string(), "1/4");
        assert!(cognate_proximity(&f, &TruthTable::zero(3).unwrap()).is_err());
    }

    #[test]
    fn initial_ensemble_shape() {
        let f = tt("0001");
        let e = initial_ensemble(&f);
        assert_eq!(e.len(), 8);
        assert_eq!(e.stage(), Stage::Initial);
        assert_eq!(e.members()[0].table, tt("1001"));
        assert_eq!(e.members()[1].table, tt("0110"));
        assert!(e.tables().all(|t| t != &f));
        let distinct: HashSet<_> = e.tables().collect();
        assert_eq!(distinct.len(), 8);
    }

    #[test]
    fn single_variable_ensemble_has_coinciding_members() {
        // With n = 1 a flipped table and a complemented flip coincide.
        let e = initial_ensemble(&tt("01"));
        assert_eq!(e.len(), 4);
        let distinct: HashSet<_> = e.tables().collect();
        assert_eq!(distinct.len(), 2);
    }

    #[test]
    fn filter_vacuous_and_impossible() {
        let f = TruthTable::inner_product(4).unwrap();
        let e = initial_ensemble(&f);
        let all = filter_ensemble(&e, &ConstraintSystem::new(4).unwrap()).unwrap();
        assert_eq!(all.kept(), 32);
        assert!(all.working.members().iter().all(|m| m.report.is_some()));

        let none =
            filter_ensemble(&e, &ConstraintSystem::new(4).unwrap().min_nonlinearity(8)).unwrap();
        assert_eq!(none.kept(), 0);
        assert_eq!(none.rejected.len(), 32);
        assert_eq!(none.rejected[0].binding().constraint, "min_nonlinearity");
        assert!(!none.nominal_check.pass());
    }

    #[test]
    fn filter_is_idempotent_and_ordered() {
        let f = tt("0110100110010110");
        let e = initial_ensemble(&f);
        let cs = ConstraintSystem::new(4).unwrap().balanced();
        let once = filter_ensemble(&e, &cs).unwrap();
        let twice = filter_ensemble(&once.working, &cs).unwrap();
        assert_eq!(once.working.members(), twice.working.members());
        let idx: Vec<_> = once
            .working
            .members()
            .iter()
            .map(|m| 2 * m.flipped_index + usize::from(m.complemented))
            .collect();
        assert!(idx.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn filter_dimension_mismatch() {
        let e = initial_ensemble(&tt("0001"));
        assert!(filter_ensemble(&e, &ConstraintSystem::new(3).unwrap()).is_err());
    }

    #[test]
    fn export_parses_back() {
        let f = tt("0001011001111000");
        let cs = ConstraintSystem::new(4).unwrap().max_absolute_indicator(8);
        let out = filter_ensemble(&initial_ensemble(&f), &cs).unwrap();
        assert!(out.kept() > 0 && out.kept() < 32, "kept {}", out.kept());
        let text = out.export(true);
        assert!(text.starts_with("# nominal: 0001011001111000\n"));
        let parsed = parse_ensemble(&text).unwrap();
        assert_eq!(parsed.nominal.as_ref(), Some(&f));
        assert_eq!(parsed.entries.len(), 32);
        assert_eq!(parsed.accepted().count(), out.kept());
        let kept: Vec<_> = parsed.accepted().map(|e| e.table.clone()).collect();
        assert_eq!(kept, out.working.tables().cloned().collect::<Vec<_>>());
        assert!(text.contains("# C_gn=1/16 pass="));
        assert!(text.contains("# C_gn=15/16 pass="));
    }

    #[test]
    fn parse_ensemble_errors() {
        assert!(parse_ensemble("0001\n01\n").is_err());
        match parse_ensemble("0001\n00x1\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
    }
}
