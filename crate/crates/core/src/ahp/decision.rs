//! Two-level hierarchies: criteria weights, per-criterion scores, election.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::ahp::matrix::ComparisonMatrix;
use crate::ahp::priority::{priority_vector, CONSISTENCY_THRESHOLD, MAX_RATED_DIMENSION};
use crate::bf::PropertyReport;
use crate::error::{Error, Result};
use crate::sbox::SboxReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Larger is better.
    Benefit,
    /// Smaller is better.
    Cost,
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "benefit" => Ok(Direction::Benefit),
            "cost" => Ok(Direction::Cost),
            other => Err(Error::InvalidValue(format!(
                "direction must be `benefit` or `cost`, got `{other}`"
            ))),
        }
    }
}

/// Normalizes raw measurements into weights summing to one.
///
/// An all-zero benefit vector scores uniformly; a cost vector containing a
/// zero is shifted by one before inversion.
pub fn score_measured(values: &[f64], direction: Direction) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(Error::Empty("measured values"));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(Error::InvalidValue(format!(
            "measured value {v} is not a finite nonnegative number"
        )));
    }
    let uniform = || vec![1.0 / values.len() as f64; values.len()];
    let raw: Vec<f64> = match direction {
        Direction::Benefit => {
            if values.iter().all(|&v| v == 0.0) {
                return Ok(uniform());
            }
            values.to_vec()
        }
        Direction::Cost => {
            let shift = if values.contains(&0.0) { 1.0 } else { 0.0 };
            values.iter().map(|v| 1.0 / (v + shift)).collect()
        }
    };
    let total: f64 = raw.iter().sum();
    Ok(raw.iter().map(|v| v / total).collect())
}

#[derive(Clone, Debug, PartialEq)]
pub enum Scoring {
    /// Pairwise judgments over the alternatives.
    Judgment(ComparisonMatrix),
    Measured {
        direction: Direction,
        values: Vec<f64>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Criterion {
    pub name: String,
    pub scoring: Scoring,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecisionProblem {
    pub criteria_matrix: ComparisonMatrix,
    pub criteria: Vec<Criterion>,
    pub alternatives: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriterionResult {
    pub name: String,
    /// `judgment` or `measured`.
    pub kind: &'static str,
    pub weight: f64,
    pub scores: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub consistency_ratio: Option<f64>,
    pub inconsistent: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankedAlternative {
    pub label: String,
    /// Position in the input alternative list.
    pub index: usize,
    pub score: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Ranking {
    pub criteria_weights: Vec<f64>,
    pub criteria_lambda_max: f64,
    pub criteria_consistency_ratio: f64,
    pub criteria_inconsistent: bool,
    pub criteria: Vec<CriterionResult>,
    /// Global scores in input order.
    pub scores: Vec<f64>,
    /// Descending by score, ties in input order.
    pub ranking: Vec<RankedAlternative>,
    pub elected: String,
    pub warnings: Vec<String>,
}

impl Ranking {
    pub fn elected_index(&self) -> usize {
        self.ranking[0].index
    }
}

fn rated_ratio(m: &ComparisonMatrix, what: &str) -> Result<(Vec<f64>, f64, f64)> {
    if m.k() > MAX_RATED_DIMENSION {
        return Err(Error::InvalidValue(format!(
            "{what}: consistency ratio is undefined for k = {} > {MAX_RATED_DIMENSION}",
            m.k()
        )));
    }
    let pv = priority_vector(m)?;
    let cr = pv
        .consistency_ratio
        .ok_or(Error::UnsupportedDimension { k: m.k() })?;
    Ok((pv.weights, pv.lambda_max, cr))
}

pub fn synthesize(p: &DecisionProblem) -> Result<Ranking> {
    let alts = p.alternatives.len();
    if alts == 0 {
        return Err(Error::Empty("alternatives"));
    }
    if p.criteria.is_empty() {
        return Err(Error::Empty("criteria"));
    }
    if p.criteria_matrix.k() != p.criteria.len() {
        return Err(Error::DimensionMismatch {
            expected: p.criteria.len(),
            found: p.criteria_matrix.k(),
        });
    }
    let (criteria_weights, criteria_lambda_max, criteria_cr) =
        rated_ratio(&p.criteria_matrix, "criteria matrix")?;
    let mut warnings = Vec::new();
    let criteria_inconsistent = criteria_cr > CONSISTENCY_THRESHOLD;
    if criteria_inconsistent {
        warnings.push(format!(
            "criteria matrix is inconsistent (CR = {criteria_cr:.4} > {CONSISTENCY_THRESHOLD})"
        ));
    }

    let mut criteria = Vec::with_capacity(p.criteria.len());
    for (c, &weight) in p.criteria.iter().zip(&criteria_weights) {
        let result = match &c.scoring {
            Scoring::Judgment(m) => {
                if m.k() != alts {
                    return Err(Error::DimensionMismatch {
                        expected: alts,
                        found: m.k(),
                    });
                }
                let (scores, _, cr) = rated_ratio(m, &c.name)?;
                let inconsistent = cr > CONSISTENCY_THRESHOLD;
                if inconsistent {
                    warnings.push(format!(
                        "criterion `{}` is inconsistent (CR = {cr:.4} > {CONSISTENCY_THRESHOLD})",
                        c.name
                    ));
                }
                CriterionResult {
                    name: c.name.clone(),
                    kind: "judgment",
                    weight,
                    scores,
                    consistency_ratio: Some(cr),
                    inconsistent,
                }
            }
            Scoring::Measured { direction, values } => {
                if values.len() != alts {
                    return Err(Error::DimensionMismatch {
                        expected: alts,
                        found: values.len(),
                    });
                }
                CriterionResult {
                    name: c.name.clone(),
                    kind: "measured",
                    weight,
                    scores: score_measured(values, *direction)?,
                    consistency_ratio: None,
                    inconsistent: false,
                }
            }
        };
        criteria.push(result);
    }

    let scores: Vec<f64> = (0..alts)
        .map(|j| criteria.iter().map(|c| c.weight * c.scores[j]).sum())
        .collect();
    let mut order: Vec<usize> = (0..alts).collect();
    // stable: equal scores keep input order
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let ranking: Vec<RankedAlternative> = order
        .into_iter()
        .map(|i| RankedAlternative {
            label: p.alternatives[i].clone(),
            index: i,
            score: scores[i],
        })
        .collect();
    Ok(Ranking {
        criteria_weights,
        criteria_lambda_max,
        criteria_consistency_ratio: criteria_cr,
        criteria_inconsistent,
        criteria,
        scores,
        elected: ranking[0].label.clone(),
        ranking,
        warnings,
    })
}

/// Anything that exposes named numeric metrics to measured criteria.
pub trait MetricSource {
    fn metric(&self, key: &str) -> Result<f64>;
}

/// Keys accepted by [`PropertyReport`]'s [`MetricSource`] implementation.
pub const PROPERTY_METRICS: [&str; 12] = [
    "n",
    "weight",
    "balanced",
    "nonlinearity",
    "algebraic_degree",
    "absolute_indicator",
    "sum_of_squares",
    "ci_order",
    "resiliency_order",
    "algebraic_immunity",
    "is_bent",
    "linear_structures",
];

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

impl MetricSource for PropertyReport {
    /// Booleans map to 0/1; `linear_structures` counts them.
    fn metric(&self, key: &str) -> Result<f64> {
        let unavailable = |reason: &str| Error::MetricUnavailable {
            key: key.to_string(),
            reason: reason.to_string(),
        };
        Ok(match key {
            "n" => self.n as f64,
            "weight" => self.weight as f64,
            "balanced" => flag(self.balanced),
            "nonlinearity" => self.nonlinearity as f64,
            "algebraic_degree" => self.algebraic_degree as f64,
            "absolute_indicator" => self.absolute_indicator as f64,
            "sum_of_squares" => self.sum_of_squares as f64,
            "ci_order" => self.ci_order as f64,
            "resiliency_order" => {
                self.resiliency_order
                    .ok_or_else(|| unavailable("function is not balanced"))? as f64
            }
            "algebraic_immunity" => {
                self.algebraic_immunity
                    .ok_or_else(|| unavailable("too many variables"))? as f64
            }
            "is_bent" => flag(self.is_bent),
            "linear_structures" => self.linear_structures.len() as f64,
            other => return Err(Error::UnknownMetric(other.to_string())),
        })
    }
}

impl MetricSource for SboxReport {
    /// Table-level keys, plus every function-level key evaluated at its
    /// worst case over the nonzero component combinations.
    fn metric(&self, key: &str) -> Result<f64> {
        match key {
            "m" => return Ok(self.m as f64),
            "min_nonlinearity" => return Ok(self.min_nonlinearity as f64),
            "max_absolute_indicator" => return Ok(self.max_absolute_indicator as f64),
            "worst_linear_structure_count" => return Ok(self.worst_linear_structure_count as f64),
            "bijective" => {
                return self
                    .bijective
                    .map(flag)
                    .ok_or_else(|| Error::MetricUnavailable {
                        key: key.to_string(),
                        reason: "table is not square".to_string(),
                    })
            }
            _ => {}
        }
        let larger_is_worse = matches!(
            key,
            "absolute_indicator" | "sum_of_squares" | "linear_structures"
        );
        let mut worst: Option<f64> = None;
        for c in &self.combinations {
            let v = c.report.metric(key)?;
            worst = Some(match worst {
                None => v,
                Some(w) if larger_is_worse => w.max(v),
                Some(w) => w.min(v),
            });
        }
        worst.ok_or_else(|| Error::MetricUnavailable {
            key: key.to_string(),
            reason: "table has no component combinations".to_string(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CriteriaSource {
    Uniform,
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CriterionSource {
    Judgment(PathBuf),
    Measured {
        direction: Direction,
        metric: String,
    },
}

/// A parsed decision-problem file; paths are as written (relative paths are
/// resolved by [`DecisionSpec::resolve`] against a base directory).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionSpec {
    pub criteria: CriteriaSource,
    pub entries: Vec<(String, CriterionSource)>,
}

impl DecisionSpec {
    /// Lines are `criteria = <matrix path>|uniform`, then one criterion per
    /// line in matrix order: `<name> = <matrix path>` or
    /// `<name> = measured benefit|cost <metric>`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut criteria = None;
        let mut entries: Vec<(String, CriterionSource)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((name, value)) = line.split_once('=') else {
                return Err(Error::parse(line_no, 1, "expected `<name> = <value>`"));
            };
            let (name, value) = (name.trim(), value.trim());
            let value_col = raw.find(value).map_or(1, |c| c + 1);
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(Error::parse(
                    line_no,
                    1,
                    format!("invalid criterion name `{name}`"),
                ));
            }
            if value.is_empty() {
                return Err(Error::parse(line_no, value_col, "missing value"));
            }
            if name == "criteria" {
                if criteria.is_some() {
                    return Err(Error::parse(line_no, 1, "duplicate `criteria` line"));
                }
                criteria = Some(if value == "uniform" {
                    CriteriaSource::Uniform
                } else {
                    CriteriaSource::File(PathBuf::from(value))
                });
                continue;
            }
            if entries.iter().any(|(n, _)| n == name) {
                return Err(Error::parse(
                    line_no,
                    1,
                    format!("duplicate criterion `{name}`"),
                ));
            }
            let words: Vec<&str> = value.split_whitespace().collect();
            let source = if words[0] == "measured" {
                match words.as_slice() {
                    [_, dir, metric] => CriterionSource::Measured {
                        direction: dir
                            .parse()
                            .map_err(|e: Error| Error::parse(line_no, value_col, e.to_string()))?,
                        metric: metric.to_string(),
                    },
                    _ => {
                        return Err(Error::parse(
                            line_no,
                            value_col,
                            "expected `measured benefit|cost <metric>`",
                        ))
                    }
                }
            } else {
                CriterionSource::Judgment(PathBuf::from(value))
            };
            entries.push((name.to_string(), source));
        }
        if entries.is_empty() {
            return Err(Error::Empty("decision problem criteria"));
        }
        Ok(DecisionSpec {
            criteria: criteria.unwrap_or(CriteriaSource::Uniform),
            entries,
        })
    }

    /// Builds the problem: matrix files are read through `load` (relative to
    /// `base`), measured metrics are looked up on each alternative.
    pub fn resolve<M: MetricSource>(
        &self,
        base: &Path,
        alternatives: &[(String, M)],
        mut load: impl FnMut(&Path) -> Result<String>,
    ) -> Result<DecisionProblem> {
        let mut read_matrix = |p: &Path| -> Result<ComparisonMatrix> {
            let path = base.join(p);
            ComparisonMatrix::parse(&load(&path)?)
                .map_err(|e| Error::InvalidValue(format!("{}: {e}", path.display())))
        };
        let criteria_matrix = match &self.criteria {
            CriteriaSource::Uniform => ComparisonMatrix::uniform(self.entries.len())?,
            CriteriaSource::File(p) => read_matrix(p)?,
        };
        let mut criteria = Vec::with_capacity(self.entries.len());
        for (name, source) in &self.entries {
            let scoring = match source {
                CriterionSource::Judgment(p) => Scoring::Judgment(read_matrix(p)?),
                CriterionSource::Measured { direction, metric } => Scoring::Measured {
                    direction: *direction,
                    values: alternatives
                        .iter()
                        .map(|(label, m)| {
                            m.metric(metric).map_err(|e| {
                                Error::InvalidValue(format!("alternative `{label}`: {e}"))
                            })
                        })
                        .collect::<Result<_>>()?,
                },
            };
            criteria.push(Criterion {
                name: name.clone(),
                scoring,
            });
        }
        Ok(DecisionProblem {
            criteria_matrix,
            criteria,
            alternatives: alternatives.iter().map(|(l, _)| l.clone()).collect(),
        })
    }
}
