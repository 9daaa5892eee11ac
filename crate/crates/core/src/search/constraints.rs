//! Restriction systems on nonlinearity, autocorrelation and the secondary floors.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bf::{classify, covering_radius_bound, PropertyReport, TruthTable, MAX_VARIABLES};
use crate::error::{Error, Result};

/// Bounds a function must meet. `None` (or `false`) means the constraint is inactive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintSystem {
    pub n: usize,
    pub min_nonlinearity: Option<u32>,
    pub max_absolute_indicator: Option<u32>,
    pub max_sum_of_squares: Option<u64>,
    pub require_balanced: bool,
    pub min_degree: Option<u32>,
    pub min_ci_order: Option<u32>,
    pub min_algebraic_immunity: Option<u32>,
}

const KEYS: [&str; 8] = [
    "n",
    "min_nonlinearity",
    "max_absolute_indicator",
    "max_sum_of_squares",
    "require_balanced",
    "min_degree",
    "min_ci_order",
    "min_algebraic_immunity",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    AtLeast,
    AtMost,
    Exactly,
}

/// One failed constraint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub constraint: &'static str,
    pub bound: Bound,
    pub required: u64,
    /// `None` when the property could not be computed (immunity above its size cap).
    pub actual: Option<u64>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.bound {
            Bound::AtLeast => ">=",
            Bound::AtMost => "<=",
            Bound::Exactly => "==",
        };
        match self.actual {
            Some(a) => write!(
                f,
                "{}: required {op} {}, actual {a}",
                self.constraint, self.required
            ),
            None => write!(
                f,
                "{}: required {op} {}, actual unavailable",
                self.constraint, self.required
            ),
        }
    }
}

/// Outcome of checking one function against a [`ConstraintSystem`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstraintCheck {
    pub violations: Vec<Violation>,
}

impl ConstraintCheck {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

impl ConstraintSystem {
    /// A system over `n` variables with every constraint inactive.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_VARIABLES {
            return Err(Error::VariableCount {
                n,
                max: MAX_VARIABLES,
            });
        }
        Ok(ConstraintSystem {
            n,
            min_nonlinearity: None,
            max_absolute_indicator: None,
            max_sum_of_squares: None,
            require_balanced: false,
            min_degree: None,
            min_ci_order: None,
            min_algebraic_immunity: None,
        })
    }

    pub fn balanced(mut self) -> Self {
        self.require_balanced = true;
        self
    }

    pub fn min_nonlinearity(mut self, v: u32) -> Self {
        self.min_nonlinearity = Some(v);
        self
    }

    pub fn max_absolute_indicator(mut self, v: u32) -> Self {
        self.max_absolute_indicator = Some(v);
        self
    }

    pub fn max_sum_of_squares(mut self, v: u64) -> Self {
        self.max_sum_of_squares = Some(v);
        self
    }

    pub fn min_degree(mut self, v: u32) -> Self {
        self.min_degree = Some(v);
        self
    }

    pub fn min_ci_order(mut self, v: u32) -> Self {
        self.min_ci_order = Some(v);
        self
    }

    pub fn min_algebraic_immunity(mut self, v: u32) -> Self {
        self.min_algebraic_immunity = Some(v);
        self
    }

    /// No constraint active.
    pub fn is_vacuous(&self) -> bool {
        *self == ConstraintSystem::new(self.n).expect("n already validated")
    }

    /// Hard range checks on the bound values.
    pub fn validate(&self) -> Result<()> {
        let full = 1u64 << self.n;
        if let Some(v) = self.max_absolute_indicator {
            if u64::from(v) > full {
                return Err(Error::Constraint(format!(
                    "max_absolute_indicator = {v} exceeds 2^n = {full}"
                )));
            }
        }
        Ok(())
    }

    /// Bounds no function of `n` variables can meet; each entry explains one.
    pub fn infeasibilities(&self) -> Vec<String> {
        let n = self.n as u32;
        let mut out = Vec::new();
        if let Some(v) = self.min_nonlinearity {
            let bound = covering_radius_bound(self.n);
            if v > bound {
                out.push(format!(
                    "min_nonlinearity = {v} exceeds the covering-radius bound {bound} for n = {n}"
                ));
            }
        }
        if let Some(v) = self.min_degree {
            let cap = if self.require_balanced && n >= 2 {
                n - 1
            } else {
                n
            };
            if v > cap {
                out.push(format!(
                    "min_degree = {v} exceeds the reachable degree {cap}"
                ));
            }
        }
        if let Some(v) = self.min_ci_order {
            if v > n {
                out.push(format!("min_ci_order = {v} exceeds n = {n}"));
            }
        }
        if let Some(v) = self.min_algebraic_immunity {
            let cap = n.div_ceil(2);
            if v > cap {
                out.push(format!(
                    "min_algebraic_immunity = {v} exceeds ceil(n/2) = {cap}"
                ));
            }
        }
        out
    }

    pub fn is_feasible(&self) -> bool {
        self.infeasibilities().is_empty()
    }

    /// Checks an already computed report.
    pub fn check_report(&self, r: &PropertyReport) -> Result<ConstraintCheck> {
        if r.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: r.n,
            });
        }
        let mut violations = Vec::new();
        let mut at_least = |constraint, required: Option<u32>, actual: Option<u32>| {
            if let Some(req) = required {
                if actual.is_none_or(|a| a < req) {
                    violations.push(Violation {
                        constraint,
                        bound: Bound::AtLeast,
                        required: u64::from(req),
                        actual: actual.map(u64::from),
                    });
                }
            }
        };
        at_least(
            "min_nonlinearity",
            self.min_nonlinearity,
            Some(r.nonlinearity),
        );
        at_least("min_degree", self.min_degree, Some(r.algebraic_degree));
        at_least("min_ci_order", self.min_ci_order, Some(r.ci_order));
        at_least(
            "min_algebraic_immunity",
            self.min_algebraic_immunity,
            r.algebraic_immunity,
        );
        if let Some(req) = self.max_absolute_indicator {
            if r.absolute_indicator > req {
                violations.push(Violation {
                    constraint: "max_absolute_indicator",
                    bound: Bound::AtMost,
                    required: u64::from(req),
                    actual: Some(u64::from(r.absolute_indicator)),
                });
            }
        }
        if let Some(req) = self.max_sum_of_squares {
            if r.sum_of_squares > req {
                violations.push(Violation {
                    constraint: "max_sum_of_squares",
                    bound: Bound::AtMost,
                    required: req,
                    actual: Some(r.sum_of_squares),
                });
            }
        }
        if self.require_balanced && !r.balanced {
            violations.push(Violation {
                constraint: "require_balanced",
                bound: Bound::Exactly,
                required: 1u64 << (self.n - 1),
                actual: Some(r.weight),
            });
        }
        Ok(ConstraintCheck { violations })
    }

    /// Parses the `key = value` constraint file. When the file omits `n`,
    /// `default_n` supplies it; when both are present they must agree.
    pub fn parse(text: &str, default_n: Option<usize>) -> Result<Self> {
        let mut values: [Option<(usize, usize, &str)>; 8] = [None; 8];
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let col_of = |s: &str| s.as_ptr() as usize - raw.as_ptr() as usize + 1;
            let Some((key, value)) = line.split_once('=') else {
                let t = line.trim_start();
                return Err(Error::parse(line_no, col_of(t), "expected `key = value`"));
            };
            let key_t = key.trim();
            let value_t = value.trim();
            let Some(slot) = KEYS.iter().position(|k| *k == key_t) else {
                return Err(Error::parse(
                    line_no,
                    col_of(key.trim_start()),
                    format!("unknown key `{key_t}`"),
                ));
            };
            if values[slot].is_some() {
                return Err(Error::parse(
                    line_no,
                    col_of(key.trim_start()),
                    format!("duplicate key `{key_t}`"),
                ));
            }
            if value_t.is_empty() {
                return Err(Error::parse(
                    line_no,
                    col_of(value),
                    format!("missing value for `{key_t}`"),
                ));
            }
            values[slot] = Some((line_no, col_of(value.trim_start()), value_t));
        }

        let int = |slot: usize| -> Result<Option<u64>> {
            values[slot]
                .map(|(line, col, v)| {
                    v.parse::<u64>().map_err(|_| {
                        Error::parse(
                            line,
                            col,
                            format!("`{}` expects a non-negative integer, got `{v}`", KEYS[slot]),
                        )
                    })
                })
                .transpose()
        };
        let small = |slot: usize| -> Result<Option<u32>> {
            match int(slot)? {
                None => Ok(None),
                Some(v) => u32::try_from(v).map(Some).map_err(|_| {
                    let (line, col, _) = values[slot].expect("present");
                    Error::parse(line, col, format!("`{}` value out of range", KEYS[slot]))
                }),
            }
        };

        let n = match (int(0)?, default_n) {
            (Some(file_n), Some(ctx)) if file_n as usize != ctx => {
                return Err(Error::DimensionMismatch {
                    expected: ctx,
                    found: file_n as usize,
                })
            }
            (Some(file_n), _) => file_n as usize,
            (None, Some(ctx)) => ctx,
            (None, None) => return Err(Error::parse(1, 1, "constraint file does not set `n`")),
        };
        let mut cs = ConstraintSystem::new(n)?;
        cs.min_nonlinearity = small(1)?;
        cs.max_absolute_indicator = small(2)?;
        cs.max_sum_of_squares = int(3)?;
        cs.require_balanced = match values[4] {
            None => false,
            Some((_, _, "true")) => true,
            Some((_, _, "false")) => false,
            Some((line, col, v)) => {
                return Err(Error::parse(
                    line,
                    col,
                    format!("`require_balanced` expects true or false, got `{v}`"),
                ))
            }
        };
        cs.min_degree = small(5)?;
        cs.min_ci_order = small(6)?;
        cs.min_algebraic_immunity = small(7)?;
        cs.validate()?;
        Ok(cs)
    }

    /// Constraint-file text; inactive constraints are omitted.
    pub fn to_text(&self) -> String {
        let mut s = format!("n = {}\n", self.n);
        let mut put = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                s.push_str(&format!("{k} = {v}\n"));
            }
        };
        put(
            "min_nonlinearity",
            self.min_nonlinearity.map(|v| v.to_string()),
        );
        put(
            "max_absolute_indicator",
            self.max_absolute_indicator.map(|v| v.to_string()),
        );
        put(
            "max_sum_of_squares",
            self.max_sum_of_squares.map(|v| v.to_string()),
        );
        put(
            "require_balanced",
            self.require_balanced.then(|| "true".to_string()),
        );
        put("min_degree", self.min_degree.map(|v| v.to_string()));
        put("min_ci_order", self.min_ci_order.map(|v| v.to_string()));
        put(
            "min_algebraic_immunity",
            self.min_algebraic_immunity.map(|v| v.to_string()),
        );
        s
    }
}

/// Checks `f` against every active constraint of `cs`, through a full [`classify`].
pub fn evaluate_constraints(f: &TruthTable, cs: &ConstraintSystem) -> Result<ConstraintCheck> {
    if f.n() != cs.n {
        return Err(Error::DimensionMismatch {
            expected: cs.n,
            found: f.n(),
        });
    }
    cs.check_report(&classify(f))
}
