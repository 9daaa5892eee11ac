//! Constrained steepest-ascent search over truth tables.
//!
//! Each restart starts from a uniformly random table (a random permutation of
//! `2^{n-1}` ones when balancedness is required) and repeatedly applies the
//! best strictly improving move: a single-entry flip, or a swap of a 0-entry
//! with a 1-entry when the weight must stay fixed. The objective is
//! lexicographic:
//!
//! 1. when `min_ci_order` is active, minimize `Σ W_f(a)^2` over the masks of
//!    weight `1..=min_ci_order`;
//! 2. maximize nonlinearity;
//! 3. minimize the number of masks where `|W_f|` reaches its maximum;
//! 4. minimize the absolute indicator.
//!
//! Ties go to the lowest flipped index (lowest `(i, j)` for swaps). A restart
//! ends at a local optimum or when its iteration budget runs out. The Walsh
//! spectrum is maintained incrementally; every candidate that passes the cheap
//! spectral checks is re-verified with a full [`classify`] before it is
//! returned.
//!
//! Restart `r` draws from `ChaCha8Rng::seed_from_u64(stream_seed(seed, r))`,
//! see [`stream_seed`]. Restarts run in order and the first one to succeed
//! provides the result, so outputs are a pure function of `(constraints,
//! config)`.

use std::cmp::{Ordering, Reverse};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bf::{
    autocorrelation_from_walsh, classify, indicators, masks_of_weight, parity, walsh_spectrum,
    PropertyReport, TruthTable, WalshSpectrum,
};
use crate::error::{Error, Result};
use crate::search::constraints::{ConstraintSystem, Violation};

/// How many moves each iteration evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    /// Every flip (or every 0/1 swap).
    AllMoves,
    /// `k` moves drawn uniformly with replacement.
    Sampled(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub seed: u64,
    /// Iteration budget of each restart.
    pub max_iterations: usize,
    /// Number of random starts.
    pub max_restarts: usize,
    pub sampling: Sampling,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            seed: 0,
            max_iterations: 10_000,
            max_restarts: 20,
            sampling: Sampling::AllMoves,
        }
    }
}

impl SearchConfig {
    pub fn with_seed(seed: u64) -> Self {
        SearchConfig {
            seed,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 || self.max_restarts == 0 {
            return Err(Error::InvalidValue(
                "max_iterations and max_restarts must be at least 1".into(),
            ));
        }
        if self.sampling == Sampling::Sampled(0) {
            return Err(Error::InvalidValue("sampled(k) needs k >= 1".into()));
        }
        Ok(())
    }
}

/// A function meeting the constraints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub table: TruthTable,
    pub report: PropertyReport,
    /// Index of the successful restart.
    pub restart: usize,
    /// Iterations spent in that restart.
    pub iterations: usize,
    /// Iterations spent over all restarts.
    pub total_iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    /// Some bound cannot be met by any function; the search was not run.
    Infeasible(Vec<String>),
    BudgetExhausted,
}

/// Search gave up; carries the best function seen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchFailure {
    pub reason: FailureReason,
    pub best: TruthTable,
    pub report: PropertyReport,
    pub violations: Vec<Violation>,
    pub restarts: usize,
    pub total_iterations: usize,
}

impl fmt::Display for SearchFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.reason {
            FailureReason::Infeasible(why) => {
                write!(f, "infeasible constraints: {}", why.join("; "))
            }
            FailureReason::BudgetExhausted => write!(
                f,
                "search budget exhausted after {} restarts ({} iterations); best nonlinearity {}",
                self.restarts, self.total_iterations, self.report.nonlinearity
            ),
        }
    }
}

impl std::error::Error for SearchFailure {}

/// Per-restart generator seed: SplitMix64 of `seed + (r + 1) * 0x9E3779B97F4A7C15`.
pub fn stream_seed(seed: u64, restart: usize) -> u64 {
    let mut z = seed.wrapping_add((restart as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Spectrum of `f` with entry `flipped` toggled, in `O(2^n)`.
///
/// The current value `f(flipped)` is recovered from the spectrum itself by a
/// single-point inverse transform, so only the spectrum is needed.
pub fn incremental_walsh_update(w: &WalshSpectrum, flipped: usize) -> Result<WalshSpectrum> {
    let len = w.values().len();
    if flipped >= len {
        return Err(Error::InvalidValue(format!(
            "index {flipped} out of range for a spectrum of length {len}"
        )));
    }
    let point: i64 = w
        .values()
        .iter()
        .enumerate()
        .map(|(a, &v)| {
            if parity(a, flipped) {
                -i64::from(v)
            } else {
                i64::from(v)
            }
        })
        .sum();
    // point = 2^n (-1)^{f(flipped)}
    let sign = if point > 0 { 1 } else { -1 };
    let mut out = w.clone();
    apply_flip(out.values_mut(), flipped, sign);
    Ok(out)
}

/// `W(a) -= 2 s (-1)^{<a,x>}` where `s = (-1)^{f(x)}` before the flip.
fn apply_flip(w: &mut [i32], x: usize, sign: i32) {
    for (a, v) in w.iter_mut().enumerate() {
        let chi = if parity(a, x) { -1 } else { 1 };
        *v -= 2 * sign * chi;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Move {
    Flip(usize),
    Swap(usize, usize),
}

/// Objective terms that come straight from the spectrum; larger is better.
///
/// The correlation-immunity penalty is zero unless a CI order is required;
/// ranked below nonlinearity it would strand the climb on highly nonlinear
/// functions with no immunity at all.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct SpectralScore {
    ci_penalty: Reverse<u64>,
    nonlinearity: u32,
    peak_count: Reverse<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Score {
    spectral: SpectralScore,
    absolute_indicator: u32,
}

impl Ord for Score {
    fn cmp(&self, other: &Self) -> Ordering {
        self.spectral
            .cmp(&other.spectral)
            .then(other.absolute_indicator.cmp(&self.absolute_indicator))
    }
}

impl PartialOrd for Score {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Climber<'a> {
    cs: &'a ConstraintSystem,
    cfg: &'a SearchConfig,
    ci_masks: Vec<usize>,
    table: TruthTable,
    spectrum: Vec<i32>,
    scratch: Vec<i32>,
}

impl<'a> Climber<'a> {
    fn new(
        cs: &'a ConstraintSystem,
        cfg: &'a SearchConfig,
        ci_masks: Vec<usize>,
        table: TruthTable,
    ) -> Self {
        let spectrum = walsh_spectrum(&table).into_values();
        let scratch = vec![0; spectrum.len()];
        Climber {
            cs,
            cfg,
            ci_masks,
            table,
            spectrum,
            scratch,
        }
    }

    fn sign(&self, x: usize) -> i32 {
        if self.table.get(x) {
            -1
        } else {
            1
        }
    }

    /// Entries toggled by a move, with their current signs.
    fn terms(&self, mv: Move) -> ([(usize, i32); 2], usize) {
        match mv {
            Move::Flip(x) => ([(x, self.sign(x)), (0, 0)], 1),
            Move::Swap(i, j) => ([(i, self.sign(i)), (j, self.sign(j))], 2),
        }
    }

    fn shifted(&self, a: usize, terms: &[(usize, i32)]) -> i32 {
        let mut v = self.spectrum[a];
        for &(x, s) in terms {
            v -= if parity(a, x) { -2 * s } else { 2 * s };
        }
        v
    }

    fn spectral_of(
        &self,
        values: impl Iterator<Item = i32>,
        ci: impl Iterator<Item = i32>,
    ) -> SpectralScore {
        let mut max = 0u32;
        let mut count = 0u32;
        for v in values {
            let m = v.unsigned_abs();
            match m.cmp(&max) {
                Ordering::Greater => {
                    max = m;
                    count = 1;
                }
                Ordering::Equal => count += 1,
                Ordering::Less => {}
            }
        }
        let ci_penalty = ci.map(|v| u64::from(v.unsigned_abs()).pow(2)).sum();
        SpectralScore {
            nonlinearity: (1u32 << (self.cs.n - 1)) - max / 2,
            ci_penalty: Reverse(ci_penalty),
            peak_count: Reverse(count),
        }
    }

    fn current_spectral(&self) -> SpectralScore {
        self.spectral_of(
            self.spectrum.iter().copied(),
            self.ci_masks.iter().map(|&a| self.spectrum[a]),
        )
    }

    fn candidate_spectral(&self, mv: Move) -> SpectralScore {
        let (buf, k) = self.terms(mv);
        let terms = &buf[..k];
        self.spectral_of(
            (0..self.spectrum.len()).map(|a| self.shifted(a, terms)),
            self.ci_masks.iter().map(|&a| self.shifted(a, terms)),
        )
    }

    fn indicators_of(&self, values: &[i32]) -> (u32, u64) {
        let w = WalshSpectrum::from_values(values.to_vec()).expect("length is a power of two");
        indicators(&autocorrelation_from_walsh(&w))
    }

    fn candidate_absolute_indicator(&mut self, mv: Move) -> u32 {
        let (buf, k) = self.terms(mv);
        let terms = &buf[..k];
        let mut scratch = std::mem::take(&mut self.scratch);
        for (a, slot) in scratch.iter_mut().enumerate() {
            *slot = self.shifted(a, terms);
        }
        let abs = self.indicators_of(&scratch).0;
        self.scratch = scratch;
        abs
    }

    fn current_score(&self) -> Score {
        Score {
            spectral: self.current_spectral(),
            absolute_indicator: self.indicators_of(&self.spectrum).0,
        }
    }

    fn apply(&mut self, mv: Move) {
        let (buf, k) = self.terms(mv);
        for &(x, s) in &buf[..k] {
            apply_flip(&mut self.spectrum, x, s);
            self.table.flip(x);
        }
        debug_assert_eq!(self.spectrum, walsh_spectrum(&self.table).into_values());
    }

    /// Nonlinearity and indicator constraints only, from the incremental spectrum.
    fn cheap_constraints_hold(&self) -> bool {
        let nl = (1u32 << (self.cs.n - 1))
            - self
                .spectrum
                .iter()
                .map(|v| v.unsigned_abs())
                .max()
                .unwrap_or(0)
                / 2;
        if self.cs.min_nonlinearity.is_some_and(|m| nl < m) {
            return false;
        }
        if self.cs.max_absolute_indicator.is_some() || self.cs.max_sum_of_squares.is_some() {
            let (abs, sos) = self.indicators_of(&self.spectrum);
            if self.cs.max_absolute_indicator.is_some_and(|m| abs > m)
                || self.cs.max_sum_of_squares.is_some_and(|m| sos > m)
            {
                return false;
            }
        }
        if let Some(m) = self.cs.min_ci_order {
            let all_zero = self.ci_masks.iter().all(|&a| self.spectrum[a] == 0);
            if m > 0 && !all_zero {
                return false;
            }
        }
        !self.cs.require_balanced || self.table.is_balanced()
    }

    fn all_moves(&self) -> Vec<Move> {
        let len = self.table.len();
        if self.cs.require_balanced {
            let mut moves = Vec::new();
            for i in 0..len {
                for j in i + 1..len {
                    if self.table.get(i) != self.table.get(j) {
                        moves.push(Move::Swap(i, j));
                    }
                }
            }
            moves
        } else {
            (0..len).map(Move::Flip).collect()
        }
    }

    fn move_count(&self) -> usize {
        let len = self.table.len();
        if self.cs.require_balanced {
            let w = self.table.weight() as usize;
            w * (len - w)
        } else {
            len
        }
    }

    fn sampled_moves<R: Rng>(&self, k: usize, rng: &mut R) -> Vec<Move> {
        let len = self.table.len();
        let mut moves: Vec<Move> = if self.cs.require_balanced {
            let ones = self.table.support();
            let zeros = (!&self.table).support();
            (0..k)
                .map(|_| {
                    let a = ones[rng.gen_range(0..ones.len())];
                    let b = zeros[rng.gen_range(0..zeros.len())];
                    Move::Swap(a.min(b), a.max(b))
                })
                .collect()
        } else {
            (0..k).map(|_| Move::Flip(rng.gen_range(0..len))).collect()
        };
        moves.sort_unstable();
        moves.dedup();
        moves
    }

    /// Best strictly improving move among `moves`, if any.
    fn best_move(&mut self, moves: &[Move], current: Score) -> Option<Move> {
        let mut best_spectral = current.spectral;
        let mut best_abs = Some(current.absolute_indicator);
        let mut best: Option<Move> = None;
        for &mv in moves {
            let s = self.candidate_spectral(mv);
            match s.cmp(&best_spectral) {
                Ordering::Less => {}
                Ordering::Greater => {
                    best_spectral = s;
                    best_abs = None;
                    best = Some(mv);
                }
                Ordering::Equal => {
                    let abs = self.candidate_absolute_indicator(mv);
                    let incumbent = match best_abs {
                        Some(v) => v,
                        None => {
                            let v = self.candidate_absolute_indicator(
                                best.expect("set when best_abs cleared"),
                            );
                            best_abs = Some(v);
                            v
                        }
                    };
                    if abs < incumbent {
                        best_abs = Some(abs);
                        best = Some(mv);
                    }
                }
            }
        }
        best
    }
}

enum RestartResult {
    Found(SearchOutcome),
    Exhausted {
        best: TruthTable,
        score: Score,
        iterations: usize,
    },
}

fn run_restart(
    cs: &ConstraintSystem,
    cfg: &SearchConfig,
    ci_masks: &[usize],
    restart: usize,
) -> Result<RestartResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(cfg.seed, restart));
    let start = if cs.require_balanced {
        TruthTable::random_balanced(cs.n, &mut rng)?
    } else {
        TruthTable::random(cs.n, &mut rng)?
    };
    let mut climber = Climber::new(cs, cfg, ci_masks.to_vec(), start);
    let patience = match cfg.sampling {
        Sampling::AllMoves => 1,
        Sampling::Sampled(k) => climber.move_count().div_ceil(k).max(1),
    };
    let mut stalled = 0;
    let mut iterations = 0;
    loop {
        if climber.cheap_constraints_hold() {
            let report = classify(&climber.table);
            if cs.check_report(&report)?.pass() {
                return Ok(RestartResult::Found(SearchOutcome {
                    table: climber.table,
                    report,
                    restart,
                    iterations,
                    total_iterations: 0,
                }));
            }
        }
        if iterations == cfg.max_iterations {
            break;
        }
        iterations += 1;
        let current = climber.current_score();
        let moves = match climber.cfg.sampling {
            Sampling::AllMoves => climber.all_moves(),
            Sampling::Sampled(k) => climber.sampled_moves(k, &mut rng),
        };
        match climber.best_move(&moves, current) {
            Some(mv) => {
                stalled = 0;
                climber.apply(mv);
            }
            None => {
                stalled += 1;
                if stalled >= patience {
                    break;
                }
            }
        }
    }
    let score = climber.current_score();
    Ok(RestartResult::Exhausted {
        best: climber.table,
        score,
        iterations,
    })
}

/// Searches for a function meeting every active constraint of `cs`.
pub fn gradient_descent_search(cs: &ConstraintSystem, cfg: &SearchConfig) -> Result<SearchOutcome> {
    cs.validate()?;
    cfg.validate()?;
    let ci_masks: Vec<usize> = match cs.min_ci_order {
        Some(m) => (1..=m.min(cs.n as u32))
            .flat_map(|d| masks_of_weight(cs.n, d))
            .collect(),
        None => Vec::new(),
    };

    let infeasible = cs.infeasibilities();
    if !infeasible.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(cfg.seed, 0));
        let best = if cs.require_balanced {
            TruthTable::random_balanced(cs.n, &mut rng)?
        } else {
            TruthTable::random(cs.n, &mut rng)?
        };
        return Err(failure(
            cs,
            FailureReason::Infeasible(infeasible),
            best,
            0,
            0,
        ));
    }

    let mut best: Option<(Score, TruthTable)> = None;
    let mut total = 0;
    for restart in 0..cfg.max_restarts {
        match run_restart(cs, cfg, &ci_masks, restart)? {
            RestartResult::Found(mut outcome) => {
                outcome.total_iterations = total + outcome.iterations;
                return Ok(outcome);
            }
            RestartResult::Exhausted {
                best: table,
                score,
                iterations,
            } => {
                total += iterations;
                if best.as_ref().is_none_or(|(s, _)| score > *s) {
                    best = Some((score, table));
                }
            }
        }
    }
    let (_, table) = best.expect("at least one restart ran");
    Err(failure(
        cs,
        FailureReason::BudgetExhausted,
        table,
        cfg.max_restarts,
        total,
    ))
}

fn failure(
    cs: &ConstraintSystem,
    reason: FailureReason,
    best: TruthTable,
    restarts: usize,
    total_iterations: usize,
) -> Error {
    let report = classify(&best);
    let violations = cs
        .check_report(&report)
        .map(|c| c.violations)
        .unwrap_or_default();
    SearchFailure {
        reason,
        best,
        report,
        violations,
        restarts,
        total_iterations,
    }
    .into()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incremental_update_examples() {
        let zero = TruthTable::zero(2).unwrap();
        let w = walsh_spectrum(&zero);
        let updated = incremental_walsh_update(&w, 3).unwrap();
        assert_eq!(updated.values(), &[2, 2, 2, -2]);
        assert_eq!(incremental_walsh_update(&updated, 3).unwrap(), w);
        assert!(incremental_walsh_update(&w, 4).is_err());
    }

    #[test]
    fn vacuous_search_returns_the_start() {
        let cs = ConstraintSystem::new(4).unwrap().min_nonlinearity(0);
        let cfg = SearchConfig::with_seed(3);
        let out = gradient_descent_search(&cs, &cfg).unwrap();
        assert_eq!(out.iterations, 0);
        assert_eq!(out.restart, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(3, 0));
        assert_eq!(out.table, TruthTable::random(4, &mut rng).unwrap());
    }

    #[test]
    fn infeasible_search_fails_fast() {
        let cs = ConstraintSystem::new(6).unwrap().min_nonlinearity(29);
        match gradient_descent_search(&cs, &SearchConfig::default()) {
            Err(Error::Search(f)) => {
                assert!(matches!(f.reason, FailureReason::Infeasible(_)));
                assert_eq!(f.violations[0].constraint, "min_nonlinearity");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn exhausted_budget_keeps_best() {
        // 13 passes the covering-radius screen but no 5-variable function reaches it.
        let cs = ConstraintSystem::new(5).unwrap().min_nonlinearity(13);
        let cfg = SearchConfig {
            max_iterations: 3,
            max_restarts: 2,
            ..SearchConfig::default()
        };
        match gradient_descent_search(&cs, &cfg) {
            Err(Error::Search(f)) => {
                assert_eq!(f.reason, FailureReason::BudgetExhausted);
                assert_eq!(f.restarts, 2);
                assert!(f.total_iterations <= 6);
                assert_eq!(f.report, classify(&f.best));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn balanced_search_meets_target() {
        let cs = ConstraintSystem::new(6)
            .unwrap()
            .balanced()
            .min_nonlinearity(24)
            .max_absolute_indicator(32);
        let out = gradient_descent_search(&cs, &SearchConfig::with_seed(7)).unwrap();
        assert!(out.table.is_balanced());
        assert!(out.report.nonlinearity >= 24);
        assert!(out.report.absolute_indicator <= 32);
    }

    #[test]
    fn sampled_search_is_deterministic() {
        let cs = ConstraintSystem::new(5).unwrap().min_nonlinearity(10);
        let cfg = SearchConfig {
            sampling: Sampling::Sampled(8),
            ..SearchConfig::with_seed(11)
        };
        let a = gradient_descent_search(&cs, &cfg).unwrap();
        let b = gradient_descent_search(&cs, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.report.nonlinearity >= 10);
    }

    #[test]
    fn stream_seeds_differ_per_restart() {
        assert_ne!(stream_seed(0, 0), stream_seed(0, 1));
        assert_ne!(stream_seed(0, 0), stream_seed(1, 0));
    }
}
