//! Principal-eigenvector priorities and the consistency ratio.

use serde::Serialize;

use crate::ahp::matrix::ComparisonMatrix;
use crate::error::{Error, Result};

/// Mean consistency index of random reciprocal matrices, indexed by `k`
/// (entry 0 unused).
pub const RANDOM_INDEX: [f64; 11] = [
    f64::NAN,
    0.0,
    0.0,
    0.58,
    0.90,
    1.12,
    1.24,
    1.32,
    1.41,
    1.45,
    1.49,
];

/// Largest dimension with a tabulated random index.
pub const MAX_RATED_DIMENSION: usize = 10;

/// Ratios above this are flagged inconsistent (but still used).
pub const CONSISTENCY_THRESHOLD: f64 = 0.10;

pub const POWER_TOLERANCE: f64 = 1e-12;
pub const POWER_MAX_ITERATIONS: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PriorityVector {
    pub weights: Vec<f64>,
    pub lambda_max: f64,
    pub consistency_index: f64,
    /// `None` when `k` is beyond the random-index table.
    pub consistency_ratio: Option<f64>,
    pub iterations: usize,
}

impl PriorityVector {
    pub fn k(&self) -> usize {
        self.weights.len()
    }

    pub fn is_consistent(&self) -> bool {
        self.consistency_ratio
            .is_some_and(|cr| cr <= CONSISTENCY_THRESHOLD)
    }
}

fn mat_vec(a: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

fn normalize(v: &mut [f64]) {
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
}

/// Power iteration from the row geometric means.
pub fn priority_vector(m: &ComparisonMatrix) -> Result<PriorityVector> {
    let k = m.k();
    let a = m.to_f64();
    let mut v: Vec<f64> = a
        .iter()
        .map(|row| (row.iter().map(|x| x.ln()).sum::<f64>() / k as f64).exp())
        .collect();
    normalize(&mut v);

    let mut iterations = 0;
    loop {
        if iterations == POWER_MAX_ITERATIONS {
            return Err(Error::NoConvergence { iterations });
        }
        iterations += 1;
        let mut next = mat_vec(&a, &v);
        normalize(&mut next);
        let delta = next
            .iter()
            .zip(&v)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        v = next;
        if delta < POWER_TOLERANCE {
            break;
        }
    }

    let av = mat_vec(&a, &v);
    let lambda_max =
        v.iter().zip(&av).map(|(x, y)| x * y).sum::<f64>() / v.iter().map(|x| x * x).sum::<f64>();
    let consistency_index = consistency_index(lambda_max, k);
    let consistency_ratio = ratio(consistency_index, k).ok();
    Ok(PriorityVector {
        weights: v,
        lambda_max,
        consistency_index,
        consistency_ratio,
        iterations,
    })
}

/// `(λ − k)/(k − 1)`, zero for `k ≤ 2`; rounding noise below zero is clamped.
pub fn consistency_index(lambda_max: f64, k: usize) -> f64 {
    if k <= 2 {
        0.0
    } else {
        ((lambda_max - k as f64) / (k as f64 - 1.0)).max(0.0)
    }
}

fn ratio(ci: f64, k: usize) -> Result<f64> {
    match k {
        0 => Err(Error::UnsupportedDimension { k }),
        1 | 2 => Ok(0.0),
        k if k <= MAX_RATED_DIMENSION => Ok(ci / RANDOM_INDEX[k]),
        k => Err(Error::UnsupportedDimension { k }),
    }
}

pub fn consistency_ratio(pv: &PriorityVector, k: usize) -> Result<f64> {
    if k != pv.k() {
        return Err(Error::DimensionMismatch {
            expected: pv.k(),
            found: k,
        });
    }
    ratio(pv.consistency_index, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ahp::matrix::Judgment;

    fn consistent(w: &[i64]) -> ComparisonMatrix {
        let rows = w
            .iter()
            .map(|&a| w.iter().map(|&b| Judgment::new(a, b)).collect())
            .collect();
        ComparisonMatrix::new(rows).unwrap()
    }

    #[test]
    fn uniform_matrix() {
        let pv = priority_vector(&ComparisonMatrix::uniform(3).unwrap()).unwrap();
        for w in &pv.weights {
            assert!((w - 1.0 / 3.0).abs() < 1e-12);
        }
        assert!((pv.lambda_max - 3.0).abs() < 1e-12);
        assert_eq!(pv.consistency_ratio, Some(0.0));
    }

    #[test]
    fn consistent_matrix_recovers_weights() {
        let pv = priority_vector(&consistent(&[4, 2, 1])).unwrap();
        let expect = [4.0 / 7.0, 2.0 / 7.0, 1.0 / 7.0];
        for (w, e) in pv.weights.iter().zip(expect) {
            assert!((w - e).abs() < 1e-10);
        }
        assert!(pv.consistency_ratio.unwrap() < 1e-10);
        assert!(pv.is_consistent());
    }

    #[test]
    fn two_by_two_is_always_consistent() {
        let m = ComparisonMatrix::from_upper(2, &[Judgment::new(7, 3)]).unwrap();
        let pv = priority_vector(&m).unwrap();
        assert_eq!(consistency_ratio(&pv, 2).unwrap(), 0.0);
        assert!((pv.weights[0] - 0.7).abs() < 1e-12);
    }

    #[test]
    fn inconsistent_matrix_is_flagged() {
        // a > b, b > c, c > a
        let m = ComparisonMatrix::from_upper(
            3,
            &[
                Judgment::from_integer(9),
                Judgment::new(1, 9),
                Judgment::from_integer(9),
            ],
        )
        .unwrap();
        let pv = priority_vector(&m).unwrap();
        assert!(pv.lambda_max > 3.0);
        assert!(!pv.is_consistent());
    }

    #[test]
    fn large_dimensions_have_no_ratio() {
        let pv = priority_vector(&ComparisonMatrix::uniform(11).unwrap()).unwrap();
        assert_eq!(pv.consistency_ratio, None);
        assert!(matches!(
            consistency_ratio(&pv, 11),
            Err(Error::UnsupportedDimension { k: 11 })
        ));
    }
}
