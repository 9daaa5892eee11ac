//! Slow, definition-level oracles shared by the integration tests. None of
//! them calls into the transforms or eliminations they check.

#![allow(dead_code)]

use std::path::PathBuf;

use cognate::bf::TruthTable;
use nalgebra::DMatrix;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn dot(a: usize, x: usize) -> bool {
    (a & x).count_ones() % 2 == 1
}

pub fn bits(f: &TruthTable) -> Vec<bool> {
    (0..f.len()).map(|x| f.get(x)).collect()
}

/// `W_f(a) = Σ_x (−1)^{f(x) ⊕ a·x}` summed term by term.
pub fn walsh_sum(f: &[bool]) -> Vec<i32> {
    let len = f.len();
    (0..len)
        .map(|a| {
            (0..len)
                .map(|x| if f[x] ^ dot(a, x) { -1 } else { 1 })
                .sum()
        })
        .collect()
}

/// `Δ_f(d) = Σ_x (−1)^{f(x) ⊕ f(x ⊕ d)}`.
pub fn autocorrelation_sum(f: &[bool]) -> Vec<i32> {
    let len = f.len();
    (0..len)
        .map(|d| (0..len).map(|x| if f[x] ^ f[x ^ d] { -1 } else { 1 }).sum())
        .collect()
}

/// Minimum Hamming distance to the `2^{n+1}` affine functions, enumerated.
pub fn nonlinearity_by_distance(f: &[bool]) -> u32 {
    let len = f.len();
    let mut best = u32::MAX;
    for a in 0..len {
        for c in [false, true] {
            let d = (0..len).filter(|&x| f[x] != (dot(a, x) ^ c)).count() as u32;
            best = best.min(d);
        }
    }
    best
}

/// ANF coefficient of monomial `u` is the XOR of `f` over the subsets of `u`.
pub fn anf_by_subsets(f: &[bool]) -> Vec<bool> {
    let len = f.len();
    (0..len)
        .map(|u| {
            let mut acc = false;
            let mut x = u;
            loop {
                acc ^= f[x];
                if x == 0 {
                    break;
                }
                x = (x - 1) & u;
            }
            acc
        })
        .collect()
}

pub fn degree_by_subsets(f: &[bool]) -> u32 {
    anf_by_subsets(f)
        .iter()
        .enumerate()
        .filter(|(_, &c)| c)
        .map(|(u, _)| u.count_ones())
        .max()
        .unwrap_or(0)
}

/// Algebraic immunity by trying every nonzero function `g` on `n ≤ 4`
/// variables as an annihilator of `f` or `f ⊕ 1`.
pub struct AnnihilatorOracle {
    n: usize,
    degree: Vec<u32>,
}

impl AnnihilatorOracle {
    pub fn new(n: usize) -> Self {
        assert!(n <= 4, "exhaustive annihilator search is for n <= 4");
        let len = 1usize << n;
        let degree = (0..1u32 << len)
            .map(|g| {
                let gb: Vec<bool> = (0..len).map(|x| g >> x & 1 == 1).collect();
                degree_by_subsets(&gb)
            })
            .collect();
        AnnihilatorOracle { n, degree }
    }

    pub fn immunity(&self, f: &[bool]) -> u32 {
        assert_eq!(f.len(), 1 << self.n);
        let mask: u32 = f
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(x, _)| 1u32 << x)
            .sum();
        let full = (1u32 << f.len()) - 1;
        (1..=full)
            .filter(|&g| g & mask == 0 || g & !mask & full == 0)
            .map(|g| self.degree[g as usize])
            .min()
            .expect("g = f ⊕ 1 or g = f always annihilates")
    }
}

/// The combination `mask · S(x)` read straight off the table.
pub fn combination_from_table(table: &[u32], mask: u32) -> Vec<bool> {
    table
        .iter()
        .map(|&y| (y & mask).count_ones() % 2 == 1)
        .collect()
}

/// Minimum nonlinearity over the `2^m − 1` nonzero output masks.
pub fn sbox_nonlinearity_oracle(table: &[u32], m: usize) -> u32 {
    (1..1u32 << m)
        .map(|mask| nonlinearity_by_distance(&combination_from_table(table, mask)))
        .min()
        .expect("m >= 1")
}

pub fn all_combinations_balanced_oracle(table: &[u32], m: usize) -> bool {
    (1..1u32 << m).all(|mask| {
        let ones = combination_from_table(table, mask)
            .iter()
            .filter(|&&b| b)
            .count();
        2 * ones == table.len()
    })
}

pub fn has_duplicate(table: &[u32]) -> bool {
    let mut seen = std::collections::HashSet::new();
    table.iter().any(|v| !seen.insert(*v))
}

/// Principal eigenpair from a dense general eigensolver: λ is the eigenvalue
/// of largest real part, the vector spans the null space of `A − λI`
/// (smallest right singular vector), normalized to sum 1.
pub fn eigen_oracle(a: &[Vec<f64>]) -> (Vec<f64>, f64) {
    let k = a.len();
    let m = DMatrix::from_fn(k, k, |i, j| a[i][j]);
    let lambda = m
        .complex_eigenvalues()
        .iter()
        .map(|c| c.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let shifted = &m - DMatrix::identity(k, k) * lambda;
    let svd = shifted.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let (idx, _) =
        svd.singular_values
            .iter()
            .enumerate()
            .fold(
                (0, f64::INFINITY),
                |best, (i, &s)| if s < best.1 { (i, s) } else { best },
            );
    let row: Vec<f64> = v_t.row(idx).iter().copied().collect();
    let sum: f64 = row.iter().sum();
    (row.iter().map(|x| x / sum).collect(), lambda)
}

/// The seventeen judgments of the 1..9 scale and their reciprocals.
pub fn scale_values() -> Vec<(i64, i64)> {
    let mut v: Vec<(i64, i64)> = (2..=9).map(|d| (1, d)).collect();
    v.extend((1..=9).map(|n| (n, 1)));
    v
}
