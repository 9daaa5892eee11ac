//! Algebraic immunity by GF(2) elimination over monomial evaluation vectors.
//!
//! A nonzero `g` of degree `<= d` annihilates `f` iff the evaluation vectors
//! of the monomials of degree `<= d`, restricted to the support of `f`, are
//! linearly dependent. Monomials are fed in ascending degree into an
//! incrementally reduced basis, so the work done for degree `d` is kept when
//! moving to `d + 1`; the first monomial that reduces to zero fixes the
//! immunity.

use crate::bf::truth_table::TruthTable;
use crate::error::{Error, Result};

/// Largest variable count accepted by [`algebraic_immunity`].
pub const MAX_AI_VARIABLES: usize = 14;

/// Echelon basis of bit vectors keyed by their lowest set bit.
struct XorBasis {
    words: usize,
    pivots: Vec<Option<Vec<u64>>>,
}

impl XorBasis {
    fn new(bits: usize) -> Self {
        XorBasis {
            words: bits.div_ceil(64),
            pivots: vec![None; bits],
        }
    }

    /// Reduces `v` against the basis; returns `false` when it reduces to zero.
    fn insert(&mut self, mut v: Vec<u64>) -> bool {
        let mut start = 0;
        loop {
            let Some(p) = lowest_set_bit(&v, start) else {
                return false;
            };
            match &self.pivots[p] {
                Some(row) => {
                    for (a, b) in v.iter_mut().zip(row).skip(p >> 6) {
                        *a ^= b;
                    }
                    start = p >> 6;
                }
                None => {
                    self.pivots[p] = Some(v);
                    return true;
                }
            }
        }
    }

    /// Evaluation vector of the monomial `mask` over `points`.
    fn evaluation(&self, mask: usize, points: &[usize]) -> Vec<u64> {
        let mut v = vec![0u64; self.words];
        for (j, &p) in points.iter().enumerate() {
            if p & mask == mask {
                v[j >> 6] |= 1 << (j & 63);
            }
        }
        v
    }
}

fn lowest_set_bit(v: &[u64], start_word: usize) -> Option<usize> {
    v.iter()
        .enumerate()
        .skip(start_word)
        .find(|(_, &w)| w != 0)
        .map(|(i, w)| (i << 6) | w.trailing_zeros() as usize)
}

/// Masks of weight `d` over `n` bits, ascending.
pub(crate) fn masks_of_weight(n: usize, d: u32) -> impl Iterator<Item = usize> {
    (0..1usize << n).filter(move |m| m.count_ones() == d)
}

/// Minimum degree of a nonzero annihilator of `f` or `f ⊕ 1`; 0 for constants.
pub fn algebraic_immunity(f: &TruthTable) -> Result<u32> {
    let n = f.n();
    if n > MAX_AI_VARIABLES {
        return Err(Error::Capacity {
            what: "algebraic immunity",
            n,
            max: MAX_AI_VARIABLES,
        });
    }
    let ones = f.support();
    let zeros = (!f).support();
    let mut annihilates_f = XorBasis::new(ones.len());
    let mut annihilates_complement = XorBasis::new(zeros.len());

    let bound = n.div_ceil(2) as u32;
    for d in 0..=bound {
        for mask in masks_of_weight(n, d) {
            let a = annihilates_f.evaluation(mask, &ones);
            let b = annihilates_complement.evaluation(mask, &zeros);
            let independent_a = annihilates_f.insert(a);
            let independent_b = annihilates_complement.insert(b);
            if !independent_a || !independent_b {
                return Ok(d);
            }
        }
    }
    unreachable!("monomials of degree <= ceil(n/2) outnumber the smaller support")
}
