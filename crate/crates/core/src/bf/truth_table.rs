//! Bit-packed truth tables.
//!
//! Entry `x` of a table over `n` variables holds `f(x)`, where variable
//! `x_{i+1}` is bit `i` of the index: `x_1` is the least significant bit and
//! toggles fastest. Every transform, file format and S-box view in the crate
//! uses this convention.

use std::fmt;
use std::ops::{BitXor, Not};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// Largest variable count accepted by any table.
pub const MAX_VARIABLES: usize = 20;

/// Value vector of a Boolean function of `n` variables, packed 64 entries per word.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: usize,
    words: Vec<u64>,
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_VARIABLES {
        return Err(Error::VariableCount {
            n,
            max: MAX_VARIABLES,
        });
    }
    Ok(())
}

fn word_count(n: usize) -> usize {
    if n <= 6 {
        1
    } else {
        1 << (n - 6)
    }
}

/// Mask of the valid bits in the (single) word of a table with `n < 6`.
fn tail_mask(n: usize) -> u64 {
    if n >= 6 {
        u64::MAX
    } else {
        (1u64 << (1 << n)) - 1
    }
}

impl TruthTable {
    /// The constant-0 function.
    pub fn zero(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(TruthTable {
            n,
            words: vec![0; word_count(n)],
        })
    }

    /// The constant-1 function.
    pub fn one(n: usize) -> Result<Self> {
        Ok(!Self::zero(n)?)
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> bool) -> Result<Self> {
        let mut t = Self::zero(n)?;
        for x in 0..t.len() {
            if f(x) {
                t.words[x >> 6] |= 1 << (x & 63);
            }
        }
        Ok(t)
    }

    /// Builds a table from one `0`/`1` value per input; the length must be `2^n`.
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        let n = variables_for_len(bits.len())?;
        if let Some(pos) = bits.iter().position(|&b| b > 1) {
            return Err(Error::InvalidValue(format!(
                "entry {pos} is {}, expected 0 or 1",
                bits[pos]
            )));
        }
        Self::from_fn(n, |x| bits[x] == 1)
    }

    /// The coordinate function `x_{var+1}` (`var` is zero-based).
    pub fn variable(n: usize, var: usize) -> Result<Self> {
        if var >= n {
            return Err(Error::InvalidValue(format!(
                "variable index {var} out of range for n = {n}"
            )));
        }
        Self::from_fn(n, |x| (x >> var) & 1 == 1)
    }

    /// The linear function `<mask, x>`.
    pub fn linear(n: usize, mask: usize) -> Result<Self> {
        Self::from_fn(n, |x| (mask & x).count_ones() & 1 == 1)
    }

    /// `x1x2 ⊕ x3x4 ⊕ … ⊕ x_{n-1}x_n`, the inner-product bent function (`n` even).
    pub fn inner_product(n: usize) -> Result<Self> {
        if n % 2 != 0 {
            return Err(Error::InvalidValue(format!(
                "inner-product function needs an even variable count, got {n}"
            )));
        }
        Self::from_fn(n, |x| {
            (0..n / 2)
                .map(|i| (x >> (2 * i)) & (x >> (2 * i + 1)) & 1)
                .sum::<usize>()
                & 1
                == 1
        })
    }

    /// Uniformly random table.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let mut t = Self::zero(n)?;
        for w in &mut t.words {
            *w = rng.gen();
        }
        t.words[0] &= tail_mask(n);
        Ok(t)
    }

    /// Random table of weight exactly `2^{n-1}`, drawn as a random permutation of the ones.
    pub fn random_balanced<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        check_n(n)?;
        let len = 1usize << n;
        let mut bits: Vec<u8> = (0..len).map(|x| u8::from(x < len / 2)).collect();
        bits.shuffle(rng);
        Self::from_bits(&bits)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of entries, `2^n`.
    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn get(&self, x: usize) -> bool {
        debug_assert!(x < self.len());
        (self.words[x >> 6] >> (x & 63)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, x: usize, value: bool) {
        debug_assert!(x < self.len());
        let bit = 1u64 << (x & 63);
        if value {
            self.words[x >> 6] |= bit;
        } else {
            self.words[x >> 6] &= !bit;
        }
    }

    #[inline]
    pub fn flip(&mut self, x: usize) {
        debug_assert!(x < self.len());
        self.words[x >> 6] ^= 1 << (x & 63);
    }

    /// Copy with entry `x` flipped.
    pub fn flipped(&self, x: usize) -> Self {
        let mut t = self.clone();
        t.flip(x);
        t
    }

    /// Hamming weight.
    pub fn weight(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn is_balanced(&self) -> bool {
        self.weight() == (self.len() as u64) / 2
    }

    pub fn is_constant(&self) -> bool {
        let w = self.weight();
        w == 0 || w == self.len() as u64
    }

    pub fn hamming_distance(&self, other: &TruthTable) -> Result<u64> {
        self.check_same_n(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| u64::from((a ^ b).count_ones()))
            .sum())
    }

    pub fn try_xor(&self, other: &TruthTable) -> Result<TruthTable> {
        self.check_same_n(other)?;
        Ok(self ^ other)
    }

    pub(crate) fn check_same_n(&self, other: &TruthTable) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = bool> + '_ {
        (0..self.len()).map(move |x| self.get(x))
    }

    /// Inputs where the function is 1, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&x| self.get(x)).collect()
    }

    /// Packed words; bit `x & 63` of word `x >> 6` is `f(x)`.
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    pub fn to_bit_string(&self) -> String {
        self.iter().map(|b| if b { '1' } else { '0' }).collect()
    }
}

/// Variable count for a table of `len` entries.
pub(crate) fn variables_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::InvalidValue(format!(
            "table length {len} is not a power of two >= 2"
        )));
    }
    let n = len.trailing_zeros() as usize;
    check_n(n)?;
    Ok(n)
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable(n={}, {})", self.n, self.to_bit_string())
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

impl Not for TruthTable {
    type Output = TruthTable;

    fn not(mut self) -> TruthTable {
        for w in &mut self.words {
            *w = !*w;
        }
        self.words[0] &= tail_mask(self.n);
        self
    }
}

impl Not for &TruthTable {
    type Output = TruthTable;

    fn not(self) -> TruthTable {
        !self.clone()
    }
}

/// Panics when the variable counts differ; use [`TruthTable::try_xor`] for a checked version.
impl BitXor for &TruthTable {
    type Output = TruthTable;

    fn bitxor(self, rhs: &TruthTable) -> TruthTable {
        assert_eq!(
            self.n, rhs.n,
            "xor of tables with different variable counts"
        );
        TruthTable {
            n: self.n,
            words: self
                .words
                .iter()
                .zip(&rhs.words)
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variable_convention_is_lsb_first() {
        let x1 = TruthTable::variable(2, 0).unwrap();
        assert_eq!(x1.to_bit_string(), "0101");
        let x2 = TruthTable::variable(2, 1).unwrap();
        assert_eq!(x2.to_bit_string(), "0011");
    }

    #[test]
    fn complement_keeps_tail_clear() {
        let t = TruthTable::one(3).unwrap();
        assert_eq!(t.weight(), 8);
        assert_eq!(t.words()[0], 0xff);
        assert_eq!((!t).weight(), 0);
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(TruthTable::zero(0).is_err());
        assert!(TruthTable::zero(21).is_err());
        assert!(TruthTable::from_bits(&[0, 1, 0]).is_err());
        assert!(TruthTable::from_bits(&[0]).is_err());
        assert!(TruthTable::from_bits(&[0, 2]).is_err());
    }

    #[test]
    fn inner_product_weight() {
        let f = TruthTable::inner_product(4).unwrap();
        assert_eq!(f.weight(), 6);
        assert_eq!(f.to_bit_string(), "0001000100011110");
    }

    #[test]
    fn random_balanced_is_balanced() {
        let mut rng = rand::thread_rng();
        for n in 1..=10 {
            assert!(TruthTable::random_balanced(n, &mut rng)
                .unwrap()
                .is_balanced());
        }
    }

    #[test]
    fn distance_and_mismatch() {
        let a = TruthTable::zero(3).unwrap();
        let b = a.flipped(5);
        assert_eq!(a.hamming_distance(&b).unwrap(), 1);
        assert!(a.hamming_distance(&TruthTable::zero(4).unwrap()).is_err());
    }
}
