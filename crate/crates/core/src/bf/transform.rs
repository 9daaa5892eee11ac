//! Walsh–Hadamard and Möbius transforms, and the autocorrelation spectrum.

use std::fmt;
use std::ops::{Add, Sub};

use crate::bf::truth_table::{variables_for_len, TruthTable};
use crate::error::{Error, Result};

/// `W_f(a) = Σ_x (-1)^{f(x) ⊕ <a,x>}` for every mask `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalshSpectrum {
    n: usize,
    values: Vec<i32>,
}

/// `Δ_f(d) = Σ_x (-1)^{f(x) ⊕ f(x⊕d)}` for every shift `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutocorrelationSpectrum {
    n: usize,
    values: Vec<i32>,
}

/// Algebraic normal form coefficients; entry `m` is the coefficient of `Π_{i ∈ m} x_{i+1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AnfCoefficients {
    coeffs: TruthTable,
}

/// `<a, x>` over GF(2).
#[inline]
pub(crate) fn parity(a: usize, x: usize) -> bool {
    (a & x).count_ones() & 1 == 1
}

/// In-place unnormalized Walsh–Hadamard butterfly; `v.len()` must be a power of two.
pub(crate) fn fwht<T>(v: &mut [T])
where
    T: Copy + Add<Output = T> + Sub<Output = T>,
{
    let len = v.len();
    debug_assert!(len.is_power_of_two());
    let mut half = 1;
    while half < len {
        for block in v.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (s, d) = (*a + *b, *a - *b);
                *a = s;
                *b = d;
            }
        }
        half <<= 1;
    }
}

impl WalshSpectrum {
    /// Wraps raw spectrum values; checks only the length.
    pub fn from_values(values: Vec<i32>) -> Result<Self> {
        let n = variables_for_len(values.len())?;
        Ok(WalshSpectrum { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }

    pub fn get(&self, mask: usize) -> i32 {
        self.values[mask]
    }

    pub fn max_abs(&self) -> u32 {
        self.values
            .iter()
            .map(|v| v.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    /// `Σ_a W_f(a)^2`; equals `2^{2n}` for every Boolean function.
    pub fn parseval_sum(&self) -> i64 {
        self.values
            .iter()
            .map(|&v| i64::from(v) * i64::from(v))
            .sum()
    }

    pub(crate) fn values_mut(&mut self) -> &mut [i32] {
        &mut self.values
    }

    pub(crate) fn into_values(self) -> Vec<i32> {
        self.values
    }

    /// Recovers the truth table by the inverse transform.
    pub fn to_truth_table(&self) -> Result<TruthTable> {
        let mut signs: Vec<i64> = self.values.iter().map(|&v| i64::from(v)).collect();
        fwht(&mut signs);
        let scale = 1i64 << self.n;
        let mut bits = Vec::with_capacity(signs.len());
        for (x, s) in signs.into_iter().enumerate() {
            match s / scale {
                1 if s % scale == 0 => bits.push(0),
                -1 if s % scale == 0 => bits.push(1),
                _ => {
                    return Err(Error::InvalidValue(format!(
                        "values are not the spectrum of a Boolean function (entry {x})"
                    )))
                }
            }
        }
        TruthTable::from_bits(&bits)
    }
}

impl AutocorrelationSpectrum {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[i32] {
        &self.values
    }

    pub fn get(&self, shift: usize) -> i32 {
        self.values[shift]
    }
}

impl AnfCoefficients {
    pub fn n(&self) -> usize {
        self.coeffs.n()
    }

    pub fn coefficient(&self, mask: usize) -> bool {
        self.coeffs.get(mask)
    }

    /// Masks of the monomials present, ascending.
    pub fn monomials(&self) -> Vec<usize> {
        self.coeffs.support()
    }

    /// Largest monomial size; 0 for the zero function.
    pub fn degree(&self) -> u32 {
        self.coeffs
            .words()
            .iter()
            .enumerate()
            .filter(|(_, &w)| w != 0)
            .flat_map(|(i, &w)| {
                (0..64)
                    .filter(move |b| (w >> b) & 1 == 1)
                    .map(move |b| ((i << 6) | b).count_ones())
            })
            .max()
            .unwrap_or(0)
    }

    /// The same butterfly applied to the coefficients gives back the truth table.
    pub fn to_truth_table(&self) -> TruthTable {
        let mut t = self.coeffs.clone();
        moebius_in_place(&mut t);
        t
    }

    /// Coefficients as a table indexed by monomial mask.
    pub fn as_table(&self) -> &TruthTable {
        &self.coeffs
    }
}

impl fmt::Debug for AnfCoefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AnfCoefficients({self})")
    }
}

/// Polynomial form such as `1 + x1x2 + x3`.
impl fmt::Display for AnfCoefficients {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let monomials = self.monomials();
        if monomials.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = monomials
            .into_iter()
            .map(|m| {
                if m == 0 {
                    "1".to_string()
                } else {
                    (0..self.n())
                        .filter(|i| (m >> i) & 1 == 1)
                        .map(|i| format!("x{}", i + 1))
                        .collect()
                }
            })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

pub fn walsh_spectrum(f: &TruthTable) -> WalshSpectrum {
    let mut values: Vec<i32> = f.iter().map(|b| if b { -1 } else { 1 }).collect();
    fwht(&mut values);
    WalshSpectrum { n: f.n(), values }
}

// Within-word masks selecting the positions whose bit `i` is clear.
const LOW_HALVES: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

/// GF(2) butterfly on the packed words: `t[x] ^= t[x ^ 2^i]` for every `x` with bit `i` set.
fn moebius_in_place(t: &mut TruthTable) {
    let n = t.n();
    let words = t.words_mut();
    for (i, low) in LOW_HALVES.iter().enumerate().take(n.min(6)) {
        for w in words.iter_mut() {
            *w ^= (*w & low) << (1 << i);
        }
    }
    for i in 6..n {
        let stride = 1 << (i - 6);
        for j in 0..words.len() {
            if j & stride != 0 {
                words[j] ^= words[j ^ stride];
            }
        }
    }
}

pub fn moebius_transform(f: &TruthTable) -> AnfCoefficients {
    let mut coeffs = f.clone();
    moebius_in_place(&mut coeffs);
    AnfCoefficients { coeffs }
}

/// Autocorrelation through the squared Walsh spectrum: `Δ_f = WHT(W_f^2) / 2^n`.
pub fn autocorrelation(f: &TruthTable) -> AutocorrelationSpectrum {
    autocorrelation_from_walsh(&walsh_spectrum(f))
}

pub fn autocorrelation_from_walsh(w: &WalshSpectrum) -> AutocorrelationSpectrum {
    let mut sq: Vec<i64> = w
        .values
        .iter()
        .map(|&v| i64::from(v) * i64::from(v))
        .collect();
    fwht(&mut sq);
    let n = w.n;
    let values = sq.into_iter().map(|v| (v >> n) as i32).collect();
    AutocorrelationSpectrum { n, values }
}

/// Autocorrelation by its defining sum, `O(4^n)`.
pub fn autocorrelation_direct(f: &TruthTable) -> AutocorrelationSpectrum {
    let len = f.len();
    let values = (0..len)
        .map(|d| {
            (0..len)
                .map(|x| if f.get(x) == f.get(x ^ d) { 1 } else { -1 })
                .sum()
        })
        .collect();
    AutocorrelationSpectrum { n: f.n(), values }
}
