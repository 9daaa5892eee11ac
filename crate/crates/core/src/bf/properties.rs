//! Cryptographic properties read off the spectra, and the aggregate report.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bf::annihilator::{algebraic_immunity, MAX_AI_VARIABLES};
use crate::bf::transform::{
    autocorrelation_from_walsh, moebius_transform, walsh_spectrum, AutocorrelationSpectrum,
    WalshSpectrum,
};
use crate::bf::truth_table::TruthTable;

pub fn nonlinearity(f: &TruthTable) -> u32 {
    nonlinearity_from_walsh(&walsh_spectrum(f))
}

/// `2^{n-1} - max_a |W_f(a)| / 2`.
pub fn nonlinearity_from_walsh(w: &WalshSpectrum) -> u32 {
    (1u32 << (w.n() - 1)) - w.max_abs() / 2
}

/// Largest nonlinearity any function of `n` variables can reach,
/// `floor(2^{n-1} - 2^{n/2-1})`.
pub fn covering_radius_bound(n: usize) -> u32 {
    let half = 2f64.powf(n as f64 / 2.0 - 1.0);
    ((1u64 << (n - 1)) as f64 - half).floor() as u32
}

/// `(max_{d≠0} |Δ(d)|, Σ_d Δ(d)^2)`.
pub fn indicators(ac: &AutocorrelationSpectrum) -> (u32, u64) {
    let absolute = ac.values()[1..]
        .iter()
        .map(|v| v.unsigned_abs())
        .max()
        .unwrap_or(0);
    let sum_of_squares = ac
        .values()
        .iter()
        .map(|&v| u64::from(v.unsigned_abs()).pow(2))
        .sum();
    (absolute, sum_of_squares)
}

pub fn correlation_immunity_order(f: &TruthTable) -> u32 {
    correlation_immunity_from_walsh(&walsh_spectrum(f))
}

/// Xiao–Massey: the spectrum vanishes on every mask of weight `1..=m`.
pub fn correlation_immunity_from_walsh(w: &WalshSpectrum) -> u32 {
    w.values()
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, &v)| v != 0)
        .map(|(a, _)| a.count_ones() - 1)
        .min()
        .unwrap_or(w.n() as u32)
}

/// Nonzero shifts `d` where `f(x) ⊕ f(x⊕d)` is constant, ascending.
pub fn linear_structures(ac: &AutocorrelationSpectrum) -> Vec<usize> {
    let full = 1u32 << ac.n();
    ac.values()
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, v)| v.unsigned_abs() == full)
        .map(|(d, _)| d)
        .collect()
}

/// `n` even and `|W_f(a)| = 2^{n/2}` everywhere.
pub fn is_bent_from_walsh(w: &WalshSpectrum) -> bool {
    if w.n() % 2 != 0 {
        return false;
    }
    let flat = 1u32 << (w.n() / 2);
    w.values().iter().all(|v| v.unsigned_abs() == flat)
}

/// Every property of a single function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub n: usize,
    pub weight: u64,
    pub balanced: bool,
    pub nonlinearity: u32,
    pub algebraic_degree: u32,
    pub absolute_indicator: u32,
    pub sum_of_squares: u64,
    pub ci_order: u32,
    /// Equal to `ci_order` for balanced functions; `"not balanced"` in JSON otherwise.
    #[serde(serialize_with = "ser_resiliency", deserialize_with = "de_resiliency")]
    pub resiliency_order: Option<u32>,
    /// `None` above the elimination size cap.
    pub algebraic_immunity: Option<u32>,
    pub is_bent: bool,
    pub linear_structures: Vec<usize>,
}

fn ser_resiliency<S: Serializer>(v: &Option<u32>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(order) => s.serialize_u32(*order),
        None => s.serialize_str("not balanced"),
    }
}

fn de_resiliency<'de, D: Deserializer<'de>>(d: D) -> Result<Option<u32>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Order(u32),
        Text(String),
    }
    match Raw::deserialize(d)? {
        Raw::Order(o) => Ok(Some(o)),
        Raw::Text(t) if t == "not balanced" => Ok(None),
        Raw::Text(t) => Err(serde::de::Error::custom(format!(
            "expected an integer or \"not balanced\", got {t:?}"
        ))),
    }
}

impl PropertyReport {
    pub fn is_algebraically_nondegenerate(&self) -> bool {
        self.linear_structures.is_empty()
    }
}

pub fn classify(f: &TruthTable) -> PropertyReport {
    let w = walsh_spectrum(f);
    let ac = autocorrelation_from_walsh(&w);
    let (absolute_indicator, sum_of_squares) = indicators(&ac);
    let weight = f.weight();
    let balanced = f.is_balanced();
    let ci_order = correlation_immunity_from_walsh(&w);
    let algebraic_immunity = if f.n() <= MAX_AI_VARIABLES {
        Some(algebraic_immunity(f).expect("size checked"))
    } else {
        None
    };
    PropertyReport {
        n: f.n(),
        weight,
        balanced,
        nonlinearity: nonlinearity_from_walsh(&w),
        algebraic_degree: moebius_transform(f).degree(),
        absolute_indicator,
        sum_of_squares,
        ci_order,
        resiliency_order: balanced.then_some(ci_order),
        algebraic_immunity,
        is_bent: is_bent_from_walsh(&w),
        linear_structures: linear_structures(&ac),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bf::transform::autocorrelation;

    fn tt(s: &str) -> TruthTable {
        let bits: Vec<u8> = s.bytes().map(|b| b - b'0').collect();
        TruthTable::from_bits(&bits).unwrap()
    }

    #[test]
    fn nonlinearity_examples() {
        assert_eq!(nonlinearity(&tt("0001")), 1);
        assert_eq!(nonlinearity(&TruthTable::variable(3, 0).unwrap()), 0);
        assert_eq!(nonlinearity(&TruthTable::inner_product(4).unwrap()), 6);
    }

    #[test]
    fn covering_bound_values() {
        assert_eq!(covering_radius_bound(2), 1);
        assert_eq!(covering_radius_bound(4), 6);
        assert_eq!(covering_radius_bound(6), 28);
        assert_eq!(covering_radius_bound(3), 2);
        assert_eq!(covering_radius_bound(5), 13);
    }

    #[test]
    fn indicator_examples() {
        let bent = TruthTable::inner_product(4).unwrap();
        assert_eq!(indicators(&autocorrelation(&bent)), (0, 256));
        assert_eq!(indicators(&autocorrelation(&tt("0000"))), (4, 64));
        assert_eq!(indicators(&autocorrelation(&tt("0001"))), (0, 16));
    }

    #[test]
    fn correlation_immunity_examples() {
        let f = TruthTable::linear(3, 0b011).unwrap();
        assert_eq!(correlation_immunity_order(&f), 1);
        assert_eq!(correlation_immunity_order(&tt("0101")), 0);
        assert_eq!(correlation_immunity_order(&TruthTable::zero(3).unwrap()), 3);
    }

    #[test]
    fn linear_structure_examples() {
        let ls = |f: &TruthTable| linear_structures(&autocorrelation(f));
        assert_eq!(ls(&tt("0101")), vec![1, 2, 3]);
        assert!(ls(&TruthTable::inner_product(4).unwrap()).is_empty());
        let f = TruthTable::from_fn(3, |x| ((x & 1) & (x >> 1) & 1) ^ ((x >> 2) & 1) == 1).unwrap();
        assert_eq!(ls(&f), vec![0b100]);
    }

    #[test]
    fn classify_bent() {
        let r = classify(&TruthTable::inner_product(4).unwrap());
        assert!(!r.balanced);
        assert_eq!(r.nonlinearity, 6);
        assert_eq!(r.algebraic_degree, 2);
        assert!(r.is_bent);
        assert_eq!(r.ci_order, 0);
        assert_eq!(r.absolute_indicator, 0);
        assert!(r.linear_structures.is_empty());
        assert_eq!(r.algebraic_immunity, Some(2));
        assert_eq!(r.resiliency_order, None);
    }

    #[test]
    fn classify_constant_and_linear() {
        let r = classify(&tt("0000"));
        assert_eq!((r.weight, r.nonlinearity, r.algebraic_degree), (0, 0, 0));
        assert!(!r.is_bent);
        assert_eq!(r.ci_order, 2);

        let r = classify(&TruthTable::linear(3, 0b011).unwrap());
        assert!(r.balanced);
        assert_eq!(r.resiliency_order, Some(1));
        assert_eq!((r.nonlinearity, r.algebraic_degree), (0, 1));
    }

    #[test]
    fn report_json_round_trip() {
        let r = classify(&tt("0001"));
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"resiliency_order\":\"not balanced\""));
        let back: PropertyReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        let r = classify(&tt("0110"));
        let back: PropertyReport =
            serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back.resiliency_order, Some(1));
    }

    #[test]
    fn ai_absent_above_cap() {
        let r = classify(&TruthTable::inner_product(16).unwrap());
        assert_eq!(r.algebraic_immunity, None);
        assert!(r.is_bent);
    }
}
