//! Mantissa/phase arithmetic, indicator kernels, and direct counting.
//!
//! Everything here is floor-based and therefore brittle at decade
//! boundaries if computed with a naive `log10`. Phases and digit blocks
//! are instead derived from the shortest round-trip decimal representation
//! of the input, so an exact power of ten has phase 0 exactly and a value
//! sitting on a block boundary lands in the block its digit string says it
//! does (left-closed convention: `k * 10^j` belongs to block `k`).

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Largest supported block length: beyond 15 decimal digits a block no
/// longer round-trips through an `f64` without drift.
pub const MAX_BLOCK_LEN: u32 = 15;

/// A finite, strictly positive real number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositiveReal(f64);

impl PositiveReal {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value <= 0.0 {
            return Err(Error::Domain(format!(
                "expected a finite positive value, got {value}"
            )));
        }
        Ok(PositiveReal(value))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Decomposition `x = 10^(exponent + phase)` with `phase` in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogPhase {
    /// Floor of `log10(x)` (the decade the value lives in).
    pub exponent: i32,
    /// Fractional part of `log10(x)`.
    pub phase: f64,
}

/// A digit block: a positive integer `k` together with its decade
/// `d = floor(log10 k)`, so `10^d <= k < 10^(d+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct DigitBlock {
    k: u64,
    decade: i32,
}

impl DigitBlock {
    pub fn new(k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("digit block must be >= 1".into()));
        }
        let decade = decimal_digits(k) as i32 - 1;
        if decade as u32 + 1 > MAX_BLOCK_LEN {
            return Err(Error::Domain(format!(
                "block {k} has more than {MAX_BLOCK_LEN} digits"
            )));
        }
        Ok(DigitBlock { k, decade })
    }

    pub fn value(&self) -> u64 {
        self.k
    }

    /// `floor(log10 k)`.
    pub fn decade(&self) -> i32 {
        self.decade
    }

    /// Number of digits in the block (the block length `m`).
    pub fn order(&self) -> u32 {
        self.decade as u32 + 1
    }

    /// Count of integers in this block's decade, `N_d = 10^(d+1) - 10^d`.
    pub fn decade_population(&self) -> u64 {
        let low = 10u64.pow(self.decade as u32);
        10 * low - low
    }
}

fn decimal_digits(k: u64) -> u32 {
    let mut digits = 1;
    let mut v = k;
    while v >= 10 {
        v /= 10;
        digits += 1;
    }
    digits
}

/// Significant digits and decade of an `f64`, from its shortest
/// round-trip decimal form: `x = d_0.d_1 d_2 ... * 10^exponent`.
#[derive(Debug, Clone)]
pub(crate) struct DecimalParts {
    pub digits: Vec<u8>,
    pub exponent: i32,
}

pub(crate) fn decimal_parts(x: f64) -> Result<DecimalParts> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!(
            "expected a finite positive value, got {x}"
        )));
    }
    // `{:e}` prints the shortest decimal that round-trips, e.g. "3.14e2".
    let repr = format!("{x:e}");
    let (mantissa, exp) = repr
        .split_once('e')
        .expect("f64 LowerExp always contains 'e'");
    let exponent: i32 = exp.parse().expect("f64 LowerExp exponent is an integer");
    let digits: Vec<u8> = mantissa
        .bytes()
        .filter(|b| b.is_ascii_digit())
        .map(|b| b - b'0')
        .collect();
    debug_assert!(digits[0] >= 1 && digits[0] <= 9);
    Ok(DecimalParts { digits, exponent })
}

impl DecimalParts {
    /// The mantissa `d_0.d_1 d_2 ...` as an `f64` in `[1, 10)`.
    fn mantissa(&self) -> f64 {
        let mut s = String::with_capacity(self.digits.len() + 1);
        s.push((b'0' + self.digits[0]) as char);
        if self.digits.len() > 1 {
            s.push('.');
            for &d in &self.digits[1..] {
                s.push((b'0' + d) as char);
            }
        }
        s.parse().expect("mantissa digits parse as f64")
    }

    /// First `m` significant digits as an integer in `[10^(m-1), 10^m)`.
    fn leading(&self, m: u32) -> u64 {
        let mut block = 0u64;
        for i in 0..m as usize {
            let d = self.digits.get(i).copied().unwrap_or(0);
            block = block * 10 + d as u64;
        }
        block
    }
}

/// Split `x > 0` into decade exponent and phase, `x = 10^(exponent + s)`.
///
/// Computed from the decimal representation rather than a raw `log10`, so
/// powers of ten give `s = 0` exactly and the phase of `10 * x` is bit-equal
/// to the phase of `x` whenever the decimal shift is exact.
pub fn log_phase(x: f64) -> Result<LogPhase> {
    let parts = decimal_parts(x)?;
    let mantissa = parts.mantissa();
    let phase = if mantissa == 1.0 {
        0.0
    } else {
        let s = mantissa.log10();
        // Guarded correction: a mantissa in [1, 10) must land in [0, 1).
        s.clamp(0.0, 1.0 - f64::EPSILON / 2.0)
    };
    Ok(LogPhase {
        exponent: parts.exponent,
        phase,
    })
}

/// Leading `m`-digit block of `x`: the integer formed by the first `m`
/// significant digits, in `[10^(m-1), 10^m - 1]`.
///
/// ```
/// use digitlaw::leading_block;
/// assert_eq!(leading_block(std::f64::consts::PI, 3).unwrap().value(), 314);
/// assert_eq!(leading_block(0.0025, 2).unwrap().value(), 25);
/// assert_eq!(leading_block(1.0, 4).unwrap().value(), 1000);
/// ```
pub fn leading_block(x: f64, m: u32) -> Result<DigitBlock> {
    if m == 0 || m > MAX_BLOCK_LEN {
        return Err(Error::Domain(format!(
            "block length must be in 1..={MAX_BLOCK_LEN}, got {m}"
        )));
    }
    let parts = decimal_parts(x)?;
    DigitBlock::new(parts.leading(m))
}

/// Indicator kernel `V(k, x)`: 1 iff the leading block of `x` with the same
/// number of digits as `k` equals `k`, in any decade.
///
/// Equivalent to `floor(log10(x/k)) - floor(log10(x/(k+1)))`, but evaluated
/// through the digit string so block boundaries are exact.
pub fn indicator_v(k: &DigitBlock, x: f64) -> Result<u8> {
    let block = leading_block(x, k.order())?;
    Ok(u8::from(block.value() == k.value()))
}

/// Window kernel `M(s, x)`: 1 iff the phase of `x` is strictly below `s`.
///
/// `M(0, x) = 0` and `M(1, x) = 1` for every `x`.
pub fn window_m(s: f64, x: f64) -> Result<u8> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain(format!("window bound s={s} outside [0, 1]")));
    }
    let lp = log_phase(x)?;
    Ok(u8::from(lp.phase < s))
}

/// A raw input record prior to canonicalization.
#[derive(Debug, Clone)]
pub enum RawEntry {
    Number(f64),
    Text(String),
}

impl From<f64> for RawEntry {
    fn from(v: f64) -> Self {
        RawEntry::Number(v)
    }
}

impl From<&str> for RawEntry {
    fn from(v: &str) -> Self {
        RawEntry::Text(v.to_string())
    }
}

/// A canonicalized dataset: finite, strictly positive values, with a count
/// of how many raw entries were dropped on the way in.
#[derive(Debug, Clone, Default)]
pub struct Dataset {
    values: Vec<f64>,
    n_dropped: usize,
}

impl Dataset {
    /// Keep the finite, strictly positive values; count the rest as dropped.
    pub fn from_values<I: IntoIterator<Item = f64>>(values: I) -> Self {
        let mut kept = Vec::new();
        let mut dropped = 0usize;
        for v in values {
            if v.is_finite() && v > 0.0 {
                kept.push(v);
            } else {
                dropped += 1;
            }
        }
        Dataset {
            values: kept,
            n_dropped: dropped,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Raw entries rejected during canonicalization.
    pub fn n_dropped(&self) -> usize {
        self.n_dropped
    }
}

/// Canonicalize a mixed collection of numbers and text.
///
/// Text is accepted in plain decimal or scientific notation. Entries that
/// are non-positive, zero, non-finite, or unparseable (including anything
/// with locale separators such as `"1,24"`) are dropped and counted, never
/// guessed at. This operation cannot fail; an empty result is valid.
pub fn canonicalize<I: IntoIterator<Item = RawEntry>>(raw: I) -> Dataset {
    let mut kept = Vec::new();
    let mut dropped = 0usize;
    for entry in raw {
        let parsed = match entry {
            RawEntry::Number(v) => Some(v),
            RawEntry::Text(t) => t.trim().parse::<f64>().ok(),
        };
        match parsed {
            Some(v) if v.is_finite() && v > 0.0 => kept.push(v),
            _ => dropped += 1,
        }
    }
    Dataset {
        values: kept,
        n_dropped: dropped,
    }
}

/// Relative frequencies of leading `m`-digit blocks in a dataset.
#[derive(Debug, Clone)]
pub struct BlockFrequencyTable {
    order: u32,
    entries: BTreeMap<u64, f64>,
    total: usize,
}

impl BlockFrequencyTable {
    /// Block length `m`.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Frequency of block `k`, zero if the block never occurs.
    pub fn frequency(&self, k: u64) -> f64 {
        self.entries.get(&k).copied().unwrap_or(0.0)
    }

    /// Observed blocks and their frequencies, ascending by block.
    pub fn entries(&self) -> &BTreeMap<u64, f64> {
        &self.entries
    }

    pub fn total(&self) -> usize {
        self.total
    }
}

/// Empirical block frequencies by direct counting:
/// `rho_m(k) = (1/N) * sum_i V(k, x_i)`.
pub fn empirical_block_freq(data: &Dataset, m: u32) -> Result<BlockFrequencyTable> {
    if data.is_empty() {
        return Err(Error::EmptyInput(
            "block frequencies need a non-empty dataset".into(),
        ));
    }
    if m == 0 || m > MAX_BLOCK_LEN {
        return Err(Error::Domain(format!(
            "block length must be in 1..={MAX_BLOCK_LEN}, got {m}"
        )));
    }
    let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
    for &x in data.values() {
        let block = leading_block(x, m)?;
        *counts.entry(block.value()).or_insert(0) += 1;
    }
    let n = data.len() as f64;
    let entries = counts.into_iter().map(|(k, c)| (k, c as f64 / n)).collect();
    Ok(BlockFrequencyTable {
        order: m,
        entries,
        total: data.len(),
    })
}

/// Empirical windowed profile: the step function
/// `G_hat(s) = (1/N) * #{ i : phase(x_i) <= s }`.
pub fn empirical_profile(data: &Dataset) -> Result<crate::profiles::Profile> {
    if data.is_empty() {
        return Err(Error::EmptyInput(
            "an empirical profile needs a non-empty dataset".into(),
        ));
    }
    let mut phases = Vec::with_capacity(data.len());
    for &x in data.values() {
        phases.push(log_phase(x)?.phase);
    }
    Ok(crate::profiles::Profile::empirical(phases))
}
