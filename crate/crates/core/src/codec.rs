//! Lexicographic ranking and unranking of constrained words.
//!
//! The rank of a word `c = c_{m-1} … c_0` is
//! `Σ a_i (q-1)^{γ_i} N(i - γ_i)`, where `γ_i = x - k_i + 1` when the nearest
//! top-level symbol to the left of position `i` is `k_i <= x` symbols away,
//! and `0` otherwise. Unranking walks the same terms left to right and peels
//! off the largest multiple that still fits in the residual.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::alphabet::{satisfies_constraint, scan_forbidden, CodeParams, Codeword, Level};
use crate::cardinality::CardinalityTable;
use crate::error::{Error, Result};

/// Lexicographic index of a word within the code.
pub type CodewordIndex = BigUint;

/// `γ_i` from the (up to `x`) levels at positions `i+1, i+2, …`.
///
/// `higher[0]` is the level at position `i + 1`. Missing entries stand for
/// positions at or beyond the codeword length, which read as level 0.
pub fn gamma_at(higher: &[Level], params: &CodeParams) -> usize {
    let top = params.top_level();
    higher
        .iter()
        .take(params.x())
        .position(|&l| l == top)
        .map_or(0, |j| params.x() - j)
}

/// Per-position `γ_i` for a whole codeword; `gammas()[i]` belongs to position `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaProfile {
    gammas: Vec<usize>,
}

impl GammaProfile {
    pub fn of(cw: &Codeword, params: &CodeParams) -> Self {
        let m = cw.len();
        let gammas = (0..m)
            .map(|i| {
                let higher: Vec<Level> = (i + 1..(i + 1 + params.x()).min(m))
                    .map(|j| cw.at(j))
                    .collect();
                gamma_at(&higher, params)
            })
            .collect();
        Self { gammas }
    }

    pub fn gammas(&self) -> &[usize] {
        &self.gammas
    }

    pub fn at(&self, i: usize) -> usize {
        self.gammas[i]
    }
}

/// Tracks the distance back to the last top-level symbol while scanning left
/// to right, yielding `γ` for the next position.
#[derive(Clone, Copy)]
struct GammaCursor {
    x: usize,
    top: Level,
    dist: usize,
}

impl GammaCursor {
    fn new(params: &CodeParams) -> Self {
        Self {
            x: params.x(),
            top: params.top_level(),
            dist: usize::MAX,
        }
    }

    #[inline]
    fn gamma(&self) -> usize {
        if self.dist <= self.x {
            self.x - self.dist + 1
        } else {
            0
        }
    }

    #[inline]
    fn advance(&mut self, level: Level) {
        self.dist = if level == self.top {
            1
        } else {
            self.dist.saturating_add(1)
        };
    }
}

fn check_length(table: &CardinalityTable, m: usize) -> Result<()> {
    if m < 1 || m > table.m_max() {
        return Err(Error::OutOfRange {
            what: "codeword length",
            value: m as i64,
            low: 1,
            high: table.m_max() as i64,
        });
    }
    Ok(())
}

/// Rank of `cw` among all constrained words of its length.
pub fn index_of_codeword(cw: &Codeword, table: &CardinalityTable) -> Result<CodewordIndex> {
    let params = table.params();
    let m = cw.len();
    check_length(table, m)?;
    params.check_levels(cw.levels())?;
    if !satisfies_constraint(cw.levels(), params) {
        let hits = scan_forbidden(cw.levels(), params)?;
        return Err(Error::InvalidCodeword {
            count: hits.len(),
            first: hits[0].start,
        });
    }
    Ok(rank_unchecked(cw.levels(), table))
}

pub(crate) fn rank_unchecked(levels: &[Level], table: &CardinalityTable) -> BigUint {
    let m = levels.len();
    let mut cursor = GammaCursor::new(table.params());
    let mut g = BigUint::zero();
    for (idx, &level) in levels.iter().enumerate() {
        let i = m - 1 - idx;
        if level.0 != 0 {
            g += table.weight(i, cursor.gamma()) * u32::from(level.0);
        }
        cursor.advance(level);
    }
    g
}

/// Inverse of [`index_of_codeword`].
pub fn codeword_of_index(
    g: &CodewordIndex,
    table: &CardinalityTable,
    m: usize,
) -> Result<Codeword> {
    unrank(g, table, m, None)
}

/// Like [`codeword_of_index`], also returning the residual left after each
/// symbol is fixed (left-most symbol first).
pub fn codeword_of_index_traced(
    g: &CodewordIndex,
    table: &CardinalityTable,
    m: usize,
) -> Result<(Codeword, Vec<BigUint>)> {
    let mut trace = Vec::with_capacity(m);
    let cw = unrank(g, table, m, Some(&mut trace))?;
    Ok((cw, trace))
}

fn unrank(
    g: &BigUint,
    table: &CardinalityTable,
    m: usize,
    mut trace: Option<&mut Vec<BigUint>>,
) -> Result<Codeword> {
    check_length(table, m)?;
    let size = table.count(m)?;
    if g >= &size {
        return Err(Error::OutOfRange {
            what: "codeword index",
            value: i64::try_from(g.clone()).unwrap_or(i64::MAX),
            low: 0,
            high: i64::try_from(size - 1u32).unwrap_or(i64::MAX),
        });
    }
    let params = table.params();
    let top = params.q() - 1;
    let mut cursor = GammaCursor::new(params);
    let mut residual = g.clone();
    let mut out = Vec::with_capacity(m);
    for i in (0..m).rev() {
        let w = table.weight(i, cursor.gamma());
        let a = select_level(&residual, w, top);
        if a != 0 {
            residual -= w * a;
        }
        let level = Level(a as u8);
        out.push(level);
        cursor.advance(level);
        if let Some(t) = trace.as_deref_mut() {
            t.push(residual.clone());
        }
    }
    assert!(residual.is_zero(), "residual not exhausted");
    Ok(Codeword::from_levels_unchecked(out))
}

/// Largest `a` in `[0, top]` with `a * w <= residual`.
#[inline]
fn select_level(residual: &BigUint, w: &BigUint, top: u32) -> u32 {
    if residual < w {
        return 0;
    }
    if residual >= &(w * top) {
        return top;
    }
    // w <= residual < top * w, so the answer lies in [1, top - 1]
    let (mut lo, mut hi) = (1u32, top - 1);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if &(w * mid) <= residual {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// A binary message, most significant bit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BitMessage {
    bits: Vec<bool>,
}

impl BitMessage {
    pub fn new(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// `value` written in exactly `len` bits. Higher bits of `value` are dropped.
    pub fn from_value(value: &BigUint, len: usize) -> Self {
        let bits = (0..len).rev().map(|k| value.bit(k as u64)).collect();
        Self { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Integer value, reading the first bit as most significant.
    pub fn value(&self) -> BigUint {
        let mut v = BigUint::zero();
        for &b in &self.bits {
            v <<= 1u32;
            if b {
                v += BigUint::one();
            }
        }
        v
    }
}

impl FromStr for BitMessage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidBit(other)),
            })
            .collect::<Result<_>>()?;
        Ok(Self { bits })
    }
}

impl fmt::Display for BitMessage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Maps a message of `s^c` bits to the codeword at index `value(b) + 1`.
pub fn encode_message(b: &BitMessage, table: &CardinalityTable, m: usize) -> Result<Codeword> {
    check_length(table, m)?;
    let s = table.message_length(m)?;
    if b.len() as u64 != s {
        return Err(Error::MessageLength {
            expected: s,
            actual: b.len(),
        });
    }
    codeword_of_index(&(b.value() + 1u32), table, m)
}

/// Inverse of [`encode_message`]; rejects words outside the message space.
pub fn decode_codeword(cw: &Codeword, table: &CardinalityTable) -> Result<BitMessage> {
    let m = cw.len();
    check_length(table, m)?;
    let s = table.message_length(m)?;
    let g = index_of_codeword(cw, table)?;
    if g.is_zero() || g > (BigUint::one() << s) {
        return Err(Error::NonMessageCodeword {
            index: g.to_string(),
            bits: s,
        });
    }
    Ok(BitMessage::from_value(&(g - 1u32), s as usize))
}

/// A code instance bundled with its table and message length.
#[derive(Debug, Clone)]
pub struct Code {
    params: CodeParams,
    table: CardinalityTable,
    message_bits: u64,
}

impl Code {
    pub fn new(params: CodeParams) -> Result<Self> {
        if params.m() < 2 {
            return Err(Error::InvalidParams(format!(
                "self-clocked codes need m >= 2, got {}",
                params.m()
            )));
        }
        let table = CardinalityTable::for_params(params)?;
        let message_bits = table.message_length(params.m())?;
        Ok(Self {
            params,
            table,
            message_bits,
        })
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn table(&self) -> &CardinalityTable {
        &self.table
    }

    pub fn m(&self) -> usize {
        self.params.m()
    }

    /// `s^c`, bits carried by one codeword.
    pub fn message_bits(&self) -> u64 {
        self.message_bits
    }

    pub fn size(&self) -> BigUint {
        self.table.count(self.params.m()).expect("table covers m")
    }

    pub fn encode(&self, b: &BitMessage) -> Result<Codeword> {
        encode_message(b, &self.table, self.params.m())
    }

    pub fn decode(&self, cw: &Codeword) -> Result<BitMessage> {
        if cw.len() != self.params.m() {
            return Err(Error::LengthMismatch {
                expected: self.params.m(),
                actual: cw.len(),
            });
        }
        decode_codeword(cw, &self.table)
    }

    pub fn rank(&self, cw: &Codeword) -> Result<CodewordIndex> {
        index_of_codeword(cw, &self.table)
    }

    pub fn unrank(&self, g: &CodewordIndex) -> Result<Codeword> {
        codeword_of_index(g, &self.table, self.params.m())
    }
}
