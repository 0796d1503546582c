//! Charge-level alphabet and the forbidden-pattern set.
//!
//! A GF(q) symbol is carried around as its charge level: `0` for the zero
//! symbol and `p + 1` for the power `α^p`. The highest level `q - 1` is the
//! level that leaks charge into its neighbours, and the constraint forbids
//! any run of `1..=x` lower levels squeezed between two cells at that level.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Largest alphabet supported. Levels must fit a byte in the binary stream format.
pub const MAX_Q: u32 = 256;

/// The triple `(q, m, x)` describing one code instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodeParams {
    q: u32,
    m: usize,
    x: usize,
}

impl CodeParams {
    pub fn new(q: u32, m: usize, x: usize) -> Result<Self> {
        if !(2..=MAX_Q).contains(&q) {
            return Err(Error::InvalidParams(format!(
                "q = {q} must lie in [2, {MAX_Q}]"
            )));
        }
        if m < 1 {
            return Err(Error::InvalidParams("m must be at least 1".into()));
        }
        if x < 1 {
            return Err(Error::InvalidParams("x must be at least 1".into()));
        }
        Ok(Self { q, m, x })
    }

    /// Alphabet size (levels per cell).
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Codeword length in symbols.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Longest forbidden gap between two top-level cells.
    pub fn x(&self) -> usize {
        self.x
    }

    /// The top charge level `q - 1`, i.e. the level of `α^{q-2}`.
    pub fn top_level(&self) -> Level {
        Level((self.q - 1) as u8)
    }

    /// Same code with another codeword length.
    pub fn with_m(&self, m: usize) -> Result<Self> {
        Self::new(self.q, m, self.x)
    }

    pub fn check_level(&self, level: Level) -> Result<()> {
        if u32::from(level.0) < self.q {
            Ok(())
        } else {
            Err(Error::InvalidLevel {
                level: level.0.into(),
                max: self.q - 1,
            })
        }
    }

    pub fn check_levels(&self, levels: &[Level]) -> Result<()> {
        levels.iter().try_for_each(|&l| self.check_level(l))
    }
}

impl fmt::Display for CodeParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(q={}, m={}, x={})", self.q, self.m, self.x)
    }
}

/// Charge level of one cell, in `[0, q - 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
#[repr(transparent)]
pub struct Level(pub u8);

impl Level {
    pub const ZERO: Level = Level(0);

    pub fn get(self) -> u8 {
        self.0
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Converts a plain byte slice into levels.
pub fn levels(raw: &[u8]) -> Vec<Level> {
    raw.iter().copied().map(Level).collect()
}

/// A GF(q) element, described as zero or a power of the primitive element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Symbol {
    Zero,
    Power(u32),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Symbol::Zero => f.write_str("0"),
            Symbol::Power(0) => f.write_str("1"),
            Symbol::Power(1) => f.write_str("α"),
            Symbol::Power(p) => write!(f, "α^{p}"),
        }
    }
}

pub fn level_of_symbol(symbol: Symbol, params: &CodeParams) -> Result<Level> {
    match symbol {
        Symbol::Zero => Ok(Level::ZERO),
        Symbol::Power(p) if p <= params.q - 2 => Ok(Level((p + 1) as u8)),
        Symbol::Power(p) => Err(Error::InvalidSymbol {
            power: p,
            max: params.q - 2,
        }),
    }
}

pub fn symbol_of_level(level: Level, params: &CodeParams) -> Result<Symbol> {
    params.check_level(level)?;
    Ok(match level.0 {
        0 => Symbol::Zero,
        a => Symbol::Power(u32::from(a) - 1),
    })
}

/// Number of forbidden patterns, `Σ_{r=1}^{x} (q-1)^r`.
pub fn forbidden_set_size(params: &CodeParams) -> BigUint {
    let base = BigUint::from(params.q - 1);
    let mut power = BigUint::one();
    let mut total = BigUint::zero();
    for _ in 0..params.x {
        power *= &base;
        total += &power;
    }
    total
}

/// One occurrence of `(q-1) μ^gap (q-1)` inside a level sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Violation {
    /// Offset (from the left of the sequence) of the opening top-level cell.
    pub start: usize,
    /// Number of lower-level cells between the two top-level cells.
    pub gap: usize,
}

impl Violation {
    /// Offset of the closing top-level cell.
    pub fn end(&self) -> usize {
        self.start + self.gap + 1
    }
}

/// Reports every forbidden pattern in `seq`. Overlapping occurrences are
/// reported individually.
pub fn scan_forbidden(seq: &[Level], params: &CodeParams) -> Result<Vec<Violation>> {
    params.check_levels(seq)?;
    let top = params.top_level();
    let mut hits = Vec::new();
    let mut last_top: Option<usize> = None;
    for (pos, &level) in seq.iter().enumerate() {
        if level == top {
            if let Some(prev) = last_top {
                let gap = pos - prev - 1;
                if (1..=params.x).contains(&gap) {
                    hits.push(Violation { start: prev, gap });
                }
            }
            last_top = Some(pos);
        }
    }
    Ok(hits)
}

/// True when `seq` contains no forbidden pattern. Levels must already be in range.
pub fn satisfies_constraint(seq: &[Level], params: &CodeParams) -> bool {
    let top = params.top_level();
    let mut last_top: Option<usize> = None;
    for (pos, &level) in seq.iter().enumerate() {
        if level == top {
            if let Some(prev) = last_top {
                let gap = pos - prev - 1;
                if gap >= 1 && gap <= params.x {
                    return false;
                }
            }
            last_top = Some(pos);
        }
    }
    true
}

/// A fixed-length word of levels, stored left to right.
///
/// Index 0 of [`Codeword::levels`] is the left-most symbol, which sits at
/// position `m - 1` in the right-to-left numbering used by the indexing
/// rule; [`Codeword::at`] uses that numbering.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Codeword {
    levels: Vec<Level>,
}

impl Codeword {
    /// Builds a codeword after checking every level against `params`.
    /// The constraint itself is not checked here.
    pub fn new(levels: Vec<Level>, params: &CodeParams) -> Result<Self> {
        params.check_levels(&levels)?;
        Ok(Self { levels })
    }

    pub fn from_raw(raw: &[u8], params: &CodeParams) -> Result<Self> {
        Self::new(levels(raw), params)
    }

    pub(crate) fn from_levels_unchecked(levels: Vec<Level>) -> Self {
        Self { levels }
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn into_levels(self) -> Vec<Level> {
        self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// Level at position `i`, counting from the right-most symbol (`i = 0`).
    /// Positions at or beyond the length read as level 0.
    pub fn at(&self, i: usize) -> Level {
        let m = self.levels.len();
        if i < m {
            self.levels[m - 1 - i]
        } else {
            Level::ZERO
        }
    }

    /// Left-most symbol.
    pub fn lms(&self) -> Level {
        self.levels[0]
    }

    /// Right-most symbol.
    pub fn rms(&self) -> Level {
        self.levels[self.levels.len() - 1]
    }

    /// Renders the word in GF notation, e.g. `1α²α²10α`.
    pub fn symbolic(&self) -> String {
        self.levels
            .iter()
            .map(|l| match l.0 {
                0 => "0".to_string(),
                1 => "1".to_string(),
                2 => "α".to_string(),
                a => format!("α{}", superscript(u32::from(a) - 1)),
            })
            .collect()
    }
}

fn superscript(n: u32) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).unwrap() as usize])
        .collect()
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.levels.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}
