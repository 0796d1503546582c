//! Capacity of the constraint and the rates reached by self-clocked codes.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::alphabet::CodeParams;
use crate::cardinality::CardinalityTable;
use crate::error::{Error, Result};

/// State of the constraint automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FstdState {
    /// No top-level symbol within reach.
    Free,
    /// Last symbol was top-level.
    Top,
    /// A top-level symbol followed by exactly this many lower levels (`1..=x`).
    Gap(usize),
}

/// Finite-state transition diagram of the constraint. Entry `[i][j]` counts
/// the symbols that move state `i` to state `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fstd {
    states: Vec<FstdState>,
    adjacency: Vec<Vec<u64>>,
}

const FREE: usize = 0;
const TOP: usize = 1;

impl Fstd {
    pub fn states(&self) -> &[FstdState] {
        &self.states
    }

    pub fn adjacency(&self) -> &[Vec<u64>] {
        &self.adjacency
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    /// Number of constrained strings of length `len`, as walks starting from
    /// the free state.
    pub fn count_strings(&self, len: usize) -> BigUint {
        let n = self.dim();
        let mut v = vec![BigUint::zero(); n];
        v[FREE] = BigUint::one();
        for _ in 0..len {
            let mut next = vec![BigUint::zero(); n];
            for (i, vi) in v.iter().enumerate() {
                if vi.is_zero() {
                    continue;
                }
                for (j, &a) in self.adjacency[i].iter().enumerate() {
                    if a != 0 {
                        next[j] += vi * a;
                    }
                }
            }
            v = next;
        }
        v.into_iter().sum()
    }

    /// Perron eigenvalue by power iteration, stopping once the Collatz–Wielandt
    /// bounds agree to `rel_tol`.
    pub fn perron_eigenvalue(&self, rel_tol: f64, max_iter: usize) -> Result<f64> {
        let n = self.dim();
        let a: Vec<Vec<f64>> = self
            .adjacency
            .iter()
            .map(|row| row.iter().map(|&v| v as f64).collect())
            .collect();
        let mut v = vec![1.0f64; n];
        for _ in 0..max_iter {
            let w: Vec<f64> = a
                .iter()
                .map(|row| row.iter().zip(&v).map(|(aij, vj)| aij * vj).sum())
                .collect();
            let (lo, hi) = w
                .iter()
                .zip(&v)
                .map(|(wi, vi)| wi / vi)
                .fold((f64::INFINITY, 0.0f64), |(lo, hi), r| {
                    (lo.min(r), hi.max(r))
                });
            if hi - lo <= rel_tol * hi {
                return Ok(0.5 * (lo + hi));
            }
            let norm = w.iter().cloned().fold(0.0f64, f64::max);
            v = w.into_iter().map(|wi| wi / norm).collect();
        }
        Err(Error::NoConvergence(max_iter))
    }
}

/// The `(x + 2)`-state automaton: free, top, and the `x` gap states.
pub fn build_fstd(params: &CodeParams) -> Fstd {
    let x = params.x();
    let low = u64::from(params.q() - 1);
    let n = x + 2;
    let gap = |j: usize| j + 1; // Gap(j) -> row index
    let mut adjacency = vec![vec![0u64; n]; n];
    adjacency[FREE][FREE] = low;
    adjacency[FREE][TOP] = 1;
    adjacency[TOP][TOP] = 1;
    adjacency[TOP][gap(1)] = low;
    for j in 1..x {
        adjacency[gap(j)][gap(j + 1)] = low;
    }
    adjacency[gap(x)][FREE] = low;

    let mut states = vec![FstdState::Free, FstdState::Top];
    states.extend((1..=x).map(FstdState::Gap));
    Fstd { states, adjacency }
}

pub const POWER_ITERATION_TOL: f64 = 1e-12;
pub const POWER_ITERATION_CAP: usize = 1_000_000;

/// Capacity of the constraint in bits per symbol.
pub fn capacity(params: &CodeParams) -> Result<f64> {
    let lambda = build_fstd(params).perron_eigenvalue(POWER_ITERATION_TOL, POWER_ITERATION_CAP)?;
    Ok(lambda.log2())
}

/// Rate figures for one self-clocked code.
#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub q: u32,
    pub m: usize,
    pub x: usize,
    /// Message bits per codeword, `s^c`.
    pub message_bits: u64,
    /// `s^c / (m + x)`, information bits per coded symbol.
    pub rate: f64,
    pub normalized_rate: f64,
    pub capacity: f64,
    pub normalized_capacity: f64,
}

impl RateReport {
    /// Rate rounded half-up to four decimals, computed on the exact fraction.
    pub fn rate_rounded(&self) -> f64 {
        round_fraction_half_up(self.message_bits, (self.m + self.x) as u64, 4)
    }

    pub fn normalized_rate_rounded(&self) -> f64 {
        round_half_up(self.normalized_rate, 4)
    }
}

/// Rounds `num / den` half-up to `digits` decimals using integer arithmetic.
pub fn round_fraction_half_up(num: u64, den: u64, digits: u32) -> f64 {
    let scale = 10u128.pow(digits);
    let scaled = (2 * u128::from(num) * scale + u128::from(den)) / (2 * u128::from(den));
    scaled as f64 / scale as f64
}

pub fn round_half_up(v: f64, digits: u32) -> f64 {
    let scale = 10f64.powi(digits as i32);
    (v * scale + 0.5).floor() / scale
}

pub fn rate(params: &CodeParams, table: &CardinalityTable) -> Result<RateReport> {
    let (q, m, x) = (params.q(), params.m(), params.x());
    let message_bits = table.message_length(m)?;
    let bits_per_level = f64::from(q).log2();
    let rate = message_bits as f64 / (m + x) as f64;
    let capacity = capacity(params)?;
    Ok(RateReport {
        q,
        m,
        x,
        message_bits,
        rate,
        normalized_rate: rate / bits_per_level,
        capacity,
        normalized_capacity: capacity / bits_per_level,
    })
}

/// Clocked codewords left unused when messages are written in `base`
/// (2 for binary, `q` for q-ary messages).
pub fn omitted_codeword_count(table: &CardinalityTable, m: usize, base: u32) -> Result<BigUint> {
    let q = table.params().q();
    if base != 2 && base != q {
        return Err(Error::InvalidParams(format!(
            "message base must be 2 or {q}, got {base}"
        )));
    }
    let clocked = table.clocked_cardinality(m)?;
    if clocked.is_zero() {
        return Err(Error::InvalidParams(format!(
            "self-clocked code of length {m} carries no messages"
        )));
    }
    let mut used = BigUint::one();
    loop {
        let next = &used * base;
        if next > clocked {
            break;
        }
        used = next;
    }
    Ok(clocked - used)
}

/// One alphabet's column of a rate table.
#[derive(Debug, Clone)]
pub struct RateColumn {
    pub q: u32,
    pub rows: Vec<RateReport>,
    pub capacity: f64,
    pub normalized_capacity: f64,
}

#[derive(Debug, Clone)]
pub struct RateTable {
    pub x: usize,
    pub columns: Vec<RateColumn>,
}

/// Code lengths tabulated for `x = 1`, per alphabet size.
pub const REFERENCE_GRID_X1: [(u32, [usize; 5]); 4] = [
    (4, [14, 26, 49, 77, 97]),
    (8, [18, 26, 44, 71, 103]),
    (16, [18, 27, 45, 66, 111]),
    (32, [19, 29, 49, 70, 117]),
];

/// Code lengths tabulated for `x = 2`, per alphabet size.
pub const REFERENCE_GRID_X2: [(u32, [usize; 5]); 4] = [
    (4, [20, 38, 57, 76, 96]),
    (8, [22, 32, 52, 73, 108]),
    (16, [24, 34, 51, 73, 100]),
    (32, [25, 36, 56, 77, 108]),
];

/// Reference grid for `x`, if one is tabulated.
pub fn reference_grid(x: usize) -> Option<Vec<(u32, Vec<usize>)>> {
    let grid: &[(u32, [usize; 5])] = match x {
        1 => &REFERENCE_GRID_X1,
        2 => &REFERENCE_GRID_X2,
        _ => return None,
    };
    Some(grid.iter().map(|(q, ms)| (*q, ms.to_vec())).collect())
}

/// Rate reports for every `(q, m)` in `grid` at a fixed `x`.
pub fn generate_rate_table(x: usize, grid: &[(u32, Vec<usize>)]) -> Result<RateTable> {
    let columns = grid
        .iter()
        .map(|(q, ms)| {
            let m_max = ms.iter().copied().max().unwrap_or(2).max(2);
            let base = CodeParams::new(*q, m_max, x)?;
            let table = CardinalityTable::build(base, m_max)?;
            let rows = ms
                .iter()
                .map(|&m| rate(&base.with_m(m)?, &table))
                .collect::<Result<Vec<_>>>()?;
            let capacity = capacity(&base)?;
            Ok(RateColumn {
                q: *q,
                rows,
                capacity,
                normalized_capacity: capacity / f64::from(*q).log2(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RateTable { x, columns })
}

impl RateTable {
    /// Aligned plain text, one column group per alphabet size.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "x = {}", self.x);
        let header: Vec<String> = self
            .columns
            .iter()
            .map(|c| format!("{:>8} {:>8} {:>8}", format!("q={}", c.q), "rate", "norm"))
            .collect();
        let _ = writeln!(out, "{}", header.join(" | "));
        let depth = self.columns.iter().map(|c| c.rows.len()).max().unwrap_or(0);
        for r in 0..depth {
            let cells: Vec<String> = self
                .columns
                .iter()
                .map(|c| match c.rows.get(r) {
                    Some(row) => format!(
                        "{:>8} {:>8.4} {:>8.4}",
                        format!("m={}", row.m),
                        row.rate_rounded(),
                        row.normalized_rate_rounded()
                    ),
                    None => format!("{:>26}", ""),
                })
                .collect();
            let _ = writeln!(out, "{}", cells.join(" | "));
        }
        let caps: Vec<String> = self
            .columns
            .iter()
            .map(|c| {
                format!(
                    "{:>8} {:>8.4} {:>8.4}",
                    "capacity",
                    round_half_up(c.capacity, 4),
                    round_half_up(c.normalized_capacity, 4)
                )
            })
            .collect();
        let _ = writeln!(out, "{}", caps.join(" | "));
        out
    }

    /// CSV with header `q,m,x,s_c,rate,normalized_rate,capacity`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("q,m,x,s_c,rate,normalized_rate,capacity\n");
        for c in &self.columns {
            for row in &c.rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{:.4},{:.4},{:.4}",
                    row.q,
                    row.m,
                    row.x,
                    row.message_bits,
                    row.rate_rounded(),
                    row.normalized_rate_rounded(),
                    round_half_up(row.capacity, 4)
                );
            }
        }
        out
    }
}
