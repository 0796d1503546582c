//! Exact code sizes `N_q(m, x)` and the weighted terms consumed by the codec.
//!
//! The recursion
//!
//! ```text
//! N(m) = q N(m-1) - (q-1) N(m-2) + (q-1)^{x+1} N(m-x-2),   m >= 2
//! N(m) = (q-1)^m for m <= 0,   N(1) = q
//! ```
//!
//! reaches into negative lengths, where the boundary values are fractions.
//! The table therefore keeps every entry as an exact rational and checks
//! that all entries from `m = 1` up are integers.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use crate::alphabet::CodeParams;
use crate::error::{Error, Result};

pub type ExactRational = BigRational;

/// Memoized cardinalities for one `(q, x)` pair, from `-(x + 1)` to `m_max`.
#[derive(Debug, Clone)]
pub struct CardinalityTable {
    params: CodeParams,
    m_max: usize,
    /// `values[k]` holds `N(k - (x + 1))`.
    values: Vec<ExactRational>,
    /// `weights[i][gamma]` holds `(q-1)^gamma N(i - gamma)` for `0 <= i <= m_max`.
    weights: Vec<Vec<BigUint>>,
}

impl CardinalityTable {
    /// Builds the table for every length up to `m_max`.
    pub fn build(params: CodeParams, m_max: usize) -> Result<Self> {
        if m_max < 1 {
            return Err(Error::InvalidParams("m_max must be at least 1".into()));
        }
        let x = params.x();
        let q = BigInt::from(params.q());
        let qm1 = BigInt::from(params.q() - 1);
        let offset = x + 1;
        let lift = BigRational::from_integer(Pow::pow(&qm1, (x + 1) as u32));

        let mut values: Vec<ExactRational> = Vec::with_capacity(offset + m_max + 1);
        for k in 0..=offset {
            // i = k - offset, runs -(x+1) ..= 0
            let depth = (offset - k) as u32;
            let denom: BigInt = Pow::pow(&qm1, depth);
            values.push(BigRational::new(BigInt::one(), denom));
        }
        values.push(BigRational::from_integer(q.clone()));
        let qr = BigRational::from_integer(q);
        let qm1r = BigRational::from_integer(qm1.clone());
        for i in 2..=m_max {
            let at = |j: isize| &values[(j + offset as isize) as usize];
            let i = i as isize;
            let next = &qr * at(i - 1) - &qm1r * at(i - 2) + &lift * at(i - x as isize - 2);
            values.push(next);
        }

        for (k, v) in values.iter().enumerate().skip(offset + 1) {
            if !v.is_integer() || !v.is_positive() {
                return Err(Error::InvalidParams(format!(
                    "cardinality at length {} is not a positive integer",
                    k - offset
                )));
            }
        }

        let qm1u = BigUint::from(params.q() - 1);
        let mut weights = Vec::with_capacity(m_max + 1);
        for i in 0..=m_max {
            let row = (0..=x)
                .map(|gamma| {
                    if gamma >= i {
                        // (q-1)^gamma (q-1)^(i-gamma) collapses to (q-1)^i
                        Pow::pow(&qm1u, i as u32)
                    } else {
                        let n = values[i - gamma + offset].to_integer();
                        let n = n.to_biguint().expect("positive cardinality");
                        Pow::pow(&qm1u, gamma as u32) * n
                    }
                })
                .collect();
            weights.push(row);
        }

        Ok(Self {
            params,
            m_max,
            values,
            weights,
        })
    }

    /// Table sized for `params.m()`.
    pub fn for_params(params: CodeParams) -> Result<Self> {
        Self::build(params, params.m().max(1))
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    fn lowest(&self) -> i64 {
        -(self.params.x() as i64 + 1)
    }

    /// `N_q(i, x)` as an exact rational.
    pub fn cardinality(&self, i: i64) -> Result<&ExactRational> {
        let low = self.lowest();
        if i < low || i > self.m_max as i64 {
            return Err(Error::OutOfRange {
                what: "cardinality index",
                value: i,
                low,
                high: self.m_max as i64,
            });
        }
        Ok(&self.values[(i - low) as usize])
    }

    /// `N_q(m, x)` for a length `m >= 0`, as an integer.
    pub fn count(&self, m: usize) -> Result<BigUint> {
        let v = self.cardinality(m as i64)?;
        Ok(v.to_integer().to_biguint().expect("positive cardinality"))
    }

    /// `(q-1)^gamma N_q(i - gamma, x)`, always an integer.
    pub fn weighted_term(&self, i: usize, gamma: usize) -> Result<&BigUint> {
        if i > self.m_max {
            return Err(Error::OutOfRange {
                what: "symbol position",
                value: i as i64,
                low: 0,
                high: self.m_max as i64,
            });
        }
        if gamma > self.params.x() {
            return Err(Error::OutOfRange {
                what: "gamma",
                value: gamma as i64,
                low: 0,
                high: self.params.x() as i64,
            });
        }
        Ok(&self.weights[i][gamma])
    }

    /// Unchecked access for the codec hot path.
    #[inline]
    pub(crate) fn weight(&self, i: usize, gamma: usize) -> &BigUint {
        &self.weights[i][gamma]
    }

    /// Size of the self-clocked code, `N_q(m, x) - 2`.
    pub fn clocked_cardinality(&self, m: usize) -> Result<BigUint> {
        if m < 2 {
            return Err(Error::InvalidParams(format!(
                "self-clocked codes need m >= 2, got {m}"
            )));
        }
        Ok(self.count(m)? - 2u32)
    }

    /// Message length `s^c = floor(log2(N_q(m, x) - 2))` in bits.
    pub fn message_length(&self, m: usize) -> Result<u64> {
        let clocked = self.clocked_cardinality(m)?;
        if clocked.is_zero() {
            return Err(Error::InvalidParams(format!(
                "self-clocked code of length {m} carries no messages"
            )));
        }
        Ok(clocked.bits() - 1)
    }
}

/// Converts a small exact value to `f64`, mostly for display.
pub fn approx(value: &ExactRational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}
