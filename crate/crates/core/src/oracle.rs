//! Brute-force ground truth for small codes.
//!
//! Nothing here uses the cardinality recursion or the ranking rule: words are
//! generated exhaustively in lexicographic order and filtered by the pattern
//! scanner, so the results can be compared against the fast paths.

use crate::alphabet::{satisfies_constraint, CodeParams, Codeword, Level};
use crate::error::{Error, Result};

/// Largest `q^m` that [`enumerate`] will walk.
pub const ENUMERATION_LIMIT: u64 = 10_000_000;

/// Every constrained word of one length, in ascending lexicographic order.
#[derive(Debug, Clone)]
pub struct EnumeratedCode {
    params: CodeParams,
    words: Vec<Codeword>,
}

impl EnumeratedCode {
    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn words(&self) -> &[Codeword] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

pub fn enumerate(params: &CodeParams) -> Result<EnumeratedCode> {
    let (q, m) = (params.q(), params.m());
    let total = (q as u64)
        .checked_pow(m as u32)
        .filter(|&t| t <= ENUMERATION_LIMIT)
        .ok_or(Error::InstanceTooLarge {
            q,
            m,
            limit: ENUMERATION_LIMIT,
        })?;
    let top = (q - 1) as u8;
    let mut word = vec![Level::ZERO; m];
    let mut words = Vec::new();
    for _ in 0..total {
        if satisfies_constraint(&word, params) {
            words.push(Codeword::from_levels_unchecked(word.clone()));
        }
        // odometer, right-most symbol least significant
        for slot in word.iter_mut().rev() {
            if slot.0 == top {
                slot.0 = 0;
            } else {
                slot.0 += 1;
                break;
            }
        }
    }
    Ok(EnumeratedCode {
        params: *params,
        words,
    })
}

/// Position of `cw` in the enumerated list.
pub fn brute_force_index(code: &EnumeratedCode, cw: &Codeword) -> Result<usize> {
    code.words.binary_search(cw).map_err(|_| Error::NotFound)
}

/// Sizes of the three groups a code splits into by its leading symbols.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GroupCounts {
    /// Words starting with a level below the top.
    pub low_start: u64,
    /// Words starting with two top-level symbols.
    pub top_top: u64,
    /// Words starting with a top-level symbol followed by a lower level.
    pub top_low: u64,
}

pub fn group_counts(code: &EnumeratedCode) -> GroupCounts {
    let top = code.params.top_level();
    let mut g = GroupCounts {
        low_start: 0,
        top_top: 0,
        top_low: 0,
    };
    for w in &code.words {
        let lv = w.levels();
        if lv[0] != top {
            g.low_start += 1;
        } else if lv.get(1) == Some(&top) {
            g.top_top += 1;
        } else if lv.len() > 1 {
            g.top_low += 1;
        }
    }
    g
}

/// Counts constrained strings of length `len` by depth-first generation of
/// every valid prefix.
pub fn count_valid_strings(q: u32, x: usize, len: usize) -> u64 {
    count_valid_strings_by_length(q, x, len)[len]
}

/// Entry `L` holds the number of constrained strings of length `L`, for
/// `L` in `0..=max_len`. Each appended top-level symbol is checked against
/// the preceding `x + 1` symbols directly.
pub fn count_valid_strings_by_length(q: u32, x: usize, max_len: usize) -> Vec<u64> {
    fn closes_pattern(prefix: &[u8], top: u8, x: usize) -> bool {
        // prefix ends just before a new top-level symbol
        for r in 1..=x.min(prefix.len().saturating_sub(1)) {
            let open = prefix.len() - 1 - r;
            if prefix[open] == top && prefix[open + 1..].iter().all(|&s| s != top) {
                return true;
            }
        }
        false
    }

    fn walk(prefix: &mut Vec<u8>, q: u32, x: usize, counts: &mut [u64]) {
        counts[prefix.len()] += 1;
        if prefix.len() + 1 == counts.len() {
            return;
        }
        let top = (q - 1) as u8;
        for s in 0..q as u8 {
            if s == top && closes_pattern(prefix, top, x) {
                continue;
            }
            prefix.push(s);
            walk(prefix, q, x, counts);
            prefix.pop();
        }
    }

    let mut counts = vec![0u64; max_len + 1];
    walk(&mut Vec::with_capacity(max_len), q, x, &mut counts);
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::levels;

    fn params(q: u32, m: usize, x: usize) -> CodeParams {
        CodeParams::new(q, m, x).unwrap()
    }

    #[test]
    fn small_codes() {
        assert_eq!(enumerate(&params(4, 3, 1)).unwrap().len(), 61);
        let c = enumerate(&params(2, 2, 1)).unwrap();
        let raw: Vec<Vec<u8>> = c
            .words()
            .iter()
            .map(|w| w.levels().iter().map(|l| l.0).collect())
            .collect();
        assert_eq!(raw, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn ranks_by_position() {
        let p = params(4, 6, 2);
        let c = enumerate(&p).unwrap();
        assert_eq!(
            c.words()[1850].levels(),
            levels(&[2, 0, 3, 3, 2, 0]).as_slice()
        );
        let w = Codeword::from_raw(&[0, 1, 1, 3, 0, 2], &p).unwrap();
        assert_eq!(brute_force_index(&c, &w).unwrap(), 334);
        let zero = Codeword::from_raw(&[0; 6], &p).unwrap();
        assert_eq!(brute_force_index(&c, &zero).unwrap(), 0);
        let last = c.words().last().unwrap();
        assert_eq!(last.levels(), &[Level(3); 6]);
        let bad = Codeword::from_raw(&[3, 0, 3, 0, 0, 0], &p).unwrap();
        assert_eq!(brute_force_index(&c, &bad), Err(Error::NotFound));
    }

    #[test]
    fn sorted_strictly() {
        let c = enumerate(&params(3, 7, 2)).unwrap();
        assert!(c.words().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn guard() {
        assert!(matches!(
            enumerate(&params(4, 12, 1)),
            Err(Error::InstanceTooLarge { .. })
        ));
        assert!(enumerate(&params(10, 7, 1)).is_ok());
    }

    #[test]
    fn dfs_counts_agree_with_enumeration() {
        for (q, x, m) in [(2u32, 1usize, 10usize), (3, 2, 8), (4, 1, 6), (4, 3, 7)] {
            let c = enumerate(&params(q, m, x)).unwrap();
            assert_eq!(count_valid_strings(q, x, m), c.len() as u64);
        }
        assert_eq!(count_valid_strings(4, 1, 0), 1);
    }

    #[test]
    fn groups_partition_code() {
        let c = enumerate(&params(4, 5, 1)).unwrap();
        let g = group_counts(&c);
        assert_eq!(g.low_start + g.top_top + g.top_low, c.len() as u64);
        // (q-1) N(4) = 3 * 232
        assert_eq!(g.low_start, 696);
    }
}
