//! q-ary asymmetric lexicographically-ordered constrained (QA-LOCO) codes.
//!
//! Cells of a multi-level Flash device programmed to the top charge level
//! disturb neighbouring lower-level cells. A QA-LOCO code with parameters
//! `(q, m, x)` contains every length-`m` word over `q` levels that never puts
//! `1..=x` lower levels between two top-level cells. Words are ranked
//! lexicographically with a closed-form rule, so encoding and decoding reduce
//! to big-integer comparisons and additions against a precomputed table.
//!
//! ```
//! use qaloco::{BitMessage, Code, CodeParams};
//!
//! let code = Code::new(CodeParams::new(4, 6, 1).unwrap()).unwrap();
//! assert_eq!(code.message_bits(), 11);
//! let msg: BitMessage = "11011001110".parse().unwrap();
//! let word = code.encode(&msg).unwrap();
//! assert_eq!(word.to_string(), "1 3 3 1 0 2");
//! assert_eq!(code.decode(&word).unwrap(), msg);
//! ```

pub mod alphabet;
pub mod analysis;
pub mod cardinality;
pub mod codec;
pub mod error;
pub mod oracle;
pub mod stream;

pub use alphabet::{
    forbidden_set_size, level_of_symbol, levels, scan_forbidden, symbol_of_level, CodeParams,
    Codeword, Level, Symbol, Violation,
};
pub use analysis::{
    build_fstd, capacity, generate_rate_table, omitted_codeword_count, rate, Fstd, RateReport,
    RateTable,
};
pub use cardinality::{CardinalityTable, ExactRational};
pub use codec::{
    codeword_of_index, codeword_of_index_traced, decode_codeword, encode_message, gamma_at,
    index_of_codeword, BitMessage, Code, CodewordIndex, GammaProfile,
};
pub use error::{Error, Result};
pub use stream::{
    bridging_pattern, decode_stream, decode_stream_strict, encode_stream, is_clocked_codeword,
    max_run, run_bound, StreamEncoder, SymbolStream,
};
