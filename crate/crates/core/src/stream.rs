//! Symbol streams: codewords joined by bridging patterns.
//!
//! Between two consecutive codewords `x` bridging symbols are written. They
//! are all top-level when both abutting edge symbols are top-level and all
//! zero otherwise, which keeps forbidden patterns from forming across the
//! seam. Together with dropping the constant words `0^m` and `e^m` this bounds
//! every run of equal levels by `2(m - 1) + x`.

use std::io::{self, Read, Write};

use crate::alphabet::{CodeParams, Codeword, Level};
use crate::cardinality::CardinalityTable;
use crate::codec::{decode_codeword, encode_message, BitMessage};
use crate::error::{Error, Result};

/// Levels as written to consecutive cells, plus the code they came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolStream {
    params: CodeParams,
    levels: Vec<Level>,
}

impl SymbolStream {
    /// Wraps raw levels, checking range and framing against `params`.
    pub fn new(params: CodeParams, levels: Vec<Level>) -> Result<Self> {
        params.check_levels(&levels)?;
        frame_count(levels.len(), params.m(), params.x())?;
        Ok(Self { params, levels })
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
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

    /// Number of codewords carried.
    pub fn codeword_count(&self) -> usize {
        frame_count(self.levels.len(), self.params.m(), self.params.x())
            .expect("validated on construction")
    }

    /// Codeword frames, left to right.
    pub fn frames(&self) -> impl Iterator<Item = &[Level]> + '_ {
        let (m, x) = (self.params.m(), self.params.x());
        (0..self.codeword_count()).map(move |k| &self.levels[k * (m + x)..k * (m + x) + m])
    }

    /// Bridge preceding frame `k` (`k >= 1`).
    pub fn bridge(&self, k: usize) -> &[Level] {
        let (m, x) = (self.params.m(), self.params.x());
        let start = k * (m + x) - x;
        &self.levels[start..start + x]
    }

    /// Space-separated decimal levels.
    pub fn to_text(&self) -> String {
        format_levels(&self.levels)
    }

    /// Parses one text line; an empty line is a stream of zero codewords.
    pub fn parse_text(line: &str, params: CodeParams) -> Result<Self> {
        let levels = line
            .split_ascii_whitespace()
            .map(|tok| {
                tok.parse::<u8>()
                    .map(Level)
                    .map_err(|_| Error::Format(format!("bad level {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(params, levels)
    }
}

/// Total stream length for `n` codewords.
pub fn stream_length(n: usize, m: usize, x: usize) -> usize {
    if n == 0 {
        0
    } else {
        n * m + (n - 1) * x
    }
}

fn frame_count(len: usize, m: usize, x: usize) -> Result<usize> {
    if len == 0 {
        return Ok(0);
    }
    if len < m || !(len - m).is_multiple_of(m + x) {
        return Err(Error::Framing { len, m, x });
    }
    Ok((len - m) / (m + x) + 1)
}

pub fn format_levels(levels: &[Level]) -> String {
    let mut s = String::with_capacity(levels.len() * 2);
    for (i, l) in levels.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        s.push_str(&l.0.to_string());
    }
    s
}

/// The `x` symbols written between a codeword ending in `prev_rms` and one
/// starting with `next_lms`.
pub fn bridging_pattern(prev_rms: Level, next_lms: Level, params: &CodeParams) -> Vec<Level> {
    let top = params.top_level();
    let fill = if prev_rms == top && next_lms == top {
        top
    } else {
        Level::ZERO
    };
    vec![fill; params.x()]
}

/// False exactly for the two constant words `0^m` and `e^m`.
pub fn is_clocked_codeword(cw: &Codeword, params: &CodeParams) -> bool {
    let levels = cw.levels();
    let top = params.top_level();
    !(levels.iter().all(|&l| l == Level::ZERO) || levels.iter().all(|&l| l == top))
}

/// `2(m - 1) + x`, the longest run a clocked stream can contain.
pub fn run_bound(params: &CodeParams) -> usize {
    2 * (params.m() - 1) + params.x()
}

/// Longest run of one level, returned as `(level, length)`. Ties go to the
/// earliest run.
pub fn max_run(levels: &[Level]) -> Result<(Level, usize)> {
    let (&first, rest) = levels
        .split_first()
        .ok_or_else(|| Error::InvalidParams("max_run of an empty stream".into()))?;
    let mut best = (first, 1);
    let mut cur = (first, 1);
    for &l in rest {
        if l == cur.0 {
            cur.1 += 1;
        } else {
            cur = (l, 1);
        }
        if cur.1 > best.1 {
            best = cur;
        }
    }
    Ok(best)
}

/// Incremental stream writer; remembers the right-most symbol of the last
/// codeword so the next bridge can be chosen.
#[derive(Debug)]
pub struct StreamEncoder<'a> {
    table: &'a CardinalityTable,
    m: usize,
    prev_rms: Option<Level>,
    levels: Vec<Level>,
}

impl<'a> StreamEncoder<'a> {
    pub fn new(table: &'a CardinalityTable, m: usize) -> Self {
        Self {
            table,
            m,
            prev_rms: None,
            levels: Vec::new(),
        }
    }

    /// Right-most symbol of the last emitted codeword, `None` before the first.
    pub fn prev_rms(&self) -> Option<Level> {
        self.prev_rms
    }

    pub fn push_message(&mut self, b: &BitMessage) -> Result<()> {
        let cw = encode_message(b, self.table, self.m)?;
        self.push_codeword(&cw);
        Ok(())
    }

    /// Appends a codeword that is already known to be valid.
    pub fn push_codeword(&mut self, cw: &Codeword) {
        if let Some(prev) = self.prev_rms {
            let bridge = bridging_pattern(prev, cw.lms(), self.table.params());
            self.levels.extend_from_slice(&bridge);
        }
        self.levels.extend_from_slice(cw.levels());
        self.prev_rms = Some(cw.rms());
    }

    pub fn finish(self) -> SymbolStream {
        let params = self
            .table
            .params()
            .with_m(self.m)
            .expect("m validated by the table");
        SymbolStream {
            params,
            levels: self.levels,
        }
    }
}

pub fn encode_stream(
    messages: &[BitMessage],
    table: &CardinalityTable,
    m: usize,
) -> Result<SymbolStream> {
    let mut enc = StreamEncoder::new(table, m);
    for b in messages {
        enc.push_message(b)?;
    }
    Ok(enc.finish())
}

fn frames_of(
    levels: &[Level],
    m: usize,
    x: usize,
) -> Result<impl Iterator<Item = (usize, &[Level])>> {
    let n = frame_count(levels.len(), m, x)?;
    Ok((0..n).map(move |k| (k, &levels[k * (m + x)..k * (m + x) + m])))
}

fn decode_frame(frame: &[Level], k: usize, table: &CardinalityTable) -> Result<BitMessage> {
    let cw = Codeword::new(frame.to_vec(), table.params()).map_err(|e| Error::Frame {
        frame: k,
        source: Box::new(e),
    })?;
    decode_codeword(&cw, table).map_err(|e| Error::Frame {
        frame: k,
        source: Box::new(e),
    })
}

/// Splits a stream into frames, skips the bridges and decodes every frame.
pub fn decode_stream(
    levels: &[Level],
    table: &CardinalityTable,
    m: usize,
) -> Result<Vec<BitMessage>> {
    frames_of(levels, m, table.params().x())?
        .map(|(k, frame)| decode_frame(frame, k, table))
        .collect()
}

/// Like [`decode_stream`] but also re-derives each bridge and rejects mismatches.
pub fn decode_stream_strict(
    levels: &[Level],
    table: &CardinalityTable,
    m: usize,
) -> Result<Vec<BitMessage>> {
    let params = table.params();
    let x = params.x();
    let mut out = Vec::new();
    for (k, frame) in frames_of(levels, m, x)? {
        if k > 0 {
            let start = k * (m + x) - x;
            let found = &levels[start..start + x];
            let expected = bridging_pattern(levels[start - 1], frame[0], params);
            if found != expected.as_slice() {
                return Err(Error::BridgeMismatch {
                    frame: k,
                    expected: expected.iter().map(|l| l.0).collect(),
                    found: found.iter().map(|l| l.0).collect(),
                });
            }
        }
        out.push(decode_frame(frame, k, table)?);
    }
    Ok(out)
}

const MAGIC: &[u8; 4] = b"QALS";
const VERSION: u8 = 0x01;

/// Writes one binary record: magic, version, `q`, `m`, `x` (u16 LE),
/// codeword count (u64 LE), then one byte per level.
pub fn write_binary<W: Write>(stream: &SymbolStream, mut w: W) -> io::Result<()> {
    let p = stream.params();
    let to_u16 = |v: usize, name: &str| {
        u16::try_from(v).map_err(|_| {
            io::Error::new(
                io::ErrorKind::InvalidInput,
                format!("{name} = {v} exceeds u16"),
            )
        })
    };
    w.write_all(MAGIC)?;
    w.write_all(&[VERSION])?;
    w.write_all(&to_u16(p.q() as usize, "q")?.to_le_bytes())?;
    w.write_all(&to_u16(p.m(), "m")?.to_le_bytes())?;
    w.write_all(&to_u16(p.x(), "x")?.to_le_bytes())?;
    w.write_all(&(stream.codeword_count() as u64).to_le_bytes())?;
    let bytes: Vec<u8> = stream.levels().iter().map(|l| l.0).collect();
    w.write_all(&bytes)
}

/// Reads one binary record, or `None` at a clean end of input.
pub fn read_binary<R: Read>(mut r: R) -> Result<Option<SymbolStream>> {
    let mut header = [0u8; 19];
    let mut filled = 0;
    while filled < header.len() {
        let n = r
            .read(&mut header[filled..])
            .map_err(|e| Error::Format(e.to_string()))?;
        if n == 0 {
            break;
        }
        filled += n;
    }
    if filled == 0 {
        return Ok(None);
    }
    if filled < header.len() {
        return Err(Error::Format("truncated header".into()));
    }
    if &header[..4] != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    if header[4] != VERSION {
        return Err(Error::Format(format!("unsupported version {}", header[4])));
    }
    let u16_at = |k: usize| u16::from_le_bytes([header[k], header[k + 1]]) as usize;
    let (q, m, x) = (u16_at(5), u16_at(7), u16_at(9));
    let count = u64::from_le_bytes(header[11..19].try_into().unwrap());
    let params = CodeParams::new(q as u32, m, x)?;
    let count =
        usize::try_from(count).map_err(|_| Error::Format("codeword count too large".into()))?;
    let len = count
        .checked_mul(m + x)
        .map(|v| v.saturating_sub(if count > 0 { x } else { 0 }))
        .ok_or_else(|| Error::Format("codeword count too large".into()))?;
    let mut body = vec![0u8; len];
    r.read_exact(&mut body)
        .map_err(|_| Error::Format(format!("truncated body, expected {len} levels")))?;
    SymbolStream::new(params, body.into_iter().map(Level).collect()).map(Some)
}
