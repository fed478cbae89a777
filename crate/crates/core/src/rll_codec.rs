//! Run-length-limited encoder with a single redundant symbol, built on
//! sequence replacement.
//!
//! Encoding appends `A` to the message, then repeatedly removes the leftmost
//! forbidden window and appends a pointer `R α` (`R` of length `l`,
//! `α != A`) naming the removed window and its position in the current word.
//! The word length never changes. Decoding replays the pointers right to
//! left until the word ends in `A`.
//!
//! Pointer layout: `index = (p - 1) * |F| + rank(f)`, written as the
//! mixed-radix number whose high digit selects `α` among the non-`A`
//! symbols and whose low `l` base-`q` digits form `R`.

use thiserror::Error;

use crate::alphabet::{self, CompositeAlphabet, Seq, Symbol, SYM_A};
use crate::capacity::{self, CapacityError, ForbiddenSet};
use crate::verifier;

/// Largest number of decode replays before input is declared corrupt.
const MAX_DECODE_STEPS: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RllError {
    #[error(transparent)]
    Capacity(#[from] CapacityError),
    #[error("codeword length {n} must be at least l + 2 = {min}")]
    TooShort { n: usize, min: usize },
    #[error("codeword length {n} exceeds the one-redundancy bound {bound}")]
    AboveBound { n: usize, bound: u64 },
    #[error("expected a word of length {expected}, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("position {p} outside 1..={max}")]
    PositionOutOfRange { p: usize, max: usize },
    #[error("window is not in the forbidden set")]
    NotForbidden,
    #[error("pointer index {index} exceeds the pointer space {space}")]
    MarkerOutOfRange { index: u64, space: u64 },
    #[error("pointer tail symbol must not be A")]
    MarkerTailIsA,
    #[error("codeword has a forbidden window at {start}")]
    ForbiddenWindow { start: usize },
    #[error("pointer names position {p} but the reinserted word is inconsistent there")]
    Inconsistent { p: usize },
    #[error("decoding did not terminate within {0} steps")]
    DecodeLimit(usize),
    #[error("no separator pair keeps the junction after block {block} clean")]
    NoSeparator { block: usize },
    #[error("malformed block stream: {0}")]
    BadStream(String),
}

/// The pointer `R α` that replaces a removed forbidden window.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ReplacementMarker {
    pub pointer: Seq,
    pub alpha: Symbol,
}

impl ReplacementMarker {
    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        self.pointer.iter().copied().chain(std::iter::once(self.alpha))
    }
}

/// Encoder/decoder for one `(alphabet, l, n)` triple.
#[derive(Debug, Clone)]
pub struct RllCodec {
    alphabet: CompositeAlphabet,
    l: usize,
    n: usize,
    forbidden: ForbiddenSet,
    /// `q^l`
    pointer_radix: u64,
}

impl RllCodec {
    /// Fails unless `l + 2 <= n <= one_redundancy_bound(l, alphabet)`.
    pub fn new(alphabet: &CompositeAlphabet, l: usize, n: usize) -> Result<Self, RllError> {
        let forbidden = capacity::forbidden_set(l, alphabet)?;
        if n < l + 2 {
            return Err(RllError::TooShort { n, min: l + 2 });
        }
        let bound = capacity::one_redundancy_bound(l, alphabet)?;
        if n as u64 > bound {
            return Err(RllError::AboveBound { n, bound });
        }
        Ok(RllCodec {
            alphabet: alphabet.clone(),
            l,
            n,
            forbidden,
            pointer_radix: (alphabet.len() as u64).pow(l as u32),
        })
    }

    pub fn alphabet(&self) -> &CompositeAlphabet {
        &self.alphabet
    }

    pub fn l(&self) -> usize {
        self.l
    }

    /// Codeword length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Message length, `n - 1`.
    pub fn message_len(&self) -> usize {
        self.n - 1
    }

    pub fn forbidden(&self) -> &ForbiddenSet {
        &self.forbidden
    }

    /// `(q - 1) q^l`
    pub fn pointer_space(&self) -> u64 {
        (self.alphabet.len() as u64 - 1) * self.pointer_radix
    }

    /// Pointer for removing `f` at 1-based position `p`.
    pub fn marker_encode(&self, p: usize, f: &[Symbol]) -> Result<ReplacementMarker, RllError> {
        let max = self.n - self.l;
        if p == 0 || p > max {
            return Err(RllError::PositionOutOfRange { p, max });
        }
        let rank = self.forbidden.rank(f).ok_or(RllError::NotForbidden)?;
        let index = (p as u64 - 1) * self.forbidden.len() as u64 + rank as u64;
        if index >= self.pointer_space() {
            return Err(RllError::MarkerOutOfRange { index, space: self.pointer_space() });
        }
        let q = self.alphabet.len() as u64;
        let alpha = (1 + index / self.pointer_radix) as Symbol;
        let mut low = index % self.pointer_radix;
        let mut pointer = vec![SYM_A; self.l];
        for slot in pointer.iter_mut().rev() {
            *slot = (low % q) as Symbol;
            low /= q;
        }
        Ok(ReplacementMarker { pointer: Seq(pointer), alpha })
    }

    /// Inverse of [`marker_encode`](Self::marker_encode).
    pub fn marker_decode(&self, marker: &ReplacementMarker) -> Result<(usize, Seq), RllError> {
        if marker.alpha == SYM_A {
            return Err(RllError::MarkerTailIsA);
        }
        if marker.pointer.len() != self.l {
            return Err(RllError::WrongLength { expected: self.l, got: marker.pointer.len() });
        }
        let q = self.alphabet.len() as u64;
        let low = marker.pointer.iter().fold(0u64, |acc, &s| acc * q + s as u64);
        let index = (marker.alpha as u64 - 1) * self.pointer_radix + low;
        let f_len = self.forbidden.len() as u64;
        let p = (index / f_len) as usize + 1;
        let max = self.n - self.l;
        if p > max {
            return Err(RllError::PositionOutOfRange { p, max });
        }
        let f = self.forbidden.word((index % f_len) as usize).ok_or(RllError::NotForbidden)?;
        Ok((p, f))
    }

    /// 0-based start of the leftmost forbidden window.
    fn leftmost_forbidden(&self, y: &[Symbol]) -> Option<usize> {
        let w = self.l + 1;
        (0..=y.len().saturating_sub(w))
            .take_while(|_| y.len() >= w)
            .find(|&i| self.forbidden.contains(&y[i..i + w]))
    }

    pub fn encode(&self, x: &[Symbol]) -> Result<Seq, RllError> {
        self.encode_counted(x).map(|(c, _)| c)
    }

    /// Encodes and also reports how many replacements were made.
    pub fn encode_counted(&self, x: &[Symbol]) -> Result<(Seq, usize), RllError> {
        if x.len() != self.n - 1 {
            return Err(RllError::WrongLength { expected: self.n - 1, got: x.len() });
        }
        let mut y = Vec::with_capacity(self.n + self.l + 1);
        y.extend_from_slice(x);
        y.push(SYM_A);
        let mut iterations = 0;
        while let Some(start) = self.leftmost_forbidden(&y) {
            let f: Vec<Symbol> = y.drain(start..start + self.l + 1).collect();
            let marker = self.marker_encode(start + 1, &f)?;
            y.extend(marker.symbols());
            iterations += 1;
        }
        Ok((Seq(y), iterations))
    }

    pub fn decode(&self, c: &[Symbol]) -> Result<Seq, RllError> {
        if c.len() != self.n {
            return Err(RllError::WrongLength { expected: self.n, got: c.len() });
        }
        if let Some(start) = self.leftmost_forbidden(c) {
            return Err(RllError::ForbiddenWindow { start });
        }
        let mut y = c.to_vec();
        let w = self.l + 1;
        for _ in 0..MAX_DECODE_STEPS {
            if *y.last().expect("n >= l + 2") == SYM_A {
                y.pop();
                return Ok(Seq(y));
            }
            let tail = y.split_off(self.n - w);
            let marker = ReplacementMarker { pointer: Seq(tail[..self.l].to_vec()), alpha: tail[self.l] };
            let (p, f) = self.marker_decode(&marker)?;
            let at = p - 1;
            y.splice(at..at, f.iter().copied());
            if self.leftmost_forbidden(&y) != Some(at) {
                return Err(RllError::Inconsistent { p });
            }
        }
        Err(RllError::DecodeLimit(MAX_DECODE_STEPS))
    }

    /// First ordered pair of distinct pure bases that leaves no forbidden
    /// window across `left ++ pair ++ right`.
    pub fn select_separator(&self, left: &[Symbol], right: &[Symbol]) -> Option<[Symbol; 2]> {
        select_separator(&self.alphabet, self.l, left, right)
    }

    /// Encodes a message of any length: chunks from
    /// [`frame_message`](crate::alphabet::frame_message), one codeword each,
    /// joined by two-symbol separators. A message of exactly `n - 1` symbols
    /// is a single plain codeword.
    pub fn encode_stream(&self, x: &[Symbol]) -> Result<Seq, RllError> {
        let blocks = alphabet::frame_message(x, self.n - 1)
            .map_err(|e| RllError::BadStream(e.to_string()))?
            .iter()
            .map(|chunk| self.encode(chunk))
            .collect::<Result<Vec<_>, _>>()?;
        join_blocks(&self.alphabet, self.l, &blocks)
    }

    pub fn decode_stream(&self, c: &[Symbol]) -> Result<Seq, RllError> {
        if !(c.len() + 2).is_multiple_of(self.n + 2) {
            return Err(RllError::BadStream(format!(
                "length {} is not a whole number of {}-symbol blocks",
                c.len(),
                self.n
            )));
        }
        let count = (c.len() + 2) / (self.n + 2);
        let chunks = split_blocks(c, &vec![self.n; count])?
            .into_iter()
            .map(|block| self.decode(block))
            .collect::<Result<Vec<_>, _>>()?;
        alphabet::unframe_message(&chunks, self.n - 1).map_err(|e| RllError::BadStream(e.to_string()))
    }
}

/// First ordered pair of distinct pure bases (in `A, T, C, G` order) such
/// that `left ++ pair ++ right` has no forbidden window crossing the pair.
pub fn select_separator(
    alphabet: &CompositeAlphabet,
    l: usize,
    left: &[Symbol],
    right: &[Symbol],
) -> Option<[Symbol; 2]> {
    let tail = &left[left.len().saturating_sub(l)..];
    let head = &right[..right.len().min(l)];
    let mut probe = Vec::with_capacity(tail.len() + 2 + head.len());
    for b1 in 0..4 {
        for b2 in 0..4 {
            if b1 == b2 {
                continue;
            }
            probe.clear();
            probe.extend_from_slice(tail);
            probe.extend_from_slice(&[b1, b2]);
            probe.extend_from_slice(head);
            if verifier::is_rll(alphabet, &probe, l) {
                return Some([b1, b2]);
            }
        }
    }
    None
}

/// Concatenates encoded blocks with verified two-symbol separators.
pub fn join_blocks(alphabet: &CompositeAlphabet, l: usize, blocks: &[Seq]) -> Result<Seq, RllError> {
    let mut out: Vec<Symbol> = Vec::new();
    for (i, block) in blocks.iter().enumerate() {
        if i > 0 {
            let sep =
                select_separator(alphabet, l, &out, block).ok_or(RllError::NoSeparator { block: i - 1 })?;
            out.extend_from_slice(&sep);
        }
        out.extend_from_slice(block);
    }
    Ok(Seq(out))
}

/// Splits `c` into blocks of the given lengths separated by two symbols.
pub fn split_blocks<'a>(c: &'a [Symbol], lens: &[usize]) -> Result<Vec<&'a [Symbol]>, RllError> {
    let total: usize = lens.iter().sum::<usize>() + 2 * lens.len().saturating_sub(1);
    if c.len() != total {
        return Err(RllError::WrongLength { expected: total, got: c.len() });
    }
    let mut out = Vec::with_capacity(lens.len());
    let mut at = 0;
    for (i, &len) in lens.iter().enumerate() {
        if i > 0 {
            at += 2;
        }
        out.push(&c[at..at + len]);
        at += len;
    }
    Ok(out)
}

/// Fixed-length run-length encoder made of one or more blocks, each within
/// the one-redundancy bound, joined by two-symbol separators.
#[derive(Debug, Clone)]
pub struct BlockedRll {
    lens: Vec<usize>,
    codecs: Vec<RllCodec>,
    l: usize,
}

impl BlockedRll {
    /// Splits a codeword of length `total` into as few near-equal blocks as
    /// the bound allows.
    pub fn new(alphabet: &CompositeAlphabet, l: usize, total: usize) -> Result<Self, RllError> {
        let bound = capacity::one_redundancy_bound(l, alphabet)? as usize;
        if total < l + 2 {
            return Err(RllError::TooShort { n: total, min: l + 2 });
        }
        if bound < l + 2 {
            return Err(RllError::AboveBound { n: l + 2, bound: bound as u64 });
        }
        let count = (total + 2).div_ceil(bound + 2);
        let body = total - 2 * (count - 1);
        let (base, extra) = (body / count, body % count);
        if base < l + 2 {
            return Err(RllError::TooShort { n: base, min: l + 2 });
        }
        let lens: Vec<usize> = (0..count).map(|i| base + (i < extra) as usize).collect();
        let mut codecs: Vec<RllCodec> = Vec::new();
        for &len in &lens {
            if !codecs.iter().any(|c| c.n() == len) {
                codecs.push(RllCodec::new(alphabet, l, len)?);
            }
        }
        Ok(BlockedRll { lens, codecs, l })
    }

    fn codec(&self, len: usize) -> &RllCodec {
        self.codecs.iter().find(|c| c.n() == len).expect("codec per block length")
    }

    pub fn block_lens(&self) -> &[usize] {
        &self.lens
    }

    pub fn codeword_len(&self) -> usize {
        self.lens.iter().sum::<usize>() + 2 * (self.lens.len() - 1)
    }

    pub fn message_len(&self) -> usize {
        self.lens.iter().map(|n| n - 1).sum()
    }

    /// `codeword_len - message_len`
    pub fn redundancy(&self) -> usize {
        self.codeword_len() - self.message_len()
    }

    pub fn encode(&self, x: &[Symbol]) -> Result<Seq, RllError> {
        if x.len() != self.message_len() {
            return Err(RllError::WrongLength { expected: self.message_len(), got: x.len() });
        }
        let mut blocks = Vec::with_capacity(self.lens.len());
        let mut at = 0;
        for &len in &self.lens {
            blocks.push(self.codec(len).encode(&x[at..at + len - 1])?);
            at += len - 1;
        }
        join_blocks(self.codecs[0].alphabet(), self.l, &blocks)
    }

    pub fn decode(&self, c: &[Symbol]) -> Result<Seq, RllError> {
        let mut out = Vec::with_capacity(self.message_len());
        for (block, &len) in split_blocks(c, &self.lens)?.into_iter().zip(&self.lens) {
            out.extend(self.codec(len).decode(block)?.into_inner());
        }
        Ok(Seq(out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma1() -> CompositeAlphabet {
        CompositeAlphabet::parse("M=AC").unwrap()
    }

    #[test]
    fn params_are_validated() {
        let a = sigma1();
        assert!(matches!(RllCodec::new(&a, 3, 4), Err(RllError::TooShort { .. })));
        assert!(matches!(RllCodec::new(&a, 6, 250), Err(RllError::AboveBound { bound: 249, .. })));
        assert!(RllCodec::new(&a, 6, 249).is_ok());
    }

    #[test]
    fn zero_index_marker() {
        let a = sigma1();
        let codec = RllCodec::new(&a, 2, 7).unwrap();
        let f0 = codec.forbidden().word(0).unwrap();
        let m = codec.marker_encode(1, &f0).unwrap();
        assert_eq!(a.format(&m.pointer), "AA");
        assert_eq!(a.name(m.alpha), 'T');
        assert_eq!(codec.marker_decode(&m).unwrap(), (1, f0));
    }

    #[test]
    fn marker_errors() {
        let a = sigma1();
        let codec = RllCodec::new(&a, 2, 7).unwrap();
        let f0 = codec.forbidden().word(0).unwrap();
        assert!(matches!(codec.marker_encode(0, &f0), Err(RllError::PositionOutOfRange { .. })));
        assert!(matches!(codec.marker_encode(6, &f0), Err(RllError::PositionOutOfRange { .. })));
        assert_eq!(codec.marker_encode(1, &a.parse_word("ATC").unwrap()), Err(RllError::NotForbidden));
        let bad = ReplacementMarker { pointer: a.parse_word("AA").unwrap(), alpha: SYM_A };
        assert_eq!(codec.marker_decode(&bad), Err(RllError::MarkerTailIsA));
        // highest pointer names a position past n - l for this short n
        let top = ReplacementMarker { pointer: a.parse_word("MM").unwrap(), alpha: 4 };
        assert!(matches!(codec.marker_decode(&top), Err(RllError::PositionOutOfRange { .. })));
    }

    #[test]
    fn clean_message_gets_sentinel() {
        let a = sigma1();
        let codec = RllCodec::new(&a, 3, 10).unwrap();
        let x = a.parse_word("ATCGATCGA").unwrap();
        let c = codec.encode(&x).unwrap();
        assert_eq!(a.format(&c), "ATCGATCGAA");
        assert_eq!(codec.decode(&c).unwrap(), x);
    }

    #[test]
    fn replacement_example() {
        let a = sigma1();
        let codec = RllCodec::new(&a, 2, 6).unwrap();
        let x = a.parse_word("AMATC").unwrap();
        let (c, iters) = codec.encode_counted(&x).unwrap();
        assert_eq!(c.len(), 6);
        assert!(iters >= 1);
        assert!(verifier::is_rll(&a, &c, 2));
        assert_ne!(*c.last().unwrap(), SYM_A);
        assert_eq!(codec.decode(&c).unwrap(), x);
    }

    #[test]
    fn wrong_lengths() {
        let a = sigma1();
        let codec = RllCodec::new(&a, 2, 6).unwrap();
        assert!(matches!(codec.encode(&[0; 4]), Err(RllError::WrongLength { .. })));
        assert!(matches!(codec.decode(&[0; 5]), Err(RllError::WrongLength { .. })));
    }

    #[test]
    fn decode_accepts_only_encoder_images() {
        let a = sigma1();
        let codec = RllCodec::new(&a, 2, 6).unwrap();
        let mut word = [0 as Symbol; 6];
        let mut accepted = 0;
        loop {
            if let Ok(x) = codec.decode(&word) {
                assert_eq!(codec.encode(&x).unwrap().0, word);
                accepted += 1;
            }
            let mut i = 0;
            while i < 6 && word[i] == 4 {
                word[i] = 0;
                i += 1;
            }
            if i == 6 {
                break;
            }
            word[i] += 1;
        }
        assert_eq!(accepted, 5usize.pow(5));
    }

    #[test]
    fn forbidden_codeword_is_rejected() {
        let a = sigma1();
        let codec = RllCodec::new(&a, 2, 6).unwrap();
        let c = a.parse_word("TAAATT").unwrap();
        assert_eq!(codec.decode(&c), Err(RllError::ForbiddenWindow { start: 1 }));
    }

    #[test]
    fn separator_avoids_runs() {
        let a = sigma1();
        let left = a.parse_word("TCAAA").unwrap();
        let right = a.parse_word("AAAGT").unwrap();
        let sep = select_separator(&a, 3, &left, &right).unwrap();
        assert_ne!(sep[0], SYM_A);
        assert_ne!(sep[1], SYM_A);
        let mut joined = left.into_inner();
        joined.extend(sep);
        joined.extend(right.iter());
        assert!(verifier::is_rll(&a, &joined, 3));
    }

    #[test]
    fn stream_single_block_is_plain_codeword() {
        let a = sigma1();
        let codec = RllCodec::new(&a, 3, 18).unwrap();
        let x: Vec<Symbol> = (0..17).map(|i| (i % 5) as Symbol).collect();
        assert_eq!(codec.encode_stream(&x).unwrap(), codec.encode(&x).unwrap());
        assert_eq!(codec.decode_stream(&codec.encode_stream(&x).unwrap()).unwrap().0, x);
    }

    #[test]
    fn stream_roundtrip_various_lengths() {
        let a = CompositeAlphabet::parse("M=AT~N=CG").unwrap();
        let codec = RllCodec::new(&a, 4, 40).unwrap();
        for len in [0usize, 1, 5, 38, 39, 40, 41, 200] {
            let x: Vec<Symbol> = (0..len).map(|i| ((i * 7 + 3) % 6) as Symbol).collect();
            let c = codec.encode_stream(&x).unwrap();
            assert!(verifier::is_rll(&a, &c, 4), "len {len}");
            assert_eq!(codec.decode_stream(&c).unwrap().0, x, "len {len}");
        }
        assert!(codec.decode_stream(&[0; 45]).is_err());
    }

    #[test]
    fn blocked_layout() {
        let a = CompositeAlphabet::parse("M=AT~N=CG").unwrap();
        let b = BlockedRll::new(&a, 3, 30).unwrap();
        assert_eq!(b.block_lens(), &[14, 14]);
        assert_eq!(b.codeword_len(), 30);
        assert_eq!(b.redundancy(), 4);
        let single = BlockedRll::new(&a, 6, 290).unwrap();
        assert_eq!(single.block_lens(), &[290]);
        assert_eq!(single.redundancy(), 1);
        let x: Vec<Symbol> = (0..26).map(|i| ((i * 5) % 6) as Symbol).collect();
        let c = b.encode(&x).unwrap();
        assert!(verifier::is_rll(&a, &c, 3));
        assert_eq!(b.decode(&c).unwrap().0, x);
    }
}
