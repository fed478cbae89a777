//! Composite DNA alphabets.
//!
//! An alphabet always starts with the four pure bases `A, T, C, G` (symbol
//! indices 0..4) followed by the composite letters in declaration order. A
//! composite letter is modelled by the set of bases it can realize during
//! synthesis; mixing ratios are irrelevant to every constraint in this crate.

use std::fmt;
use std::ops::Deref;

use thiserror::Error;

/// Index of a symbol inside a [`CompositeAlphabet`].
pub type Symbol = u8;

pub const SYM_A: Symbol = 0;
pub const SYM_T: Symbol = 1;
pub const SYM_C: Symbol = 2;
pub const SYM_G: Symbol = 3;

/// Number of pure bases.
pub const PURE_COUNT: usize = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("malformed alphabet entry `{0}` (expected NAME=BASES)")]
    MalformedEntry(String),
    #[error("invalid composite name `{0}`: must be a single uppercase letter")]
    InvalidName(String),
    #[error("composite name `{0}` is reserved for a pure base")]
    ReservedName(char),
    #[error("duplicate symbol name `{0}`")]
    Duplicate(char),
    #[error("invalid base set `{bases}` for `{name}`: need 2-4 distinct letters from ATCG")]
    InvalidBases { name: char, bases: String },
    #[error("a flip group may pair at most two composites, got `{0}`")]
    OversizedPair(String),
    #[error("unknown symbol `{ch}` at position {pos}")]
    UnknownSymbol { ch: char, pos: usize },
    #[error("value {value} does not fit in {len} quaternary digits")]
    OutOfRange { value: u64, len: usize },
    #[error("symbol at position {pos} is not a pure base")]
    NotPure { pos: usize },
    #[error("interleave needs equal lengths, got {left} and {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("flip length {t} exceeds word length {len}")]
    FlipOutOfRange { t: usize, len: usize },
    #[error("malformed block frame: {0}")]
    BadFrame(String),
}

/// One of the four standard nucleotides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Nucleotide {
    A,
    T,
    C,
    G,
}

impl Nucleotide {
    pub const ALL: [Nucleotide; 4] = [Nucleotide::A, Nucleotide::T, Nucleotide::C, Nucleotide::G];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i).copied()
    }

    pub fn from_char(ch: char) -> Option<Self> {
        match ch {
            'A' => Some(Nucleotide::A),
            'T' => Some(Nucleotide::T),
            'C' => Some(Nucleotide::C),
            'G' => Some(Nucleotide::G),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        ['A', 'T', 'C', 'G'][self.index()]
    }

    /// True for the GC class (C and G).
    pub fn is_gc(self) -> bool {
        matches!(self, Nucleotide::C | Nucleotide::G)
    }
}

/// Set of bases a symbol can realize, stored as a 4-bit mask in `A, T, C, G`
/// bit order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BaseSet(u8);

impl BaseSet {
    pub const EMPTY: BaseSet = BaseSet(0);
    pub const ALL: BaseSet = BaseSet(0b1111);
    pub const AT: BaseSet = BaseSet(0b0011);
    pub const GC: BaseSet = BaseSet(0b1100);

    pub fn single(base: Nucleotide) -> Self {
        BaseSet(1 << base.index())
    }

    pub fn from_bits(bits: u8) -> Self {
        BaseSet(bits & 0b1111)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn contains(self, base: Nucleotide) -> bool {
        self.0 & (1 << base.index()) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn intersect(self, other: BaseSet) -> BaseSet {
        BaseSet(self.0 & other.0)
    }

    pub fn intersects(self, other: BaseSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_subset(self, other: BaseSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Nucleotide> {
        Nucleotide::ALL.into_iter().filter(move |b| self.contains(*b))
    }
}

impl fmt::Display for BaseSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            write!(f, "{}", b.as_char())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolInfo {
    pub name: char,
    pub bases: BaseSet,
}

/// Ordered symbol table: `A, T, C, G, M1, ..., Mk` plus a flip pairing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositeAlphabet {
    symbols: Vec<SymbolInfo>,
    flip: Vec<Symbol>,
}

impl CompositeAlphabet {
    /// The standard alphabet `{A, T, C, G}`.
    pub fn sigma0() -> Self {
        let symbols = Nucleotide::ALL
            .iter()
            .map(|&b| SymbolInfo { name: b.as_char(), bases: BaseSet::single(b) })
            .collect();
        CompositeAlphabet { symbols, flip: vec![SYM_C, SYM_G, SYM_A, SYM_T] }
    }

    /// Parses an alphabet spec such as `M=AC`, `M=AT,N=CG` or `M=AT~N=CG`.
    ///
    /// Entries are separated by `,`; two entries joined by `~` are declared a
    /// flip pair. An empty spec yields the pure alphabet.
    pub fn parse(spec: &str) -> Result<Self, AlphabetError> {
        let mut alphabet = Self::sigma0();
        let spec = spec.trim();
        if spec.is_empty() {
            return Ok(alphabet);
        }
        for group in spec.split(',') {
            let entries: Vec<&str> = group.split('~').collect();
            if entries.len() > 2 {
                return Err(AlphabetError::OversizedPair(group.trim().to_string()));
            }
            let mut added = Vec::with_capacity(2);
            for entry in entries {
                added.push(alphabet.push_entry(entry.trim())?);
            }
            if let [x, y] = added[..] {
                alphabet.flip[x as usize] = y;
                alphabet.flip[y as usize] = x;
            }
        }
        Ok(alphabet)
    }

    fn push_entry(&mut self, entry: &str) -> Result<Symbol, AlphabetError> {
        let (name, bases) =
            entry.split_once('=').ok_or_else(|| AlphabetError::MalformedEntry(entry.to_string()))?;
        let name = name.trim();
        let mut chars = name.chars();
        let ch = match (chars.next(), chars.next()) {
            (Some(c), None) if c.is_ascii_uppercase() => c,
            _ => return Err(AlphabetError::InvalidName(name.to_string())),
        };
        if Nucleotide::from_char(ch).is_some() {
            return Err(AlphabetError::ReservedName(ch));
        }
        if self.symbols.iter().any(|s| s.name == ch) {
            return Err(AlphabetError::Duplicate(ch));
        }
        let bases_str = bases.trim();
        let invalid = || AlphabetError::InvalidBases { name: ch, bases: bases_str.to_string() };
        let mut mask = 0u8;
        for b in bases_str.chars() {
            let bit = 1u8 << Nucleotide::from_char(b).ok_or_else(invalid)?.index();
            if mask & bit != 0 {
                return Err(invalid());
            }
            mask |= bit;
        }
        if mask.count_ones() < 2 {
            return Err(invalid());
        }
        let idx = self.symbols.len() as Symbol;
        self.symbols.push(SymbolInfo { name: ch, bases: BaseSet(mask) });
        self.flip.push(idx);
        Ok(idx)
    }

    /// Canonical spec text; parsing it yields an identical alphabet.
    pub fn spec(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        let mut s = PURE_COUNT;
        while s < self.symbols.len() {
            let info = &self.symbols[s];
            let partner = self.flip[s] as usize;
            if partner == s + 1 {
                let other = &self.symbols[partner];
                parts.push(format!("{}={}~{}={}", info.name, info.bases, other.name, other.bases));
                s += 2;
            } else {
                parts.push(format!("{}={}", info.name, info.bases));
                s += 1;
            }
        }
        parts.join(",")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Number of composite letters `k`.
    pub fn composite_count(&self) -> usize {
        self.symbols.len() - PURE_COUNT
    }

    pub fn composites(&self) -> impl Iterator<Item = Symbol> + '_ {
        (PURE_COUNT..self.symbols.len()).map(|s| s as Symbol)
    }

    pub fn info(&self, s: Symbol) -> &SymbolInfo {
        &self.symbols[s as usize]
    }

    pub fn name(&self, s: Symbol) -> char {
        self.symbols[s as usize].name
    }

    pub fn bases(&self, s: Symbol) -> BaseSet {
        self.symbols[s as usize].bases
    }

    pub fn is_pure(&self, s: Symbol) -> bool {
        (s as usize) < PURE_COUNT
    }

    /// Image of `s` under the flip pairing.
    pub fn flip(&self, s: Symbol) -> Symbol {
        self.flip[s as usize]
    }

    pub fn flip_pairing(&self) -> &[Symbol] {
        &self.flip
    }

    /// `Some(true)` when every realization of `s` is C or G, `Some(false)` when
    /// every realization is A or T, `None` for mixed-class composites.
    pub fn gc_class(&self, s: Symbol) -> Option<bool> {
        let bases = self.bases(s);
        if bases.is_subset(BaseSet::GC) {
            Some(true)
        } else if bases.is_subset(BaseSet::AT) {
            Some(false)
        } else {
            None
        }
    }

    pub fn index_of(&self, ch: char) -> Option<Symbol> {
        self.symbols.iter().position(|s| s.name == ch).map(|i| i as Symbol)
    }

    /// Parses a word written with the alphabet's symbol names.
    pub fn parse_word(&self, text: &str) -> Result<Seq, AlphabetError> {
        text.chars()
            .enumerate()
            .map(|(pos, ch)| self.index_of(ch).ok_or(AlphabetError::UnknownSymbol { ch, pos }))
            .collect::<Result<Vec<_>, _>>()
            .map(Seq)
    }

    pub fn format(&self, word: &[Symbol]) -> String {
        word.iter().map(|&s| self.name(s)).collect()
    }

    /// Symbol-wise flip of a whole word.
    pub fn complement(&self, word: &[Symbol]) -> Seq {
        Seq(word.iter().map(|&s| self.flip(s)).collect())
    }

    /// Flips the first `t` symbols of `x`.
    pub fn flip_prefix(&self, x: &[Symbol], t: usize) -> Result<Seq, AlphabetError> {
        if t > x.len() {
            return Err(AlphabetError::FlipOutOfRange { t, len: x.len() });
        }
        let mut out = x.to_vec();
        for s in &mut out[..t] {
            *s = self.flip(*s);
        }
        Ok(Seq(out))
    }
}

impl fmt::Display for CompositeAlphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: String = self.symbols.iter().map(|s| s.name).collect();
        write!(f, "{{{}}}", names)
    }
}

/// A word over some [`CompositeAlphabet`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Seq(pub Vec<Symbol>);

impl Seq {
    pub fn new() -> Self {
        Seq(Vec::new())
    }

    pub fn into_inner(self) -> Vec<Symbol> {
        self.0
    }
}

impl Deref for Seq {
    type Target = [Symbol];

    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

impl From<Vec<Symbol>> for Seq {
    fn from(v: Vec<Symbol>) -> Self {
        Seq(v)
    }
}

impl From<&[Symbol]> for Seq {
    fn from(v: &[Symbol]) -> Self {
        Seq(v.to_vec())
    }
}

impl FromIterator<Symbol> for Seq {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        Seq(iter.into_iter().collect())
    }
}

/// Smallest `w` with `4^w >= n` (i.e. `ceil(log4 n)`), with `w >= 1`.
pub fn ceil_log4(n: u64) -> usize {
    let mut w = 1usize;
    let mut cap = 4u128;
    while cap < n as u128 {
        w += 1;
        cap *= 4;
    }
    w
}

/// Base-4 representation of `value` with `len` digits, most significant first,
/// written with `0=A, 1=T, 2=C, 3=G`.
pub fn dna_representation(value: u64, len: usize) -> Result<Seq, AlphabetError> {
    if len < 32 && (value >> (2 * len)) != 0 {
        return Err(AlphabetError::OutOfRange { value, len });
    }
    let mut out = vec![SYM_A; len];
    let mut v = value;
    for slot in out.iter_mut().rev() {
        *slot = (v & 3) as Symbol;
        v >>= 2;
    }
    Ok(Seq(out))
}

/// Inverse of [`dna_representation`].
pub fn dna_value(word: &[Symbol]) -> Result<u64, AlphabetError> {
    let mut v: u64 = 0;
    for (pos, &s) in word.iter().enumerate() {
        if s as usize >= PURE_COUNT {
            return Err(AlphabetError::NotPure { pos });
        }
        v = v
            .checked_mul(4)
            .and_then(|v| v.checked_add(s as u64))
            .ok_or(AlphabetError::OutOfRange { value: u64::MAX, len: word.len() })?;
    }
    Ok(v)
}

/// Width of the length field that heads a multi-block frame.
pub const FRAME_LENGTH_WIDTH: usize = 16;

/// Cuts a message of any length into `k`-symbol chunks.
///
/// A message of exactly `k` symbols is one chunk. Anything else becomes the
/// 16-digit base-4 length (padded with `A` to whole chunks) followed by the
/// message padded with `A` to at least one whole chunk, so a framed message
/// always has at least two chunks.
pub fn frame_message(x: &[Symbol], k: usize) -> Result<Vec<Seq>, AlphabetError> {
    assert!(k > 0, "chunk length must be positive");
    if x.len() == k {
        return Ok(vec![Seq(x.to_vec())]);
    }
    let mut data = dna_representation(x.len() as u64, FRAME_LENGTH_WIDTH)?.into_inner();
    data.resize(FRAME_LENGTH_WIDTH.div_ceil(k) * k, SYM_A);
    let start = data.len();
    data.extend_from_slice(x);
    data.resize(start + x.len().div_ceil(k).max(1) * k, SYM_A);
    Ok(data.chunks(k).map(Seq::from).collect())
}

/// Inverse of [`frame_message`].
pub fn unframe_message(chunks: &[Seq], k: usize) -> Result<Seq, AlphabetError> {
    if let Some(c) = chunks.iter().find(|c| c.len() != k) {
        return Err(AlphabetError::BadFrame(format!("chunk of length {} (expected {k})", c.len())));
    }
    if chunks.len() == 1 {
        return Ok(chunks[0].clone());
    }
    let header_chunks = FRAME_LENGTH_WIDTH.div_ceil(k);
    if chunks.len() <= header_chunks {
        return Err(AlphabetError::BadFrame("missing payload chunks".into()));
    }
    let data: Vec<Symbol> = chunks.iter().flat_map(|c| c.iter().copied()).collect();
    let len =
        dna_value(&data[..FRAME_LENGTH_WIDTH]).map_err(|e| AlphabetError::BadFrame(e.to_string()))? as usize;
    let body = &data[header_chunks * k..];
    let pad_ok = body[len.min(body.len())..].iter().all(|&s| s == SYM_A);
    if len == k || len.div_ceil(k).max(1) * k != body.len() || !pad_ok {
        return Err(AlphabetError::BadFrame(format!(
            "declared length {len} does not fit {} payload symbols",
            body.len()
        )));
    }
    Ok(Seq(body[..len].to_vec()))
}

/// `u1 v1 u2 v2 ...`
pub fn interleave(u: &[Symbol], v: &[Symbol]) -> Result<Seq, AlphabetError> {
    if u.len() != v.len() {
        return Err(AlphabetError::LengthMismatch { left: u.len(), right: v.len() });
    }
    Ok(u.iter().zip(v).flat_map(|(&a, &b)| [a, b]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let s0 = CompositeAlphabet::parse("").unwrap();
        assert_eq!(s0.len(), 4);
        assert_eq!(s0.composite_count(), 0);

        let s1 = CompositeAlphabet::parse("M=AC").unwrap();
        assert_eq!(s1.len(), 5);
        let m = s1.index_of('M').unwrap();
        assert_eq!(m, 4);
        assert_eq!(s1.bases(m).to_string(), "AC");
        assert_eq!(s1.flip(m), m);

        let s2 = CompositeAlphabet::parse("M=AT~N=CG").unwrap();
        assert_eq!(s2.flip(4), 5);
        assert_eq!(s2.flip(5), 4);
        assert_eq!(s2.spec(), "M=AT~N=CG");
        assert_eq!(s2.format(&s2.parse_word("ATCGMN").unwrap()), "ATCGMN");
    }

    #[test]
    fn parse_errors() {
        use AlphabetError::*;
        assert!(matches!(CompositeAlphabet::parse("M=AC,M=AT"), Err(Duplicate('M'))));
        assert!(matches!(CompositeAlphabet::parse("A=CG"), Err(ReservedName('A'))));
        assert!(matches!(CompositeAlphabet::parse("M=A"), Err(InvalidBases { .. })));
        assert!(matches!(CompositeAlphabet::parse("M=AA"), Err(InvalidBases { .. })));
        assert!(matches!(CompositeAlphabet::parse("M="), Err(InvalidBases { .. })));
        assert!(matches!(CompositeAlphabet::parse("M=AX"), Err(InvalidBases { .. })));
        assert!(matches!(CompositeAlphabet::parse("m=AC"), Err(InvalidName(_))));
        assert!(matches!(CompositeAlphabet::parse("MN=AC"), Err(InvalidName(_))));
        assert!(matches!(CompositeAlphabet::parse("MAC"), Err(MalformedEntry(_))));
        assert!(matches!(CompositeAlphabet::parse("M=AT~N=CG~P=AG"), Err(OversizedPair(_))));
    }

    #[test]
    fn flip_pairing_on_pure_bases() {
        let a = CompositeAlphabet::parse("M=AC,N=GT").unwrap();
        assert_eq!(a.flip(SYM_A), SYM_C);
        assert_eq!(a.flip(SYM_T), SYM_G);
        assert_eq!(a.flip(SYM_C), SYM_A);
        assert_eq!(a.flip(SYM_G), SYM_T);
        for s in 0..a.len() as Symbol {
            assert_eq!(a.flip(a.flip(s)), s);
        }
    }

    #[test]
    fn dna_representation_examples() {
        let a = CompositeAlphabet::sigma0();
        assert_eq!(a.format(&dna_representation(100, 4).unwrap()), "TCTA");
        assert_eq!(a.format(&dna_representation(55, 4).unwrap()), "AGTG");
        assert_eq!(a.format(&dna_representation(0, 3).unwrap()), "AAA");
        assert_eq!(dna_representation(64, 3), Err(AlphabetError::OutOfRange { value: 64, len: 3 }));
        assert_eq!(dna_value(&dna_representation(63, 3).unwrap()).unwrap(), 63);
    }

    #[test]
    fn flip_prefix_examples() {
        let a = CompositeAlphabet::parse("M=AC").unwrap();
        let x = a.parse_word("MCMGAT").unwrap();
        assert_eq!(a.format(&a.flip_prefix(&x, 4).unwrap()), "MAMTAT");
        assert_eq!(a.format(&a.flip_prefix(&x, 5).unwrap()), "MAMTCT");
        assert_eq!(a.flip_prefix(&x, 0).unwrap(), x);
        assert!(a.flip_prefix(&x, 7).is_err());
    }

    #[test]
    fn interleave_examples() {
        let a = CompositeAlphabet::sigma0();
        let ac = a.parse_word("AC").unwrap();
        let tg = a.parse_word("TG").unwrap();
        assert_eq!(a.format(&interleave(&ac, &tg).unwrap()), "ATCG");
        assert_eq!(a.format(&interleave(&[SYM_A], &[SYM_C]).unwrap()), "AC");
        assert!(interleave(&ac, &[SYM_A]).is_err());
    }

    #[test]
    fn ceil_log4_values() {
        assert_eq!(ceil_log4(1), 1);
        assert_eq!(ceil_log4(4), 1);
        assert_eq!(ceil_log4(5), 2);
        assert_eq!(ceil_log4(16), 2);
        assert_eq!(ceil_log4(17), 3);
        assert_eq!(ceil_log4(300), 5);
    }

    #[test]
    fn framing() {
        let x: Vec<Symbol> = vec![4, 1, 2];
        assert_eq!(frame_message(&x, 3).unwrap(), vec![Seq(x.clone())]);
        let chunks = frame_message(&x, 10).unwrap();
        assert_eq!(chunks.len(), 3);
        assert_eq!(unframe_message(&chunks, 10).unwrap().0, x);
        let empty = frame_message(&[], 4).unwrap();
        assert_eq!(empty.len(), 5);
        assert!(unframe_message(&empty, 4).unwrap().is_empty());
        let mut bad = chunks.clone();
        bad[2].0[9] = 1;
        assert!(unframe_message(&bad, 10).is_err());
        assert!(unframe_message(&chunks[..2], 10).is_err());
    }
}
