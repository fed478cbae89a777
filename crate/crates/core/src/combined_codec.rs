//! Joint run-length and GC-balance encoder over an `A|T` / `C|G`
//! composite alphabet.
//!
//! Layout of a codeword of length `n`:
//!
//! ```text
//! flip(y[..t]) | g1 (4) | y[t..] | g2 (2) | index suffix
//! ```
//!
//! `y` is the run-length-limited encoding of the payload, `t` is a point of
//! a coarse flip grid, and the buffers `g1`, `g2` are pure, exactly half GC
//! and chosen so that no forbidden window crosses a junction.

use thiserror::Error;

use crate::alphabet::{ceil_log4, CompositeAlphabet, Seq, Symbol};
use crate::gc_codec::{
    index_suffix, knuth_index_search, read_index_suffix, AtgcCodec, BalanceTarget, FlipGrid, FlipRule,
    GcError,
};
use crate::rll_codec::{BlockedRll, RllError};
use crate::verifier::{self, BalanceMode, Epsilon};

pub const G1_WIDTH: usize = 4;
pub const G2_WIDTH: usize = 2;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CombinedError {
    #[error(transparent)]
    Gc(#[from] GcError),
    #[error(transparent)]
    Rll(#[from] RllError),
    #[error("unsupported alphabet: expected M=AT~N=CG")]
    WrongAlphabet,
    #[error("codeword length {n} leaves no room for the payload")]
    TooShort { n: usize },
    #[error("expected a word of length {expected}, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("no {width}-symbol buffer keeps the junction at {at} clean")]
    NoBuffer { width: usize, at: usize },
    #[error("encoder output failed the {0} check")]
    Verification(&'static str),
    #[error("word is not a codeword of this encoder")]
    NotACodeword,
}

/// First pure word of `width` symbols, in `A, T, C, G` lexicographic
/// order, with exactly half GC symbols and no forbidden window in
/// `left ++ buffer ++ right` (only the last and first `l` context symbols
/// matter).
pub fn select_buffer(
    alphabet: &CompositeAlphabet,
    left: &[Symbol],
    right: &[Symbol],
    width: usize,
    l: usize,
) -> Option<Seq> {
    let tail = &left[left.len().saturating_sub(l)..];
    let head = &right[..right.len().min(l)];
    let mut probe = Vec::with_capacity(tail.len() + width + head.len());
    (0..4u64.pow(width as u32)).find_map(|code| {
        let buf: Vec<Symbol> = (0..width).rev().map(|i| ((code >> (2 * i)) & 3) as Symbol).collect();
        if verifier::pure_gc_count(&buf) * 2 != width {
            return None;
        }
        probe.clear();
        probe.extend_from_slice(tail);
        probe.extend_from_slice(&buf);
        probe.extend_from_slice(head);
        verifier::is_rll(alphabet, &probe, l).then_some(Seq(buf))
    })
}

/// Derived layout for one `(n, l, eps)` triple.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinedParams {
    pub n: usize,
    pub l: usize,
    pub eps: Epsilon,
    /// Symbols added by run-length encoding, including block separators.
    pub r_l: usize,
    /// Index suffix length.
    pub r_eps: usize,
    /// Length of the run-length-limited word.
    pub body_len: usize,
    pub payload_len: usize,
}

impl CombinedParams {
    pub fn redundancy(&self) -> usize {
        self.r_l + self.r_eps + G1_WIDTH + G2_WIDTH
    }

    /// Payload bits per output symbol.
    pub fn rate(&self, alphabet_size: usize) -> f64 {
        self.payload_len as f64 * (alphabet_size as f64).log2() / self.n as f64
    }
}

#[derive(Debug, Clone)]
pub struct CombinedCodec {
    alphabet: CompositeAlphabet,
    params: CombinedParams,
    rll: BlockedRll,
    rule: FlipRule,
    grid: FlipGrid,
    slack: usize,
}

impl CombinedCodec {
    pub fn new(
        alphabet: &CompositeAlphabet,
        n: usize,
        l: usize,
        eps: Epsilon,
    ) -> Result<Self, CombinedError> {
        if !AtgcCodec::supports(alphabet) {
            return Err(CombinedError::WrongAlphabet);
        }
        let rule = FlipRule::paired(alphabet)?;
        let grid = FlipGrid::lset(eps, n)?;
        let fixed = G1_WIDTH + G2_WIDTH;
        let width = (1..)
            .take_while(|w| 2 * w + fixed < n)
            .find(|&w| ceil_log4(grid.size(n - 2 * w - fixed) as u64) <= w)
            .ok_or(CombinedError::TooShort { n })?;
        let body_len = n - 2 * width - fixed;
        let rll = BlockedRll::new(alphabet, l, body_len)?;
        let params = CombinedParams {
            n,
            l,
            eps,
            r_l: rll.redundancy(),
            r_eps: 2 * width,
            body_len,
            payload_len: rll.message_len(),
        };
        let FlipGrid::Lset { spacing } = grid else { unreachable!() };
        Ok(CombinedCodec { alphabet: alphabet.clone(), params, rll, rule, grid, slack: spacing / 2 })
    }

    pub fn params(&self) -> &CombinedParams {
        &self.params
    }

    pub fn alphabet(&self) -> &CompositeAlphabet {
        &self.alphabet
    }

    pub fn grid_points(&self) -> Vec<usize> {
        self.grid.points(self.params.body_len)
    }

    pub fn encode(&self, x: &[Symbol]) -> Result<Seq, CombinedError> {
        let p = &self.params;
        let y = self.rll.encode(x)?;
        let target = BalanceTarget::within(&y, &self.rule, self.slack);
        let t = knuth_index_search(&y, &self.rule, self.grid, target).ok_or(GcError::NoBalancingIndex)?;
        let rank = self.grid_points().iter().position(|&q| q == t).expect("grid point");
        let suffix = index_suffix(rank as u64, p.r_eps / 2)?;

        let mut out = Vec::with_capacity(p.n);
        out.extend(self.rule.flip_prefix(&y[..t], t).into_inner());
        let g1 = select_buffer(&self.alphabet, &out, &y[t..], G1_WIDTH, p.l)
            .ok_or(CombinedError::NoBuffer { width: G1_WIDTH, at: t })?;
        out.extend(g1.into_inner());
        out.extend_from_slice(&y[t..]);
        let g2 = select_buffer(&self.alphabet, &out, &suffix, G2_WIDTH, p.l)
            .ok_or(CombinedError::NoBuffer { width: G2_WIDTH, at: out.len() })?;
        out.extend(g2.into_inner());
        out.extend(suffix.into_inner());

        if !verifier::is_rll(&self.alphabet, &out, p.l) {
            return Err(CombinedError::Verification("run-length"));
        }
        if !verifier::is_eps_balanced(&self.alphabet, &out, p.eps, BalanceMode::Strict) {
            return Err(CombinedError::Verification("balance"));
        }
        Ok(Seq(out))
    }

    pub fn decode(&self, c: &[Symbol]) -> Result<Seq, CombinedError> {
        let p = &self.params;
        if c.len() != p.n {
            return Err(CombinedError::WrongLength { expected: p.n, got: c.len() });
        }
        if let Some(&s) = c.iter().find(|&&s| s as usize >= self.alphabet.len()) {
            return Err(GcError::from(crate::alphabet::AlphabetError::OutOfRange {
                value: s as u64,
                len: self.alphabet.len(),
            })
            .into());
        }
        let rank = read_index_suffix(&c[p.n - p.r_eps..])?;
        let points = self.grid_points();
        let t = *points
            .get(rank as usize)
            .ok_or(GcError::IndexOutOfRange { value: rank, max: points.len() - 1 })?;
        let mut y = self.rule.flip_prefix(&c[..t], t).into_inner();
        y.extend_from_slice(&c[t + G1_WIDTH..p.body_len + G1_WIDTH]);
        let x = self.rll.decode(&y)?;
        if self.encode(&x)?.0 != c {
            return Err(CombinedError::NotACodeword);
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma2p() -> CompositeAlphabet {
        CompositeAlphabet::parse("M=AT~N=CG").unwrap()
    }

    #[test]
    fn reference_parameters() {
        let a = sigma2p();
        let codec = CombinedCodec::new(&a, 300, 6, "0.1".parse().unwrap()).unwrap();
        let p = codec.params();
        assert_eq!((p.r_l, p.r_eps, p.body_len, p.payload_len), (1, 4, 290, 289));
        assert_eq!(p.redundancy(), 11);
        assert!((p.rate(6) - 2.490).abs() < 1e-3);
        assert_eq!(codec.grid_points(), vec![0, 60, 120, 180, 240, 290]);
    }

    #[test]
    fn scaled_parameters_use_two_blocks() {
        let a = sigma2p();
        let codec = CombinedCodec::new(&a, 40, 3, "1/8".parse().unwrap()).unwrap();
        let p = codec.params();
        assert_eq!((p.r_l, p.r_eps, p.body_len, p.payload_len), (4, 4, 30, 26));
        assert_eq!(codec.grid_points(), vec![0, 10, 20, 30]);
    }

    #[test]
    fn buffers() {
        let a = sigma2p();
        let ctx = a.parse_word("ATCG").unwrap();
        let g = select_buffer(&a, &ctx, &ctx, 4, 2).unwrap();
        assert_eq!(a.format(&g), "AACC");
        let left = a.parse_word("MM").unwrap();
        let right = a.parse_word("AC").unwrap();
        let g = select_buffer(&a, &left, &right, 2, 2).unwrap();
        assert_eq!(a.format(&g), "CA");
        assert!(select_buffer(&a, &left, &right, 2, 0).is_none());
    }

    #[test]
    fn roundtrip_and_checks() {
        let a = sigma2p();
        let e: Epsilon = "1/8".parse().unwrap();
        let codec = CombinedCodec::new(&a, 40, 3, e).unwrap();
        for seed in 0..500u64 {
            let x: Vec<Symbol> = (0..26).map(|i| ((seed * 13 + i * (seed % 11 + 1)) % 6) as Symbol).collect();
            let c = codec.encode(&x).unwrap();
            assert!(verifier::is_rll(&a, &c, 3));
            assert!(verifier::is_eps_balanced(&a, &c, e, BalanceMode::Lenient));
            assert_eq!(codec.decode(&c).unwrap().0, x);
        }
    }

    #[test]
    fn extreme_flip_points() {
        let a = sigma2p();
        let e: Epsilon = "1/8".parse().unwrap();
        let codec = CombinedCodec::new(&a, 40, 3, e).unwrap();
        // all-AT payload needs a full flip; an alternating one needs none
        let all_a = vec![1 as Symbol; 26];
        let mixed: Vec<Symbol> = (0..26).map(|i| [0, 2, 1, 3][i % 4]).collect();
        for x in [all_a, mixed] {
            let c = codec.encode(&x).unwrap();
            assert_eq!(codec.decode(&c).unwrap().0, x);
        }
    }

    #[test]
    fn rejects() {
        let e: Epsilon = "0.1".parse().unwrap();
        assert_eq!(
            CombinedCodec::new(&CompositeAlphabet::parse("M=AC").unwrap(), 300, 6, e).err(),
            Some(CombinedError::WrongAlphabet)
        );
        let codec = CombinedCodec::new(&sigma2p(), 300, 6, e).unwrap();
        assert!(matches!(codec.decode(&[0; 10]), Err(CombinedError::WrongLength { .. })));
        assert!(codec.decode(&[0; 300]).is_err());
    }
}
