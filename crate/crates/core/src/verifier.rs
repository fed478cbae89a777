//! Constraint checks that hold for every synthesis realization of a word.
//!
//! None of the checks here enumerate realizations: the run-length check uses
//! a per-base run counter over realization sets, and the GC check uses the
//! additive min/max bounds. [`realizations`] exists for cross-checking.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use thiserror::Error;

use crate::alphabet::{BaseSet, CompositeAlphabet, Nucleotide, Seq, Symbol};

/// Default cap on the number of realizations [`realizations`] will produce.
pub const DEFAULT_REALIZATION_CAP: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("word has {count} realizations, above the cap of {cap}")]
    TooManyRealizations { count: u128, cap: u64 },
    #[error("invalid epsilon `{0}`: expected a rational in [0, 1/2] such as 0.1 or 1/6")]
    InvalidEpsilon(String),
    #[error("invalid balance mode `{0}`: expected strict or lenient")]
    InvalidMode(String),
}

/// Balance tolerance, held as an exact rational so threshold comparisons do
/// not depend on binary floating point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Epsilon(Ratio<i64>);

impl Epsilon {
    pub fn new(numer: i64, denom: i64) -> Result<Self, VerifyError> {
        if denom <= 0 {
            return Err(VerifyError::InvalidEpsilon(format!("{numer}/{denom}")));
        }
        Self::from_ratio(Ratio::new(numer, denom))
    }

    pub fn from_ratio(r: Ratio<i64>) -> Result<Self, VerifyError> {
        if r < Ratio::from_integer(0) || r > Ratio::new(1, 2) {
            return Err(VerifyError::InvalidEpsilon(r.to_string()));
        }
        Ok(Epsilon(r))
    }

    pub fn zero() -> Self {
        Epsilon(Ratio::from_integer(0))
    }

    pub fn ratio(self) -> Ratio<i64> {
        self.0
    }

    pub fn is_zero(self) -> bool {
        *self.0.numer() == 0
    }

    /// `floor(eps * n)`
    pub fn floor_times(self, n: usize) -> i64 {
        (self.0 * n as i64).floor().to_integer()
    }

    pub fn to_f64(self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }
}

impl FromStr for Epsilon {
    type Err = VerifyError;

    /// Accepts `p/q`, decimal (`0.125`, `.1`) or integer text.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || VerifyError::InvalidEpsilon(s.to_string());
        let t = s.trim();
        let r = if let Some((p, q)) = t.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q <= 0 {
                return Err(bad());
            }
            Ratio::new(p, q)
        } else {
            let (int, frac) = t.split_once('.').unwrap_or((t, ""));
            if (int.is_empty() && frac.is_empty())
                || frac.len() > 15
                || !int.chars().all(|c| c.is_ascii_digit())
                || !frac.chars().all(|c| c.is_ascii_digit())
            {
                return Err(bad());
            }
            let int: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
            let scale = 10i64.pow(frac.len() as u32);
            let frac: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
            Ratio::new(int * scale + frac, scale)
        };
        Epsilon::from_ratio(r).map_err(|_| bad())
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// How the real-valued balance window `n/2 ± eps*n` is applied to integer
/// GC counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BalanceMode {
    /// The real interval, as is.
    #[default]
    Strict,
    /// The interval rounded outward to integers: `[floor(lo), ceil(hi)]`.
    Lenient,
}

impl FromStr for BalanceMode {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "strict" => Ok(BalanceMode::Strict),
            "lenient" => Ok(BalanceMode::Lenient),
            _ => Err(VerifyError::InvalidMode(s.to_string())),
        }
    }
}

impl fmt::Display for BalanceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BalanceMode::Strict => "strict",
            BalanceMode::Lenient => "lenient",
        })
    }
}

/// Exact min and max GC count over all realizations of a word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GcBounds {
    pub min_gc: usize,
    pub max_gc: usize,
}

/// Integer acceptance window for GC counts of a length-`n` word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GcWindow {
    pub lo: i64,
    pub hi: i64,
}

impl GcWindow {
    pub fn new(n: usize, eps: Epsilon, mode: BalanceMode) -> Self {
        let half = Ratio::new(n as i64, 2);
        let slack = eps.ratio() * n as i64;
        let (lo, hi) = (half - slack, half + slack);
        match mode {
            BalanceMode::Strict => GcWindow { lo: lo.ceil().to_integer(), hi: hi.floor().to_integer() },
            BalanceMode::Lenient => GcWindow { lo: lo.floor().to_integer(), hi: hi.ceil().to_integer() },
        }
    }

    pub fn contains(&self, bounds: GcBounds) -> bool {
        bounds.min_gc as i64 >= self.lo && bounds.max_gc as i64 <= self.hi
    }
}

/// A length-`(l+1)` window whose symbols all share `base`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RllViolation {
    /// 0-based start of the leftmost offending window.
    pub start: usize,
    pub base: Nucleotide,
}

/// Number of realizations, saturating.
pub fn realization_count(alphabet: &CompositeAlphabet, x: &[Symbol]) -> u128 {
    x.iter().fold(1u128, |acc, &s| acc.saturating_mul(alphabet.bases(s).len() as u128))
}

/// Every pure word obtainable from `x` by choosing one base per position,
/// in lexicographic order of the chosen bases.
pub fn realizations(alphabet: &CompositeAlphabet, x: &[Symbol], cap: u64) -> Result<Vec<Seq>, VerifyError> {
    let count = realization_count(alphabet, x);
    if count > cap as u128 {
        return Err(VerifyError::TooManyRealizations { count, cap });
    }
    let mut out: Vec<Vec<Symbol>> = vec![Vec::with_capacity(x.len())];
    for &s in x {
        let choices: Vec<Symbol> = alphabet.bases(s).iter().map(|b| b.index() as Symbol).collect();
        out = out
            .into_iter()
            .flat_map(|prefix| {
                choices.iter().map(move |&c| {
                    let mut w = prefix.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    Ok(out.into_iter().map(Seq).collect())
}

/// Leftmost window of `l + 1` symbols that admits a constant realization.
pub fn rll_violation(alphabet: &CompositeAlphabet, x: &[Symbol], l: usize) -> Option<RllViolation> {
    let mut runs = [0usize; 4];
    for (i, &s) in x.iter().enumerate() {
        let bases = alphabet.bases(s);
        for b in Nucleotide::ALL {
            let r = &mut runs[b.index()];
            if bases.contains(b) {
                *r += 1;
                if *r > l {
                    return Some(RllViolation { start: i - l, base: b });
                }
            } else {
                *r = 0;
            }
        }
    }
    None
}

/// True iff every realization of `x` has all runs of length at most `l`.
pub fn is_rll(alphabet: &CompositeAlphabet, x: &[Symbol], l: usize) -> bool {
    rll_violation(alphabet, x, l).is_none()
}

pub fn gc_bounds(alphabet: &CompositeAlphabet, x: &[Symbol]) -> GcBounds {
    x.iter().fold(GcBounds { min_gc: 0, max_gc: 0 }, |acc, &s| {
        let bases: BaseSet = alphabet.bases(s);
        GcBounds {
            min_gc: acc.min_gc + bases.is_subset(BaseSet::GC) as usize,
            max_gc: acc.max_gc + bases.intersects(BaseSet::GC) as usize,
        }
    })
}

/// True iff every realization of `x` has its GC count inside the window for
/// `(|x|, eps, mode)`.
pub fn is_eps_balanced(alphabet: &CompositeAlphabet, x: &[Symbol], eps: Epsilon, mode: BalanceMode) -> bool {
    GcWindow::new(x.len(), eps, mode).contains(gc_bounds(alphabet, x))
}

/// GC count of a pure word.
pub fn pure_gc_count(x: &[Symbol]) -> usize {
    x.iter().filter(|&&s| Nucleotide::from_index(s as usize).is_some_and(Nucleotide::is_gc)).count()
}

/// Longest run of a single base in a pure word.
pub fn longest_run(x: &[Symbol]) -> usize {
    let mut best = 0;
    let mut run = 0;
    for (i, &s) in x.iter().enumerate() {
        run = if i > 0 && x[i - 1] == s { run + 1 } else { 1 };
        best = best.max(run);
    }
    best
}
