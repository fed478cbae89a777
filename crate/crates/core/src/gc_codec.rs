//! GC-balancing encoders based on prefix flipping.
//!
//! A flip exchanges `A <-> C` and `T <-> G`, so every pure symbol changes
//! GC class. Flipping a growing prefix moves the GC count of the flippable
//! part one step at a time from its start value to the reflection of that
//! value, so some prefix length `t` lands on (or near) the midpoint. The
//! index `t` is appended as `interleave(u, complement(u))`, which is itself
//! exactly half GC.
//!
//! Three encoders are provided:
//!
//! - [`Sigma1Codec`]: one composite letter, `eps >= 1/10`
//! - [`Sigma2Codec`]: two composite letters, `eps >= 1/6`
//! - [`AtgcCodec`]: an `A|T` composite paired with a `C|G` composite, any
//!   `eps >= 0`
//!
//! Composite letters that cannot be flipped are first made rare by swapping
//! them with the least frequent symbols of the message; the swap is
//! disclosed by appending those symbols.

use thiserror::Error;

use crate::alphabet::{
    ceil_log4, dna_representation, dna_value, interleave, AlphabetError, BaseSet, CompositeAlphabet, Seq,
    Symbol, PURE_COUNT, SYM_A,
};
use crate::verifier::Epsilon;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GcError {
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error("unsupported alphabet: {0}")]
    WrongAlphabet(String),
    #[error("codeword length {n} is too small (minimum {min})")]
    TooShort { n: usize, min: usize },
    #[error("eps = {eps} is below the supported minimum {min}")]
    EpsilonTooSmall { eps: String, min: String },
    #[error("exact balance needs an even flippable length, got n = {n}")]
    OddLength { n: usize },
    #[error("floor(eps * n) must be at least 1 for grid mode")]
    NoSlack,
    #[error("expected a word of length {expected}, got {got}")]
    WrongLength { expected: String, got: usize },
    #[error("index suffix is not of the form interleave(u, complement(u))")]
    BadSuffix,
    #[error("flip index {value} out of range (max {max})")]
    IndexOutOfRange { value: u64, max: usize },
    #[error("word is not a codeword of this encoder")]
    NotACodeword,
    #[error("no balancing index found")]
    NoBalancingIndex,
}

/// Symbol map used for prefix flipping.
///
/// Pure bases always map `A <-> C`, `T <-> G`. A composite either maps to
/// itself (it is *fixed*: never flipped, never counted) or to a partner of
/// the opposite GC class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipRule {
    map: Vec<Symbol>,
    class: Vec<Option<bool>>,
}

impl FlipRule {
    /// Pure bases flip, every composite is fixed.
    pub fn pure_only(alphabet: &CompositeAlphabet) -> Self {
        let map = (0..alphabet.len() as Symbol)
            .map(|s| if alphabet.is_pure(s) { alphabet.flip(s) } else { s })
            .collect();
        let class = (0..alphabet.len() as Symbol)
            .map(|s| if alphabet.is_pure(s) { alphabet.gc_class(s) } else { None })
            .collect();
        FlipRule { map, class }
    }

    /// Uses the alphabet's declared pairing. Every paired composite must
    /// lie inside one GC class and its partner inside the other.
    pub fn paired(alphabet: &CompositeAlphabet) -> Result<Self, GcError> {
        let mut map = Vec::with_capacity(alphabet.len());
        let mut class = Vec::with_capacity(alphabet.len());
        for s in 0..alphabet.len() as Symbol {
            let f = alphabet.flip(s);
            if f == s {
                map.push(s);
                class.push(None);
                continue;
            }
            match (alphabet.gc_class(s), alphabet.gc_class(f)) {
                (Some(a), Some(b)) if a != b => {
                    map.push(f);
                    class.push(Some(a));
                }
                _ => {
                    return Err(GcError::WrongAlphabet(format!(
                        "{} and {} are paired but not of opposite GC class",
                        alphabet.name(s),
                        alphabet.name(f)
                    )))
                }
            }
        }
        Ok(FlipRule { map, class })
    }

    pub fn apply(&self, s: Symbol) -> Symbol {
        self.map[s as usize]
    }

    pub fn is_fixed(&self, s: Symbol) -> bool {
        self.class[s as usize].is_none()
    }

    /// GC class of a flippable symbol, `None` for fixed ones.
    pub fn class(&self, s: Symbol) -> Option<bool> {
        self.class[s as usize]
    }

    pub fn flip_prefix(&self, z: &[Symbol], t: usize) -> Seq {
        z.iter().enumerate().map(|(i, &s)| if i < t { self.apply(s) } else { s }).collect()
    }

    /// Number of flippable symbols in the GC class.
    pub fn statistic(&self, z: &[Symbol]) -> usize {
        z.iter().filter(|&&s| self.class(s) == Some(true)).count()
    }

    pub fn fixed_count(&self, z: &[Symbol]) -> usize {
        z.iter().filter(|&&s| self.is_fixed(s)).count()
    }
}

/// Candidate flip indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlipGrid {
    /// Every index `0..=m`.
    Full,
    /// Multiples of `spacing` up to `m`, plus `m` itself.
    Lset { spacing: usize },
}

impl FlipGrid {
    /// Grid with spacing `2 * floor(eps * n)`.
    pub fn lset(eps: Epsilon, n: usize) -> Result<Self, GcError> {
        let s = eps.floor_times(n);
        if s < 1 {
            return Err(GcError::NoSlack);
        }
        Ok(FlipGrid::Lset { spacing: 2 * s as usize })
    }

    pub fn points(&self, m: usize) -> Vec<usize> {
        match *self {
            FlipGrid::Full => (0..=m).collect(),
            FlipGrid::Lset { spacing } => {
                let mut pts: Vec<usize> = (0..=m).step_by(spacing).collect();
                if pts.last() != Some(&m) {
                    pts.push(m);
                }
                pts
            }
        }
    }

    pub fn size(&self, m: usize) -> usize {
        match *self {
            FlipGrid::Full => m + 1,
            FlipGrid::Lset { spacing } => m / spacing + 1 + !m.is_multiple_of(spacing) as usize,
        }
    }
}

/// Where the flippable GC count should land: within `slack` of
/// `(m - wt_fixed) / 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BalanceTarget {
    pub m: usize,
    pub wt_fixed: usize,
    pub slack: usize,
}

impl BalanceTarget {
    /// Exact midpoint; requires `m - wt_fixed` even.
    pub fn exact(z: &[Symbol], rule: &FlipRule) -> Result<Self, GcError> {
        let target = Self::within(z, rule, 0);
        if !target.target_twice().is_multiple_of(2) {
            return Err(GcError::OddLength { n: z.len() });
        }
        Ok(target)
    }

    pub fn within(z: &[Symbol], rule: &FlipRule, slack: usize) -> Self {
        BalanceTarget { m: z.len(), wt_fixed: rule.fixed_count(z), slack }
    }

    /// `m - wt_fixed`, twice the midpoint.
    pub fn target_twice(&self) -> usize {
        self.m - self.wt_fixed
    }

    pub fn accepts(&self, statistic: usize) -> bool {
        (2 * statistic).abs_diff(self.target_twice()) <= 2 * self.slack
    }
}

/// Smallest grid index `t` such that flipping `z[..t]` puts the statistic
/// within the target's slack.
pub fn knuth_index_search(
    z: &[Symbol],
    rule: &FlipRule,
    grid: FlipGrid,
    target: BalanceTarget,
) -> Option<usize> {
    let points = grid.points(z.len());
    let mut stat = rule.statistic(z) as i64;
    let mut next = points.iter().peekable();
    for t in 0..=z.len() {
        if next.peek() == Some(&&t) {
            next.next();
            if target.accepts(stat as usize) {
                return Some(t);
            }
        }
        if t < z.len() {
            match rule.class(z[t]) {
                Some(true) => stat -= 1,
                Some(false) => stat += 1,
                None => {}
            }
        }
    }
    None
}

const PURE_FLIP: [Symbol; 4] = [2, 3, 0, 1];

/// `interleave(u, complement(u))` for the base-4 representation `u` of
/// `value` with `width` digits.
pub fn index_suffix(value: u64, width: usize) -> Result<Seq, GcError> {
    let u = dna_representation(value, width)?;
    let v: Vec<Symbol> = u.iter().map(|&s| PURE_FLIP[s as usize]).collect();
    Ok(interleave(&u, &v)?)
}

/// Inverse of [`index_suffix`].
pub fn read_index_suffix(suffix: &[Symbol]) -> Result<u64, GcError> {
    if !suffix.len().is_multiple_of(2) {
        return Err(GcError::BadSuffix);
    }
    let mut u = Vec::with_capacity(suffix.len() / 2);
    for pair in suffix.chunks(2) {
        if pair[0] as usize >= PURE_COUNT || pair[1] != PURE_FLIP[pair[0] as usize] {
            return Err(GcError::BadSuffix);
        }
        u.push(pair[0]);
    }
    Ok(dna_value(&u)?)
}

/// GC-class indicator per position for an alphabet whose every symbol lies
/// in one class. Its weight is the GC count of every realization.
pub fn phi_projection(alphabet: &CompositeAlphabet, x: &[Symbol]) -> Result<Vec<u8>, GcError> {
    x.iter()
        .map(|&s| match alphabet.gc_class(s) {
            Some(gc) => Ok(gc as u8),
            None => Err(GcError::WrongAlphabet(format!("{} spans both GC classes", alphabet.name(s)))),
        })
        .collect()
}

/// Index search mode for the encoders that support both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GridMode {
    /// Any index; suffix width `2 * ceil(log4 n)`.
    #[default]
    Full,
    /// Coarse grid; suffix width `2 * ceil(log4 |L|)`.
    Lset,
}

impl std::str::FromStr for GridMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "full" => Ok(GridMode::Full),
            "lset" | "grid" => Ok(GridMode::Lset),
            other => Err(format!("unknown grid mode '{other}'")),
        }
    }
}

fn counts(q: usize, x: &[Symbol]) -> Vec<usize> {
    let mut c = vec![0; q];
    for &s in x {
        c[s as usize] += 1;
    }
    c
}

/// Symbols ordered by (count, index).
fn by_weight(q: usize, x: &[Symbol]) -> Vec<Symbol> {
    let c = counts(q, x);
    let mut order: Vec<Symbol> = (0..q as Symbol).collect();
    order.sort_by_key(|&s| (c[s as usize], s));
    order
}

fn swap_all(x: &mut [Symbol], pairs: &[(Symbol, Symbol)]) {
    for s in x.iter_mut() {
        for &(a, b) in pairs {
            if *s == a {
                *s = b;
                break;
            } else if *s == b {
                *s = a;
                break;
            }
        }
    }
}

fn check_symbols(alphabet: &CompositeAlphabet, x: &[Symbol]) -> Result<(), GcError> {
    match x.iter().find(|&&s| s as usize >= alphabet.len()) {
        Some(&s) => Err(AlphabetError::OutOfRange { value: s as u64, len: alphabet.len() }.into()),
        None => Ok(()),
    }
}

fn at_least(eps: Epsilon, numer: i64, denom: i64) -> Result<(), GcError> {
    let min = num_rational::Ratio::new(numer, denom);
    if eps.ratio() < min {
        return Err(GcError::EpsilonTooSmall { eps: eps.to_string(), min: min.to_string() });
    }
    Ok(())
}

/// `weight <= 2 * eps * n`
fn fits(eps: Epsilon, n: usize, weight: usize) -> bool {
    num_rational::Ratio::from_integer(weight as i64) <= eps.ratio() * (2 * n as i64)
}

/// Balancer for alphabets with one composite letter.
#[derive(Debug, Clone)]
pub struct Sigma1Codec {
    alphabet: CompositeAlphabet,
    rule: FlipRule,
    n: usize,
    grid: GridMode,
    width: usize,
    k: usize,
    slack: usize,
}

impl Sigma1Codec {
    pub fn new(
        alphabet: &CompositeAlphabet,
        n: usize,
        eps: Epsilon,
        grid: GridMode,
    ) -> Result<Self, GcError> {
        if alphabet.composite_count() != 1 {
            return Err(GcError::WrongAlphabet("expected exactly one composite letter".into()));
        }
        at_least(eps, 1, 10)?;
        if n < 16 {
            return Err(GcError::TooShort { n, min: 16 });
        }
        let rule = FlipRule::pure_only(alphabet);
        let (width, k, slack) = match grid {
            GridMode::Full => {
                let width = ceil_log4(n as u64);
                let k = n - 2 * width - 1;
                if !fits(eps, n, k / 5 + 1) {
                    return Err(GcError::TooShort { n, min: n + 1 });
                }
                (width, k, 0)
            }
            GridMode::Lset => Self::lset_layout(n, eps)?,
        };
        Ok(Sigma1Codec { alphabet: alphabet.clone(), rule, n, grid, width, k, slack })
    }

    /// Smallest suffix width `w` for which the grid over the flippable part
    /// fits in `w` base-4 digits, with slack `floor(eps n - wt_max / 2)`.
    fn lset_layout(n: usize, eps: Epsilon) -> Result<(usize, usize, usize), GcError> {
        for width in 1.. {
            if n <= 2 * width + 1 {
                break;
            }
            let k = n - 2 * width - 1;
            let wt_max = (k / 5 + 1) as i64;
            let slack = ((eps.ratio() * (2 * n as i64) - wt_max) / 2).floor().to_integer();
            if slack < 1 {
                continue;
            }
            let size = FlipGrid::Lset { spacing: 2 * slack as usize }.size(k + 1);
            if ceil_log4(size as u64) <= width {
                return Ok((width, k, slack as usize));
            }
        }
        Err(GcError::NoSlack)
    }

    pub fn payload_len(&self) -> usize {
        self.k
    }

    pub fn suffix_width(&self) -> usize {
        2 * self.width
    }

    /// Output length before any parity pad.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn encode(&self, x: &[Symbol]) -> Result<Seq, GcError> {
        if x.len() != self.k {
            return Err(GcError::WrongLength { expected: self.k.to_string(), got: x.len() });
        }
        check_symbols(&self.alphabet, x)?;
        let q = self.alphabet.len();
        let m_sym = PURE_COUNT as Symbol;
        let alpha = by_weight(q, x)[0];
        let mut z = x.to_vec();
        swap_all(&mut z, &[(m_sym, alpha)]);
        let (t, index) = match self.grid {
            GridMode::Full => {
                let fixed = self.rule.fixed_count(&z) + (alpha == m_sym) as usize;
                if !(self.k + 1 - fixed).is_multiple_of(2) {
                    z.push(SYM_A);
                }
                z.push(alpha);
                let target = BalanceTarget::exact(&z, &self.rule)?;
                let t = knuth_index_search(&z, &self.rule, FlipGrid::Full, target)
                    .ok_or(GcError::NoBalancingIndex)?;
                (t, t)
            }
            GridMode::Lset => {
                z.push(alpha);
                let grid = FlipGrid::Lset { spacing: 2 * self.slack };
                let target = BalanceTarget::within(&z, &self.rule, self.slack);
                let t = knuth_index_search(&z, &self.rule, grid, target).ok_or(GcError::NoBalancingIndex)?;
                (t, grid.points(z.len()).iter().position(|&p| p == t).expect("grid point"))
            }
        };
        let mut out = self.rule.flip_prefix(&z, t).into_inner();
        out.extend(index_suffix(index as u64, self.width)?.into_inner());
        Ok(Seq(out))
    }

    pub fn decode(&self, c: &[Symbol]) -> Result<Seq, GcError> {
        let padded = match (self.grid, c.len()) {
            (_, len) if len == self.n => false,
            (GridMode::Full, len) if len == self.n + 1 => true,
            _ => {
                return Err(GcError::WrongLength {
                    expected: format!("{} or {}", self.n, self.n + 1),
                    got: c.len(),
                })
            }
        };
        check_symbols(&self.alphabet, c)?;
        let m = c.len() - 2 * self.width;
        let t = resolve_index(self.grid, self.slack, m, &c[m..])?;
        let z = self.rule.flip_prefix(&c[..m], t);
        let alpha = z[m - 1];
        let mut x = z[..self.k].to_vec();
        swap_all(&mut x, &[(PURE_COUNT as Symbol, alpha)]);
        let x = Seq(x);
        if self.encode(&x)?.0 != c || padded && z[self.k] != SYM_A {
            return Err(GcError::NotACodeword);
        }
        Ok(x)
    }
}

fn resolve_index(grid: GridMode, slack: usize, m: usize, suffix: &[Symbol]) -> Result<usize, GcError> {
    let value = read_index_suffix(suffix)?;
    match grid {
        GridMode::Full => {
            if value > m as u64 {
                return Err(GcError::IndexOutOfRange { value, max: m });
            }
            Ok(value as usize)
        }
        GridMode::Lset => {
            let points = FlipGrid::Lset { spacing: 2 * slack }.points(m);
            points
                .get(value as usize)
                .copied()
                .ok_or(GcError::IndexOutOfRange { value, max: points.len() - 1 })
        }
    }
}

/// Balancer for alphabets with two composite letters of any kind.
#[derive(Debug, Clone)]
pub struct Sigma2Codec {
    alphabet: CompositeAlphabet,
    rule: FlipRule,
    n: usize,
    width: usize,
    k: usize,
}

impl Sigma2Codec {
    pub fn new(alphabet: &CompositeAlphabet, n: usize, eps: Epsilon) -> Result<Self, GcError> {
        if alphabet.composite_count() != 2 {
            return Err(GcError::WrongAlphabet("expected exactly two composite letters".into()));
        }
        at_least(eps, 1, 6)?;
        let width = ceil_log4(n as u64);
        if n < 2 * width + 3 {
            return Err(GcError::TooShort { n, min: 2 * width + 3 });
        }
        let k = n - 2 * width - 2;
        if !fits(eps, n, k / 3 + 2) {
            let min = (n..).find(|&n| {
                let w = ceil_log4(n as u64);
                fits(eps, n, (n - 2 * w - 2) / 3 + 2)
            });
            return Err(GcError::TooShort { n, min: min.unwrap_or(usize::MAX) });
        }
        Ok(Sigma2Codec { alphabet: alphabet.clone(), rule: FlipRule::pure_only(alphabet), n, width, k })
    }

    pub fn payload_len(&self) -> usize {
        self.k
    }

    pub fn suffix_width(&self) -> usize {
        2 * self.width
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Swap that moves the two disclosed symbols `p` into the composite
    /// slots; an involution.
    fn swap_pairs(p: [Symbol; 2]) -> Vec<(Symbol, Symbol)> {
        let (m, nn) = (PURE_COUNT as Symbol, PURE_COUNT as Symbol + 1);
        match (p.contains(&m), p.contains(&nn)) {
            (true, true) => vec![],
            (true, false) => vec![(nn, if p[0] == m { p[1] } else { p[0] })],
            (false, true) => vec![(m, if p[0] == nn { p[1] } else { p[0] })],
            (false, false) => vec![(m, p[0]), (nn, p[1])],
        }
    }

    pub fn encode(&self, x: &[Symbol]) -> Result<Seq, GcError> {
        if x.len() != self.k {
            return Err(GcError::WrongLength { expected: self.k.to_string(), got: x.len() });
        }
        check_symbols(&self.alphabet, x)?;
        let order = by_weight(self.alphabet.len(), x);
        let mut p = [order[0], order[1]];
        p.sort_unstable();
        let mut z = x.to_vec();
        swap_all(&mut z, &Self::swap_pairs(p));
        let fixed = self.rule.fixed_count(&z) + self.rule.fixed_count(&p);
        if !(self.k + 2 - fixed).is_multiple_of(2) {
            z.push(SYM_A);
        }
        z.extend_from_slice(&p);
        let target = BalanceTarget::exact(&z, &self.rule)?;
        let t =
            knuth_index_search(&z, &self.rule, FlipGrid::Full, target).ok_or(GcError::NoBalancingIndex)?;
        let mut out = self.rule.flip_prefix(&z, t).into_inner();
        out.extend(index_suffix(t as u64, self.width)?.into_inner());
        Ok(Seq(out))
    }

    pub fn decode(&self, c: &[Symbol]) -> Result<Seq, GcError> {
        if c.len() != self.n && c.len() != self.n + 1 {
            return Err(GcError::WrongLength {
                expected: format!("{} or {}", self.n, self.n + 1),
                got: c.len(),
            });
        }
        check_symbols(&self.alphabet, c)?;
        let m = c.len() - 2 * self.width;
        let t = resolve_index(GridMode::Full, 0, m, &c[m..])?;
        let z = self.rule.flip_prefix(&c[..m], t);
        let p = [z[m - 2], z[m - 1]];
        if p[0] >= p[1] {
            return Err(GcError::NotACodeword);
        }
        let mut x = z[..self.k].to_vec();
        swap_all(&mut x, &Self::swap_pairs(p));
        let x = Seq(x);
        if self.encode(&x)?.0 != c {
            return Err(GcError::NotACodeword);
        }
        Ok(x)
    }
}

/// Balancer for an `A|T` composite paired with a `C|G` composite. Every
/// symbol then has a definite GC class, so balance can be exact.
#[derive(Debug, Clone)]
pub struct AtgcCodec {
    alphabet: CompositeAlphabet,
    rule: FlipRule,
    n: usize,
    grid: GridMode,
    width: usize,
    slack: usize,
}

impl AtgcCodec {
    /// `Full` needs even `n` and balances exactly; `Lset` needs
    /// `floor(eps n) >= 1`.
    pub fn new(
        alphabet: &CompositeAlphabet,
        n: usize,
        eps: Epsilon,
        grid: GridMode,
    ) -> Result<Self, GcError> {
        let rule = Self::rule_for(alphabet)?;
        let (width, slack) = match grid {
            GridMode::Full => {
                if !n.is_multiple_of(2) {
                    return Err(GcError::OddLength { n });
                }
                (ceil_log4(n as u64), 0)
            }
            GridMode::Lset => {
                let FlipGrid::Lset { spacing } = FlipGrid::lset(eps, n)? else { unreachable!() };
                let width = (1..)
                    .take_while(|w| 2 * w < n)
                    .find(|&w| ceil_log4(FlipGrid::Lset { spacing }.size(n - 2 * w) as u64) <= w)
                    .ok_or(GcError::TooShort { n, min: n + 1 })?;
                (width, spacing / 2)
            }
        };
        if n <= 2 * width {
            return Err(GcError::TooShort { n, min: 2 * width + 1 });
        }
        Ok(AtgcCodec { alphabet: alphabet.clone(), rule, n, grid, width, slack })
    }

    fn rule_for(alphabet: &CompositeAlphabet) -> Result<FlipRule, GcError> {
        let comps: Vec<Symbol> = alphabet.composites().collect();
        let ok = comps.len() == 2
            && alphabet.flip(comps[0]) == comps[1]
            && alphabet.bases(comps[0]) == BaseSet::AT
            && alphabet.bases(comps[1]) == BaseSet::GC;
        if !ok {
            return Err(GcError::WrongAlphabet("expected M=AT~N=CG".into()));
        }
        FlipRule::paired(alphabet)
    }

    /// True when `alphabet` is an `A|T` composite paired with a `C|G` one.
    pub fn supports(alphabet: &CompositeAlphabet) -> bool {
        Self::rule_for(alphabet).is_ok()
    }

    pub fn payload_len(&self) -> usize {
        self.n - 2 * self.width
    }

    pub fn suffix_width(&self) -> usize {
        2 * self.width
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Flip grid over the payload.
    pub fn grid_points(&self) -> Vec<usize> {
        match self.grid {
            GridMode::Full => FlipGrid::Full.points(self.payload_len()),
            GridMode::Lset => FlipGrid::Lset { spacing: 2 * self.slack }.points(self.payload_len()),
        }
    }

    pub fn encode(&self, x: &[Symbol]) -> Result<Seq, GcError> {
        let k = self.payload_len();
        if x.len() != k {
            return Err(GcError::WrongLength { expected: k.to_string(), got: x.len() });
        }
        check_symbols(&self.alphabet, x)?;
        let (grid, target) = match self.grid {
            GridMode::Full => (FlipGrid::Full, BalanceTarget::exact(x, &self.rule)?),
            GridMode::Lset => {
                (FlipGrid::Lset { spacing: 2 * self.slack }, BalanceTarget::within(x, &self.rule, self.slack))
            }
        };
        let t = knuth_index_search(x, &self.rule, grid, target).ok_or(GcError::NoBalancingIndex)?;
        let index = match self.grid {
            GridMode::Full => t,
            GridMode::Lset => grid.points(k).iter().position(|&p| p == t).expect("grid point"),
        };
        let mut out = self.rule.flip_prefix(x, t).into_inner();
        out.extend(index_suffix(index as u64, self.width)?.into_inner());
        Ok(Seq(out))
    }

    pub fn decode(&self, c: &[Symbol]) -> Result<Seq, GcError> {
        if c.len() != self.n {
            return Err(GcError::WrongLength { expected: self.n.to_string(), got: c.len() });
        }
        check_symbols(&self.alphabet, c)?;
        let k = self.payload_len();
        let t = resolve_index(self.grid, self.slack, k, &c[k..])?;
        let x = self.rule.flip_prefix(&c[..k], t);
        if self.encode(&x)?.0 != c {
            return Err(GcError::NotACodeword);
        }
        Ok(x)
    }
}

/// One of the balancing encoders, chosen from the alphabet's shape.
#[derive(Debug, Clone)]
pub enum GcCodec {
    Sigma1(Sigma1Codec),
    Sigma2(Sigma2Codec),
    Atgc(AtgcCodec),
}

impl GcCodec {
    /// `A|T`/`C|G` pairs use [`AtgcCodec`]; otherwise the composite count
    /// decides.
    pub fn new(
        alphabet: &CompositeAlphabet,
        n: usize,
        eps: Epsilon,
        grid: GridMode,
    ) -> Result<Self, GcError> {
        if AtgcCodec::supports(alphabet) {
            return Ok(GcCodec::Atgc(AtgcCodec::new(alphabet, n, eps, grid)?));
        }
        match alphabet.composite_count() {
            1 => Ok(GcCodec::Sigma1(Sigma1Codec::new(alphabet, n, eps, grid)?)),
            2 => Ok(GcCodec::Sigma2(Sigma2Codec::new(alphabet, n, eps)?)),
            c => Err(GcError::WrongAlphabet(format!("{c} composite letters"))),
        }
    }

    pub fn payload_len(&self) -> usize {
        match self {
            GcCodec::Sigma1(c) => c.payload_len(),
            GcCodec::Sigma2(c) => c.payload_len(),
            GcCodec::Atgc(c) => c.payload_len(),
        }
    }

    pub fn encode(&self, x: &[Symbol]) -> Result<Seq, GcError> {
        match self {
            GcCodec::Sigma1(c) => c.encode(x),
            GcCodec::Sigma2(c) => c.encode(x),
            GcCodec::Atgc(c) => c.encode(x),
        }
    }

    pub fn decode(&self, c: &[Symbol]) -> Result<Seq, GcError> {
        match self {
            GcCodec::Sigma1(codec) => codec.decode(c),
            GcCodec::Sigma2(codec) => codec.decode(c),
            GcCodec::Atgc(codec) => codec.decode(c),
        }
    }
}
