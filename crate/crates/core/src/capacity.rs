//! Forbidden windows, the ℓ-RLL constraint graph and its capacity.
//!
//! Words of length `l` are the graph nodes and are indexed by their base-`q`
//! value (most significant symbol first), so node order is lexicographic in
//! symbol-index order. The same convention orders the forbidden set.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::alphabet::{BaseSet, CompositeAlphabet, Seq, Symbol};
use crate::verifier::{self, BalanceMode, Epsilon, GcBounds, GcWindow};

pub const DEFAULT_NODE_CAP: usize = 1_000_000;
pub const DEFAULT_BRUTE_CAP: u64 = 100_000_000;
pub const DEFAULT_STATE_CAP: usize = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CapacityError {
    #[error("window length must be at least 1")]
    ZeroWindow,
    #[error("graph would have {nodes} nodes, above the cap of {cap}")]
    NodeCapExceeded { nodes: u128, cap: usize },
    #[error("constraint graph is empty")]
    EmptyGraph,
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error(
        "power iteration did not converge in {iterations} steps (estimate {lambda}, residual {residual:e})"
    )]
    NoConvergence { iterations: usize, lambda: f64, residual: f64 },
    #[error("brute-force enumeration of {words} words exceeds the cap of {cap}")]
    BruteCapExceeded { words: u128, cap: u64 },
    #[error("dynamic program reached {states} states, above the cap of {cap}")]
    StateCapExceeded { states: usize, cap: usize },
    #[error("word length must be at least 1")]
    EmptyLength,
}

/// Every length-`(l+1)` word over the alphabet whose symbols share a base,
/// kept as sorted base-`q` codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForbiddenSet {
    l: usize,
    radix: u64,
    codes: Vec<u64>,
}

impl ForbiddenSet {
    pub fn window_len(&self) -> usize {
        self.l + 1
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    fn code(&self, w: &[Symbol]) -> u64 {
        w.iter().fold(0u64, |acc, &s| acc * self.radix + s as u64)
    }

    /// Position of `w` in the canonical ordering, if forbidden.
    pub fn rank(&self, w: &[Symbol]) -> Option<usize> {
        if w.len() != self.l + 1 {
            return None;
        }
        self.codes.binary_search(&self.code(w)).ok()
    }

    pub fn contains(&self, w: &[Symbol]) -> bool {
        self.rank(w).is_some()
    }

    pub fn word(&self, rank: usize) -> Option<Seq> {
        let mut code = *self.codes.get(rank)?;
        let mut out = vec![0; self.l + 1];
        for slot in out.iter_mut().rev() {
            *slot = (code % self.radix) as Symbol;
            code /= self.radix;
        }
        Some(Seq(out))
    }

    pub fn iter(&self) -> impl Iterator<Item = Seq> + '_ {
        (0..self.codes.len()).filter_map(|r| self.word(r))
    }
}

/// Builds `F(l; alphabet)` by depth-first extension, pruning as soon as the
/// running common base set becomes empty.
pub fn forbidden_set(l: usize, alphabet: &CompositeAlphabet) -> Result<ForbiddenSet, CapacityError> {
    if l == 0 {
        return Err(CapacityError::ZeroWindow);
    }
    let radix = alphabet.len() as u64;
    if radix.checked_pow(l as u32 + 1).is_none() {
        return Err(CapacityError::NodeCapExceeded { nodes: u128::MAX, cap: usize::MAX });
    }
    let mut codes = Vec::new();
    fn extend(
        alphabet: &CompositeAlphabet,
        remaining: usize,
        code: u64,
        common: BaseSet,
        radix: u64,
        out: &mut Vec<u64>,
    ) {
        if remaining == 0 {
            out.push(code);
            return;
        }
        for s in 0..radix {
            let next = common.intersect(alphabet.bases(s as Symbol));
            if !next.is_empty() {
                extend(alphabet, remaining - 1, code * radix + s, next, radix, out);
            }
        }
    }
    extend(alphabet, l + 1, 0, BaseSet::ALL, radix, &mut codes);
    Ok(ForbiddenSet { l, radix, codes })
}

/// 0/1 matrix in compressed sparse row form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseAdjacency {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl SparseAdjacency {
    pub fn from_rows(rows: Vec<Vec<u32>>) -> Self {
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for mut row in rows {
            row.sort_unstable();
            row.dedup();
            targets.extend(row);
            offsets.push(targets.len());
        }
        SparseAdjacency { offsets, targets }
    }

    pub fn from_dense(m: &[Vec<u8>]) -> Self {
        Self::from_rows(
            m.iter()
                .map(|row| row.iter().enumerate().filter(|(_, &v)| v != 0).map(|(j, _)| j as u32).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.row(i).binary_search(&(j as u32)).is_ok()
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        (0..self.dim())
            .map(|i| {
                let mut row = vec![0u8; self.dim()];
                for &j in self.row(i) {
                    row[j as usize] = 1;
                }
                row
            })
            .collect()
    }

    /// `y = A x`
    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).iter().map(|&j| x[j as usize]).sum();
        }
    }
}

/// De Bruijn-style graph on `Σ^l`: `u -> v` when `v` extends `u` by one
/// symbol and the resulting `(l+1)`-window is not forbidden.
#[derive(Debug, Clone)]
pub struct ConstraintGraph {
    l: usize,
    radix: usize,
    adjacency: SparseAdjacency,
}

impl ConstraintGraph {
    pub fn l(&self) -> usize {
        self.l
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.dim()
    }

    pub fn adjacency(&self) -> &SparseAdjacency {
        &self.adjacency
    }

    pub fn node_word(&self, idx: usize) -> Seq {
        let mut out = vec![0; self.l];
        let mut v = idx;
        for slot in out.iter_mut().rev() {
            *slot = (v % self.radix) as Symbol;
            v /= self.radix;
        }
        Seq(out)
    }

    pub fn node_index(&self, w: &[Symbol]) -> usize {
        w.iter().fold(0usize, |acc, &s| acc * self.radix + s as usize)
    }
}

pub fn build_graph(
    l: usize,
    alphabet: &CompositeAlphabet,
    node_cap: usize,
) -> Result<ConstraintGraph, CapacityError> {
    if l == 0 {
        return Err(CapacityError::ZeroWindow);
    }
    let q = alphabet.len();
    let nodes = (q as u128).checked_pow(l as u32).unwrap_or(u128::MAX);
    if nodes > node_cap as u128 {
        return Err(CapacityError::NodeCapExceeded { nodes, cap: node_cap });
    }
    let nodes = nodes as usize;
    let tail_mod = nodes / q;
    let symbol_bases: Vec<BaseSet> = (0..q).map(|s| alphabet.bases(s as Symbol)).collect();

    let mut rows = Vec::with_capacity(nodes);
    let common: Vec<BaseSet> = (0..nodes)
        .map(|u| {
            let mut v = u;
            let mut mask = BaseSet::ALL;
            for _ in 0..l {
                mask = mask.intersect(symbol_bases[v % q]);
                v /= q;
            }
            mask
        })
        .collect();
    for (u, &mask) in common.iter().enumerate() {
        let shifted = (u % tail_mod) * q;
        let row: Vec<u32> =
            (0..q).filter(|&s| !mask.intersects(symbol_bases[s])).map(|s| (shifted + s) as u32).collect();
        rows.push(row);
    }
    Ok(ConstraintGraph { l, radix: q, adjacency: SparseAdjacency::from_rows(rows) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for PowerOptions {
    fn default() -> Self {
        PowerOptions { tol: 1e-9, max_iter: 100_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityResult {
    pub lambda: f64,
    /// `log2(lambda)`, or 0 when the matrix is nilpotent.
    pub capacity_bits: f64,
    pub iterations: usize,
    /// `||A x - lambda x||` for the final unit iterate.
    pub residual: f64,
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Power iteration from the all-ones vector, normalized each step, stopping
/// when successive Rayleigh quotients differ by less than `tol`.
pub fn dominant_eigenvalue(
    adjacency: &SparseAdjacency,
    opts: PowerOptions,
) -> Result<CapacityResult, CapacityError> {
    let dim = adjacency.dim();
    if dim == 0 {
        return Err(CapacityError::EmptyGraph);
    }
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(CapacityError::BadTolerance);
    }
    let mut x = vec![1.0 / (dim as f64).sqrt(); dim];
    let mut y = vec![0.0; dim];
    let mut prev = f64::NAN;
    for it in 1..=opts.max_iter {
        adjacency.mul_vec(&x, &mut y);
        let rq: f64 = x.iter().zip(&y).map(|(a, b)| a * b).sum();
        let ny = norm(&y);
        let residual = x.iter().zip(&y).map(|(a, b)| (b - rq * a).powi(2)).sum::<f64>().sqrt();
        if ny == 0.0 {
            return Ok(CapacityResult { lambda: 0.0, capacity_bits: 0.0, iterations: it, residual: 0.0 });
        }
        if (rq - prev).abs() < opts.tol {
            return Ok(CapacityResult {
                lambda: rq,
                capacity_bits: if rq > 0.0 { rq.log2().max(0.0) } else { 0.0 },
                iterations: it,
                residual,
            });
        }
        prev = rq;
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / ny;
        }
    }
    let mut y = vec![0.0; dim];
    adjacency.mul_vec(&x, &mut y);
    let residual = x.iter().zip(&y).map(|(a, b)| (b - prev * a).powi(2)).sum::<f64>().sqrt();
    Err(CapacityError::NoConvergence { iterations: opts.max_iter, lambda: prev, residual })
}

/// Capacity of the ℓ-RLL constraint in bits per symbol.
pub fn rll_capacity(
    l: usize,
    alphabet: &CompositeAlphabet,
    opts: PowerOptions,
) -> Result<CapacityResult, CapacityError> {
    let graph = build_graph(l, alphabet, DEFAULT_NODE_CAP)?;
    dominant_eigenvalue(graph.adjacency(), opts)
}

/// Largest `n` for which the replacement pointer stays injective:
/// `floor((q-1) q^l / |F|) + l`.
pub fn one_redundancy_bound(l: usize, alphabet: &CompositeAlphabet) -> Result<u64, CapacityError> {
    let f = forbidden_set(l, alphabet)?.len() as u128;
    let q = alphabet.len() as u128;
    let pointers = (q - 1) * q.pow(l as u32);
    Ok((pointers / f) as u64 + l as u64)
}

/// `ceil((q-1) q^l / |F|) + l`; reported next to the floor bound for
/// comparison only.
pub fn one_redundancy_bound_ceil(l: usize, alphabet: &CompositeAlphabet) -> Result<u64, CapacityError> {
    let f = forbidden_set(l, alphabet)?.len() as u128;
    let q = alphabet.len() as u128;
    let pointers = (q - 1) * q.pow(l as u32);
    Ok(pointers.div_ceil(f) as u64 + l as u64)
}

/// Which words are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    Rll(usize),
    Balanced(Epsilon, BalanceMode),
    Both(usize, Epsilon, BalanceMode),
}

impl Constraint {
    pub fn rll(&self) -> Option<usize> {
        match *self {
            Constraint::Rll(l) | Constraint::Both(l, ..) => Some(l),
            Constraint::Balanced(..) => None,
        }
    }

    pub fn balance(&self) -> Option<(Epsilon, BalanceMode)> {
        match *self {
            Constraint::Balanced(e, m) | Constraint::Both(_, e, m) => Some((e, m)),
            Constraint::Rll(_) => None,
        }
    }

    /// Applies the verifier predicates directly.
    pub fn accepts(&self, alphabet: &CompositeAlphabet, x: &[Symbol]) -> bool {
        self.rll().is_none_or(|l| verifier::is_rll(alphabet, x, l))
            && self.balance().is_none_or(|(e, m)| verifier::is_eps_balanced(alphabet, x, e, m))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct DpState {
    runs: [u8; 4],
    min_gc: u32,
    max_gc: u32,
}

/// Exact number of length-`n` words satisfying `constraint` for every
/// realization, by a transfer recursion over per-base run lengths and the
/// additive GC bounds.
pub fn count_exact(
    n: usize,
    constraint: Constraint,
    alphabet: &CompositeAlphabet,
) -> Result<BigUint, CapacityError> {
    count_exact_with_cap(n, constraint, alphabet, DEFAULT_STATE_CAP)
}

pub fn count_exact_with_cap(
    n: usize,
    constraint: Constraint,
    alphabet: &CompositeAlphabet,
    state_cap: usize,
) -> Result<BigUint, CapacityError> {
    if n == 0 {
        return Err(CapacityError::EmptyLength);
    }
    let max_run = match constraint.rll() {
        Some(0) => return Err(CapacityError::ZeroWindow),
        Some(l) => Some(l.min(u8::MAX as usize - 1) as u8),
        None => None,
    };
    let track_gc = constraint.balance().is_some();
    let symbols: Vec<(BaseSet, u32, u32)> = (0..alphabet.len())
        .map(|s| {
            let b = alphabet.bases(s as Symbol);
            (b, b.is_subset(BaseSet::GC) as u32, b.intersects(BaseSet::GC) as u32)
        })
        .collect();

    let mut layer: HashMap<DpState, BigUint> = HashMap::new();
    layer.insert(DpState { runs: [0; 4], min_gc: 0, max_gc: 0 }, BigUint::one());
    for _ in 0..n {
        let mut next: HashMap<DpState, BigUint> = HashMap::with_capacity(layer.len() * 2);
        for (state, count) in &layer {
            'sym: for &(bases, lo, hi) in &symbols {
                let mut runs = [0u8; 4];
                if let Some(limit) = max_run {
                    for (b, r) in runs.iter_mut().enumerate() {
                        if bases.bits() & (1 << b) != 0 {
                            *r = state.runs[b] + 1;
                            if *r > limit {
                                continue 'sym;
                            }
                        }
                    }
                }
                let s = if track_gc {
                    DpState { runs, min_gc: state.min_gc + lo, max_gc: state.max_gc + hi }
                } else {
                    DpState { runs, min_gc: 0, max_gc: 0 }
                };
                *next.entry(s).or_insert_with(BigUint::zero) += count;
            }
        }
        if next.len() > state_cap {
            return Err(CapacityError::StateCapExceeded { states: next.len(), cap: state_cap });
        }
        layer = next;
    }

    let window = constraint.balance().map(|(e, m)| GcWindow::new(n, e, m));
    Ok(layer
        .into_iter()
        .filter(|(s, _)| {
            window
                .is_none_or(|w| w.contains(GcBounds { min_gc: s.min_gc as usize, max_gc: s.max_gc as usize }))
        })
        .map(|(_, c)| c)
        .sum())
}

/// Number of length-`n` words generated by walks in the constraint graph:
/// `|Σ|^n` for `n < l`, otherwise the number of walks with `n - l` edges.
pub fn count_paths(graph: &ConstraintGraph, n: usize) -> BigUint {
    let l = graph.l();
    if n < l {
        return BigUint::from(graph.radix).pow(n as u32);
    }
    let adj = graph.adjacency();
    let mut counts: Vec<BigUint> = vec![BigUint::one(); adj.dim()];
    for _ in 0..(n - l) {
        counts = (0..adj.dim()).map(|i| adj.row(i).iter().map(|&j| &counts[j as usize]).sum()).collect();
    }
    counts.into_iter().sum()
}

/// Exhaustive count; ground truth for [`count_exact`].
pub fn brute_count(
    n: usize,
    constraint: Constraint,
    alphabet: &CompositeAlphabet,
    cap: u64,
) -> Result<BigUint, CapacityError> {
    let words = (alphabet.len() as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if words > cap as u128 {
        return Err(CapacityError::BruteCapExceeded { words, cap });
    }
    Ok(BigUint::from(brute_count_prefix(&[], n, constraint, alphabet)))
}

/// Counts accepted length-`n` words starting with `prefix`. Summing over a
/// partition of prefixes gives the full count, so callers may split the
/// enumeration across workers.
pub fn brute_count_prefix(
    prefix: &[Symbol],
    n: usize,
    constraint: Constraint,
    alphabet: &CompositeAlphabet,
) -> u64 {
    if prefix.len() > n {
        return 0;
    }
    let q = alphabet.len() as Symbol;
    let mut word = prefix.to_vec();
    word.resize(n, 0);
    let free = prefix.len();
    let mut count = 0u64;
    loop {
        if constraint.accepts(alphabet, &word) {
            count += 1;
        }
        // odometer over the free suffix
        let mut i = n;
        loop {
            if i == free {
                return count;
            }
            i -= 1;
            word[i] += 1;
            if word[i] < q {
                break;
            }
            word[i] = 0;
        }
    }
}

/// One line of a capacity sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityRow {
    pub l: usize,
    pub alphabet: String,
    pub lambda: f64,
    pub capacity_bits: f64,
    pub iterations: usize,
}

pub fn capacity_sweep(
    alphabet: &CompositeAlphabet,
    ls: impl IntoIterator<Item = usize>,
    opts: PowerOptions,
) -> Result<Vec<CapacityRow>, CapacityError> {
    ls.into_iter()
        .map(|l| {
            let r = rll_capacity(l, alphabet, opts)?;
            Ok(CapacityRow {
                l,
                alphabet: alphabet.spec(),
                lambda: r.lambda,
                capacity_bits: r.capacity_bits,
                iterations: r.iterations,
            })
        })
        .collect()
}

pub fn rows_to_csv(rows: &[CapacityRow], precision: usize) -> String {
    let mut out = String::from("l,alphabet,lambda,capacity_bits,iterations\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{:.p$},{:.p$},{}",
            r.l,
            r.alphabet,
            r.lambda,
            r.capacity_bits,
            r.iterations,
            p = precision
        );
    }
    out
}

pub fn rows_to_text(rows: &[CapacityRow], precision: usize) -> String {
    let width = rows.iter().map(|r| r.alphabet.len()).max().unwrap_or(0).max(8);
    let mut out = format!(
        "{:>3}  {:<width$}  {:>12}  {:>13}  {:>10}\n",
        "l", "alphabet", "lambda", "capacity_bits", "iterations"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:>3}  {:<width$}  {:>12.p$}  {:>13.p$}  {:>10}",
            r.l,
            r.alphabet,
            r.lambda,
            r.capacity_bits,
            r.iterations,
            p = precision
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma1() -> CompositeAlphabet {
        CompositeAlphabet::parse("M=AC").unwrap()
    }

    #[test]
    fn forbidden_set_l1_sigma1() {
        let a = sigma1();
        let f = forbidden_set(1, &a).unwrap();
        let mut words: Vec<String> = f.iter().map(|w| a.format(&w)).collect();
        words.sort();
        let mut expected = ["AA", "AM", "MA", "MM", "CC", "CM", "MC", "TT", "GG"];
        expected.sort();
        assert_eq!(words, expected);
    }

    #[test]
    fn forbidden_set_small_cases() {
        assert_eq!(forbidden_set(2, &sigma1()).unwrap().len(), 17);
        let s0 = CompositeAlphabet::sigma0();
        let f = forbidden_set(1, &s0).unwrap();
        let words: Vec<String> = f.iter().map(|w| s0.format(&w)).collect();
        assert_eq!(words, ["AA", "TT", "CC", "GG"]);
        assert!(forbidden_set(0, &s0).is_err());
    }

    #[test]
    fn forbidden_rank_roundtrip() {
        let a = sigma1();
        let f = forbidden_set(3, &a).unwrap();
        for r in 0..f.len() {
            assert_eq!(f.rank(&f.word(r).unwrap()), Some(r));
        }
        assert_eq!(f.rank(&a.parse_word("ATCG").unwrap()), None);
        assert_eq!(f.rank(&a.parse_word("AAA").unwrap()), None);
    }

    #[test]
    fn example_matrix_l1() {
        let g = build_graph(1, &sigma1(), DEFAULT_NODE_CAP).unwrap();
        let expected = vec![
            vec![0, 1, 1, 1, 0],
            vec![1, 0, 1, 1, 1],
            vec![1, 1, 0, 1, 0],
            vec![1, 1, 1, 0, 1],
            vec![0, 1, 0, 1, 0],
        ];
        assert_eq!(g.adjacency().to_dense(), expected);
    }

    #[test]
    fn pure_graph_is_complete_without_loops() {
        let g = build_graph(1, &CompositeAlphabet::sigma0(), DEFAULT_NODE_CAP).unwrap();
        let d = g.adjacency().to_dense();
        for (i, row) in d.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                assert_eq!(v, (i != j) as u8);
            }
        }
        let r = dominant_eigenvalue(g.adjacency(), PowerOptions::default()).unwrap();
        assert!((r.lambda - 3.0).abs() < 1e-9);
    }

    #[test]
    fn graph_l2_edge_count() {
        let g = build_graph(2, &sigma1(), DEFAULT_NODE_CAP).unwrap();
        assert_eq!(g.node_count(), 25);
        assert_eq!(g.adjacency().edge_count(), 108);
    }

    #[test]
    fn node_cap() {
        let a = CompositeAlphabet::parse("M=AT,N=CG").unwrap();
        assert!(matches!(build_graph(6, &a, 1000), Err(CapacityError::NodeCapExceeded { .. })));
    }

    #[test]
    fn example_eigenvalue() {
        let g = build_graph(1, &sigma1(), DEFAULT_NODE_CAP).unwrap();
        let r = dominant_eigenvalue(g.adjacency(), PowerOptions::default()).unwrap();
        assert!((r.lambda - 3.323).abs() < 1e-3, "{}", r.lambda);
        assert!((r.capacity_bits - 1.733).abs() < 1e-3);
        assert!(r.residual < 1e-4);
    }

    #[test]
    fn zero_and_empty_matrices() {
        let z = SparseAdjacency::from_dense(&[vec![0, 0], vec![0, 0]]);
        let r = dominant_eigenvalue(&z, PowerOptions::default()).unwrap();
        assert_eq!(r.lambda, 0.0);
        assert_eq!(r.capacity_bits, 0.0);
        let e = SparseAdjacency::from_rows(vec![]);
        assert_eq!(dominant_eigenvalue(&e, PowerOptions::default()), Err(CapacityError::EmptyGraph));
        let one = SparseAdjacency::from_dense(&[vec![1]]);
        assert_eq!(
            dominant_eigenvalue(&one, PowerOptions { tol: 0.0, max_iter: 10 }),
            Err(CapacityError::BadTolerance)
        );
    }

    #[test]
    fn non_convergence_is_reported() {
        let g = build_graph(3, &sigma1(), DEFAULT_NODE_CAP).unwrap();
        let err = dominant_eigenvalue(g.adjacency(), PowerOptions { tol: 1e-15, max_iter: 3 });
        assert!(matches!(err, Err(CapacityError::NoConvergence { iterations: 3, .. })));
    }

    #[test]
    fn bound_values() {
        let s2 = CompositeAlphabet::parse("M=AT~N=CG").unwrap();
        assert_eq!(one_redundancy_bound(6, &s2).unwrap(), 463);
        assert_eq!(one_redundancy_bound(4, &s2).unwrap(), 55);
        assert_eq!(one_redundancy_bound(6, &sigma1()).unwrap(), 249);
        assert_eq!(one_redundancy_bound_ceil(6, &sigma1()).unwrap(), 250);
    }

    #[test]
    fn small_counts() {
        let a = sigma1();
        assert_eq!(count_exact(2, Constraint::Rll(1), &a).unwrap(), BigUint::from(16u32));
        assert_eq!(brute_count(2, Constraint::Rll(1), &a, DEFAULT_BRUTE_CAP).unwrap(), BigUint::from(16u32));
        for l in 1..4 {
            assert_eq!(count_exact(1, Constraint::Rll(l), &a).unwrap(), BigUint::from(5u32));
        }
        assert_eq!(brute_count(3, Constraint::Rll(3), &a, DEFAULT_BRUTE_CAP).unwrap(), BigUint::from(125u32));
        let s0 = CompositeAlphabet::sigma0();
        let bal0 = Constraint::Balanced(Epsilon::zero(), BalanceMode::Strict);
        assert_eq!(brute_count(3, bal0, &s0, DEFAULT_BRUTE_CAP).unwrap(), BigUint::zero());
        assert_eq!(count_exact(3, bal0, &s0).unwrap(), BigUint::zero());
        assert!(matches!(
            brute_count(20, Constraint::Rll(1), &a, DEFAULT_BRUTE_CAP),
            Err(CapacityError::BruteCapExceeded { .. })
        ));
    }

    #[test]
    fn prefix_partition_sums() {
        let a = sigma1();
        let c = Constraint::Both(2, "0.25".parse().unwrap(), BalanceMode::Lenient);
        let total = brute_count_prefix(&[], 6, c, &a);
        let split: u64 = (0..5).map(|s| brute_count_prefix(&[s], 6, c, &a)).sum();
        assert_eq!(total, split);
    }

    #[test]
    fn table_formats() {
        let rows = capacity_sweep(&sigma1(), 1..=2, PowerOptions::default()).unwrap();
        let csv = rows_to_csv(&rows, 3);
        assert!(csv.starts_with("l,alphabet,lambda,capacity_bits,iterations\n"));
        assert!(csv.contains("1,M=AC,3.323,1.733,"));
        assert!(csv.lines().nth(2).unwrap().contains(",2.170,"));
        let text = rows_to_text(&rows, 3);
        assert_eq!(text.lines().count(), 3);
    }
}
