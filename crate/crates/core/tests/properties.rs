use cdna_core::alphabet::{
    self, ceil_log4, dna_representation, dna_value, interleave, CompositeAlphabet, Symbol,
};
use cdna_core::capacity::{self, Constraint, PowerOptions};
use cdna_core::combined_codec::CombinedCodec;
use cdna_core::gc_codec::{self, AtgcCodec, FlipRule, GridMode, Sigma1Codec, Sigma2Codec};
use cdna_core::rll_codec::RllCodec;
use cdna_core::verifier::{self, BalanceMode, Epsilon};
use num_traits::ToPrimitive;
use proptest::prelude::*;

const SPECS: &[&str] = &["M=AC", "M=ATC", "M=ATCG", "M=AT~N=CG", "M=AT,N=AG", "M=AT,N=ACG", "M=ATC,N=ATG"];

fn alphabet() -> impl Strategy<Value = CompositeAlphabet> {
    prop::sample::select(SPECS).prop_map(|s| CompositeAlphabet::parse(s).unwrap())
}

fn word_over(
    a: &CompositeAlphabet,
    len: impl Into<prop::collection::SizeRange>,
) -> impl Strategy<Value = Vec<Symbol>> {
    prop::collection::vec(0..a.len() as Symbol, len)
}

fn alphabet_and_word(len: std::ops::Range<usize>) -> impl Strategy<Value = (CompositeAlphabet, Vec<Symbol>)> {
    alphabet().prop_flat_map(move |a| {
        let w = word_over(&a, len.clone());
        (Just(a), w)
    })
}

fn eps() -> impl Strategy<Value = Epsilon> {
    (0i64..=8).prop_map(|k| Epsilon::new(k, 16).unwrap())
}

/// Reference run check over every realization.
fn rll_by_realizations(a: &CompositeAlphabet, x: &[Symbol], l: usize) -> bool {
    verifier::realizations(a, x, u64::MAX).unwrap().iter().all(|r| verifier::longest_run(r) <= l)
}

fn balanced_by_realizations(a: &CompositeAlphabet, x: &[Symbol], e: Epsilon, mode: BalanceMode) -> bool {
    let window = verifier::GcWindow::new(x.len(), e, mode);
    verifier::realizations(a, x, u64::MAX).unwrap().iter().all(|r| {
        let gc = verifier::pure_gc_count(r) as i64;
        gc >= window.lo && gc <= window.hi
    })
}

proptest! {
    #[test]
    fn flip_is_an_involution((a, x) in alphabet_and_word(0..20), t in 0usize..25) {
        let t = t.min(x.len());
        let once = a.flip_prefix(&x, t).unwrap();
        prop_assert_eq!(a.flip_prefix(&once, t).unwrap().0, x.clone());
        let rule = FlipRule::pure_only(&a);
        prop_assert_eq!(rule.flip_prefix(&rule.flip_prefix(&x, t), t).0, x);
    }

    #[test]
    fn flip_toggles_pure_classes((a, x) in alphabet_and_word(1..20)) {
        for &s in &x {
            if a.is_pure(s) {
                prop_assert_ne!(a.gc_class(s), a.gc_class(a.flip(s)));
            }
        }
    }

    #[test]
    fn dna_representation_is_bijective(w in 1usize..10, v in any::<u64>()) {
        let v = v % 4u64.pow(w as u32);
        let word = dna_representation(v, w).unwrap();
        prop_assert_eq!(word.len(), w);
        prop_assert_eq!(dna_value(&word).unwrap(), v);
    }

    #[test]
    fn ceil_log4_is_minimal(n in 1u64..1_000_000) {
        let w = ceil_log4(n) as u32;
        prop_assert!(4u64.pow(w) >= n);
        prop_assert!(w == 1 || 4u64.pow(w - 1) < n);
    }

    #[test]
    fn rll_matches_realizations((a, x) in alphabet_and_word(0..7), l in 1usize..4) {
        prop_assert_eq!(verifier::is_rll(&a, &x, l), rll_by_realizations(&a, &x, l));
    }

    #[test]
    fn balance_matches_realizations((a, x) in alphabet_and_word(0..7), e in eps(), strict in any::<bool>()) {
        let mode = if strict { BalanceMode::Strict } else { BalanceMode::Lenient };
        prop_assert_eq!(
            verifier::is_eps_balanced(&a, &x, e, mode),
            balanced_by_realizations(&a, &x, e, mode)
        );
    }

    #[test]
    fn balance_is_monotone((a, x) in alphabet_and_word(0..16), lo in 0i64..=8, hi in 0i64..=8) {
        let (lo, hi) = (lo.min(hi), lo.max(hi));
        let (e1, e2) = (Epsilon::new(lo, 16).unwrap(), Epsilon::new(hi, 16).unwrap());
        for mode in [BalanceMode::Strict, BalanceMode::Lenient] {
            if verifier::is_eps_balanced(&a, &x, e1, mode) {
                prop_assert!(verifier::is_eps_balanced(&a, &x, e2, mode));
            }
        }
        if verifier::is_eps_balanced(&a, &x, e1, BalanceMode::Strict) {
            prop_assert!(verifier::is_eps_balanced(&a, &x, e1, BalanceMode::Lenient));
        }
    }

    #[test]
    fn graph_edges_follow_forbidden_set(a in alphabet(), l in 1usize..4, u in any::<usize>(), s in any::<u8>()) {
        let g = capacity::build_graph(l, &a, capacity::DEFAULT_NODE_CAP).unwrap();
        let f = capacity::forbidden_set(l, &a).unwrap();
        let u = u % g.node_count();
        let s = s % a.len() as u8;
        let mut window = g.node_word(u).into_inner();
        window.push(s);
        let v = g.node_index(&window[1..]);
        prop_assert_eq!(g.adjacency().has_edge(u, v), !f.contains(&window));
    }

    #[test]
    fn rll_codec_roundtrip(spec in prop::sample::select(SPECS), l in 2usize..5, seed in any::<u64>()) {
        let a = CompositeAlphabet::parse(spec).unwrap();
        let bound = capacity::one_redundancy_bound(l, &a).unwrap() as usize;
        let n = l + 2 + (seed as usize % (bound - l - 1));
        let codec = RllCodec::new(&a, l, n).unwrap();
        let x: Vec<Symbol> = (0..n - 1)
            .map(|i| ((seed.rotate_left(i as u32 % 64) ^ i as u64) % a.len() as u64) as Symbol)
            .collect();
        let c = codec.encode(&x).unwrap();
        prop_assert_eq!(c.len(), n);
        prop_assert!(verifier::is_rll(&a, &c, l));
        prop_assert_eq!(codec.decode(&c).unwrap().0, x);
    }

    #[test]
    fn rll_stream_roundtrip(x in word_over(&CompositeAlphabet::parse("M=AT~N=CG").unwrap(), 0..120)) {
        let a = CompositeAlphabet::parse("M=AT~N=CG").unwrap();
        let codec = RllCodec::new(&a, 3, 20).unwrap();
        let c = codec.encode_stream(&x).unwrap();
        prop_assert!(verifier::is_rll(&a, &c, 3));
        prop_assert_eq!(codec.decode_stream(&c).unwrap().0, x);
    }

    #[test]
    fn sigma1_roundtrip(n in 16usize..80, x_seed in any::<u64>(), grid in any::<bool>()) {
        let a = CompositeAlphabet::parse("M=AC").unwrap();
        let (e, grid) = if grid { (Epsilon::new(1, 4).unwrap(), GridMode::Lset) } else { (Epsilon::new(1, 10).unwrap(), GridMode::Full) };
        let codec = Sigma1Codec::new(&a, n, e, grid).unwrap();
        let x: Vec<Symbol> = (0..codec.payload_len()).map(|i| ((x_seed >> (i % 60)) % 5) as Symbol).collect();
        let c = codec.encode(&x).unwrap();
        prop_assert!(verifier::is_eps_balanced(&a, &c, e, BalanceMode::Strict));
        prop_assert_eq!(codec.decode(&c).unwrap().0, x);
    }

    #[test]
    fn sigma2_roundtrip(spec in prop::sample::select(&SPECS[3..]), x in prop::collection::vec(0u8..6, 56)) {
        let a = CompositeAlphabet::parse(spec).unwrap();
        let e = Epsilon::new(1, 6).unwrap();
        let codec = Sigma2Codec::new(&a, 64, e).unwrap();
        let c = codec.encode(&x).unwrap();
        prop_assert!(verifier::is_eps_balanced(&a, &c, e, BalanceMode::Strict));
        prop_assert_eq!(codec.decode(&c).unwrap().0, x);
    }

    #[test]
    fn atgc_grid_roundtrip(n in 20usize..200, k in 1i64..=8, x_seed in any::<u64>()) {
        let a = CompositeAlphabet::parse("M=AT~N=CG").unwrap();
        let e = Epsilon::new(k, 16).unwrap();
        let codec = AtgcCodec::new(&a, n, e, GridMode::Lset).unwrap();
        let x: Vec<Symbol> = (0..codec.payload_len()).map(|i| ((x_seed >> (i % 61)) % 6) as Symbol).collect();
        let c = codec.encode(&x).unwrap();
        prop_assert!(verifier::is_eps_balanced(&a, &c, e, BalanceMode::Strict));
        prop_assert_eq!(codec.decode(&c).unwrap().0, x);
    }

    #[test]
    fn combined_roundtrip(x in prop::collection::vec(0u8..6, 26)) {
        let a = CompositeAlphabet::parse("M=AT~N=CG").unwrap();
        let e = Epsilon::new(1, 8).unwrap();
        let codec = CombinedCodec::new(&a, 40, 3, e).unwrap();
        let c = codec.encode(&x).unwrap();
        prop_assert!(verifier::is_rll(&a, &c, 3));
        prop_assert!(verifier::is_eps_balanced(&a, &c, e, BalanceMode::Strict));
        prop_assert_eq!(codec.decode(&c).unwrap().0, x);
    }
}

#[test]
fn suffix_is_half_gc_for_short_indices() {
    for w in 1..=4usize {
        for v in 0..4u64.pow(w as u32) {
            let u = dna_representation(v, w).unwrap();
            let s = interleave(&u, &alphabet::CompositeAlphabet::sigma0().complement(&u)).unwrap();
            assert_eq!(verifier::pure_gc_count(&s), w);
            assert!(verifier::longest_run(&s) <= 2);
            assert_eq!(gc_codec::index_suffix(v, w).unwrap(), s);
        }
    }
}

#[test]
fn forbidden_set_size_law() {
    let a = CompositeAlphabet::parse("M=AC").unwrap();
    for l in 1..=8 {
        assert_eq!(capacity::forbidden_set(l, &a).unwrap().len(), (1 << (l + 2)) + 1);
    }
}

#[test]
fn counting_oracles_agree() {
    for spec in SPECS {
        let a = CompositeAlphabet::parse(spec).unwrap();
        for l in 1..=3 {
            let g = capacity::build_graph(l, &a, capacity::DEFAULT_NODE_CAP).unwrap();
            for n in 1..=5 {
                let exact = capacity::count_exact(n, Constraint::Rll(l), &a).unwrap();
                let brute =
                    capacity::brute_count(n, Constraint::Rll(l), &a, capacity::DEFAULT_BRUTE_CAP).unwrap();
                assert_eq!(exact, brute, "{spec} l={l} n={n}");
                assert_eq!(capacity::count_paths(&g, n), exact, "{spec} l={l} n={n}");
            }
        }
    }
}

#[test]
fn growth_rate_approaches_capacity() {
    for spec in SPECS {
        let a = CompositeAlphabet::parse(spec).unwrap();
        for l in 1..=3 {
            let cap = capacity::rll_capacity(l, &a, PowerOptions::default()).unwrap().capacity_bits;
            let n12 = capacity::count_exact(12, Constraint::Rll(l), &a).unwrap();
            let n13 = capacity::count_exact(13, Constraint::Rll(l), &a).unwrap();
            let rate = (n13.to_f64().unwrap() / n12.to_f64().unwrap()).log2();
            assert!((rate - cap).abs() < 0.05, "{spec} l={l}: {rate} vs {cap}");
        }
    }
}

#[test]
fn exact_index_search_exists_for_short_words() {
    let a = CompositeAlphabet::parse("M=AC").unwrap();
    let rule = FlipRule::pure_only(&a);
    for m in 0..=8usize {
        let total = 5usize.pow(m as u32);
        for code in 0..total {
            let z: Vec<Symbol> = (0..m).map(|i| ((code / 5usize.pow(i as u32)) % 5) as Symbol).collect();
            let Ok(target) = gc_codec::BalanceTarget::exact(&z, &rule) else { continue };
            let t = gc_codec::knuth_index_search(&z, &rule, gc_codec::FlipGrid::Full, target).unwrap();
            let flipped = rule.flip_prefix(&z, t);
            assert_eq!(2 * rule.statistic(&flipped), target.target_twice());
        }
    }
}
