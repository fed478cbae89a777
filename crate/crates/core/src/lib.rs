//! Constrained coding for composite DNA alphabets.
//!
//! A composite letter stands for a mixture of bases synthesized at one
//! position. The codes here guarantee run-length and GC-content limits for
//! *every* pure sequence the synthesizer may produce from a codeword.
//!
//! - [`alphabet`]: symbol tables, flips, base-4 index words
//! - [`verifier`]: run-length and balance checks over all realizations
//! - [`capacity`]: forbidden windows, constraint graph, capacity and counting
//! - [`rll_codec`]: one-symbol-redundancy run-length encoder
//! - [`gc_codec`]: flip-index balancing encoders
//! - [`combined_codec`]: joint run-length and balance encoder

pub mod alphabet;
pub mod capacity;
pub mod combined_codec;
pub mod gc_codec;
pub mod rll_codec;
pub mod verifier;

pub use alphabet::{CompositeAlphabet, Nucleotide, Seq, Symbol};
pub use verifier::{BalanceMode, Epsilon};
