//! Reversible-logic synthesis for arbitrary Boolean mappings.
//!
//! A mapping `f: Z_2^n -> Z_2^n` is analysed for the least number of
//! zero-initialized extra lines it needs ([`analysis`]), completed to an even
//! permutation on `n + q` lines with at most `2^(n+1)` moving points
//! ([`embed`]), synthesized into NOT/CNOT/Toffoli gates ([`synth`]) and
//! checked exhaustively ([`circuit`]). [`oracle`] provides exact minimal gate
//! counts on up to three lines and [`bounds`] the reference complexity
//! formulas.

pub mod analysis;
pub mod bitspace;
pub mod bounds;
pub mod circuit;
pub mod embed;
pub mod error;
pub mod oracle;
pub mod synth;

pub use analysis::{census, is_realizable, min_ancilla, PreimageCensus};
pub use bitspace::{expand, reduce, BoolMapping, Parity, Permutation, StateVector, MAX_WIDTH};
pub use bounds::{lower_bound, upper_bound_2n, upper_bound_no_memory, upper_bound_t1, BoundTable};
pub use circuit::{apply_gate, circuit_permutation, Circuit, Gate};
pub use embed::{embed, verify_embedding, Chain, Embedding, ParityFix};
pub use error::{Error, Result};
pub use oracle::{build_atlas, build_atlas_bounded, confirm_assertion1, min_gates, BfsAtlas};
pub use synth::{decompose, find_counterexample, synthesize, synthesize_mapping, SynthReport};
