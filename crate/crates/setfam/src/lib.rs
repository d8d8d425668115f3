//! Exact search for k-uniform set families whose traces avoid chains.
//!
//! A family F of k-subsets of [n] leaves a trace on every r-subset X:
//! the set of intersection patterns A ∩ X over A in F. This crate
//! computes the largest F whose every trace avoids a maximal chain
//! (empty set up to X, the `W` mode) or an almost-maximal chain (a
//! singleton up to X, the `U` mode), enumerates the extremal families up
//! to relabeling, and checks a battery of named claims about the optima
//! against closed forms and explicit constructions.
//!
//! Grounds are capped at 32 so sets live in single machine words. The
//! branch-and-bound search carries an incremental pattern-count table; a
//! deliberately naive [`oracle`] re-derives small optima from scratch
//! for cross-validation.

pub mod cache;
pub mod canon;
pub mod chain;
pub mod constructions;
pub mod engine;
pub mod error;
pub mod family;
pub mod mask;
pub mod model;
pub mod oracle;
pub mod search;
pub mod state;
pub mod verify;

pub use cache::{CacheEntry, CacheKey, ValueCache};
pub use canon::{canonical_form, CanonicalFamily, CANON_MAX_GROUND};
pub use chain::{
    find_chain_witness, has_almost_maximal_chain, has_maximal_chain, is_admissible,
    is_u_admissible, is_w_admissible, ChainMode, ChainWitness, Trace,
};
pub use constructions::{lower_bound_construction, small_ground_family, star_family, w_formula};
pub use engine::Engine;
pub use error::{Error, Result};
pub use family::KFamily;
pub use mask::{binomial, k_subsets, Permutation, SetMask, MAX_GROUND};
pub use model::{export_linear_model, MODEL_MAX_ROWS};
pub use oracle::{exhaustive_optimum, OracleOutcome, ORACLE_MAX_SUBSETS};
pub use search::{
    compute_u, compute_w, enumerate_extremal, search, Mode, SearchOptions, SearchParams,
    SearchResult, SearchStatus, SEARCH_MAX_GROUND,
};
pub use state::TraceState;
pub use verify::{
    build_value_table, known_threshold, verify_base_cases, verify_conjecture1,
    verify_conjecture2, verify_formula, verify_lemma1, verify_n0_33, verify_n0_k2,
    verify_uniqueness, Cell, CellStatus, ClaimId, Report, TableRow, ValueTable,
};
