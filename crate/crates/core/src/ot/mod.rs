//! Oblivious transfer from weak string erasure.
//!
//! Bob truncates his index set to `n/η` positions, hides them inside a
//! random block permutation whose designated rows form the subset `Enc(w)`,
//! and runs interactive hashing on `w`. Alice hashes the rows of both
//! resulting candidates with independent Toeplitz seeds; Bob can recompute
//! exactly one of the two outputs.

pub mod checks;
pub mod extractor;
pub mod frot;
pub mod ih;
pub mod subset_code;

pub use extractor::{toeplitz_extract, ExtractorSeed};
pub use frot::{replay_frot, run_frot, run_frot_trials, summarize, truncate_index_set, FrotSummary, FrotTranscript};
pub use ih::{interactive_hashing, IhTranscript};
pub use subset_code::{make_subset_code, SubsetCode};
