//! Non-dominating sequences of vectors in `N^d` where every coordinate is
//! either reset to 0 or incremented by 1 at each step.
//!
//! * [`model`]: vectors, the step relation and the domination order.
//! * [`construction`]: the doubly-exponential cyclic construction with
//!   random access, streaming and domination witnesses.
//! * [`verifier`]: validity, cyclicity and non-domination checks.
//! * [`search`]: exhaustive search for exact maxima in dimensions 1 to 3.
//! * [`cli`]: the `resetseq` command line.
//!
//! Parallel loops use rayon behind the default `parallel` feature; every
//! entry point that parallelizes takes an [`Exec`] and returns the same
//! answer either way.

pub mod cell;
pub mod cli;
pub mod construction;
pub mod error;
pub mod io;
pub mod model;
pub mod par;
pub mod search;
pub mod verifier;

pub use cell::Cell;
pub use construction::{
    base_sequence, binary_counter, closed_form_bound, construct, extend, length_of, make_spec,
    ConstructionSpec,
};
pub use error::{Error, Result};
pub use model::{leq, step_ok, vec_step_ok, Vector, VectorSequence};
pub use par::Exec;
pub use search::{
    enumerate_sequences, max_cyclic_length, max_valid_length, SearchOptions, SearchResult,
};
pub use verifier::{
    check_cyclic, check_non_dominating_full, check_non_dominating_sampled, check_valid, FullCheck,
    Violation, ViolationKind,
};
