//! Forming cryptographic Boolean functions from cognate ensembles.
//!
//! A nominal function is perturbed into its ensemble of cognate functions
//! (every single-point flip, and the complement of each), the ensemble is
//! struck down by a system of restrictions, surviving functions become the
//! components of a substitution table, and a pairwise-comparison hierarchy
//! elects the final variant. Restricted functions can also be grown
//! directly by steepest-ascent search.
//!
//! ## Examples
//!
//! Each capability has one runnable example:
//!
//! ```text
//! examples/
//! ├── analyze_function.rs     # spectra, ANF and the full property report
//! ├── cognate_ensemble.rs     # initial ensemble, proximity, filtering, export
//! ├── constrained_search.rs   # steepest ascent under a restriction system
//! ├── substitution_table.rs   # components to table, bijectivity, table report
//! ├── ahp_election.rs         # judgment matrices, consistency, election
//! └── full_pipeline.rs        # nominal → ensemble → table → election
//! ```
//!
//! ```bash
//! cargo run --example analyze_function
//! cargo run --example full_pipeline
//! ```
//!
//! The `cognate` binary exposes the same stages as subcommands that talk to
//! each other only through plain-text and JSON files.
//!
//! ## Conventions
//!
//! Truth tables are indexed by `x = x_1 + 2·x_2 + … + 2^{n-1}·x_n`, so `x_1`
//! is the least significant bit of the index. Walsh values use
//! `W_f(a) = Σ_x (−1)^{f(x) ⊕ a·x}`.

pub mod ahp;
pub mod bf;
pub mod cli;
pub mod cognate;
pub mod error;
pub mod sbox;
pub mod search;

pub use error::{Error, Result};
