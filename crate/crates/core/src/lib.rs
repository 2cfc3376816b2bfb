//! Data engineering for entailment-based human value detection in arguments.
//!
//! The crate covers everything around the models: reading the shared-task
//! corpus and value taxonomy, synthesizing the entailment training pairs,
//! mapping between value, category and reduced-class label spaces, combining
//! model predictions into the four result sets, and scoring runs the way the
//! shared task does. Model inference stays behind plain prediction files;
//! [`stub`] provides deterministic stand-ins for it.
//!
//! ```
//! use valuesift::{labelalg, sample};
//!
//! let taxonomy = sample::taxonomy();
//! assert_eq!(labelalg::l1_to_l2("Be creative", &taxonomy).unwrap(), "Self-direction: thought");
//! assert_eq!(labelalg::ReducedSpace::new(&taxonomy).len(), 12);
//! ```

pub mod cli;
pub mod corpus;
pub mod ensemble;
pub mod error;
pub mod eval;
pub mod labelalg;
pub mod pairgen;
pub mod sample;
pub mod stub;
pub mod textgen;
mod tsv;

pub use error::{Error, Result};
