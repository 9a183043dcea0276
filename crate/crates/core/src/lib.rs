//! Core machinery for studying modal satisfiability over frame classes
//! defined by universal first-order conditions.
//!
//! Everything here is pure and allocation-only: modal formulas and their
//! text syntax, finite Kripke frames and models, quantifier-free kernels of
//! universal frame conditions, the symmetric-edge quotient of a model, the
//! mod-8 grid encoding with its formula translations, and a bounded
//! brute-force model finder. File formats, the command-line front end and
//! the verification suites live in the `kframe` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod abstraction;
pub mod error;
pub mod fo;
pub mod formula;
pub mod grid;
pub mod kripke;
pub mod search;
mod syntax;

pub use abstraction::{
    check_abstraction_structure, compute_partition, quotient, respects, AbstractionStructure,
    Partition,
};
pub use error::{Error, Result, Violation};
pub use fo::{builtin, eval_universal, find_violation, relativize_to_reflexive, FoExpr, FoKernel};
pub use formula::{parse_modal, ModalFormula};
pub use kripke::{check, check_global, satisfying_worlds, Frame, Model};
pub use search::{enumerate_frames, find_model, Mode, SearchConfig, SearchOutcome, SearchStatus};
