//! Integral binary quadratic forms realised as Conway topographs.
//!
//! Exact reduction and equivalence for every discriminant, class numbers by
//! well and river counting, Pell units from river periods, necklace and word
//! encodings of classes, and numerical evaluation of topograph series.

pub mod classnum;
pub mod contfrac;
pub mod exact;
pub mod forms;
pub mod reduce;
pub mod riverword;
pub mod series;
pub mod topograph;

pub use exact::{int, is_square, isqrt, Int, Rat, Surd};
pub use forms::{turn_sequence_matrix, Letter, QuadForm, Root, Roots, TurnWord, UniMat};
