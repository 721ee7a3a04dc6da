//! Symbolic dynamics over countable alphabets: finitely described
//! bi-infinite sequences, cylinders, shift spaces, sliding block codes with
//! data-dependent windows, finite-degree analysis, the crucial-lemma
//! construction and exact inversion of `x_n + 2 x_{n+1}`.

pub mod arre_invert;
pub mod biseq;
pub mod cylinder;
pub mod degree;
pub mod examples;
pub mod lemma;
pub mod morphism;
pub mod shiftspace;

pub use biseq::{cantor_distance, seq_equal, BiSeq, Distance, Symbol, Tail, Word};
pub use cylinder::{join, FinMap};
pub use morphism::{CellLocator, Morphism};
pub use shiftspace::{AlphabetSpec, Membership, ShiftSpaceSpec};
