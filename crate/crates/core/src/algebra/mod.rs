//! Exact arithmetic for finitely generated abelian groups: cyclic products,
//! their duals, and quotients of `Z^n` via Smith normal form.

mod group;
mod snf;

pub use group::{Character, FinAbGroup, GroupElement, RootOfUnity, Subgroup};
pub use snf::{smith_normal_form, AbelianGroupDescriptor, IntMatrix, PresentedGroup, SmithForm};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("operation needs a finite group but a free factor is present")]
    InfiniteGroup,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("integer overflow during exact arithmetic")]
    Overflow,
}
