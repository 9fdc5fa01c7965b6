//! Exact verification of exceptional sequences of line bundles on surfaces
//! `S = (C × D)/G` isogenous to a higher product of unmixed type with
//! `p_g = q = 0` and abelian `G`.
//!
//! Line bundles on `S` are handled as `G`-equivariant data on `X = C × D`:
//! an invariant divisor class on each curve plus a character of `G`. Every
//! cohomology statement is derived from curve-level facts through Künneth,
//! Riemann–Roch on `S`, and a small set of sound descent rules, so each
//! verdict comes with a replayable evidence trail.

pub mod algebra;
pub mod cohomology;
pub mod curve;
pub mod exceptional;
pub mod homological;
pub mod obstruction;
pub mod surface;
