//! Exact computations for transverse slices to single-cycle Weyl group
//! elements in `SL(l+1)`: root strata, slice coordinates, the rearrangement
//! of unipotent words and the resulting invariant generators.

pub mod exactring;
pub mod rootsys;
pub mod weyl;
pub mod strata;
pub mod groupalg;
pub mod rearrange;
pub mod invariants;
