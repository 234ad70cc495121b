//! Work limits shared by the counting and enumeration routines.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest `q^(2m)` for which point counting over `F_{q^m}` is attempted.
    pub point_scan: u128,
    /// Largest extension degree searched for singular points.
    pub singular_search_degree: u32,
    /// Largest field order `q^m` scanned during the singular-point search.
    pub singular_scan: u128,
    /// Largest frontier (ideals per colength level) in ideal enumeration.
    pub frontier: usize,
    /// Largest number of subspaces the naive ideal oracle may enumerate.
    pub naive_subspaces: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            point_scan: 1_000_000_000,
            singular_search_degree: 6,
            singular_scan: 2_000_000,
            frontier: 10_000_000,
            naive_subspaces: 1_000_000,
        }
    }
}

impl Budget {
    pub(crate) fn check(&self, what: impl Into<String>, estimate: u128, limit: u128) -> Result<()> {
        if estimate > limit {
            return Err(Error::Budget {
                what: what.into(),
                estimate,
                limit,
            });
        }
        Ok(())
    }
}
