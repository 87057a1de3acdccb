use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

/// Default number of enumeration steps any single operation may perform.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Upper bound on the size of an enumeration (solutions, row-space vectors,
/// table entries, subsets).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget(limit)
    }

    pub fn limit(&self) -> u64 {
        self.0
    }

    /// Fails with a resource error when `required` exceeds the budget.
    pub fn check(&self, what: &str, required: &BigUint) -> Result<u64> {
        match required.to_u64() {
            Some(r) if r <= self.0 => Ok(r),
            _ => Err(Error::Budget {
                what: what.to_string(),
                required: required.to_string(),
                budget: self.0,
            }),
        }
    }

    /// `base^exp` checked against the budget without overflow.
    pub fn check_pow(&self, what: &str, base: u64, exp: u64) -> Result<u64> {
        self.check(what, &pow_big(base, exp))
    }
}

pub(crate) fn pow_big(base: u64, exp: u64) -> BigUint {
    num_traits::pow::pow(BigUint::from(base), exp as usize)
}
