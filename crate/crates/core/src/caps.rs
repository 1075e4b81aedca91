//! Size limits for the exhaustive procedures. Anything above a limit is
//! refused with [`Error::CapExceeded`] rather than silently approximated.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub oracle_max_n: usize,
    pub oracle_max_k: usize,
    pub packing_max_sets: usize,
    pub csc_max_family: usize,
    pub matching_max_odd: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            oracle_max_n: 12,
            oracle_max_k: 4,
            packing_max_sets: 24,
            csc_max_family: 20,
            matching_max_odd: 18,
        }
    }
}

impl Caps {
    pub const KEYS: [&'static str; 5] = [
        "oracle_max_n",
        "oracle_max_k",
        "packing_max_sets",
        "csc_max_family",
        "matching_max_odd",
    ];

    /// Sets one limit by key name.
    pub fn set(&mut self, key: &str, value: usize) -> Result<()> {
        let slot = match key {
            "oracle_max_n" => &mut self.oracle_max_n,
            "oracle_max_k" => &mut self.oracle_max_k,
            "packing_max_sets" => &mut self.packing_max_sets,
            "csc_max_family" => &mut self.csc_max_family,
            "matching_max_odd" => &mut self.matching_max_odd,
            _ => return Err(Error::InvalidArgument(format!("unknown cap key {key:?}"))),
        };
        *slot = value;
        Ok(())
    }
}

pub(crate) fn check(what: &'static str, actual: usize, limit: usize) -> Result<()> {
    if actual > limit {
        Err(Error::CapExceeded { what, limit, actual })
    } else {
        Ok(())
    }
}
