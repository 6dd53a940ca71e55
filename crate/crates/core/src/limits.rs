//! Size caps for the exhaustive procedures.
//!
//! Every search in this crate is brute force at some level, so each entry
//! point refuses inputs beyond a documented size. The defaults keep each
//! check well under a second; a process may install different caps once,
//! before the first lookup.

use std::sync::OnceLock;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest carrier for `enumerate_all_pfs`.
    pub enumerate_carrier: usize,
    /// Largest carrier for `closure_generate`.
    pub closure_carrier: usize,
    /// Largest algebra for maximal-filter enumeration.
    pub filter_elements: usize,
    /// Largest algebra for isomorphism and embedding search.
    pub search_elements: usize,
    /// Largest algebra for exhaustive operator checks.
    pub operator_elements: usize,
    /// Largest operator arity for exhaustive operator checks.
    pub operator_arity: usize,
    /// Largest number of sections `G` may produce.
    pub max_sections: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enumerate_carrier: 4,
            closure_carrier: 4,
            filter_elements: 16,
            search_elements: 12,
            operator_elements: 10,
            operator_arity: 3,
            max_sections: 4096,
        }
    }
}

static INSTALLED: OnceLock<Limits> = OnceLock::new();

impl Limits {
    /// The caps in force for this process.
    pub fn current() -> Limits {
        *INSTALLED.get_or_init(Limits::default)
    }

    /// Install process-wide caps. Fails if caps were already read or set.
    pub fn install(limits: Limits) -> std::result::Result<(), Limits> {
        INSTALLED.set(limits)
    }

    /// Raise every element-count cap to `cap` (never lowers arity or carrier caps).
    pub fn with_element_cap(mut self, cap: usize) -> Limits {
        self.filter_elements = cap;
        self.search_elements = cap;
        self.operator_elements = cap;
        self
    }
}

pub(crate) fn check_cap(what: &'static str, actual: usize, limit: usize) -> Result<()> {
    if actual > limit {
        Err(Error::SizeCap {
            what,
            limit,
            actual,
        })
    } else {
        Ok(())
    }
}
