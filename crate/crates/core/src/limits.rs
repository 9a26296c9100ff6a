use crate::error::{Error, Result};

/// Enumeration guards. Every exhaustive operation checks the relevant cap
/// before it starts and refuses with [`Error::CapExceeded`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_module_size: usize,
    pub max_ring_size: usize,
    /// Largest hom set (or candidate set) that is walked element by element.
    pub max_homs: u128,
    pub max_submodules: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_module_size: 512,
            max_ring_size: 64,
            max_homs: 1 << 26,
            max_submodules: 100_000,
        }
    }
}

impl Limits {
    pub(crate) fn check(what: &'static str, size: u128, cap: u128) -> Result<()> {
        if size > cap {
            Err(Error::CapExceeded { what, size, cap })
        } else {
            Ok(())
        }
    }
}
