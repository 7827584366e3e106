//! τ by exhaustive enumeration, bounded σ search, and the named polynomial families.

mod enumerate;
mod family;
mod random;
mod sigma;
mod store;

use std::sync::Mutex;

pub use enumerate::{enumerate_slps, key_to_poly, poly_to_key, EnumCaps, Key, TauCatalog, HARD_MAX_LEN};
pub use family::{family, FamilyMember, FamilySpec};
pub use random::{random_circuit, CircuitBounds};
pub use sigma::{sigma_upper_search, SigmaBounds};
pub use store::{default_cache_dir, load_or_enumerate, CacheOutcome, CACHE_DIR_ENV};

use crate::error::Result;
use crate::poly::SparsePoly;

static MEMO: Mutex<Option<TauCatalog>> = Mutex::new(None);

/// τ(f) if it is at most `max_len`, from an in-process catalog under default caps.
pub fn tau_of(f: &SparsePoly, max_len: usize) -> Result<Option<usize>> {
    let mut memo = MEMO.lock().unwrap_or_else(|e| e.into_inner());
    if memo.as_ref().is_none_or(|c| c.max_len < max_len) {
        *memo = Some(enumerate_slps(max_len, EnumCaps::default())?);
    }
    let cat = memo.as_ref().expect("filled above");
    Ok(cat.tau(f).filter(|&t| t <= max_len))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_examples() {
        let t = |s: &str, n| tau_of(&s.parse().unwrap(), n).unwrap();
        assert_eq!(t("x", 3), Some(0));
        assert_eq!(t("1", 0), Some(0));
        assert_eq!(t("x^2", 3), Some(1));
        assert_eq!(t("x^2+x", 3), Some(2));
        assert_eq!(t("x^2+x", 1), None);
        assert_eq!(t("x^100+7", 3), None);
        assert!(tau_of(&SparsePoly::x(), HARD_MAX_LEN + 1).is_err());
    }
}
