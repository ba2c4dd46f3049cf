//! Brute-force ground truth for cube roots modulo small powers of two.
//!
//! Nothing in this module may call into `mathcore` or the inverse-of-three
//! route; it enumerates residues with machine arithmetic only, so that it
//! stays an independent check of the forging construction.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::forge::cube_root_mod_pow2;

pub const MIN_ORACLE_BITS: u32 = 2;
pub const MAX_ORACLE_BITS: u32 = 24;

/// Every `s` in `[0, 2^b)` with `s^3 ≡ target (mod 2^b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubeRootSet {
    pub modulus_bits: u32,
    pub target: u64,
    pub roots: BTreeSet<u64>,
}

impl CubeRootSet {
    pub fn contains(&self, s: u64) -> bool {
        self.roots.contains(&s)
    }
}

fn check_width(b: u32) -> Result<u64> {
    if b > MAX_ORACLE_BITS {
        return Err(Error::OracleCapacity(b));
    }
    if b < MIN_ORACLE_BITS {
        return Err(Error::Domain("oracle width must be at least 2 bits"));
    }
    Ok((1u64 << b) - 1)
}

/// Exhaustive enumeration over all `2^b` residues.
pub fn brute_cuberoots_mod_pow2(target: u64, b: u32) -> Result<CubeRootSet> {
    let mask = check_width(b)?;
    let target = target & mask;
    // Wrapping arithmetic is exact modulo 2^64, and 2^b divides 2^64.
    let roots = (0..=mask)
        .filter(|s| s.wrapping_mul(*s).wrapping_mul(*s) & mask == target)
        .collect();
    Ok(CubeRootSet {
        modulus_bits: b,
        target,
        roots,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OracleReport {
    pub modulus_bits: u32,
    pub trials: u64,
    pub passes: u64,
    pub failures: u64,
}

/// Runs the forging cube root on one odd target and checks it against enumeration.
///
/// Returns the root on success.
pub fn check_claim1_target(target: u64, b: u32) -> Result<u64> {
    let mask = check_width(b)?;
    let target = target & mask;
    if target & 1 == 0 {
        return Err(Error::Domain("cube-root-by-inversion needs an odd target"));
    }
    let (root, _) = cube_root_mod_pow2(&BigUint::from(target), u64::from(b))?;
    let set = brute_cuberoots_mod_pow2(target, b)?;
    match u64::try_from(&root) {
        Ok(s) if set.contains(s) => Ok(s),
        _ => Err(Error::OracleDivergence { b, target, root }),
    }
}

/// Samples `trials` odd targets modulo `2^b` and checks each one.
///
/// The first mismatch is returned as [`Error::OracleDivergence`].
pub fn validate_claim1_small(trials: u64, b: u32, seed: u64) -> Result<OracleReport> {
    let mask = check_width(b)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut report = OracleReport {
        modulus_bits: b,
        ..OracleReport::default()
    };
    for _ in 0..trials {
        let target = (rng.next_u64() & mask) | 1;
        report.trials += 1;
        check_claim1_target(target, b)?;
        report.passes += 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unity_has_root_one() {
        let set = brute_cuberoots_mod_pow2(1, 8).unwrap();
        assert!(set.contains(1));
        assert_eq!(check_claim1_target(1, 8).unwrap(), 1);
        assert_eq!(check_claim1_target(1, 20).unwrap(), 1);
    }

    #[test]
    fn small_width_below_forge_floor() {
        // 3^3 = 27 ≡ 11 and 11^3 = 1331 ≡ 3 (mod 16).
        let set = brute_cuberoots_mod_pow2(3, 4).unwrap();
        assert_eq!(set.roots.into_iter().collect::<Vec<_>>(), vec![11]);
        assert_eq!(check_claim1_target(3, 4).unwrap(), 11);
    }

    #[test]
    fn every_odd_target_has_one_root_at_b10() {
        for target in (1u64..1024).step_by(2) {
            let set = brute_cuberoots_mod_pow2(target, 10).unwrap();
            assert_eq!(set.roots.len(), 1, "target {target}");
            assert!(set.roots.iter().all(|s| s & 1 == 1));
        }
    }

    #[test]
    fn even_targets_may_have_many_or_no_roots() {
        // 0 has every multiple of 2^(ceil(b/3)) as a root.
        let zero = brute_cuberoots_mod_pow2(0, 9).unwrap();
        assert_eq!(zero.roots.len(), 64);
        // 2 is not a cube modulo 8 or beyond.
        assert!(brute_cuberoots_mod_pow2(2, 9).unwrap().roots.is_empty());
    }

    #[test]
    fn validation_runs() {
        let r = validate_claim1_small(100, 12, 0).unwrap();
        assert_eq!((r.trials, r.passes, r.failures), (100, 100, 0));
        let r = validate_claim1_small(100, 16, 1).unwrap();
        assert_eq!(r.passes, 100);
    }

    #[test]
    fn capacity_limits() {
        assert_eq!(
            brute_cuberoots_mod_pow2(1, 25),
            Err(Error::OracleCapacity(25))
        );
        assert!(brute_cuberoots_mod_pow2(1, 1).is_err());
        assert!(validate_claim1_small(1, 30, 0).is_err());
        assert!(check_claim1_target(2, 8).is_err());
        assert!(brute_cuberoots_mod_pow2(7, 24)
            .unwrap()
            .contains(check_claim1_target(7, 24).unwrap()));
    }
}
