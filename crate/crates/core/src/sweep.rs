//! Empirical acceptance rates across a range of compared-bit counts.

use std::fmt;
use std::ops::RangeInclusive;

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::Result;
use crate::forge::{check_bound, forge, ForgeCase, ForgeOptions};
use crate::keys::{generate_keypair, PublicKey};
use crate::transform::TransformSpec;
use crate::verifier::{verify_flawed, VerifierPolicy};
use crate::Error;

const MESSAGE_LEN: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub b: u64,
    pub trials: u64,
    pub flawed_accepts: u64,
    pub odd_cases: u64,
    pub even_cases: u64,
    pub bound_satisfied: bool,
}

impl SweepRow {
    pub fn acceptance_rate(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        self.flawed_accepts as f64 / self.trials as f64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepReport {
    pub modulus_bits: u64,
    pub transform: TransformSpec,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    /// True when every in-bound row accepted all of its trials.
    pub fn in_bound_rows_all_accepted(&self) -> bool {
        self.rows
            .iter()
            .filter(|r| r.bound_satisfied)
            .all(|r| r.flawed_accepts == r.trials)
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "# modulus {} bits, transform {}, bound 3(b+3) < {}",
            self.modulus_bits, self.transform, self.modulus_bits
        )?;
        writeln!(
            f,
            "{:>6} {:>7} {:>8} {:>6} {:>6} {:>6}  bound",
            "b", "trials", "accepts", "odd", "even", "rate"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:>6} {:>7} {:>8} {:>6} {:>6} {:>6.3}  {}",
                r.b,
                r.trials,
                r.flawed_accepts,
                r.odd_cases,
                r.even_cases,
                r.acceptance_rate(),
                if r.bound_satisfied { "yes" } else { "no" }
            )?;
        }
        Ok(())
    }
}

/// Forges `trials` random messages for each `b` and counts flawed-verifier acceptances.
///
/// Forgery runs with the out-of-bound override, so rows past the bound record
/// whatever happens instead of failing. A malformed forgery (σ ≥ n) counts as
/// a rejection.
pub fn sweep_with_key(
    public: &PublicKey,
    compare_bits: RangeInclusive<u64>,
    trials: u64,
    transform: TransformSpec,
    seed: u64,
) -> Result<SweepReport> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    if trials > 0 {
        for b in compare_bits {
            let policy = VerifierPolicy::new(b, transform)?;
            let mut row = SweepRow {
                b,
                trials,
                flawed_accepts: 0,
                odd_cases: 0,
                even_cases: 0,
                bound_satisfied: check_bound(b, public.bits()),
            };
            for _ in 0..trials {
                let mut message = [0u8; MESSAGE_LEN];
                rng.fill_bytes(&mut message);
                let forged = forge(&message, public, &policy, ForgeOptions::out_of_bound())?;
                match forged.case() {
                    ForgeCase::Odd => row.odd_cases += 1,
                    ForgeCase::Even => row.even_cases += 1,
                }
                match verify_flawed(&message, &forged.signature(), public, &policy) {
                    Ok(true) => row.flawed_accepts += 1,
                    Ok(false) | Err(Error::MalformedSignature) => {}
                    Err(e) => return Err(e),
                }
            }
            rows.push(row);
        }
    }
    Ok(SweepReport {
        modulus_bits: public.bits(),
        transform,
        rows,
    })
}

/// Like [`sweep_with_key`], generating the key from `seed` first.
pub fn sweep(
    modulus_bits: u64,
    compare_bits: RangeInclusive<u64>,
    trials: u64,
    transform: TransformSpec,
    seed: u64,
) -> Result<SweepReport> {
    let key = generate_keypair(modulus_bits, seed)?;
    sweep_with_key(key.public(), compare_bits, trials, transform, seed)
}
