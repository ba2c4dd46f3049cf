//! The partial-comparison verifier under attack.
//!
//! It computes `M'' = sigma^3 mod n` like a correct verifier but compares only
//! the `b` low-order bits of `M''` against `T(m)`.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::forge::check_bound;
use crate::keys::PublicKey;
use crate::mathcore::low_bits;
use crate::transform::{encode, TransformSpec};

/// Compared-bit count used by the deployed firmware (the SHA-1 digest width).
pub const DEPLOYED_COMPARE_BITS: u64 = 160;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    value: BigUint,
}

impl Signature {
    /// Wraps a raw integer. Range is checked against the key at verification time.
    pub fn new(value: BigUint) -> Self {
        Self { value }
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn into_value(self) -> BigUint {
        self.value
    }
}

impl From<BigUint> for Signature {
    fn from(value: BigUint) -> Self {
        Self::new(value)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifierPolicy {
    compare_bits: u64,
    transform: TransformSpec,
}

impl VerifierPolicy {
    /// Any `b >= 1` is a valid policy, including widths outside the attack bound.
    pub fn new(compare_bits: u64, transform: TransformSpec) -> Result<Self> {
        if compare_bits == 0 {
            return Err(Error::Config(
                "compared-bit count must be at least 1".into(),
            ));
        }
        Ok(Self {
            compare_bits,
            transform,
        })
    }

    /// 160 low bits under SHA-1, as deployed.
    pub fn deployed() -> Self {
        Self {
            compare_bits: DEPLOYED_COMPARE_BITS,
            transform: TransformSpec::Sha1Low,
        }
    }

    pub fn compare_bits(&self) -> u64 {
        self.compare_bits
    }

    pub fn transform(&self) -> TransformSpec {
        self.transform
    }

    /// Whether `b < ℓ_n/3 - 3` holds for this key.
    pub fn bound_satisfied(&self, public: &PublicKey) -> bool {
        check_bound(self.compare_bits, public.bits())
    }
}

/// Accepts iff the low `b` bits of `T(m)` and `sigma^3 mod n` agree.
pub fn verify_flawed(
    message: &[u8],
    sig: &Signature,
    public: &PublicKey,
    policy: &VerifierPolicy,
) -> Result<bool> {
    if sig.value() >= public.n() {
        return Err(Error::MalformedSignature);
    }
    let expected = encode(message, policy.transform(), public)?;
    let recovered = public.apply(sig.value());
    let b = policy.compare_bits();
    Ok(low_bits(expected.value(), b)? == low_bits(&recovered, b)?)
}
