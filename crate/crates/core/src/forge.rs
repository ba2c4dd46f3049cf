//! Signature forgery against [`verify_flawed`].
//!
//! A signature `sigma` passes the flawed check whenever
//! `sigma^3 ≡ M + 2^b z (mod n)` for some `z` with `2^b z < n`: the slack `z`
//! lives entirely above the compared window. With `e = 3` such a `sigma` can
//! be written down directly, without the private key.
//!
//! * Odd `M` is a unit modulo `2^b`. Cubing permutes the units (their group
//!   has order `2^(b-1)`, coprime to 3), so `sigma = M^r mod 2^b` with
//!   `3r ≡ 1 (mod 2^(b-1))` is a cube root of `M` modulo `2^b`. Because
//!   `sigma < 2^b`, `sigma^3 < 2^(3b) <= 2^(ℓ_n - 10) < n` and no modular
//!   reduction by `n` ever happens.
//! * Even `M` is not a unit, but `M + n` is (n is odd). Take
//!   `tau = (M + n)^r mod 2^b` and the least `c` with `(2^b c)^3 > n`, then
//!   `sigma = 2^b c + tau`. Now `n < sigma^3 < (125/64) n`, so
//!   `sigma^3 mod n = sigma^3 - n`, and modulo `2^b` that is
//!   `tau^3 - n ≡ M`.
//!
//! Both constructions are guaranteed for every message when
//! `b < ℓ_n/3 - 3`, checked exactly as `3(b + 3) < ℓ_n`.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::keys::PublicKey;
use crate::mathcore::{cube, integer_cuberoot, inverse_of_three_mod_pow2, low_bits, mod_pow};
use crate::transform::{encode, EncodedMessage, Parity};
use crate::verifier::{verify_flawed, Signature, VerifierPolicy};

/// Smallest compared-bit count the forging entry points accept.
pub const MIN_FORGE_BITS: u64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ForgeCase {
    Odd,
    Even,
}

impl ForgeCase {
    pub fn name(self) -> &'static str {
        match self {
            Self::Odd => "odd",
            Self::Even => "even",
        }
    }
}

impl From<Parity> for ForgeCase {
    fn from(p: Parity) -> Self {
        match p {
            Parity::Odd => Self::Odd,
            Parity::Even => Self::Even,
        }
    }
}

/// A forged signature together with the values that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForgedSignature {
    sigma: BigUint,
    case: ForgeCase,
    r: BigUint,
    c: Option<BigUint>,
    tau: Option<BigUint>,
}

impl ForgedSignature {
    pub fn sigma(&self) -> &BigUint {
        &self.sigma
    }

    pub fn case(&self) -> ForgeCase {
        self.case
    }

    /// The inverse of 3 modulo `2^(b-1)` used as the root exponent.
    pub fn r(&self) -> &BigUint {
        &self.r
    }

    /// Even case only.
    pub fn c(&self) -> Option<&BigUint> {
        self.c.as_ref()
    }

    /// Even case only.
    pub fn tau(&self) -> Option<&BigUint> {
        self.tau.as_ref()
    }

    pub fn signature(&self) -> Signature {
        Signature::new(self.sigma.clone())
    }

    /// Multi-line provenance report: case, r, c, tau, and the slack z (hex).
    pub fn explain(&self, encoded: &EncodedMessage, public: &PublicKey, b: u64) -> Result<String> {
        let z = report_slack(self, encoded, public, b)?;
        let dash = || "-".to_string();
        let mut out = String::new();
        writeln!(out, "case:  {}", self.case.name()).unwrap();
        writeln!(out, "b:     {b}").unwrap();
        writeln!(out, "M:     {:x}", encoded.value()).unwrap();
        writeln!(out, "r:     {:x}", self.r).unwrap();
        writeln!(
            out,
            "c:     {}",
            self.c.as_ref().map_or_else(dash, |c| format!("{c:x}"))
        )
        .unwrap();
        writeln!(
            out,
            "tau:   {}",
            self.tau.as_ref().map_or_else(dash, |t| format!("{t:x}"))
        )
        .unwrap();
        writeln!(out, "sigma: {:x}", self.sigma).unwrap();
        writeln!(out, "z:     {z:x}").unwrap();
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ForgeOptions {
    /// Attempt forgeries even when `3(b + 3) >= ℓ_n`. Success is then not guaranteed
    /// and the self-checks are skipped.
    pub allow_out_of_bound: bool,
}

impl ForgeOptions {
    pub fn out_of_bound() -> Self {
        Self {
            allow_out_of_bound: true,
        }
    }
}

/// Exact integer form of `b < ℓ_n/3 - 3`.
pub fn check_bound(b: u64, bits: u64) -> bool {
    3 * (u128::from(b) + 3) < u128::from(bits)
}

/// Cube root of an odd `m` modulo `2^b`, as `(m^r mod 2^b, r)`.
///
/// This is the bare construction with no floor beyond `b >= 2`; the forging
/// functions wrap it with the bound and parity checks.
pub fn cube_root_mod_pow2(m: &BigUint, b: u64) -> Result<(BigUint, BigUint)> {
    if !m.bit(0) {
        return Err(Error::Domain(
            "only odd residues have a cube root by inversion",
        ));
    }
    let r = inverse_of_three_mod_pow2(b)?;
    let modulus = BigUint::one() << b;
    let root = mod_pow(m, &r, &modulus)?;
    Ok((root, r))
}

/// Returns whether the bound holds, or the error that stops the attempt.
fn preflight(b: u64, public: &PublicKey, opts: ForgeOptions) -> Result<bool> {
    if b < MIN_FORGE_BITS {
        return Err(Error::BelowFloor(b));
    }
    let within = check_bound(b, public.bits());
    if !within && !opts.allow_out_of_bound {
        return Err(Error::BoundViolated {
            b,
            bits: public.bits(),
        });
    }
    Ok(within)
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InternalAssertion(what()))
    }
}

fn check_case(m: &EncodedMessage, expected: ForgeCase) -> Result<()> {
    let found = ForgeCase::from(m.parity());
    if found != expected {
        return Err(Error::WrongCase { expected, found });
    }
    Ok(())
}

/// Forgery for odd `M`: `sigma = M^r mod 2^b`.
pub fn forge_odd(
    m: &EncodedMessage,
    b: u64,
    public: &PublicKey,
    opts: ForgeOptions,
) -> Result<ForgedSignature> {
    check_case(m, ForgeCase::Odd)?;
    let within = preflight(b, public, opts)?;
    let (sigma, r) = cube_root_mod_pow2(m.value(), b)?;

    if within {
        let s3 = cube(&sigma);
        ensure(sigma.bit(0) && sigma.bits() <= b, || {
            "odd-case root out of range".into()
        })?;
        ensure(s3.bits() <= public.bits() - 9 && s3 < *public.n(), || {
            "odd-case sigma^3 is not below 2^(ℓ_n - 9)".into()
        })?;
        ensure(low_bits(&s3, b)? == low_bits(m.value(), b)?, || {
            "odd-case sigma^3 does not match M modulo 2^b".into()
        })?;
    }

    Ok(ForgedSignature {
        sigma,
        case: ForgeCase::Odd,
        r,
        c: None,
        tau: None,
    })
}

/// The least `c` with `(2^b c)^3 > n`.
pub fn least_c(n: &BigUint, b: u64) -> BigUint {
    let mut c = (integer_cuberoot(n) >> b) + 1u8;
    while cube(&(&c << b)) <= *n {
        c += 1u8;
    }
    c
}

/// Forgery for even `M`: `sigma = 2^b c + ((M + n)^r mod 2^b)`.
pub fn forge_even(
    m: &EncodedMessage,
    b: u64,
    public: &PublicKey,
    opts: ForgeOptions,
) -> Result<ForgedSignature> {
    check_case(m, ForgeCase::Even)?;
    let within = preflight(b, public, opts)?;
    let n = public.n();

    let c = least_c(n, b);
    let (tau, r) = cube_root_mod_pow2(&(m.value() + n), b)?;
    let sigma = (&c << b) + &tau;

    if within {
        let s3 = cube(&sigma);
        ensure(s3 > *n && &s3 * 64u8 < n * 125u8, || {
            "even-case sigma^3 outside (n, 125n/64)".into()
        })?;
        ensure(low_bits(&(s3 - n), b)? == low_bits(m.value(), b)?, || {
            "even-case sigma^3 - n does not match M modulo 2^b".into()
        })?;
    }

    Ok(ForgedSignature {
        sigma,
        case: ForgeCase::Even,
        r,
        c: Some(c),
        tau: Some(tau),
    })
}

/// Forges a signature on `message` that `policy` will accept under `public`.
///
/// Within the bound the result is checked against [`verify_flawed`] before it
/// is returned; a rejection there is reported as [`Error::InternalAssertion`].
/// Outside the bound (with [`ForgeOptions::allow_out_of_bound`]) the candidate
/// is returned unchecked.
pub fn forge(
    message: &[u8],
    public: &PublicKey,
    policy: &VerifierPolicy,
    opts: ForgeOptions,
) -> Result<ForgedSignature> {
    let b = policy.compare_bits();
    let within = preflight(b, public, opts)?;
    let encoded = encode(message, policy.transform(), public)?;
    let forged = match encoded.parity() {
        Parity::Odd => forge_odd(&encoded, b, public, opts)?,
        Parity::Even => forge_even(&encoded, b, public, opts)?,
    };

    if within && !verify_flawed(message, &forged.signature(), public, policy)? {
        return Err(Error::InternalAssertion(format!(
            "{}-case forgery rejected by the flawed verifier (b = {b}, ℓ_n = {})",
            forged.case.name(),
            public.bits()
        )));
    }
    Ok(forged)
}

/// The slack `z` with `sigma^3 mod n = (M mod 2^b) + 2^b z`.
pub fn report_slack(
    forged: &ForgedSignature,
    m: &EncodedMessage,
    public: &PublicKey,
    b: u64,
) -> Result<BigUint> {
    let recovered = public.apply(&forged.sigma);
    let target = low_bits(m.value(), b)?;
    ensure(recovered >= target, || {
        "sigma^3 mod n is below M mod 2^b".into()
    })?;
    let diff = recovered - target;
    ensure(low_bits(&diff, b)? == BigUint::ZERO, || {
        "sigma^3 mod n and M differ in the compared window".into()
    })?;
    let z = diff >> b;
    ensure((&z << b) < *public.n(), || {
        "slack 2^b z is not below n".into()
    })?;
    Ok(z)
}
