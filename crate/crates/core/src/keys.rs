//! Textbook RSA with the public exponent fixed at 3.
//!
//! Key files are plain text, one `name=value` line per field with values in
//! lowercase hex: `n=`, `d=`, `e=`, `bits=`. Public key files omit `d=`.
//! The prime factors are never written out.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::mathcore::{cube, mod_inverse, mod_pow, random_below, random_bits};
use crate::transform::{encode, TransformSpec};
use crate::verifier::Signature;

pub const PUBLIC_EXPONENT: u32 = 3;

/// Smallest modulus length accepted by [`generate_keypair`].
pub const MIN_MODULUS_BITS: u64 = 64;

const MILLER_RABIN_ROUNDS: usize = 40;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PublicKey {
    n: BigUint,
    bits: u64,
}

impl PublicKey {
    /// Wraps a modulus, checking that it is odd and exactly `bits` bits long.
    pub fn new(n: BigUint, bits: u64) -> Result<Self> {
        if n.bits() != bits {
            return Err(Error::Config(format!(
                "modulus has {} bits, declared {bits}",
                n.bits()
            )));
        }
        if n.is_even() || bits < 2 {
            return Err(Error::Config(
                "modulus must be odd and at least 2 bits".into(),
            ));
        }
        Ok(Self { n, bits })
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }

    /// Modulus length ℓ_n in bits.
    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn e(&self) -> u32 {
        PUBLIC_EXPONENT
    }

    /// `sigma^3 mod n`.
    pub fn apply(&self, sigma: &BigUint) -> BigUint {
        cube(sigma) % &self.n
    }

    pub fn to_key_file(&self) -> String {
        let mut out = String::new();
        writeln!(out, "n={:x}", self.n).unwrap();
        writeln!(out, "e={PUBLIC_EXPONENT:x}").unwrap();
        writeln!(out, "bits={:x}", self.bits).unwrap();
        out
    }

    /// Parses a public key file. A private key file is accepted too; `d=` is ignored.
    pub fn from_key_file(text: &str) -> Result<Self> {
        let fields = KeyFields::parse(text)?;
        fields.public()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RsaKeyPair {
    public: PublicKey,
    d: BigUint,
    /// `(p, q)`; only known for freshly generated keys.
    factors: Option<(BigUint, BigUint)>,
}

impl RsaKeyPair {
    pub fn public(&self) -> &PublicKey {
        &self.public
    }

    pub fn n(&self) -> &BigUint {
        &self.public.n
    }

    pub fn bits(&self) -> u64 {
        self.public.bits
    }

    pub fn d(&self) -> &BigUint {
        &self.d
    }

    pub fn factors(&self) -> Option<(&BigUint, &BigUint)> {
        self.factors.as_ref().map(|(p, q)| (p, q))
    }

    /// Checks the structural invariants using the retained factors.
    ///
    /// Returns `Ok(false)` rather than an error when the factors are unknown.
    pub fn self_test(&self) -> Result<bool> {
        let Some((p, q)) = &self.factors else {
            return Ok(false);
        };
        let bits = self.public.bits;
        let n = &self.public.n;
        let phi = (p - 1u8) * (q - 1u8);
        let lower = BigUint::one() << (bits - 1);
        let upper = BigUint::one() << bits;
        let ok = p != q
            && &(p * q) == n
            && *n >= lower
            && *n < upper
            && phi.gcd(&BigUint::from(3u8)).is_one()
            && (&self.d * 3u8) % &phi == BigUint::one()
            && is_probable_prime(p, &mut ChaCha20Rng::seed_from_u64(0))
            && is_probable_prime(q, &mut ChaCha20Rng::seed_from_u64(1));
        Ok(ok)
    }

    pub fn to_key_file(&self) -> String {
        let mut out = String::new();
        writeln!(out, "n={:x}", self.public.n).unwrap();
        writeln!(out, "d={:x}", self.d).unwrap();
        writeln!(out, "e={PUBLIC_EXPONENT:x}").unwrap();
        writeln!(out, "bits={:x}", self.public.bits).unwrap();
        out
    }

    pub fn from_key_file(text: &str) -> Result<Self> {
        let fields = KeyFields::parse(text)?;
        let public = fields.public()?;
        let d = fields
            .d
            .ok_or_else(|| Error::KeyFormat("missing d= line (not a private key)".into()))?;
        if d.is_zero() || d >= public.n {
            return Err(Error::KeyFormat("private exponent out of range".into()));
        }
        Ok(Self {
            public,
            d,
            factors: None,
        })
    }
}

#[derive(Default)]
struct KeyFields {
    n: Option<BigUint>,
    d: Option<BigUint>,
    e: Option<BigUint>,
    bits: Option<BigUint>,
}

impl KeyFields {
    fn parse(text: &str) -> Result<Self> {
        let mut fields = KeyFields::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (name, value) = line.split_once('=').ok_or_else(|| {
                Error::KeyFormat(format!("line {}: expected name=value", lineno + 1))
            })?;
            let parsed = parse_hex(value).ok_or_else(|| {
                Error::KeyFormat(format!("line {}: invalid hex value", lineno + 1))
            })?;
            let slot = match name {
                "n" => &mut fields.n,
                "d" => &mut fields.d,
                "e" => &mut fields.e,
                "bits" => &mut fields.bits,
                other => return Err(Error::KeyFormat(format!("unknown field `{other}`"))),
            };
            if slot.replace(parsed).is_some() {
                return Err(Error::KeyFormat(format!("duplicate field `{name}`")));
            }
        }
        Ok(fields)
    }

    fn public(&self) -> Result<PublicKey> {
        let missing = |f: &str| Error::KeyFormat(format!("missing {f}= line"));
        let n = self.n.clone().ok_or_else(|| missing("n"))?;
        let e = self.e.as_ref().ok_or_else(|| missing("e"))?;
        let bits = self.bits.as_ref().ok_or_else(|| missing("bits"))?;
        if *e != BigUint::from(PUBLIC_EXPONENT) {
            return Err(Error::KeyFormat(format!(
                "unsupported public exponent {e:x}"
            )));
        }
        let bits = u64::try_from(bits).map_err(|_| Error::KeyFormat("bits out of range".into()))?;
        PublicKey::new(n, bits).map_err(|e| Error::KeyFormat(e.to_string()))
    }
}

fn parse_hex(value: &str) -> Option<BigUint> {
    if value.is_empty() || !value.bytes().all(|c| c.is_ascii_hexdigit()) {
        return None;
    }
    BigUint::parse_bytes(value.as_bytes(), 16)
}

/// Deterministically generates an ℓ_n-bit key with `e = 3` from `seed`.
pub fn generate_keypair(bits: u64, seed: u64) -> Result<RsaKeyPair> {
    if bits < MIN_MODULUS_BITS || !bits.is_multiple_of(2) {
        return Err(Error::Config(format!(
            "modulus length must be even and at least {MIN_MODULUS_BITS} bits, got {bits}"
        )));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let half = bits / 2;
    let p = random_prime(&mut rng, half);
    let q = loop {
        let q = random_prime(&mut rng, half);
        if q != p {
            break q;
        }
    };

    let n = &p * &q;
    let phi = (&p - 1u8) * (&q - 1u8);
    let d = mod_inverse(&BigUint::from(PUBLIC_EXPONENT), &phi)?;
    Ok(RsaKeyPair {
        public: PublicKey::new(n, bits)?,
        d,
        factors: Some((p, q)),
    })
}

/// A prime of exactly `bits` bits with `p mod 3 = 2`.
///
/// The top two bits are forced so that a product of two such primes has
/// exactly `2 * bits` bits.
fn random_prime<R: RngCore>(rng: &mut R, bits: u64) -> BigUint {
    let top = (BigUint::one() << (bits - 1)) | (BigUint::one() << (bits - 2));
    loop {
        let candidate = random_bits(rng, bits) | &top | BigUint::one();
        // p = 1 mod 3 would make 3 | p - 1 and leave e = 3 without an inverse.
        if (&candidate % 3u8) != BigUint::from(2u8) {
            continue;
        }
        if is_probable_prime(&candidate, rng) {
            return candidate;
        }
    }
}

const SMALL_PRIMES: [u32; 24] = [
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Miller–Rabin with 40 random bases drawn from `rng`.
pub fn is_probable_prime<R: RngCore + ?Sized>(n: &BigUint, rng: &mut R) -> bool {
    let two = BigUint::from(2u8);
    if *n < two {
        return false;
    }
    if *n == two {
        return true;
    }
    if n.is_even() {
        return false;
    }
    for &sp in &SMALL_PRIMES {
        let sp = BigUint::from(sp);
        if *n == sp {
            return true;
        }
        if (n % &sp).is_zero() {
            return false;
        }
    }

    let n_minus_1 = n - 1u8;
    let s = n_minus_1.trailing_zeros().expect("n - 1 is nonzero");
    let d = &n_minus_1 >> s;
    // Bases are drawn from [2, n - 2].
    let span = n - 3u8;

    'bases: for _ in 0..MILLER_RABIN_ROUNDS {
        let a = random_below(rng, &span) + 2u8;
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// `sigma = T(m)^d mod n`.
pub fn sign(message: &[u8], key: &RsaKeyPair, transform: TransformSpec) -> Result<Signature> {
    let encoded = encode(message, transform, key.public())?;
    let sigma = mod_pow(encoded.value(), &key.d, key.n())?;
    Ok(Signature::new(sigma))
}

/// Full-width verification: accepts iff `T(m) = sigma^3 mod n` on every bit.
pub fn verify_correct(
    message: &[u8],
    sig: &Signature,
    public: &PublicKey,
    transform: TransformSpec,
) -> Result<bool> {
    if sig.value() >= public.n() {
        return Err(Error::MalformedSignature);
    }
    let expected = encode(message, transform, public)?;
    Ok(public.apply(sig.value()) == *expected.value())
}
