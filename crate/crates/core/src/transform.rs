//! Message encodings `T: bytes -> [0, n)`.
//!
//! All digest-to-integer conversions are big-endian.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use sha1::{Digest, Sha1};

use crate::error::{Error, Result};
use crate::keys::PublicKey;
use crate::mathcore::low_bits_unchecked;

pub const SHA1_BITS: u64 = 160;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TransformSpec {
    /// The SHA-1 digest alone, occupying bits 0..160 with every higher bit zero.
    Sha1Low,
    /// The SHA-1 digest repeated to fill `bits - 8` bits, so high bits are populated.
    Sha1Block,
    /// The message bytes read as a big-endian integer, reduced mod n.
    IdentityModN,
}

impl TransformSpec {
    pub const ALL: [TransformSpec; 3] = [Self::Sha1Low, Self::Sha1Block, Self::IdentityModN];

    /// Bit width of the encoding under a modulus of `modulus_bits` bits.
    pub fn output_width(self, modulus_bits: u64) -> u64 {
        match self {
            Self::Sha1Low => SHA1_BITS,
            Self::Sha1Block => modulus_bits.saturating_sub(8),
            Self::IdentityModN => modulus_bits,
        }
    }

    /// One-byte identifier used in signed containers.
    pub fn id(self) -> u8 {
        match self {
            Self::Sha1Low => 1,
            Self::Sha1Block => 2,
            Self::IdentityModN => 3,
        }
    }

    pub fn from_id(id: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.id() == id)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Sha1Low => "sha1-low",
            Self::Sha1Block => "sha1-block",
            Self::IdentityModN => "identity",
        }
    }

    pub fn check(self, public: &PublicKey) -> Result<()> {
        let ok = match self {
            Self::Sha1Low => public.bits() > SHA1_BITS,
            Self::Sha1Block => public.bits() > 8,
            Self::IdentityModN => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "transform {} needs a modulus wider than {} bits, got {}",
                self.name(),
                self.output_width(public.bits()),
                public.bits()
            )))
        }
    }
}

impl fmt::Display for TransformSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TransformSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sha1-low" => Ok(Self::Sha1Low),
            "sha1-block" => Ok(Self::Sha1Block),
            "identity" | "identity-mod-n" => Ok(Self::IdentityModN),
            other => Err(Error::Config(format!("unknown transform `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

/// An encoded message `M`, always below the modulus it was built for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EncodedMessage {
    value: BigUint,
}

impl EncodedMessage {
    pub fn new(value: BigUint, public: &PublicKey) -> Result<Self> {
        if value >= *public.n() {
            return Err(Error::Domain("encoded message must be below the modulus"));
        }
        Ok(Self { value })
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn parity(&self) -> Parity {
        if self.value.bit(0) {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn into_value(self) -> BigUint {
        self.value
    }
}

/// Applies the transformation `T` to `message`.
pub fn encode(message: &[u8], spec: TransformSpec, public: &PublicKey) -> Result<EncodedMessage> {
    spec.check(public)?;
    let n = public.n();
    let value = match spec {
        TransformSpec::Sha1Low => BigUint::from_bytes_be(&Sha1::digest(message)),
        TransformSpec::Sha1Block => {
            let digest = Sha1::digest(message);
            let width = spec.output_width(public.bits());
            let bytes: Vec<u8> = digest
                .iter()
                .copied()
                .cycle()
                .take(width.div_ceil(8) as usize)
                .collect();
            low_bits_unchecked(&BigUint::from_bytes_be(&bytes), width) % n
        }
        TransformSpec::IdentityModN => BigUint::from_bytes_be(message) % n,
    };
    EncodedMessage::new(value, public)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::keys::generate_keypair;
    use num_traits::{One, Zero};
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn pub1024() -> &'static PublicKey {
        static KEY: OnceLock<PublicKey> = OnceLock::new();
        KEY.get_or_init(|| generate_keypair(1024, 5).unwrap().public().clone())
    }

    #[test]
    fn sha1_low_of_empty_message() {
        // SHA-1("") from FIPS 180 test vectors.
        let expected =
            BigUint::parse_bytes(b"da39a3ee5e6b4b0d3255bfef95601890afd80709", 16).unwrap();
        let m = encode(b"", TransformSpec::Sha1Low, pub1024()).unwrap();
        assert_eq!(*m.value(), expected);
        assert_eq!(m.parity(), Parity::Odd);
    }

    #[test]
    fn sha1_low_of_abc() {
        let expected =
            BigUint::parse_bytes(b"a9993e364706816aba3e25717850c26c9cd0d89d", 16).unwrap();
        let m = encode(b"abc", TransformSpec::Sha1Low, pub1024()).unwrap();
        assert_eq!(*m.value(), expected);
    }

    #[test]
    fn identity_of_zero_byte() {
        let m = encode(&[0], TransformSpec::IdentityModN, pub1024()).unwrap();
        assert!(m.value().is_zero());
        assert_eq!(m.parity(), Parity::Even);
    }

    #[test]
    fn identity_reduces_mod_n() {
        let key = pub1024();
        let mut bytes = key.n().to_bytes_be();
        bytes.insert(0, 0);
        let m = encode(&bytes, TransformSpec::IdentityModN, key).unwrap();
        assert!(m.value().is_zero());
        let plus_one = (key.n() + 1u8).to_bytes_be();
        let m = encode(&plus_one, TransformSpec::IdentityModN, key).unwrap();
        assert!(m.value().is_one());
    }

    #[test]
    fn sha1_block_fills_the_width() {
        let key = pub1024();
        let m = encode(b"abc", TransformSpec::Sha1Block, key).unwrap();
        // 1016 bits = 127 bytes; the digest starts with 0xa9 so the top bit is set.
        assert_eq!(m.value().bits(), 1016);
        let bytes = m.value().to_bytes_be();
        assert_eq!(&bytes[..20], &Sha1::digest(b"abc")[..]);
        assert_eq!(&bytes[20..40], &Sha1::digest(b"abc")[..]);
    }

    #[test]
    fn sha1_low_needs_wide_modulus() {
        let small = generate_keypair(160, 1).unwrap();
        assert!(matches!(
            encode(b"x", TransformSpec::Sha1Low, small.public()),
            Err(Error::Config(_))
        ));
        let ok = generate_keypair(162, 1).unwrap();
        assert!(encode(b"x", TransformSpec::Sha1Low, ok.public()).is_ok());
    }

    #[test]
    fn names_and_ids_round_trip() {
        for t in TransformSpec::ALL {
            assert_eq!(t.name().parse::<TransformSpec>().unwrap(), t);
            assert_eq!(TransformSpec::from_id(t.id()), Some(t));
        }
        assert_eq!(TransformSpec::from_id(0), None);
        assert!("md5".parse::<TransformSpec>().is_err());
    }

    proptest! {
        #[test]
        fn encodings_stay_below_modulus(msg in prop::collection::vec(any::<u8>(), 0..300)) {
            let key = pub1024();
            for t in TransformSpec::ALL {
                let a = encode(&msg, t, key).unwrap();
                prop_assert!(a.value() < key.n());
                prop_assert_eq!(&a, &encode(&msg, t, key).unwrap());
                prop_assert_eq!(a.parity() == Parity::Odd, a.value().bit(0));
            }
            let low = encode(&msg, TransformSpec::Sha1Low, key).unwrap();
            prop_assert!(low.value().bits() <= 160);
        }
    }
}
