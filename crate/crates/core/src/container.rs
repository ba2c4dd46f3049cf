//! On-disk signed envelope.
//!
//! ```text
//! offset  size  field
//! 0       4     magic "LBF1"
//! 4       1     version (1)
//! 5       2     compared-bit count b, big-endian
//! 7       1     transform id (1 sha1-low, 2 sha1-block, 3 identity)
//! 8       4     payload length L, big-endian
//! 12      L     payload
//! 12+L    4     signature length S, big-endian
//! 16+L    S     signature, minimal big-endian integer (a single 0x00 for zero)
//! ```
//!
//! No trailing bytes are allowed.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::transform::TransformSpec;
use crate::verifier::{Signature, VerifierPolicy};

pub const MAGIC: [u8; 4] = *b"LBF1";
pub const VERSION: u8 = 1;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedContainer {
    pub compare_bits: u16,
    pub transform: TransformSpec,
    pub payload: Vec<u8>,
    pub signature: Signature,
}

impl SignedContainer {
    pub fn new(policy: &VerifierPolicy, payload: Vec<u8>, signature: Signature) -> Result<Self> {
        let compare_bits = u16::try_from(policy.compare_bits()).map_err(|_| {
            Error::ContainerFormat(format!(
                "b = {} does not fit in 16 bits",
                policy.compare_bits()
            ))
        })?;
        Ok(Self {
            compare_bits,
            transform: policy.transform(),
            payload,
            signature,
        })
    }

    /// The policy recorded in the header.
    pub fn policy(&self) -> Result<VerifierPolicy> {
        VerifierPolicy::new(u64::from(self.compare_bits), self.transform)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let sig = self.signature.value().to_bytes_be();
        let mut out = Vec::with_capacity(16 + self.payload.len() + sig.len());
        out.extend_from_slice(&MAGIC);
        out.push(VERSION);
        out.extend_from_slice(&self.compare_bits.to_be_bytes());
        out.push(self.transform.id());
        out.extend_from_slice(&(self.payload.len() as u32).to_be_bytes());
        out.extend_from_slice(&self.payload);
        out.extend_from_slice(&(sig.len() as u32).to_be_bytes());
        out.extend_from_slice(&sig);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(4)? != MAGIC {
            return Err(bad("bad magic"));
        }
        let version = r.u8()?;
        if version != VERSION {
            return Err(bad(&format!("unsupported version {version}")));
        }
        let compare_bits = u16::from_be_bytes(r.array()?);
        if compare_bits == 0 {
            return Err(bad("compared-bit count is zero"));
        }
        let id = r.u8()?;
        let transform =
            TransformSpec::from_id(id).ok_or_else(|| bad(&format!("unknown transform id {id}")))?;
        let payload_len = u32::from_be_bytes(r.array()?) as usize;
        let payload = r.take(payload_len)?.to_vec();
        let sig_len = u32::from_be_bytes(r.array()?) as usize;
        let sig = r.take(sig_len)?;
        if sig.is_empty() || (sig.len() > 1 && sig[0] == 0) {
            return Err(bad("signature integer is not minimally encoded"));
        }
        if r.pos != bytes.len() {
            return Err(bad(&format!("{} trailing bytes", bytes.len() - r.pos)));
        }
        Ok(Self {
            compare_bits,
            transform,
            payload,
            signature: Signature::new(BigUint::from_bytes_be(sig)),
        })
    }
}

fn bad(msg: &str) -> Error {
    Error::ContainerFormat(msg.to_string())
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(len)
            .filter(|&end| end <= self.bytes.len())
            .ok_or_else(|| bad("truncated"))?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N]> {
        Ok(self.take(N)?.try_into().expect("slice has length N"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample() -> SignedContainer {
        SignedContainer {
            compare_bits: 160,
            transform: TransformSpec::Sha1Low,
            payload: b"abc".to_vec(),
            signature: Signature::new(BigUint::from(0x0102u32)),
        }
    }

    #[test]
    fn layout_is_bit_exact() {
        let bytes = sample().to_bytes();
        assert_eq!(
            bytes,
            [
                b'L', b'B', b'F', b'1', 1, 0x00, 0xa0, 1, 0, 0, 0, 3, b'a', b'b', b'c', 0, 0, 0, 2,
                0x01, 0x02
            ]
        );
    }

    #[test]
    fn zero_signature_is_one_byte() {
        let mut c = sample();
        c.signature = Signature::new(BigUint::ZERO);
        let bytes = c.to_bytes();
        assert_eq!(&bytes[bytes.len() - 5..], &[0, 0, 0, 1, 0]);
        assert_eq!(SignedContainer::from_bytes(&bytes).unwrap(), c);
    }

    #[test]
    fn rejects_malformed_input() {
        let good = sample().to_bytes();
        let mut cases: Vec<Vec<u8>> = Vec::new();
        cases.push(Vec::new());
        cases.push(good[..good.len() - 1].to_vec());
        let mut trailing = good.clone();
        trailing.push(0);
        cases.push(trailing);
        let mut magic = good.clone();
        magic[0] = b'X';
        cases.push(magic);
        let mut version = good.clone();
        version[4] = 2;
        cases.push(version);
        let mut transform = good.clone();
        transform[7] = 9;
        cases.push(transform);
        let mut zero_b = good.clone();
        zero_b[5..7].copy_from_slice(&[0, 0]);
        cases.push(zero_b);
        let mut long_payload = good.clone();
        long_payload[11] = 200;
        cases.push(long_payload);
        let mut padded_sig = good[..good.len() - 6].to_vec();
        padded_sig.extend_from_slice(&[0, 0, 0, 3, 0, 1, 2]);
        cases.push(padded_sig);

        for (i, bytes) in cases.iter().enumerate() {
            assert!(
                matches!(
                    SignedContainer::from_bytes(bytes),
                    Err(Error::ContainerFormat(_))
                ),
                "case {i}"
            );
        }
    }

    #[test]
    fn oversized_policy_is_refused() {
        let policy = VerifierPolicy::new(70_000, TransformSpec::Sha1Low).unwrap();
        assert!(SignedContainer::new(&policy, vec![], Signature::new(BigUint::ZERO)).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(
            b in 1u16..,
            t in 0usize..3,
            payload in prop::collection::vec(any::<u8>(), 0..512),
            sig in prop::collection::vec(any::<u8>(), 0..160),
        ) {
            let c = SignedContainer {
                compare_bits: b,
                transform: TransformSpec::ALL[t],
                payload,
                signature: Signature::new(BigUint::from_bytes_be(&sig)),
            };
            let bytes = c.to_bytes();
            let back = SignedContainer::from_bytes(&bytes).unwrap();
            prop_assert_eq!(&back, &c);
            prop_assert_eq!(back.to_bytes(), bytes);
        }
    }
}
