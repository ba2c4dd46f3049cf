//! Signature forgery for RSA with public exponent 3 against verifiers that
//! compare only the `b` low-order bits of the encoded message.
//!
//! The crate contains the victim scheme ([`keys`], [`transform`],
//! [`verifier`]), the forgery ([`forge`]), a brute-force cross-check
//! ([`oracle`]), and the supporting file format, sweep, and demo drivers.

pub mod container;
pub mod demo;
pub mod error;
pub mod forge;
pub mod keys;
pub mod mathcore;
pub mod oracle;
pub mod sweep;
pub mod transform;
pub mod verifier;

pub use container::SignedContainer;
pub use error::{Error, Result};
pub use forge::{
    check_bound, forge, forge_even, forge_odd, report_slack, ForgeCase, ForgeOptions,
    ForgedSignature,
};
pub use keys::{generate_keypair, sign, verify_correct, PublicKey, RsaKeyPair};
pub use transform::{encode, EncodedMessage, Parity, TransformSpec};
pub use verifier::{verify_flawed, Signature, VerifierPolicy};

pub use num_bigint::BigUint;
