use num_bigint::BigUint;
use thiserror::Error;

use crate::forge::ForgeCase;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(&'static str),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("malformed signature: value is not below the modulus")]
    MalformedSignature,

    #[error("wrong construction: encoded message is {found:?}, expected {expected:?}")]
    WrongCase {
        expected: ForgeCase,
        found: ForgeCase,
    },

    #[error("attack bound violated: 3*(b + 3) = {} is not below modulus length {bits}", 3 * (.b + 3))]
    BoundViolated { b: u64, bits: u64 },

    #[error("compared-bit count {0} is below the forging floor of 8")]
    BelowFloor(u64),

    #[error("oracle enumeration ceiling exceeded: b = {0} > 24")]
    OracleCapacity(u32),

    #[error(
        "oracle divergence at b = {b}: target {target} has no root {root} in the brute-force set"
    )]
    OracleDivergence { b: u32, target: u64, root: BigUint },

    #[error("internal assertion failed: {0}")]
    InternalAssertion(String),

    #[error("malformed key file: {0}")]
    KeyFormat(String),

    #[error("malformed container: {0}")]
    ContainerFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
