//! Exact big-integer helpers shared by the rest of the crate.
//!
//! Everything here works on non-negative [`BigUint`] values except the
//! Bézout cofactors returned by [`ext_gcd`].

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand_core::RngCore;

use crate::error::{Error, Result};

/// `base^exponent mod modulus`.
pub fn mod_pow(base: &BigUint, exponent: &BigUint, modulus: &BigUint) -> Result<BigUint> {
    if *modulus < BigUint::from(2u8) {
        return Err(Error::Domain("modulus must be at least 2"));
    }
    Ok(base.modpow(exponent, modulus))
}

/// Extended Euclid: returns `(g, x, y)` with `g = gcd(a, b)` and `a*x + b*y = g`.
pub fn ext_gcd(a: &BigUint, b: &BigUint) -> Result<(BigUint, BigInt, BigInt)> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::Domain("gcd(0, 0) is undefined"));
    }

    let (mut old_r, mut r) = (BigInt::from(a.clone()), BigInt::from(b.clone()));
    let (mut old_x, mut x) = (BigInt::one(), BigInt::zero());
    let (mut old_y, mut y) = (BigInt::zero(), BigInt::one());

    while !r.is_zero() {
        let (q, rem) = old_r.div_rem(&r);
        old_r = std::mem::replace(&mut r, rem);
        let next_x = &old_x - &q * &x;
        old_x = std::mem::replace(&mut x, next_x);
        let next_y = &old_y - &q * &y;
        old_y = std::mem::replace(&mut y, next_y);
    }

    // Remainders stay non-negative because both inputs are.
    let g = old_r
        .to_biguint()
        .ok_or_else(|| Error::InternalAssertion("negative gcd".into()))?;
    Ok((g, old_x, old_y))
}

/// Modular inverse of `a` modulo `m`, normalized into `[0, m)`.
pub fn mod_inverse(a: &BigUint, m: &BigUint) -> Result<BigUint> {
    if *m < BigUint::from(2u8) {
        return Err(Error::Domain("modulus must be at least 2"));
    }
    let (g, x, _) = ext_gcd(a, m)?;
    if !g.is_one() {
        return Err(Error::Domain("value is not invertible"));
    }
    let m_signed = BigInt::from(m.clone());
    Ok(x.mod_floor(&m_signed)
        .to_biguint()
        .expect("mod_floor by a positive modulus is non-negative"))
}

/// The `r` in `[1, 2^(b-1))` with `3 r ≡ 1 (mod 2^(b-1))`.
///
/// `2^(b-1)` is the order of the unit group modulo `2^b`, so `x -> x^r`
/// inverts cubing on odd residues modulo `2^b`.
pub fn inverse_of_three_mod_pow2(b: u64) -> Result<BigUint> {
    if b < 2 {
        return Err(Error::Domain("b must be at least 2"));
    }
    let modulus = BigUint::one() << (b - 1);
    mod_inverse(&BigUint::from(3u8), &modulus)
}

/// Floor cube root: the unique `t` with `t^3 <= n < (t + 1)^3`.
pub fn integer_cuberoot(n: &BigUint) -> BigUint {
    if n.is_zero() {
        return BigUint::zero();
    }

    // 2^ceil(bits/3) is always >= cbrt(n), so Newton descends monotonically from here.
    let mut x = BigUint::one() << n.bits().div_ceil(3);
    loop {
        let next = (&x * 2u8 + n / (&x * &x)) / 3u8;
        if next >= x {
            break;
        }
        x = next;
    }

    while cube(&x) > *n {
        x -= 1u8;
    }
    while cube(&(&x + 1u8)) <= *n {
        x += 1u8;
    }
    x
}

/// `x mod 2^b`, i.e. bits `0..b` of `x`.
pub fn low_bits(x: &BigUint, b: u64) -> Result<BigUint> {
    if b == 0 {
        return Err(Error::Domain("bit window must be at least 1 bit wide"));
    }
    Ok(low_bits_unchecked(x, b))
}

pub(crate) fn low_bits_unchecked(x: &BigUint, b: u64) -> BigUint {
    if x.bits() <= b {
        return x.clone();
    }
    x & ((BigUint::one() << b) - 1u8)
}

pub fn cube(x: &BigUint) -> BigUint {
    x * x * x
}

/// A uniformly random integer with at most `bits` bits.
pub fn random_bits<R: RngCore + ?Sized>(rng: &mut R, bits: u64) -> BigUint {
    if bits == 0 {
        return BigUint::zero();
    }
    let mut bytes = vec![0u8; bits.div_ceil(8) as usize];
    rng.fill_bytes(&mut bytes);
    low_bits_unchecked(&BigUint::from_bytes_be(&bytes), bits)
}

/// A uniformly random integer in `[0, bound)`, by rejection sampling.
///
/// # Panics
///
/// Panics if `bound` is zero.
pub fn random_below<R: RngCore + ?Sized>(rng: &mut R, bound: &BigUint) -> BigUint {
    assert!(!bound.is_zero(), "empty sampling range");
    let bits = bound.bits();
    loop {
        let candidate = random_bits(rng, bits);
        if candidate < *bound {
            return candidate;
        }
    }
}
