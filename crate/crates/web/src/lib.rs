//! wasm-bindgen bindings for `www/index.html`.
//!
//! Every export returns a JSON string. Failures come back as
//! `{"error": "..."}` so the page never has to catch exceptions.

use std::cell::RefCell;

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use lowexp_core::forge::{check_bound, forge, report_slack, ForgeOptions};
use lowexp_core::oracle::{brute_cuberoots_mod_pow2, check_claim1_target};
use lowexp_core::sweep::sweep_with_key;
use lowexp_core::{
    encode, generate_keypair, verify_correct, verify_flawed, Error, RsaKeyPair, TransformSpec,
    VerifierPolicy,
};

thread_local! {
    // Key generation dominates page latency; reuse the last key.
    static KEY_CACHE: RefCell<Option<((u64, u64), RsaKeyPair)>> = const { RefCell::new(None) };
}

fn cached_key(bits: u64, seed: u64) -> Result<RsaKeyPair, Error> {
    KEY_CACHE.with(|cache| {
        let mut cache = cache.borrow_mut();
        if let Some((params, key)) = cache.as_ref() {
            if *params == (bits, seed) {
                return Ok(key.clone());
            }
        }
        let key = generate_keypair(bits, seed)?;
        *cache = Some(((bits, seed), key.clone()));
        Ok(key)
    })
}

fn to_json(result: Result<Value, Error>) -> String {
    match result {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

fn hex_padded(v: &lowexp_core::BigUint, digits: usize) -> String {
    format!("{v:0>digits$x}")
}

pub fn forge_value(
    message: &str,
    modulus_bits: u32,
    compare_bits: u32,
    seed: u32,
    transform: &str,
    force: bool,
) -> Result<Value, Error> {
    let transform: TransformSpec = transform.parse()?;
    let key = cached_key(u64::from(modulus_bits), u64::from(seed))?;
    let public = key.public();
    let b = u64::from(compare_bits);
    let policy = VerifierPolicy::new(b, transform)?;
    let msg = message.as_bytes();

    let encoded = encode(msg, transform, public)?;
    let forged = forge(
        msg,
        public,
        &policy,
        ForgeOptions {
            allow_out_of_bound: force,
        },
    )?;
    let sig = forged.signature();
    let absorb = |r: Result<bool, Error>| match r {
        Err(Error::MalformedSignature) => Ok(false),
        other => other,
    };
    let flawed = absorb(verify_flawed(msg, &sig, public, &policy))?;
    let correct = absorb(verify_correct(msg, &sig, public, transform))?;
    let z = report_slack(&forged, &encoded, public, b).ok();

    let digits = public.bits().div_ceil(4) as usize;
    let hex = |v: &lowexp_core::BigUint| format!("{v:x}");
    Ok(json!({
        "modulus_bits": public.bits(),
        "compare_bits": b,
        "transform": transform.name(),
        "n": hex(public.n()),
        "bound_satisfied": check_bound(b, public.bits()),
        "bound_lhs": 3 * (b + 3),
        "encoded": hex_padded(encoded.value(), digits),
        "recovered": hex_padded(&public.apply(forged.sigma()), digits),
        "case": forged.case().name(),
        "r": hex(forged.r()),
        "c": forged.c().map(hex),
        "tau": forged.tau().map(hex),
        "sigma": hex(forged.sigma()),
        "sigma_bits": forged.sigma().bits(),
        "z": z.as_ref().map(hex),
        "flawed_accept": flawed,
        "correct_accept": correct,
    }))
}

pub fn sweep_value(
    modulus_bits: u32,
    b_min: u32,
    b_max: u32,
    trials: u32,
    seed: u32,
) -> Result<Value, Error> {
    if b_min > b_max {
        return Err(Error::Config(format!("b range {b_min}..={b_max} is empty")));
    }
    let key = cached_key(u64::from(modulus_bits), u64::from(seed))?;
    let report = sweep_with_key(
        key.public(),
        u64::from(b_min)..=u64::from(b_max),
        u64::from(trials),
        TransformSpec::Sha1Low,
        u64::from(seed),
    )?;
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|r| {
            json!({
                "b": r.b,
                "trials": r.trials,
                "accepts": r.flawed_accepts,
                "odd": r.odd_cases,
                "even": r.even_cases,
                "bound_satisfied": r.bound_satisfied,
            })
        })
        .collect();
    Ok(json!({ "modulus_bits": report.modulus_bits, "rows": rows }))
}

pub fn cube_roots_value(target: u32, width: u32) -> Result<Value, Error> {
    let set = brute_cuberoots_mod_pow2(u64::from(target), width)?;
    let inverse_root = if set.target & 1 == 1 {
        Some(check_claim1_target(set.target, width)?)
    } else {
        None
    };
    Ok(json!({
        "width": width,
        "target": set.target,
        "roots": set.roots.iter().collect::<Vec<_>>(),
        "inverse_root": inverse_root,
    }))
}

/// Forge a signature for `message` and report both verifiers' verdicts.
#[wasm_bindgen]
pub fn forge_explore(
    message: &str,
    modulus_bits: u32,
    compare_bits: u32,
    seed: u32,
    transform: &str,
    force: bool,
) -> String {
    to_json(forge_value(
        message,
        modulus_bits,
        compare_bits,
        seed,
        transform,
        force,
    ))
}

/// Flawed-verifier acceptance counts for each `b` in `b_min..=b_max`.
#[wasm_bindgen]
pub fn sweep_rates(modulus_bits: u32, b_min: u32, b_max: u32, trials: u32, seed: u32) -> String {
    to_json(sweep_value(modulus_bits, b_min, b_max, trials, seed))
}

/// All cube roots of `target` modulo `2^width`, by enumeration.
#[wasm_bindgen]
pub fn cube_roots(target: u32, width: u32) -> String {
    to_json(cube_roots_value(target, width))
}
