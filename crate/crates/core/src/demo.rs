//! Scripted walkthrough of the deployed configuration: sign a benign payload,
//! forge one for a different payload, and show both verifiers' verdicts.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::forge::{check_bound, forge, ForgeOptions};
use crate::keys::{generate_keypair, sign, verify_correct};
use crate::transform::{encode, TransformSpec};
use crate::verifier::{verify_flawed, VerifierPolicy, DEPLOYED_COMPARE_BITS};

pub const BENIGN_PAYLOAD: &[u8] = b"ballot definition v1: precinct 12, contests A-F";
/// Plain text standing in for an attacker's payload. It does nothing.
pub const MALICIOUS_PAYLOAD: &[u8] =
    b"[MALICIOUS - demo placeholder] unsigned replacement ballot definition";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DemoConfig {
    pub modulus_bits: u64,
    pub compare_bits: u64,
    pub seed: u64,
    pub allow_out_of_bound: bool,
}

impl Default for DemoConfig {
    fn default() -> Self {
        Self {
            modulus_bits: 1024,
            compare_bits: DEPLOYED_COMPARE_BITS,
            seed: 0,
            allow_out_of_bound: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DemoTranscript {
    pub text: String,
    pub forged_flawed_accept: bool,
    pub forged_correct_accept: bool,
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ACCEPT"
    } else {
        "REJECT"
    }
}

pub fn run_demo(config: &DemoConfig) -> Result<DemoTranscript> {
    let b = config.compare_bits;
    let transform = TransformSpec::Sha1Low;
    let policy = VerifierPolicy::new(b, transform)?;
    let mut t = String::new();

    let key = generate_keypair(config.modulus_bits, config.seed)?;
    let public = key.public();
    let bits = public.bits();
    writeln!(t, "seed: {}", config.seed).unwrap();
    writeln!(t, "key: {bits}-bit modulus, e = 3").unwrap();
    writeln!(t, "n = {:x}", public.n()).unwrap();
    writeln!(
        t,
        "verifier: compares low {b} bits of sigma^3 mod n against {transform}(m)"
    )
    .unwrap();

    let within = check_bound(b, bits);
    if b != DEPLOYED_COMPARE_BITS || !within {
        writeln!(
            t,
            "warning: b = {b} (deployed value is {DEPLOYED_COMPARE_BITS}); attack bound 3(b+3) < ℓ_n is {} ({} {} {bits})",
            if within { "satisfied" } else { "VIOLATED" },
            3 * (b + 3),
            if within { "<" } else { ">=" },
        )
        .unwrap();
    }
    if !within && !config.allow_out_of_bound {
        return Err(Error::BoundViolated { b, bits });
    }
    let opts = ForgeOptions {
        allow_out_of_bound: config.allow_out_of_bound,
    };

    writeln!(t).unwrap();
    writeln!(
        t,
        "benign payload: {:?}",
        String::from_utf8_lossy(BENIGN_PAYLOAD)
    )
    .unwrap();
    let honest = sign(BENIGN_PAYLOAD, &key, transform)?;
    writeln!(
        t,
        "  signed with the private key: sigma = {:x}",
        honest.value()
    )
    .unwrap();
    writeln!(
        t,
        "  flawed verifier: {} / correct verifier: {}",
        verdict(verify_flawed(BENIGN_PAYLOAD, &honest, public, &policy)?),
        verdict(verify_correct(BENIGN_PAYLOAD, &honest, public, transform)?)
    )
    .unwrap();

    writeln!(t).unwrap();
    writeln!(
        t,
        "malicious payload: {:?}",
        String::from_utf8_lossy(MALICIOUS_PAYLOAD)
    )
    .unwrap();
    writeln!(t, "  forging from the public key alone").unwrap();
    let forged = forge(MALICIOUS_PAYLOAD, public, &policy, opts)?;
    let encoded = encode(MALICIOUS_PAYLOAD, transform, public)?;
    match forged.explain(&encoded, public, b) {
        Ok(report) => {
            for line in report.lines() {
                writeln!(t, "  {line}").unwrap();
            }
        }
        Err(_) => writeln!(
            t,
            "  (no valid slack: sigma^3 mod n disagrees with M in the window)"
        )
        .unwrap(),
    }

    let sig = forged.signature();
    let flawed = match verify_flawed(MALICIOUS_PAYLOAD, &sig, public, &policy) {
        Ok(v) => v,
        Err(Error::MalformedSignature) => false,
        Err(e) => return Err(e),
    };
    let correct = match verify_correct(MALICIOUS_PAYLOAD, &sig, public, transform) {
        Ok(v) => v,
        Err(Error::MalformedSignature) => false,
        Err(e) => return Err(e),
    };
    writeln!(t).unwrap();
    writeln!(
        t,
        "flawed verifier: {} / correct verifier: {}",
        verdict(flawed),
        verdict(correct)
    )
    .unwrap();

    Ok(DemoTranscript {
        text: t,
        forged_flawed_accept: flawed,
        forged_correct_accept: correct,
    })
}
