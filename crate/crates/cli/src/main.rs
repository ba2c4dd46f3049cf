use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use lowexp_core::demo::{run_demo, DemoConfig};
use lowexp_core::forge::{check_bound, forge, ForgeOptions};
use lowexp_core::oracle::{brute_cuberoots_mod_pow2, check_claim1_target, validate_claim1_small};
use lowexp_core::sweep::sweep;
use lowexp_core::transform::encode;
use lowexp_core::verifier::DEPLOYED_COMPARE_BITS;
use lowexp_core::{
    generate_keypair, sign, verify_correct, verify_flawed, Error, PublicKey, RsaKeyPair,
    SignedContainer, TransformSpec, VerifierPolicy,
};

const EXIT_REJECT: u8 = 1;
const EXIT_MALFORMED: u8 = 2;

#[derive(Parser)]
#[command(
    name = "lowexp",
    version,
    about = "Forge e = 3 RSA signatures accepted by low-bit-only verifiers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a deterministic e = 3 key pair
    Keygen {
        #[arg(long, default_value_t = 1024)]
        bits: u64,
        #[arg(long)]
        seed: Option<u64>,
        /// Output prefix; writes <out>.priv and <out>.pub
        #[arg(long, default_value = "key")]
        out: PathBuf,
    },
    /// Sign a payload with a private key into a container
    Sign {
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        payload: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        policy: PolicyArgs,
    },
    /// Verify a container; exit 0 accept, 1 reject, 2 malformed
    Verify {
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        container: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Flawed)]
        mode: Mode,
        /// Overrides the compared-bit count recorded in the container
        #[arg(long)]
        compare_bits: Option<u64>,
        /// Overrides the transform recorded in the container
        #[arg(long)]
        transform: Option<TransformSpec>,
    },
    /// Forge a container for a payload using only the public key
    Forge {
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        payload: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        policy: PolicyArgs,
        /// Print case, r, c, tau and slack z
        #[arg(long)]
        explain: bool,
        #[arg(long)]
        force_out_of_bound: bool,
    },
    /// End-to-end walkthrough with the deployed parameters
    Demo {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1024)]
        bits: u64,
        #[arg(long, default_value_t = DEPLOYED_COMPARE_BITS)]
        compare_bits: u64,
        #[arg(long)]
        force_out_of_bound: bool,
    },
    /// Acceptance rates for a range of compared-bit counts
    Sweep {
        #[arg(long, default_value_t = 512)]
        bits: u64,
        #[arg(long)]
        b_min: u64,
        #[arg(long)]
        b_max: u64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = TransformSpec::Sha1Low)]
        transform: TransformSpec,
    },
    /// Brute-force cube roots modulo 2^width
    Oracle {
        /// Modulus exponent (2..=24)
        #[arg(long)]
        width: u32,
        /// Spot-check one target; without it, random odd targets are validated
        #[arg(long)]
        target: Option<u64>,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Args)]
struct PolicyArgs {
    #[arg(long, default_value_t = DEPLOYED_COMPARE_BITS)]
    compare_bits: u64,
    #[arg(long, default_value_t = TransformSpec::Sha1Low)]
    transform: TransformSpec,
}

impl PolicyArgs {
    fn policy(&self) -> Result<VerifierPolicy, Error> {
        VerifierPolicy::new(self.compare_bits, self.transform)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Flawed,
    Correct,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_MALFORMED)
        }
    }
}

fn seed_or_random(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(rand::random)
}

fn read(path: &Path) -> anyhow::Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("reading {}", path.display()))
}

fn read_text(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, bytes: impl AsRef<[u8]>) -> anyhow::Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    match command {
        Command::Keygen { bits, seed, out } => {
            let key = generate_keypair(bits, seed_or_random(seed))?;
            let private = with_suffix(&out, ".priv");
            let public = with_suffix(&out, ".pub");
            write(&private, key.to_key_file())?;
            write(&public, key.public().to_key_file())?;
            println!("wrote {} and {}", private.display(), public.display());
        }

        Command::Sign {
            key,
            payload,
            out,
            policy,
        } => {
            let key = RsaKeyPair::from_key_file(&read_text(&key)?)?;
            let policy = policy.policy()?;
            let payload = read(&payload)?;
            let sig = sign(&payload, &key, policy.transform())?;
            write(
                &out,
                SignedContainer::new(&policy, payload, sig)?.to_bytes(),
            )?;
            println!("wrote {}", out.display());
        }

        Command::Verify {
            key,
            container,
            mode,
            compare_bits,
            transform,
        } => return verify(&key, &container, mode, compare_bits, transform),

        Command::Forge {
            key,
            payload,
            out,
            policy,
            explain,
            force_out_of_bound,
        } => {
            let public = PublicKey::from_key_file(&read_text(&key)?)?;
            let policy = policy.policy()?;
            let b = policy.compare_bits();
            if !check_bound(b, public.bits()) {
                if !force_out_of_bound {
                    bail!(Error::BoundViolated {
                        b,
                        bits: public.bits()
                    });
                }
                eprintln!(
                    "warning: b = {b} violates 3(b+3) < {}; forging anyway, acceptance is not guaranteed",
                    public.bits()
                );
            }
            let payload = read(&payload)?;
            let opts = ForgeOptions {
                allow_out_of_bound: force_out_of_bound,
            };
            let forged = forge(&payload, &public, &policy, opts)?;
            if explain {
                let encoded = encode(&payload, policy.transform(), &public)?;
                match forged.explain(&encoded, &public, b) {
                    Ok(report) => print!("{report}"),
                    Err(e) => eprintln!("warning: no provenance report: {e}"),
                }
            }
            let container = SignedContainer::new(&policy, payload, forged.signature())?;
            write(&out, container.to_bytes())?;
            println!("wrote {} ({} case)", out.display(), forged.case().name());
        }

        Command::Demo {
            seed,
            bits,
            compare_bits,
            force_out_of_bound,
        } => {
            let transcript = run_demo(&DemoConfig {
                modulus_bits: bits,
                compare_bits,
                seed: seed_or_random(seed),
                allow_out_of_bound: force_out_of_bound,
            })?;
            print!("{}", transcript.text);
        }

        Command::Sweep {
            bits,
            b_min,
            b_max,
            trials,
            seed,
            transform,
        } => {
            if b_min > b_max {
                bail!("--b-min {b_min} exceeds --b-max {b_max}");
            }
            let report = sweep(bits, b_min..=b_max, trials, transform, seed_or_random(seed))?;
            print!("{report}");
        }

        Command::Oracle {
            width,
            target,
            trials,
            seed,
        } => match target {
            Some(target) => {
                let set = brute_cuberoots_mod_pow2(target, width)?;
                let roots: Vec<String> = set.roots.iter().map(u64::to_string).collect();
                println!(
                    "cube roots of {} mod 2^{width}: [{}]",
                    set.target,
                    roots.join(", ")
                );
                if set.target & 1 == 1 {
                    let root = check_claim1_target(set.target, width)?;
                    println!("inverse-exponent root: {root} (in set)");
                }
            }
            None => {
                let report = validate_claim1_small(trials, width, seed_or_random(seed))?;
                println!(
                    "width {}: {} trials, {} passed, {} failed",
                    report.modulus_bits, report.trials, report.passes, report.failures
                );
            }
        },
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(
    key: &Path,
    container: &Path,
    mode: Mode,
    compare_bits: Option<u64>,
    transform: Option<TransformSpec>,
) -> anyhow::Result<ExitCode> {
    let public = PublicKey::from_key_file(&read_text(key)?)?;
    let container = SignedContainer::from_bytes(&read(container)?)?;
    let recorded = container.policy()?;
    let policy = VerifierPolicy::new(
        compare_bits.unwrap_or(recorded.compare_bits()),
        transform.unwrap_or(recorded.transform()),
    )?;

    let accepted = match mode {
        Mode::Flawed => verify_flawed(&container.payload, &container.signature, &public, &policy),
        Mode::Correct => verify_correct(
            &container.payload,
            &container.signature,
            &public,
            policy.transform(),
        ),
    }?;
    if accepted {
        println!("ACCEPT");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("REJECT");
        Ok(ExitCode::from(EXIT_REJECT))
    }
}
