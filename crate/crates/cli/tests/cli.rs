use std::path::Path;
use std::process::{Command, Output};

fn lowexp(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lowexp"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// A 512-bit key pair plus two payloads in a fresh directory.
fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let out = lowexp(
        dir.path(),
        &["keygen", "--bits", "512", "--seed", "1", "--out", "k"],
    );
    assert_eq!(code(&out), 0);
    std::fs::write(dir.path().join("benign.bin"), b"config v1").unwrap();
    std::fs::write(dir.path().join("other.bin"), b"config v2 (unsigned)").unwrap();
    dir
}

#[test]
fn keygen_writes_public_file_without_private_exponent() {
    let dir = setup();
    let public = std::fs::read_to_string(dir.path().join("k.pub")).unwrap();
    let private = std::fs::read_to_string(dir.path().join("k.priv")).unwrap();
    assert!(!public.contains("d="));
    assert!(private.lines().any(|l| l.starts_with("d=")));
    assert!(public.contains("e=3\n") && public.contains("bits=200\n"));
}

#[test]
fn keygen_rejects_odd_or_tiny_lengths() {
    let dir = tempfile::tempdir().unwrap();
    for bits in ["63", "513", "32"] {
        let out = lowexp(dir.path(), &["keygen", "--bits", bits]);
        assert_ne!(code(&out), 0);
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains("even") && err.contains("64"), "{err}");
    }
}

#[test]
fn sign_verify_round_trip() {
    let dir = setup();
    let d = dir.path();
    assert_eq!(
        code(&lowexp(
            d,
            &[
                "sign",
                "--key",
                "k.priv",
                "--payload",
                "benign.bin",
                "--out",
                "s.lbf"
            ]
        )),
        0
    );
    for mode in ["correct", "flawed"] {
        let out = lowexp(
            d,
            &[
                "verify",
                "--key",
                "k.pub",
                "--container",
                "s.lbf",
                "--mode",
                mode,
            ],
        );
        assert_eq!(code(&out), 0, "{mode}");
        assert_eq!(stdout(&out).trim(), "ACCEPT");
    }
}

#[test]
fn forged_container_splits_the_verifiers() {
    let dir = setup();
    let d = dir.path();
    let out = lowexp(
        d,
        &[
            "forge",
            "--key",
            "k.pub",
            "--payload",
            "other.bin",
            "--out",
            "f.lbf",
            "--explain",
        ],
    );
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for field in ["case:", "r:", "c:", "tau:", "z:"] {
        assert!(text.contains(field), "{text}");
    }

    let flawed = lowexp(
        d,
        &[
            "verify",
            "--key",
            "k.pub",
            "--container",
            "f.lbf",
            "--mode",
            "flawed",
            "--compare-bits",
            "160",
        ],
    );
    assert_eq!(code(&flawed), 0);
    let correct = lowexp(
        d,
        &[
            "verify",
            "--key",
            "k.pub",
            "--container",
            "f.lbf",
            "--mode",
            "correct",
        ],
    );
    assert_eq!(code(&correct), 1);
    assert_eq!(stdout(&correct).trim(), "REJECT");
}

#[test]
fn malformed_inputs_exit_2() {
    let dir = setup();
    let d = dir.path();
    std::fs::write(d.join("junk.lbf"), b"LBF1\x01garbage").unwrap();
    let out = lowexp(d, &["verify", "--key", "k.pub", "--container", "junk.lbf"]);
    assert_eq!(code(&out), 2);

    let out = lowexp(
        d,
        &["verify", "--key", "missing.pub", "--container", "junk.lbf"],
    );
    assert_eq!(code(&out), 2);

    // A signature that is not below n.
    lowexp(
        d,
        &[
            "sign",
            "--key",
            "k.priv",
            "--payload",
            "benign.bin",
            "--out",
            "s.lbf",
        ],
    );
    let mut bytes = std::fs::read(d.join("s.lbf")).unwrap();
    let sig_len_at = 12 + b"config v1".len();
    bytes.truncate(sig_len_at);
    bytes.extend_from_slice(&65u32.to_be_bytes());
    bytes.extend_from_slice(&[0xff; 65]);
    std::fs::write(d.join("big.lbf"), bytes).unwrap();
    let out = lowexp(d, &["verify", "--key", "k.pub", "--container", "big.lbf"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed signature"));
}

#[test]
fn forge_refuses_out_of_bound_without_override() {
    let dir = setup();
    let d = dir.path();
    let args = [
        "forge",
        "--key",
        "k.pub",
        "--payload",
        "other.bin",
        "--out",
        "f.lbf",
        "--compare-bits",
        "170",
    ];
    let out = lowexp(d, &args);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("bound"));

    let mut forced = args.to_vec();
    forced.push("--force-out-of-bound");
    assert_eq!(code(&lowexp(d, &forced)), 0);
    assert!(d.join("f.lbf").exists());
}

#[test]
fn demo_transcript() {
    let dir = tempfile::tempdir().unwrap();
    let out = lowexp(dir.path(), &["demo", "--seed", "7"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text
        .trim_end()
        .ends_with("flawed verifier: ACCEPT / correct verifier: REJECT"));
    assert_eq!(text, stdout(&lowexp(dir.path(), &["demo", "--seed", "7"])));

    let wide = stdout(&lowexp(
        dir.path(),
        &["demo", "--seed", "7", "--compare-bits", "300"],
    ));
    assert!(wide.contains("warning"));
    assert!(wide
        .trim_end()
        .ends_with("flawed verifier: ACCEPT / correct verifier: REJECT"));
}

#[test]
fn sweep_reports_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = lowexp(
        dir.path(),
        &[
            "sweep", "--bits", "512", "--b-min", "96", "--b-max", "96", "--trials", "200",
            "--seed", "3",
        ],
    );
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let row = text
        .lines()
        .find(|l| l.trim_start().starts_with("96 "))
        .unwrap();
    let cols: Vec<&str> = row.split_whitespace().collect();
    assert_eq!(&cols[..3], &["96", "200", "200"]);

    let empty = lowexp(
        dir.path(),
        &[
            "sweep", "--b-min", "96", "--b-max", "100", "--trials", "0", "--seed", "3",
        ],
    );
    assert_eq!(code(&empty), 0);
    assert_eq!(stdout(&empty).lines().count(), 2);
}

#[test]
fn oracle_spot_check_and_validation() {
    let dir = tempfile::tempdir().unwrap();
    let out = lowexp(dir.path(), &["oracle", "--width", "4", "--target", "3"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("[11]"));

    let out = lowexp(
        dir.path(),
        &["oracle", "--width", "16", "--trials", "100", "--seed", "1"],
    );
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("100 passed, 0 failed"));

    assert_eq!(code(&lowexp(dir.path(), &["oracle", "--width", "25"])), 2);
}
