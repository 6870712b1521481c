//! Golden tests for the command-line tool: byte-pinned reports, stable exit
//! codes, and the file-format round trip.

mod common;

use std::path::PathBuf;
use std::process::Command;

use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tvcc::cli::{parse_encoder_str, print_encoder, print_periodic, print_rational, ParsedEncoder};
use tvcc::RationalPeriodicEncoder;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tvcc"))
}

fn run(args: &[&str], files: &[(&str, &str)]) -> (Option<i32>, String, String, PathBuf) {
    let dir = std::env::temp_dir().join(format!(
        "tvcc-cli-{}-{}",
        std::process::id(),
        args.join("_").replace(['/', '-', '.'], "_")
    ));
    std::fs::create_dir_all(&dir).unwrap();
    for (name, content) in files {
        std::fs::write(dir.join(name), content).unwrap();
    }
    let output = bin().current_dir(&dir).args(args).output().unwrap();
    (
        output.status.code(),
        String::from_utf8(output.stdout).unwrap(),
        String::from_utf8(output.stderr).unwrap(),
        dir,
    )
}

const CLASSIC: &str = "1 1 2\n11 101\n";
const CLEAN: &str = "1 1 2\n1 11\n";

#[test]
fn check_catastrophic_human_and_exit_code() {
    let (code, out, err, dir) = run(&["check", "eq1.enc"], &[("eq1.enc", CLASSIC)]);
    assert_eq!(code, Some(2));
    assert_eq!(out, "CATASTROPHIC f=11 l=0 g=11\n");
    assert_eq!(err, "");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn check_catastrophic_machine_bytes() {
    let (code, out, _, dir) = run(&["check", "eq1.enc", "--machine"], &[("eq1.enc", CLASSIC)]);
    assert_eq!(code, Some(2));
    assert_eq!(out, "verdict=CATASTROPHIC\nf=11\nl=0\ng=11\n");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn check_clean_encoder() {
    let (code, out, _, dir) = run(&["check", "clean.enc"], &[("clean.enc", CLEAN)]);
    assert_eq!(code, Some(0));
    assert_eq!(out, "NON-CATASTROPHIC f=1 l=0\n");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn check_octal_display() {
    let (code, out, _, dir) = run(&["check", "eq1.enc", "--octal"], &[("eq1.enc", CLASSIC)]);
    assert_eq!(code, Some(2));
    assert_eq!(out, "CATASTROPHIC f=11 (oct 3) l=0 g=11 (oct 3)\n");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn check_rejects_feedback_files() {
    let (code, out, err, dir) = run(&["check", "r.enc"], &[("r.enc", "1 1 2\n11 101\nden 11\n")]);
    assert_eq!(code, Some(1));
    assert_eq!(out, "");
    assert!(err.contains("non-trivial denominator"), "stderr: {err}");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn convert_classic_then_check_is_clean() {
    let (code, out, err, dir) = run(
        &["convert", "eq1.enc", "-o", "out.enc"],
        &[("eq1.enc", CLASSIC)],
    );
    assert_eq!(code, Some(0));
    assert_eq!(
        out,
        "CONVERTED f=11 l=0 g=11 den=1 exact=yes verify=pass oracle=NON-CATASTROPHIC\n"
    );
    assert_eq!(err, "");
    assert_eq!(
        std::fs::read_to_string(dir.join("out.enc")).unwrap(),
        "1 1 2\n1 11\nden 1\n"
    );

    let recheck = bin()
        .current_dir(&dir)
        .args(["check", "out.enc"])
        .output()
        .unwrap();
    assert_eq!(recheck.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(recheck.stdout).unwrap(),
        "NON-CATASTROPHIC f=1 l=0\n"
    );
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn convert_periodic_shares_denominator() {
    let file = "2 1 2\n11 101\n11 101\n";
    let (code, out, _, dir) = run(
        &["convert", "p2.enc", "-o", "out.enc", "--machine"],
        &[("p2.enc", file)],
    );
    assert_eq!(code, Some(0));
    assert_eq!(
        out,
        "f=11\nl=0\ng=11\nden=101\nexact=false\nverify=pass\noracle=NON-CATASTROPHIC\n"
    );
    assert_eq!(
        std::fs::read_to_string(dir.join("out.enc")).unwrap(),
        "2 1 2\n11 101\n11 101\nden 101\n"
    );

    // the converted encoder is rational, so the oracle command judges it
    let oracle = bin()
        .current_dir(&dir)
        .args(["oracle", "out.enc"])
        .output()
        .unwrap();
    assert_eq!(oracle.status.code(), Some(0));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn convert_refuses_clean_encoder() {
    let (code, out, err, dir) = run(
        &["convert", "clean.enc", "-o", "out.enc"],
        &[("clean.enc", CLEAN)],
    );
    assert_eq!(code, Some(1));
    assert_eq!(out, "");
    assert_eq!(
        err,
        "error: encoder is not catastrophic; nothing to convert\n"
    );
    assert!(!dir.join("out.enc").exists());
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn check_rank_deficient_errors() {
    let (code, out, err, dir) = run(&["check", "zero.enc"], &[("zero.enc", "1 1 2\n0 0\n")]);
    assert_eq!(code, Some(1));
    assert_eq!(out, "");
    assert_eq!(
        err,
        "error: rank-deficient matrix: every minor of order 1 is zero\n"
    );
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn tvece_worked_example_bytes() {
    let file = "2 1 2\n11 101\n1 11\n";
    let (code, out, _, dir) = run(&["tvece", "p2.enc"], &[("p2.enc", file)]);
    assert_eq!(code, Some(0));
    assert_eq!(
        out,
        "# blocked equivalent: p=2 k=1 n=2 m=2 -> k'=2 n'=4 m'=1\n1 2 4\n1 11 0 1\n01 0 1 1\n"
    );

    let (code, out, _, dir2) = run(&["tvece", "p2.enc", "--machine"], &[("p2.enc", file)]);
    assert_eq!(code, Some(0));
    assert_eq!(
        out,
        "source_p=2\nk=2\nn=4\nm=1\n\
         g_0_0=1\ng_0_1=11\ng_0_2=0\ng_0_3=1\n\
         g_1_0=01\ng_1_1=0\ng_1_2=1\ng_1_3=1\n"
    );
    std::fs::remove_dir_all(dir).ok();
    std::fs::remove_dir_all(dir2).ok();
}

#[test]
fn tvece_output_file_reparses() {
    let file = "2 1 2\n11 101\n1 11\n";
    let (code, _, _, dir) = run(
        &["tvece", "p2.enc", "-o", "blocked.enc"],
        &[("p2.enc", file)],
    );
    assert_eq!(code, Some(0));
    let text = std::fs::read_to_string(dir.join("blocked.enc")).unwrap();
    match parse_encoder_str(&text).unwrap() {
        ParsedEncoder::Periodic(e) => {
            assert_eq!((e.period(), e.k(), e.n()), (1, 2, 4));
        }
        ParsedEncoder::Rational(_) => panic!("expected periodic"),
    }
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn encode_human_machine_and_tail() {
    let (code, out, _, dir) = run(
        &["encode", "eq1.enc", "--input", "111"],
        &[("eq1.enc", CLASSIC)],
    );
    assert_eq!(code, Some(0));
    assert_eq!(out, "11 01 00\n");
    std::fs::remove_dir_all(dir).ok();

    let (code, out, _, dir) = run(
        &["encode", "eq1.enc", "--input", "111", "--machine"],
        &[("eq1.enc", CLASSIC)],
    );
    assert_eq!(code, Some(0));
    assert_eq!(out, "epochs=3\nout=110100\n");
    std::fs::remove_dir_all(dir).ok();

    let (code, out, _, dir) = run(
        &["encode", "eq1.enc", "--input", "111", "--tail"],
        &[("eq1.enc", CLASSIC)],
    );
    assert_eq!(code, Some(0));
    assert_eq!(out, "11 01 00 11 01\n");
    std::fs::remove_dir_all(dir).ok();

    // --len both extends (zero input epochs) and truncates
    let (code, out, _, dir) = run(
        &["encode", "eq1.enc", "--input", "111", "--len", "2"],
        &[("eq1.enc", CLASSIC)],
    );
    assert_eq!(code, Some(0));
    assert_eq!(out, "11 01\n");
    std::fs::remove_dir_all(dir).ok();

    let (code, out, _, dir) = run(
        &["encode", "eq1.enc", "--input", "1", "--len", "4"],
        &[("eq1.enc", CLASSIC)],
    );
    assert_eq!(code, Some(0));
    assert_eq!(out, "11 10 01 00\n");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn encode_rational_weight_three() {
    let (code, out, _, dir) = run(
        &["encode", "r.enc", "--input", "1", "--len", "8"],
        &[("r.enc", "1 1 2\n11 101\nden 11\n")],
    );
    assert_eq!(code, Some(0));
    assert_eq!(out, "11 01 00 00 00 00 00 00\n");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn oracle_reports_and_exit_codes() {
    let (code, out, _, dir) = run(&["oracle", "eq1.enc"], &[("eq1.enc", CLASSIC)]);
    assert_eq!(code, Some(2));
    assert_eq!(
        out,
        "CATASTROPHIC (oracle) state_bits=2 edges=8\n\
         witness cycle (phase state input -> next / output):\n\
         0 11 1 -> 11 / 00\n"
    );
    std::fs::remove_dir_all(dir).ok();

    let (code, out, _, dir) = run(&["oracle", "eq1.enc", "--machine"], &[("eq1.enc", CLASSIC)]);
    assert_eq!(code, Some(2));
    assert_eq!(
        out,
        "verdict=CATASTROPHIC\nstate_bits=2\nedges=8\nwitness_len=1\nwitness_0=0 11 1 -> 11 / 00\n"
    );
    std::fs::remove_dir_all(dir).ok();

    let (code, out, _, dir) = run(&["oracle", "clean.enc"], &[("clean.enc", CLEAN)]);
    assert_eq!(code, Some(0));
    assert_eq!(out, "NON-CATASTROPHIC (oracle) state_bits=1 edges=4\n");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn parse_errors_carry_position_and_exit_one() {
    let (code, _, err, dir) = run(&["check", "bad.enc"], &[("bad.enc", "1 1 2\n11 1x1\n")]);
    assert_eq!(code, Some(1));
    assert_eq!(
        err,
        "error: bad.enc: line 2, column 5: invalid character 'x' in polynomial, expected '0' or '1'\n"
    );
    std::fs::remove_dir_all(dir).ok();

    let (code, _, err, dir) = run(&["check", "missing.enc"], &[]);
    assert_eq!(code, Some(1));
    assert!(err.starts_with("error: missing.enc: "), "stderr: {err}");
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn usage_errors_exit_one() {
    let (code, _, err, dir) = run(&["frobnicate"], &[]);
    assert_eq!(code, Some(1));
    assert!(!err.is_empty());
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn file_format_round_trips_for_random_encoders() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xF11E);
    for i in 0..200 {
        let base = random_periodic(&mut rng, 4, 2, 4, 4);
        let parsed = if i % 2 == 0 {
            ParsedEncoder::Periodic(base)
        } else {
            let den = loop {
                let cand = random_poly(&mut rng, 3);
                if cand.constant_term() {
                    break cand;
                }
            };
            ParsedEncoder::Rational(RationalPeriodicEncoder::new(base, den).unwrap())
        };
        let text = print_encoder(&parsed);
        assert_eq!(parse_encoder_str(&text).unwrap(), parsed, "round trip {i}");
    }
}

#[test]
fn printers_match_known_layouts() {
    match parse_encoder_str("2 1 2\n11 101\n1 11\n").unwrap() {
        ParsedEncoder::Periodic(e) => {
            assert_eq!(print_periodic(&e), "2 1 2\n11 101\n1 11\n")
        }
        ParsedEncoder::Rational(_) => panic!("expected periodic"),
    }
    match parse_encoder_str("1 1 3\n1 11 101\nden 111\n").unwrap() {
        ParsedEncoder::Rational(r) => {
            assert_eq!(print_rational(&r), "1 1 3\n1 11 101\nden 111\n")
        }
        ParsedEncoder::Periodic(_) => panic!("expected rational"),
    }
}
