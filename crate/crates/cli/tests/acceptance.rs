//! Acceptance gate: one test (and one printed pass/fail line) per
//! criterion, all running the shared suite at a fixed seed under the desk
//! profile.

use forge_cli::acceptance::{run_criterion, Profile};

const SEED: u64 = 0xACCE97;

fn gate(index: usize) {
    let outcome = run_criterion(index, SEED, Profile::Desk);
    let status = if outcome.passed { "pass" } else { "FAIL" };
    println!(
        "criterion {:02} {:<26} {} — {}",
        outcome.index, outcome.name, status, outcome.detail
    );
    assert!(
        outcome.passed,
        "criterion {:02} ({}) failed: {}",
        outcome.index, outcome.name, outcome.detail
    );
}

#[test]
fn criterion_01_coding_round_trip() {
    gate(1);
}

#[test]
fn criterion_02_color_reduction() {
    gate(2);
}

#[test]
fn criterion_03_colorings_from_codes() {
    gate(3);
}

#[test]
fn criterion_04_congruence_dispersion() {
    gate(4);
}

#[test]
fn criterion_05_katetov_search_soundness() {
    gate(5);
}

#[test]
fn criterion_06_interval_characterization() {
    gate(6);
}

#[test]
fn criterion_07_adversary_runs() {
    gate(7);
}

#[test]
fn criterion_08_characterization_failure() {
    gate(8);
}

#[test]
fn criterion_09_ic_membership_vs_cover() {
    gate(9);
}

#[test]
fn criterion_10_ic_selector_floor() {
    gate(10);
}

#[test]
fn criterion_11_anti_reduction_sweep() {
    gate(11);
}

#[test]
fn criterion_12_solecki_pipeline() {
    gate(12);
}

#[test]
fn criterion_13_ramsey_selector() {
    gate(13);
}

#[test]
fn criterion_14_determinism() {
    gate(14);
}
