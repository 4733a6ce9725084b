//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line (visible with `cargo test --test acceptance -- --nocapture`).

use intdiff_core::selftest;

fn run(check: fn() -> selftest::CheckOutcome) {
    let outcome = check();
    println!(
        "criterion {:2} ({}): {} — {}",
        outcome.id,
        outcome.label,
        if outcome.pass { "PASS" } else { "FAIL" },
        outcome.detail
    );
    assert!(outcome.pass, "criterion {} failed: {}", outcome.id, outcome.detail);
}

#[test]
fn criterion_01_relation_suite() {
    run(selftest::relation_suite);
}

#[test]
fn criterion_02_matrix_unit_suite() {
    run(selftest::matrix_unit_suite);
}

#[test]
fn criterion_03_module_action_oracle() {
    run(selftest::module_action_oracle);
}

#[test]
fn criterion_04_index_suite() {
    run(selftest::index_suite);
}

#[test]
fn criterion_05_ideal_counts() {
    run(selftest::ideal_counts);
}

#[test]
fn criterion_06_lattice_laws() {
    run(selftest::lattice_laws);
}

#[test]
fn criterion_07_stabilizer_suite() {
    run(selftest::stabilizer_suite);
}

#[test]
fn criterion_08_automorphism_roundtrip() {
    run(selftest::automorphism_roundtrip);
}

#[test]
fn criterion_09_rigidity() {
    run(selftest::rigidity_suite);
}

#[test]
fn criterion_10_quotient_aut_suite() {
    run(selftest::quotient_aut_suite);
}
