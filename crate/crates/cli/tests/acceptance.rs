//! One test per acceptance criterion. Each prints its outcome line, so
//! `cargo test --test acceptance -- --nocapture` shows the measured numbers.

use blockexp_cli::acceptance;

fn check(id: usize) {
    let o = acceptance::run(id);
    println!("{o}");
    assert!(o.passed, "{o}");
}

#[test]
fn c01_oracle_agreement() {
    check(1);
}

#[test]
fn c02_cost_model() {
    check(2);
}

#[test]
fn c03_constants() {
    check(3);
}

#[test]
fn c04_tau_pade_quality() {
    check(4);
}

#[test]
fn c05_alpha_sweep() {
    check(5);
}

#[test]
fn c06_linearity() {
    check(6);
}

#[test]
fn c07_selection_invariance() {
    check(7);
}

#[test]
fn c08_phi_combination() {
    check(8);
}

#[test]
fn c09_lemma_properties() {
    check(9);
}

#[test]
fn c10_comparative_accuracy() {
    check(10);
}
