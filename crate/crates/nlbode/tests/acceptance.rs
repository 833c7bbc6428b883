//! End-to-end acceptance: one test per numbered criterion of the DC-motor
//! study, each asserting its published value at the stated tolerance. The
//! whole matrix is computed once and shared, so the harness output reads
//! as a per-criterion pass/fail list.

use std::sync::LazyLock;

use nlbode::config::AnalysisConfig;
use nlbode::verify::{run_acceptance, CriterionReport};

static MATRIX: LazyLock<Vec<CriterionReport>> = LazyLock::new(|| {
    run_acceptance(&AnalysisConfig::default(), 1).expect("default study is computable")
});

fn assert_criterion(id: usize) {
    let report = MATRIX
        .iter()
        .find(|r| r.id == id)
        .expect("criterion present in the matrix");
    for c in &report.checks {
        assert!(
            c.pass,
            "{}: measured {:e} vs expected {:e} ({:?}, tolerance {})",
            c.name, c.measured, c.expected, c.comparison, c.tolerance
        );
    }
}

#[test]
fn criterion_01_full_space_sensitivity_gain() {
    assert_criterion(1);
}

#[test]
fn criterion_02_bandwidth_estimates() {
    assert_criterion(2);
}

#[test]
fn criterion_03_pointwise_sinusoidal_gains() {
    assert_criterion(3);
}

#[test]
fn criterion_04_loop_divergence_structure() {
    assert_criterion(4);
}

#[test]
fn criterion_05_time_domain_cross_checks() {
    assert_criterion(5);
}

#[test]
fn criterion_06_incremental_gain_probes() {
    assert_criterion(6);
}

#[test]
fn criterion_07_gain_orderings_and_limits() {
    assert_criterion(7);
}

#[test]
fn criterion_08_zero_sector_linear_reductions() {
    assert_criterion(8);
}

#[test]
fn criterion_09_geometry_invariants() {
    assert_criterion(9);
}

#[test]
fn criterion_10_describing_function_comparison() {
    assert_criterion(10);
}
