"""One test per exit criterion; each prints a single PASS/FAIL line with its measurement."""

from adiabatic_search.lab import acceptance as acc


def test_criterion_1_quoted_time_targets(report_criterion):
    result = report_criterion(acc.criterion_quoted_times())
    assert result.passed, result.detail


def test_criterion_2_cubic_linear_separation(report_criterion):
    result = report_criterion(acc.criterion_order_separation())
    assert result.passed, result.detail


def test_criterion_3_reduction_equivalence(report_criterion):
    result = report_criterion(acc.criterion_reduction())
    assert result.passed, result.detail


def test_criterion_4_spectrum_embedding(report_criterion):
    result = report_criterion(acc.criterion_spectrum())
    assert result.passed, result.detail


def test_criterion_5_first_order_overlay(report_criterion):
    result = report_criterion(acc.criterion_first_order_overlay())
    assert result.passed, result.detail


def test_criterion_6_oracle_equivalence(report_criterion):
    result = report_criterion(acc.criterion_oracle_equivalence())
    assert result.passed, result.detail


def test_criterion_7_deviation_hierarchy(report_criterion):
    result = report_criterion(acc.criterion_hierarchy())
    assert result.passed, result.detail


def test_criterion_8_oscillation_patterns(report_criterion):
    result = report_criterion(acc.criterion_patterns())
    assert result.passed, result.detail


def test_criterion_9_numerics_hygiene(report_criterion):
    result = report_criterion(acc.criterion_hygiene())
    assert result.passed, result.detail
