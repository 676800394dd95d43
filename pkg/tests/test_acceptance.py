"""Acceptance gate: one test per verification criterion.

Every test prints its criterion line (visible with ``pytest -s`` or on
failure) and asserts the criterion's declared tolerance, pinned in
``tolerances.json``.  The same checks back the ``verify-all`` CLI
subcommand.

Known red: criterion 6b.  The exact law puts ~6.06% of the largest-block
mass outside the (1 +- 0.25) log2 n window at n = 2^14, so the 5% budget
is not attainable by any correct sampler; the check is asserted as
declared rather than widened.  See README.
"""

import pytest

from noncrossing import acceptance

THREADS = 2


def _show(result):
    status = "PASS" if result.passed else "FAIL"
    line = f"[{status}] criterion {result.criterion}: {result.description} -- {result.detail}"
    print(line)
    return line


def test_criterion_1_exact_reconciliation():
    result = acceptance.check_exact_reconciliation()
    assert result.passed, _show(result)
    _show(result)


def test_criterion_2_bijections():
    result = acceptance.check_bijections()
    assert result.passed, _show(result)
    _show(result)


def test_criterion_3_gaussian_limits():
    result = acceptance.check_clt(threads=THREADS)
    assert result.passed, _show(result)
    _show(result)


def test_criterion_4_geometric_profile():
    result = acceptance.check_geometric_profile(threads=THREADS)
    assert result.passed, _show(result)
    _show(result)


def test_criterion_5_negative_correlation():
    result = acceptance.check_negative_correlation(threads=THREADS)
    assert result.passed, _show(result)
    _show(result)


def test_criterion_6a_largest_block_gap():
    result = acceptance.check_largest_block_gap()
    assert result.passed, _show(result)
    _show(result)


def test_criterion_6b_largest_block_concentration():
    result = acceptance.check_largest_block_concentration(threads=THREADS)
    assert result.passed, _show(result)
    _show(result)


def test_criterion_7_width_law():
    result = acceptance.check_width(threads=THREADS)
    assert result.passed, _show(result)
    _show(result)


def test_criterion_8_singularity_analysis():
    result = acceptance.check_singularity()
    assert result.passed, _show(result)
    _show(result)


def test_criterion_9_singleton_closed_form():
    result = acceptance.check_singleton_closed_form()
    assert result.passed, _show(result)
    _show(result)
