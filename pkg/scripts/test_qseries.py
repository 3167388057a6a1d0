#!/usr/bin/env python3
"""Test script for the exact q-series layer."""

import sys
from fractions import Fraction
from pathlib import Path

# Add project root to Python path
project_root = str(Path(__file__).resolve().parent.parent)
sys.path.insert(0, project_root)

from gkm_workbench.error_handling import InvalidParameterError, TruncationError
from gkm_workbench.qseries import (QSeries, colored_partitions, eta_series, global_bound, m_for, p_sigma,
                                   shape_for, theta_rhs)


def test_series_arithmetic():
    """Products, inverses and truncation bookkeeping."""
    print("\nTesting series arithmetic...")
    one_minus_q = QSeries.from_int_list([1, -1], exact_below=6)
    inverse = one_minus_q.inverse()
    assert inverse.exact_below == 6, "inverse of a unit keeps the bound"
    assert [inverse[n] for n in range(6)] == [1] * 6, "1/(1-q) = 1 + q + q^2 + ..."

    product = QSeries.from_int_list([1, 1], exact_below=6) * one_minus_q
    assert product.terms() == [(0, 1), (2, -1)], "(1+q)(1-q) = 1 - q^2"

    shifted = one_minus_q.shift(Fraction(1, 3))
    assert shifted[Fraction(4, 3)] == -1, "shift moves every exponent"

    try:
        one_minus_q[6]
        raise AssertionError("reading above the exact bound must raise")
    except TruncationError:
        pass
    print("Series arithmetic OK")


def test_eta_and_partitions():
    """Pentagonal numbers, partition counts and colored partitions."""
    print("\nTesting eta and partition numbers...")
    eta = eta_series(4)
    expected = {Fraction(1, 24): 1, Fraction(25, 24): -1, Fraction(49, 24): -1, Fraction(73, 24): 0}
    for exponent, coefficient in expected.items():
        assert eta[exponent] == coefficient, f"eta coefficient at q^{exponent}"

    assert [colored_partitions(1, n) for n in range(11)] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42], \
        "ordinary partition numbers"
    assert [colored_partitions(2, n) for n in range(6)] == [1, 2, 5, 10, 20, 36], "bipartitions"
    assert colored_partitions(24, 1) == 24 and colored_partitions(24, 2) == 324, "24-coloured partitions"
    assert colored_partitions(0, 0) == 1 and colored_partitions(0, 3) == 0, "zero colours"
    assert colored_partitions(5, -1) == 0, "negative n gives 0"

    # below n = 23 only the 1^1 part of 1^1 23^1 contributes
    assert p_sigma(shape_for(23), 10) == 42, "p_sigma for N=23 agrees with p(n) below 23"
    assert p_sigma(shape_for(23), 23) == colored_partitions(1, 23) + 1, "the 23-cycle adds one partition"
    assert p_sigma(((1, 24),), 2) == 324, "p_sigma of 1^24"
    print("Eta and partitions OK")


def test_global_bound():
    """Rank-d bound p_(d-1)(1 - r^2/2) - p_(d-1)(-r^2/2)."""
    print("\nTesting the global bound...")
    assert global_bound(10, 2) == 1, "real roots have multiplicity 1"
    assert global_bound(10, 0) == 8, "isotropic bound is rank - 2"
    assert global_bound(10, -2) == 45, "rank 10 at norm -2"
    assert global_bound(3, -2) == 5 - 2, "rank 3 at norm -2"
    for bad in (4, 1):
        try:
            global_bound(10, bad)
            raise AssertionError(f"norm {bad} must be rejected")
        except InvalidParameterError:
            pass
    print("Global bound OK")


def test_shapes_and_theta():
    """Cycle shapes and the leading terms of the eta-quotient theta series."""
    print("\nTesting shapes and theta series...")
    assert [m_for(N) for N in (2, 3, 5, 7, 11, 23)] == [8, 6, 4, 3, 2, 1], "M = 24/(N+1)"
    assert shape_for(11) == ((1, 2), (11, 2)), "cycle shape of N=11"
    try:
        shape_for(13)
        raise AssertionError("N=13 is not supported")
    except InvalidParameterError:
        pass

    theta = theta_rhs(2, "full", 3)
    assert theta[0] == 1, "theta starts with 1"
    assert theta[1] == 0, "the N=2 complement has no vectors of norm 2"
    assert theta[2] == 240, "240 vectors of norm 4 in the N=2 complement"
    print("Shapes and theta OK")


if __name__ == '__main__':
    try:
        test_series_arithmetic()
        test_eta_and_partitions()
        test_global_bound()
        test_shapes_and_theta()
        print("\nAll q-series tests completed successfully!")
    except AssertionError as e:
        print(f"Test failed: {e}")
        sys.exit(1)
    except Exception as e:
        print(f"Error: {e}")
        sys.exit(1)
