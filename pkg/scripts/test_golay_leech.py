#!/usr/bin/env python3
"""Test script for the Golay code, its automorphisms and the Leech lattice."""

import os
import sys
from fractions import Fraction
from pathlib import Path

# Add project root to Python path
project_root = str(Path(__file__).resolve().parent.parent)
sys.path.insert(0, project_root)

from gkm_workbench.error_handling import InvalidParameterError
from gkm_workbench.golay import build_code, find_shape_automorphism, mask_of, support_of
from gkm_workbench.leech import (enumerate_short_dual_perp, generators, is_leech, is_leech_array, norm, norm4_count,
                                 norm4_vectors, preimage_census, project, projected_word_norm, single_position_family)


def test_golay_code():
    """Weight distribution and the octad/dodecad laws."""
    print("\nTesting the Golay code...")
    code = build_code()
    assert len(code.words) == 4096, "4096 codewords"
    assert len(code.octads) == 759 and len(code.dodecads) == 2576, "octads and dodecads"
    report = code.property_report(sample=20)
    for name, ok in report.items():
        assert ok, f"Golay property {name} fails"

    first = int(code.octads[0])
    assert support_of(mask_of(support_of(first))) == support_of(first), "mask and support are inverse"
    five = mask_of(support_of(first)[:5])
    assert code.octad_by_five[five] == first, "five points determine their octad"
    assert code.is_cset([]) and code.is_cset(range(24)), "zero and all-ones words"
    assert not code.is_cset(support_of(first)[:5]), "no codeword has weight 5"
    print("Golay code OK")


def test_automorphisms():
    """Cycle shapes 1^M N^M of the shipped automorphisms."""
    print("\nTesting automorphisms...")
    code = build_code()
    orders = (23, 11, 7, 5, 3, 2) if os.environ.get("GKM_SLOW_TESTS") else (23, 11, 7)
    for N in orders:
        M = 24 // (N + 1)
        perm = find_shape_automorphism(N)
        assert perm.cycle_shape == ((1, M), (N, M)), f"shape for N={N}: {perm.cycle_shape}"
        assert perm.order == N, f"order for N={N}"
        assert perm.preserves(code), f"N={N} automorphism preserves the code"
        assert len(perm.fixed_points()) == M, f"{M} fixed points for N={N}"
    print("Automorphisms OK")


def test_leech_vectors():
    """Minimal vectors, membership and the generating set."""
    print("\nTesting Leech vectors...")
    counts = norm4_count()
    assert counts["total"] == 196560, "196560 minimal vectors"
    vecs = norm4_vectors()
    assert is_leech_array(vecs).all(), "every minimal vector is in the lattice"
    sample = vecs[::4999]
    assert all(norm([int(x) for x in v]) == 4 for v in sample), "minimal vectors have norm 4"
    assert all(is_leech(g) for g in generators()), "generators lie in the lattice"
    assert not is_leech([4] + [0] * 23), "a single 4 is not a Leech vector"
    print("Leech vectors OK")


def test_projections():
    """Projections onto the fixed space and its complement."""
    print("\nTesting projections...")
    for N in (23, 11):
        sigma = find_shape_automorphism(N)
        v = [int(x) for x in norm4_vectors()[0]]
        fixed, perp = project(v, sigma)
        assert norm(fixed) + norm(perp) == 4, f"projection is orthogonal for N={N}"
        family = single_position_family(N)
        assert all(norm(w) == Fraction(2 * (N - 1), N) for w in family), f"single-position norms for N={N}"

    code = build_code()
    octad = int(code.octads[0])
    value = projected_word_norm(octad, 23)
    assert 0 <= value <= 4, "a projected octad stays inside the octad norm"

    census = preimage_census(23)
    assert census["group_sizes"] == [23], f"each deep fixed part is hit 23 times: {census}"
    census = preimage_census(11)
    assert census["group_sizes"] == [11], f"each deep fixed part is hit 11 times: {census}"
    try:
        enumerate_short_dual_perp(23, Fraction(3))
        raise AssertionError("norms above 2 are outside the dual enumeration")
    except InvalidParameterError:
        pass
    print("Projections OK")


if __name__ == '__main__':
    try:
        test_golay_code()
        test_automorphisms()
        test_leech_vectors()
        test_projections()
        print("\nAll Golay and Leech tests completed successfully!")
    except AssertionError as e:
        print(f"Test failed: {e}")
        sys.exit(1)
    except Exception as e:
        print(f"Error: {e}")
        sys.exit(1)
