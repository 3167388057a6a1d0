#!/usr/bin/env python3
"""Test script for the fixed-point lattices, short vectors and theta identities."""

import sys
from fractions import Fraction
from pathlib import Path

# Add project root to Python path
project_root = str(Path(__file__).resolve().parent.parent)
sys.path.insert(0, project_root)

from gkm_workbench.error_handling import InvalidParameterError, NotPositiveDefiniteError
from gkm_workbench.lattice import (GramLattice, class_key, complement_lattice, coset_theta_series,
                                   cross_check_fixed_lattice, fixed_lattice, norm_counts, residue_class_reps,
                                   residue_counts, short_vectors, theta_series, verify_theta_identity)
from gkm_workbench.qseries import SUPPORTED_N, m_for


def test_fixed_lattices():
    """Gram matrices, determinants and minimum norms."""
    print("\nTesting fixed lattices...")
    n23 = fixed_lattice(23)
    assert n23.gram == ((4, 1), (1, 6)), f"unexpected N=23 Gram matrix {n23.gram}"
    for N in (23, 11, 7, 5):
        lattice = fixed_lattice(N)
        assert lattice.rank == 2 * m_for(N), f"rank of the N={N} lattice"
        assert lattice.det == N ** m_for(N), f"det of the N={N} lattice"
        assert lattice.is_even(), f"N={N} lattice is even"
        assert lattice.minimum(4) == 4, f"N={N} lattice has no roots"

    inverse = n23.dual_gram
    assert inverse == ((Fraction(6, 23), Fraction(-1, 23)), (Fraction(-1, 23), Fraction(4, 23))), \
        "dual Gram matrix is the exact inverse"
    print("Fixed lattices OK")


def test_short_vectors():
    """Fincke-Pohst counts on small lattices and cosets."""
    print("\nTesting short vectors...")
    counts = norm_counts(short_vectors(fixed_lattice(23), 6))
    assert counts == {0: 1, 4: 2, 6: 2}, f"N=23 counts up to norm 6: {counts}"

    strict = norm_counts(short_vectors(fixed_lattice(23), 6, strict=True))
    assert 6 not in strict, "strict bound excludes the boundary"

    census = norm_counts(short_vectors(fixed_lattice(11), 8, jobs=2))
    assert [census.get(k, 0) for k in (4, 6, 8)] == [12, 12, 12], f"N=11 census {census}"

    coset = short_vectors(fixed_lattice(23), 3, offset=(Fraction(9, 23), Fraction(10, 23)))
    assert [v.norm for v in coset] == [Fraction(48, 23)] * 3, "the dual coset touches three lattice points"

    try:
        short_vectors(GramLattice.from_rows([[1, 2], [2, 1]]), 4)
        raise AssertionError("an indefinite form must be rejected")
    except NotPositiveDefiniteError:
        pass
    print("Short vectors OK")


def test_residue_counts():
    """Closed forms agree with brute force for every supported N."""
    print("\nTesting residue counts...")
    for N in SUPPORTED_N:
        M = m_for(N)
        brute = residue_counts(M, N, mode="brute")
        closed = residue_counts(M, N)
        assert brute == closed, f"residue counts for N={N}"
        assert sum(closed["tilde"].values()) == N ** M, "counts sum to N^M"
        assert closed["rho"][0] == closed["tilde"][0] - 1, "rho drops the zero vector"

    assert residue_counts(8, 2)["tilde"] == {0: 136, 1: 120}, "E8 form over F_2"
    assert residue_counts(2, 11)["tilde"][0] == 1, "x^2 + y^2 = 0 has only the trivial solution mod 11"
    assert residue_counts(1, 23)["tilde"][2] == 2, "2 is a square mod 23"
    try:
        residue_counts(2, 4)
        raise AssertionError("composite N must be rejected")
    except InvalidParameterError:
        pass
    print("Residue counts OK")


def test_discriminant_classes():
    """L*/L has det many classes, grouped by half-norm."""
    print("\nTesting discriminant classes...")
    classes = residue_class_reps(fixed_lattice(23))
    assert sum(len(v) for v in classes.values()) == 23, "23 classes for N=23"
    assert len(classes[Fraction(1, 23)]) == 2, "two classes carry dual roots"
    assert Fraction(0) in classes, "the zero class is keyed by half-norm 0"
    assert all(isinstance(k, Fraction) for k in classes), "half-norm keys are exact"
    zero = [c for c in classes[Fraction(0)] if not any(c.representative)]
    assert len(zero) == 1, "exactly one zero class"

    lattice = fixed_lattice(23)
    origin = (0, 0)
    assert isinstance(lattice.inner(origin, (1, 0)), Fraction), "inner product of the zero vector is exact"
    assert lattice.norm(origin) == 0 and isinstance(lattice.norm(origin), Fraction), "norm of the zero vector"
    assert lattice.norm(origin) / 2 == 0, "half-norm of the zero vector"

    classes = residue_class_reps(complement_lattice(3))
    assert sum(len(v) for v in classes.values()) == 729, "3^6 classes for N=3"
    assert all(isinstance(k, Fraction) for k in classes), "half-norm keys are exact for N=3"
    print("Discriminant classes OK")


def test_theta_identities():
    """Eta-quotient identities and the dual theta anchors."""
    print("\nTesting theta identities...")
    for N, order in ((2, 2), (3, 2), (11, 2), (23, 2)):
        report = verify_theta_identity(N, truncation=order)
        assert report["ok"], f"theta identity for N={N}: {report['mismatches'][:3]}"
        assert report["checked"] > 0, f"nothing compared for N={N}"

    report = verify_theta_identity(3, truncation=1)
    assert report["ok"], f"coset theta series for N=3: {report['mismatches'][:3]}"
    assert report["checked"] == 729 + 1, f"every class and the sum compared: {report['checked']}"

    L = complement_lattice(3)
    series = coset_theta_series(L, truncation=1)
    assert len(series) == 729, f"one series per class, got {len(series)}"
    zero = series[class_key((0,) * L.rank)]
    assert zero[0] == 1, "the zero class holds the origin once"
    assert all(s[0] == 0 for k, s in series.items() if any(k)), "no other class holds the origin"

    dual2 = theta_series(complement_lattice(2).dual_lattice(), None, Fraction(2, 3))
    assert dual2[Fraction(1, 2)] == 240, "240 at q^(1/2) for N=2"
    dual3 = theta_series(complement_lattice(3).dual_lattice(), None, Fraction(5, 6))
    assert dual3[Fraction(2, 3)] == 756, "756 at q^(2/3) for N=3"
    print("Theta identities OK")


def test_cross_check():
    """The shipped bases agree with the sublattices fixed by the found automorphisms."""
    print("\nTesting the sigma-derived cross-check...")
    for N in (23, 11):
        report = cross_check_fixed_lattice(N)
        assert report["ok"], f"cross-check for N={N}: {report}"
    print("Cross-check OK")


if __name__ == '__main__':
    try:
        test_fixed_lattices()
        test_short_vectors()
        test_residue_counts()
        test_discriminant_classes()
        test_theta_identities()
        test_cross_check()
        print("\nAll lattice tests completed successfully!")
    except AssertionError as e:
        print(f"Test failed: {e}")
        sys.exit(1)
    except Exception as e:
        print(f"Error: {e}")
        sys.exit(1)
