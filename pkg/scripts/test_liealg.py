#!/usr/bin/env python3
"""Test script for the Dynkin diagram catalog and classification."""

import sys
from fractions import Fraction
from pathlib import Path
from types import SimpleNamespace

# Add project root to Python path
project_root = str(Path(__file__).resolve().parent.parent)
sys.path.insert(0, project_root)

from gkm_workbench.error_handling import InadmissibleDistanceError, UnknownComponentError
from gkm_workbench.lattice import fixed_lattice
from gkm_workbench.liealg import (CartanData, build_diagram, catalog_entry, catalog_lookup, catalog_realization,
                                  classify, diagram_from_points, eigen_signature, format_label, parse_label,
                                  recognize_component)


def test_catalog():
    """rho^2, h-dual and determinants of catalog types."""
    print("\nTesting the catalog...")
    assert catalog_entry("a3").rho2 == 5, "rho^2 of a3"
    assert catalog_entry("a3").det == 4, "det of a3"
    assert catalog_entry("e8").rho2 == 620, "rho^2 of e8"
    assert catalog_entry("D4").hdual == 6, "h-dual of affine D4"
    assert catalog_entry("A1").hdual == 2, "h-dual of affine A1"
    assert catalog_lookup("N*a1", N=23) == (Fraction(23, 2), Fraction(2, 23)), "long a1 scales by N"
    assert catalog_lookup("a2") == (Fraction(2), Fraction(3)), "short a2"
    try:
        catalog_entry("q7")
        raise AssertionError("unknown family must be rejected")
    except UnknownComponentError:
        pass
    print("Catalog OK")


def test_classification():
    """Finite, affine and hyperbolic matrices."""
    print("\nTesting classification...")
    assert classify(CartanData.from_rows([[2, -1], [-1, 2]])) == "finite", "a2 is finite"
    assert classify(CartanData.from_rows([[2, -2], [-2, 2]])) == "affine", "A1 is affine"
    assert classify(CartanData.from_rows([[2, -3], [-3, 2]])) == "hyperbolic", "rank 2 with det < 0"
    assert classify(CartanData.from_rows([[2, 0], [0, 2]])) == "finite", "a1^2 is finite"
    mixed = CartanData.from_rows([[2, -2, 0], [-2, 2, 0], [0, 0, 2]])
    assert classify(mixed) == "mixed", "A1 plus a1 mixes finite and affine"
    assert eigen_signature(CartanData.from_rows([[2, -3], [-3, 2]])) == (1, 1, 0), "Lorentzian signature"
    print("Classification OK")


def test_recognition_and_labels():
    """Component recognition and the label format."""
    print("\nTesting recognition and labels...")
    for label in ("a2", "d4", "N*a1", "A1"):
        assert recognize_component(catalog_realization(label, 23), 23) == label, f"recognize {label}"
    assert format_label(["N*a1", "a1", "a1"]) == "a1^2 N*a1", "short before long, repeats as powers"
    assert format_label(["a1", "a3"]) == "a3 a1", "rank descending within a family"
    assert parse_label("a1^2 N*a1") == ["a1", "a1", "N*a1"], "parse is the inverse of format"
    print("Recognition and labels OK")


def test_diagram_from_points():
    """Root inner products of fix points of the N=23 lattice."""
    print("\nTesting diagrams from points...")
    lattice = fixed_lattice(23)
    origin = SimpleNamespace(kind="fix", coeffs=(0, 0))
    lam1 = SimpleNamespace(kind="fix", coeffs=(1, 0))
    lam2 = SimpleNamespace(kind="fix", coeffs=(0, 1))

    data = diagram_from_points([origin, lam2], 23, lattice)
    assert data.inner == ((2, -1), (-1, 2)), "distance^2 6 gives a single bond"
    assert build_diagram(data, 23).label == "a2", "two fix points at distance^2 6 span a2"

    data = diagram_from_points([lam1, lam2], 23, lattice)
    assert build_diagram(data, 23).label == "A1", "distance^2 8 gives the affine A1"

    far = SimpleNamespace(kind="fix", coeffs=(2, 0))
    try:
        diagram_from_points([origin, far], 23, lattice)
        raise AssertionError("distance^2 16 is not admissible")
    except InadmissibleDistanceError:
        pass
    print("Diagrams from points OK")


if __name__ == '__main__':
    try:
        test_catalog()
        test_classification()
        test_recognition_and_labels()
        test_diagram_from_points()
        print("\nAll Lie algebra tests completed successfully!")
    except AssertionError as e:
        print(f"Test failed: {e}")
        sys.exit(1)
    except Exception as e:
        print(f"Error: {e}")
        sys.exit(1)
