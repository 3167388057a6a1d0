#!/usr/bin/env python3
"""Test script for root multiplicities, the Peterson recursion and the bound tables."""

import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

# Add project root to Python path
project_root = str(Path(__file__).resolve().parent.parent)
sys.path.insert(0, project_root)

# Keep the enumeration cache out of the working tree
os.environ.setdefault("GKM_CACHE_DIR", tempfile.mkdtemp(prefix="gkm-cache-"))

from gkm_workbench.error_handling import InvalidParameterError
from gkm_workbench.multiplicity import (PetersonEngine, declared_inner, e10_bound_column, embed_and_bound, embedding,
                                        fix_root, gkm_cartan_matrix, gkm_mult, gkm_mult_via_trace,
                                        imaginary_simple_mult, isotropic_mult_check, mult_table, n23_simple_roots,
                                        peterson_mults, rank_bound_observation, sharpness_check, table64_rows,
                                        trace_consistency, weyl_vector)
from gkm_workbench.qseries import shape_for

N23_CARTAN = [
    [2, -2, 0, 0, 0],
    [-2, 2, -1, 0, 0],
    [0, -1, 2, -23, 0],
    [0, 0, -23, 46, -46],
    [0, 0, 0, -46, 46],
]


def test_n23_simple_roots():
    """The five simple roots of the N=23 fundamental region."""
    print("\nTesting the N=23 simple roots...")
    roots = n23_simple_roots()
    assert gkm_cartan_matrix(roots) == N23_CARTAN, f"unexpected matrix {gkm_cartan_matrix(roots)}"
    rho = weyl_vector(23)
    assert [rho.inner(r) for r in roots] == [-1, -1, -1, -23, -23], "rho pairs to minus the level"
    for r in roots[3:]:
        assert r.norm == 46, "dual roots have norm 2N"
        assert r.in_NL_star(), "dual roots lie in N L*"
        assert gkm_mult(r) == 1, "dual roots are real"
        assert gkm_mult_via_trace(r) == 1, "trace formula agrees on dual roots"
    for r in roots[:3]:
        assert gkm_mult(r) == 1 and gkm_mult_via_trace(r) == 1, "fix roots are real"
    print("N=23 simple roots OK")


def test_closed_forms():
    """Multiplicities from the partition function."""
    print("\nTesting closed forms...")
    isotropic = fix_root((1, 0), 23) + fix_root((0, 1), 23)
    assert isotropic.norm == 0, "lambda_1 + lambda_2 is isotropic"
    assert gkm_mult(isotropic) == 1, "p_sigma(1) for N=23"
    assert gkm_mult(isotropic.scale(23)) == 2, "multiples in N L* pick up the second term"
    assert gkm_mult(isotropic.scale(0)) == 0, "zero is not a root"
    assert gkm_mult(isotropic.scale(Fraction(1, 2))) == 0, "vectors outside L are not roots"
    assert imaginary_simple_mult(1, shape_for(23)) == 1, "rho itself"
    assert imaginary_simple_mult(23, shape_for(23)) == 2, "23 rho picks up the 23-cycle"
    try:
        imaginary_simple_mult(0, shape_for(23))
        raise AssertionError("n = 0 must be rejected")
    except InvalidParameterError:
        pass
    for N in (23, 11):
        report = trace_consistency(N, count=30, seed=3)
        assert report["ok"], f"trace formula mismatches for N={N}: {report['mismatches'][:3]}"
    print("Closed forms OK")


def test_peterson():
    """Peterson recursion on rank-2 algebras and shipped tables."""
    print("\nTesting the Peterson recursion...")
    assert PetersonEngine([[2, -2], [-2, 2]], "A1").mults_for([(1, 1)]) == [1], "delta of affine A1"
    hyperbolic = PetersonEngine([[2, -3], [-3, 2]], "H3")
    assert hyperbolic.mults_for([(1, 1), (1, 0), (0, 2)]) == [1, 1, 0], "imaginary, real and non-root"
    engine = PetersonEngine(declared_inner("AE3"), "AE3")
    assert engine.mults_for([(3, 4, 2), (5, 5, 2)]) == [5, 15], "AE3 multiplicities"
    table = {r.coefficients: r.mult for r in peterson_mults(declared_inner("AE3"), (2, 2, 1), "AE3")}
    assert table[(2, 2, 1)] == 2 and table[(1, 1, 0)] == 1, f"dominant AE3 rows {table}"

    rows = mult_table("AE3", max_norm=20)
    assert rows and all(r.ok for r in rows), f"AE3 rows: {[r.to_dict() for r in rows if not r.ok]}"
    assert all(r.bound == r.mult for r in rows), "the AE3 bound is attained below norm -20"
    for name in ("H71", "AE4"):
        rows = mult_table(name, max_norm=16)
        assert rows and all(r.ok for r in rows), f"{name} rows: {[r.to_dict() for r in rows if not r.ok]}"
    try:
        declared_inner("XY9")
        raise AssertionError("unknown algebras must be rejected")
    except InvalidParameterError:
        pass
    print("Peterson recursion OK")


def test_embeddings():
    """Explicit realizations and the lifted bounds."""
    print("\nTesting embeddings...")
    emb = embedding("AE3")
    assert emb.N == 23 and emb.rank == 3, "AE3 lives in the N=23 algebra"
    assert emb.cartan() == [list(row) for row in declared_inner("AE3")], "explicit roots give the AE3 matrix"
    row = embed_and_bound(emb, (23, 23, 0), mult=0)
    assert row.in_NL_star and row.bound == 2, "23(alpha_1 + alpha_2) is in N L*"
    row = embed_and_bound(emb, (1, 1, 0))
    assert not row.in_NL_star and row.mult == 1 and row.bound == 1, "alpha_1 + alpha_2"
    print("Embeddings OK")


def test_bound_tables():
    """Rank bounds, E10 columns and the rank observation."""
    print("\nTesting bound tables...")
    for producer in (table64_rows, e10_bound_column, rank_bound_observation):
        rows = producer()
        assert rows and all(r["ok"] for r in rows), f"{producer.__name__}: {[r for r in rows if not r['ok']]}"
    for name in ("AE3", "AE4"):
        report = isotropic_mult_check(name)
        assert report["ok"], f"isotropic multiplicities of {name}: {report}"
    print("Bound tables OK")


def test_sharpness():
    """The closed-form bound is sharp for AE3."""
    print("\nTesting sharpness...")
    report = sharpness_check("AE3")
    assert report["sharp"] and report["ok"], f"AE3 sharpness: {report}"
    if os.environ.get("GKM_SLOW_TESTS"):
        assert not sharpness_check("H71")["sharp"], "H71 is not sharp"
        assert sharpness_check("AE4")["sharp"], "AE4 is sharp"
    print("Sharpness OK")


if __name__ == '__main__':
    try:
        test_n23_simple_roots()
        test_closed_forms()
        test_peterson()
        test_embeddings()
        test_bound_tables()
        test_sharpness()
        print("\nAll multiplicity tests completed successfully!")
    except AssertionError as e:
        print(f"Test failed: {e}")
        sys.exit(1)
    except Exception as e:
        print(f"Error: {e}")
        sys.exit(1)
