#!/usr/bin/env python3
"""Test script for the generalized hole enumeration and its audits."""

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

from gkm_workbench.error_handling import DegenerateCentreError, WindowTooSmallError
from gkm_workbench.holes import (DUAL, FIX, admissible_distances, appendix_a_report, build_R, circumcentre,
                                 covering_radius_check, dual_class_reps, enumerate_holes, generalized_distance2,
                                 partition_check, point_group_check, type_table, volume_audit)
from gkm_workbench.lattice import fixed_lattice

N23_RADII = {"A1 N*A1": Fraction(2), "a2 N*a1": Fraction(52, 27), "a1^2 N*a1": Fraction(48, 25)}


def test_point_set():
    """Fix and dual points and the admissible distances."""
    print("\nTesting the point set...")
    reps = dual_class_reps(23)
    assert reps == ((Fraction(9, 23), Fraction(10, 23)), (Fraction(14, 23), Fraction(13, 23))), \
        f"dual class representatives {reps}"
    points = build_R(23, (0, 1))
    assert [p.kind for p in points] == [FIX, DUAL, DUAL], "one fix and two dual points in the unit box"
    assert points[1].offset == 2 - Fraction(2, 23), "dual points carry the extra distance"

    allowed = admissible_distances(23)
    assert allowed[(FIX, FIX)] == {4 * 529, 6 * 529, 8 * 529}, "fix-fix distances"
    assert allowed[(FIX, DUAL)] == {2 * 529 + 46}, "fix-dual distance for N > 3"
    assert 4 * 4 + 2 * 2 in admissible_distances(2)[(FIX, DUAL)], "the N=2 extra fix-dual distance"
    try:
        circumcentre(points[:2], 23)
        raise AssertionError("two points cannot fix a centre in rank 2")
    except DegenerateCentreError:
        pass
    print("Point set OK")


def test_n23_holes():
    """The three hole types of N=23, their radii and volumes."""
    print("\nTesting N=23 holes...")
    holes = enumerate_holes(23, use_cache=False)
    assert len(holes) == 5, f"five holes per cell, found {len(holes)}"
    labels = sorted(h.label for h in holes)
    assert labels == sorted(["A1 N*A1", "a2 N*a1", "a2 N*a1", "a1^2 N*a1", "a1^2 N*a1"]), labels

    lattice = fixed_lattice(23)
    for hole in holes:
        assert hole.radius2 == N23_RADII[hole.label], f"radius of {hole.label}"
        assert all(0 <= c < 1 for c in hole.centre), "centres are canonical"
        assert hole.fix_count >= 2, "at least M + 1 fix vertices"
        assert all(generalized_distance2(lattice, v, hole.centre) == hole.radius2 for v in hole.vertices), \
            "every vertex lies on the sphere"
        if not hole.is_affine:
            assert circumcentre(hole.vertices, 23) == (hole.centre, hole.radius2), "circumcentre agrees"

    report = appendix_a_report(23, holes)
    assert report["ok"], f"hole catalogue mismatch: {report['rows']}"
    audit = volume_audit(23, holes)
    assert audit["ok"] and audit["total"] == 23, f"volumes add up to N^M: {audit['mismatches']}"
    units = {row["label"]: row["unit"] for row in type_table(holes, 23)}
    assert units == {"A1 N*A1": 8, "a2 N*a1": 9, "a1^2 N*a1": 10}, f"unit volumes {units}"

    threaded = enumerate_holes(23, jobs=2, use_cache=False)
    assert [h.centre for h in threaded] == [h.centre for h in holes], "the threaded float filter finds the same centres"
    assert volume_audit(23, threaded)["total"] == 23, "threaded search covers the cell"
    print("N=23 holes OK")


def test_cache_and_window():
    """Cached enumerations round-trip and a small window is refused."""
    print("\nTesting cache and window...")
    fresh = enumerate_holes(23, use_cache=True)
    cached = enumerate_holes(23, use_cache=True)
    assert [h.to_json() for h in fresh] == [h.to_json() for h in cached], "cache reproduces the holes"
    try:
        enumerate_holes(23, window=(0, 1), use_cache=False)
        raise AssertionError("a window without margin must be refused")
    except WindowTooSmallError:
        pass
    print("Cache and window OK")


def test_covering_and_partition():
    """Covering radius and the partition of space into holes."""
    print("\nTesting covering radius and partition...")
    holes = enumerate_holes(23)
    covering = covering_radius_check(23, holes)
    assert covering["ok"], f"covering radius check: {covering}"
    assert covering["max_distance2"] == 2 + Fraction(2, 23), "deep points are the dual points"
    partition = partition_check(23, samples=60, seed=1, holes=holes)
    assert partition["ok"], f"partition failures: {partition['failures'][:3]}"
    print("Covering radius and partition OK")


def test_n11_holes():
    """N=11 catalogue and the explicit point-group maps."""
    print("\nTesting N=11 holes...")
    holes = enumerate_holes(11, jobs=2)
    report = appendix_a_report(11, holes)
    assert report["ok"], f"hole catalogue mismatch: {[r for r in report['rows'] if not r['match']]}"
    assert sum(r["count"] for r in report["rows"]) == 115, "115 holes per cell"
    audit = volume_audit(11, holes)
    assert audit["ok"] and audit["total"] == 121, "volumes add up to 11^2"
    group = point_group_check(11, holes)
    assert group["ok"], f"point group problems: {group['problems']}"
    print("N=11 holes OK")


if __name__ == '__main__':
    try:
        test_point_set()
        test_n23_holes()
        test_cache_and_window()
        test_covering_and_partition()
        if os.environ.get("GKM_SLOW_TESTS"):
            test_n11_holes()
        print("\nAll hole tests completed successfully!")
    except AssertionError as e:
        print(f"Test failed: {e}")
        sys.exit(1)
    except Exception as e:
        print(f"Error: {e}")
        sys.exit(1)
