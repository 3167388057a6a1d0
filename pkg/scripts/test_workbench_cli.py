#!/usr/bin/env python3
"""Test script for the command-line surface and the workbench controller."""

import json
import os
import sys
import tempfile
from pathlib import Path

# Add project root to Python path
project_root = str(Path(__file__).resolve().parent.parent)
sys.path.insert(0, project_root)

WORK_DIR = tempfile.mkdtemp(prefix="gkm-cli-")
os.environ.setdefault("GKM_CACHE_DIR", os.path.join(WORK_DIR, "cache"))
os.environ["LOG_DIR"] = os.path.join(WORK_DIR, "logs")

import pandas as pd

from gkm_workbench.__main__ import main
from gkm_workbench.parse_args import parse_args
from gkm_workbench.workbench_controller import run_workbench


def test_parse_args():
    """Defaults and short flags."""
    print("\nTesting argument parsing...")
    args = parse_args(["holes", "-n", "23", "-j", "4"])
    assert args["command"] == "holes" and args["N"] == 23 and args["jobs"] == 4, "short flags"
    assert args["emit"] == "tsv" and args["seed"] == 0 and not args["slow"], "defaults"
    args = parse_args(["mult-table", "--algebra", "AE3", "--max-norm", "10", "--emit", "json"])
    assert args["algebra"] == "AE3" and args["max_norm"] == 10 and args["emit"] == "json", "long flags"
    try:
        parse_args(["frobnicate"])
        raise AssertionError("an unknown command must be rejected")
    except SystemExit as e:
        assert e.code == 2, "usage errors exit with status 2"
    print("Argument parsing OK")


def test_controller_commands():
    """Quick subcommands write their tables and succeed."""
    print("\nTesting controller commands...")
    out = os.path.join(WORK_DIR, "out")
    for argv in (["residues"], ["series", "-n", "23", "-o", "6"], ["cartan"], ["verify-theta", "-n", "23"],
                 ["short-vectors", "-n", "23"], ["mult-table", "-a", "AE3", "-mn", "10"]):
        args = parse_args(argv + ["-od", out])
        results = run_workbench(args)
        assert results["success"], f"{argv[0]} failed: {results.get('failures')}"
        assert results["artifacts"], f"{argv[0]} wrote nothing"

    residues = pd.read_csv(os.path.join(out, "residues.tsv"), sep="\t")
    assert residues["ok"].all(), "every residue row agrees"
    cartan = pd.read_csv(os.path.join(out, "cartan-N23.tsv"), sep="\t")
    assert cartan.shape == (5, 5), "five simple roots for N=23"
    assert list(cartan.iloc[3]) == [0, 0, -23, 46, -46], "row of the long dual root"
    vectors = pd.read_csv(os.path.join(out, "short-vectors-N23.tsv"), sep="\t")
    assert "dual" in set(vectors["kind"]), "dual vectors are counted"
    print("Controller commands OK")


def test_json_output():
    """JSON emission wraps the rows with the extra payload."""
    print("\nTesting JSON output...")
    out = os.path.join(WORK_DIR, "json")
    results = run_workbench(parse_args(["verify-theta", "-n", "23", "-e", "json", "-od", out]))
    assert results["success"], "verify-theta succeeds"
    with open(os.path.join(out, "verify-theta-N23.json")) as handle:
        payload = json.load(handle)
    assert payload["rows"][0]["ok"] is True and payload["mismatches"] == [], "JSON payload"
    print("JSON output OK")


def test_exit_codes():
    """main() maps outcomes to exit statuses."""
    print("\nTesting exit codes...")
    out = os.path.join(WORK_DIR, "exit")
    assert main(["residues", "-od", out]) == 0, "success exits 0"
    assert main(["holes", "-n", "13", "-od", out]) == 2, "unsupported N exits 2"
    assert main(["short-vectors", "-od", out]) == 2, "a missing N exits 2"
    assert main(["cartan", "-a", "XY9", "-od", out]) == 2, "unknown algebra exits 2"
    print("Exit codes OK")


if __name__ == '__main__':
    try:
        test_parse_args()
        test_controller_commands()
        test_json_output()
        test_exit_codes()
        print("\nAll CLI tests completed successfully!")
    except AssertionError as e:
        print(f"Test failed: {e}")
        sys.exit(1)
    except Exception as e:
        print(f"Error: {e}")
        sys.exit(1)
