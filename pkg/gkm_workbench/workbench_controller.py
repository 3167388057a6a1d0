"""
Workbench controller for the GKM workbench.

This module provides the controller that runs one subcommand: it calls the
computational modules, writes the result tables and condenses everything
into a results summary whose ``success`` flag decides the exit status.
"""

import os
import time
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

from tqdm import tqdm

from .error_handling import InvalidParameterError, VerificationError, describe_error, safe_operation
from .export_utils import emit, format_rational
from .golden_tables import APPENDIX_A, APPENDIX_B
from .holes import (appendix_a_report, covering_radius_check, dual_class_reps, enumerate_holes, partition_check,
                    point_group_check, type_table, volume_audit)
from .lattice import (complement_lattice, fixed_lattice, norm_counts, residue_counts, short_vectors, theta_series,
                      verify_theta_identity)
from .logging_utils import get_logger, progress_enabled
from .multiplicity import (declared_inner, e10_bound_column, embedding, gkm_cartan_matrix, isotropic_mult_check,
                           mult_table, n23_simple_roots, rank_bound_observation, sharpness_check, table64_rows,
                           trace_consistency)
from .path_utils import get_output_dir
from .qseries import SUPPORTED_N, m_for, p_sigma, shape_for, theta_rhs

logger = get_logger()

THETA_ORDER = {2: 10, 3: 8}
SLOW_ALGEBRAS = ("AE8", "DE8", "DE10", "T433", "DE7")


def _dual_count(N: int) -> int:
    """Number of dual vectors of norm 2 + 2/N, the deep points of the fix lattice."""
    lattice = fixed_lattice(N)
    target = 2 + Fraction(2, N)
    return sum(1 for rep in dual_class_reps(N) for v in short_vectors(lattice, target, offset=rep) if v.norm == target)


class WorkbenchController:
    """Runs one subcommand and collects its verdict."""

    def __init__(self, command: str, N: Optional[int] = None, algebra: Optional[str] = None,
                 order: Optional[int] = None, max_norm: Optional[int] = None, max_height: Optional[int] = None,
                 emit_format: str = "tsv", output_dir: Optional[str] = None, jobs: int = 1, seed: int = 0,
                 samples: int = 200, compare: Optional[str] = None, slow: bool = False, use_cache: bool = True):
        """Initialize the controller.

        Args:
            command (str): Subcommand name.
            N (int): Order of the automorphism, where the command needs one.
            algebra (str): Algebra name for cartan and mult-table.
            order (int): Truncation order for q-series.
            max_norm (int): Norm cutoff for tables and short vectors.
            max_height (int): Height cutoff for multiplicity rows.
            emit_format (str): ``tsv`` or ``json``.
            output_dir (str): Where result files go.
            jobs (int): Worker threads.
            seed (int): Seed for randomized checks.
            samples (int): Sample size for randomized checks.
            compare (str): ``appendix-b`` to replay every shipped appendix table.
            slow (bool): Include long-running criteria in verify-all.
            use_cache (bool): Reuse cached hole enumerations.
        """
        if N is not None and N not in SUPPORTED_N:
            raise InvalidParameterError(f"N must be one of {SUPPORTED_N}, got {N}")
        self.command = command
        self.N = N
        self.algebra = algebra
        self.order = order
        self.max_norm = max_norm
        self.max_height = max_height
        self.emit_format = emit_format
        self.output_dir = output_dir or get_output_dir()
        self.jobs = jobs
        self.seed = seed
        self.samples = samples
        self.compare = compare
        self.slow = slow
        self.use_cache = use_cache
        self.failures: List[Dict[str, Any]] = []
        self.artifacts: List[str] = []
        self._hole_cache: Dict[int, list] = {}
        logger.info(f"Initialized workbench for {command}",
                    extra={"N": N, "algebra": algebra, "output_dir": self.output_dir, "jobs": jobs})

    # -- helpers ------------------------------------------------------------------------

    def _emit(self, rows, stem: str, columns=None, extra=None) -> None:
        self.artifacts.append(emit(rows, self.output_dir, stem, self.emit_format, columns, extra))

    def _fail(self, item: str, diff) -> None:
        self.failures.append({"item": item, "diff": diff})

    def _need_N(self, default: Optional[int] = None) -> int:
        N = self.N or default
        if N is None:
            raise InvalidParameterError(f"{self.command} needs --N")
        return N

    # -- subcommands --------------------------------------------------------------------

    def series(self) -> None:
        N = self._need_N()
        order = self.order or 10
        shape = shape_for(N)
        rows = [{"n": n, "p_sigma": p_sigma(shape, n)} for n in range(order + 1)]
        self._emit(rows, f"series-N{N}")
        theta = theta_rhs(N, "full", order)
        self._emit([{"exponent": format_rational(e), "coefficient": format_rational(c)} for e, c in theta.terms()],
                   f"theta-N{N}")

    def residues(self) -> None:
        targets = [self.N] if self.N else list(SUPPORTED_N)
        rows = []
        for N in targets:
            M = m_for(N)
            brute = residue_counts(M, N, mode="brute")["tilde"]
            closed = residue_counts(M, N)["tilde"]
            for r in sorted(closed):
                rows.append({"M": M, "N": N, "r": r, "brute": brute[r], "closed_form": closed[r],
                             "ok": brute[r] == closed[r]})
        bad = [r for r in rows if not r["ok"]]
        if bad:
            self._fail("residue counts", bad)
        self._emit(rows, "residues")

    def verify_theta(self) -> None:
        N = self._need_N()
        order = self.order or THETA_ORDER.get(N, 2)
        report = verify_theta_identity(N, truncation=order)
        if not report["ok"]:
            self._fail(f"theta identity N={N}", report["mismatches"])
        self._emit([{"N": N, "truncation": report["truncation"], "checked": report["checked"], "ok": report["ok"]}],
                   f"verify-theta-N{N}", extra={"mismatches": report["mismatches"]})

    def short_vectors(self) -> None:
        N = self._need_N()
        bound = self.max_norm or 8
        lattice = fixed_lattice(N)
        counts = norm_counts(short_vectors(lattice, bound, jobs=self.jobs))
        rows = [{"kind": "fix", "norm": format_rational(k), "count": v} for k, v in sorted(counts.items())]
        rows.append({"kind": "dual", "norm": format_rational(2 + Fraction(2, N)), "count": _dual_count(N)})
        expected_det = Fraction(N) ** m_for(N)
        if lattice.det != expected_det:
            self._fail(f"det N={N}", [{"det": str(lattice.det), "expected": str(expected_det)}])
        if min(k for k in counts if k > 0) != 4:
            self._fail(f"minimum N={N}", [{"minimum": str(min(k for k in counts if k > 0))}])
        self._emit(rows, f"short-vectors-N{N}", extra={"det": lattice.det})

    def holes(self) -> None:
        N = self._need_N()
        holes = enumerate_holes(N, jobs=self.jobs, use_cache=self.use_cache)
        audit = volume_audit(N, holes)
        if not audit["ok"]:
            self._fail(f"volume audit N={N}", audit["mismatches"])
        if N in APPENDIX_A:
            report = appendix_a_report(N, holes)
            rows = report["rows"]
            if not report["ok"]:
                self._fail(f"hole catalogue N={N}", [r for r in rows if not r["match"]])
        else:
            rows = type_table(holes, N)
        self._emit(rows, f"holes-N{N}", extra={"total": audit["total"], "expected": audit["expected"]})
        self._emit([h.to_json() for h in holes], f"hole-list-N{N}")

    def covering_radius(self) -> None:
        N = self._need_N()
        report = covering_radius_check(N, enumerate_holes(N, jobs=self.jobs, use_cache=self.use_cache))
        if not report["ok"]:
            self._fail(f"covering radius N={N}", [report])
        self._emit([{k: v for k, v in report.items() if k != "overflow"}], f"covering-radius-N{N}")

    def cartan(self) -> None:
        if self.algebra:
            declared_inner(self.algebra)
            emb = embedding(self.algebra)
            matrix = emb.cartan()
            stem = f"cartan-{self.algebra}"
        else:
            matrix = gkm_cartan_matrix(n23_simple_roots())
            stem = "cartan-N23"
        rows = [{f"c{j + 1}": format_rational(x) for j, x in enumerate(row)} for row in matrix]
        self._emit(rows, stem)

    def mult_table(self) -> None:
        if self.compare == "appendix-b":
            names = [n for n in APPENDIX_B if self.slow or n not in SLOW_ALGEBRAS]
            for name in names:
                self._mult_rows(name, gkm_bounds=False)
            return
        self._mult_rows(self.algebra or "AE3", gkm_bounds=True)

    def _mult_rows(self, name: str, gkm_bounds: bool) -> None:
        declared_inner(name)
        rows = mult_table(name, self.max_norm, self.max_height, gkm_bounds=gkm_bounds)
        bad = [r.to_dict() for r in rows if not r.ok]
        if bad:
            self._fail(f"multiplicities of {name}", bad)
        self._emit([r.to_dict() for r in rows], f"mult-{name}")

    # -- verify-all ---------------------------------------------------------------------

    def _criteria(self) -> List[Tuple[str, Callable[[], Dict[str, Any]]]]:
        criteria = [
            ("residue counts", self._crit_residues),
            ("theta identity N=2", lambda: verify_theta_identity(2, THETA_ORDER[2])),
            ("theta identity N=3", lambda: verify_theta_identity(3, THETA_ORDER[3])),
        ]
        criteria += [(f"leading structure N={N}", lambda N=N: verify_theta_identity(N)) for N in (5, 7, 11, 23)]
        criteria += [
            ("dual theta anchors", self._crit_anchors),
            ("fixed lattice structure", self._crit_fixed),
        ]
        for N in (23, 11):
            criteria += [
                (f"holes N={N}", lambda N=N: appendix_a_report(N, self._holes(N))),
                (f"volume audit N={N}", lambda N=N: volume_audit(N, self._holes(N))),
                (f"covering radius N={N}", lambda N=N: covering_radius_check(N, self._holes(N))),
                (f"partition N={N}", lambda N=N: partition_check(N, self.samples, self.seed, self._holes(N))),
            ]
        criteria.append(("point group N=11", lambda: point_group_check(11, self._holes(11))))
        if self.slow:
            criteria.append(("holes N=7", lambda: appendix_a_report(7, self._holes(7))))
        names = ["AE3", "H71", "AE4", "AE5", "AE6", "AE7"] + (list(SLOW_ALGEBRAS) if self.slow else [])
        criteria += [(f"multiplicities {name}", lambda name=name: self._crit_table(name)) for name in names]
        criteria += [
            ("rank bound columns", lambda: self._rows_report(table64_rows())),
            ("E10 bound column", lambda: self._rows_report(e10_bound_column())),
            ("rank observation", lambda: self._rows_report(rank_bound_observation())),
        ]
        criteria += [(f"trace formula N={N}", lambda N=N: trace_consistency(N, self.samples, self.seed))
                     for N in (23, 11)]
        criteria += [(f"isotropic {name}", lambda name=name: isotropic_mult_check(name))
                     for name in ("AE3", "AE4", "AE7")]
        criteria += [(f"sharpness {name}", lambda name=name: self._crit_sharp(name)) for name in ("AE3", "H71", "AE4")]
        return criteria

    def _holes(self, N: int):
        if N not in self._hole_cache:
            self._hole_cache[N] = enumerate_holes(N, jobs=self.jobs, use_cache=self.use_cache)
        return self._hole_cache[N]

    @staticmethod
    def _rows_report(rows) -> Dict[str, Any]:
        bad = [r for r in rows if not r.get("ok", True)]
        return {"rows": len(rows), "mismatches": bad, "ok": not bad}

    def _crit_residues(self) -> Dict[str, Any]:
        bad = []
        for N in SUPPORTED_N:
            M = m_for(N)
            if residue_counts(M, N, "brute")["tilde"] != residue_counts(M, N)["tilde"]:
                bad.append({"N": N})
        return {"mismatches": bad, "ok": not bad}

    def _crit_anchors(self) -> Dict[str, Any]:
        anchors = {2: (Fraction(1, 2), 240), 3: (Fraction(2, 3), 756)}
        bad = []
        for N, (exponent, expected) in anchors.items():
            series = theta_series(complement_lattice(N).dual_lattice(), None, exponent + Fraction(1, 6))
            if series.coefficient(exponent) != expected:
                bad.append({"N": N, "found": str(series.coefficient(exponent)), "expected": expected})
        return {"mismatches": bad, "ok": not bad}

    def _crit_fixed(self) -> Dict[str, Any]:
        bad = []
        for N in SUPPORTED_N:
            lattice = fixed_lattice(N)
            if lattice.det != Fraction(N) ** m_for(N) or lattice.minimum(4) != 4:
                bad.append({"N": N, "det": str(lattice.det)})
        counts = norm_counts(short_vectors(fixed_lattice(11), 8))
        if [counts.get(k, 0) for k in (4, 6, 8)] != [12, 12, 12]:
            bad.append({"N": 11, "census": {str(k): v for k, v in counts.items()}})
        if _dual_count(11) != 72:
            bad.append({"N": 11, "dual_vectors": _dual_count(11)})
        return {"mismatches": bad, "ok": not bad}

    def _crit_table(self, name: str) -> Dict[str, Any]:
        slow_host = name in SLOW_ALGEBRAS or name == "AE7"
        rows = mult_table(name, gkm_bounds=not slow_host)
        bad = [r.to_dict() for r in rows if not r.ok]
        return {"rows": len(rows), "mismatches": bad, "ok": not bad and bool(rows)}

    def _crit_sharp(self, name: str) -> Dict[str, Any]:
        expected = {"AE3": True, "H71": False, "AE4": True}[name]
        report = sharpness_check(name, self._holes(23 if name == "AE3" else 11))
        report["ok"] = report["ok"] and report["sharp"] == expected
        return report

    def verify_all(self) -> None:
        rows = []
        for name, check in tqdm(self._criteria(), desc="verify-all", disable=not progress_enabled()):
            start = time.time()
            report = safe_operation(check, f"criterion {name}")
            ok = bool(report and report.get("ok"))
            rows.append({"criterion": name, "ok": ok, "seconds": round(time.time() - start, 2)})
            if not ok:
                self._fail(name, report if report else "raised; see log")
            logger.info(f"Criterion {name}: {'pass' if ok else 'FAIL'}")
        self._emit(rows, "verify-all")

    # -- run ----------------------------------------------------------------------------

    def run(self) -> Dict[str, Any]:
        """Run the subcommand.

        Returns:
            Dict[str, Any]: Results summary.
        """
        start_time = time.time()
        handler = getattr(self, self.command.replace("-", "_"))
        try:
            handler()
            results = {
                "command": self.command,
                "artifacts": self.artifacts,
                "failures": self.failures,
                "duration_seconds": round(time.time() - start_time, 2),
                "success": not self.failures,
            }
            if self.failures:
                logger.error(f"{self.command} found {len(self.failures)} failures",
                             extra={"items": [f["item"] for f in self.failures]})
            else:
                logger.info(f"{self.command} completed successfully",
                            extra={"artifacts": len(self.artifacts), "duration_seconds": results["duration_seconds"]})
            return results
        except InvalidParameterError:
            raise
        except VerificationError as e:
            logger.error(f"Verification failed in {self.command}: {e}")
            return {"command": self.command, "success": False, "error": describe_error(e),
                    "failures": self.failures + [{"item": str(e), "diff": e.diff}],
                    "duration_seconds": round(time.time() - start_time, 2)}
        except Exception as e:
            logger.error(f"Error during {self.command}: {str(e)}")
            return {"command": self.command, "success": False, "error": describe_error(e),
                    "failures": self.failures, "duration_seconds": round(time.time() - start_time, 2)}


def run_workbench(args: Dict[str, Any]) -> Dict[str, Any]:
    """Run the workbench with the given arguments.

    Args:
        args (Dict[str, Any]): Arguments dictionary from :func:`parse_args`.

    Returns:
        Dict[str, Any]: Results summary.

    Raises:
        InvalidParameterError: for arguments that are valid syntax but unusable.
    """
    output_dir = args.get("output_dir")
    if output_dir and not os.path.isabs(output_dir):
        output_dir = os.path.abspath(output_dir)
    controller = WorkbenchController(
        command=args["command"],
        N=args.get("N"),
        algebra=args.get("algebra"),
        order=args.get("order"),
        max_norm=args.get("max_norm"),
        max_height=args.get("max_height"),
        emit_format=args.get("emit", "tsv"),
        output_dir=output_dir,
        jobs=args.get("jobs", 1),
        seed=args.get("seed", 0),
        samples=args.get("samples", 200),
        compare=args.get("compare"),
        slow=args.get("slow", False),
        use_cache=not args.get("no_cache", False),
    )
    return controller.run()
