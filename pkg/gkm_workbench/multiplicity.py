"""
Root multiplicities of the fixed-point algebras and of hyperbolic subalgebras.

Roots of the fixed-point algebra live in L = (fixed lattice) + II_1,1 and
are written (lambda, m, n) with norm lambda^2 - 2mn; lambda is given by its
coefficients over the fixed-lattice basis. Multiplicities come in closed
form from the generalized partition function. Hyperbolic Kac-Moody
subalgebras realized by real simple roots are evaluated with the Peterson
recursion, and the closed forms bound their multiplicities from above.
"""

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from sympy import Matrix
from tqdm import tqdm

from .error_handling import EmbeddingError, InvalidParameterError, PetersonError, VerificationError
from .golden_tables import (ALGEBRA_EDGES, APPENDIX_B, E10_COLUMNS, EXPLICIT_POINTS, HOST_N, TABLE_64,
                            TABLE_64_COLUMNS, algebra_table)
from .lattice import GramLattice, exact_solve, fixed_lattice, short_vectors
from .liealg import CartanData, classify, catalog_entry
from .logging_utils import get_logger, progress_enabled
from .qseries import colored_partitions, global_bound, m_for, p_sigma, partition_series, shape_for, theta_rhs

logger = get_logger()

ACTIVE, DOMINANT, REAL, NONROOT = 0, 1, 2, 3


# -- Lorentzian roots -------------------------------------------------------------------


@dataclass(frozen=True)
class LorentzRoot:
    """A vector (lambda, m, n) of the Lorentzian lattice for a given N."""
    lam: Tuple[Fraction, ...]
    m: Fraction
    n: Fraction
    N: int

    @property
    def lattice(self) -> GramLattice:
        return fixed_lattice(self.N)

    def inner(self, other: "LorentzRoot") -> Fraction:
        return self.lattice.inner(self.lam, other.lam) - self.m * other.n - other.m * self.n

    @property
    def norm(self) -> Fraction:
        return self.inner(self)

    @property
    def height(self) -> Fraction:
        """-(rho, r) for the Weyl vector rho = (0, 0, 1)."""
        return self.m

    @property
    def position(self) -> Tuple[Fraction, ...]:
        """The point of the fixed-lattice space a real simple root sits at."""
        return tuple(x / self.m for x in self.lam)

    def __add__(self, other: "LorentzRoot") -> "LorentzRoot":
        return LorentzRoot(tuple(a + b for a, b in zip(self.lam, other.lam)), self.m + other.m,
                           self.n + other.n, self.N)

    def scale(self, k) -> "LorentzRoot":
        k = Fraction(k)
        return LorentzRoot(tuple(k * a for a in self.lam), k * self.m, k * self.n, self.N)

    def in_lattice(self) -> bool:
        return all(x.denominator == 1 for x in self.lam) and self.m.denominator == 1 and self.n.denominator == 1

    def in_dual(self) -> bool:
        G = self.lattice.gram
        return (all(sum((G[i][j] * self.lam[j] for j in range(len(self.lam))), Fraction(0)).denominator == 1
                    for i in range(len(self.lam)))
                and self.m.denominator == 1 and self.n.denominator == 1)

    def in_NL_star(self) -> bool:
        """r / N lies in the dual lattice: G lambda / N integral and N divides m and n."""
        return self.in_lattice() and self.scale(Fraction(1, self.N)).in_dual()

    def to_json(self) -> dict:
        return {"lambda": [str(x) for x in self.lam], "m": str(self.m), "n": str(self.n), "N": self.N}


def _fractions(values) -> Tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


def fix_root(coeffs: Sequence, N: int) -> LorentzRoot:
    """Norm-2 real simple root (lambda, 1, lambda^2/2 - 1) of a lattice point."""
    lam = _fractions(coeffs)
    return LorentzRoot(lam, Fraction(1), fixed_lattice(N).norm(lam) / 2 - 1, N)


def dual_root(coeffs: Sequence, N: int) -> LorentzRoot:
    """Norm-2N real simple root (N mu, N, N mu^2/2 - 1) of a dual point mu."""
    mu = _fractions(coeffs)
    return LorentzRoot(tuple(N * x for x in mu), Fraction(N), N * fixed_lattice(N).norm(mu) / 2 - 1, N)


def weyl_vector(N: int) -> LorentzRoot:
    return LorentzRoot(tuple(Fraction(0) for _ in range(fixed_lattice(N).rank)), Fraction(0), Fraction(1), N)


def gkm_cartan_entries(a: LorentzRoot, b: LorentzRoot) -> Fraction:
    """Inner product of two simple roots of the fixed-point algebra."""
    if a.N != b.N:
        raise InvalidParameterError("roots belong to different lattices")
    return a.inner(b)


def n23_simple_roots() -> List[LorentzRoot]:
    """lambda_1, lambda_2, 0 and the two dual points of the N=23 fundamental region."""
    lattice = fixed_lattice(23)
    targets = [Fraction(2 + Fraction(2, 23)), Fraction(4 + Fraction(2, 23))]
    from .holes import dual_class_reps
    duals = {}
    for rep in dual_class_reps(23):
        duals.setdefault(lattice.norm(rep), rep)
    mu1, mu2 = duals[targets[0]], duals[targets[1]]
    return [fix_root((1, 0), 23), fix_root((0, 1), 23), fix_root((0, 0), 23), dual_root(mu2, 23), dual_root(mu1, 23)]


def gkm_cartan_matrix(roots: Sequence[LorentzRoot]) -> List[List[Fraction]]:
    return [[gkm_cartan_entries(a, b) for b in roots] for a in roots]


# -- closed forms -----------------------------------------------------------------------


def gkm_mult(r: LorentzRoot) -> int:
    """Multiplicity of r in the fixed-point algebra.

    p_sigma(1 - r^2/2), plus p_sigma(1 - r^2/2N) when r lies in N L*, and 0
    for r outside L or r = 0.
    """
    if not r.in_lattice() or (r.m == 0 and r.n == 0 and not any(r.lam)):
        return 0
    shape = shape_for(r.N)
    norm = r.norm
    total = _p_at(shape, 1 - norm / 2)
    if r.in_NL_star():
        total += _p_at(shape, 1 - norm / (2 * r.N))
    return total


def _p_at(shape, exponent: Fraction) -> int:
    if exponent.denominator != 1:
        raise VerificationError("non-integral partition argument", [{"exponent": str(exponent)}])
    return p_sigma(shape, int(exponent))


def _truncation(exponent: Fraction) -> int:
    """Round the truncation up to a multiple of four so the eta-quotient cache is shared."""
    return 4 * (math.floor(exponent) // 4 + 1)


def gkm_mult_via_trace(r: LorentzRoot) -> int:
    """Multiplicity of r from the twisted trace terms.

    mult = Tr(r) - Tr(r/N)/N + dim(r/N)/N where Tr(x) = p_sigma(1 - x^2/2) on L
    and dim(s) is the coefficient of q^(1 - s^2/2) in (q/eta^24) times the
    theta series of the complement coset glued to s. The last two terms only
    apply when r lies in N L*.

    Raises:
        VerificationError: if the terms do not combine to an integer.
    """
    if not r.in_lattice() or (r.m == 0 and r.n == 0 and not any(r.lam)):
        return 0
    shape = shape_for(r.N)
    total = Fraction(_p_at(shape, 1 - r.norm / 2))
    if r.in_NL_star():
        N = r.N
        s = r.scale(Fraction(1, N))
        if s.in_lattice():
            total -= Fraction(_p_at(shape, 1 - s.norm / 2), N)
        exponent = 1 - s.norm / 2
        T = _truncation(exponent)
        mu = s.lam
        if all(x.denominator == 1 for x in mu):
            theta = theta_rhs(N, "full", T)
        else:
            residue = (N * s.lattice.norm(mu) / 2) % N
            if residue.denominator != 1:
                raise VerificationError("dual residue is not integral", [{"residue": str(residue)}])
            theta = theta_rhs(N, int(residue), T)
        dim = (partition_series(((1, 24),), T) * theta).coefficient(exponent)
        total += dim / N
    if total.denominator != 1:
        raise VerificationError("trace terms do not combine to an integer", [{"root": r.to_json(), "value": str(total)}])
    return int(total)


def imaginary_simple_mult(n: int, shape) -> int:
    """Multiplicity of the imaginary simple roots n*rho: the sum of b_k over a_k dividing n."""
    if n < 1:
        raise InvalidParameterError("imaginary simple roots have n >= 1")
    return sum(b for a, b in shape if n % a == 0)


def sample_roots(N: int, count: int = 200, seed: int = 0) -> List[LorentzRoot]:
    """Deterministic mix of roots in N L*, in L only and in L* only, with norm at most 2."""
    lattice = fixed_lattice(N)
    n = lattice.rank
    dual = Matrix([[x for x in row] for row in lattice.dual_gram])
    rng = random.Random(seed)
    roots = []
    while len(roots) < count:
        kind = len(roots) % 3
        t = [rng.randint(-2, 2) for _ in range(n)]
        if kind == 0:
            mu = tuple(Fraction(int(x.p), int(x.q)) for x in dual * Matrix(t))
            a = rng.randint(1, 2)
            b = math.ceil((lattice.norm(mu) - 2) / (2 * a)) + rng.randint(0, 1)
            roots.append(LorentzRoot(mu, Fraction(a), Fraction(b), N).scale(N))
        elif kind == 1:
            lam = _fractions(t)
            a = rng.randint(1, 3)
            b = math.ceil((lattice.norm(lam) - 2) / (2 * a)) + rng.randint(0, 2)
            roots.append(LorentzRoot(lam, Fraction(a), Fraction(b), N))
        else:
            mu = tuple(Fraction(int(x.p), int(x.q)) for x in dual * Matrix(t))
            if all(x.denominator == 1 for x in mu):
                continue
            roots.append(LorentzRoot(mu, Fraction(1), Fraction(1), N))
    return roots


def trace_consistency(N: int, count: int = 200, seed: int = 0) -> Dict[str, object]:
    """Compare the closed form with the trace formula on sampled roots."""
    mismatches = []
    for r in tqdm(sample_roots(N, count, seed), desc=f"trace N={N}", disable=not progress_enabled()):
        a, b = gkm_mult(r), gkm_mult_via_trace(r)
        if a != b:
            mismatches.append({"root": r.to_json(), "closed_form": a, "trace": b})
    report = {"N": N, "samples": count, "mismatches": mismatches, "ok": not mismatches}
    logger.info(f"Trace consistency for N={N}: {'ok' if report['ok'] else 'MISMATCH'}",
                extra={"samples": count, "mismatches": len(mismatches)})
    return report


# -- Peterson recursion -----------------------------------------------------------------


@dataclass
class PetersonTable:
    """Multiplicities of every root in a coefficient box."""
    inner: np.ndarray
    shape: Tuple[int, ...]
    mults: np.ndarray

    def mult(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) != len(self.shape) or any(c < 0 or c >= s for c, s in zip(coeffs, self.shape)):
            raise InvalidParameterError(f"{tuple(coeffs)} is outside the box {self.shape}")
        return int(self.mults[np.ravel_multi_index(tuple(coeffs), self.shape)])


class PetersonEngine:
    """Peterson recursion for a symmetrizable Kac-Moody algebra.

    Args:
        inner: Symmetric integer matrix of simple-root inner products.
        name: Label used in logs.

    Weyl-conjugate vectors share a multiplicity, so the recursion is only
    evaluated on dominant vectors; everything else is reflected down to its
    dominant representative, a simple root, or a non-root.
    """

    def __init__(self, inner: Sequence[Sequence[int]], name: str = ""):
        self.inner = np.array([[int(x) for x in row] for row in inner], dtype=np.int64)
        if (self.inner != self.inner.T).any():
            raise InvalidParameterError("inner-product matrix must be symmetric")
        self.rank = len(self.inner)
        self.name = name
        self.diag = np.diag(self.inner).copy()
        graph = nx.Graph()
        graph.add_nodes_from(range(self.rank))
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                if self.inner[i, j]:
                    graph.add_edge(i, j)
        self._connected = np.array(
            [mask != 0 and nx.is_connected(graph.subgraph([i for i in range(self.rank) if mask >> i & 1]))
             for mask in range(1 << self.rank)], dtype=bool)

    def norm(self, coeffs: Sequence[int]) -> int:
        v = np.array(coeffs, dtype=np.int64)
        return int(v @ self.inner @ v)

    def reduce(self, vectors: np.ndarray, max_steps: int = 100_000) -> Tuple[np.ndarray, np.ndarray]:
        """Reflect nonnegative vectors towards the fundamental chamber.

        Returns the reduced vectors and a status per vector: DOMINANT, REAL
        (conjugate to a simple root) or NONROOT (zero, or a reflection made a
        coefficient negative).
        """
        work = np.array(vectors, dtype=np.int64).reshape(-1, self.rank).copy()
        status = np.full(len(work), ACTIVE, dtype=np.int8)
        status[~work.any(axis=1)] = NONROOT
        for _ in range(max_steps):
            act = np.nonzero(status == ACTIVE)[0]
            if not act.size:
                return work, status
            rows = work[act]
            neg = (rows < 0).any(axis=1)
            status[act[neg]] = NONROOT
            simple = ~neg & (rows.sum(axis=1) == 1)
            status[act[simple]] = REAL
            keep = ~neg & ~simple
            act, rows = act[keep], rows[keep]
            ip = rows @ self.inner
            pos = ip > 0
            dom = ~pos.any(axis=1)
            status[act[dom]] = DOMINANT
            act, rows, ip, pos = act[~dom], rows[~dom], ip[~dom], pos[~dom]
            if not act.size:
                continue
            i = pos.argmax(axis=1)
            r = np.arange(len(act))
            twice = 2 * ip[r, i]
            if (twice % self.diag[i]).any():
                raise PetersonError(f"Cartan matrix of {self.name or 'algebra'} is not integral")
            rows[r, i] -= twice // self.diag[i]
            work[act] = rows
        raise PetersonError("Weyl reduction did not terminate")

    def run(self, box: Sequence[int]) -> PetersonTable:
        """Multiplicities of every vector 0 <= beta <= box.

        Raises:
            PetersonError: if an exact division or integrality check fails.
        """
        start = time.time()
        rank = self.rank
        box = tuple(int(b) for b in box)
        if len(box) != rank or min(box) < 0:
            raise InvalidParameterError(f"box {box} does not match rank {rank}")
        shape = tuple(b + 1 for b in box)
        coords = np.indices(shape).reshape(rank, -1)
        vectors = coords.T
        V = len(vectors)
        reduced, status = self.reduce(vectors)
        index = np.arange(V)
        dom = status == DOMINANT
        red_idx = np.full(V, -1, dtype=np.int64)
        if dom.any():
            red_idx[dom] = np.ravel_multi_index(tuple(reduced[dom].T), shape)
        masks = (vectors > 0).astype(np.int64) @ (1 << np.arange(rank, dtype=np.int64))
        recurse = dom & (red_idx == index) & self._connected[masks]
        heights = vectors.sum(axis=1)
        norms = np.einsum("vi,ij,vj->v", vectors, self.inner, vectors)
        factors = norms - vectors @ self.diag
        gcds = np.gcd.reduce(vectors, axis=1)
        L = math.lcm(*range(1, max(max(box), 1) + 1))

        mults = np.zeros(V, dtype=np.int64)
        cs = np.zeros(V, dtype=object)
        nz = np.zeros(V, dtype=bool)
        coord_nd = coords.reshape((rank,) + shape)
        cs_nd = cs.reshape(shape)
        nz_nd = nz.reshape(shape)
        norms_nd = norms.reshape(shape)

        def divisor_terms(b: int) -> int:
            g = int(gcds[b])
            total = 0
            for k in range(2, g + 1):
                if g % k == 0:
                    sub = np.ravel_multi_index(tuple(vectors[b] // k), shape)
                    total += (L // k) * int(mults[sub])
            return total

        order = np.argsort(heights, kind="stable")
        bounds = np.searchsorted(heights[order], np.arange(heights.max() + 2))
        logger.info(f"Peterson recursion for {self.name or 'algebra'}",
                    extra={"box": list(box), "vectors": V, "dominant": int(recurse.sum())})
        for h in tqdm(range(1, int(heights.max()) + 1), desc=f"peterson {self.name}",
                      disable=not progress_enabled()):
            layer = order[bounds[h]:bounds[h + 1]]
            for b in layer[recurse[layer]]:
                t = vectors[b]
                sl = tuple(slice(0, int(x) + 1) for x in t)
                rev = tuple(slice(int(x), None, -1) for x in t)
                mask = nz_nd[sl] & nz_nd[rev]
                total = 0
                if mask.any():
                    ipb = self.inner @ t
                    w = sum(coord_nd[i][sl] * int(ipb[i]) for i in range(rank)) - norms_nd[sl]
                    total = int((w[mask].astype(object) * cs_nd[sl][mask] * cs_nd[rev][mask]).sum())
                factor = int(factors[b])
                if factor == 0:
                    if total:
                        raise PetersonError(f"zero factor with nonzero sum at {tuple(t)}")
                    c = 0
                else:
                    if total % (L * factor):
                        raise PetersonError(f"inexact Peterson division at {tuple(t)}")
                    c = total // (L * factor)
                value = c - divisor_terms(b)
                if value % L or value < 0:
                    raise PetersonError(f"non-integral multiplicity at {tuple(t)}")
                mults[b] = value // L
                cs[b] = c
            rest = layer[~recurse[layer]]
            st = status[rest]
            mults[rest[st == REAL]] = 1
            conj = rest[st == DOMINANT]
            mults[conj] = mults[red_idx[conj]]
            for b in rest:
                c = L * int(mults[b])
                if gcds[b] > 1:
                    c += divisor_terms(b)
                cs[b] = c
            nz[layer] = np.array([x != 0 for x in cs[layer]], dtype=bool)
        logger.info(f"Peterson recursion for {self.name or 'algebra'} finished",
                    extra={"seconds": round(time.time() - start, 2)})
        return PetersonTable(inner=self.inner, shape=shape, mults=mults)

    def mults_for(self, targets: Sequence[Sequence[int]]) -> List[int]:
        """Multiplicities of the given coefficient vectors, with the box fitted to their reductions."""
        vecs = np.array(targets, dtype=np.int64).reshape(-1, self.rank)
        reduced, status = self.reduce(vecs)
        dom = status == DOMINANT
        if not dom.any():
            return [1 if s == REAL else 0 for s in status]
        table = self.run(reduced[dom].max(axis=0))
        return [1 if s == REAL else table.mult(tuple(int(x) for x in red)) if s == DOMINANT else 0
                for red, s in zip(reduced, status)]


@dataclass
class MultRow:
    """One multiplicity row: coefficients, norm, Peterson multiplicity and the bounds that apply."""
    coefficients: Tuple[int, ...]
    norm: int
    mult: int
    bound: Optional[int] = None
    rank_bound: Optional[int] = None
    level_one: Optional[int] = None
    in_NL_star: Optional[bool] = None
    expected_mult: Optional[int] = None
    expected_bound: Optional[int] = None
    expected_rank_bound: Optional[int] = None

    @property
    def ok(self) -> bool:
        if self.expected_mult is not None and self.mult != self.expected_mult:
            return False
        if self.expected_bound is not None and self.bound != self.expected_bound:
            return False
        if self.expected_rank_bound is not None and self.rank_bound != self.expected_rank_bound:
            return False
        for b in (self.bound, self.rank_bound):
            if b is not None and self.mult > b:
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "coefficients": ",".join(str(c) for c in self.coefficients),
            "norm": self.norm,
            "mult": self.mult,
            "bound": "" if self.bound is None else self.bound,
            "rank_bound": "" if self.rank_bound is None else self.rank_bound,
            "level_one": "" if self.level_one is None else self.level_one,
            "in_NL_star": "" if self.in_NL_star is None else self.in_NL_star,
            "expected_mult": "" if self.expected_mult is None else self.expected_mult,
            "ok": self.ok,
        }


def peterson_mults(inner: Sequence[Sequence[int]], box: Sequence[int], name: str = "") -> List[MultRow]:
    """Every imaginary dominant root in the box with its multiplicity, deepest norm first."""
    engine = PetersonEngine(inner, name)
    table = engine.run(box)
    vectors = np.indices(table.shape).reshape(engine.rank, -1).T
    _, status = engine.reduce(vectors)
    rows = []
    for v, s, mult in zip(vectors, status, table.mults):
        if s != DOMINANT or mult == 0:
            continue
        ip = v @ engine.inner
        if (ip > 0).any():
            continue
        coeffs = tuple(int(x) for x in v)
        rows.append(MultRow(coefficients=coeffs, norm=engine.norm(coeffs), mult=int(mult)))
    rows.sort(key=lambda r: (-r.norm, sum(r.coefficients), r.coefficients))
    return rows


# -- embeddings -------------------------------------------------------------------------


def declared_inner(name: str) -> Tuple[Tuple[int, ...], ...]:
    """Symmetric inner-product matrix of a shipped hyperbolic algebra."""
    if name not in ALGEBRA_EDGES:
        raise InvalidParameterError(f"unknown algebra {name!r}; known: {', '.join(sorted(ALGEBRA_EDGES))}")
    spec = ALGEBRA_EDGES[name]
    n = spec["rank"]
    rows = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j, value in spec["edges"]:
        rows[i - 1][j - 1] = rows[j - 1][i - 1] = value
    return tuple(tuple(r) for r in rows)


@dataclass(frozen=True)
class SubalgebraEmbedding:
    """A hyperbolic algebra realized by real simple roots of the fixed-point algebra."""
    name: str
    N: int
    roots: Tuple[LorentzRoot, ...]
    declared: Tuple[Tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.roots)

    def cartan(self) -> List[List[Fraction]]:
        return gkm_cartan_matrix(self.roots)

    def validate(self) -> "SubalgebraEmbedding":
        """Raises EmbeddingError unless the roots reproduce the declared matrix."""
        found = self.cartan()
        if any(found[i][j] != self.declared[i][j] for i in range(self.rank) for j in range(self.rank)):
            raise EmbeddingError(f"roots of {self.name} do not reproduce its Cartan matrix")
        return self

    def lift(self, coefficients: Sequence[int]) -> LorentzRoot:
        if len(coefficients) != self.rank:
            raise InvalidParameterError(f"{self.name} has rank {self.rank}")
        total = weyl_vector(self.N).scale(0)
        for c, root in zip(coefficients, self.roots):
            total = total + root.scale(c)
        return total


def _coefficients(lattice: GramLattice, point: Sequence[int]) -> Tuple[Fraction, ...]:
    """Basis coefficients of a lattice point given in fixed coordinates."""
    basis_t = [[lattice.basis[j][i] for j in range(lattice.rank)] for i in range(lattice.rank)]
    coeffs = exact_solve(basis_t, list(point))
    if coeffs is None or any(c.denominator != 1 for c in coeffs):
        raise EmbeddingError(f"{tuple(point)} is not a point of the fixed lattice")
    return tuple(coeffs)


def explicit_embedding(name: str) -> SubalgebraEmbedding:
    """The shipped realizations of AE3 (N=23), H71 and AE4 (N=11)."""
    if name not in EXPLICIT_POINTS:
        raise EmbeddingError(f"no explicit realization of {name}")
    N = HOST_N[name]
    lattice = fixed_lattice(N)
    roots = tuple(fix_root(_coefficients(lattice, p), N) for p in EXPLICIT_POINTS[name])
    return SubalgebraEmbedding(name, N, roots, declared_inner(name)).validate()


def find_embedding(name: str, N: Optional[int] = None, budget: int = 500_000) -> SubalgebraEmbedding:
    """Depth-first search for norm-2 fix roots realizing a simply laced algebra.

    Node 1 sits at the origin; every other node is placed at a lattice vector
    of norm 4, 6 or 8 away from its breadth-first parent, so that pairwise
    squared distances are 4 - 2 (alpha_i, alpha_j).

    Raises:
        EmbeddingError: if the search exhausts ``budget`` placements.
    """
    N = N or HOST_N.get(name)
    if N is None:
        raise EmbeddingError(f"no host lattice known for {name}")
    declared = declared_inner(name)
    if any(declared[i][i] != 2 for i in range(len(declared))):
        raise EmbeddingError("the search only places norm-2 roots")
    lattice = fixed_lattice(N)
    G = np.array([[int(x) for x in row] for row in lattice.gram], dtype=np.int64)
    steps = {}
    for v in short_vectors(lattice, 8):
        if v.norm in (4, 6, 8):
            steps.setdefault(int(v.norm), []).append([int(c) for c in v.coeffs])
    steps = {k: np.array(v, dtype=np.int64) for k, v in steps.items()}
    n = len(declared)
    graph = nx.Graph([(i, j) for i in range(n) for j in range(i + 1, n) if declared[i][j]])
    order = [0] + [v for _, v in nx.bfs_edges(graph, 0)]
    parent = {v: u for u, v in nx.bfs_edges(graph, 0)}
    positions: Dict[int, np.ndarray] = {0: np.zeros(lattice.rank, dtype=np.int64)}
    placed = [0]

    def place(k: int) -> bool:
        if k == n:
            return True
        node = order[k]
        d2 = 4 - 2 * declared[node][parent[node]]
        if d2 not in steps:
            return False
        cand = positions[parent[node]] + steps[d2]
        XG = cand @ G
        XX = np.einsum("ki,ki->k", XG, cand)
        ok = np.ones(len(cand), dtype=bool)
        for j in order[:k]:
            pj = positions[j]
            ok &= XX - 2 * (XG @ pj) + pj @ G @ pj == 4 - 2 * declared[node][j]
        for x in cand[ok]:
            placed[0] += 1
            if placed[0] > budget:
                raise EmbeddingError(f"embedding search for {name} exceeded {budget} placements")
            positions[node] = x
            if place(k + 1):
                return True
        positions.pop(node, None)
        return False

    start = time.time()
    if not place(1):
        raise EmbeddingError(f"{name} has no realization by norm-2 roots for N={N}")
    roots = tuple(fix_root(positions[i], N) for i in range(n))
    logger.info(f"Found an embedding of {name} for N={N}",
                extra={"placements": placed[0], "seconds": round(time.time() - start, 2)})
    return SubalgebraEmbedding(name, N, roots, declared).validate()


@lru_cache(maxsize=None)
def embedding(name: str) -> SubalgebraEmbedding:
    """Explicit realization when one is shipped, otherwise the search."""
    if name in EXPLICIT_POINTS:
        return explicit_embedding(name)
    return find_embedding(name)


def embed_and_bound(emb: SubalgebraEmbedding, coefficients: Sequence[int],
                    mult: Optional[int] = None) -> MultRow:
    """Lift a root of the subalgebra and bound its multiplicity by the fixed-point algebra.

    Raises:
        VerificationError: if the lifted norm disagrees with the Cartan norm, or
            (for N=23) the divisibility rule disagrees with the dual-lattice test.
    """
    emb.validate()
    coeffs = tuple(int(c) for c in coefficients)
    r = emb.lift(coeffs)
    cartan_norm = sum(a * b * emb.declared[i][j] for i, a in enumerate(coeffs) for j, b in enumerate(coeffs))
    if r.norm != cartan_norm:
        raise VerificationError("lifted norm differs from the Cartan norm",
                                [{"coefficients": str(coeffs), "lifted": str(r.norm), "cartan": cartan_norm}])
    member = r.in_NL_star()
    if emb.name == "AE3" and emb.N == 23 and member != all(c % 23 == 0 for c in coeffs):
        raise VerificationError("divisibility rule disagrees with the dual-lattice test",
                                [{"coefficients": str(coeffs)}])
    if mult is None:
        mult = PetersonEngine(emb.declared, emb.name).mults_for([coeffs])[0]
    return MultRow(coefficients=coeffs, norm=cartan_norm, mult=mult, bound=gkm_mult(r), in_NL_star=member)


# -- tables -----------------------------------------------------------------------------


def mult_table(name: str, max_norm: Optional[int] = None, max_height: Optional[int] = None,
               gkm_bounds: bool = True) -> List[MultRow]:
    """Replay the shipped rows of an algebra with Peterson multiplicities and every bound.

    Args:
        name: Algebra name (AE3, H71, AE4, AE5, AE6, AE7, AE8, DE7, DE8, DE10, T433).
        max_norm: Keep rows with -norm <= max_norm.
        max_height: Keep rows whose coefficient sum is at most this.
        gkm_bounds: Realize the algebra in its host lattice for the closed-form bound.
    """
    inner = declared_inner(name)
    rank = len(inner)
    golden = algebra_table(name)
    p_column = {coeffs: p for coeffs, _, _, _, p in APPENDIX_B.get(name, [])}
    rows = [g for g in golden
            if (max_norm is None or -g[1] <= max_norm) and (max_height is None or sum(g[0]) <= max_height)]
    if not rows:
        return []
    engine = PetersonEngine(inner, name)
    mults = engine.mults_for([g[0] for g in rows])
    emb = embedding(name) if gkm_bounds and name in HOST_N else None
    result = []
    for (coeffs, norm, expected, expected_bound), mult in zip(rows, mults):
        if engine.norm(coeffs) != norm:
            raise VerificationError(f"shipped norm of {coeffs} disagrees with the Cartan matrix",
                                    [{"coefficients": str(coeffs), "shipped": norm, "cartan": engine.norm(coeffs)}])
        row = MultRow(coefficients=tuple(coeffs), norm=norm, mult=mult, expected_mult=expected)
        if emb is not None:
            lifted = embed_and_bound(emb, coeffs, mult=mult)
            row.bound, row.in_NL_star = lifted.bound, lifted.in_NL_star
        row.rank_bound = global_bound(rank, norm)
        row.level_one = colored_partitions(rank - 2, 1 - norm // 2)
        if name in APPENDIX_B:
            row.expected_rank_bound = expected_bound
            if p_column.get(tuple(coeffs)) != row.level_one:
                raise VerificationError(f"partition column differs for {coeffs}",
                                        [{"shipped": p_column.get(tuple(coeffs)), "computed": row.level_one}])
        elif emb is not None:
            row.expected_bound = expected_bound
        result.append(row)
    bad = [r for r in result if not r.ok]
    logger.info(f"Multiplicity table for {name}: {len(result) - len(bad)}/{len(result)} rows ok",
                extra={"algebra": name, "rows": len(result)})
    return result


def isotropic_mult_check(name: str, rows: Optional[Sequence[MultRow]] = None) -> Dict[str, object]:
    """Norm-0 rows must have multiplicity rank - 2."""
    rows = mult_table(name, max_norm=0, gkm_bounds=False) if rows is None else rows
    rank = len(declared_inner(name))
    isotropic = [r for r in rows if r.norm == 0]
    bad = [r.coefficients for r in isotropic if r.mult != rank - 2]
    affine = affine_subdiagrams(name)
    return {"algebra": name, "rank": rank, "rows": len(isotropic), "unique_affine": len(affine) == 1,
            "violations": bad, "ok": not bad and bool(isotropic)}


def affine_subdiagrams(name: str) -> List[Tuple[int, ...]]:
    """Connected affine subdiagrams left after removing one node."""
    data = CartanData.from_rows(declared_inner(name))
    found = []
    for i in range(data.size):
        rest = [j for j in range(data.size) if j != i]
        sub = data.submatrix(rest)
        for comp in sub.components():
            nodes = tuple(rest[j] for j in comp)
            if classify(data.submatrix(nodes)) == "affine" and nodes not in found:
                found.append(nodes)
    return sorted(found)


def _null_marks(data: CartanData) -> List[Fraction]:
    """Primitive positive null vector of an affine inner-product matrix."""
    kernel = data.sympy().nullspace()
    if len(kernel) != 1:
        raise EmbeddingError("affine subdiagram has no unique null vector")
    vec = [Fraction(int(x.p), int(x.q)) for x in kernel[0]]
    scale = math.lcm(*[v.denominator for v in vec])
    ints = [int(v * scale) for v in vec]
    g = math.gcd(*ints)
    ints = [x // g for x in ints]
    if ints[0] < 0:
        ints = [-x for x in ints]
    return [Fraction(x) for x in ints]


def sharpness_check(name: str, holes=None) -> Dict[str, object]:
    """Decide whether the closed-form bound is sharp on the isotropic roots of an embedding.

    The affine subdiagram A0 fixes a point c (the comark-weighted average of
    its root positions), which must be the centre of an enumerated affine
    hole. The bound is sharp iff d(A0) h(A0) is strictly smaller than d h of
    every other component of that hole, with d = 1 for fix components and N
    for dual ones.

    Raises:
        EmbeddingError: if c is not the centre of a hole containing A0.
    """
    from .holes import enumerate_holes
    emb = embedding(name)
    N = emb.N
    affine = affine_subdiagrams(name)
    if not affine:
        raise EmbeddingError(f"{name} has no affine subdiagram")
    nodes = affine[0]
    sub = CartanData.from_rows(declared_inner(name)).submatrix(nodes)
    marks = _null_marks(sub)
    levels = [emb.roots[j].m for j in nodes]
    comarks = [a / lv for a, lv in zip(marks, levels)]
    positions = [emb.roots[j].position for j in nodes]
    weight = sum(comarks)
    centre = tuple(sum(w * p[i] for w, p in zip(comarks, positions)) / weight for i in range(len(positions[0])))

    holes = enumerate_holes(N) if holes is None else holes
    target = None
    for hole in holes:
        shift = [c - h for c, h in zip(centre, hole.centre)]
        if any(s.denominator != 1 for s in shift):
            continue
        moved = {tuple(x + s for x, s in zip(v.coeffs, shift)): k for k, v in enumerate(hole.vertices)}
        if all(p in moved for p in positions):
            target = (hole, [moved[p] for p in positions])
            break
    if target is None:
        raise EmbeddingError(f"the affine subdiagram of {name} does not span an enumerated hole")
    hole, indices = target
    products = []
    own = None
    for k, (comp, label) in enumerate(zip(hole.diagram.components, hole.diagram.component_labels)):
        d = N if hole.diagram.is_long(k) else 1
        entry = catalog_entry(label[2:] if label.startswith("N*") else label)
        value = d * entry.hdual
        products.append({"component": label, "d_hdual": value})
        if set(indices) <= set(comp):
            own = k
    if own is None:
        raise EmbeddingError(f"the affine subdiagram of {name} is not a component of {hole.label}")
    mine = products[own]["d_hdual"]
    sharp = all(p["d_hdual"] > mine for k, p in enumerate(products) if k != own)

    rows = [r for r in mult_table(name, max_norm=0) if r.norm == 0]
    observed = all(r.bound is not None and r.mult == r.bound for r in rows) if rows else None
    report = {"algebra": name, "N": N, "hole": hole.label, "component": products[own]["component"],
              "products": products, "sharp": sharp, "observed_sharp": observed,
              "ok": observed is None or observed == sharp}
    logger.info(f"Sharpness for {name}: {'sharp' if sharp else 'not sharp'}", extra={"hole": hole.label})
    return report


def table64_rows(max_norm: int = 16) -> List[Dict[str, object]]:
    """Bound columns for ranks 7-10 and the N=3, N=2 partition functions against the shipped table."""
    rows = []
    for norm in range(0, -max_norm - 1, -2):
        computed = (global_bound(7, norm), global_bound(8, norm), p_sigma(shape_for(3), 1 - norm // 2),
                    global_bound(9, norm), global_bound(10, norm), p_sigma(shape_for(2), 1 - norm // 2))
        row = {"norm": norm}
        row.update(dict(zip(TABLE_64_COLUMNS, computed)))
        expected = TABLE_64.get(norm)
        row["ok"] = expected is None or tuple(expected) == computed
        rows.append(row)
    return rows


def e10_bound_column() -> List[Dict[str, object]]:
    """Rank-10 bound and 8-coloured partitions against the shipped E10 columns."""
    rows = []
    for norm in sorted(E10_COLUMNS, reverse=True):
        level01, level2, bound = E10_COLUMNS[norm]
        computed_bound = global_bound(10, norm)
        level_one = colored_partitions(8, 1 - norm // 2)
        rows.append({"norm": norm, "level01": level01, "level2": "" if level2 is None else level2,
                     "bound": computed_bound, "partitions": level_one,
                     "ok": computed_bound == bound and level_one == level01})
    return rows


def rank_bound_observation() -> List[Dict[str, object]]:
    """rank <= dim/2 + 2 for every algebra with a host lattice."""
    rows = []
    for name, N in sorted(HOST_N.items()):
        rank = ALGEBRA_EDGES[name]["rank"]
        limit = m_for(N) + 2
        rows.append({"algebra": name, "N": N, "rank": rank, "limit": limit, "ok": rank <= limit})
    return rows
