"""
Exact integral lattices for the fixed-point workbench.

Lattices are given by an exact Gram matrix over a basis. The fixed-point
lattices store their basis in fixed coordinates (a_1..a_M; c_1..c_M): a_k is
the sqrt(8)-scaled entry on the k-th fixed position and c_j the common entry
on the j-th N-cycle, so the norm of a vector is (sum a^2 + N sum c^2)/8.
Complement lattices store their basis in the 24 Leech coordinates.

Short vectors are found by Fincke-Pohst enumeration on a float Cholesky
factor with a safety margin; every reported norm is recomputed exactly.
"""

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import Matrix, Rational, isprime
from sympy.matrices.normalforms import hermite_normal_form
from sympy.functions.combinatorial.numbers import legendre_symbol
from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from .error_handling import (EnumerationBudgetError, InvalidParameterError,
                             NotPositiveDefiniteError, VerificationError)
from .golay import cycle_data
from .leech import enumerate_short_dual_perp, generators, is_leech
from .logging_utils import get_logger
from .qseries import QSeries, m_for, shape_for, theta_rhs

logger = get_logger()

Number = Union[int, Fraction]
DEFAULT_BUDGET = 2_000_000

# Fixed-coordinate bases (a; c) with c the multiplier of sqrt(N) on each cycle.
SHIPPED_BASES: Dict[int, List[Tuple[Tuple[int, ...], Tuple[int, ...]]]] = {
    23: [((-3,), (1,)), ((5,), (1,))],
    11: [((-3, 1), (1, 1)), ((2, 0), (2, 0)), ((4, 4), (0, 0)), ((8, 0), (0, 0))],
    7: [((-3, 1, 1), (1, 1, 1)), ((0, 2, 0), (0, 2, 0)), ((2, 0, 0), (2, 0, 0)),
        ((4, 0, 4), (0, 0, 0)), ((4, 4, 0), (0, 0, 0)), ((8, 0, 0), (0, 0, 0))],
    5: [((-3, 1, 1, 1), (1, 1, 1, 1)), ((2, 2, 0, 2), (0, 0, 2, 0)), ((2, 0, 2, 2), (0, 2, 0, 0)),
        ((0, 2, 2, 2), (2, 0, 0, 0)), ((4, 0, 0, 4), (0, 0, 0, 0)), ((4, 0, 4, 0), (0, 0, 0, 0)),
        ((4, 4, 0, 0), (0, 0, 0, 0)), ((8, 0, 0, 0), (0, 0, 0, 0))],
}

# E8 Cartan matrix, quadratic form of the discriminant group of the N=2 lattices
_E8_CARTAN = np.array([
    [2, -1, 0, 0, 0, 0, 0, 0],
    [-1, 2, -1, 0, 0, 0, 0, 0],
    [0, -1, 2, -1, 0, 0, 0, -1],
    [0, 0, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, 0],
    [0, 0, -1, 0, 0, 0, 0, 2],
], dtype=np.int64)


def _to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    r = Rational(x)
    return Fraction(int(r.p), int(r.q))


def _lcm_denominators(values) -> int:
    d = 1
    for v in values:
        d = d * Fraction(v).denominator // math.gcd(d, Fraction(v).denominator)
    return d


@dataclass(frozen=True, order=True)
class LatticeVector:
    """A vector given by its coefficients over the lattice basis."""
    norm: Fraction
    coeffs: Tuple[Fraction, ...]

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)


@dataclass(frozen=True)
class DiscriminantClass:
    """A class of L*/L: representative coefficients and half-norm mod 1."""
    representative: Tuple[Fraction, ...]
    half_norm: Fraction


@dataclass(frozen=True)
class GramLattice:
    """Positive definite lattice with an exact Gram matrix.

    Args:
        gram: Symmetric matrix of exact rationals.
        provenance: Where the basis comes from.
        N: Order of the automorphism the lattice belongs to, if any.
        basis: Basis rows in ambient coordinates (fixed or Leech), if known.
        metric: Diagonal of the ambient quadratic form, times 8.
    """
    gram: Tuple[Tuple[Fraction, ...], ...]
    provenance: str = ""
    N: Optional[int] = None
    basis: Optional[Tuple[Tuple[int, ...], ...]] = None
    metric: Optional[Tuple[int, ...]] = None
    _cache: Dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @classmethod
    def from_rows(cls, gram_rows: Sequence[Sequence[Number]], **kwargs) -> "GramLattice":
        gram = tuple(tuple(_to_fraction(x) for x in row) for row in gram_rows)
        n = len(gram)
        if any(len(row) != n for row in gram):
            raise InvalidParameterError("Gram matrix must be square")
        if any(gram[i][j] != gram[j][i] for i in range(n) for j in range(n)):
            raise InvalidParameterError("Gram matrix must be symmetric")
        return cls(gram=gram, **kwargs)

    @classmethod
    def from_basis(cls, basis: Sequence[Sequence[int]], metric: Sequence[int], **kwargs) -> "GramLattice":
        rows = [[Fraction(sum(w * x * y for w, x, y in zip(metric, u, v)), 8) for v in basis] for u in basis]
        return cls.from_rows(rows, basis=tuple(tuple(int(x) for x in b) for b in basis),
                             metric=tuple(metric), **kwargs)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def _sympy(self) -> Matrix:
        if "sympy" not in self._cache:
            self._cache["sympy"] = Matrix([[Rational(x.numerator, x.denominator) for x in row] for row in self.gram])
        return self._cache["sympy"]

    @property
    def det(self) -> Fraction:
        if "det" not in self._cache:
            self._cache["det"] = _to_fraction(self._sympy().det())
        return self._cache["det"]

    @property
    def dual_gram(self) -> Tuple[Tuple[Fraction, ...], ...]:
        """Gram matrix of the dual basis, the exact inverse."""
        if "dual" not in self._cache:
            inv = self._sympy().inv()
            self._cache["dual"] = tuple(tuple(_to_fraction(inv[i, j]) for j in range(self.rank))
                                        for i in range(self.rank))
        return self._cache["dual"]

    def dual_lattice(self) -> "GramLattice":
        return GramLattice(gram=self.dual_gram, provenance=f"dual of {self.provenance}", N=self.N)

    def inner(self, u: Sequence[Number], v: Sequence[Number]) -> Fraction:
        return sum((Fraction(u[i]) * self.gram[i][j] * Fraction(v[j])
                    for i in range(self.rank) for j in range(self.rank) if u[i] and v[j]), Fraction(0))

    def norm(self, coeffs: Sequence[Number]) -> Fraction:
        return self.inner(coeffs, coeffs)

    def vector(self, coeffs: Sequence[Number]) -> LatticeVector:
        coeffs = tuple(Fraction(c) for c in coeffs)
        return LatticeVector(norm=self.norm(coeffs), coeffs=coeffs)

    def is_even(self) -> bool:
        return all(self.gram[i][i].denominator == 1 and self.gram[i][i].numerator % 2 == 0 for i in range(self.rank)) \
            and all(x.denominator == 1 for row in self.gram for x in row)

    def ambient(self, coeffs: Sequence[Number]) -> Tuple[Fraction, ...]:
        """Ambient coordinates of a coefficient vector (needs a basis)."""
        if self.basis is None:
            raise InvalidParameterError("lattice has no ambient basis")
        dim = len(self.basis[0])
        return tuple(sum(Fraction(c) * b[k] for c, b in zip(coeffs, self.basis)) for k in range(dim))

    def minimum(self, search_bound: Number = 8) -> Fraction:
        vecs = short_vectors(self, search_bound)
        nonzero = [v.norm for v in vecs if v.norm > 0]
        if not nonzero:
            raise InvalidParameterError(f"no nonzero vector up to norm {search_bound}")
        return min(nonzero)

    def to_json(self) -> dict:
        return {
            "provenance": self.provenance,
            "N": self.N,
            "gram": [[str(x) for x in row] for row in self.gram],
            "basis": [list(b) for b in self.basis] if self.basis else None,
            "det": str(self.det),
        }


# -- exact linear algebra ---------------------------------------------------------------


def _qq_matrix(rows: Sequence[Sequence[Number]]) -> DomainMatrix:
    data = [[QQ(Fraction(x).numerator, Fraction(x).denominator) for x in row] for row in rows]
    return DomainMatrix(data, (len(rows), len(rows[0]) if rows else 0), QQ)


def _from_qq(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def exact_det(rows: Sequence[Sequence[Number]]) -> Fraction:
    """Determinant of a square rational matrix."""
    if not rows:
        return Fraction(1)
    return _from_qq(_qq_matrix(rows).det())


def exact_solve(rows: Sequence[Sequence[Number]], rhs: Sequence[Number]) -> Optional[List[Fraction]]:
    """Unique solution of A x = b over the rationals, or None if A is singular."""
    A = _qq_matrix(rows)
    if exact_det(rows) == 0:
        return None
    b = _qq_matrix([[x] for x in rhs])
    x = A.lu_solve(b).to_Matrix()
    return [_to_fraction(x[i, 0]) for i in range(len(rhs))]


# -- Hermite normal form helpers --------------------------------------------------------


def hnf_rows(rows: Sequence[Sequence[int]]) -> List[List[int]]:
    """Triangular row basis of the lattice spanned by integer rows."""
    H = hermite_normal_form(Matrix(rows).T)
    basis = []
    for j in range(H.cols):
        col = [int(H[i, j]) for i in range(H.rows)]
        if any(col):
            basis.append(col)
    return basis


def lll_rows(rows: Sequence[Sequence[int]]) -> List[List[int]]:
    """LLL-reduced basis of linearly independent integer rows (Euclidean form)."""
    dm = DomainMatrix([[ZZ(int(x)) for x in row] for row in rows], (len(rows), len(rows[0])), ZZ)
    reduced = dm.lll().to_Matrix()
    return [[int(reduced[i, j]) for j in range(reduced.cols)] for i in range(reduced.rows)]


def _pivot_box(rows: List[List[int]]) -> List[Tuple[int, int]]:
    """(pivot coordinate, |pivot|) per row of a triangular basis, checked for consistency."""
    n = len(rows)
    last = [max(k for k, x in enumerate(r) if x) for r in rows]
    first = [min(k for k, x in enumerate(r) if x) for r in rows]
    for pivots in (last, first):
        if sorted(pivots) == list(range(n)):
            return [(p, abs(r[p])) for p, r in zip(pivots, rows)]
    raise VerificationError("Hermite normal form is not triangular", [{"rows": rows}])


# -- fixed-point lattices ---------------------------------------------------------------


def fixed_metric(N: int) -> Tuple[int, ...]:
    M = m_for(N)
    return tuple([1] * M + [N] * M)


def _embed_fixed(row: Sequence[int], N: int) -> List[int]:
    """24 Leech coordinates of a fixed-coordinate vector for the chosen sigma."""
    fixed, cycles = cycle_data(N)
    M = len(fixed)
    v = [0] * 24
    for k, pos in enumerate(fixed):
        v[pos] = int(row[k])
    for j, cyc in enumerate(cycles):
        for pos in cyc:
            v[pos] = int(row[M + j])
    return v


@lru_cache(maxsize=None)
def sigma_fixed_lattice(N: int) -> GramLattice:
    """Basis of the sigma-fixed Leech sublattice computed from the Leech generators.

    The projection of the Leech lattice onto the fixed space is the dual of
    the fixed sublattice; its Hermite basis is dualized under the fixed
    metric and LLL-reduced in the 24 Leech coordinates.
    """
    start = time.time()
    M = m_for(N)
    fixed, cycles = cycle_data(N)
    scaled = []
    for g in generators():
        g = [int(x) for x in g]
        scaled.append([N * g[p] for p in fixed] + [sum(g[p] for p in cyc) for cyc in cycles])
    dual_rows = hnf_rows(scaled)
    if len(dual_rows) != 2 * M:
        raise VerificationError("projected Leech lattice has the wrong rank", [{"rank": len(dual_rows)}])
    metric = fixed_metric(N)
    # B Q B*^T = I with B* = dual_rows / N
    q_bstar_t = Matrix(2 * M, 2 * M, lambda i, j: Rational(metric[i] * dual_rows[j][i], 8 * N))
    basis = q_bstar_t.inv()
    rows = []
    for i in range(2 * M):
        row = [_to_fraction(basis[i, j]) for j in range(2 * M)]
        if any(x.denominator != 1 for x in row):
            raise VerificationError("fixed sublattice basis is not integral", [{"row": [str(x) for x in row]}])
        rows.append([int(x) for x in row])
    reduced = lll_rows([_embed_fixed(r, N) for r in rows])
    back = [[v[p] for p in fixed] + [v[cyc[0]] for cyc in cycles] for v in reduced]
    for v in reduced:
        if not is_leech(v):
            raise VerificationError("derived basis vector is not in the Leech lattice", [{"vector": v}])
    lattice = GramLattice.from_basis(back, metric, provenance=f"sigma-fixed sublattice N={N}", N=N)
    if lattice.det != N ** M:
        raise VerificationError("fixed sublattice determinant mismatch", [{"det": str(lattice.det), "expected": N ** M}])
    logger.info(f"Derived fixed sublattice for N={N}", extra={"rank": 2 * M, "seconds": round(time.time() - start, 2)})
    return lattice


@lru_cache(maxsize=None)
def fixed_lattice(N: int) -> GramLattice:
    """The fixed-point lattice with its shipped basis (sigma-derived for N = 2, 3)."""
    shape_for(N)
    if N not in SHIPPED_BASES:
        return sigma_fixed_lattice(N)
    rows = [list(a) + list(c) for a, c in SHIPPED_BASES[N]]
    lattice = GramLattice.from_basis(rows, fixed_metric(N), provenance=f"explicit basis N={N}", N=N)
    M = m_for(N)
    if lattice.det != N ** M:
        raise VerificationError("shipped basis determinant mismatch", [{"N": N, "det": str(lattice.det)}])
    return lattice


def cross_check_fixed_lattice(N: int, max_norm: Number = 8) -> Dict[str, object]:
    """Compare the shipped basis with the sigma-derived one by det, minimum and short-vector counts."""
    shipped = fixed_lattice(N)
    derived = sigma_fixed_lattice(N)
    a = norm_counts(short_vectors(shipped, max_norm))
    b = norm_counts(short_vectors(derived, max_norm))
    report = {
        "N": N,
        "det_equal": shipped.det == derived.det,
        "minimum": min(n for n in a if n > 0),
        "counts_equal": a == b,
        "counts": {str(k): v for k, v in sorted(a.items())},
    }
    report["ok"] = report["det_equal"] and report["counts_equal"] and report["minimum"] == 4
    return report


# -- orthogonal complement --------------------------------------------------------------


@lru_cache(maxsize=None)
def complement_lattice(N: int) -> GramLattice:
    """The orthogonal complement of the fixed sublattice, basis in Leech coordinates.

    Its dual is the projection of the Leech lattice onto the complement.
    """
    m_for(N)
    fixed, cycles = cycle_data(N)
    scaled = []
    for g in generators():
        g = [int(x) for x in g]
        row = [0] * 24
        for cyc in cycles:
            s = sum(g[p] for p in cyc)
            for p in cyc:
                row[p] = N * g[p] - s
        scaled.append(row)
    dual_rows = hnf_rows(scaled)
    n = len(dual_rows)
    bstar = Matrix(n, 24, lambda i, j: Rational(dual_rows[i][j], N))
    gram_star = bstar * bstar.T / 8
    basis = gram_star.inv() * bstar
    rows = []
    for i in range(n):
        row = [_to_fraction(basis[i, j]) for j in range(24)]
        if any(x.denominator != 1 for x in row):
            raise VerificationError("complement basis is not integral", [{"row": [str(x) for x in row]}])
        rows.append([int(x) for x in row])
    rows = lll_rows(rows)
    lattice = GramLattice.from_basis(rows, (1,) * 24, provenance=f"orthogonal complement N={N}", N=N)
    logger.info(f"Derived complement lattice for N={N}", extra={"rank": n, "det": str(lattice.det)})
    return lattice


# -- discriminant group -----------------------------------------------------------------


def residue_class_reps(lattice: GramLattice) -> Dict[Fraction, List[DiscriminantClass]]:
    """Representatives of every class of L*/L keyed by half-norm mod 1.

    A dual vector is t G^(-1) for integer t; classes are t modulo the row
    lattice of G, whose triangular basis gives a complete box of residues.
    """
    if any(x.denominator != 1 for row in lattice.gram for x in row):
        raise InvalidParameterError("residue classes need an integral Gram matrix")
    rows = hnf_rows([[int(x) for x in row] for row in lattice.gram])
    box = _pivot_box(rows)
    size = math.prod(d for _, d in box)
    if Fraction(size) != lattice.det:
        raise VerificationError("discriminant group order differs from det", [{"order": size, "det": str(lattice.det)}])
    inv = lattice.dual_gram
    n = lattice.rank
    classes: Dict[Fraction, List[DiscriminantClass]] = {}
    for values in product(*(range(d) for _, d in box)):
        t = [0] * n
        for (p, _), val in zip(box, values):
            t[p] = val
        coeffs = tuple(sum((t[i] * inv[i][j] for i in range(n) if t[i]), Fraction(0)) for j in range(n))
        half = lattice.norm(coeffs) / 2
        residue = half - math.floor(half)
        classes.setdefault(residue, []).append(DiscriminantClass(representative=coeffs, half_norm=residue))
    return classes


def residue_counts(M: int, N: int, mode: str = "closed_form") -> Dict[str, Dict[int, int]]:
    """rho-tilde and rho for sum x_i^2 = r over Z_N^M (the E8 form for N = 2).

    Returns:
        dict: ``{"tilde": {r: count}, "rho": {r: count}}`` with rho(0) = tilde(0) - 1.
    """
    if not isprime(N):
        raise InvalidParameterError(f"N must be prime, got {N}")
    if M < 1:
        raise InvalidParameterError("M must be positive")
    if mode == "brute":
        tilde = _residue_counts_brute(M, N)
    elif mode == "closed_form":
        tilde = _residue_counts_closed(M, N)
    else:
        raise InvalidParameterError(f"unknown mode {mode}")
    if sum(tilde.values()) != N ** M:
        raise VerificationError("residue counts do not sum to N^M", [{"M": M, "N": N, "counts": tilde}])
    rho = dict(tilde)
    rho[0] -= 1
    return {"tilde": tilde, "rho": rho}


def _residue_counts_brute(M: int, N: int) -> Dict[int, int]:
    if N == 2:
        if M != 8:
            raise InvalidParameterError("for N=2 the discriminant form is the E8 form in 8 variables")
        xs = np.array(list(product((0, 1), repeat=8)), dtype=np.int64)
        values = (np.einsum("ij,jk,ik->i", xs, _E8_CARTAN, xs) // 2) % 2
    else:
        grids = np.indices((N,) * M).reshape(M, -1)
        values = (grids ** 2).sum(axis=0) % N
    counts = np.bincount(values, minlength=N)
    return {r: int(counts[r]) for r in range(N)}


def _residue_counts_closed(M: int, N: int) -> Dict[int, int]:
    if N == 2:
        if M % 2:
            raise InvalidParameterError("closed form for N=2 needs even M")
        return {0: 2 ** (M - 1) + 2 ** (M // 2 - 1), 1: 2 ** (M - 1) - 2 ** (M // 2 - 1)}
    if M % 2 == 0:
        eps = legendre_symbol((-1) ** (M // 2) % N, N)
        counts = {r: N ** (M - 1) - eps * N ** (M // 2 - 1) for r in range(1, N)}
        counts[0] = N ** (M - 1) + eps * (N ** (M // 2) - N ** (M // 2 - 1))
        return counts
    sign = (-1) ** ((M - 1) // 2)
    counts = {r: N ** (M - 1) + N ** ((M - 1) // 2) * legendre_symbol((sign * r) % N, N) for r in range(1, N)}
    counts[0] = N ** (M - 1)
    return counts


# -- short vectors ----------------------------------------------------------------------


def short_vectors(lattice: GramLattice, bound: Number, offset: Optional[Sequence[Number]] = None,
                  budget: int = DEFAULT_BUDGET, jobs: int = 1, strict: bool = False) -> List[LatticeVector]:
    """Every vector of L (or L + offset) with norm <= bound, each once, sorted.

    Args:
        lattice: Positive definite lattice.
        bound: Norm bound B >= 0.
        offset: Optional coset offset in basis coefficients (a dual vector).
        budget: Maximum number of vectors before giving up.
        jobs: Worker threads over the outermost coordinate.
        strict: Use norm < bound instead of <=.

    Raises:
        NotPositiveDefiniteError: if the Gram matrix is not positive definite.
        EnumerationBudgetError: if more than ``budget`` vectors are found.
    """
    bound = Fraction(bound)
    if bound < 0:
        raise InvalidParameterError("norm bound must be nonnegative")
    n = lattice.rank
    off = [Fraction(o) for o in offset] if offset is not None else [Fraction(0)] * n
    G = np.array([[float(x) for x in row] for row in lattice.gram])
    try:
        R = np.linalg.cholesky(G).T
    except np.linalg.LinAlgError as e:
        raise NotPositiveDefiniteError(f"Gram matrix is not positive definite: {e}") from e
    diag = np.diag(R) ** 2
    mu = R / np.diag(R)[:, None]
    off_f = [float(o) for o in off]
    slack = float(bound) * (1 + 1e-9) + 1e-9

    D = _lcm_denominators(off)
    gden = _lcm_denominators(x for row in lattice.gram for x in row)
    G_int = np.array([[int(x * gden) for x in row] for row in lattice.gram], dtype=object)
    off_scaled = [int(o * D) for o in off]

    def exact_norm(x: Sequence[int]) -> Fraction:
        z = np.array([D * xi + oi for xi, oi in zip(x, off_scaled)], dtype=object)
        return Fraction(int(z.dot(G_int).dot(z)), gden * D * D)

    def coordinate_range(i: int, x: List[int], remaining: float) -> Tuple[range, float]:
        s = sum(mu[i, j] * (x[j] + off_f[j]) for j in range(i + 1, n))
        centre = -s - off_f[i]
        radius = math.sqrt(max(remaining, 0.0) / diag[i])
        return range(math.ceil(centre - radius - 1e-9), math.floor(centre + radius + 1e-9) + 1), s

    def search(top_value: Optional[int]) -> List[Tuple[int, ...]]:
        found: List[Tuple[int, ...]] = []
        x = [0] * n

        def recurse(i: int, remaining: float) -> None:
            values, s = coordinate_range(i, x, remaining)
            if i == n - 1 and top_value is not None:
                values = [top_value] if top_value in values else []
            for xi in values:
                t = xi + off_f[i] + s
                rem = remaining - diag[i] * t * t
                if rem < -1e-9:
                    continue
                x[i] = xi
                if i == 0:
                    found.append(tuple(x))
                    if len(found) > budget:
                        raise EnumerationBudgetError(f"more than {budget} vectors below norm {bound}")
                else:
                    recurse(i - 1, rem)
            x[i] = 0

        if n:
            recurse(n - 1, slack)
        else:
            found.append(())
        return found

    if jobs > 1 and n > 1:
        top, _ = coordinate_range(n - 1, [0] * n, slack)
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            parts = list(executor.map(search, list(top)))
        candidates = [c for part in parts for c in part]
    else:
        candidates = search(None)
    if len(candidates) > budget:
        raise EnumerationBudgetError(f"more than {budget} vectors below norm {bound}")

    result = []
    for x in candidates:
        nrm = exact_norm(x)
        if nrm < bound or (nrm == bound and not strict):
            result.append(LatticeVector(norm=nrm, coeffs=tuple(xi + o for xi, o in zip(x, off))))
    result.sort()
    return result


def norm_counts(vectors: Sequence[LatticeVector]) -> Dict[Fraction, int]:
    counts: Dict[Fraction, int] = {}
    for v in vectors:
        counts[v.norm] = counts.get(v.norm, 0) + 1
    return counts


def _series_from_halves(halves: Sequence[Fraction], truncation: Fraction) -> QSeries:
    D = _lcm_denominators(halves) if halves else 1
    coeffs: Dict[int, int] = {}
    for h in halves:
        k = int(h * D)
        coeffs[k] = coeffs.get(k, 0) + 1
    return QSeries(D, coeffs, truncation)


def theta_series(lattice: GramLattice, offset: Optional[Sequence[Number]] = None,
                 truncation: Number = 2, budget: int = DEFAULT_BUDGET) -> QSeries:
    """sum over the coset of q^(norm/2), exact below ``truncation``."""
    truncation = Fraction(truncation)
    vecs = short_vectors(lattice, 2 * truncation, offset=offset, budget=budget, strict=True)
    return _series_from_halves([v.norm / 2 for v in vecs], truncation)


def class_key(coeffs: Sequence[Number]) -> Tuple[Fraction, ...]:
    """Canonical label of the class of L*/L containing a dual vector (coefficients mod 1)."""
    return tuple(Fraction(c) % 1 for c in coeffs)


def coset_theta_series(lattice: GramLattice, truncation: Number = 2,
                       budget: int = DEFAULT_BUDGET) -> Dict[Tuple[Fraction, ...], QSeries]:
    """Theta series of every coset L + lambda, lambda in L*, keyed by :func:`class_key`.

    One enumeration of L* is split by class, so every class of L*/L is
    covered, including those with no vector below the truncation.
    """
    truncation = Fraction(truncation)
    inv = lattice.dual_gram
    n = lattice.rank
    buckets: Dict[Tuple[Fraction, ...], List[Fraction]] = {}
    for members in residue_class_reps(lattice).values():
        for cls in members:
            buckets[class_key(cls.representative)] = []
    for v in short_vectors(lattice.dual_lattice(), 2 * truncation, budget=budget, strict=True):
        coeffs = [sum((v.coeffs[i] * inv[i][j] for i in range(n) if v.coeffs[i]), Fraction(0)) for j in range(n)]
        key = class_key(coeffs)
        if key not in buckets:
            raise VerificationError("dual vector outside the enumerated classes", [{"coeffs": [str(c) for c in coeffs]}])
        buckets[key].append(v.norm / 2)
    return {key: _series_from_halves(halves, truncation) for key, halves in buckets.items()}


# -- theta identity ---------------------------------------------------------------------


def theta_sum(N: int, truncation: Number) -> QSeries:
    """Theta + sum_r rho_M(r, N) Theta_r from the eta quotients."""
    M = m_for(N)
    rho = residue_counts(M, N)["rho"]
    total = theta_rhs(N, "full", truncation)
    for r, count in rho.items():
        if count:
            total = total + theta_rhs(N, r, truncation).scale(count)
    return total


def _compare(lhs: QSeries, rhs: QSeries, label: str) -> Optional[Dict[str, str]]:
    bound = min(lhs.exact_below, rhs.exact_below)
    exps = sorted(set(lhs.truncate(bound).exponents()) | set(rhs.truncate(bound).exponents()))
    for e in exps:
        a, b = lhs.coefficient(e), rhs.coefficient(e)
        if a != b:
            return {"series": label, "exponent": str(e), "enumerated": str(a), "eta_quotient": str(b)}
    return None


def residue_key(N: int, half_norm: Fraction) -> int:
    """Index r of Theta_r for a class of the complement with the given half-norm."""
    r = (-half_norm * N) % N
    if r.denominator != 1:
        raise VerificationError("half-norm is not in (1/N)Z", [{"half_norm": str(half_norm)}])
    return int(r)


def verify_theta_identity(N: int, truncation: Number = 2, strict: bool = False) -> Dict[str, object]:
    """Check the eta-quotient theta identity exactly.

    For N = 2, 3 the theta series of every coset of the complement lattice,
    one per class of L*/L, is compared with Theta_r for its half-norm residue;
    the zero class is compared with Theta and the sum over all classes with
    Theta_sum. For the other N the coefficients of Theta_sum up to q^1 are
    compared with the Golay projection enumeration of the dual complement.

    Raises:
        VerificationError: on a mismatch when ``strict`` is set.
    """
    start = time.time()
    truncation = Fraction(truncation)
    M = m_for(N)
    mismatches: List[Dict[str, str]] = []
    checked = 0
    if N in (2, 3):
        L = complement_lattice(N)
        series = coset_theta_series(L, truncation)
        dual_theta = None
        for members in residue_class_reps(L).values():
            for cls in members:
                theta = series[class_key(cls.representative)]
                zero = not any(cls.representative)
                r = "full" if zero else residue_key(N, cls.half_norm)
                diff = _compare(theta, theta_rhs(N, r, truncation), "full" if zero else f"r={r}")
                checked += 1
                if diff:
                    diff["class"] = ",".join(str(c) for c in cls.representative)
                    mismatches.append(diff)
                dual_theta = theta if dual_theta is None else dual_theta + theta
        diff = _compare(dual_theta, theta_sum(N, truncation), "dual")
        checked += 1
        if diff:
            mismatches.append(diff)
    else:
        bound = Fraction(1) + Fraction(1, N)
        series = theta_sum(N, bound)
        counts = {nu / 2: c for nu, c, _ in enumerate_short_dual_perp(N, Fraction(2))}
        if series.coefficient(0) != 1:
            mismatches.append({"series": "sum", "exponent": "0", "enumerated": "1",
                               "eta_quotient": str(series.coefficient(0))})
        exps = sorted({e for e in series.exponents() if 0 < e <= 1} | set(counts))
        for e in exps:
            checked += 1
            a, b = counts.get(e, 0), series.coefficient(e)
            if a != b:
                mismatches.append({"series": "sum", "exponent": str(e), "enumerated": str(a), "eta_quotient": str(b)})
        gap = Fraction(N - 1, N + 1)
        if any(0 < e <= gap for e in counts):
            mismatches.append({"series": "gap", "exponent": str(min(counts)), "enumerated": "nonzero",
                               "eta_quotient": "0"})
    report = {
        "N": N,
        "M": M,
        "truncation": str(truncation),
        "checked": checked,
        "mismatches": mismatches,
        "first_mismatch": mismatches[0]["exponent"] if mismatches else None,
        "ok": not mismatches,
        "seconds": round(time.time() - start, 2),
    }
    logger.info(f"Theta identity for N={N}: {'ok' if report['ok'] else 'MISMATCH'}",
                extra={"checked": checked, "mismatches": len(mismatches)})
    if strict and mismatches:
        raise VerificationError(f"theta identity fails for N={N}", mismatches)
    return report
