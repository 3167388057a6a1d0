"""
Exact truncated Laurent series in a fractional power of q.

A :class:`QSeries` stores coefficients sparsely as ``{k: Fraction}`` for the
terms ``q^(k/D)`` together with a bound ``exact_below``: every coefficient at
an exponent strictly below that bound is known exactly, nothing above it is
trusted. Products and inverses compute the tightest bound they can justify.

The eta products are expanded with an integer Euler-transform recurrence, so
``eta``, ``eta_sigma``, ``p_sigma`` and the colored partition numbers never
touch rational arithmetic until they are wrapped into a series.
"""

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .error_handling import InvalidParameterError, TruncationError
from .logging_utils import get_logger

logger = get_logger()

SUPPORTED_N = (2, 3, 5, 7, 11, 23)

Number = Union[int, Fraction]
CycleShape = Tuple[Tuple[int, int], ...]


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def shape_for(N: int) -> CycleShape:
    """Cycle shape 1^M N^M of the order-N Leech automorphism.

    Raises:
        InvalidParameterError: if N is not one of 2, 3, 5, 7, 11, 23.
    """
    if N not in SUPPORTED_N:
        raise InvalidParameterError(f"N must be one of {SUPPORTED_N}, got {N}")
    M = 24 // (N + 1)
    return ((1, M), (N, M))


def m_for(N: int) -> int:
    """M = 24/(N+1)."""
    shape_for(N)
    return 24 // (N + 1)


def normalize_shape(shape: Iterable[Sequence[int]]) -> CycleShape:
    """Validate and canonicalize a cycle shape given as (length, exponent) pairs."""
    pairs = tuple(sorted((int(a), int(b)) for a, b in shape))
    if not pairs or any(a <= 0 or b <= 0 for a, b in pairs):
        raise InvalidParameterError(f"cycle shape needs positive lengths and exponents: {shape}")
    return pairs


class QSeries:
    """Truncated Laurent series sum_k c_k q^(k/D), exact below ``exact_below``.

    Instances are immutable; every operation returns a new series.

    Args:
        denom: Exponent granularity D.
        coeffs: Mapping numerator k -> coefficient. Zero entries are dropped.
        exact_below: Exponent T such that all terms with k/D < T are exact.
    """

    __slots__ = ("denom", "_coeffs", "exact_below")

    def __init__(self, denom: int, coeffs: Dict[int, Number], exact_below: Number):
        if denom <= 0:
            raise InvalidParameterError("series denominator must be positive")
        self.denom = int(denom)
        self.exact_below = Fraction(exact_below)
        bound = self.exact_below * self.denom
        self._coeffs = {int(k): Fraction(c) for k, c in coeffs.items() if c != 0 and k < bound}

    # construction -----------------------------------------------------------

    @classmethod
    def constant(cls, value: Number, exact_below: Number, denom: int = 1) -> "QSeries":
        return cls(denom, {0: value}, exact_below)

    @classmethod
    def monomial(cls, exponent: Fraction, coefficient: Number, exact_below: Number) -> "QSeries":
        exponent = Fraction(exponent)
        return cls(exponent.denominator, {exponent.numerator: coefficient}, exact_below)

    @classmethod
    def from_int_list(cls, values: Sequence[int], shift: Fraction = Fraction(0),
                      step: int = 1, exact_below: Optional[Number] = None) -> "QSeries":
        """Series q^shift * sum_n values[n] q^(n*step).

        Without an explicit bound the result is exact up to the first
        exponent the list does not cover.
        """
        shift = Fraction(shift)
        D = shift.denominator
        base = shift.numerator
        if exact_below is None:
            exact_below = shift + len(values) * step
        return cls(D, {base + n * step * D: v for n, v in enumerate(values) if v}, exact_below)

    # inspection -------------------------------------------------------------

    def terms(self) -> List[Tuple[Fraction, Fraction]]:
        """Sorted list of (exponent, coefficient) pairs."""
        return [(Fraction(k, self.denom), c) for k, c in sorted(self._coeffs.items())]

    def exponents(self) -> List[Fraction]:
        return [e for e, _ in self.terms()]

    def is_zero(self) -> bool:
        return not self._coeffs

    def valuation(self) -> Fraction:
        """Leading exponent, or ``exact_below`` for a series known to be zero."""
        if not self._coeffs:
            return self.exact_below
        return Fraction(min(self._coeffs), self.denom)

    def leading_coefficient(self) -> Fraction:
        if not self._coeffs:
            raise TruncationError("series has no known nonzero term")
        return self._coeffs[min(self._coeffs)]

    def coefficient(self, exponent: Number) -> Fraction:
        """Coefficient of q^exponent.

        Raises:
            TruncationError: if the exponent is not below ``exact_below``.
        """
        exponent = Fraction(exponent)
        if exponent >= self.exact_below:
            raise TruncationError(f"coefficient of q^{exponent} requested, series exact below {self.exact_below}")
        scaled = exponent * self.denom
        if scaled.denominator != 1:
            return Fraction(0)
        return self._coeffs.get(scaled.numerator, Fraction(0))

    def __getitem__(self, exponent: Number) -> Fraction:
        return self.coefficient(exponent)

    def __repr__(self):
        shown = ", ".join(f"{c}*q^{e}" for e, c in self.terms()[:6])
        return f"QSeries({shown}{', ...' if len(self._coeffs) > 6 else ''}; exact below {self.exact_below})"

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.exact_below == other.exact_below and self.terms() == other.terms()

    def __hash__(self):
        return hash((self.exact_below, tuple(self.terms())))

    # arithmetic -------------------------------------------------------------

    def rescale(self, denom: int) -> "QSeries":
        """Same series over a finer granularity ``denom`` (a multiple of D)."""
        if denom % self.denom:
            raise InvalidParameterError(f"cannot rescale denominator {self.denom} to {denom}")
        f = denom // self.denom
        return QSeries(denom, {k * f: c for k, c in self._coeffs.items()}, self.exact_below)

    def _aligned(self, other: "QSeries") -> Tuple["QSeries", "QSeries"]:
        D = _lcm(self.denom, other.denom)
        return self.rescale(D), other.rescale(D)

    def truncate(self, exact_below: Number) -> "QSeries":
        """Drop terms at or above ``exact_below`` (which may not exceed the current bound)."""
        exact_below = Fraction(exact_below)
        if exact_below > self.exact_below:
            raise TruncationError(f"cannot extend series exact below {self.exact_below} to {exact_below}")
        return QSeries(self.denom, self._coeffs, exact_below)

    def __neg__(self) -> "QSeries":
        return QSeries(self.denom, {k: -c for k, c in self._coeffs.items()}, self.exact_below)

    def __add__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            other = QSeries.constant(other, self.exact_below)
        a, b = self._aligned(other)
        merged = dict(a._coeffs)
        for k, c in b._coeffs.items():
            merged[k] = merged.get(k, 0) + c
        return QSeries(a.denom, merged, min(a.exact_below, b.exact_below))

    __radd__ = __add__

    def __sub__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            other = QSeries.constant(other, self.exact_below)
        return self + (-other)

    def __rsub__(self, other) -> "QSeries":
        return (-self) + other

    def scale(self, factor: Number) -> "QSeries":
        factor = Fraction(factor)
        return QSeries(self.denom, {k: c * factor for k, c in self._coeffs.items()}, self.exact_below)

    def __mul__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            return self.scale(other)
        a, b = self._aligned(other)
        D = a.denom
        bound = min(a.exact_below + b.valuation(), b.exact_below + a.valuation())
        limit = bound * D
        out: Dict[int, Fraction] = {}
        b_items = sorted(b._coeffs.items())
        for ka, ca in a._coeffs.items():
            for kb, cb in b_items:
                k = ka + kb
                if k >= limit:
                    break
                out[k] = out.get(k, 0) + ca * cb
        return QSeries(D, out, bound)

    __rmul__ = __mul__

    def shift(self, exponent: Number) -> "QSeries":
        """Multiply by q^exponent."""
        exponent = Fraction(exponent)
        D = _lcm(self.denom, exponent.denominator)
        s = self.rescale(D)
        off = (exponent * D).numerator
        return QSeries(D, {k + off: c for k, c in s._coeffs.items()}, self.exact_below + exponent)

    def substitute(self, power: int) -> "QSeries":
        """Replace q by q^power (power a positive integer)."""
        if power <= 0:
            raise InvalidParameterError("substitution power must be positive")
        return QSeries(self.denom, {k * power: c for k, c in self._coeffs.items()}, self.exact_below * power)

    def inverse(self) -> "QSeries":
        """Multiplicative inverse; exact below ``exact_below - 2*valuation``."""
        if not self._coeffs:
            raise TruncationError("cannot invert a series with no known nonzero term")
        v = self.valuation()
        c0 = self.leading_coefficient()
        D = self.denom
        vk = min(self._coeffs)
        bound = self.exact_below - 2 * v
        # unit part u = 1 + sum u_j q^(j/D), j > 0, exact below exact_below - v
        unit = {k - vk: c / c0 for k, c in self._coeffs.items()}
        unit_limit = (self.exact_below - v) * D
        n_terms = int(unit_limit) if unit_limit.denominator == 1 else int(unit_limit) + 1
        inv: Dict[int, Fraction] = {0: Fraction(1)}
        unit_items = sorted((j, c) for j, c in unit.items() if j > 0)
        for n in range(1, n_terms):
            if n >= unit_limit:
                break
            acc = Fraction(0)
            for j, c in unit_items:
                if j > n:
                    break
                prev = inv.get(n - j)
                if prev:
                    acc -= c * prev
            if acc:
                inv[n] = acc
        result = QSeries(D, {n - vk: c / c0 for n, c in inv.items()}, bound)
        return result

    def __pow__(self, exponent: int) -> "QSeries":
        if not isinstance(exponent, int):
            raise InvalidParameterError("series powers must be integers")
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = QSeries.constant(1, Fraction(10 ** 9))
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def residue_filter(self, modulus: int, residue: Fraction) -> "QSeries":
        """Keep only terms whose exponent is congruent to ``residue`` modulo 1/modulus-scaled integers.

        Precisely: keep q^e with e - residue in Z.
        """
        residue = Fraction(residue)
        kept = {k: c for k, c in self._coeffs.items()
                if (Fraction(k, self.denom) - residue).denominator == 1}
        return QSeries(self.denom, kept, self.exact_below)

    # serialization ----------------------------------------------------------

    def to_json(self) -> dict:
        """JSON form ``{denom, terms: [[numerator, "p/q"], ...], exact_below}``."""
        def fmt(x: Fraction) -> str:
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return {
            "denom": self.denom,
            "terms": [[k, fmt(c)] for k, c in sorted(self._coeffs.items())],
            "exact_below": fmt(self.exact_below),
        }

    @classmethod
    def from_json(cls, payload: dict) -> "QSeries":
        return cls(payload["denom"], {int(k): Fraction(c) for k, c in payload["terms"]},
                   Fraction(payload["exact_below"]))


# -- integer kernels -----------------------------------------------------------


@lru_cache(maxsize=4096)
def _sigma1(n: int) -> int:
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d
            if d * d != n:
                total += n // d
        d += 1
    return total


def euler_product(shape: CycleShape, length: int) -> List[int]:
    """Coefficients of prod_k prod_{n>=1} (1 - q^(a_k n))^(b_k), first ``length`` terms.

    Exponents b_k may be negative. Uses n*g_n = sum_j c(j) g_(n-j) with
    c(j) = -sum_k b_k a_k sigma(j/a_k), which stays in integers.
    """
    c = [0] * length
    for j in range(1, length):
        total = 0
        for a, b in shape:
            if j % a == 0:
                total -= b * a * _sigma1(j // a)
        c[j] = total
    g = [0] * length
    if length:
        g[0] = 1
    for n in range(1, length):
        acc = 0
        for j in range(1, n + 1):
            if c[j]:
                acc += c[j] * g[n - j]
        if acc % n:
            raise ArithmeticError(f"non-integral Euler transform coefficient at n={n}")
        g[n] = acc // n
    return g


@lru_cache(maxsize=64)
def _inverse_product_table(shape: CycleShape, length: int) -> Tuple[int, ...]:
    return tuple(euler_product(tuple((a, -b) for a, b in shape), length))


def _table(shape: CycleShape, n: int) -> Tuple[int, ...]:
    # grow in powers of two so repeated queries reuse one table
    length = 64
    while length <= n:
        length *= 2
    return _inverse_product_table(shape, length)


# -- eta-derived series -------------------------------------------------------------


def _length_for(shift: Fraction, step: int, truncation: Fraction) -> int:
    span = (truncation - shift) / step
    if span <= 0:
        return 0
    return int(span) + (0 if span.denominator == 1 else 1)


def eta_series(truncation: Number) -> QSeries:
    """q^(1/24) * prod (1 - q^n), exact below ``truncation``.

    Raises:
        InvalidParameterError: if the truncation is below 1/24.
    """
    truncation = Fraction(truncation)
    if truncation < Fraction(1, 24):
        raise InvalidParameterError("eta needs truncation >= 1/24")
    shift = Fraction(1, 24)
    length = _length_for(shift, 1, truncation)
    values = euler_product(((1, 1),), max(length, 1))
    return QSeries.from_int_list(values, shift=shift, exact_below=truncation).rescale(24)


def eta_sigma(shape: Iterable[Sequence[int]], truncation: Number) -> QSeries:
    """prod_k eta(q^(a_k))^(b_k), exact below ``truncation``."""
    shape = normalize_shape(shape)
    truncation = Fraction(truncation)
    lead = Fraction(sum(a * b for a, b in shape), 24)
    length = _length_for(lead, 1, truncation)
    values = euler_product(shape, max(length, 1))
    return QSeries.from_int_list(values, shift=lead, exact_below=max(truncation, lead)).rescale(24)


def p_sigma(shape: Iterable[Sequence[int]], n: int) -> int:
    """Coefficient of q^n in q/eta_sigma = prod (1 - q^(a_k m))^(-b_k).

    The shape must have sum a_k b_k = 24 so that q/eta_sigma is a power series.
    Negative n gives 0.
    """
    shape = normalize_shape(shape)
    if sum(a * b for a, b in shape) != 24:
        raise InvalidParameterError("p_sigma needs a shape with sum a_k b_k = 24")
    if n < 0:
        return 0
    return _table(shape, n)[n]


def colored_partitions(d: int, n: int) -> int:
    """Number of partitions of n into d colours (coefficient of q^n in prod (1-q^m)^(-d))."""
    if d < 0:
        raise InvalidParameterError("number of colours must be nonnegative")
    if n < 0:
        return 0
    if n == 0:
        return 1
    if d == 0:
        return 0
    return _table(((1, d),), n)[n]


def global_bound(d: int, norm: Number) -> int:
    """Rank-d upper bound p_(d-1)(1 - r^2/2) - p_(d-1)(-r^2/2).

    Args:
        d: Rank of the hyperbolic algebra.
        norm: r^2, an even integer that is <= 0 or equal to 2.
    """
    norm = Fraction(norm)
    if norm > 0 and norm != 2:
        raise InvalidParameterError(f"global bound applies to norm <= 0 or 2, got {norm}")
    half = norm / 2
    if half.denominator != 1:
        raise InvalidParameterError(f"root norm must be even, got {norm}")
    h = int(half)
    return colored_partitions(d - 1, 1 - h) - colored_partitions(d - 1, -h)


def partition_series(shape: Iterable[Sequence[int]], truncation: Number) -> QSeries:
    """q/eta_sigma as a power series, exact below ``truncation``."""
    shape = normalize_shape(shape)
    truncation = Fraction(truncation)
    length = _length_for(Fraction(0), 1, truncation)
    table = _table(shape, max(length, 1))
    return QSeries.from_int_list(list(table[:length]), exact_below=truncation)


def _theta_factor(N: int, r: int, truncation: Fraction) -> QSeries:
    """N * eta^(MN) * F_r with F_r = sum_(k = 1-r mod N) p_M(k) q^((k - M/24)/N)."""
    M = m_for(N)
    margin = truncation + 1
    eta_power = eta_sigma(((1, M * N),), margin + Fraction(M, 24 * N))
    lead = Fraction(-M, 24 * N)
    target = (1 - r) % N
    kmax = int(N * (margin + Fraction(M * N, 24)) + Fraction(M, 24)) + 1
    terms: Dict[int, int] = {}
    D = 24 * N
    for k in range(target, kmax + 1, N):
        coeff = colored_partitions(M, k)
        exponent = Fraction(k, N) + lead
        terms[(exponent * D).numerator] = coeff
    # exactness: all k with (k - M/24)/N below the bound are present
    f_bound = Fraction(kmax + 1, N) + lead
    filtered = QSeries(D, terms, f_bound)
    return (eta_power * filtered).scale(N).truncate(truncation)


@lru_cache(maxsize=256)
def _theta_rhs_cached(N: int, r: Union[int, str], truncation: Fraction) -> QSeries:
    M = m_for(N)
    if r == "full":
        margin = truncation + 1
        main = eta_sigma(((1, M * N),), margin) * eta_sigma(((N, M),), margin + 1).inverse()
        return (main.truncate(truncation) + _theta_factor(N, 0, truncation)).truncate(truncation)
    return _theta_factor(N, r, truncation)


def theta_rhs(N: int, r: Union[int, str], truncation: Number) -> QSeries:
    """Eta-quotient right-hand side Theta (``r == "full"``) or Theta_r.

    Theta_r is computed from the residue-class filter of the q^(1/N)
    expansion of eta^(-M), so all coefficients are rational and no roots of
    unity appear.

    Raises:
        InvalidParameterError: for an unsupported N or residue.
    """
    shape_for(N)
    if r != "full" and (not isinstance(r, int) or not 0 <= r < N):
        raise InvalidParameterError(f"residue must be 'full' or in 0..{N - 1}, got {r}")
    truncation = Fraction(truncation)
    logger.debug("theta_rhs", extra={"N": N, "r": r, "truncation": str(truncation)})
    return _theta_rhs_cached(N, r, truncation)
