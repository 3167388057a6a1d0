"""
The Leech lattice in sqrt(8)-scaled integer coordinates over the Golay labels.

A vector is stored as its 24 coordinates x_i = sqrt(8)*lambda_i, so the norm
is sum(x_i^2)/8. Projections onto the sigma-fixed space and its orthogonal
complement average (respectively remove the average) over each N-cycle.
"""

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from .error_handling import InvalidParameterError, VerificationError
from .golay import CodePermutation, GolayCode, build_code, cycle_data, find_shape_automorphism, support_of
from .logging_utils import get_logger, progress_enabled
from .qseries import m_for

logger = get_logger()

AmbientVector = Tuple[Fraction, ...]


def norm(v: Sequence) -> Fraction:
    """(sum of squares)/8 of a sqrt(8)-scaled vector."""
    return sum(Fraction(x) * Fraction(x) for x in v) / 8


def inner(u: Sequence, v: Sequence) -> Fraction:
    return sum(Fraction(a) * Fraction(b) for a, b in zip(u, v)) / 8


def is_leech(v: Sequence[int], code: Optional[GolayCode] = None) -> bool:
    """Membership test for integer sqrt(8)-scaled coordinates.

    All entries are congruent to m mod 2, each mod-4 class is a C-set and the
    coordinate sum is 4m mod 8.
    """
    code = code or build_code()
    v = [int(x) for x in v]
    if len(v) != 24:
        return False
    m = v[0] % 2
    if any(x % 2 != m for x in v):
        return False
    for residue in ((0, 2) if m == 0 else (1, 3)):
        if not code.is_cset(i for i, x in enumerate(v) if x % 4 == residue):
            return False
    return sum(v) % 8 == (4 * m) % 8


def is_leech_array(vectors: np.ndarray, code: Optional[GolayCode] = None) -> np.ndarray:
    """Vectorized :func:`is_leech` over the rows of an integer array."""
    code = code or build_code()
    arr = np.asarray(vectors, dtype=np.int64)
    m = arr[:, 0] % 2
    same_parity = np.all(arr % 2 == m[:, None], axis=1)
    key = np.where(m == 0, 2, 1)
    weights = (1 << np.arange(24, dtype=np.int64))
    masks = ((arr % 4 == key[:, None]) * weights).sum(axis=1)
    in_code = np.isin(masks, code.words.astype(np.int64))
    sums = arr.sum(axis=1) % 8 == (4 * m) % 8
    return same_parity & in_code & sums


def generators(code: Optional[GolayCode] = None) -> np.ndarray:
    """Integer generating set of the Leech lattice (rows, sqrt(8) coordinates)."""
    code = code or build_code()
    rows = []
    for g in code.generators:
        rows.append([2 if g >> i & 1 else 0 for i in range(24)])
    for i in range(1, 24):
        row = [0] * 24
        row[0] = 4
        row[i] = 4
        rows.append(row)
    row = [0] * 24
    row[0] = 8
    rows.append(row)
    rows.append([-3] + [1] * 23)
    return np.array(rows, dtype=np.int64)


@lru_cache(maxsize=1)
def norm4_vectors() -> np.ndarray:
    """All 196560 minimal vectors as an int8 array, grouped by shape."""
    code = build_code()
    blocks = []

    pairs = []
    for i, j in combinations(range(24), 2):
        for si in (4, -4):
            for sj in (4, -4):
                row = [0] * 24
                row[i], row[j] = si, sj
                pairs.append(row)
    blocks.append(np.array(pairs, dtype=np.int8))

    # even number of minus signs on each octad
    sign_patterns = [p for p in range(256) if bin(p).count("1") % 2 == 0]
    octad_rows = []
    for o in code.octads:
        pos = support_of(int(o))
        for p in sign_patterns:
            row = [0] * 24
            for b, idx in enumerate(pos):
                row[idx] = -2 if p >> b & 1 else 2
            octad_rows.append(row)
    blocks.append(np.array(octad_rows, dtype=np.int8))

    bits = ((code.words[:, None].astype(np.int64) >> np.arange(24)) & 1).astype(np.int8)
    base = np.where(bits == 1, 1, -1).astype(np.int8)
    odd = np.repeat(base, 24, axis=0)
    rows = np.arange(len(odd))
    cols = np.tile(np.arange(24), len(base))
    odd[rows, cols] = np.where(odd[rows, cols] == 1, -3, 3)
    blocks.append(odd)
    return np.concatenate(blocks)


def norm4_count() -> Dict[str, int]:
    """Counts of the three shapes of minimal vectors and their total."""
    vecs = norm4_vectors()
    shapes = {"4^2": 4 * comb(24, 2), "2^8": 759 * 128, "odd": 4096 * 24}
    total = sum(shapes.values())
    if len(vecs) != total:
        raise VerificationError("minimal vector generation is inconsistent", [{"generated": len(vecs), "expected": total}])
    shapes["total"] = total
    return shapes


def project(v: Sequence, sigma: CodePermutation) -> Tuple[AmbientVector, AmbientVector]:
    """Split v into its sigma-fixed part (cycle averages) and the orthogonal part."""
    fix = [Fraction(x) for x in v]
    for cyc in sigma.long_cycles():
        avg = sum(Fraction(v[i]) for i in cyc) / len(cyc)
        for i in cyc:
            fix[i] = avg
    perp = [Fraction(x) - f for x, f in zip(v, fix)]
    return tuple(fix), tuple(perp)


# -- short vectors of the complement dual ------------------------------------------------


def _cycle_norm(N: int, n1: int, n2: int) -> Fraction:
    return Fraction(N * (n1 + 4 * n2) - (n1 + 2 * n2) ** 2, 2 * N)


@lru_cache(maxsize=None)
def _cycle_options(N: int, k: int, bound: Fraction) -> Tuple[Tuple[Fraction, int, bool, int], ...]:
    """Per-cycle choices (norm, multiplicity, ones-on-S, number of twos) below the bound.

    S is the intersection of the codeword with the cycle, |S| = k. The ones
    of the normalized entry vector sit on S or on its complement; twos fill
    non-one positions leaving at least one zero.
    """
    options = []
    for n2 in range(0, N - k):
        nu = _cycle_norm(N, k, n2)
        if nu <= bound:
            options.append((nu, comb(N - k, n2), True, n2))
    for n2 in range(0, k):
        nu = _cycle_norm(N, N - k, n2)
        if nu <= bound:
            options.append((nu, comb(k, n2), False, n2))
    return tuple(options)


def _cycle_poly(N: int, k: int, bound: Fraction) -> Dict[Fraction, int]:
    poly: Dict[Fraction, int] = {}
    for nu, mult, _, _ in _cycle_options(N, k, bound):
        poly[nu] = poly.get(nu, 0) + mult
    return poly


def _poly_product(polys: Iterable[Dict[Fraction, int]], bound: Fraction) -> Dict[Fraction, int]:
    acc = {Fraction(0): 1}
    for p in polys:
        nxt: Dict[Fraction, int] = {}
        for a, ca in acc.items():
            for b, cb in p.items():
                s = a + b
                if s <= bound:
                    nxt[s] = nxt.get(s, 0) + ca * cb
        acc = nxt
    return acc


def class_tuples(N: int) -> List[Tuple[int, ...]]:
    """Distinct per-cycle classes {S, S^c} of the codewords, as canonical bitmasks within each cycle."""
    code = build_code()
    _, cycles = cycle_data(N)
    full = (1 << N) - 1
    seen = set()
    for w in code.words:
        w = int(w)
        key = []
        for cyc in cycles:
            s = 0
            for b, idx in enumerate(cyc):
                if w >> idx & 1:
                    s |= 1 << b
            key.append(min(s, full ^ s))
        seen.add(tuple(key))
    return sorted(seen)


def _witness(N: int, cycles: Sequence[Sequence[int]], key: Sequence[int], target: Fraction,
             bound: Fraction) -> Optional[AmbientVector]:
    """One perp vector of norm ``target`` in the class tuple ``key`` (sqrt(8) units)."""
    options = [_cycle_options(N, bin(s).count("1"), bound) for s in key]

    def search(j: int, remaining: Fraction, chosen: List[Tuple]) -> Optional[List[Tuple]]:
        if j == len(options):
            return chosen if remaining == 0 else None
        for opt in options[j]:
            if opt[0] <= remaining:
                found = search(j + 1, remaining - opt[0], chosen + [opt])
                if found is not None:
                    return found
        return None

    picks = search(0, target, [])
    if picks is None:
        return None
    vec = [Fraction(0)] * 24
    for cyc, s, (_, _, ones_on_s, n2) in zip(cycles, key, picks):
        in_s = [bool(s >> b & 1) for b in range(N)]
        ones = in_s if ones_on_s else [not x for x in in_s]
        b_vals = [1 if o else 0 for o in ones]
        placed = 0
        for b in range(N):
            if placed == n2:
                break
            if not ones[b]:
                b_vals[b] = 2
                placed += 1
        # keep a zero: twos never fill every non-one slot
        mean = Fraction(sum(b_vals), N)
        for b, idx in enumerate(cyc):
            vec[idx] = 2 * (b_vals[b] - mean)
    return tuple(vec)


def enumerate_short_dual_perp(N: int, norm_bound: Fraction = Fraction(2), jobs: int = 1
                              ) -> List[Tuple[Fraction, int, AmbientVector]]:
    """Norms, counts and one witness of the nonzero vectors of L* with norm <= norm_bound.

    L* is the projection of the Leech lattice onto the orthogonal complement
    of the fixed space. Counts are exact: per cycle the normalized entries lie
    in {0, 1, 2} and the per-cycle generating polynomials are multiplied over
    every distinct class tuple of codewords.
    """
    norm_bound = Fraction(norm_bound)
    if norm_bound > 2:
        raise InvalidParameterError(f"enumeration covers norms up to 2 only, got {norm_bound}")
    m_for(N)
    _, cycles = cycle_data(N)
    keys = class_tuples(N)
    logger.info(f"Enumerating L* for N={N}", extra={"class_tuples": len(keys), "bound": str(norm_bound)})

    def chunk_counts(chunk: Sequence[Tuple[int, ...]]) -> Dict[Fraction, int]:
        total: Dict[Fraction, int] = {}
        for key in chunk:
            prod = _poly_product((_cycle_poly(N, bin(s).count("1"), norm_bound) for s in key), norm_bound)
            for nu, c in prod.items():
                total[nu] = total.get(nu, 0) + c
        return total

    size = max(1, len(keys) // (4 * max(1, jobs)))
    chunks = [keys[i:i + size] for i in range(0, len(keys), size)]
    counts: Dict[Fraction, int] = {}
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as executor:
        for partial in tqdm(executor.map(chunk_counts, chunks), total=len(chunks),
                            desc=f"L* N={N}", disable=not progress_enabled()):
            for nu, c in partial.items():
                counts[nu] = counts.get(nu, 0) + c

    results = []
    for nu in sorted(counts):
        if nu == 0:
            if counts[nu] != 1:
                raise VerificationError("zero vector counted more than once", [{"count": counts[nu]}])
            continue
        witness = None
        for key in keys:
            witness = _witness(N, cycles, key, nu, norm_bound)
            if witness is not None:
                break
        results.append((nu, counts[nu], witness))
    return results


def single_position_family(N: int) -> List[AmbientVector]:
    """The vectors +-pi_2(4 e_i) for i on the N-cycles, all of norm 2(N-1)/N."""
    sigma = find_shape_automorphism(N)
    family = []
    for cyc in sigma.long_cycles():
        for i in cyc:
            for sign in (4, -4):
                v = [0] * 24
                v[i] = sign
                family.append(project(v, sigma)[1])
    return family


def projected_word_norm(word_mask: int, N: int) -> Fraction:
    """Norm of pi_2(2c) for a codeword c: sum over cycles of (k - k^2/N)/2."""
    _, cycles = cycle_data(N)
    total = Fraction(0)
    for cyc in cycles:
        k = sum(1 for i in cyc if word_mask >> i & 1)
        total += Fraction(k) / 2 - Fraction(k * k, 2 * N)
    return total


def preimage_census(N: int) -> Dict[str, int]:
    """Group the minimal vectors by fixed part; fixed parts of norm 2+2/N must be hit exactly N times.

    Returns:
        dict: number of such fixed parts and the set of group sizes seen.
    """
    fixed, cycles = cycle_data(N)
    vecs = norm4_vectors().astype(np.int64)
    a = vecs[:, fixed]
    s = np.stack([vecs[:, list(cyc)].sum(axis=1) for cyc in cycles], axis=1)
    scaled = N * (a * a).sum(axis=1) + (s * s).sum(axis=1)
    target = 16 * N + 16
    keys = np.concatenate([a, s], axis=1)[scaled == target]
    _, counts = np.unique(keys, axis=0, return_counts=True)
    sizes = sorted(set(counts.tolist()))
    logger.info(f"Preimage census for N={N}", extra={"fixed_parts": len(counts), "sizes": sizes})
    return {"fixed_parts": int(len(counts)), "group_sizes": sizes}
