"""
Dynkin diagrams of generalized simple-root sets and the finite/affine catalog.

Nodes carry a norm: 2 for short (fixed-lattice) roots and 2N for long (dual)
roots. A diagram is stored as the symmetric matrix of root inner products;
Cartan entries, bonds and arrows are derived from it. Components are named
by matching against catalog realizations with networkx graph isomorphism.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import networkx as nx
from sympy import Matrix, Rational

from .error_handling import InadmissibleDistanceError, InvalidParameterError, UnknownComponentError
from .logging_utils import get_logger

logger = get_logger()

FAMILY_ORDER = "abcdefg"
_LABEL_RE = re.compile(r"^(N\*)?([a-gA-G])(\d+)(?:\^\(([23])\))?$")
_PART_RE = re.compile(r"^((?:N\*)?[a-gA-G]\d+(?:\^\([23]\))?)(?:\^(\d+))?$")


# -- catalog ----------------------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    """Parameters of one finite or affine type.

    ``rho2`` is set for finite types, ``hdual`` for affine ones. ``ratio`` is
    1 for simply laced types and the squared length ratio otherwise.
    """
    name: str
    family: str
    rank: int
    affine: bool
    det: Fraction
    rho2: Optional[Fraction] = None
    hdual: Optional[int] = None
    twist: int = 1
    ratio: int = 1

    @property
    def nodes(self) -> int:
        return self.rank + 1 if self.affine else self.rank


def _finite_entry(family: str, n: int) -> CatalogEntry:
    name = f"{family}{n}"
    if family == "a" and n >= 1:
        return CatalogEntry(name, family, n, False, Fraction(n + 1), rho2=Fraction(n * (n + 1) * (n + 2), 12))
    if family == "b" and n >= 2:
        return CatalogEntry(name, family, n, False, Fraction(2) ** (2 - n),
                            rho2=Fraction(n * (2 * n - 1) * (2 * n + 1), 6), ratio=2)
    if family == "c" and n >= 2:
        return CatalogEntry(name, family, n, False, Fraction(1), rho2=Fraction(n * (n + 1) * (2 * n + 1), 6), ratio=2)
    if family == "d" and n >= 4:
        return CatalogEntry(name, family, n, False, Fraction(4), rho2=Fraction((n - 1) * n * (2 * n - 1), 6))
    exceptional = {
        ("e", 6): (Fraction(3), Fraction(78), 1),
        ("e", 7): (Fraction(2), Fraction(399, 2), 1),
        ("e", 8): (Fraction(1), Fraction(620), 1),
        ("f", 4): (Fraction(1, 4), Fraction(78), 2),
        ("g", 2): (Fraction(1, 3), Fraction(14), 3),
    }
    if (family, n) in exceptional:
        det, rho2, ratio = exceptional[(family, n)]
        return CatalogEntry(name, family, n, False, det, rho2=rho2, ratio=ratio)
    raise UnknownComponentError(f"no finite type {name}")


def _affine_entry(family: str, n: int, twist: int) -> CatalogEntry:
    fam = family.upper()
    if twist == 1:
        name = f"{fam}{n}"
        table = {
            "A": (n >= 1, n + 1, Fraction(n + 1), 1),
            "B": (n >= 3, 2 * n - 1, Fraction(2) ** (2 - n), 2),
            "C": (n >= 2, n + 1, Fraction(1), 2),
            "D": (n >= 4, 2 * n - 2, Fraction(4), 1),
        }
        if fam in table:
            ok, h, det, ratio = table[fam]
            if ok:
                return CatalogEntry(name, fam, n, True, det, hdual=h, ratio=ratio)
        exceptional = {("E", 6): (12, Fraction(3), 1), ("E", 7): (18, Fraction(2), 1),
                       ("E", 8): (30, Fraction(1), 1), ("F", 4): (9, Fraction(1, 4), 2),
                       ("G", 2): (4, Fraction(1, 3), 3)}
        if (fam, n) in exceptional:
            h, det, ratio = exceptional[(fam, n)]
            return CatalogEntry(name, fam, n, True, det, hdual=h, ratio=ratio)
    else:
        name = f"{fam}{n}^({twist})"
        # the label index is the Kac subscript; rank is the finite part
        if twist == 2 and fam == "A" and n % 2 == 1 and n >= 5:
            r = (n + 1) // 2
            return CatalogEntry(name, fam, r, True, Fraction(1), hdual=2 * r, twist=2, ratio=2)
        if twist == 2 and fam == "D" and n >= 3:
            r = n - 1
            return CatalogEntry(name, fam, r, True, Fraction(2) ** (2 - r), hdual=2 * r, twist=2, ratio=2)
        if twist == 2 and fam == "E" and n == 6:
            return CatalogEntry(name, fam, 4, True, Fraction(1, 4), hdual=12, twist=2, ratio=2)
        if twist == 3 and fam == "D" and n == 4:
            return CatalogEntry(name, fam, 2, True, Fraction(1, 3), hdual=6, twist=3, ratio=3)
    raise UnknownComponentError(f"no affine type {name}")


@lru_cache(maxsize=None)
def catalog_entry(name: str) -> CatalogEntry:
    """Parse a component name ("a3", "D4", "A5^(2)"; an "N*" prefix is ignored)."""
    m = _LABEL_RE.match(name)
    if not m:
        raise UnknownComponentError(f"unrecognized component label {name!r}")
    _, fam, n, twist = m.groups()
    n = int(n)
    if fam.islower():
        if twist:
            raise UnknownComponentError(f"finite types are untwisted: {name!r}")
        return _finite_entry(fam, n)
    return _affine_entry(fam, n, int(twist) if twist else 1)


def catalog_lookup(label: str, long: bool = False, N: int = 1) -> Tuple[Fraction, Fraction]:
    """(rho^2 or h-dual, det) of a component, scaled for long components.

    A long copy of a simply laced type has rho^2 multiplied by N and det
    divided by N^rank; h-dual is unchanged.

    Raises:
        UnknownComponentError: if the label is not in the catalog.
    """
    if label.startswith("N*"):
        label, long = label[2:], True
    entry = catalog_entry(label)
    if long and entry.ratio != 1:
        raise UnknownComponentError(f"{label} mixes root lengths and has no long copy")
    scale = N if long else 1
    det = entry.det / Fraction(scale) ** entry.rank
    if entry.affine:
        return Fraction(entry.hdual), det
    return entry.rho2 * scale, det


def catalog_names(nodes: int) -> List[str]:
    """Every catalog type with the given number of nodes."""
    names = []
    for fam in FAMILY_ORDER:
        try:
            names.append(_finite_entry(fam, nodes).name)
        except UnknownComponentError:
            pass
        try:
            names.append(_affine_entry(fam, nodes - 1, 1).name)
        except UnknownComponentError:
            pass
    twisted = [(f"A{2 * nodes - 3}^(2)"), (f"D{nodes}^(2)"), "E6^(2)", "D4^(3)"]
    for name in twisted:
        try:
            if catalog_entry(name).nodes == nodes:
                names.append(name)
        except UnknownComponentError:
            pass
    return names


def _shape(entry: CatalogEntry) -> Tuple[List[str], List[Tuple[int, int]]]:
    """Node lengths ('s' or 'l') and edges of the standard diagram of a type."""
    n, fam = entry.rank, entry.family

    def path(k: int) -> List[Tuple[int, int]]:
        return [(i, i + 1) for i in range(k - 1)]

    if not entry.affine:
        if fam == "a":
            return ["s"] * n, path(n)
        if fam == "b":
            return ["l"] * (n - 1) + ["s"], path(n)
        if fam == "c":
            return ["s"] * (n - 1) + ["l"], path(n)
        if fam == "d":
            return ["s"] * n, path(n - 1) + [(n - 3, n - 1)]
        if fam == "e":
            return ["s"] * n, path(n - 1) + [(2, n - 1)]
        if fam == "f":
            return ["l", "l", "s", "s"], path(4)
        return ["s", "l"], path(2)
    if entry.twist == 1:
        if fam == "A":
            if n == 1:
                return ["s", "s"], [(0, 1), (0, 1)]
            return ["s"] * (n + 1), path(n + 1) + [(n, 0)]
        if fam == "B":
            return ["l"] * n + ["s"], [(0, 2)] + [(i, i + 1) for i in range(1, n)]
        if fam == "C":
            return ["l"] + ["s"] * (n - 1) + ["l"], path(n + 1)
        if fam == "D":
            return ["s"] * (n + 1), path(n - 1) + [(n - 3, n - 1), (1, n)]
        if fam == "E":
            extra = {6: 5, 7: 0, 8: 6}[n]
            return ["s"] * (n + 1), path(n - 1) + [(2, n - 1), (extra, n)]
        if fam == "F":
            return ["l", "l", "l", "s", "s"], path(5)
        return ["l", "l", "s"], path(3)
    if fam == "A":
        return ["s"] * n + ["l"], [(0, 2)] + [(i, i + 1) for i in range(1, n)]
    if fam == "D" and entry.twist == 2:
        return ["s"] + ["l"] * (n - 1) + ["s"], path(n + 1)
    if fam == "E":
        return ["s", "s", "s", "l", "l"], path(5)
    return ["s", "s", "l"], path(3)


# -- diagrams ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CartanData:
    """Symmetric matrix of root inner products (diagonal = root norms)."""
    inner: Tuple[Tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "CartanData":
        return cls(tuple(tuple(Fraction(x) for x in row) for row in rows))

    @property
    def size(self) -> int:
        return len(self.inner)

    def cartan(self) -> Tuple[Tuple[Fraction, ...], ...]:
        """Cartan entries a_ij = 2 (r_i, r_j) / (r_i, r_i)."""
        return tuple(tuple(2 * self.inner[i][j] / self.inner[i][i] for j in range(self.size))
                     for i in range(self.size))

    def submatrix(self, nodes: Sequence[int]) -> "CartanData":
        return CartanData(tuple(tuple(self.inner[i][j] for j in nodes) for i in nodes))

    def sympy(self) -> Matrix:
        return Matrix([[Rational(x.numerator, x.denominator) for x in row] for row in self.inner])

    def graph(self) -> nx.Graph:
        """Nodes with their norm; edges weighted by the inner product."""
        g = nx.Graph()
        for i in range(self.size):
            g.add_node(i, norm=self.inner[i][i])
        for i in range(self.size):
            for j in range(i + 1, self.size):
                if self.inner[i][j] != 0:
                    g.add_edge(i, j, weight=self.inner[i][j])
        return g

    def components(self) -> List[List[int]]:
        return sorted(sorted(c) for c in nx.connected_components(self.graph()))


def bond(data: CartanData, i: int, j: int) -> Tuple[int, Optional[int]]:
    """(number of bonds, node the arrow points to or None) between nodes i and j."""
    a = data.cartan()
    aij, aji = a[i][j], a[j][i]
    bonds = int(max(abs(aij), abs(aji)))
    if data.inner[i][i] == data.inner[j][j]:
        return bonds, None
    return bonds, i if data.inner[i][i] < data.inner[j][j] else j


def diagram_from_points(vertices: Sequence, N: int, lattice) -> CartanData:
    """Root inner products of a set of R-points.

    Each vertex has ``kind`` ("fix" or "dual") and basis ``coeffs``; the
    root of a point p has level l = 1 (fix) or N (dual) and the inner
    product of two roots is -l_p l_q |p - q|^2 / 2 + l_p + l_q.

    Raises:
        InadmissibleDistanceError: if a squared distance is outside the
            admissible set for the pair of kinds.
    """
    N = Fraction(N)
    admissible = {
        ("fix", "fix"): {Fraction(4), Fraction(6), Fraction(8)},
        ("dual", "dual"): {4 / N, 6 / N, 8 / N},
        ("dual", "fix"): {2 + 2 / N, 4 + 2 / N},
        ("fix", "dual"): {2 + 2 / N, 4 + 2 / N},
    }
    levels = [Fraction(1) if v.kind == "fix" else N for v in vertices]
    n = len(vertices)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        rows[i][i] = 2 * levels[i]
        for j in range(i + 1, n):
            diff = [Fraction(a) - Fraction(b) for a, b in zip(vertices[i].coeffs, vertices[j].coeffs)]
            d2 = lattice.norm(diff)
            if d2 not in admissible[(vertices[i].kind, vertices[j].kind)]:
                raise InadmissibleDistanceError(
                    f"squared distance {d2} between {vertices[i].kind} and {vertices[j].kind} points")
            value = -levels[i] * levels[j] * d2 / 2 + levels[i] + levels[j]
            rows[i][j] = rows[j][i] = value
    return CartanData.from_rows(rows)


# -- classification ---------------------------------------------------------------------


def _positive_definite(data: CartanData) -> bool:
    return data.size == 0 or bool(data.sympy().is_positive_definite)


def _affine_connected(data: CartanData) -> bool:
    m = data.sympy()
    if m.det() != 0 or not m.is_positive_semidefinite:
        return False
    return all(_positive_definite(data.submatrix([k for k in range(data.size) if k != i]))
               for i in range(data.size))


def _finite_or_affine(data: CartanData) -> bool:
    for comp in data.components():
        sub = data.submatrix(comp)
        if not (_positive_definite(sub) or _affine_connected(sub)):
            return False
    return True


def classify(data: CartanData) -> str:
    """One of "finite", "affine", "hyperbolic", "other-indefinite", "mixed".

    Disconnected matrices are finite (affine) when every component is;
    a mix of finite and affine components is "mixed".
    """
    comps = data.components()
    if len(comps) > 1:
        kinds = {classify(data.submatrix(c)) for c in comps}
        if kinds <= {"finite"}:
            return "finite"
        if kinds <= {"affine"}:
            return "affine"
        if kinds <= {"finite", "affine"}:
            return "mixed"
        return "other-indefinite"
    if _positive_definite(data):
        return "finite"
    if _affine_connected(data):
        return "affine"
    if data.size > 1 and all(_finite_or_affine(data.submatrix([k for k in range(data.size) if k != i]))
                             for i in range(data.size)):
        return "hyperbolic"
    return "other-indefinite"


def eigen_signature(data: CartanData) -> Tuple[int, int, int]:
    """(positive, negative, zero) eigenvalue counts from the characteristic polynomial signs."""
    coeffs = [Rational(c) for c in data.sympy().charpoly().all_coeffs()]

    def changes(seq) -> int:
        signs = [1 if c > 0 else -1 for c in seq if c != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    n = len(coeffs) - 1
    pos = changes(coeffs)
    neg = changes([c * (-1) ** (n - k) for k, c in enumerate(coeffs)])
    return pos, neg, n - pos - neg


# -- realization and recognition --------------------------------------------------------


def catalog_realization(label: str, N: int) -> CartanData:
    """Root inner products of a catalog type at norms 2 (short) and 2N (long).

    Types mixing root lengths only exist when N equals their length ratio.

    Raises:
        UnknownComponentError: for an unknown label.
        InvalidParameterError: for a mixed type at a different N.
    """
    long = label.startswith("N*")
    entry = catalog_entry(label[2:] if long else label)
    if entry.ratio != 1 and entry.ratio != N:
        raise InvalidParameterError(f"{entry.name} needs N={entry.ratio}, got {N}")
    if long and entry.ratio != 1:
        raise UnknownComponentError(f"{label} mixes root lengths and has no long copy")
    lengths, edges = _shape(entry)
    norms = [Fraction(2 * N) if (x == "l" or long) else Fraction(2) for x in lengths]
    k = len(norms)
    rows = [[Fraction(0)] * k for _ in range(k)]
    for i in range(k):
        rows[i][i] = norms[i]
    for i, j in edges:
        if norms[i] == norms[j]:
            rows[i][j] += -norms[i] / 2
        else:
            rows[i][j] += -Fraction(N)
        rows[j][i] = rows[i][j]
    return CartanData.from_rows(rows)


@lru_cache(maxsize=None)
def _catalog_graphs(nodes: int, N: int) -> Tuple[Tuple[str, nx.Graph], ...]:
    found = []
    for name in catalog_names(nodes):
        entry = catalog_entry(name)
        labels = [name] if entry.ratio != 1 else [name, f"N*{name}"]
        for label in labels:
            if entry.ratio != 1 and entry.ratio != N:
                continue
            found.append((label, catalog_realization(label, N).graph()))
    return tuple(found)


def recognize_component(data: CartanData, N: int) -> str:
    """Catalog label of a connected diagram, or "unknown"."""
    g = data.graph()
    for label, ref in _catalog_graphs(data.size, N):
        if nx.is_isomorphic(g, ref, node_match=lambda a, b: a["norm"] == b["norm"],
                            edge_match=lambda a, b: a["weight"] == b["weight"]):
            return label
    return "unknown"


def _label_key(label: str) -> Tuple:
    long = label.startswith("N*")
    core = label[2:] if long else label
    m = _LABEL_RE.match(core)
    if not m:
        return (long, len(FAMILY_ORDER), 0, core)
    _, fam, n, twist = m.groups()
    return (long, FAMILY_ORDER.index(fam.lower()), -int(n), twist or "")


def format_label(component_labels: Sequence[str]) -> str:
    """Join component labels: short before long, families a..g, rank descending, repeats as ^k."""
    ordered = sorted(component_labels, key=_label_key)
    groups: List[Tuple[str, int]] = []
    for label in ordered:
        if groups and groups[-1][0] == label:
            groups[-1] = (label, groups[-1][1] + 1)
        else:
            groups.append((label, 1))
    return " ".join(label if count == 1 else f"{label}^{count}" for label, count in groups)


@dataclass(frozen=True)
class DynkinDiagram:
    """A classified diagram: inner products, component node lists and labels."""
    data: CartanData
    N: int
    components: Tuple[Tuple[int, ...], ...]
    component_labels: Tuple[str, ...]
    classification: str

    @property
    def label(self) -> str:
        return format_label(self.component_labels)

    def is_long(self, component: int) -> bool:
        return self.component_labels[component].startswith("N*")


def build_diagram(data: CartanData, N: int) -> DynkinDiagram:
    comps = tuple(tuple(c) for c in data.components())
    labels = tuple(recognize_component(data.submatrix(c), N) for c in comps)
    if "unknown" in labels:
        logger.debug("Unrecognized diagram component", extra={"N": N, "sizes": [len(c) for c in comps]})
    return DynkinDiagram(data=data, N=N, components=comps, component_labels=labels,
                         classification=classify(data))


def parse_label(text: str) -> List[str]:
    """Inverse of :func:`format_label`: expand "a1^3 N*a1^2" into component labels."""
    labels = []
    for part in text.split():
        m = _PART_RE.match(part)
        if not m:
            raise UnknownComponentError(f"unrecognized label part {part!r}")
        base, count = m.groups()
        labels.extend([base] * (int(count) if count else 1))
    for label in labels:
        catalog_entry(label[2:] if label.startswith("N*") else label)
    return labels
