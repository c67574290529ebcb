"""Integral lattices: Smith normal form, discriminant groups, signatures.

Also classifies the even unimodular hyperbolic lattices that can occur as a
Picard lattice fixed by an order-6 automorphism, and tests the lattice
condition for mirror pairs of such K3 surfaces.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Optional, Sequence

Matrix = list[list[int]]


class DegenerateLatticeError(ValueError):
    """The Gram matrix is singular."""


class PicardClassificationError(ValueError):
    """The lattice violates one or more hypotheses of the classification."""

    def __init__(self, violations: Sequence[str]) -> None:
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def _as_rows(gram: Iterable[Iterable[int]]) -> tuple[tuple[int, ...], ...]:
    rows = tuple(tuple(int(x) for x in row) for row in gram)
    if any(len(r) != len(rows) for r in rows):
        raise ValueError("Gram matrix must be square")
    return rows


@dataclass(frozen=True)
class IntegralLattice:
    gram: tuple[tuple[int, ...], ...]
    name: Optional[str] = None

    def __post_init__(self) -> None:
        rows = _as_rows(self.gram)
        for i, r in enumerate(rows):
            for j in range(i):
                if r[j] != rows[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        object.__setattr__(self, "gram", rows)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def matrix(self) -> Matrix:
        return [list(r) for r in self.gram]

    def det(self) -> int:
        return determinant(self.matrix())

    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def is_unimodular(self) -> bool:
        return abs(self.det()) == 1

    def to_json(self) -> dict:
        out: dict = {"gram": self.matrix()}
        if self.name is not None:
            out["name"] = self.name
        return out

    @classmethod
    def from_json(cls, data: dict) -> IntegralLattice:
        if not isinstance(data, dict) or "gram" not in data:
            raise ValueError("lattice JSON needs a 'gram' entry")
        return cls(_as_rows(data["gram"]), data.get("name"))

    def __str__(self) -> str:
        return self.name or f"<lattice rank {self.rank}>"


def determinant(m: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant (Bareiss fraction-free elimination)."""
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def smith_invariants(m: Sequence[Sequence[int]]) -> list[int]:
    """Diagonal of the Smith normal form (non-negative, each divides the next)."""
    a = [list(r) for r in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    for t in range(min(rows, cols)):
        while True:
            entries = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
            if not entries:
                return [abs(a[i][i]) for i in range(t)] + [0] * (min(rows, cols) - t)
            _, pi, pj = min(entries)
            a[t], a[pi] = a[pi], a[t]
            for r in a:
                r[t], r[pj] = r[pj], r[t]
            p = a[t][t]
            clean = True
            for i in range(t + 1, rows):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                clean &= a[i][t] == 0
            for j in range(t + 1, cols):
                q = a[t][j] // p
                if q:
                    for r in a:
                        r[j] -= q * r[t]
                clean &= a[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p), None
            )
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
    return [abs(a[i][i]) for i in range(min(rows, cols))]


def direct_sum(a: IntegralLattice, b: IntegralLattice) -> IntegralLattice:
    n, m = a.rank, b.rank
    gram = [list(r) + [0] * m for r in a.gram] + [[0] * n + list(r) for r in b.gram]
    if a.name and b.name:
        name = f"{a.name}+{b.name}"
    else:
        name = a.name if not b.rank else b.name if not a.rank else None
    return IntegralLattice(_as_rows(gram), name)


def orthogonal_sum(lattices: Iterable[IntegralLattice]) -> IntegralLattice:
    return reduce(direct_sum, lattices, IntegralLattice(()))


def scale(a: IntegralLattice, n: int) -> IntegralLattice:
    if n == 0:
        raise ValueError("scaling factor must be non-zero")
    name = None if a.name is None else (a.name if n == 1 else f"{a.name}({n})")
    return IntegralLattice(tuple(tuple(n * x for x in r) for r in a.gram), name)


def signature(lat: IntegralLattice) -> tuple[int, int]:
    """(positive, negative) inertia via exact symmetric elimination."""
    a = [[Fraction(x) for x in r] for r in lat.gram]
    pos = neg = 0
    while a:
        n = len(a)
        piv = next((i for i in range(n) if a[i][i] != 0), None)
        if piv is None:
            off = next(((i, j) for i in range(n) for j in range(n) if a[i][j] != 0), None)
            if off is None:
                raise DegenerateLatticeError("degenerate lattice has no signature")
            i, j = off
            # change of basis e_i -> e_i + e_j makes the diagonal entry 2*a_ij
            a[i] = [x + y for x, y in zip(a[i], a[j])]
            for r in a:
                r[i] += r[j]
            piv = i
        a[0], a[piv] = a[piv], a[0]
        for r in a:
            r[0], r[piv] = r[piv], r[0]
        d = a[0][0]
        if d > 0:
            pos += 1
        else:
            neg += 1
        a = [[a[i][j] - a[i][0] * a[0][j] / d for j in range(1, n)] for i in range(1, n)]
    return (pos, neg)


@dataclass(frozen=True)
class DiscriminantGroup:
    divisors: tuple[int, ...]

    @property
    def order(self) -> int:
        return math.prod(self.divisors)

    def is_trivial(self) -> bool:
        return not self.divisors

    def __iter__(self):
        return iter(self.divisors)


def discriminant_group(lat: IntegralLattice) -> DiscriminantGroup:
    """Invariant factors of L*/L (the Smith form of the Gram matrix, 1s dropped)."""
    if lat.det() == 0:
        raise DegenerateLatticeError("discriminant group of a degenerate lattice")
    return DiscriminantGroup(tuple(d for d in smith_invariants(lat.matrix()) if d != 1))


def is_p_elementary(lat: IntegralLattice, p: int) -> bool:
    return all(d == p for d in discriminant_group(lat))


def is_hyperbolic(lat: IntegralLattice) -> bool:
    return lat.rank > 0 and signature(lat) == (1, lat.rank - 1)


def divisibility(lat: IntegralLattice, vector: Sequence[int]) -> int:
    """gcd of the products of ``vector`` with the whole lattice."""
    prods = [sum(v * g for v, g in zip(vector, col)) for col in zip(*lat.gram)]
    return reduce(math.gcd, prods, 0)


PICARD_NAMES = {2: "U", 10: "U+E8", 18: "U+E8^2"}


def classify_fixed_picard(lat: IntegralLattice) -> str:
    """Name of an even unimodular hyperbolic lattice of rank at most 20."""
    violations = []
    if not lat.is_even():
        violations.append("not-even")
    if not lat.is_unimodular():
        violations.append("not-unimodular")
    try:
        sig = signature(lat)
    except DegenerateLatticeError:
        sig = None
    if sig != (1, lat.rank - 1):
        violations.append(f"wrong-signature {sig}")
    if lat.rank not in PICARD_NAMES:
        violations.append(f"rank {lat.rank} not in (2, 10, 18)")
    if violations:
        raise PicardClassificationError(violations)
    return PICARD_NAMES[lat.rank]


def mirror_pair(s_m: IntegralLattice, s_w: IntegralLattice) -> bool:
    """Lattice test for a mirror pair with hyperbolic Picard lattices.

    Uses complementary ranks (sum 20) and equal discriminant groups, which
    decides the question for the unimodular lattices handled here but is not
    an embedding computation in general.
    """
    for lat in (s_m, s_w):
        if not lat.is_even() or not is_hyperbolic(lat):
            raise ValueError(f"{lat} is not an even hyperbolic lattice")
    if s_m.rank + s_w.rank != 20:
        return False
    return discriminant_group(s_m) == discriminant_group(s_w)


# --- named lattices -------------------------------------------------------

# Dynkin diagram of E8: chain 1-2-3-4-5-6-7 with node 8 attached to node 5.
_E8_EDGES = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)]


def negative_root_lattice(n: int, edges: Iterable[tuple[int, int]], name: str) -> IntegralLattice:
    gram = [[-2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in edges:
        gram[i][j] = gram[j][i] = 1
    return IntegralLattice(_as_rows(gram), name)


def hyperbolic_plane(n: int = 1) -> IntegralLattice:
    return IntegralLattice(((0, n), (n, 0)), "U" if n == 1 else f"U({n})")


U = hyperbolic_plane()
A2 = negative_root_lattice(2, [(0, 1)], "A2")
E8 = negative_root_lattice(8, _E8_EDGES, "E8")

_TERM = re.compile(r"^(?:(\d+))?(U(?:\((-?\d+)\))?|A2|E8)(?:\^(\d+))?$")


def lattice_from_name(expr: str) -> IntegralLattice:
    """Build e.g. ``"U"``, ``"U(3)+A2^3"``, ``"U^3+E8^2"`` or ``"U+2E8"``."""
    parts = []
    text = expr.replace(" ", "").replace("⊕", "+")
    for term in text.split("+"):
        m = _TERM.match(term)
        if not m:
            raise ValueError(f"unknown lattice term {term!r}")
        mult = int(m.group(1) or 1) * int(m.group(4) or 1)
        base = m.group(2)
        if base.startswith("U"):
            block = hyperbolic_plane(int(m.group(3) or 1))
        else:
            block = {"A2": A2, "E8": E8}[base]
        parts.extend([block] * mult)
    lat = orthogonal_sum(parts)
    return IntegralLattice(lat.gram, expr)


REGISTRY = {
    "U": "U",
    "U(3)": "U(3)",
    "A2": "A2",
    "E8": "E8",
    "E8^2": "E8^2",
    "U+E8": "U+E8",
    "U+E8^2": "U+E8^2",
    "U(3)+A2^3": "U(3)+A2^3",
    "K3": "U^3+E8^2",
}


def named_lattice(name: str) -> IntegralLattice:
    return lattice_from_name(REGISTRY.get(name, name))
