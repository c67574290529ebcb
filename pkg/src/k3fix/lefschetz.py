"""Holomorphic Lefschetz fixed-point formula, evaluated exactly in Q(xi6).

For an automorphism acting on the 2-form by a primitive root ``xi`` the
alternating trace on the structure-sheaf cohomology of a K3 surface is
``1 + conj(xi)``.  Each fixed component contributes a local term; the
fixed locus is admissible only if the terms add up to that trace.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Optional, Union

from .cyclotomic import Cyc6, root_of_unity
from .localact import P22, P25, P34, PointType

GENUS_EXCLUSION = "genus>1"


@dataclass(frozen=True, order=True)
class FixedLocus6:
    """Fixed locus of a primitive order-6 action."""

    p34: int = 0
    p25: int = 0
    rational_curves: int = 0
    genus_list: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "genus_list", tuple(self.genus_list))
        if min(self.p34, self.p25, self.rational_curves) < 0:
            raise ValueError("counts must be non-negative")
        if len(self.genus_list) > 1:
            raise ValueError("at most one fixed curve of positive genus")
        if any(g < 1 for g in self.genus_list):
            raise ValueError("genus_list holds only positive genera")

    @property
    def g_max(self) -> int:
        return max((1, *self.genus_list))

    def to_json(self) -> dict:
        return {
            "p34": self.p34,
            "p25": self.p25,
            "l": self.rational_curves,
            "genus": list(self.genus_list),
        }

    @classmethod
    def from_json(cls, data: dict) -> FixedLocus6:
        return cls(int(data["p34"]), int(data["p25"]), int(data["l"]), tuple(data.get("genus", ())))


@dataclass(frozen=True)
class FixedLocus3:
    """Fixed locus of an order-3 action: ``n`` points, ``k`` curves, top genus ``g``."""

    n: int
    k: int
    g: Optional[int] = None

    def __post_init__(self) -> None:
        if self.n < 0 or self.k < 0:
            raise ValueError("counts must be non-negative")
        if (self.g is None) != (self.k == 0):
            raise ValueError("g is empty exactly when there are no fixed curves")
        if self.g is not None and self.g < 0:
            raise ValueError("genus must be non-negative")

    def curve_genera(self) -> list[int]:
        if self.g is None:
            return []
        return [self.g] + [0] * (self.k - 1)

    def to_json(self) -> dict:
        return {"g": self.g, "n": self.n, "k": self.k}


Locus = Union[FixedLocus6, FixedLocus3]


def _primitive_root(order: int) -> Cyc6:
    if order not in (2, 3, 6):
        raise ValueError(f"unsupported order {order}")
    return root_of_unity(order, 1)


@lru_cache(maxsize=None)
def point_term(t: PointType) -> Cyc6:
    """Contribution ``1/((1 - xi^k)(1 - xi^k'))`` of an isolated fixed point."""
    if not t.isolated:
        raise ValueError(f"{t} lies on a fixed curve; it has no isolated point term")
    xi = _primitive_root(t.order)
    k, kp = t.exponents
    return 1 / ((1 - xi ** k) * (1 - xi ** kp))


@lru_cache(maxsize=None)
def curve_term(genus: int, order: int) -> Cyc6:
    """Contribution of a fixed smooth curve of the given genus (``C^2 = 2g - 2``)."""
    if genus < 0:
        raise ValueError("genus must be non-negative")
    xi = _primitive_root(order)
    return (1 - genus) / (1 - xi) - xi * (2 * genus - 2) / ((1 - xi) * (1 - xi))


@lru_cache(maxsize=None)
def expected_trace(order: int) -> Cyc6:
    return 1 + _primitive_root(order).conj()


def holomorphic_sum(locus: Locus, order: Optional[int] = None) -> Cyc6:
    if isinstance(locus, FixedLocus6):
        order = 6 if order is None else order
        if order != 6:
            raise ValueError("an order-6 fixed locus is evaluated at order 6")
        total = locus.p34 * point_term(P34) + locus.p25 * point_term(P25)
        total += locus.rational_curves * curve_term(0, 6)
        for g in locus.genus_list:
            total += curve_term(g, 6)
        return total
    if isinstance(locus, FixedLocus3):
        order = 3 if order is None else order
        if order != 3:
            raise ValueError("an order-3 fixed locus is evaluated at order 3")
        total = locus.n * point_term(P22)
        for g in locus.curve_genera():
            total += curve_term(g, 3)
        return total
    raise TypeError(f"not a fixed locus: {locus!r}")


def verify_holomorphic(locus: Locus, order: Optional[int] = None) -> bool:
    if order is None:
        order = 6 if isinstance(locus, FixedLocus6) else 3
    return holomorphic_sum(locus, order) == expected_trace(order)


def integer_identity(locus: FixedLocus6) -> bool:
    """The same constraint written over the integers."""
    return locus.p34 + 2 * locus.p25 - 6 * locus.rational_curves + 6 * locus.g_max == 12


def exclusion_reason(locus: FixedLocus6) -> Optional[str]:
    """Why a formula-admissible locus cannot occur geometrically, if known.

    A fixed curve of genus at least 2 is ruled out by the geometric argument
    even though the trace identity allows it.
    """
    if any(g >= 2 for g in locus.genus_list):
        return GENUS_EXCLUSION
    return None


@dataclass(frozen=True)
class Bounds:
    max_p34: int = 12
    max_p25: int = 9
    max_l: int = 3
    max_g: int = 1


def iter_loci(bounds: Bounds = Bounds()) -> Iterator[FixedLocus6]:
    for genus in [()] + [(g,) for g in range(1, bounds.max_g + 1)]:
        g_max = max((1, *genus))
        for l in range(bounds.max_l + 1):
            for p25 in range(bounds.max_p25 + 1):
                p34 = 12 - 6 * g_max + 6 * l - 2 * p25
                if 0 <= p34 <= bounds.max_p34:
                    yield FixedLocus6(p34, p25, l, genus)


def enumerate_loci(bounds: Bounds = Bounds()) -> list[FixedLocus6]:
    """All profiles within ``bounds`` satisfying the trace identity, in a fixed order."""
    return sorted(iter_loci(bounds), key=lambda x: (x.genus_list, x.rational_curves, x.p25, x.p34))
