"""Weierstrass fibrations ``y^2 = x^3 + p(t)`` with ``deg p <= 12`` (j = 0).

A root of ``p`` of multiplicity ``m`` (the point at infinity carries
``12 - deg p``) gives a singular fiber whose type depends only on ``m``.
This module turns root data into fiber multisets, splits a multiset into
the two fibers over the fixed points of a base involution plus an even
remainder, and handles the diagonal automorphisms of the equation.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional

from .localact import euler_number

EULER_BUDGET = 24

# root multiplicity -> fiber over that root
FIBER_OF_MULTIPLICITY = {1: "II", 2: "IV", 3: "I0star", 4: "IVstar", 5: "IIstar"}
MULTIPLICITY_OF_FIBER = {v: k for k, v in FIBER_OF_MULTIPLICITY.items()}
MULTIPLICITY_OF_FIBER["I0"] = 0

SUPPORTED = ("II", "IV", "IVstar", "IIstar")
# fibers that can sit over a fixed point of a base involution (even root order)
INVOLUTION_SLOTS = ("I0", "IV", "IVstar")


@lru_cache(maxsize=None)
def fiber_euler(name: str) -> int:
    return euler_number(name)


@dataclass(frozen=True)
class RootProfile:
    """Multiset of root multiplicities of ``p`` on P^1."""

    multiplicities: tuple[int, ...]

    def __post_init__(self) -> None:
        mults = tuple(sorted((int(m) for m in self.multiplicities), reverse=True))
        if any(m < 1 for m in mults):
            raise ValueError("root multiplicities must be positive")
        if sum(mults) != 12:
            raise ValueError(f"root multiplicities must sum to 12, got {sum(mults)}")
        if mults and mults[0] >= 6:
            # a root of order >= 6 can be removed by rescaling; the result is
            # no longer a K3 model, so such data is not accepted here
            raise ValueError("a root of multiplicity >= 6 gives a non-minimal model")
        object.__setattr__(self, "multiplicities", mults)

    @classmethod
    def parse(cls, text: str) -> RootProfile:
        try:
            return cls(tuple(int(x) for x in text.split(",") if x.strip()))
        except ValueError as exc:
            raise ValueError(f"bad multiplicity list {text!r}: {exc}") from exc

    def to_json(self) -> dict:
        return {"mults": list(self.multiplicities)}

    @classmethod
    def from_json(cls, data: dict) -> RootProfile:
        if not isinstance(data, dict) or "mults" not in data:
            raise ValueError("root profile JSON needs a 'mults' list")
        return cls(tuple(data["mults"]))


@dataclass(frozen=True, order=True)
class FiberMultiset:
    """Counts of singular fibers; anything outside the supported four goes to ``unsupported``."""

    ii: int = 0
    iv: int = 0
    ivstar: int = 0
    iistar: int = 0
    unsupported: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if min(self.ii, self.iv, self.ivstar, self.iistar) < 0:
            raise ValueError("fiber counts must be non-negative")
        object.__setattr__(self, "unsupported", tuple(sorted(self.unsupported)))

    def counts(self) -> dict[str, int]:
        return {"II": self.ii, "IV": self.iv, "IVstar": self.ivstar, "IIstar": self.iistar}

    def euler(self) -> int:
        total = sum(n * fiber_euler(name) for name, n in self.counts().items())
        return total + sum(fiber_euler(name) for name in self.unsupported)

    def is_complete(self) -> bool:
        return self.euler() == EULER_BUDGET

    @property
    def supported(self) -> bool:
        return not self.unsupported

    def as_tuple(self) -> tuple[int, int, int, int]:
        """(ii, iv, ii*, iv*), the column order used when printing tables."""
        return (self.ii, self.iv, self.iistar, self.ivstar)

    def minus(self, names: Iterable[str]) -> Optional[FiberMultiset]:
        """Remove one fiber per name (``I0`` is always available); None if impossible."""
        c = Counter(self.counts())
        for name in names:
            if name == "I0":
                continue
            c[name] -= 1
        if min(c.values()) < 0:
            return None
        return FiberMultiset(c["II"], c["IV"], c["IVstar"], c["IIstar"], self.unsupported)

    def to_json(self) -> dict:
        out = {"ii": self.ii, "iv": self.iv, "iistar": self.iistar, "ivstar": self.ivstar}
        if self.unsupported:
            out["unsupported"] = list(self.unsupported)
        return out

    @classmethod
    def from_json(cls, data: dict) -> FiberMultiset:
        return cls(int(data["ii"]), int(data["iv"]), int(data["ivstar"]), int(data["iistar"]),
                   tuple(data.get("unsupported", ())))


def fibers_from_profile(r: RootProfile) -> FiberMultiset:
    c = Counter(FIBER_OF_MULTIPLICITY[m] for m in r.multiplicities)
    unsupported = tuple(name for name in sorted(c) if name not in SUPPORTED for _ in range(c[name]))
    fm = FiberMultiset(c["II"], c["IV"], c["IVstar"], c["IIstar"], unsupported)
    if not fm.is_complete():
        raise AssertionError(f"Euler sum {fm.euler()} != {EULER_BUDGET} for {r}")
    return fm


def profile_from_fibers(fm: FiberMultiset) -> RootProfile:
    """A root profile realizing the given (complete) fiber multiset."""
    mults = []
    for name, n in fm.counts().items():
        mults += [MULTIPLICITY_OF_FIBER[name]] * n
    mults += [MULTIPLICITY_OF_FIBER[name] for name in fm.unsupported]
    return RootProfile(tuple(mults))


# k -> (iv offset from n, iv*, ii*)
_NK_CASES = {2: (0, 0, 0), 3: (3, 1, 0), 4: (4, 0, 1), 5: (7, 1, 1), 6: (8, 0, 2)}


def fiber_counts_from_nk(n: int, k: int) -> FiberMultiset:
    """Singular fibers forced by an order-3 fixed locus of ``n`` points and ``k`` curves."""
    if k not in _NK_CASES:
        raise ValueError(f"k must lie in 2..6 for an elliptic row, got {k}")
    offset, ivstar, iistar = _NK_CASES[k]
    iv = n - offset
    rest = EULER_BUDGET - 4 * iv - 8 * ivstar - 10 * iistar
    if iv < 0 or rest < 0 or rest % 2:
        raise ValueError(f"(n, k) = ({n}, {k}) gives no valid fiber configuration")
    return FiberMultiset(rest // 2, iv, ivstar, iistar)


def _slot_key(name: str) -> int:
    return INVOLUTION_SLOTS.index(name)


def normalize_pair(pair: Iterable[str]) -> tuple[str, str]:
    a, b = sorted(pair, key=_slot_key)
    return (a, b)


def involution_decompositions(fm: FiberMultiset) -> list[tuple[tuple[str, str], FiberMultiset]]:
    """Ways to put two fibers over the fixed points of a base involution.

    The fibers away from those two points come in swapped pairs, so every
    type must occur an even number of times in the remainder.
    """
    if not fm.supported:
        raise ValueError("decomposition needs a multiset without unsupported fibers")
    out = []
    for i, a in enumerate(INVOLUTION_SLOTS):
        for b in INVOLUTION_SLOTS[i:]:
            rest = fm.minus((a, b))
            if rest is not None and all(v % 2 == 0 for v in rest.counts().values()):
                out.append(((a, b), rest))
    return out


@dataclass(frozen=True)
class WeightedAutomorphism:
    """Diagonal action ``(x, y, t) -> (xi^a x, xi^b y, xi^c t)`` with ``xi = exp(2 pi i / 6)``."""

    x_exponent: int
    y_exponent: int
    t_exponent: int

    def __post_init__(self) -> None:
        for name in ("x_exponent", "y_exponent", "t_exponent"):
            object.__setattr__(self, name, int(getattr(self, name)) % 6)

    @property
    def exponents(self) -> tuple[int, int, int]:
        return (self.x_exponent, self.y_exponent, self.t_exponent)

    def preserves_cubic(self) -> bool:
        """``y^2`` and ``x^3`` pick up the same factor."""
        return (2 * self.y_exponent - 3 * self.x_exponent) % 6 == 0

    def compose(self, other: WeightedAutomorphism) -> WeightedAutomorphism:
        return WeightedAutomorphism(*(u + v for u, v in zip(self.exponents, other.exponents)))

    def power(self, k: int) -> WeightedAutomorphism:
        return WeightedAutomorphism(*(k * u for u in self.exponents))

    @property
    def order(self) -> int:
        return 6 // math.gcd(6, *self.exponents)

    def compatible_with(self, profile: RootProfile, at_zero: int = 0, at_infinity: int = 0) -> bool:
        """Whether some ``p`` with these roots satisfies ``p(xi^c t) = xi^(2b) p(t)``.

        ``at_zero`` and ``at_infinity`` are the root orders placed at the two
        points fixed by the rotation (0 for no root there).  The other roots
        must fall into full rotation orbits.
        """
        if not self.preserves_cubic():
            return False
        rest = Counter(profile.multiplicities)
        for m in (at_zero, at_infinity):
            if m:
                rest[m] -= 1
                if rest[m] < 0:
                    return False
        orbit = 6 // math.gcd(6, self.t_exponent)
        if any(v % orbit for v in rest.values()):
            return False
        return (self.t_exponent * at_zero - 2 * self.y_exponent) % 6 == 0


def omega_character(a: WeightedAutomorphism) -> int:
    """Exponent of the factor picked up by ``dx ^ dt / y``."""
    if not a.preserves_cubic():
        raise ValueError(f"{a.exponents} does not preserve y^2 = x^3 + p(t)")
    return (a.x_exponent + a.t_exponent - a.y_exponent) % 6


# --- strata of the involutive case ------------------------------------------

STRATA = ((0, 0), (1, 0), (2, 0), (1, 1), (2, 1))


@dataclass(frozen=True, order=True)
class ModuliStratum:
    """Root orders ``2m`` at 0 and ``2n`` at infinity, normalized so ``m >= n``."""

    m: int
    n: int

    def __post_init__(self) -> None:
        m, n = max(self.m, self.n), min(self.m, self.n)
        if (m, n) not in STRATA:
            raise ValueError(f"(m, n) = ({self.m}, {self.n}) is not one of {STRATA}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)

    def specializes_to(self, other: ModuliStratum) -> bool:
        # raising a root order is a degeneration
        return self.m <= other.m and self.n <= other.n

    def specializations(self) -> list[ModuliStratum]:
        """Strata directly below this one (one root order raised)."""
        below = [s for s in all_strata() if s != self and self.specializes_to(s)]
        return [s for s in below if not any(t != s and t.specializes_to(s) for t in below)]

    def generalizations(self) -> list[ModuliStratum]:
        return [s for s in all_strata() if self in s.specializations()]

    def neighbors(self) -> list[ModuliStratum]:
        return sorted(self.generalizations() + self.specializations())

    @property
    def fibers(self) -> tuple[str, str]:
        return (INVOLUTION_SLOTS[self.n], INVOLUTION_SLOTS[self.m])

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "fibers": list(self.fibers),
            "generalizations": [[s.m, s.n] for s in self.generalizations()],
            "specializations": [[s.m, s.n] for s in self.specializations()],
        }


def all_strata() -> list[ModuliStratum]:
    return [ModuliStratum(m, n) for m, n in STRATA]


def moduli_stratum(m: int, n: int) -> ModuliStratum:
    return ModuliStratum(m, n)


def stratum_of_pair(pair: Iterable[str]) -> ModuliStratum:
    """Stratum containing a fibration with the given fibers over 0 and infinity."""
    a, b = (INVOLUTION_SLOTS.index(x) for x in pair)
    return ModuliStratum(a, b)
