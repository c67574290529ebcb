"""Linearized actions at fixed points and their propagation along curve trees.

Near an isolated fixed point an automorphism of finite order acts as
``diag(xi^k, xi^k')``; on a K3 surface the determinant is the character on
the holomorphic 2-form.  A smooth rational curve stable under the action is
either fixed pointwise or rotated with exactly two fixed points whose
along-curve exponents are opposite, so a single local datum fixes the action
on a whole tree of such curves.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Optional, Sequence, Union

from .data_files import load_json

ON_FIXED_CURVE = "on-fixed-curve"

TRIVIAL = "trivial"
INVOLUTION = "involution"
BASE_ACTIONS = (TRIVIAL, INVOLUTION)

Node = Hashable


class PropagationError(ValueError):
    """The local data cannot be extended consistently over the graph."""


class UnsupportedFiberError(ValueError):
    """No local analysis is available for this fiber / base-action pair."""


@dataclass(frozen=True)
class PointType:
    """Local type ``1/order (k, k')`` with character ``omega_exponent``.

    Exponents are reduced mod ``order`` and stored sorted.
    """

    order: int
    exponents: tuple[int, int]
    omega_exponent: int = 1

    def __post_init__(self) -> None:
        if self.order not in (2, 3, 6):
            raise ValueError(f"unsupported order {self.order}")
        k, kp = (int(e) % self.order for e in self.exponents)
        omega = int(self.omega_exponent) % self.order
        if (k + kp - omega) % self.order:
            raise ValueError(
                f"exponents {self.exponents} do not multiply to the character "
                f"xi^{self.omega_exponent} (order {self.order})"
            )
        object.__setattr__(self, "exponents", (min(k, kp), max(k, kp)))
        object.__setattr__(self, "omega_exponent", omega)

    @property
    def isolated(self) -> bool:
        return 0 not in self.exponents

    @property
    def label(self) -> str:
        k, kp = self.exponents
        return f"1/{self.order}({k},{kp})"

    def __str__(self) -> str:
        return self.label


P34 = PointType(6, (3, 4))
P25 = PointType(6, (2, 5))
P01 = PointType(6, (0, 1))
P22 = PointType(3, (2, 2))


def complete_eigenvalue(along_exponent: int, omega_exponent: int = 1, order: int = 6) -> int:
    """Transverse exponent forced by the determinant condition."""
    return (omega_exponent - along_exponent) % order


def power_type(t: PointType, i: int) -> Union[PointType, str]:
    """Type of the fixed point ``t`` for the ``i``-th power of the action.

    Returns ``ON_FIXED_CURVE`` when one eigenvalue becomes 1.
    """
    g = math.gcd(t.order, i)
    order = t.order // g
    step = i // g
    k, kp = (step * e % order for e in t.exponents)
    if k == 0 or kp == 0 or order == 1:
        return ON_FIXED_CURVE
    return PointType(order, (k, kp), step * t.omega_exponent)


def chain_sequence(start_exponent: int, length: int, omega_exponent: int = 1) -> list[PointType]:
    """Intersection types along an infinite chain of stable rational curves.

    ``start_exponent`` is the along-exponent, at the first intersection, of
    the curve ahead of it; it increases by one at every further intersection.
    """
    if length < 1:
        raise ValueError("length must be at least 1")
    return [
        PointType(6, (a, complete_eigenvalue(a, omega_exponent)), omega_exponent)
        for a in range(start_exponent, start_exponent + length)
    ]


@dataclass(frozen=True)
class GramGraph:
    """Incidence graph of smooth rational curves with fiber multiplicities.

    Repeated edges encode intersection number 2 (fibers I2, III).
    """

    nodes: tuple[tuple[Node, int], ...]
    edges: tuple[tuple[Node, Node], ...]

    def __post_init__(self) -> None:
        ids = [n for n, _ in self.nodes]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate node ids")
        for n, w in self.nodes:
            if w < 1:
                raise ValueError(f"node {n!r} has non-positive weight {w}")
        known = set(ids)
        for u, v in self.edges:
            if u not in known or v not in known:
                raise ValueError(f"edge ({u!r}, {v!r}) references an unknown node")
            if u == v:
                raise ValueError(f"self-loop at {u!r}")

    @classmethod
    def build(cls, weights: Mapping[Node, int] | Iterable[tuple[Node, int]],
              edges: Iterable[Sequence[Node]]) -> GramGraph:
        items = weights.items() if isinstance(weights, Mapping) else weights
        return cls(tuple((n, int(w)) for n, w in items), tuple((u, v) for u, v in edges))

    @classmethod
    def from_json(cls, data: Mapping) -> GramGraph:
        try:
            nodes = [(n["id"], int(n["weight"])) for n in data["nodes"]]
            edges = [tuple(e) for e in data["edges"]]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed GramGraph JSON: {exc}") from exc
        if any(len(e) != 2 for e in edges):
            raise ValueError("edges must be pairs")
        return cls.build(nodes, edges)

    def to_json(self) -> dict:
        return {
            "nodes": [{"id": n, "weight": w} for n, w in self.nodes],
            "edges": [[u, v] for u, v in self.edges],
        }

    @property
    def node_ids(self) -> list[Node]:
        return [n for n, _ in self.nodes]

    @property
    def weights(self) -> dict[Node, int]:
        return dict(self.nodes)

    def neighbors(self, node: Node) -> list[Node]:
        out = []
        for u, v in self.edges:
            if u == node:
                out.append(v)
            elif v == node:
                out.append(u)
        return out

    def adjacency(self) -> dict[Node, list[Node]]:
        adj: dict[Node, list[Node]] = {n: [] for n in self.node_ids}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def is_connected(self) -> bool:
        if not self.nodes:
            return True
        adj = self.adjacency()
        start = self.nodes[0][0]
        seen = {start}
        stack = [start]
        while stack:
            for m in adj[stack.pop()]:
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        return len(seen) == len(self.nodes)

    def is_tree(self) -> bool:
        return len(self.edges) == len(self.nodes) - 1 and self.is_connected()

    def intersection_matrix(self) -> list[list[int]]:
        """Gram matrix of the components: -2 on the diagonal, intersection counts off it."""
        ids = self.node_ids
        pos = {n: i for i, n in enumerate(ids)}
        m = [[-2 if i == j else 0 for j in range(len(ids))] for i in range(len(ids))]
        for u, v in self.edges:
            m[pos[u]][pos[v]] += 1
            m[pos[v]][pos[u]] += 1
        return m

    def induced(self, keep: Iterable[Node]) -> GramGraph:
        keep = set(keep)
        return GramGraph(
            tuple((n, w) for n, w in self.nodes if n in keep),
            tuple((u, v) for u, v in self.edges if u in keep and v in keep),
        )

    def automorphisms(self, fix: Iterable[Node] = ()) -> list[dict[Node, Node]]:
        """Weight- and incidence-preserving permutations fixing every node in ``fix``."""
        fix = set(fix)
        adj = self.adjacency()
        classes: dict[tuple, list[Node]] = {}
        for n, w in self.nodes:
            key = ("fixed", n) if n in fix else (w, len(adj[n]))
            classes.setdefault(key, []).append(n)
        groups = list(classes.values())
        edge_count: dict[frozenset, int] = {}
        for u, v in self.edges:
            key = frozenset((u, v))
            edge_count[key] = edge_count.get(key, 0) + 1
        result = []
        for perms in itertools.product(*(itertools.permutations(g) for g in groups)):
            sigma = {}
            for g, p in zip(groups, perms):
                sigma.update(zip(g, p))
            if all(
                edge_count.get(frozenset(sigma[x] for x in key), 0) == c
                for key, c in edge_count.items()
            ):
                result.append(sigma)
        return result


@dataclass(frozen=True)
class Anchor:
    """Known along-exponent of ``curve`` at one of its fixed points.

    ``neighbor`` names the other curve through that point, or is ``None``
    for a fixed point lying on no other curve of the graph.
    """

    curve: Node
    exponent: int
    neighbor: Optional[Node] = None


@dataclass(frozen=True)
class ActionAssignment:
    """Local action on every curve of a tree and at every fixed point on it.

    ``along[(x, z)]`` is the exponent of the eigenvalue tangent to ``x`` at
    the point ``x`` meets ``z``; ``terminal[x]`` lists the along-exponents at
    fixed points of a rotated curve ``x`` that lie on no other curve.
    """

    graph: GramGraph
    omega_exponent: int
    along: Mapping[tuple[Node, Node], int]
    fixed: frozenset
    terminal: Mapping[Node, tuple[int, ...]] = field(default_factory=dict)

    def is_fixed(self, node: Node) -> bool:
        return node in self.fixed

    def rotation(self, node: Node) -> int:
        """Rotation exponent of ``node`` up to inversion; 0 for a fixed curve."""
        if node in self.fixed:
            return 0
        for (x, _), a in self.along.items():
            if x == node:
                return min(a % 6, -a % 6)
        a = self.terminal[node][0]
        return min(a % 6, -a % 6)

    def edge_type(self, u: Node, v: Node) -> PointType:
        return PointType(6, (self.along[(u, v)], self.along[(v, u)]), self.omega_exponent)

    def terminal_types(self, node: Node) -> list[PointType]:
        return [
            PointType(6, (a, complete_eigenvalue(a, self.omega_exponent)), self.omega_exponent)
            for a in self.terminal.get(node, ())
        ]

    def fixed_points(self, nodes: Optional[Iterable[Node]] = None) -> list[tuple[tuple, PointType]]:
        """Fixed points located on ``nodes`` (default: all curves), with their types."""
        keep = set(self.graph.node_ids if nodes is None else nodes)
        out = []
        for u, v in self.graph.edges:
            if u in keep or v in keep:
                out.append((("edge", u, v), self.edge_type(u, v)))
        for n in self.graph.node_ids:
            if n in keep:
                out.extend((("terminal", n), t) for t in self.terminal_types(n))
        return out

    def anchors(self) -> list[Anchor]:
        """Every local datum that could have seeded this assignment."""
        out = [Anchor(x, a, z) for (x, z), a in self.along.items()]
        for n, exps in self.terminal.items():
            out.extend(Anchor(n, a, None) for a in exps)
        return out


def propagate(graph: GramGraph, anchor: Anchor, omega_exponent: int = 1) -> ActionAssignment:
    """Extend a single local datum over a tree of stable rational curves."""
    if not graph.is_tree():
        raise PropagationError("propagation requires a tree (no cycles, connected)")
    adj = graph.adjacency()
    if anchor.curve not in adj:
        raise PropagationError(f"unknown anchor curve {anchor.curve!r}")
    if anchor.neighbor is not None and anchor.neighbor not in adj[anchor.curve]:
        raise PropagationError(f"{anchor.curve!r} does not meet {anchor.neighbor!r}")

    along: dict[tuple[Node, Node], int] = {}
    terminal: dict[Node, list[int]] = {}
    fixed: set = set()
    seen: set = set()

    def force(x: Node, z: Node, a: int) -> None:
        a %= 6
        if along.setdefault((x, z), a) != a:
            raise PropagationError(f"conflicting exponents at {x!r}/{z!r}")
        b = complete_eigenvalue(a, omega_exponent)
        if along.setdefault((z, x), b) != b:
            raise PropagationError(f"conflicting exponents at {z!r}/{x!r}")

    queue: deque[tuple[Node, Optional[Node], int]] = deque()
    if anchor.neighbor is None:
        queue.append((anchor.curve, None, anchor.exponent % 6))
    else:
        force(anchor.curve, anchor.neighbor, anchor.exponent)
        queue.append((anchor.curve, anchor.neighbor, along[(anchor.curve, anchor.neighbor)]))
        queue.append((anchor.neighbor, anchor.curve, along[(anchor.neighbor, anchor.curve)]))

    while queue:
        x, came_from, a = queue.popleft()
        if x in seen:
            continue
        seen.add(x)
        others = [z for z in adj[x] if z != came_from]
        if a == 0:
            fixed.add(x)
            for z in others:
                force(x, z, 0)
                queue.append((z, x, along[(z, x)]))
            continue
        if came_from is None:
            terminal.setdefault(x, []).append(a)
        if len(others) > 1:
            raise PropagationError(
                f"curve {x!r} is rotated (exponent {a}) but meets {len(others) + 1} stable curves"
            )
        if others:
            z = others[0]
            force(x, z, -a)
            queue.append((z, x, along[(z, x)]))
        else:
            terminal.setdefault(x, []).append(-a % 6)

    if len(seen) != len(adj):
        raise PropagationError("graph is not connected")
    return ActionAssignment(
        graph=graph,
        omega_exponent=omega_exponent % 6,
        along=along,
        fixed=frozenset(fixed),
        terminal={n: tuple(sorted(v)) for n, v in terminal.items()},
    )


# --- Kodaira fibers -------------------------------------------------------

FIBER_ALIASES = {
    "I0*": "I0star", "IV*": "IVstar", "III*": "IIIstar", "II*": "IIstar",
}


def normalize_fiber_name(name: str) -> str:
    name = name.strip()
    return FIBER_ALIASES.get(name, name)


@dataclass(frozen=True)
class KodairaFiberType:
    name: str
    euler: int
    graph: GramGraph
    irreducible: bool

    @property
    def is_tree(self) -> bool:
        return not self.irreducible and self.graph.is_tree()


def _cycle_fiber(n: int) -> KodairaFiberType:
    ids = [f"c{i}" for i in range(n)]
    edges = [(ids[i], ids[(i + 1) % n]) for i in range(n)]
    return KodairaFiberType(f"I{n}", n, GramGraph.build([(i, 1) for i in ids], edges), False)


def kodaira_fiber(name: str) -> KodairaFiberType:
    """Catalog entry for a fiber token such as ``"IVstar"``, ``"II*"`` or ``"I5"``."""
    name = normalize_fiber_name(name)
    catalog = load_json("kodaira.json", packaged=True)
    if name in catalog and "nodes" in catalog[name]:
        entry = catalog[name]
        return KodairaFiberType(
            name, int(entry["euler"]), GramGraph.from_json(entry), bool(entry["irreducible"])
        )
    if name.startswith("I") and name[1:].isdigit() and int(name[1:]) >= 2:
        return _cycle_fiber(int(name[1:]))
    raise ValueError(f"unknown Kodaira fiber type {name!r}")


def euler_number(name: str) -> int:
    return kodaira_fiber(name).euler


@dataclass(frozen=True)
class LocalFixedData:
    p34: int = 0
    p25: int = 0
    fixed_rational_curves: int = 0

    def __post_init__(self) -> None:
        if min(self.p34, self.p25, self.fixed_rational_curves) < 0:
            raise ValueError("counts must be non-negative")

    def __add__(self, other: LocalFixedData) -> LocalFixedData:
        return LocalFixedData(
            self.p34 + other.p34,
            self.p25 + other.p25,
            self.fixed_rational_curves + other.fixed_rational_curves,
        )

    def scaled(self, m: int) -> LocalFixedData:
        return LocalFixedData(m * self.p34, m * self.p25, m * self.fixed_rational_curves)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.p34, self.p25, self.fixed_rational_curves)

    def to_json(self) -> dict:
        return {"p34": self.p34, "p25": self.p25, "curves": self.fixed_rational_curves}


# Published per-fiber contributions (zeta-elliptic surface, section through a
# weight-1 component).  Recomputed from first principles by _derive_fiber_data.
FIBER_CATALOG: dict[tuple[str, str], LocalFixedData] = {
    ("I0", TRIVIAL): LocalFixedData(0, 0, 0),
    ("II", TRIVIAL): LocalFixedData(1, 0, 0),
    ("IV", TRIVIAL): LocalFixedData(0, 1, 0),
    ("IVstar", TRIVIAL): LocalFixedData(2, 1, 0),
    ("IIstar", TRIVIAL): LocalFixedData(3, 4, 1),
    ("I0", INVOLUTION): LocalFixedData(3, 0, 0),
    ("IV", INVOLUTION): LocalFixedData(1, 1, 0),
    ("IVstar", INVOLUTION): LocalFixedData(3, 3, 1),
}


def section_exponent(base_action: str) -> int:
    """Exponent along the zero section at its intersection with a stable fiber.

    The section is pointwise fixed when the base action is trivial and is
    rotated by -1 when the base action is an involution.
    """
    if base_action == TRIVIAL:
        return 0
    if base_action == INVOLUTION:
        return 3
    raise ValueError(f"base action must be one of {BASE_ACTIONS}, got {base_action!r}")


def _count(points: Iterable[PointType], fixed_curves: int) -> LocalFixedData:
    points = list(points)
    return LocalFixedData(
        sum(1 for t in points if t == P34),
        sum(1 for t in points if t == P25),
        fixed_curves,
    )


def _smooth_fiber(e: int) -> LocalFixedData:
    # z -> lambda z on an elliptic curve has |1 - lambda|^2 fixed points, all
    # with tangent eigenvalue lambda.
    if e == 0:
        raise PropagationError("fiber would be pointwise fixed (genus-1 fixed curve)")
    from .cyclotomic import xi6_power

    count = (1 - xi6_power(e)).norm()
    assert count.denominator == 1
    t = PointType(6, (e, complete_eigenvalue(e)))
    # one of the fixed points is the section point
    return _count([t] * int(count), 0)


def _cuspidal_fiber(e: int) -> LocalFixedData:
    # normalization s -> lam*s with the cusp at s=0 and the section point at
    # s=inf; near the cusp (s^2, s^3) are linearizing coordinates.
    lam = -e % 6
    cusp = (2 * lam % 6, 3 * lam % 6)
    if (cusp[0] + cusp[1] - 1) % 6:
        raise PropagationError("no order-6 action on a cuspidal fiber with this section datum")
    section_point = PointType(6, (e, complete_eigenvalue(e)))
    return _count([section_point, PointType(6, cusp)], 0)


def _concurrent_lines_fiber(e: int) -> LocalFixedData:
    # the line through the section is stable; at the triple point only one
    # eigendirection remains, so the other two lines are swapped.
    if e == 0:
        raise PropagationError("section component cannot be fixed when two lines are swapped")
    section_point = PointType(6, (e, complete_eigenvalue(e)))
    triple_point = PointType(6, (-e, complete_eigenvalue(-e)))
    return _count([section_point, triple_point], 0)


def tree_fiber_actions(fiber: KodairaFiberType, base_action: str) -> list[tuple[dict, ActionAssignment]]:
    """All consistent actions on a tree-shaped fiber.

    Each candidate is a graph automorphism (the permutation of components)
    fixing the component met by the section; the stable components are then
    filled in by :func:`propagate`.
    """
    if not fiber.is_tree:
        raise UnsupportedFiberError(f"fiber {fiber.name} is not a tree of rational curves")
    graph = fiber.graph
    start = next(n for n, w in graph.nodes if w == 1)
    e = complete_eigenvalue(section_exponent(base_action))
    adj = graph.adjacency()
    found = []
    for sigma in graph.automorphisms(fix=[start]):
        stable = [n for n in graph.node_ids if sigma[n] == n]
        try:
            assignment = propagate(graph.induced(stable), Anchor(start, e, None))
        except PropagationError:
            continue
        if _moved_neighbors_consistent(assignment, sigma, adj):
            found.append((sigma, assignment))
    return found


def _orbit_size(sigma: Mapping, n: Node) -> int:
    size, m = 1, sigma[n]
    while m != n:
        m, size = sigma[m], size + 1
    return size


def _moved_neighbors_consistent(assignment: ActionAssignment, sigma: Mapping, adj) -> bool:
    for x in assignment.graph.node_ids:
        moved = [y for y in adj[x] if sigma[y] != y]
        if not moved:
            continue
        if assignment.is_fixed(x):
            return False
        a = assignment.rotation(x)
        period = 6 // math.gcd(a, 6)
        if any(_orbit_size(sigma, y) != period for y in moved):
            return False
    return True


def _derive_fiber_data(name: str, base_action: str) -> LocalFixedData:
    e = complete_eigenvalue(section_exponent(base_action))
    if name == "I0":
        return _smooth_fiber(e)
    if name == "II":
        return _cuspidal_fiber(e)
    if name == "IV":
        return _concurrent_lines_fiber(e)
    fiber = kodaira_fiber(name)
    actions = tree_fiber_actions(fiber, base_action)
    if len(actions) != 1:
        raise PropagationError(f"{name}/{base_action}: {len(actions)} consistent actions, expected 1")
    _, assignment = actions[0]
    points = [t for _, t in assignment.fixed_points()]
    return _count(points, len(assignment.fixed))


def fiber_fixed_locus(fiber: str, base_action: str) -> LocalFixedData:
    """Isolated points and rational curves fixed inside one stable fiber.

    The section curve itself is not included.
    """
    name = normalize_fiber_name(fiber)
    key = (name, base_action)
    if base_action not in BASE_ACTIONS:
        raise ValueError(f"base action must be one of {BASE_ACTIONS}, got {base_action!r}")
    if key not in FIBER_CATALOG:
        raise UnsupportedFiberError(f"no local analysis for fiber {name} with {base_action} base action")
    derived = _derive_fiber_data(name, base_action)
    if derived != FIBER_CATALOG[key]:
        raise AssertionError(f"{key}: derived {derived} disagrees with catalog {FIBER_CATALOG[key]}")
    return derived
