"""Strong homotopy of finite posets: homotopy classes of maps, cores and (co)finality.

Two monotone maps are strongly homotopic when a zigzag of pointwise
comparable maps joins them.  Any comparable pair ``f <= g`` can be joined by
maps that differ one point at a time (change ``f`` to ``g`` at a maximal
point where they differ, repeat), so the searches below only move one point
per step.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Any, Callable, NamedTuple, Sequence

from .poset import (
    Chain,
    MonotoneMap,
    Poset,
    PosetError,
    bits,
    check_budget,
    comma_over,
    comma_under,
    compose,
    covers,
    identity,
    induced_subposet,
    map_leq,
    maps_comparable,
    subdivision,
)


@dataclass(frozen=True)
class HomotopyChain:
    """Maps ``f0, ..., fk`` with each consecutive pair pointwise comparable."""

    steps: tuple[MonotoneMap, ...]

    def __post_init__(self):
        steps = tuple(self.steps)
        object.__setattr__(self, "steps", steps)
        if not steps:
            raise PosetError("a homotopy chain needs at least one map")
        first = steps[0]
        for a, b in zip(steps, steps[1:]):
            if b.dom != first.dom or b.cod != first.cod:
                raise PosetError("chain steps must share domain and codomain")
            if not maps_comparable(a, b):
                raise PosetError(f"consecutive steps {a} and {b} are not comparable")

    @property
    def start(self) -> MonotoneMap:
        return self.steps[0]

    @property
    def end(self) -> MonotoneMap:
        return self.steps[-1]

    def __len__(self) -> int:
        return len(self.steps) - 1

    def reversed(self) -> "HomotopyChain":
        return HomotopyChain(self.steps[::-1])

    def then(self, other: "HomotopyChain") -> "HomotopyChain":
        if self.end != other.start:
            raise PosetError("chains do not meet")
        return HomotopyChain(self.steps + other.steps[1:])


def _dedupe(steps: Sequence[MonotoneMap]) -> tuple[MonotoneMap, ...]:
    out: list[MonotoneMap] = []
    for s in steps:
        if not out or out[-1].assignment != s.assignment:
            out.append(s)
    return tuple(out)


def _search(
    dom: Poset,
    cod: Poset,
    start: tuple[int, ...],
    is_target: Callable[[tuple[int, ...]], bool],
) -> list[tuple[int, ...]] | None:
    """Breadth-first search of the comparability component of ``start`` in POSet(dom, cod)."""
    n = len(dom)
    lower = [[] for _ in range(n)]
    upper = [[] for _ in range(n)]
    for i, j in covers(dom):
        lower[j].append(i)
        upper[i].append(j)
    comparable = [(cod.up(y) | cod.down(y)) & ~(1 << y) for y in cod]
    prev: dict[tuple[int, ...], tuple[int, ...] | None] = {start: None}
    todo = deque([start])
    found = start if is_target(start) else None
    while todo and found is None:
        f = todo.popleft()
        for p in range(n):
            allowed = comparable[f[p]]
            for q in lower[p]:
                allowed &= cod.up(f[q])
            for q in upper[p]:
                allowed &= cod.down(f[q])
            for y in bits(allowed):
                g = f[:p] + (y,) + f[p + 1 :]
                if g in prev:
                    continue
                prev[g] = f
                if is_target(g):
                    found = g
                    break
                todo.append(g)
            if found is not None:
                break
    if found is None:
        return None
    path = [found]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    return path[::-1]


def strong_homotopic(f: MonotoneMap, g: MonotoneMap, budget: int | None = None) -> HomotopyChain | None:
    """A chain from ``f`` to ``g`` if they are strongly homotopic, else None.

    The search is exhaustive, so None is a definitive negative.  Raises
    :class:`~chromalat.poset.BudgetError` if ``|cod|^|dom|`` exceeds the budget.
    """
    if f.dom != g.dom or f.cod != g.cod:
        raise PosetError("maps must share domain and codomain")
    check_budget(f.dom, f.cod, budget)
    if f.assignment == g.assignment:
        return HomotopyChain((f,))
    target = g.assignment
    path = _search(f.dom, f.cod, f.assignment, lambda a: a == target)
    if path is None:
        return None
    return HomotopyChain(tuple(MonotoneMap(f.dom, f.cod, a) for a in path))


class Adjoints(NamedTuple):
    left: MonotoneMap | None
    right: MonotoneMap | None


def find_adjoints(f: MonotoneMap) -> Adjoints:
    """Left and right adjoints of ``f: P -> Q``, each None when it does not exist.

    ``g`` is right adjoint when ``f(p) <= q`` iff ``p <= g(q)``; ``h`` is left
    adjoint when ``h(q) <= p`` iff ``q <= f(p)``.
    """
    P, Q, a = f.dom, f.cod, f.assignment

    def candidate(pick: Callable[[int], int], sets: Callable[[int], int]) -> tuple[int, ...] | None:
        out = []
        for q in Q:
            s = sets(q)
            best = pick(s)
            if best is None:
                return None
            out.append(best)
        return tuple(out)

    def greatest(mask: int) -> int | None:
        return next((p for p in bits(mask) if P.down(p) & mask == mask), None)

    def least(mask: int) -> int | None:
        return next((p for p in bits(mask) if P.up(p) & mask == mask), None)

    below = lambda q: sum(1 << p for p in P if Q.leq(a[p], q))
    above = lambda q: sum(1 << p for p in P if Q.leq(q, a[p]))

    right = candidate(greatest, below)
    if right is not None and not all(
        Q.leq(a[p], q) == P.leq(p, right[q]) for p in P for q in Q
    ):
        right = None
    left = candidate(least, above)
    if left is not None and not all(
        P.leq(left[q], p) == Q.leq(q, a[p]) for p in P for q in Q
    ):
        left = None
    return Adjoints(
        None if left is None else MonotoneMap(Q, P, left),
        None if right is None else MonotoneMap(Q, P, right),
    )


def _find_beat_point(P: Poset, alive: int) -> tuple[int, int] | None:
    for x in bits(alive):
        above = P.up(x) & alive & ~(1 << x)
        if above:
            for y in bits(above):
                if P.up(y) & above == above:
                    return x, y
        below = P.down(x) & alive & ~(1 << x)
        if below:
            for y in bits(below):
                if P.down(y) & below == below:
                    return x, y
    return None


def beat_points(P: Poset) -> list[int]:
    """Elements whose strict up-set has a minimum or whose strict down-set has a maximum."""
    out = []
    for x in P:
        above = P.up(x) & ~(1 << x)
        below = P.down(x) & ~(1 << x)
        if (above and any(P.up(y) & above == above for y in bits(above))) or (
            below and any(P.down(y) & below == below for y in bits(below))
        ):
            out.append(x)
    return out


@dataclass(frozen=True)
class CoreReduction:
    """The core of a poset with the inclusion, retraction and removal record."""

    core: Poset
    inclusion: MonotoneMap
    retraction: MonotoneMap
    removed: tuple[tuple[int, int], ...]


def _reduce(P: Poset) -> tuple[int, list[tuple[int, int]]]:
    alive = P.full_mask
    removed = []
    while True:
        beat = _find_beat_point(P, alive)
        if beat is None:
            return alive, removed
        alive &= ~(1 << beat[0])
        removed.append(beat)


def reduce_to_core(P: Poset) -> CoreReduction:
    """Remove beat points, lowest index first, until none remain."""
    alive, removed = _reduce(P)
    target = list(range(len(P)))
    for x, y in removed:
        for z in P:
            if target[z] == x:
                target[z] = y
    core, inclusion = induced_subposet(P, bits(alive))
    pos = {x: k for k, x in enumerate(inclusion.assignment)}
    retraction = MonotoneMap(P, core, tuple(pos[t] for t in target))
    return CoreReduction(core, inclusion, retraction, tuple(removed))


def core(P: Poset) -> Poset:
    return reduce_to_core(P).core


def is_strongly_contractible(P: Poset) -> bool:
    if len(P) == 0:
        return False
    alive, _ = _reduce(P)
    return alive & (alive - 1) == 0


def contractibility_oracle(P: Poset, budget: int | None = None) -> bool:
    """Brute force: is the identity of ``P`` strongly homotopic to a constant map?"""
    if len(P) == 0:
        return False
    check_budget(P, P, budget)
    start = tuple(range(len(P)))
    return _search(P, P, start, lambda a: min(a) == max(a)) is not None


@dataclass(frozen=True)
class CommaEvidence:
    element: int
    comma: Poset
    inclusion: MonotoneMap
    contractible: bool
    core: Poset


@dataclass(frozen=True)
class CofinalityReport:
    """Per-element comma posets and their contractibility for one map.

    ``kind`` is "cofinal" (commas ``f/p``) or "final" (commas ``p/f``).
    """

    map: MonotoneMap
    kind: str
    evidence: tuple[CommaEvidence, ...]

    @property
    def holds(self) -> bool:
        return all(e.contractible for e in self.evidence)

    @property
    def verdict(self) -> str:
        return self.kind if self.holds else f"not {self.kind}"

    def failures(self) -> list[CommaEvidence]:
        return [e for e in self.evidence if not e.contractible]

    def to_json(self) -> dict[str, Any]:
        cod = self.map.cod
        return {
            "verdict": self.verdict,
            "evidence": [
                {
                    "element": cod.label_text(e.element),
                    "index": e.element,
                    "comma_size": len(e.comma),
                    "contractible": e.contractible,
                    "core_size": len(e.core),
                }
                for e in self.evidence
            ],
        }


def _report(f: MonotoneMap, kind: str) -> CofinalityReport:
    evidence = []
    for p in f.cod:
        comma, inc = comma_over(f, p) if kind == "cofinal" else comma_under(p, f)
        red = reduce_to_core(comma)
        evidence.append(CommaEvidence(p, comma, inc, len(comma) > 0 and len(red.core) == 1, red.core))
    return CofinalityReport(f, kind, tuple(evidence))


def is_homotopy_cofinal(f: MonotoneMap) -> CofinalityReport:
    """Cofinal iff every ``f/p`` is strongly contractible."""
    return _report(f, "cofinal")


def is_homotopy_final(f: MonotoneMap) -> CofinalityReport:
    """Final iff every ``p/f`` is strongly contractible."""
    return _report(f, "final")


def subdivision_map(f: MonotoneMap) -> MonotoneMap:
    """``s(f)``: a chain goes to its image chain."""
    sP, _ = subdivision(f.dom)
    sQ, _ = subdivision(f.cod)
    out = []
    for chain in sP.labels:
        image = f.image_mask(chain.mask)
        out.append(sQ.index(Chain(tuple(bits(image)), f.cod)))
    return MonotoneMap(sP, sQ, tuple(out))


def _minimal_enumeration(P: Poset) -> list[int]:
    order = []
    alive = P.full_mask
    while alive:
        p = P.minimal(alive)[0]
        order.append(p)
        alive &= ~(1 << p)
    return order


def subdivision_homotopy_chain(f: MonotoneMap, g: MonotoneMap) -> HomotopyChain:
    """Zigzag ``s(g) = u0 <= v0 >= u1 <= ... >= u_m = s(f)`` for ``f <= g``.

    Elements are numbered 1..m-1 by repeatedly taking a minimal element;
    ``u_k`` uses ``f`` below position ``k`` and ``g`` from ``k`` on, ``v_k``
    uses ``f`` up to ``k`` and ``g`` from ``k`` on.
    """
    if not map_leq(f, g):
        raise PosetError("subdivision_homotopy_chain needs f <= g pointwise")
    P, Q = f.dom, f.cod
    sP, _ = subdivision(P)
    sQ, _ = subdivision(Q)
    position = {p: i + 1 for i, p in enumerate(_minimal_enumeration(P))}
    m = len(P) + 1

    def build(k: int, inclusive: bool) -> MonotoneMap:
        out = []
        for chain in sP.labels:
            image = 0
            for p in chain.members:
                pos = position[p]
                if pos < k or (inclusive and pos == k):
                    image |= 1 << f.assignment[p]
                if pos >= k:
                    image |= 1 << g.assignment[p]
            if not Q.is_chain(image):
                raise PosetError("interleaved image is not a chain")
            out.append(sQ.index(Chain(tuple(bits(image)), Q)))
        return MonotoneMap(sP, sQ, tuple(out))

    steps = []
    for k in range(m):
        steps.append(build(k, False))
        steps.append(build(k, True))
    steps.append(build(m, False))
    return HomotopyChain(_dedupe(steps))


def core_homotopy(P: Poset, budget: int | None = None) -> HomotopyChain | None:
    """Certify that inclusion ∘ retraction of the core is strongly homotopic to the identity."""
    red = reduce_to_core(P)
    return strong_homotopic(compose(red.inclusion, red.retraction), identity(P), budget)
