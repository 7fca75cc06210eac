"""Finite posets, monotone maps and the standard constructions on them.

Elements of a :class:`Poset` are the dense indices ``0..size-1``.  Labels are
arbitrary hashable objects used for display and lookup.  The order is stored
as one integer bit row per element: bit ``j`` of ``up(i)`` is set iff
``i <= j``.
"""

from __future__ import annotations

import itertools
import json
import os
import random
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Hashable, Iterable, Iterator, NamedTuple, Sequence

import numpy as np

DEFAULT_BUDGET = 10**6
SUBSET_LATTICE_CAP = 6
CHAIN_CAP = 10**6


class PosetError(ValueError):
    pass


class CycleError(PosetError):
    """The generating relation is not antisymmetric after closure."""

    def __init__(self, cycle: Sequence[Hashable]):
        self.cycle = list(cycle)
        super().__init__("cycle: " + " -> ".join(map(str, self.cycle)))


class BudgetError(RuntimeError):
    """An enumeration would exceed its configured budget."""


def default_budget() -> int:
    value = os.environ.get("CHROMALAT_BUDGET")
    return int(value) if value else DEFAULT_BUDGET


def bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _transpose(rows: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(rows)
    for i, row in enumerate(rows):
        for j in bits(row):
            out[j] |= 1 << i
    return tuple(out)


class Poset:
    """An immutable finite partial order.

    Use :func:`build_poset` (or one of the constructions in this module) to
    make one; the constructor checks the order axioms unless told that the
    caller already guarantees them.
    """

    __slots__ = ("labels", "_up", "_down", "_index", "_hash")

    def __init__(self, labels: Iterable[Hashable], up_rows: Iterable[int], *, check: bool = True):
        self.labels = tuple(labels)
        self._up = tuple(up_rows)
        if len(self._up) != len(self.labels):
            raise PosetError("one relation row per label required")
        self._down = _transpose(self._up)
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._index) != len(self.labels):
            raise PosetError("labels must be distinct")
        self._hash = None
        if check:
            self._check_axioms()

    def _check_axioms(self) -> None:
        n = len(self._up)
        for i, row in enumerate(self._up):
            if row >> n:
                raise PosetError(f"relation row {i} references a missing element")
            if not (row >> i) & 1:
                raise PosetError(f"not reflexive at {self.labels[i]}")
            if row & self._down[i] != 1 << i:
                j = next(k for k in bits(row & self._down[i]) if k != i)
                raise CycleError([self.labels[i], self.labels[j], self.labels[i]])
            for j in bits(row):
                if self._up[j] & ~row:
                    raise PosetError(f"not transitive through {self.labels[j]}")

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[int]:
        return iter(range(len(self.labels)))

    def leq(self, i: int, j: int) -> bool:
        return (self._up[i] >> j) & 1 == 1

    def lt(self, i: int, j: int) -> bool:
        return i != j and (self._up[i] >> j) & 1 == 1

    def comparable(self, i: int, j: int) -> bool:
        return self.leq(i, j) or self.leq(j, i)

    def up(self, i: int) -> int:
        """Bit mask of ``{j : i <= j}``."""
        return self._up[i]

    def down(self, i: int) -> int:
        """Bit mask of ``{j : j <= i}``."""
        return self._down[i]

    def index(self, label: Hashable) -> int:
        return self._index[label]

    def __contains__(self, label: Hashable) -> bool:
        return label in self._index

    def relation_pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in self for j in bits(self._up[i])]

    @property
    def full_mask(self) -> int:
        return (1 << len(self.labels)) - 1

    def minimal(self, subset: int | None = None) -> list[int]:
        """Minimal elements of ``subset`` (a bit mask, default everything)."""
        subset = self.full_mask if subset is None else subset
        return [i for i in bits(subset) if self._down[i] & subset == 1 << i]

    def maximal(self, subset: int | None = None) -> list[int]:
        subset = self.full_mask if subset is None else subset
        return [i for i in bits(subset) if self._up[i] & subset == 1 << i]

    def least(self) -> int | None:
        for i in self:
            if self._up[i] == self.full_mask:
                return i
        return None

    def greatest(self) -> int | None:
        for i in self:
            if self._down[i] == self.full_mask:
                return i
        return None

    def is_chain(self, subset: int) -> bool:
        return all(subset & ~(self._up[i] | self._down[i]) == 0 for i in bits(subset))

    def relabel(self, labels: Iterable[Hashable]) -> "Poset":
        return Poset(labels, self._up, check=False)

    def label_text(self, i: int) -> str:
        return str(self.labels[i])

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Poset):
            return NotImplemented
        return self._up == other._up and self.labels == other.labels

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.labels, self._up))
        return self._hash

    def __repr__(self) -> str:
        cov = ", ".join(f"{self.label_text(i)}<{self.label_text(j)}" for i, j in covers(self))
        return f"Poset(size={self.size}, covers=[{cov}])"


def _from_predicate(labels: Sequence[Hashable], leq: Callable[[int, int], bool]) -> Poset:
    n = len(labels)
    rows = [sum(1 << j for j in range(n) if leq(i, j)) for i in range(n)]
    return Poset(labels, rows, check=False)


def build_poset(labels: Iterable[Hashable], relation_pairs: Iterable[tuple[int, int]]) -> Poset:
    """Reflexive-transitive closure of ``relation_pairs`` as a :class:`Poset`.

    Raises :class:`CycleError` naming a witness cycle when the closure is not
    antisymmetric.
    """
    labels = tuple(labels)
    n = len(labels)
    edges = [0] * n
    for i, j in relation_pairs:
        if not (0 <= i < n and 0 <= j < n):
            raise PosetError(f"pair ({i}, {j}) out of range for {n} elements")
        if i != j:
            edges[i] |= 1 << j
    up = [edges[i] | (1 << i) for i in range(n)]
    for k in range(n):
        for i in range(n):
            if (up[i] >> k) & 1:
                up[i] |= up[k]
    for i in range(n):
        for j in bits(up[i]):
            if j != i and (up[j] >> i) & 1:
                raise CycleError([labels[x] for x in _cycle_through(edges, i, j)])
    return Poset(labels, up, check=False)


def _cycle_through(edges: Sequence[int], i: int, j: int) -> list[int]:
    def path(a: int, b: int) -> list[int]:
        prev = {a: None}
        todo = deque([a])
        while todo:
            x = todo.popleft()
            if x == b:
                break
            for y in bits(edges[x]):
                if y not in prev:
                    prev[y] = x
                    todo.append(y)
        out = [b]
        while out[-1] != a:
            out.append(prev[out[-1]])
        return out[::-1]

    return path(i, j) + path(j, i)[1:]


def empty_poset() -> Poset:
    return Poset((), ())


def point() -> Poset:
    """The terminal poset ``e``."""
    return Poset(("*",), (1,), check=False)


def chain_poset(n: int) -> Poset:
    """The chain ``[n] = {0 < 1 < ... < n}``."""
    return _from_predicate(tuple(range(n + 1)), lambda i, j: i <= j)


def antichain(n: int) -> Poset:
    return Poset(tuple(range(n)), [1 << i for i in range(n)], check=False)


def dual(P: Poset) -> Poset:
    return Poset(P.labels, P._down, check=False)


def product(P: Poset, Q: Poset) -> Poset:
    """Cartesian product; element ``(p, q)`` has index ``p * len(Q) + q``."""
    m = len(Q)
    labels = [(a, b) for a in P.labels for b in Q.labels]
    rows = []
    for p in P:
        for q in Q:
            row = 0
            qrow = Q.up(q)
            for p2 in bits(P.up(p)):
                row |= qrow << (p2 * m)
            rows.append(row)
    return Poset(labels, rows, check=False)


def subset_lattice(r: int) -> Poset:
    """Subsets of ``{0..r-1}`` under inclusion; element ``i`` is the subset with mask ``i``."""
    if r > SUBSET_LATTICE_CAP:
        raise BudgetError(f"subset lattice capped at r={SUBSET_LATTICE_CAP}")
    labels = ["{" + ",".join(str(k) for k in bits(a)) + "}" for a in range(1 << r)]
    return _from_predicate(labels, lambda a, b: a & ~b == 0)


def disjoint_union(P: Poset, Q: Poset) -> Poset:
    labels = [(0, a) for a in P.labels] + [(1, b) for b in Q.labels]
    rows = list(P._up) + [row << len(P) for row in Q._up]
    return Poset(labels, rows, check=False)


@dataclass(frozen=True)
class MonotoneMap:
    """An order-preserving map ``dom -> cod`` given by an index assignment."""

    dom: Poset
    cod: Poset
    assignment: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "assignment", tuple(self.assignment))
        a = self.assignment
        if len(a) != len(self.dom):
            raise PosetError("assignment length must equal the domain size")
        n = len(self.cod)
        for i, x in enumerate(a):
            if not 0 <= x < n:
                raise PosetError(f"value {x} at {i} is not an element of the codomain")
        for i in self.dom:
            target = self.cod.up(a[i])
            for j in bits(self.dom.up(i)):
                if not (target >> a[j]) & 1:
                    raise PosetError(
                        f"not monotone: {self.dom.label_text(i)} <= {self.dom.label_text(j)} "
                        f"but images are incomparable or reversed"
                    )

    def __call__(self, i: int) -> int:
        return self.assignment[i]

    def image_mask(self, subset: int | None = None) -> int:
        subset = self.dom.full_mask if subset is None else subset
        out = 0
        for i in bits(subset):
            out |= 1 << self.assignment[i]
        return out

    def is_constant(self) -> bool:
        return len(set(self.assignment)) <= 1

    def __repr__(self) -> str:
        return f"MonotoneMap({list(self.assignment)})"


def identity(P: Poset) -> MonotoneMap:
    return MonotoneMap(P, P, tuple(range(len(P))))


def constant(P: Poset, Q: Poset, q: int) -> MonotoneMap:
    return MonotoneMap(P, Q, (q,) * len(P))


def compose(g: MonotoneMap, f: MonotoneMap) -> MonotoneMap:
    """``g ∘ f`` (apply ``f`` first)."""
    if f.cod != g.dom:
        raise PosetError("maps are not composable")
    return MonotoneMap(f.dom, g.cod, tuple(g.assignment[x] for x in f.assignment))


def map_leq(f: MonotoneMap, g: MonotoneMap) -> bool:
    """Pointwise order ``f <= g``."""
    if f.dom != g.dom or f.cod != g.cod:
        raise PosetError("maps must share domain and codomain")
    return all(f.cod.leq(a, b) for a, b in zip(f.assignment, g.assignment))


def maps_comparable(f: MonotoneMap, g: MonotoneMap) -> bool:
    return map_leq(f, g) or map_leq(g, f)


def is_embedding(f: MonotoneMap) -> bool:
    """True iff ``f(p) <= f(q)`` exactly when ``p <= q``."""
    a = f.assignment
    return all(f.dom.leq(i, j) == f.cod.leq(a[i], a[j]) for i in f.dom for j in f.dom)


def induced_subposet(P: Poset, subset: Iterable[int]) -> tuple[Poset, MonotoneMap]:
    """Restriction of the order to ``subset``, with its inclusion into ``P``."""
    elems = sorted(set(subset))
    pos = {x: k for k, x in enumerate(elems)}
    rows = []
    for x in elems:
        row = 0
        for y in bits(P.up(x)):
            k = pos.get(y)
            if k is not None:
                row |= 1 << k
        rows.append(row)
    sub = Poset([P.labels[x] for x in elems], rows, check=False)
    return sub, MonotoneMap(sub, P, tuple(elems))


def _as_mask(subset: Iterable[int] | int) -> int:
    if isinstance(subset, int):
        return subset
    out = 0
    for i in subset:
        out |= 1 << i
    return out


def is_sieve(P: Poset, subset: Iterable[int] | int) -> bool:
    """Downward closed."""
    mask = _as_mask(subset)
    return all(P.down(i) & ~mask == 0 for i in bits(mask))


def is_cosieve(P: Poset, subset: Iterable[int] | int) -> bool:
    """Upward closed."""
    mask = _as_mask(subset)
    return all(P.up(i) & ~mask == 0 for i in bits(mask))


def comma_over(f: MonotoneMap, q: int) -> tuple[Poset, MonotoneMap]:
    """``f/q = {p : f(p) <= q}`` with its inclusion into ``f.dom``."""
    below = f.cod.down(q)
    return induced_subposet(f.dom, [p for p in f.dom if (below >> f.assignment[p]) & 1])


def comma_under(q: int, f: MonotoneMap) -> tuple[Poset, MonotoneMap]:
    """``q/f = {p : q <= f(p)}`` with its inclusion into ``f.dom``."""
    above = f.cod.up(q)
    return induced_subposet(f.dom, [p for p in f.dom if (above >> f.assignment[p]) & 1])


def covers(P: Poset) -> list[tuple[int, int]]:
    """Covering pairs ``i < j`` with nothing strictly between (the Hasse diagram)."""
    out = []
    for i in P:
        strict = P.up(i) & ~(1 << i)
        for j in bits(strict):
            if P.down(j) & strict == 1 << j:
                out.append((i, j))
    return out


def linear_extension(P: Poset) -> list[int]:
    return sorted(P, key=lambda i: (bin(P.down(i)).count("1"), i))


def heights(P: Poset) -> list[int]:
    """Length of the longest chain ending at each element (minimal elements have 0)."""
    h = [0] * len(P)
    for j in linear_extension(P):
        below = P.down(j) & ~(1 << j)
        h[j] = max((h[i] + 1 for i in bits(below)), default=0)
    return h


def restrict_endomap(h: MonotoneMap, embedding: MonotoneMap) -> MonotoneMap:
    """Restrict ``h: X -> X`` to the image of ``embedding: S -> X``.

    Raises :class:`PosetError` if ``h`` does not carry the image into itself.
    """
    pos = {x: k for k, x in enumerate(embedding.assignment)}
    out = []
    for x in embedding.assignment:
        y = h.assignment[x]
        if y not in pos:
            raise PosetError(
                f"{h.dom.label_text(x)} maps to {h.cod.label_text(y)}, outside the subposet"
            )
        out.append(pos[y])
    return MonotoneMap(embedding.dom, embedding.dom, tuple(out))


@dataclass(frozen=True)
class Chain:
    """A nonempty chain of ``parent``, as a sorted tuple of element indices."""

    members: tuple[int, ...]
    parent: Poset = field(compare=False, repr=False, hash=False)

    @property
    def dim(self) -> int:
        return len(self.members) - 1

    @property
    def mask(self) -> int:
        return _as_mask(self.members)

    @property
    def top(self) -> int:
        mask = self.mask
        return next(i for i in self.members if self.parent.down(i) & mask == mask)

    def __str__(self) -> str:
        return "{" + ",".join(self.parent.label_text(i) for i in self.members) + "}"


def chain_masks(P: Poset, cap: int = CHAIN_CAP) -> list[int]:
    """All nonempty chains of ``P`` as bit masks, ordered by size then members."""
    found: list[int] = []

    def extend(mask: int, top: int) -> None:
        found.append(mask)
        if len(found) > cap:
            raise BudgetError(f"more than {cap} chains")
        for y in bits(P.up(top) & ~(1 << top)):
            extend(mask | (1 << y), y)

    for x in P:
        extend(1 << x, x)
    return sorted(found, key=lambda m: (bin(m).count("1"), list(bits(m))))


@lru_cache(maxsize=256)
def subdivision(P: Poset) -> tuple[Poset, MonotoneMap]:
    """Barycentric subdivision ``s(P)`` (nonempty chains by inclusion) and ``max: s(P) -> P``.

    Labels of ``s(P)`` are :class:`Chain` objects.
    """
    masks = chain_masks(P)
    pos = {m: k for k, m in enumerate(masks)}
    down = []
    for m in masks:
        row = 0
        sub = m
        while sub:
            row |= 1 << pos[sub]
            sub = (sub - 1) & m
        down.append(row)
    labels = [Chain(tuple(bits(m)), P) for m in masks]
    sP = Poset(labels, _transpose(down), check=False)
    return sP, MonotoneMap(sP, P, tuple(c.top for c in labels))


class Skeleton(NamedTuple):
    lower: Poset
    embedding: MonotoneMap
    level: Poset


def skeleton(sP: Poset, d: int) -> Skeleton:
    """``s_{<=d}(P)`` with its inclusion into ``sP``, and ``s_d(P)`` as a discrete poset."""
    if d < 0:
        raise PosetError("dimension must be nonnegative")
    lower, emb = induced_subposet(sP, [i for i in sP if sP.labels[i].dim <= d])
    level = [sP.labels[i] for i in sP if sP.labels[i].dim == d]
    return Skeleton(lower, emb, Poset(level, [1 << k for k in range(len(level))], check=False))


def pi0(P: Poset) -> list[list[int]]:
    """Connected components of the comparability graph, each sorted, ordered by least index."""
    seen = 0
    out = []
    for start in P:
        if (seen >> start) & 1:
            continue
        comp = 1 << start
        frontier = comp
        while frontier:
            nxt = 0
            for i in bits(frontier):
                nxt |= P.up(i) | P.down(i)
            frontier = nxt & ~comp
            comp |= nxt
        seen |= comp
        out.append(list(bits(comp)))
    return out


def monotone_assignments(P: Poset, Q: Poset) -> Iterator[tuple[int, ...]]:
    """Every monotone map ``P -> Q`` as an assignment tuple, in lexicographic order."""
    n = len(P)
    preds = [P.down(i) & ~(1 << i) for i in range(n)]
    succs = [P.up(i) & ~(1 << i) for i in range(n)]
    full = Q.full_mask
    f = [0] * n

    def fill(i: int) -> Iterator[tuple[int, ...]]:
        if i == n:
            yield tuple(f)
            return
        allowed = full
        for j in bits(preds[i] & ((1 << i) - 1)):
            allowed &= Q.up(f[j])
        for j in bits(succs[i] & ((1 << i) - 1)):
            allowed &= Q.down(f[j])
        for y in bits(allowed):
            f[i] = y
            yield from fill(i + 1)

    return fill(0)


def check_budget(P: Poset, Q: Poset, budget: int | None) -> None:
    budget = default_budget() if budget is None else budget
    if len(Q) ** len(P) > budget:
        raise BudgetError(f"|Q|^|P| = {len(Q)}^{len(P)} exceeds budget {budget}")


def mapping_poset(P: Poset, Q: Poset, budget: int | None = None) -> tuple[Poset, list[MonotoneMap]]:
    """The poset of monotone maps ``P -> Q`` under the pointwise order.

    Returns the poset (labels are assignment tuples) and the decoded maps,
    index-aligned with its elements.
    """
    check_budget(P, Q, budget)
    assignments = list(monotone_assignments(P, Q))
    m = len(assignments)
    if m == 0:
        return empty_poset(), []
    arr = np.array(assignments, dtype=np.int64).reshape(m, len(P))
    qleq = np.array([[Q.leq(a, b) for b in Q] for a in Q], dtype=bool).reshape(len(Q), len(Q))
    leq = np.ones((m, m), dtype=bool)
    for k in range(len(P)):
        col = arr[:, k]
        leq &= qleq[col[:, None], col[None, :]]
    rows = [_row_to_int(r) for r in leq]
    poset = Poset(assignments, rows, check=False)
    return poset, [MonotoneMap(P, Q, a) for a in assignments]


def _row_to_int(row: np.ndarray) -> int:
    return int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little")


def all_posets(n: int) -> Iterator[Poset]:
    """Every labeled partial order on ``{0..n-1}``."""
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    labels = tuple(range(n))
    for choice in itertools.product((0, 1), repeat=len(pairs)):
        up = [1 << i for i in range(n)]
        for (i, j), c in zip(pairs, choice):
            if c:
                up[i] |= 1 << j
        down = _transpose(up)
        if all(
            up[i] & down[i] == 1 << i and not any(up[j] & ~up[i] for j in bits(up[i]))
            for i in range(n)
        ):
            yield Poset(labels, up, check=False)


def random_poset(n: int, rng: random.Random, density: float | None = None) -> Poset:
    """Random order on ``n`` elements: a random DAG over a shuffled ranking, closed transitively."""
    p = rng.uniform(0.1, 0.6) if density is None else density
    rank = list(range(n))
    rng.shuffle(rank)
    pairs = [(rank[i], rank[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return build_poset(range(n), pairs)


def poset_to_json(P: Poset) -> dict[str, Any]:
    return {"labels": [P.label_text(i) for i in P], "pairs": [list(c) for c in covers(P)]}


def poset_from_json(obj: dict[str, Any] | str) -> Poset:
    if isinstance(obj, str):
        obj = json.loads(obj)
    try:
        labels = obj["labels"]
        pairs = [(int(i), int(j)) for i, j in obj.get("pairs", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise PosetError(f"malformed poset JSON: {exc}") from exc
    return build_poset(labels, pairs)


def to_dot(P: Poset, name: str = "P") -> str:
    """Graphviz DOT text for the Hasse diagram, one rank per chain height."""
    h = heights(P)
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=plaintext];"]
    for i in P:
        text = P.label_text(i).replace("\\", "\\\\").replace('"', '\\"')
        lines.append(f'  n{i} [label="{text}"];')
    for level in sorted(set(h)):
        members = " ".join(f"n{i};" for i in P if h[i] == level)
        lines.append(f"  {{ rank=same; {members} }}")
    for i, j in covers(P):
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
