"""The monoid of up-sets of subsets of ``N = {0,..,n*-1}`` under the ``*`` product.

``P`` is the lattice of subsets of ``N``; ``Q`` is the set of upward-closed
families of subsets, ordered by reverse inclusion.  A :class:`LevelSet` is a
subset of ``N`` stored as a bit mask and an :class:`UpSet` is a family of
subsets stored as a bit mask over the ``2^n*`` subset masks.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterable, Iterator, NamedTuple, Sequence

from .homotopy import CofinalityReport, HomotopyChain, is_homotopy_cofinal, is_homotopy_final
from .poset import (
    BudgetError,
    MonotoneMap,
    Poset,
    PosetError,
    bits,
    comma_over,
    comma_under,
    compose,
    constant,
    identity,
    induced_subposet,
    map_leq,
    product,
    restrict_endomap,
)

MAX_N_STAR = 6
ENUM_CAP = 5


class MonoidError(ValueError):
    pass


def _check_n(n_star: int) -> None:
    if not 0 <= n_star <= MAX_N_STAR:
        raise MonoidError(f"n* must lie in 0..{MAX_N_STAR}, got {n_star}")


@dataclass(frozen=True, order=True)
class LevelSet:
    """A subset of ``{0, ..., n_star-1}``."""

    n_star: int
    mask: int

    def __post_init__(self):
        _check_n(self.n_star)
        if not 0 <= self.mask < 1 << self.n_star:
            raise MonoidError(f"mask {self.mask} out of range for n*={self.n_star}")

    @classmethod
    def of(cls, elements: Iterable[int], n_star: int) -> "LevelSet":
        mask = 0
        for e in elements:
            if not 0 <= e < n_star:
                raise MonoidError(f"level {e} outside 0..{n_star - 1}")
            mask |= 1 << e
        return cls(n_star, mask)

    @classmethod
    def parse(cls, text: str, n_star: int) -> "LevelSet":
        """Read ``"{0,2,3}"`` or the compact digit form ``"023"``."""
        text = text.strip()
        if text.startswith("{") and text.endswith("}"):
            body = text[1:-1].strip()
            items = [int(t) for t in body.split(",")] if body else []
        elif re.fullmatch(r"\d*", text):
            items = [int(c) for c in text]
        else:
            raise MonoidError(f"cannot read level set {text!r}")
        return cls.of(items, n_star)

    def __iter__(self) -> Iterator[int]:
        return bits(self.mask)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, level: int) -> bool:
        return 0 <= level < self.n_star and (self.mask >> level) & 1 == 1

    def __or__(self, other: "LevelSet") -> "LevelSet":
        return LevelSet(self.n_star, self.mask | other.mask)

    def __and__(self, other: "LevelSet") -> "LevelSet":
        return LevelSet(self.n_star, self.mask & other.mask)

    def issubset(self, other: "LevelSet") -> bool:
        return self.mask & ~other.mask == 0

    @property
    def top(self) -> int:
        """Largest element, with ``-1`` for the empty set."""
        return self.mask.bit_length() - 1

    @property
    def bottom(self) -> int:
        """Smallest element, with ``n_star`` for the empty set."""
        return (self.mask & -self.mask).bit_length() - 1 if self.mask else self.n_star

    def at_most(self, i: int) -> "LevelSet":
        if i < 0:
            return LevelSet(self.n_star, 0)
        return LevelSet(self.n_star, self.mask & ((1 << (i + 1)) - 1))

    def below(self, i: int) -> "LevelSet":
        return self.at_most(i - 1)

    def at_least(self, i: int) -> "LevelSet":
        return LevelSet(self.n_star, self.mask & ~((1 << max(i, 0)) - 1))

    def above(self, i: int) -> "LevelSet":
        return self.at_least(i + 1)

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self)) + "}"

    def __repr__(self) -> str:
        return f"LevelSet({self}, n*={self.n_star})"


def full_levels(n_star: int) -> LevelSet:
    return LevelSet(n_star, (1 << n_star) - 1)


def all_level_sets(n_star: int) -> list[LevelSet]:
    return [LevelSet(n_star, m) for m in range(1 << n_star)]


def angle(A: LevelSet, B: LevelSet) -> bool:
    """Every element of ``A`` is at most every element of ``B`` (vacuous if either is empty)."""
    if A.n_star != B.n_star:
        raise MonoidError("level sets from different n*")
    return _angle_mask(A.mask, B.mask)


def _angle_mask(a: int, b: int) -> bool:
    return a == 0 or b == 0 or a.bit_length() <= (b & -b).bit_length()


@lru_cache(maxsize=None)
def _angle_rows(n_star: int) -> tuple[int, ...]:
    """Row ``a``: bit mask over subset masks ``b`` with ``a ∠ b``."""
    size = 1 << n_star
    return tuple(sum(1 << b for b in range(size) if _angle_mask(a, b)) for a in range(size))


@lru_cache(maxsize=None)
def _superset_family(n_star: int, a: int) -> int:
    return sum(1 << b for b in range(1 << n_star) if a & ~b == 0)


@lru_cache(maxsize=None)
def _missing_level(n_star: int) -> tuple[int, ...]:
    """Entry ``k``: positions ``m`` (subset masks) with level ``k`` absent from ``m``."""
    size = 1 << n_star
    return tuple(sum(1 << m for m in range(size) if not (m >> k) & 1) for k in range(n_star))


def _is_upward_closed(n_star: int, family: int) -> bool:
    # Adding level k to subset m moves it from position m to m + 2^k.
    for k, without in enumerate(_missing_level(n_star)):
        if ((family & without) << (1 << k)) & ~family:
            return False
    return True


def _min_key(s: LevelSet) -> tuple[int, list[int]]:
    return len(s), list(s)


@dataclass(frozen=True)
class UpSet:
    """An upward-closed family of subsets of ``N``; bit ``m`` of ``family`` marks subset ``m``."""

    n_star: int
    family: int

    def __post_init__(self):
        _check_n(self.n_star)
        if not 0 <= self.family < 1 << (1 << self.n_star):
            raise MonoidError("family mask out of range")
        if not _is_upward_closed(self.n_star, self.family):
            raise MonoidError("family is not upward closed")

    @classmethod
    def generated_by(cls, sets: Iterable[LevelSet], n_star: int) -> "UpSet":
        """The up-closure of ``sets``."""
        fam = 0
        for s in sets:
            if s.n_star != n_star:
                raise MonoidError("level sets from different n*")
            fam |= _superset_family(n_star, s.mask)
        return cls(n_star, fam)

    @classmethod
    def from_predicate(cls, pred, n_star: int) -> "UpSet":
        return cls(n_star, sum(1 << m for m in range(1 << n_star) if pred(LevelSet(n_star, m))))

    def members(self) -> list[LevelSet]:
        return [LevelSet(self.n_star, m) for m in bits(self.family)]

    def minimal(self) -> list[LevelSet]:
        """The antichain of minimal members, by size then lexicographically."""
        fam = self.family
        out = []
        for m in bits(fam):
            if not any((fam >> (m & ~(1 << k))) & 1 for k in bits(m)):
                out.append(LevelSet(self.n_star, m))
        return sorted(out, key=_min_key)

    def __contains__(self, s: LevelSet) -> bool:
        return (self.family >> s.mask) & 1 == 1

    def __len__(self) -> int:
        return bin(self.family).count("1")

    def __iter__(self) -> Iterator[LevelSet]:
        return iter(self.members())

    def _same(self, other: "UpSet") -> None:
        if self.n_star != other.n_star:
            raise MonoidError("up-sets from different n*")

    def __or__(self, other: "UpSet") -> "UpSet":
        self._same(other)
        return UpSet(self.n_star, self.family | other.family)

    def __and__(self, other: "UpSet") -> "UpSet":
        self._same(other)
        return UpSet(self.n_star, self.family & other.family)

    def __mul__(self, other: "UpSet") -> "UpSet":
        return star(self, other)

    def issubset(self, other: "UpSet") -> bool:
        self._same(other)
        return self.family & ~other.family == 0

    def q_leq(self, other: "UpSet") -> bool:
        """The order of ``Q``: ``U <= V`` iff ``U ⊇ V``."""
        return other.issubset(self)

    def __str__(self) -> str:
        return "⟨" + ",".join(str(s) for s in self.minimal()) + "⟩"

    def __repr__(self) -> str:
        return f"UpSet({self}, n*={self.n_star})"


def u_of(A: LevelSet) -> UpSet:
    """``{B : A ⊆ B}``."""
    return UpSet(A.n_star, _superset_family(A.n_star, A.mask))


def v_of(A: LevelSet) -> UpSet:
    """``{B : B ∩ A ≠ ∅}``."""
    return UpSet(A.n_star, sum(1 << b for b in range(1 << A.n_star) if b & A.mask))


def identity_upset(n_star: int) -> UpSet:
    """``u∅``, the family of all subsets."""
    return UpSet(n_star, (1 << (1 << n_star)) - 1)


def empty_upset(n_star: int) -> UpSet:
    return UpSet(n_star, 0)


def star(U: UpSet, V: UpSet) -> UpSet:
    """``U * V = {A ∪ B : A ∈ U, B ∈ V, A ∠ B}``.

    The union set is taken as is, without closing it upwards; the UpSet
    constructor rejects it if it ever failed to be upward closed.
    """
    U._same(V)
    rows = _angle_rows(U.n_star)
    out = 0
    for a in bits(U.family):
        for b in bits(V.family & rows[a]):
            out |= 1 << (a | b)
    return UpSet(U.n_star, out)


def star_fold(items: Sequence[UpSet], n_star: int | None = None) -> UpSet:
    if not items:
        if n_star is None:
            raise MonoidError("empty product needs n*")
        return identity_upset(n_star)
    return reduce(star, items)


def star_u_rule(A: LevelSet, B: LevelSet) -> UpSet:
    """``uA * uB`` in closed form: ``u(A ∪ B)`` when ``A ∠ B``, else the empty family."""
    if angle(A, B):
        return u_of(A | B)
    return empty_upset(A.n_star)


def kappa(U: UpSet) -> LevelSet:
    """``{n : {n} ∈ U}``."""
    return LevelSet(U.n_star, sum(1 << k for k in range(U.n_star) if (U.family >> (1 << k)) & 1))


@dataclass(frozen=True)
class ThreadList:
    """A list of level sets ``(A1, ..., Ar)`` sharing one ``n_star``."""

    n_star: int
    entries: tuple[LevelSet, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))
        if any(a.n_star != self.n_star for a in self.entries):
            raise MonoidError("thread list entries from different n*")

    def __len__(self) -> int:
        return len(self.entries)

    def __str__(self) -> str:
        if not self.entries:
            return "full"
        return "T(" + ",".join(map(str, self.entries)) + ")"


def _has_thread(entries: Sequence[int], candidate: int) -> bool:
    # Keep the least feasible last level; any later choice can only be larger.
    floor_mask = -1
    for a in entries:
        options = a & candidate & floor_mask
        if not options:
            return False
        low = options & -options
        floor_mask = ~(low - 1)
    return True


def thread_set(LA: ThreadList) -> UpSet:
    """Sets containing a nondecreasing thread ``a1 <= ... <= ar`` with ``ai ∈ Ai``."""
    masks = [a.mask for a in LA.entries]
    n = LA.n_star
    return UpSet(n, sum(1 << c for c in range(1 << n) if _has_thread(masks, c)))


def thread_set_by_product(LA: ThreadList) -> UpSet:
    """The same family computed as ``vA1 * ... * vAr``."""
    return star_fold([v_of(a) for a in LA.entries], LA.n_star)


@dataclass(frozen=True)
class ClosureResult:
    """A finite submonoid with its Cayley table and shortest generator words."""

    generators: tuple[UpSet, ...]
    elements: tuple[UpSet, ...]
    cayley: tuple[tuple[int, ...], ...]
    witnesses: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.elements)

    def index(self, U: UpSet) -> int:
        return self.elements.index(U)

    def __contains__(self, U: UpSet) -> bool:
        return U in self.elements

    def word(self, U: UpSet) -> tuple[int, ...]:
        return self.witnesses[self.index(U)]


def submonoid_closure(generators: Sequence[UpSet], n_star: int) -> ClosureResult:
    """Breadth-first closure of ``generators`` under ``*``, starting from ``u∅``.

    Elements appear in shortlex order of their first word, so each witness is
    a shortest word with ties broken by generator index.
    """
    gens = tuple(generators)
    if any(g.n_star != n_star for g in gens):
        raise MonoidError("generators from different n*")
    unit = identity_upset(n_star)
    elements = [unit]
    words: list[tuple[int, ...]] = [()]
    seen = {unit: 0}
    todo = deque([0])
    while todo:
        i = todo.popleft()
        for k, g in enumerate(gens):
            y = star(elements[i], g)
            if y not in seen:
                seen[y] = len(elements)
                elements.append(y)
                words.append(words[i] + (k,))
                todo.append(seen[y])
    table = tuple(tuple(seen[star(x, y)] for y in elements) for x in elements)
    return ClosureResult(gens, tuple(elements), table, tuple(words))


def v_generators(n_star: int) -> list[UpSet]:
    """``vA`` for every ``A ⊆ N`` (including ``v∅``), ordered by mask."""
    return [v_of(a) for a in all_level_sets(n_star)]


@lru_cache(maxsize=None)
def thread_monoid(n_star: int) -> ClosureResult:
    return submonoid_closure(v_generators(n_star), n_star)


def is_thread_realizable(U: UpSet) -> ThreadList | None:
    """A list ``LA`` with ``T(LA) = U``, or None if no list realizes ``U``."""
    closure = thread_monoid(U.n_star)
    if U not in closure:
        return None
    levels = all_level_sets(U.n_star)
    return ThreadList(U.n_star, tuple(levels[k] for k in closure.word(U)))


@lru_cache(maxsize=None)
def _upset_masks(n: int) -> tuple[int, ...]:
    # Split on the top level: U = U0 ⊔ (U1 shifted), U0 ⊆ U1 up-sets one level down.
    if n == 0:
        return (0, 1)
    lower = _upset_masks(n - 1)
    shift = 1 << (n - 1)
    return tuple(a | (b << shift) for a in lower for b in lower if a & ~b == 0)


def enumerate_q(n_star: int) -> list[UpSet]:
    """All up-sets, ordered by ascending family mask."""
    _check_n(n_star)
    if n_star > ENUM_CAP:
        raise BudgetError(f"full enumeration of Q is capped at n*={ENUM_CAP}")
    return list(_enumerate_q(n_star))


@lru_cache(maxsize=None)
def _enumerate_q(n_star: int) -> tuple[UpSet, ...]:
    return tuple(UpSet(n_star, m) for m in sorted(_upset_masks(n_star)))


@lru_cache(maxsize=None)
def q_poset(n_star: int) -> Poset:
    """``Q`` ordered by reverse inclusion; labels are the UpSets."""
    elems = enumerate_q(n_star)
    fams = [u.family for u in elems]
    rows = []
    for f in fams:
        rows.append(sum(1 << j for j, g in enumerate(fams) if g & ~f == 0))
    return Poset(elems, rows, check=False)


@lru_cache(maxsize=None)
def p_poset(n_star: int) -> Poset:
    """Subsets of ``N`` by inclusion; element ``m`` is the LevelSet with mask ``m``."""
    _check_n(n_star)
    size = 1 << n_star
    rows = [sum(1 << b for b in range(size) if a & ~b == 0) for a in range(size)]
    return Poset(all_level_sets(n_star), rows, check=False)


def catalogue3() -> dict[str, UpSet]:
    """The twenty named up-sets for ``n* = 3``, from smallest to largest in ``Q``."""
    return dict(_catalogue3())


@lru_cache(maxsize=None)
def _catalogue3() -> dict[str, UpSet]:
    n = 3
    L = lambda *xs: LevelSet.of(xs, n)
    N = full_levels(n)
    pred = lambda p: UpSet.from_predicate(p, n)
    out = {"u∅": identity_upset(n), "vN": v_of(N)}
    for i, j in ((0, 1), (0, 2), (1, 2)):
        out[f"v{i}{j}"] = v_of(L(i, j))
    for i in range(3):
        rest = LevelSet(n, N.mask & ~(1 << i))
        out[f"x{i}"] = pred(lambda A, i=i, rest=rest: i in A or rest.issubset(A))
    for i in range(3):
        out[f"u{i}"] = u_of(L(i))
    for i in range(3):
        out[f"w{i}"] = pred(lambda A, i=i: i in A and len(A) > 1)
    for i, j in ((0, 1), (0, 2), (1, 2)):
        out[f"u{i}{j}"] = u_of(L(i, j))
    out["u012"] = u_of(N)
    out["y"] = pred(lambda A: len(A) >= 2)
    out["∅"] = empty_upset(n)
    return out


# --- the sieve M of compatible pairs and the map σ -------------------------


@lru_cache(maxsize=None)
def m_poset(n_star: int) -> tuple[Poset, MonotoneMap]:
    """``M = {(A, B) : A ∠ B}`` inside ``P × P``, with its embedding.

    Labels are ``(LevelSet, LevelSet)`` pairs.
    """
    P = p_poset(n_star)
    PP = product(P, P)
    size = len(P)
    keep = [a * size + b for a in range(size) for b in range(size) if _angle_mask(a, b)]
    M, emb = induced_subposet(PP, keep)
    return M, emb


class OStar(NamedTuple):
    poset: Poset
    sigma: MonotoneMap
    embedding: MonotoneMap


def star_index_poset(U: UpSet, V: UpSet) -> tuple[Poset, MonotoneMap]:
    """``U * V`` as a subposet of ``P`` (inclusion order), with its embedding."""
    W = star(U, V)
    return induced_subposet(p_poset(U.n_star), bits(W.family))


def ostar_poset(U: UpSet, V: UpSet) -> OStar:
    """``U ⊛ V = (U × V) ∩ M`` with ``σ(A, B) = A ∪ B`` onto ``U * V``.

    Also returns the embedding of ``U ⊛ V`` into ``M``.
    """
    U._same(V)
    M, _ = m_poset(U.n_star)
    keep = [i for i, (a, b) in enumerate(M.labels) if a in U and b in V]
    OS, emb = induced_subposet(M, keep)
    target, _ = star_index_poset(U, V)
    sigma = MonotoneMap(OS, target, tuple(target.index(a | b) for a, b in OS.labels))
    return OStar(OS, sigma, emb)


def _alpha(i: int, A: LevelSet, B: LevelSet) -> tuple[LevelSet, LevelSet]:
    j, odd = divmod(i, 2)
    left = A.at_most(j) if odd else A.below(j)
    return left, A.at_least(j) | B


def _beta(i: int, A: LevelSet, B: LevelSet) -> tuple[LevelSet, LevelSet]:
    j, odd = divmod(i, 2)
    extra = B.at_most(j) if odd else B.below(j)
    return A | extra, B.at_least(j)


def _endomap_of_m(n_star: int, i: int, rule) -> MonotoneMap:
    if not 0 <= i <= 2 * n_star:
        raise MonoidError(f"index {i} outside 0..{2 * n_star}")
    M, _ = m_poset(n_star)
    return MonotoneMap(M, M, tuple(M.index(rule(i, a, b)) for a, b in M.labels))


def alpha_map(i: int, n_star: int) -> MonotoneMap:
    """``α_{2j}(A,B) = (A_{<j}, A_{≥j} ∪ B)`` and ``α_{2j+1}(A,B) = (A_{≤j}, A_{≥j} ∪ B)``."""
    return _endomap_of_m(n_star, i, _alpha)


def beta_map(i: int, n_star: int) -> MonotoneMap:
    """``β_{2j}(A,B) = (A ∪ B_{<j}, B_{≥j})`` and ``β_{2j+1}(A,B) = (A ∪ B_{≤j}, B_{≥j})``."""
    return _endomap_of_m(n_star, i, _beta)


def check_sigma_cofinal(U: UpSet, V: UpSet) -> CofinalityReport:
    return is_homotopy_cofinal(ostar_poset(U, V).sigma)


def check_sigma_final(U: UpSet, V: UpSet) -> CofinalityReport:
    return is_homotopy_final(ostar_poset(U, V).sigma)


def _split_level(U: UpSet, V: UpSet, C: LevelSet) -> int:
    """Least ``k`` in ``0..n*-1`` with ``C_{≤k} ∈ U`` and ``C_{≥k} ∈ V``."""
    if C not in star(U, V):
        raise MonoidError(f"{C} is not in U * V")
    for k in range(U.n_star):
        if C.at_most(k) in U and C.at_least(k) in V:
            return k
    raise MonoidError(f"no split level for {C}")  # unreachable for n* >= 1


@dataclass(frozen=True)
class CofinalWitness:
    """The contraction ``1 <= φ >= ψ`` of ``σ/C``."""

    comma: Poset
    inclusion: MonotoneMap
    phi: MonotoneMap
    psi: MonotoneMap
    least: int
    greatest: int
    split: int

    def chain(self) -> HomotopyChain:
        return HomotopyChain((identity(self.comma), self.phi, self.psi))

    def validate(self) -> None:
        ident = identity(self.comma)
        if not map_leq(ident, self.phi):
            raise MonoidError("φ is not above the identity")
        if not map_leq(self.psi, self.phi):
            raise MonoidError("ψ is not below φ")
        if not self.psi.is_constant():
            raise MonoidError("ψ is not constant")


def sg_cofinal_witness(U: UpSet, V: UpSet, C: LevelSet) -> CofinalWitness:
    """Explicit contraction of ``σ/C = {(A,B) ∈ U ⊛ V : A ∪ B ⊆ C}``.

    ``φ(A,B) = (C_{≤max A}, C_{≥min B})`` with ``max ∅ = -1`` and
    ``min ∅ = n*``; ``ψ`` is constant at ``(C_{≤i}, C_{≥j})`` for the least
    ``i`` with ``C_{≤i} ∈ U`` and the largest ``j`` with ``C_{≥j} ∈ V``.
    """
    if C not in star(U, V):
        raise MonoidError(f"{C} is not in U * V")
    split = _split_level(U, V, C) if U.n_star else 0
    os_ = ostar_poset(U, V)
    target = os_.sigma.cod
    comma, inc = comma_over(os_.sigma, target.index(C))
    n = U.n_star
    i = next(t for t in range(-1, n + 1) if C.at_most(t) in U)
    j = next(t for t in range(n, -2, -1) if C.at_least(t) in V)
    phi = tuple(comma.index((C.at_most(a.top), C.at_least(b.bottom))) for a, b in comma.labels)
    phi_map = MonotoneMap(comma, comma, phi)
    psi_map = constant(comma, comma, comma.index((C.at_most(i), C.at_least(j))))
    return CofinalWitness(comma, inc, phi_map, psi_map, i, j, split)


def sg_final_witness(U: UpSet, V: UpSet, C: LevelSet) -> HomotopyChain:
    """Zigzag from the identity of ``C/σ`` to the constant at ``(C_{≤k}, C_{≥k})``.

    Runs ``α_{2n*} = 1, α_{2n*-1}, ..., α_{2k+1}``, then ``α_{2k+1} β_i`` for
    ``i = 1..2k+1``, then the constant; every map is restricted to ``C/σ``,
    which fails loudly if some map leaves it.
    """
    os_ = ostar_poset(U, V)
    target = os_.sigma.cod
    if C not in star(U, V):
        raise MonoidError(f"{C} is not in U * V")
    comma, inc = comma_under(target.index(C), os_.sigma)
    if U.n_star == 0:
        return HomotopyChain((identity(comma),))
    k = _split_level(U, V, C)
    n = U.n_star
    into_m = compose(os_.embedding, inc)
    alphas = [restrict_endomap(alpha_map(i, n), into_m) for i in range(2 * n, 2 * k, -1)]
    betas = [restrict_endomap(beta_map(i, n), into_m) for i in range(1, 2 * k + 2)]
    last = alphas[-1]
    steps = alphas + [compose(last, b) for b in betas]
    base = comma.index((C.at_most(k), C.at_least(k)))
    steps.append(constant(comma, comma, base))
    return HomotopyChain(tuple(steps))
