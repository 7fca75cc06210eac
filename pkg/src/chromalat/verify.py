"""Invariant sweeps and the reproduction suite behind ``chromalat check`` and ``verify-paper``."""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator

from .homotopy import (
    contractibility_oracle,
    is_homotopy_cofinal,
    is_strongly_contractible,
)
from .monoid import (
    LevelSet,
    ThreadList,
    UpSet,
    all_level_sets,
    alpha_map,
    angle,
    beta_map,
    catalogue3,
    check_sigma_cofinal,
    check_sigma_final,
    enumerate_q,
    full_levels,
    identity_upset,
    is_thread_realizable,
    kappa,
    m_poset,
    p_poset,
    q_poset,
    sg_cofinal_witness,
    sg_final_witness,
    star,
    star_fold,
    star_u_rule,
    submonoid_closure,
    thread_set,
    thread_set_by_product,
    u_of,
    v_of,
    empty_upset,
)
from .poset import (
    all_posets,
    identity,
    is_sieve,
    map_leq,
    product,
    random_poset,
    subdivision,
)


@dataclass
class VerificationRecord:
    check: str
    anchor: str
    status: str
    elapsed: float
    cases: int = 0
    passed: int = 0
    counterexample: Any = None
    limit: float | None = None

    def __post_init__(self):
        if self.status == "fail" and self.counterexample is None:
            self.counterexample = "unspecified failure"

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def line(self) -> str:
        text = f"[{self.status.upper()}] {self.check:<22} {self.passed}/{self.cases} cases  {self.elapsed:7.2f}s  {self.anchor}"
        if not self.ok:
            text += f"\n       counterexample: {self.counterexample}"
        return text

    def to_json(self) -> dict[str, Any]:
        return {
            "check": self.check,
            "anchor": self.anchor,
            "status": self.status,
            "elapsed": round(self.elapsed, 3),
            "cases": self.cases,
            "passed": self.passed,
            "counterexample": None if self.counterexample is None else str(self.counterexample),
        }


def run_cases(check: str, anchor: str, cases: Iterable[Any], test: Callable[[Any], Any], limit: float | None = None) -> VerificationRecord:
    """Run ``test`` on every case; it returns None on success or a counterexample payload.

    Exceptions raised by ``test`` count as failures carrying the exception.
    """
    start = time.perf_counter()
    total = passed = 0
    first = None
    for case in cases:
        total += 1
        try:
            bad = test(case)
        except Exception as exc:  # noqa: BLE001 - a crash inside a sweep is a failed case
            bad = f"{case}: {type(exc).__name__}: {exc}"
        if bad is None:
            passed += 1
        elif first is None:
            first = bad
    elapsed = time.perf_counter() - start
    status = "pass" if total == passed else "fail"
    if limit is not None and elapsed > limit and status == "pass":
        status, first = "fail", f"took {elapsed:.2f}s, limit {limit}s"
    return VerificationRecord(check, anchor, status, elapsed, total, passed, first, limit)


# --- individual invariants; each returns None when the case passes ---------


def law_assoc(case):
    U, V, W = case
    if star(star(U, V), W) != star(U, star(V, W)):
        return (str(U), str(V), str(W))


def law_identity(U):
    e = identity_upset(U.n_star)
    if star(e, U) != U or star(U, e) != U:
        return str(U)


def law_monotone(case):
    U, U2, V = case
    if not U.issubset(U2):
        return None
    if not star(U, V).issubset(star(U2, V)) or not star(V, U).issubset(star(V, U2)):
        return (str(U), str(U2), str(V))


def law_distrib(case):
    U, U2, V = case
    if star(U | U2, V) != star(U, V) | star(U2, V) or star(V, U | U2) != star(V, U) | star(V, U2):
        return (str(U), str(U2), str(V))


def law_triple(case):
    U, V, W = case
    direct = 0
    for a in U:
        for b in V:
            if not angle(a, b):
                continue
            for c in W:
                if angle(a, c) and angle(b, c):
                    direct |= 1 << (a | b | c).mask
    if star_fold([U, V, W]).family != direct:
        return (str(U), str(V), str(W))


def law_kappa_hom(case):
    U, V = case
    if kappa(star(U, V)) != kappa(U) & kappa(V):
        return (str(U), str(V))
    if U.q_leq(V) and not kappa(V).issubset(kappa(U)):
        return ("order", str(U), str(V))


def law_kappa_values(A: LevelSet):
    N = full_levels(A.n_star)
    expected_u = N if len(A) == 0 else (A if len(A) == 1 else LevelSet(A.n_star, 0))
    if kappa(v_of(A)) != A or kappa(u_of(A)) != expected_u:
        return str(A)


def law_mu_u(case):
    A, B = case
    if star(u_of(A), u_of(B)) != star_u_rule(A, B):
        return (str(A), str(B))


def law_thread(LA: ThreadList):
    if thread_set(LA) != thread_set_by_product(LA):
        return str(LA)


def law_realize(U: UpSet):
    witness = is_thread_realizable(U)
    if witness is not None and thread_set(witness) != U:
        return (str(U), str(witness))


def law_q_ends(U: UpSet):
    n = U.n_star
    if not identity_upset(n).q_leq(U) or not U.q_leq(empty_upset(n)):
        return str(U)
    if len(U) and full_levels(n) not in U:
        return str(U)


def law_m_sieve(n: int):
    M, emb = m_poset(n)
    P = p_poset(n)
    if not is_sieve(product(P, P), emb.assignment):
        return f"M at n*={n} is not a sieve"


def law_al_bt(case):
    """Union preservation, extreme values and the zigzag pattern for index ``i``."""
    n, i = case
    M, _ = m_poset(n)
    union = [a | b for a, b in M.labels]
    for name, h in (("alpha", alpha_map(i, n)), ("beta", beta_map(i, n))):
        if any(union[h(x)] != union[x] for x in M):
            return f"{name}_{i} does not preserve the union at n*={n}"
    ident = tuple(range(len(M)))
    empty = LevelSet(n, 0)
    if i == 0:
        if alpha_map(0, n).assignment != tuple(M.index((empty, u)) for u in union):
            return "alpha_0 != (∅, A∪B)"
        if beta_map(0, n).assignment != ident:
            return "beta_0 != id"
    if i == 2 * n:
        if alpha_map(i, n).assignment != ident:
            return f"alpha_{i} != id"
        if beta_map(i, n).assignment != tuple(M.index((u, empty)) for u in union):
            return f"beta_{i} != (A∪B, ∅)"
    if i % 2 == 1:
        for fam in (alpha_map, beta_map):
            lo, mid, hi = fam(i - 1, n), fam(i, n), fam(i + 1, n)
            if not (map_leq(lo, mid) and map_leq(hi, mid)):
                return f"{fam.__name__} zigzag fails at {i} for n*={n}"
    return None


def law_sigma(case, direction: str = "both"):
    """σ is cofinal and final, and both explicit contractions validate."""
    U, V = case
    if direction in ("both", "cofinal"):
        rep = check_sigma_cofinal(U, V)
        if not rep.holds:
            return ("cofinal", str(U), str(V), [str(rep.map.cod.labels[e.element]) for e in rep.failures()])
    if direction in ("both", "final"):
        rep = check_sigma_final(U, V)
        if not rep.holds:
            return ("final", str(U), str(V), [str(rep.map.cod.labels[e.element]) for e in rep.failures()])
    for C in star(U, V):
        if direction in ("both", "cofinal"):
            w = sg_cofinal_witness(U, V, C)
            w.validate()
            w.chain()
        if direction in ("both", "final"):
            chain = sg_final_witness(U, V, C)
            if chain.start != identity(chain.start.dom) or not chain.end.is_constant():
                return ("final witness", str(U), str(V), str(C))
    return None


def law_subdiv_cofinal(P):
    _, mx = subdivision(P)
    if not is_homotopy_cofinal(mx).holds:
        return repr(P)


def law_oracle(P):
    if is_strongly_contractible(P) != contractibility_oracle(P):
        return repr(P)


# --- case generators -------------------------------------------------------


def random_upset(n: int, rng: random.Random) -> UpSet:
    return rng.choice(enumerate_q(n))


def random_thread_list(n: int, rng: random.Random, max_len: int = 4) -> ThreadList:
    r = rng.randint(0, max_len)
    return ThreadList(n, tuple(LevelSet(n, rng.randrange(1 << n)) for _ in range(r)))


def _q_tuples(n: int, k: int, exhaustive: bool, samples: int, rng: random.Random) -> Iterator[tuple]:
    if exhaustive:
        return itertools.product(enumerate_q(n), repeat=k)
    return (tuple(random_upset(n, rng) for _ in range(k)) for _ in range(samples))


def _p_tuples(n: int, k: int, exhaustive: bool, samples: int, rng: random.Random) -> Iterator[Any]:
    levels = all_level_sets(n)
    if exhaustive:
        it = itertools.product(levels, repeat=k)
    else:
        it = (tuple(rng.choice(levels) for _ in range(k)) for _ in range(samples))
    return (c[0] for c in it) if k == 1 else it


def _posets(n: int, exhaustive: bool, samples: int, rng: random.Random) -> Iterator[Any]:
    if exhaustive:
        return all_posets(n)
    return (random_poset(n, rng) for _ in range(samples))


def _thread_lists(n: int, exhaustive: bool, samples: int, rng: random.Random) -> Iterator[ThreadList]:
    if exhaustive:
        levels = all_level_sets(n)
        return (ThreadList(n, t) for r in range(4) for t in itertools.product(levels, repeat=r))
    return (random_thread_list(n, rng) for _ in range(samples))


def _q_single(n, exhaustive, samples, rng):
    return (c[0] for c in _q_tuples(n, 1, exhaustive, samples, rng))


@dataclass(frozen=True)
class Property:
    id: str
    anchor: str
    cases: Callable[[int, bool, int, random.Random], Iterable[Any]]
    test: Callable[[Any], Any]


PROPERTIES: dict[str, Property] = {
    p.id: p
    for p in [
        Property("assoc", "* is associative", lambda n, e, s, r: _q_tuples(n, 3, e, s, r), law_assoc),
        Property("identity", "u∅ is a two-sided identity", _q_single, law_identity),
        Property("monotone", "* is monotone in both arguments", lambda n, e, s, r: _q_tuples(n, 3, e, s, r), law_monotone),
        Property("distrib", "* distributes over union on both sides", lambda n, e, s, r: _q_tuples(n, 3, e, s, r), law_distrib),
        Property("triple", "U*V*W as pairwise-compatible unions", lambda n, e, s, r: _q_tuples(n, 3, e, s, r), law_triple),
        Property("kappa-hom", "κ(U*V) = κ(U) ∩ κ(V), κ order-reversing", lambda n, e, s, r: _q_tuples(n, 2, e, s, r), law_kappa_hom),
        Property("kappa-values", "κ(vA) = A and the three-case κ(uA)", lambda n, e, s, r: _p_tuples(n, 1, e, s, r), law_kappa_values),
        Property("mu-u", "uA * uB = u(A∪B) if A∠B, else ∅", lambda n, e, s, r: _p_tuples(n, 2, e, s, r), law_mu_u),
        Property("thread", "T(A1..Ar) = vA1 * ... * vAr", _thread_lists, law_thread),
        Property("realize", "thread witnesses re-evaluate to their up-set", _q_single, law_realize),
        Property("q-ends", "u∅ least, ∅ greatest, N in every nonempty U", _q_single, law_q_ends),
        Property("m-sieve", "M is a sieve in P×P", lambda n, e, s, r: [n], law_m_sieve),
        Property("al-bt", "α_i, β_i preserve σ, extremes, zigzag", lambda n, e, s, r: [(n, i) for i in range(2 * n + 1)], law_al_bt),
        Property("sg-cofinal", "σ: U⊛V → U*V is homotopy cofinal", lambda n, e, s, r: _q_tuples(n, 2, e, s, r), lambda c: law_sigma(c, "cofinal")),
        Property("sg-final", "σ: U⊛V → U*V is homotopy final", lambda n, e, s, r: _q_tuples(n, 2, e, s, r), lambda c: law_sigma(c, "final")),
        Property("subdiv-cofinal", "max: s(P) → P is homotopy cofinal (n = |P|)", _posets, law_subdiv_cofinal),
        Property("oracle", "core verdict equals mapping-poset search (n = |P|)", _posets, law_oracle),
    ]
}


def run_property(prop_id: str, n: int, exhaustive: bool = True, samples: int = 100, seed: int = 0) -> VerificationRecord:
    if prop_id not in PROPERTIES:
        raise KeyError(f"unknown property {prop_id!r}; known: {', '.join(PROPERTIES)}")
    prop = PROPERTIES[prop_id]
    rng = random.Random(seed)
    return run_cases(prop_id, prop.anchor, prop.cases(n, exhaustive, samples, rng), prop.test)


# --- the reproduction suite --------------------------------------------------

SEED = 20240601


def _merge(check: str, anchor: str, records: list[VerificationRecord], limit: float | None) -> VerificationRecord:
    elapsed = sum(r.elapsed for r in records)
    bad = next((r for r in records if not r.ok), None)
    status = "pass" if bad is None else "fail"
    counter = None if bad is None else f"{bad.check}: {bad.counterexample}"
    if limit is not None and elapsed > limit and status == "pass":
        status, counter = "fail", f"took {elapsed:.2f}s, limit {limit}s"
    return VerificationRecord(
        check, anchor, status, elapsed,
        sum(r.cases for r in records), sum(r.passed for r in records), counter, limit,
    )


def c01_q_size() -> VerificationRecord:
    def test(n):
        size = len(enumerate_q(n))
        return None if size == 20 else f"|Q| = {size}"
    return run_cases("q-size", "|Q| = 20 for n* = 3", [3], test, limit=1.0)


def c02_thread_example() -> VerificationRecord:
    from .expr import evaluate

    def test(_):
        n = 4
        U = evaluate("v{0,1,3}*v{0,2,3}", n)
        expected = UpSet.from_predicate(lambda A: 0 in A or 3 in A or {1, 2} <= set(A), n)
        if U != expected:
            return f"product is {U}"
        if star(U, U) != v_of(LevelSet.of([0, 3], n)):
            return f"square is {star(U, U)}"
        closure = submonoid_closure([U], n)
        if len(closure) != 3:
            return f"generated submonoid has {len(closure)} elements"
        return None
    return run_cases("thread-example", "v{0,1,3}*v{0,2,3}, its square v{0,3}, a 3-element submonoid", [None], test, limit=1.0)


def c03_realizability() -> VerificationRecord:
    cat = catalogue3()

    def test(item):
        name, U = item
        witness = is_thread_realizable(U)
        if name == "w1":
            return None if witness is None else f"w1 realized by {witness}"
        if witness is None:
            return f"{name} not realizable"
        return None if thread_set(witness) == U else f"{name}: {witness} evaluates to {thread_set(witness)}"
    return run_cases("realizability", "w1 is not thread-realizable; every other named element is", cat.items(), test, limit=5.0)


def c04_factorizations() -> VerificationRecord:
    c = catalogue3()
    rows = [
        ("x0", ["v01", "v02"]), ("x1", ["v01", "v12"]), ("x2", ["v02", "v12"]),
        ("w0", ["u0", "v12"]), ("w2", ["v01", "u2"]), ("y", ["v01", "v02", "v12"]),
    ]

    def test(row):
        name, factors = row
        got = star_fold([c[f] for f in factors])
        return None if got == c[name] else f"{name} != {'*'.join(factors)} (= {got})"
    return run_cases("factorizations", "x_i, w0, w2, y factor through v's and u's", rows, test, limit=1.0)


def c05_mu_u() -> VerificationRecord:
    cases = [(A, B) for n in range(4) for A in all_level_sets(n) for B in all_level_sets(n)]
    return run_cases("mu-u", PROPERTIES["mu-u"].anchor, cases, law_mu_u, limit=1.0)


def c06_monoid_laws() -> VerificationRecord:
    rng = random.Random(SEED)
    records = []
    for name in ("assoc", "monotone", "distrib"):
        p = PROPERTIES[name]
        records.append(run_cases(name, p.anchor, p.cases(2, True, 0, rng), p.test))
    records.append(run_cases("identity", "", enumerate_q(2), law_identity))
    for n in (3, 4):
        for name in ("assoc", "monotone", "distrib"):
            p = PROPERTIES[name]
            records.append(run_cases(name, p.anchor, p.cases(n, False, 500, rng), p.test))
        records.append(run_cases("identity", "", (random_upset(n, rng) for _ in range(500)), law_identity))
    return _merge("monoid-laws", "associativity, identity, monotonicity, distributivity", records, 10.0)


def c07_kappa() -> VerificationRecord:
    records = [
        run_cases("kappa-hom", "", itertools.product(enumerate_q(3), repeat=2), law_kappa_hom),
        run_cases("kappa-values", "", [A for n in range(4) for A in all_level_sets(n)], law_kappa_values),
    ]
    return _merge("kappa", "κ is a monoid map to (P, ∩) with κ(vA) = A and κ(uA) by |A|", records, 1.0)


def c08_sigma() -> VerificationRecord:
    records = [run_cases(f"sigma n*={n}", "", itertools.product(enumerate_q(n), repeat=2), law_sigma) for n in (2, 3)]
    return _merge("sigma", "σ: U⊛V → U*V is homotopy cofinal and final, with explicit contractions", records, 300.0)


def c09_subdivision() -> VerificationRecord:
    rng = random.Random(SEED)
    small = [P for n in range(5) for P in all_posets(n)]
    rand = [random_poset(rng.randint(5, 6), rng) for _ in range(100)]
    return run_cases("subdiv-cofinal", PROPERTIES["subdiv-cofinal"].anchor, small + rand, law_subdiv_cofinal, limit=120.0)


def c10_oracle() -> VerificationRecord:
    rng = random.Random(SEED)
    small = [P for n in range(5) for P in all_posets(n)]
    rand = [random_poset(rng.randint(5, 7), rng) for _ in range(200)]
    return run_cases("oracle", PROPERTIES["oracle"].anchor, small + rand, law_oracle)


def c11_threads() -> VerificationRecord:
    rng = random.Random(SEED)
    cases = [random_thread_list(rng.randint(1, 4), rng) for _ in range(1000)]
    return run_cases("thread-product", PROPERTIES["thread"].anchor, cases, law_thread)


def c12_al_bt() -> VerificationRecord:
    cases = [(n, i) for n in range(4) for i in range(2 * n + 1)]
    return run_cases("alpha-beta", PROPERTIES["al-bt"].anchor, cases, law_al_bt, limit=5.0)


SUITE: list[Callable[[], VerificationRecord]] = [
    c01_q_size, c02_thread_example, c03_realizability, c04_factorizations,
    c05_mu_u, c06_monoid_laws, c07_kappa, c08_sigma,
    c09_subdivision, c10_oracle, c11_threads, c12_al_bt,
]


def run_suite(progress: Callable[[VerificationRecord], None] | None = None) -> list[VerificationRecord]:
    out = []
    for criterion in SUITE:
        rec = criterion()
        out.append(rec)
        if progress is not None:
            progress(rec)
    return out
