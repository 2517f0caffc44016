"""Homomorphism counting, walk counting, pinned-count vectors and probes.

The counters here are exact: the backtracking enumerator visits every
homomorphism (with edge-consistency pruning), walk counts go through
arbitrary-precision adjacency powers, and the subdivision-aware counter sums
walk-matrix entries over assignments of a small skeleton.  Budgets are
explicit — an instance that is too large raises
:class:`BudgetExceededError` instead of running forever.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

import sympy

from .errors import BudgetExceededError, InputError
from .graphs import (
    DistinguishedGraph,
    Graph,
    Multigraph,
    PartiallyLabelledGraph,
    automorphism_group,
)

STATE_BUDGET_DEFAULT = 10**8
SUBDIVIDED_FREE_BUDGET = 8
TUPLE_BUDGET = 10**5


@lru_cache(maxsize=None)
def _assert_prime(p: int) -> None:
    if not sympy.isprime(p):
        raise InputError(f"modulus {p} is not prime")


@dataclass(frozen=True)
class ZpScalar:
    """A least non-negative residue in the prime field Z_p.

    The modulus is checked for primality at construction (deterministically —
    the check is exact for anything representable here).  Arithmetic between
    scalars requires matching moduli.
    """

    value: int
    modulus: int

    def __post_init__(self) -> None:
        _assert_prime(self.modulus)
        if not 0 <= self.value < self.modulus:
            raise InputError(
                f"residue {self.value} not canonical modulo {self.modulus}"
            )

    @classmethod
    def of(cls, value: int, modulus: int) -> "ZpScalar":
        _assert_prime(modulus)
        return cls(value % modulus, modulus)

    def _same(self, other: "ZpScalar") -> None:
        if self.modulus != other.modulus:
            raise InputError("mixed moduli")

    def __add__(self, other: "ZpScalar") -> "ZpScalar":
        self._same(other)
        return ZpScalar((self.value + other.value) % self.modulus, self.modulus)

    def __sub__(self, other: "ZpScalar") -> "ZpScalar":
        self._same(other)
        return ZpScalar((self.value - other.value) % self.modulus, self.modulus)

    def __mul__(self, other: "ZpScalar") -> "ZpScalar":
        self._same(other)
        return ZpScalar((self.value * other.value) % self.modulus, self.modulus)

    def __neg__(self) -> "ZpScalar":
        return ZpScalar((-self.value) % self.modulus, self.modulus)

    def __pow__(self, k: int) -> "ZpScalar":
        if k < 0:
            return self.inverse() ** (-k)
        return ZpScalar(pow(self.value, k, self.modulus), self.modulus)

    def inverse(self) -> "ZpScalar":
        if self.value == 0:
            raise InputError("0 has no inverse")
        return ZpScalar(pow(self.value, self.modulus - 2, self.modulus), self.modulus)

    def is_zero(self) -> bool:
        return self.value == 0

    def is_one(self) -> bool:
        return self.value == 1

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return str(self.value)


def zp(value: int, modulus: int) -> ZpScalar:
    """Shorthand for :meth:`ZpScalar.of`."""
    return ZpScalar.of(value, modulus)


@dataclass(frozen=True)
class HomCount:
    """A homomorphism count: exact integer, residue, or both (consistent)."""

    exact: int | None
    residue: ZpScalar | None

    def __post_init__(self) -> None:
        if self.exact is None and self.residue is None:
            raise InputError("at least one of exact/residue must be present")
        if self.exact is not None and self.exact < 0:
            raise InputError("counts are non-negative")
        if self.exact is not None and self.residue is not None:
            if self.exact % self.residue.modulus != self.residue.value:
                raise InputError("exact count and residue disagree")


def state_budget_default() -> int:
    """Budget for the a-priori |V(H)|^free state count, env-overridable."""
    raw = os.environ.get("MODHOM_BUDGET_STATES")
    if raw is None:
        return STATE_BUDGET_DEFAULT
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"MODHOM_BUDGET_STATES must be an integer, got {raw!r}")
    if value <= 0:
        raise InputError("MODHOM_BUDGET_STATES must be positive")
    return value


def _as_labelled(j: Graph | PartiallyLabelledGraph) -> PartiallyLabelledGraph:
    if isinstance(j, PartiallyLabelledGraph):
        return j
    if isinstance(j, DistinguishedGraph):
        raise InputError("pass pins explicitly, not a distinguished graph")
    return PartiallyLabelledGraph.make(j, {})


def _check_pins(j: PartiallyLabelledGraph, h: Graph) -> dict[int, int]:
    pins = j.pin_map
    for v, t in pins.items():
        if not 0 <= t < h.n:
            raise InputError(f"pin {v} -> {t} out of range for target n={h.n}")
    return pins


def count_homs(
    j: Graph | PartiallyLabelledGraph,
    h: Graph,
    p: int | None = None,
    *,
    state_budget: int | None = None,
) -> HomCount:
    """Count maps V(G) -> V(H) preserving every edge and respecting pins.

    Backtracks over the vertices of each component (pinned vertices first,
    then by decreasing degree), pruning candidates against already-assigned
    neighbours.  With ``p`` the result also carries the residue mod p.
    """
    j = _as_labelled(j)
    if isinstance(j.base, Multigraph):
        raise InputError("homomorphism counting needs a simple base graph")
    g: Graph = j.base
    pins = _check_pins(j, h)
    if p is not None:
        _assert_prime(p)

    budget = state_budget if state_budget is not None else state_budget_default()
    free = g.n - len(pins)
    if h.n > 1 and free > 0 and h.n**free > budget:
        raise BudgetExceededError(
            f"state budget exceeded: {h.n}^{free} > {budget}"
        )

    total = 1
    for comp in g.components():
        total *= _count_component(g, comp, pins, h)
        if total == 0:
            break
    residue = ZpScalar(total % p, p) if p is not None else None
    return HomCount(exact=total, residue=residue)


def _count_component(
    g: Graph, comp: Sequence[int], pins: Mapping[int, int], h: Graph
) -> int:
    # Isolated free vertices contribute a clean factor of |V(H)|.
    if len(comp) == 1:
        v = comp[0]
        return 1 if v in pins else h.n
    order = sorted(comp, key=lambda v: (v not in pins, -g.degree(v), v))
    assignment: dict[int, int] = {}
    for v in order:
        if v in pins:
            assignment[v] = pins[v]
    # Verify pinned-pinned edges up front.
    for v in order:
        if v in pins:
            for u in g.neighbors(v):
                if u in pins and not h.has_edge(pins[v], pins[u]):
                    return 0
    free_order = [v for v in order if v not in pins]

    count = 0

    def extend(i: int) -> None:
        nonlocal count
        if i == len(free_order):
            count += 1
            return
        v = free_order[i]
        candidates: set[int] | None = None
        for u in g.neighbors(v):
            if u in assignment:
                nbrs = h.neighbors(assignment[u])
                candidates = set(nbrs) if candidates is None else candidates & nbrs
                if not candidates:
                    return
        pool = candidates if candidates is not None else range(h.n)
        for w in pool:
            assignment[v] = w
            extend(i + 1)
            del assignment[v]

    extend(0)
    return count


def enumerate_homs(
    j: Graph | PartiallyLabelledGraph, h: Graph, *, limit: int = 10**6
) -> Iterator[dict[int, int]]:
    """Yield every homomorphism as a dict (for tiny-scale audits)."""
    j = _as_labelled(j)
    if isinstance(j.base, Multigraph):
        raise InputError("homomorphism counting needs a simple base graph")
    g: Graph = j.base
    pins = _check_pins(j, h)
    order = sorted(g.vertices(), key=lambda v: (v not in pins, -g.degree(v), v))
    assignment: dict[int, int] = dict(pins)
    for v in pins:
        for u in g.neighbors(v):
            if u in pins and not h.has_edge(pins[v], pins[u]):
                return
    free_order = [v for v in order if v not in pins]
    yielded = 0

    def extend(i: int) -> Iterator[dict[int, int]]:
        nonlocal yielded
        if i == len(free_order):
            yielded += 1
            if yielded > limit:
                raise BudgetExceededError(f"more than {limit} homomorphisms")
            yield dict(assignment)
            return
        v = free_order[i]
        candidates: set[int] | None = None
        for u in g.neighbors(v):
            if u in assignment:
                nbrs = h.neighbors(assignment[u])
                candidates = set(nbrs) if candidates is None else candidates & nbrs
                if not candidates:
                    return
        pool = sorted(candidates) if candidates is not None else range(h.n)
        for w in pool:
            assignment[v] = w
            yield from extend(i + 1)
            del assignment[v]

    yield from extend(0)


# ---------------------------------------------------------------------------
# walk counting


def _mat_mul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    n = len(a)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        row_a = a[i]
        row_out = out[i]
        for k in range(n):
            aik = row_a[k]
            if aik:
                row_b = b[k]
                for jj in range(n):
                    row_out[jj] += aik * row_b[jj]
    return out


def adjacency_power(h: Graph, k: int) -> list[list[int]]:
    """A(h)^k over arbitrary-precision integers (k >= 0)."""
    if k < 0:
        raise InputError("walk length must be >= 0")
    n = h.n
    result = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    base = [[1 if h.has_edge(i, j) else 0 for j in range(n)] for i in range(n)]
    while k:
        if k & 1:
            result = _mat_mul(result, base)
        base = _mat_mul(base, base)
        k >>= 1
    return result


def count_walks(h: Graph, x: int, y: int, k: int) -> int:
    """Number of length-k walks from x to y (entry of A^k)."""
    if not (0 <= x < h.n and 0 <= y < h.n):
        raise InputError("walk endpoints out of range")
    return adjacency_power(h, k)[x][y]


def count_homs_subdivided(
    skeleton: Graph,
    lengths: Mapping[tuple[int, int], int],
    pins: Mapping[int, int],
    h: Graph,
    p: int,
    *,
    free_budget: int = SUBDIVIDED_FREE_BUDGET,
) -> ZpScalar:
    """Hom count into ``h`` of the graph obtained by subdividing each skeleton
    edge into a path of its length, mod p.

    Equivalent to flat counting on the expanded graph: a length-ℓ edge
    contributes the (σ(u),σ(v)) entry of A(h)^ℓ, and we sum the product of
    these entries over all assignments of the skeleton vertices.  Free
    skeleton vertices are budgeted (default 8); their domains are pre-filtered
    through edges to pinned vertices.
    """
    _assert_prime(p)
    norm_lengths: dict[tuple[int, int], int] = {}
    for (u, v), ell in lengths.items():
        e = (u, v) if u <= v else (v, u)
        if e not in skeleton.edges:
            raise InputError(f"length given for non-edge {e}")
        if ell < 1:
            raise InputError("edge lengths must be >= 1")
        norm_lengths[e] = ell
    if set(norm_lengths) != set(skeleton.edges):
        raise InputError("every skeleton edge needs a length")
    for v, t in pins.items():
        if not 0 <= v < skeleton.n:
            raise InputError(f"pinned vertex {v} out of range")
        if not 0 <= t < h.n:
            raise InputError(f"pin target {t} out of range")

    free = [v for v in skeleton.vertices() if v not in pins]
    if len(free) > free_budget:
        raise BudgetExceededError(
            f"free skeleton vertices {len(free)} > budget {free_budget}"
        )
    if h.n == 0:
        return ZpScalar.of(1 if skeleton.n == 0 else 0, p)

    powers = {ell: adjacency_power(h, ell) for ell in set(norm_lengths.values())}

    # Constant factor from pinned-pinned edges.
    const = 1
    for (u, v), ell in norm_lengths.items():
        if u in pins and v in pins:
            const *= powers[ell][pins[u]][pins[v]] % p
            const %= p
    if const == 0:
        return ZpScalar.of(0, p)

    # Domain restriction: structural zeros of walk matrices prune candidates.
    domains: dict[int, list[int]] = {}
    for v in free:
        dom = list(range(h.n))
        for (a, b), ell in norm_lengths.items():
            other = None
            if a == v and b in pins:
                other = pins[b]
            elif b == v and a in pins:
                other = pins[a]
            if other is not None:
                mat = powers[ell]
                dom = [w for w in dom if mat[other][w] > 0]
        if not dom:
            return ZpScalar.of(0, p)
        domains[v] = dom

    free_order = sorted(free, key=lambda v: (len(domains[v]), v))
    position = {v: i for i, v in enumerate(free_order)}
    assignment: dict[int, int] = dict(pins)

    # Edges to account for when a free vertex is placed: those whose other
    # endpoint is pinned or earlier in the order.
    edges_at: dict[int, list[tuple[int, int]]] = {v: [] for v in free_order}
    for (a, b), ell in norm_lengths.items():
        if a in pins and b in pins:
            continue
        if a in pins:
            edges_at[b].append((a, ell))
        elif b in pins:
            edges_at[a].append((b, ell))
        else:
            later = a if position[a] > position[b] else b
            other = b if later == a else a
            edges_at[later].append((other, ell))

    total = 0

    def extend(i: int, partial: int) -> None:
        nonlocal total
        if i == len(free_order):
            total = (total + partial) % p
            return
        v = free_order[i]
        for w in domains[v]:
            factor = 1
            for other, ell in edges_at[v]:
                factor = factor * powers[ell][assignment[other]][w] % p
                if factor == 0:
                    break
            if factor == 0:
                continue
            assignment[v] = w
            extend(i + 1, partial * factor % p)
            del assignment[v]

    extend(0, const)
    return ZpScalar.of(total, p)


# ---------------------------------------------------------------------------
# pinned-count vectors


@dataclass(frozen=True)
class TupleVector:
    """The vector of pinned hom counts mod p over r-tuples of target vertices.

    Uncontracted: one entry per tuple in ``itertools.product`` order over
    V(H)^r.  Contracted: one entry per isomorphism class of (H, tuple), with
    ``index_map`` sending each of the ν raw indices to its class, class
    representatives (lexicographically least tuple per class) and orbit sizes
    attached.
    """

    arity: int
    modulus: int
    target_n: int
    entries: tuple[ZpScalar, ...]
    contracted: bool
    index_map: tuple[int, ...] | None = None
    class_reps: tuple[tuple[int, ...], ...] | None = None
    orbit_sizes: tuple[int, ...] | None = None

    def legend(self) -> list[tuple[int, ...]]:
        """Index legend: the tuple each entry position stands for."""
        if self.contracted:
            assert self.class_reps is not None
            return list(self.class_reps)
        return list(itertools.product(range(self.target_n), repeat=self.arity))

    def to_json(self) -> dict:
        out: dict = {
            "arity": self.arity,
            "modulus": self.modulus,
            "target_n": self.target_n,
            "contracted": self.contracted,
            "entries": [e.value for e in self.entries],
            "legend": [list(t) for t in self.legend()],
        }
        if self.contracted:
            assert self.index_map is not None and self.orbit_sizes is not None
            out["index_map"] = list(self.index_map)
            out["orbit_sizes"] = list(self.orbit_sizes)
        return out


def tuple_vector(
    g: DistinguishedGraph,
    h: Graph,
    p: int,
    contract: bool = False,
    *,
    state_budget: int | None = None,
) -> TupleVector:
    """Pinned hom counts of (g, marks) against every r-tuple of ``h``.

    With ``contract`` the entries collapse to one per isomorphism class of
    marked targets; this requires ``h`` to have no automorphism of order p
    (checked), which is exactly when the collapse loses nothing.
    """
    _assert_prime(p)
    r = len(g.marks)
    nu = h.n**r
    if nu > TUPLE_BUDGET:
        raise BudgetExceededError(f"tuple space {h.n}^{r} exceeds {TUPLE_BUDGET}")

    def entry(tgt: tuple[int, ...]) -> ZpScalar:
        pins: dict[int, int] = {}
        for mark, t in zip(g.marks, tgt):
            if mark in pins and pins[mark] != t:
                return ZpScalar.of(0, p)
            pins[mark] = t
        hc = count_homs(
            PartiallyLabelledGraph.make(g.base, pins),
            h,
            p,
            state_budget=state_budget,
        )
        assert hc.residue is not None
        return hc.residue

    all_tuples = list(itertools.product(range(h.n), repeat=r))
    raw = [entry(t) for t in all_tuples]
    if not contract:
        return TupleVector(
            arity=r,
            modulus=p,
            target_n=h.n,
            entries=tuple(raw),
            contracted=False,
        )

    from .reduction import find_order_p_automorphism

    if find_order_p_automorphism(h, p) is not None:
        raise InputError(
            "target has an automorphism of order p; contracted vectors "
            "are not well-defined here"
        )

    auts = automorphism_group(h)
    index_of: dict[tuple[int, ...], int] = {}
    reps: list[tuple[int, ...]] = []
    orbit_size: list[int] = []
    for t in all_tuples:
        if t in index_of:
            continue
        orbit = {tuple(a.images[x] for x in t) for a in auts}
        rep = min(orbit)
        idx = len(reps)
        reps.append(rep)
        orbit_size.append(len(orbit))
        for o in orbit:
            index_of[o] = idx
    # Re-order classes by representative for a canonical layout.
    order = sorted(range(len(reps)), key=lambda i: reps[i])
    new_pos = {old: new for new, old in enumerate(order)}
    entries: list[ZpScalar | None] = [None] * len(reps)
    for t, val in zip(all_tuples, raw):
        cls = new_pos[index_of[t]]
        if entries[cls] is None:
            entries[cls] = val
        elif entries[cls] != val:
            raise RuntimeError(
                "internal verification failure: pinned counts differ inside "
                "an isomorphism class"
            )
    index_map = tuple(new_pos[index_of[t]] for t in all_tuples)
    return TupleVector(
        arity=r,
        modulus=p,
        target_n=h.n,
        entries=tuple(e for e in entries if e is not None),
        contracted=True,
        index_map=index_map,
        class_reps=tuple(reps[i] for i in order),
        orbit_sizes=tuple(orbit_size[i] for i in order),
    )


def vec_combine(op: str, a: TupleVector, b: TupleVector) -> TupleVector:
    """Componentwise add/mul of two vectors of matching shape."""
    if op not in ("add", "mul"):
        raise InputError(f"unknown op {op!r}")
    if (
        a.modulus != b.modulus
        or a.arity != b.arity
        or a.target_n != b.target_n
        or a.contracted != b.contracted
        or len(a.entries) != len(b.entries)
        or a.index_map != b.index_map
    ):
        raise InputError("shape mismatch")
    if op == "add":
        entries = tuple(x + y for x, y in zip(a.entries, b.entries))
    else:
        entries = tuple(x * y for x, y in zip(a.entries, b.entries))
    return TupleVector(
        arity=a.arity,
        modulus=a.modulus,
        target_n=a.target_n,
        entries=entries,
        contracted=a.contracted,
        index_map=a.index_map,
        class_reps=a.class_reps,
        orbit_sizes=a.orbit_sizes,
    )


# ---------------------------------------------------------------------------
# empirical distinguishers


@dataclass(frozen=True)
class DistinguisherResult:
    probe: DistinguishedGraph
    value_a: ZpScalar
    value_b: ZpScalar


def _connected_probes(size: int) -> Iterator[Graph]:
    """All connected graphs on ``size`` vertices, ordered by edge bitmask over
    the lexicographic pair list."""
    pairs = list(itertools.combinations(range(size), 2))
    for mask in range(1 << len(pairs)):
        edges = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
        g = Graph.make(size, edges)
        if g.is_connected():
            yield g


def find_distinguisher(
    h: Graph,
    marks_a: Sequence[int],
    marks_b: Sequence[int],
    p: int,
    budget: int = 4,
) -> DistinguisherResult | None:
    """Search for a marked probe whose pinned counts mod p separate two mark
    tuples of the same target.

    Probes are enumerated by (vertex count, edge bitmask, mark tuple) — the
    first hit is therefore canonical.  Returns None when the budget is
    exhausted; that is a bounded-search outcome, not a proof that no
    distinguisher exists.
    """
    from .graphs import are_isomorphic
    from .reduction import find_order_p_automorphism

    _assert_prime(p)
    marks_a, marks_b = tuple(marks_a), tuple(marks_b)
    if len(marks_a) != len(marks_b):
        raise InputError("mark tuples must have equal length")
    if find_order_p_automorphism(h, p) is not None:
        raise InputError("order-p automorphism present; counts cannot separate")
    if are_isomorphic(
        DistinguishedGraph(h, marks_a), DistinguishedGraph(h, marks_b)
    ):
        raise InputError("mark tuples are isomorphic; nothing can separate them")
    r = len(marks_a)

    for size in range(1, budget + 1):
        for probe in _connected_probes(size):
            for mk in itertools.product(range(size), repeat=r):
                def pinned_count(targets: tuple[int, ...]) -> ZpScalar | None:
                    pins: dict[int, int] = {}
                    for v, t in zip(mk, targets):
                        if v in pins and pins[v] != t:
                            return ZpScalar.of(0, p)
                        pins[v] = t
                    hc = count_homs(
                        PartiallyLabelledGraph.make(probe, pins), h, p
                    )
                    assert hc.residue is not None
                    return hc.residue

                ca = pinned_count(marks_a)
                cb = pinned_count(marks_b)
                if ca != cb:
                    return DistinguisherResult(
                        probe=DistinguishedGraph(probe, mk),
                        value_a=ca,
                        value_b=cb,
                    )
    return None
