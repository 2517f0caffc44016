"""Two-spin partition functions on multigraphs, gadget algebra, and the
computer-assisted gadget search.

The model assigns each vertex a spin in {0,1}; a configuration contributes
gamma^(number of edges, loops and multiplicities included, whose endpoints
are both 1) times lambda^(number of 0-vertices).  Pinning fixes some spins
up front (pinned vertices still contribute their weights).

Gadgets are built from components sharing one distinguished vertex x plus a
bundle of parallel edges to a pinned partner y.  For each component the two
"halves" — the partition function with x forced to 0 or to 1 — have closed
forms, products of which evaluate whole gadgets without touching the
underlying graph.  ``search_gadget`` scans the family for a vector whose two
halves agree and do not vanish, which is the success condition the
classifier's hardness verdicts rely on; the search is exact about its
enumeration order, and a subgroup argument lets it skip the literal scan
without changing which vector is found first.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .counting import ZpScalar, _assert_prime
from .errors import BudgetExceededError, InputError
from .graphs import Graph, Multigraph, PartiallyLabelledGraph

SPIN_FREE_BUDGET = 24
EXPLICIT_VALIDATION_VERTICES = 20
CLIQUE_CHECK_BOUND = 12
LITERAL_PREFIX_CAP = 300_000

# A pinned spin instance is a multigraph plus a partial map to literal spins
# {0,1}; structurally identical to a partially labelled graph.
PinnedSpinGraph = PartiallyLabelledGraph


@dataclass(frozen=True)
class SpinParams:
    """The pair (gamma, lambda) in a common prime field.

    ``lam`` is the 0-vertex weight (``lambda`` being reserved in Python).
    """

    gamma: ZpScalar
    lam: ZpScalar

    def __post_init__(self) -> None:
        if self.gamma.modulus != self.lam.modulus:
            raise InputError("gamma and lambda must share a modulus")

    @property
    def p(self) -> int:
        return self.gamma.modulus

    @classmethod
    def of(cls, gamma: int, lam: int, p: int) -> "SpinParams":
        return cls(ZpScalar.of(gamma, p), ZpScalar.of(lam, p))

    @property
    def gamma_sq_is_one(self) -> bool:
        return (self.gamma * self.gamma).is_one()

    def i_p(self) -> ZpScalar | None:
        """The least square root of -1 mod p, if one exists."""
        p = self.p
        for x in range(p):
            if x * x % p == p - 1:
                return ZpScalar.of(x, p)
        return None


def _as_multigraph(g: Graph | Multigraph) -> Multigraph:
    if isinstance(g, Multigraph):
        return g
    return Multigraph.make(g.n, g.edges)


def _as_pinned(j: Graph | Multigraph | PartiallyLabelledGraph) -> tuple[Multigraph, dict[int, int]]:
    if isinstance(j, PartiallyLabelledGraph):
        base = _as_multigraph(j.base)
        pins = j.pin_map
    else:
        base = _as_multigraph(j)
        pins = {}
    for v, s in pins.items():
        if s not in (0, 1):
            raise InputError(f"spin pin for vertex {v} must be 0 or 1, got {s}")
    return base, pins


def _spin_eval(
    active: frozenset[int],
    adj: dict[int, dict[int, int]],
    w0: dict[int, int],
    w1: dict[int, int],
    gamma: int,
    p: int,
) -> int:
    """Sum over spin assignments of the active vertices, with per-vertex
    weights (w0, w1); setting a vertex to 1 multiplies each remaining
    neighbour's 1-weight by gamma^multiplicity."""
    if not active:
        return 1
    # connected components of the active subgraph
    comps: list[frozenset[int]] = []
    seen: set[int] = set()
    for s in sorted(active):
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        while stack:
            x = stack.pop()
            for u in adj[x]:
                if u in active and u not in comp:
                    comp.add(u)
                    stack.append(u)
        seen |= comp
        comps.append(frozenset(comp))
    if len(comps) > 1:
        out = 1
        for comp in comps:
            out = out * _spin_eval(comp, adj, w0, w1, gamma, p) % p
        return out

    comp = comps[0]
    pivot = max(comp, key=lambda u: (sum(1 for t in adj[u] if t in comp), -u))
    rest = comp - {pivot}
    total = w0[pivot] * _spin_eval(rest, adj, w0, w1, gamma, p) % p
    w1b = dict(w1)
    for u, mult in adj[pivot].items():
        if u in rest:
            w1b[u] = w1b[u] * pow(gamma, mult, p) % p
    total = (total + w1[pivot] * _spin_eval(rest, adj, w0, w1b, gamma, p)) % p
    return total


def _z_spin_general(
    j: Graph | Multigraph | PartiallyLabelledGraph,
    gamma: ZpScalar,
    vertex_weight: ZpScalar,
    weight_on: str,
    *,
    free_budget: int = SPIN_FREE_BUDGET,
) -> ZpScalar:
    base, pins = _as_pinned(j)
    p = gamma.modulus
    gv = gamma.value
    wv = vertex_weight.value
    zero_w, one_w = (wv, 1) if weight_on == "zeros" else (1, wv)

    free = [v for v in range(base.n) if v not in pins]
    if len(free) > free_budget:
        raise BudgetExceededError(
            f"{len(free)} free vertices exceed budget {free_budget}"
        )

    const = 1
    for v, s in pins.items():
        if s == 0:
            const = const * zero_w % p
        else:
            const = const * one_w % p * pow(gv, base.loops(v), p) % p
    for u, v, mult in base.edges:
        if u != v and pins.get(u) == 1 and pins.get(v) == 1:
            const = const * pow(gv, mult, p) % p
    if const == 0:
        return ZpScalar.of(0, p)

    adj: dict[int, dict[int, int]] = {v: {} for v in free}
    w0 = {v: zero_w % p for v in free}
    w1 = {}
    for v in free:
        w = one_w % p * pow(gv, base.loops(v), p) % p
        for u, mult in base.neighbors(v).items():
            if pins.get(u) == 1:
                w = w * pow(gv, mult, p) % p
            elif u not in pins:
                adj[v][u] = mult
        w1[v] = w

    total = _spin_eval(frozenset(free), adj, w0, w1, gv, p)
    return ZpScalar.of(const * total, p)


def z_spin(
    j: Graph | Multigraph | PartiallyLabelledGraph,
    sp: SpinParams,
    *,
    free_budget: int = SPIN_FREE_BUDGET,
) -> ZpScalar:
    """Partition function mod p over all spin assignments extending the pins.

    Loops at a 1-vertex contribute gamma once per multiplicity; pinned
    0-vertices still contribute their lambda factor.
    """
    return _z_spin_general(j, sp.gamma, sp.lam, "zeros", free_budget=free_budget)


@dataclass(frozen=True)
class DualReport:
    lhs: ZpScalar
    rhs: ZpScalar
    ok: bool


def dual_check(g: Graph | Multigraph, sp: SpinParams) -> DualReport:
    """Verify the weight-inversion identity on one multigraph: scaling the
    0-weighted sum by (lambda^-1)^|V| matches the 1-weighted sum at the
    inverse weight."""
    if sp.lam.is_zero():
        raise InputError("duality needs an invertible lambda")
    base = _as_multigraph(g)
    lam_inv = sp.lam.inverse()
    lhs = (lam_inv ** base.n) * z_spin(base, sp)
    rhs = _z_spin_general(base, sp.gamma, lam_inv, "ones")
    return DualReport(lhs=lhs, rhs=rhs, ok=lhs == rhs)


# ---------------------------------------------------------------------------
# gadget components and assembly


def _halves_raw(kind: str, param: int, gv: int, lv: int, p: int) -> tuple[int, int]:
    """(A, h1) for one component hanging at x: A is the x=0 half without x's
    own lambda factor, h1 the x=1 half."""
    if kind == "parallel":
        if param < 0:
            raise InputError("parallel-edge count must be >= 0")
        return 1, pow(gv, param, p)
    if kind == "clique":
        s = param
        if s < 1:
            raise InputError("clique size must be >= 1")
        a = h1 = 0
        for i in range(s):
            ones = s - 1 - i
            base = math.comb(s - 1, i) * pow(lv, i, p) % p
            a = (a + base * pow(gv, math.comb(ones, 2), p)) % p
            h1 = (h1 + base * pow(gv, math.comb(ones, 2) + ones, p)) % p
        return a, h1
    if kind == "p2":
        a = (lv * lv + 2 * lv + gv) % p
        h1 = (lv * lv + lv * gv + lv + gv * gv) % p
        return a, h1
    if kind == "p3":
        a = (lv**3 + 3 * lv**2 + 2 * lv * gv + lv + gv**2) % p
        h1 = (
            lv**3
            + 2 * lv**2
            + lv**2 * gv
            + 2 * lv * gv
            + lv * gv**2
            + gv**3
        ) % p
        return a, h1
    raise InputError(f"unknown component kind {kind!r}")


def _component_graph(kind: str, param: int) -> tuple[Multigraph, dict[int, int]]:
    """Explicit graph of one component with x = 0; pins cover the partner
    vertex for the parallel kind."""
    if kind == "parallel":
        return Multigraph.make(2, [(0, 1)] * param), {1: 1}
    if kind == "clique":
        s = param
        pairs = [(a, b) for a in range(s) for b in range(a + 1, s)]
        return Multigraph.make(s, pairs), {}
    if kind == "p2":
        return Multigraph.make(3, [(0, 1), (1, 2)]), {}
    if kind == "p3":
        return Multigraph.make(4, [(0, 1), (1, 2), (2, 3)]), {}
    raise InputError(f"unknown component kind {kind!r}")


def component_halves(
    kind: str, size_param: int, sp: SpinParams
) -> tuple[ZpScalar, ZpScalar]:
    """(h0, h1) of a single component with distinguished vertex x: the
    partition function with x pinned to 0 resp. 1.

    Closed forms throughout; re-checked against the explicit-graph evaluator
    except for cliques beyond 12 vertices (where the formulas are exercised
    by the smaller sizes).
    """
    p = sp.p
    a, h1 = _halves_raw(kind, size_param, sp.gamma.value, sp.lam.value, p)
    h0 = ZpScalar.of(sp.lam.value * a, p)
    h1s = ZpScalar.of(h1, p)
    if kind != "clique" or size_param <= CLIQUE_CHECK_BOUND:
        graph, pins = _component_graph(kind, size_param)
        for spin_x, expected in ((0, h0), (1, h1s)):
            got = z_spin(
                PartiallyLabelledGraph.make(graph, {**pins, 0: spin_x}), sp
            )
            if got != expected:
                raise RuntimeError(
                    "internal verification failure: closed-form half "
                    f"{kind}/{size_param} (x={spin_x}) disagrees with the "
                    "explicit evaluator"
                )
    return h0, h1s


@dataclass(frozen=True)
class GadgetVector:
    """One member of the gadget family: k0 parallel edges to the pinned
    partner, clique_counts[j] copies of K_(j+2), and path copies of lengths
    two and three, all sharing the vertex x."""

    k0: int
    clique_counts: tuple[int, ...]
    k_p2: int
    k_p3: int

    def __post_init__(self) -> None:
        if min((self.k0, self.k_p2, self.k_p3, *self.clique_counts), default=0) < 0:
            raise InputError("gadget counts must be non-negative")

    @property
    def m(self) -> int:
        return len(self.clique_counts) + 2

    def entries(self) -> tuple[int, ...]:
        return (self.k0, *self.clique_counts, self.k_p2, self.k_p3)

    def components(self) -> list[tuple[str, int, int]]:
        """(kind, size_param, count) for the non-parallel slots."""
        out = [
            ("clique", j + 2, c) for j, c in enumerate(self.clique_counts)
        ]
        out.append(("p2", 2, self.k_p2))
        out.append(("p3", 3, self.k_p3))
        return out

    def total_vertices(self) -> int:
        cliques = sum(
            c * (s - 1) for kind, s, c in self.components() if kind == "clique"
        )
        return 2 + cliques + 2 * self.k_p2 + 3 * self.k_p3

    def to_json(self) -> dict:
        return {
            "k0": self.k0,
            "clique_counts": list(self.clique_counts),
            "k_p2": self.k_p2,
            "k_p3": self.k_p3,
            "m": self.m,
            "entries": list(self.entries()),
            "total_vertices": self.total_vertices(),
        }


def build_gadget_graph(kv: GadgetVector) -> tuple[PartiallyLabelledGraph, int, int]:
    """Assemble the explicit multigraph: returns (pinned graph, x, y) with
    x = 0 free and y = 1 pinned to spin 1."""
    pairs: list[tuple[int, int]] = [(0, 1)] * kv.k0
    cursor = 2
    for kind, s, count in kv.components():
        for _ in range(count):
            if kind == "clique":
                fresh = list(range(cursor, cursor + s - 1))
                for a in fresh:
                    pairs.append((0, a))
                for i, a in enumerate(fresh):
                    for b in fresh[i + 1 :]:
                        pairs.append((a, b))
                cursor += s - 1
            elif kind == "p2":
                pairs += [(0, cursor), (cursor, cursor + 1)]
                cursor += 2
            else:  # p3
                pairs += [
                    (0, cursor),
                    (cursor, cursor + 1),
                    (cursor + 1, cursor + 2),
                ]
                cursor += 3
    graph = Multigraph.make(cursor, pairs)
    return PartiallyLabelledGraph.make(graph, {1: 1}), 0, 1


def assemble_gadget(
    kv: GadgetVector, sp: SpinParams, *, validate: bool = False
) -> tuple[ZpScalar, ZpScalar]:
    """(Z0, Z1): the gadget's partition function with x pinned to 0 resp. 1.

    Computed from component halves — Z0 carries a single lambda for x and
    multiplies the 0-halves with x's factor divided out; Z1 multiplies the
    1-halves times gamma^k0 for the parallel bundle.  With ``validate`` the
    explicitly assembled multigraph is evaluated as a cross-check.
    """
    p = sp.p
    gv, lv = sp.gamma.value, sp.lam.value
    for entry in kv.entries():
        if entry > p - 1:
            raise InputError(f"entry {entry} outside 0..{p - 1}")
    z0 = lv % p
    z1 = pow(gv, kv.k0, p)
    for kind, s, count in kv.components():
        if count == 0:
            continue
        a, h1 = _halves_raw(kind, s, gv, lv, p)
        z0 = z0 * pow(a, count, p) % p
        z1 = z1 * pow(h1, count, p) % p
    result = ZpScalar.of(z0, p), ZpScalar.of(z1, p)
    if validate:
        pinned, x, _ = build_gadget_graph(kv)
        base, pins = pinned.base, pinned.pin_map
        for spin_x, expected in zip((0, 1), result):
            got = z_spin(
                PartiallyLabelledGraph.make(base, {**pins, x: spin_x}), sp
            )
            if got != expected:
                raise RuntimeError(
                    "internal verification failure: assembled halves "
                    "disagree with explicit evaluation"
                )
    return result


# ---------------------------------------------------------------------------
# the search


def _search_m_cap(p: int, max_m: int | None) -> int:
    if max_m is not None:
        cap = max_m
    else:
        raw = os.environ.get("SPIN_SEARCH_BOUND")
        if raw is None:
            cap = p + 1
        else:
            try:
                cap = int(raw)
            except ValueError:
                raise InputError(
                    f"SPIN_SEARCH_BOUND must be an integer, got {raw!r}"
                )
    if cap < 2:
        raise InputError("family size cap must be at least 2")
    return cap


def _gamma_dlog_table(gv: int, p: int) -> dict[int, int]:
    """value -> least exponent e with gamma^e = value; {1: 0} for gamma = 0."""
    if gv == 0:
        return {1: 0}
    table: dict[int, int] = {}
    x, e = 1, 0
    while x not in table:
        table[x] = e
        x = x * gv % p
        e += 1
    return table


def _inner_component_types(m: int) -> list[tuple[str, int]]:
    """Vector slots k_1..k_m in order: cliques K_2..K_(m-1), then the two
    path kinds."""
    return [("clique", s) for s in range(2, m)] + [("p2", 2), ("p3", 3)]


@dataclass(frozen=True)
class SearchOutcome:
    params: SpinParams
    found: GadgetVector | None
    z0: ZpScalar | None
    z1: ZpScalar | None
    validated: bool
    max_m: int
    entry_cap: int
    method: str
    status: str  # "found" | "none-within-bounds"

    def to_json(self) -> dict:
        return {
            "p": self.params.p,
            "gamma": self.params.gamma.value,
            "lambda": self.params.lam.value,
            "result": self.status,
            "found": self.found.to_json() if self.found else None,
            "z0": self.z0.value if self.z0 else None,
            "z1": self.z1.value if self.z1 else None,
            "validated": self.validated,
            "max_m": self.max_m,
            "entry_cap": self.entry_cap,
            "method": self.method,
        }


def _close_subgroup(
    gens: Sequence[int], rep: Callable[[int], int], p: int
) -> frozenset[int]:
    elems = {rep(1)}
    frontier = [rep(1)]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = rep(x * g % p)
            if y not in elems:
                elems.add(y)
                frontier.append(y)
    return frozenset(elems)


def _greedy_prefix(
    raw: list[tuple[int, int]],
    lv: int,
    dlog: dict[int, int],
    p: int,
    cap: int,
) -> tuple[list[int], int] | None:
    """First-hit inner counts (k_1..k_m) and k0 under the canonical order,
    computed without enumeration.

    Valid only with the full per-entry cap p-1, where the exponent range of
    each usable component covers a whole cyclic subgroup; candidate targets
    then live in the subgroup generated by the inner ratios, and first-hit
    means: lexicographically least (k_m..k_1) admitting a completion, with
    the least discrete log of the residual as k0.
    """
    m = len(raw)
    coset_factors = list(dlog.keys())  # the powers of gamma (or just 1)

    def rep(x: int) -> int:
        return min(x * g % p for g in coset_factors)

    usable = [a != 0 and h != 0 for a, h in raw]
    ratio = [
        h * pow(a, p - 2, p) % p if ok else None
        for (a, h), ok in zip(raw, usable)
    ]
    # cumulative subgroups of the quotient achievable by slots 1..j
    subgroups: list[frozenset[int]] = [frozenset({rep(1)})]
    for j in range(m):
        if usable[j]:
            subgroups.append(
                _close_subgroup([*subgroups[-1], ratio[j]], rep, p)
            )
        else:
            subgroups.append(subgroups[-1])

    need = rep(lv)
    if need not in subgroups[m]:
        return None
    counts = [0] * m
    residual = lv  # exact element whose coset is `need`
    for j in range(m - 1, -1, -1):
        if not usable[j]:
            continue
        r_inv = pow(ratio[j], p - 2, p)
        cur = residual
        for k in range(cap + 1):
            if rep(cur) in subgroups[j]:
                counts[j] = k
                residual = cur
                break
            cur = cur * r_inv % p
        else:  # pragma: no cover - guarded by the subgroup membership test
            return None
    k0 = dlog.get(residual)
    if k0 is None or k0 > cap:  # pragma: no cover - same guard
        return None
    return counts, k0


def _literal_prefix(
    raw: list[tuple[int, int]],
    lv: int,
    dlog: dict[int, int],
    p: int,
    cap: int,
) -> tuple[list[int], int] | None:
    """Reference enumeration of inner prefixes in the canonical order."""
    import itertools

    m = len(raw)
    if (cap + 1) ** m > LITERAL_PREFIX_CAP:
        raise BudgetExceededError(
            "literal prefix enumeration too large; use the default entry cap"
        )
    for outer in itertools.product(range(cap + 1), repeat=m):
        counts = list(reversed(outer))  # outer[0] is k_m, counts[0] is k_1
        z0r = z1r = 1
        for (a, h1), k in zip(raw, counts):
            if k:
                z0r = z0r * pow(a, k, p) % p
                z1r = z1r * pow(h1, k, p) % p
        if z0r == 0 or z1r == 0:
            continue
        target = lv * z0r % p * pow(z1r, p - 2, p) % p
        k0 = dlog.get(target)
        if k0 is not None and k0 <= cap:
            return counts, k0
    return None


def search_gadget(
    sp: SpinParams,
    *,
    max_m: int | None = None,
    entry_cap: int | None = None,
) -> SearchOutcome:
    """Scan the gadget family for the first vector with Z0 ≡ Z1 ≢ 0.

    Enumeration order (canonical, documented): family size m ascending from
    2; within one m, vectors (k_0..k_m) are compared from the last
    coordinate down to k_0 — so k_m varies slowest and the parallel count
    k_0 fastest.  With the default per-entry cap p-1 the first hit is
    located through discrete logs and subgroup feasibility instead of
    literal enumeration; the two strategies provably agree and are also
    cross-tested.  A ``none-within-bounds`` outcome is a statement about the
    searched family only.
    """
    p = sp.p
    if sp.lam.is_zero():
        raise InputError("search requires lambda nonzero")
    if sp.gamma_sq_is_one:
        raise InputError("search requires gamma^2 not congruent to 1")
    cap_m = _search_m_cap(p, max_m)
    cap = entry_cap if entry_cap is not None else p - 1
    if cap < 0:
        raise InputError("entry cap must be non-negative")
    full_cap = cap == p - 1
    method = "subgroup-dlog" if full_cap else "literal"

    gv, lv = sp.gamma.value, sp.lam.value
    dlog = _gamma_dlog_table(gv, p)

    for m in range(2, cap_m + 1):
        raw = [
            _halves_raw(kind, s, gv, lv, p)
            for kind, s in _inner_component_types(m)
        ]
        hit = (
            _greedy_prefix(raw, lv, dlog, p, cap)
            if full_cap
            else _literal_prefix(raw, lv, dlog, p, cap)
        )
        if hit is None:
            continue
        counts, k0 = hit
        kv = GadgetVector(
            k0=k0,
            clique_counts=tuple(counts[: m - 2]),
            k_p2=counts[m - 2],
            k_p3=counts[m - 1],
        )
        can_validate = kv.total_vertices() <= EXPLICIT_VALIDATION_VERTICES
        z0, z1 = assemble_gadget(kv, sp, validate=can_validate)
        if z0 != z1 or z0.is_zero():
            raise RuntimeError(
                "internal verification failure: search hit does not satisfy "
                "the success condition"
            )
        return SearchOutcome(
            params=sp,
            found=kv,
            z0=z0,
            z1=z1,
            validated=can_validate,
            max_m=cap_m,
            entry_cap=cap,
            method=method,
            status="found",
        )
    return SearchOutcome(
        params=sp,
        found=None,
        z0=None,
        z1=None,
        validated=False,
        max_m=cap_m,
        entry_cap=cap,
        method=method,
        status="none-within-bounds",
    )


def _search_literal_reference(
    sp: SpinParams, *, max_m: int, entry_cap: int
) -> GadgetVector | None:
    """Plain triple-loop enumeration in the canonical order (test oracle)."""
    import itertools

    p = sp.p
    gv, lv = sp.gamma.value, sp.lam.value
    for m in range(2, max_m + 1):
        raw = [
            _halves_raw(kind, s, gv, lv, p)
            for kind, s in _inner_component_types(m)
        ]
        for outer in itertools.product(range(entry_cap + 1), repeat=m):
            counts = list(reversed(outer))
            z0r = lv % p
            z1r = 1
            for (a, h1), k in zip(raw, counts):
                z0r = z0r * pow(a, k, p) % p
                z1r = z1r * pow(h1, k, p) % p
            for k0 in range(entry_cap + 1):
                z1 = z1r * pow(gv, k0, p) % p
                if z0r == z1 and z0r != 0:
                    return GadgetVector(
                        k0=k0,
                        clique_counts=tuple(counts[: m - 2]),
                        k_p2=counts[m - 2],
                        k_p3=counts[m - 1],
                    )
    return None


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class SpinWitness:
    """A hardness witness: a gadget whose two halves agree and do not vanish."""

    kind: str  # "clique" | "parallel" | "vector"
    size: int | None  # clique size or parallel-edge count
    vector: GadgetVector | None
    z0: ZpScalar
    z1: ZpScalar
    validated: bool

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "size": self.size,
            "vector": self.vector.to_json() if self.vector else None,
            "z0": self.z0.value,
            "z1": self.z1.value,
            "validated": self.validated,
        }


@dataclass(frozen=True)
class SpinClassification:
    params: SpinParams
    verdict: str  # "Easy" | "Hard" | "Unknown"
    reason: str
    witness: SpinWitness | None

    def to_json(self) -> dict:
        return {
            "p": self.params.p,
            "gamma": self.params.gamma.value,
            "lambda": self.params.lam.value,
            "verdict": self.verdict,
            "reason": self.reason,
            "witness": self.witness.to_json() if self.witness else None,
        }


def _clique_witness(sp: SpinParams) -> SpinWitness:
    p = sp.p
    s = ((p + 1 - sp.lam.value) % p) + 1
    h0, h1 = component_halves("clique", s, sp)
    if h0 != h1 or h0.is_zero():
        raise RuntimeError(
            "internal verification failure: clique witness condition broken"
        )
    return SpinWitness(
        kind="clique",
        size=s,
        vector=None,
        z0=h0,
        z1=h1,
        validated=s <= CLIQUE_CHECK_BOUND,
    )


def _parallel_witness(sp: SpinParams, k0: int) -> SpinWitness:
    kv = GadgetVector(k0=k0, clique_counts=(), k_p2=0, k_p3=0)
    z0, z1 = assemble_gadget(kv, sp, validate=True)
    if z0 != z1 or z0.is_zero():
        raise RuntimeError(
            "internal verification failure: parallel witness condition broken"
        )
    return SpinWitness(
        kind="parallel", size=k0, vector=kv, z0=z0, z1=z1, validated=True
    )


def classify_spin(
    sp: SpinParams,
    *,
    max_m: int | None = None,
    entry_cap: int | None = None,
) -> SpinClassification:
    """Decide Easy / Hard / Unknown for one parameter pair.

    Easy: lambda = 0, or gamma = 1, or gamma = -1 with lambda among
    {0, 1, -1} and the square roots of -1 when they exist.  Hard verdicts
    carry a verified witness: a clique for gamma = 0, a parallel bundle
    when lambda is a power of gamma, or a search hit.  Everything else is
    Unknown — either genuinely unclassified (gamma = -1) or
    searched-without-success within the given bounds.
    """
    p = sp.p
    gamma, lam = sp.gamma, sp.lam

    if lam.is_zero():
        return SpinClassification(
            sp,
            "Easy",
            "lambda = 0: only the all-ones assignment survives, giving a "
            "closed form",
            None,
        )
    if gamma.is_one():
        return SpinClassification(
            sp,
            "Easy",
            "gamma = 1: edges never contribute, the sum factorizes per vertex",
            None,
        )
    if gamma.value == p - 1:
        allowed = {0, 1, p - 1}
        ip = sp.i_p()
        if ip is not None:
            allowed |= {ip.value, (-ip).value}
        if lam.value in allowed:
            return SpinClassification(
                sp,
                "Easy",
                "gamma = -1 with lambda in {0, +-1, +-i_p}: closed-form "
                "evaluation applies",
                None,
            )
        return SpinClassification(
            sp,
            "Unknown",
            "gamma = -1 with lambda outside {0, +-1, +-i_p}: not classified",
            None,
        )
    if gamma.is_zero():
        return SpinClassification(
            sp,
            "Hard",
            "gamma = 0 with lambda nonzero: clique witness",
            _clique_witness(sp),
        )

    # gamma not in {0, 1, -1} from here on.
    dlog = _gamma_dlog_table(gamma.value, p)
    order = len(dlog)
    if lam.value in dlog:
        k0 = dlog[lam.value] or order  # smallest positive exponent
        return SpinClassification(
            sp,
            "Hard",
            "lambda is a power of gamma: parallel-edge witness",
            _parallel_witness(sp, k0),
        )

    outcome = search_gadget(sp, max_m=max_m, entry_cap=entry_cap)
    if outcome.found is not None:
        assert outcome.z0 is not None and outcome.z1 is not None
        return SpinClassification(
            sp,
            "Hard",
            "gadget search found a witness",
            SpinWitness(
                kind="vector",
                size=None,
                vector=outcome.found,
                z0=outcome.z0,
                z1=outcome.z1,
                validated=outcome.validated,
            ),
        )
    return SpinClassification(
        sp,
        "Unknown",
        f"no gadget within bounds (m <= {outcome.max_m}, entries <= "
        f"{outcome.entry_cap}); existence beyond them is open",
        None,
    )


def search_sweep(
    p: int, *, max_m: int | None = None, entry_cap: int | None = None
) -> Iterator[SearchOutcome]:
    """Run the gadget search over every qualifying (gamma, lambda) pair,
    in ascending (gamma, lambda) order."""
    _assert_prime(p)
    for gv in range(p):
        sp0 = SpinParams.of(gv, 1, p)
        if sp0.gamma_sq_is_one:
            continue
        for lv in range(1, p):
            yield search_gadget(
                SpinParams.of(gv, lv, p), max_m=max_m, entry_cap=entry_cap
            )


def classify_sweep(
    p: int, *, max_m: int | None = None, entry_cap: int | None = None
) -> Iterator[SpinClassification]:
    """Classify the whole (gamma, lambda) grid in ascending order."""
    _assert_prime(p)
    for gv in range(p):
        for lv in range(p):
            yield classify_spin(
                SpinParams.of(gv, lv, p), max_m=max_m, entry_cap=entry_cap
            )
