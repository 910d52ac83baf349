"""Stochastic-order decisions and monotone-coupling construction.

Three layers, all exact:

* pairwise dominance, decided by enumerating up-sets or, independently,
  by a rational max-flow (Strassen's characterization: dominance holds
  iff a coupling concentrated on ordered pairs exists);
* systems of measures over an index poset, with a witness-producing
  monotonicity check;
* the ground-truth oracle ``realize``: a feasibility LP over all
  order-preserving assignments, returning either an exact coupling or a
  Farkas certificate that no monotone realization exists.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errors import DomainMismatch, SizeLimit
from .linprog import FarkasVector, solve_feasibility
from .measure import F0, F1, RationalMeasure, rational_measure
from .poset import DEFAULT_UPSET_CAP, Poset, chain, up_sets

DEFAULT_TUPLE_CAP = 10**6

PAIR_INDICES = ("1", "2")


@dataclass(frozen=True)
class MeasureSystem:
    """Measures on a common state poset, one per index element."""

    index_poset: Poset
    state_poset: Poset
    measures: Mapping[str, RationalMeasure]

    def measure_of(self, alpha: str) -> RationalMeasure:
        return self.measures[alpha]

    def denominators(self) -> tuple[int, ...]:
        out: list[int] = []
        for m in self.measures.values():
            out.extend(m.denominators())
        return tuple(out)


def measure_system(index_poset: Poset, state_poset: Poset,
                   measures: Mapping[str, RationalMeasure]) -> MeasureSystem:
    for alpha in index_poset.elements:
        if alpha not in measures:
            raise DomainMismatch(f"no measure assigned to index {alpha!r}")
        if set(measures[alpha].mass) != set(state_poset.elements):
            raise DomainMismatch(
                f"measure for {alpha!r} not on the state poset's ground set")
    extra = set(measures) - set(index_poset.elements)
    if extra:
        raise DomainMismatch(f"measures for unknown indices {sorted(extra)}")
    return MeasureSystem(index_poset, state_poset,
                         {a: measures[a] for a in index_poset.elements})


@dataclass(frozen=True)
class Coupling:
    """Joint law over order-preserving assignments.

    Keys of ``atoms`` are state tuples aligned with ``index_order``;
    weights are positive rationals summing to one.
    """

    index_order: tuple[str, ...]
    atoms: Mapping[tuple[str, ...], Fraction]

    def marginal(self, alpha: str) -> dict[str, Fraction]:
        pos = self.index_order.index(alpha)
        out: dict[str, Fraction] = {}
        for tup, w in self.atoms.items():
            s = tup[pos]
            out[s] = out.get(s, F0) + w
        return out

    def total(self) -> Fraction:
        return sum(self.atoms.values(), F0)

    def denominators(self) -> tuple[int, ...]:
        return tuple(w.denominator for w in self.atoms.values())


@dataclass(frozen=True)
class Verdict:
    """Boolean result carrying a witness for the failing case."""

    ok: bool
    witness: object = None

    def __bool__(self) -> bool:
        return self.ok


def dominance_violation(p1: RationalMeasure, p2: RationalMeasure,
                        poset: Poset, cap: int = DEFAULT_UPSET_CAP,
                        ) -> frozenset[str] | None:
    """An up-set with ``p1(U) > p2(U)``, or None when ``p1`` is dominated."""
    for u in up_sets(poset, cap):
        if p1.of_set(u) > p2.of_set(u):
            return u
    return None


def stochastically_leq(p1: RationalMeasure, p2: RationalMeasure,
                       poset: Poset, cap: int = DEFAULT_UPSET_CAP) -> bool:
    """True iff ``p1(U) <= p2(U)`` for every up-set ``U``."""
    return dominance_violation(p1, p2, poset, cap) is None


def strassen_coupling(p1: RationalMeasure, p2: RationalMeasure,
                      poset: Poset) -> Coupling | None:
    """A coupling supported on ``{(a, b): a <= b}``, or None if not dominated.

    Bipartite max-flow with rational capacities: source -> a at mass
    ``p1(a)``, b -> sink at mass ``p2(b)``, and an uncapacitated arc
    ``a -> b`` for every ordered pair.  The flow value reaches one
    exactly when dominance holds; breadth-first augmentation keeps the
    arithmetic exact and terminates regardless of denominators.
    """
    els = poset.elements
    n = len(els)
    source, sink = 2 * n, 2 * n + 1
    cap: dict[tuple[int, int], Fraction] = {}
    for i, a in enumerate(els):
        if p1.of(a) > 0:
            cap[(source, i)] = p1.of(a)
    for j, b in enumerate(els):
        if p2.of(b) > 0:
            cap[(n + j, sink)] = p2.of(b)
    for i, a in enumerate(els):
        for j, b in enumerate(els):
            if poset.leq(a, b):
                cap[(i, n + j)] = F1  # never binding: total supply is 1
    adj: dict[int, list[int]] = {}
    for (u, v) in cap:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    flow: dict[tuple[int, int], Fraction] = {e: F0 for e in cap}

    def residual(u: int, v: int) -> Fraction:
        if (u, v) in cap:
            return cap[(u, v)] - flow[(u, v)]
        return flow.get((v, u), F0)

    value = F0
    while True:
        prev: dict[int, int] = {source: source}
        queue = deque([source])
        while queue and sink not in prev:
            u = queue.popleft()
            for v in adj.get(u, ()):
                if v not in prev and residual(u, v) > 0:
                    prev[v] = u
                    queue.append(v)
        if sink not in prev:
            break
        path = [sink]
        while path[-1] != source:
            path.append(prev[path[-1]])
        path.reverse()
        bottleneck = min(
            residual(path[k], path[k + 1]) for k in range(len(path) - 1))
        for k in range(len(path) - 1):
            u, v = path[k], path[k + 1]
            if (u, v) in cap:
                flow[(u, v)] += bottleneck
            else:
                flow[(v, u)] -= bottleneck
        value += bottleneck

    if value != 1:
        return None
    atoms = {
        (els[i], els[j - n]): f
        for (i, j), f in flow.items()
        if i < n and n <= j < 2 * n and f > 0
    }
    return Coupling(PAIR_INDICES, atoms)


def is_stoch_monotone(system: MeasureSystem,
                      cap: int = DEFAULT_UPSET_CAP) -> Verdict:
    """Check every comparable index pair for stochastic dominance.

    The witness on failure is ``(alpha, beta, up_set)`` with
    ``alpha < beta`` but ``P_alpha(U) > P_beta(U)``.
    """
    upsets = up_sets(system.state_poset, cap)
    for alpha, beta in system.index_poset.strict_pairs():
        pa = system.measure_of(alpha)
        pb = system.measure_of(beta)
        for u in upsets:
            if pa.of_set(u) > pb.of_set(u):
                return Verdict(False, (alpha, beta, u))
    return Verdict(True)


def monotone_tuples(index_poset: Poset, state_poset: Poset,
                    cap: int = DEFAULT_TUPLE_CAP,
                    ) -> tuple[tuple[str, ...], ...]:
    """All order-preserving maps from the index poset to the state poset.

    Tuples align with ``index_poset.elements`` and come back sorted
    lexicographically by state index, so downstream pivoting and file
    output are deterministic.
    """
    idx_order = index_poset.elements
    topo = index_poset.linear_order()
    pos = {a: idx_order.index(a) for a in topo}
    states = state_poset.elements
    found: list[tuple[str, ...]] = []
    assignment: dict[str, str] = {}

    def extend(k: int) -> None:
        if k == len(topo):
            if len(found) >= cap:
                raise SizeLimit(f"more than {cap} monotone tuples")
            found.append(tuple(assignment[a] for a in idx_order))
            return
        alpha = topo[k]
        for s in states:
            ok = True
            for beta in topo[:k]:
                t = assignment[beta]
                if index_poset.leq(beta, alpha) and not state_poset.leq(t, s):
                    ok = False
                    break
                if index_poset.leq(alpha, beta) and not state_poset.leq(s, t):
                    ok = False
                    break
            if ok:
                assignment[alpha] = s
                extend(k + 1)
                del assignment[alpha]

    extend(0)
    rank = {s: i for i, s in enumerate(states)}
    found.sort(key=lambda tup: tuple(rank[s] for s in tup))
    return tuple(found)


@dataclass(frozen=True)
class InfeasibilityCertificate:
    """Farkas witness: ``dual`` contracted with the marginal constraints
    is nonpositive on every monotone tuple yet has a strictly positive
    inner product with the right-hand side."""

    dual: Mapping[tuple[str, str], Fraction]  # (index, state) -> weight
    gap: Fraction


def realize(system: MeasureSystem,
            cap: int = DEFAULT_TUPLE_CAP) -> Coupling | InfeasibilityCertificate:
    """Ground-truth realizability oracle.

    Solves the exact feasibility LP over weights ``q(tuple) >= 0`` with
    one equation per (index, state): the weights of tuples assigning
    ``s`` to ``alpha`` must add up to ``P_alpha(s)``.  Feasible systems
    yield a coupling whose marginals match exactly; infeasible ones
    yield a certificate that :func:`verify_certificate` re-checks.
    """
    tuples = monotone_tuples(system.index_poset, system.state_poset, cap)
    indices = system.index_poset.elements
    states = system.state_poset.elements
    row_of = {
        (a, s): i * len(states) + j
        for i, a in enumerate(indices)
        for j, s in enumerate(states)
    }
    columns = [
        tuple((row_of[(a, tup[i])], F1) for i, a in enumerate(indices))
        for tup in tuples
    ]
    b = [F0] * len(row_of)
    for (a, s), r in row_of.items():
        b[r] = system.measure_of(a).of(s)

    result = solve_feasibility(columns, b)
    if isinstance(result, FarkasVector):
        dual = {
            key: result.y[r]
            for key, r in sorted(row_of.items(),
                                 key=lambda kv: kv[1])
            if result.y[r] != 0
        }
        return InfeasibilityCertificate(dual, result.gap)
    atoms = {tuples[j]: w for j, w in sorted(result.x.items())}
    return Coupling(indices, atoms)


def verify_certificate(system: MeasureSystem,
                       certificate: InfeasibilityCertificate,
                       cap: int = DEFAULT_TUPLE_CAP) -> bool:
    """Exact re-check of a Farkas certificate against the constraint system."""
    dual = certificate.dual
    indices = system.index_poset.elements
    for tup in monotone_tuples(system.index_poset, system.state_poset, cap):
        contracted = sum(
            (dual.get((a, tup[i]), F0) for i, a in enumerate(indices)), F0)
        if contracted > 0:
            return False
    rhs = sum(
        (w * system.measure_of(a).of(s) for (a, s), w in dual.items()), F0)
    return rhs > 0


def check_coupling(system: MeasureSystem, coupling: Coupling) -> None:
    """Assert exact marginals, weight normalization, and tuple monotonicity.

    Raises ``AssertionError`` on any violation; used by tests and by the
    constructors that consume couplings.
    """
    assert coupling.index_order == system.index_poset.elements
    assert coupling.total() == 1
    A, S = system.index_poset, system.state_poset
    for tup, w in coupling.atoms.items():
        assert w > 0
        for i, a in enumerate(A.elements):
            for j, b in enumerate(A.elements):
                if A.leq(a, b):
                    assert S.leq(tup[i], tup[j]), (tup, a, b)
    for alpha in A.elements:
        marg = coupling.marginal(alpha)
        want = system.measure_of(alpha)
        for s in S.elements:
            assert marg.get(s, F0) == want.of(s), (alpha, s)


def pair_system(p1: RationalMeasure, p2: RationalMeasure,
                state_poset: Poset) -> MeasureSystem:
    """Two measures over the canonical two-chain index poset."""
    return measure_system(chain(PAIR_INDICES), state_poset,
                          {PAIR_INDICES[0]: p1, PAIR_INDICES[1]: p2})
