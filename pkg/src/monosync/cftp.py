"""Perfect sampling from a monotone Markov kernel on a poset.

The kernel's rows, read as a measure system indexed by the state poset
itself, get a grand coupling: one update table driven by a single
uniform cell per step, applied simultaneously from every state without
breaking the order.  Coupling from the past then walks epochs of doubled
length into history, reusing the randomness already drawn, until every
start state has funneled into one value; that value has exactly the
stationary law, which a rational linear solve cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Mapping

from scipy.stats import chi2

from .coupling import (
    DEFAULT_TUPLE_CAP,
    InfeasibilityCertificate,
    MeasureSystem,
    Verdict,
    is_stoch_monotone,
    measure_system,
    realize,
)
from .errors import BudgetExceeded, GridMismatch, NotErgodic, NotStochMonotone
from .measure import F0, F1, RationalMeasure, rational_measure
from .poset import Poset, PosetClass, classify, default_root, root_tree
from .rng import CellSampler
from .synchronize import cell_states, common_grid, synchronize_from_coupling

DEFAULT_MAX_EPOCH = 2**30


@dataclass(frozen=True)
class Kernel:
    """Markov transition matrix: one probability row per state."""

    state_poset: Poset
    rows: Mapping[str, RationalMeasure]

    def row(self, x: str) -> RationalMeasure:
        return self.rows[x]

    def to_system(self) -> MeasureSystem:
        """The rows as a measure system indexed by the state poset itself."""
        return measure_system(self.state_poset, self.state_poset, self.rows)

    def denominators(self) -> tuple[int, ...]:
        return self.to_system().denominators()


def kernel(state_poset: Poset, rows: Mapping[str, RationalMeasure]) -> Kernel:
    kern = Kernel(state_poset, dict(rows))
    kern.to_system()  # validates row domains against the poset
    return kern


@dataclass(frozen=True)
class GrandCoupling:
    """Simultaneous update table: state x, uniform cell i -> next state.

    Row x lists the next state per cell; cell counts reproduce the kernel
    row at x exactly, and rows respect the order cell by cell.
    """

    L: int
    state_poset: Poset
    update: Mapping[str, tuple[str, ...]]

    def __post_init__(self):
        if set(self.update) != set(self.state_poset.elements):
            raise GridMismatch("update rows do not cover the state poset")
        for x, row in self.update.items():
            if len(row) != self.L:
                raise GridMismatch(
                    f"row at {x!r} has {len(row)} cells, expected {self.L}")

    def step(self, x: str, cell: int) -> str:
        return self.update[x][cell]


def check_grand_coupling(kern: Kernel, gc: GrandCoupling) -> Verdict:
    """Independent re-check of both table invariants.

    Cell counts against the kernel rows, then pointwise order on every
    cell for every comparable state pair; the witness names the first
    failure.
    """
    for x in kern.state_poset.elements:
        counts: dict[str, int] = {}
        for s in gc.update[x]:
            counts[s] = counts.get(s, 0) + 1
        for s in kern.state_poset.elements:
            if counts.get(s, 0) != kern.rows[x].of(s) * gc.L:
                return Verdict(False, ("counts", x, s))
    for x, y in kern.state_poset.strict_pairs():
        for i in range(gc.L):
            if not kern.state_poset.leq(gc.update[x][i], gc.update[y][i]):
                return Verdict(False, ("order", x, y, i))
    return Verdict(True)


def build_grand_coupling(kern: Kernel,
                         cap: int = DEFAULT_TUPLE_CAP,
                         ) -> GrandCoupling | InfeasibilityCertificate:
    """Construct a monotone update table for a stochastically monotone kernel.

    Route by state-poset shape: path cover graphs take the raw inverse
    transforms; tree cover graphs with extremal branching go through the
    realization oracle plus cell synchronization; everything else falls
    back to expanding an oracle coupling directly into cells.  The oracle
    routes surface an exact infeasibility certificate when no monotone
    table exists.
    """
    system = kern.to_system()
    verdict = is_stoch_monotone(system)
    if not verdict:
        alpha, beta, upset = verdict.witness
        raise NotStochMonotone(
            f"row at {alpha!r} is not dominated by row at {beta!r}",
            alpha, beta, upset)

    poset = kern.state_poset
    shape = classify(poset)
    if shape is PosetClass.Z:
        L = common_grid(system)
        _, extension = root_tree(poset, default_root(poset))
        update = {
            x: cell_states(kern.rows[x], extension, L)
            for x in poset.elements
        }
    elif shape is PosetClass.W:
        result = realize(system, cap)
        if isinstance(result, InfeasibilityCertificate):
            return result
        _, extension = root_tree(poset, default_root(poset))
        phis = synchronize_from_coupling(system, result, extension)
        L = next(iter(phis.values())).L
        update = {}
        for x in poset.elements:
            raw = cell_states(kern.rows[x], extension, L)
            update[x] = tuple(raw[phis[x].apply_cell(i)] for i in range(L))
    else:
        result = realize(system, cap)
        if isinstance(result, InfeasibilityCertificate):
            return result
        L = common_grid(system, result)
        rank = {s: i for i, s in enumerate(poset.elements)}
        update_lists = {x: [] for x in poset.elements}
        atoms = sorted(result.atoms.items(),
                       key=lambda kv: tuple(rank[s] for s in kv[0]))
        for tup, w in atoms:
            n = int(w * L)
            for i, x in enumerate(poset.elements):
                update_lists[x].extend([tup[i]] * n)
        update = {x: tuple(cells) for x, cells in update_lists.items()}

    gc = GrandCoupling(L, poset, update)
    checked = check_grand_coupling(kern, gc)
    assert checked, checked.witness
    return gc


def _support(update: Mapping[str, tuple[str, ...]]) -> dict[str, frozenset[str]]:
    return {x: frozenset(row) for x, row in update.items()}


def _reachable(support: Mapping[str, frozenset[str]], start: str,
               forward: bool) -> set[str]:
    seen = {start}
    frontier = [start]
    while frontier:
        u = frontier.pop()
        if forward:
            targets: set[str] | frozenset[str] = support[u]
        else:
            targets = {x for x, nxt in support.items() if u in nxt}
        for v in targets:
            if v not in seen:
                seen.add(v)
                frontier.append(v)
    return seen


def _is_irreducible(support: Mapping[str, frozenset[str]],
                    elements: tuple[str, ...]) -> bool:
    start = elements[0]
    if len(_reachable(support, start, forward=True)) != len(elements):
        return False
    return len(_reachable(support, start, forward=False)) == len(elements)


def _period(support: Mapping[str, frozenset[str]],
            elements: tuple[str, ...]) -> int:
    level = {elements[0]: 0}
    frontier = [elements[0]]
    while frontier:
        nxt: list[str] = []
        for u in frontier:
            for v in support[u]:
                if v not in level:
                    level[v] = level[u] + 1
                    nxt.append(v)
        frontier = nxt
    g = 0
    for u in elements:
        for v in support[u]:
            g = gcd(g, level[u] + 1 - level[v])
    return abs(g)


def is_ergodic(kern: Kernel) -> Verdict:
    """Irreducible and aperiodic, decided on the support digraph."""
    support = {x: frozenset(kern.rows[x].support())
               for x in kern.state_poset.elements}
    if not _is_irreducible(support, kern.state_poset.elements):
        return Verdict(False, "reducible")
    p = _period(support, kern.state_poset.elements)
    if p != 1:
        return Verdict(False, ("periodic", p))
    return Verdict(True)


def _require_ergodic_table(gc: GrandCoupling) -> None:
    support = _support(gc.update)
    elements = gc.state_poset.elements
    if not _is_irreducible(support, elements):
        raise NotErgodic("update table is reducible")
    p = _period(support, elements)
    if p != 1:
        raise NotErgodic(f"update table has period {p}")


def cftp_sample(gc: GrandCoupling, seed: int, stream: int = 0,
                max_epoch: int = DEFAULT_MAX_EPOCH,
                check_ergodic: bool = True) -> str:
    """One draw with exactly the stationary law.

    Doubling epochs reach into the past; the cell at time -t is reused
    bit for bit across epochs (counter-based draws), and the composed map
    from each epoch start extends the stored one instead of being replayed.
    Full-state tracking decides coalescence; the extremal shortcut is
    recomputed on every epoch and must agree, a guarantee the monotone
    update table enforces rather than a hope.
    """
    if check_ergodic:
        _require_ergodic_table(gc)
    sampler = CellSampler(gc.L, seed, stream)
    states = gc.state_poset.elements
    extremals = tuple(dict.fromkeys(
        gc.state_poset.minimal() + gc.state_poset.maximal()))
    comp = {x: x for x in states}  # composed map over times -covered..-1
    covered = 0
    T = 1
    while True:
        seg = {x: x for x in states}
        for t in range(T, covered, -1):
            c = sampler.cell_at(t)
            seg = {x: gc.update[seg[x]][c] for x in states}
        comp = {x: comp[seg[x]] for x in states}
        covered = T
        full = set(comp.values())
        ext = {comp[x] for x in extremals}
        assert (len(full) == 1) == (len(ext) == 1), "trackers disagree"
        if len(full) == 1:
            return next(iter(full))
        if T >= max_epoch:
            raise BudgetExceeded(f"no coalescence by epoch {T}")
        T *= 2


def sample_many(gc: GrandCoupling, seed: int, n: int,
                max_epoch: int = DEFAULT_MAX_EPOCH) -> tuple[str, ...]:
    """n independent perfect draws, one stream per sample index."""
    _require_ergodic_table(gc)
    return tuple(
        cftp_sample(gc, seed, stream=k, max_epoch=max_epoch,
                    check_ergodic=False)
        for k in range(n))


def stationary_exact(kern: Kernel) -> RationalMeasure:
    """The unique stationary row, by rational Gaussian elimination."""
    support = {x: frozenset(kern.rows[x].support())
               for x in kern.state_poset.elements}
    if not _is_irreducible(support, kern.state_poset.elements):
        raise NotErgodic("kernel is reducible")
    els = kern.state_poset.elements
    n = len(els)
    # balance equations for all but one state, then normalization
    rows = [
        [kern.rows[u].of(v) - (F1 if u == v else F0) for u in els]
        for v in els[:-1]
    ]
    rows.append([F1] * n)
    rhs = [F0] * (n - 1) + [F1]

    for col in range(n):
        pivot = next(r for r in range(col, n) if rows[r][col] != 0)
        rows[col], rows[pivot] = rows[pivot], rows[col]
        rhs[col], rhs[pivot] = rhs[pivot], rhs[col]
        inv = 1 / rows[col][col]
        rows[col] = [a * inv for a in rows[col]]
        rhs[col] *= inv
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[col])]
                rhs[r] -= f * rhs[col]
    return rational_measure(els, {x: rhs[i] for i, x in enumerate(els)})


def chi_square_fit(counts: Mapping[str, int],
                   target: RationalMeasure) -> tuple[float, float]:
    """(statistic, p-value) of observed counts against a target law."""
    n = sum(counts.values())
    stat = 0.0
    df = -1
    for s in target.domain():
        p = target.of(s)
        if p == 0:
            continue
        expected = n * float(p)
        stat += (counts.get(s, 0) - expected) ** 2 / expected
        df += 1
    if df <= 0:
        return 0.0, 1.0
    return stat, float(chi2.sf(stat, df))
