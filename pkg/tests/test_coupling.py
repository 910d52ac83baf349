"""Stochastic order, Strassen couplings, and the realizability oracle."""

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import SHOWCASE_ATOMS
from monosync.coupling import (
    Coupling,
    InfeasibilityCertificate,
    check_coupling,
    dominance_violation,
    is_stoch_monotone,
    measure_system,
    monotone_tuples,
    pair_system,
    realize,
    stochastically_leq,
    strassen_coupling,
    verify_certificate,
)
from monosync.errors import DomainMismatch, SizeLimit
from monosync.formats import parse_system
from monosync.generate import (
    random_bounded_poset,
    random_class_w,
    random_measure,
    random_monotone_system,
    random_poset,
)
from monosync.measure import rational_measure
from monosync.poset import chain, validate_poset

seeds = st.integers(0, 2**32 - 1)


def brute_monotone_tuples(index_poset, state_poset):
    A, S = index_poset.elements, state_poset.elements
    out = set()
    for tup in itertools.product(S, repeat=len(A)):
        if all(state_poset.leq(tup[i], tup[j])
               for i in range(len(A)) for j in range(len(A))
               if index_poset.leq(A[i], A[j])):
            out.add(tup)
    return out


def test_measure_system_validation(w6, p1, p2, pair_poset):
    with pytest.raises(DomainMismatch):
        measure_system(pair_poset, w6, {"1": p1})
    other = rational_measure(("q",), {"q": 1})
    with pytest.raises(DomainMismatch):
        measure_system(pair_poset, w6, {"1": p1, "2": other})


def test_showcase_dominance(p1, p2, w6):
    assert stochastically_leq(p1, p2, w6)
    bad = dominance_violation(p2, p1, w6)
    assert bad is not None and p2.of_set(bad) > p1.of_set(bad)


def test_strassen_showcase(p1, p2, w6):
    got = strassen_coupling(p1, p2, w6)
    assert got is not None
    check_coupling(pair_system(p1, p2, w6), got)
    assert strassen_coupling(p2, p1, w6) is None


def test_strassen_diagonal(p1, w6):
    got = strassen_coupling(p1, p1, w6)
    assert got is not None
    assert got.atoms == {(s, s): p1.of(s) for s in p1.support()}


@given(seeds)
@settings(max_examples=120)
def test_strassen_iff_upset_dominance(seed):
    rng = random.Random(seed)
    poset = random_poset(rng, rng.randrange(1, 8))
    p = random_measure(rng, poset, rng.randrange(1, 13))
    q = random_measure(rng, poset, rng.randrange(1, 13))
    got = strassen_coupling(p, q, poset)
    if dominance_violation(p, q, poset) is None:
        assert got is not None
        check_coupling(pair_system(p, q, poset), got)
    else:
        assert got is None


def test_is_stoch_monotone_witness(chain2):
    top = rational_measure(chain2.elements, {"hi": 1})
    bot = rational_measure(chain2.elements, {"lo": 1})
    verdict = is_stoch_monotone(measure_system(chain2, chain2,
                                               {"lo": top, "hi": bot}))
    assert not verdict
    alpha, beta, upset = verdict.witness
    assert (alpha, beta) == ("lo", "hi") and upset == frozenset({"hi"})


def test_monotone_tuples_showcase(pair_poset, w6):
    tuples = monotone_tuples(pair_poset, w6)
    assert len(tuples) == 11
    assert set(tuples) == brute_monotone_tuples(pair_poset, w6)


@given(seeds)
def test_monotone_tuples_match_bruteforce(seed):
    rng = random.Random(seed)
    A = random_poset(rng, rng.randrange(1, 4))
    S = random_poset(rng, rng.randrange(1, 5))
    got = monotone_tuples(A, S)
    assert len(got) == len(set(got))
    assert set(got) == brute_monotone_tuples(A, S)


def test_monotone_tuples_cap(pair_poset, w6):
    with pytest.raises(SizeLimit):
        monotone_tuples(pair_poset, w6, cap=3)


def test_realize_showcase_exact(w6_system):
    got = realize(w6_system)
    assert isinstance(got, Coupling)
    assert got.atoms == SHOWCASE_ATOMS
    check_coupling(w6_system, got)


def test_realize_infeasible_diamond(data_dir):
    system = parse_system(data_dir / "diamond_infeasible.system")
    assert is_stoch_monotone(system)
    got = realize(system)
    assert isinstance(got, InfeasibilityCertificate)
    assert got.gap > 0
    assert verify_certificate(system, got)
    # a gutted dual is no certificate
    assert not verify_certificate(
        system, InfeasibilityCertificate({}, Fraction(0)))


@given(seeds)
@settings(max_examples=30)
def test_realize_feasible_on_bounded_index(seed):
    rng = random.Random(seed)
    S = random_class_w(rng, rng.randrange(4, 7))
    A = random_bounded_poset(rng, rng.randrange(0, 3))
    system = random_monotone_system(rng, A, S, rng.randrange(2, 6))
    got = realize(system)
    assert isinstance(got, Coupling)
    check_coupling(system, got)


def test_coupling_marginal_and_total(showcase_coupling, p1, p2):
    assert showcase_coupling.total() == 1
    marg1 = showcase_coupling.marginal("1")
    marg2 = showcase_coupling.marginal("2")
    for s in p1.domain():
        assert marg1.get(s, Fraction(0)) == p1.of(s)
        assert marg2.get(s, Fraction(0)) == p2.of(s)


def test_check_coupling_rejects_bad_marginal(w6_system, showcase_coupling):
    atoms = dict(showcase_coupling.atoms)
    moved = atoms.pop(("x", "x"))
    atoms[("y", "y")] += moved
    with pytest.raises(AssertionError):
        check_coupling(w6_system, Coupling(("1", "2"), atoms))


def test_pair_system_shape(p1, p2, w6):
    system = pair_system(p1, p2, w6)
    assert system.index_poset.elements == ("1", "2")
    assert system.measure_of("1") is p1 and system.measure_of("2") is p2
