import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from addim.constructions import cube, example_eg1, geneg_family, interval, standard_basis
from addim.core import AdditiveSet, negate_closure
from addim.dissociation import is_dissociated, is_maximal_dissociated
from addim.one_span import is_spanning
from addim.solvers import (
    SearchBudget,
    candidates,
    default_budget,
    full_report,
    lower_bound_log3,
    max_dissociated,
    min_maximal_dissociated,
    min_spanning_subset,
    min_spanning_universe,
)


def sets(max_rank=2, coord=4, max_size=10):
    return st.integers(1, max_rank).flatmap(
        lambda r: st.lists(
            st.tuples(*[st.integers(-coord, coord)] * r), min_size=1, max_size=max_size, unique=True
        ).map(lambda es: AdditiveSet(es, rank=r))
    )


EG1 = example_eg1()


def test_max_dissociated_examples():
    Q2 = cube(2)
    r = max_dissociated(Q2)
    assert r.exact and r.value == 2 and is_dissociated(r.witness)
    assert max_dissociated(EG1).value == 4
    P = AdditiveSet.integers([1, 3, 9, 27])
    r = max_dissociated(P)
    assert r.value == 4 and r.witness == P


def test_min_maximal_dissociated_examples():
    r = min_maximal_dissociated(cube(3))
    assert r.value == 3
    assert is_maximal_dissociated(r.witness, cube(3)).maximal
    assert min_maximal_dissociated(EG1).value == 4
    assert min_maximal_dissociated(interval(13)).value == 3


def test_min_spanning_subset_examples():
    r = min_spanning_subset(EG1)
    assert r.value == 3
    assert r.witness == AdditiveSet([(1, 0), (0, 1), (1, 1)])
    assert r.certificate.verify(EG1)
    r = min_spanning_subset(interval(14))
    assert r.value == 4 and is_spanning(r.witness, interval(14))
    A3 = geneg_family(3, AdditiveSet([(1, 1, 0)]))
    assert min_spanning_subset(A3).value == 4


def test_min_spanning_universe_examples():
    grid = AdditiveSet([(a, b) for a in range(-2, 3) for b in range(-2, 3)])
    r = min_spanning_universe(EG1, grid)
    assert r.value == 3 and r.method == "exact-over-universe"
    assert is_spanning(r.witness, EG1)
    Q3 = cube(3)
    assert min_spanning_universe(Q3, negate_closure(Q3)).value == 3
    one = AdditiveSet.integers([1])
    assert min_spanning_universe(one, one).value == 1


def test_universe_that_cannot_span():
    r = min_spanning_universe(AdditiveSet.integers([5]), AdditiveSet.integers([1, 2]))
    assert r.status == "infeasible" and r.value is None


def test_lower_bound_examples():
    assert lower_bound_log3(interval(13)) == 3
    assert lower_bound_log3(AdditiveSet([], rank=1)) == 0
    assert lower_bound_log3(interval(4)) == 2
    # exact powers of three sit on the boundary
    assert lower_bound_log3(interval(4)) == 2 and lower_bound_log3(interval(5)) == 3


def test_candidates_drop_zero_and_opposites():
    X = AdditiveSet.integers([0, 3, -3, 2, -5])
    assert candidates(X) == [(-5,), (-3,), (2,)]


def test_full_report_examples():
    grid = AdditiveSet([(a, b) for a in range(-2, 3) for b in range(-2, 3)])
    rep = full_report(EG1, grid)
    assert rep.values() == {"d_s_minus": 3, "d_s": 3, "d_d_minus": 4, "d_d": 4}
    rep = full_report(interval(13))
    assert rep.d_s.value == 3 and rep.d_d_minus.value == 3 and rep.d_s_minus is None
    P = AdditiveSet.integers([1, 3, 9])
    rep = full_report(P, P)
    assert rep.d_s_minus.value <= 3
    assert (rep.d_s.value, rep.d_d_minus.value, rep.d_d.value) == (3, 3, 3)


def test_empty_set_report():
    rep = full_report(AdditiveSet([], rank=2), AdditiveSet([], rank=2))
    assert rep.values() == {"d_s_minus": 0, "d_s": 0, "d_d_minus": 0, "d_d": 0}


def test_budget_exhaustion_gives_bounds():
    r = max_dissociated(interval(20), SearchBudget(max_nodes=5))
    assert r.status == "bounds" and not r.exact
    assert r.lower <= 5 <= r.upper  # d_d([20]) is known from the exact run below
    exact = max_dissociated(interval(20))
    assert r.lower <= exact.value <= r.upper
    r = min_spanning_subset(interval(30), SearchBudget(max_nodes=2))
    assert r.status == "bounds" and r.lower <= 4 <= r.upper


def test_env_budget(monkeypatch):
    monkeypatch.setenv("ADDIM_BUDGET_NODES", "123")
    assert default_budget().max_nodes == 123


def test_witnesses_are_lex_least():
    # every other optimum of eg1 for d_s is lexicographically larger
    r = min_spanning_subset(EG1)
    for combo in itertools.combinations(sorted(EG1.elements), 3):
        if is_spanning(AdditiveSet(combo), EG1):
            assert tuple(sorted(r.witness.elements)) <= combo


@given(sets())
@settings(max_examples=120, deadline=None)
def test_solvers_match_brute_force(A):
    els, r = A.elements, A.rank
    assert max_dissociated(A).value == oracles.d_d(els, r)
    assert min_maximal_dissociated(A).value == oracles.d_d_minus(els, r)
    assert min_spanning_subset(A).value == oracles.d_s(els, r)


@given(sets(max_size=5, coord=2))
@settings(max_examples=60, deadline=None)
def test_universe_solver_matches_brute_force(A):
    U = negate_closure(A)
    assert min_spanning_universe(A, U).value == oracles.d_s_minus(A.elements, U.elements, A.rank)


@given(sets(max_size=8))
@settings(max_examples=100, deadline=None)
def test_witnesses_reverify(A):
    dd = max_dissociated(A)
    assert len(dd.witness) == dd.value and is_dissociated(dd.witness) and dd.witness.is_subset(A)
    ddm = min_maximal_dissociated(A)
    assert len(ddm.witness) == ddm.value and is_maximal_dissociated(ddm.witness, A).maximal
    ds = min_spanning_subset(A)
    assert len(ds.witness) == ds.value and is_spanning(ds.witness, A)
    assert ds.certificate.verify(A)
    assert lower_bound_log3(A) <= ds.value <= ddm.value <= dd.value


@given(sets(max_size=8), st.data())
@settings(max_examples=80, deadline=None)
def test_d_d_is_monotone(A, data):
    picks = data.draw(st.lists(st.sampled_from(A.elements), max_size=len(A), unique=True))
    B = AdditiveSet(picks, rank=A.rank)
    assert max_dissociated(B).value <= max_dissociated(A).value


def test_standard_basis_is_a_d_d_minus_witness():
    for n in range(1, 5):
        assert min_maximal_dissociated(cube(n)).value == n
        assert is_maximal_dissociated(standard_basis(n), cube(n)).maximal


def test_report_json_is_deterministic():
    a = full_report(EG1).to_json()
    b = full_report(example_eg1()).to_json()
    assert a == b
