import itertools
from fractions import Fraction

import pytest

from addim.core import AdditiveSet, ContractViolation
from addim.lfree import LinearForm, is_lfree, is_prime, lfree_max_density


def brute_density(coeffs, p):
    # largest A with no solution in A^k, straight from the definition
    for size in range(p, -1, -1):
        for A in itertools.combinations(range(p), size):
            if all(sum(c * x for c, x in zip(coeffs, xs)) % p for xs in itertools.product(A, repeat=len(coeffs))):
                return Fraction(size, p), A
    return Fraction(0), ()


def test_linear_form_validation():
    with pytest.raises(ContractViolation):
        LinearForm(())
    with pytest.raises(ContractViolation):
        LinearForm((1, 0))
    L = LinearForm((1, 1, -3))
    assert L.k == 3 and str(L) == "1,1,-3"
    assert L.coefficient_set == AdditiveSet.integers([1, -3])
    assert LinearForm((2, 2)).coefficient_set == AdditiveSet.integers([2])


def test_density_examples():
    m, w = lfree_max_density(LinearForm((1, 1, -3)), 5)
    assert (m, w) == brute_density((1, 1, -3), 5)
    m, w = lfree_max_density(LinearForm((1, 1)), 5)
    assert m == Fraction(2, 5) and w == (1, 2)
    assert is_lfree(LinearForm((1, 1)), w, 5)
    # coefficient sum divisible by p: constant tuples always solve
    assert lfree_max_density(LinearForm((1, -1)), 7)[0] == 0
    assert lfree_max_density(LinearForm((2, 3)), 5)[0] == 0
    assert lfree_max_density(LinearForm((1,)), 5) == (Fraction(4, 5), (1, 2, 3, 4))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_density_matches_brute_force(p):
    coeffs = [c for c in range(-3, 4) if c]
    for k in (1, 2, 3):
        for cs in itertools.product(coeffs, repeat=k):
            assert lfree_max_density(LinearForm(cs), p) == brute_density(cs, p), (cs, p)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_unit_scaling_invariance(p):
    coeffs = [c for c in range(-3, 4) if c and c % p]
    for cs in itertools.product(coeffs, repeat=2):
        L = LinearForm(cs)
        m = lfree_max_density(L, p)[0]
        for u in range(1, p):
            assert lfree_max_density(L.scaled(u), p)[0] == m


def test_guards():
    assert [q for q in range(30) if is_prime(q)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    with pytest.raises(ContractViolation):
        lfree_max_density(LinearForm((1, 1)), 9)
    with pytest.raises(ContractViolation):
        lfree_max_density(LinearForm((1, 1)), 23)
    with pytest.raises(ContractViolation):
        lfree_max_density(LinearForm((1, 1, 1, 1, 1)), 5)
