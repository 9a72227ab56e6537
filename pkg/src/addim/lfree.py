"""Maximum density of L-free subsets of Z/p by exhaustive search.

A ⊆ Z/p is L-free when no tuple (x_1, ..., x_k) in A^k, repeated entries
allowed, satisfies c_1 x_1 + ... + c_k x_k ≡ 0 (mod p).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import AdditiveSet, ContractViolation

MAX_PRIME = 19
MAX_ARITY = 4


@dataclass(frozen=True)
class LinearForm:
    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coefficients)
        if not coeffs:
            raise ContractViolation("a linear form needs at least one coefficient")
        if any(c == 0 for c in coeffs):
            raise ContractViolation("coefficients must be nonzero")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def k(self) -> int:
        return len(self.coefficients)

    @property
    def coefficient_set(self) -> AdditiveSet:
        seen = []
        for c in self.coefficients:
            if c not in seen:
                seen.append(c)
        return AdditiveSet.integers(seen)

    def scaled(self, u: int) -> "LinearForm":
        return LinearForm(tuple(u * c for c in self.coefficients))

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.coefficients)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _dilate(mask: int, c: int, p: int) -> int:
    out = 0
    x = 0
    while mask:
        if mask & 1:
            out |= 1 << (c * x % p)
        mask >>= 1
        x += 1
    return out


def _sumset(m1: int, m2: int, p: int) -> int:
    full = (1 << p) - 1
    out = 0
    y = 0
    while m2:
        if m2 & 1:
            out |= ((m1 << y) | (m1 >> (p - y))) & full
        m2 >>= 1
        y += 1
    return out


def solution_values(L: LinearForm, mask: int, p: int) -> int:
    """Bitmask of residues c_1 x_1 + ... + c_k x_k over x in A^k."""
    acc = 1  # {0}
    for c in L.coefficients:
        acc = _sumset(acc, _dilate(mask, c % p, p), p)
    return acc


def is_lfree(L: LinearForm, A, p: int) -> bool:
    mask = 0
    for a in A:
        mask |= 1 << (a % p)
    return not solution_values(L, mask, p) & 1


def lfree_max_density(L: LinearForm, p: int):
    """(m_L(Z/p) as a Fraction, lexicographically least optimal witness)."""
    if not is_prime(p):
        raise ContractViolation(f"{p} is not prime")
    if p > MAX_PRIME:
        raise ContractViolation(f"p is capped at {MAX_PRIME} (got {p})")
    if L.k > MAX_ARITY:
        raise ContractViolation(f"at most {MAX_ARITY} coefficients are supported (got {L.k})")

    best: list = []

    # L-freeness is hereditary, so include-first DFS over residues in
    # increasing order meets optimal sets in lexicographic order.
    def dfs(start: int, mask: int, chosen: list):
        nonlocal best
        if len(chosen) > len(best):
            best = list(chosen)
        for x in range(start, p):
            if len(chosen) + (p - x) <= len(best):
                return
            nxt = mask | (1 << x)
            if solution_values(L, nxt, p) & 1:
                continue
            chosen.append(x)
            dfs(x + 1, nxt, chosen)
            chosen.pop()

    dfs(0, 0, [])
    return Fraction(len(best), p), tuple(best)
