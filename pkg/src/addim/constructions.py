"""Explicit additive sets: powers of 3, interval bases, cubes, the A_n family,
dissociated subsets of the cube and Freiman embeddings into Z.

Case splits that depend on fractional parts of base-3 logarithms are done
with integer comparisons only.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    AdditiveSet,
    ContractViolation,
    ResourceError,
    encode_int,
    sign_digits,
    vscale,
)
from .dissociation import SUBSETSUM_CAP, is_dissociated_signcomb, is_dissociated_subsetsum
from .solvers import SearchBudget, max_dissociated

CUBE_CAP = 20
EXACT_CUBE_CAP = 5


def interval(N: int) -> AdditiveSet:
    """The integer interval [N] = {1, ..., N} (empty for N = 0)."""
    if N < 0:
        raise ContractViolation("N must be non-negative")
    return AdditiveSet._trusted(tuple((i,) for i in range(1, N + 1)), 1)


def powers_of_three(k: int) -> AdditiveSet:
    """{1, 3, ..., 3^(k-1)}; its 1-span is [-(3^k-1)/2, (3^k-1)/2]."""
    if k < 1:
        raise ContractViolation("k must be at least 1")
    return AdditiveSet._trusted(tuple((3**i,) for i in range(k)), 1)


def floor_log3(N: int) -> int:
    """Largest k with 3^k <= N."""
    if N < 1:
        raise ContractViolation("N must be positive")
    k, p = 0, 3
    while p <= N:
        k += 1
        p *= 3
    return k


@dataclass(frozen=True)
class IntervalBasis:
    N: int
    case: str  # "one" or "two"
    k: int
    t: Optional[int]
    basis: AdditiveSet


def interval_basis(N: int) -> IntervalBasis:
    """A minimum 1-spanning maximal dissociated subset of [N].

    Case one (2N < 3^(k+1)): the powers 1, ..., 3^k.  Case two: the same
    powers together with t = (3^(k+1) + 1) / 2.
    """
    k = floor_log3(N)
    top = 3 ** (k + 1)
    powers = tuple((3**i,) for i in range(k + 1))
    if 2 * N < top:
        return IntervalBasis(N, "one", k, None, AdditiveSet._trusted(powers, 1))
    t = (top + 1) // 2
    return IntervalBasis(N, "two", k, t, AdditiveSet._trusted(powers + ((t,),), 1))


def interval_dimension(N: int) -> int:
    """d_s([N]) = d_d^-([N]) in closed form."""
    k = floor_log3(N)
    return k + 1 if 2 * N < 3 ** (k + 1) else k + 2


def cube(n: int) -> AdditiveSet:
    """{0,1}^n in lexicographic order."""
    if not 1 <= n <= CUBE_CAP:
        raise ResourceError(f"cube dimension must lie in [1, {CUBE_CAP}] (got {n})")
    return AdditiveSet._trusted(tuple(itertools.product((0, 1), repeat=n)), n)


def standard_basis(n: int) -> AdditiveSet:
    return AdditiveSet._trusted(
        tuple(tuple(1 if i == j else 0 for i in range(n)) for j in range(n)), n
    )


def example_eg1() -> AdditiveSet:
    """{x1, x2, x1+x2, 2x1, 2x2} in Z^2."""
    return AdditiveSet._trusted(((1, 0), (0, 1), (1, 1), (2, 0), (0, 2)), 2)


def geneg_family(n: int, D: AdditiveSet) -> AdditiveSet:
    """B_n ∪ {s_n} ∪ 2·D for a nonempty dissociated D ⊆ {0,1}^n \\ {0}.

    Raises ContractViolation (carrying the witness as ``.witness`` when D
    fails to be dissociated).
    """
    if n < 1:
        raise ContractViolation("n must be positive")
    if len(D) == 0:
        raise ContractViolation("D must be nonempty")
    if D.rank != n or any(c not in (0, 1) for d in D for c in d):
        raise ContractViolation("D must be a subset of {0,1}^n")
    if any(not any(d) for d in D):
        raise ContractViolation("D must not contain 0")
    w = is_dissociated_subsetsum(D)
    if w is not None:
        err = ContractViolation(f"D is not dissociated: {w.witness}")
        err.witness = w
        raise err
    elems = standard_basis(n).elements + ((1,) * n,) + tuple(vscale(2, d) for d in sorted(D.elements))
    A = AdditiveSet(elems, rank=n)
    assert len(A) == n + 1 + len(D)
    return A


# ------------------------------------------------------------ cube search


@dataclass(frozen=True)
class CubeDissociated:
    D: AdditiveSet
    optimal: bool
    strategy: str


def dissociated_in_cube(
    n: int,
    strategy: str = "exact",
    seed: int = 0,
    restarts: int = 32,
    budget: Optional[SearchBudget] = None,
) -> CubeDissociated:
    """A dissociated subset of {0,1}^n, re-verified before it is returned.

    ``exact`` runs the branch-and-bound maximum search (n <= 5);
    ``greedy_random`` inserts a seeded shuffle of the nonzero cube points
    and keeps the largest of ``restarts`` runs.
    """
    if strategy == "exact":
        if not 1 <= n <= EXACT_CUBE_CAP:
            raise ResourceError(f"exact cube search needs 1 <= n <= {EXACT_CUBE_CAP} (got {n})")
        res = max_dissociated(cube(n), budget)
        if not res.exact:
            raise ResourceError(f"budget exhausted; best found has size {res.lower}")
        D, optimal = res.witness, True
    elif strategy == "greedy_random":
        if not 1 <= n <= CUBE_CAP:
            raise ResourceError(f"cube dimension must lie in [1, {CUBE_CAP}] (got {n})")
        D, optimal = _greedy_cube(n, seed, restarts), False
    else:
        raise ContractViolation(f"unknown strategy {strategy!r}")
    check = is_dissociated_subsetsum if len(D) <= 16 else is_dissociated_signcomb
    if check(D) is not None:
        raise AssertionError("cube construction produced a non-dissociated set")
    return CubeDissociated(D, optimal, strategy)


def _greedy_cube(n: int, seed: int, restarts: int) -> AdditiveSet:
    points = [p for p in itertools.product((0, 1), repeat=n) if any(p)]
    master = random.Random(seed)
    seeds = [master.getrandbits(64) for _ in range(max(restarts, 1))]
    best: list = []
    for s in seeds:
        order = list(points)
        random.Random(s).shuffle(order)
        got = _greedy_insert(order, n)
        if len(got) > len(best):
            best = got
    return AdditiveSet._trusted(tuple(best), n)


_HASH_P = (1 << 61) - 1


def _greedy_insert(order: list, n: int) -> list:
    """Insert points in order, keeping each one outside the 1-span so far.

    D ∪ {a} is dissociated iff a is not in the 1-span of D.  Membership is
    tested by meet-in-the-middle over sign combinations of the two halves
    of D, comparing linear hashes modulo 2^61 - 1 with numpy and
    confirming every hash hit exactly.
    """
    weights = [pow(3 * SUBSETSUM_CAP, i, _HASH_P) for i in range(n)]

    def hkey(p):
        return sum(c * w for c, w in zip(p, weights)) % _HASH_P

    chosen: list = []
    left = _HashedHalf([])
    right_vals = np.zeros(1, dtype=np.int64)
    h = 0
    for p in order:
        if len(chosen) >= SUBSETSUM_CAP:
            break
        target = hkey(p) - right_vals
        target[target < 0] += _HASH_P
        if any(_confirm(p, chosen, h, li, ri) for li, ri in left.matches(target)):
            continue
        chosen.append(p)
        h = (len(chosen) + 1) // 2
        left = _HashedHalf([hkey(c) for c in chosen[:h]])
        right_vals = _hashed_combinations([hkey(c) for c in chosen[h:]])
    return chosen


class _HashedHalf:
    """Hashed sign-combination values of one half, with a bitmap prefilter."""

    BITS = 23

    def __init__(self, keys: list):
        vals = _hashed_combinations(keys)
        self.order = np.argsort(vals, kind="stable")
        self.sorted = vals[self.order]
        self.mask = (1 << self.BITS) - 1
        self.bitmap = np.zeros(1 << (self.BITS - 3), dtype=np.uint8)
        idx = vals & self.mask
        np.bitwise_or.at(self.bitmap, idx >> 3, (1 << (idx & 7)).astype(np.uint8))

    def matches(self, target: np.ndarray):
        """(left index, target index) pairs with equal hashes."""
        idx = target & self.mask
        maybe = np.nonzero((self.bitmap[idx >> 3] >> (idx & 7).astype(np.uint8)) & 1)[0]
        if maybe.size == 0:
            return
        t = target[maybe]
        lo = np.searchsorted(self.sorted, t, side="left")
        hi = np.searchsorted(self.sorted, t, side="right")
        for ri, a, b in zip(maybe.tolist(), lo.tolist(), hi.tolist()):
            for pos in range(a, b):
                yield int(self.order[pos]), ri


def _hashed_combinations(keys: list) -> np.ndarray:
    # same lexicographic layout as core.sign_combination_values
    vals = np.zeros(1, dtype=np.int64)
    for k in keys:
        vals = (vals[:, None] + np.array([-k, 0, k], dtype=np.int64)[None, :]) % _HASH_P
        vals = vals.reshape(-1)
    return vals


def _confirm(p, chosen: list, h: int, li: int, ri: int) -> bool:
    coeffs = sign_digits(li, h) + sign_digits(ri, len(chosen) - h)
    total = [0] * len(p)
    for c, e in zip(coeffs, chosen):
        if c:
            for i, x in enumerate(e):
                total[i] += c * x
    return tuple(total) == tuple(p)


# ------------------------------------------------------------ Freiman


@dataclass(frozen=True)
class FreimanEmbedding:
    """x -> sum x_i * base^i with base = 2*order*digit_bound + 1."""

    source_rank: int
    digit_bound: int
    order: int

    @property
    def base(self) -> int:
        return 2 * self.order * self.digit_bound + 1

    def __call__(self, x) -> int:
        B = self.base
        v = 0
        for c in reversed(x):
            v = v * B + c
        return v

    def apply(self, X: AdditiveSet) -> AdditiveSet:
        if X.rank != self.source_rank:
            raise ContractViolation("rank mismatch")
        return AdditiveSet._trusted_checked(tuple((self(x),) for x in X.elements), 1)

    def to_json(self) -> dict:
        return {
            "base": encode_int(self.base),
            "order": self.order,
            "digit_bound": encode_int(self.digit_bound),
            "source_rank": self.source_rank,
        }


def freiman_embed(A: AdditiveSet, order: int):
    """Embed A into Z by a Freiman isomorphism of the given order.

    Returns (image, embedding).  Identities among at most ``order``
    signed elements of A hold exactly when they hold between the images.
    """
    if order < 1:
        raise ContractViolation("order must be at least 1")
    if len(A) == 0:
        raise ContractViolation("A must be nonempty")
    emb = FreimanEmbedding(A.rank, A.max_abs(), order)
    return emb.apply(A), emb
