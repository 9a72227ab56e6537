"""Exact d_d, d_d^-, d_s and universe-restricted d_s^- by bounded search.

All four searches walk subsets of a canonically ordered candidate list in
lexicographic order, so the first optimum found is the lexicographically
least one.  Candidates never include 0, and of each pair {a, -a} only the
smaller is kept: swapping a for -a preserves dissociativity, maximality
and 1-spans, and the smaller element gives the smaller witness.
"""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .core import (
    AddimError,
    AdditiveSet,
    NonDissociationWitness,
    SpanningCertificate,
    encode_element,
    is_zero,
    negate_closure,
    vneg,
)
from .dissociation import SubsetSumTable, extend
from .one_span import SpanIndex, covers

DEFAULT_MAX_NODES = 10**8
DEFAULT_MAX_SECONDS = 60.0


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = DEFAULT_MAX_NODES
    max_seconds: float = DEFAULT_MAX_SECONDS


def default_budget() -> SearchBudget:
    """Default budget, honouring ADDIM_BUDGET_NODES."""
    env = os.environ.get("ADDIM_BUDGET_NODES")
    if env:
        return SearchBudget(max_nodes=int(env))
    return SearchBudget()


class _OutOfBudget(Exception):
    pass


class _Clock:
    def __init__(self, budget: SearchBudget):
        self.budget = budget
        self.nodes = 0
        self.deadline = time.monotonic() + budget.max_seconds

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget.max_nodes:
            raise _OutOfBudget
        if self.nodes & 1023 == 0 and time.monotonic() > self.deadline:
            raise _OutOfBudget


@dataclass
class SolverResult:
    """Outcome of one solver call.

    ``exact`` results carry ``value`` and ``witness``; otherwise only the
    bounds ``lower`` <= true value <= ``upper`` are valid (``upper`` may be
    None when unknown).  ``status`` is "exact", "bounds" or, for a universe
    that cannot 1-span A at all, "infeasible".
    """

    quantity: str
    status: str
    value: Optional[int]
    witness: Optional[AdditiveSet]
    lower: int
    upper: Optional[int]
    nodes: int
    method: str
    certificate: Optional[SpanningCertificate] = None
    universe: Optional[AdditiveSet] = None

    @property
    def exact(self) -> bool:
        return self.status == "exact"

    def to_json(self) -> dict:
        out = {
            "quantity": self.quantity,
            "status": self.status,
            "value": self.value,
            "lower": self.lower,
            "upper": self.upper,
            "method": self.method,
            "nodes": self.nodes,
            "witness": None if self.witness is None else [encode_element(e) for e in self.witness.elements],
        }
        if self.universe is not None:
            out["universe_size"] = len(self.universe)
        return out


def candidates(X: AdditiveSet) -> list:
    """Sorted nonzero elements of X, keeping the smaller of each ±pair."""
    present = X.as_frozenset()
    out = []
    for x in sorted(present):
        if is_zero(x):
            continue
        neg = vneg(x)
        if neg in present and neg < x:
            continue
        out.append(x)
    return out


def lower_bound_log3(A: AdditiveSet) -> int:
    """Least k with 3^k >= |A ∪ -A ∪ {0}|; exact integer arithmetic."""
    size = len(negate_closure(A))
    k, p = 0, 1
    while p < size:
        k += 1
        p *= 3
    return k


# ------------------------------------------------------------------ d_d


def max_dissociated(A: AdditiveSet, budget: Optional[SearchBudget] = None) -> SolverResult:
    """d_d(A) with the lexicographically least maximum dissociated subset."""
    clock = _Clock(budget or default_budget())
    cands = candidates(A)
    n = len(cands)
    best: list = []

    def dfs(start: int, table: SubsetSumTable, chosen: list):
        nonlocal best
        clock.tick()
        if len(chosen) > len(best):
            best = list(chosen)
        for j in range(start, n):
            if len(chosen) + (n - j) <= len(best):
                return
            nxt = extend(table, cands[j])
            if isinstance(nxt, NonDissociationWitness):
                continue
            chosen.append(cands[j])
            dfs(j + 1, nxt, chosen)
            chosen.pop()

    try:
        dfs(0, SubsetSumTable.empty(A.rank), [])
    except _OutOfBudget:
        return SolverResult("d_d", "bounds", None, A.subset(best), len(best), n, clock.nodes, "branch-and-bound")
    return SolverResult("d_d", "exact", len(best), A.subset(best), len(best), len(best), clock.nodes, "branch-and-bound")


# ------------------------------------------------------------------ d_d^-


def _covers_fast(S: list, A: AdditiveSet, rank: int) -> bool:
    return SpanIndex(AdditiveSet._trusted(tuple(S), rank)).first_uncovered(A) is None


def min_maximal_dissociated(A: AdditiveSet, budget: Optional[SearchBudget] = None) -> SolverResult:
    """d_d^-(A) by iterative deepening over dissociated k-subsets.

    A dissociated D ⊆ A is maximal exactly when its 1-span contains A, so
    each level accepts the first dissociated k-subset that covers A.
    """
    clock = _Clock(budget or default_budget())
    cands = candidates(A)
    n = len(cands)
    rank = A.rank
    k = lower_bound_log3(A)
    found: Optional[list] = None

    def dfs(start: int, table: SubsetSumTable, chosen: list) -> bool:
        nonlocal found
        clock.tick()
        if len(chosen) == k:
            if _covers_fast(chosen, A, rank):
                found = list(chosen)
                return True
            return False
        for j in range(start, n - (k - len(chosen)) + 1):
            nxt = extend(table, cands[j])
            if isinstance(nxt, NonDissociationWitness):
                continue
            chosen.append(cands[j])
            if dfs(j + 1, nxt, chosen):
                return True
            chosen.pop()
        return False

    try:
        while k <= n:
            if dfs(0, SubsetSumTable.empty(rank), []):
                break
            k += 1
    except _OutOfBudget:
        upper = len(_greedy_maximal(A, cands))
        return SolverResult("d_d_minus", "bounds", None, None, k, upper, clock.nodes, "iterative-deepening")
    witness = A.subset(found)
    return SolverResult(
        "d_d_minus", "exact", k, witness, k, k, clock.nodes, "iterative-deepening", certificate=covers(witness, A)
    )


def _greedy_maximal(A: AdditiveSet, cands: list) -> list:
    table = SubsetSumTable.empty(A.rank)
    out = []
    for c in cands:
        nxt = extend(table, c)
        if not isinstance(nxt, NonDissociationWitness):
            table = nxt
            out.append(c)
    return out


# ------------------------------------------------------------------ d_s


def _spanning_search(A: AdditiveSet, pool: list, clock: _Clock, quantity: str):
    """Iterative deepening for the least k-subset of ``pool`` spanning A.

    Returns (k, subset) or (None, None) if even all of ``pool`` fails.
    Raises _OutOfBudget with ``clock`` advanced; the current level is
    recorded in ``clock.level``.
    """
    rank = A.rank
    n = len(pool)
    need = [max((abs(a[i]) for a in A.elements), default=0) for i in range(rank)]
    # top[j][i]: prefix sums of |coordinate i| over pool[j:], sorted descending
    top = []
    for j in range(n + 1):
        row = []
        for i in range(rank):
            vals = sorted((abs(p[i]) for p in pool[j:]), reverse=True)
            acc = [0]
            for v in vals:
                acc.append(acc[-1] + v)
            row.append(acc)
        top.append(row)

    k = lower_bound_log3(A)
    clock.level = k
    found = None

    def feasible(j: int, reach: list, left: int) -> bool:
        row = top[j]
        for i in range(rank):
            if reach[i] + row[i][min(left, len(row[i]) - 1)] < need[i]:
                return False
        return True

    def dfs(start: int, chosen: list, reach: list) -> bool:
        nonlocal found
        clock.tick()
        left = k - len(chosen)
        if left == 0:
            if _covers_fast(chosen, A, rank):
                found = list(chosen)
                return True
            return False
        for j in range(start, n - left + 1):
            if not feasible(j, reach, left):
                # pool[j:] only shrinks the achievable reach further on
                return False
            c = pool[j]
            chosen.append(c)
            if dfs(j + 1, chosen, [r + abs(x) for r, x in zip(reach, c)]):
                return True
            chosen.pop()
        return False

    while k <= n:
        clock.level = k
        if dfs(0, [], [0] * rank):
            return k, found
        k += 1
    return None, None


def min_spanning_subset(A: AdditiveSet, budget: Optional[SearchBudget] = None) -> SolverResult:
    """d_s(A): the smallest S ⊆ A whose 1-span contains A."""
    clock = _Clock(budget or default_budget())
    pool = candidates(A)
    try:
        k, found = _spanning_search(A, pool, clock, "d_s")
    except _OutOfBudget:
        return SolverResult("d_s", "bounds", None, None, clock.level, len(pool), clock.nodes, "iterative-deepening")
    witness = A.subset(found)
    return SolverResult(
        "d_s", "exact", k, witness, k, k, clock.nodes, "iterative-deepening", certificate=covers(witness, A)
    )


def min_spanning_universe(
    A: AdditiveSet, U: AdditiveSet, budget: Optional[SearchBudget] = None
) -> SolverResult:
    """d_s^- restricted to spanners drawn from the finite universe U.

    The value is exact over U and an upper bound for the unrestricted
    lower 1-span dimension.
    """
    if U.rank != A.rank:
        raise AddimError("universe rank differs from the set's rank")
    clock = _Clock(budget or default_budget())
    pool = candidates(U)
    try:
        k, found = _spanning_search(A, pool, clock, "d_s_minus")
    except _OutOfBudget:
        return SolverResult(
            "d_s_minus", "bounds", None, None, clock.level, None, clock.nodes, "iterative-deepening", universe=U
        )
    if k is None:
        return SolverResult(
            "d_s_minus", "infeasible", None, None, 0, None, clock.nodes, "iterative-deepening", universe=U
        )
    witness = U.subset(found)
    return SolverResult(
        "d_s_minus",
        "exact",
        k,
        witness,
        k,
        k,
        clock.nodes,
        "exact-over-universe",
        certificate=covers(witness, A),
        universe=U,
    )


# ------------------------------------------------------------------ report


class ChainViolation(AddimError):
    """d_s^- <= d_s <= d_d^- <= d_d failed on exact values."""


@dataclass
class DimensionReport:
    A: AdditiveSet
    d_d: SolverResult
    d_d_minus: SolverResult
    d_s: SolverResult
    d_s_minus: Optional[SolverResult] = None
    ratios: dict = field(default_factory=dict)
    main_floor: Optional[float] = None

    def values(self) -> dict:
        out = {
            "d_d": self.d_d.value,
            "d_d_minus": self.d_d_minus.value,
            "d_s": self.d_s.value,
        }
        out["d_s_minus"] = None if self.d_s_minus is None else self.d_s_minus.value
        return out

    @property
    def all_exact(self) -> bool:
        parts = [self.d_d, self.d_d_minus, self.d_s]
        if self.d_s_minus is not None:
            parts.append(self.d_s_minus)
        return all(p.exact for p in parts)

    def to_json(self) -> dict:
        return {
            "rank": self.A.rank,
            "size": len(self.A),
            "d_d": self.d_d.to_json(),
            "d_d_minus": self.d_d_minus.to_json(),
            "d_s": self.d_s.to_json(),
            "d_s_minus": None if self.d_s_minus is None else self.d_s_minus.to_json(),
            "ratios": {k: None if v is None else [v.numerator, v.denominator] for k, v in self.ratios.items()},
            "main_floor": None if self.main_floor is None else repr(self.main_floor),
        }


def _ratio(a: SolverResult, b: SolverResult) -> Optional[Fraction]:
    if a.exact and b.exact and b.value:
        return Fraction(a.value, b.value)
    return None


def full_report(
    A: AdditiveSet, U: Optional[AdditiveSet] = None, budget: Optional[SearchBudget] = None
) -> DimensionReport:
    """All four dimensions of A; d_s^- only when a universe is given."""
    budget = budget or default_budget()
    rep = DimensionReport(
        A,
        d_d=max_dissociated(A, budget),
        d_d_minus=min_maximal_dissociated(A, budget),
        d_s=min_spanning_subset(A, budget),
        d_s_minus=None if U is None else min_spanning_universe(A, U, budget),
    )
    chain = [r for r in (rep.d_s_minus, rep.d_s, rep.d_d_minus, rep.d_d) if r is not None and r.exact]
    for lo, hi in zip(chain, chain[1:]):
        if lo.value > hi.value:
            raise ChainViolation(f"{lo.quantity}={lo.value} exceeds {hi.quantity}={hi.value}")
    if rep.d_s_minus is not None:
        rep.ratios["d_s_minus/d_s"] = _ratio(rep.d_s_minus, rep.d_s)
    rep.ratios["d_s/d_d_minus"] = _ratio(rep.d_s, rep.d_d_minus)
    rep.ratios["d_d_minus/d_d"] = _ratio(rep.d_d_minus, rep.d_d)
    if rep.d_d.exact and rep.d_d.value >= 2:
        rep.main_floor = math.log(4) / math.log(rep.d_d.value)
    return rep
