"""1-spans: enumeration, membership, coverage and spanning certificates.

When several sign vectors reach the same target, the one reported is the
lexicographically least in canonical element order with -1 < 0 < +1.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .core import (
    AdditiveSet,
    ContractViolation,
    Element,
    Packer,
    ResourceError,
    SignVector,
    SpanningCertificate,
    sign_combination_values,
    sign_digits,
)

SPAN_CAP = 16
MEMBER_CAP = 32
# Above 3^12 combinations the index switches to meet-in-the-middle.
FULL_TABLE_LIMIT = 12


@dataclass(frozen=True)
class SpanMembership:
    target: Element
    combination: SignVector


@dataclass(frozen=True)
class Uncovered:
    element: Element


class SpanIndex:
    """Answers membership queries for the 1-span of a fixed set S."""

    def __init__(self, S: AdditiveSet, full: Optional[bool] = None):
        n = len(S)
        if n > MEMBER_CAP:
            raise ResourceError(f"span membership capped at |S| = {MEMBER_CAP} (got {n})")
        self.S = S
        self.elems = sorted(S.elements)
        self.n = n
        self.bound = [sum(abs(e[i]) for e in self.elems) for i in range(S.rank)]
        self.packer = Packer(S.rank, max(self.bound, default=0))
        keys = [self.packer.key(e) for e in self.elems]
        self.full = n <= FULL_TABLE_LIMIT if full is None else full
        if self.full:
            self.table = _first_index(sign_combination_values(keys))
        else:
            self.h = (n + 1) // 2
            self.left = sign_combination_values(keys[: self.h])
            self.right = _first_index(sign_combination_values(keys[self.h :]))

    def _in_box(self, x: Element) -> bool:
        return all(abs(c) <= b for c, b in zip(x, self.bound))

    def digits(self, x: Element) -> Optional[list]:
        """Lex-least sign digits (canonical order) reaching x, or None."""
        if len(x) != self.S.rank:
            raise ContractViolation(f"{x} does not have rank {self.S.rank}")
        if not self._in_box(x):
            return None
        k = self.packer.key(x)
        if self.full:
            idx = self.table.get(k)
            return None if idx is None else sign_digits(idx, self.n)
        right = self.right
        for i, v in enumerate(self.left):
            j = right.get(k - v)
            if j is not None:
                return sign_digits(i, self.h) + sign_digits(j, self.n - self.h)
        return None

    def contains(self, x: Element) -> bool:
        if self.full:
            return self._in_box(x) and self.packer.key(x) in self.table
        return self.digits(x) is not None

    def combination(self, x: Element) -> Optional[SignVector]:
        d = self.digits(x)
        if d is None:
            return None
        return SignVector(self.S, dict(zip(self.elems, d)))

    def first_uncovered(self, A: AdditiveSet) -> Optional[Element]:
        if self.full and A.rank == 1 and self.S.rank == 1:
            # rank-1 keys are the integers themselves
            table = self.table
            if all(e[0] in table for e in A.elements):
                return None
        for a in sorted(A.elements):
            if not self.contains(a):
                return a
        return None


def _first_index(values: list) -> dict:
    out = {}
    for i, v in enumerate(values):
        out.setdefault(v, i)
    return out


@lru_cache(maxsize=128)
def span_index(S: AdditiveSet) -> SpanIndex:
    return SpanIndex(S)


def span(S: AdditiveSet) -> AdditiveSet:
    """All {-1,0,1}-combinations of S, canonically ordered."""
    if len(S) > SPAN_CAP:
        raise ResourceError(
            f"span enumeration capped at |S| = {SPAN_CAP} (got {len(S)}); use member() queries instead"
        )
    elems = sorted(S.elements)
    packer = Packer(S.rank, sum(max((abs(c) for c in e), default=0) for e in elems))
    values = set(sign_combination_values([packer.key(e) for e in elems]))
    return AdditiveSet._trusted(tuple(sorted(packer.unkey(v) for v in values)), S.rank)


def member(x: Element, S: AdditiveSet) -> Optional[SpanMembership]:
    """Membership of x in the 1-span of S, with a combination when it holds."""
    x = tuple(x)
    sv = span_index(S).combination(x)
    return None if sv is None else SpanMembership(x, sv)


class _Combinations(Mapping):
    # Target -> SignVector, decoded on access from a shared SpanIndex.
    def __init__(self, index: SpanIndex, targets: AdditiveSet):
        self._index = index
        self._targets = targets

    def __getitem__(self, x):
        if x not in self._targets:
            raise KeyError(x)
        return self._index.combination(x)

    def __iter__(self):
        return iter(self._targets.elements)

    def __len__(self):
        return len(self._targets)


def covers(S: AdditiveSet, A: AdditiveSet):
    """A `SpanningCertificate` if S 1-spans A, else the least `Uncovered` element."""
    if S.rank != A.rank:
        raise ContractViolation("rank mismatch")
    index = span_index(S)
    missing = index.first_uncovered(A)
    if missing is not None:
        return Uncovered(missing)
    return SpanningCertificate(S, _Combinations(index, A))


def is_spanning(S: AdditiveSet, A: AdditiveSet) -> bool:
    return isinstance(covers(S, A), SpanningCertificate)
