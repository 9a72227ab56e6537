"""Dissociativity: deciders, witnesses and the incremental subset-sum table.

A set is dissociated when its subset sums are pairwise distinct, or
equivalently when no nonzero {-1,0,1}-combination of it vanishes.  The two
readings are implemented separately (`is_dissociated_subsetsum` and
`is_dissociated_signcomb`) so each can check the other.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .core import (
    AdditiveSet,
    ContractViolation,
    Element,
    NonDissociationWitness,
    Packer,
    ResourceError,
    SignVector,
    sign_combination_values,
    sign_digits,
    vadd,
    zero_index,
)

SUBSETSUM_CAP = 30
SIGNCOMB_CAP = 26


def _linf(e: Element) -> int:
    return max((abs(c) for c in e), default=0)


class SubsetSumTable:
    """All 2^|base| subset sums of a dissociated base, each with its subset.

    ``sums`` maps a key of the subset sum to the bitmask (over
    ``base.elements``) of the unique subset producing it.  With ``packed``
    the keys are integers from a `Packer`; otherwise they are the exact
    coordinate tuples.  Both give identical verdicts.
    """

    __slots__ = ("base", "sums", "packer", "_mag")

    def __init__(self, base: AdditiveSet, sums: dict, packer: Optional[Packer], mag: int):
        self.base = base
        self.sums = sums
        self.packer = packer
        self._mag = mag

    @classmethod
    def empty(cls, rank: int, packed: bool = True) -> "SubsetSumTable":
        packer = Packer(rank, 1) if packed else None
        zero_key = 0 if packed else (0,) * rank
        return cls(AdditiveSet((), rank=rank), {zero_key: 0}, packer, 0)

    def __len__(self) -> int:
        return len(self.sums)

    def key(self, v: Element):
        return v if self.packer is None else self.packer.key(v)

    def subset_of(self, mask: int) -> list:
        return [e for i, e in enumerate(self.base.elements) if mask >> i & 1]

    def sum_values(self) -> list:
        """Subset sums as exact elements, in table order."""
        rank = self.base.rank
        out = []
        for mask in self.sums.values():
            total = (0,) * rank
            for e in self.subset_of(mask):
                total = vadd(total, e)
            out.append(total)
        return out

    def _rekeyed(self, radius: int) -> "SubsetSumTable":
        packer = Packer(self.base.rank, radius)
        elem_keys = [packer.key(e) for e in self.base.elements]
        sums = {}
        for mask in self.sums.values():
            k = 0
            m = mask
            i = 0
            while m:
                if m & 1:
                    k += elem_keys[i]
                m >>= 1
                i += 1
            sums[k] = mask
        return SubsetSumTable(self.base, sums, packer, self._mag)


def extend(table: SubsetSumTable, a: Element):
    """Table for base ∪ {a}, or a witness that base ∪ {a} is not dissociated."""
    a = tuple(a)
    if a in table.base:
        raise ContractViolation(f"{a} is already in the base")
    if len(a) != table.base.rank:
        raise ContractViolation(f"{a} does not have rank {table.base.rank}")
    mag = table._mag + _linf(a)
    if table.packer is not None and table.base.rank > 1 and mag > table.packer.radius:
        table = table._rekeyed(max(2 * table.packer.radius, mag))
    ka = table.key(a)
    sums = table.sums
    for s, mask in sums.items():
        hit = sums.get(_shift(s, ka))
        if hit is not None:
            return _collision_witness(table.base, a, mask, hit)
    bit = 1 << len(table.base)
    grown = dict(sums)
    for s, mask in sums.items():
        grown[_shift(s, ka)] = mask | bit
    base = AdditiveSet._trusted(table.base.elements + (a,), table.base.rank)
    return SubsetSumTable(base, grown, table.packer, mag)


def _shift(s, k):
    if isinstance(s, tuple):
        return tuple(x + y for x, y in zip(s, k))
    return s + k


def _collision_witness(base: AdditiveSet, a: Element, mask1: int, mask2: int) -> NonDissociationWitness:
    # sum(S1) + a = sum(S2)  =>  a + (S1 \ S2) - (S2 \ S1) = 0
    over = AdditiveSet._trusted(base.elements + (a,), base.rank)
    coeffs = []
    for i in range(len(base)):
        in1, in2 = mask1 >> i & 1, mask2 >> i & 1
        coeffs.append(in1 - in2)
    coeffs.append(1)
    return NonDissociationWitness(SignVector(over, coeffs))


def _restrict(w: NonDissociationWitness, D: AdditiveSet) -> NonDissociationWitness:
    # Re-express a witness over a sub-base as a sign vector over all of D.
    return NonDissociationWitness(SignVector(D, w.witness.as_dict()))


def build_table(D: AdditiveSet, packed: bool = True, cap: int = SUBSETSUM_CAP):
    """Subset-sum table of D (canonical insertion order), or a witness."""
    if len(D) > cap:
        raise ResourceError(
            f"subset-sum enumeration capped at |D| = {cap} (got {len(D)}); "
            "use is_dissociated_signcomb (meet-in-the-middle) instead"
        )
    table = SubsetSumTable.empty(D.rank, packed=packed)
    for a in sorted(D.elements):
        nxt = extend(table, a)
        if isinstance(nxt, NonDissociationWitness):
            return _restrict(nxt, D)
        table = nxt
    return table


def is_dissociated_subsetsum(D: AdditiveSet, packed: bool = True, cap: int = SUBSETSUM_CAP):
    """None if D is dissociated, else a `NonDissociationWitness` over D."""
    res = build_table(D, packed=packed, cap=cap)
    return res if isinstance(res, NonDissociationWitness) else None


def is_dissociated_signcomb(D: AdditiveSet, cap: int = SIGNCOMB_CAP):
    """None if D is dissociated, else a witness; meet-in-the-middle over signs.

    The canonically ordered set is split into a first half L and second
    half R.  A vanishing combination either lives entirely in L, or has a
    nonzero R part whose value is minus some L value.
    """
    n = len(D)
    if n > cap:
        raise ResourceError(f"sign-combination search capped at |D| = {cap} (got {n})")
    elems = sorted(D.elements)
    packer = Packer(D.rank, sum(_linf(e) for e in elems))
    keys = [packer.key(e) for e in elems]
    h = (n + 1) // 2
    left_vals = sign_combination_values(keys[:h])
    right_vals = sign_combination_values(keys[h:])

    zero_left = zero_index(h)
    table = {}
    for idx, v in enumerate(left_vals):
        if v == 0 and idx != zero_left:
            return _signcomb_witness(D, elems, sign_digits(idx, h) + [0] * (n - h))
        table.setdefault(v, idx)
    zero_right = zero_index(n - h)
    for idx, v in enumerate(right_vals):
        if idx == zero_right:
            continue
        hit = table.get(-v)
        if hit is not None:
            return _signcomb_witness(D, elems, sign_digits(hit, h) + sign_digits(idx, n - h))
    return None


def _signcomb_witness(D: AdditiveSet, elems: list, coeffs: list) -> NonDissociationWitness:
    return NonDissociationWitness(SignVector(D, dict(zip(elems, coeffs))))


def is_dissociated(D: AdditiveSet) -> bool:
    return is_dissociated_subsetsum(D) is None


@dataclass(frozen=True)
class Maximality:
    """Outcome of `is_maximal_dissociated`.

    ``status`` is "maximal", "not_dissociated" (with ``witness``) or
    "extendable" (with the least extending ``element``).
    """

    status: str
    witness: Optional[NonDissociationWitness] = None
    element: Optional[Element] = None

    @property
    def maximal(self) -> bool:
        return self.status == "maximal"


@lru_cache(maxsize=64)
def _difference_table(D: AdditiveSet):
    # Maps sum(S2) - sum(S1) to (mask1, mask2) over the table's base order,
    # for every ordered pair of subsets of D.  D ∪ {a} fails to be
    # dissociated iff a is such a difference.
    table = build_table(D)
    if isinstance(table, NonDissociationWitness):
        return table, None
    items = list(table.sums.items())
    diffs = {}
    for k1, m1 in items:
        for k2, m2 in items:
            diffs.setdefault(k2 - k1, (m1, m2))
    return table, diffs


def is_maximal_dissociated(D: AdditiveSet, A: AdditiveSet) -> Maximality:
    """Decide whether D is a maximal dissociated subset of A.

    Small bases tabulate all differences of subset sums once (cached per
    D); otherwise each candidate is tried with `extend`.
    """
    if not D.is_subset(A):
        raise ContractViolation("D is not a subset of A")
    rest = sorted(A.as_frozenset() - D.as_frozenset())
    if len(D) <= 12 and 2 ** len(D) <= len(rest):
        table, diffs = _difference_table(D)
        if diffs is None:
            return Maximality("not_dissociated", witness=table)
        if D.rank == 1:
            # rank-1 keys are the integers themselves
            missing = next((a for a in rest if a[0] not in diffs), None)
            return Maximality("maximal") if missing is None else Maximality("extendable", element=missing)
        for a in rest:
            # differences of subset sums never leave the box of radius _mag
            if _linf(a) > table._mag or table.key(a) not in diffs:
                return Maximality("extendable", element=a)
        return Maximality("maximal")
    table = build_table(D)
    if isinstance(table, NonDissociationWitness):
        return Maximality("not_dissociated", witness=table)
    for a in rest:
        if not isinstance(extend(table, a), NonDissociationWitness):
            return Maximality("extendable", element=a)
    return Maximality("maximal")
