"""Elements of Z^r, additive sets, sign vectors and certificates.

Elements are plain tuples of Python ints, so arithmetic is exact at any
magnitude.  Everything here is immutable once built.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence, Union

Element = tuple  # tuple[int, ...]

# JSON integers outside this range are written as strings.
SAFE_INT = 2**53 - 1


class AddimError(Exception):
    """Base class for all errors raised by this package."""


class ContractViolation(AddimError, ValueError):
    """A precondition of an operation was not met."""


class ResourceError(AddimError):
    """An input exceeds a configured enumeration cap."""


class ParseError(AddimError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def vadd(u: Element, v: Element) -> Element:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Element, v: Element) -> Element:
    return tuple(a - b for a, b in zip(u, v))


def vneg(u: Element) -> Element:
    return tuple(-a for a in u)


def vscale(c: int, u: Element) -> Element:
    return tuple(c * a for a in u)


def zero(rank: int) -> Element:
    return (0,) * rank


def is_zero(u: Element) -> bool:
    return not any(u)


class AdditiveSet:
    """A finite duplicate-free set of elements of Z^rank.

    Iteration follows the stored order; equality and hashing ignore it.
    """

    __slots__ = ("rank", "elements", "_frozen", "_index")

    def __init__(self, elements: Iterable[Sequence[int]] = (), rank: int | None = None):
        elems = tuple(tuple(int(c) for c in e) for e in elements)
        if rank is None:
            if not elems:
                raise ContractViolation("rank is required for an empty set")
            rank = len(elems[0])
        if rank < 1:
            raise ContractViolation(f"rank must be positive, got {rank}")
        for e in elems:
            if len(e) != rank:
                raise ContractViolation(f"element {e} does not have rank {rank}")
        frozen = frozenset(elems)
        if len(frozen) != len(elems):
            raise ContractViolation("duplicate elements")
        self.rank = rank
        self.elements = elems
        self._frozen = frozen
        self._index = None

    @classmethod
    def _trusted(cls, elements: tuple, rank: int) -> "AdditiveSet":
        # Fast path for callers that already guarantee the invariants.
        obj = cls.__new__(cls)
        obj.rank = rank
        obj.elements = elements
        obj._frozen = frozenset(elements)
        obj._index = None
        return obj

    @classmethod
    def integers(cls, values: Iterable[int]) -> "AdditiveSet":
        """Rank-1 set from plain integers."""
        return cls._trusted_checked(tuple((int(v),) for v in values), 1)

    @classmethod
    def _trusted_checked(cls, elements: tuple, rank: int) -> "AdditiveSet":
        obj = cls._trusted(elements, rank)
        if len(obj._frozen) != len(elements):
            raise ContractViolation("duplicate elements")
        return obj

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Element]:
        return iter(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._frozen

    def __eq__(self, other) -> bool:
        if not isinstance(other, AdditiveSet):
            return NotImplemented
        return self.rank == other.rank and self._frozen == other._frozen

    def __hash__(self) -> int:
        return hash((self.rank, self._frozen))

    def __repr__(self) -> str:
        if self.rank == 1:
            body = ", ".join(str(e[0]) for e in self.elements)
        else:
            body = ", ".join(str(e) for e in self.elements)
        return f"AdditiveSet({{{body}}}, rank={self.rank})"

    def index(self, x: Element) -> int:
        if self._index is None:
            self._index = {e: i for i, e in enumerate(self.elements)}
        return self._index[x]

    def as_frozenset(self) -> frozenset:
        return self._frozen

    def canonical(self) -> "AdditiveSet":
        """Same set, lexicographically sorted."""
        return AdditiveSet._trusted(tuple(sorted(self.elements)), self.rank)

    def is_subset(self, other: "AdditiveSet") -> bool:
        return self.rank == other.rank and self._frozen <= other._frozen

    def union(self, other: Iterable[Element]) -> "AdditiveSet":
        out = list(self.elements)
        seen = set(self._frozen)
        for e in other:
            if e not in seen:
                seen.add(e)
                out.append(e)
        return AdditiveSet(out, rank=self.rank)

    def without(self, *xs: Element) -> "AdditiveSet":
        drop = set(xs)
        return AdditiveSet._trusted(tuple(e for e in self.elements if e not in drop), self.rank)

    def subset(self, elems: Iterable[Element]) -> "AdditiveSet":
        return AdditiveSet._trusted_checked(tuple(elems), self.rank)

    def max_abs(self) -> int:
        """Largest absolute coordinate over the set (0 when empty)."""
        return max((abs(c) for e in self.elements for c in e), default=0)

    def to_lists(self) -> list:
        return [list(e) for e in self.elements]


def negate_closure(A: AdditiveSet) -> AdditiveSet:
    """Return A ∪ (−A) ∪ {0}, canonically ordered."""
    out = set(A.elements)
    out.update(vneg(a) for a in A.elements)
    out.add(zero(A.rank))
    return AdditiveSet._trusted(tuple(sorted(out)), A.rank)


class SignVector:
    """Coefficients in {-1, 0, 1}, one per element of ``over``."""

    __slots__ = ("over", "coeffs")

    def __init__(self, over: AdditiveSet, coeffs: Sequence[int] | Mapping[Element, int]):
        if isinstance(coeffs, Mapping):
            extra = set(coeffs) - over.as_frozenset()
            if extra:
                raise ContractViolation(f"coefficients given for non-members {sorted(extra)}")
            coeffs = tuple(int(coeffs.get(e, 0)) for e in over.elements)
        else:
            coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != len(over):
            raise ContractViolation(
                f"sign vector has {len(coeffs)} coefficients for a set of size {len(over)}"
            )
        if any(c not in (-1, 0, 1) for c in coeffs):
            raise ContractViolation(f"coefficients must lie in {{-1,0,1}}: {coeffs}")
        self.over = over
        self.coeffs = coeffs

    @classmethod
    def zeros(cls, over: AdditiveSet) -> "SignVector":
        return cls(over, (0,) * len(over))

    def __getitem__(self, x: Element) -> int:
        return self.coeffs[self.over.index(x)]

    def __eq__(self, other) -> bool:
        if not isinstance(other, SignVector):
            return NotImplemented
        return self.over == other.over and self.as_dict() == other.as_dict()

    def __hash__(self) -> int:
        return hash(frozenset(self.as_dict().items()))

    def __repr__(self) -> str:
        return f"SignVector({self.as_dict()})"

    def as_dict(self) -> dict:
        return {e: c for e, c in zip(self.over.elements, self.coeffs) if c}

    def support(self) -> list:
        return [e for e, c in zip(self.over.elements, self.coeffs) if c]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __neg__(self) -> "SignVector":
        return SignVector(self.over, tuple(-c for c in self.coeffs))


def evaluate(sv: SignVector, over: AdditiveSet | None = None) -> Element:
    """Exact value of the combination sum(eps_a * a)."""
    if over is not None and over != sv.over:
        raise ContractViolation("sign vector domain does not match the given set")
    total = [0] * sv.over.rank
    for e, c in zip(sv.over.elements, sv.coeffs):
        if c == 1:
            for i, x in enumerate(e):
                total[i] += x
        elif c == -1:
            for i, x in enumerate(e):
                total[i] -= x
    return tuple(total)


@dataclass(frozen=True)
class NonDissociationWitness:
    """A nonzero sign combination over the tested set that sums to zero."""

    witness: SignVector

    def verify(self) -> bool:
        return not self.witness.is_zero() and is_zero(evaluate(self.witness))

    def to_json(self) -> dict:
        return {
            "kind": "non_dissociation",
            "coefficients": [
                [encode_element(e), c] for e, c in zip(self.witness.over.elements, self.witness.coeffs) if c
            ],
        }


@dataclass(frozen=True)
class SpanningCertificate:
    """One sign vector over ``spanner`` per covered target."""

    spanner: AdditiveSet
    coefficients: Mapping  # Element -> SignVector

    def verify(self, targets: AdditiveSet | None = None) -> bool:
        if targets is not None and set(self.coefficients) != set(targets.elements):
            return False
        for target, sv in self.coefficients.items():
            if sv.over != self.spanner or evaluate(sv) != target:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "kind": "spanning",
            "spanner": [encode_element(e) for e in self.spanner.elements],
            "combinations": [
                {"target": encode_element(t), "coefficients": list(sv.coeffs)}
                for t, sv in self.coefficients.items()
            ],
        }


class Packer:
    """Linear map Z^r -> Z, x -> sum x_i * base**i, injective on a box.

    Two vectors whose coordinates are bounded by ``radius`` in absolute value
    get equal keys iff they are equal, and key(u + v) = key(u) + key(v)
    always, so sums can be compared through their keys.
    """

    __slots__ = ("rank", "base", "radius")

    def __init__(self, rank: int, radius: int):
        self.rank = rank
        self.radius = max(int(radius), 1)
        self.base = 2 * self.radius + 1

    def key(self, v: Element) -> int:
        if self.rank == 1:
            return v[0]
        k = 0
        for c in reversed(v):
            k = k * self.base + c
        return k

    def unkey(self, k: int) -> Element:
        if self.rank == 1:
            return (k,)
        out = []
        for _ in range(self.rank):
            d = k % self.base
            if d > self.radius:
                d -= self.base
            out.append(d)
            k = (k - d) // self.base
        return tuple(out)


def sign_combination_values(keys: Sequence[int]) -> list:
    """Values of all 3^n sign combinations of ``keys``.

    Position i holds the combination whose base-3 digits (most significant
    first, 0/1/2 meaning -1/0/+1) spell i, so the list is in lexicographic
    order of sign vectors with -1 < 0 < +1.
    """
    vals = [0]
    for k in keys:
        vals = [v + c for v in vals for c in (-k, 0, k)]
    return vals


def zero_index(m: int) -> int:
    """Position of the all-zero sign vector among 3^m."""
    return (3**m - 1) // 2


def sign_digits(idx: int, m: int) -> list:
    out = [0] * m
    for i in range(m - 1, -1, -1):
        idx, d = divmod(idx, 3)
        out[i] = d - 1
    return out


# ---------------------------------------------------------------- formats


def encode_int(x: int):
    return x if -SAFE_INT <= x <= SAFE_INT else str(x)


def encode_element(e: Element) -> list:
    return [encode_int(c) for c in e]


def _decode_int(v, line: int | None = None) -> int:
    if isinstance(v, bool):
        raise ParseError(f"expected an integer, got {v!r}", line)
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        try:
            return int(v.strip(), 10)
        except ValueError:
            raise ParseError(f"expected an integer, got {v!r}", line) from None
    raise ParseError(f"expected an integer, got {v!r}", line)


def parse_set(data: Union[str, bytes], format: str = "text") -> AdditiveSet:
    """Parse a set in ``text`` or ``json`` format.

    Text: one element per line, coordinates separated by single spaces,
    lines starting with '#' ignored.  A file with no elements is the empty
    set of rank 1, or of rank r under a ``# rank: r`` header.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    if format == "json":
        return _parse_json(data)
    if format != "text":
        raise ParseError(f"unknown format {format!r}")

    rank = None
    header_rank = None
    elements = []
    seen = {}
    for lineno, raw in enumerate(data.splitlines(), start=1):
        line = raw.rstrip("\r")
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("rank:"):
                try:
                    header_rank = int(body[5:].strip())
                except ValueError:
                    raise ParseError(f"bad rank header {line!r}", lineno) from None
            continue
        if not line.strip():
            continue
        tokens = line.strip().split(" ")
        try:
            elem = tuple(int(t, 10) for t in tokens)
        except ValueError:
            raise ParseError(f"malformed line {line!r}", lineno) from None
        if rank is None:
            rank = len(elem)
        elif len(elem) != rank:
            raise ParseError(f"ragged rank: expected {rank} coordinates, got {len(elem)}", lineno)
        if elem in seen:
            raise ParseError(f"duplicate element (first seen on line {seen[elem]})", lineno)
        seen[elem] = lineno
        elements.append(elem)
    if rank is None:
        rank = header_rank or 1
    elif header_rank is not None and header_rank != rank:
        raise ParseError(f"rank header says {header_rank} but elements have rank {rank}")
    return AdditiveSet._trusted(tuple(elements), rank)


def _parse_json(data: str) -> AdditiveSet:
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    if not isinstance(obj, dict) or "rank" not in obj or "elements" not in obj:
        raise ParseError('expected an object with "rank" and "elements"')
    rank = obj["rank"]
    if not isinstance(rank, int) or isinstance(rank, bool) or rank < 1:
        raise ParseError(f"rank must be a positive integer, got {rank!r}")
    if not isinstance(obj["elements"], list):
        raise ParseError('"elements" must be an array')
    elements = []
    seen = set()
    for i, raw in enumerate(obj["elements"]):
        if not isinstance(raw, list):
            raise ParseError(f"element {i} is not an array")
        elem = tuple(_decode_int(v) for v in raw)
        if len(elem) != rank:
            raise ParseError(f"ragged rank: element {i} has {len(elem)} coordinates, expected {rank}")
        if elem in seen:
            raise ParseError(f"duplicate element at index {i}")
        seen.add(elem)
        elements.append(elem)
    return AdditiveSet._trusted(tuple(elements), rank)


def serialize_set(A: AdditiveSet, format: str = "text", header: Sequence[str] = ()) -> str:
    if format == "json":
        return json.dumps({"rank": A.rank, "elements": [encode_element(e) for e in A.elements]})
    if format != "text":
        raise ContractViolation(f"unknown format {format!r}")
    lines = [f"# {h}" for h in header]
    lines.append(f"# rank: {A.rank}")
    lines.extend(" ".join(str(c) for c in e) for e in A.elements)
    return "\n".join(lines) + "\n"
