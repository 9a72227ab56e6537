"""Finite, machine-checked forms of the dimension inequalities.

Every comparison involving logarithms or exponentials is evaluated in
interval arithmetic at two mantissa precisions; a check holds only if
both precisions prove it and agree.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from mpmath import iv

from .constructions import (
    cube,
    geneg_family,
    interval,
    interval_basis,
    interval_dimension,
)
from .core import AddimError, AdditiveSet, ContractViolation, encode_element, negate_closure
from .dissociation import is_dissociated_subsetsum, is_maximal_dissociated
from .lfree import LinearForm, lfree_max_density
from .one_span import SpanningCertificate, covers
from .solvers import (
    DimensionReport,
    SearchBudget,
    full_report,
    max_dissociated,
    min_maximal_dissociated,
    min_spanning_subset,
)

PRECISIONS = (64, 128)


@contextmanager
def _precision(bits: int):
    saved = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = saved


def _log2(x):
    return iv.log(x) / iv.log(2)


def _log4(x):
    return iv.log(x) / iv.log(4)


@dataclass
class InequalityCheck:
    """lhs <= rhs, or an exact equality when ``kind`` is "equal"."""

    name: str
    inputs: dict
    lhs: str
    rhs: str
    verdict: str  # "holds", "fails" or "indeterminate"
    precision: tuple = PRECISIONS
    kind: str = "le"
    context: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "inputs": self.inputs,
            "kind": self.kind,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "precision": list(self.precision),
            "verdict": self.verdict,
            "context": self.context,
        }


def compare_le(name: str, inputs: dict, lhs_fn: Callable, rhs_fn: Callable, context=None) -> InequalityCheck:
    """Check lhs_fn() <= rhs_fn() with interval arithmetic at each precision.

    The callables are evaluated inside the precision context, so they
    must build their values from `iv` operations.
    """
    verdicts = []
    shown = None
    for bits in PRECISIONS:
        with _precision(bits):
            lo = iv.mpf(lhs_fn())
            hi = iv.mpf(rhs_fn())
            if lo.b <= hi.a:
                verdicts.append("holds")
            elif lo.a > hi.b:
                verdicts.append("fails")
            else:
                verdicts.append("indeterminate")
            shown = (_show(lo), _show(hi))
    verdict = verdicts[0] if len(set(verdicts)) == 1 else "indeterminate"
    return InequalityCheck(name, inputs, shown[0], shown[1], verdict, context=context or {})


def _show(x) -> str:
    return iv.nstr(x, 20)


def equality(name: str, inputs: dict, values: dict) -> InequalityCheck:
    vals = list(values.values())
    verdict = "holds" if all(v is not None and v == vals[0] for v in vals) else "fails"
    return InequalityCheck(
        name, inputs, str(vals[0]), str(vals[1:]), verdict, precision=(), kind="equal", context=values
    )


def _describe(X: AdditiveSet) -> list:
    return [encode_element(e) for e in X.elements]


def _require_dissociated_and_spanning(D: AdditiveSet, S: AdditiveSet, A: AdditiveSet):
    if not D.is_subset(A):
        raise ContractViolation("D is not a subset of A")
    w = is_dissociated_subsetsum(D)
    if w is not None:
        raise ContractViolation(f"D is not dissociated: {w.witness}")
    cert = covers(S, A)
    if not isinstance(cert, SpanningCertificate):
        raise ContractViolation(f"S does not 1-span A: {cert.element} is not covered")


def dslb_sides(nD: int, nS: int):
    """Both sides of |D|/log4|D| <= |S|(1 + (4 + log2 ln 4|S|)/log2|D|)."""
    lhs = lambda: iv.mpf(nD) / _log4(iv.mpf(nD))
    rhs = lambda: iv.mpf(nS) * (1 + (4 + _log2(iv.log(4 * iv.mpf(nS)))) / _log2(iv.mpf(nD)))
    return lhs, rhs


def check_dslb(D: AdditiveSet, S: AdditiveSet, A: AdditiveSet) -> InequalityCheck:
    """Size of a dissociated D ⊆ A against the size of any 1-spanning S.

    The inner logarithm is natural, the outer ones base 2 and 4.
    """
    if len(D) < 2:
        raise ContractViolation("|D| must be at least 2 (log4|D| must be positive)")
    if len(S) < 1:
        raise ContractViolation("|S| must be at least 1")
    _require_dissociated_and_spanning(D, S, A)
    lhs, rhs = dslb_sides(len(D), len(S))
    inputs = {"D": _describe(D), "S": _describe(S), "A_size": len(A)}
    return compare_le("dslb", inputs, lhs, rhs)


def check_lev_yuster(D: AdditiveSet, S: AdditiveSet, A: AdditiveSet) -> InequalityCheck:
    """|D| / log2(2|D| + 1) <= |S|."""
    if len(D) < 1:
        raise ContractViolation("|D| must be at least 1")
    _require_dissociated_and_spanning(D, S, A)
    n, m = len(D), len(S)
    inputs = {"D": _describe(D), "S": _describe(S), "A_size": len(A)}
    return compare_le(
        "lev_yuster", inputs, lambda: iv.mpf(n) / _log2(iv.mpf(2 * n + 1)), lambda: iv.mpf(m)
    )


def check_thm_main(A: AdditiveSet, report: DimensionReport) -> InequalityCheck:
    """d_d / (log4 d_d * (1 + (4 + log2 ln 4 d_s) / log2 d_d)) <= d_s."""
    if not (report.d_s.exact and report.d_d.exact):
        raise AddimError("check_thm_main needs exact d_s and d_d")
    dd, ds = report.d_d.value, report.d_s.value
    if dd < 2:
        raise ContractViolation("d_d must be at least 2")

    def lhs():
        x = iv.mpf(dd)
        return x / (_log4(x) * (1 + (4 + _log2(iv.log(4 * iv.mpf(ds)))) / _log2(x)))

    ctx = {"ratio_d_s/d_d": str(Fraction(ds, dd)), "inverse_log4_d_d": float(_float_inv_log4(dd))}
    return compare_le("thm_main", {"A": _describe(A), "d_s": ds, "d_d": dd}, lhs, lambda: iv.mpf(ds), ctx)


def _float_inv_log4(x: int) -> float:
    import math

    return math.log(4) / math.log(x)


# ------------------------------------------------------------ intervals


def check_thm_interval(N_max: int, mode: str = "oracle", budget: Optional[SearchBudget] = None) -> list:
    """Per-N checks of d_s([N]) = d_d^-([N]) = closed form.

    ``oracle`` runs both exact solvers (N_max <= 40); ``constructive``
    verifies the explicit basis and the counting lower bound (N_max <= 3^8).
    """
    if mode == "oracle":
        if N_max > 40:
            raise ContractViolation("oracle mode supports N_max <= 40")
        out = []
        for N in range(1, N_max + 1):
            A = interval(N)
            ds = min_spanning_subset(A, budget)
            ddm = min_maximal_dissociated(A, budget)
            out.append(
                equality(
                    "thm_interval_oracle",
                    {"N": N},
                    {"closed_form": interval_dimension(N), "d_s": ds.value, "d_d_minus": ddm.value},
                )
            )
        return out
    if mode == "constructive":
        if N_max > 3**8:
            raise ContractViolation("constructive mode supports N_max <= 6561")
        return [constructive_interval_check(N) for N in range(1, N_max + 1)]
    raise ContractViolation(f"unknown mode {mode!r}")


_dissociated_cache: dict = {}


def constructive_interval_check(N: int) -> InequalityCheck:
    ib = interval_basis(N)
    S = ib.basis
    A = interval(N)
    if S not in _dissociated_cache:
        _dissociated_cache[S] = is_dissociated_subsetsum(S) is None
    parts = {
        "subset": S.is_subset(A),
        "spanning": isinstance(covers(S, A), SpanningCertificate),
        "dissociated": _dissociated_cache[S],
        "maximal": is_maximal_dissociated(S, A).maximal,
        "size_matches": len(S) == interval_dimension(N),
        # a spanner of size m reaches at most (3^m - 1)/2 positive integers
        "smaller_impossible": (3 ** (len(S) - 1) - 1) // 2 < N,
    }
    verdict = "holds" if all(parts.values()) else "fails"
    return InequalityCheck(
        "thm_interval_constructive",
        {"N": N, "case": ib.case, "basis": [e[0] for e in S.elements]},
        str(len(S)),
        str(interval_dimension(N)),
        verdict,
        precision=(),
        kind="equal",
        context=parts,
    )


# ------------------------------------------------------------ A_n family


def check_thm_midratio(n: int, D: AdditiveSet, budget: Optional[SearchBudget] = None) -> InequalityCheck:
    """Exact dimensions of B_n ∪ {s_n} ∪ 2·D and the resulting ratio.

    Passes when d_s = n + 1 and d_d^- = d_d = n + |D| (verified by exact
    solvers for n <= 4); the ratio and 1/log4 d_d are reported only.
    """
    A = geneg_family(n, D)
    expected_s, expected_d = n + 1, n + len(D)
    ctx = {"ratio": str(Fraction(expected_s, expected_d))}
    if expected_d >= 2:
        ctx["inverse_log4_d_d"] = _float_inv_log4(expected_d)
    inputs = {"n": n, "D": _describe(D)}
    if n > 4:
        return InequalityCheck(
            "thm_midratio", inputs, str(expected_s), str(expected_d), "holds", precision=(),
            kind="report", context=ctx,
        )
    ds = min_spanning_subset(A, budget).value
    ddm = min_maximal_dissociated(A, budget).value
    dd = max_dissociated(A, budget).value
    ctx.update({"d_s": ds, "d_d_minus": ddm, "d_d": dd})
    ok = ds == expected_s and ddm == expected_d and dd == expected_d
    return InequalityCheck(
        "thm_midratio", inputs, f"{ds}/{ddm}", f"{expected_s}/{expected_d}", "holds" if ok else "fails",
        precision=(), kind="equal", context=ctx,
    )


def cube_dissociated_subsets(n: int, max_size: int = 4):
    """Every nonempty dissociated D ⊆ {0,1}^n \\ {0} with |D| <= max_size."""
    points = [p for p in cube(n).elements if any(p)]
    for r in range(1, max_size + 1):
        for combo in itertools.combinations(points, r):
            D = AdditiveSet._trusted(combo, n)
            if is_dissociated_subsetsum(D) is None:
                yield D


# ------------------------------------------------------------ Schoen


def check_schoen_bound(L: LinearForm, p: int) -> InequalityCheck:
    """m_L(Z/p) <= exp(-d_s(C)/12) with C the coefficient set of L."""
    m, witness = lfree_max_density(L, p)
    ds = min_spanning_subset(L.coefficient_set).value
    inputs = {"coefficients": list(L.coefficients), "p": p}
    ctx = {"m": f"{m.numerator}/{m.denominator}", "witness": list(witness), "d_s": ds}
    return compare_le(
        "schoen",
        inputs,
        lambda: iv.mpf(m.numerator) / m.denominator,
        lambda: iv.exp(-iv.mpf(ds) / 12),
        ctx,
    )


# ------------------------------------------------------------ batches


def random_set(rng: random.Random, max_size: int, max_rank: int, coord: int) -> AdditiveSet:
    """A random set with 1..max_size elements of a box [-coord, coord]^rank."""
    rank = rng.randint(1, max_rank)
    box = (2 * coord + 1) ** rank
    size = rng.randint(1, min(max_size, box))
    picked = set()
    while len(picked) < size:
        picked.add(tuple(rng.randint(-coord, coord) for _ in range(rank)))
    return AdditiveSet._trusted(tuple(sorted(picked)), rank)


def instance_seeds(seed: int, runs: int) -> list:
    master = random.Random(seed)
    return [master.getrandbits(64) for _ in range(runs)]


def run_batch(fn: Callable, args: list, threads: int = 1) -> list:
    """Map ``fn`` over ``args``; results are in input order for any ``threads``."""
    if threads <= 1:
        return [fn(a) for a in args]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, args, chunksize=max(1, len(args) // (4 * threads))))


def dslb_instance(seed: int, max_size: int = 8, max_rank: int = 2, coord: int = 3) -> list:
    """dslb and Lev–Yuster checks on one random set with optimal D and S."""
    A = random_set(random.Random(seed), max_size, max_rank, coord)
    return dslb_checks_for(A, seed=seed)


def dslb_checks_for(A: AdditiveSet, seed: Optional[int] = None) -> list:
    D = max_dissociated(A).witness
    S = min_spanning_subset(A).witness
    out = []
    if len(D) >= 1:
        out.append(check_lev_yuster(D, S, A))
    if len(D) >= 2:
        out.append(check_dslb(D, S, A))
    if seed is not None:
        for c in out:
            c.inputs["seed"] = seed
    return out


def chain_instance(seed: int, max_size: int = 8, max_rank: int = 2, coord: int = 3) -> InequalityCheck:
    """d_s^-(U) <= d_s <= d_d^- <= d_d on a random set with U = A ∪ -A ∪ {0}."""
    A = random_set(random.Random(seed), max_size, max_rank, coord)
    rep = full_report(A, negate_closure(A))
    vals = rep.values()
    chain = [vals["d_s_minus"], vals["d_s"], vals["d_d_minus"], vals["d_d"]]
    ok = rep.all_exact and all(a <= b for a, b in zip(chain, chain[1:]))
    return InequalityCheck(
        "chain", {"seed": seed, "A": _describe(A)}, str(chain), "nondecreasing",
        "holds" if ok else "fails", precision=(), kind="chain", context=vals,
    )


def geneg_checks(n: int, max_size: int = 4) -> list:
    return [check_thm_midratio(n, D) for D in cube_dissociated_subsets(n, max_size)]


def schoen_sweep(max_k: int = 3, coeff_range: int = 3, primes=(5, 7, 11, 13)) -> list:
    coeffs = [c for c in range(-coeff_range, coeff_range + 1) if c]
    out = []
    for k in range(1, max_k + 1):
        for cs in itertools.product(coeffs, repeat=k):
            for p in primes:
                out.append(check_schoen_bound(LinearForm(cs), p))
    return out


def verification_report(checks: list) -> dict:
    failing = [c for c in checks if not c.holds]
    return {
        "passed": not failing,
        "total": len(checks),
        "failed": len(failing),
        "checks": [c.to_json() for c in checks],
    }
