"""Ranked lists and their comparison: Kendall's tau-b and Rank-Biased Distance."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from sentirank.errors import AnalysisError, InputError
from sentirank.tsvio import format_real, write_tsv

TIE_POLICIES = ("competition_min", "fractional")
DEFAULT_RBD_P = 0.9


@dataclass(frozen=True)
class RankedList:
    """Entities by descending score, ties ordered by ascending id."""

    entries: tuple[tuple[str, float, float], ...]
    tie_policy: str = "competition_min"

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def ids(self) -> list[str]:
        return [e[0] for e in self.entries]

    def rank_of(self) -> dict[str, float]:
        return {e[0]: e[2] for e in self.entries}


def ranks_from_scores(scores: Mapping[str, float], policy: str = "competition_min") -> RankedList:
    if policy not in TIE_POLICIES:
        raise InputError(f"unknown tie policy {policy!r}; expected one of {TIE_POLICIES}")
    for entity, s in scores.items():
        if not math.isfinite(s):
            raise InputError(f"score for {entity!r} is not finite: {s}")
    ordered = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    entries = []
    i = 0
    while i < len(ordered):
        j = i
        while j + 1 < len(ordered) and ordered[j + 1][1] == ordered[i][1]:
            j += 1
        # positions i+1 .. j+1 share one score
        rank = float(i + 1) if policy == "competition_min" else (i + 1 + j + 1) / 2
        for k in range(i, j + 1):
            entries.append((ordered[k][0], ordered[k][1], rank))
        i = j + 1
    return RankedList(tuple(entries), policy)


def _tie_sums(values: np.ndarray) -> tuple[int, int, int]:
    """Per tie group of size t: sums of t(t-1)/2, t(t-1)(t-2), t(t-1)(2t+5)."""
    _, counts = np.unique(values, return_counts=True)
    t = [int(c) for c in counts if c > 1]
    return (
        sum(c * (c - 1) // 2 for c in t),
        sum(c * (c - 1) * (c - 2) for c in t),
        sum(c * (c - 1) * (2 * c + 5) for c in t),
    )


def _count_inversions(seq: list[float]) -> int:
    """Pairs i < j with seq[i] > seq[j] (equal values are not inversions)."""
    n = len(seq)
    inv = 0
    width = 1
    buf = list(seq)
    while width < n:
        out = []
        for lo in range(0, n, 2 * width):
            mid, hi = min(lo + width, n), min(lo + 2 * width, n)
            i, j = lo, mid
            while i < mid and j < hi:
                if buf[i] <= buf[j]:
                    out.append(buf[i])
                    i += 1
                else:
                    out.append(buf[j])
                    inv += mid - i
                    j += 1
            out.extend(buf[i:mid])
            out.extend(buf[j:hi])
        buf = out
        width *= 2
    return inv


def tau_b_from_counts(s: int, n0: int, n1: int, n2: int) -> float:
    """tau-b from S = concordant - discordant and the pair/tie counts."""
    return s / math.sqrt((n0 - n1) * (n0 - n2))


def kendall_tau(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Tie-corrected Kendall tau-b with a two-sided normal-approximation p-value.

    Runs in O(n log n) (Knight's method). The variance of S includes the
    standard tie corrections.
    """
    if len(x) != len(y):
        raise InputError(f"paired sequences differ in length ({len(x)} vs {len(y)})")
    n = len(x)
    if n < 2:
        raise AnalysisError("Kendall tau needs at least 2 paired values")
    xa = np.asarray(x, dtype=float)
    ya = np.asarray(y, dtype=float)
    if not (np.isfinite(xa).all() and np.isfinite(ya).all()):
        raise InputError("Kendall tau inputs must be finite")
    n0 = n * (n - 1) // 2
    xtie, x2, x3 = _tie_sums(xa)
    ytie, y2, y3 = _tie_sums(ya)
    if n0 == xtie or n0 == ytie:
        raise AnalysisError("degenerate variance: all values tied in one variable")
    order = np.lexsort((ya, xa))
    xs, ys = xa[order], ya[order]
    joint = 0
    start = 0
    for i in range(1, n + 1):
        if i == n or xs[i] != xs[start] or ys[i] != ys[start]:
            t = i - start
            joint += t * (t - 1) // 2
            start = i
    swaps = _count_inversions(ys.tolist())
    s = n0 - xtie - ytie + joint - 2 * swaps
    tau = tau_b_from_counts(s, n0, xtie, ytie)

    m = n * (n - 1)
    var = (m * (2 * n + 5) - x3 - y3) / 18 + (2 * xtie * ytie) / m
    if n > 2:
        var += x2 * y2 / (9 * m * (n - 2))
    p_value = math.erfc(abs(s) / math.sqrt(var) / math.sqrt(2)) if var > 0 else 1.0
    return tau, min(1.0, p_value)


def _ids(lst: RankedList | Sequence[str]) -> list[str]:
    return lst.ids if isinstance(lst, RankedList) else list(lst)


def _one_minus(p: float) -> float:
    # evaluated on the decimal value of p, so p=0.9 gives exactly 0.1
    return float(1 - Fraction(repr(p)))


def rbd(
    list_a: RankedList | Sequence[str],
    list_b: RankedList | Sequence[str],
    p: float = DEFAULT_RBD_P,
    k: int | None = None,
) -> float:
    """Rank-Biased Distance at depth ``k`` with persistence ``p``.

    Sums ``|S_d sym-diff T_d| / (2d) * p**(d-1)`` over prefixes d = 1..k
    and scales by ``1 - p``; the result lies in ``[0, 1 - p**k]``.
    """
    a, b = _ids(list_a), _ids(list_b)
    if set(a) != set(b) or len(a) != len(b):
        raise InputError("RBD needs two lists over the same entities")
    n = len(a)
    if not 0.0 < p < 1.0:
        raise InputError(f"persistence p must lie in (0, 1), got {p}")
    k = n if k is None else k
    if not 1 <= k <= n:
        raise InputError(f"depth k must lie in [1, {n}], got {k}")
    seen_a: set[str] = set()
    seen_b: set[str] = set()
    overlap = 0
    terms = []
    weight = 1.0
    for d in range(1, k + 1):
        ia, ib = a[d - 1], b[d - 1]
        if ia == ib:
            overlap += 1
        else:
            overlap += (ia in seen_b) + (ib in seen_a)
        seen_a.add(ia)
        seen_b.add(ib)
        sym_diff = 2 * (d - overlap)
        if sym_diff:
            terms.append(sym_diff / (2 * d) * weight)
        weight *= p
    return _one_minus(p) * math.fsum(terms)


@dataclass(frozen=True)
class ComparisonReport:
    metric_a: str
    metric_b: str
    n: int
    tau: float
    p_value: float
    rbd: float
    rbd_p: float
    depth: int

    HEADER = ("metric_a", "metric_b", "n", "tau", "p_value", "rbd", "rbd_p", "depth")

    def row(self) -> tuple:
        return (
            self.metric_a,
            self.metric_b,
            self.n,
            format_real(self.tau),
            format_real(self.p_value),
            format_real(self.rbd),
            format_real(self.rbd_p),
            self.depth,
        )


def compare_scores(
    scores_a: Mapping[str, float],
    scores_b: Mapping[str, float],
    metric_a: str = "a",
    metric_b: str = "b",
    rbd_p: float = DEFAULT_RBD_P,
    depth: int | None = None,
) -> ComparisonReport:
    """Compare two score maps over the entities they share."""
    shared = sorted(set(scores_a) & set(scores_b))
    if len(shared) < 2:
        raise AnalysisError("no paired entities")
    xa = [scores_a[e] for e in shared]
    xb = [scores_b[e] for e in shared]
    tau, p_value = kendall_tau(xa, xb)
    la = ranks_from_scores(dict(zip(shared, xa)))
    lb = ranks_from_scores(dict(zip(shared, xb)))
    k = len(shared) if depth is None else min(depth, len(shared))
    return ComparisonReport(metric_a, metric_b, len(shared), tau, p_value, rbd(la, lb, rbd_p, k), rbd_p, k)


def write_comparisons(reports: Iterable[ComparisonReport], path: str | Path) -> None:
    write_tsv(path, ComparisonReport.HEADER, (r.row() for r in reports))


def write_ranks(ranked: RankedList, path: str | Path, id_column: str = "author_id") -> None:
    write_tsv(
        path,
        (id_column, "score", "rank"),
        ((e, format_real(s), format_real(r)) for e, s, r in ranked.entries),
    )
