"""Closed-form lower bounds and exhaustive minimum-size search.

The search is layered by size: for s = s0, s0 + 1, ... it runs a depth-first
scan over index combinations in increasing order, so the first hit at the
first feasible size is the lexicographically smallest minimum set.

Sets are Python-int bitsets. ``cov[a][b]`` is the set of elements produced by
the unordered pair {a, b} (both orders, every weight, and for 3-APs the
midpoint clause), with a and b themselves removed.
"""

from __future__ import annotations

import enum
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .groups import TWO_MINUS_ONE, Group, PointSet, WeightFamily
from .predicates import (
    Kind,
    Predicate,
    complete,
    complete_three_ap,
    saturating,
    three_ap_saturating,
    verify,
)

DEFAULT_BUDGET = 10**9


class BoundKind(enum.Enum):
    SAT_3AP = "SAT_3AP"
    SAT_W = "SAT_W"
    SAT_DIAG = "SAT_DIAG"


@dataclass(frozen=True)
class LowerBound:
    kind: BoundKind
    n: int
    value: float
    ceiling: int


def lower_bound(kind: BoundKind, n: int) -> LowerBound:
    """Counting bound on the size of a saturating set in a group of order n.

    SAT_3AP: h + 3 C(h, 2) >= n (odd order). SAT_W: h^2 >= n (one pair, both
    orders). SAT_DIAG: h + C(h, 2) >= n (symmetric weights). The ceiling is
    the least integer h meeting the inequality, computed exactly.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    kind = BoundKind(kind)
    if kind is BoundKind.SAT_3AP:
        value = math.sqrt(2 * n / 3 + 1 / 36) + 1 / 6
        ok = lambda h: 3 * h * h - h >= 2 * n  # noqa: E731
    elif kind is BoundKind.SAT_W:
        value = math.sqrt(n)
        ok = lambda h: h * h >= n  # noqa: E731
    else:
        value = math.sqrt(2 * n + 0.25) - 0.5
        ok = lambda h: h * (h + 1) >= 2 * n  # noqa: E731
    h = max(0, math.floor(value) - 1)
    while not ok(h):
        h += 1
    return LowerBound(kind, n, value, h)


@dataclass
class SearchResult:
    predicate: Predicate
    group: Group
    minimum: int | None
    witness: PointSet | None
    nodes: int
    exhaustive: bool
    searched_up_to: int
    none_exists: bool = False
    elapsed: float = 0.0
    start_size: int = 0

    @property
    def found(self) -> bool:
        return self.minimum is not None


class BudgetExceeded(RuntimeError):
    pass


def _budget(budget: int | None) -> int:
    if budget is None:
        budget = int(os.environ.get("APSAT_BUDGET", DEFAULT_BUDGET) or DEFAULT_BUDGET)
    return budget


def _threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("APSAT_THREADS", "1") or 1)
    return max(1, threads)


def coverage_table(G: Group, W: WeightFamily) -> list[list[int]]:
    n = G.order
    idx = np.arange(n, dtype=np.int64)
    A = np.repeat(idx, n)
    B = np.tile(idx, n)
    vals = [np.asarray(G.combine(w, A, B)).reshape(n, n) for w in W]
    half = [0] * n
    if W.three_ap:
        for x, c in enumerate(np.asarray(G.scale(2, idx)).tolist()):
            half[c] |= 1 << x
        sums = np.asarray(G.add(A, B)).reshape(n, n).tolist()
    vals = [v.tolist() for v in vals]
    cov = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            m = 0
            for v in vals:
                m |= (1 << v[a][b]) | (1 << v[b][a])
            if W.three_ap:
                m |= half[sums[a][b]]
            m &= ~((1 << a) | (1 << b))
            cov[a][b] = cov[b][a] = m
    return cov


class _Engine:
    def __init__(self, G: Group, W: WeightFamily, avoid: bool, saturate: bool, budget: int):
        self.n = G.order
        self.full = (1 << self.n) - 1
        self.cov = coverage_table(G, W)
        self.cmax = max((c.bit_count() for row in self.cov for c in row), default=0)
        self.avoid = avoid
        self.saturate = saturate
        self.budget = budget
        self.nodes = 0

    def start_size(self) -> int:
        if not self.saturate:
            return 1
        s = 0
        while s + s * (s - 1) // 2 * self.cmax < self.n:
            s += 1
        return s

    def search(self, s: int, first: int | None = None) -> list[int] | None:
        """Lex-first set of size s, optionally with a fixed first element."""
        if s == 0:
            self.nodes += 1
            return [] if (not self.saturate or self.n == 0) else None
        firsts = range(self.n) if first is None else [first]
        for e in firsts:
            if self.n - e < s:
                break
            found = self._dfs([e], 1 << e, 0, s)
            if found is not None:
                return found
        return None

    def _dfs(self, chosen: list[int], smask: int, covered: int, s: int) -> list[int] | None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded
        k = len(chosen)
        if k == s:
            if not self.saturate or (covered | smask) == self.full:
                return list(chosen)
            return None
        r = s - k
        if self.saturate:
            uncovered = self.n - (covered | smask).bit_count()
            if uncovered > r + (r * k + r * (r - 1) // 2) * self.cmax:
                return None
        cov = self.cov
        for e in range(chosen[-1] + 1, self.n - r + 1):
            add = 0
            for x in chosen:
                add |= cov[x][e]
            if self.avoid and ((covered >> e) & 1 or add & smask):
                continue
            chosen.append(e)
            found = self._dfs(chosen, smask | (1 << e), covered | add, s)
            chosen.pop()
            if found is not None:
                return found
        return None


def _resolve(G: Group, pred: Union[Predicate, WeightFamily], complete_mode: bool) -> Predicate:
    if isinstance(pred, WeightFamily):
        if pred.three_ap:
            return complete_three_ap() if complete_mode else three_ap_saturating()
        return complete(pred) if complete_mode else saturating(pred)
    wanted = {Kind.COMPLETE_THREE_AP, Kind.COMPLETE_W} if complete_mode else {Kind.THREE_AP_SATURATING, Kind.W_SATURATING, Kind.LINE_SATURATING}
    if pred.kind not in wanted:
        raise ValueError(f"predicate {pred.kind.value} does not fit this search")
    return pred


def _layer(engine: _Engine, s: int, threads: int) -> list[int] | None:
    if threads == 1 or s == 0:
        return engine.search(s)
    # split on the first element; lex-min over branches is the lowest hit
    def branch(e):
        sub = _Engine.__new__(_Engine)
        sub.__dict__.update(engine.__dict__)
        sub.nodes = 0
        try:
            return sub.search(s, e), sub.nodes
        except BudgetExceeded:
            return BudgetExceeded, sub.nodes

    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(branch, range(engine.n - s + 1)))
    engine.nodes += sum(nodes for _, nodes in results)
    if engine.nodes > engine.budget:
        raise BudgetExceeded
    for found, _ in results:
        if found is BudgetExceeded:
            raise BudgetExceeded
        if found is not None:
            return found
    return None


def _run(G: Group, pred: Predicate, complete_mode: bool, limit: int | None, budget: int | None, threads: int | None) -> SearchResult:
    t0 = time.perf_counter()
    W = pred.family(G)
    engine = _Engine(G, W, avoid=complete_mode, saturate=True, budget=_budget(budget))
    checker = _Engine(G, W, avoid=True, saturate=False, budget=engine.budget) if complete_mode else None
    threads = _threads(threads)
    s0 = engine.start_size()
    top = G.order if limit is None else min(limit, G.order)
    last = s0 - 1
    result = SearchResult(pred, G, None, None, 0, True, last, start_size=s0)
    try:
        for s in range(s0, top + 1):
            found = _layer(engine, s, threads)
            last = s
            if found is not None:
                witness = PointSet(G, found)
                report = verify(G, witness, pred)
                if not report.holds:  # pragma: no cover
                    raise AssertionError(f"search produced a set failing {pred}: {found}")
                result.minimum, result.witness = s, witness
                break
            if checker is not None and checker.search(s) is None:
                # avoiding sets are closed under subsets: nothing larger exists either
                result.none_exists = True
                break
        else:
            if limit is None or top == G.order:
                result.none_exists = True
            else:
                result.exhaustive = False
    except BudgetExceeded:
        result.exhaustive = False
    result.searched_up_to = last
    result.nodes = engine.nodes + (checker.nodes if checker else 0)
    result.elapsed = time.perf_counter() - t0
    return result


def min_saturating(G: Group, pred: Union[Predicate, WeightFamily], limit: int | None = None,
                   budget: int | None = None, threads: int | None = None) -> SearchResult:
    """Smallest saturating set with its lex-first witness."""
    return _run(G, _resolve(G, pred, False), False, limit, budget, threads)


def min_complete_avoiding(G: Group, pred: Union[Predicate, WeightFamily], limit: int | None = None,
                          budget: int | None = None, threads: int | None = None) -> SearchResult:
    """Smallest complete avoiding set, or ``none_exists`` when there is none."""
    return _run(G, _resolve(G, pred, True), True, limit, budget, threads)


# -- inequality chain ---------------------------------------------------------


def _value(r: SearchResult) -> float:
    return math.inf if r.minimum is None else r.minimum


@dataclass
class AuditResult:
    group: Group
    sat_3ap: SearchResult
    sat_w: SearchResult
    a_3ap: SearchResult
    a_w: SearchResult
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def exhaustive(self) -> bool:
        return all(r.exhaustive for r in (self.sat_3ap, self.sat_w, self.a_3ap, self.a_w))

    @property
    def holds(self) -> bool:
        return self.exhaustive and all(self.checks.values())

    def values(self) -> dict[str, int | None]:
        return {
            "sat(3-AP)": self.sat_3ap.minimum,
            "sat((2,-1))": self.sat_w.minimum,
            "a(3-AP)": self.a_3ap.minimum,
            "a((2,-1))": self.a_w.minimum,
        }


def audit_chain(G: Group, budget: int | None = None, threads: int | None = None) -> AuditResult:
    """The four minima and the four inequalities between them.

    A missing complete set counts as +infinity.
    """
    if G.order % 2 == 0:
        raise ValueError("the inequality chain is audited for odd-order groups")
    sat3 = min_saturating(G, three_ap_saturating(), budget=budget, threads=threads)
    satw = min_saturating(G, saturating(TWO_MINUS_ONE), budget=budget, threads=threads)
    a3 = min_complete_avoiding(G, complete_three_ap(), budget=budget, threads=threads)
    aw = min_complete_avoiding(G, complete(TWO_MINUS_ONE), budget=budget, threads=threads)
    v = [_value(r) for r in (sat3, satw, a3, aw)]
    checks = {
        "sat((2,-1)) >= sat(3-AP)": v[1] >= v[0],
        "a((2,-1)) >= a(3-AP)": v[3] >= v[2],
        "a((2,-1)) >= sat((2,-1))": v[3] >= v[1],
        "a(3-AP) >= sat(3-AP)": v[2] >= v[0],
    }
    return AuditResult(G, sat3, satw, a3, aw, checks)
