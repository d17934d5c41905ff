"""Verification of avoidance, saturation, completeness, Sidon and cap properties.

Every verifier returns a :class:`VerificationReport`; on failure the report
carries a witness that can be re-checked by direct evaluation. Witnesses are
canonical (lexicographically smallest), so reports do not depend on chunking
or thread count.

Pair scans run over ordered pairs of distinct members in row chunks, and the
covered set is a boolean mask over the whole group.
"""

from __future__ import annotations

import enum
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Union

import numpy as np

from .field import VectorSpace, as_vector_space, line_family
from .groups import THREE_AP, Group, GroupError, PointSet, WeightFamily, WeightPair

_CHUNK = 1 << 21


class PredicateError(ValueError):
    """Predicate kind incompatible with its weights or ambient space."""


class Kind(enum.Enum):
    THREE_AP_FREE = "THREE_AP_FREE"
    W_AVOIDING = "W_AVOIDING"
    THREE_AP_SATURATING = "THREE_AP_SATURATING"
    W_SATURATING = "W_SATURATING"
    COMPLETE_THREE_AP = "COMPLETE_THREE_AP"
    COMPLETE_W = "COMPLETE_W"
    SIDON = "SIDON"
    CAP = "CAP"
    LINE_SATURATING = "LINE_SATURATING"

    @property
    def needs_weights(self) -> bool:
        return self in (Kind.W_AVOIDING, Kind.W_SATURATING, Kind.COMPLETE_W)


@dataclass(frozen=True)
class Predicate:
    kind: Kind
    weights: WeightFamily | None = None

    def __post_init__(self):
        if self.kind.needs_weights and self.weights is None:
            raise PredicateError(f"{self.kind.value} requires a weight family")
        if self.kind in (Kind.THREE_AP_FREE, Kind.THREE_AP_SATURATING, Kind.COMPLETE_THREE_AP):
            object.__setattr__(self, "weights", THREE_AP)

    def __str__(self):
        if self.kind.needs_weights:
            return f"{self.kind.value}{self.weights}"
        return self.kind.value

    def family(self, space: Group) -> WeightFamily:
        if self.kind in (Kind.CAP, Kind.LINE_SATURATING):
            return line_family(as_vector_space(space).field)
        return self.weights


def three_ap_free() -> Predicate:
    return Predicate(Kind.THREE_AP_FREE)


def three_ap_saturating() -> Predicate:
    return Predicate(Kind.THREE_AP_SATURATING)


def complete_three_ap() -> Predicate:
    return Predicate(Kind.COMPLETE_THREE_AP)


def avoiding(W: WeightFamily) -> Predicate:
    return Predicate(Kind.THREE_AP_FREE) if W.three_ap else Predicate(Kind.W_AVOIDING, W)


def saturating(W: WeightFamily) -> Predicate:
    return Predicate(Kind.THREE_AP_SATURATING) if W.three_ap else Predicate(Kind.W_SATURATING, W)


def complete(W: WeightFamily) -> Predicate:
    return Predicate(Kind.COMPLETE_THREE_AP) if W.three_ap else Predicate(Kind.COMPLETE_W, W)


# -- witnesses ----------------------------------------------------------------


@dataclass(frozen=True)
class AvoidanceWitness:
    """``a = lam1 * left + lam2 * right`` with a, left, right pairwise distinct."""

    a: int
    left: int
    right: int
    weight: WeightPair

    def recheck(self, space: Group) -> bool:
        distinct = len({self.a, self.left, self.right}) == 3
        return distinct and space.combine(self.weight, self.left, self.right) == self.a

    def describe(self, space: Group) -> str:
        return f"{self.a} = {self.weight.lam1}*{self.left} + {self.weight.lam2}*{self.right}".replace("+ -", "- ")


@dataclass(frozen=True)
class ThreeAPWitness:
    """``2 * mid = y + z`` with the three elements pairwise distinct."""

    mid: int
    y: int
    z: int

    def recheck(self, space: Group) -> bool:
        distinct = len({self.mid, self.y, self.z}) == 3
        return distinct and space.scale(2, self.mid) == space.add(self.y, self.z)

    def describe(self, space: Group) -> str:
        return f"2·{self.mid}={self.y}+{self.z}"


@dataclass(frozen=True)
class SaturationWitness:
    """An element outside the set that no pair of members produces."""

    x: int

    def recheck(self, space: Group, S: PointSet, pred: Predicate) -> bool:
        if self.x in S:
            return False
        return not _covers_by_scan(space, S, pred.family(space), self.x)

    def describe(self, space: Group) -> str:
        return f"{self.x} is not covered"


@dataclass(frozen=True)
class SidonWitness:
    """``a + b = c + d`` with {a, b} != {c, d}."""

    a: int
    b: int
    c: int
    d: int

    def recheck(self, space: Group) -> bool:
        return {self.a, self.b} != {self.c, self.d} and space.add(self.a, self.b) == space.add(self.c, self.d)

    def describe(self, space: Group) -> str:
        return f"{self.a}+{self.b}={self.c}+{self.d}"


Witness = Union[AvoidanceWitness, ThreeAPWitness, SaturationWitness, SidonWitness]


@dataclass
class VerificationReport:
    predicate: Predicate
    holds: bool
    witness: Witness | None = None
    elapsed: float = 0.0
    detail: dict = field(default_factory=dict)

    def __bool__(self):
        return self.holds

    def describe(self, space: Group) -> str:
        status = "holds" if self.holds else "fails"
        if self.witness is None:
            return f"{self.predicate}: {status}"
        return f"{self.predicate}: {status} ({self.witness.describe(space)})"


# -- pair enumeration ---------------------------------------------------------


def _threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("APSAT_THREADS", "1") or 1)
    return max(1, threads)


def _row_chunks(n: int) -> Iterator[tuple[int, int]]:
    rows = max(1, _CHUNK // max(n, 1))
    for start in range(0, n, rows):
        yield start, min(n, start + rows)


def _pairs(idx: np.ndarray, lo: int, hi: int) -> tuple[np.ndarray, np.ndarray]:
    """Ordered pairs (a, b), a != b, with a taken from rows [lo, hi)."""
    a = np.repeat(idx[lo:hi], idx.size)
    b = np.tile(idx, hi - lo)
    keep = a != b
    return a[keep], b[keep]


def _map_chunks(fn, n: int, threads: int | None):
    chunks = list(_row_chunks(n))
    t = _threads(threads)
    if t == 1 or len(chunks) == 1:
        return [fn(lo, hi) for lo, hi in chunks]
    with ThreadPoolExecutor(max_workers=t) as pool:
        return list(pool.map(lambda c: fn(*c), chunks))


def covered_mask(space: Group, S: PointSet, W: WeightFamily, threads: int | None = None) -> np.ndarray:
    """Elements reachable from a pair of distinct members through ``W``.

    For the 3-AP family both clauses count: x = 2a - b, and 2x = a + b.
    Values landing inside S are kept; callers only look outside S.
    """
    n = space.order
    idx = S.indices
    W.check(space)

    def chunk(lo, hi):
        a, b = _pairs(idx, lo, hi)
        hit = np.zeros(n, dtype=bool)
        sums = np.zeros(n, dtype=bool) if W.three_ap else None
        if a.size:
            for w in W:
                hit[space.combine(w, a, b)] = True
            if W.three_ap:
                sums[space.add(a, b)] = True
        return hit, sums

    parts = _map_chunks(chunk, idx.size, threads)
    covered = np.zeros(n, dtype=bool)
    sums = np.zeros(n, dtype=bool)
    for hit, s in parts:
        covered |= hit
        if s is not None:
            sums |= s
    if W.three_ap:
        # x with 2x in the pair-sum set; in even order this can be several x per sum
        covered |= sums[space.scale(2, space.elements())]
    return covered


def _covers_by_scan(space: Group, S: PointSet, W: WeightFamily, x: int) -> bool:
    """Brute-force: does some pair of distinct members produce ``x``?"""
    members = list(S)
    for a in members:
        for b in members:
            if a == b:
                continue
            for w in W:
                if space.combine(w, a, b) == x:
                    return True
            if W.three_ap and space.scale(2, x) == space.add(a, b):
                return True
    return False


# -- verifiers ----------------------------------------------------------------


def _check_space(space: Group, S: PointSet) -> None:
    if S.group != space:
        raise GroupError(f"point set lives in {S.group}, not {space}")


def verify_avoiding(space: Group, S: PointSet, W: WeightFamily, threads: int | None = None) -> VerificationReport:
    """No w in W and pairwise distinct a, a', a'' in S with a = w(a', a'')."""
    t0 = time.perf_counter()
    _check_space(space, S)
    W.check(space)
    pred = avoiding(W)
    idx = S.indices
    members = S.members

    if W.three_ap:

        def chunk(lo, hi):
            x, y = _pairs(idx, lo, hi)
            z = space.sub(space.scale(2, x), y)
            bad = members[z] & (z != x) & (z != y)
            if not bad.any():
                return None
            order = np.lexsort((y[bad], x[bad]))[0]
            return ThreeAPWitness(int(x[bad][order]), int(y[bad][order]), int(z[bad][order]))

        found = [w for w in _map_chunks(chunk, idx.size, threads) if w is not None]
        witness = min(found, key=lambda w: (w.mid, w.y)) if found else None
    else:

        def chunk(lo, hi):
            a1, a2 = _pairs(idx, lo, hi)
            best = None
            for wi, w in enumerate(W):
                v = space.combine(w, a1, a2)
                bad = members[v] & (v != a1) & (v != a2)
                if bad.any():
                    v_, l_, r_ = v[bad], a1[bad], a2[bad]
                    j = np.lexsort((r_, l_, v_))[0]
                    cand = (int(v_[j]), int(l_[j]), int(r_[j]), wi)
                    best = cand if best is None or cand < best else best
            return best

        found = [c for c in _map_chunks(chunk, idx.size, threads) if c is not None]
        if found:
            a, l, r, wi = min(found)
            witness = AvoidanceWitness(a, l, r, W.pairs[wi])
        else:
            witness = None
    return VerificationReport(pred, witness is None, witness, time.perf_counter() - t0)


def verify_saturating(space: Group, S: PointSet, pred: Predicate | WeightFamily, threads: int | None = None) -> VerificationReport:
    """Every element outside S is produced by some pair of distinct members."""
    t0 = time.perf_counter()
    _check_space(space, S)
    if isinstance(pred, WeightFamily):
        pred = saturating(pred)
    W = pred.family(space)
    covered = covered_mask(space, S, W, threads)
    uncovered = np.flatnonzero(~S.members & ~covered)
    witness = SaturationWitness(int(uncovered[0])) if uncovered.size else None
    report = VerificationReport(pred, witness is None, witness, time.perf_counter() - t0)
    report.detail["uncovered"] = int(uncovered.size)
    return report


def verify_complete(space: Group, S: PointSet, pred: Predicate | WeightFamily, threads: int | None = None) -> VerificationReport:
    """Avoiding and saturating; the avoidance check runs first."""
    t0 = time.perf_counter()
    if isinstance(pred, WeightFamily):
        pred = complete(pred)
    W = pred.family(space)
    first = verify_avoiding(space, S, W, threads)
    if not first.holds:
        return VerificationReport(pred, False, first.witness, time.perf_counter() - t0)
    second = verify_saturating(space, S, saturating(W), threads)
    return VerificationReport(pred, second.holds, second.witness, time.perf_counter() - t0, second.detail)


def verify_sidon(space: Group, S: PointSet) -> VerificationReport:
    """All sums a + b with a <= b (a = b allowed) are distinct."""
    t0 = time.perf_counter()
    _check_space(space, S)
    idx = S.indices
    i, j = np.triu_indices(idx.size)
    a, b = idx[i], idx[j]
    sums = space.add(a, b) if a.size else np.zeros(0, dtype=np.int64)
    order = np.lexsort((b, a, sums))
    s_sorted = sums[order]
    dup = np.flatnonzero(s_sorted[1:] == s_sorted[:-1])
    witness = None
    if dup.size:
        # first two pairs of each colliding sum; keep the lexicographically smallest
        starts = set(np.flatnonzero(np.r_[True, s_sorted[1:] != s_sorted[:-1]]).tolist())
        best = None
        for k in dup.tolist():
            if k not in starts:
                continue
            p0, p1 = order[k], order[k + 1]
            cand = (int(a[p0]), int(b[p0]), int(a[p1]), int(b[p1]))
            best = cand if best is None or cand < best else best
        witness = SidonWitness(*best)
    return VerificationReport(Predicate(Kind.SIDON), witness is None, witness, time.perf_counter() - t0)


def verify_sidon_cap(space: Group, S: PointSet, kind: Kind, threads: int | None = None) -> VerificationReport:
    """SIDON, CAP (no three collinear points) or LINE_SATURATING."""
    if kind is Kind.SIDON:
        return verify_sidon(space, S)
    if kind not in (Kind.CAP, Kind.LINE_SATURATING):
        raise PredicateError(f"{kind} is not a Sidon/cap predicate")
    try:
        vs = as_vector_space(space)
    except GroupError as exc:
        raise PredicateError(f"{kind.value} needs a vector-space ambient: {exc}") from None
    W = line_family(vs.field)
    S = PointSet(vs, S.indices) if vs is not space else S
    if kind is Kind.CAP:
        r = verify_avoiding(vs, S, W, threads)
    else:
        r = verify_saturating(vs, S, Predicate(Kind.LINE_SATURATING), threads)
    r.predicate = Predicate(kind)
    return r


def verify(space: Group, S: PointSet, pred: Predicate, threads: int | None = None) -> VerificationReport:
    """Dispatch on the predicate kind."""
    k = pred.kind
    if k in (Kind.THREE_AP_FREE, Kind.W_AVOIDING):
        r = verify_avoiding(space, S, pred.weights, threads)
    elif k in (Kind.THREE_AP_SATURATING, Kind.W_SATURATING):
        return verify_saturating(space, S, pred, threads)
    elif k in (Kind.COMPLETE_THREE_AP, Kind.COMPLETE_W):
        return verify_complete(space, S, pred, threads)
    else:
        return verify_sidon_cap(space, S, k, threads)
    r.predicate = pred
    return r


def recheck_witness(space: Group, S: PointSet, report: VerificationReport) -> bool:
    """Independently confirm that a failing report's witness is genuine."""
    w = report.witness
    if w is None:
        return report.holds
    if isinstance(w, SaturationWitness):
        pred = report.predicate
        if pred.kind in (Kind.COMPLETE_THREE_AP, Kind.COMPLETE_W):
            pred = saturating(pred.weights)
        return w.recheck(space, S, pred)
    members = set(S)
    pts = {getattr(w, f) for f in w.__dataclass_fields__ if f != "weight"}
    return pts <= members and w.recheck(space)
