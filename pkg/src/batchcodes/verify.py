"""Retrievability parameter k of an incidence matrix.

A matrix serves every batch of k items iff every set of r <= k columns
touches at least r rows.  ``max_k_dual`` finds the largest such k by
enumerating row sets T: if more than |T| columns live inside T, any |T|+1 of
them form a deficient set, and every minimal deficient set arises this way.
``max_k_exhaustive`` enumerates column sets directly and serves as its oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .codes import CodeParams, IncidenceMatrix, bits_of, construct_ctd, mask_of
from .errors import TooLarge
from .matching import DeficiencyWitness, hall_violator, max_matching

MAX_DUAL_ROWS = 26
MAX_EXHAUSTIVE_COLUMNS = 22
_CHUNK = 1 << 20

EXACT = "exact"
EXHAUSTIVE = "exhaustive"
SAMPLED = "sampled"


@dataclass
class Verdict:
    """Outcome of a k computation.

    ``k_max`` is set when the value is pinned down; otherwise
    ``k_lower``/``k_upper`` bracket it.  In sampled mode ``k_lower`` stays
    None unless proven, and ``refuted`` tells whether a deficient set of size
    at most ``checked_k`` turned up.
    """

    mode: str
    k_max: int | None
    k_lower: int | None
    k_upper: int | None
    witness: DeficiencyWitness | None = None
    checked_k: int | None = None
    refuted: bool = False
    samples_checked: int = 0
    seed: int | None = None

    @property
    def proven(self) -> bool:
        return self.k_max is not None

    def as_dict(self) -> dict:
        return {
            "mode": self.mode,
            "k_max": self.k_max,
            "k_lower": self.k_lower,
            "k_upper": self.k_upper,
            "witness": self.witness.as_dict() if self.witness else None,
            "checked_k": self.checked_k,
            "refuted": self.refuted,
            "samples_checked": self.samples_checked,
            "seed": self.seed,
        }


def _exact(mode: str, mat: IncidenceMatrix, witness: DeficiencyWitness | None) -> Verdict:
    k = witness.size - 1 if witness else mat.n
    return Verdict(mode, k, k, k, witness)


def _witness_inside(mat: IncidenceMatrix, rows_mask: int) -> DeficiencyWitness:
    inside = [j for j, c in enumerate(mat.columns) if c & ~rows_mask == 0]
    need = rows_mask.bit_count() + 1
    return DeficiencyWitness.from_columns(mat, inside[:need])


def _scan_all_row_sets(mat: IncidenceMatrix) -> int | None:
    """Smallest row mask T (by size, then value) with > |T| columns inside."""
    m = mat.m
    dtype = np.uint32 if m <= 32 else np.uint64
    cols = np.array(mat.columns, dtype=dtype)
    best_size, best_mask = None, None
    total = 1 << m
    for start in range(0, total, _CHUNK):
        masks = np.arange(start, min(total, start + _CHUNK), dtype=dtype)
        counts = np.zeros(masks.shape, dtype=np.int32)
        for c in cols:
            counts += (masks & c) == c
        sizes = np.bitwise_count(masks).astype(np.int32)
        hit = np.flatnonzero(counts > sizes)
        if hit.size == 0:
            continue
        hs = sizes[hit]
        smallest = int(hs.min())
        if best_size is None or smallest < best_size:
            best_size = smallest
            best_mask = int(masks[hit[np.argmax(hs == smallest)]])
    return best_mask


def _scan_small_row_sets(mat: IncidenceMatrix, cap: int) -> int | None:
    for size in range(0, min(cap, mat.m) + 1):
        for rows in combinations(range(mat.m), size):
            t = mask_of(rows)
            inside = sum(1 for c in mat.columns if c & ~t == 0)
            if inside > size:
                return t
    return None


def max_k_dual(mat: IncidenceMatrix, cap: int | None = None) -> Verdict:
    """Exact k by enumerating row subsets (all of them, or those of size <= cap).

    Returns a minimum-size witness when k < n.  With a cap below m and no
    deficiency found, the verdict only brackets k from below.
    """
    if cap is None or cap >= mat.m:
        if mat.m > MAX_DUAL_ROWS:
            raise TooLarge(
                f"m={mat.m} rows exceeds the exact guard m <= {MAX_DUAL_ROWS}; "
                "pass a cap or use sampled mode"
            )
        t = _scan_all_row_sets(mat)
        return _exact(EXACT, mat, None if t is None else _witness_inside(mat, t))

    t = _scan_small_row_sets(mat, cap)
    if t is not None:
        return _exact(EXACT, mat, _witness_inside(mat, t))
    lower = min(cap + 1, mat.n)
    if lower == mat.n:
        return _exact(EXACT, mat, None)
    return Verdict(EXACT, None, lower, mat.n)


def max_k_exhaustive(mat: IncidenceMatrix) -> Verdict:
    """Exact k by checking the union of every column subset."""
    n, m = mat.n, mat.m
    if n > MAX_EXHAUSTIVE_COLUMNS or m > 64:
        raise TooLarge(
            f"exhaustive mode needs n <= {MAX_EXHAUSTIVE_COLUMNS} and m <= 64 (got n={n}, m={m})"
        )
    dtype = np.uint32 if m <= 32 else np.uint64
    unions = np.zeros(1 << n, dtype=dtype)
    for j, c in enumerate(mat.columns):
        half = 1 << j
        unions[half : 2 * half] = unions[:half] | dtype(c)
    sizes = np.bitwise_count(np.arange(1 << n, dtype=np.uint32))
    deficient = np.flatnonzero(np.bitwise_count(unions) < sizes)
    if deficient.size == 0:
        return _exact(EXHAUSTIVE, mat, None)
    smallest = sizes[deficient].min()
    candidates = deficient[sizes[deficient] == smallest]
    first = min(tuple(bits_of(int(s))) for s in candidates)
    return _exact(EXHAUSTIVE, mat, DeficiencyWitness.from_columns(mat, first))


def td_witness(q: int) -> DeficiencyWitness:
    """Deficient set of construct_ctd(q): all blocks avoiding row 0.

    Each parallel class contributes its q-1 blocks missing the point, giving
    q(q-1) items confined to the q(q-1)-1 other servers.
    """
    mat = construct_ctd(q)
    cols = [j for cls in mat.classes for j in cls if not mat.columns[j] & 1]
    return DeficiencyWitness.from_columns(mat, cols)


# -- sampling ----------------------------------------------------------------


def _structured_row_sets(mat: IncidenceMatrix):
    full = (1 << mat.m) - 1
    for i in range(mat.m):
        yield full & ~(1 << i)
    for cls in mat.classes:
        for j in cls:
            yield full & ~mat.columns[j]
    seen = set()
    for c in mat.columns:
        t = full & ~c
        if t not in seen:
            seen.add(t)
            yield t


def _greedy_sample(mat: IncidenceMatrix, size: int, rng: np.random.Generator, eps: float):
    """Grow a column set that adds few new rows per step; yields each prefix."""
    n = mat.n
    cols = mat.columns
    start = int(rng.integers(n))
    chosen = [start]
    used = {start}
    union = cols[start]
    yield chosen, union
    while len(chosen) < size:
        if rng.random() < eps:
            j = int(rng.integers(n))
            if j in used:
                continue
        else:
            best, picks = None, []
            for j in range(n):
                if j in used:
                    continue
                gain = (cols[j] & ~union).bit_count()
                if best is None or gain < best:
                    best, picks = gain, [j]
                elif gain == best:
                    picks.append(j)
            j = picks[int(rng.integers(len(picks)))]
        chosen.append(j)
        used.add(j)
        union |= cols[j]
        yield chosen, union


def sampled_check(
    mat: IncidenceMatrix,
    k: int,
    samples: int,
    seed: int = 0,
    inject=(),
    eps: float = 0.2,
) -> Verdict:
    """Search for a deficient set of at most ``k`` columns.

    Candidates in order: ``inject`` column sets, structured row sets (all
    rows but one, complements of single columns), then ``samples`` greedy
    low-coverage column sets of size near k, each prefix checked and the full
    set pushed through matching.  Finding nothing is evidence, not proof; the
    smallest deficient set seen still proves an upper bound on k.
    """
    if not 1 <= k <= mat.n:
        raise ValueError(f"k={k} must lie in [1, n={mat.n}]")
    rng = np.random.default_rng(seed)
    best: DeficiencyWitness | None = None
    checked = 0

    def consider(w: DeficiencyWitness | None) -> bool:
        nonlocal best
        if w is None:
            return False
        if best is None or w.size < best.size:
            best = w
        return w.size <= k

    def verdict(refuted: bool) -> Verdict:
        upper = best.size - 1 if best else mat.n
        return Verdict(SAMPLED, None, None, upper, best, k, refuted, checked, seed)

    for cols in inject:
        checked += 1
        cols = sorted(set(cols))
        if mat.union(cols).bit_count() < len(cols):
            if consider(DeficiencyWitness.from_columns(mat, cols)):
                return verdict(True)
        if consider(hall_violator(mat, max_matching(mat, cols))):
            return verdict(True)

    for t in _structured_row_sets(mat):
        checked += 1
        inside = sum(1 for c in mat.columns if c & ~t == 0)
        if inside > t.bit_count() and consider(_witness_inside(mat, t)):
            return verdict(True)

    for _ in range(samples):
        checked += 1
        size = max(1, k - int(rng.geometric(0.5)) + 1)
        chosen: list[int] = []
        for chosen, union in _greedy_sample(mat, size, rng, eps):
            if union.bit_count() < len(chosen):
                if consider(DeficiencyWitness.from_columns(mat, chosen)):
                    return verdict(True)
                break
        else:
            if consider(hall_violator(mat, max_matching(mat, chosen))):
                return verdict(True)
    return verdict(False)


# -- verification report ------------------------------------------------------

PROVEN = "proven"
REFUTED = "refuted"
EVIDENCE = "evidence"


@dataclass
class FieldCheck:
    claimed: int | None
    actual: int | None
    status: str

    def as_dict(self) -> dict:
        return {"claimed": self.claimed, "actual": self.actual, "status": self.status}


@dataclass
class VerificationReport:
    checks: dict[str, FieldCheck] = field(default_factory=dict)
    verdict: Verdict | None = None

    @property
    def all_proven(self) -> bool:
        return all(c.status == PROVEN for c in self.checks.values())

    @property
    def refuted(self) -> bool:
        return any(c.status == REFUTED for c in self.checks.values())

    def as_dict(self) -> dict:
        return {
            "checks": {name: c.as_dict() for name, c in self.checks.items()},
            "all_proven": self.all_proven,
            "verdict": self.verdict.as_dict() if self.verdict else None,
        }


def verify_cbc(
    mat: IncidenceMatrix, claimed: CodeParams, samples: int = 10_000, seed: int = 0
) -> VerificationReport:
    """Check claimed (n, N, k, m, c) against the matrix.

    k is decided exactly when m <= 26; otherwise a sampled search at the
    claimed k gives evidence, and a deficient set of size k+1 proves k_max <= k.
    """
    report = VerificationReport()
    for name, actual in (("n", mat.n), ("N", mat.N), ("m", mat.m), ("c", mat.uniform_weight)):
        want = getattr(claimed, name)
        report.checks[name] = FieldCheck(want, actual, PROVEN if want == actual else REFUTED)

    if claimed.k is None:
        return report
    if mat.m <= MAX_DUAL_ROWS:
        v = max_k_dual(mat)
        report.verdict = v
        status = PROVEN if v.k_max == claimed.k else REFUTED
        report.checks["k"] = FieldCheck(claimed.k, v.k_max, status)
        return report

    v = sampled_check(mat, claimed.k, samples, seed)
    report.verdict = v
    if v.refuted:
        status = REFUTED
    else:
        status = EVIDENCE
    report.checks["k"] = FieldCheck(claimed.k, v.k_upper if v.refuted else None, status)
    return report
