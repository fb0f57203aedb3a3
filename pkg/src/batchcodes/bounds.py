"""Storage and capacity bounds for combinatorial batch codes.

All arithmetic is exact: binomials are Python ints, ratios are Fractions,
and each floor is taken once on an exact rational.

Gap orientation: for the storage lower bound, ``gap = N - bound``; for the
uniform capacity upper bound, ``gap = bound - n``; for the constant-weight
range check, ``gap = bound - n``.  In every case a gap of 0 means the code
meets the bound and a positive gap measures the slack.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache

from .codes import IncidenceMatrix
from .errors import OutOfRange
from .field import prime_power

comb = math.comb


def capacity_ratio(m: int, k: int, s: int) -> Fraction:
    """(k-1) * C(m, s) / C(k-1, s) as an exact fraction."""
    return Fraction((k - 1) * comb(m, s), comb(k - 1, s))


def minimal_s(n: int, k: int, m: int) -> int:
    """Least s in [1, k-1] with n <= (k-1) C(m,s) / C(k-1,s)."""
    if k < 2 or n < 1:
        raise OutOfRange(f"need n >= 1 and k >= 2 (got n={n}, k={k})")
    for s in range(1, k):
        if n * comb(k - 1, s) <= (k - 1) * comb(m, s):
            return s
    raise OutOfRange(f"n={n} exceeds (k-1) C(m, k-1) = {(k - 1) * comb(m, k - 1)}")


def storage_lower(n: int, k: int, m: int) -> int:
    """Lower bound on the total storage N(n, k, m) of any (n, N, k, m) code."""
    if m < k:
        raise OutOfRange(f"need m >= k (got m={m}, k={k})")
    s = minimal_s(n, k, m)
    slack = Fraction(k - s) * (capacity_ratio(m, k, s) - n) / (m - k + 1)
    return n * s - math.floor(slack)


def uniform_upper(m: int, c: int, k: int) -> int:
    """Upper bound on the item count of a c-uniform code with m servers and batch size k."""
    if not (1 <= c <= k - 1 <= m):
        raise OutOfRange(f"need 1 <= c <= k-1 <= m (got m={m}, c={c}, k={k})")
    return math.floor(capacity_ratio(m, k, c))


# Exact values of A(m, 4, w) that beat the recursive bound or pin it down.
_KNOWN_A = {(6, 2): 3}


@lru_cache(maxsize=None)
def johnson_upper_A(m: int, w: int) -> int:
    """Upper bound on A(m, 4, w), the largest weight-w length-m code at distance 4."""
    if not 0 <= w <= m:
        raise OutOfRange(f"need 0 <= w <= m (got m={m}, w={w})")
    w = min(w, m - w)
    if (m, w) in _KNOWN_A:
        return _KNOWN_A[(m, w)]
    if w <= 1:
        return 1
    if w == 2:
        return m // 2
    return (m * johnson_upper_A(m - 1, w - 1)) // w


def ceil_sqrt(x: int) -> int:
    r = math.isqrt(x)
    return r if r * r == x else r + 1


def table_exact_N(n: int, k: int, m: int) -> int | None:
    """Known exact N(n, k, m) for the classical parameter regimes, else None."""
    if not (1 <= k <= m <= n):
        return None
    if m == n:
        return n
    if m == k:
        return k * n - k * (k - 1)
    if n == m + 1:
        return m + k
    if n == m + 2:
        if m + 1 - k >= ceil_sqrt(k + 1):
            return m + k - 2 + ceil_sqrt(4 * (k + 1))
        return 2 * m - 2 + math.ceil(1 + Fraction(k + 1, m - k + 1))
    if k < 2:
        return None
    top = (k - 1) * comb(m, k - 1)
    if n >= top:
        return k * n - top
    if k >= 2 and comb(m, k - 2) <= n:
        return n * (k - 1) - (top - n) // (m - k + 1)
    return None


@dataclass
class BoundReport:
    name: str
    inputs: dict
    bound: int | None
    achieved: int | None
    gap: int | None
    verdict: str
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return asdict(self)


def _verdict(gap: int | None) -> str:
    if gap is None:
        return "inapplicable"
    return "optimal" if gap == 0 else f"gap={gap}"


def storage_report(n: int, N: int, k: int, m: int) -> BoundReport:
    inputs = {"n": n, "k": k, "m": m}
    try:
        s = minimal_s(n, k, m)
        bound = storage_lower(n, k, m)
    except OutOfRange as exc:
        return BoundReport("storage_lower", inputs, None, N, None, "inapplicable", {"reason": str(exc)})
    gap = N - bound
    return BoundReport("storage_lower", inputs, bound, N, gap, _verdict(gap), {"s": s})


def uniform_report(n: int, m: int, c: int, k: int) -> BoundReport:
    inputs = {"m": m, "c": c, "k": k}
    try:
        bound = uniform_upper(m, c, k)
    except OutOfRange as exc:
        return BoundReport("uniform_upper", inputs, None, n, None, "inapplicable", {"reason": str(exc)})
    gap = bound - n
    return BoundReport("uniform_upper", inputs, bound, n, gap, _verdict(gap))


def new_range_check(q: int) -> BoundReport:
    """Check n <= C(m, k-2) - (m-k+1) A(m, 4, k-3) for the code built from TD(q-1, q).

    An upper bound on A only lowers the right-hand side, so a pass with the
    recursive bound implies a pass with the true value.
    """
    prime_power(q)
    if q < 3:
        raise OutOfRange(f"q={q} < 3")
    n, k, m = q * q + q - 1, q * q - q - 1, q * q - q
    a_upper = johnson_upper_A(m, k - 3)
    bound = comb(m, k - 2) - (m - k + 1) * a_upper
    cubic = Fraction(m * (m - 1) * (m - 2), 12)
    gap = bound - n
    return BoundReport(
        "new_range",
        {"q": q, "n": n, "k": k, "m": m},
        bound,
        n,
        gap,
        "holds" if gap >= 0 else "fails",
        {"A_upper": a_upper, "binom": comb(m, k - 2), "cubic_floor": str(cubic), "exceeds_cubic": bound >= cubic},
    )


def optimality_report(mat: IncidenceMatrix, claimed_k: int) -> list[BoundReport]:
    """Storage bound for non-uniform codes, capacity bound for uniform ones."""
    c = mat.uniform_weight
    if c is None:
        return [storage_report(mat.n, mat.N, claimed_k, mat.m)]
    return [uniform_report(mat.n, mat.m, c, claimed_k)]
