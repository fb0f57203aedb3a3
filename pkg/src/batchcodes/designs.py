"""Resolvable transversal designs TD(ell, q) and affine planes of order q.

Point ids are linearized as ``group * q + element``.  For an affine plane
the point ``(x, y)`` of GF(q)^2 gets id ``x * q + y``, so the vertical lines
play the role of groups.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import NamedTuple

from .errors import BlockSizeTooLarge, MatrixFormatError
from .field import field_new, prime_power

TRANSVERSAL = "transversal"
AFFINE = "affine"


class Point(NamedTuple):
    group: int
    element: int

    def id(self, q: int) -> int:
        return self.group * q + self.element


@dataclass(frozen=True)
class Design:
    ell: int
    q: int
    kind: str
    groups: tuple[tuple[int, ...], ...]
    blocks: tuple[tuple[int, ...], ...]
    parallel_classes: tuple[tuple[int, ...], ...] = ()

    @property
    def num_points(self) -> int:
        return self.ell * self.q if self.kind == TRANSVERSAL else self.q * self.q

    @property
    def points(self) -> list[Point]:
        groups = self.ell if self.kind == TRANSVERSAL else self.q
        return [Point(g, x) for g in range(groups) for x in range(self.q)]

    @property
    def resolvable(self) -> bool:
        return bool(self.parallel_classes)


@dataclass(frozen=True)
class Violation:
    property: str
    detail: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, prop: str, detail: str) -> None:
        self.violations.append(Violation(prop, detail))

    def properties(self) -> set[str]:
        return {v.property for v in self.violations}


def build_resolvable_td(ell: int, q: int) -> Design:
    """Canonical resolvable TD(ell, q) over GF(q).

    Block ``(a, b)`` is ``{(i, a*alpha_i + b)}`` with ``alpha_i = i`` for the
    first ``ell`` element indices; class ``a`` holds the q blocks sharing
    slope ``a``, ordered by ``b``.
    """
    prime_power(q)
    if ell > q:
        raise BlockSizeTooLarge(f"block size {ell} exceeds group size {q}")
    if ell < 2:
        raise ValueError("block size must be at least 2")
    f = field_new(q)
    groups = tuple(tuple(range(g * q, g * q + q)) for g in range(ell))
    blocks = []
    classes = []
    for a in range(q):
        cls = []
        for b in range(q):
            cls.append(len(blocks))
            blocks.append(tuple(i * q + f.add(f.mul(a, i), b) for i in range(ell)))
        classes.append(tuple(cls))
    return Design(ell, q, TRANSVERSAL, groups, tuple(blocks), tuple(classes))


def build_affine_plane(q: int) -> Design:
    """Affine plane AG(2, q): lines y = a*x + b by (a, b), then x = c."""
    prime_power(q)
    f = field_new(q)
    blocks = []
    classes = []
    for a in range(q):
        cls = []
        for b in range(q):
            cls.append(len(blocks))
            blocks.append(tuple(sorted(x * q + f.add(f.mul(a, x), b) for x in range(q))))
        classes.append(tuple(cls))
    vertical = []
    for c in range(q):
        vertical.append(len(blocks))
        blocks.append(tuple(c * q + y for y in range(q)))
    classes.append(tuple(vertical))
    groups = tuple(tuple(range(c * q, c * q + q)) for c in range(q))
    return Design(q, q, AFFINE, groups, tuple(blocks), tuple(classes))


def validate_design(d: Design) -> ValidationReport:
    """Exhaustively check the defining properties of ``d``.

    Every violated property is reported with a concrete counterexample.
    """
    report = ValidationReport()
    v = d.num_points
    q = d.q
    blocks = [frozenset(b) for b in d.blocks]

    for i, b in enumerate(d.blocks):
        if len(b) != d.ell or len(set(b)) != len(b):
            report.add("block_size", f"block {i} = {b} is not an {d.ell}-set")
        bad = [x for x in b if not 0 <= x < v]
        if bad:
            report.add("point_range", f"block {i} has points {bad} outside [0, {v})")

    if d.kind == TRANSVERSAL:
        expected_blocks, replication = q * q, q
    elif d.kind == AFFINE:
        expected_blocks, replication = q * (q + 1), q + 1
        if d.ell != q:
            report.add("block_size", f"affine plane of order {q} needs block size {q}")
    else:
        report.add("kind", f"unknown design kind {d.kind!r}")
        return report
    if len(blocks) != expected_blocks:
        report.add("block_count", f"{len(blocks)} blocks, expected {expected_blocks}")

    if d.kind == TRANSVERSAL:
        seen = sorted(x for g in d.groups for x in g)
        if len(d.groups) != d.ell or any(len(g) != q for g in d.groups) or seen != list(range(v)):
            report.add("groups", f"groups do not partition {v} points into {d.ell} sets of {q}")
        group_of = {x: gi for gi, g in enumerate(d.groups) for x in g}
        for i, b in enumerate(d.blocks):
            hits = Counter(group_of.get(x) for x in b)
            if len(hits) != len(d.groups) or any(c != 1 for c in hits.values()):
                report.add("transversal", f"block {i} = {b} does not meet every group once")

    # pair coverage
    cover: dict[tuple[int, int], list[int]] = {}
    for i, b in enumerate(d.blocks):
        for x, y in combinations(sorted(set(b)), 2):
            cover.setdefault((x, y), []).append(i)
    if d.kind == TRANSVERSAL:
        group_of = {x: gi for gi, g in enumerate(d.groups) for x in g}
        for x, y in combinations(range(v), 2):
            same = group_of.get(x) == group_of.get(y)
            hit = cover.get((x, y), [])
            if same and hit:
                report.add("pair_coverage", f"points {x},{y} of one group share blocks {hit}")
            elif not same and len(hit) != 1:
                report.add("pair_coverage", f"points {x},{y} lie in blocks {hit}, expected exactly one")
    else:
        for x, y in combinations(range(v), 2):
            hit = cover.get((x, y), [])
            if len(hit) != 1:
                report.add("pair_coverage", f"points {x},{y} lie in blocks {hit}, expected exactly one")

    degree = Counter(x for b in d.blocks for x in b)
    for x in range(v):
        if degree[x] != replication:
            report.add("replication", f"point {x} lies in {degree[x]} blocks, expected {replication}")

    if d.parallel_classes:
        used = sorted(i for c in d.parallel_classes for i in c)
        if used != list(range(len(d.blocks))):
            report.add("resolution", "parallel classes do not partition the block set")
        for ci, cls in enumerate(d.parallel_classes):
            counts = Counter(x for i in cls if 0 <= i < len(d.blocks) for x in d.blocks[i])
            for x in range(v):
                if counts[x] != 1:
                    report.add("resolution", f"point {x} lies in {counts[x]} blocks of class {ci}")
    return report


def format_design(d: Design) -> str:
    header = f"TD {d.ell} {d.q}" if d.kind == TRANSVERSAL else f"AFFINE {d.q}"
    lines = [header] + [" ".join(map(str, b)) for b in d.blocks]
    return "\n".join(lines) + "\n"


def parse_design_blocks(text: str) -> tuple[str, tuple[int, ...], list[tuple[int, ...]]]:
    """Parse the block-list export; returns ``(kind, header_params, blocks)``."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise MatrixFormatError("empty design file")
    head = lines[0].split()
    if head[0] == "TD" and len(head) == 3:
        kind, params = TRANSVERSAL, (int(head[1]), int(head[2]))
    elif head[0] == "AFFINE" and len(head) == 2:
        kind, params = AFFINE, (int(head[1]),)
    else:
        raise MatrixFormatError(f"bad design header {lines[0]!r}")
    return kind, params, [tuple(int(x) for x in ln.split()) for ln in lines[1:]]
