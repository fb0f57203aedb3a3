"""Combinatorial batch codes as server-by-item incidence matrices.

Rows are servers, columns are items.  Each column is kept as a Python int
bitset over the rows (bit ``i`` set means server ``i`` stores the item).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .designs import Design, build_affine_plane, build_resolvable_td
from .errors import MatrixFormatError, QTooSmall
from .field import prime_power


def bits_of(mask: int) -> list[int]:
    """Indices of the set bits of ``mask`` in increasing order."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_of(indices) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


@dataclass(frozen=True)
class CodeParams:
    n: int
    N: int
    k: int | None
    m: int
    c: int | None = None

    def as_dict(self) -> dict:
        return {"n": self.n, "N": self.N, "k": self.k, "m": self.m, "c": self.c}


@dataclass(frozen=True)
class IncidenceMatrix:
    """An m x n binary server/item matrix.

    ``classes`` holds the parallel classes of columns and ``special`` the
    extra class (group columns or appended columns), when the matrix came
    from a design.
    """

    m: int
    columns: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...] = ()
    special: tuple[int, ...] = ()
    label: str = ""
    declared: CodeParams | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        full = (1 << self.m) - 1
        for j, col in enumerate(self.columns):
            if col == 0:
                raise ValueError(f"column {j} is empty: item stored on no server")
            if col & ~full:
                raise ValueError(f"column {j} has rows outside [0, {self.m})")

    @property
    def n(self) -> int:
        return len(self.columns)

    @cached_property
    def column_rows(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(bits_of(c)) for c in self.columns)

    @property
    def column_weights(self) -> list[int]:
        return [c.bit_count() for c in self.columns]

    @property
    def row_weights(self) -> list[int]:
        return [sum(1 for c in self.columns if c >> i & 1) for i in range(self.m)]

    @property
    def N(self) -> int:
        return sum(self.column_weights)

    @property
    def uniform_weight(self) -> int | None:
        weights = set(self.column_weights)
        return weights.pop() if len(weights) == 1 else None

    @property
    def class_partition(self) -> list[list[int]]:
        parts = [list(c) for c in self.classes]
        if self.special:
            parts.append(list(self.special))
        return parts

    def union(self, cols) -> int:
        u = 0
        for j in cols:
            u |= self.columns[j]
        return u

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.m, self.n), dtype=np.uint8)
        for j, rows in enumerate(self.column_rows):
            a[list(rows), j] = 1
        return a

    @classmethod
    def from_dense(cls, a, **kwargs) -> IncidenceMatrix:
        a = np.asarray(a)
        if a.ndim != 2:
            raise ValueError("expected a 2-d 0/1 array")
        cols = tuple(mask_of(int(i) for i in np.flatnonzero(a[:, j])) for j in range(a.shape[1]))
        return cls(a.shape[0], cols, **kwargs)

    def drop_columns(self, drop) -> IncidenceMatrix:
        drop = set(drop)
        keep = [j for j in range(self.n) if j not in drop]
        return IncidenceMatrix(self.m, tuple(self.columns[j] for j in keep), label=self.label)

    def drop_rows(self, drop) -> IncidenceMatrix:
        """Delete rows.  Raises ValueError if some column loses all its rows."""
        drop = set(drop)
        keep = [i for i in range(self.m) if i not in drop]
        cols = tuple(mask_of(r for r, i in enumerate(keep) if c >> i & 1) for c in self.columns)
        return IncidenceMatrix(len(keep), cols, label=self.label)


def _check_q(q: int, minimum: int) -> None:
    prime_power(q)
    if q < minimum:
        raise QTooSmall(f"q={q} is too small; this construction needs q >= {minimum}")


def _design_columns(d: Design) -> tuple[list[int], tuple[tuple[int, ...], ...]]:
    cols = [mask_of(b) for b in d.blocks]
    return cols, d.parallel_classes


def construct_ctd(q: int) -> IncidenceMatrix:
    """Blocks of TD(q-1, q) by parallel class, then its q-1 groups."""
    _check_q(q, 3)
    d = build_resolvable_td(q - 1, q)
    cols, classes = _design_columns(d)
    special = tuple(range(len(cols), len(cols) + len(d.groups)))
    cols += [mask_of(g) for g in d.groups]
    n, m = q * q + q - 1, q * (q - 1)
    return IncidenceMatrix(
        m, tuple(cols), classes, special, f"ctd q={q}",
        CodeParams(n, q**3 - q, q * q - q - 1, m, None),
    )


def construct_affine_cbc(q: int) -> IncidenceMatrix:
    _check_q(q, 3)
    d = build_affine_plane(q)
    cols, classes = _design_columns(d)
    return IncidenceMatrix(
        q * q, tuple(cols), classes, (), f"affine q={q}",
        CodeParams(q * q + q, q**3 + q * q, q * q, q * q, q),
    )


def construct_c1(q: int) -> IncidenceMatrix:
    _check_q(q, 3)
    d = build_resolvable_td(q - 1, q)
    cols, classes = _design_columns(d)
    return IncidenceMatrix(
        q * (q - 1), tuple(cols), classes, (), f"c1 q={q}",
        CodeParams(q * q, q**3 - q * q, q * q - q - 1, q * q - q, q - 1),
    )


def construct_c2(q: int) -> IncidenceMatrix:
    """C1 plus q-3 columns; column i covers group i minus its element 0."""
    _check_q(q, 4)
    base = construct_c1(q)
    extra = [mask_of(i * q + j for j in range(1, q)) for i in range(q - 3)]
    special = tuple(range(base.n, base.n + len(extra)))
    n = q * q + q - 3
    return IncidenceMatrix(
        base.m, base.columns + tuple(extra), base.classes, special, f"c2 q={q}",
        CodeParams(n, (q - 1) * n, q * q - q - 1, q * q - q, q - 1),
    )


def construct_c3(q: int) -> IncidenceMatrix:
    """C2 without server 0 and without the items that server 0 stores."""
    _check_q(q, 4)
    c2 = construct_c2(q)
    removed = {j for j, c in enumerate(c2.columns) if c & 1}
    keep = [j for j in range(c2.n) if j not in removed]
    new_index = {old: new for new, old in enumerate(keep)}
    cols = tuple(c2.columns[j] >> 1 for j in keep)
    classes = tuple(tuple(new_index[j] for j in cls if j in new_index) for cls in c2.classes)
    special = tuple(new_index[j] for j in c2.special if j in new_index)
    n = q * q - 3
    return IncidenceMatrix(
        c2.m - 1, cols, classes, special, f"c3 q={q}",
        CodeParams(n, (q - 1) * n, q * q - q - 1, q * q - q - 1, q - 1),
    )


FAMILIES = {
    "ctd": construct_ctd,
    "affine": construct_affine_cbc,
    "c1": construct_c1,
    "c2": construct_c2,
    "c3": construct_c3,
}


def construct(family: str, q: int) -> IncidenceMatrix:
    try:
        builder = FAMILIES[family]
    except KeyError:
        raise ValueError(f"unknown family {family!r}; choose from {sorted(FAMILIES)}") from None
    return builder(q)


def params_of(mat: IncidenceMatrix, k: int | None = None) -> CodeParams:
    """Read (n, N, m, c) off the matrix; compute k exactly unless given."""
    if k is None:
        from .verify import max_k_dual

        k = max_k_dual(mat).k_max
    elif k > mat.n:
        raise ValueError(f"k={k} exceeds the number of items n={mat.n}")
    return CodeParams(mat.n, mat.N, k, mat.m, mat.uniform_weight)


# -- text format -------------------------------------------------------------


def format_matrix(mat: IncidenceMatrix, metadata: bool = True) -> str:
    dense = mat.to_dense()
    lines = [f"{mat.m} {mat.n}"]
    lines += ["".join("1" if x else "0" for x in row) for row in dense]
    text = "\n".join(lines) + "\n"
    if metadata:
        meta = {
            "label": mat.label,
            "class_partition": {
                "classes": [list(c) for c in mat.classes],
                "special": list(mat.special),
            },
            "params": mat.declared.as_dict() if mat.declared else None,
        }
        text += json.dumps(meta, indent=2, sort_keys=True) + "\n"
    return text


def parse_matrix(text: str) -> IncidenceMatrix:
    lines = text.splitlines()
    try:
        m, n = (int(x) for x in lines[0].split())
    except (IndexError, ValueError):
        raise MatrixFormatError("first line must be 'm n'") from None
    if m < 1 or n < 1:
        raise MatrixFormatError(f"bad dimensions {m} x {n}")
    rows = lines[1 : 1 + m]
    if len(rows) != m:
        raise MatrixFormatError(f"expected {m} matrix rows, got {len(rows)}")
    cols = [0] * n
    for i, row in enumerate(rows):
        row = row.strip()
        if len(row) != n or set(row) - {"0", "1"}:
            raise MatrixFormatError(f"row {i + 1} must be {n} characters of 0/1")
        for j, ch in enumerate(row):
            if ch == "1":
                cols[j] |= 1 << i

    kwargs = {}
    tail = "\n".join(lines[1 + m :]).strip()
    if tail:
        try:
            meta = json.loads(tail)
        except json.JSONDecodeError as exc:
            raise MatrixFormatError(f"trailing metadata is not JSON: {exc}") from None
        part = meta.get("class_partition") or {}
        kwargs["classes"] = tuple(tuple(c) for c in part.get("classes", []))
        kwargs["special"] = tuple(part.get("special", []))
        kwargs["label"] = meta.get("label", "")
        if meta.get("params"):
            p = meta["params"]
            kwargs["declared"] = CodeParams(p["n"], p["N"], p.get("k"), p["m"], p.get("c"))
    try:
        return IncidenceMatrix(m, tuple(cols), **kwargs)
    except ValueError as exc:
        raise MatrixFormatError(str(exc)) from None


def save_matrix(mat: IncidenceMatrix, path) -> None:
    Path(path).write_text(format_matrix(mat))


def load_matrix(path) -> IncidenceMatrix:
    return parse_matrix(Path(path).read_text())


FIXTURE_DIR = Path(__file__).parent / "fixtures"


def load_fixture(name: str) -> IncidenceMatrix:
    """Load one of the shipped printed matrices: ``ctd4``, ``c2_4`` or ``c3_4``."""
    return load_matrix(FIXTURE_DIR / f"{name}.txt")
