"""Batch retrieval: match requested items to distinct servers.

Hopcroft-Karp over the bipartite graph (requested items) x (servers).
Adjacency lists are in increasing server order and free items are scanned in
increasing item order, so results do not depend on hashing or platform.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .codes import IncidenceMatrix, bits_of

_INF = float("inf")


@dataclass(frozen=True)
class DeficiencyWitness:
    """A set of items stored on fewer servers than there are items.

    Its existence certifies that the code cannot serve batches of
    ``len(column_set)`` items, i.e. k <= len(column_set) - 1.
    """

    column_set: tuple[int, ...]
    neighborhood: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.column_set)

    @property
    def neighborhood_size(self) -> int:
        return len(self.neighborhood)

    @classmethod
    def from_columns(cls, mat: IncidenceMatrix, cols) -> DeficiencyWitness:
        cols = tuple(sorted(set(cols)))
        return cls(cols, tuple(bits_of(mat.union(cols))))

    def revalidate(self, mat: IncidenceMatrix) -> bool:
        """Recompute the neighborhood from ``mat`` and confirm the deficiency."""
        union = mat.union(self.column_set)
        return (
            len(set(self.column_set)) == len(self.column_set)
            and tuple(bits_of(union)) == tuple(self.neighborhood)
            and union.bit_count() < len(self.column_set)
        )

    def as_dict(self) -> dict:
        return {
            "columns": list(self.column_set),
            "rows": list(self.neighborhood),
            "size": self.size,
            "neighborhood_size": self.neighborhood_size,
        }


@dataclass
class Assignment:
    pairs: dict[int, int] = field(default_factory=dict)
    requested: tuple[int, ...] = ()

    @property
    def size(self) -> int:
        return len(self.pairs)

    @property
    def complete(self) -> bool:
        return len(self.pairs) == len(self.requested)

    @property
    def unassigned(self) -> list[int]:
        return [j for j in self.requested if j not in self.pairs]

    def is_valid(self, mat: IncidenceMatrix) -> bool:
        servers = list(self.pairs.values())
        return len(servers) == len(set(servers)) and all(
            mat.columns[j] >> s & 1 for j, s in self.pairs.items()
        )

    def as_dict(self) -> dict:
        return {
            "pairs": {str(j): s for j, s in sorted(self.pairs.items())},
            "complete": self.complete,
            "size": self.size,
        }


def _check_items(mat: IncidenceMatrix, items) -> tuple[int, ...]:
    items = tuple(items)
    if len(set(items)) != len(items):
        raise ValueError("requested items must be distinct")
    for j in items:
        if not 0 <= j < mat.n:
            raise ValueError(f"item {j} out of range [0, {mat.n})")
    return items


def _hopcroft_karp(adj: list[tuple[int, ...]], num_right: int):
    """Maximum matching; ``adj[u]`` lists the right neighbours of left vertex u."""
    num_left = len(adj)
    match_l = [-1] * num_left
    match_r = [-1] * num_right
    dist = [0.0] * num_left

    def bfs() -> bool:
        queue = deque()
        for u in range(num_left):
            if match_l[u] < 0:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = _INF
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w < 0:
                    found = True
                elif dist[w] == _INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def dfs(u: int) -> bool:
        # iterative version of the layered augmenting-path search
        stack = [(u, 0)]
        path = []
        while stack:
            x, i = stack[-1]
            nbrs = adj[x]
            if i >= len(nbrs):
                dist[x] = _INF
                stack.pop()
                if path:
                    path.pop()
                continue
            stack[-1] = (x, i + 1)
            v = nbrs[i]
            w = match_r[v]
            if w < 0:
                path.append((x, v))
                for a, b in path:
                    match_l[a] = b
                    match_r[b] = a
                return True
            if dist[w] == dist[x] + 1:
                path.append((x, v))
                stack.append((w, 0))
        return False

    while bfs():
        for u in range(num_left):
            if match_l[u] < 0:
                dfs(u)
    return match_l, match_r


def max_matching(mat: IncidenceMatrix, items) -> Assignment:
    """Maximum assignment of the requested items to distinct servers."""
    items = _check_items(mat, items)
    adj = [mat.column_rows[j] for j in items]
    match_l, _ = _hopcroft_karp(adj, mat.m)
    pairs = {items[u]: v for u, v in enumerate(match_l) if v >= 0}
    return Assignment(pairs, items)


def hall_violator(mat: IncidenceMatrix, assignment: Assignment) -> DeficiencyWitness | None:
    """Alternating-reachability cut from the unassigned items.

    The items reachable from an unassigned item by alternating paths have as
    neighborhood exactly the servers matched to reachable items, so the set is
    deficient by the number of unassigned items it contains.
    """
    if assignment.complete:
        return None
    owner = {s: j for j, s in assignment.pairs.items()}
    seen_items = set(assignment.unassigned)
    seen_rows: set[int] = set()
    queue = deque(sorted(seen_items))
    while queue:
        j = queue.popleft()
        for r in mat.column_rows[j]:
            if r in seen_rows:
                continue
            seen_rows.add(r)
            nxt = owner.get(r)
            if nxt is not None and nxt not in seen_items:
                seen_items.add(nxt)
                queue.append(nxt)
    return DeficiencyWitness(tuple(sorted(seen_items)), tuple(sorted(seen_rows)))


def retrieve_batch(mat: IncidenceMatrix, items) -> Assignment | DeficiencyWitness:
    """Serve a batch: the assignment if one exists, else a Hall violator."""
    a = max_matching(mat, items)
    if a.complete:
        return a
    return hall_violator(mat, a)
