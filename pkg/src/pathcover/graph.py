"""Immutable simple undirected graphs with dense 0..n-1 vertex ids.

Adjacency is stored both as neighbor bitmasks (for subset counting, which
dominates the regularity checks) and as a frozen edge set. Graphs may carry
an optional bipartition (X, Y); every edge must then cross it.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

from ._bits import bits, mask_of, set_of

VertexSet = frozenset[int]


class GraphFormatError(ValueError):
    """Edge-list text that does not follow the format; carries a line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class Graph:
    """Simple undirected graph. Immutable after construction."""

    __slots__ = ("n", "_adj", "_edges", "_bipartition")

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int]],
        bipartition: Optional[tuple[Iterable[int], Iterable[int]]] = None,
    ):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        self.n = n
        adj = [0] * n
        canon = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            a, b = (u, v) if u < v else (v, u)
            if (a, b) in canon:
                raise ValueError(f"duplicate edge ({a},{b})")
            canon.add((a, b))
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        self._adj = tuple(adj)
        self._edges = frozenset(canon)
        if bipartition is not None:
            x, y = frozenset(bipartition[0]), frozenset(bipartition[1])
            if x & y:
                raise ValueError("bipartition sides overlap")
            if x | y != frozenset(range(n)):
                raise ValueError("bipartition must cover all vertices")
            xm = mask_of(x)
            for a, b in canon:
                if ((xm >> a) & 1) == ((xm >> b) & 1):
                    raise ValueError(f"edge ({a},{b}) does not cross the bipartition")
            self._bipartition = (x, y)
        else:
            self._bipartition = None

    @property
    def m(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        return self._edges

    @property
    def bipartition(self) -> Optional[tuple[VertexSet, VertexSet]]:
        return self._bipartition

    def adjacency_mask(self, v: int) -> int:
        if not 0 <= v < self.n:
            raise ValueError(f"vertex {v} out of range")
        return self._adj[v]

    def adjacent(self, u: int, v: int) -> bool:
        return bool((self._adj[u] >> v) & 1)

    def neighbors(self, v: int) -> frozenset[int]:
        return set_of(self.adjacency_mask(v))

    def degree(self, v: int) -> int:
        return self.adjacency_mask(v).bit_count()

    def degrees(self) -> list[int]:
        return [a.bit_count() for a in self._adj]

    def regular_degree(self) -> int:
        """Common degree if the graph is regular, else ValueError."""
        degs = set(self.degrees())
        if len(degs) != 1:
            raise ValueError("graph is not regular")
        return degs.pop()

    def vertices(self) -> range:
        return range(self.n)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and self._edges == other._edges
            and self._bipartition == other._bipartition
        )

    def __hash__(self) -> int:
        return hash((self.n, self._edges, self._bipartition))

    def __repr__(self) -> str:
        bi = ", bipartite" if self._bipartition else ""
        return f"Graph(n={self.n}, m={self.m}{bi})"


def density(g: Graph, a: Iterable[int], b: Iterable[int]) -> Fraction:
    """Exact edge density e(a,b) / (|a|*|b|) between disjoint nonempty sets."""
    am, bm = mask_of(a), mask_of(b)
    if am == 0 or bm == 0:
        raise ValueError("density needs nonempty sets")
    if am & bm:
        raise ValueError("density needs disjoint sets")
    e = sum((g.adjacency_mask(v) & bm).bit_count() for v in bits(am))
    return Fraction(e, am.bit_count() * bm.bit_count())


def degree_into(g: Graph, v: int, s: Iterable[int]) -> int:
    """|N(v) ∩ s|."""
    return (g.adjacency_mask(v) & mask_of(s)).bit_count()


def induced_subgraph(g: Graph, keep: Iterable[int]) -> tuple[Graph, tuple[int, ...]]:
    """Subgraph on `keep`, relabeled to 0..|keep|-1.

    Returns (subgraph, mapping) where mapping[new_id] = old_id.
    """
    old_ids = sorted(set(keep))
    new_of = {old: new for new, old in enumerate(old_ids)}
    sub_edges = [
        (new_of[u], new_of[v])
        for u, v in g.edges
        if u in new_of and v in new_of
    ]
    bip = None
    if g.bipartition is not None:
        x, y = g.bipartition
        bip = (
            [new_of[v] for v in x if v in new_of],
            [new_of[v] for v in y if v in new_of],
        )
    return Graph(len(old_ids), sub_edges, bipartition=bip), tuple(old_ids)


def complement(g: Graph) -> Graph:
    """Complement graph (no bipartition carried over)."""
    edges = [
        (u, v)
        for u in range(g.n)
        for v in range(u + 1, g.n)
        if not g.adjacent(u, v)
    ]
    return Graph(g.n, edges)


def read_graph(text: str) -> Graph:
    """Parse the edge-list format.

    First line "n m"; optional second header "bipartite k" meaning
    X = {0..k-1}, Y = {k..n-1}; then m lines "u v" with 0 <= u < v < n.
    '#' lines are comments; blank lines are skipped.
    """
    n = m = -1
    split_k: Optional[int] = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n < 0:
            if len(parts) != 2:
                raise GraphFormatError(line_no, "expected header 'n m'")
            try:
                n, m = int(parts[0]), int(parts[1])
            except ValueError:
                raise GraphFormatError(line_no, "header values must be integers") from None
            if n < 0 or m < 0:
                raise GraphFormatError(line_no, "header values must be nonnegative")
            continue
        if parts[0] == "bipartite":
            if edges or split_k is not None:
                raise GraphFormatError(line_no, "'bipartite' header must precede edges")
            if len(parts) != 2:
                raise GraphFormatError(line_no, "expected 'bipartite k'")
            try:
                split_k = int(parts[1])
            except ValueError:
                raise GraphFormatError(line_no, "bipartite size must be an integer") from None
            if not 0 <= split_k <= n:
                raise GraphFormatError(line_no, f"bipartite size {split_k} out of range")
            continue
        if len(parts) != 2:
            raise GraphFormatError(line_no, f"expected 'u v', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(line_no, "edge endpoints must be integers") from None
        if u == v:
            raise GraphFormatError(line_no, f"self-loop at {u}")
        if not (0 <= u < v < n):
            raise GraphFormatError(line_no, f"edge ({u},{v}) violates 0 <= u < v < n")
        if (u, v) in seen:
            raise GraphFormatError(line_no, f"duplicate edge ({u},{v})")
        seen.add((u, v))
        edges.append((u, v))
    if n < 0:
        raise GraphFormatError(1, "missing header 'n m'")
    if len(edges) != m:
        raise GraphFormatError(1, f"header promises {m} edges, found {len(edges)}")
    bip = None
    if split_k is not None:
        bip = (range(split_k), range(split_k, n))
    try:
        return Graph(n, edges, bipartition=bip)
    except ValueError as exc:
        raise GraphFormatError(1, str(exc)) from None


def write_graph(g: Graph) -> str:
    """Serialize to the edge-list format with canonical (sorted) edge order.

    A bipartition is only representable when X is a prefix {0..k-1}.
    """
    lines = [f"{g.n} {g.m}"]
    if g.bipartition is not None:
        x, _ = g.bipartition
        k = len(x)
        if x != frozenset(range(k)):
            raise ValueError("only prefix bipartitions (X = 0..k-1) can be serialized")
        lines.append(f"bipartite {k}")
    for u, v in sorted(g.edges):
        lines.append(f"{u} {v}")
    return "\n".join(lines) + "\n"
