"""Half-integral maximum fractional matchings and the deficiency that
certifies them.

Two independent routes to the same quantity:

* `fractional_matching` builds the bipartite double cover (u-copy on the
  left, v-copy on the right for every edge uv), finds a maximum matching by
  augmenting paths, and halves it. The recovered weights land in
  {0, 1/2, 1}; even alternating structures are rounded to integral weights
  so the support is always disjoint edges plus odd cycles.
* `max_deficiency` enumerates vertex subsets S and maximizes
  isolated(G - S) - |S|, which equals n - 2*mu_f. It is the oracle the
  matching is cross-validated against.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import TYPE_CHECKING, Optional

from ._bits import bits, mask_of
from .graph import Graph

if TYPE_CHECKING:
    from .regularity import ClusterGraph

DEFICIENCY_CAP = 16

HALF = Fraction(1, 2)
ONE = Fraction(1)


class SizeLimitError(ValueError):
    """Instance too large for the exhaustive mode."""


@dataclass
class HalfIntegralMatching:
    """Edge weights in {0, 1/2, 1}; only positive weights are stored."""

    weights: dict[tuple[int, int], Fraction]
    value: Fraction = field(init=False)

    def __post_init__(self):
        self.value = sum(self.weights.values(), Fraction(0))

    def load(self, v: int) -> Fraction:
        return sum(
            (w for e, w in self.weights.items() if v in e),
            Fraction(0),
        )

    def validate(self, g: Graph) -> None:
        """Check feasibility, half-integrality, and the support shape."""
        load: dict[int, Fraction] = {}
        half_adj: dict[int, list[int]] = {}
        for (u, v), w in self.weights.items():
            if not g.adjacent(u, v):
                raise ValueError(f"weight on non-edge ({u},{v})")
            if w not in (HALF, ONE):
                raise ValueError(f"weight {w} not in {{1/2, 1}}")
            load[u] = load.get(u, Fraction(0)) + w
            load[v] = load.get(v, Fraction(0)) + w
            if w == HALF:
                half_adj.setdefault(u, []).append(v)
                half_adj.setdefault(v, []).append(u)
        for v, l in load.items():
            if l > 1:
                raise ValueError(f"vertex {v} overloaded: {l}")
        # half-weight support must decompose into odd cycles
        seen: set[int] = set()
        for start in sorted(half_adj):
            if start in seen:
                continue
            # every vertex on a half-structure must have exactly two half-edges,
            # otherwise it is a path, which the canonical form forbids
            comp = [start]
            seen.add(start)
            frontier = [start]
            while frontier:
                v = frontier.pop()
                for w in half_adj[v]:
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        frontier.append(w)
            if any(len(half_adj[v]) != 2 for v in comp):
                raise ValueError("half-weight support contains a path component")
            if len(comp) % 2 == 0:
                raise ValueError("half-weight support contains an even cycle")


def _augment(adj_sorted: list[list[int]], match_l: list[int], match_r: list[int]) -> int:
    """Kuhn's algorithm; neighbor lists pre-sorted for determinism."""
    n = len(adj_sorted)

    def try_vertex(u: int, visited: set[int]) -> bool:
        for v in adj_sorted[u]:
            if v in visited:
                continue
            visited.add(v)
            if match_r[v] == -1 or try_vertex(match_r[v], visited):
                match_l[u] = v
                match_r[v] = u
                return True
        return False

    size = 0
    for u in range(n):
        if match_l[u] == -1 and try_vertex(u, set()):
            size += 1
    return size


def fractional_matching(g: Graph) -> HalfIntegralMatching:
    """Maximum fractional matching with weights in {0, 1/2, 1}.

    The value equals mu_f(g) exactly (as a Fraction).
    """
    n = g.n
    adj_sorted = [sorted(bits(g.adjacency_mask(v))) for v in range(n)]
    match_l = [-1] * n
    match_r = [-1] * n
    _augment(adj_sorted, match_l, match_r)
    weights: dict[tuple[int, int], Fraction] = {}
    for u, v in g.edges:
        hits = int(match_l[u] == v) + int(match_l[v] == u)
        if hits:
            weights[(u, v)] = Fraction(hits, 2)
    _canonicalize(weights)
    m = HalfIntegralMatching(weights)
    m.validate(g)
    return m


def _canonicalize(weights: dict[tuple[int, int], Fraction]) -> None:
    """Round even alternating half-weight structures to integral weights."""
    half_adj: dict[int, list[int]] = {}
    for (u, v), w in weights.items():
        if w == HALF:
            half_adj.setdefault(u, []).append(v)
            half_adj.setdefault(v, []).append(u)

    def edge(u: int, v: int) -> tuple[int, int]:
        return (u, v) if u < v else (v, u)

    seen: set[int] = set()
    for start in sorted(half_adj):
        if start in seen:
            continue
        # collect the component; every vertex here has 1 or 2 half-edges
        stack = [start]
        comp = {start}
        while stack:
            v = stack.pop()
            for w in half_adj[v]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        ends = sorted(v for v in comp if len(half_adj[v]) == 1)
        if ends:
            order = _walk(half_adj, ends[0], None)
            if len(order) % 2 == 0:
                raise AssertionError("odd half-weight path contradicts maximality")
        else:
            v0 = min(comp)
            order = _walk(half_adj, v0, min(half_adj[v0]))
            if len(order) % 2 == 1:
                continue  # odd cycle: canonical already
        # alternate 1, 0, 1, ... along the walk (cycle walks have even length)
        for i in range(len(order) - 1):
            e = edge(order[i], order[i + 1])
            weights[e] = ONE if i % 2 == 0 else Fraction(0)
        if not ends:
            e = edge(order[-1], order[0])
            weights[e] = Fraction(0)
    for e in [e for e, w in weights.items() if w == 0]:
        del weights[e]


def _walk(half_adj: dict[int, list[int]], start: int, second: Optional[int]) -> list[int]:
    order = [start]
    prev = None
    cur = start
    if second is not None:
        order.append(second)
        prev, cur = start, second
    while True:
        nxts = [w for w in half_adj[cur] if w != prev]
        if not nxts:
            break
        nxt = nxts[0]
        if nxt == start:
            break
        order.append(nxt)
        prev, cur = cur, nxt
    return order


def max_deficiency(g: Graph, cap: int = DEFICIENCY_CAP) -> tuple[int, frozenset[int]]:
    """max over S of isolated(G - S) - |S|, with a maximizing S.

    Exhaustive; requires n <= cap. Subsets are scanned by increasing size,
    pruned by the bound isolated(G - S) <= #{v : deg(v) <= |S|}.
    """
    n = g.n
    if n > cap:
        raise SizeLimitError(f"n={n} exceeds exhaustive cap {cap}")
    adj = [g.adjacency_mask(v) for v in range(n)]
    degs = g.degrees()
    best_val = -(n + 1)
    best_set: frozenset[int] = frozenset()
    for s in range(n + 1):
        possible = sum(1 for d in degs if d <= s) - s
        if possible <= best_val:
            continue
        for subset in combinations(range(n), s):
            smask = mask_of(subset)
            iso = 0
            rest = ~smask
            for v in range(n):
                if (smask >> v) & 1:
                    continue
                if adj[v] & rest == 0:
                    iso += 1
            val = iso - s
            if val > best_val:
                best_val = val
                best_set = frozenset(subset)
    return best_val, best_set


def fractional_matching_value_by_deficiency(g: Graph, cap: int = DEFICIENCY_CAP) -> Fraction:
    """(n - max deficiency) / 2; independent route to mu_f."""
    d, _ = max_deficiency(g, cap=cap)
    return Fraction(g.n - d, 2)


def cluster_matching_pairs(
    h: "ClusterGraph",
    f: HalfIntegralMatching,
) -> list[tuple[int, int, int, int]]:
    """Turn a half-integral matching on a cluster graph into half-cluster pairings.

    Each cluster i owns two halves (1 and 2). A weight-1 edge ij produces the
    two pairings (i,1,j,1) and (i,2,j,2); a weight-1/2 edge produces one
    pairing, oriented along its odd cycle so each half is used at most once.
    Output: tuples (i, half_i, j, half_j), 2*value(f) of them in total.
    """
    for (i, j), w in f.weights.items():
        if (min(i, j), max(i, j)) not in h.edges:
            raise ValueError(f"matching uses pair ({i},{j}) absent from the cluster graph")
    pairings: list[tuple[int, int, int, int]] = []
    used: dict[tuple[int, int], bool] = {}

    def claim(i: int, half: int) -> None:
        if used.get((i, half)):
            raise ValueError(f"cluster half ({i},{half}) used twice")
        used[(i, half)] = True

    ones = sorted(e for e, w in f.weights.items() if w == ONE)
    for i, j in ones:
        claim(i, 1)
        claim(j, 1)
        pairings.append((i, 1, j, 1))
        claim(i, 2)
        claim(j, 2)
        pairings.append((i, 2, j, 2))
    half_adj: dict[int, list[int]] = {}
    for (u, v), w in sorted(f.weights.items()):
        if w == HALF:
            half_adj.setdefault(u, []).append(v)
            half_adj.setdefault(v, []).append(u)
    seen: set[int] = set()
    for start in sorted(half_adj):
        if start in seen:
            continue
        order = _walk(half_adj, start, min(half_adj[start]))
        seen |= set(order)
        if len(order) % 2 == 0:
            raise ValueError("half-integral matching support has an even cycle")
        for s in range(len(order)):
            a, b = order[s], order[(s + 1) % len(order)]
            claim(a, 2)
            claim(b, 1)
            pairings.append((a, 2, b, 1))
    if len(pairings) != 2 * f.value:
        raise AssertionError("pairing count must equal twice the matching value")
    return pairings
