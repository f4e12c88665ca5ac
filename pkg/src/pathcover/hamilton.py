"""Constructive spanning paths and cycles.

The workhorse is rotation-extension: grow a path greedily from both ends,
and when stuck, rewire the tail end through a neighbor already on the path
(suffix reversal) to expose a new endpoint. Spanning cycles close a spanning
path either directly, through a crossing pair of chords, or by further
rotations. For small host graphs (n <= 14 by default) an exhaustive bitmask
DP provides ground truth, so failures below that size are proofs of
non-existence.

Search failure is a value carrying the best structure found, not an error.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from ._bits import bits, mask_of, mix64, nth_bit
from .graph import Graph

EXHAUSTIVE_CAP = 14


@dataclass(frozen=True)
class Path:
    """Open path; a single vertex is a path of length 0."""

    vertices: tuple[int, ...]

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("a path needs at least one vertex")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("path repeats a vertex")

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def ends(self) -> tuple[int, int]:
        return (self.vertices[0], self.vertices[-1])

    def reversed(self) -> "Path":
        return Path(tuple(reversed(self.vertices)))

    def validate(self, g: Graph) -> None:
        for u, v in zip(self.vertices, self.vertices[1:]):
            if not g.adjacent(u, v):
                raise ValueError(f"path uses non-edge ({u},{v})")


@dataclass(frozen=True)
class Cycle:
    """Cycle in canonical rotation: smallest vertex first, smaller neighbor second."""

    vertices: tuple[int, ...]

    def __post_init__(self):
        vs = self.vertices
        if len(vs) < 3:
            raise ValueError("a cycle needs at least 3 vertices")
        if len(set(vs)) != len(vs):
            raise ValueError("cycle repeats a vertex")
        i = vs.index(min(vs))
        rot = vs[i:] + vs[:i]
        if rot[-1] < rot[1]:
            rot = (rot[0],) + tuple(reversed(rot[1:]))
        object.__setattr__(self, "vertices", rot)

    def __len__(self) -> int:
        return len(self.vertices)

    def validate(self, g: Graph) -> None:
        vs = self.vertices
        for u, v in zip(vs, vs[1:] + vs[:1]):
            if not g.adjacent(u, v):
                raise ValueError(f"cycle uses non-edge ({u},{v})")


@dataclass
class PathSearch:
    path: Optional[Path]
    best: Optional[Path]

    @property
    def ok(self) -> bool:
        return self.path is not None


@dataclass
class CycleSearch:
    cycle: Optional[Cycle]
    best: Optional[Cycle]

    @property
    def ok(self) -> bool:
        return self.cycle is not None


# ---------------------------------------------------------------- search core


class _Budget:
    __slots__ = ("left",)

    def __init__(self, total: int):
        self.left = total

    def spend(self) -> bool:
        if self.left <= 0:
            return False
        self.left -= 1
        return True


def _pick_bit(mask: int, rng: random.Random) -> int:
    c = mask.bit_count()
    return nth_bit(mask, 0 if c == 1 else rng.randrange(c))


def _grow_path(
    adj: Sequence[int],
    active: int,
    start: int,
    rng: random.Random,
    budget: _Budget,
    rot_cap: int,
) -> list[int]:
    """One rotation-extension attempt from `start`; returns the path found."""
    path = [start]
    pos = {start: 0}
    mask = 1 << start
    rotations = 0
    while True:
        # extend the tail as far as it goes
        while True:
            cands = adj[path[-1]] & active & ~mask
            if not cands:
                break
            v = _pick_bit(cands, rng)
            pos[v] = len(path)
            path.append(v)
            mask |= 1 << v
        if mask == active:
            return path
        # a blocked tail may free up after flipping to the other end
        if adj[path[0]] & active & ~mask:
            path.reverse()
            for i, v in enumerate(path):
                pos[v] = i
            continue
        rotations += 1
        if rotations > rot_cap or not budget.spend():
            return path
        pivots = adj[path[-1]] & mask
        if len(path) >= 2:
            pivots &= ~(1 << path[-2])
        pivots &= ~(1 << path[-1])
        if not pivots:
            return path
        w = _pick_bit(pivots, rng)
        i = pos[w]
        lo, hi = i + 1, len(path) - 1
        while lo < hi:
            path[lo], path[hi] = path[hi], path[lo]
            pos[path[lo]] = lo
            pos[path[hi]] = hi
            lo += 1
            hi -= 1


def _close_cycle(
    adj: Sequence[int],
    path: list[int],
    rng: random.Random,
    budget: _Budget,
) -> Optional[list[int]]:
    """Close a path into a cycle on exactly its vertex set, or None."""
    if len(path) < 3:
        return None
    mask = mask_of(path)
    for _ in range(4 * len(path)):
        head, tail = path[0], path[-1]
        if (adj[tail] >> head) & 1:
            return path
        # crossing chords: head ~ path[i+1] and tail ~ path[i]
        nh, nt = adj[head], adj[tail]
        for i in range(1, len(path) - 2):
            if (nt >> path[i]) & 1 and (nh >> path[i + 1]) & 1:
                return path[: i + 1] + path[i + 1 :][::-1]
        if not budget.spend():
            return None
        pivots = adj[tail] & mask & ~(1 << path[-2]) & ~(1 << tail)
        if not pivots:
            return None
        w = _pick_bit(pivots, rng)
        i = path.index(w)
        path[i + 1 :] = path[i + 1 :][::-1]
    return None


def _heuristic_longest_path(
    adj: Sequence[int],
    active: int,
    n_active: int,
    seed: int,
    budget_total: int,
) -> list[int]:
    rng = random.Random(mix64(seed, 0x9A7B))
    budget = _Budget(budget_total)
    rot_cap = max(10 * n_active, 10)
    best: list[int] = []
    starts = list(bits(active))
    while budget.left > 0:
        start = starts[rng.randrange(len(starts))]
        path = _grow_path(adj, active, start, rng, budget, rot_cap)
        if len(path) > len(best):
            best = path
        if len(best) == n_active:
            break
        budget.left -= 1  # restart overhead so zero-rotation stalls terminate
    return best


# ---------------------------------------------------------------- exact DP


def _dp_hamiltonian_path(adj: Sequence[int], active: int) -> Optional[list[int]]:
    """Bitmask DP; returns a spanning path of the active set or None."""
    verts = list(bits(active))
    n = len(verts)
    if n == 1:
        return verts
    idx = {v: i for i, v in enumerate(verts)}
    radj = [0] * n
    for i, v in enumerate(verts):
        for w in bits(adj[v] & active):
            radj[i] |= 1 << idx[w]
    full = (1 << n) - 1
    reach = [0] * (full + 1)
    for i in range(n):
        reach[1 << i] = 1 << i
    for mask in range(1, full + 1):
        ends = reach[mask]
        if not ends:
            continue
        for last in bits(ends):
            for nxt in bits(radj[last] & ~mask):
                reach[mask | (1 << nxt)] |= 1 << nxt
    if not reach[full]:
        return None
    # walk backwards, smallest choices first
    last = next(bits(reach[full]))
    mask = full
    out = [last]
    while mask != (1 << last):
        prev_mask = mask ^ (1 << last)
        for prev in bits(radj[last] & reach[prev_mask]):
            last = prev
            mask = prev_mask
            out.append(last)
            break
    return [verts[i] for i in reversed(out)]


def _dp_hamiltonian_cycle(adj: Sequence[int], active: int) -> Optional[list[int]]:
    """Bitmask DP for a spanning cycle of the active set, or None."""
    verts = list(bits(active))
    n = len(verts)
    if n < 3:
        return None
    idx = {v: i for i, v in enumerate(verts)}
    radj = [0] * n
    for i, v in enumerate(verts):
        for w in bits(adj[v] & active):
            radj[i] |= 1 << idx[w]
    full = (1 << n) - 1
    # paths anchored at vertex 0
    reach = [0] * (full + 1)
    reach[1] = 1
    for mask in range(1, full + 1, 2):
        ends = reach[mask]
        if not ends:
            continue
        for last in bits(ends):
            for nxt in bits(radj[last] & ~mask):
                reach[mask | (1 << nxt)] |= 1 << nxt
    closers = reach[full] & radj[0] & ~1
    if n >= 3 and not closers:
        return None
    last = next(bits(closers))
    mask = full
    out = [last]
    while mask != 1:
        prev_mask = mask ^ (1 << last)
        options = radj[last] & (reach[prev_mask] if prev_mask != 1 else 1)
        for prev in bits(options):
            last = prev
            mask = prev_mask
            out.append(last)
            break
    return [verts[i] for i in reversed(out)]


# ---------------------------------------------------------------- public ops


def hamiltonian_path(
    g: Graph,
    budget: Optional[int] = None,
    seed: int = 0,
    exhaustive_cap: int = EXHAUSTIVE_CAP,
) -> PathSearch:
    """Search for a path visiting every vertex once.

    Heuristic first; below `exhaustive_cap` vertices a failed heuristic falls
    back to exact DP, so a failure there means no Hamiltonian path exists.
    """
    if g.n == 0:
        raise ValueError("empty graph")
    active = (1 << g.n) - 1
    total = budget if budget is not None else 50 * 10 * g.n
    adj = [g.adjacency_mask(v) for v in range(g.n)]
    found = _heuristic_longest_path(adj, active, g.n, seed, total)
    best = Path(tuple(found)) if found else None
    if len(found) == g.n:
        return PathSearch(best, best)
    if g.n <= exhaustive_cap:
        exact = _dp_hamiltonian_path(adj, active)
        if exact is not None:
            p = Path(tuple(exact))
            return PathSearch(p, p)
    return PathSearch(None, best)


def spanning_cycle_bipartite(
    g: Graph,
    x: Iterable[int],
    y: Iterable[int],
    budget: Optional[int] = None,
    seed: int = 0,
    exhaustive_cap: int = EXHAUSTIVE_CAP,
) -> CycleSearch:
    """Search for a cycle covering all of x ∪ y, alternating between sides.

    Only x-y edges are considered, so any cycle found alternates. |x| = |y|
    is required (a spanning alternating cycle forces balance).
    """
    xm, ym = mask_of(x), mask_of(y)
    if xm & ym:
        raise ValueError("sides overlap")
    nx, ny = xm.bit_count(), ym.bit_count()
    if nx != ny or nx < 2:
        raise ValueError(f"need equal sides of size >= 2, got {nx} and {ny}")
    active = xm | ym
    n_active = 2 * nx
    adj = [0] * g.n
    for v in bits(xm):
        adj[v] = g.adjacency_mask(v) & ym
    for v in bits(ym):
        adj[v] = g.adjacency_mask(v) & xm
    # degree-1 vertices can never lie on a cycle
    if any(adj[v].bit_count() < 2 for v in bits(active)):
        return CycleSearch(None, None)
    total = budget if budget is not None else 50 * 10 * nx
    rng = random.Random(mix64(seed, 0xC1C7E))
    budget_ = _Budget(total)
    rot_cap = max(10 * n_active, 10)
    starts = list(bits(active))
    best_cycle: Optional[Cycle] = None
    while budget_.left > 0:
        start = starts[rng.randrange(len(starts))]
        path = _grow_path(adj, active, start, rng, budget_, rot_cap)
        closed = _close_cycle(adj, path, rng, budget_)
        if closed is not None:
            cyc = Cycle(tuple(closed))
            if best_cycle is None or len(cyc) > len(best_cycle):
                best_cycle = cyc
            if len(closed) == n_active:
                return CycleSearch(best_cycle, best_cycle)
        budget_.left -= 1
    if n_active <= exhaustive_cap:
        exact = _dp_hamiltonian_cycle(adj, active)
        if exact is not None:
            cyc = Cycle(tuple(exact))
            return CycleSearch(cyc, cyc)
    return CycleSearch(None, best_cycle)


def longest_path(
    g: Graph,
    within: Optional[Iterable[int]] = None,
    budget: Optional[int] = None,
    seed: int = 0,
) -> Path:
    """Heuristic longest path inside `within` (default: all vertices)."""
    active = mask_of(within) if within is not None else (1 << g.n) - 1
    if not active:
        raise ValueError("empty vertex set")
    n_active = active.bit_count()
    adj = [g.adjacency_mask(v) if (active >> v) & 1 else 0 for v in range(g.n)]
    total = budget if budget is not None else 20 * 10 * n_active
    found = _heuristic_longest_path(adj, active, n_active, seed, total)
    return Path(tuple(found))


def longest_cycle(
    g: Graph,
    within: Optional[Iterable[int]] = None,
    budget: Optional[int] = None,
    seed: int = 0,
) -> Optional[Cycle]:
    """Heuristic long cycle inside `within`; None when none was closed."""
    active = mask_of(within) if within is not None else (1 << g.n) - 1
    if not active:
        raise ValueError("empty vertex set")
    n_active = active.bit_count()
    if n_active < 3:
        return None
    adj = [g.adjacency_mask(v) & active if (active >> v) & 1 else 0 for v in range(g.n)]
    total = budget if budget is not None else 20 * 10 * n_active
    rng = random.Random(mix64(seed, 0x10C))
    budget_ = _Budget(total)
    rot_cap = max(10 * n_active, 10)
    starts = list(bits(active))
    best: Optional[list[int]] = None
    while budget_.left > 0:
        start = starts[rng.randrange(len(starts))]
        path = _grow_path(adj, active, start, rng, budget_, rot_cap)
        closed = _close_cycle(adj, path, rng, budget_)
        if closed is not None and (best is None or len(closed) > len(best)):
            best = closed
            if len(best) == n_active:
                break
        budget_.left -= 1
    return Cycle(tuple(best)) if best is not None else None


def cycle_to_path(c: Cycle, drop: Optional[int] = None) -> Path:
    """Open a cycle into a path.

    Without `drop`, one cycle edge is cut, so the path keeps every vertex and
    its ends are adjacent on the cycle (in a bipartite host this puts one end
    on each side). With `drop`, that vertex is removed and the path runs
    through the remaining ones.
    """
    vs = c.vertices
    if drop is None:
        return Path(vs)
    if drop not in vs:
        raise ValueError(f"vertex {drop} is not on the cycle")
    i = vs.index(drop)
    return Path(vs[i + 1 :] + vs[:i])
