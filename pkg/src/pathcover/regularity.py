"""Equitable partitions, epsilon-regularity testing, cluster graphs, and
super-regular cleaning.

There is no attempt to certify the partition the way the tower-type
existence argument would; instead partitions are drawn at random (best of
several draws by mean-square density) and every pair the pipeline relies on
is verified per instance.

Regularity verdicts come in two modes:

* exact: both sides at most `exact_cap` vertices; all large sub-pairs are
  enumerated with bitset counting, so the verdict is decisive.
* heuristic: witness candidates are built from degree-deviation classes
  (prefixes of the degree-sorted orders, scanned from all four corners).
  A returned witness is always re-validated with exact rational arithmetic,
  so "irregular" is a proof; "regular" is only evidence and is flagged.

Threshold comparisons use Fractions throughout, so boundary cases (density
exactly d) are deterministic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

import numpy as np

from ._bits import bits, mask_of, mix64
from .graph import Graph, VertexSet, density

EXACT_CAP = 10

Threshold = Union[int, float, Fraction]


class CleaningFailed(Exception):
    """Super-regular cleaning found more low-degree vertices than regularity allows."""


@dataclass(frozen=True)
class Partition:
    """Clusters V_1..V_t of a common even size m, plus the exceptional set V_0."""

    exceptional: VertexSet
    clusters: tuple[VertexSet, ...]
    m: int

    @property
    def t(self) -> int:
        return len(self.clusters)

    def validate(self, g: Graph) -> None:
        all_vs: set[int] = set(self.exceptional)
        total = len(self.exceptional)
        for cl in self.clusters:
            if len(cl) != self.m:
                raise ValueError("cluster size differs from m")
            total += len(cl)
            all_vs |= cl
        if self.m % 2 != 0:
            raise ValueError("m must be even")
        if total != g.n or all_vs != set(range(g.n)):
            raise ValueError("partition must split the vertex set exactly")


@dataclass(frozen=True)
class RegularityWitness:
    x: VertexSet
    y: VertexSet
    deviation: Fraction


@dataclass(frozen=True)
class RegularityVerdict:
    regular: bool
    witness: Optional[RegularityWitness]
    mode: str  # "exact" | "heuristic"


@dataclass(frozen=True)
class ClusterGraph:
    """Graph on cluster indices 0..t-1; edges hold the exact pair density."""

    t: int
    threshold: Fraction
    edges: dict[tuple[int, int], Fraction]

    def to_graph(self) -> Graph:
        return Graph(self.t, list(self.edges))

    def __hash__(self):
        return hash((self.t, self.threshold, tuple(sorted(self.edges))))


def equitable_partition(g: Graph, t: int, seed: int = 0, refine: int = 20) -> Partition:
    """Random equitable partition into t clusters of even size m = floor(n/t)
    (rounded down to even); leftovers go to the exceptional set.

    Draws `refine` candidates and keeps the one with the largest mean-square
    density, which is the quantity partition refinement drives up.
    """
    n = g.n
    if not 1 <= t <= n:
        raise ValueError(f"need 1 <= t <= n, got t={t}, n={n}")
    m = (n // t) & ~1
    if m == 0:
        raise ValueError(f"clusters would be empty with t={t}, n={n}")
    best: Optional[Partition] = None
    best_index = -1.0
    for round_ in range(max(1, refine)):
        rng = random.Random(mix64(seed, 0x9A27, round_))
        perm = list(range(n))
        rng.shuffle(perm)
        clusters = tuple(
            frozenset(perm[i * m : (i + 1) * m]) for i in range(t)
        )
        part = Partition(frozenset(perm[t * m :]), clusters, m)
        idx = _mean_square_density(g, part)
        if idx > best_index:
            best, best_index = part, idx
    assert best is not None
    return best


def _mean_square_density(g: Graph, p: Partition) -> float:
    if p.t < 2:
        return 0.0
    masks = [mask_of(cl) for cl in p.clusters]
    total = 0.0
    for i in range(p.t):
        for j in range(i + 1, p.t):
            e = sum((g.adjacency_mask(v) & masks[j]).bit_count() for v in bits(masks[i]))
            total += (e / (p.m * p.m)) ** 2
    return total / (p.t * (p.t - 1) / 2)


def is_eps_regular(
    g: Graph,
    a: Iterable[int],
    b: Iterable[int],
    eps: Threshold,
    exact_cap: int = EXACT_CAP,
) -> RegularityVerdict:
    """Is (a, b) an eps-regular pair?

    Regular means every X ⊆ a, Y ⊆ b with |X| > eps|a|, |Y| > eps|b| has
    |d(X,Y) - d(a,b)| < eps.
    """
    am, bm = mask_of(a), mask_of(b)
    if am == 0 or bm == 0:
        raise ValueError("regularity needs nonempty sets")
    if am & bm:
        raise ValueError("regularity needs disjoint sets")
    epsf = Fraction(eps)
    if epsf <= 0:
        raise ValueError("eps must be positive")
    a_list = sorted(bits(am))
    b_list = sorted(bits(bm))
    if len(a_list) <= exact_cap and len(b_list) <= exact_cap:
        return _exact_check(g, a_list, b_list, epsf)
    return _heuristic_check(g, a_list, b_list, epsf)


def _exact_check(g: Graph, a_list: list[int], b_list: list[int], eps: Fraction) -> RegularityVerdict:
    na, nb = len(a_list), len(b_list)
    p, q = eps.numerator, eps.denominator
    # column bitmasks over a-indices
    col = [0] * nb
    for ia, va in enumerate(a_list):
        adj = g.adjacency_mask(va)
        for jb, vb in enumerate(b_list):
            if (adj >> vb) & 1:
                col[jb] |= 1 << ia
    e_ab = sum(c.bit_count() for c in col)
    nanb = na * nb
    low_j = [jb for jb in range(nb)]
    for xmask in range(1, 1 << na):
        xsz = xmask.bit_count()
        if xsz * q <= p * na:
            continue
        cnt = [(col[jb] & xmask).bit_count() for jb in low_j]
        e_of = [0] * (1 << nb)
        for ymask in range(1, 1 << nb):
            low = ymask & -ymask
            e_of[ymask] = e_of[ymask ^ low] + cnt[low.bit_length() - 1]
        for ymask in range(1, 1 << nb):
            ysz = ymask.bit_count()
            if ysz * q <= p * nb:
                continue
            # |e/(x*y) - E/(na*nb)| >= eps, cleared of denominators
            lhs = abs(e_of[ymask] * nanb - e_ab * xsz * ysz) * q
            if lhs >= p * xsz * ysz * nanb:
                x = frozenset(a_list[i] for i in bits(xmask))
                y = frozenset(b_list[j] for j in bits(ymask))
                dev = abs(
                    Fraction(e_of[ymask], xsz * ysz) - Fraction(e_ab, nanb)
                )
                return RegularityVerdict(False, RegularityWitness(x, y, dev), "exact")
    return RegularityVerdict(True, None, "exact")


def _heuristic_check(g: Graph, a_list: list[int], b_list: list[int], eps: Fraction) -> RegularityVerdict:
    na, nb = len(a_list), len(b_list)
    p, q = eps.numerator, eps.denominator
    bmask = mask_of(b_list)
    bpos = {v: j for j, v in enumerate(b_list)}
    mat = np.zeros((na, nb), dtype=np.int64)
    for i, va in enumerate(a_list):
        for vb in bits(g.adjacency_mask(va) & bmask):
            mat[i, bpos[vb]] = 1
    d_ab = mat.sum() / (na * nb)
    eps_float = p / q
    row_asc = np.argsort(mat.sum(axis=1), kind="stable")
    col_asc = np.argsort(mat.sum(axis=0), kind="stable")
    xs = np.arange(1, na + 1, dtype=np.float64)
    ys = np.arange(1, nb + 1, dtype=np.float64)
    area = np.outer(xs, ys)
    min_x = (p * na) // q + 1  # smallest size with x*q > p*na
    min_y = (p * nb) // q + 1
    candidates: list[tuple[float, np.ndarray, np.ndarray, int, int]] = []
    for rows in (row_asc, row_asc[::-1]):
        for cols in (col_asc, col_asc[::-1]):
            sub = mat[rows][:, cols]
            cum = sub.cumsum(axis=0).cumsum(axis=1)
            dev = np.abs(cum / area - d_ab)
            dev[: min_x - 1, :] = -1.0
            dev[:, : min_y - 1] = -1.0
            flat = int(dev.argmax())
            i, j = flat // nb, flat % nb
            if dev[i, j] >= eps_float - 1e-12:
                candidates.append((float(dev[i, j]), rows, cols, i, j))
    d_exact = density(g, a_list, b_list)
    for _, rows, cols, i, j in sorted(candidates, key=lambda c: -c[0]):
        x = frozenset(a_list[r] for r in rows[: i + 1])
        y = frozenset(b_list[ccc] for ccc in cols[: j + 1])
        dxy = density(g, x, y)
        deviation = abs(dxy - d_exact)
        if deviation >= eps:
            return RegularityVerdict(False, RegularityWitness(x, y, deviation), "heuristic")
    return RegularityVerdict(True, None, "heuristic")


def build_cluster_graph(g: Graph, p: Partition, d: Threshold) -> ClusterGraph:
    """Cluster graph with an edge exactly when the pair density is >= d."""
    p.validate(g)
    dfrac = Fraction(d)
    masks = [mask_of(cl) for cl in p.clusters]
    edges: dict[tuple[int, int], Fraction] = {}
    for i in range(p.t):
        for j in range(i + 1, p.t):
            e = sum((g.adjacency_mask(v) & masks[j]).bit_count() for v in bits(masks[i]))
            dij = Fraction(e, p.m * p.m)
            if dij >= dfrac:
                edges[(i, j)] = dij
    return ClusterGraph(p.t, dfrac, edges)


def clean_super_regular(
    g: Graph,
    a: Iterable[int],
    b: Iterable[int],
    eps: Threshold,
    d: Threshold,
) -> tuple[VertexSet, VertexSet]:
    """Trim the pair (a, b) down to a super-regular core.

    Vertices whose cross-degree falls below (d - eps) times the opposite side
    are removed, padded (lowest ids first) to exactly ceil(eps |a|) removals
    per side. The surviving pair is audited: every remaining vertex must keep
    cross-degree strictly above (d - 3 eps) times the surviving side size.
    """
    am, bm = mask_of(a), mask_of(b)
    if am == 0 or bm == 0 or am & bm:
        raise ValueError("need disjoint nonempty sides")
    na, nb = am.bit_count(), bm.bit_count()
    if na != nb:
        raise ValueError("sides must have equal size")
    epsf, dfrac = Fraction(eps), Fraction(d)
    if dfrac <= 3 * epsf:
        raise ValueError("need d > 3*eps")
    lo = (dfrac - epsf) * nb
    bad_a = [v for v in sorted(bits(am)) if (g.adjacency_mask(v) & bm).bit_count() < lo]
    bad_b = [v for v in sorted(bits(bm)) if (g.adjacency_mask(v) & am).bit_count() < lo]
    r = -((-epsf.numerator * na) // epsf.denominator)  # ceil(eps * |a|)
    if r >= na:
        raise CleaningFailed(f"eps={float(epsf):.3f} would remove the whole side")
    if len(bad_a) > epsf * na or len(bad_b) > epsf * nb:
        raise CleaningFailed(
            f"{len(bad_a)}/{len(bad_b)} low-degree vertices exceed eps*|side| = {float(epsf) * na:.2f}"
        )
    drop_a = set(bad_a)
    for v in sorted(bits(am)):
        if len(drop_a) >= r:
            break
        drop_a.add(v)
    drop_b = set(bad_b)
    for v in sorted(bits(bm)):
        if len(drop_b) >= r:
            break
        drop_b.add(v)
    x = frozenset(bits(am)) - drop_a
    y = frozenset(bits(bm)) - drop_b
    xm, ym = mask_of(x), mask_of(y)
    floor_deg = (dfrac - 3 * epsf) * len(y)
    for v in sorted(x):
        if (g.adjacency_mask(v) & ym).bit_count() <= floor_deg:
            raise CleaningFailed(f"vertex {v} fails the super-regularity audit")
    for v in sorted(y):
        if (g.adjacency_mask(v) & xm).bit_count() <= floor_deg:
            raise CleaningFailed(f"vertex {v} fails the super-regularity audit")
    return x, y
