"""End-to-end covers: few vertex-disjoint cycles, then few vertex-disjoint
paths, for dense regular graphs.

The cycle stage follows the regularity route: equitable partition, per-pair
regularity verdicts, cluster graph on the dense regular pairs, half-integral
matching, cluster splitting, super-regular cleaning, and one spanning cycle
per cleaned pair. The path stage holds out a random reservoir first, covers
the rest with cycles, cuts them open, and merges paths through unused
reservoir vertices until the target count is reached.

The guarantees behind the route are asymptotic, so at desk scale the
parameter chain (d = alpha*c/9 and downward) often leaves no usable regular
pairs. When that happens the run degrades to a labeled greedy fallback
(rotation-extension stripping plus the same reservoir connection loop); the
report always names the route taken, and every emitted cover passes the same
structural audit either way.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from ._bits import bits, mask_of, mix64
from .generators import degree_from_ratio
from .graph import Graph, induced_subgraph
from .hamilton import (
    Cycle,
    Path,
    cycle_to_path,
    longest_cycle,
    longest_path,
    spanning_cycle_bipartite,
)
from .matching import (
    SizeLimitError,
    cluster_matching_pairs,
    fractional_matching,
    max_deficiency,
)
from .regularity import (
    CleaningFailed,
    ClusterGraph,
    build_cluster_graph,
    clean_super_regular,
    equitable_partition,
    is_eps_regular,
)


class DegenerateParameterError(ValueError):
    """Parameter windows that no integer can satisfy."""


class ReservoirError(RuntimeError):
    """Rejection sampling for the reservoir ran out of attempts."""


def _dec(x: Union[int, float, Fraction]) -> Fraction:
    """Snap a float to 9 decimals, exactly: 0.3 means 3/10, not the binary float."""
    if isinstance(x, Fraction):
        return x
    return Fraction(round(x * 10**9), 10**9)


def paths_limit(c: float) -> int:
    """floor(1/c)."""
    return int(1 / _dec(c))


def paths_limit_bipartite(c: float) -> int:
    """floor(1/(2c))."""
    return int(1 / (2 * _dec(c)))


# --------------------------------------------------------------- configuration


@dataclass(frozen=True)
class PipelineConfig:
    """Run parameters; build with `derive` to get the standard chain
    d = alpha*c/9, delta = d/2, eps = min(eps1, d/6, 3d/(2c)), gamma = alpha/4,
    beta = 3d/c.
    """

    c: float
    alpha: float
    d: float
    eps: float
    delta: float
    gamma: float
    beta: float
    t: Optional[int] = None
    seed: int = 0
    overrides: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not 0 < self.c <= 1:
            raise ValueError("c must be in (0, 1]")
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must be in (0, 1]")
        tol = 1e-9
        if not 0 < self.eps <= self.d / 6 + tol:
            raise ValueError("need 0 < eps <= d/6")
        if abs(self.delta - self.d / 2) > tol:
            raise ValueError("delta must equal d/2")
        if abs(self.beta - 3 * self.d / self.c) > tol:
            raise ValueError("beta must equal 3d/c")
        if self.gamma > 0.25 + tol:
            raise ValueError("gamma must be at most 1/4")

    @classmethod
    def derive(
        cls,
        c: float,
        alpha: float,
        *,
        d: Optional[float] = None,
        eps: Optional[float] = None,
        eps1: Optional[float] = None,
        gamma: Optional[float] = None,
        t: Optional[int] = None,
        seed: int = 0,
    ) -> "PipelineConfig":
        if not 0 < c <= 1:
            raise ValueError("c must be in (0, 1]")
        if not 0 < alpha <= 1:
            raise ValueError("alpha must be in (0, 1]")
        d_ = d if d is not None else alpha * c / 9
        delta = d_ / 2
        eps1_ = eps1 if eps1 is not None else 0.1 * delta
        eps_ = eps if eps is not None else min(eps1_, d_ / 6, 3 * d_ / (2 * c))
        gamma_ = gamma if gamma is not None else alpha / 4
        return cls(
            c=c,
            alpha=alpha,
            d=d_,
            eps=eps_,
            delta=delta,
            gamma=gamma_,
            beta=3 * d_ / c,
            t=t,
            seed=seed,
            overrides={"d": d, "eps": eps, "eps1": eps1, "gamma": gamma},
        )

    def with_alpha(self, alpha: float) -> "PipelineConfig":
        ov = {k: v for k, v in self.overrides.items() if v is not None}
        try:
            return PipelineConfig.derive(self.c, alpha, t=self.t, seed=self.seed, **ov)
        except ValueError:
            # an explicit eps can violate eps <= d/6 once d is re-derived; let
            # the chain recompute it
            ov.pop("eps", None)
            return PipelineConfig.derive(self.c, alpha, t=self.t, seed=self.seed, **ov)

    def with_seed(self, seed: int) -> "PipelineConfig":
        return replace(self, seed=seed)


# --------------------------------------------------------------------- results


@dataclass
class CycleSet:
    cycles: list[Cycle]
    uncovered: frozenset[int]


@dataclass
class PathCover:
    paths: list[Path]
    uncovered: frozenset[int]


@dataclass
class RunReport:
    """Per-stage diagnostics; `method` names the route that produced the cover."""

    method: str = "regularity-pipeline"
    n: int = 0
    t: int = 0
    m: int = 0
    v0: int = 0
    regular_pair_fraction: float = 0.0
    cluster_edges: int = 0
    mu_f: Optional[Fraction] = None
    deficiency_ok: Optional[bool] = None
    pairings: int = 0
    cycles_found: int = 0
    cycles_failed: int = 0
    reservoir_size: int = 0
    reservoir_spent: int = 0
    connections: int = 0
    direct_joins: int = 0
    trimmed: int = 0
    absorbed: int = 0
    final_count: int = 0
    covered: int = 0
    uncovered: int = 0
    success: bool = False
    notes: list[str] = field(default_factory=list)
    merges: list[tuple[int, int, int]] = field(default_factory=list)
    reservoir_vertices: frozenset[int] = frozenset()

    def note(self, text: str) -> None:
        self.notes.append(text)

    def to_kv_text(self) -> str:
        skip = {"notes", "merges", "reservoir_vertices"}
        lines = []
        for name, value in vars(self).items():
            if name in skip:
                continue
            if isinstance(value, Fraction):
                value = f"{value} ({float(value):.6g})"
            lines.append(f"{name}={value}")
        lines.append(f"notes={'; '.join(self.notes) if self.notes else '-'}")
        return "\n".join(lines) + "\n"


@dataclass
class CheckItem:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class CoverCheck:
    items: list[CheckItem]

    @property
    def ok(self) -> bool:
        return all(item.ok for item in self.items)

    def __str__(self) -> str:
        return "\n".join(
            f"[{'PASS' if i.ok else 'FAIL'}] {i.name}" + (f": {i.detail}" if i.detail else "")
            for i in self.items
        )


# ------------------------------------------------------------------- reservoir


def reservoir(
    g: Graph,
    gamma: float,
    eps: float,
    seed: int = 0,
    max_attempts: int = 50,
) -> frozenset[int]:
    """Random vertex set R with |R| in (1±eps)*gamma*n and, for every vertex,
    deg(v, R) in (1±eps)*gamma*k (open windows; k is the regular degree).

    Sampled by independent inclusion with probability gamma, rejected until
    both windows hold.
    """
    n = g.n
    k = g.regular_degree()
    if not 0 < gamma <= 1:
        raise DegenerateParameterError(f"gamma={gamma} must be in (0, 1]")
    if eps <= 0:
        raise DegenerateParameterError(f"eps={eps} must be positive")
    ga, ep = _dec(gamma), _dec(eps)
    size_lo, size_hi = (1 - ep) * ga * n, (1 + ep) * ga * n
    deg_lo, deg_hi = (1 - ep) * ga * k, (1 + ep) * ga * k
    if math.floor(size_lo) + 1 >= size_hi:
        raise DegenerateParameterError(
            f"no integer size in ({float(size_lo):.3f}, {float(size_hi):.3f})"
        )
    if math.floor(deg_lo) + 1 >= deg_hi:
        raise DegenerateParameterError(
            f"no integer degree in ({float(deg_lo):.3f}, {float(deg_hi):.3f})"
        )
    rng = random.Random(mix64(seed, 0x6E5E6))
    for _ in range(max_attempts):
        rmask = 0
        size = 0
        for v in range(n):
            if rng.random() < gamma:
                rmask |= 1 << v
                size += 1
        if not size_lo < size < size_hi:
            continue
        if all(
            deg_lo < (g.adjacency_mask(v) & rmask).bit_count() < deg_hi
            for v in range(n)
        ):
            return frozenset(bits(rmask))
    raise ReservoirError(f"no valid reservoir in {max_attempts} attempts")


def chernoff_upper(nprime: int, zeta: float, x: float) -> float:
    """Bound on P[Bin(n', zeta) >= n'*zeta + x]: exp(-x^2 / (2 n' zeta + x/3))."""
    _chernoff_domain(nprime, zeta, x)
    return math.exp(-(x * x) / (2 * nprime * zeta + x / 3))


def chernoff_lower(nprime: int, zeta: float, x: float) -> float:
    """Bound on P[Bin(n', zeta) <= n'*zeta - x]: exp(-x^2 / (2 n' zeta))."""
    _chernoff_domain(nprime, zeta, x)
    return math.exp(-(x * x) / (2 * nprime * zeta))


def _chernoff_domain(nprime: int, zeta: float, x: float) -> None:
    if nprime < 1:
        raise ValueError("n' must be at least 1")
    if not 0 < zeta < 1:
        raise ValueError("zeta must be in (0, 1)")
    if x <= 0:
        raise ValueError("x must be positive")


# ----------------------------------------------------------------- cycle cover


def _default_t(n: int) -> int:
    """Cluster count minimizing the route's built-in losses: the leftover
    n - t*m plus ~2 vertices of cleaning per cluster."""
    best: Optional[tuple[int, int, int]] = None
    for t in range(4, 13):
        m = (n // t) & ~1
        if m < 8:
            continue
        key = ((n - t * m) + 2 * t, -m, t)
        if best is None or key < best:
            best = key
    if best is None:
        return max(2, n // 8)
    return best[2]


def cycle_cover(
    g: Graph,
    cfg: PipelineConfig,
    strict_window: bool = True,
) -> tuple[CycleSet, RunReport]:
    """Cover all but ~alpha*n vertices by at most t vertex-disjoint cycles.

    Tries the regularity route; on shortfall, strips long cycles greedily and
    labels the report `greedy-fallback`. Never emits overlapping cycles.
    """
    n = g.n
    rep = RunReport(n=n)
    eps, d = cfg.eps, cfg.d
    cn = _dec(cfg.c) * n
    lo, hi = (1 - _dec(eps)) * cn, (1 + _dec(eps)) * cn
    violations = sum(1 for v in range(n) if not lo < g.degree(v) < hi)
    if violations:
        msg = f"{violations} vertices outside the (1±eps)c*n degree window"
        if strict_window:
            raise ValueError(msg)
        rep.note(msg)
    alpha_cap = int(_dec(cfg.alpha) * n)
    cycles = _regularity_cycles(g, cfg, rep)
    if cycles is not None:
        covered = set().union(*(c.vertices for c in cycles)) if cycles else set()
        if n - len(covered) <= alpha_cap:
            rep.cycles_found = len(cycles)
            rep.covered = len(covered)
            rep.uncovered = n - len(covered)
            rep.final_count = len(cycles)
            rep.success = True
            return CycleSet(cycles, frozenset(range(n)) - covered), rep
        rep.note(
            f"regularity route covered only {len(covered)}/{n}, "
            f"needed {n - alpha_cap}; falling back"
        )
    cycles = _fallback_cycles(g, cfg, rep, alpha_cap)
    rep.method = "greedy-fallback"
    covered = set().union(*(c.vertices for c in cycles)) if cycles else set()
    rep.cycles_found = len(cycles)
    rep.covered = len(covered)
    rep.uncovered = n - len(covered)
    rep.final_count = len(cycles)
    rep.success = rep.uncovered <= alpha_cap
    return CycleSet(cycles, frozenset(range(n)) - covered), rep


def _regularity_cycles(
    g: Graph,
    cfg: PipelineConfig,
    rep: RunReport,
) -> Optional[list[Cycle]]:
    """The partition/matching/embedding route; None if it cannot proceed."""
    n = g.n
    eps, d = cfg.eps, cfg.d
    t = cfg.t if cfg.t is not None else _default_t(n)
    m = (n // t) & ~1
    if t < 2 or m < 8:
        rep.note(f"clusters too small (t={t}, m={m}) for the regularity route")
        return None
    part = equitable_partition(g, t, seed=mix64(cfg.seed, 0x9A91))
    rep.t, rep.m, rep.v0 = part.t, part.m, len(part.exceptional)
    if len(part.exceptional) > _dec(eps) * n:
        rep.note(f"|V_0|={rep.v0} exceeds eps*n={float(eps) * n:.2f}")
    eps_f = Fraction(eps)
    verdicts: dict[tuple[int, int], bool] = {}
    regular_count = 0
    for i in range(t):
        for j in range(i + 1, t):
            v = is_eps_regular(g, part.clusters[i], part.clusters[j], eps_f)
            verdicts[(i, j)] = v.regular
            regular_count += int(v.regular)
    total_pairs = t * (t - 1) // 2
    rep.regular_pair_fraction = regular_count / total_pairs if total_pairs else 1.0
    dense = build_cluster_graph(g, part, Fraction(d))
    usable = {e: dens for e, dens in dense.edges.items() if verdicts[e]}
    h = ClusterGraph(t, dense.threshold, usable)
    rep.cluster_edges = len(usable)
    if not usable:
        rep.note("no dense regular pairs")
        return None
    hg = h.to_graph()
    f = fractional_matching(hg)
    rep.mu_f = f.value
    try:
        deficiency, _ = max_deficiency(hg)
    except SizeLimitError:
        deficiency = t - 2 * f.value  # same quantity by the deficiency formula
    rep.deficiency_ok = deficiency <= _dec(cfg.beta) * t
    if not rep.deficiency_ok:
        rep.note(f"cluster-graph deficiency {deficiency} exceeds beta*t")
        return None
    pairings = cluster_matching_pairs(h, f)
    rep.pairings = len(pairings)
    half = m // 2
    removed = -((-eps_f.numerator * half) // eps_f.denominator)  # ceil(eps*half)
    predicted = 2 * len(pairings) * (half - removed)
    if predicted < n - int(_dec(cfg.alpha) * n):
        rep.note(
            f"predicted coverage {predicted} cannot reach {n - int(_dec(cfg.alpha) * n)}"
        )
        return None
    halves: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    for cl in part.clusters:
        ordered = tuple(sorted(cl))
        halves.append((ordered[:half], ordered[half:]))
    cycles: list[Cycle] = []
    for idx, (i, hi_, j, hj) in enumerate(pairings):
        a = halves[i][hi_ - 1]
        b = halves[j][hj - 1]
        try:
            x, y = clean_super_regular(g, a, b, eps_f, Fraction(d))
        except CleaningFailed as exc:
            rep.cycles_failed += 1
            rep.note(f"pair ({i},{j}): cleaning failed: {exc}")
            continue
        found = spanning_cycle_bipartite(g, x, y, seed=mix64(cfg.seed, 0xE3BED, idx))
        if found.ok:
            cycles.append(found.cycle)
        else:
            rep.cycles_failed += 1
            rep.note(f"pair ({i},{j}): spanning-cycle search failed")
    return cycles


def _fallback_cycles(
    g: Graph,
    cfg: PipelineConfig,
    rep: RunReport,
    alpha_cap: int,
) -> list[Cycle]:
    n = g.n
    t_cap = cfg.t if cfg.t is not None else max(_default_t(n), 4)
    active = set(range(n))
    cycles: list[Cycle] = []
    idx = 0
    while len(active) >= 3 and n - _covered_count(cycles) > alpha_cap and len(cycles) < t_cap:
        found = longest_cycle(
            g,
            within=active,
            budget=12 * len(active),
            seed=mix64(cfg.seed, 0xFA11, idx),
        )
        idx += 1
        if found is None or len(found) < 3:
            break
        cycles.append(found)
        active -= set(found.vertices)
    return cycles


def _covered_count(cycles: Sequence[Cycle]) -> int:
    return sum(len(c) for c in cycles)


# ------------------------------------------------------------ path connection


def connect_paths(
    g: Graph,
    paths: Sequence[Path],
    r: Iterable[int],
    limit: int,
) -> tuple[list[Path], frozenset[int], list[tuple[int, int, int]]]:
    """Merge paths through common reservoir neighbors of their chosen ends
    until at most `limit` paths remain or no merge is possible.

    Each path's connector end is its lexicographically smaller endpoint,
    re-evaluated after every merge. Candidate merges are scanned smallest
    (i, j) first, then smallest w. Returns (paths, leftover reservoir, log of
    (i, j, w) merges against the pre-merge indexing of each round).
    """
    paths = list(paths)
    rset = set(r)
    merges: list[tuple[int, int, int]] = []
    while len(paths) > limit:
        rmask = mask_of(rset)
        if not rmask:
            break
        ends = [min(p.ends) for p in paths]
        found = None
        for i in range(len(paths)):
            ai = g.adjacency_mask(ends[i])
            if not ai & rmask:
                continue
            for j in range(i + 1, len(paths)):
                common = ai & g.adjacency_mask(ends[j]) & rmask
                if common:
                    w = (common & -common).bit_length() - 1
                    found = (i, j, w)
                    break
            if found:
                break
        if not found:
            break
        i, j, w = found
        pi = paths[i] if paths[i].vertices[-1] == ends[i] else paths[i].reversed()
        pj = paths[j] if paths[j].vertices[0] == ends[j] else paths[j].reversed()
        merged = Path(pi.vertices + (w,) + pj.vertices)
        paths = [p for k, p in enumerate(paths) if k not in (i, j)]
        paths.append(merged)
        rset.discard(w)
        merges.append((i, j, w))
    return paths, frozenset(rset), merges


def _connect_paths_bipartite(
    g: Graph,
    paths: Sequence[Path],
    r: Iterable[int],
    limit: int,
    xmask: int,
    ymask: int,
) -> tuple[list[Path], frozenset[int], list[tuple[int, int, int]], int]:
    """Bipartite connection: merge at X-side ends through w in R ∩ Y.

    Paths whose ends both lie in Y are trimmed by one end vertex (at merge
    time) to expose an X end. Returns (paths, leftover reservoir, merges,
    number of trimmed vertices).
    """
    paths = list(paths)
    rset = set(r)
    merges: list[tuple[int, int, int]] = []
    trimmed = 0

    def x_end_plans(p: Path) -> list[tuple[int, Optional[int]]]:
        """Candidate (x_end, end_vertex_to_trim or None) pairs for this path."""
        e0, e1 = p.vertices[0], p.vertices[-1]
        plans: list[tuple[int, Optional[int]]] = []
        if (xmask >> e0) & 1:
            plans.append((e0, None))
        if e1 != e0 and (xmask >> e1) & 1:
            plans.append((e1, None))
        if not plans and len(p) >= 2:
            # both ends in Y: trimming either end exposes its neighbor in X
            plans.append((p.vertices[1], e0))
            if len(p) >= 3:
                plans.append((p.vertices[-2], e1))
        return sorted(set(plans))

    while len(paths) > limit:
        rymask = mask_of(rset) & ymask
        if not rymask:
            break
        all_plans = [x_end_plans(p) for p in paths]
        found = None
        for i in range(len(paths)):
            for plan_i in all_plans[i]:
                ai = g.adjacency_mask(plan_i[0])
                if not ai & rymask:
                    continue
                for j in range(i + 1, len(paths)):
                    for plan_j in all_plans[j]:
                        common = ai & g.adjacency_mask(plan_j[0]) & rymask
                        if common:
                            w = (common & -common).bit_length() - 1
                            found = (i, j, w, plan_i, plan_j)
                            break
                    if found:
                        break
                if found:
                    break
            if found:
                break
        if not found:
            break
        i, j, w, plan_i, plan_j = found

        def apply_plan(p: Path, plan: tuple[int, Optional[int]]) -> Path:
            nonlocal trimmed
            _, trim = plan
            if trim is not None:
                vs = p.vertices[1:] if p.vertices[0] == trim else p.vertices[:-1]
                p = Path(vs)
                trimmed += 1
            return p

        pi = apply_plan(paths[i], plan_i)
        pj = apply_plan(paths[j], plan_j)
        xi, xj = plan_i[0], plan_j[0]
        pi = pi if pi.vertices[-1] == xi else pi.reversed()
        pj = pj if pj.vertices[0] == xj else pj.reversed()
        merged = Path(pi.vertices + (w,) + pj.vertices)
        paths = [p for k, p in enumerate(paths) if k not in (i, j)]
        paths.append(merged)
        rset.discard(w)
        merges.append((i, j, w))
    return paths, frozenset(rset), merges, trimmed


def _concat_paths(
    g: Graph,
    paths: list[Path],
    limit: int,
) -> tuple[list[Path], int]:
    """Join pairs of paths whose ends are directly adjacent (no connector).

    Scanned smallest (i, j) first, head/tail combinations in a fixed order.
    """
    paths = list(paths)
    joins = 0
    progress = True
    while len(paths) > limit and progress:
        progress = False
        found = None
        for i in range(len(paths)):
            hi, ti = paths[i].vertices[0], paths[i].vertices[-1]
            for j in range(i + 1, len(paths)):
                hj, tj = paths[j].vertices[0], paths[j].vertices[-1]
                if g.adjacent(ti, hj):
                    found = (i, j, False, False)
                elif g.adjacent(ti, tj):
                    found = (i, j, False, True)
                elif g.adjacent(hi, hj):
                    found = (i, j, True, False)
                elif g.adjacent(hi, tj):
                    found = (i, j, True, True)
                if found:
                    break
            if found:
                break
        if not found:
            break
        i, j, rev_i, rev_j = found
        pi = paths[i].reversed() if rev_i else paths[i]
        pj = paths[j].reversed() if rev_j else paths[j]
        merged = Path(pi.vertices + pj.vertices)
        paths = [p for k, p in enumerate(paths) if k not in (i, j)]
        paths.append(merged)
        joins += 1
        progress = True
    return paths, joins


def _absorb(
    g: Graph,
    paths: list[Path],
    free: set[int],
) -> tuple[list[Path], int]:
    """Pull free vertices into the paths: extend ends greedily, then splice a
    free vertex between any two consecutive path vertices it is adjacent to.
    Deterministic (smallest vertex, first position)."""
    absorbed = 0
    changed = True
    while changed and free:
        changed = False
        fmask = mask_of(free)
        for idx, p in enumerate(paths):
            vs = p.vertices
            ext_tail = g.adjacency_mask(vs[-1]) & fmask
            if ext_tail:
                v = (ext_tail & -ext_tail).bit_length() - 1
                vs = vs + (v,)
                free.discard(v)
                fmask &= ~(1 << v)
                absorbed += 1
                changed = True
            ext_head = g.adjacency_mask(vs[0]) & fmask
            if ext_head:
                v = (ext_head & -ext_head).bit_length() - 1
                vs = (v,) + vs
                free.discard(v)
                fmask &= ~(1 << v)
                absorbed += 1
                changed = True
            if vs is not p.vertices:
                paths[idx] = Path(vs)
        if changed or not free:
            continue
        # no end extends; try splicing w between consecutive path vertices
        for w in sorted(free):
            aw = g.adjacency_mask(w)
            done = False
            for idx, p in enumerate(paths):
                vs = p.vertices
                occ = 0
                for i, v in enumerate(vs):
                    if (aw >> v) & 1:
                        occ |= 1 << i
                gap = occ & (occ >> 1)
                if gap:
                    i = (gap & -gap).bit_length() - 1
                    paths[idx] = Path(vs[: i + 1] + (w,) + vs[i + 1 :])
                    free.discard(w)
                    absorbed += 1
                    changed = True
                    done = True
                    break
            if done:
                break
    return paths, absorbed


# ------------------------------------------------------------------ path cover


def _reservoir_relaxed(g: Graph, cfg: PipelineConfig, eps0: float, rep: RunReport) -> frozenset[int]:
    """Reservoir with the configured eps, doubling it on failure (reported)."""
    eps_res = eps0
    while eps_res <= 1.0:
        try:
            r = reservoir(g, cfg.gamma, eps_res, seed=mix64(cfg.seed, 0x6E5))
            if eps_res != eps0:
                rep.note(f"reservoir accepted at relaxed eps={eps_res:.4g}")
            return r
        except (DegenerateParameterError, ReservoirError):
            if eps_res == 1.0:
                break
            eps_res = min(eps_res * 2, 1.0)
    rep.note("reservoir disabled (no eps up to 1 produced a valid set)")
    return frozenset()


def _cycles_to_paths(
    cycset: CycleSet,
    mapping: tuple[int, ...],
) -> list[Path]:
    out = []
    for c in cycset.cycles:
        p = cycle_to_path(c)
        out.append(Path(tuple(mapping[v] for v in p.vertices)))
    return out


def _strip_paths(
    g: Graph,
    active: set[int],
    seed: int,
    cap: int,
    budget_factor: int = 12,
) -> list[Path]:
    paths: list[Path] = []
    idx = 0
    active = set(active)
    while active and len(paths) < cap:
        p = longest_path(
            g,
            within=active,
            budget=budget_factor * max(len(active), 1),
            seed=mix64(seed, 0x57A1, idx),
        )
        idx += 1
        paths.append(p)
        active -= set(p.vertices)
    return paths


def _finalize(
    g: Graph,
    paths: list[Path],
    limit: int,
    alpha_cap: int,
    rep: RunReport,
) -> PathCover:
    covered = set()
    for p in paths:
        covered |= set(p.vertices)
    uncovered = frozenset(range(g.n)) - covered
    rep.final_count = len(paths)
    rep.covered = len(covered)
    rep.uncovered = len(uncovered)
    rep.success = len(paths) <= limit and len(uncovered) <= alpha_cap
    return PathCover(paths, uncovered)


def path_cover(g: Graph, cfg: PipelineConfig) -> tuple[PathCover, RunReport]:
    """At most floor(1/c) vertex-disjoint paths covering all but alpha*n
    vertices of a ceil(c*n)-regular graph (success case; shortfalls are
    reported, never hidden).
    """
    n = g.n
    k = g.regular_degree()
    expected = degree_from_ratio(n, cfg.c)
    if k != expected:
        raise ValueError(
            f"graph is {k}-regular but cfg.c={cfg.c} implies ceil(c*n)={expected}"
        )
    limit = paths_limit(cfg.c)
    alpha_cap = int(_dec(cfg.alpha) * n)
    thm_eps = min(cfg.eps, ((limit + 1) * cfg.c - 1) / 3)
    rep = RunReport(n=n)
    r = _reservoir_relaxed(g, cfg, max(thm_eps, 1e-12), rep)
    rep.reservoir_size = len(r)
    rep.reservoir_vertices = r
    rest = sorted(set(range(n)) - r)
    g1, mapping = induced_subgraph(g, rest)
    cycset, crep = cycle_cover(g1, cfg.with_alpha(cfg.alpha / 2), strict_window=False)
    _copy_cycle_stage(rep, crep)
    paths = _cycles_to_paths(cycset, mapping)
    if not paths:
        paths = _strip_paths(g, set(rest), mix64(cfg.seed, 2), cap=3 * (limit + 1))
        rep.method = "greedy-fallback"
    paths, _ = _connect_absorb(g, paths, r, limit, rep)
    cover = _finalize(g, paths, limit, alpha_cap, rep)
    if rep.success:
        return cover, rep

    # labeled fallback: strip paths directly, then the same connection loop;
    # a few attempts with fresh seeds and growing budget
    for attempt in range(3):
        fb_rep = RunReport(n=n, method="greedy-fallback")
        fb_rep.reservoir_size = len(r)
        fb_rep.reservoir_vertices = r
        fb_paths = _strip_paths(
            g,
            set(rest),
            mix64(cfg.seed, 3, attempt),
            cap=3 * (limit + 1),
            budget_factor=12 + 8 * attempt,
        )
        fb_paths, _ = _connect_absorb(g, fb_paths, r, limit, fb_rep)
        fb_cover = _finalize(g, fb_paths, limit, alpha_cap, fb_rep)
        if _better(fb_rep, fb_cover, rep, cover):
            fb_rep.notes = rep.notes + fb_rep.notes
            cover, rep = fb_cover, fb_rep
        if rep.success:
            break
    return cover, rep


def path_cover_bipartite(g: Graph, cfg: PipelineConfig) -> tuple[PathCover, RunReport]:
    """Bipartite version: at most floor(1/(2c)) paths; connections only use
    reservoir vertices on the Y side against path ends on the X side.
    """
    if g.bipartition is None:
        raise ValueError("graph has no bipartition")
    n = g.n
    k = g.regular_degree()
    expected = degree_from_ratio(n, cfg.c)
    if k != expected:
        raise ValueError(
            f"graph is {k}-regular but cfg.c={cfg.c} implies ceil(c*n)={expected}"
        )
    x, y = g.bipartition
    if len(x) != len(y):
        raise ValueError("regular bipartite graphs must have balanced sides")
    xmask, ymask = mask_of(x), mask_of(y)
    limit = paths_limit_bipartite(cfg.c)
    alpha_cap = int(_dec(cfg.alpha) * n)
    thm_eps = min(cfg.eps, ((limit + 1) * 2 * cfg.c - 1) / 3)
    rep = RunReport(n=n)
    r = _reservoir_relaxed(g, cfg, max(thm_eps, 1e-12), rep)
    rep.reservoir_size = len(r)
    rep.reservoir_vertices = r
    rest = sorted(set(range(n)) - r)
    # an alternating path covers at most 2*min(|X'|,|Y'|)+1 vertices, so hold
    # out the excess side (lowest ids); held-out vertices stay absorbable but
    # never serve as connectors
    xs = [v for v in rest if v in x]
    ys = [v for v in rest if v in y]
    drop = abs(len(xs) - len(ys))
    if drop:
        src = xs if len(xs) > len(ys) else ys
        del src[:drop]
        rest = sorted(xs + ys)
        rep.note(f"held out {drop} vertices to balance the working sides")
    g1, mapping = induced_subgraph(g, rest)
    cycset, crep = cycle_cover(g1, cfg.with_alpha(cfg.alpha / 2), strict_window=False)
    _copy_cycle_stage(rep, crep)
    paths = _cycles_to_paths(cycset, mapping)
    if not paths:
        paths = _strip_paths(g, set(rest), mix64(cfg.seed, 2), cap=3 * (limit + 1))
        rep.method = "greedy-fallback"
    paths, _ = _connect_absorb_bipartite(g, paths, r, limit, rep, xmask, ymask)
    cover = _finalize(g, paths, limit, alpha_cap, rep)
    if rep.success:
        return cover, rep

    for attempt in range(3):
        fb_rep = RunReport(n=n, method="greedy-fallback")
        fb_rep.reservoir_size = len(r)
        fb_rep.reservoir_vertices = r
        fb_paths = _strip_paths(
            g,
            set(rest),
            mix64(cfg.seed, 3, attempt),
            cap=3 * (limit + 1),
            budget_factor=12 + 8 * attempt,
        )
        fb_paths, _ = _connect_absorb_bipartite(
            g, fb_paths, r, limit, fb_rep, xmask, ymask
        )
        fb_cover = _finalize(g, fb_paths, limit, alpha_cap, fb_rep)
        if _better(fb_rep, fb_cover, rep, cover):
            fb_rep.notes = rep.notes + fb_rep.notes
            cover, rep = fb_cover, fb_rep
        if rep.success:
            break
    return cover, rep


def _copy_cycle_stage(rep: RunReport, crep: RunReport) -> None:
    rep.method = crep.method
    rep.t, rep.m, rep.v0 = crep.t, crep.m, crep.v0
    rep.regular_pair_fraction = crep.regular_pair_fraction
    rep.cluster_edges = crep.cluster_edges
    rep.mu_f = crep.mu_f
    rep.deficiency_ok = crep.deficiency_ok
    rep.pairings = crep.pairings
    rep.cycles_found = crep.cycles_found
    rep.cycles_failed = crep.cycles_failed
    rep.notes.extend(crep.notes)


def _connect_absorb(
    g: Graph,
    paths: list[Path],
    r: frozenset[int],
    limit: int,
    rep: RunReport,
) -> tuple[list[Path], frozenset[int]]:
    rset = r
    for _ in range(4):
        before = (len(paths), _covered_paths(paths))
        paths, rset, merges = connect_paths(g, paths, rset, limit)
        rep.connections += len(merges)
        rep.merges.extend(merges)
        paths, joins = _concat_paths(g, paths, limit)
        rep.direct_joins += joins
        free = set(range(g.n)) - _covered_vertices(paths)
        paths, absorbed = _absorb(g, paths, free)
        rep.absorbed += absorbed
        rset = rset - _covered_vertices(paths)  # absorbed reservoir is no longer free
        if (len(paths), _covered_paths(paths)) == before:
            break
    rep.reservoir_spent = rep.connections
    return paths, rset


def _connect_absorb_bipartite(
    g: Graph,
    paths: list[Path],
    r: frozenset[int],
    limit: int,
    rep: RunReport,
    xmask: int,
    ymask: int,
) -> tuple[list[Path], frozenset[int]]:
    rset = r
    for _ in range(4):
        before = (len(paths), _covered_paths(paths))
        paths, rset, merges, trimmed = _connect_paths_bipartite(
            g, paths, rset, limit, xmask, ymask
        )
        rep.connections += len(merges)
        rep.merges.extend(merges)
        rep.trimmed += trimmed
        paths, joins = _concat_paths(g, paths, limit)
        rep.direct_joins += joins
        free = set(range(g.n)) - _covered_vertices(paths)
        paths, absorbed = _absorb(g, paths, free)
        rep.absorbed += absorbed
        rset = rset - _covered_vertices(paths)
        if (len(paths), _covered_paths(paths)) == before:
            break
    rep.reservoir_spent = rep.connections
    return paths, rset


def _covered_vertices(paths: Sequence[Path]) -> set[int]:
    out: set[int] = set()
    for p in paths:
        out |= set(p.vertices)
    return out


def _covered_paths(paths: Sequence[Path]) -> int:
    return sum(len(p) for p in paths)


def _better(rep_a: RunReport, cov_a: PathCover, rep_b: RunReport, cov_b: PathCover) -> bool:
    """Is result A strictly better than B? (success, then coverage, then count)"""
    key_a = (not rep_a.success, len(cov_a.uncovered), len(cov_a.paths))
    key_b = (not rep_b.success, len(cov_b.uncovered), len(cov_b.paths))
    return key_a < key_b


# ----------------------------------------------------------------- cover audit


def verify_cover(
    g: Graph,
    cover: Union[PathCover, CycleSet],
    max_count: Optional[int] = None,
    max_uncovered: Optional[int] = None,
) -> CoverCheck:
    """Itemized structural audit of a path or cycle cover."""
    units: Sequence
    closed = isinstance(cover, CycleSet)
    units = cover.cycles if closed else cover.paths
    items: list[CheckItem] = []

    bad_edge = None
    for u_idx, unit in enumerate(units):
        vs = unit.vertices
        pairs = zip(vs, vs[1:] + vs[:1]) if closed else zip(vs, vs[1:])
        for a, b in pairs:
            if not g.adjacent(a, b):
                bad_edge = (u_idx, a, b)
                break
        if bad_edge:
            break
    items.append(
        CheckItem(
            "adjacency",
            bad_edge is None,
            "" if bad_edge is None else f"unit {bad_edge[0]} uses non-edge ({bad_edge[1]},{bad_edge[2]})",
        )
    )

    repeat = None
    for u_idx, unit in enumerate(units):
        if len(set(unit.vertices)) != len(unit.vertices):
            repeat = u_idx
            break
    items.append(
        CheckItem(
            "distinct-vertices",
            repeat is None,
            "" if repeat is None else f"unit {repeat} repeats a vertex",
        )
    )

    seen: dict[int, int] = {}
    shared = None
    for u_idx, unit in enumerate(units):
        for v in unit.vertices:
            if v in seen:
                shared = (v, seen[v], u_idx)
                break
            seen[v] = u_idx
        if shared:
            break
    items.append(
        CheckItem(
            "disjoint",
            shared is None,
            "" if shared is None else f"vertex {shared[0]} shared by units {shared[1]} and {shared[2]}",
        )
    )

    covered = set(seen)
    declared = set(cover.uncovered)
    consistent = (covered | declared == set(range(g.n))) and not (covered & declared)
    items.append(
        CheckItem(
            "uncovered-consistent",
            consistent,
            "" if consistent else "declared uncovered set does not complement the cover",
        )
    )

    if max_count is not None:
        items.append(
            CheckItem(
                "count",
                len(units) <= max_count,
                f"{len(units)} units vs limit {max_count}",
            )
        )
    if max_uncovered is not None:
        items.append(
            CheckItem(
                "uncovered",
                len(declared) <= max_uncovered,
                f"{len(declared)} uncovered vs limit {max_uncovered}",
            )
        )
    return CoverCheck(items)
