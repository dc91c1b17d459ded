"""Capacity-constrained approximate nearest neighbor matching of superpixels.

A PatchMatch loop over target superpixels: random initialization, then
alternating scans that test propagation candidates (neighbors of the matches
of already-visited neighbors, chosen by relative orientation) and random-search
candidates (nearest source barycenter to points drawn in shrinking windows).
Each candidate goes through :func:`try_improve`, which either moves the target,
swaps it with an occupant of a full source, or does nothing.

:func:`exact_assign` is the optimal assignment oracle (shortest augmenting
path, O(n^3)).

Hot loops are numba kernels shared by the per-step public functions and by
:func:`ann_match`, so both paths execute the same code.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numba
import numpy as np

from .image_core import ConfigurationError
from .superpixel import SuperpixelDecomposition

INF = math.inf
# changes smaller than this fraction of the terms involved are rounding noise, treated as ties
TIE_RTOL = 1e-12

def _is_infinite(epsilon) -> bool:
    return epsilon is None or (isinstance(epsilon, float) and math.isinf(epsilon))


def parse_epsilon(value) -> float | int:
    """``"inf"``/``inf``/``None`` -> ``math.inf``; positive integers pass through."""
    if isinstance(value, str):
        if value.strip().lower() in ("inf", "infinity", "none"):
            return INF
        value = int(value)
    if _is_infinite(value):
        return INF
    if isinstance(value, float):
        if not value.is_integer():
            raise ConfigurationError(f"epsilon must be an integer or inf, got {value}")
        value = int(value)
    if value < 1:
        raise ConfigurationError(f"epsilon must be >= 1, got {value}")
    return int(value)


def min_feasible_epsilon(n_targets: int, n_sources: int) -> int:
    return -(-n_targets // n_sources)


class InfeasibleEpsilonError(ConfigurationError):
    """``epsilon * |B| < |A|``: not every target can be matched."""

    def __init__(self, epsilon, n_targets: int, n_sources: int):
        self.min_epsilon = min_feasible_epsilon(n_targets, n_sources)
        super().__init__(
            f"epsilon={epsilon} is infeasible for |A|={n_targets}, |B|={n_sources}; "
            f"minimum feasible epsilon is {self.min_epsilon}"
        )


def check_feasible(n_targets: int, n_sources: int, epsilon) -> None:
    if n_sources < 1:
        raise ConfigurationError("source decomposition is empty")
    if not _is_infinite(epsilon) and n_targets > epsilon * n_sources:
        raise InfeasibleEpsilonError(epsilon, n_targets, n_sources)


@dataclass
class MatchParams:
    epsilon: float | int = 3
    iterations: int = 20
    random_search_attempts: int | None = None  # None: one draw per radius of the schedule
    seed: int = 0

    def __post_init__(self):
        self.epsilon = parse_epsilon(self.epsilon)
        if self.iterations < 1:
            raise ConfigurationError("iterations must be >= 1")
        if self.random_search_attempts is not None and self.random_search_attempts < 1:
            raise ConfigurationError("random_search_attempts must be >= 1")


@dataclass
class Assignment:
    """Target -> source map with per-source selection counts.

    ``match[i]`` is the source id of target ``i``; ``selection_count[k]`` the
    number of targets mapped to source ``k``.  Mutated in place by
    :func:`try_improve`.
    """

    match: np.ndarray
    selection_count: np.ndarray
    epsilon: float | int = INF

    @classmethod
    def from_match(cls, match, n_sources: int, epsilon=INF) -> Assignment:
        match = np.array(match, dtype=np.int64)
        counts = np.bincount(match, minlength=n_sources).astype(np.int64)
        return cls(match, counts, parse_epsilon(epsilon))

    @property
    def n_targets(self) -> int:
        return len(self.match)

    @property
    def n_sources(self) -> int:
        return len(self.selection_count)

    def copy(self) -> Assignment:
        return Assignment(self.match.copy(), self.selection_count.copy(), self.epsilon)

    def validate(self) -> None:
        """Raise ``AssertionError`` if any invariant is broken."""
        assert self.match.ndim == 1 and self.selection_count.ndim == 1
        assert np.all((self.match >= 0) & (self.match < self.n_sources)), "match out of range"
        recount = np.bincount(self.match, minlength=self.n_sources)
        assert np.array_equal(recount, self.selection_count), "selection_count out of sync with match"
        if not _is_infinite(self.epsilon):
            assert self.selection_count.max(initial=0) <= self.epsilon, "capacity exceeded"

    def selection_histogram(self) -> list[int]:
        """``hist[c]`` = number of sources selected exactly ``c`` times."""
        return np.bincount(self.selection_count).tolist()


def feature_distance(a, b) -> float:
    """Sum of squared differences between two histogram features."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"feature length mismatch: {a.shape} vs {b.shape}")
    d = a - b
    return float(np.dot(d, d))


def distance_matrix(features_a, features_b, chunk: int = 256) -> np.ndarray:
    """Dense ``|A| x |B|`` matrix of :func:`feature_distance` values."""
    fa = np.asarray(features_a, dtype=np.float64)
    fb = np.asarray(features_b, dtype=np.float64)
    if fa.shape[1] != fb.shape[1]:
        raise ValueError("feature length mismatch")
    out = np.empty((len(fa), len(fb)))
    for s in range(0, len(fa), chunk):
        d = fa[s:s + chunk, None, :] - fb[None, :, :]
        out[s:s + chunk] = np.einsum("ijk,ijk->ij", d, d)
    return out


def total_cost(assignment: Assignment, distances) -> float:
    distances = np.asarray(distances)
    return float(distances[np.arange(assignment.n_targets), assignment.match].sum())


# --- initialization -----------------------------------------------------------

def init_random(n_targets: int, n_sources: int, params: MatchParams, rng: np.random.Generator) -> Assignment:
    """Uniform random assignment with at most ``epsilon`` targets per source."""
    eps = params.epsilon
    check_feasible(n_targets, n_sources, eps)
    if _is_infinite(eps):
        match = rng.integers(0, n_sources, size=n_targets)
    else:
        slots = np.repeat(np.arange(n_sources), min(eps, n_targets))
        match = rng.permutation(slots)[:n_targets]
    return Assignment.from_match(match, n_sources, eps)


def scan_order(decomp: SuperpixelDecomposition) -> np.ndarray:
    """Targets sorted by barycenter in raster order (y, then x, then id)."""
    b = decomp.barycenter
    return np.lexsort((np.arange(len(b)), b[:, 0], b[:, 1]))


# --- kernels --------------------------------------------------------------------

@numba.njit(cache=True)
def _dist(i, k, D, fa, fb):
    d = D[i, k]
    if d != d:  # NaN marks an entry not computed yet
        s = 0.0
        for v in range(fa.shape[1]):
            t = fa[i, v] - fb[k, v]
            s += t * t
        D[i, k] = s
        d = s
    return d


@numba.njit(cache=True)
def _occ_replace(occ, counts, k, old, new):
    for t in range(counts[k]):
        if occ[k, t] == old:
            occ[k, t] = new
            return


@numba.njit(cache=True)
def _try_improve_kernel(i, k, match, counts, cap, occ, D, fa, fb):
    """Returns ``(delta_cost, code)``; code -2 = no change, -1 = moved, else the swapped target."""
    cur = match[i]
    if k == cur:
        return 0.0, -2
    d_new = _dist(i, k, D, fa, fb)
    d_cur = _dist(i, cur, D, fa, fb)
    if not d_new < d_cur * (1.0 - TIE_RTOL):
        return 0.0, -2
    if cap < 0 or counts[k] < cap:
        if cap >= 0:
            # swap-remove i from cur's occupants, append to k's
            last = counts[cur] - 1
            for t in range(counts[cur]):
                if occ[cur, t] == i:
                    occ[cur, t] = occ[cur, last]
                    break
            occ[k, counts[k]] = i
        match[i] = k
        counts[cur] -= 1
        counts[k] += 1
        return d_new - d_cur, -1
    gain_i = d_new - d_cur
    best_c = np.inf
    best_j = -1
    best_scale = 0.0
    for t in range(counts[k]):
        j = occ[k, t]
        d_jcur = _dist(j, cur, D, fa, fb)
        d_jk = _dist(j, k, D, fa, fb)
        c = gain_i + (d_jcur - d_jk)
        if c < best_c or (c == best_c and j < best_j):
            best_c = c
            best_j = j
            best_scale = d_new + d_cur + d_jcur + d_jk
    if best_c < -TIE_RTOL * best_scale:
        _occ_replace(occ, counts, k, best_j, i)
        _occ_replace(occ, counts, cur, i, best_j)
        match[best_j] = cur
        match[i] = k
        return best_c, best_j
    return 0.0, -2


@numba.njit(cache=True)
def _propagation_kernel(i, j, match, bary_a, bary_b, indptr_b, indices_b):
    m = match[j]
    dx = bary_a[i, 0] - bary_a[j, 0]
    dy = bary_a[i, 1] - bary_a[j, 1]
    dn = math.sqrt(dx * dx + dy * dy)
    s = indptr_b[m]
    e = indptr_b[m + 1]
    if s == e:
        return m
    best = -np.inf
    best_k = indices_b[s]
    for t in range(s, e):
        k = indices_b[t]
        vx = bary_b[k, 0] - bary_b[m, 0]
        vy = bary_b[k, 1] - bary_b[m, 1]
        vn = math.sqrt(vx * vx + vy * vy)
        cos = (dx * vx + dy * vy) / (dn * vn) if dn > 0.0 and vn > 0.0 else 0.0
        if cos > best:
            best = cos
            best_k = k
    return best_k


@numba.njit(cache=True)
def _nearest_kernel(px, py, pts, grid_start, grid_items, g):
    """Id of the point in ``pts`` nearest ``(px, py)``; ties go to the smallest id."""
    cell = 1.0 / g
    cx = min(g - 1, max(0, int(px * g)))
    cy = min(g - 1, max(0, int(py * g)))
    best_d = np.inf
    best_k = -1
    for r in range(g + 1):
        for gy in range(max(0, cy - r), min(g, cy + r + 1)):
            for gx in range(max(0, cx - r), min(g, cx + r + 1)):
                if max(abs(gx - cx), abs(gy - cy)) != r:
                    continue
                c = gy * g + gx
                for t in range(grid_start[c], grid_start[c + 1]):
                    k = grid_items[t]
                    ddx = pts[k, 0] - px
                    ddy = pts[k, 1] - py
                    d = ddx * ddx + ddy * ddy
                    if d < best_d or (d == best_d and k < best_k):
                        best_d = d
                        best_k = k
        # anything outside ring r is at least r cells away
        if best_k >= 0 and best_d < (r * cell) ** 2:
            break
    return best_k


@numba.njit(cache=True)
def _random_candidate_kernel(cx, cy, radius, u0, u1, pts, grid_start, grid_items, g):
    lox = max(0.0, cx - radius)
    hix = min(1.0, cx + radius)
    loy = max(0.0, cy - radius)
    hiy = min(1.0, cy + radius)
    return _nearest_kernel(lox + u0 * (hix - lox), loy + u1 * (hiy - loy), pts, grid_start, grid_items, g)


@numba.njit(cache=True)
def _run_pass(order, match, counts, cap, occ, D, fa, fb,
              bary_a, indptr_a, indices_a, bary_b, indptr_b, indices_b,
              radii, uniforms, grid_start, grid_items, g, cost, log):
    n = order.shape[0]
    rank = np.empty(n, dtype=np.int64)
    for t in range(n):
        rank[order[t]] = t
    attempts = uniforms.shape[1]
    nlog = 0
    for t in range(n):
        i = order[t]
        for s in range(indptr_a[i], indptr_a[i + 1]):
            j = indices_a[s]
            if rank[j] >= t:
                continue
            k = _propagation_kernel(i, j, match, bary_a, bary_b, indptr_b, indices_b)
            delta, code = _try_improve_kernel(i, k, match, counts, cap, occ, D, fa, fb)
            if code != -2:
                cost += delta
                log[nlog, 0] = i
                log[nlog, 1] = k
                log[nlog, 2] = code
                log[nlog, 3] = delta
                log[nlog, 4] = cost
                nlog += 1
        for a in range(attempts):
            radius = radii[min(a, radii.shape[0] - 1)]
            m = match[i]
            k = _random_candidate_kernel(bary_b[m, 0], bary_b[m, 1], radius,
                                         uniforms[i, a, 0], uniforms[i, a, 1],
                                         bary_b, grid_start, grid_items, g)
            delta, code = _try_improve_kernel(i, k, match, counts, cap, occ, D, fa, fb)
            if code != -2:
                cost += delta
                log[nlog, 0] = i
                log[nlog, 1] = k
                log[nlog, 2] = code
                log[nlog, 3] = delta
                log[nlog, 4] = cost
                nlog += 1
    return cost, nlog


# --- helpers shared by the public step functions and ann_match --------------------

def _capacity(epsilon) -> int:
    return -1 if _is_infinite(epsilon) else int(epsilon)


def _occupants(assignment: Assignment, cap: int) -> np.ndarray:
    if cap < 0:
        return np.zeros((assignment.n_sources, 1), dtype=np.int64)
    occ = np.full((assignment.n_sources, cap), -1, dtype=np.int64)
    order = np.argsort(assignment.match, kind="stable")
    starts = np.concatenate([[0], np.cumsum(assignment.selection_count)])
    for k in range(assignment.n_sources):
        members = order[starts[k]:starts[k + 1]]
        occ[k, :len(members)] = members
    return occ


@dataclass(frozen=True)
class BarycenterGrid:
    """Bucket grid over the unit square for nearest-barycenter queries."""

    points: np.ndarray
    start: np.ndarray
    items: np.ndarray
    size: int

    @classmethod
    def build(cls, points) -> BarycenterGrid:
        points = np.ascontiguousarray(points, dtype=np.float64)
        g = max(1, int(math.ceil(math.sqrt(len(points)))))
        cx = np.clip((points[:, 0] * g).astype(np.int64), 0, g - 1)
        cy = np.clip((points[:, 1] * g).astype(np.int64), 0, g - 1)
        cell = cy * g + cx
        items = np.argsort(cell, kind="stable").astype(np.int64)
        start = np.zeros(g * g + 1, dtype=np.int64)
        np.cumsum(np.bincount(cell, minlength=g * g), out=start[1:])
        return cls(points, start, items, g)

    def nearest(self, x: float, y: float) -> int:
        return int(_nearest_kernel(float(x), float(y), self.points, self.start, self.items, self.size))


def search_radii(n_sources: int) -> np.ndarray:
    """Window radii halving from the full extent (1.0) down to the mean spacing ``sqrt(1/|B|)``."""
    spacing = math.sqrt(1.0 / n_sources)
    radii = [1.0]
    while radii[-1] / 2 >= spacing * (1 - 1e-12):
        radii.append(radii[-1] / 2)
    return np.asarray(radii)


def _attempts(params: MatchParams, radii: np.ndarray) -> int:
    return params.random_search_attempts or len(radii)


# --- public step functions ------------------------------------------------------

def propagation_candidates(i: int, assignment: Assignment, decomp_a: SuperpixelDecomposition,
                           decomp_b: SuperpixelDecomposition, order=None) -> list[int]:
    """One source candidate per neighbor of target ``i`` visited earlier in ``order``.

    For each such neighbor ``j``, the candidate is the neighbor of ``match[j]``
    whose barycenter offset best aligns (cosine) with the offset from ``j`` to
    ``i``; ``match[j]`` itself if it has no neighbors.  ``order`` defaults to
    the forward scan order.
    """
    if order is None:
        order = scan_order(decomp_a)
    rank = np.empty(len(order), dtype=np.int64)
    rank[np.asarray(order)] = np.arange(len(order))
    out = []
    for j in decomp_a.neighbors(i):
        if rank[j] < rank[i]:
            k = _propagation_kernel(i, int(j), assignment.match, decomp_a.barycenter, decomp_b.barycenter,
                                    decomp_b.adjacency_indptr, decomp_b.adjacency_indices)
            if k not in out:
                out.append(int(k))
    return out


def random_search_candidates(i: int, assignment: Assignment, decomp_b: SuperpixelDecomposition,
                             attempts: int, rng: np.random.Generator, grid: BarycenterGrid | None = None) -> list[int]:
    """Draw ``attempts`` candidates around the barycenter of ``match[i]``.

    Draw ``a`` samples a uniform point in the window of radius ``radii[a]``
    (clipped to the unit square; the last radius repeats if ``attempts``
    exceeds the schedule) and returns the source with the nearest barycenter.
    """
    if attempts < 1:
        raise ValueError("attempts must be >= 1")
    grid = grid or BarycenterGrid.build(decomp_b.barycenter)
    radii = search_radii(len(decomp_b))
    u = rng.random((attempts, 2))
    cx, cy = decomp_b.barycenter[assignment.match[i]]
    out = []
    for a in range(attempts):
        k = _random_candidate_kernel(cx, cy, radii[min(a, len(radii) - 1)], u[a, 0], u[a, 1],
                                     grid.points, grid.start, grid.items, grid.size)
        if k not in out:
            out.append(int(k))
    return out


def try_improve(i: int, k: int, assignment: Assignment, distances) -> Assignment:
    """Offer source ``k`` to target ``i``; updates ``assignment`` in place and returns it.

    No change unless ``D[i, k] < D[i, match[i]]``.  If ``k`` has spare
    capacity the target moves; otherwise the occupant ``j`` of ``k`` with the
    lowest switch cost ``(D[i,k] - D[i,cur]) + (D[j,cur] - D[j,k])`` is
    swapped with ``i`` when that cost is strictly negative (ties: lowest ``j``).
    Gains within ``TIE_RTOL`` of the distances involved count as ties, so a
    change always lowers the total cost in exact arithmetic.
    """
    D = np.ascontiguousarray(distances, dtype=np.float64)
    cap = _capacity(assignment.epsilon)
    occ = _occupants(assignment, cap)
    empty = np.empty((0, 0))
    _try_improve_kernel(int(i), int(k), assignment.match, assignment.selection_count, cap, occ, D, empty, empty)
    return assignment


# --- the full loop ------------------------------------------------------------------

@dataclass
class MatchTrace:
    """Optional recorder for :func:`ann_match`.

    ``events[it]`` rows are ``(target, candidate, code, delta, tracked_cost)``
    where ``code`` is -1 for a move and the swapped target id for a switch.
    """

    initial: Assignment | None = None
    initial_cost: float = 0.0
    assignments: list = field(default_factory=list)
    tracked_costs: list = field(default_factory=list)
    events: list = field(default_factory=list)


def ann_match(decomp_a: SuperpixelDecomposition, decomp_b: SuperpixelDecomposition,
              params: MatchParams | None = None, distances=None,
              trace: MatchTrace | None = None) -> tuple[Assignment, float]:
    """PatchMatch-style matching of target superpixels to source superpixels.

    Parameters
    ----------
    decomp_a, decomp_b : SuperpixelDecomposition
        Target and source decompositions.
    params : MatchParams
        Capacity, iteration count, random-search attempts and seed.
    distances : array, optional
        Precomputed ``|A| x |B|`` distance matrix; otherwise feature distances
        are computed lazily and memoized.
    trace : MatchTrace, optional
        Filled with per-iteration snapshots and every executed change.

    Returns
    -------
    assignment, total_cost
    """
    params = params or MatchParams()
    n_a, n_b = len(decomp_a), len(decomp_b)
    check_feasible(n_a, n_b, params.epsilon)
    rng = np.random.default_rng(params.seed)
    assignment = init_random(n_a, n_b, params, rng)

    fa = np.ascontiguousarray(decomp_a.features, dtype=np.float64)
    fb = np.ascontiguousarray(decomp_b.features, dtype=np.float64)
    if distances is None:
        D = np.full((n_a, n_b), np.nan)
    else:
        D = np.array(distances, dtype=np.float64, copy=True)
        if D.shape != (n_a, n_b):
            raise ValueError(f"distance matrix shape {D.shape} != {(n_a, n_b)}")
    for i, k in enumerate(assignment.match):
        _dist(i, k, D, fa, fb)
    cost = total_cost(assignment, D)

    cap = _capacity(params.epsilon)
    occ = _occupants(assignment, cap)
    grid = BarycenterGrid.build(decomp_b.barycenter)
    radii = search_radii(n_b)
    attempts = _attempts(params, radii)
    order = scan_order(decomp_a)
    max_deg = int(np.diff(decomp_a.adjacency_indptr).max(initial=0))
    log = np.empty((n_a * (max_deg + attempts), 5))
    bary_a = np.ascontiguousarray(decomp_a.barycenter)
    if trace is not None:
        trace.initial = assignment.copy()
        trace.initial_cost = cost

    for it in range(params.iterations):
        scan = order if it % 2 == 0 else order[::-1].copy()
        uniforms = rng.random((n_a, attempts, 2))
        cost, nlog = _run_pass(
            scan, assignment.match, assignment.selection_count, cap, occ, D, fa, fb,
            bary_a, decomp_a.adjacency_indptr, decomp_a.adjacency_indices,
            grid.points, decomp_b.adjacency_indptr, decomp_b.adjacency_indices,
            radii, uniforms, grid.start, grid.items, grid.size, cost, log,
        )
        if trace is not None:
            trace.assignments.append(assignment.copy())
            trace.tracked_costs.append(cost)
            trace.events.append(log[:nlog].copy())

    return assignment, total_cost(assignment, D)


# --- exact oracle -------------------------------------------------------------------

@numba.njit(cache=True)
def _lsap_kernel(cost):
    """Shortest augmenting path assignment for an ``nr x nc`` matrix, ``nr <= nc``."""
    nr, nc = cost.shape
    u = np.zeros(nr)
    v = np.zeros(nc)
    shortest = np.empty(nc)
    path = np.full(nc, -1, dtype=np.int64)
    col4row = np.full(nr, -1, dtype=np.int64)
    row4col = np.full(nc, -1, dtype=np.int64)
    seen_row = np.zeros(nr, dtype=np.bool_)
    seen_col = np.zeros(nc, dtype=np.bool_)
    remaining = np.empty(nc, dtype=np.int64)

    for cur in range(nr):
        for t in range(nc):
            remaining[t] = nc - t - 1
            shortest[t] = np.inf
            seen_col[t] = False
        for t in range(nr):
            seen_row[t] = False
        n_rem = nc
        min_val = 0.0
        i = cur
        sink = -1
        while sink == -1:
            idx = -1
            lowest = np.inf
            seen_row[i] = True
            for t in range(n_rem):
                j = remaining[t]
                r = min_val + cost[i, j] - u[i] - v[j]
                if r < shortest[j]:
                    path[j] = i
                    shortest[j] = r
                # prefer a free column on ties so augmenting paths stay short
                if shortest[j] < lowest or (shortest[j] == lowest and row4col[j] == -1):
                    lowest = shortest[j]
                    idx = t
            min_val = lowest
            if min_val == np.inf:
                return col4row, False
            j = remaining[idx]
            if row4col[j] == -1:
                sink = j
            else:
                i = row4col[j]
            seen_col[j] = True
            n_rem -= 1
            remaining[idx] = remaining[n_rem]

        u[cur] += min_val
        for r_ in range(nr):
            if seen_row[r_] and r_ != cur:
                u[r_] += min_val - shortest[col4row[r_]]
        for j in range(nc):
            if seen_col[j]:
                v[j] -= min_val - shortest[j]

        j = sink
        while True:
            r_ = path[j]
            row4col[j] = r_
            nxt = col4row[r_]
            col4row[r_] = j
            j = nxt
            if r_ == cur:
                break
    return col4row, True


def exact_assign(cost_matrix, epsilon=1) -> tuple[Assignment, float]:
    """Minimum-total-cost assignment with at most ``epsilon`` targets per source.

    Capacities above one are handled by repeating each source column
    ``epsilon`` times and solving the rectangular problem.
    """
    cost = np.asarray(cost_matrix, dtype=np.float64)
    if cost.ndim != 2:
        raise ValueError("cost matrix must be 2-D")
    if not np.all(np.isfinite(cost)):
        raise ValueError("cost matrix must be finite")
    n_a, n_b = cost.shape
    eps = parse_epsilon(epsilon)
    check_feasible(n_a, n_b, eps)
    if n_a == 0:
        return Assignment.from_match(np.zeros(0, dtype=np.int64), n_b, eps), 0.0
    if _is_infinite(eps) or eps >= n_a:
        match = np.argmin(cost, axis=1)
    else:
        reps = np.ascontiguousarray(np.repeat(cost, eps, axis=1))
        cols, ok = _lsap_kernel(reps)
        if not ok:  # pragma: no cover - finite costs and feasibility checked above
            raise ConfigurationError("assignment problem is infeasible")
        match = cols // eps
    assignment = Assignment.from_match(match, n_b, eps)
    return assignment, total_cost(assignment, cost)
