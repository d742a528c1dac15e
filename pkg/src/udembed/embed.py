"""Numerical unit-distance embeddings: damped least-squares search from
random starts, verification, polishing of approximate coordinates, and
infinitesimal rigidity counts."""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .graphs import Graph, GraphError
from .poly import auto_pin

log = logging.getLogger(__name__)

EDGE_TOL = 1e-9
SEPARATION_TOL = 1e-6


def as_array(g: Graph, coords) -> np.ndarray:
    """Coordinates as an ``(n, 2)`` float array in vertex order.

    Accepts a label -> (x, y) mapping or anything array-like of shape (n, 2).
    """
    if isinstance(coords, Mapping):
        missing = [lab for lab in g.labels if lab not in coords]
        if missing:
            raise GraphError(f"missing coordinates for {', '.join(missing)}")
        return np.array([[float(c) for c in coords[lab]] for lab in g.labels], dtype=float)
    X = np.asarray(coords, dtype=float)
    if X.shape != (g.n, 2):
        raise GraphError(f"expected coordinates of shape {(g.n, 2)}, got {X.shape}")
    return X


def _edge_index(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    if not g.edges:
        return np.zeros(0, int), np.zeros(0, int)
    E = np.array(g.edges)
    return E[:, 0], E[:, 1]


def edge_lengths(g: Graph, X: np.ndarray) -> np.ndarray:
    u, v = _edge_index(g)
    return np.hypot(*(X[u] - X[v]).T) if len(u) else np.zeros(0)


def max_edge_deviation(g: Graph, X: np.ndarray) -> float:
    d = edge_lengths(g, X)
    return float(np.max(np.abs(d - 1.0))) if d.size else 0.0


def min_separation(g: Graph, X: np.ndarray) -> float:
    if len(X) < 2:
        return float("inf")
    D = np.hypot(X[:, None, 0] - X[None, :, 0], X[:, None, 1] - X[None, :, 1])
    iu = np.triu_indices(len(X), 1)
    return float(D[iu].min())


def closest_pair(g: Graph, X: np.ndarray) -> tuple[str, str] | None:
    if len(X) < 2:
        return None
    D = np.hypot(X[:, None, 0] - X[None, :, 0], X[:, None, 1] - X[None, :, 1])
    D[np.tril_indices(len(X))] = np.inf
    i, j = np.unravel_index(np.argmin(D), D.shape)
    return g.labels[i], g.labels[j]


@dataclass
class Embedding:
    graph: Graph
    coords: np.ndarray
    converged: bool | None = None

    def __post_init__(self):
        self.coords = as_array(self.graph, self.coords)

    @property
    def max_edge_deviation(self) -> float:
        return max_edge_deviation(self.graph, self.coords)

    @property
    def min_separation(self) -> float:
        return min_separation(self.graph, self.coords)

    def coord_map(self) -> dict[str, tuple[float, float]]:
        return {lab: (float(x), float(y)) for lab, (x, y) in zip(self.graph.labels, self.coords)}


@dataclass(frozen=True)
class Verification:
    max_edge_deviation: float
    min_separation: float
    passed: bool
    edge_tol: float
    separation_tol: float


def verify(g: Graph, coords, edge_tol: float = EDGE_TOL, separation_tol: float = SEPARATION_TOL) -> Verification:
    X = as_array(g, coords)
    dev = max_edge_deviation(g, X)
    sep = min_separation(g, X)
    return Verification(dev, sep, bool(dev <= edge_tol and sep >= separation_tol), edge_tol, separation_tol)


# --------------------------------------------------------------------------
# Least squares core


def rigidity_matrix(g: Graph, X: np.ndarray) -> np.ndarray:
    """``|E| x 2n`` Jacobian of the squared edge lengths."""
    u, v = _edge_index(g)
    J = np.zeros((len(u), 2 * g.n))
    if len(u):
        diff = X[u] - X[v]
        rows = np.arange(len(u))
        J[rows, 2 * u] = 2 * diff[:, 0]
        J[rows, 2 * u + 1] = 2 * diff[:, 1]
        J[rows, 2 * v] = -2 * diff[:, 0]
        J[rows, 2 * v + 1] = -2 * diff[:, 1]
    return J


def _residuals(g: Graph, X: np.ndarray, floor: float, weight: float):
    """Edge residuals ``|p_u - p_v|^2 - 1`` stacked with repulsion rows for
    pairs closer than ``floor``; returns (r, J, edge part of F)."""
    u, v = _edge_index(g)
    diff = X[u] - X[v]
    r_edge = np.einsum("ij,ij->i", diff, diff) - 1.0
    J = rigidity_matrix(g, X)
    F_edge = float(r_edge @ r_edge)
    if floor <= 0 or weight <= 0 or g.n < 2:
        return r_edge, J, F_edge
    iu, ju = np.triu_indices(g.n, 1)
    pd = X[iu] - X[ju]
    d2 = np.einsum("ij,ij->i", pd, pd)
    close = d2 < floor * floor
    if not close.any():
        return r_edge, J, F_edge
    iu, ju, pd, d2 = iu[close], ju[close], pd[close], d2[close]
    f2 = floor * floor
    r_rep = weight * (1.0 - d2 / f2)
    Jr = np.zeros((len(iu), 2 * g.n))
    rows = np.arange(len(iu))
    gscale = -2.0 * weight / f2
    Jr[rows, 2 * iu] = gscale * pd[:, 0]
    Jr[rows, 2 * iu + 1] = gscale * pd[:, 1]
    Jr[rows, 2 * ju] = -gscale * pd[:, 0]
    Jr[rows, 2 * ju + 1] = -gscale * pd[:, 1]
    return np.concatenate([r_edge, r_rep]), np.vstack([J, Jr]), F_edge


def _damped_least_squares(
    g: Graph,
    X0: np.ndarray,
    free: np.ndarray,
    max_iterations: int,
    floor: float,
    weight: float,
    target: float = 1e-30,
) -> tuple[np.ndarray, float]:
    """Levenberg iteration on the free coordinates (flat index mask).

    Stops at ``target``, when no damped step decreases the objective, or on
    slow progress. Returns (X, edge part of the objective).
    """
    X = X0.copy()
    lam = 1e-3
    r, J, F_edge = _residuals(g, X, floor, weight)
    F = float(r @ r)
    stalled = 0
    checkpoint = F
    for it in range(1, max_iterations + 1):
        if F <= target:
            return X, F_edge
        if it % 25 == 0:
            # under 10% progress per 25 steps: a local minimum, not a root
            if F > 0.9 * checkpoint:
                return X, F_edge
            checkpoint = F
        Jf = J[:, free]
        A = Jf.T @ Jf
        b = Jf.T @ r
        accepted = False
        while lam < 1e16:
            try:
                step = np.linalg.solve(A + lam * np.eye(len(b)), -b)
            except np.linalg.LinAlgError:
                lam *= 10
                continue
            Y = X.reshape(-1).copy()
            Y[free] += step
            Y = Y.reshape(-1, 2)
            r2, J2, F2_edge = _residuals(g, Y, floor, weight)
            F2 = float(r2 @ r2)
            if F2 < F:
                gain = (F - F2) / max(F, 1e-300)
                X, r, J, F, F_edge = Y, r2, J2, F2, F2_edge
                lam = max(lam / 3.0, 1e-15)
                accepted = True
                stalled = stalled + 1 if gain < 1e-10 else 0
                break
            lam *= 4.0
        if not accepted or stalled >= 20:
            break
    return X, F_edge


# --------------------------------------------------------------------------
# Search


@dataclass(frozen=True)
class SolveOptions:
    restarts: int = 200
    residual_tol: float = 1e-12
    separation_floor: float = 1e-3
    max_iterations: int = 500
    seed: int = 0
    init_box: float | None = None  # half-width; default n/2
    repulsion_weight: float = 1.0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be positive")
        for name in ("residual_tol", "separation_floor"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.init_box is not None and self.init_box <= 0:
            raise ValueError("init_box must be positive")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class SolveResult:
    """Outcome of :func:`solve`.

    ``success=False`` means no embedding was found within the restart
    budget; it is not a proof that none exists. ``embedding`` is then the
    best configuration seen (lowest edge objective).
    """

    success: bool
    embedding: Embedding
    residual: float
    separation: float
    restarts_used: int
    options: SolveOptions
    components: list[dict] = field(default_factory=list)


def _canonical_reflection(X: np.ndarray, anchors: Sequence[int]) -> np.ndarray:
    for i in range(len(X)):
        if i in anchors:
            continue
        if abs(X[i, 1]) > 1e-9:
            if X[i, 1] < 0:
                X = X.copy()
                X[:, 1] = -X[:, 1]
            break
    return X


def _solve_connected(g: Graph, opts: SolveOptions) -> tuple[bool, np.ndarray, float, float, int]:
    n = g.n
    if not g.edges:
        return True, np.zeros((n, 2)), 0.0, float("inf"), 0
    pins = auto_pin(g)
    (a, _), (b, _) = list(pins.items())
    ia, ib = g.index(a), g.index(b)
    free = np.ones(2 * n, bool)
    free[[2 * ia, 2 * ia + 1, 2 * ib, 2 * ib + 1]] = False
    half = opts.init_box if opts.init_box is not None else n / 2.0
    best = None
    for k in range(opts.restarts):
        rng = np.random.default_rng([opts.seed, k])
        X = rng.uniform(-half, half, size=(n, 2)) + np.array([0.5, 0.0])
        X[ia] = (0.0, 0.0)
        X[ib] = (1.0, 0.0)
        X, F = _damped_least_squares(
            g, X, free, opts.max_iterations, opts.separation_floor, opts.repulsion_weight
        )
        sep = min_separation(g, X)
        ok = F < opts.residual_tol and sep > opts.separation_floor
        score = (not ok, F, k)
        if best is None or score < best[0]:
            best = (score, X, F, sep)
        if ok:
            return True, _canonical_reflection(X, (ia, ib)), F, sep, k + 1
    _, X, F, sep = best
    return False, X, F, sep, opts.restarts


def _components(g: Graph) -> list[list[int]]:
    adj = g.adjacency()
    seen: set[int] = set()
    comps = []
    for s in range(g.n):
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def _subgraph(g: Graph, verts: list[int]) -> Graph:
    pos = {v: i for i, v in enumerate(verts)}
    edges = [(pos[u], pos[v]) for u, v in g.edges if u in pos and v in pos]
    return Graph(tuple(g.labels[v] for v in verts), tuple(edges), g.name)


def solve(g: Graph, opts: SolveOptions = SolveOptions()) -> SolveResult:
    """Search for a unit-distance embedding of ``g``.

    Minimises ``sum (|p_u - p_v|^2 - 1)^2`` by damped Gauss-Newton steps
    from seeded random starts, with the first edge pinned to (0,0)-(1,0).
    Pairs closer than ``separation_floor`` get a repulsion residual while
    iterating. Disconnected graphs are solved per component and the
    components laid out side by side.
    """
    comps = _components(g)
    X = np.zeros((g.n, 2))
    success, residual, used = True, 0.0, 0
    details = []
    offset = 0.0
    for verts in comps:
        sub = _subgraph(g, verts)
        ok, Xs, F, sep, k = _solve_connected(sub, opts)
        Xs = Xs - np.array([Xs[:, 0].min() - offset, 0.0])
        offset = Xs[:, 0].max() + 2.0
        X[verts] = Xs
        success &= ok
        residual += F
        used = max(used, k)
        details.append({"vertices": [g.labels[v] for v in verts], "success": ok,
                        "residual": F, "separation": sep, "restarts_used": k})
    sep = min_separation(g, X)
    success = success and sep > opts.separation_floor
    emb = Embedding(g, X, converged=success)
    return SolveResult(success, emb, residual, sep, used, opts, details if len(comps) > 1 else [])


def similarity_scale(g: Graph, X: np.ndarray) -> float:
    """Scalar ``s`` minimising ``sum (s^2 |p_u - p_v|^2 - 1)^2``."""
    u, v = _edge_index(g)
    if not len(u):
        return 1.0
    d2 = np.einsum("ij,ij->i", X[u] - X[v], X[u] - X[v])
    den = float(d2 @ d2)
    if den == 0.0:
        return 1.0
    return float(np.sqrt(d2.sum() / den))


def refine(
    g: Graph,
    coords,
    allow_similarity: bool = True,
    max_iterations: int = 500,
    separation_floor: float = 1e-3,
) -> Embedding:
    """Polish approximate coordinates into a unit-distance embedding.

    With ``allow_similarity`` the coordinates are first scaled about their
    centroid by :func:`similarity_scale`. All coordinates are free during the
    polish; the result's ``converged`` flag is False if the edge objective
    stopped decreasing before reaching rounding level.
    """
    X = as_array(g, coords)
    if allow_similarity and g.edges:
        c = X.mean(axis=0)
        X = c + similarity_scale(g, X) * (X - c)
    free = np.ones(2 * g.n, bool)
    X, F = _damped_least_squares(g, X, free, max_iterations, separation_floor, 1.0)
    converged = F < 1e-24
    if not converged:
        log.info("refine stopped at edge objective %.3g", F)
    return Embedding(g, X, converged=converged)


# --------------------------------------------------------------------------
# Rigidity


@dataclass(frozen=True)
class RigidityReport:
    jacobian_rank: int
    flex_count: int
    rigid: bool
    rank_tol: float


def numerical_rank(A: np.ndarray, rel_tol: float = 1e-8) -> int:
    """Rank by Gaussian elimination with complete pivoting; pivots below
    ``rel_tol`` times the first (largest) pivot count as zero."""
    A = np.array(A, dtype=float)
    m, n = A.shape
    if A.size == 0:
        return 0
    first = np.max(np.abs(A))
    if first == 0.0:
        return 0
    thresh = rel_tol * first
    rank = 0
    for k in range(min(m, n)):
        sub = np.abs(A[k:, k:])
        i, j = np.unravel_index(np.argmax(sub), sub.shape)
        if sub[i, j] <= thresh:
            break
        i += k
        j += k
        A[[k, i]] = A[[i, k]]
        A[:, [k, j]] = A[:, [j, k]]
        A[k + 1 :] -= np.outer(A[k + 1 :, k] / A[k, k], A[k])
        rank += 1
    return rank


def rigidity_report(g: Graph, emb, rank_tol: float = 1e-8, verify_tol: float = 1e-6) -> RigidityReport:
    X = emb.coords if isinstance(emb, Embedding) else as_array(g, emb)
    check = verify(g, X, edge_tol=verify_tol, separation_tol=verify_tol)
    if not check.passed:
        raise GraphError(
            f"embedding does not verify (edge deviation {check.max_edge_deviation:.3g}, "
            f"separation {check.min_separation:.3g})"
        )
    rank = numerical_rank(rigidity_matrix(g, X), rank_tol)
    flex = max(0, 2 * g.n - 3 - rank)
    return RigidityReport(rank, flex, flex == 0, rank_tol)
