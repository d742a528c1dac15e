"""Ruler-and-compass placement programs for unit-distance drawings, with
parameter sweeps and bisection on a monitored vertex distance.

A plan places vertices one at a time: fixed points, unit steps at a
(parameterised) angle from an earlier vertex, or an intersection of two
unit circles about earlier vertices. Every edge the plan realises is unit
length by construction, so the only edge left to satisfy is the plan's
target pair, whose length is what the sweeps monitor.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Iterable, Mapping, Sequence, Union

import numpy as np
from scipy.optimize import least_squares

from .embed import Embedding, min_separation, refine, verify
from .graphs import Graph, GraphError, catalog

COINCIDENT_TOL = 1e-12
UNIT_TOL = 1e-12


@dataclass(frozen=True)
class FixPoint:
    vertex: str
    x: float
    y: float


@dataclass(frozen=True)
class PolarFrom:
    vertex: str
    anchor: str
    angle: Union[str, float]  # parameter name or constant (radians)


@dataclass(frozen=True)
class CircleCircle:
    """Intersection of the unit circles about two anchors; branch +1 takes
    the point left of the directed line ``anchor_a -> anchor_b``."""

    vertex: str
    anchor_a: str
    anchor_b: str
    branch: int = 1

    def __post_init__(self):
        if self.branch not in (1, -1):
            raise ValueError("branch must be +1 or -1")


Step = Union[FixPoint, PolarFrom, CircleCircle]


class StepFailure(Exception):
    """A circle-circle step had no intersection (parameter region invalid)."""

    def __init__(self, step_index: int, vertex: str, anchor_distance: float):
        super().__init__(
            f"step {step_index} ({vertex}): anchors {anchor_distance:.6g} apart, no unit intersection"
        )
        self.step_index = step_index
        self.vertex = vertex
        self.anchor_distance = anchor_distance


def circle_circle(pa, pb, branch: int) -> tuple[float, float] | None:
    """Unit-circle intersection point, or None if the circles are disjoint
    or the centres coincide."""
    ax, ay = pa
    bx, by = pb
    dx, dy = bx - ax, by - ay
    d = math.hypot(dx, dy)
    if d > 2.0 or d < COINCIDENT_TOL:
        return None
    h = math.sqrt(max(0.0, 1.0 - 0.25 * d * d))
    mx, my = ax + 0.5 * dx, ay + 0.5 * dy
    nx, ny = -dy / d, dx / d  # left normal
    return mx + branch * h * nx, my + branch * h * ny


@dataclass(frozen=True)
class Parameter:
    name: str
    default: float
    lo: float
    hi: float


@dataclass(frozen=True)
class ConstructionPlan:
    name: str
    graph: Graph
    steps: tuple[Step, ...]
    parameters: tuple[Parameter, ...]
    target: tuple[str, str]

    def __post_init__(self):
        placed: dict[str, Step] = {}
        labels = set(self.graph.labels)
        names = {p.name for p in self.parameters}
        for k, st in enumerate(self.steps):
            if st.vertex not in labels:
                raise GraphError(f"step {k} places unknown vertex {st.vertex!r}")
            if st.vertex in placed:
                raise GraphError(f"step {k} places {st.vertex!r} a second time")
            anchors = ()
            if isinstance(st, PolarFrom):
                anchors = (st.anchor,)
                if isinstance(st.angle, str) and st.angle not in names:
                    raise GraphError(f"step {k} uses undeclared parameter {st.angle!r}")
            elif isinstance(st, CircleCircle):
                anchors = (st.anchor_a, st.anchor_b)
            for a in anchors:
                if a not in placed:
                    raise GraphError(f"step {k} anchor {a!r} is not placed yet")
            placed[st.vertex] = st
        if set(placed) != labels:
            missing = sorted(labels - set(placed))
            raise GraphError(f"plan leaves {', '.join(missing)} unplaced")
        fixed = {st.vertex: (st.x, st.y) for st in self.steps if isinstance(st, FixPoint)}
        for u, v in self.graph.edge_labels():
            if u in fixed and v in fixed:
                d = math.dist(fixed[u], fixed[v])
                if abs(d - 1.0) > UNIT_TOL:
                    raise GraphError(f"fixed frame edge {u}-{v} has length {d!r}")
        want = {frozenset(e) for e in self.graph.edge_labels()} - {frozenset(self.target)}
        got = {frozenset(e) for e in self.realized_edges()}
        if got != want:
            raise GraphError(
                "plan does not realise exactly the non-target edges: "
                f"missing {sorted(map(sorted, want - got))}, extra {sorted(map(sorted, got - want))}"
            )

    def realized_edges(self) -> list[tuple[str, str]]:
        fixed = {st.vertex for st in self.steps if isinstance(st, FixPoint)}
        out = [(u, v) for u, v in self.graph.edge_labels() if u in fixed and v in fixed]
        for st in self.steps:
            if isinstance(st, PolarFrom):
                out.append((st.anchor, st.vertex))
            elif isinstance(st, CircleCircle):
                out += [(st.anchor_a, st.vertex), (st.anchor_b, st.vertex)]
        return out

    def defaults(self) -> dict[str, float]:
        return {p.name: p.default for p in self.parameters}

    def parameter(self, name: str) -> Parameter:
        for p in self.parameters:
            if p.name == name:
                return p
        raise KeyError(f"plan {self.name!r} has no parameter {name!r}")

    def with_branches(self, branches: Mapping[str, int]) -> "ConstructionPlan":
        steps = tuple(
            replace(st, branch=branches[st.vertex])
            if isinstance(st, CircleCircle) and st.vertex in branches
            else st
            for st in self.steps
        )
        return replace(self, steps=steps)

    def branches(self) -> dict[str, int]:
        return {st.vertex: st.branch for st in self.steps if isinstance(st, CircleCircle)}

    def to_dict(self) -> dict:
        steps = []
        for st in self.steps:
            if isinstance(st, FixPoint):
                steps.append({"kind": "FixPoint", "vertex": st.vertex, "x": st.x, "y": st.y})
            elif isinstance(st, PolarFrom):
                steps.append({"kind": "PolarFrom", "vertex": st.vertex, "anchor": st.anchor, "angle": st.angle})
            else:
                steps.append({"kind": "CircleCircle", "vertex": st.vertex, "anchor_a": st.anchor_a,
                              "anchor_b": st.anchor_b, "branch": st.branch})
        return {
            "name": self.name,
            "graph": {"name": self.graph.name, "labels": list(self.graph.labels),
                      "edges": [list(e) for e in self.graph.edge_labels()]},
            "steps": steps,
            "parameters": [{"name": p.name, "default": p.default, "lo": p.lo, "hi": p.hi}
                           for p in self.parameters],
            "target": list(self.target),
        }

    @classmethod
    def from_dict(cls, doc: Mapping) -> "ConstructionPlan":
        gd = doc["graph"]
        g = Graph.from_edges(gd["labels"], [tuple(e) for e in gd["edges"]], name=gd.get("name", ""))
        steps = []
        for s in doc["steps"]:
            kind = s["kind"]
            if kind == "FixPoint":
                steps.append(FixPoint(s["vertex"], s["x"], s["y"]))
            elif kind == "PolarFrom":
                steps.append(PolarFrom(s["vertex"], s["anchor"], s["angle"]))
            elif kind == "CircleCircle":
                steps.append(CircleCircle(s["vertex"], s["anchor_a"], s["anchor_b"], int(s["branch"])))
            else:
                raise ValueError(f"unknown step kind {kind!r}")
        params = tuple(Parameter(p["name"], p["default"], p["lo"], p["hi"]) for p in doc["parameters"])
        return cls(doc["name"], g, tuple(steps), params, tuple(doc["target"]))


@dataclass
class Placement:
    plan: ConstructionPlan
    params: dict[str, float]
    coords: dict[str, tuple[float, float]]

    @property
    def target_distance(self) -> float:
        u, v = self.plan.target
        return math.dist(self.coords[u], self.coords[v])

    def array(self) -> np.ndarray:
        return np.array([self.coords[lab] for lab in self.plan.graph.labels])

    def min_separation(self) -> float:
        return min_separation(self.plan.graph, self.array())

    def edge_errors(self) -> list[float]:
        return [abs(math.dist(self.coords[u], self.coords[v]) - 1.0) for u, v in self.plan.realized_edges()]


def execute(plan: ConstructionPlan, params: Mapping[str, float] | None = None) -> Placement:
    """Place every vertex in step order; raises :class:`StepFailure`."""
    values = plan.defaults()
    if params:
        unknown = set(params) - set(values)
        if unknown:
            raise KeyError(f"unknown parameters {sorted(unknown)}")
        values.update({k: float(v) for k, v in params.items()})
    for p in plan.parameters:
        if not p.lo <= values[p.name] <= p.hi:
            raise ValueError(f"parameter {p.name}={values[p.name]} outside [{p.lo}, {p.hi}]")
    pos: dict[str, tuple[float, float]] = {}
    for k, st in enumerate(plan.steps):
        if isinstance(st, FixPoint):
            pos[st.vertex] = (float(st.x), float(st.y))
        elif isinstance(st, PolarFrom):
            ang = values[st.angle] if isinstance(st.angle, str) else float(st.angle)
            ax, ay = pos[st.anchor]
            pos[st.vertex] = (ax + math.cos(ang), ay + math.sin(ang))
        else:
            pa, pb = pos[st.anchor_a], pos[st.anchor_b]
            p = circle_circle(pa, pb, st.branch)
            if p is None:
                raise StepFailure(k, st.vertex, math.dist(pa, pb))
            pos[st.vertex] = p
    return Placement(plan, values, pos)


# --------------------------------------------------------------------------
# Plans

HEAWOOD_FRAME = {
    "7": (0.5, 1.0), "b": (-0.5, 1.0), "3": (-0.5, 0.0),
    "e": (-0.5, -1.0), "5": (0.5, -1.0), "g": (0.5, 0.0),
}
# folded-rung pose and final pose read off the construction drawings
HEAWOOD_FOLD_POSE = {"d": (-0.45, -0.8), "4": (-0.8, 0.0), "f": (-0.45, 0.8)}
HEAWOOD_FINAL_POSE = {
    **HEAWOOD_FRAME, **HEAWOOD_FOLD_POSE,
    "c": (-0.65, 0.9), "2": (-0.075, 0.2), "6": (-0.075, -0.2), "1": (0.35, 0.9), "a": (0.825, 0.0),
}
BRANCH_VERTICES = ("2", "6", "a", "1")


def _heawood_steps(branches: Mapping[str, int]) -> tuple[Step, ...]:
    fixed = tuple(FixPoint(v, *HEAWOOD_FRAME[v]) for v in ("7", "b", "3", "e", "5", "g"))
    return fixed + (
        PolarFrom("d", "5", "alpha"),
        PolarFrom("4", "d", "beta"),
        CircleCircle("f", "4", "7", branches["f"]),
        CircleCircle("c", "3", "4", branches["c"]),
        CircleCircle("2", "b", "d", branches["2"]),
        CircleCircle("6", "e", "f", branches["6"]),
        CircleCircle("a", "6", "2", branches["a"]),
        CircleCircle("1", "g", "c", branches["1"]),
    )


@lru_cache(maxsize=None)
def _heawood_defaults() -> tuple[float, float, tuple[tuple[str, int], ...]]:
    """Fit (alpha, beta) to the folded pose, then pick each circle-circle
    branch as the intersection nearest the final drawing."""
    d0 = np.subtract(HEAWOOD_FOLD_POSE["d"], HEAWOOD_FRAME["5"])
    q0 = np.subtract(HEAWOOD_FOLD_POSE["4"], HEAWOOD_FOLD_POSE["d"])
    start = np.array([math.atan2(d0[1], d0[0]), math.atan2(q0[1], q0[0])])
    five, seven = np.array(HEAWOOD_FRAME["5"]), np.array(HEAWOOD_FRAME["7"])

    def pose(x):
        d = five + (math.cos(x[0]), math.sin(x[0]))
        q = d + (math.cos(x[1]), math.sin(x[1]))
        cands = [circle_circle(q, seven, b) for b in (1, -1)]
        cands = [np.array(c) for c in cands if c is not None]
        if not cands:
            return d, q, None
        goal = np.array(HEAWOOD_FOLD_POSE["f"])
        return d, q, min(cands, key=lambda c: np.linalg.norm(c - goal))

    def resid(x):
        d, q, f = pose(x)
        if f is None:
            f = np.array([10.0, 10.0])
        return np.concatenate([d - HEAWOOD_FOLD_POSE["d"], q - HEAWOOD_FOLD_POSE["4"], f - HEAWOOD_FOLD_POSE["f"]])

    fit = least_squares(resid, start)
    alpha, beta = (float(v) for v in fit.x)

    pos = {v: np.array(p) for v, p in HEAWOOD_FRAME.items()}
    pos["d"], pos["4"], _ = pose(fit.x)
    branches: dict[str, int] = {}
    for v, a, b in (("f", "4", "7"), ("c", "3", "4"), ("2", "b", "d"),
                    ("6", "e", "f"), ("a", "6", "2"), ("1", "g", "c")):
        goal = np.array(HEAWOOD_FINAL_POSE[v])
        options = [(br, circle_circle(pos[a], pos[b], br)) for br in (1, -1)]
        br, p = min(((br, np.array(p)) for br, p in options if p is not None),
                    key=lambda t: np.linalg.norm(t[1] - goal))
        branches[v] = br
        pos[v] = p
    return alpha, beta, tuple(sorted(branches.items()))


def heawood_plan(branches: Mapping[str, int] | None = None) -> ConstructionPlan:
    """Placement program for the Heawood graph minus edge {1, a}.

    Six vertices sit on a fixed 1 x 2 frame; ``alpha`` and ``beta`` are the
    angles of d about 5 and of 4 about d; everything else is forced by unit
    circle intersections. ``branches`` overrides the default sides
    (keys among f, c, 2, 6, a, 1).
    """
    alpha, beta, default_br = _heawood_defaults()
    br = dict(default_br)
    if branches:
        unknown = set(branches) - set(br)
        if unknown:
            raise KeyError(f"no circle-circle step for {sorted(unknown)}")
        br.update({k: int(v) for k, v in branches.items()})
    return ConstructionPlan(
        name="heawood",
        graph=catalog("heawood"),
        steps=_heawood_steps(br),
        parameters=(
            Parameter("alpha", alpha, alpha - math.pi, alpha + math.pi),
            Parameter("beta", beta, beta - math.pi, beta + math.pi),
        ),
        target=("1", "a"),
    )


def heawood_variants() -> list[ConstructionPlan]:
    """All 16 branch combinations for vertices 2, 6, a and 1."""
    base = heawood_plan()
    return [
        base.with_branches(dict(zip(BRANCH_VERTICES, signs)))
        for signs in itertools.product((1, -1), repeat=len(BRANCH_VERTICES))
    ]


def four_bar_plan() -> ConstructionPlan:
    """Unit rhombus A-B-C-D hinged at B by ``theta``; target is the
    diagonal B-D, which is unit exactly at theta = pi/3."""
    g = Graph.from_edges("ABCD", [("A", "B"), ("B", "C"), ("C", "D"), ("D", "A"), ("B", "D")], name="four_bar")
    return ConstructionPlan(
        name="four_bar",
        graph=g,
        steps=(
            FixPoint("A", 0.0, 0.0),
            FixPoint("B", 1.0, 0.0),
            PolarFrom("C", "B", "theta"),
            CircleCircle("D", "A", "C", 1),
        ),
        parameters=(Parameter("theta", math.pi / 2, 0.0, math.pi),),
        target=("B", "D"),
    )


PLANS = {"heawood": heawood_plan, "four_bar": four_bar_plan}


def get_plan(name: str) -> ConstructionPlan:
    try:
        return PLANS[name]()
    except KeyError:
        raise KeyError(f"unknown plan {name!r}; choose from {', '.join(PLANS)}") from None


# --------------------------------------------------------------------------
# Sweeps


@dataclass(frozen=True)
class Sample:
    index: int
    params: dict
    target_distance: float | None
    min_separation: float | None
    status: str  # "ok" or "fail:<step>:<vertex>"

    @property
    def ok(self) -> bool:
        return self.target_distance is not None


@dataclass(frozen=True)
class Bracket:
    axis: str
    lo: float
    hi: float
    fixed: dict
    d_lo: float
    d_hi: float


@dataclass
class SweepResult:
    samples: list[Sample]
    brackets: list[Bracket]
    axes: tuple[str, ...] = ()


def evaluate(plan: ConstructionPlan, params: Mapping[str, float], index: int = 0) -> Sample:
    try:
        pl = execute(plan, params)
    except StepFailure as exc:
        return Sample(index, dict(params), None, None, f"fail:{exc.step_index}:{exc.vertex}")
    return Sample(index, dict(params), pl.target_distance, pl.min_separation(), "ok")


def _brackets_along(line: Sequence[Sample], axis: str, fixed: dict) -> list[Bracket]:
    out = []
    for s, t in zip(line[:-1], line[1:]):
        if s.ok and t.ok and (s.target_distance - 1.0) * (t.target_distance - 1.0) < 0:
            out.append(Bracket(axis, s.params[axis], t.params[axis], dict(fixed),
                               s.target_distance, t.target_distance))
    return out


def sweep(
    plan: ConstructionPlan,
    axis: str,
    lo: float | None = None,
    hi: float | None = None,
    samples: int = 1000,
    fixed: Mapping[str, float] | None = None,
) -> SweepResult:
    """Evaluate the plan at evenly spaced values of one parameter."""
    if samples < 2:
        raise ValueError("need at least two samples")
    p = plan.parameter(axis)
    lo = p.lo if lo is None else lo
    hi = p.hi if hi is None else hi
    base = plan.defaults()
    base.update(fixed or {})
    fixed_only = {k: v for k, v in base.items() if k != axis}
    line = [
        evaluate(plan, {**base, axis: float(x)}, k)
        for k, x in enumerate(np.linspace(lo, hi, samples))
    ]
    return SweepResult(line, _brackets_along(line, axis, fixed_only), (axis,))


def sweep_grid(
    plan: ConstructionPlan,
    ranges: Mapping[str, tuple[float, float]],
    samples: int | Mapping[str, int] = 100,
    fixed: Mapping[str, float] | None = None,
) -> SweepResult:
    """Two-parameter grid; brackets are searched along every grid line in
    both axis directions. Samples are ordered with the first axis slowest."""
    (a1, (lo1, hi1)), (a2, (lo2, hi2)) = list(ranges.items())
    n1 = samples if isinstance(samples, int) else samples[a1]
    n2 = samples if isinstance(samples, int) else samples[a2]
    base = plan.defaults()
    base.update(fixed or {})
    v1 = np.linspace(lo1, hi1, n1)
    v2 = np.linspace(lo2, hi2, n2)
    grid = [
        [evaluate(plan, {**base, a1: float(x), a2: float(y)}, i * n2 + j) for j, y in enumerate(v2)]
        for i, x in enumerate(v1)
    ]
    rest = {k: v for k, v in base.items() if k not in (a1, a2)}
    brackets = []
    for i, x in enumerate(v1):
        brackets += _brackets_along(grid[i], a2, {**rest, a1: float(x)})
    for j, y in enumerate(v2):
        brackets += _brackets_along([grid[i][j] for i in range(n1)], a1, {**rest, a2: float(y)})
    return SweepResult([s for row in grid for s in row], brackets, (a1, a2))


@dataclass
class BisectResult:
    status: str  # "converged", "width", "invalidated"
    param: float
    params: dict
    target_distance: float | None
    iterations: int
    placement: Placement | None = None
    failing_interval: tuple[float, float] | None = None


def bisect_bracket(
    plan: ConstructionPlan,
    bracket: Bracket,
    tol: float = 1e-12,
    min_width: float = 1e-15,
    max_iterations: int = 200,
) -> BisectResult:
    """Bisect ``d(target) - 1`` on the bracket's axis."""
    axis = bracket.axis

    def at(x):
        return execute(plan, {**bracket.fixed, axis: x})

    lo, hi = bracket.lo, bracket.hi
    try:
        p_lo = at(lo)
    except StepFailure:
        return BisectResult("invalidated", lo, {**bracket.fixed, axis: lo}, None, 0, None, (lo, hi))
    f_lo = p_lo.target_distance - 1.0
    if lo == hi or abs(f_lo) < tol:
        return BisectResult("converged", lo, p_lo.params, p_lo.target_distance, 0, p_lo)
    best = p_lo
    for it in range(1, max_iterations + 1):
        mid = 0.5 * (lo + hi)
        try:
            pm = at(mid)
        except StepFailure:
            return BisectResult("invalidated", mid, {**bracket.fixed, axis: mid}, None, it, best, (lo, hi))
        fm = pm.target_distance - 1.0
        best = pm
        if abs(fm) < tol:
            return BisectResult("converged", mid, pm.params, pm.target_distance, it, pm)
        if (fm > 0) == (f_lo > 0):
            lo, f_lo = mid, fm
        else:
            hi = mid
        if hi - lo < min_width or 0.5 * (lo + hi) in (lo, hi):
            return BisectResult("width", mid, pm.params, pm.target_distance, it, pm)
    return BisectResult("width", best.params[axis], best.params, best.target_distance, max_iterations, best)


# --------------------------------------------------------------------------
# Full-graph search


@dataclass
class Candidate:
    bracket: Bracket
    bisection: BisectResult
    embedding: Embedding | None
    max_edge_deviation: float
    min_separation: float
    passed: bool
    label: str = "candidate"


@dataclass
class SearchReport:
    """Outcome of a bracket search. ``status`` is ``CANDIDATE`` only when a
    candidate passed verification on the full graph including the target
    edge; otherwise ``NO_BRACKET`` or ``NO_VALID_CANDIDATE``."""

    status: str
    sweeps: list[tuple[dict, SweepResult]]
    candidates: list[Candidate] = field(default_factory=list)
    edge_tol: float = 1e-9
    separation_tol: float = 1e-6

    @property
    def n_samples(self) -> int:
        return sum(len(s.samples) for _, s in self.sweeps)

    @property
    def n_brackets(self) -> int:
        return sum(len(s.brackets) for _, s in self.sweeps)

    def best(self) -> Candidate | None:
        ok = [c for c in self.candidates if c.passed]
        return max(ok, key=lambda c: c.min_separation) if ok else None


def candidate_from_bracket(
    plan: ConstructionPlan,
    bracket: Bracket,
    edge_tol: float = 1e-9,
    separation_tol: float = 1e-6,
) -> Candidate:
    bis = bisect_bracket(plan, bracket)
    if bis.status == "invalidated" or bis.placement is None:
        return Candidate(bracket, bis, None, math.inf, 0.0, False)
    g = plan.graph
    emb = refine(g, bis.placement.coords, allow_similarity=False)
    check = verify(g, emb.coords, edge_tol, separation_tol)
    return Candidate(bracket, bis, emb, check.max_edge_deviation, check.min_separation, check.passed)


def search_plan(
    plans: Iterable[ConstructionPlan],
    ranges: Mapping[str, tuple[float, float]] | None = None,
    samples: int = 100,
    max_candidates: int | None = None,
    stop_at_first: bool = False,
    edge_tol: float = 1e-9,
    separation_tol: float = 1e-6,
) -> SearchReport:
    """Grid-sweep each plan over two parameters and try every bracket."""
    sweeps = []
    candidates: list[Candidate] = []
    for plan in plans:
        rng = ranges or {p.name: (p.lo, p.hi) for p in plan.parameters[:2]}
        res = sweep_grid(plan, rng, samples)
        sweeps.append((plan.branches(), res))
        for br in res.brackets:
            if max_candidates is not None and len(candidates) >= max_candidates:
                break
            cand = candidate_from_bracket(plan, br, edge_tol, separation_tol)
            candidates.append(cand)
            if cand.passed and stop_at_first:
                break
        if stop_at_first and any(c.passed for c in candidates):
            break
    if any(c.passed for c in candidates):
        status = "CANDIDATE"
    elif not any(s.brackets for _, s in sweeps):
        status = "NO_BRACKET"
    else:
        status = "NO_VALID_CANDIDATE"
    return SearchReport(status, sweeps, candidates, edge_tol, separation_tol)
