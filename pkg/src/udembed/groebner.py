"""Buchberger completion over Q, reduced bases, and numeric back-substitution
for triangular lex bases."""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .graphs import Graph
from .poly import LEX, ConstraintSystem, MonomialOrder, Polynomial, format_poly, monic

FEASIBLE = "Feasible"
INFEASIBLE = "Infeasible"
LIMIT_EXCEEDED = "LimitExceeded"


@dataclass(frozen=True)
class Limits:
    max_pairs: int = 10**6
    max_degree: int = 40
    max_work: int = 10**8


class _LimitHit(Exception):
    pass


@dataclass
class GroebnerResult:
    basis: list[Polynomial]
    status: str
    names: list[str]
    order: MonomialOrder
    stats: dict = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return self.status == FEASIBLE

    def lines(self) -> list[str]:
        """Integer-cleared text of each basis element, in basis order."""
        return [format_poly(g, self.names, self.order) for g in self.basis]


def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


def _quot(a: tuple, b: tuple) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def s_polynomial(p: Polynomial, q: Polynomial, order: MonomialOrder = LEX) -> Polynomial:
    if p.is_zero() or q.is_zero():
        raise ValueError("S-polynomial of a zero polynomial")
    mp, cp = order.leading(p)
    mq, cq = order.leading(q)
    l = _lcm(mp, mq)
    return p.mul_term(_quot(l, mp), 1 / cp) - q.mul_term(_quot(l, mq), 1 / cq)


def normal_form(
    p: Polynomial,
    basis: Sequence[Polynomial],
    order: MonomialOrder = LEX,
    _work: list | None = None,
    _max_work: int | None = None,
) -> Polynomial:
    """Fully reduced remainder of ``p`` on division by ``basis``.

    Divisors are tried in sequence order, so the result is deterministic for
    a given basis sequence.
    """
    leads = []
    for g in basis:
        if g.is_zero():
            raise ValueError("zero polynomial in divisor list")
        m, c = order.leading(g)
        leads.append((m, c, g))
    key = order.key
    rest = dict(p.terms)
    rem: dict = {}
    steps = 0
    while rest:
        m = max(rest, key=key)
        c = rest[m]
        for lm, lc, g in leads:
            if _divides(lm, m):
                q = _quot(m, lm)
                f = c / lc
                for gm, gc in g.terms.items():
                    t = tuple(a + b for a, b in zip(gm, q))
                    s = rest.get(t, 0) - f * gc
                    if s:
                        rest[t] = s
                    else:
                        rest.pop(t, None)
                steps += 1
                break
        else:
            rem[m] = c
            del rest[m]
    if _work is not None:
        _work[0] += steps
        if _max_work is not None and _work[0] > _max_work:
            raise _LimitHit("work")
    return Polynomial._raw(p.nvars, rem)


def _reduce_basis(G: list[Polynomial], order: MonomialOrder) -> list[Polynomial]:
    G = [monic(g, order) for g in G]
    leads = [order.leading(g)[0] for g in G]
    keep = []
    for i, g in enumerate(G):
        redundant = False
        for j, h in enumerate(G):
            if i == j:
                continue
            if _divides(leads[j], leads[i]) and (leads[j] != leads[i] or j < i):
                redundant = True
                break
        if not redundant:
            keep.append(g)
    out = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1 :]
        out.append(monic(normal_form(g, others, order), order))
    out.sort(key=lambda g: order.key(order.leading(g)[0]), reverse=True)
    return out


def buchberger(
    system: ConstraintSystem | Sequence[Polynomial],
    order: MonomialOrder = LEX,
    limits: Limits = Limits(),
    names: Sequence[str] | None = None,
    tie_seed: int | None = None,
) -> GroebnerResult:
    """Reduced Groebner basis by Buchberger's algorithm.

    Pairs are chosen by the normal strategy (smallest lcm degree, then the
    smallest lcm in ``order``); pairs with coprime leading monomials and
    pairs covered by the chain criterion are skipped. ``tie_seed`` shuffles
    the tie-break among equally ranked pairs, which must not change the
    reduced basis.
    """
    if isinstance(system, ConstraintSystem):
        polys = system.nonzero_polys()
        names = system.names
    else:
        polys = [p for p in system if not p.is_zero()]
        if names is None:
            nv = polys[0].nvars if polys else 0
            names = [f"v{i}" for i in range(nv)]
    names = list(names)
    t0 = time.perf_counter()
    stats = {"pairs": 0, "zero_reductions": 0, "skipped_product": 0, "skipped_chain": 0,
             "max_degree": max((p.total_degree() for p in polys), default=0), "work": 0}

    def done(basis, status):
        stats["seconds"] = round(time.perf_counter() - t0, 6)
        return GroebnerResult(basis, status, names, order, stats)

    if not polys:
        return done([], FEASIBLE)
    nv = polys[0].nvars
    one = Polynomial.constant(nv, 1)
    if any(p.is_constant() for p in polys):
        return done([one], INFEASIBLE)

    rng = random.Random(tie_seed) if tie_seed is not None else None
    G = [monic(p, order) for p in polys]
    LM = [order.leading(g)[0] for g in G]
    pending = {(i, j) for j in range(len(G)) for i in range(j)}
    tiebreak: dict = {}
    work = [0]

    def rank(pair):
        i, j = pair
        l = _lcm(LM[i], LM[j])
        if rng is not None:
            tb = tiebreak.setdefault(pair, rng.random())
        else:
            tb = pair
        return (sum(l), order.key(l), tb)

    def chain(i, j, l):
        for k in range(len(G)):
            if k in (i, j):
                continue
            if (min(i, k), max(i, k)) in pending or (min(j, k), max(j, k)) in pending:
                continue
            if _divides(LM[k], l):
                return True
        return False

    try:
        while pending:
            pair = min(pending, key=rank)
            pending.discard(pair)
            i, j = pair
            l = _lcm(LM[i], LM[j])
            if all(a == 0 or b == 0 for a, b in zip(LM[i], LM[j])):
                stats["skipped_product"] += 1
                continue
            if chain(i, j, l):
                stats["skipped_chain"] += 1
                continue
            stats["pairs"] += 1
            if stats["pairs"] > limits.max_pairs:
                raise _LimitHit("pairs")
            r = normal_form(s_polynomial(G[i], G[j], order), G, order, work, limits.max_work)
            if r.is_zero():
                stats["zero_reductions"] += 1
                continue
            if r.is_constant():
                stats["work"] = work[0]
                return done([one], INFEASIBLE)
            deg = r.total_degree()
            stats["max_degree"] = max(stats["max_degree"], deg)
            if deg > limits.max_degree:
                raise _LimitHit("degree")
            G.append(monic(r, order))
            LM.append(order.leading(G[-1])[0])
            n = len(G) - 1
            pending.update((k, n) for k in range(n))
    except _LimitHit as hit:
        stats["work"] = work[0]
        stats["limit"] = str(hit)
        return done([monic(g, order) for g in G], LIMIT_EXCEEDED)

    stats["work"] = work[0]
    basis = _reduce_basis(G, order)
    if len(basis) == 1 and basis[0].is_constant():
        return done([one], INFEASIBLE)
    return done(basis, FEASIBLE)


def is_groebner(basis: Sequence[Polynomial], order: MonomialOrder = LEX) -> bool:
    """Buchberger criterion: all S-polynomials reduce to zero."""
    return all(
        normal_form(s_polynomial(basis[i], basis[j], order), basis, order).is_zero()
        for j in range(len(basis))
        for i in range(j)
    )


def is_reduced(basis: Sequence[Polynomial], order: MonomialOrder = LEX) -> bool:
    for i, g in enumerate(basis):
        m, c = order.leading(g)
        if c != 1:
            return False
        for j, h in enumerate(basis):
            if i != j:
                lm = order.leading(h)[0]
                if any(_divides(lm, t) for t in g.terms):
                    return False
    return True


# --------------------------------------------------------------------------
# Numeric back-substitution


def _polyval(c: np.ndarray, x: float) -> float:
    # c: coefficients, highest degree first
    v = 0.0
    for a in c:
        v = v * x + a
    return v


def _polish(c: np.ndarray, dc: np.ndarray, x: float) -> float:
    # Newton steps, kept only while the residual shrinks
    fx = abs(_polyval(c, x))
    for _ in range(4):
        d = _polyval(dc, x)
        if d == 0.0 or fx == 0.0:
            break
        y = x - _polyval(c, x) / d
        fy = abs(_polyval(c, y))
        if fy >= fx:
            break
        x, fx = y, fy
    return x


def real_roots(coeffs: Sequence[float], lo: float = -1e6, hi: float = 1e6, tol: float = 1e-12) -> list[float]:
    """Real roots of a univariate polynomial on ``[lo, hi]``.

    The critical points (roots of the derivative, found recursively) split
    the interval into monotone pieces; each piece holds at most one simple
    root, located by bisection on the sign change. Critical points where
    the value vanishes (to rounding) are reported as multiple roots.
    """
    c = np.asarray(coeffs, dtype=float)
    scale = np.max(np.abs(c)) if c.size else 0.0
    if scale == 0.0:
        return []
    nz = np.nonzero(np.abs(c) > 1e-14 * scale)[0]
    c = c[nz[0]:]
    deg = len(c) - 1
    if deg <= 0:
        return []
    if deg == 1:
        r = -c[1] / c[0]
        return [r] if lo <= r <= hi else []
    dc = c[:-1] * np.arange(deg, 0, -1)
    crit = [x for x in real_roots(dc, lo, hi, tol) if lo < x < hi]
    knots = [lo] + crit + [hi]
    absc = np.abs(c)

    def small(x):
        mag = _polyval(absc, abs(x))
        return abs(_polyval(c, x)) <= 1e-10 * max(mag, 1e-300)

    roots: list[float] = []
    for x in crit:
        if small(x):
            roots.append(x)
    for a, b in zip(knots[:-1], knots[1:]):
        fa, fb = _polyval(c, a), _polyval(c, b)
        if fa == 0.0:
            roots.append(a)
            continue
        if fa * fb > 0 or fb == 0.0:
            if fb == 0.0 and b == hi:
                roots.append(b)
            continue
        for _ in range(400):
            mid = 0.5 * (a + b)
            if b - a <= tol * max(1.0, abs(mid)) or mid in (a, b):
                break
            fm = _polyval(c, mid)
            if fm == 0.0:
                a = b = mid
                break
            if (fm > 0) == (fa > 0):
                a, fa = mid, fm
            else:
                b = mid
        roots.append(_polish(c, dc, 0.5 * (a + b)))
    roots.sort()
    out: list[float] = []
    for r in roots:
        if not out or abs(r - out[-1]) > 1e-9 * max(1.0, abs(r)):
            out.append(r)
    return out


def _univariate(g: Polynomial, var: int, known: Mapping[int, float]) -> tuple[np.ndarray, float]:
    """Coefficients (highest first) of ``g`` in ``var`` after substituting
    ``known``; also returns the magnitude scale used for zero tests."""
    deg = max(m[var] for m in g.terms)
    coef = np.zeros(deg + 1)
    scale = 0.0
    for m, c in g.terms.items():
        t = float(c)
        for i, e in enumerate(m):
            if e and i != var:
                t *= known[i] ** e
        coef[deg - m[var]] += t
        scale += abs(t)
    return coef, scale


@dataclass
class Extraction:
    triangular: bool
    solutions: list[dict[str, float]] = field(default_factory=list)
    failed_branches: list[dict] = field(default_factory=list)


def extract_solutions(
    result: GroebnerResult, lo: float = -1e6, hi: float = 1e6, tol: float = 1e-12
) -> Extraction:
    """All real solutions of a triangular lex basis, by back-substitution.

    Non-lex orders and bases where some variable is never a leading variable
    (positive-dimensional solution sets) come back with
    ``triangular=False`` and no solutions.
    """
    if result.status != FEASIBLE:
        raise ValueError(f"cannot extract solutions from a {result.status} result")
    order = result.order
    if order.kind != "lex":
        return Extraction(False)
    names = result.names
    rank = order.rank(len(names))
    position = {v: k for k, v in enumerate(rank)}

    def leading_var(g):
        return min(g.variables(), key=position.__getitem__) if g.variables() else None

    levels: dict[int, list[Polynomial]] = {v: [] for v in rank}
    for g in result.basis:
        lv = leading_var(g)
        if lv is not None:
            levels[lv].append(g)
    if any(not levels[v] for v in rank):
        return Extraction(False)

    out = Extraction(True)
    branches: list[dict[int, float]] = [{}]
    for v in reversed(rank):
        nxt = []
        for known in branches:
            polys = []
            dead = False
            for g in levels[v]:
                coef, scale = _univariate(g, v, known)
                live = np.abs(coef) > 1e-10 * max(scale, 1e-300)
                if not live.any():
                    continue  # vanishes identically on this branch
                if not live[:-1].any():
                    dead = True  # nonzero constant: inconsistent branch
                    break
                polys.append((coef, scale))
            if dead:
                continue
            if not polys:
                out.failed_branches.append({"variable": names[v], "reason": "free variable",
                                            "known": {names[i]: x for i, x in known.items()}})
                continue
            polys.sort(key=lambda cs: len(np.trim_zeros(cs[0], "f")))
            coef, _ = polys[0]
            for r in real_roots(coef, lo, hi, tol):
                ok = all(
                    abs(_polyval(c, r)) <= 1e-8 * max(_polyval(np.abs(c), abs(r)), 1e-300)
                    for c, _ in polys[1:]
                )
                if ok:
                    nxt.append({**known, v: float(r)})
        branches = nxt
    out.solutions = [{names[i]: x for i, x in sorted(b.items())} for b in branches]
    return out


def check_distinct(
    solutions: Sequence[Mapping[str, tuple[float, float]]],
    graph: Graph,
    tol: float = 1e-9,
) -> list[tuple[dict, list[tuple[str, str]]]]:
    """Flag vertex pairs closer than ``tol`` in each coordinate assignment."""
    report = []
    labels = graph.labels
    for coords in solutions:
        dup = []
        for i in range(len(labels)):
            for j in range(i + 1, len(labels)):
                (x1, y1), (x2, y2) = coords[labels[i]], coords[labels[j]]
                if math.hypot(x1 - x2, y1 - y2) < tol:
                    dup.append((labels[i], labels[j]))
        report.append((dict(coords), dup))
    return report
