"""Exact sparse multivariate polynomials over the rationals, and the
unit-distance constraint systems built from graphs.

Monomials are dense exponent tuples over the ring's variable count; the
variable *names* live in a :class:`VarTable` carried by the constraint
system, so arithmetic itself never looks at names.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

from .graphs import Graph, GraphError

Monomial = tuple  # tuple[int, ...] of exponents


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        raise TypeError("floats are not allowed as exact coefficients")
    return Fraction(c)


class Polynomial:
    """Immutable polynomial ``sum c_m * x^m`` with Fraction coefficients."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Monomial, object] | None = None):
        self.nvars = nvars
        clean = {}
        for m, c in (terms or {}).items():
            if len(m) != nvars:
                raise ValueError(f"monomial {m} has wrong arity for {nvars} variables")
            c = _as_fraction(c)
            if c:
                clean[tuple(m)] = c
        self.terms: dict[Monomial, Fraction] = clean
        self._hash = None

    @classmethod
    def constant(cls, nvars: int, c) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int) -> "Polynomial":
        m = [0] * nvars
        m[i] = 1
        return cls(nvars, {tuple(m): 1})

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "Polynomial":
        # trusted constructor: terms already clean
        p = cls.__new__(cls)
        p.nvars, p.terms, p._hash = nvars, terms, None
        return p

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def variables(self) -> set[int]:
        return {i for m in self.terms for i, e in enumerate(m) if e}

    def _check(self, other: "Polynomial"):
        if self.nvars != other.nvars:
            raise ValueError("polynomials live in different rings")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.nvars, other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.nvars, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        self._check(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial._raw(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial.constant(self.nvars, 1)
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c) -> "Polynomial":
        c = _as_fraction(c)
        if not c:
            return Polynomial._raw(self.nvars, {})
        return Polynomial._raw(self.nvars, {m: c * v for m, v in self.terms.items()})

    def mul_term(self, mono: Monomial, c: Fraction) -> "Polynomial":
        return Polynomial._raw(
            self.nvars, {tuple(a + b for a, b in zip(m, mono)): c * v for m, v in self.terms.items()}
        )

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Polynomial.constant(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({format_poly(self)})"

    def evaluate(self, point: Sequence) -> object:
        """Evaluate at a point (floats, Fractions, or a mix)."""
        total = 0
        for m, c in self.terms.items():
            t = c if not any(isinstance(v, float) for v in point) else float(c)
            for v, e in zip(point, m):
                if e:
                    t = t * v**e
            total = total + t
        return total

    def substitute(self, values: Mapping[int, object]) -> "Polynomial":
        """Substitute exact values for some variables (ring size unchanged)."""
        out: dict = {}
        for m, c in self.terms.items():
            coef = c
            mono = list(m)
            for i, v in values.items():
                if mono[i]:
                    coef = coef * _as_fraction(v) ** mono[i]
                    mono[i] = 0
            if coef:
                key = tuple(mono)
                s = out.get(key, 0) + coef
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return Polynomial._raw(self.nvars, out)

    def extend(self, nvars: int) -> "Polynomial":
        """Embed into a ring with more variables (appended at the end)."""
        pad = (0,) * (nvars - self.nvars)
        return Polynomial._raw(nvars, {m + pad: c for m, c in self.terms.items()})

    def primitive(self) -> "Polynomial":
        """Integer-cleared, content-free form with positive lex-leading
        coefficient."""
        return primitive(self)


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def poly_scale(p: Polynomial, c) -> Polynomial:
    return p.scale(c)


# --------------------------------------------------------------------------
# Monomial orders


@dataclass(frozen=True)
class MonomialOrder:
    """``lex`` or ``grevlex`` with a variable precedence (highest first).

    ``precedence`` lists variable indices from largest to smallest; ``None``
    means index order (variable 0 largest).
    """

    kind: str = "lex"
    precedence: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("lex", "grevlex"):
            raise ValueError(f"unknown monomial order {self.kind!r}")
        if self.precedence is not None and sorted(self.precedence) != list(range(len(self.precedence))):
            raise ValueError("precedence must be a permutation of variable indices")

    def key(self, m: Monomial):
        e = m if self.precedence is None else tuple(m[i] for i in self.precedence)
        if self.kind == "lex":
            return e
        return (sum(e), tuple(-x for x in reversed(e)))

    def leading(self, p: Polynomial) -> tuple[Monomial, Fraction]:
        m = max(p.terms, key=self.key)
        return m, p.terms[m]

    def sorted_terms(self, p: Polynomial) -> list[tuple[Monomial, Fraction]]:
        return sorted(p.terms.items(), key=lambda kv: self.key(kv[0]), reverse=True)

    def rank(self, nvars: int) -> list[int]:
        """Variable indices from largest to smallest."""
        return list(self.precedence) if self.precedence is not None else list(range(nvars))


LEX = MonomialOrder("lex")


def primitive(p: Polynomial, order: MonomialOrder = LEX) -> Polynomial:
    if p.is_zero():
        return p
    den = reduce(lcm, (c.denominator for c in p.terms.values()), 1)
    nums = [int(c * den) for c in p.terms.values()]
    g = reduce(gcd, (abs(x) for x in nums), 0)
    _, lc = order.leading(p)
    sign = 1 if lc > 0 else -1
    return p.scale(Fraction(den * sign, g))


def monic(p: Polynomial, order: MonomialOrder = LEX) -> Polynomial:
    _, lc = order.leading(p)
    return p if lc == 1 else p.scale(1 / lc)


# --------------------------------------------------------------------------
# Display / parse

_DEFAULT_NAMES: dict[int, list[str]] = {}


def _names_for(n: int) -> list[str]:
    if n not in _DEFAULT_NAMES:
        _DEFAULT_NAMES[n] = [f"v{i}" for i in range(n)]
    return _DEFAULT_NAMES[n]


def format_monomial(m: Monomial, names: Sequence[str], order: MonomialOrder = LEX) -> str:
    parts = []
    for i in order.rank(len(m)):
        e = m[i]
        if e == 1:
            parts.append(names[i])
        elif e > 1:
            parts.append(f"{names[i]}^{e}")
    return "*".join(parts)


def format_poly(
    p: Polynomial,
    names: Sequence[str] | None = None,
    order: MonomialOrder = LEX,
    clear: bool = True,
) -> str:
    """Render as text, e.g. ``4*y3^2 - 3``.

    With ``clear`` the polynomial is first scaled to its primitive integer
    form, which is how bases are listed for comparison with hand-written
    systems.
    """
    names = list(names) if names is not None else _names_for(p.nvars)
    if p.is_zero():
        return "0"
    if clear:
        p = primitive(p, order)
    out = []
    for k, (m, c) in enumerate(order.sorted_terms(p)):
        mono = format_monomial(m, names, order)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if k == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


class PolyParseError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*^()=]))")


def parse_poly(text: str, names: Sequence[str]) -> Polynomial:
    """Parse a polynomial (or an equation ``lhs = rhs`` as ``lhs - rhs``).

    Multiplication may be written with ``*`` or by juxtaposition
    (``4 y4^3``); powers use ``^`` or ``**``.
    """
    names = list(names)
    idx = {n: i for i, n in enumerate(names)}
    nv = len(names)
    toks: list[tuple[str, str]] = []
    pos = 0
    while pos < len(text):
        if not text[pos:].strip():
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolyParseError(f"bad character {text[pos]!r} at {pos}")
        num, name, sym = m.groups()
        toks.append(("num", num) if num else ("name", name) if name else ("sym", "^" if sym == "**" else sym))
        pos = m.end()
    toks.append(("end", ""))
    k = 0

    def peek():
        return toks[k]

    def take():
        nonlocal k
        k += 1
        return toks[k - 1]

    def expr():
        sign = 1
        if peek() == ("sym", "-"):
            take()
            sign = -1
        elif peek() == ("sym", "+"):
            take()
        acc = term() * sign
        while peek() in (("sym", "+"), ("sym", "-")):
            op = take()[1]
            t = term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def term():
        acc = power()
        while True:
            if peek() == ("sym", "*"):
                take()
                acc = acc * power()
            elif peek()[0] in ("num", "name") or peek() == ("sym", "("):
                acc = acc * power()
            else:
                return acc

    def power():
        base = atom()
        if peek() == ("sym", "^"):
            take()
            kind, val = take()
            if kind != "num" or "/" in val:
                raise PolyParseError("exponent must be a non-negative integer")
            return base ** int(val)
        return base

    def atom():
        kind, val = take()
        if kind == "num":
            return Polynomial.constant(nv, Fraction(val))
        if kind == "name":
            if val not in idx:
                raise PolyParseError(f"unknown variable {val!r}")
            return Polynomial.var(nv, idx[val])
        if (kind, val) == ("sym", "("):
            e = expr()
            if take() != ("sym", ")"):
                raise PolyParseError("missing ')'")
            return e
        if (kind, val) == ("sym", "-"):
            return -power()
        raise PolyParseError(f"unexpected token {val or kind!r}")

    lhs = expr()
    if peek() == ("sym", "="):
        take()
        lhs = lhs - expr()
    if peek()[0] != "end":
        raise PolyParseError(f"trailing input at token {peek()[1]!r}")
    return lhs


# --------------------------------------------------------------------------
# Constraint systems


@dataclass(frozen=True)
class VarInfo:
    name: str
    vertex: str | None = None  # None for auxiliaries
    axis: str | None = None  # "x" / "y"
    purpose: str | None = None  # for auxiliaries


@dataclass(frozen=True)
class VarTable:
    entries: tuple[VarInfo, ...] = ()

    def __post_init__(self):
        names = [e.name for e in self.entries]
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names")

    @property
    def names(self) -> list[str]:
        return [e.name for e in self.entries]

    def __len__(self):
        return len(self.entries)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def coord_index(self, vertex: str, axis: str) -> int | None:
        for i, e in enumerate(self.entries):
            if e.vertex == vertex and e.axis == axis:
                return i
        return None

    def auxiliaries(self) -> list[int]:
        return [i for i, e in enumerate(self.entries) if e.vertex is None]


def coord_name(label: str, axis: str) -> str:
    return f"{axis}{label}"


@dataclass(frozen=True)
class ConstraintSystem:
    """Polynomials ``p = 0`` over ``vars``; pinned vertices are substituted
    and carry no variables. The first ``n_distance`` polynomials are the
    per-edge distance equations, in edge order."""

    graph: Graph
    vars: VarTable
    polys: tuple[Polynomial, ...]
    pins: Mapping[str, tuple[Fraction, Fraction]] = field(default_factory=dict)
    n_distance: int = 0
    saturated_pairs: tuple[tuple[str, str], ...] = ()

    @property
    def names(self) -> list[str]:
        return self.vars.names

    def nonzero_polys(self) -> list[Polynomial]:
        return [p for p in self.polys if not p.is_zero()]

    def point_expr(self, label: str) -> tuple[Polynomial, Polynomial]:
        """Coordinates of a vertex as polynomials (constants when pinned)."""
        nv = len(self.vars)
        if label in self.pins:
            x, y = self.pins[label]
            return Polynomial.constant(nv, x), Polynomial.constant(nv, y)
        return (
            Polynomial.var(nv, self.vars.coord_index(label, "x")),
            Polynomial.var(nv, self.vars.coord_index(label, "y")),
        )

    def pinned_relations(self) -> list[tuple[str, Polynomial, list[str]]]:
        """Linear relations ``x_v - c`` for pinned coordinates, each as
        ``(text, polynomial, names)`` in a one-variable ring per coordinate."""
        out = []
        for lab in self.graph.labels:
            if lab in self.pins:
                for axis, val in zip("xy", self.pins[lab]):
                    name = coord_name(lab, axis)
                    p = Polynomial.var(1, 0) - val
                    out.append((format_poly(p, [name]), p, [name]))
        return out

    def coords_from_solution(self, values: Mapping[str, float]) -> dict[str, tuple[float, float]]:
        """Attach pinned coordinates to a variable assignment (by name)."""
        coords = {}
        for lab in self.graph.labels:
            if lab in self.pins:
                x, y = self.pins[lab]
                coords[lab] = (float(x), float(y))
            else:
                coords[lab] = (
                    float(values[coord_name(lab, "x")]),
                    float(values[coord_name(lab, "y")]),
                )
        return coords


def _squared_distance(sys_: ConstraintSystem, u: str, v: str) -> Polynomial:
    xu, yu = sys_.point_expr(u)
    xv, yv = sys_.point_expr(v)
    dx, dy = xu - xv, yu - yv
    return dx * dx + dy * dy


def distance_constraints(g: Graph, pins: Mapping | None = None) -> ConstraintSystem:
    """One polynomial ``|p_u - p_v|^2 - 1`` per edge, pins substituted.

    Variables follow vertex order ``x_{v0}, y_{v0}, x_{v1}, ...`` skipping
    pinned vertices.
    """
    pins = {str(k): (_as_fraction(v[0]), _as_fraction(v[1])) for k, v in (pins or {}).items()}
    for lab in pins:
        if lab not in g.labels:
            raise GraphError(f"cannot pin unknown vertex {lab!r}")
    entries = []
    for lab in g.labels:
        if lab not in pins:
            entries += [VarInfo(coord_name(lab, "x"), lab, "x"), VarInfo(coord_name(lab, "y"), lab, "y")]
    base = ConstraintSystem(g, VarTable(tuple(entries)), (), pins)
    polys = tuple(_squared_distance(base, u, v) - 1 for u, v in g.edge_labels())
    return ConstraintSystem(g, base.vars, polys, pins, n_distance=len(polys))


def auto_pin(g: Graph) -> dict[str, tuple[Fraction, Fraction]]:
    """Pin the first edge in vertex order to (0,0)-(1,0)."""
    if not g.edges:
        raise GraphError("cannot pin an edgeless graph")
    u, v = g.edges[0]
    return {g.labels[u]: (Fraction(0), Fraction(0)), g.labels[v]: (Fraction(1), Fraction(0))}


def saturate_distinctness(sys_: ConstraintSystem, pairs: Iterable[tuple]) -> ConstraintSystem:
    """Add ``t_uv * |p_u - p_v|^2 - 1`` for each pair (Rabinowitsch trick).

    The auxiliary ``t_uv`` is appended after all coordinate variables, so
    under the default order it is the smallest variable.
    """
    pairs = [(str(u), str(v)) for u, v in pairs]
    if not pairs:
        return sys_
    for u, v in pairs:
        if u == v:
            raise GraphError(f"distinctness pair ({u}, {v}) repeats a vertex")
        sys_.graph.index(u), sys_.graph.index(v)
    entries = list(sys_.vars.entries) + [
        VarInfo(f"t_{u}_{v}", purpose=f"distinct({u},{v})") for u, v in pairs
    ]
    nv = len(entries)
    grown = ConstraintSystem(
        sys_.graph,
        VarTable(tuple(entries)),
        tuple(p.extend(nv) for p in sys_.polys),
        sys_.pins,
        sys_.n_distance,
        sys_.saturated_pairs,
    )
    extra = []
    for k, (u, v) in enumerate(pairs):
        t = Polynomial.var(nv, len(sys_.vars) + k)
        extra.append(t * _squared_distance(grown, u, v) - 1)
    return ConstraintSystem(
        grown.graph,
        grown.vars,
        grown.polys + tuple(extra),
        grown.pins,
        grown.n_distance,
        grown.saturated_pairs + tuple(pairs),
    )


def same_part_pairs(g: Graph) -> list[tuple[str, str]]:
    """All pairs of vertices on the same side of a bipartite graph."""
    from .graphs import is_bipartite

    if not is_bipartite(g):
        raise GraphError("graph is not bipartite")
    adj = g.adjacency()
    side = [-1] * g.n
    for s in range(g.n):
        if side[s] < 0:
            side[s] = 0
            stack = [s]
            while stack:
                u = stack.pop()
                for w in adj[u]:
                    if side[w] < 0:
                        side[w] = 1 - side[u]
                        stack.append(w)
    return [
        (g.labels[i], g.labels[j])
        for i in range(g.n)
        for j in range(i + 1, g.n)
        if side[i] == side[j]
    ]
