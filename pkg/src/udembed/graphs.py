"""Small labeled graphs: LCF and difference-set constructions, a named
catalog, and exhaustive combinatorial queries (girth, bipartiteness,
isomorphism) suitable for graphs of up to ~20 vertices."""

from __future__ import annotations

import hashlib
import re
from collections import deque
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

MAX_ISO_VERTICES = 20


class GraphError(ValueError):
    """Raised for malformed graph input (bad labels, missing edges, ...)."""


class LcfSyntaxError(GraphError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph with string labels.

    Edges are stored as sorted index pairs in sorted order, so two graphs with
    the same labels and edge set compare equal.
    """

    labels: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]
    name: str = ""

    def __post_init__(self):
        n = len(self.labels)
        if n < 1:
            raise GraphError("graph needs at least one vertex")
        if len(set(self.labels)) != n:
            raise GraphError("vertex labels must be distinct")
        canon = set()
        for u, v in self.edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge endpoint out of range: {(u, v)}")
            if u == v:
                raise GraphError(f"self-loop at {self.labels[u]}")
            canon.add((min(u, v), max(u, v)))
        object.__setattr__(self, "labels", tuple(str(x) for x in self.labels))
        object.__setattr__(self, "edges", tuple(sorted(canon)))

    @classmethod
    def from_edges(cls, labels: Iterable, edges: Iterable[tuple], name: str = "") -> "Graph":
        """Build from labels and label-pair edges; duplicates are merged."""
        labels = tuple(str(x) for x in labels)
        index = {lab: i for i, lab in enumerate(labels)}
        pairs = []
        for u, v in edges:
            try:
                pairs.append((index[str(u)], index[str(v)]))
            except KeyError as exc:
                raise GraphError(f"edge refers to unknown vertex {exc.args[0]!r}") from None
        return cls(labels, tuple(pairs), name)

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, label) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise GraphError(f"no vertex labelled {label!r}") from None

    def edge_labels(self) -> list[tuple[str, str]]:
        return [(self.labels[u], self.labels[v]) for u, v in self.edges]

    def adjacency(self) -> list[set[int]]:
        adj = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def has_edge(self, u, v) -> bool:
        i, j = self.index(u), self.index(v)
        return (min(i, j), max(i, j)) in set(self.edges)

    def digest(self) -> str:
        """Short content hash over labels and edges."""
        text = " ".join(self.labels) + "|" + ";".join(f"{u},{v}" for u, v in self.edges)
        return hashlib.sha256(text.encode()).hexdigest()[:16]


# --------------------------------------------------------------------------
# LCF notation


@dataclass(frozen=True)
class LcfSpec:
    chords: tuple[int, ...]
    repeat: int

    @property
    def n(self) -> int:
        return len(self.chords) * self.repeat

    def chord_at(self, i: int) -> int:
        return self.chords[i % len(self.chords)]

    def validate(self) -> None:
        n = self.n
        if not self.chords:
            raise GraphError("LCF chord list is empty")
        if self.repeat < 1:
            raise GraphError("LCF repeat must be positive")
        if n < 3:
            raise GraphError(f"LCF spec yields only {n} vertices")
        for c in self.chords:
            if c == 0:
                raise GraphError("LCF chord 0 would be a self-loop")
            if abs(c) >= n:
                raise GraphError(f"LCF chord {c} out of range for n = {n}")
        for i in range(n):
            j = (i + self.chord_at(i)) % n
            if (j + self.chord_at(j)) % n != i:
                raise GraphError(
                    f"LCF chords are not an involution for n = {n}: "
                    f"vertex {i} -> {j} but {j} -> {(j + self.chord_at(j)) % n}"
                )


_LCF_TOKEN = re.compile(r"\s*(?:(?P<int>[+-]?\d+)|(?P<sym>[()\[\],^]))")


def parse_lcf(text: str) -> LcfSpec:
    """Parse ``(5,-5)^7`` or ``[5,-5]^7`` into a validated :class:`LcfSpec`."""
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _LCF_TOKEN.match(text, pos)
        if not m:
            raise LcfSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start("int") if m.group("int") else m.start("sym")
        tokens.append((m.group("int") or m.group("sym"), start))
        pos = m.end()
    tokens.append(("<end>", len(text)))

    k = 0

    def expect(sym):
        nonlocal k
        tok, at = tokens[k]
        if tok != sym:
            raise LcfSyntaxError(f"expected {sym!r}, found {tok!r}", at)
        k += 1

    def integer():
        nonlocal k
        tok, at = tokens[k]
        if not re.fullmatch(r"[+-]?\d+", tok):
            raise LcfSyntaxError(f"expected integer, found {tok!r}", at)
        k += 1
        return int(tok)

    opener = tokens[0][0]
    if opener not in ("(", "["):
        raise LcfSyntaxError(f"expected '(' or '[', found {opener!r}", tokens[0][1])
    closer = ")" if opener == "(" else "]"
    k = 1
    chords = [integer()]
    while tokens[k][0] == ",":
        k += 1
        chords.append(integer())
    expect(closer)
    expect("^")
    at = tokens[k][1]
    repeat = integer()
    if repeat < 1 or tokens[k - 1][0].startswith(("+", "-")):
        raise LcfSyntaxError("repeat count must be a positive integer", at)
    expect("<end>")
    spec = LcfSpec(tuple(chords), repeat)
    spec.validate()
    return spec


def graph_from_lcf(spec: LcfSpec | str, labels: Sequence[str] | None = None) -> Graph:
    if isinstance(spec, str):
        spec = parse_lcf(spec)
    spec.validate()
    n = spec.n
    edges = {(i, (i + 1) % n) for i in range(n)}
    edges |= {(i, (i + spec.chord_at(i)) % n) for i in range(n)}
    labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
    body = ",".join(str(c) for c in spec.chords)
    return Graph(labels, tuple(edges), name=f"lcf[{body}]^{spec.repeat}")


def graph_from_difference_set(residues: Iterable[int], modulus: int) -> Graph:
    """Point-block incidence graph of the cyclic design ``{r + j mod m}``.

    Point ``p_i`` is joined to block ``B_j`` iff ``(i - j) mod m`` is a residue.
    """
    residues = sorted(set(int(r) for r in residues))
    if modulus < 2:
        raise GraphError("modulus must be at least 2")
    if not residues:
        raise GraphError("difference set is empty")
    if any(not 0 <= r < modulus for r in residues):
        raise GraphError(f"residues must lie in [0, {modulus})")
    labels = [f"p{i}" for i in range(modulus)] + [f"B{j}" for j in range(modulus)]
    edges = [
        (i, modulus + j)
        for i in range(modulus)
        for j in range(modulus)
        if (i - j) % modulus in residues
    ]
    name = "diffset{" + ",".join(map(str, residues)) + f"}}mod{modulus}"
    return Graph(tuple(labels), tuple(edges), name=name)


# --------------------------------------------------------------------------
# Catalog

HEAWOOD_CYCLE = ("1", "a", "2", "b", "3", "c", "4", "d", "5", "e", "6", "f", "7", "g")
HEAWOOD_CHORDS = (("1", "c"), ("2", "d"), ("3", "e"), ("4", "f"), ("5", "g"), ("6", "a"), ("7", "b"))


def _heawood() -> Graph:
    cyc = HEAWOOD_CYCLE
    edges = [(cyc[i], cyc[(i + 1) % 14]) for i in range(14)] + list(HEAWOOD_CHORDS)
    return Graph.from_edges(cyc, edges, name="heawood")


def _subdivided_mobius_ladder() -> Graph:
    # C8 plus four subdivided diameters; labels follow the ladder drawing of H - {1, a}
    rim = ("5", "d", "4", "f", "7", "b", "3", "e")
    hubs = ("g", "2", "c", "6")
    edges = [(rim[i], rim[(i + 1) % 8]) for i in range(8)]
    for i, h in enumerate(hubs):
        edges += [(rim[i], h), (h, rim[i + 4])]
    return Graph.from_edges(rim + hubs, edges, name="mobius_ladder_m4_subdivided")


def _build(name: str) -> Graph:
    if name == "k2":
        return Graph.from_edges("12", [("1", "2")], name="k2")
    if name == "k3":
        return Graph.from_edges("123", [("1", "2"), ("1", "3"), ("2", "3")], name="k3")
    if name == "k4":
        return Graph.from_edges("1234", [(u, v) for u in "1234" for v in "1234" if u < v], name="k4")
    if name == "k4_minus_e":
        return Graph.from_edges(
            "1234", [("1", "2"), ("1", "3"), ("2", "3"), ("2", "4"), ("3", "4")], name="k4_minus_e"
        )
    if name == "k2_3":
        return Graph.from_edges("12345", [(u, v) for u in "12" for v in "345"], name="k2_3")
    if name == "moser_spindle":
        edges = ["12", "13", "14", "15", "24", "35", "26", "46", "37", "57", "67"]
        return Graph.from_edges("1234567", [tuple(e) for e in edges], name="moser_spindle")
    if name == "petersen":
        outer, inner = "12345", "abcde"
        edges = [(outer[i], outer[(i + 1) % 5]) for i in range(5)]
        edges += [(inner[i], inner[(i + 2) % 5]) for i in range(5)]
        edges += list(zip(outer, inner))
        return Graph.from_edges(outer + inner, edges, name="petersen")
    if name == "heawood":
        return _heawood()
    if name == "heawood_minus_edge":
        return replace(delete_edge(_heawood(), "1", "a"), name="heawood_minus_edge")
    if name == "heawood_minus_1a":
        return replace(delete_vertex(delete_vertex(_heawood(), "1"), "a"), name="heawood_minus_1a")
    if name == "mobius_ladder_m4_subdivided":
        return _subdivided_mobius_ladder()
    raise GraphError(f"unknown catalog graph {name!r}; choose from {', '.join(CATALOG_NAMES)}")


CATALOG_NAMES = (
    "k2", "k3", "k4", "k4_minus_e", "k2_3", "moser_spindle", "petersen",
    "heawood", "heawood_minus_edge", "heawood_minus_1a", "mobius_ladder_m4_subdivided",
)


def catalog(name: str) -> Graph:
    return _build(name)


# --------------------------------------------------------------------------
# Edits


def delete_vertex(g: Graph, v) -> Graph:
    k = g.index(v)
    remap = {i: i - (i > k) for i in range(g.n) if i != k}
    labels = tuple(lab for i, lab in enumerate(g.labels) if i != k)
    edges = tuple((remap[a], remap[b]) for a, b in g.edges if k not in (a, b))
    return Graph(labels, edges, name=f"{g.name}-{v}" if g.name else "")


def delete_edge(g: Graph, u, v) -> Graph:
    i, j = g.index(u), g.index(v)
    e = (min(i, j), max(i, j))
    if e not in g.edges:
        raise GraphError(f"no edge {u}-{v}")
    return Graph(g.labels, tuple(x for x in g.edges if x != e), name=f"{g.name}-{u}{v}" if g.name else "")


# --------------------------------------------------------------------------
# Queries


def degree_sequence(g: Graph) -> list[int]:
    return sorted((len(nb) for nb in g.adjacency()), reverse=True)


def is_connected(g: Graph) -> bool:
    adj = g.adjacency()
    seen = {0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for w in adj[u] - seen:
            seen.add(w)
            queue.append(w)
    return len(seen) == g.n


def is_bipartite(g: Graph) -> bool:
    adj = g.adjacency()
    color = [-1] * g.n
    for s in range(g.n):
        if color[s] >= 0:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if color[w] < 0:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    return False
    return True


def girth(g: Graph) -> float:
    """Length of the shortest cycle (``math.inf`` for forests)."""
    adj = g.adjacency()
    best = float("inf")
    for s in range(g.n):
        dist = [-1] * g.n
        parent = [-1] * g.n
        dist[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    best = min(best, dist[u] + dist[w] + 1)
    return best if best == float("inf") else int(best)


def _refine_colors(adj: list[set[int]], colors: list[int]) -> list[int]:
    """Colour refinement until stable; colours are canonical small ints."""
    while True:
        sigs = [(colors[v], tuple(sorted(colors[w] for w in adj[v]))) for v in range(len(adj))]
        table = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [table[s] for s in sigs]
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def isomorphic(g1: Graph, g2: Graph) -> bool:
    """Exact isomorphism test by colour refinement plus backtracking."""
    if g1.n != g2.n or len(g1.edges) != len(g2.edges):
        return False
    if g1.n > MAX_ISO_VERTICES:
        raise GraphError(f"isomorphism search is capped at {MAX_ISO_VERTICES} vertices")
    if degree_sequence(g1) != degree_sequence(g2):
        return False
    a1, a2 = g1.adjacency(), g2.adjacency()
    # refine both graphs jointly so colour ids are comparable
    n = g1.n
    union = [set(nb) for nb in a1] + [{w + n for w in nb} for nb in a2]
    colors = _refine_colors(union, [len(nb) for nb in union])
    c1, c2 = colors[:n], colors[n:]
    if sorted(c1) != sorted(c2):
        return False

    order = sorted(range(n), key=lambda v: (sum(c1[w] == c1[v] for w in range(n)), -len(a1[v])))
    mapping: dict[int, int] = {}
    used: set[int] = set()

    def extend(k: int) -> bool:
        if k == n:
            return True
        v = order[k]
        for w in range(n):
            if w in used or c2[w] != c1[v]:
                continue
            if all((mapping[x] in a2[w]) == (x in a1[v]) for x in mapping):
                mapping[v] = w
                used.add(w)
                if extend(k + 1):
                    return True
                del mapping[v]
                used.discard(w)
        return False

    return extend(0)


# --------------------------------------------------------------------------
# Edge-list text


def parse_edge_list(text: str, name: str = "") -> Graph:
    """Parse ``u v`` lines; ``#`` starts a comment. A lone token declares an
    isolated vertex."""
    labels: list[str] = []
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        if len(line) > 2:
            raise GraphError(f"line {lineno}: expected 'u v', got {raw.strip()!r}")
        for tok in line:
            if tok not in labels:
                labels.append(tok)
        if len(line) == 2:
            if line[0] == line[1]:
                raise GraphError(f"line {lineno}: self-loop at {line[0]}")
            edges.append(tuple(line))
    if not labels:
        raise GraphError("edge list is empty")
    return Graph.from_edges(labels, edges, name=name)


def format_edge_list(g: Graph) -> str:
    lines = [f"# {g.name or 'graph'}: {g.n} vertices, {len(g.edges)} edges"]
    lines += list(g.labels)  # declares vertex order
    lines += [f"{u} {v}" for u, v in g.edge_labels()]
    return "\n".join(lines) + "\n"
