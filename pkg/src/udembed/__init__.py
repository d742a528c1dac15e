"""Unit-distance embeddings of small graphs: exact Groebner-basis
feasibility, numerical search, and a parameterised construction of the
Heawood graph minus an edge."""

__version__ = "0.1.0"

from .graphs import (  # noqa: E402
    Graph,
    GraphError,
    LcfSpec,
    catalog,
    degree_sequence,
    delete_edge,
    delete_vertex,
    girth,
    graph_from_difference_set,
    graph_from_lcf,
    is_bipartite,
    is_connected,
    isomorphic,
    parse_edge_list,
    parse_lcf,
)
from .poly import (  # noqa: E402
    ConstraintSystem,
    MonomialOrder,
    Polynomial,
    auto_pin,
    distance_constraints,
    format_poly,
    parse_poly,
    saturate_distinctness,
)
from .groebner import (  # noqa: E402
    Limits,
    buchberger,
    check_distinct,
    extract_solutions,
    normal_form,
    s_polynomial,
)
from .embed import (  # noqa: E402
    Embedding,
    SolveOptions,
    refine,
    rigidity_report,
    solve,
    verify,
)
from .construct import (  # noqa: E402
    bisect_bracket,
    execute,
    four_bar_plan,
    heawood_plan,
    search_plan,
    sweep,
    sweep_grid,
)

__all__ = [
    "Graph",
    "GraphError",
    "LcfSpec",
    "catalog",
    "degree_sequence",
    "delete_edge",
    "delete_vertex",
    "girth",
    "graph_from_difference_set",
    "graph_from_lcf",
    "is_bipartite",
    "is_connected",
    "isomorphic",
    "parse_edge_list",
    "parse_lcf",
    "ConstraintSystem",
    "MonomialOrder",
    "Polynomial",
    "auto_pin",
    "distance_constraints",
    "format_poly",
    "parse_poly",
    "saturate_distinctness",
    "Limits",
    "buchberger",
    "check_distinct",
    "extract_solutions",
    "normal_form",
    "s_polynomial",
    "Embedding",
    "SolveOptions",
    "refine",
    "rigidity_report",
    "solve",
    "verify",
    "bisect_bracket",
    "execute",
    "four_bar_plan",
    "heawood_plan",
    "search_plan",
    "sweep",
    "sweep_grid",
]
