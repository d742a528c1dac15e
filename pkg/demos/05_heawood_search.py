"""
Folding the Heawood graph shut
==============================

Six vertices sit on a 1 x 2 frame, two angles place d and 4, and the rest
follow from unit-circle intersections. That realises every Heawood edge
except 1-a. Sweeping the two angles and watching |1a| cross 1 gives
brackets; bisecting one and polishing the result gives a candidate
drawing of the whole graph, which is then checked independently.
"""

import tempfile
from pathlib import Path

from udembed import Embedding, catalog, execute, heawood_plan, search_plan, verify
from udembed.render import render_svg

plan = heawood_plan()
start = execute(plan)
print("default angles:", {k: round(v, 4) for k, v in start.params.items()})
print("|1a| at the default pose: %.6f" % start.target_distance)

report = search_plan([plan], samples=100, stop_at_first=True)
print(report.status, "after", report.n_samples, "samples,", report.n_brackets, "brackets")

best = report.best()
if best is not None:
    full = catalog("heawood")
    check = verify(full, best.embedding.coords)
    print("all 21 edges within %.1e of unit, closest pair %.3f" % (check.max_edge_deviation, check.min_separation))
    out = Path(tempfile.gettempdir()) / "heawood_candidate.svg"
    out.write_text(render_svg(best.embedding, title="Heawood candidate"))
    print("drawing written to", out)

# the unfinished pose, with the missing edge dashed
before = Path(tempfile.gettempdir()) / "heawood_minus_edge.svg"
before.write_text(render_svg(Embedding(plan.graph, start.coords)))
