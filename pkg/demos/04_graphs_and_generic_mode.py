"""Graphs with automatic layout, and the program-free generic mode.

First a graph-colouring solution is drawn with a visualisation program:
circles become graph nodes, edges become arrows, and the force-directed
layout spreads them out. Then the same interpretation is rendered without
any program at all, as a labelled hypergraph over its individuals.
"""

from pathlib import Path

from kara import parse_interpretation, parse_program, solve
from kara.layout import layout
from kara.scene import build_scene, generic_scene
from kara.svg import render_svg
from kara.vocabulary import project_vis

ROOT = Path(__file__).resolve().parent.parent
OUT = Path(__file__).resolve().parent / "out"
OUT.mkdir(exist_ok=True)

program = parse_program((ROOT / "corpus/graphcoloring/program.lp").read_text())
facts = parse_interpretation((ROOT / "corpus/graphcoloring/facts.lp").read_text())

(answer_set,) = solve(program, facts)
scene = build_scene(project_vis(answer_set))
nodes = [e for e in scene.elements.values() if e.kind == "ellipse"]
print(f"programmed view: {len(nodes)} coloured nodes, "
      f"{len(scene.connections)} arrows, 1 graph for automatic layout")
(OUT / "graph.svg").write_text(render_svg(scene, layout(scene, seed=0)))
print(f"wrote {OUT / 'graph.svg'}")

# Generic mode: no program. Individuals become nodes; every literal becomes
# a small junction box labelled with its predicate, its argument positions
# numbering the edge endings. Edges of one predicate share a colour.
hypergraph = generic_scene(facts)
nodes = [e for e in hypergraph.elements.values() if e.kind == "ellipse"]
junctions = [e for e in hypergraph.elements.values() if e.kind == "rect"]
print(f"\ngeneric view: {len(nodes)} individuals, {len(junctions)} literals")
(OUT / "graph_generic.svg").write_text(render_svg(hypergraph, layout(hypergraph, seed=0)))
print(f"wrote {OUT / 'graph_generic.svg'}")
