"""Walk through the basic pipeline: facts in, picture out.

An interpretation about books and globes on two shelves is joined with a
small visualisation program; its single answer set is projected to the
reserved vis* predicates, resolved into a scene, laid out, and exported as
SVG.
"""

from pathlib import Path

from kara import parse_interpretation, parse_program, solve
from kara.layout import layout
from kara.scene import build_scene
from kara.svg import render_svg
from kara.vocabulary import project_vis

ROOT = Path(__file__).resolve().parent.parent
OUT = Path(__file__).resolve().parent / "out"
OUT.mkdir(exist_ok=True)

# Four items: two books on the top shelf, a book and a globe on the bottom.
facts = parse_interpretation((ROOT / "corpus/shelves/facts.lp").read_text())
print("interpretation:")
for atom in facts:
    print(f"  {atom}")

# The visualisation program puts a rectangle behind every book, an ellipse
# behind every globe, and positions them by shelf and slot.
program = parse_program((ROOT / "corpus/shelves/program.lp").read_text())
print(f"\nvisualisation program: {len(program)} rules")

(answer_set,) = solve(program, facts)
vis = project_vis(answer_set)
print(f"\nvisualisation answer set ({len(vis)} atoms):")
for atom in vis:
    print(f"  {atom}")

scene = build_scene(vis)
placed = layout(scene, seed=0)
svg = render_svg(scene, placed)
target = OUT / "shelves.svg"
target.write_text(svg)
print(f"\nwrote {target} ({len(svg)} bytes)")
print("the four items sit at", sorted((x, y) for x, y, _ in scene.positions.values()))
