import pytest

from kara import Interpretation, ValidationError, parse_interpretation
from kara.vocabulary import (
    CATALOG,
    CATALOG_BY_KEY,
    VisInterpretation,
    ensure_valid,
    project_vis,
    validate,
)

EXPECTED_ARITIES = {
    "visellipse": 3, "visrect": 3, "vispolygon": 4, "visimage": 2, "visline": 6,
    "visgrid": 5, "visgraph": 1, "vistext": 2, "vislabel": 2, "visisnode": 2,
    "visscale": 3, "visposition": 4, "visfontfamily": 2, "visfontsize": 2,
    "visfontstyle": 2, "viscolor": 2, "visbackgroundcolor": 2, "visfillgrid": 4,
    "visconnect": 3, "vissourcedeco": 2, "vistargetdeco": 2, "visleft": 2,
    "visright": 2, "visabove": 2, "visbelow": 2, "visinfrontof": 2, "vishide": 1,
    "visdeletable": 1, "viscreatable": 1, "vischangable": 2,
    "vispossiblegridvalues": 2,
}


def vis(text: str) -> VisInterpretation:
    return project_vis(parse_interpretation(text))


def codes(diagnostics):
    return [d.code for d in diagnostics]


def test_catalog_matches_reserved_vocabulary():
    assert {p.name: p.arity for p in CATALOG} == EXPECTED_ARITIES
    assert len(CATALOG) == len(EXPECTED_ARITIES) == 31


def test_catalog_categories_cover_every_predicate():
    allowed = {"element", "property", "layout-hint", "grid", "graph", "edit-affordance"}
    assert {p.category for p in CATALOG} <= allowed
    assert ("visrect", 3) in CATALOG_BY_KEY


def test_project_keeps_only_catalogued_atoms():
    interp = parse_interpretation("visrect(a,1,1). book(s1,1).")
    projected = project_vis(interp)
    assert len(projected) == 1
    assert next(iter(projected)).predicate == "visrect"


def test_project_empty():
    assert len(project_vis(Interpretation())) == 0


def test_project_is_idempotent():
    interp = parse_interpretation("visrect(a,1,1). visgrid(g,2,2,10,10). p(x).")
    once = project_vis(interp)
    twice = project_vis(once.to_interpretation())
    assert once == twice


def test_projection_drops_wrong_arity():
    interp = parse_interpretation("visrect(a,1). visrect(b,1,2).")
    assert {a.predicate for a in project_vis(interp)} == {"visrect"}
    assert len(project_vis(interp)) == 1


def test_dangling_label_reference():
    diagnostics = validate(vis("vislabel(l1,t1)."))
    assert codes(diagnostics).count("dangling-reference") == 2


def test_wrong_arity_diagnostic():
    diagnostics = validate(parse_interpretation("visrect(a,1)."))
    assert "wrong-arity" in codes(diagnostics)


def test_unknown_vis_predicate_diagnostic():
    diagnostics = validate(parse_interpretation("visrectangle(a,1,1)."))
    assert "unknown-vis-predicate" in codes(diagnostics)


def test_fill_out_of_bounds():
    text = "visgrid(maze,5,5,105,105). visrect(wall,20,20). visfillgrid(maze,wall,6,1)."
    diagnostics = validate(vis(text))
    assert "grid-bounds" in codes(diagnostics)


def test_fill_in_bounds_is_clean():
    text = "visgrid(maze,5,5,105,105). visrect(wall,20,20). visfillgrid(maze,wall,5,1)."
    assert validate(vis(text)) == []


def test_duplicate_identifier_of_differing_kinds():
    diagnostics = validate(vis("visrect(a,1,1). visellipse(a,2,2)."))
    assert "duplicate-id" in codes(diagnostics)


def test_polygon_points_are_not_duplicates():
    text = "vispolygon(b,0,20,1). vispolygon(b,25,0,2). vispolygon(b,50,20,3)."
    assert validate(vis(text)) == []


def test_label_target_kind():
    text = "visline(l,0,0,5,5,0). vistext(t,1). vislabel(l,t)."
    diagnostics = validate(vis(text))
    assert "label-target" in codes(diagnostics)


def test_node_kind_check():
    text = "visline(l,0,0,5,5,0). visgraph(g). visisnode(l,g)."
    assert "node-kind" in codes(validate(vis(text)))


def test_font_property_needs_text_element():
    text = "visrect(a,5,5). visfontsize(a,20)."
    assert "property-target" in codes(validate(vis(text)))


def test_scale_needs_image():
    text = "visrect(a,5,5). visscale(a,10,10)."
    assert "property-target" in codes(validate(vis(text)))


def test_creatable_may_name_future_elements():
    assert validate(vis("viscreatable(wall).")) == []


def test_strict_mode_raises():
    with pytest.raises(ValidationError):
        ensure_valid(vis("vislabel(l1,t1)."), strict=True)
    assert ensure_valid(vis("visrect(a,1,1)."), strict=True) == []


def test_maze_output_validates_clean(maze):
    from kara import solve

    program, facts = maze
    models = solve(program, facts)
    assert len(models) == 1
    assert validate(project_vis(models[0])) == []
