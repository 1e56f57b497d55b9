import pytest

from kara import Atom, IntConst, SymConst, solve
from kara.edits import (
    Connect,
    CreateElement,
    DeleteElement,
    Disconnect,
    SetGridValue,
    SetProperty,
    apply_edit,
    edit_from_json,
    edit_to_json,
    invert_edit,
)
from kara.errors import AffordanceError, EditError
from kara.parser import parse_interpretation
from kara.vocabulary import CATALOG_KEYS, VisInterpretation, project_vis


def vis(text: str) -> VisInterpretation:
    return project_vis(parse_interpretation(text))


def maze_vis(maze) -> VisInterpretation:
    program, facts = maze
    (model,) = solve(program, facts)
    return project_vis(model)


sym = SymConst


def test_set_grid_value_swaps_one_atom(maze):
    base = maze_vis(maze)
    edited = apply_edit(base, SetGridValue(sym("maze"), 2, 3, sym("empty")))
    removed = base.atoms - edited.atoms
    added = edited.atoms - base.atoms
    assert removed == {Atom("visfillgrid", (sym("maze"), sym("wall"), IntConst(2), IntConst(3)))}
    assert added == {Atom("visfillgrid", (sym("maze"), sym("empty"), IntConst(2), IntConst(3)))}
    assert base != edited  # the input is untouched
    assert Atom("visfillgrid", (sym("maze"), sym("wall"), IntConst(2), IntConst(3))) in base


def test_set_grid_value_requires_declared_value(maze):
    base = maze_vis(maze)
    with pytest.raises(AffordanceError):
        apply_edit(base, SetGridValue(sym("maze"), 2, 3, sym("lava")))


def test_set_grid_value_checks_bounds(maze):
    base = maze_vis(maze)
    with pytest.raises(EditError):
        apply_edit(base, SetGridValue(sym("maze"), 6, 1, sym("empty")))


def test_set_grid_value_unknown_grid(maze):
    base = maze_vis(maze)
    with pytest.raises(EditError):
        apply_edit(base, SetGridValue(sym("labyrinth"), 1, 1, sym("empty")))


def test_delete_requires_affordance():
    base = vis("visrect(a,5,5).")
    with pytest.raises(AffordanceError):
        apply_edit(base, DeleteElement(sym("a")))


def test_delete_cascades_to_references():
    base = vis(
        "visrect(a,5,5). visdeletable(a). visbackgroundcolor(a,red). "
        "visgrid(g,2,2,40,40). visfillgrid(g,a,1,1). "
        "visrect(b,5,5). visconnect(c,a,b). vistargetdeco(c,arrow)."
    )
    edited = apply_edit(base, DeleteElement(sym("a")))
    leftovers = {a for a in edited.atoms if sym("a") in a.args}
    # Only the permission survives; geometry, fills, and connections cascade.
    assert leftovers == {Atom("visdeletable", (sym("a"),))}
    assert not any(atom.args and atom.args[0] == sym("c") for atom in edited.atoms)
    assert Atom("visrect", (sym("b"), IntConst(5), IntConst(5))) in edited


def test_delete_unknown_element():
    base = vis("visdeletable(zz).")
    with pytest.raises(EditError):
        apply_edit(base, DeleteElement(sym("zz")))


def test_create_requires_affordance():
    base = vis("visrect(a,5,5).")
    with pytest.raises(AffordanceError):
        apply_edit(base, CreateElement(sym("n"), "rect", (IntConst(5), IntConst(5))))


def test_create_element():
    base = vis("viscreatable(n).")
    edited = apply_edit(base, CreateElement(sym("n"), "rect", (IntConst(7), IntConst(9))))
    assert Atom("visrect", (sym("n"), IntConst(7), IntConst(9))) in edited
    assert edited.atoms - base.atoms == {Atom("visrect", (sym("n"), IntConst(7), IntConst(9)))}


def test_create_polygon_points():
    base = vis("viscreatable(p).")
    triples = (IntConst(0), IntConst(0), IntConst(1), IntConst(10), IntConst(0), IntConst(2))
    edited = apply_edit(base, CreateElement(sym("p"), "polygon", triples))
    polygon_atoms = [a for a in edited.atoms if a.predicate == "vispolygon"]
    assert len(polygon_atoms) == 2


def test_create_existing_element_fails():
    base = vis("visrect(a,5,5). viscreatable(a).")
    with pytest.raises(EditError):
        apply_edit(base, CreateElement(sym("a"), "rect", (IntConst(1), IntConst(1))))


def test_set_property_replaces_one_atom():
    base = vis("visrect(a,5,5). vischangable(a,backgroundcolor). visbackgroundcolor(a,white).")
    edited = apply_edit(base, SetProperty(sym("a"), "backgroundcolor", sym("red")))
    assert (base.atoms - edited.atoms) == {Atom("visbackgroundcolor", (sym("a"), sym("white")))}
    assert (edited.atoms - base.atoms) == {Atom("visbackgroundcolor", (sym("a"), sym("red")))}


def test_set_property_requires_affordance():
    base = vis("visrect(a,5,5). visbackgroundcolor(a,white).")
    with pytest.raises(AffordanceError):
        apply_edit(base, SetProperty(sym("a"), "backgroundcolor", sym("red")))


def test_connect_and_disconnect():
    base = vis("visrect(a,5,5). visrect(b,5,5). viscreatable(c). visdeletable(c).")
    connected = apply_edit(base, Connect(sym("c"), sym("a"), sym("b")))
    assert Atom("visconnect", (sym("c"), sym("a"), sym("b"))) in connected
    restored = apply_edit(connected, Disconnect(sym("c")))
    assert restored == base


def test_connect_requires_endpoints():
    base = vis("visrect(a,5,5). viscreatable(c).")
    with pytest.raises(EditError):
        apply_edit(base, Connect(sym("c"), sym("a"), sym("missing")))


def test_edits_never_leave_the_vocabulary(maze):
    base = maze_vis(maze)
    edited = apply_edit(base, SetGridValue(sym("maze"), 1, 1, sym("empty")))
    assert all(a.key in CATALOG_KEYS for a in edited.atoms)


def test_inverse_restores_grid_edit(maze):
    base = maze_vis(maze)
    op = SetGridValue(sym("maze"), 2, 3, sym("empty"))
    inverse = invert_edit(base, op)
    assert inverse == SetGridValue(sym("maze"), 2, 3, sym("wall"))
    assert apply_edit(apply_edit(base, op), inverse) == base


def test_inverse_restores_property_edit():
    base = vis("visrect(a,5,5). vischangable(a,color). viscolor(a,black).")
    op = SetProperty(sym("a"), "color", sym("red"))
    inverse = invert_edit(base, op)
    assert apply_edit(apply_edit(base, op), inverse) == base


def test_inverse_of_create_is_delete():
    base = vis("viscreatable(n). visdeletable(n).")
    op = CreateElement(sym("n"), "ellipse", (IntConst(4), IntConst(4)))
    inverse = invert_edit(base, op)
    assert inverse == DeleteElement(sym("n"))
    assert apply_edit(apply_edit(base, op), inverse) == base


def test_json_round_trip():
    ops = [
        SetGridValue(sym("maze"), 2, 3, sym("empty")),
        DeleteElement(sym("a")),
        CreateElement(sym("n"), "rect", (IntConst(5), IntConst(5))),
        SetProperty(sym("a"), "color", sym("red")),
        Connect(sym("c"), sym("a"), sym("b")),
        Disconnect(sym("c")),
    ]
    for op in ops:
        assert edit_from_json(edit_to_json(op)) == op


def test_malformed_json_rejected():
    with pytest.raises(EditError):
        edit_from_json({"op": "setGridValue", "grid": "maze"})
    with pytest.raises(EditError):
        edit_from_json({"op": "paint"})
