"""Spot checks beyond type A: the branching quiver D4."""

from trihered.quiver import Quiver, ext_dim, hom_dim, indecomposables
from trihered.formal import FormalMorphism, is_exact
from trihered.cones import cone, cone_in_heart
from trihered.tstruct import blocks, build_path_graph, is_bounded, t_structure_from
from trihered.randgen import child_rng, random_formal_morphism, random_formal_object, random_morphism, random_rep


def test_d4_euler_and_hom(d4):
    from trihered.quiver import euler_form

    rng = child_rng(71, 0)
    for _ in range(25):
        x = random_rep(d4, rng, 2)
        y = random_rep(d4, rng, 2)
        assert hom_dim(x, y) - ext_dim(x, y) == euler_form(d4, x.dims, y.dims)


def test_d4_heart_cones_exact(d4):
    rng = child_rng(73, 0)
    for t in range(10):
        x = random_rep(d4, rng, 2)
        y = random_rep(d4, rng, 2)
        f = random_morphism(x, y, rng)
        tri, diagram = cone_in_heart(f)
        diagram.validate()
        assert is_exact(tri).passed


def test_d4_general_cones_exact(d4):
    rng = child_rng(79, 0)
    for t in range(6):
        x = random_formal_object(d4, rng, 1)
        y = random_formal_object(d4, rng, 1)
        f = random_formal_morphism(x, y, rng)
        assert is_exact(cone(f)).passed


def test_d4_path_graph_and_tstructure(d4):
    g = build_path_graph(d4, (-1, 2))
    assert len(g.indecs) == 12
    assert len(blocks(g)) == 1
    m = g.parse_node("S4[0]")  # the sink simple
    ts = t_structure_from(g, m)
    assert all(ts.report[k] for k in ("t1", "t2", "t3", "split", "bounded"))
    ok, witness = is_bounded(g, m)
    assert ok and witness is None
