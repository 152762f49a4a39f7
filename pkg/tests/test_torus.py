from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from extquot.abgroup import IntegerMatrix
from extquot.presets import load_preset
from extquot.torus import (
    Coordinate,
    ParseError,
    Torus,
    ValueGroup,
    act,
    coord,
    fixed_subtorus,
    parse_coordinates,
    points_equal,
    power_map,
)
from extquot.weyl import enumerate_group

import oracles

PRESETS = ["gl1", "gl2", "gl3", "gl4", "g2_ramified", "g2_full"]

coordinates = st.builds(
    lambda a, b, ph: Coordinate((("qh", a), ("z", b)), Fraction(ph, 12)),
    st.integers(-4, 4), st.integers(-3, 3), st.integers(0, 11),
)


# ---------------------------------------------------------------------------
# coordinates and parsing
# ---------------------------------------------------------------------------

@given(coordinates, coordinates, coordinates)
def test_coordinate_group_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * a.inverse() == Coordinate()
    assert (a * b) ** 3 == a ** 3 * b ** 3
    assert a / b == a * b.inverse()


@given(coordinates)
def test_coordinate_string_round_trip(c):
    vg = ValueGroup(("qh",), (("zeta12", 12),))
    assert coord(str(c), vg) == c


def test_parse_examples():
    assert str(coord("qh^2*z")) == "qh^2*z"
    assert coord("zeta4^2") == coord("-1")
    assert coord("zeta4^4") == Coordinate()
    assert str(coord("zeta4^-1")) == "zeta4^3"
    assert coord("1") == Coordinate()
    assert coord("qh^-2 * qh^2") == Coordinate()
    assert parse_coordinates("(z, z ,y)") == [coord("z"), coord("z"), coord("y")]
    assert parse_coordinates("qh,qh^-1") == [coord("qh"), coord("qh^-1")]


@pytest.mark.parametrize("text,position", [
    ("qh,,1", 3),
    ("qh^", 3),
    ("(z,y", 4),
    ("z y", 2),
    ("qh^x", 3),
])
def test_parse_errors_report_position(text, position):
    with pytest.raises(ParseError) as info:
        parse_coordinates(text)
    assert info.value.position == position
    assert f"position {position}" in str(info.value)


def test_value_group_representability():
    vg = ValueGroup()
    assert vg.can_represent(coord("zeta4"))
    assert vg.can_represent(coord("-1"))
    assert not vg.can_represent(Coordinate((), Fraction(1, 3)))
    vg6 = vg.extended(torsion=[("zeta6", 6)])
    assert vg6.can_represent(Coordinate((), Fraction(1, 3)))
    with pytest.raises(ValueError):
        ValueGroup(("qh",), (("qh", 4),))


# ---------------------------------------------------------------------------
# torus action
# ---------------------------------------------------------------------------

def point_strategy(rank):
    return st.lists(coordinates, min_size=rank, max_size=rank)


@pytest.mark.parametrize("name", PRESETS)
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_action_composes(name, data):
    sc = load_preset(name)
    G = sc.group
    t = sc.torus.point(*data.draw(point_strategy(sc.rank)))
    w1 = G.element(data.draw(st.integers(0, G.order - 1)))
    w2 = G.element(data.draw(st.integers(0, G.order - 1)))
    assert points_equal(act(w1 * w2, t), act(w1, act(w2, t)))
    assert points_equal(act(G.identity, t), t)


@pytest.mark.parametrize("name", PRESETS)
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_action_commutes_with_power_map(name, data):
    sc = load_preset(name)
    t = sc.torus.point(*data.draw(point_strategy(sc.rank)))
    w = sc.group.element(data.draw(st.integers(0, sc.group.order - 1)))
    f = data.draw(st.integers(1, 5))
    assert points_equal(act(w, power_map(t, f)), power_map(act(w, t), f))


def test_action_is_left_action_for_non_orthogonal_matrix():
    # a unimodular shear generating an infinite group; only composition matters here
    T = Torus(2)
    a = IntegerMatrix.from_rows([[1, 1], [0, 1]])
    b = IntegerMatrix.from_rows([[1, 0], [1, 1]])
    t = T.point("x", "y")
    assert points_equal(act(a @ b, t), act(a, act(b, t)))


def test_swap_action():
    T = Torus(2)
    swap = IntegerMatrix.from_rows([[0, 1], [1, 0]])
    assert act(swap, T.point("x", "y")).coords == (coord("y"), coord("x"))


def test_points_from_different_tori_do_not_compare():
    with pytest.raises(ValueError):
        points_equal(Torus(1, label="A").point("z"), Torus(1, label="B").point("z"))


# ---------------------------------------------------------------------------
# fixed subtori
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("name", PRESETS)
def test_component_representatives_are_fixed_on_whole_component(name):
    sc = load_preset(name)
    for w in sc.group:
        fx = fixed_subtorus(sc.torus, w)
        for lab in fx.labels():
            p = fx.generic_point(lab)
            assert points_equal(act(w, p), p)
            assert fx.component_label(p) == lab


def signed_permutation_groups():
    """Signed permutation groups of rank <= 3 and a few of their subgroups."""
    out = []
    for r in (1, 2, 3):
        swaps = []
        for i in range(r - 1):
            m = oracles.identity(r)
            m[i], m[i + 1] = m[i + 1], m[i]
            swaps.append(m)
        neg = oracles.identity(r)
        neg[0][0] = -1
        out.append(("B%d" % r, swaps + [neg]))
        out.append(("S%d" % r, swaps or [oracles.identity(r)]))
        out.append(("pm%d" % r, [[[-1 if (i == j) else 0 for j in range(r)] for i in range(r)]]))
    return out


@pytest.mark.parametrize("label,gens", signed_permutation_groups())
def test_component_count_matches_torsion_brute_force(label, gens):
    r = len(gens[0])
    G = enumerate_group([IntegerMatrix.from_rows(g) for g in gens], rank=r)
    T = Torus(r)
    N = 4
    for w in G:
        fx = fixed_subtorus(T, w)
        M = w.matrix.to_lists()
        d = oracles.fixed_rank(M)
        assert fx.identity_component_rank == d
        assert all(N % o == 0 for o in fx.component_group.torsion_orders)
        # T^w[N] is an extension of pi_0 by the N-torsion of the identity component
        fixed = oracles.torsion_fixed_points(M, N)
        assert len(fixed) == fx.component_count * N ** d


def test_fixed_subtorus_of_swap_is_connected_rank_one():
    T = Torus(2)
    fx = fixed_subtorus(T, IntegerMatrix.from_rows([[0, 1], [1, 0]]))
    assert fx.identity_component_rank == 1
    assert fx.component_count == 1
    assert fx.cocharacter_basis == ((1, 1),)


def test_fixed_subtorus_of_inversion():
    T = Torus(2)
    fx = fixed_subtorus(T, IntegerMatrix.from_rows([[-1, 0], [0, -1]]))
    assert fx.identity_component_rank == 0
    assert fx.component_group.torsion_orders == (2, 2)
    reps = {tuple(str(c) for c in p.coords) for p in fx.component_representatives}
    assert reps == {("1", "1"), ("1", "zeta2"), ("zeta2", "1"), ("zeta2", "zeta2")}


def test_unrepresentable_components_are_flagged():
    # an order-3 rotation of the A2 lattice has a Z/3 component group
    T = Torus(2)
    fx = fixed_subtorus(T, IntegerMatrix.from_rows([[0, -1], [1, -1]]))
    assert fx.component_group.torsion_orders == (3,)
    assert not fx.representatives_complete
    assert fx.component_representatives is None
    T3 = Torus(2, ValueGroup().extended(torsion=[("zeta3", 3)]))
    assert fixed_subtorus(T3, IntegerMatrix.from_rows([[0, -1], [1, -1]])).representatives_complete
