import random
from math import prod

import pytest

from extquot.abgroup import IntegerMatrix
from extquot.langlands import ReederParameter, base_change_param, fiber_count
from extquot.presets import load_preset, shipped_presets
from extquot.quotient import (
    UnsupportedIsotropyError,
    base_change_endo,
    build_extended_quotient,
    first_kind_classes,
    second_kind_labels,
)
from extquot.torus import Coordinate, Torus, act, coord
from extquot.weyl import enumerate_group, isotropy

import oracles

ALL = shipped_presets()


def eq_for(name):
    sc = load_preset(name)
    return sc, build_extended_quotient(sc.torus, sc.group)


@pytest.mark.parametrize("n", range(1, 7))
def test_gl_strata_dimension_is_cycle_count(n):
    sc, eq = eq_for(f"gl{n}")
    assert eq.class_count == oracles.partition_count(n)
    for s in eq.strata:
        assert s.dimension == len(s.cycle_type)
        assert s.irreducible_component_count == 1
        assert s.fixed.component_group.order == 1
    full = [s for s in eq.strata if s.cycle_type == (n,)]
    assert len(full) == 1 and full[0].dimension == 1


@pytest.mark.parametrize("name", ALL)
def test_component_counts_against_brute_force(name):
    sc, eq = eq_for(name)
    for s in eq.strata:
        M = s.class_rep.matrix.to_lists()
        A = [[M[i][j] - (i == j) for j in range(len(M))] for i in range(len(M))]
        factors = oracles.invariant_factors(A) if any(any(r) for r in A) else ()
        assert s.dimension == oracles.fixed_rank(M)
        assert s.fixed.component_count == prod(factors)
        if s.dimension == 0:
            # finite fixed set: count centralizer orbits on the fixed torsion points directly
            N = oracles.lcm_all(factors)
            pts = set(oracles.torsion_fixed_points(M, N))
            assert len(pts) == s.fixed.component_count
            Z = [e.matrix.to_lists() for e in s.centralizer.elements()]
            orbits = set()
            for p in pts:
                orbit = frozenset(
                    tuple(sum(p[i] * z[i][j] for i in range(len(p))) % N for j in range(len(p))) for z in Z
                )
                orbits.add(orbit)
            assert len(orbits) == s.irreducible_component_count


@pytest.mark.parametrize("name", ALL)
def test_component_lower_bound_and_equality_condition(name):
    sc, eq = eq_for(name)
    assert eq.total_components >= eq.class_count
    all_connected = all(s.fixed.component_count == 1 for s in eq.strata)
    assert (eq.total_components == eq.class_count) == all(s.irreducible_component_count == 1 for s in eq.strata)
    if all_connected:
        assert eq.total_components == eq.class_count


def test_g2_ramified_components():
    sc, eq = eq_for("g2_ramified")
    assert eq.total_components == 6
    dims = sorted((s.dimension for s in eq.strata for _ in s.component_orbits), reverse=True)
    assert dims == [2, 1, 1, 0, 0, 0]


def test_g2_full_components():
    # identity, two reflection classes, rotations of order 6, 3 (two orbits) and 2 (two orbits)
    sc, eq = eq_for("g2_full")
    assert eq.class_count == 6
    assert eq.total_components == 8


def sample_point(sc, rng):
    pool = ["1", "-1", "zeta4", "zeta4^3", "z", "z^-1", "y", "qh"]
    return sc.torus.point(*(rng.choice(pool) for _ in range(sc.rank)))


@pytest.mark.parametrize("name", ALL)
def test_first_and_second_kind_have_equal_size(name):
    sc = load_preset(name)
    rng = random.Random(name)
    for _ in range(20):
        t = sample_point(sc, rng)
        iso = isotropy(sc.group, t)
        n_classes = oracles.class_count([tuple(map(tuple, e.matrix.to_lists())) for e in iso.elements()])
        assert first_kind_classes(sc.group, t) == n_classes
        assert len(second_kind_labels(sc.group, t)) == n_classes


def test_second_kind_gl_multipartitions():
    sc = load_preset("gl4")
    labels = second_kind_labels(sc.group, sc.torus.point("z", "y", "z", "z"))
    # blocks {z,z,z} and {y}: p(3) * p(1)
    assert len(labels) == 3
    assert {lab.name for lab in labels} == {"(3) x (1)", "(2,1) x (1)", "(1,1,1) x (1)"}


def test_second_kind_g2_isolated_point():
    sc = load_preset("g2_ramified")
    names = [lab.name for lab in second_kind_labels(sc.group, sc.torus.point("-1", "1"))]
    assert names == ["1", "sgn"]


def test_second_kind_dihedral_at_identity():
    sc = load_preset("g2_full")
    labels = second_kind_labels(sc.group, sc.torus.point("1", "1"))
    assert len(labels) == 6
    assert sum(lab.name.startswith("lin") for lab in labels) == 4


def test_second_kind_unsupported_isotropy():
    # S3 x Z/2 x Z/2 (order 24) is neither abelian nor dihedral nor a Young subgroup
    def perm_sign(perm, signs):
        return [[signs[i] if perm[i] == j else 0 for j in range(5)] for i in range(5)]
    gens = [
        perm_sign([1, 0, 2, 3, 4], [1] * 5),
        perm_sign([0, 2, 1, 3, 4], [1] * 5),
        perm_sign([0, 1, 2, 3, 4], [1, 1, 1, -1, 1]),
        perm_sign([0, 1, 2, 3, 4], [1, 1, 1, 1, -1]),
    ]
    G = enumerate_group([IntegerMatrix.from_rows(m) for m in gens])
    assert G.order == 24
    with pytest.raises(UnsupportedIsotropyError):
        second_kind_labels(G, Torus(5).point("1", "1", "1", "1", "1"))


@pytest.mark.parametrize("name", ALL)
@pytest.mark.parametrize("f", [1, 2, 3])
def test_base_change_is_equivariant(name, f):
    sc, eq = eq_for(name)
    for m in base_change_endo(eq, f):
        assert m.equivariant


def test_base_change_identity_degree():
    sc, eq = eq_for("g2_ramified")
    for s, m in zip(eq.strata, base_change_endo(eq, 1)):
        assert m.component_map == tuple(range(s.irreducible_component_count))


def test_torsion_merges_under_squaring_rank_one():
    G = enumerate_group([IntegerMatrix.from_rows([[-1]])], rank=1, label="inv1")
    eq = build_extended_quotient(Torus(1), G)
    inv = [s for s in eq.strata if s.dimension == 0][0]
    reps = [str(p.coords[0]) for p in inv.representatives()]
    assert reps == ["1", "zeta2"]
    by_f = {f: m.component_map for f in (1, 2, 3) for m in base_change_endo(eq, f) if m.class_index == inv.class_index}
    assert by_f == {1: (0, 1), 2: (0, 0), 3: (0, 1)}


def test_torsion_merges_under_squaring_g2():
    sc, eq = eq_for("g2_ramified")
    minus = [s for s in eq.strata if s.dimension == 0][0]
    assert [m.component_map for m in base_change_endo(eq, 2) if m.class_index == minus.class_index] == [(0, 0, 0)]


def test_base_change_param_merges_sign_character():
    P = ReederParameter.parse("-1:1")
    assert base_change_param(P, 2) == ReederParameter.parse("1:1")
    assert base_change_param(P, 3) == P


@pytest.mark.parametrize("n", [2, 3, 4])
def test_s_equal_one_fibers_match_stratification(n):
    """At s = 1 the fibre over a W-orbit counts pairs (t, w) with t in the orbit, modulo W."""
    sc = load_preset(f"gl{n}")
    G = sc.group
    rng = random.Random(n)
    for _ in range(15):
        sigma = [coord(rng.choice(["z", "y", "1", "-1"])) for _ in range(n)]
        t0 = sc.torus.point(*sigma)
        orbit = {act(g, t0).coords for g in G}
        expected = 0
        for w in G.classes.representatives:
            fixed = {c for c in orbit if act(w, sc.torus.point(*c)).coords == c}
            Z = [z for z in G if z * w == w * z]
            seen = set()
            for c in fixed:
                if c not in seen:
                    expected += 1
                    seen |= {act(z, sc.torus.point(*c)).coords for z in Z}
        assert fiber_count(sigma, Coordinate()).count == expected


def test_json_is_deterministic():
    sc = load_preset("gl4")
    a = build_extended_quotient(sc.torus, sc.group).to_json()
    b = build_extended_quotient(sc.torus, sc.group).to_json()
    assert a == b
    assert a["strata"][0]["generic_points"] == [["z1", "z2", "z3", "z4"]]
