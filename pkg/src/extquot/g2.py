"""The G2 scenario with ``H = SO(4, C) = SL2 x SL2 / {+-1}``.

The preset's character lattice is ``{(a, b) : a + b even}`` rebased by
``e1 = (1, 1)``, ``e2 = (1, -1)``; the preset's ``cover`` matrix records this
basis in the characters of the covering torus of ``SL2 x SL2``.  Points on
the cover are written ``[x, y]`` and pushed down by ``c_j = prod x_i^B_ij``.

The six components of ``T//W_H`` are matched against a fixed table of Reeder
parameters.  The Frobenius images are given on the cover, and the unipotent
part is given as a pair of flags saying which SL2 factor carries
``u0 = [[1,1],[0,1]]``.  The three isolated points are told apart by the
smallest order of a lift to the cover: 1, 2 and 4 for ``pt_1``, ``pt_2``
and ``pt_*``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import lcm

from .langlands import KLTriple, ReederParameter, Segment, kl_triple
from .presets import Scenario
from .quotient import ExtendedQuotient, ExtQuotStratum, SecondKindLabel, second_kind_labels
from .torus import Coordinate, TorusPoint, act, coord

U0 = "u0"
ONE = "I"


@dataclass(frozen=True)
class TableRow:
    name: str
    dimension: int
    frob: tuple[str, str]
    unipotent: tuple[bool, bool]
    rho: str

    @property
    def unipotent_label(self) -> str:
        return "[" + ",".join(U0 if f else ONE for f in self.unipotent) + "]"


EXAMPLE_TABLE = (
    TableRow("T/W_H", 2, ("s", "sp"), (False, False), "1"),
    TableRow("A1[u0,I]", 1, ("1", "s"), (True, False), "1"),
    TableRow("A1[I,u0]", 1, ("s", "1"), (False, True), "1"),
    TableRow("pt_1", 0, ("1", "1"), (True, True), "1"),
    TableRow("pt_2", 0, ("1", "-1"), (True, True), "1"),
    TableRow("pt_*", 0, ("zeta4", "zeta4"), (False, False), "sgn"),
)


def push_down(scenario: Scenario, cover_coords) -> TorusPoint:
    """Image in the preset torus of a point ``[x, y]`` of the cover torus."""
    B = scenario.cover
    xs = [coord(c, scenario.torus.value_group) for c in cover_coords]
    out = []
    for j in range(B.cols):
        c = Coordinate()
        for i, x in enumerate(xs):
            c = c * x ** B[i, j]
        out.append(c)
    return TorusPoint(scenario.torus, tuple(out))


def cover_lifts(scenario: Scenario, t: TorusPoint) -> list[tuple[Fraction, ...]]:
    """All torsion lifts of a torsion point, as phase vectors on the cover."""
    if any(c.free for c in t.coords):
        raise ValueError("only torsion points are lifted")
    B = scenario.cover
    N = lcm(*(c.phase.denominator for c in t.coords)) * abs(B.det())
    out = []
    for xs in product(range(N), repeat=B.rows):
        phases = [Fraction(x, N) for x in xs]
        image = [sum((phases[i] * B[i, j] for i in range(B.rows)), Fraction(0)) % 1 for j in range(B.cols)]
        if image == [c.phase for c in t.coords]:
            out.append(tuple(phases))
    return out


def lift_order(scenario: Scenario, t: TorusPoint) -> int:
    """Smallest order of a lift of ``t`` to the cover."""
    return min(lcm(*(p.denominator for p in ph)) for ph in cover_lifts(scenario, t))


def _orbit_lift(scenario: Scenario, stratum: ExtQuotStratum, orbit) -> tuple[Fraction, ...]:
    lifts = [ph for lab in orbit for ph in cover_lifts(scenario, stratum.fixed.representative(lab))]
    order = min(lcm(*(p.denominator for p in ph)) for ph in lifts)
    return min(ph for ph in lifts if lcm(*(p.denominator for p in ph)) == order)


@dataclass(frozen=True)
class G2Component:
    row: TableRow
    stratum: ExtQuotStratum
    orbit_index: int
    representative: TorusPoint
    cover_lift: tuple[Coordinate, ...]
    lift_order: int

    @property
    def name(self) -> str:
        return self.row.name

    @property
    def dimension(self) -> int:
        return self.stratum.dimension

    def factor_parameters(self) -> tuple[ReederParameter, ReederParameter]:
        """Each SL2 factor as a GL2 multisegment: ``(x, 2)`` with u0, else ``(x, 1), (x^-1, 1)``."""
        out = []
        for x, flag in zip(self.row.frob, self.row.unipotent):
            c = coord(x)
            segs = (Segment(c, 2),) if flag else (Segment(c, 1), Segment(c.inverse(), 1))
            out.append(ReederParameter(segs))
        return tuple(out)

    def kl_triples(self, q: int | None = None) -> tuple[KLTriple, KLTriple]:
        return tuple(kl_triple(P, q) for P in self.factor_parameters())

    def second_kind(self, scenario: Scenario) -> list[SecondKindLabel]:
        return second_kind_labels(scenario.group, push_down(scenario, self.row.frob))

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "dim": self.dimension,
            "class_index": self.stratum.class_index,
            "class_rep": self.stratum.class_rep.matrix.to_lists(),
            "representative": self.representative.to_json(),
            "cover_lift": [str(c) for c in self.cover_lift],
            "lift_order": self.lift_order,
            "frob": "[" + ",".join(self.row.frob) + "]",
            "unipotent": self.row.unipotent_label,
            "rho": self.row.rho,
        }


def example_table(scenario: Scenario, eq: ExtendedQuotient) -> list[G2Component]:
    """Match every component of ``T//W_H`` to its row of the parameter table.

    A row matches a component when the dimensions agree, the pushed-down
    Frobenius is fixed by the stratum's class representative and lies in
    that component, and (for isolated points) the lift orders agree.
    Raises if the matching is not a bijection.
    """
    if scenario.kind != "g2_ramified" or scenario.cover is None:
        raise ValueError(f"scenario {scenario.name!r} is not the g2_ramified preset")
    expected_lift = {"pt_1": 1, "pt_2": 2, "pt_*": 4}
    out = []
    used = set()
    for stratum in eq.strata:
        w = stratum.class_rep
        for k, orbit in enumerate(stratum.component_orbits):
            rep = stratum.fixed.representative(orbit[0])
            lift = _orbit_lift(scenario, stratum, orbit)
            order = lcm(*(p.denominator for p in lift))
            matches = []
            for row in EXAMPLE_TABLE:
                if row.dimension != stratum.dimension:
                    continue
                t = push_down(scenario, row.frob)
                if act(w, t).coords != t.coords:
                    continue
                if stratum.orbit_index(stratum.fixed.component_label(t)) != k:
                    continue
                if row.name in expected_lift and expected_lift[row.name] != order:
                    continue
                matches.append(row)
            if len(matches) != 1 or matches[0].name in used:
                raise AssertionError(f"stratum {stratum.class_index} component {k}: matched {[r.name for r in matches]}")
            used.add(matches[0].name)
            out.append(G2Component(
                row=matches[0],
                stratum=stratum,
                orbit_index=k,
                representative=rep,
                cover_lift=tuple(Coordinate((), p) for p in lift),
                lift_order=order,
            ))
    if len(used) != len(EXAMPLE_TABLE):
        raise AssertionError(f"unmatched rows: {sorted(r.name for r in EXAMPLE_TABLE if r.name not in used)}")
    return out
