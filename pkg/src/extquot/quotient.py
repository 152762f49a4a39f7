"""The extended quotient ``T//W`` as a list of strata ``T^w / Z(w)``.

One stratum per conjugacy class.  Irreducible components of a stratum are
counted as ``Z(w)``-orbits on the components of ``T^w``; the orbits are found
by moving torsion representatives around with the actual torus action, so
no representability in the value group is needed for the count.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import prod
from typing import Sequence

from .torus import SubtorusDescriptor, Torus, TorusPoint, act, fixed_subtorus, power_map
from .weyl import (
    GroupError,
    Subgroup,
    WeylElement,
    WeylGroup,
    centralizer,
    cycle_type,
    is_permutation_matrix,
    isotropy,
)


class UnsupportedIsotropyError(GroupError):
    pass


@dataclass(frozen=True)
class ExtQuotStratum:
    class_index: int
    class_rep: WeylElement
    class_size: int
    fixed: SubtorusDescriptor
    centralizer: Subgroup
    component_orbits: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def dimension(self) -> int:
        return self.fixed.identity_component_rank

    @property
    def irreducible_component_count(self) -> int:
        return len(self.component_orbits)

    def orbit_index(self, label: Sequence[int]) -> int:
        label = tuple(label)
        for k, orbit in enumerate(self.component_orbits):
            if label in orbit:
                return k
        raise KeyError(label)

    def representatives(self) -> list[TorusPoint]:
        """Torsion point of the smallest label in each component orbit."""
        return [self.fixed.representative(orbit[0]) for orbit in self.component_orbits]

    def generic_points(self, symbols: Sequence[str] | None = None) -> list[TorusPoint]:
        return [self.fixed.generic_point(orbit[0], symbols) for orbit in self.component_orbits]

    @property
    def cycle_type(self) -> tuple[int, ...] | None:
        g = self.class_rep.group
        if g.preset_tag == "gl_n" or (g.preset_tag == "custom" and g.is_permutation_group):
            return cycle_type(self.class_rep)
        return None

    def to_json(self) -> dict:
        out = {
            "class_index": self.class_index,
            "class_rep": self.class_rep.matrix.to_lists(),
            "class_size": self.class_size,
            "centralizer_order": self.centralizer.order,
            "dim": self.dimension,
            "component_group": list(self.fixed.component_group.torsion_orders),
            "irreducible_components": self.irreducible_component_count,
            "representatives": (
                [p.to_json() for p in self.representatives()]
                if self.fixed.representatives_complete else None
            ),
            "generic_points": [p.to_json() for p in self.generic_points()],
        }
        ct = self.cycle_type
        if ct is not None:
            out["cycle_type"] = list(ct)
        return out


@dataclass(frozen=True)
class ExtendedQuotient:
    torus: Torus
    group: WeylGroup
    strata: tuple[ExtQuotStratum, ...]

    @property
    def total_components(self) -> int:
        return sum(s.irreducible_component_count for s in self.strata)

    @property
    def class_count(self) -> int:
        return len(self.strata)

    def stratum_of(self, w: WeylElement) -> ExtQuotStratum:
        return self.strata[self.group.classes.class_of[w.index]]

    def to_json(self) -> dict:
        return {
            "preset": self.group.label,
            "group_order": self.group.order,
            "conjugacy_classes": self.class_count,
            "total_irreducible_components": self.total_components,
            "strata": [s.to_json() for s in self.strata],
        }


def component_orbits(fixed: SubtorusDescriptor, acting: Subgroup) -> tuple[tuple[tuple[int, ...], ...], ...]:
    labels = fixed.labels()
    parent: dict[tuple[int, ...], tuple[int, ...]] = {lab: lab for lab in labels}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    if len(labels) > 1:
        for alpha in acting.elements():
            for lab in labels:
                image = fixed.component_label(act(alpha, fixed.representative(lab)))
                a, b = find(lab), find(image)
                if a != b:
                    parent[max(a, b)] = min(a, b)
    groups: dict[tuple[int, ...], list] = {}
    for lab in labels:
        groups.setdefault(find(lab), []).append(lab)
    return tuple(sorted(tuple(sorted(g)) for g in groups.values()))


def build_stratum(torus: Torus, group: WeylGroup, class_index: int) -> ExtQuotStratum:
    table = group.classes
    w = table.representatives[class_index]
    fixed = fixed_subtorus(torus, w)
    z = centralizer(group, w)
    return ExtQuotStratum(
        class_index=class_index,
        class_rep=w,
        class_size=table.class_sizes[class_index],
        fixed=fixed,
        centralizer=z,
        component_orbits=component_orbits(fixed, z),
    )


def build_extended_quotient(torus: Torus, group: WeylGroup) -> ExtendedQuotient:
    if torus.rank != group.lattice_rank:
        raise GroupError(f"torus of rank {torus.rank} with group acting on rank {group.lattice_rank}")
    strata = tuple(build_stratum(torus, group, k) for k in range(len(group.classes)))
    return ExtendedQuotient(torus, group, strata)


# ---------------------------------------------------------------------------
# second kind
# ---------------------------------------------------------------------------

def partitions(n: int, largest: int | None = None) -> list[tuple[int, ...]]:
    """Partitions of ``n`` in reverse lexicographic order."""
    if largest is None:
        largest = n
    if n == 0:
        return [()]
    out = []
    for k in range(min(n, largest), 0, -1):
        out.extend((k,) + rest for rest in partitions(n - k, k))
    return out


@dataclass(frozen=True)
class SecondKindLabel:
    base_point: TorusPoint
    kind: str
    label: tuple

    @property
    def name(self) -> str:
        if self.kind == "partitions":
            return " x ".join("(" + ",".join(map(str, p)) + ")" for p in self.label)
        if self.kind == "character":
            return self.label[0]
        if self.kind == "dihedral":
            return self.label[0]
        return str(self.label)

    def to_json(self) -> dict:
        data = {"kind": self.kind, "name": self.name}
        if self.kind == "partitions":
            data["partitions"] = [list(p) for p in self.label]
        elif self.kind == "character":
            data["values"] = [str(v) for v in self.label[1]]
        return data


def coordinate_blocks(t: TorusPoint) -> list[tuple[int, ...]]:
    """Indices grouped by equal coordinate, blocks ordered by first index."""
    blocks: dict = {}
    for i, c in enumerate(t.coords):
        blocks.setdefault(c, []).append(i)
    return sorted((tuple(b) for b in blocks.values()), key=lambda b: b[0])


def _abelian_characters(iso: Subgroup) -> list[tuple[Fraction, ...]]:
    """All homomorphisms ``iso -> Q/Z``, as value tuples over sorted elements."""
    G = iso.parent
    elems = sorted(iso.indices)
    gens: list[int] = []
    span = G.generated_subgroup([])
    for x in elems:
        if x not in span.indices:
            gens.append(x)
            span = G.generated_subgroup(gens)
    orders = [WeylElement(G, g).order for g in gens]
    chars = []
    for values in product(*(range(o) for o in orders)):
        phase = {G.identity_index: Fraction(0)}
        ok = True
        frontier = [G.identity_index]
        while frontier and ok:
            nxt = []
            for x in frontier:
                for g, v, o in zip(gens, values, orders):
                    y = G.mul(x, g)
                    val = (phase[x] + Fraction(v, o)) % 1
                    if y not in phase:
                        phase[y] = val
                        nxt.append(y)
                    elif phase[y] != val:
                        ok = False
                        break
                if not ok:
                    break
            frontier = nxt
        if ok:
            chars.append(tuple(phase[e] for e in elems))
    return sorted(chars)


def _character_name(values: tuple[Fraction, ...], group_order: int) -> str:
    if not any(values):
        return "1"
    if group_order == 2:
        return "sgn"
    return "chi[" + ",".join(str(v) for v in values) + "]"


def _dihedral_m(iso: Subgroup) -> int | None:
    """``m`` if ``iso`` is dihedral of order ``2m`` (m >= 3), else ``None``."""
    n = iso.order
    if n < 6 or n % 2:
        return None
    m = n // 2
    G = iso.parent
    orders = {i: WeylElement(G, i).order for i in iso.indices}
    rot = [i for i in iso.indices if orders[i] == m]
    if not rot:
        return None
    cyc = G.generated_subgroup([rot[0]]).indices
    if all(orders[i] == 2 for i in iso.indices - cyc):
        return m
    return None


def second_kind_labels(group: WeylGroup, t: TorusPoint) -> list[SecondKindLabel]:
    """Labels ``(t, tau)`` with ``tau`` running over ``Irr(W(t))``.

    Products of symmetric groups (the gl_n case) get multipartitions, one
    partition per block of equal coordinates; abelian isotropy gets its
    character group; dihedral isotropy (reflection subgroups of G2) gets the
    usual list of linear and two-dimensional irreducibles.
    """
    iso = isotropy(group, t)
    if group.preset_tag == "gl_n" or (group.preset_tag == "custom" and group.is_permutation_group
                                      and all(is_permutation_matrix(m) for m in group.elements)):
        blocks = coordinate_blocks(t)
        if iso.order != prod(_factorial(len(b)) for b in blocks):
            raise UnsupportedIsotropyError(f"isotropy of {t} is not the Young subgroup of its blocks")
        labels = product(*(partitions(len(b)) for b in blocks))
        return [SecondKindLabel(t, "partitions", lab) for lab in labels]
    if iso.is_abelian():
        chars = _abelian_characters(iso)
        return [SecondKindLabel(t, "character", (_character_name(v, iso.order), v)) for v in chars]
    m = _dihedral_m(iso)
    if m is not None:
        signs = [(1, 1), (1, -1)] if m % 2 else [(1, 1), (1, -1), (-1, 1), (-1, -1)]
        out = [SecondKindLabel(t, "dihedral", (f"lin[r={a},s={b}]",)) for a, b in signs]
        out += [SecondKindLabel(t, "dihedral", (f"rho{k}",)) for k in range(1, (m - 1) // 2 + 1)]
        return out
    raise UnsupportedIsotropyError(
        f"isotropy group of order {iso.order} at {t} is neither a Young subgroup, abelian nor dihedral"
    )


def _factorial(n: int) -> int:
    return prod(range(1, n + 1))


def first_kind_classes(group: WeylGroup, t: TorusPoint) -> int:
    """``|conj(W(t))|`` by brute force."""
    return len(isotropy(group, t).classes())


# ---------------------------------------------------------------------------
# base change endomorphism
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StratumBaseChange:
    class_index: int
    f: int
    component_map: tuple[int, ...]
    generic_source: TorusPoint
    generic_image: TorusPoint
    equivariant: bool

    def to_json(self) -> dict:
        return {
            "class_index": self.class_index,
            "f": self.f,
            "component_map": list(self.component_map),
            "generic_source": self.generic_source.to_json(),
            "generic_image": self.generic_image.to_json(),
            "equivariant": self.equivariant,
        }


def base_change_endo(eq: ExtendedQuotient, f: int) -> list[StratumBaseChange]:
    """``(t, w) -> (t^f, w)`` stratum by stratum.

    For every stratum reports where each component orbit lands, the image of
    the generic point of the identity component, and whether
    ``alpha.(t^f) = (alpha.t)^f`` held over the centralizer on the generic
    points of all components.
    """
    if f < 1:
        raise ValueError(f"degree must be a positive integer, got {f}")
    out = []
    for s in eq.strata:
        w = s.class_rep
        mapping = []
        for orbit in s.component_orbits:
            image = power_map(s.fixed.representative(orbit[0]), f)
            if act(w, image).coords != image.coords:
                raise AssertionError("power of a fixed point is not fixed")
            mapping.append(s.orbit_index(s.fixed.component_label(image)))
        equivariant = all(
            act(alpha, power_map(p, f)).coords == power_map(act(alpha, p), f).coords
            for p in s.generic_points()
            for alpha in s.centralizer.elements()
        )
        src = s.fixed.generic_point()
        out.append(StratumBaseChange(s.class_index, f, tuple(mapping), src, power_map(src, f), equivariant))
    return out
