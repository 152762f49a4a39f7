"""Finite groups of integer matrices acting on a character lattice.

Groups are enumerated once by breadth-first closure and then stored as a
lexicographically sorted tuple of matrices; an element is an index into that
tuple.  Everything downstream (conjugacy classes, centralizers, isotropy
groups) works on indices.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .abgroup import IntegerMatrix, as_matrix
from .torus import Coordinate, TorusPoint, act

DEFAULT_MAX_ORDER = 10080


class GroupError(ValueError):
    pass


class UnsupportedPresetError(GroupError):
    pass


def _key(m: IntegerMatrix) -> tuple[int, ...]:
    return m.entries


class WeylGroup:
    """A finite matrix group with its elements enumerated.

    ``roots`` (optional) lists the positive roots as character vectors; it is
    needed only for :func:`isotropy_decomposition`.
    """

    def __init__(
        self,
        lattice_rank: int,
        generators: Sequence[IntegerMatrix],
        elements: Iterable[IntegerMatrix],
        preset_tag: str = "custom",
        roots: Sequence[Sequence[int]] | None = None,
        label: str | None = None,
    ):
        self.lattice_rank = lattice_rank
        self.generators = tuple(generators)
        self.elements = tuple(sorted(elements, key=_key))
        self.preset_tag = preset_tag
        self.roots = None if roots is None else tuple(tuple(r) for r in roots)
        self.label = label or preset_tag
        self._index = {m: i for i, m in enumerate(self.elements)}
        self.identity_index = self._index[IntegerMatrix.identity(lattice_rank)]
        self._mul_cache: dict[tuple[int, int], int] = {}

    def __len__(self):
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __repr__(self):
        return f"WeylGroup({self.label!r}, order={self.order}, rank={self.lattice_rank})"

    def __iter__(self):
        return (WeylElement(self, i) for i in range(len(self.elements)))

    def element(self, i: int) -> WeylElement:
        if not 0 <= i < len(self.elements):
            raise IndexError(f"no element {i} in group of order {self.order}")
        return WeylElement(self, i)

    @property
    def identity(self) -> WeylElement:
        return WeylElement(self, self.identity_index)

    def index_of(self, m) -> int:
        m = as_matrix(m)
        try:
            return self._index[m]
        except KeyError:
            raise GroupError(f"matrix {m.to_lists()} is not an element of {self.label}") from None

    def mul(self, i: int, j: int) -> int:
        k = self._mul_cache.get((i, j))
        if k is None:
            k = self._index[self.elements[i] @ self.elements[j]]
            self._mul_cache[(i, j)] = k
        return k

    @cached_property
    def _inverses(self) -> tuple[int, ...]:
        inv = [None] * self.order
        for i, m in enumerate(self.elements):
            if inv[i] is None:
                j = self._index[m.inverse()]
                inv[i], inv[j] = j, i
        return tuple(inv)

    def inv(self, i: int) -> int:
        return self._inverses[i]

    @cached_property
    def is_abelian(self) -> bool:
        gens = [self._index[g] for g in self.generators]
        return all(self.mul(a, b) == self.mul(b, a) for a in gens for b in gens)

    @cached_property
    def is_permutation_group(self) -> bool:
        return all(is_permutation_matrix(g) for g in self.generators)

    def subgroup(self, indices: Iterable[int]) -> Subgroup:
        return Subgroup(self, frozenset(indices))

    def generated_subgroup(self, generators: Iterable[int]) -> Subgroup:
        gens = list(generators)
        seen = {self.identity_index}
        queue = deque([self.identity_index])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = self.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return Subgroup(self, frozenset(seen))

    @property
    def whole(self) -> Subgroup:
        return Subgroup(self, frozenset(range(self.order)))

    @cached_property
    def classes(self) -> ConjugacyClassTable:
        return conjugacy_classes(self)


@dataclass(frozen=True, eq=False)
class WeylElement:
    group: WeylGroup
    index: int

    def __eq__(self, other):
        return isinstance(other, WeylElement) and other.group is self.group and other.index == self.index

    def __hash__(self):
        return hash(self.index)

    def __lt__(self, other: WeylElement):
        return self.index < other.index

    @property
    def matrix(self) -> IntegerMatrix:
        return self.group.elements[self.index]

    @property
    def inverse(self) -> WeylElement:
        return WeylElement(self.group, self.group.inv(self.index))

    @property
    def inverse_matrix(self) -> IntegerMatrix:
        return self.group.elements[self.group.inv(self.index)]

    def __mul__(self, other: WeylElement) -> WeylElement:
        return WeylElement(self.group, self.group.mul(self.index, other.index))

    def conjugate_by(self, alpha: WeylElement) -> WeylElement:
        """``alpha * self * alpha^-1``."""
        return alpha * self * alpha.inverse

    @property
    def order(self) -> int:
        k, x = 1, self
        while x.index != self.group.identity_index:
            x, k = x * self, k + 1
        return k

    def __repr__(self):
        return f"WeylElement({self.index}, {self.matrix.to_lists()})"


@dataclass(frozen=True)
class Subgroup:
    parent: WeylGroup
    indices: frozenset[int]

    @property
    def order(self) -> int:
        return len(self.indices)

    def __len__(self):
        return len(self.indices)

    def __contains__(self, w: WeylElement | int) -> bool:
        i = w.index if isinstance(w, WeylElement) else w
        return i in self.indices

    def elements(self) -> list[WeylElement]:
        return [WeylElement(self.parent, i) for i in sorted(self.indices)]

    def is_subgroup(self) -> bool:
        p = self.parent
        return p.identity_index in self.indices and all(
            p.mul(a, p.inv(b)) in self.indices for a in self.indices for b in self.indices
        )

    def is_abelian(self) -> bool:
        p = self.parent
        return all(p.mul(a, b) == p.mul(b, a) for a in self.indices for b in self.indices)

    def conjugate(self, alpha: WeylElement) -> Subgroup:
        p = self.parent
        a, ai = alpha.index, p.inv(alpha.index)
        return Subgroup(p, frozenset(p.mul(p.mul(a, x), ai) for x in self.indices))

    def is_normal_in(self, other: Subgroup) -> bool:
        return all(self.conjugate(WeylElement(self.parent, a)) == self for a in other.indices)

    def product(self, other: Subgroup) -> frozenset[int]:
        p = self.parent
        return frozenset(p.mul(a, b) for a in self.indices for b in other.indices)

    def as_group(self) -> WeylGroup:
        """The subgroup as a standalone group (elements re-indexed)."""
        mats = [self.parent.elements[i] for i in self.indices]
        return WeylGroup(self.parent.lattice_rank, mats, mats, preset_tag="subgroup",
                         label=f"subgroup of {self.parent.label}")

    def classes(self) -> list[frozenset[int]]:
        """Conjugacy classes of the subgroup, as sets of parent indices."""
        p = self.parent
        remaining = set(self.indices)
        out = []
        while remaining:
            x = min(remaining)
            cls = frozenset(p.mul(p.mul(g, x), p.inv(g)) for g in self.indices)
            out.append(cls)
            remaining -= cls
        return out


def is_permutation_matrix(m: IntegerMatrix) -> bool:
    if not m.is_square:
        return False
    rows = m.to_lists()
    return all(sorted(r) == [0] * (m.cols - 1) + [1] for r in rows) and all(
        sum(col) == 1 for col in zip(*rows)
    )


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def enumerate_group(
    generators: Sequence,
    max_order: int = DEFAULT_MAX_ORDER,
    *,
    rank: int | None = None,
    preset_tag: str = "custom",
    roots: Sequence[Sequence[int]] | None = None,
    label: str | None = None,
) -> WeylGroup:
    """Breadth-first closure of ``generators`` under multiplication."""
    gens = [as_matrix(g) for g in generators]
    if rank is None:
        if not gens:
            raise GroupError("rank must be given when there are no generators")
        rank = gens[0].rows
    for g in gens:
        if g.shape != (rank, rank):
            raise GroupError(f"generator of shape {g.shape} in rank {rank} group")
        if abs(g.det()) != 1:
            raise GroupError(f"generator {g.to_lists()} is not unimodular (det {g.det()})")
    ident = IntegerMatrix.identity(rank)
    seen = {ident}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = x @ g
            if y not in seen:
                seen.add(y)
                if len(seen) > max_order:
                    raise GroupError(f"group order exceeds bound {max_order}")
                queue.append(y)
    return WeylGroup(rank, gens, seen, preset_tag=preset_tag, roots=roots, label=label)


@dataclass(frozen=True)
class ConjugacyClassTable:
    representatives: tuple[WeylElement, ...]
    class_sizes: tuple[int, ...]
    class_of: dict[int, int]
    members: tuple[frozenset[int], ...]

    def __len__(self):
        return len(self.representatives)


def _fixed_dimension(m: IntegerMatrix) -> int:
    return m.rows - (m - IntegerMatrix.identity(m.rows)).rank()


def conjugacy_classes(G: WeylGroup) -> ConjugacyClassTable:
    """Partition ``G`` into conjugacy classes.

    Classes are orbits under conjugation by the generators.  Each class is
    represented by its smallest element in the canonical (lexicographic)
    order; classes are listed by decreasing dimension of the fixed sublattice,
    then by representative, so the identity class comes first.
    """
    gens = [G.index_of(g) for g in G.generators]
    gen_invs = [G.inv(g) for g in gens]
    unassigned = set(range(G.order))
    found = []
    while unassigned:
        x = min(unassigned)
        orbit = {x}
        queue = deque([x])
        while queue:
            y = queue.popleft()
            for g, gi in zip(gens, gen_invs):
                z = G.mul(G.mul(g, y), gi)
                if z not in orbit:
                    orbit.add(z)
                    queue.append(z)
        unassigned -= orbit
        found.append((min(orbit), frozenset(orbit)))
    found.sort(key=lambda rc: (-_fixed_dimension(G.elements[rc[0]]), rc[0]))
    class_of = {i: c for c, (_, orbit) in enumerate(found) for i in orbit}
    return ConjugacyClassTable(
        representatives=tuple(WeylElement(G, r) for r, _ in found),
        class_sizes=tuple(len(o) for _, o in found),
        class_of=class_of,
        members=tuple(o for _, o in found),
    )


def centralizer(G: WeylGroup, w: WeylElement) -> Subgroup:
    i = w.index
    return Subgroup(G, frozenset(a for a in range(G.order) if G.mul(a, i) == G.mul(i, a)))


def isotropy(G: WeylGroup, t: TorusPoint) -> Subgroup:
    """``W(t)``: elements fixing ``t``, with distinct symbols never equal."""
    if t.torus.rank != G.lattice_rank:
        raise GroupError(f"point of rank {t.torus.rank} for group of rank {G.lattice_rank}")
    return Subgroup(G, frozenset(w.index for w in G if act(w, t).coords == t.coords))


def permutation_of(m: IntegerMatrix) -> tuple[int, ...]:
    """``pi`` with ``M e_j = e_pi(j)``."""
    if not is_permutation_matrix(m):
        raise UnsupportedPresetError(f"{m.to_lists()} is not a permutation matrix")
    return tuple(m.column(j).index(1) for j in range(m.cols))


def cycles(w: WeylElement | IntegerMatrix) -> list[tuple[int, ...]]:
    """Cycles of a permutation matrix, each starting at its smallest point."""
    m = w if isinstance(w, IntegerMatrix) else w.matrix
    pi = permutation_of(m)
    seen, out = set(), []
    for start in range(len(pi)):
        if start in seen:
            continue
        cyc, j = [], start
        while j not in seen:
            seen.add(j)
            cyc.append(j)
            j = pi[j]
        out.append(tuple(cyc))
    return out


def cycle_type(w: WeylElement | IntegerMatrix) -> tuple[int, ...]:
    if isinstance(w, WeylElement) and w.group.preset_tag.startswith("g2"):
        raise UnsupportedPresetError(f"cycle types are defined for gl_n presets, not {w.group.preset_tag}")
    return tuple(sorted((len(c) for c in cycles(w)), reverse=True))


# ---------------------------------------------------------------------------
# isotropy decomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IsotropyDecomposition:
    """``full_isotropy = normal_part x| complement_part``.

    ``normal_part`` is generated by the reflections whose root is trivial at
    the point; ``complement_part`` stabilises the positive roots of that
    reflection subgroup.
    """

    full_isotropy: Subgroup
    normal_part: Subgroup
    complement_part: Subgroup
    roots_at_point: tuple[tuple[int, ...], ...]

    def check(self) -> bool:
        full, n, c = self.full_isotropy, self.normal_part, self.complement_part
        ident = full.parent.identity_index
        return (
            n.is_normal_in(full)
            and n.indices & c.indices == {ident}
            and n.product(c) == full.indices
        )


def _reflection_for(G: WeylGroup, root: Sequence[int]) -> int:
    neg = tuple(-x for x in root)
    ident = IntegerMatrix.identity(G.lattice_rank)
    for i, m in enumerate(G.elements):
        if i != G.identity_index and m.apply(root) == neg and (m - ident).rank() == 1 and m @ m == ident:
            return i
    raise GroupError(f"no reflection for root {tuple(root)} in {G.label}")


def isotropy_decomposition(G: WeylGroup, t: TorusPoint) -> IsotropyDecomposition:
    if G.roots is None:
        raise UnsupportedPresetError(
            f"isotropy decomposition needs root data; preset {G.preset_tag!r} has none"
        )
    full = isotropy(G, t)
    trivial_roots = tuple(r for r in G.roots if t.character(r) == Coordinate())
    normal = G.generated_subgroup(_reflection_for(G, r) for r in trivial_roots)
    positive = set(trivial_roots)
    complement = Subgroup(G, frozenset(
        i for i in full.indices if {G.elements[i].apply(r) for r in positive} == positive
    ))
    return IsotropyDecomposition(full, normal, complement, trivial_roots)
