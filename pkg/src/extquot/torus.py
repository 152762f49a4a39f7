"""Algebraic tori, symbolic torus points and fixed subtori.

A torus is given by its character lattice ``X = Z^rank``; a point ``t`` is
recorded by the values ``t(e_j)`` of the standard basis characters.  Those
values live in a symbolic multiplicative group: Laurent monomials in named
free generators times a root of unity.  ``q`` only ever appears through the
generator ``qh`` standing for ``q^(1/2)``.

A Weyl group element ``w`` acts on ``X`` by an integer matrix ``M`` (columns
are images of basis vectors) and on points by ``(w.t)(chi) = t(w^-1 chi)``,
which makes the action a left action for any matrix group.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .abgroup import FgAbelianGroup, IntegerMatrix, ShapeError, kernel_basis, smith_normal_form

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_ZETA = re.compile(r"zeta(\d+)$")


class ParseError(ValueError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


# ---------------------------------------------------------------------------
# value group
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValueGroup:
    """Coefficient group for torus coordinates.

    ``free_generators`` are the declared symbols; undeclared symbols are
    still accepted as fresh generic parameters.  ``torsion_generators`` fix
    which roots of unity can be written down: a root of unity of order ``d``
    is representable iff ``d`` divides one of the declared orders.
    """

    free_generators: tuple[str, ...] = ("qh",)
    torsion_generators: tuple[tuple[str, int], ...] = (("zeta4", 4),)

    def __post_init__(self):
        object.__setattr__(self, "free_generators", tuple(self.free_generators))
        object.__setattr__(self, "torsion_generators", tuple((str(n), int(o)) for n, o in self.torsion_generators))
        names = list(self.free_generators) + [n for n, _ in self.torsion_generators]
        if len(set(names)) != len(names):
            raise ValueError(f"generator names must be unique: {names}")
        for name, order in self.torsion_generators:
            if order < 2:
                raise ValueError(f"torsion generator {name} has order {order} < 2")

    def extended(self, free: Iterable[str] = (), torsion: Iterable[tuple[str, int]] = ()) -> ValueGroup:
        free = tuple(n for n in free if n not in self.free_generators)
        torsion = tuple(t for t in torsion if t not in self.torsion_generators)
        return ValueGroup(self.free_generators + free, self.torsion_generators + torsion)

    def represents_order(self, d: int) -> bool:
        return d == 1 or any(order % d == 0 for _, order in self.torsion_generators)

    def can_represent(self, c: Coordinate) -> bool:
        return self.represents_order(c.phase.denominator)

    def torsion_phase(self, name: str) -> Fraction | None:
        for n, order in self.torsion_generators:
            if n == name:
                return Fraction(1, order)
        m = _ZETA.match(name)
        if m and int(m.group(1)) >= 1:
            return Fraction(1, int(m.group(1))) % 1
        return None

    def to_json(self) -> dict:
        return {
            "free_generators": list(self.free_generators),
            "torsion_generators": [[n, o] for n, o in self.torsion_generators],
        }


DEFAULT_VALUE_GROUP = ValueGroup()


# ---------------------------------------------------------------------------
# coordinates
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Coordinate:
    """An element ``prod(name^e) * exp(2 pi i phase)`` of the value group.

    ``free`` is kept sorted by name with zero exponents dropped and ``phase``
    reduced into ``[0, 1)``, so dataclass equality is formal equality.
    """

    free: tuple[tuple[str, int], ...] = ()
    phase: Fraction = Fraction(0)

    def __post_init__(self):
        merged: dict[str, int] = {}
        for name, e in self.free:
            merged[name] = merged.get(name, 0) + int(e)
        object.__setattr__(self, "free", tuple(sorted((n, e) for n, e in merged.items() if e)))
        object.__setattr__(self, "phase", Fraction(self.phase) % 1)

    @classmethod
    def one(cls) -> Coordinate:
        return cls()

    @classmethod
    def symbol(cls, name: str, exponent: int = 1) -> Coordinate:
        return cls(((name, exponent),))

    @classmethod
    def root_of_unity(cls, numerator: int, order: int) -> Coordinate:
        return cls((), Fraction(numerator, order))

    @classmethod
    def parse(cls, text: str, value_group: ValueGroup = DEFAULT_VALUE_GROUP) -> Coordinate:
        c, pos = _parse_coordinate(text, 0, value_group)
        pos = _skip_ws(text, pos)
        if pos != len(text):
            raise ParseError("unexpected character", text, pos)
        return c

    def __mul__(self, other: Coordinate) -> Coordinate:
        return Coordinate(self.free + other.free, self.phase + other.phase)

    def __truediv__(self, other: Coordinate) -> Coordinate:
        return self * other.inverse()

    def __pow__(self, k: int) -> Coordinate:
        return Coordinate(tuple((n, e * k) for n, e in self.free), self.phase * k)

    def inverse(self) -> Coordinate:
        return self ** -1

    @property
    def is_identity(self) -> bool:
        return not self.free and self.phase == 0

    @property
    def is_torsion(self) -> bool:
        return not self.free

    def exponent(self, name: str) -> int:
        return dict(self.free).get(name, 0)

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.free)

    def __str__(self):
        parts = [n if e == 1 else f"{n}^{e}" for n, e in self.free]
        if self.phase:
            d, k = self.phase.denominator, self.phase.numerator
            parts.append(f"zeta{d}" if k == 1 else f"zeta{d}^{k}")
        return "*".join(parts) if parts else "1"

    def __repr__(self):
        return f"Coordinate({str(self)!r})"


def coord(text: str | Coordinate | int, value_group: ValueGroup = DEFAULT_VALUE_GROUP) -> Coordinate:
    if isinstance(text, Coordinate):
        return text
    if text == 1:
        return Coordinate()
    return Coordinate.parse(str(text), value_group)


def _skip_ws(text: str, pos: int) -> int:
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


def _parse_int(text: str, pos: int) -> tuple[int, int]:
    m = re.compile(r"[+-]?\d+").match(text, pos)
    if not m:
        raise ParseError("expected integer exponent", text, pos)
    return int(m.group()), m.end()


def _parse_coordinate(text: str, pos: int, vg: ValueGroup) -> tuple[Coordinate, int]:
    result = Coordinate()
    while True:
        pos = _skip_ws(text, pos)
        if text.startswith("-1", pos):
            base, pos = Coordinate((), Fraction(1, 2)), pos + 2
        elif text.startswith("1", pos) and not text[pos + 1:pos + 2].isdigit():
            base, pos = Coordinate(), pos + 1
        else:
            m = _NAME.match(text, pos)
            if not m:
                raise ParseError("expected generator name", text, pos)
            name, pos = m.group(), m.end()
            ph = vg.torsion_phase(name)
            base = Coordinate((), ph) if ph is not None else Coordinate.symbol(name)
        pos = _skip_ws(text, pos)
        if text.startswith("^", pos):
            e, pos = _parse_int(text, _skip_ws(text, pos + 1))
            base = base ** e
        result = result * base
        pos = _skip_ws(text, pos)
        if not text.startswith("*", pos):
            return result, pos
        pos += 1


def parse_coordinates(text: str, value_group: ValueGroup = DEFAULT_VALUE_GROUP) -> list[Coordinate]:
    """Parse ``c1, c2, ...`` with optional surrounding parentheses."""
    pos = _skip_ws(text, 0)
    closing = None
    if text.startswith("(", pos):
        closing, pos = ")", pos + 1
    coords = []
    while True:
        c, pos = _parse_coordinate(text, pos, value_group)
        coords.append(c)
        pos = _skip_ws(text, pos)
        if text.startswith(",", pos):
            pos += 1
            continue
        break
    if closing:
        if not text.startswith(closing, pos):
            raise ParseError("expected ')'", text, pos)
        pos = _skip_ws(text, pos + 1)
    if pos != len(text):
        raise ParseError("unexpected character", text, pos)
    return coords


# ---------------------------------------------------------------------------
# tori and points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Torus:
    rank: int
    value_group: ValueGroup = DEFAULT_VALUE_GROUP
    label: str = "T"

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("torus rank must be nonnegative")

    def point(self, *coords) -> TorusPoint:
        """``torus.point("qh^2*z", "z")``; coordinates as strings or :class:`Coordinate`."""
        return TorusPoint(self, tuple(coord(c, self.value_group) for c in coords))

    def parse_point(self, text: str) -> TorusPoint:
        return TorusPoint(self, tuple(parse_coordinates(text, self.value_group)))

    def identity(self) -> TorusPoint:
        return TorusPoint(self, (Coordinate(),) * self.rank)


@dataclass(frozen=True)
class TorusPoint:
    torus: Torus
    coords: tuple[Coordinate, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        if len(self.coords) != self.torus.rank:
            raise ShapeError(f"point has {len(self.coords)} coordinates, torus has rank {self.torus.rank}")

    def __mul__(self, other: TorusPoint) -> TorusPoint:
        _check_same_torus(self, other)
        return TorusPoint(self.torus, tuple(a * b for a, b in zip(self.coords, other.coords)))

    def inverse(self) -> TorusPoint:
        return TorusPoint(self.torus, tuple(c.inverse() for c in self.coords))

    def character(self, chi: Sequence[int]) -> Coordinate:
        """The value ``chi(t)`` for a character given in the standard basis."""
        if len(chi) != self.torus.rank:
            raise ShapeError(f"character of length {len(chi)} on rank {self.torus.rank} torus")
        terms = [(c, e) for c, e in zip(self.coords, chi) if e]
        if len(terms) == 1 and terms[0][1] == 1:
            return terms[0][0]
        free = [(name, k * e) for c, e in terms for name, k in c.free]
        return Coordinate(tuple(free), sum((c.phase * e for c, e in terms), Fraction(0)))

    @property
    def is_representable(self) -> bool:
        return all(self.torus.value_group.can_represent(c) for c in self.coords)

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + ")"

    def __repr__(self):
        return f"TorusPoint{self}"

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coords]


def _check_same_torus(a: TorusPoint, b: TorusPoint):
    if a.torus != b.torus:
        raise ValueError(f"points live on different tori: {a.torus.label} vs {b.torus.label}")


def points_equal(a: TorusPoint, b: TorusPoint) -> bool:
    _check_same_torus(a, b)
    return a.coords == b.coords


def power_map(t: TorusPoint, f: int) -> TorusPoint:
    if f < 1:
        raise ValueError(f"power must be a positive integer, got {f}")
    return TorusPoint(t.torus, tuple(c ** f for c in t.coords))


def _matrices(w) -> tuple[IntegerMatrix, IntegerMatrix]:
    if isinstance(w, IntegerMatrix):
        return w, w.inverse()
    return w.matrix, w.inverse_matrix


def act(w, t: TorusPoint) -> TorusPoint:
    """``w . t``; coordinate ``j`` of the result is ``prod_i t_i^(M^-1)_ij``.

    ``w`` is a Weyl group element or a bare unimodular matrix.  For
    orthogonal matrices (permutations, signed permutations) ``M^-1 = M^T``.
    """
    m, minv = _matrices(w)
    if m.rows != t.torus.rank:
        raise ShapeError(f"element acts on rank {m.rows}, torus has rank {t.torus.rank}")
    return TorusPoint(t.torus, tuple(t.character(minv.column(j)) for j in range(m.cols)))


# ---------------------------------------------------------------------------
# fixed subtori
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubtorusDescriptor:
    """The fixed locus ``T^w`` of one element.

    Component labels are tuples in ``component_group``: the restriction of
    ``t o U^-1`` to the torsion summands of ``X/(w-1)X`` (``U`` from the
    Smith form of ``M - 1``), recorded as exponents of ``exp(2 pi i/d_k)``.
    """

    torus: Torus
    identity_component_rank: int
    component_group: FgAbelianGroup
    cocharacter_basis: tuple[tuple[int, ...], ...]
    representatives_complete: bool
    _U: IntegerMatrix = field(repr=False)
    _U_inv: IntegerMatrix = field(repr=False)
    _torsion_rows: tuple[int, ...] = field(repr=False)

    @property
    def component_count(self) -> int:
        return self.component_group.order

    def labels(self) -> list[tuple[int, ...]]:
        return list(self.component_group.elements())

    def representative(self, label: Sequence[int]) -> TorusPoint:
        """The torsion point of the component ``label``; may need roots the value group lacks."""
        label = self.component_group.reduce(label)
        phases = [Fraction(0)] * self.torus.rank
        for a, k, d in zip(label, self._torsion_rows, self.component_group.torsion_orders):
            if a:
                for j in range(self.torus.rank):
                    phases[j] += Fraction(a * self._U[k, j], d)
        return TorusPoint(self.torus, tuple(Coordinate((), p) for p in phases))

    @property
    def component_representatives(self) -> tuple[TorusPoint, ...] | None:
        """One torsion point per component, or ``None`` when not representable."""
        if not self.representatives_complete:
            return None
        return tuple(self.representative(lab) for lab in self.labels())

    def identity_component_point(self, symbols: Sequence[str] | None = None) -> TorusPoint:
        """Generic point of the identity component, one free symbol per dimension."""
        if symbols is None:
            symbols = [f"z{k + 1}" for k in range(self.identity_component_rank)]
        if len(symbols) != self.identity_component_rank:
            raise ValueError(f"need {self.identity_component_rank} symbols, got {len(symbols)}")
        coords = []
        for j in range(self.torus.rank):
            coords.append(Coordinate(tuple((s, lam[j]) for s, lam in zip(symbols, self.cocharacter_basis))))
        return TorusPoint(self.torus, tuple(coords))

    def generic_point(self, label: Sequence[int] | None = None, symbols: Sequence[str] | None = None) -> TorusPoint:
        label = self.component_group.zero() if label is None else label
        return self.representative(label) * self.identity_component_point(symbols)

    def component_label(self, t: TorusPoint) -> tuple[int, ...]:
        """Which component of ``T^w`` contains the fixed point ``t``."""
        label = []
        for k, d in zip(self._torsion_rows, self.component_group.torsion_orders):
            v = t.character(self._U_inv.column(k))
            if v.free or (v.phase * d).denominator != 1:
                raise ValueError(f"point {t} is not fixed by this element")
            label.append(int(v.phase * d) % d)
        return tuple(label)


def fixed_subtorus(torus: Torus, w) -> SubtorusDescriptor:
    m, _ = _matrices(w)
    if m.rows != torus.rank:
        raise ShapeError(f"element acts on rank {m.rows}, torus has rank {torus.rank}")
    a = m - IntegerMatrix.identity(m.rows)
    snf = smith_normal_form(a)
    diag = snf.diagonal
    torsion_rows = tuple(k for k, d in enumerate(diag) if d > 1)
    group = FgAbelianGroup(0, tuple(diag[k] for k in torsion_rows))
    cochars = tuple(kernel_basis(m.T - IntegerMatrix.identity(m.rows)))
    desc = SubtorusDescriptor(
        torus=torus,
        identity_component_rank=len(cochars),
        component_group=group,
        cocharacter_basis=cochars,
        representatives_complete=True,
        _U=snf.U,
        _U_inv=snf.U.inverse(),
        _torsion_rows=torsion_rows,
    )
    complete = all(r.is_representable for r in (desc.representative(l) for l in desc.labels()))
    if not complete:
        object.__setattr__(desc, "representatives_complete", False)
    return desc


def substitute(t: TorusPoint, values: Mapping[str, Coordinate]) -> TorusPoint:
    """Replace free symbols by coordinates (used to specialise generic points)."""
    out = []
    for c in t.coords:
        new = Coordinate((), c.phase)
        for name, e in c.free:
            new = new * (values[name] ** e if name in values else Coordinate.symbol(name, e))
        out.append(new)
    return TorusPoint(t.torus, tuple(out))
