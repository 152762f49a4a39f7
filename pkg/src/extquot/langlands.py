"""GL(n) parameters: multisegments, Reeder parameters and Kazhdan-Lusztig triples.

A segment ``(z, m)`` stands for ``chi_z (x) tau(m)``: an unramified
character with ``chi(Frob) = z`` tensored with the m-dimensional irreducible
representation of SL(2).  Its Frobenius eigenvalues at ``T_s`` are
``z s^(m-1), z s^(m-3), ..., z s^(1-m)``.

Only the torus values of the SL(2) part and its unipotent image are ever
built; ``u`` is ``Sym^(m-1)`` of the standard unipotent ``[[1,1],[0,1]]``,
an upper triangular Pascal matrix with a single Jordan block.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from collections import Counter
from math import comb, factorial, isqrt
from typing import Iterable, Sequence

from .abgroup import IntegerMatrix
from .torus import Coordinate, ParseError, TorusPoint, act, coord, power_map
from .weyl import GroupError, WeylElement, WeylGroup, cycles

QH = Coordinate.symbol("qh")

Orbit = tuple  # sorted tuple of Coordinate: a canonical point of T/W for gl_n


class ParameterError(ValueError):
    pass


def orbit_of(coords: Iterable[Coordinate]) -> Orbit:
    return tuple(sorted(coords))


# ---------------------------------------------------------------------------
# segments and Reeder parameters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Segment:
    center: Coordinate
    length: int

    def __post_init__(self):
        if self.length < 1:
            raise ParameterError(f"segment length must be >= 1, got {self.length}")

    def weights(self, s: Coordinate = QH) -> list[Coordinate]:
        """``center * s^(m-1-2k)`` for ``k = 0..m-1``."""
        m = self.length
        return [self.center * s ** (m - 1 - 2 * k) for k in range(m)]

    @property
    def sort_key(self):
        return (-self.length, self.center)

    def __str__(self):
        return f"{self.center}:{self.length}"


@dataclass(frozen=True)
class ReederParameter:
    """``(Phi, rho)`` for GL(n): a multiset of segments and the tag of rho."""

    segments: tuple[Segment, ...]
    rho_label: str = "1"

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(sorted(self.segments, key=lambda s: s.sort_key)))
        if self.rho_label not in ("1", "sgn"):
            raise ParameterError(f"rho label must be '1' or 'sgn', got {self.rho_label!r}")

    @classmethod
    def parse(cls, text: str, rho_label: str = "1") -> ReederParameter:
        """``"z:2,y:1"``; a bare coordinate means length 1."""
        segs = []
        for part in filter(None, (p.strip() for p in text.split(","))):
            center, _, length = part.partition(":")
            try:
                m = int(length) if length else 1
            except ValueError:
                raise ParseError("expected integer segment length", text, text.index(part) + len(center) + 1) from None
            segs.append(Segment(coord(center.strip()), m))
        if not segs:
            raise ParseError("expected at least one segment", text, 0)
        return cls(tuple(segs), rho_label)

    @property
    def n(self) -> int:
        return sum(s.length for s in self.segments)

    @property
    def jordan_type(self) -> tuple[int, ...]:
        return tuple(sorted((s.length for s in self.segments), reverse=True))

    def __str__(self):
        return " + ".join(f"chi[{s.center}] x tau({s.length})" for s in self.segments)

    def to_json(self) -> dict:
        return {
            "segments": [{"center": str(s.center), "length": s.length} for s in self.segments],
            "rho": self.rho_label,
        }


def _require_gl(group: WeylGroup):
    if group.preset_tag != "gl_n":
        raise GroupError(f"GL(n) parameter layer needs a gl_n preset, got {group.preset_tag!r}")


def mu_map(t: TorusPoint, w: WeylElement) -> ReederParameter:
    """One segment per cycle of ``w``: (common coordinate on the cycle, cycle length)."""
    _require_gl(w.group)
    if act(w, t).coords != t.coords:
        raise ParameterError(f"{t} is not fixed by {w.matrix.to_lists()}")
    return ReederParameter(tuple(Segment(t.coords[c[0]], len(c)) for c in cycles(w)))


def fixed_pair(group: WeylGroup, P: ReederParameter, torus=None) -> tuple[TorusPoint, WeylElement]:
    """A point ``(t, w)`` of ``T//W`` with ``mu_map(t, w) == P``.

    ``w`` is the product of consecutive cycles in segment order, ``t`` repeats
    each center along its cycle.
    """
    _require_gl(group)
    n = group.lattice_rank
    if P.n != n:
        raise ParameterError(f"parameter of size {P.n} for GL({n})")
    perm = list(range(n))
    coords = []
    start = 0
    for s in P.segments:
        block = list(range(start, start + s.length))
        for a, b in zip(block, block[1:] + block[:1]):
            perm[a] = b
        coords.extend([s.center] * s.length)
        start += s.length
    m = IntegerMatrix.from_rows([[int(perm[j] == i) for j in range(n)] for i in range(n)], n)
    if torus is None:
        from .torus import Torus
        torus = Torus(n)
    return TorusPoint(torus, tuple(coords)), group.element(group.index_of(m))


# ---------------------------------------------------------------------------
# Laurent polynomials (for exact matrix identities)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LaurentPoly:
    """Finite sum of rational multiples of value-group monomials."""

    terms: tuple[tuple[Coordinate, Fraction], ...] = ()

    def __post_init__(self):
        acc: dict[Coordinate, Fraction] = {}
        for mono, c in self.terms:
            acc[mono] = acc.get(mono, Fraction(0)) + Fraction(c)
        object.__setattr__(self, "terms", tuple(sorted((m, c) for m, c in acc.items() if c)))

    @classmethod
    def constant(cls, c) -> LaurentPoly:
        return cls(((Coordinate(), Fraction(c)),))

    @classmethod
    def monomial(cls, m: Coordinate, c=1) -> LaurentPoly:
        return cls(((m, Fraction(c)),))

    def __add__(self, other: LaurentPoly) -> LaurentPoly:
        return LaurentPoly(self.terms + other.terms)

    def __mul__(self, other) -> LaurentPoly:
        if not isinstance(other, LaurentPoly):
            return LaurentPoly(tuple((m, c * other) for m, c in self.terms))
        return LaurentPoly(tuple((m1 * m2, c1 * c2) for m1, c1 in self.terms for m2, c2 in other.terms))

    __rmul__ = __mul__

    def inverse(self) -> LaurentPoly:
        if len(self.terms) != 1:
            raise ZeroDivisionError("only monomials are invertible")
        (m, c), = self.terms
        return LaurentPoly(((m.inverse(), 1 / c),))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms:
            if m.is_identity:
                parts.append(str(c))
            elif c == 1:
                parts.append(str(m))
            else:
                parts.append(f"{c}*{m}")
        return " + ".join(parts)


def specialize_qh(c: Coordinate, root: int | None) -> LaurentPoly:
    """``c`` with ``qh`` replaced by the integer ``root`` (``None``: keep symbolic)."""
    if root is None:
        return LaurentPoly.monomial(c)
    e = c.exponent("qh")
    return LaurentPoly.monomial(c / QH ** e, Fraction(root) ** e)


# ---------------------------------------------------------------------------
# Kazhdan-Lusztig triples
# ---------------------------------------------------------------------------

def sym_power_unipotent(m: int) -> IntegerMatrix:
    """Image of ``[[1,1],[0,1]]`` in the m-dimensional irreducible representation.

    Basis ``x^(m-1-k) y^k``; ``y -> x + y`` gives entry ``(j, k) = C(k, j)``.
    """
    return IntegerMatrix.from_rows([[comb(k, j) for k in range(m)] for j in range(m)], m)


def block_diagonal(blocks: Sequence[IntegerMatrix]) -> IntegerMatrix:
    n = sum(b.rows for b in blocks)
    rows = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i in range(b.rows):
            for j in range(b.cols):
                rows[off + i][off + j] = b[i, j]
        off += b.rows
    return IntegerMatrix.from_rows(rows, n)


def jordan_type(u: IntegerMatrix) -> tuple[int, ...]:
    """Jordan type of a unipotent matrix from the ranks of ``(u - 1)^k``."""
    n = u.rows
    nil = u - IntegerMatrix.identity(n)
    ranks = [n]
    p = IntegerMatrix.identity(n)
    while ranks[-1]:
        p = p @ nil
        r = p.rank()
        if r == ranks[-1]:
            raise ParameterError("matrix is not unipotent")
        ranks.append(r)
    # number of blocks of size >= k is ranks[k-1] - ranks[k]
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    sizes = []
    for k in range(len(at_least), 0, -1):
        exact = at_least[k - 1] - (at_least[k] if k < len(at_least) else 0)
        sizes.extend([k] * exact)
    return tuple(sizes)


def _check_q(q: int | None) -> int | None:
    if q is None:
        return None
    if isinstance(q, bool) or not isinstance(q, int):
        raise ParameterError(f"q must be an integer or None (symbolic), got {q!r}")
    root = isqrt(q) if q >= 0 else -1
    if q < 4 or root * root != q:
        raise ParameterError(
            f"q = {q} is not a perfect square >= 4, so sqrt(q) is not an exact integer; "
            "leave q symbolic (qh^2) instead"
        )
    return root


def _binomial_poly(k: int) -> LaurentPoly:
    """``C(q, k)`` as a polynomial in ``qh`` (``q = qh^2``)."""
    out = LaurentPoly.constant(1)
    for i in range(k):
        out = out * (LaurentPoly.monomial(QH ** 2) + LaurentPoly.constant(-i))
    return out * Fraction(1, factorial(k))


@dataclass(frozen=True)
class KLTriple:
    """``(sigma, u, rho)``; ``sigma`` is diagonal, ``q=None`` means symbolic."""

    sigma: tuple[LaurentPoly, ...]
    u: IntegerMatrix
    rho_label: str = "1"
    q: int | None = None

    def conjugated_u(self) -> list[list[LaurentPoly]]:
        """``sigma u sigma^-1`` entrywise."""
        n = self.u.rows
        inv = [s.inverse() for s in self.sigma]
        return [[self.sigma[i] * self.u[i, j] * inv[j] for j in range(n)] for i in range(n)]

    def u_to_the_q(self) -> list[list[LaurentPoly]]:
        n = self.u.rows
        if self.q is not None:
            p = self.u ** self.q
            return [[LaurentPoly.constant(p[i, j]) for j in range(n)] for i in range(n)]
        nil = self.u - IntegerMatrix.identity(n)
        out = [[LaurentPoly() for _ in range(n)] for _ in range(n)]
        power = IntegerMatrix.identity(n)
        for k in range(n):
            coeff = _binomial_poly(k)
            for i in range(n):
                for j in range(n):
                    if power[i, j]:
                        out[i][j] = out[i][j] + coeff * power[i, j]
            power = power @ nil
        return out

    def check(self) -> bool:
        """``sigma u sigma^-1 == u^q`` exactly."""
        return self.conjugated_u() == self.u_to_the_q()

    @property
    def is_unipotent(self) -> bool:
        n = self.u.rows
        return ((self.u - IntegerMatrix.identity(n)) ** n) == IntegerMatrix.zeros(n, n)

    def to_json(self) -> dict:
        return {
            "q": "qh^2" if self.q is None else self.q,
            "sigma": [str(s) for s in self.sigma],
            "u": self.u.to_lists(),
            "rho": self.rho_label,
            "jordan_type": list(jordan_type(self.u)),
            "check": "pass" if self.check() else "fail",
        }


def kl_triple(P: ReederParameter, q: int | None = None) -> KLTriple:
    root = _check_q(q)
    sigma = []
    for s in P.segments:
        sigma.extend(specialize_qh(c, root) for c in s.weights(QH))
    u = block_diagonal([sym_power_unipotent(s.length) for s in P.segments])
    return KLTriple(tuple(sigma), u, P.rho_label, q)


def _log_root(c: Fraction, root: int) -> int:
    e, x = 0, c
    while x.denominator == 1 and x.numerator % root == 0 and x != 1 and x.numerator:
        x, e = x / root, e + 1
    while x.numerator == 1 and x.denominator % root == 0 and x != 1:
        x, e = x * root, e - 1
    if x != 1:
        raise ParameterError(f"coefficient {c} is not a power of sqrt(q) = {root}")
    return e


def reeder_from_kl(triple: KLTriple) -> ReederParameter:
    """Read the multisegment back off ``(sigma, u)``."""
    n = triple.u.rows
    root = None if triple.q is None else isqrt(triple.q)
    segs, start = [], 0
    while start < n:
        end = start + 1
        while end < n and triple.u[end - 1, end]:
            end += 1
        m = end - start
        (mono, c), = triple.sigma[start].terms
        if root is not None:
            mono = mono * QH ** _log_root(c, root)
        elif c != 1:
            raise ParameterError(f"symbolic sigma entry has coefficient {c}")
        segs.append(Segment(mono * QH ** (1 - m), m))
        start = end
    return ReederParameter(tuple(segs), triple.rho_label)


# ---------------------------------------------------------------------------
# interpolation: i_s and pi_s
# ---------------------------------------------------------------------------

def infinitesimal_character_i_s(P: ReederParameter, s: Coordinate = QH) -> Orbit:
    """``Phi(Frob, T_s)`` as a sorted multiset of eigenvalues."""
    return orbit_of(c for seg in P.segments for c in seg.weights(s))


def gamma_T(w: WeylElement, s: Coordinate, n: int) -> list[Coordinate]:
    """Torus values of ``gamma(T_s)``: weights ``s^(m-1), s^(m-3), ...`` along each cycle of ``w``."""
    vals = [Coordinate()] * n
    for cyc in cycles(w):
        m = len(cyc)
        for p, j in enumerate(cyc):
            vals[j] = s ** (m - 1 - 2 * p)
    return vals


def pi_s(t: TorusPoint, w: WeylElement, s: Coordinate = QH) -> Orbit:
    """``t * gamma(T_s)`` modulo W, computed from the pair directly."""
    _require_gl(w.group)
    if act(w, t).coords != t.coords:
        raise ParameterError(f"{t} is not fixed by {w.matrix.to_lists()}")
    g = gamma_T(w, s, t.torus.rank)
    return orbit_of(c * x for c, x in zip(t.coords, g))


# ---------------------------------------------------------------------------
# fibres of the q-projection
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiberWitness:
    cycle_type: tuple[int, ...]
    point: tuple[Coordinate, ...]
    parameter: ReederParameter

    @property
    def sort_key(self):
        return (self.cycle_type, self.point)

    def to_json(self) -> dict:
        return {
            "cycle_type": list(self.cycle_type),
            "point": [str(c) for c in self.point],
            "segments": [str(s) for s in self.parameter.segments],
        }


@dataclass(frozen=True)
class FiberResult:
    sigma: Orbit
    s: Coordinate
    witnesses: tuple[FiberWitness, ...]

    @property
    def count(self) -> int:
        return len(self.witnesses)

    def to_json(self) -> dict:
        return {
            "sigma": [str(c) for c in self.sigma],
            "s": str(self.s),
            "count": self.count,
            "witnesses": [w.to_json() for w in self.witnesses],
        }


def multisegments(sigma: Sequence[Coordinate], s: Coordinate = QH) -> set[ReederParameter]:
    """All multisegments whose eigenvalue multiset at ``T_s`` is ``sigma``."""
    step = s ** 2
    results: set[ReederParameter] = set()

    def fits(chain: list[Coordinate], remaining: Counter) -> bool:
        return not (Counter(chain) - remaining)

    def rec(remaining: Counter, chosen: list[Segment]):
        if not remaining:
            results.add(ReederParameter(tuple(chosen)))
            return
        # the smallest remaining eigenvalue lies in exactly one segment
        x = min(remaining)
        below = 0
        while fits([x / step ** j for j in range(below + 1)], remaining):
            above = 0
            while True:
                chain = [x * step ** j for j in range(-below, above + 1)]
                if not fits(chain, remaining):
                    break
                m = len(chain)
                rec(remaining - Counter(chain), chosen + [Segment(chain[0] * s ** (m - 1), m)])
                above += 1
            below += 1

    rec(Counter(sigma), [])
    return results


def fiber_count(sigma: Sequence[Coordinate], s: Coordinate = QH) -> FiberResult:
    """Points of ``T//W`` over ``sigma`` under ``pi_s``, with witnesses.

    Each witness is the standard fixed pair of a multisegment: ``w`` has one
    cycle per segment and ``t`` is constant on it.
    """
    found = multisegments(sigma, s)
    witnesses = []
    for P in found:
        point = tuple(seg.center for seg in P.segments for _ in range(seg.length))
        witnesses.append(FiberWitness(P.jordan_type, point, P))
    witnesses.sort(key=lambda w: w.sort_key)
    return FiberResult(orbit_of(sigma), s, tuple(witnesses))


# ---------------------------------------------------------------------------
# Springer (type A) and base change
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpringerLabelA:
    partition: tuple[int, ...]

    @property
    def orbit_name(self) -> str:
        if len(self.partition) == 1:
            return "regular"
        if all(p == 1 for p in self.partition):
            return "zero"
        return "O(" + ",".join(map(str, self.partition)) + ")"


def springer_type_A(cycle_type: Sequence[int]) -> SpringerLabelA:
    """Cycle type of ``w`` -> Jordan type of ``Phi(1, u0)``; the identity on partitions."""
    part = tuple(sorted(cycle_type, reverse=True))
    if not part or any(p < 1 for p in part):
        raise ParameterError(f"not a partition: {tuple(cycle_type)}")
    return SpringerLabelA(part)


def base_change_param(P: ReederParameter, f: int) -> ReederParameter:
    if f < 1:
        raise ParameterError(f"residue degree must be positive, got {f}")
    return ReederParameter(tuple(Segment(s.center ** f, s.length) for s in P.segments), P.rho_label)


@dataclass
class BaseChangeReport:
    f: int
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"f": self.f, "checked": self.checked, "commutes": self.ok,
                "violations": [[str(t), w.matrix.to_lists()] for t, w in self.violations]}


def check_base_change_diagram(f: int, sample_points: Iterable[tuple[TorusPoint, WeylElement]]) -> BaseChangeReport:
    """``BC_f(mu(t, w)) == mu(t^f, w)`` for each sample pair."""
    report = BaseChangeReport(f)
    for t, w in sample_points:
        report.checked += 1
        if base_change_param(mu_map(t, w), f) != mu_map(power_map(t, f), w):
            report.violations.append((t, w))
    return report


def generic_fixed_pairs(group: WeylGroup, torus, class_reps_only: bool = False) -> list[tuple[TorusPoint, WeylElement]]:
    """``(t, w)`` with ``t`` the generic point of ``T^w`` (one symbol per cycle)."""
    _require_gl(group)
    elems = group.classes.representatives if class_reps_only else list(group)
    out = []
    for w in elems:
        coords = [None] * group.lattice_rank
        for k, cyc in enumerate(cycles(w)):
            for j in cyc:
                coords[j] = Coordinate.symbol(f"z{k + 1}")
        out.append((TorusPoint(torus, tuple(coords)), w))
    return out


def enumerate_parameters(group: WeylGroup, torus) -> list[ReederParameter]:
    """The Reeder parameters attached to the generic stratum representatives."""
    return sorted({mu_map(t, w) for t, w in generic_fixed_pairs(group, torus, class_reps_only=True)},
                  key=lambda P: [s.sort_key for s in P.segments])
