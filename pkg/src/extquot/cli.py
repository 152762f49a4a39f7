"""Command-line interface: every command prints one JSON document.

Errors go to stderr as a single JSON line ``{"error": code, "detail": ...}``
with a nonzero exit status.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import g2
from .abgroup import ShapeError, cokernel, kernel_basis, smith_normal_form
from .langlands import (
    ParameterError,
    ReederParameter,
    base_change_param,
    check_base_change_diagram,
    fiber_count,
    generic_fixed_pairs,
    infinitesimal_character_i_s,
    kl_triple,
    mu_map,
    pi_s,
    springer_type_A,
)
from .presets import PresetError, Scenario, load_preset, shipped_presets
from .quotient import (
    UnsupportedIsotropyError,
    base_change_endo,
    build_extended_quotient,
    first_kind_classes,
    second_kind_labels,
)
from .torus import ParseError, act, coord, parse_coordinates
from .weyl import GroupError, cycle_type, isotropy, isotropy_decomposition


class CliError(Exception):
    def __init__(self, code: str, detail: str):
        super().__init__(detail)
        self.code = code
        self.detail = detail


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _extensions(items: Sequence[str] | None) -> dict | None:
    if not items:
        return None
    free, torsion = [], []
    for item in items:
        name, _, order = item.partition(":")
        if not name.isidentifier():
            raise CliError("bad_extension", f"generator name {name!r} is not an identifier")
        if order:
            try:
                torsion.append((name, int(order)))
            except ValueError:
                raise CliError("bad_extension", f"order {order!r} of {name} is not an integer") from None
        else:
            free.append(name)
    return {"free_generators": free, "torsion_generators": torsion}


def _scenario(args) -> Scenario:
    try:
        return load_preset(args.preset, _extensions(getattr(args, "extend", None)))
    except PresetError as exc:
        raise CliError("bad_preset", str(exc)) from None


def _require_gl(sc: Scenario):
    if not sc.is_gl:
        raise CliError("unsupported_preset", f"command needs a gl_n preset, got {sc.name!r} ({sc.kind})")


def _coords(sc: Scenario, text: str, what: str):
    coords = parse_coordinates(text, sc.torus.value_group)
    if len(coords) != sc.rank:
        raise CliError("rank_mismatch", f"{what} has {len(coords)} coordinates, preset {sc.name} has rank {sc.rank}")
    for c in coords:
        if not sc.torus.value_group.can_represent(c):
            raise CliError(
                "unrepresentable",
                f"{c} needs a root of unity of order {c.phase.denominator}; declare one with --extend NAME:ORDER",
            )
    return coords


def _point(sc: Scenario, text: str):
    return sc.torus.point(*_coords(sc, text, "point"))


def _pick_w(sc: Scenario, text: str | None, t):
    table = sc.group.classes
    if text is None:
        raise CliError("missing_argument", "--w is required")
    text = text.strip()
    if text.lstrip("-").isdigit():
        k = int(text)
        if not 0 <= k < len(table):
            raise CliError("bad_class", f"class index {k} out of range 0..{len(table) - 1}")
        return table.representatives[k]
    try:
        wanted = tuple(sorted((int(x) for x in text.strip("()[] ").split(",") if x.strip()), reverse=True))
    except ValueError:
        raise CliError("bad_cycle_type", f"cannot read cycle type {text!r}") from None
    for w in sc.group:
        if cycle_type(w) == wanted and (t is None or act(w, t).coords == t.coords):
            return w
    raise CliError("not_fixed", f"no element of cycle type {wanted} fixes the point")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_components(args) -> dict:
    sc = _scenario(args)
    eq = build_extended_quotient(sc.torus, sc.group)
    out = eq.to_json()
    out["bounded_below_by_classes"] = eq.total_components >= eq.class_count
    if sc.kind == "g2_ramified":
        out["example_table"] = [c.to_json() for c in g2.example_table(sc, eq)]
    return out


def cmd_fibers(args) -> dict:
    sc = _scenario(args)
    _require_gl(sc)
    sigma = _coords(sc, args.sigma, "sigma")
    s = coord(args.s, sc.torus.value_group)
    return fiber_count(sigma, s).to_json()


def cmd_mu(args) -> dict:
    sc = _scenario(args)
    _require_gl(sc)
    t = _point(sc, args.point)
    w = _pick_w(sc, args.w, t)
    P = mu_map(t, w)
    s = coord(args.s, sc.torus.value_group)
    return {
        "point": t.to_json(),
        "w": w.matrix.to_lists(),
        "cycle_type": list(cycle_type(w)),
        "parameter": P.to_json(),
        "springer": list(springer_type_A(cycle_type(w)).partition),
        "s": str(s),
        "pi_s": [str(c) for c in pi_s(t, w, s)],
        "i_s": [str(c) for c in infinitesimal_character_i_s(P, s)],
    }


def cmd_kl(args) -> dict:
    sc = _scenario(args)
    _require_gl(sc)
    P = ReederParameter.parse(args.segments)
    if P.n != sc.rank:
        raise CliError("rank_mismatch", f"segments have total length {P.n}, preset {sc.name} has rank {sc.rank}")
    out = kl_triple(P, args.q).to_json()
    out["parameter"] = P.to_json()
    return out


def cmd_basechange(args) -> dict:
    sc = _scenario(args)
    if args.f < 1:
        raise CliError("bad_degree", f"-f must be a positive integer, got {args.f}")
    eq = build_extended_quotient(sc.torus, sc.group)
    out = {
        "preset": sc.name,
        "f": args.f,
        "strata": [m.to_json() for m in base_change_endo(eq, args.f)],
    }
    if sc.is_gl:
        pairs = generic_fixed_pairs(sc.group, sc.torus)
        out["diagram"] = check_base_change_diagram(args.f, pairs).to_json()
        out["parameters"] = [
            {"before": mu_map(t, w).to_json(), "after": base_change_param(mu_map(t, w), args.f).to_json()}
            for t, w in generic_fixed_pairs(sc.group, sc.torus, class_reps_only=True)
        ]
    return out


def cmd_labels(args) -> dict:
    sc = _scenario(args)
    t = _point(sc, args.point)
    labels = second_kind_labels(sc.group, t)
    iso = isotropy(sc.group, t)
    out = {
        "point": t.to_json(),
        "isotropy_order": iso.order,
        "first_kind_classes": first_kind_classes(sc.group, t),
        "labels": [lab.to_json() for lab in labels],
    }
    if sc.group.roots is not None:
        dec = isotropy_decomposition(sc.group, t)
        out["isotropy_decomposition"] = {
            "normal_order": dec.normal_part.order,
            "complement_order": dec.complement_part.order,
        }
    return out


def cmd_snf(args) -> dict:
    try:
        rows = json.loads(args.matrix)
    except json.JSONDecodeError as exc:
        raise CliError("parse_error", f"matrix is not JSON: {exc.msg} at position {exc.pos}") from None
    if not isinstance(rows, list) or not all(isinstance(r, list) and all(isinstance(x, int) for x in r) for r in rows):
        raise CliError("parse_error", "matrix must be a list of lists of integers")
    snf = smith_normal_form(rows)
    return {
        "U": snf.U.to_lists(),
        "D": snf.D.to_lists(),
        "V": snf.V.to_lists(),
        "diagonal": list(snf.diagonal),
        "cokernel": cokernel(rows).to_json(),
        "kernel_basis": [list(v) for v in kernel_basis(rows)],
    }


def cmd_scenario_list(args) -> dict:
    out = []
    for name in shipped_presets():
        sc = load_preset(name)
        out.append({
            "name": name,
            "kind": sc.kind,
            "rank": sc.rank,
            "group_order": sc.group.order,
            "conjugacy_classes": len(sc.group.classes),
            "description": sc.description,
        })
    return {"presets": out}


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _cell(v) -> str:
    return v if isinstance(v, str) else json.dumps(v, sort_keys=True, separators=(",", ":"))


def render_table(doc: dict) -> str:
    """Aligned-text view: scalar fields first, then each list of records as columns."""
    lines = []
    tables = []
    for key in sorted(doc):
        v = doc[key]
        if isinstance(v, list) and v and all(isinstance(r, dict) for r in v):
            tables.append((key, v))
        else:
            lines.append(f"{key}: {_cell(v)}")
    for key, rows in tables:
        cols = sorted({c for r in rows for c in r})
        cells = [[_cell(r.get(c, "")) for c in cols] for r in rows]
        widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
        lines.append("")
        lines.append(f"[{key}]")
        lines.append("  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip())
        for row in cells:
            lines.append("  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="extquot", description="Extended quotients and GL(n) parameters")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, preset=True):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        if preset:
            sp.add_argument("--preset", required=True, help="preset name or path to a root-datum JSON file")
            sp.add_argument("--extend", action="append", metavar="NAME[:ORDER]",
                            help="extra value-group generator (free, or torsion with an order)")
        sp.add_argument("--table", action="store_true", help="aligned text instead of JSON")
        return sp

    add("components", cmd_components, "strata of T//W and their irreducible components")
    sp = add("fibers", cmd_fibers, "points of T//W over sigma under the q-projection")
    sp.add_argument("--sigma", required=True, help='eigenvalues, e.g. "qh,qh^-1"')
    sp.add_argument("--s", default="qh", help="interpolation parameter (default qh)")
    sp = add("mu", cmd_mu, "Reeder parameter of a fixed pair (t, w)")
    sp.add_argument("--point", required=True, help='e.g. "(z,z,y)"')
    sp.add_argument("--w", help='class index, or cycle type such as "2,1" or "(3)"')
    sp.add_argument("--s", default="qh")
    sp = add("kl", cmd_kl, "Kazhdan-Lusztig triple of a multisegment")
    sp.add_argument("--segments", required=True, help='"center:length,..." e.g. "z:2"')
    sp.add_argument("--q", type=int, default=None, help="perfect square >= 4; omit for symbolic q")
    sp = add("basechange", cmd_basechange, "base change endomorphism of degree f")
    sp.add_argument("-f", type=int, default=1)
    sp = add("labels", cmd_labels, "second-kind labels at a point")
    sp.add_argument("--point", required=True)
    sp = add("snf", cmd_snf, "Smith normal form of an integer matrix", preset=False)
    sp.add_argument("--matrix", required=True, help='JSON, e.g. "[[2,4],[6,8]]"')
    add("scenario-list", cmd_scenario_list, "list shipped presets", preset=False)
    return p


_ERROR_CODES = (
    (ParseError, "parse_error"),
    (ShapeError, "shape_error"),
    (UnsupportedIsotropyError, "unsupported_isotropy"),
    (GroupError, "group_error"),
    (ParameterError, "parameter_error"),
    (PresetError, "bad_preset"),
)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc = args.func(args)
    except CliError as exc:
        return _fail(exc.code, exc.detail)
    except Exception as exc:
        for cls, code in _ERROR_CODES:
            if isinstance(exc, cls):
                return _fail(code, str(exc))
        raise
    if args.table:
        print(render_table(doc))
    else:
        print(json.dumps(doc, sort_keys=True, indent=2))
    return 0


def _fail(code: str, detail: str) -> int:
    print(json.dumps({"error": code, "detail": detail}, sort_keys=True), file=sys.stderr)
    return 2


if __name__ == "__main__":
    sys.exit(main())
