"""Root-datum presets: a torus, a Weyl group acting on its character lattice,
and the roots of unity the scenario needs.

Presets are looked up in the embedded registry (``presets/*.json`` shipped
with the package, plus ``glN`` generated on demand), then in the directories
listed in ``EXTQUOT_PRESET_PATH``, then as a filesystem path.
"""
from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .abgroup import IntegerMatrix
from .torus import Torus, ValueGroup
from .weyl import DEFAULT_MAX_ORDER, WeylGroup, enumerate_group

PRESET_PATH_ENV = "EXTQUOT_PRESET_PATH"
_GL = re.compile(r"gl(\d+)$")


class PresetError(LookupError):
    pass


@dataclass(frozen=True)
class Scenario:
    name: str
    kind: str
    torus: Torus
    group: WeylGroup
    cover: IntegerMatrix | None = None
    description: str = ""

    @property
    def rank(self) -> int:
        return self.torus.rank

    @property
    def is_gl(self) -> bool:
        return self.kind == "gl_n"


def gl_preset_data(n: int) -> dict:
    """Root datum of GL(n): permutation matrices on Z^n."""
    gens = []
    for i in range(n - 1):
        m = IntegerMatrix.identity(n).to_lists()
        m[i], m[i + 1] = m[i + 1], m[i]
        gens.append(m)
    roots = [[int(k == i) - int(k == j) for k in range(n)] for i in range(n) for j in range(i + 1, n)]
    return {
        "label": f"gl{n}",
        "kind": "gl_n",
        "rank": n,
        "generators": gens,
        "roots": roots,
        "value_group": {"free_generators": ["qh"], "torsion_generators": [["zeta4", 4]]},
        "description": f"GL({n}): symmetric group S_{n} permuting the coordinates of the diagonal torus",
    }


def scenario_from_data(data: dict, max_order: int = DEFAULT_MAX_ORDER) -> Scenario:
    try:
        rank = int(data["rank"])
        label = str(data["label"])
        gens = [IntegerMatrix.from_rows(g, rank) for g in data.get("generators", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise PresetError(f"malformed preset: {exc}") from exc
    kind = data.get("kind", "custom")
    vg_data = data.get("value_group", {})
    vg = ValueGroup(
        tuple(vg_data.get("free_generators", ["qh"])),
        tuple((n, o) for n, o in vg_data.get("torsion_generators", [["zeta4", 4]])),
    )
    extra = data.get("extensions", {})
    if extra:
        vg = vg.extended(extra.get("free_generators", ()), [tuple(x) for x in extra.get("torsion_generators", ())])
    group = enumerate_group(gens, max_order, rank=rank, preset_tag=kind, roots=data.get("roots"), label=label)
    cover = data.get("cover")
    return Scenario(
        name=label,
        kind=kind,
        torus=Torus(rank, vg, label=f"T[{label}]"),
        group=group,
        cover=None if cover is None else IntegerMatrix.from_rows(cover["matrix"], rank),
        description=data.get("description", ""),
    )


def shipped_presets() -> list[str]:
    files = resources.files("extquot") / "presets"
    names = [p.name[:-5] for p in files.iterdir() if p.name.endswith(".json")]
    return sorted(names, key=lambda n: (not n.startswith("gl"), len(n), n))


def _read_shipped(name: str) -> dict | None:
    f = resources.files("extquot") / "presets" / f"{name}.json"
    if f.is_file():
        return json.loads(f.read_text(encoding="utf-8"))
    return None


def resolve_preset_data(name: str) -> dict:
    data = _read_shipped(name)
    if data is not None:
        return data
    m = _GL.match(name)
    if m and int(m.group(1)) >= 1:
        return gl_preset_data(int(m.group(1)))
    for d in filter(None, os.environ.get(PRESET_PATH_ENV, "").split(os.pathsep)):
        p = Path(d) / f"{name}.json"
        if p.is_file():
            return json.loads(p.read_text(encoding="utf-8"))
    p = Path(name)
    if p.is_file():
        return json.loads(p.read_text(encoding="utf-8"))
    raise PresetError(f"unknown preset {name!r}")


@lru_cache(maxsize=None)
def _load_cached(name: str) -> Scenario:
    return scenario_from_data(resolve_preset_data(name))


def load_preset(name: str, extensions: dict | None = None) -> Scenario:
    """Resolve and build a scenario; results for bare names are cached."""
    if not extensions and not os.environ.get(PRESET_PATH_ENV):
        return _load_cached(name)
    data = dict(resolve_preset_data(name))
    if extensions:
        data["extensions"] = extensions
    return scenario_from_data(data)
