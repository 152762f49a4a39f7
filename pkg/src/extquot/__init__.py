"""Extended quotients ``T//W`` of tori by finite lattice groups, and the
GL(n) parameter layer built on them, in exact arithmetic."""

from .abgroup import FgAbelianGroup, IntegerMatrix, cokernel, kernel_basis, smith_normal_form
from .langlands import (
    ReederParameter,
    Segment,
    check_base_change_diagram,
    fiber_count,
    infinitesimal_character_i_s,
    kl_triple,
    mu_map,
    pi_s,
)
from .presets import load_preset, shipped_presets
from .quotient import base_change_endo, build_extended_quotient, second_kind_labels
from .torus import Coordinate, Torus, TorusPoint, act, fixed_subtorus, power_map
from .weyl import WeylGroup, centralizer, conjugacy_classes, enumerate_group, isotropy

__all__ = [
    "Coordinate",
    "FgAbelianGroup",
    "IntegerMatrix",
    "ReederParameter",
    "Segment",
    "Torus",
    "TorusPoint",
    "WeylGroup",
    "act",
    "base_change_endo",
    "build_extended_quotient",
    "centralizer",
    "check_base_change_diagram",
    "cokernel",
    "conjugacy_classes",
    "enumerate_group",
    "fiber_count",
    "fixed_subtorus",
    "infinitesimal_character_i_s",
    "isotropy",
    "kernel_basis",
    "kl_triple",
    "load_preset",
    "mu_map",
    "pi_s",
    "power_map",
    "second_kind_labels",
    "shipped_presets",
    "smith_normal_form",
]
