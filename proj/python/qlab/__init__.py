"""Quasiconformal maps, Carleson measures and Cauchy integrals on quasicircles."""

from ._qlab import (
    BoundaryMap,
    Curve,
    PlanarMap,
    QlabError,
    beurling_transform,
    bmo_norm,
    carleson_norm,
    cauchy_integral,
    cauchy_transform,
    chord_arc_constant,
    cutoff_global,
    extension_dilatation,
    hinf_profile,
    holder_exponent,
    plemelj_values,
    reflect_extend,
    run_scenario,
    scenario_defaults,
    solve_beltrami,
)

__all__ = [
    "BoundaryMap",
    "Curve",
    "PlanarMap",
    "QlabError",
    "beurling_transform",
    "bmo_norm",
    "carleson_norm",
    "cauchy_integral",
    "cauchy_transform",
    "chord_arc_constant",
    "cutoff_global",
    "extension_dilatation",
    "hinf_profile",
    "holder_exponent",
    "plemelj_values",
    "reflect_extend",
    "run_scenario",
    "scenario_defaults",
    "solve_beltrami",
]
