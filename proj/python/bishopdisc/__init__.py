"""Pseudoholomorphic Bishop discs.

Structure and manifold descriptors are plain dicts in the same JSON layout the
CLI reads; they are serialized before crossing into the extension.
"""

import json

from . import _core
from ._core import (
    ConvergenceError,
    DiscFunction,
    DiscGrid,
    Error,
    attachment_ranks,
    boggess_pitts_point,
    cauchy_green,
    dbar,
    dzeta,
    q_matrix,
    schwarz,
)

__all__ = [
    "ConvergenceError",
    "DiscFunction",
    "DiscGrid",
    "Error",
    "attachment_ranks",
    "boggess_pitts_point",
    "cauchy_green",
    "dbar",
    "dzeta",
    "jholo_residual_sup",
    "phi_forward",
    "phi_inverse",
    "q_matrix",
    "run_scenario",
    "schwarz",
    "solve_bishop",
]


def _text(d):
    return d if isinstance(d, str) else json.dumps(d)


def phi_forward(disc, structure):
    return _core.phi_forward(disc, _text(structure))


def phi_inverse(disc, structure, tol=1e-10):
    return _core.phi_inverse(disc, _text(structure), tol)


def jholo_residual_sup(disc, structure):
    return _core.jholo_residual_sup(disc, _text(structure))


def solve_bishop(structure, manifold, w, c, grid):
    return _core.solve_bishop(_text(structure), _text(manifold), list(w), list(c), grid)


def run_scenario(config, jobs=1):
    """Runs a scenario dict and returns the report as a dict."""
    return json.loads(_core.run_scenario(_text(config), jobs))
