"""Laplace spectrum of minimal hypersurfaces."""

import json as _json

from . import _core
from ._core import (
    BasePoint,
    GraphFunctionSpec,
    MinlapError,
    SurfaceSpec,
    bdgg,
    extrinsic_ball_volume,
    extrinsic_calculus,
    format_double,
    lambda1_curve,
    make_immersion,
    minimality_residual,
    omega,
    point_frame,
    scaled,
)

__version__ = _core.version()


def default_config():
    return _json.loads(_core.default_config())


def run(subcommand, config=None):
    """Run a subcommand; returns (exit_code, report dict, written files)."""
    code, report, files = _core.run(subcommand, _json.dumps(config or {}))
    return code, _json.loads(report), files
