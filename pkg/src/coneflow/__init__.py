"""Spacelike mean curvature flow inside a convex timelike cone.

Graphical solver over the cone's chart domain with a verification
harness for the flow's preserved quantities: envelope and hull bounds,
the scale-invariant gradient defect, the integral identity, interior
curvature bounds, boundary derivative identities, and convergence of
the renormalized surface to the expanding hyperbolic cap.
"""

__version__ = "0.1.0"

from .backend import USING_NUMBA, backend_name
from .chart import (Jet, NodeGeometry, gradient_function_v, hyperbolic_cap_area,
                    inverse_metric, metric, node_geometry, normal,
                    shape_operator, support_S)
from .cone import ConeSpec, conormal, convexity_check, sigma_A_nu_nu
from .config import RunConfig, parse_config
from .diagnostics import DiagnosticsRecord, audit, boundary_residuals, record
from .engine import (ParabolicityReport, StepControl, homothetic_height, rhs,
                     run, run_axisymmetric, stable_dt, step)
from .errors import (ConfigError, LightConeError, SpacelikeViolationError,
                     StiffnessError)
from .mesh import (Field, apply_neumann, area_graph, build_mesh, jet_at,
                   make_field)
from .minkowski import embed, minkowski_dot

__all__ = [
    "USING_NUMBA", "backend_name", "Jet", "NodeGeometry",
    "gradient_function_v", "hyperbolic_cap_area", "inverse_metric", "metric",
    "node_geometry", "normal", "shape_operator", "support_S", "ConeSpec",
    "conormal", "convexity_check", "sigma_A_nu_nu", "RunConfig",
    "parse_config", "DiagnosticsRecord", "audit", "boundary_residuals",
    "record", "ParabolicityReport", "StepControl", "homothetic_height",
    "rhs", "run", "run_axisymmetric", "stable_dt", "step", "ConfigError",
    "LightConeError", "SpacelikeViolationError", "StiffnessError", "Field",
    "apply_neumann", "area_graph", "build_mesh", "jet_at", "make_field",
    "embed", "minkowski_dot",
]
