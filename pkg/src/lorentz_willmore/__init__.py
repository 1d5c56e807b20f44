"""Willmore surfaces and O(2,1) sigma-model solutions in Lorentz-Minkowski space."""
from .elastica import (ElasticaProfile, Family, HalfPlaneModel, ModelKind, ProfileCurve,
                       curvature_at, el_residual, generating_curve, generating_profile,
                       integrate_frenet)
from .elliptic import PoleError, complete_K, ellipj
from .kernels import BACKEND
from .minkowski import AxisKind, MVec3, lorentz_cross, lorentz_dot, rotation
from .surface import RotationalSurface, generate_surface, willmore_energy, willmore_residual

__version__ = "0.1.0"

__all__ = [
    "AxisKind", "BACKEND", "ElasticaProfile", "Family", "HalfPlaneModel", "MVec3", "ModelKind",
    "PoleError", "ProfileCurve", "RotationalSurface", "complete_K", "curvature_at", "el_residual",
    "ellipj", "generate_surface", "generating_curve", "generating_profile", "integrate_frenet",
    "lorentz_cross", "lorentz_dot", "rotation", "willmore_energy", "willmore_residual",
]
