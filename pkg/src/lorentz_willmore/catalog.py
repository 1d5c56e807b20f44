"""Rotationally invariant solutions, one row per symmetry group and surface type."""
from __future__ import annotations

from dataclasses import dataclass

from .elastica import ElasticaProfile, Family, HalfPlaneModel, ModelKind
from .minkowski import AxisKind


@dataclass(frozen=True)
class CatalogRow:
    group: str
    axis: str
    orbits: str
    surface: str
    generating_curve: str
    model: ModelKind
    eps1: int

    @property
    def eps2(self) -> int:
        return HalfPlaneModel(self.model).det_sign * self.eps1

    @property
    def axis_kind(self) -> AxisKind:
        return AxisKind[self.group]

    def profile(self, C: float = 1.0, a0: float = 0.0, family: Family = Family.CN) -> ElasticaProfile:
        return ElasticaProfile(family, C, a0, self.eps1, self.eps2, HalfPlaneModel(self.model))

    def as_dict(self):
        return {
            "group": self.group,
            "axis": self.axis,
            "orbits": self.orbits,
            "surface": self.surface,
            "generating_curve": self.generating_curve,
            "model": self.model.value,
            "eps1": self.eps1,
            "eps2": self.eps2,
        }


CATALOG = (
    CatalogRow("A1", "Time-like", "Circles", "Riemannian",
               "Space-like free elastic curve in the anti de Sitter plane", ModelKind.ADS_A1, 1),
    CatalogRow("A1", "Time-like", "Circles", "Lorentzian",
               "Time-like free elastic curve in the anti de Sitter plane", ModelKind.ADS_A1, -1),
    CatalogRow("A2", "Space-like", "Hyperbolas", "Riemannian",
               "Space-like free elastic curve in the de Sitter plane", ModelKind.DESITTER_R, 1),
    CatalogRow("A2", "Space-like", "Hyperbolas", "Lorentzian",
               "Time-like free elastic curve in the de Sitter plane", ModelKind.DESITTER_R, -1),
    CatalogRow("A2", "Space-like", "Hyperbolas", "Lorentzian",
               "Free elastic curve in the hyperbolic plane", ModelKind.HYPERBOLIC_Q, 1),
    CatalogRow("A3", "Light-like", "Parabolas", "Riemannian",
               "Space-like free elastic curve in the anti de Sitter plane", ModelKind.ADS_A3, 1),
    CatalogRow("A3", "Light-like", "Parabolas", "Lorentzian",
               "Time-like free elastic curve in the anti de Sitter plane", ModelKind.ADS_A3, -1),
)


def catalog_table() -> list[dict]:
    return [row.as_dict() for row in CATALOG]
