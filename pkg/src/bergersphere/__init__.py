"""Geometry of Berger 3-spheres: frame algebra, the Hopf fibration, Hopf
tori, biharmonicity residuals and an exact certificate for biharmonic
Riemannian submersions."""
from .frame import (BergerParameter, ConnectionTable, CurvatureTable, FrameVector, StructureConstants, berger_geometry,
                    levi_civita, ricci, ricci_normal_data, riemann_tensor, structure_constants)
from .numerics import DEFAULTS, GridFunction, Tolerances, bisect, central_diff, rk4_integrate
from .polynomial import RationalPoly

__version__ = "0.1.0"
