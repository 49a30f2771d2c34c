"""Fluctuation-induced forces on small particles: Casimir-Polder attraction to a
dielectric wall and blackbody friction, with Keldysh-algebra and Matsubara
cross-checks."""

__version__ = "0.1.0"

from .casimir_polder import HalfSpaceScene, cp_force, cp_force_isotropic, cp_sweep
from .friction import FrictionScene, friction_force, friction_oracle, friction_sweep
from .numerics import MatsubaraGrid, NumericsPolicy
from .response_models import Constant, Drude, Lorentz, LorentzOscillator, PolarizabilityModel, Vacuum
from .wick import RationalResponse, verify_wick

__all__ = [
    "__version__",
    "HalfSpaceScene",
    "cp_force",
    "cp_force_isotropic",
    "cp_sweep",
    "FrictionScene",
    "friction_force",
    "friction_oracle",
    "friction_sweep",
    "MatsubaraGrid",
    "NumericsPolicy",
    "Constant",
    "Drude",
    "Lorentz",
    "LorentzOscillator",
    "PolarizabilityModel",
    "Vacuum",
    "RationalResponse",
    "verify_wick",
]
