"""Default plants, designs, limits and the bundled experiment catalog.

The two joints are abbreviated throughout as "abad" (shoulder
abduction/adduction) and "fe" (flexion/extension). Plant coefficients are the
identified second-order models of the pneumatic actuation chain; design
points place the closed-loop double poles per joint.
"""
from __future__ import annotations

from importlib import resources

from .gpi import GpiDesign, SaturationLimits
from .plant import SecondOrderTf
from .trajectory import DEFAULT_DT, JointLimits

ABAD_PLANT = SecondOrderTf(gamma0=0.0005725, gamma1=0.05725, gamma2=0.044)
FE_PLANT = SecondOrderTf(gamma0=0.0003665, gamma1=0.213, gamma2=0.04079)

ABAD_DESIGN = GpiDesign(xi=0.9, wn=6.1)
FE_DESIGN = GpiDesign(xi=0.9, wn=10.25)

ABAD_LIMITS = JointLimits(theta_min=0.1745, theta_max=1.396)
FE_LIMITS = JointLimits(theta_min=0.1745, theta_max=0.5585)

DEFAULT_SATURATION = SaturationLimits(u_min=0.0, u_max=100.0)
VACUUM_SATURATION = SaturationLimits(u_min=-100.0, u_max=100.0)

# Reaching endpoints (theta_abad, theta_fe) in rad; every motion starts from
# the joint floor 0.1745 rad and follows a 10 s rest-to-rest quintic. A target
# below a joint's floor simply parks that joint at the floor.
REACH_ENDPOINTS = (
    (0.6981, 0.0),
    (1.0472, 0.0),
    (0.0, 0.3491),
    (0.0, 0.5585),
    (0.6981, 0.3491),
    (0.6981, 0.5585),
    (1.3963, 0.3491),
    (1.3963, 0.5585),
)

# Periodic references theta_d = (A/2) sin(f*tick + K) + A/2 on the abad joint.
SINE_PHASE = 300.0
SINE_CASES = (
    (1.0, 1.6e-3),
    (1.0, 2.6e-3),
    (1.0, 3.6e-3),
    (1.0, 4.3e-3),
    (3.0, 1.3e-3),
    (3.0, 2.6e-3),
)

__all__ = [
    "ABAD_PLANT", "FE_PLANT", "ABAD_DESIGN", "FE_DESIGN",
    "ABAD_LIMITS", "FE_LIMITS", "DEFAULT_SATURATION", "VACUUM_SATURATION",
    "DEFAULT_DT", "REACH_ENDPOINTS", "SINE_PHASE", "SINE_CASES",
    "scenario_dir", "bundled_scenarios",
]


def scenario_dir():
    """Filesystem path of the bundled scenario files."""
    return resources.files("shouldersim") / "scenarios"


def bundled_scenarios():
    """Sorted names of the bundled scenario JSON files (without extension)."""
    return sorted(p.name[:-5] for p in scenario_dir().iterdir() if p.name.endswith(".json"))
