"""Closed-loop simulation of a two-DoF pneumatically actuated shoulder joint.

The package models each joint as an identified second-order transfer function,
tracks references with a robust generalized proportional integral (GPI)
controller synthesized by pole placement, and ships a scenario-driven harness
with CSV/SVG export plus tools for trajectory generation, kinematics and
transfer-function identification.
"""
from .plant import DisturbanceSpec, PlantState, SecondOrderTf, dc_gain, poles, step, to_state_space
from .gpi import (
    ControllerState,
    GpiDesign,
    GpiGains,
    RationalTf,
    SaturationLimits,
    closed_loop_char_poly,
    closed_loop_poles_analysis,
    compensator_tf,
    compute_gains,
    control_step,
    feedforward,
    hurwitz_poly,
)
from .trajectory import (
    DEFAULT_DT,
    JointLimits,
    QuinticCoeffs,
    RefSample,
    TaughtTrajectory,
    clamp_to_limits,
    differentiate_teach,
    load_teach_csv,
    quintic_eval,
    quintic_fit,
    record_teach,
    save_teach_csv,
    sine_ref,
)
from .kinematics import (
    ArmLength,
    DhRow,
    ShoulderAngles,
    WristPosition,
    dh_matrix,
    forward,
    in_workspace,
    inverse,
    shoulder_dh_rows,
    shoulder_transform,
)
from .sysid import (
    DiscreteArx2,
    IoRecord,
    decimate_record,
    discretize,
    estimate_tf,
    fit_arx2,
    fit_percent,
    load_io_csv,
    multisine_profile,
    multistep_profile,
    simulate_record,
    to_continuous,
)
from .harness import (
    JointConfig,
    JointSeries,
    Metrics,
    QuinticRef,
    Scenario,
    SimResult,
    SineRef,
    TeachRef,
    build_reference,
    compute_metrics,
    export_csv,
    export_plot,
    load_scenario,
    load_series_csv,
    run_scenario,
    save_scenario,
)

__version__ = "0.1.0"
