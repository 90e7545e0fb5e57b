"""Scenario-driven closed-loop simulation, metrics and persistence.

A Scenario declares, per joint, the plant model, controller design point,
joint limits, saturation bounds, the reference (quintic endpoints, sine
parameters, or a taught-demonstration file) and an optional input
disturbance, plus the shared tick period, run duration, measurement-noise
amplitude and RNG seed. run_scenario executes each joint's loop
independently (the joints are decoupled SISO systems) and deterministically:
the same scenario always produces bit-identical results.

Per tick the runner samples the reference, clamps it to the joint limits,
reads the plant angle (plus optional uniform noise), runs the control law and
advances the plant by one RK4 step with the applied, saturated command.
"""
from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np

from . import plotting
from .gpi import (
    ControllerState,
    GpiDesign,
    SaturationLimits,
    compute_gains,
    control_step,
)
from .plant import DisturbanceSpec, PlantState, SecondOrderTf, step as plant_step
from .trajectory import (
    DEFAULT_DT,
    JointLimits,
    RefSample,
    clamp_to_limits,
    differentiate_teach,
    load_teach_csv,
    quintic_eval,
    quintic_fit,
    sine_ref,
)

SETTLE_BAND = 0.03


@dataclass(frozen=True)
class QuinticRef:
    """Rest-to-rest quintic from theta0 to thetaf over T seconds."""

    theta0: float
    thetaf: float
    T: float


@dataclass(frozen=True)
class SineRef:
    """Offset sine (A/2)sin(f*tick + k) + A/2 with per-tick frequency f."""

    A: float
    f: float
    k: float


@dataclass(frozen=True)
class TeachRef:
    """Replay of a recorded t,theta,theta_dot demonstration file."""

    file: str
    smooth: bool = False


ReferenceSpec = Union[QuinticRef, SineRef, TeachRef]


@dataclass(frozen=True)
class JointConfig:
    plant: SecondOrderTf
    design: GpiDesign
    limits: JointLimits
    saturation: SaturationLimits
    reference: ReferenceSpec
    disturbance: Optional[DisturbanceSpec] = None


@dataclass(frozen=True)
class Scenario:
    """Declarative description of one closed-loop experiment."""

    joints: Dict[str, JointConfig]
    dt: float = DEFAULT_DT
    duration: float = 10.0
    noise_amplitude: float = 0.0
    seed: int = 0
    name: str = ""

    def __post_init__(self):
        if not self.joints:
            raise ValueError("scenario needs at least one joint")
        if not (math.isfinite(self.dt) and self.dt > 0.0):
            raise ValueError(f"dt must be > 0, got {self.dt!r}")
        if not (math.isfinite(self.duration) and self.duration >= self.dt):
            raise ValueError(f"duration must be >= dt, got {self.duration!r}")
        if self.noise_amplitude < 0.0:
            raise ValueError(f"noise amplitude must be >= 0, got {self.noise_amplitude!r}")

    @property
    def n_samples(self) -> int:
        return math.ceil(self.duration / self.dt - 1e-9) + 1


@dataclass
class JointSeries:
    """Logged time series of one joint's loop."""

    t: np.ndarray
    theta_d: np.ndarray
    theta_meas: np.ndarray
    u: np.ndarray
    e: np.ndarray


@dataclass(frozen=True)
class Metrics:
    """Tracking-quality summary of one joint's run.

    steady_state_error is the mean |e| over the final 10 % of samples;
    settle_time is the time at which |e| enters the 0.03 rad band and stays
    inside until the end (math.inf when that never happens).
    """

    mse: float
    rmse: float
    max_abs_error: float
    steady_state_error: float
    settle_time: float


@dataclass
class SimResult:
    scenario: Scenario
    series: Dict[str, JointSeries]
    metrics: Dict[str, Metrics]


def build_reference(ref: ReferenceSpec, dt: float, n: int) -> List[RefSample]:
    """Sample a reference spec at ticks 0..n-1.

    Taught demonstrations shorter than the run are held at their final angle
    with zero velocity and acceleration.
    """
    if isinstance(ref, QuinticRef):
        coeffs = quintic_fit(ref.theta0, ref.thetaf, ref.T)
        return [quintic_eval(coeffs, i * dt) for i in range(n)]
    if isinstance(ref, SineRef):
        return [sine_ref(ref.A, ref.f, ref.k, i, dt) for i in range(n)]
    if isinstance(ref, TeachRef):
        taught = load_teach_csv(ref.file)
        samples = differentiate_teach(taught, dt, smooth=ref.smooth)
        if len(samples) > n:
            return samples[:n]
        hold = samples[-1].theta_d
        for i in range(len(samples), n):
            samples.append(RefSample(theta_d=hold, theta_dot_d=0.0, theta_ddot_d=0.0, t=i * dt))
        return samples
    raise TypeError(f"unknown reference spec {type(ref).__name__}")


def run_scenario(s: Scenario) -> SimResult:
    """Simulate every joint loop of a scenario. Deterministic given the seed."""
    n = s.n_samples
    series: Dict[str, JointSeries] = {}
    for idx, (joint, cfg) in enumerate(s.joints.items()):
        refs = [clamp_to_limits(r, cfg.limits) for r in build_reference(cfg.reference, s.dt, n)]
        try:
            gains = compute_gains(cfg.design, cfg.plant)
        except ValueError as ex:
            raise ValueError(f"joint {joint}: {ex}") from ex

        rng = np.random.default_rng([s.seed, idx])
        if s.noise_amplitude > 0.0:
            noise = rng.uniform(-s.noise_amplitude, s.noise_amplitude, size=n)
        else:
            noise = np.zeros(n)

        t = np.arange(n) * s.dt
        theta_d = np.array([r.theta_d for r in refs])
        theta_meas = np.empty(n)
        u_log = np.empty(n)

        state = PlantState(theta=refs[0].theta_d, theta_dot=0.0, t=0.0)
        cs = ControllerState(theta_dot0=refs[0].theta_dot_d)
        dist = cfg.disturbance
        for i in range(n):
            meas = state.theta + noise[i]
            u, cs = control_step(cs, gains, cfg.plant, meas, refs[i], s.dt, cfg.saturation)
            theta_meas[i] = meas
            u_log[i] = u
            if i < n - 1:
                rho = 0.0
                if dist is not None and t[i] >= dist.onset - 1e-12:
                    rho = dist.magnitude
                state = plant_step(state, cfg.plant, u, rho, s.dt)

        series[joint] = JointSeries(
            t=t, theta_d=theta_d, theta_meas=theta_meas, u=u_log, e=theta_meas - theta_d
        )
    result = SimResult(scenario=s, series=series, metrics={})
    result.metrics = compute_metrics(result)
    return result


def _metrics_of(series: JointSeries) -> Metrics:
    e = series.e
    n = len(e)
    mse = float(np.mean(e * e))
    rmse = math.sqrt(mse)
    max_abs = float(np.max(np.abs(e)))
    window = max(1, math.ceil(0.1 * n))
    sse = float(np.mean(np.abs(e[-window:])))
    outside = np.where(np.abs(e) > SETTLE_BAND)[0]
    if len(outside) == 0:
        settle = 0.0
    elif outside[-1] == n - 1:
        settle = math.inf
    else:
        settle = float(series.t[outside[-1] + 1])
    return Metrics(
        mse=mse, rmse=rmse, max_abs_error=max_abs, steady_state_error=sse, settle_time=settle
    )


def compute_metrics(r: SimResult) -> Dict[str, Metrics]:
    """Per-joint tracking metrics of a finished run."""
    return {joint: _metrics_of(series) for joint, series in r.series.items()}


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    try:
        with open(tmp, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as ex:
        raise OSError(f"cannot write {path}: {ex}") from ex
    finally:
        if tmp.exists():
            tmp.unlink(missing_ok=True)


def export_csv(r: SimResult, out_dir) -> List[Path]:
    """Write one full-precision CSV per joint into out_dir; returns the paths.

    Files are written atomically (temp file, then rename) with LF line
    endings and float repr precision, so re-importing reproduces the series
    bit-exactly.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for joint, series in r.series.items():
        lines = ["t,theta_d,theta_meas,u,e"]
        for i in range(len(series.t)):
            lines.append(
                f"{float(series.t[i])!r},{float(series.theta_d[i])!r},"
                f"{float(series.theta_meas[i])!r},{float(series.u[i])!r},"
                f"{float(series.e[i])!r}"
            )
        path = out_dir / f"{joint}.csv"
        _atomic_write(path, "\n".join(lines) + "\n")
        written.append(path)
    return written


def load_series_csv(path) -> JointSeries:
    """Read back a CSV written by export_csv."""
    cols = {"t": [], "theta_d": [], "theta_meas": [], "u": [], "e": []}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        expected = list(cols)
        if reader.fieldnames != expected:
            raise ValueError(f"{path}: expected header {','.join(expected)}")
        for row in reader:
            for key in cols:
                cols[key].append(float(row[key]))
    return JointSeries(**{key: np.array(vals) for key, vals in cols.items()})


def export_plot(r: SimResult, path) -> Path:
    """Render the run as a stacked-panel SVG (one panel per joint)."""
    panels = [
        {
            "name": joint,
            "t": series.t,
            "theta_d": series.theta_d,
            "theta_meas": series.theta_meas,
            "u": series.u,
        }
        for joint, series in r.series.items()
    ]
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    _atomic_write(path, plotting.render_svg(panels))
    return path


def metrics_to_dict(metrics: Dict[str, Metrics]) -> dict:
    """JSON-friendly form of per-joint metrics (infinite settle time -> None)."""
    out = {}
    for joint, m in metrics.items():
        out[joint] = {
            "mse": m.mse,
            "rmse": m.rmse,
            "max_abs_error": m.max_abs_error,
            "steady_state_error": m.steady_state_error,
            "settle_time": None if math.isinf(m.settle_time) else m.settle_time,
        }
    return out


def _ref_to_dict(ref: ReferenceSpec) -> dict:
    if isinstance(ref, QuinticRef):
        return {"kind": "quintic", "theta0": ref.theta0, "thetaf": ref.thetaf, "T": ref.T}
    if isinstance(ref, SineRef):
        return {"kind": "sine", "A": ref.A, "f": ref.f, "k": ref.k}
    if isinstance(ref, TeachRef):
        return {"kind": "teach", "file": ref.file, "smooth": ref.smooth}
    raise TypeError(f"unknown reference spec {type(ref).__name__}")


def _ref_from_dict(d: dict, base_dir: Optional[Path]) -> ReferenceSpec:
    kind = d.get("kind")
    if kind == "quintic":
        return QuinticRef(theta0=float(d["theta0"]), thetaf=float(d["thetaf"]), T=float(d["T"]))
    if kind == "sine":
        return SineRef(A=float(d["A"]), f=float(d["f"]), k=float(d["k"]))
    if kind == "teach":
        file = Path(d["file"])
        if not file.is_absolute() and base_dir is not None:
            file = Path(base_dir) / file
        if not file.exists():
            raise ValueError(f"teach file not found: {file}")
        return TeachRef(file=str(file), smooth=bool(d.get("smooth", False)))
    raise ValueError(f"unknown reference kind {kind!r}")


def scenario_to_dict(s: Scenario) -> dict:
    joints = {}
    for joint, cfg in s.joints.items():
        entry = {
            "plant": {
                "gamma0": cfg.plant.gamma0,
                "gamma1": cfg.plant.gamma1,
                "gamma2": cfg.plant.gamma2,
            },
            "design": {"xi": cfg.design.xi, "wn": cfg.design.wn},
            "limits": {
                "theta_min": cfg.limits.theta_min,
                "theta_max": cfg.limits.theta_max,
            },
            "saturation": {"u_min": cfg.saturation.u_min, "u_max": cfg.saturation.u_max},
            "reference": _ref_to_dict(cfg.reference),
        }
        if cfg.disturbance is not None:
            entry["disturbance"] = {
                "magnitude": cfg.disturbance.magnitude,
                "onset": cfg.disturbance.onset,
            }
        joints[joint] = entry
    return {
        "name": s.name,
        "dt": s.dt,
        "duration": s.duration,
        "noise_amplitude": s.noise_amplitude,
        "seed": s.seed,
        "joints": joints,
    }


def scenario_from_dict(d: dict, base_dir=None) -> Scenario:
    """Build a Scenario from parsed JSON; teach files resolve against base_dir."""
    joints = {}
    for joint, entry in d["joints"].items():
        plant = entry["plant"]
        design = entry["design"]
        limits = entry["limits"]
        sat = entry["saturation"]
        disturbance = None
        if entry.get("disturbance") is not None:
            disturbance = DisturbanceSpec(
                magnitude=float(entry["disturbance"]["magnitude"]),
                onset=float(entry["disturbance"]["onset"]),
            )
        joints[joint] = JointConfig(
            plant=SecondOrderTf(
                gamma0=float(plant["gamma0"]),
                gamma1=float(plant["gamma1"]),
                gamma2=float(plant["gamma2"]),
            ),
            design=GpiDesign(xi=float(design["xi"]), wn=float(design["wn"])),
            limits=JointLimits(
                theta_min=float(limits["theta_min"]), theta_max=float(limits["theta_max"])
            ),
            saturation=SaturationLimits(u_min=float(sat["u_min"]), u_max=float(sat["u_max"])),
            reference=_ref_from_dict(entry["reference"], base_dir),
            disturbance=disturbance,
        )
    return Scenario(
        joints=joints,
        dt=float(d.get("dt", DEFAULT_DT)),
        duration=float(d["duration"]),
        noise_amplitude=float(d.get("noise_amplitude", 0.0)),
        seed=int(d.get("seed", 0)),
        name=str(d.get("name", "")),
    )


def load_scenario(path) -> Scenario:
    """Load a scenario JSON file; referenced files are checked for existence."""
    path = Path(path)
    with open(path) as fh:
        data = json.load(fh)
    return scenario_from_dict(data, base_dir=path.parent)


def save_scenario(s: Scenario, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    _atomic_write(path, json.dumps(scenario_to_dict(s), indent=2) + "\n")
    return path
